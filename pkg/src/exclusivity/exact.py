"""Exact arithmetic over the Gaussian rationals Q(i).

``fractions.Fraction`` covers the real line; complex amplitudes with rational
real and imaginary parts need a thin wrapper on top of it.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Sequence


@dataclass(frozen=True)
class GaussianRational:
    re: Fraction
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re", Fraction(self.re))
        object.__setattr__(self, "im", Fraction(self.im))

    @classmethod
    def coerce(cls, x) -> "GaussianRational":
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, Rational) and not isinstance(x, bool):
            return cls(Fraction(x))
        raise TypeError(f"not an exact rational: {x!r}")

    def __add__(self, other):
        other = GaussianRational.coerce(other)
        return GaussianRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other):
        return self + (-GaussianRational.coerce(other))

    def __rsub__(self, other):
        return GaussianRational.coerce(other) - self

    def __mul__(self, other):
        o = GaussianRational.coerce(other)
        return GaussianRational(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def abs_sq(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __eq__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        return f"({self.re}{'+' if self.im >= 0 else '-'}{abs(self.im)}i)"


def is_exact_scalar(x) -> bool:
    return isinstance(x, GaussianRational) or (isinstance(x, Rational) and not isinstance(x, bool))


def is_exact_vector(v: Sequence) -> bool:
    return all(is_exact_scalar(x) for x in v)


def as_exact_vector(v: Sequence) -> tuple[GaussianRational, ...]:
    return tuple(GaussianRational.coerce(x) for x in v)


def inner(a: Sequence[GaussianRational], b: Sequence[GaussianRational]) -> GaussianRational:
    """<a|b> = sum conj(a_k) b_k."""
    if len(a) != len(b):
        raise ValueError(f"dimension mismatch: {len(a)} vs {len(b)}")
    total = GaussianRational(Fraction(0))
    for x, y in zip(a, b):
        total = total + x.conjugate() * y
    return total


def norm_sq(a: Sequence[GaussianRational]) -> Fraction:
    return sum((x.abs_sq() for x in a), Fraction(0))


def format_fraction(x: Fraction) -> str:
    """'p/q' for non-integers, 'p' otherwise."""
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_fraction(text) -> Fraction:
    if isinstance(text, bool):
        raise ValueError(f"not a rational: {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, str):
        return Fraction(text.strip())
    raise ValueError(f"not a rational: {text!r}")
