"""Single-photon polarization x OAM simulator for ququart preparation and analysis.

Conventions (used everywhere in the package):

* polarization basis (H, V); circular states
  |R> = (|H> - i|V>)/sqrt2,  |L> = (|H> + i|V>)/sqrt2
* wave plate with fast axis at angle t and retardance g:
  R(t) diag(1, e^{ig}) R(-t); with this choice a QWP at 45 deg turns |H>
  into |R> (up to global phase)
* q-plate: |L, m> -> |R, m + 2q>,  |R, m> -> |L, m - 2q>
* logical ququart order: |H,+2>, |H,-2>, |V,+2>, |V,-2>

Global phases are never compared; equality means overlap^2 = 1.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

SQRT2 = math.sqrt(2.0)
DEFAULT_REGISTER = (-2, 0, 2)
EXTENDED_REGISTER = (-4, -2, 0, 2, 4)
LEAK_TOL = 1e-12

POLARIZATIONS = {
    "H": np.array([1, 0], dtype=complex),
    "V": np.array([0, 1], dtype=complex),
    "D": np.array([1, 1], dtype=complex) / SQRT2,
    "A": np.array([1, -1], dtype=complex) / SQRT2,
    "R": np.array([1, -1j], dtype=complex) / SQRT2,
    "L": np.array([1, 1j], dtype=complex) / SQRT2,
}

LOGICAL_BASIS = (("H", 2), ("H", -2), ("V", 2), ("V", -2))


class OAMRegisterError(ValueError):
    """Amplitude would leave the declared OAM register."""


class EmptyPortError(ValueError):
    """Postselection onto a port that carries no amplitude."""


class IncompleteTransferError(ValueError):
    pass


@dataclass(frozen=True)
class PhotonState:
    """Amplitudes indexed [polarization (H=0, V=1), OAM register slot]."""

    amplitudes: np.ndarray
    register: tuple[int, ...] = DEFAULT_REGISTER
    postselection_probability: float = 1.0

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.shape != (2, len(self.register)):
            raise ValueError(f"amplitudes: expected shape (2, {len(self.register)}), got {amps.shape}")
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def basis(cls, pol: str | Sequence[complex], oam: int,
              register: tuple[int, ...] = DEFAULT_REGISTER) -> "PhotonState":
        if oam not in register:
            raise OAMRegisterError(f"oam {oam} not in register {register}")
        vec = POLARIZATIONS[pol] if isinstance(pol, str) else np.asarray(pol, dtype=complex)
        vec = vec / np.linalg.norm(vec)
        amps = np.zeros((2, len(register)), dtype=complex)
        amps[:, register.index(oam)] = vec
        return cls(amps, register)

    def norm_sq(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2))

    def amplitude(self, pol: str, oam: int) -> complex:
        return complex(POLARIZATIONS[pol].conj() @ self.amplitudes[:, self.register.index(oam)])

    def oam_weight(self, oam: int) -> float:
        if oam not in self.register:
            return 0.0
        return float(np.sum(np.abs(self.amplitudes[:, self.register.index(oam)]) ** 2))

    def with_register(self, register: tuple[int, ...]) -> "PhotonState":
        amps = np.zeros((2, len(register)), dtype=complex)
        for k, m in enumerate(self.register):
            if m in register:
                amps[:, register.index(m)] = self.amplitudes[:, k]
            elif np.any(np.abs(self.amplitudes[:, k]) > LEAK_TOL):
                raise OAMRegisterError(f"nonzero amplitude at m={m} outside {register}")
        return PhotonState(amps, register, self.postselection_probability)

    def overlap_sq(self, other: "PhotonState") -> float:
        a = self.with_register(tuple(sorted(set(self.register) | set(other.register))))
        b = other.with_register(a.register)
        num = abs(np.vdot(b.amplitudes, a.amplitudes)) ** 2
        return float(num / (a.norm_sq() * b.norm_sq()))

    def ququart(self) -> np.ndarray:
        """Amplitudes in the logical basis; raises if any m=0 (or other) weight remains."""
        for m in self.register:
            if m not in (2, -2) and self.oam_weight(m) > LEAK_TOL:
                raise IncompleteTransferError(f"residual weight {self.oam_weight(m):.3e} at m={m}")
        return np.array([self.amplitudes[0 if p == "H" else 1, self.register.index(m)]
                         for p, m in LOGICAL_BASIS])

    @classmethod
    def from_ququart(cls, a: Sequence[complex], register: tuple[int, ...] = DEFAULT_REGISTER) -> "PhotonState":
        a = np.asarray(a, dtype=complex)
        a = a / np.linalg.norm(a)
        amps = np.zeros((2, len(register)), dtype=complex)
        for val, (p, m) in zip(a, LOGICAL_BASIS):
            amps[0 if p == "H" else 1, register.index(m)] = val
        return cls(amps, register)


def _rotation(theta: float) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]])


def retarder(retardance: float, angle_deg: float) -> np.ndarray:
    t = math.radians(angle_deg)
    return _rotation(t) @ np.diag([1.0, np.exp(1j * retardance)]) @ _rotation(-t)


def waveplate_matrix(kind: str, angle_deg: float) -> np.ndarray:
    if kind in ("half", "hwp"):
        return retarder(math.pi, angle_deg)
    if kind in ("quarter", "qwp"):
        return retarder(math.pi / 2, angle_deg)
    raise ValueError(f"unknown wave plate kind {kind!r}")


def apply_polarization_unitary(s: PhotonState, U: np.ndarray) -> PhotonState:
    return PhotonState(U @ s.amplitudes, s.register, s.postselection_probability)


def apply_waveplate(s: PhotonState, kind: str, angle_deg: float) -> PhotonState:
    """Retarder acting identically on every OAM component."""
    return apply_polarization_unitary(s, waveplate_matrix(kind, angle_deg))


def apply_qplate(s: PhotonState, q: float = 1) -> PhotonState:
    shift = 2 * q
    if shift != int(shift):
        raise ValueError(f"q must be a half-integer, got {q}")
    shift = int(shift)
    R, L = POLARIZATIONS["R"], POLARIZATIONS["L"]
    out = np.zeros_like(s.amplitudes)
    for k, m in enumerate(s.register):
        col = s.amplitudes[:, k]
        c_r, c_l = np.vdot(R, col), np.vdot(L, col)
        for coeff, target_m, target_pol in ((c_l, m + shift, R), (c_r, m - shift, L)):
            if abs(coeff) <= LEAK_TOL:
                continue
            if target_m not in s.register:
                raise OAMRegisterError(f"q-plate maps m={m} to m={target_m}, outside {s.register}")
            out[:, s.register.index(target_m)] += coeff * target_pol
    return PhotonState(out, s.register, s.postselection_probability)


def _postselect(s: PhotonState, projector_pol: np.ndarray, label: str) -> PhotonState:
    p = projector_pol / np.linalg.norm(projector_pol)
    P = np.outer(p, p.conj())
    amps = P @ s.amplitudes
    weight = float(np.sum(np.abs(amps) ** 2)) / s.norm_sq()
    if weight <= 1e-15:
        raise EmptyPortError(f"{label}: no amplitude in the selected port")
    amps = amps / math.sqrt(float(np.sum(np.abs(amps) ** 2)))
    return PhotonState(amps, s.register, s.postselection_probability * weight)


def apply_pbs(s: PhotonState, port: str = "transmit_H") -> PhotonState:
    """Keep the chosen PBS output, renormalize and record its weight."""
    if port in ("transmit_H", "H"):
        return _postselect(s, POLARIZATIONS["H"], "PBS transmit_H")
    if port in ("reflect_V", "V"):
        return _postselect(s, POLARIZATIONS["V"], "PBS reflect_V")
    raise ValueError(f"unknown PBS port {port!r}")


def apply_polarizer(s: PhotonState, angle_deg: float) -> PhotonState:
    t = math.radians(angle_deg)
    return _postselect(s, np.array([math.cos(t), math.sin(t)], dtype=complex), f"polarizer {angle_deg}")


def transfer_pi_to_o2(s: PhotonState) -> PhotonState:
    """q-plate (q=1) followed by the PBS transmitted port.

    A polarization qubit a|R> + b|L> at m=0 becomes (a|-2> + b|+2>)|H>,
    with postselection probability 1/2.
    """
    return apply_pbs(apply_qplate(s, 1), "transmit_H")


def transfer_o2_to_pi(s: PhotonState) -> PhotonState:
    """Ideal deterministic transferrer: (c+|+2> + c-|-2>)|p> -> (c+|H> + c-|V>)|0>.

    The input must be a product of a polarization state and an o2 qubit.
    """
    for m in s.register:
        if m not in (2, -2) and s.oam_weight(m) > LEAK_TOL:
            raise IncompleteTransferError(f"o2->pi transferrer needs OAM in {{+2,-2}}, found m={m}")
    if 0 not in s.register:
        raise OAMRegisterError("register has no m=0 slot")
    block = s.amplitudes[:, [s.register.index(2), s.register.index(-2)]]
    u, sv, vh = np.linalg.svd(block)
    if sv[1] > 1e-9 * max(sv[0], 1e-300):
        raise ValueError("o2->pi transferrer needs a polarization/OAM product state")
    oam_qubit = u[:, 0].conj() @ block  # (c+, c-) with the polarization factor removed
    amps = np.zeros_like(s.amplitudes)
    amps[:, s.register.index(0)] = oam_qubit / np.linalg.norm(oam_qubit)
    return PhotonState(amps, s.register, s.postselection_probability)


def single_mode_fiber(s: PhotonState) -> PhotonState:
    """Couple only the m=0 mode (postselecting)."""
    k = s.register.index(0)
    amps = np.zeros_like(s.amplitudes)
    amps[:, k] = s.amplitudes[:, k]
    weight = float(np.sum(np.abs(amps) ** 2)) / s.norm_sq()
    if weight <= 1e-15:
        raise EmptyPortError("single-mode fiber: no m=0 amplitude")
    return PhotonState(amps / math.sqrt(weight * s.norm_sq()), s.register,
                       s.postselection_probability * weight)


# -- setups ---------------------------------------------------------------

ELEMENT_KINDS = ("hwp", "qwp", "qplate", "pbs", "transfer_pi_to_o2", "transfer_o2_to_pi",
                 "polarizer", "smf")


@dataclass(frozen=True)
class OpticalElement:
    kind: str
    deg: float | None = None
    q: float | None = None
    port: str | None = None

    def __post_init__(self):
        if self.kind not in ELEMENT_KINDS:
            raise ValueError(f"kind: unknown element {self.kind!r}")
        if self.kind in ("hwp", "qwp", "polarizer") and self.deg is None:
            raise ValueError(f"{self.kind}: missing 'deg'")
        if self.kind == "qplate" and self.q is None:
            object.__setattr__(self, "q", 1)
        if self.kind == "pbs" and self.port is None:
            object.__setattr__(self, "port", "transmit_H")

    def apply(self, s: PhotonState) -> PhotonState:
        if self.kind in ("hwp", "qwp"):
            return apply_waveplate(s, self.kind, self.deg)
        if self.kind == "qplate":
            return apply_qplate(s, self.q)
        if self.kind == "pbs":
            return apply_pbs(s, self.port)
        if self.kind == "polarizer":
            return apply_polarizer(s, self.deg)
        if self.kind == "transfer_pi_to_o2":
            return transfer_pi_to_o2(s)
        if self.kind == "transfer_o2_to_pi":
            return transfer_o2_to_pi(s)
        return single_mode_fiber(s)

    @property
    def is_unitary(self) -> bool:
        return self.kind in ("hwp", "qwp", "qplate")

    def to_dict(self) -> dict:
        d = {"kind": self.kind}
        if self.deg is not None:
            d["deg"] = self.deg
        if self.kind == "qplate":
            d["q"] = self.q
        if self.kind == "pbs":
            d["port"] = self.port
        return d

    @classmethod
    def from_dict(cls, d: Mapping) -> "OpticalElement":
        if not isinstance(d, Mapping) or "kind" not in d:
            raise ValueError("element: expected an object with a 'kind' field")
        unknown = set(d) - {"kind", "deg", "q", "port"}
        if unknown:
            raise ValueError(f"element: unknown fields {sorted(unknown)}")
        return cls(d["kind"], d.get("deg"), d.get("q"), d.get("port"))


@dataclass(frozen=True)
class SetupDescriptor:
    elements: tuple[OpticalElement, ...] = ()
    input_pol: str = "H"
    input_oam: int = 0
    register: tuple[int, ...] = DEFAULT_REGISTER
    label: str = ""

    def run(self) -> PhotonState:
        s = PhotonState.basis(self.input_pol, self.input_oam, self.register)
        for el in self.elements:
            s = el.apply(s)
        return s

    def to_dict(self) -> dict:
        d = {"input": {"pol": self.input_pol, "oam": self.input_oam},
             "elements": [e.to_dict() for e in self.elements]}
        if self.label:
            d["label"] = self.label
        return d

    @classmethod
    def from_dict(cls, d: Mapping) -> "SetupDescriptor":
        inp = d.get("input", {"pol": "H", "oam": 0})
        if inp.get("pol") not in POLARIZATIONS:
            raise ValueError(f"input.pol: expected one of {sorted(POLARIZATIONS)}")
        return cls(tuple(OpticalElement.from_dict(e) for e in d.get("elements", [])),
                   inp["pol"], int(inp.get("oam", 0)), label=d.get("label", ""))


def prepare_state(setup: SetupDescriptor) -> tuple[np.ndarray, float]:
    """Run ``setup`` and return (ququart amplitudes, success probability)."""
    s = setup.run()
    return s.ququart(), s.postselection_probability


def analyze_projection(state: Sequence[complex], analyzer: Sequence[complex]) -> float:
    """|<analyzer|state>|^2 after normalizing both."""
    a = np.asarray(analyzer, dtype=complex)
    s = np.asarray(state, dtype=complex)
    na, ns = np.linalg.norm(a), np.linalg.norm(s)
    if na == 0:
        raise ValueError("analyzer: zero vector")
    if ns == 0:
        raise ValueError("state: zero vector")
    return float(abs(np.vdot(a, s)) ** 2 / (na * na * ns * ns))


# -- physical analyzers ---------------------------------------------------

def _unitary_to_h(p: np.ndarray) -> np.ndarray:
    # maps polarization p to |H> (up to phase)
    p = p / np.linalg.norm(p)
    perp = np.array([-p[1].conjugate(), p[0].conjugate()])
    return np.vstack([p.conj(), perp.conj()])


def _schmidt(target: np.ndarray):
    block = np.array([[target[0], target[1]], [target[2], target[3]]])  # [pol, (+2, -2)]
    return np.linalg.svd(block / np.linalg.norm(block))


def is_separable(target: Sequence[complex], tol: float = 1e-9) -> bool:
    _, sv, _ = _schmidt(np.asarray(target, dtype=complex))
    return bool(sv[1] <= tol)


def physical_analysis(state: Sequence[complex], target: Sequence[complex]) -> float:
    """Detection probability of the analysis setup built for ``target``.

    Separable targets p (x) o: polarization optics and a PBS select p, the
    deterministic transferrer moves o into polarization, a second polarization
    analysis selects o. Entangled targets: polarization optics bring the
    target to a|R,+2> + b|L,-2>, a q-plate maps that to m=0, a single-mode
    fiber keeps m=0, and a final polarization analysis selects the pattern.
    The product of postselection weights is returned.
    """
    target = np.asarray(target, dtype=complex)
    target = target / np.linalg.norm(target)
    u, sv, vh = _schmidt(target)
    s = PhotonState.from_ququart(state, EXTENDED_REGISTER)
    if sv[1] <= 1e-9:
        pol, oam = u[:, 0], vh[0]
        s = apply_pbs(apply_polarization_unitary(s, _unitary_to_h(pol)), "transmit_H")
        s = transfer_o2_to_pi(s)
        # o2 qubit (c+, c-) now sits in polarization as c+|H> + c-|V>
        s = apply_pbs(apply_polarization_unitary(s, _unitary_to_h(oam)), "transmit_H")
        return s.postselection_probability
    # send the polarization partner of +2 to R and that of -2 to L
    block = np.array([[target[0], target[1]], [target[2], target[3]]])
    p_plus, p_minus = block[:, 0], block[:, 1]
    a_plus, a_minus = np.linalg.norm(p_plus), np.linalg.norm(p_minus)
    if a_plus < 1e-12 or a_minus < 1e-12 or abs(np.vdot(p_plus, p_minus)) > 1e-9 * a_plus * a_minus:
        raise ValueError("entangled analyzer needs orthogonal polarization partners for +2 and -2")
    R, L = POLARIZATIONS["R"], POLARIZATIONS["L"]
    U = np.outer(R, (p_plus / a_plus).conj()) + np.outer(L, (p_minus / a_minus).conj())
    s = apply_polarization_unitary(s, U)
    s = single_mode_fiber(apply_qplate(s, 1))
    # target -> a_plus|R,+2> + a_minus|L,-2> -> a_plus|L,0> + a_minus|R,0>
    final = a_plus * L + a_minus * R
    s = apply_pbs(apply_polarization_unitary(s, _unitary_to_h(final)), "transmit_H")
    return s.postselection_probability


# -- fixtures --------------------------------------------------------------

def load_setups(path: str | Path) -> dict[int, SetupDescriptor]:
    data = json.loads(Path(path).read_text())
    return {int(k): SetupDescriptor.from_dict(v) for k, v in data["setups"].items()}
