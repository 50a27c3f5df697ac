"""Bundled regression inputs: the ten-vertex graph, its ququart realization,
and preparation setups for each of the ten target states."""
from __future__ import annotations

from importlib.resources import as_file, files

from .graph import ExclusivityGraph
from .photonics import OpticalElement, SetupDescriptor, load_setups
from .realization import ProjectorFamily, StateVector, load_realization

DATA = files(__package__) / "data"


def path(name: str):
    """Filesystem path of a bundled data file."""
    with as_file(DATA / name) as p:
        return p


def ten_vertex_graph() -> ExclusivityGraph:
    return ExclusivityGraph.load(path("ten_vertex_graph.json"))


def ten_vertex_realization() -> tuple[StateVector, ProjectorFamily]:
    return load_realization(path("ten_vertex_realization.json"))


def target_setups() -> dict[int, SetupDescriptor]:
    return load_setups(path("setups.json"))


def input_state_setup() -> SetupDescriptor:
    """Prepares (0,0,0,1) = |V,-2>: QWP makes |R>, transferrer, HWP turns H into V."""
    return SetupDescriptor(
        (OpticalElement("qwp", deg=45.0), OpticalElement("transfer_pi_to_o2"),
         OpticalElement("hwp", deg=45.0)),
        "H", 0, label="a: input state (0,0,0,1)")
