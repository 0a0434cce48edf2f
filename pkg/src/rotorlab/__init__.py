"""Round-robin (rotor-router) token dynamics: simulation, circulations and mixing checks."""

from .circulation import (
    BipartiteGraphError,
    Circulation,
    CirculationError,
    DeltaTable,
    Labeling,
    ShiftModulusError,
    Walk,
    cycle_graphs,
    delta_table,
    extract_circulation,
    gphi_diameter,
    intersection_set,
    make_labeling,
    reconstruct_walk,
    shift_labeling,
)
from .engine import LoadTrace, RRState, arc_load_at, init_state, run_until_recurrent, step
from .graph import Graph, generate, graph_diameter, load_graph
from .metrics import (
    cumulated_discrepancy,
    cumulated_load,
    empirical_delta,
    idleness,
    random_walk_baseline,
    time_average_deviation,
)

__version__ = "0.1.0"

__all__ = [
    "BipartiteGraphError",
    "Circulation",
    "CirculationError",
    "DeltaTable",
    "Graph",
    "Labeling",
    "LoadTrace",
    "RRState",
    "ShiftModulusError",
    "Walk",
    "arc_load_at",
    "cumulated_discrepancy",
    "cumulated_load",
    "cycle_graphs",
    "delta_table",
    "empirical_delta",
    "extract_circulation",
    "generate",
    "gphi_diameter",
    "graph_diameter",
    "idleness",
    "init_state",
    "intersection_set",
    "load_graph",
    "make_labeling",
    "random_walk_baseline",
    "reconstruct_walk",
    "run_until_recurrent",
    "shift_labeling",
    "step",
    "time_average_deviation",
]
