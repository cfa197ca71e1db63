"""Instance generators, file formats and the command-line interface."""

from .generators import (
    PATHOLOGY_POINT,
    gen_bipartite_influence,
    gen_pathology,
    gen_revenue,
    gen_softmax,
    gen_sqp,
)
from .io import InstanceSpec, RunReport, load_graph, read_trajectory_csv, write_trajectory_csv

__all__ = [
    "InstanceSpec",
    "PATHOLOGY_POINT",
    "RunReport",
    "gen_bipartite_influence",
    "gen_pathology",
    "gen_revenue",
    "gen_softmax",
    "gen_sqp",
    "load_graph",
    "read_trajectory_csv",
    "write_trajectory_csv",
]
