"""Maximization algorithms, each returning a :class:`SolveReport`."""

from .frank_wolfe import nonconvex_fw, pga, shrunken_fw, stationarity_gap, submodular_fw, two_phase
from .greedy import coordinate_ascent, dg_meanfield, dr_double_greedy, submodular_double_greedy
from .onedim import Max1D, golden_section, maximize_1d
from .report import Certificate, IterRecord, SolveReport, SolverConfig

SOLVERS = {
    "submodular-fw": submodular_fw,
    "nonconvex-fw": nonconvex_fw,
    "pga": pga,
    "shrunken-fw": shrunken_fw,
    "two-phase": two_phase,
    "sub-dg": submodular_double_greedy,
    "dr-dg": dr_double_greedy,
    "coord-ascent": coordinate_ascent,
    "dg-meanfield-1/3": lambda obj, box=None, cfg=None: dg_meanfield(obj, box, cfg, "1/3"),
    "dg-meanfield-1/2": lambda obj, box=None, cfg=None: dg_meanfield(obj, box, cfg, "1/2"),
}

#: solvers that only accept a box
BOX_ONLY = {"sub-dg", "dr-dg", "coord-ascent", "dg-meanfield-1/3", "dg-meanfield-1/2"}

__all__ = [
    "BOX_ONLY",
    "Certificate",
    "IterRecord",
    "Max1D",
    "SOLVERS",
    "SolveReport",
    "SolverConfig",
    "coordinate_ascent",
    "dg_meanfield",
    "dr_double_greedy",
    "golden_section",
    "maximize_1d",
    "nonconvex_fw",
    "pga",
    "shrunken_fw",
    "stationarity_gap",
    "submodular_double_greedy",
    "submodular_fw",
    "two_phase",
]
