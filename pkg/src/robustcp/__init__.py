"""Design and simulation of robust composite pi-pulse NOT gates.

Typical use::

    from robustcp import DesignProblem, SingleLine, solve, evaluate_grid

    sol = solve(DesignProblem(5, SingleLine(0.0)))
    grid = evaluate_grid(sol.sequence)
"""

__version__ = "0.1.0"

from .coefficients import CoefficientSet, ck_not, ck_not_jacobian, enumerate_paths, expand_coefficients
from .landscape import (
    ContourSet,
    FidelityGrid,
    GridSpec,
    evaluate_grid,
    extract_contours,
    reference_lines,
    robustness_score,
)
from .pulsefile import PulseFile
from .solver import (
    AllDirections,
    DesignProblem,
    DesignSolution,
    SingleLine,
    SolverConfig,
    TwoLines,
    UnsupportedModeError,
    residual_all_directions,
    residual_single_line,
    residual_two_lines,
    solve,
)
from .su2 import (
    InhomogeneityPoint,
    PulseSequence,
    composite_propagator,
    fidelity_not,
    map_inhomogeneity,
    single_propagator,
)
from .target import TargetPolynomial, eval_q_m, q_m_coefficients

__all__ = [
    "AllDirections",
    "CoefficientSet",
    "ContourSet",
    "DesignProblem",
    "DesignSolution",
    "FidelityGrid",
    "GridSpec",
    "InhomogeneityPoint",
    "PulseFile",
    "PulseSequence",
    "SingleLine",
    "SolverConfig",
    "TargetPolynomial",
    "TwoLines",
    "UnsupportedModeError",
    "ck_not",
    "ck_not_jacobian",
    "composite_propagator",
    "enumerate_paths",
    "eval_q_m",
    "evaluate_grid",
    "expand_coefficients",
    "extract_contours",
    "fidelity_not",
    "map_inhomogeneity",
    "q_m_coefficients",
    "reference_lines",
    "residual_all_directions",
    "residual_single_line",
    "residual_two_lines",
    "robustness_score",
    "single_propagator",
    "solve",
]
