"""Certainty quantum search with arbitrary phases and start states, in the SU(2) picture.

The package covers the two-dimensional kernel and its closed-form spectrum
(:mod:`.kernel`), the phase matching condition (:mod:`.matching`), search
planning (:mod:`.planner`), brute-force oracles (:mod:`.oracle`) and a full
N-dimensional statevector simulator (:mod:`.ndim`).
"""

from ._backend import BACKEND
from .errors import (
    DegenerateKernel,
    DegenerateOverlap,
    DomainError,
    FileFormatError,
    NoMatchedPhase,
    NoSolution,
    NotCertain,
    NotMatched,
    OutOfSpan,
    SearchError,
)
from .kernel import (
    KernelSpectrum,
    build_g_eta,
    build_g_tau,
    build_kernel,
    build_kernel_product,
    eigen_decompose,
    kernel_angle_w,
    kernel_power_closed,
    kernel_power_iterative,
)
from .matching import (
    MatchingInputs,
    hoyer_phi,
    hoyer_point,
    iteration_function_f,
    matched_phi,
    matching_residual,
    special_case_f_equal_phases,
)
from .planner import (
    SearchPlan,
    adjust_phases,
    certainty_residual,
    closed_form_optimal,
    final_phase,
    iteration_count,
    minimal_iterations,
    optimal_iterations,
    plan_search,
)
from .su2 import InitialStateParams, PhasePair, SearchGeometry, mat2_apply, mat2_mul, wrap_angle

__version__ = "0.1.0"
