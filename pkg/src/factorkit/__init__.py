"""factorkit: exact, asymptotic and Monte Carlo computations for
factorisations of the complete graph into spanning regular factors."""

from .asymptotics import (
    CaseReport,
    DegreeSpec,
    check_case,
    disjoint_prob_asym,
    error_scale,
    join_prob_asym,
    mcleod_f_asym,
    multi_disjoint_prob_asym,
    r_prime,
    r_regular_asym,
)
from .errors import FactorkitError, InvalidInputError, RegimeRefusedError
from .exact import (
    CountResult,
    count_factorisations,
    count_matching_sequences,
    count_regular_graphs_exact,
    count_regular_spanning_subgraphs,
)
from .graphs import LabelledGraph, Permutation, common_edges, complement, has_common_p2, merge_disjoint, relabel
from .numeric import LogReal, SummationInput, log_factorial, log_multinomial, sum_bounds
from .sampling import (
    Estimate,
    estimate_disjoint_prob,
    estimate_multi_disjoint,
    estimate_overlap_tail,
    expected_common_p2,
    random_regular,
)
from .switching import (
    Overlay,
    SwitchMove,
    exact_L,
    exact_T,
    forward_switchings,
    ratio_predicted,
    reverse_switchings,
    t_over_l0_predicted,
    threshold_M,
)

__version__ = "0.1.0"
