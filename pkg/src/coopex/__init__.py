"""Cooperative data exchange: feasibility, exact solving, coding, secrecy.

A network of nodes, each holding a subset of k packets, cooperates over
broadcast links until every node has every packet.  This package decides
when a transmission schedule suffices, finds minimum-transmission
schedules (exactly for fully connected networks, exhaustively for tiny
general ones), realizes schedules as random linear network codes, and
turns the leftover entropy into provably secret keys.
"""

from .coding import (
    CodingScheme,
    SchemeGenerationError,
    generate_scheme,
    load_scheme,
    save_scheme,
    verify_recovery,
)
from .errors import (
    CoopexError,
    InfeasibleScheduleError,
    InvalidSchemeError,
    PropertyViolationError,
    SizeGuardError,
    ValidationError,
)
from .experiments import Campaign, run_campaign
from .feasibility import (
    FeasibilityResult,
    InfeasibilityWitness,
    TransmissionSchedule,
    build_gnc,
    check_rr_membership,
    is_feasible,
    load_schedule,
    save_schedule,
)
from .galois import DEFAULT_FIELD, GF2m, FieldMatrix, RowSpace, field_for_instance
from .ilp import (
    CoveringProblem,
    check_feasible,
    compute_potential_x,
    lp_gap_check,
    solve_ilp,
    solve_ilp_equality,
)
from .instance import (
    NetworkInstance,
    RandomModel,
    SetSequence,
    circulant_graph,
    complete_graph,
    cycle_graph,
    enumerate_sequences,
    line_graph,
    load_instance,
    random_instance,
    save_instance,
    torus_grid_graph,
)
from .lp import ExactLP, LpInfeasibleError, LpUnboundedError
from .secrecy import (
    KeyMap,
    SecrecySetup,
    extract_key,
    pk_capacity,
    post_recovery_private_capacity,
    reduced_instance,
    sk_capacity,
    verify_secrecy,
)
from .sfm import SetFunctionOracle, greedy_base_vertex, sfm_min, sfm_min_bruteforce
from .solver import (
    SolveReport,
    clique_estimate,
    lp_cutset,
    lp_dregular,
    regular_round_count,
    rounded_regular_schedule,
    solve_clique,
    solve_exhaustive,
    solve_t_divisible,
    solve_weighted_clique,
)

__version__ = "0.1.0"
