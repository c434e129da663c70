"""Fair division of indivisible chores from ordinal preferences.

Exact maximin-share computation, picking-sequence allocation algorithms,
strategyproof mechanisms, and the verification harnesses that certify
their guarantees at desk scale.
"""

from .exceptions import (
    BudgetExceededError,
    ChorefairError,
    InfeasibleAllocationError,
    InstanceTooLargeError,
    InvalidInstanceError,
    UnknownAlgorithmError,
)
from .ido import lift_allocation, run_ordinal, to_ido
from .mechanisms import (
    Infeasible,
    PickSchedule,
    RandomOutcome,
    consecutive_pick,
    constant_ratio_capacity,
    constant_ratio_schedule,
    decline_set_size,
    decline_sets,
    default_schedule,
    log_schedule,
    log_schedule_detail,
    random_decline,
    random_decline_expected_cost,
)
from .mms import (
    INFINITE_RATIO,
    MmsValues,
    RatioReport,
    lower_bounds,
    min_makespan,
    mms_all,
    mms_exact,
    ratio_of,
)
from .model import (
    Allocation,
    IdoInstance,
    Instance,
    OrdinalProfile,
    bundle_cost,
    ordinal_of,
    validate_instance,
)
from .sequences import (
    Pattern,
    PickingSequence,
    allocate_by_sequence,
    expand,
    round_robin_pattern,
    sesqui_pattern,
)
from .verify import (
    Certificate,
    Manipulation,
    certify_lower_bound_n2,
    certify_lower_bound_n3,
    descending_pair_bound_holds,
    manipulation_search,
    picking_outcome,
    worst_ratio_search,
)

__version__ = "0.1.0"
