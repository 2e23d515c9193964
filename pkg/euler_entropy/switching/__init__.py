"""T-switchings and the switching graph built from them."""

from euler_entropy.switching.moves import (
    TSwitchingChoice,
    apply_t_switching,
    count_t_switchings,
    enumerate_t_switchings,
    inverse_t_switching,
    switching_floor,
)
from euler_entropy.switching.theorem import (
    PathBound,
    Profile,
    Split,
    SwitchingBoundReport,
    SwitchingEdge,
    SwitchingInstance,
    TailReport,
    TailRow,
    admissible_splits,
    aggregate_floor_holds,
    build_switching_graph,
    check_conditions,
    check_switching_bound,
    colour_allowed,
    default_L,
    free_classes,
    inverse_switch_counts,
    path_bound,
    profile_of,
    tail_report,
    widest_split,
)

__all__ = [
    "PathBound",
    "Profile",
    "Split",
    "SwitchingBoundReport",
    "SwitchingEdge",
    "SwitchingInstance",
    "TSwitchingChoice",
    "TailReport",
    "TailRow",
    "admissible_splits",
    "aggregate_floor_holds",
    "apply_t_switching",
    "build_switching_graph",
    "check_conditions",
    "check_switching_bound",
    "colour_allowed",
    "count_t_switchings",
    "default_L",
    "enumerate_t_switchings",
    "free_classes",
    "inverse_switch_counts",
    "inverse_t_switching",
    "path_bound",
    "profile_of",
    "switching_floor",
    "tail_report",
    "widest_split",
]
