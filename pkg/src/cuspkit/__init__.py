"""cuspkit: cusped spaces, exact hyperbolicity constants, and budgeted
splitting detection for relatively hyperbolic groups with abelian
peripheral subgroups."""

from .presentations import (
    FinitePresentation, RelativeStructure, AbelianParabolic,
    structure_from_dict, load_structure, drop_virtually_cyclic,
    cayley_ball, normal_form_abelian, free_product_normal_form,
    validate_sensible, is_trivial,
)
from .horoball import (
    LatticeBase, neighbors, horoball_distance, horoball_geodesic,
    level_interpolate, sibling_point, avoid_ball_path_abelian,
    RegionError, PathInfeasible,
)
from .cusped_space import (
    CuspedSpace, HoroballSpace, BallGraph, ConstantsLedger,
    compute_constants, toy_constants, build_ball, distance,
    gromov_product, estimate_delta, thick_part_member, deep_pair_path,
    ray_cover_check, ResourceBudget,
)
from .bm_checker import (
    Verdict, star, ddagger, ddagger_monotone_check, find_violating_pair,
    check_connectivity,
)
from .splittings import (
    GraphOfGroups, TietzeBudget, SplitBudgets, tietze_enumerate,
    recognize_splitting_shape, edge_group_closure, is_nontrivial_splitting,
    recognize_peripheral, check_multi_ended, connectivity_decision,
    exists_finite_splitting, dunwoody_decomposition, grushko_decomposition,
)

__version__ = "0.1.0"
