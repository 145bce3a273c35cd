"""Exact computation of monotone sets, polars and flatness in Hadamard spaces."""

from .dual import ZERO, DualElement, Term, bracket, coupling, equiv_on_witnesses, evaluate, norm_lower_bound, norm_single, reduce_euclidean
from .flatness import (
    FlSample,
    check_fl_base_independence,
    check_fl_property,
    check_flat_identity,
    check_pi_convexity,
    flat_violation_to_fl,
    test_flatness,
)
from .monotone import (
    ContractError,
    Pair,
    PairSet,
    SizeLimitError,
    check_slice_convex,
    enumerate_maximal_extensions,
    extend_maximal,
    is_maximal_in,
    is_monotone,
    mu_closure,
    mu_related,
    mu_related_to_set,
    mu_value,
    polar,
    slice_duals,
)
from .quasilin import BoundVector, check_cauchy_schwarz, qlin
from .rational import ValidationError, as_rational
from .report import CheckReport
from .spaces import Euclidean, EuclidPoint, SpokePoint, SpokeTree, check_cn, dist, dist_sq, euclid_point, geodesic_point, tree_point
from .varfun import Add, Const, Coupling, I_f, Membership, SqDist, eval_objective, mf_membership, mf_translate_check, monotonicity_of_mf, prox_step

__version__ = "0.1.0"
