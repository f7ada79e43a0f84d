"""Finite principal bundles and their Frobenius adjunctions, verified
exhaustively at desk scale."""

from .finset import (
    FinSet,
    FinFn,
    IsoCertificate,
    SliceObject,
    coequalizer,
    is_bijection,
    is_surjection,
    product,
    pullback,
    pullback_adjunction,
)
from .algebra import (
    ActionObject,
    EquivariantMap,
    FinGroup,
    FinGroupoid,
    action_product,
    sigma,
    trivial_action,
    untwist_iso,
    validate_action,
    validate_group,
    validate_groupoid,
)
from .torsor import (
    Bundle,
    DescentDatum,
    TorsorWitness,
    division_map,
    enumerate_torsors,
    glue_descent_data,
    is_principal_bundle,
    trivial_torsor,
)
from .adjunction import (
    AdjunctionPresentation,
    adjunction_to_bundle,
    bundle_to_adjunction,
    check_frobenius,
    check_stably_frobenius,
    corollary_slice_criterion,
    evaluation,
    factor_to_slice,
    frobenius_canonical_map,
    slice_adjunction,
    slice_groupoid_equivalence,
    tensor,
    transpose_down,
    transpose_up,
)

__version__ = "0.1.0"
