"""Exact computations with first- and second-order G-structures at a point.

Jet-group arithmetic, prolongations of matrix Lie algebras, the metric =
conformal class + volume factorisation, and Levi-Civita / projective /
equiaffine / Weyl connection operations on polynomial charts.
"""

from .connections import (
    PolyConnectionField,
    PolyMetricField,
    PolyVolumeField,
    connection_transform,
    equiaffine_representative,
    levi_civita_at,
    metric_cov_deriv_at,
    poly_connection_eval,
    projective_difference,
    projective_shift,
    volume_parallel_residual,
    weyl_compatibility_check,
    weyl_connection_at,
    weyl_intersection_at,
)
from .jets import (
    Jet2,
    SubgroupTag,
    eta,
    factor_sl_co,
    jet2_inv,
    jet2_mul,
    sl_co_intersection_check,
    subgroup_member,
    sym2_transport,
)
from .linalg import (
    DegenerateError,
    GStructError,
    Matrix,
    PreconditionError,
    congruence_diagonalize,
    rat_nullspace,
)
from .poly import Polynomial, poly_eval_grad
from .prolong import (
    LieSubalgebra,
    ProlongSpace,
    TypeReport,
    builtin_algebra,
    co1_formula_basis,
    co1_formula_basis_for,
    finite_type_order,
    form_algebra,
    first_prolongation,
    kth_prolongation,
    projective_subspace,
    semidirect_closure_check,
)
from .structures import (
    ConformalRep,
    MetricValue,
    VolumeDensityValue,
    conformal_equivalent,
    decompose_metric,
    metric_signature,
    recompose_metric,
    volume_equivariant_value,
)
from .tensors import Sym2Tensor

__version__ = "0.1.0"
