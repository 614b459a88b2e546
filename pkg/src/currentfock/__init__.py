"""Exact-arithmetic engine for the vertex algebra of an abelian current algebra.

Everything is computed over the rationals: Fock-space states, vertex-operator
modes, the quasi-conformal operators L(n) for n >= -1, evaluation and
logarithmic modules, and the bigraded dimension combinatorics.  The `cli`
module exposes the verification suites as the `currentfock` command.
"""

from .exactmath import RatMatrix, Rational, jordan_structure, rank_nullspace, rat, rat_str
from .fock import (
    FockState,
    GenIndex,
    ModeOp,
    ModuleSpec,
    ModuleState,
    Monomial,
    NotHomogeneousError,
    State,
    apply_mode,
    enumerate_basis,
    grading,
    mode,
    module_basis,
)
from .vertexops import (
    Report,
    Truncation,
    VertexModeRequest,
    adjoint_mode_matrix,
    check_field_commutator,
    check_l_mode_commutator,
    check_virasoro,
    d_apply,
    l_apply,
    vertex_mode,
)
from .repcat import (
    HomProblem,
    TopSpace,
    casimir_partial,
    casimir_scalar,
    eval_action,
    intertwiner_dim,
    is_genuine_logarithmic,
    l0_top_matrix,
    vacuum_space,
)
from .dims import (
    DimTable,
    LaurentSeries2,
    bipartite_count,
    c1_quotient_dims,
    check_strong_grading,
    gf_paper_ct,
    gf_product_count,
    partitions_exact_parts,
    partitions_nonneg_parts,
)

__all__ = [
    "DimTable",
    "FockState",
    "GenIndex",
    "HomProblem",
    "LaurentSeries2",
    "ModeOp",
    "ModuleSpec",
    "ModuleState",
    "Monomial",
    "NotHomogeneousError",
    "RatMatrix",
    "Rational",
    "Report",
    "State",
    "TopSpace",
    "Truncation",
    "VertexModeRequest",
    "adjoint_mode_matrix",
    "apply_mode",
    "bipartite_count",
    "c1_quotient_dims",
    "casimir_partial",
    "casimir_scalar",
    "check_field_commutator",
    "check_l_mode_commutator",
    "check_strong_grading",
    "check_virasoro",
    "d_apply",
    "enumerate_basis",
    "eval_action",
    "gf_paper_ct",
    "gf_product_count",
    "grading",
    "intertwiner_dim",
    "is_genuine_logarithmic",
    "jordan_structure",
    "l0_top_matrix",
    "l_apply",
    "mode",
    "module_basis",
    "partitions_exact_parts",
    "partitions_nonneg_parts",
    "rank_nullspace",
    "rat",
    "rat_str",
    "vacuum_space",
    "vertex_mode",
]
