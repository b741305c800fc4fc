"""Exact computer algebra for graded Lie algebras over rational quantum tori.

The package constructs, over the field Q(zeta_N)(gamma_1..gamma_d) with
formal gamma, the graded Lie algebra attached to a root-of-unity commutation
matrix, its derivation-algebra embedding, the canonical automorphism family,
graded derivation spaces, 2-cocycles with their two closed-form classes, the
two-dimensional universal central extension, and the higher-rank Virasoro
image -- and verifies all of it by exhaustive exact checks on finite lattice
truncations.
"""

from .algebras import (
    ContextMismatchError,
    DomainError,
    GradedElement,
    TorusSetup,
    bracket,
    bracket_derqt,
    bracket_ext,
    bracket_g,
    bracket_vir,
    centerless,
    embed_g,
    jacobi_defect,
    replay_records,
    structure_records,
    virasoro_embed,
)
from .cohomology import (
    ClosedFormCocycle,
    CocycleSolveResult,
    NormalizingFunction,
    RangeError,
    TableCocycle,
    build_extension,
    closed_form_cocycle,
    coboundary,
    cocycle_defect,
    match_against_closed_forms,
    normalize_cocycle,
    solve_cocycles,
    tabulate,
)
from .lattice import (
    DimensionError,
    NormalFormSpec,
    QMatrixSpec,
    RootOfUnity,
    box_points,
    commutation_subgroup_contains,
    fundamental_domain,
    hermite_normal_form,
    iota,
    radical_basis,
    radical_contains,
    sigma,
    smith_normal_form,
)
from .scalars import (
    Cyclotomic,
    CyclotomicField,
    GammaPolynomial,
    GammaScalar,
    UnsupportedDenominatorError,
    cyclotomic_field,
    field_arithmetic,
    inner_form,
    normalized_height,
    scalar_from_json,
    scalar_to_json,
)
from .symmetry import (
    AdjointDerivation,
    CanonicalAutomorphism,
    Character,
    DegreeDerivation,
    GradedDerivationCandidate,
    apply_automorphism,
    builtin_derivations,
    derivation_apply,
    multiplicativity_check,
    solve_derivation_space,
    verify_automorphism,
)
from .verify import embedding_report, jacobi_report, virasoro_report

__version__ = "0.1.0"
