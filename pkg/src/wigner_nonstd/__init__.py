"""SU(2) Wigner-Racah algebra in the cyclic-phase (alpha) eigenscheme.

Layers, bottom up:

- halfint: exact half-integer labels and selection rules
- standard_wra: exact {J^2, J3}-scheme symbols (CG, 3-jm, 6-j, 9-j)
- quon: q-deformed oscillator pair at q = exp(2 pi i/k)
- su2gen: the polar pair (H, U_r) and the spin generators it produces
- nonstandard: the {J^2, U_r} eigenbasis and its coupling apparatus
- verify / cli: invariant suites and the command-line surface
"""

from .halfint import HalfInt, half, m_values, coupled_j_values, triangle
from .standard_wra import (
    ExactSqrtRational,
    IncompatibleRadicalError,
    RadicalSum,
    cg,
    cg_float,
    metric_standard,
    ninej,
    sixj,
    threejm,
)
from .quon import (
    OperatorMatrix,
    QDeformation,
    QuonRep,
    build_h,
    build_rep,
    build_ur,
    w_commutator_check,
    w_generator,
    wrap_phase,
)
from .su2gen import (
    ResidualReport,
    SpinOperatorSet,
    SpinSpace,
    build_spin_ops,
    casimir_identities,
    schwinger_embed,
    verify_su2,
)
from .nonstandard import (
    AlphaLabel,
    SymbolValue,
    TensorOperator,
    alpha_labels,
    basis_matrix,
    cg_nonstandard,
    cg_nonstandard_tensor,
    f_small,
    fbar,
    fbar_tensor,
    from_nonstandard,
    overlap,
    recoupling_invariance_check,
    spherical_tensor_from_j,
    tensor_to_alpha,
    to_nonstandard,
    verify_cg_orthonormality,
    verify_eigenbasis,
    verify_fbar_symmetry,
    wigner_eckart_check,
)

__version__ = "0.1.0"

__all__ = [
    "AlphaLabel",
    "ExactSqrtRational",
    "HalfInt",
    "IncompatibleRadicalError",
    "OperatorMatrix",
    "QDeformation",
    "QuonRep",
    "RadicalSum",
    "ResidualReport",
    "SpinOperatorSet",
    "SpinSpace",
    "SymbolValue",
    "TensorOperator",
    "alpha_labels",
    "basis_matrix",
    "build_h",
    "build_rep",
    "build_spin_ops",
    "build_ur",
    "casimir_identities",
    "cg",
    "cg_float",
    "cg_nonstandard",
    "cg_nonstandard_tensor",
    "coupled_j_values",
    "f_small",
    "fbar",
    "fbar_tensor",
    "from_nonstandard",
    "half",
    "m_values",
    "metric_standard",
    "ninej",
    "overlap",
    "recoupling_invariance_check",
    "schwinger_embed",
    "sixj",
    "spherical_tensor_from_j",
    "tensor_to_alpha",
    "threejm",
    "to_nonstandard",
    "triangle",
    "verify_cg_orthonormality",
    "verify_eigenbasis",
    "verify_fbar_symmetry",
    "verify_su2",
    "w_commutator_check",
    "w_generator",
    "wigner_eckart_check",
    "wrap_phase",
]
