"""Wigner-Racah algebra in the {J^2, U_r} eigenscheme.

The unitary polar factor U_r replaces J3 as the operator diagonalized
alongside J^2. Its eigenvectors |j, alpha; r> have components
exp(i alpha m 2 pi/(2j+1))/sqrt(2j+1) over the m-basis, with
alpha = -j r + s for s = 0..2j, and eigenvalue exp(-i alpha 2 pi/(2j+1)).
Coupling coefficients, the two associated 3-symbol families, tensor
operator components and the factorization theorem all carry over to this
scheme by the unitary change of basis; this module builds each of them
and provides residual checks for the identities they must satisfy.

All couplings require every participating space to share the same r;
mixing winding parameters raises ValueError.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .halfint import HalfInt, coupled_j_values, triangle
from .quon import unit_phase
from .standard_wra import cg_float, cg_tensor, sixj, threejm, threejm_tensor
from .su2gen import ResidualReport, SpinOperatorSet, SpinSpace, build_spin_ops


@dataclass(frozen=True)
class AlphaLabel:
    """One eigenvector label |j, alpha; r> with alpha = -j*r + s."""

    j: HalfInt
    r: float
    s: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "r", float(self.r))
        if not 0 <= self.s <= self.j.twice:
            raise ValueError(f"s must lie in [0, 2j] = [0, {self.j.twice}], got {self.s}")

    @property
    def alpha(self) -> float:
        # same float product as SpinSpace.jr, so phases stay consistent
        return -(float(self.j) * self.r) + self.s

    @property
    def dim(self) -> int:
        return self.j.twice + 1

    @property
    def eigenvalue(self) -> complex:
        """U_r eigenvalue exp(-i alpha 2 pi/(2j+1))."""
        return unit_phase(-self.alpha / self.dim)

    def __str__(self) -> str:
        return f"|{self.j},alpha={self.alpha:g};r={self.r:g}>"


def alpha_labels(space: SpinSpace) -> tuple[AlphaLabel, ...]:
    """All 2j+1 labels of the space, s ascending."""
    return tuple(AlphaLabel(space.j, space.r, s) for s in range(space.dim))


def overlap(space: SpinSpace, m: HalfInt, label: AlphaLabel) -> complex:
    """<j m | j alpha; r> = exp(i alpha m 2 pi/(2j+1)) / sqrt(2j+1)."""
    if label.j != space.j or label.r != space.r:
        raise ValueError("label does not belong to this space")
    return unit_phase(label.alpha * float(m) / space.dim) / math.sqrt(space.dim)


@lru_cache(maxsize=None)
def basis_matrix(space: SpinSpace) -> np.ndarray:
    """Unitary M with M[m_index, s] = <j m | j alpha_s; r>.

    Columns are the U_r eigenvectors over the m-ascending basis.
    """
    dim = space.dim
    out = np.empty((dim, dim), dtype=complex)
    for s, label in enumerate(alpha_labels(space)):
        for i, m in enumerate(space.m_list):
            out[i, s] = unit_phase(label.alpha * float(m) / dim)
    out /= math.sqrt(dim)
    out.setflags(write=False)
    return out


def to_nonstandard(space: SpinSpace, array: np.ndarray) -> np.ndarray:
    """Components of a vector (1-D) or operator (2-D) in the alpha-basis."""
    m = basis_matrix(space)
    if array.ndim == 1:
        return m.conj().T @ array
    if array.ndim == 2:
        return m.conj().T @ array @ m
    raise ValueError(f"expected a vector or matrix, got ndim={array.ndim}")


def from_nonstandard(space: SpinSpace, array: np.ndarray) -> np.ndarray:
    """Inverse of to_nonstandard."""
    m = basis_matrix(space)
    if array.ndim == 1:
        return m @ array
    if array.ndim == 2:
        return m @ array @ m.conj().T
    raise ValueError(f"expected a vector or matrix, got ndim={array.ndim}")


def verify_eigenbasis(space: SpinSpace) -> ResidualReport:
    """Unitarity of the overlap matrix and the eigenvalue equations.

    The *_eigen entries are the worst vector 2-norm of U_r|v> - lambda|v>
    and J^2|v> - j(j+1)|v> over all 2j+1 eigenvectors; the unitarity
    entry is the max-abs deviation of M^dag M from the identity.
    """
    m = basis_matrix(space)
    ops = build_spin_ops(space)
    lam = np.diag([label.eigenvalue for label in alpha_labels(space)])
    eye = np.eye(space.dim)
    jf = float(space.j)
    u_defect = ops.u_r @ m - m @ lam
    c_defect = np.asarray(ops.j_squared) @ m - jf * (jf + 1.0) * m
    res = {
        "overlap_unitary": float(np.max(np.abs(m.conj().T @ m - eye))),
        "u_eigen": float(np.max(np.linalg.norm(u_defect, axis=0))),
        "casimir_eigen": float(np.max(np.linalg.norm(c_defect, axis=0))),
        "diagonalized_u": float(np.max(np.abs(m.conj().T @ ops.u_r @ m - lam))),
    }
    return ResidualReport(res)


def _require_same_r(*spaces: SpinSpace) -> float:
    rs = {space.r for space in spaces}
    if len(rs) != 1:
        raise ValueError(f"cannot couple spaces with different winding parameters: {sorted(rs)}")
    return rs.pop()


def cg_nonstandard(l1: AlphaLabel, l2: AlphaLabel, l: AlphaLabel) -> complex:
    """Coupling coefficient (j1 j2 alpha1 alpha2 | j alpha; r), by direct sum.

    Triple sum of the m-scheme coefficient against the basis phases:
    the bra side carries conjugated phases for (1) and (2), the coupled
    ket side the direct phase. The tensor route cg_nonstandard_tensor
    computes the same numbers; keep both paths independent.
    """
    if l1.r != l2.r or l1.r != l.r:
        raise ValueError("all three labels must share the same winding parameter r")
    d1, d2, d = l1.dim, l2.dim, l.dim
    norm = math.sqrt(d1 * d2 * d)
    total = 0.0 + 0.0j
    for tm1 in range(-l1.j.twice, l1.j.twice + 1, 2):
        for tm2 in range(-l2.j.twice, l2.j.twice + 1, 2):
            tm = tm1 + tm2
            if abs(tm) > l.j.twice:
                continue
            c = cg_float(l1.j, l2.j, HalfInt(tm1), HalfInt(tm2), l.j, HalfInt(tm))
            if c == 0.0:
                continue
            phase = unit_phase(
                l.alpha * (tm / 2) / d
                - l1.alpha * (tm1 / 2) / d1
                - l2.alpha * (tm2 / 2) / d2
            )
            total += phase * c
    return total / norm


@lru_cache(maxsize=None)
def cg_nonstandard_tensor(space1: SpinSpace, space2: SpinSpace, space: SpinSpace) -> np.ndarray:
    """Array of coupling coefficients indexed [s1, s2, s]."""
    _require_same_r(space1, space2, space)
    m1 = basis_matrix(space1)
    m2 = basis_matrix(space2)
    m = basis_matrix(space)
    core = cg_tensor(space1.j, space2.j, space.j)
    out = np.einsum("ax,by,cz,abc->xyz", m1.conj(), m2.conj(), m, core, optimize=True)
    out.setflags(write=False)
    return out


def verify_cg_orthonormality(space1: SpinSpace, space2: SpinSpace) -> ResidualReport:
    """Both orthonormality relations of the coupling coefficients.

    Stacks the tensors for every coupled j into the full change-of-basis
    matrix W[(s1 s2), (j s)]; the relations are W^dag W = 1 (rows) and
    W W^dag = 1 (completeness).
    """
    r = _require_same_r(space1, space2)
    d1, d2 = space1.dim, space2.dim
    blocks = []
    for j in coupled_j_values(space1.j, space2.j):
        tensor = cg_nonstandard_tensor(space1, space2, SpinSpace(j, r))
        blocks.append(tensor.reshape(d1 * d2, j.twice + 1))
    w = np.concatenate(blocks, axis=1)
    eye = np.eye(d1 * d2)
    res = {
        "rows_orthonormal": float(np.max(np.abs(w.conj().T @ w - eye))),
        "complete": float(np.max(np.abs(w @ w.conj().T - eye))),
    }
    return ResidualReport(res)


def fbar(l1: AlphaLabel, l2: AlphaLabel, l3: AlphaLabel) -> complex:
    """Symmetric 3-symbol of the alpha-scheme, by direct sum.

    The m-scheme 3-jm symbol contracted with three conjugated basis
    phases. Invariant under even column permutations; odd permutations
    and complex conjugation both multiply by (-1)^(j1+j2+j3). The tensor
    route fbar_tensor computes the same numbers; keep both paths
    independent.
    """
    if l1.r != l2.r or l1.r != l3.r:
        raise ValueError("all three labels must share the same winding parameter r")
    d1, d2, d3 = l1.dim, l2.dim, l3.dim
    total = 0.0 + 0.0j
    for tm1 in range(-l1.j.twice, l1.j.twice + 1, 2):
        for tm2 in range(-l2.j.twice, l2.j.twice + 1, 2):
            tm3 = -tm1 - tm2
            if abs(tm3) > l3.j.twice:
                continue
            value = float(threejm(l1.j, l2.j, l3.j,
                                  HalfInt(tm1), HalfInt(tm2), HalfInt(tm3)))
            if value == 0.0:
                continue
            phase = unit_phase(
                -l1.alpha * (tm1 / 2) / d1
                - l2.alpha * (tm2 / 2) / d2
                - l3.alpha * (tm3 / 2) / d3
            )
            total += phase * value
    return total / math.sqrt(d1 * d2 * d3)


@lru_cache(maxsize=None)
def fbar_tensor(space1: SpinSpace, space2: SpinSpace, space3: SpinSpace) -> np.ndarray:
    """Array of the symmetric 3-symbols indexed [s1, s2, s3]."""
    _require_same_r(space1, space2, space3)
    m1 = basis_matrix(space1)
    m2 = basis_matrix(space2)
    m3 = basis_matrix(space3)
    core = threejm_tensor(space1.j, space2.j, space3.j)
    out = np.einsum("ax,by,cz,abc->xyz", m1.conj(), m2.conj(), m3.conj(), core, optimize=True)
    out.setflags(write=False)
    return out


def verify_fbar_symmetry(space1: SpinSpace, space2: SpinSpace, space3: SpinSpace) -> ResidualReport:
    """Column-permutation and conjugation rules over all label triples."""
    _require_same_r(space1, space2, space3)
    t123 = fbar_tensor(space1, space2, space3)
    t231 = fbar_tensor(space2, space3, space1)
    t213 = fbar_tensor(space2, space1, space3)
    tsum = (space1.j + space2.j + space3.j).twice // 2
    sign = -1.0 if tsum % 2 else 1.0

    even = np.transpose(t231, (2, 0, 1))  # [s1,s2,s3] from the (231)-ordered tensor
    odd = np.transpose(t213, (1, 0, 2))
    res = {
        "even_permutation": float(np.max(np.abs(t123 - even))),
        "odd_permutation": float(np.max(np.abs(odd - sign * t123))),
        "conjugation": float(np.max(np.abs(t123.conj() - sign * t123))),
    }
    return ResidualReport(res)


def f_small(l1: AlphaLabel, l2: AlphaLabel, l3: AlphaLabel) -> complex:
    """Companion coupling symbol (-1)^(2 j3) (j2 j3 alpha2 alpha3 | j1 alpha1)^* / sqrt(2j1+1).

    This is the combination through which matrix elements of an
    irreducible tensor factorize in the alpha-scheme.
    """
    sign = -1.0 if l3.j.twice % 2 else 1.0
    return sign * cg_nonstandard(l2, l3, l1).conjugate() / math.sqrt(l1.dim)


@dataclass(frozen=True, eq=False)
class TensorOperator:
    """Spherical components T^(rank)_q between two multiplets, q ascending.

    components has shape (2*rank+1, bra_dim, ket_dim) over the m-bases;
    each slice maps the ket space into the bra space. source_tag carries
    any extra quantum-number bookkeeping and plays no algebraic role.
    """

    bra_space: SpinSpace
    ket_space: SpinSpace
    rank: HalfInt
    components: np.ndarray
    source_tag: str = ""

    def __post_init__(self) -> None:
        _require_same_r(self.bra_space, self.ket_space)
        if self.rank.twice % 2 or self.rank.twice < 0:
            raise ValueError(f"rank must be a non-negative integer, got {self.rank}")
        arr = np.array(self.components, dtype=complex)
        expected = (self.rank.twice + 1, self.bra_space.dim, self.ket_space.dim)
        if arr.shape != expected:
            raise ValueError(f"components shape {arr.shape} != {expected}")
        arr.setflags(write=False)
        object.__setattr__(self, "components", arr)

    def component(self, q: HalfInt) -> np.ndarray:
        idx = (q.twice + self.rank.twice) // 2
        if not 0 <= idx < self.rank.twice + 1:
            raise ValueError(f"q={q} outside [-{self.rank}, {self.rank}]")
        return self.components[idx]

    @property
    def rank_space(self) -> SpinSpace:
        return SpinSpace(self.rank, self.bra_space.r)


def spherical_tensor_from_j(ops: SpinOperatorSet, rank: int) -> TensorOperator:
    """Rank-1 tensor (J-/sqrt2, J3, -J+/sqrt2), higher ranks by CG coupling.

    T^(n)_q = sum (n-1, 1, q1, q2 | n q) T^(n-1)_(q1) T^(1)_(q2); overall
    normalization of the higher ranks is conventional.
    """
    if rank < 1:
        raise ValueError("rank must be a positive integer")
    dim = ops.space.dim
    rt2 = math.sqrt(2.0)
    base = np.stack([ops.j_minus / rt2, ops.j3, -ops.j_plus / rt2])
    current = base
    for n in range(2, rank + 1):
        prev_rank, new_rank = HalfInt(2 * (n - 1)), HalfInt(2 * n)
        nxt = np.zeros((2 * n + 1, dim, dim), dtype=complex)
        for i1, tq1 in enumerate(range(-prev_rank.twice, prev_rank.twice + 1, 2)):
            for i2, tq2 in enumerate(range(-2, 3, 2)):
                tq = tq1 + tq2
                if abs(tq) > new_rank.twice:
                    continue
                c = cg_float(prev_rank, HalfInt(2), HalfInt(tq1), HalfInt(tq2),
                             new_rank, HalfInt(tq))
                if c != 0.0:
                    nxt[(tq + new_rank.twice) // 2] += c * (current[i1] @ base[i2])
        current = nxt
    return TensorOperator(bra_space=ops.space, ket_space=ops.space,
                          rank=HalfInt(2 * rank), components=current,
                          source_tag=f"coupled power {rank} of the generators")


def tensor_to_alpha(tensor: TensorOperator) -> np.ndarray:
    """Matrix elements <j1 alpha1 | T_alpha | j2 alpha2>, shape (2k+1, d1, d2).

    The component index transforms with the rank space's basis matrix,
    T_alpha = sum_q M_k[q, s_k] T_q, and the operator indices with each
    multiplet's: out[s_k] = M1^dag T_alpha[s_k] M2.
    """
    mk = basis_matrix(tensor.rank_space)
    m1 = basis_matrix(tensor.bra_space)
    m2 = basis_matrix(tensor.ket_space)
    mixed = np.einsum("qs,qab->sab", mk, tensor.components)
    return np.einsum("ax,sab,by->sxy", m1.conj(), mixed, m2)


@dataclass(frozen=True)
class WignerEckartResult:
    """Least-squares factorization of alpha-scheme tensor matrix elements."""

    reduced_element: complex
    residual: float
    pattern_norm: float


def f_small_tensor(bra_space: SpinSpace, ket_space: SpinSpace,
                   rank_space: SpinSpace) -> np.ndarray:
    """All f_small values for the factorization, indexed [s_k, s1, s2]."""
    coupling = cg_nonstandard_tensor(ket_space, rank_space, bra_space)
    sign = -1.0 if rank_space.j.twice % 2 else 1.0
    # coupling[s2, s_k, s1] -> [s_k, s1, s2]
    return sign * np.transpose(coupling.conj(), (1, 2, 0)) / math.sqrt(bra_space.dim)


def wigner_eckart_check(tensor: TensorOperator) -> WignerEckartResult:
    """Fit <j1 a1|T_a|j2 a2> = c * f_small(j1 j2 k; a1 a2 a) over all labels.

    Returns the fitted reduced element c and the max-abs residual of the
    factorization; elements that are nonzero where f_small vanishes show
    up in the residual. c is set to zero when the tensor itself vanishes.
    """
    elements = tensor_to_alpha(tensor)
    pattern = f_small_tensor(tensor.bra_space, tensor.ket_space, tensor.rank_space)
    pattern_norm = float(np.linalg.norm(pattern))
    if pattern_norm == 0.0 or float(np.max(np.abs(elements))) == 0.0:
        reduced = 0.0 + 0.0j
    else:
        reduced = complex(np.vdot(pattern, elements) / np.vdot(pattern, pattern))
    residual = float(np.max(np.abs(elements - reduced * pattern)))
    return WignerEckartResult(reduced_element=reduced, residual=residual,
                              pattern_norm=pattern_norm)


def recoupling_invariance_check(j1: HalfInt, j2: HalfInt, j3: HalfInt,
                                j12: HalfInt, j23: HalfInt, j: HalfInt,
                                r: float) -> ResidualReport:
    """Recoupling overlap computed from alpha-scheme coefficients against the 6-j.

    Contracts <(j1 j2) j12, j3; j alpha | j1, (j2 j3) j23; j alpha> over
    the alpha labels for each fixed outer alpha. Every outer label must
    give the same number, (-1)^(j1+j2+j3+j) sqrt((2j12+1)(2j23+1)) times
    the 6-j symbol {j1 j2 j12; j3 j j23}. A failed triad zeroes both
    sides, so the residual is trivially zero there.
    """
    sp1, sp2, sp3 = SpinSpace(j1, r), SpinSpace(j2, r), SpinSpace(j3, r)
    sp12, sp23, sp = SpinSpace(j12, r), SpinSpace(j23, r), SpinSpace(j, r)

    a = cg_nonstandard_tensor(sp1, sp2, sp12)    # [s1, s2, s12]
    b = cg_nonstandard_tensor(sp12, sp3, sp)     # [s12, s3, s]
    c = cg_nonstandard_tensor(sp2, sp3, sp23)    # [s2, s3, s23]
    d = cg_nonstandard_tensor(sp1, sp23, sp)     # [s1, s23, s]
    left = np.einsum("abe,ecs->abcs", a, b, optimize=True)
    right = np.einsum("bcf,afs->abcs", c, d, optimize=True)
    values = np.einsum("abcs,abcs->s", left.conj(), right, optimize=True)

    tsum = (j1.twice + j2.twice + j3.twice + j.twice) // 2
    sign = -1.0 if tsum % 2 else 1.0
    expected = sign * math.sqrt(sp12.dim * sp23.dim) * float(sixj(j1, j2, j12, j3, j, j23))
    res = {
        "matches_sixj": float(np.max(np.abs(values - expected))),
        "outer_label_spread": float(np.max(np.abs(values - values[0]))),
    }
    return ResidualReport(res)


@dataclass(frozen=True)
class SymbolValue:
    """One tabulated symbol: label tuple, value and provenance tags.

    scheme is "standard" or "nonstandard"; formula names the symbol
    family (e.g. "cg", "fbar", "sixj") for machine-readable output.
    """

    labels: tuple[str, ...]
    value: complex
    scheme: str
    formula: str

    def __post_init__(self) -> None:
        if self.scheme not in ("standard", "nonstandard"):
            raise ValueError(f"scheme must be standard or nonstandard, got {self.scheme!r}")
        if not (math.isfinite(self.value.real) and math.isfinite(self.value.imag)):
            raise ValueError("symbol value must be finite")

    @property
    def magnitude(self) -> float:
        return abs(self.value)

    @property
    def phase(self) -> float:
        return math.atan2(self.value.imag, self.value.real) if self.value != 0 else 0.0
