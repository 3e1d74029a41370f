"""su(2) generators from the polar pair (H, U_r) on a single multiplet.

The two-oscillator product space splits into fixed-(n_a + n_b) multiplets
via j = (n_a + n_b)/2, m = (n_a - n_b)/2. On the diagonal multiplet
j = (k-1)/2 the ladder operator factorizes as J+ = H U_r with H Hermitean
non-negative and U_r a cyclic shift whose wrap picks up the winding phase
e^{i phi_r}, phi_r = 2 pi j r. This module builds the (2j+1)-dimensional
matrices directly from that closed form, for any half-integer j and any
real winding parameter r, and checks the algebra they must satisfy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .halfint import HalfInt, is_valid_j, m_values
from .quon import FockLabel, OperatorMatrix, QuonRep, build_h, build_ur, unit_phase, wrap_phase


@dataclass(frozen=True)
class SpinSpace:
    """A single multiplet F_j with winding parameter r.

    Basis vectors are |j, m> with m ascending from -j to j; index i
    corresponds to m = -j + i.
    """

    j: HalfInt
    r: float

    def __post_init__(self) -> None:
        if not is_valid_j(self.j):
            raise ValueError(f"j must be a non-negative half-integer, got {self.j}")
        object.__setattr__(self, "r", float(self.r))

    @property
    def dim(self) -> int:
        return self.j.twice + 1

    @cached_property
    def m_list(self) -> tuple[HalfInt, ...]:
        return tuple(m_values(self.j))

    @property
    def jr(self) -> float:
        """The float product j*r; phases downstream must all use this value."""
        return float(self.j) * self.r

    @property
    def phi_r(self) -> float:
        """Winding angle phi_r = 2 pi j r in radians."""
        return 2.0 * math.pi * self.jr

    @property
    def wrap_factor(self) -> complex:
        """e^{i phi_r} with phi_r = 2 pi j r."""
        return unit_phase(self.jr)

    def m_index(self, m: HalfInt) -> int:
        return (m.twice + self.j.twice) // 2


@dataclass(frozen=True, eq=False)
class SpinOperatorSet:
    """The generator matrices on one SpinSpace, all in the m-ascending basis."""

    space: SpinSpace
    h: np.ndarray
    u_r: np.ndarray
    j_plus: np.ndarray
    j_minus: np.ndarray
    j3: np.ndarray

    @cached_property
    def j_squared(self) -> np.ndarray:
        return self.j_minus @ self.j_plus + self.j3 @ self.j3 + self.j3

    @property
    def u_r_dag(self) -> np.ndarray:
        return self.u_r.conj().T

    @property
    def casimir(self) -> np.ndarray:
        """Alias for j_squared; equals j(j+1) times the identity."""
        return self.j_squared


@dataclass(frozen=True)
class ResidualReport:
    """Named max-abs residuals from a batch of identity checks."""

    residuals: dict[str, float]

    def worst(self) -> float:
        return max(self.residuals.values()) if self.residuals else 0.0

    def within(self, tol: float) -> bool:
        return self.worst() <= tol

    def __str__(self) -> str:
        lines = [f"  {name}: {value:.3e}" for name, value in sorted(self.residuals.items())]
        return "\n".join(lines)


def schwinger_labels(lab_n_a: int, lab_n_b: int) -> tuple[HalfInt, HalfInt]:
    """Map occupations (n_a, n_b) to multiplet labels (j, m)."""
    return HalfInt(lab_n_a + lab_n_b), HalfInt(lab_n_a - lab_n_b)


def schwinger_embed(k: int) -> dict[FockLabel, tuple[HalfInt, HalfInt]]:
    """Bijection between the diagonal n_a + n_b = k-1 and a spin multiplet.

    Maps each occupation pair |n_a, n_b) with n_a + n_b = k - 1 to the
    state (j, m) = ((n_a+n_b)/2, (n_a-n_b)/2), covering m = -j..j for
    j = (k-1)/2 exactly once. Keys ascend in n_a, i.e. in m.
    """
    if k < 2:
        raise ValueError(f"need k >= 2, got {k}")
    return {
        FockLabel(n_a, k - 1 - n_a): schwinger_labels(n_a, k - 1 - n_a)
        for n_a in range(k)
    }


def build_spin_ops(space: SpinSpace) -> SpinOperatorSet:
    """Closed-form generator matrices on F_j.

    H is diagonal with H|j,m> = sqrt((j+m)(j-m+1)) |j,m>. U_r shifts
    m -> m+1 cyclically, the wrap |j,j> -> |j,-j> carrying e^{i phi_r}.
    J+ = H U_r, J- = U_r^dag H, J3 = diag(m). H annihilates the wrapped
    vector, so J+- come out r-independent while U_r does not.
    """
    dim = space.dim
    jf = float(space.j)
    ms = [float(m) for m in space.m_list]

    h = np.zeros((dim, dim), dtype=complex)
    for i, m in enumerate(ms):
        h[i, i] = math.sqrt((jf + m) * (jf - m + 1.0))

    u_r = np.zeros((dim, dim), dtype=complex)
    for i in range(dim - 1):
        u_r[i + 1, i] = 1.0
    u_r[0, dim - 1] = space.wrap_factor

    j3 = np.diag(np.array(ms, dtype=complex))
    j_plus = h @ u_r
    j_minus = u_r.conj().T @ h
    return SpinOperatorSet(space=space, h=h, u_r=u_r, j_plus=j_plus, j_minus=j_minus, j3=j3)


def verify_su2(ops: SpinOperatorSet) -> ResidualReport:
    """Residuals of the su(2) commutators and of unitarity/Hermiticity."""
    jp, jm, j3 = ops.j_plus, ops.j_minus, ops.j3
    u, h = ops.u_r, ops.h
    eye = np.eye(ops.space.dim)

    def comm(x, y):
        return x @ y - y @ x

    res = {
        "comm_j3_jplus": float(np.max(np.abs(comm(j3, jp) - jp))),
        "comm_j3_jminus": float(np.max(np.abs(comm(j3, jm) + jm))),
        "comm_jplus_jminus": float(np.max(np.abs(comm(jp, jm) - 2.0 * j3))),
        "jminus_is_adjoint": float(np.max(np.abs(jm - jp.conj().T))),
        "u_unitary": float(np.max(np.abs(u.conj().T @ u - eye))),
        "h_hermitean": float(np.max(np.abs(h - h.conj().T))),
    }
    return ResidualReport(res)


def casimir_identities(ops: SpinOperatorSet) -> ResidualReport:
    """Both polar forms of J^2 against each other and against j(j+1).

    J^2 = H^2 + J3^2 - J3 (from J+J-) and
    J^2 = U_r^dag H^2 U_r + J3^2 + J3 (from J-J+).
    """
    u, h, j3 = ops.u_r, ops.h, ops.j3
    jf = float(ops.space.j)
    h2 = h @ h
    form_a = h2 + j3 @ j3 - j3
    form_b = u.conj().T @ h2 @ u + j3 @ j3 + j3
    j_sq = np.asarray(ops.j_squared)
    target = jf * (jf + 1.0) * np.eye(ops.space.dim)
    res = {
        "polar_forms_agree": float(np.max(np.abs(form_a - form_b))),
        "casimir_form_a": float(np.max(np.abs(j_sq - form_a))),
        "casimir_form_b": float(np.max(np.abs(j_sq - form_b))),
        "casimir_value": float(np.max(np.abs(j_sq - target))),
        "casimir_commutes_u": float(np.max(np.abs(j_sq @ u - u @ j_sq))),
    }
    return ResidualReport(res)


def diagonal_multiplet_indices(k: int) -> list[int]:
    """Product-space indices of the j = (k-1)/2 multiplet, m ascending.

    The member with m = n_a - j sits at index n_a*k + (k-1-n_a).
    """
    return [n_a * k + (k - 1 - n_a) for n_a in range(k)]


def restrict_fock_operator(op: OperatorMatrix, k: int) -> tuple[np.ndarray, float]:
    """Cut the diagonal-multiplet block out of a product-space operator.

    Returns the k x k block in the m-ascending basis together with the
    leakage: the largest matrix element connecting the multiplet to its
    complement. Operators that preserve the multiplet (H, U_r, anything
    built from them) have leakage exactly zero.
    """
    if op.dim != k * k:
        raise ValueError(f"operator dimension {op.dim} is not k^2 = {k * k}")
    inside = diagonal_multiplet_indices(k)
    outside = [i for i in range(k * k) if i not in set(inside)]
    block = op.entries[np.ix_(inside, inside)].copy()
    if outside:
        col_leak = np.max(np.abs(op.entries[np.ix_(outside, inside)]))
        row_leak = np.max(np.abs(op.entries[np.ix_(inside, outside)]))
        leakage = float(max(col_leak, row_leak))
    else:
        leakage = 0.0
    return block, leakage


def quon_restriction_report(rep: QuonRep, r: float) -> ResidualReport:
    """Compare the closed-form F_j matrices with the oscillator construction.

    Restricts H and U_r built on the full product space to the diagonal
    multiplet and takes max-abs differences against build_spin_ops output.
    """
    k = rep.k
    space = SpinSpace(j=HalfInt(k - 1), r=r)
    ops = build_spin_ops(space)

    h_block, h_leak = restrict_fock_operator(build_h(rep), k)
    u_block, u_leak = restrict_fock_operator(build_ur(rep, wrap_phase(k, r)), k)
    res = {
        "h_matches": float(np.max(np.abs(h_block - ops.h))),
        "u_matches": float(np.max(np.abs(u_block - ops.u_r))),
        "h_leakage": h_leak,
        "u_leakage": u_leak,
    }
    return ResidualReport(res)


def spin_space_for_k(k: int, r: float) -> SpinSpace:
    """The multiplet the k-th root-of-unity oscillator pair singles out."""
    return SpinSpace(j=HalfInt(k - 1), r=float(r))
