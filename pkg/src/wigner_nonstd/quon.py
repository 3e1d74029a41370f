"""Two commuting q-deformed oscillators at a root of unity.

The deformation parameter is q = exp(2*pi*i/k) for integer k >= 2. Each
oscillator acts on a k-dimensional truncated Fock space; the pair acts on
the k^2-dimensional product space with basis |n_a, n_b> ordered n_a-major.
On that space we build the Hermitean factor H and the unitary shift U_r of
the polar decomposition, and the discrete translation generators that close
a trigonometric sine algebra.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

MAX_K = 64


def unit_phase(turns: float) -> complex:
    """exp(2*pi*i*turns), with the argument reduced mod 1 first.

    The reduction keeps the phase accurate to ~1e-15 even when turns is
    large, where direct evaluation of exp would lose precision.
    """
    return cmath.exp(2j * math.pi * math.fmod(turns, 1.0))


def unit_phase_frac(numerator: int, denominator: int) -> complex:
    """exp(2*pi*i*numerator/denominator) with exact integer reduction."""
    return cmath.exp(2j * math.pi * ((numerator % denominator) / denominator))


@dataclass(frozen=True)
class QDeformation:
    """q = exp(2*pi*i/k) and the q-integers it generates."""

    k: int

    def __post_init__(self) -> None:
        if not isinstance(self.k, int) or isinstance(self.k, bool):
            raise TypeError(f"k must be an int, got {type(self.k).__name__}")
        if not 2 <= self.k <= MAX_K:
            raise ValueError(f"k must lie in [2, {MAX_K}], got {self.k}")

    @cached_property
    def q(self) -> complex:
        return unit_phase_frac(1, self.k)

    def q_power(self, exponent: int) -> complex:
        """q**exponent with the exponent reduced mod k (exact for multiples of k)."""
        return unit_phase_frac(exponent, self.k)

    def q_number(self, n: int) -> complex:
        """[n]_q = (1 - q^n)/(1 - q). Exactly zero for n a multiple of k."""
        if n < 0:
            raise ValueError(f"q-integer argument must be non-negative, got {n}")
        return (1.0 - self.q_power(n)) / (1.0 - self.q)

    def q_factorial(self, n: int) -> complex:
        """[n]_q! = [1]_q [2]_q ... [n]_q, with [0]_q! = 1.

        Arguments beyond k-1 would make the product vanish identically,
        so they are rejected to catch indexing bugs early.
        """
        if not 0 <= n <= self.k - 1:
            raise ValueError(f"q-factorial argument must lie in [0, {self.k - 1}], got {n}")
        out = 1.0 + 0.0j
        for l in range(1, n + 1):
            out *= self.q_number(l)
        return out


@dataclass(frozen=True)
class FockLabel:
    """Occupation pair |n_a, n_b> of the two-oscillator basis."""

    n_a: int
    n_b: int

    def index(self, k: int) -> int:
        return self.n_a * k + self.n_b

    def __str__(self) -> str:
        return f"|{self.n_a},{self.n_b}>"


def fock_basis(k: int) -> tuple[FockLabel, ...]:
    """Product basis in n_a-major order: index = n_a*k + n_b."""
    return tuple(FockLabel(n_a, n_b) for n_a in range(k) for n_b in range(k))


@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    """A dense complex matrix tied to an ordered basis label tuple.

    The entry array is copied on construction and frozen; all algebraic
    operations return new instances over the same basis.
    """

    entries: np.ndarray
    basis: tuple

    def __post_init__(self) -> None:
        mat = np.array(self.entries, dtype=complex)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValueError(f"entries must be a square matrix, got shape {mat.shape}")
        if mat.shape[0] != len(self.basis):
            raise ValueError(
                f"matrix dimension {mat.shape[0]} does not match basis size {len(self.basis)}"
            )
        mat.setflags(write=False)
        object.__setattr__(self, "entries", mat)
        object.__setattr__(self, "basis", tuple(self.basis))

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def _check_basis(self, other: "OperatorMatrix") -> None:
        if self.basis != other.basis:
            raise ValueError("operators act on different bases")

    def dagger(self) -> "OperatorMatrix":
        return OperatorMatrix(self.entries.conj().T, self.basis)

    def __matmul__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        self._check_basis(other)
        return OperatorMatrix(self.entries @ other.entries, self.basis)

    def __add__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        self._check_basis(other)
        return OperatorMatrix(self.entries + other.entries, self.basis)

    def __sub__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        self._check_basis(other)
        return OperatorMatrix(self.entries - other.entries, self.basis)

    def __neg__(self) -> "OperatorMatrix":
        return OperatorMatrix(-self.entries, self.basis)

    def __mul__(self, scalar: complex) -> "OperatorMatrix":
        return OperatorMatrix(self.entries * scalar, self.basis)

    __rmul__ = __mul__

    def commutator(self, other: "OperatorMatrix") -> "OperatorMatrix":
        return self @ other - other @ self

    def power(self, n: int) -> "OperatorMatrix":
        if n < 0:
            raise ValueError("power expects a non-negative exponent")
        return OperatorMatrix(np.linalg.matrix_power(self.entries, n), self.basis)

    def max_abs(self) -> float:
        if self.entries.size == 0:
            return 0.0
        return float(np.max(np.abs(self.entries)))

    @classmethod
    def identity(cls, basis: tuple) -> "OperatorMatrix":
        return cls(np.eye(len(basis), dtype=complex), basis)


def _mode_matrices(defm: QDeformation) -> dict[str, np.ndarray]:
    """Single-oscillator k x k matrices in the truncated Fock basis |0..k-1>.

    a_plus |n> = |n+1>            a_minus |n> = [n]_q |n-1>
    b_plus |n> = [n+1]_q |n+1>    b_minus |n> = |n-1>
    """
    k = defm.k
    a_plus = np.zeros((k, k), dtype=complex)
    a_minus = np.zeros((k, k), dtype=complex)
    b_plus = np.zeros((k, k), dtype=complex)
    b_minus = np.zeros((k, k), dtype=complex)
    for n in range(k - 1):
        a_plus[n + 1, n] = 1.0
        a_minus[n, n + 1] = defm.q_number(n + 1)
        b_plus[n + 1, n] = defm.q_number(n + 1)
        b_minus[n, n + 1] = 1.0
    number = np.diag(np.arange(k)).astype(complex)
    return {"a+": a_plus, "a-": a_minus, "b+": b_plus, "b-": b_minus, "n": number}


@dataclass(frozen=True, eq=False)
class QuonRep:
    """Both oscillators embedded on the product space F = F_a (x) F_b."""

    k: int
    deformation: QDeformation
    basis: tuple
    a_plus: OperatorMatrix
    a_minus: OperatorMatrix
    b_plus: OperatorMatrix
    b_minus: OperatorMatrix
    number_a: OperatorMatrix
    number_b: OperatorMatrix

    @property
    def dim(self) -> int:
        return self.k * self.k

    @property
    def j(self) -> float:
        """Spin of the diagonal multiplet this pair supports: j = (k-1)/2."""
        return (self.k - 1) / 2


def build_rep(k: int) -> QuonRep:
    """Construct the two-oscillator representation for q = exp(2*pi*i/k)."""
    defm = QDeformation(k)
    single = _mode_matrices(defm)
    basis = fock_basis(k)
    eye = np.eye(k, dtype=complex)

    def embed_a(mat: np.ndarray) -> OperatorMatrix:
        return OperatorMatrix(np.kron(mat, eye), basis)

    def embed_b(mat: np.ndarray) -> OperatorMatrix:
        return OperatorMatrix(np.kron(eye, mat), basis)

    return QuonRep(
        k=k,
        deformation=defm,
        basis=basis,
        a_plus=embed_a(single["a+"]),
        a_minus=embed_a(single["a-"]),
        b_plus=embed_b(single["b+"]),
        b_minus=embed_b(single["b-"]),
        number_a=embed_a(single["n"]),
        number_b=embed_b(single["n"]),
    )


def relation_residuals(rep: QuonRep) -> dict[str, float]:
    """Max-abs residual of each defining relation of the pair of algebras.

    Keys cover the deformed commutators, the number-operator gradings,
    cross-mode commutativity and nilpotency of all four ladder operators.
    The nilpotency entries are exact zeros: the k-th power of a strictly
    triangular matrix vanishes structurally, with no rounding involved.
    """
    q = rep.deformation.q
    one = OperatorMatrix.identity(rep.basis)
    out = {
        "a_deformed": (rep.a_minus @ rep.a_plus - q * (rep.a_plus @ rep.a_minus) - one).max_abs(),
        "b_deformed": (rep.b_minus @ rep.b_plus - q * (rep.b_plus @ rep.b_minus) - one).max_abs(),
        "grading_a_plus": (rep.number_a.commutator(rep.a_plus) - rep.a_plus).max_abs(),
        "grading_a_minus": (rep.number_a.commutator(rep.a_minus) + rep.a_minus).max_abs(),
        "grading_b_plus": (rep.number_b.commutator(rep.b_plus) - rep.b_plus).max_abs(),
        "grading_b_minus": (rep.number_b.commutator(rep.b_minus) + rep.b_minus).max_abs(),
        "cross_commute": max(
            a.commutator(b).max_abs()
            for a in (rep.a_plus, rep.a_minus, rep.number_a)
            for b in (rep.b_plus, rep.b_minus, rep.number_b)
        ),
        "a_plus_nilpotent": rep.a_plus.power(rep.k).max_abs(),
        "a_minus_nilpotent": rep.a_minus.power(rep.k).max_abs(),
        "b_plus_nilpotent": rep.b_plus.power(rep.k).max_abs(),
        "b_minus_nilpotent": rep.b_minus.power(rep.k).max_abs(),
    }
    return out


def wrap_phase(k: int, r: float) -> float:
    """Winding phase angle phi_r = 2*pi*j*r with j = (k-1)/2, as a float."""
    return 2.0 * math.pi * ((k - 1) / 2) * r


def build_h(rep: QuonRep) -> OperatorMatrix:
    """Hermitean polar factor H = sqrt(N_a (N_b + 1)); diagonal and >= 0."""
    diag = [math.sqrt(lab.n_a * (lab.n_b + 1)) for lab in rep.basis]
    return OperatorMatrix(np.diag(diag), rep.basis)


def half_angle_phase(phi: float) -> complex:
    """e^{i phi/2}, reduced modulo 4*pi first so large angles stay accurate."""
    return cmath.exp(0.5j * math.fmod(phi, 4.0 * math.pi))


def build_ur(rep: QuonRep, phi_r: float) -> OperatorMatrix:
    """Unitary polar factor U_r on the product space.

    U_r = [a+ + e^{i phi_r/2} (a-)^(k-1) / [k-1]_q!]
        x [b- + e^{i phi_r/2} (b+)^(k-1) / [k-1]_q!]

    The correction terms wrap the top of each truncated ladder back to the
    bottom, making each factor (and the product) unitary with U_r^k =
    e^{i phi_r}. At this level phi_r is a free real angle; the winding
    convention phi_r = 2*pi*j*r (see wrap_phase) is imposed by the spin
    layer built on top.
    """
    k = rep.k
    defm = rep.deformation
    single = _mode_matrices(defm)
    half_wrap = half_angle_phase(phi_r)
    qfact = defm.q_factorial(k - 1)

    a_factor = single["a+"] + half_wrap * np.linalg.matrix_power(single["a-"], k - 1) / qfact
    b_factor = single["b-"] + half_wrap * np.linalg.matrix_power(single["b+"], k - 1) / qfact
    return OperatorMatrix(np.kron(a_factor, b_factor), rep.basis)


def cyclicity_residual(rep: QuonRep, phi_r: float) -> float:
    """Max-abs deviation of U_r^k from e^{i phi_r} times the identity."""
    u = build_ur(rep, phi_r)
    k = rep.k
    target = half_angle_phase(phi_r) ** 2 * np.eye(rep.dim, dtype=complex)
    return float(np.max(np.abs(np.linalg.matrix_power(u.entries, k) - target)))


def _unitary_power(mat: np.ndarray, n: int) -> np.ndarray:
    """Integer power of a unitary matrix; negative powers use the adjoint."""
    if n >= 0:
        return np.linalg.matrix_power(mat, n)
    return np.linalg.matrix_power(mat.conj().T, -n)


def build_v(rep: QuonRep) -> OperatorMatrix:
    """Diagonal unitary V = q^(N_a - N_b), with exact root-of-unity entries."""
    diag = [rep.deformation.q_power(lab.n_a - lab.n_b) for lab in rep.basis]
    return OperatorMatrix(np.diag(diag), rep.basis)


def w_generator(rep: QuonRep, phi_r: float, m1: int, m2: int) -> OperatorMatrix:
    """Lattice translation generator T_(m1,m2) = q^(m1 m2) U^m1 V^m2.

    U is the unitary shift U_r and V = q^(N_a - N_b). These close the
    sine bracket [T_m, T_n] = -2i sin((2 pi/k) m x n) T_(m+n), where
    m x n = m1 n2 - m2 n1, for any fixed winding angle phi_r.
    """
    u = build_ur(rep, phi_r).entries
    v = build_v(rep).entries
    phase = rep.deformation.q_power(m1 * m2)
    return OperatorMatrix(phase * (_unitary_power(u, m1) @ _unitary_power(v, m2)), rep.basis)


def w_commutator_check(rep: QuonRep, phi_r: float, m: tuple[int, int],
                       n: tuple[int, int]) -> float:
    """Max-abs residual of the sine-algebra bracket for one pair of labels."""
    m1, m2 = m
    n1, n2 = n
    t_m = w_generator(rep, phi_r, m1, m2)
    t_n = w_generator(rep, phi_r, n1, n2)
    t_sum = w_generator(rep, phi_r, m1 + n1, m2 + n2)
    cross = (m1 * n2 - m2 * n1) % rep.k
    coeff = -2j * math.sin(2.0 * math.pi * cross / rep.k)
    return (t_m.commutator(t_n) - coeff * t_sum).max_abs()
