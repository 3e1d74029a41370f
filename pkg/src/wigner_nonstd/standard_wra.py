"""Exact Wigner-Racah algebra in the familiar {J^2, J3} scheme.

Clebsch-Gordan coefficients and 3-jm / 6-j / 9-j symbols in the
Condon-Shortley convention, evaluated with big-integer rational arithmetic.
Every symbol is a signed square root of a rational number; conversion to
float is the only lossy step, and happens only at the caller's request.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .halfint import HalfInt, m_compatible, triangle

# Factorial table, grown on demand up to a configurable bound. The default
# comfortably covers sums like j1+j2+j3+1 for 2j <= 200.
MAX_FACTORIAL_ARG = 402
_FACTORIALS: list[int] = [1]


def _fact(n: int) -> int:
    if n < 0:
        raise ValueError(f"factorial of negative argument {n}")
    if n > MAX_FACTORIAL_ARG:
        raise ValueError(
            f"factorial argument {n} exceeds MAX_FACTORIAL_ARG={MAX_FACTORIAL_ARG}; "
            "raise wigner_nonstd.standard_wra.MAX_FACTORIAL_ARG to extend the table"
        )
    while len(_FACTORIALS) <= n:
        _FACTORIALS.append(_FACTORIALS[-1] * len(_FACTORIALS))
    return _FACTORIALS[n]


class IncompatibleRadicalError(ValueError):
    """Adding two exact square roots whose ratio is not a rational square."""


def _sqrt_of_square(f: Fraction):
    """Exact square root of a non-negative Fraction, or None if not a square."""
    rn = math.isqrt(f.numerator)
    rd = math.isqrt(f.denominator)
    if rn * rn == f.numerator and rd * rd == f.denominator:
        return Fraction(rn, rd)
    return None


@dataclass(frozen=True)
class ExactSqrtRational:
    """The value sign * sqrt(magnitude_squared), held exactly.

    sign is -1, 0 or +1 and magnitude_squared a non-negative Fraction;
    magnitude_squared == 0 iff sign == 0.
    """

    sign: int
    magnitude_squared: Fraction

    def __post_init__(self) -> None:
        if self.sign not in (-1, 0, 1):
            raise ValueError(f"sign must be -1, 0 or +1, got {self.sign}")
        if self.magnitude_squared < 0:
            raise ValueError("magnitude_squared must be non-negative")
        if (self.sign == 0) != (self.magnitude_squared == 0):
            raise ValueError("magnitude_squared must vanish exactly when sign does")

    @classmethod
    def zero(cls) -> "ExactSqrtRational":
        return cls(0, Fraction(0))

    @classmethod
    def one(cls) -> "ExactSqrtRational":
        return cls(1, Fraction(1))

    @classmethod
    def from_sign(cls, exponent: int) -> "ExactSqrtRational":
        """(-1)**exponent as an exact value."""
        return cls(-1 if exponent % 2 else 1, Fraction(1))

    @classmethod
    def from_rational_times_sqrt(cls, coeff: Fraction, radicand: Fraction) -> "ExactSqrtRational":
        """coeff * sqrt(radicand) folded into canonical (sign, square) form."""
        if radicand < 0:
            raise ValueError("radicand must be non-negative")
        if coeff == 0 or radicand == 0:
            return cls.zero()
        sign = 1 if coeff > 0 else -1
        return cls(sign, coeff * coeff * radicand)

    @classmethod
    def from_rational(cls, value: Fraction | int) -> "ExactSqrtRational":
        return cls.from_rational_times_sqrt(Fraction(value), Fraction(1))

    def is_zero(self) -> bool:
        return self.sign == 0

    def __neg__(self) -> "ExactSqrtRational":
        return ExactSqrtRational(-self.sign, self.magnitude_squared)

    def __mul__(self, other: "ExactSqrtRational") -> "ExactSqrtRational":
        sign = self.sign * other.sign
        if sign == 0:
            return ExactSqrtRational.zero()
        return ExactSqrtRational(sign, self.magnitude_squared * other.magnitude_squared)

    def __add__(self, other: "ExactSqrtRational") -> "ExactSqrtRational":
        if self.sign == 0:
            return other
        if other.sign == 0:
            return self
        ratio = _sqrt_of_square(other.magnitude_squared / self.magnitude_squared)
        if ratio is None:
            raise IncompatibleRadicalError(
                "cannot add sqrt values whose ratio is not a rational square; "
                "use RadicalSum for multi-class sums"
            )
        # other = (other.sign * ratio) * sqrt(self.magnitude_squared)
        coeff = Fraction(self.sign) + other.sign * ratio
        return ExactSqrtRational.from_rational_times_sqrt(coeff, self.magnitude_squared)

    def __sub__(self, other: "ExactSqrtRational") -> "ExactSqrtRational":
        return self + (-other)

    def __float__(self) -> float:
        return self.sign * math.sqrt(self.magnitude_squared)

    @property
    def signed_square(self) -> Fraction:
        """sign * magnitude_squared; a convenient exact scalar for comparisons."""
        return self.sign * self.magnitude_squared

    def __str__(self) -> str:
        if self.sign == 0:
            return "0"
        root = _sqrt_of_square(self.magnitude_squared)
        prefix = "-" if self.sign < 0 else ""
        if root is not None:
            return f"{prefix}{root}"
        return f"{prefix}sqrt({self.magnitude_squared})"


class RadicalSum:
    """Exact sum of sqrt-rational terms spanning several radical classes.

    Terms are grouped by testing whether the ratio of radicands is a rational
    square, so no integer factorization is ever needed. Used for contractions
    (orthogonality sums, recoupling sums) that must cancel exactly.
    """

    def __init__(self) -> None:
        # parallel lists: radicand representative -> accumulated rational coeff
        self._radicands: list[Fraction] = []
        self._coeffs: list[Fraction] = []

    def add_term(self, coeff: Fraction, radicand: Fraction) -> None:
        """Accumulate coeff * sqrt(radicand)."""
        if coeff == 0 or radicand == 0:
            return
        if radicand < 0:
            raise ValueError("radicand must be non-negative")
        for i, rep in enumerate(self._radicands):
            ratio = _sqrt_of_square(radicand / rep)
            if ratio is not None:
                self._coeffs[i] += coeff * ratio
                return
        self._radicands.append(radicand)
        self._coeffs.append(coeff)

    def add(self, value: ExactSqrtRational, scale: Fraction = Fraction(1)) -> None:
        if value.sign != 0:
            self.add_term(scale * value.sign, value.magnitude_squared)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self._coeffs)

    def to_exact(self) -> ExactSqrtRational:
        live = [(r, c) for r, c in zip(self._radicands, self._coeffs) if c != 0]
        if not live:
            return ExactSqrtRational.zero()
        if len(live) > 1:
            raise IncompatibleRadicalError(
                f"sum spans {len(live)} distinct radical classes; not a single sqrt"
            )
        radicand, coeff = live[0]
        return ExactSqrtRational.from_rational_times_sqrt(coeff, radicand)

    def __float__(self) -> float:
        return float(sum(c * math.sqrt(r) for r, c in zip(self._radicands, self._coeffs)))


def _as_int(twice_value: int) -> int:
    """Halve a doubled label known to be even (guards against parity bugs)."""
    if twice_value % 2 != 0:
        raise ValueError(f"label combination is not an integer: {twice_value}/2")
    return twice_value // 2


@lru_cache(maxsize=None)
def _cg_twice(tj1: int, tj2: int, tm1: int, tm2: int, tj: int, tm: int) -> ExactSqrtRational:
    if tm1 + tm2 != tm:
        return ExactSqrtRational.zero()
    if not (abs(tj1 - tj2) <= tj <= tj1 + tj2) or (tj1 + tj2 + tj) % 2 != 0:
        return ExactSqrtRational.zero()
    if abs(tm1) > tj1 or (tm1 - tj1) % 2 != 0:
        return ExactSqrtRational.zero()
    if abs(tm2) > tj2 or (tm2 - tj2) % 2 != 0:
        return ExactSqrtRational.zero()
    if abs(tm) > tj or (tm - tj) % 2 != 0:
        return ExactSqrtRational.zero()

    # Racah's closed form for (j1 j2 m1 m2 | j m); all combinations below are
    # guaranteed integral by the selection rules handled above.
    a = _as_int(tj1 + tj2 - tj)   # j1+j2-j
    b = _as_int(tj1 - tj2 + tj)   # j1-j2+j
    c = _as_int(-tj1 + tj2 + tj)  # -j1+j2+j
    jp_m = _as_int(tj + tm)
    jm_m = _as_int(tj - tm)
    j1m_m1 = _as_int(tj1 - tm1)
    j1p_m1 = _as_int(tj1 + tm1)
    j2m_m2 = _as_int(tj2 - tm2)
    j2p_m2 = _as_int(tj2 + tm2)

    prefactor = Fraction(
        (tj + 1) * _fact(a) * _fact(b) * _fact(c)
        * _fact(jp_m) * _fact(jm_m)
        * _fact(j1m_m1) * _fact(j1p_m1)
        * _fact(j2m_m2) * _fact(j2p_m2),
        _fact(_as_int(tj1 + tj2 + tj) + 1),
    )

    k_lo = max(0, _as_int(tj2 - tj - tm1), _as_int(tj1 - tj + tm2))
    k_hi = min(a, j1m_m1, j2p_m2)
    total = Fraction(0)
    for k in range(k_lo, k_hi + 1):
        denom = (
            _fact(k)
            * _fact(a - k)
            * _fact(j1m_m1 - k)
            * _fact(j2p_m2 - k)
            * _fact(_as_int(tj - tj2 + tm1) + k)
            * _fact(_as_int(tj - tj1 - tm2) + k)
        )
        term = Fraction((-1) ** k, denom)
        total += term
    return ExactSqrtRational.from_rational_times_sqrt(total, prefactor)


def cg(j1: HalfInt, j2: HalfInt, m1: HalfInt, m2: HalfInt, j: HalfInt, m: HalfInt) -> ExactSqrtRational:
    """Clebsch-Gordan coefficient (j1 j2 m1 m2 | j m), Condon-Shortley convention.

    Total on all half-integer labels: any selection-rule violation (m sum,
    coupling range, projection range or parity) yields an exact zero.
    """
    return _cg_twice(j1.twice, j2.twice, m1.twice, m2.twice, j.twice, m.twice)


def threejm(j1: HalfInt, j2: HalfInt, j3: HalfInt,
            m1: HalfInt, m2: HalfInt, m3: HalfInt) -> ExactSqrtRational:
    """Wigner 3-jm symbol, via (-1)^(j1-j2-m3) (j1 j2 m1 m2 | j3 -m3)/sqrt(2j3+1)."""
    value = _cg_twice(j1.twice, j2.twice, m1.twice, m2.twice, j3.twice, -m3.twice)
    if value.is_zero():
        return value
    phase = ExactSqrtRational.from_sign(_as_int(j1.twice - j2.twice - m3.twice))
    scale = ExactSqrtRational(1, Fraction(1, j3.twice + 1))
    return phase * scale * value


def _triangle_coeff_squared(ta: int, tb: int, tc: int) -> Fraction:
    """Square of the triangle coefficient Delta(a b c)."""
    return Fraction(
        _fact(_as_int(ta + tb - tc)) * _fact(_as_int(ta - tb + tc)) * _fact(_as_int(-ta + tb + tc)),
        _fact(_as_int(ta + tb + tc) + 1),
    )


def _triads_ok(*triads: tuple[int, int, int]) -> bool:
    for ta, tb, tc in triads:
        if not (abs(ta - tb) <= tc <= ta + tb) or (ta + tb + tc) % 2 != 0:
            return False
    return True


@lru_cache(maxsize=None)
def _sixj_twice(tj1: int, tj2: int, tj3: int, tj4: int, tj5: int, tj6: int) -> ExactSqrtRational:
    if not _triads_ok((tj1, tj2, tj3), (tj1, tj5, tj6), (tj4, tj2, tj6), (tj4, tj5, tj3)):
        return ExactSqrtRational.zero()

    radicand = (
        _triangle_coeff_squared(tj1, tj2, tj3)
        * _triangle_coeff_squared(tj1, tj5, tj6)
        * _triangle_coeff_squared(tj4, tj2, tj6)
        * _triangle_coeff_squared(tj4, tj5, tj3)
    )

    a1 = _as_int(tj1 + tj2 + tj3)
    a2 = _as_int(tj1 + tj5 + tj6)
    a3 = _as_int(tj4 + tj2 + tj6)
    a4 = _as_int(tj4 + tj5 + tj3)
    b1 = _as_int(tj1 + tj2 + tj4 + tj5)
    b2 = _as_int(tj2 + tj3 + tj5 + tj6)
    b3 = _as_int(tj3 + tj1 + tj6 + tj4)

    total = Fraction(0)
    for t in range(max(a1, a2, a3, a4), min(b1, b2, b3) + 1):
        denom = (
            _fact(t - a1) * _fact(t - a2) * _fact(t - a3) * _fact(t - a4)
            * _fact(b1 - t) * _fact(b2 - t) * _fact(b3 - t)
        )
        total += Fraction((-1) ** t * _fact(t + 1), denom)
    return ExactSqrtRational.from_rational_times_sqrt(total, radicand)


def sixj(j1: HalfInt, j2: HalfInt, j3: HalfInt,
         j4: HalfInt, j5: HalfInt, j6: HalfInt) -> ExactSqrtRational:
    """6-j symbol {j1 j2 j3; j4 j5 j6} by the Racah single-sum formula.

    Exact zero unless all four triads (j1 j2 j3), (j1 j5 j6), (j4 j2 j6),
    (j4 j5 j3) satisfy the triangle rule.
    """
    return _sixj_twice(j1.twice, j2.twice, j3.twice, j4.twice, j5.twice, j6.twice)


@lru_cache(maxsize=None)
def _ninej_twice(tj1: int, tj2: int, tj3: int,
                 tj4: int, tj5: int, tj6: int,
                 tj7: int, tj8: int, tj9: int) -> ExactSqrtRational:
    rows = ((tj1, tj2, tj3), (tj4, tj5, tj6), (tj7, tj8, tj9))
    cols = ((tj1, tj4, tj7), (tj2, tj5, tj8), (tj3, tj6, tj9))
    if not _triads_ok(*rows, *cols):
        return ExactSqrtRational.zero()

    tx_lo = max(abs(tj1 - tj9), abs(tj4 - tj8), abs(tj2 - tj6))
    tx_hi = min(tj1 + tj9, tj4 + tj8, tj2 + tj6)
    # Every x-term shares one radical class (the x-dependent triangle
    # coefficients pair up across the three 6-j factors), so plain exact
    # addition suffices.
    total = ExactSqrtRational.zero()
    for tx in range(tx_lo, tx_hi + 1, 2):
        term = (
            _sixj_twice(tj1, tj4, tj7, tj8, tj9, tx)
            * _sixj_twice(tj2, tj5, tj8, tj4, tx, tj6)
            * _sixj_twice(tj3, tj6, tj9, tx, tj1, tj2)
        )
        weight = ExactSqrtRational.from_rational(Fraction((-1) ** tx * (tx + 1)))
        total = total + weight * term
    return total


def ninej(j1: HalfInt, j2: HalfInt, j3: HalfInt,
          j4: HalfInt, j5: HalfInt, j6: HalfInt,
          j7: HalfInt, j8: HalfInt, j9: HalfInt) -> ExactSqrtRational:
    """9-j symbol as the single sum over x of (-1)^(2x) (2x+1) times three 6-j symbols.

    Exact zero on any row or column triangle failure.
    """
    return _ninej_twice(j1.twice, j2.twice, j3.twice,
                        j4.twice, j5.twice, j6.twice,
                        j7.twice, j8.twice, j9.twice)


def metric_standard(j: HalfInt, m: HalfInt, mp: HalfInt) -> ExactSqrtRational:
    """Standard metric tensor: (-1)^(j-m) when mp == -m, else 0."""
    if not (m_compatible(j, m) and m_compatible(j, mp)):
        return ExactSqrtRational.zero()
    if mp.twice != -m.twice:
        return ExactSqrtRational.zero()
    return ExactSqrtRational.from_sign(_as_int(j.twice - m.twice))


# ---------------------------------------------------------------------------
# Float conveniences used by the non-standard layer and by tabulation.

@lru_cache(maxsize=None)
def _cg_float_twice(tj1, tj2, tm1, tm2, tj, tm) -> float:
    return float(_cg_twice(tj1, tj2, tm1, tm2, tj, tm))


def cg_float(j1: HalfInt, j2: HalfInt, m1: HalfInt, m2: HalfInt, j: HalfInt, m: HalfInt) -> float:
    return _cg_float_twice(j1.twice, j2.twice, m1.twice, m2.twice, j.twice, m.twice)


@lru_cache(maxsize=None)
def _cg_tensor_twice(tj1: int, tj2: int, tj: int) -> np.ndarray:
    d1, d2, d = tj1 + 1, tj2 + 1, tj + 1
    out = np.zeros((d1, d2, d))
    for i1, tm1 in enumerate(range(-tj1, tj1 + 1, 2)):
        for i2, tm2 in enumerate(range(-tj2, tj2 + 1, 2)):
            tm = tm1 + tm2
            if abs(tm) <= tj:
                out[i1, i2, (tm + tj) // 2] = _cg_float_twice(tj1, tj2, tm1, tm2, tj, tm)
    out.setflags(write=False)
    return out


def cg_tensor(j1: HalfInt, j2: HalfInt, j: HalfInt) -> np.ndarray:
    """Dense float array of (j1 j2 m1 m2 | j m), indices ascending in m."""
    if not triangle(j1, j2, j):
        return np.zeros((j1.twice + 1, j2.twice + 1, j.twice + 1))
    return _cg_tensor_twice(j1.twice, j2.twice, j.twice)


@lru_cache(maxsize=None)
def _threejm_tensor_twice(tj1: int, tj2: int, tj3: int) -> np.ndarray:
    d1, d2, d3 = tj1 + 1, tj2 + 1, tj3 + 1
    out = np.zeros((d1, d2, d3))
    for i1, tm1 in enumerate(range(-tj1, tj1 + 1, 2)):
        for i2, tm2 in enumerate(range(-tj2, tj2 + 1, 2)):
            tm3 = -tm1 - tm2
            if abs(tm3) <= tj3:
                value = threejm(HalfInt(tj1), HalfInt(tj2), HalfInt(tj3),
                                HalfInt(tm1), HalfInt(tm2), HalfInt(tm3))
                out[i1, i2, (tm3 + tj3) // 2] = float(value)
    out.setflags(write=False)
    return out


def threejm_tensor(j1: HalfInt, j2: HalfInt, j3: HalfInt) -> np.ndarray:
    """Dense float array of the 3-jm symbol, indices ascending in m."""
    return _threejm_tensor_twice(j1.twice, j2.twice, j3.twice)
