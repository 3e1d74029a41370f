"""Tests for the polar-form su(2) generators on a single multiplet."""

import math

import numpy as np
import pytest

from wigner_nonstd.halfint import HalfInt
from wigner_nonstd.quon import FockLabel, build_rep
from wigner_nonstd.su2gen import (
    ResidualReport,
    SpinSpace,
    build_spin_ops,
    casimir_identities,
    diagonal_multiplet_indices,
    quon_restriction_report,
    schwinger_embed,
    restrict_fock_operator,
    schwinger_labels,
    spin_space_for_k,
    verify_su2,
)

H = HalfInt
R_GRID = [0.0, 0.37, 1.0, 2.5]
J_GRID = [H(t) for t in (0, 1, 2, 3, 4, 7, 12, 25)]


class TestSpinSpace:
    def test_basic_properties(self):
        sp = SpinSpace(H(3), 0.37)
        assert sp.dim == 4
        assert [m.twice for m in sp.m_list] == [-3, -1, 1, 3]
        assert sp.m_index(H(-3)) == 0
        assert sp.m_index(H(3)) == 3

    def test_negative_j_rejected(self):
        with pytest.raises(ValueError):
            SpinSpace(H(-1), 0.0)

    def test_r_coerced_to_float(self):
        assert SpinSpace(H(2), 1).r == 1.0

    def test_wrap_factor(self):
        sp = SpinSpace(H(3), 0.37)
        expected = np.exp(2j * np.pi * 1.5 * 0.37)
        assert abs(sp.wrap_factor - expected) < 1e-15

    def test_winding_angle(self):
        sp = SpinSpace(H(3), 0.37)
        assert math.isclose(sp.phi_r, 2.0 * math.pi * 1.5 * 0.37)

    def test_integer_winding_has_trivial_or_sign_wrap(self):
        # phi_r = 2 pi j r: integer r on integer j is a full turn
        assert abs(SpinSpace(H(4), 1.0).wrap_factor - 1.0) < 1e-15
        # half-integer j with odd r gives the sign flip
        assert abs(SpinSpace(H(1), 1.0).wrap_factor + 1.0) < 1e-15


class TestResidualReport:
    def test_worst_and_within(self):
        rep = ResidualReport({"a": 1e-14, "b": 3e-12})
        assert rep.worst() == 3e-12
        assert rep.within(1e-11)
        assert not rep.within(1e-12)

    def test_empty_report(self):
        assert ResidualReport({}).worst() == 0.0

    def test_str_lists_entries(self):
        text = str(ResidualReport({"alpha": 1e-13}))
        assert "alpha" in text


class TestSchwingerLabels:
    def test_mapping(self):
        j, m = schwinger_labels(2, 1)
        assert (j, m) == (H(3), H(1))
        j, m = schwinger_labels(0, 0)
        assert (j, m) == (H(0), H(0))

    def test_embed_k2(self):
        # |1,0) <-> |1/2, +1/2>, |0,1) <-> |1/2, -1/2>
        emb = schwinger_embed(2)
        assert emb == {
            FockLabel(0, 1): (H(1), H(-1)),
            FockLabel(1, 0): (H(1), H(1)),
        }

    def test_embed_k3_center(self):
        # |1,1) <-> |1, 0>
        assert schwinger_embed(3)[FockLabel(1, 1)] == (H(2), H(0))

    @pytest.mark.parametrize("k", range(2, 9))
    def test_embed_is_a_bijection_onto_the_multiplet(self, k):
        emb = schwinger_embed(k)
        assert len(emb) == k
        assert all(lab.n_a + lab.n_b == k - 1 for lab in emb)
        assert all(j == H(k - 1) for j, _ in emb.values())
        assert sorted(m.twice for _, m in emb.values()) == list(
            range(-(k - 1), k, 2))

    def test_embed_rejects_k_below_two(self):
        with pytest.raises(ValueError):
            schwinger_embed(1)


class TestGeneratorMatrices:
    def test_j3_is_m_diagonal(self):
        ops = build_spin_ops(SpinSpace(H(4), 0.0))
        assert np.allclose(np.diag(ops.j3), [-2, -1, 0, 1, 2])

    def test_h_diagonal_values(self):
        ops = build_spin_ops(SpinSpace(H(4), 0.0))
        # H|j,m> = sqrt((j+m)(j-m+1)) |j,m> for j = 2
        expected = [math.sqrt((2 + m) * (2 - m + 1)) for m in (-2, -1, 0, 1, 2)]
        assert np.allclose(np.diag(ops.h), expected)

    def test_u_is_cyclic_shift_with_wrap(self):
        sp = SpinSpace(H(3), 0.37)
        ops = build_spin_ops(sp)
        u = ops.u_r
        for i in range(3):
            assert u[i + 1, i] == 1.0
        assert abs(u[0, 3] - sp.wrap_factor) < 1e-15
        assert np.count_nonzero(u) == 4

    def test_jplus_standard_entries(self):
        ops = build_spin_ops(SpinSpace(H(4), 0.37))
        jp = ops.j_plus
        for i, m in enumerate((-2, -1, 0, 1)):
            assert math.isclose(jp[i + 1, i].real,
                                math.sqrt((2 - m) * (2 + m + 1)), abs_tol=1e-14)
        # the wrap row is annihilated by H, so J+ has no corner entry
        assert jp[0, 4] == 0.0

    @pytest.mark.parametrize("r", R_GRID)
    def test_generators_independent_of_r(self, r):
        base = build_spin_ops(SpinSpace(H(5), 0.0))
        other = build_spin_ops(SpinSpace(H(5), r))
        # H kills the wrapped vector, so the winding phase cancels exactly
        assert np.array_equal(base.j_plus, other.j_plus)
        assert np.array_equal(base.j_minus, other.j_minus)
        assert np.array_equal(base.j3, other.j3)

    def test_u_does_depend_on_r(self):
        a = build_spin_ops(SpinSpace(H(5), 0.0)).u_r
        b = build_spin_ops(SpinSpace(H(5), 0.37)).u_r
        assert not np.array_equal(a, b)

    def test_j_zero_conventions(self):
        ops = build_spin_ops(SpinSpace(H(0), 0.37))
        assert ops.h.shape == (1, 1)
        assert ops.u_r[0, 0] == 1.0  # wrap phase e^{2 pi i * 0 * r} = 1
        assert ops.j_plus[0, 0] == 0.0
        assert ops.j_squared[0, 0] == 0.0

    def test_adjoint_and_casimir_accessors(self):
        ops = build_spin_ops(SpinSpace(H(3), 0.37))
        assert np.array_equal(ops.u_r_dag, ops.u_r.conj().T)
        assert np.array_equal(ops.casimir, ops.j_squared)
        assert np.allclose(ops.casimir, 1.5 * 2.5 * np.eye(4), atol=1e-13)


class TestAlgebraResiduals:
    @pytest.mark.parametrize("j", J_GRID)
    @pytest.mark.parametrize("r", R_GRID)
    def test_su2_closure(self, j, r):
        report = verify_su2(build_spin_ops(SpinSpace(j, r)))
        assert report.within(1e-11), str(report)

    @pytest.mark.parametrize("j", J_GRID)
    @pytest.mark.parametrize("r", R_GRID)
    def test_casimir(self, j, r):
        report = casimir_identities(build_spin_ops(SpinSpace(j, r)))
        assert report.within(1e-11), str(report)

    def test_example_multiplet(self):
        # j = 3/2 with a generic winding: everything closes tightly
        report = verify_su2(build_spin_ops(SpinSpace(H(3), 1.0)))
        assert report.within(1e-13), str(report)

    @pytest.mark.parametrize("j", [H(2), H(5), H(8)])
    @pytest.mark.parametrize("r", [0.0, 0.37, 2.5])
    def test_casimir_commutes_with_shift(self, j, r):
        report = casimir_identities(build_spin_ops(SpinSpace(j, r)))
        assert report.residuals["casimir_commutes_u"] < 1e-12

    def test_u_spectrum_is_scaled_roots_of_unity(self):
        # eigenvalues of U_r are the k-th roots of e^{i phi_r}
        sp = SpinSpace(H(3), 0.37)
        eig = np.linalg.eigvals(build_spin_ops(sp).u_r)
        k = sp.dim
        expected = [sp.wrap_factor ** (1.0 / k) * np.exp(2j * np.pi * t / k)
                    for t in range(k)]
        got = sorted(eig, key=lambda z: np.angle(z))
        exp_sorted = sorted(expected, key=lambda z: np.angle(z))
        assert max(abs(a - b) for a, b in zip(got, exp_sorted)) < 1e-12


class TestQuonRestriction:
    def test_multiplet_indices(self):
        assert diagonal_multiplet_indices(3) == [2, 4, 6]
        assert diagonal_multiplet_indices(2) == [1, 2]

    def test_multiplet_indices_are_m_ascending(self):
        # index n_a k + (k-1-n_a) holds the state with m = n_a - j
        k = 4
        for pos, idx in enumerate(diagonal_multiplet_indices(k)):
            n_a, n_b = divmod(idx, k)
            j, m = schwinger_labels(n_a, n_b)
            assert j == H(k - 1)
            assert m.twice == -(k - 1) + 2 * pos

    def test_restrict_rejects_wrong_dimension(self):
        rep = build_rep(3)
        with pytest.raises(ValueError):
            restrict_fock_operator(rep.a_plus, 4)

    @pytest.mark.parametrize("k", range(2, 11))
    @pytest.mark.parametrize("r", [0.0, 0.37, 2.5])
    def test_oscillator_construction_matches_closed_form(self, k, r):
        report = quon_restriction_report(build_rep(k), r)
        assert report.within(1e-12), str(report)

    @pytest.mark.parametrize("k", [2, 3, 5, 8])
    def test_polar_factors_never_leak(self, k):
        report = quon_restriction_report(build_rep(k), 0.37)
        assert report.residuals["h_leakage"] == 0.0
        assert report.residuals["u_leakage"] == 0.0

    def test_spin_space_for_k(self):
        sp = spin_space_for_k(4, 0.37)
        assert sp.j == H(3)
        assert sp.r == 0.37
        assert sp.dim == 4
