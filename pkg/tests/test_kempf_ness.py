import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st

from oracles import log_ratio, log_tan_sq_distance
from pairstab.forms import SparseForm
from pairstab.kempf_ness import (
    STANDARD,
    UNITARY_INVARIANT,
    cayley_rotation,
    distance_identity_residual,
    energy,
    energy_along_psg,
    energy_scan,
    fs_distance,
    hermitian_pairing,
    norm_sq,
)
from pairstab.torus import OnePSG, TorusFrame, apply_group_element, as_matrix
from strategies import forms, sl_matrices

x, y = SparseForm.variable(0, 2), SparseForm.variable(1, 2)
ID2 = [[1, 0], [0, 1]]


def test_energy_at_identity():
    v, w = x**2 + 2 * x * y, x**4 - y**4
    s = energy(v, w, ID2)
    assert (s.norm_v_sq, s.norm_w_sq) == (5, 2)
    assert s.p == pytest.approx(math.log(2) - math.log(5), abs=1e-15)


@given(forms(2), sl_matrices(2))
def test_energy_vanishes_on_equal_pair(v, sigma):
    assert energy(v, v, sigma).p == 0


@pytest.mark.parametrize("perm", [[[0, 1], [1, 0]], [[0, -1], [1, 0]], [[-1, 0], [0, -1]]])
def test_signed_permutations_preserve_standard_energy(perm):
    v, w = x**3 + 3 * x * y**2, x**2 * y**3 - 5 * y**5
    assert energy(v, w, perm).p == energy(v, w, ID2).p


@given(forms(3, max_degree=4), st.lists(st.integers(-3, 3), min_size=3, max_size=3))
def test_invariant_norm_is_rotation_invariant(f, s):
    a, b, c = s
    k = cayley_rotation([[0, a, b], [-a, 0, c], [-b, -c, 0]])
    assert norm_sq(apply_group_element(k, f), UNITARY_INVARIANT) == norm_sq(f, UNITARY_INVARIANT)


def test_cayley_rotation_is_orthogonal():
    k = cayley_rotation([[0, 2, -1], [-2, 0, 3], [1, -3, 0]])
    for i in range(3):
        for j in range(3):
            assert sum(k[i][m] * k[j][m] for m in range(3)) == (1 if i == j else 0)


def test_fs_distance_examples():
    assert fs_distance([x**2], [x**2]) == 0
    assert fs_distance([x**2], [y**2]) == pytest.approx(math.pi / 2)
    assert fs_distance([x], [x + y]) == pytest.approx(math.pi / 4)


def _mp(q: Fraction):
    return mpmath.mpf(q.numerator) / q.denominator


@given(forms(2, degree=3), forms(2, degree=3))
def test_fs_distance_matches_mpmath(f, g):
    nf, ng = norm_sq(f), norm_sq(g)
    ip2 = hermitian_pairing([f], [g]).abs2()
    with mpmath.workdps(50):
        ref = mpmath.acos(mpmath.sqrt(_mp(ip2) / (_mp(nf) * _mp(ng))))
    assert fs_distance([f], [g]) == pytest.approx(float(ref), abs=1e-12)


def test_distance_identity_basis_vectors():
    e1 = SparseForm(2, {(1, 0): 1})
    e2 = SparseForm(2, {(0, 1): 1})
    assert distance_identity_residual(e1, e2, ID2) < 1e-12


@given(forms(2, max_degree=3, coeff=(-1000, 1000)), forms(2, max_degree=4, coeff=(-1000, 1000)), sl_matrices(2, bound=3))
def test_distance_identity_against_mpmath(v, w, sigma):
    s = energy(v, w, sigma)
    assert s.p == pytest.approx(log_ratio(s.norm_v_sq, s.norm_w_sq), abs=1e-12)
    assert abs(s.p - log_tan_sq_distance(s.norm_v_sq, s.norm_w_sq)) <= 1e-9
    assert 0 <= distance_identity_residual(v, w, sigma) <= 1e-9


def test_distance_identity_diagonal():
    sigma = [[Fraction(7, 3), 0], [0, Fraction(3, 7)]]
    assert distance_identity_residual(x**3 + y**3, x**2 * y**4 + y**6, sigma) < 1e-9


def test_slope_destabilized_pair():
    rep = energy_along_psg(x**2, x**4, OnePSG((1, -1)))
    assert rep.exact_slope == 2
    assert rep.rounded_slope == 2
    assert abs(rep.finest_slope - 2) <= 1e-3
    ps = [r["p"] for r in rep.rows]
    assert ps == sorted(ps, reverse=True)  # p -> -inf as alpha -> 0


def test_slope_equal_pair():
    rep = energy_along_psg(x * y + y**2, x * y + y**2, OnePSG((1, -1)))
    assert rep.exact_slope == 0
    assert all(r["p"] == 0 for r in rep.rows)


@pytest.mark.parametrize("v, w", [(x * y, x**2 * y**2 + x**4), (x**2, x**4 + y**4), (x**3, x**2 * y)])
def test_opposite_cocharacters_bracket_the_segment(v, w):
    from pairstab.geometry import contains_polytope
    from pairstab.torus import weight_polytope

    u = OnePSG((1, -1))
    up = energy_along_psg(v, w, u).exact_slope
    down = energy_along_psg(v, w, -u).exact_slope
    contained = bool(contains_polytope(weight_polytope(v, TorusFrame.identity(2)), weight_polytope(w, TorusFrame.identity(2))))
    assert (up <= 0 and down <= 0) is contained


@given(forms(2, max_degree=3), forms(2, max_degree=5), sl_matrices(2), st.sampled_from([1, 2, 3]))
def test_slope_finest_matches_exact(v, w, conj, k):
    rep = energy_along_psg(v, w, OnePSG((k, -k)), TorusFrame(as_matrix(conj)))
    assert rep.rounded_slope == rep.exact_slope
    assert abs(rep.finest_slope - float(rep.exact_slope)) <= 1e-3


def test_scan_equal_pair_is_zero():
    rep = energy_scan(x**2 + y**2, x**2 + y**2, samples=16)
    assert rep.min_p == 0


def test_scan_destabilized_pair_decreases_with_range():
    mins = [energy_scan(x**2, x**4, seed=3, samples=48, diag_range=r).min_p for r in (1, 4, 8)]
    assert mins[0] > mins[1] > mins[2]


def test_scan_semistable_pair_bounded_below():
    mins = [energy_scan(x * y, x**2 * y**2, seed=s, samples=48, diag_range=8).min_p for s in range(5)]
    assert min(mins) > -2


def test_scan_is_seeded():
    a = energy_scan(x**2, x**4 + x * y**3, seed=11, samples=20)
    b = energy_scan(x**2, x**4 + x * y**3, seed=11, samples=20)
    assert a == b
    assert a.rows == b.rows


def test_invariant_frame_weights():
    assert UNITARY_INVARIANT.weight(x**2, (1, 1)) == Fraction(1, 2)
    assert STANDARD.weight(x**2, (1, 1)) == 1
