import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from oracles import act, conic_dual_adjugate, proportional, to_sympy
from pairstab._exact import det
from pairstab.curves import (
    PlaneCurve,
    SingularCurveError,
    degrees_and_mu,
    equivariance_check,
    fermat_curve,
    hyperdiscriminant,
    mabuchi_bound_check,
    normalized_polytopes,
    replay_curve_certificate,
    stability_data,
    x_resultant,
)
from pairstab.forms import SparseForm, Variance
from pairstab.geometry import contains_polytope
from pairstab.pairs import Certificate, default_frames
from pairstab.torus import OnePSG, TorusFrame

CONIC, CUBIC = fermat_curve(2), fermat_curve(3)
U = sympy.symbols("x0:3")


@pytest.mark.parametrize(
    "d, deg_R, deg_delta, mu, r",
    [(2, 4, 2, 1, 8), (3, 6, 6, 0, 36), (4, 8, 12, -1, 96)],
)
def test_degree_bookkeeping(d, deg_R, deg_delta, mu, r):
    data = degrees_and_mu(d)
    assert (data.deg_R, data.deg_Delta, data.mu, data.r) == (deg_R, deg_delta, mu, r)
    # common degree d(n+1)(n(n+1)d - dμ) with n = 1
    assert r == d * 2 * (2 * d - d * mu) == deg_R * deg_delta


@pytest.mark.parametrize("d", [2, 3, 4])
def test_dual_degree(d):
    assert hyperdiscriminant(fermat_curve(d)).degree == d * (d - 1)


def _cross_oracle(F: SparseForm):
    return _cross_oracle_expr(*to_sympy(F))


@pytest.mark.parametrize("C", [CONIC, CUBIC, PlaneCurve(SparseForm(3, {(2, 0, 0): 1, (1, 1, 0): 3, (0, 0, 2): -2, (0, 2, 0): 5}))])
def test_x_resultant_is_f_of_cross_product(C):
    R = x_resultant(C)
    assert R.blocks == (3, 3) and R.variance is Variance.CONTRA
    assert R.degrees == (C.d, C.d)
    got, _ = to_sympy(R)
    assert sympy.expand(got - _cross_oracle(C.F)) == 0


def test_x_resultant_pointwise():
    rng = random.Random(5)
    R = x_resultant(CUBIC)
    for _ in range(10):
        u = [Fraction(rng.randint(-9, 9)) for _ in range(3)]
        v = [Fraction(rng.randint(-9, 9)) for _ in range(3)]
        w = (u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0])
        assert R.evaluate(u + v) == CUBIC.F.evaluate(w)


def _symmetric(c):
    return [[c[0], c[1], c[2]], [c[1], c[3], c[4]], [c[2], c[4], c[5]]]


def _conic(c) -> PlaneCurve:
    a = _symmetric(c)
    terms = {}
    for i in range(3):
        for j in range(3):
            e = [0, 0, 0]
            e[i] += 1
            e[j] += 1
            terms[tuple(e)] = terms.get(tuple(e), 0) + a[i][j]
    return PlaneCurve(SparseForm(3, terms))


smooth_conics = (
    st.lists(st.integers(-4, 4), min_size=6, max_size=6).filter(lambda c: det(_symmetric(c)) != 0).map(_conic)
)


def test_fermat_conic_dual():
    D = hyperdiscriminant(CONIC)
    assert D == SparseForm(3, {(2, 0, 0): 1, (0, 2, 0): 1, (0, 0, 2): 1}, Variance.CONTRA)


def test_diagonal_conic_dual_inverts_coefficients():
    D = hyperdiscriminant(PlaneCurve(SparseForm(3, {(2, 0, 0): 2, (0, 2, 0): 3, (0, 0, 2): 5})))
    assert D == SparseForm(3, {(2, 0, 0): 1, (0, 2, 0): Fraction(2, 3), (0, 0, 2): Fraction(2, 5)}, Variance.CONTRA)


@given(smooth_conics)
def test_conic_dual_matches_adjugate(C):
    got, _ = to_sympy(hyperdiscriminant(C))
    assert proportional(got, conic_dual_adjugate(C.F), U)


@given(smooth_conics)
def test_conic_biduality(C):
    D = hyperdiscriminant(C).with_variance(Variance.CO)
    assert hyperdiscriminant(PlaneCurve(D)).with_variance(Variance.CO).proportionality(C.F) is not None


def _cubic_through(points, seed):
    """Random cubic vanishing at the given rational points (solved exactly)."""
    rng = random.Random(seed)
    monos = [(a, b, 3 - a - b) for a in range(4) for b in range(4 - a)]
    coeffs = sympy.symbols("c0:10")
    base = {m: rng.randint(-5, 5) for m in monos}
    free = coeffs[: len(points)]
    expr = {m: (free[i] if i < len(points) else base[m]) for i, m in enumerate(monos)}
    eqs = [sum(c * sympy.prod(sympy.Integer(p[k]) ** m[k] for k in range(3)) for m, c in expr.items()) for p in points]
    sol = sympy.solve(eqs, free, dict=True)[0]
    terms = {}
    for m, c in expr.items():
        val = sympy.Rational(sympy.sympify(c).xreplace(sol))
        terms[m] = Fraction(int(val.p), int(val.q))
    return SparseForm(3, terms)


@pytest.mark.parametrize("seed", range(4))
def test_gradients_at_curve_points_lie_on_dual(seed):
    pts = [(1, 2, 3), (2, -1, 1), (0, 1, -2)]
    F = _cubic_through(pts, seed)
    C = PlaneCurve(F)
    if not C.smooth:
        pytest.skip("random cubic happened to be singular")
    D = hyperdiscriminant(C)
    for p in pts:
        assert F.evaluate(p) == 0
        grad = [F.derivative(i).evaluate(p) for i in range(3)]
        assert D.evaluate(grad) == 0
    assert D.evaluate([1, 1, 1]) != 0 or D.evaluate([1, 2, 5]) != 0


def test_fermat_cubic_dual_points():
    D = hyperdiscriminant(CUBIC)
    for p in [(1, -1, 0), (1, 0, -1), (0, 1, -1)]:
        grad = [CUBIC.F.derivative(i).evaluate(p) for i in range(3)]
        assert D.evaluate(grad) == 0


@pytest.mark.parametrize(
    "F",
    [
        SparseForm(3, {(2, 0, 0): 1, (0, 2, 0): 1}),
        SparseForm(3, {(0, 2, 1): 1, (3, 0, 0): -1, (2, 0, 1): -1}),
    ],
)
def test_singular_curves_rejected(F):
    C = PlaneCurve(F)
    assert not C.smooth
    with pytest.raises(SingularCurveError):
        hyperdiscriminant(C)


CONIC_SIGMAS = [
    [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
    [[0, 1, 0], [0, 0, 1], [1, 0, 0]],
    [[1, 1, 0], [0, 1, 0], [0, 0, 1]],
    [[2, 0, 0], [0, 3, 0], [0, 0, Fraction(1, 6)]],
    [[1, 2, 0], [0, 1, 0], [1, 0, 3]],
]
CUBIC_SIGMAS = [[[1, 1, 0], [0, 1, 0], [0, 0, 1]], [[1, 2, 0], [0, 1, 0], [1, 0, 3]]]


@pytest.mark.parametrize("C, sigma", [(CONIC, s) for s in CONIC_SIGMAS] + [(CUBIC, s) for s in CUBIC_SIGMAS])
def test_equivariance(C, sigma):
    rep = equivariance_check(C, sigma)
    assert rep.exact
    assert rep.r_factor == det(sigma) ** C.d
    if det(sigma) == 1:
        assert rep.r_factor == 1


def _cross_oracle_expr(expr, xs):
    u = sympy.Matrix(sympy.symbols("x0:3"))
    v = sympy.Matrix(sympy.symbols("x3:6"))
    w = u.cross(v)
    return sympy.expand(expr.xreplace({xs[i]: w[i] for i in range(3)}))


@pytest.mark.parametrize("C, sigma", [(CONIC, CONIC_SIGMAS[4]), (CUBIC, CUBIC_SIGMAS[1]), (CUBIC, CONIC_SIGMAS[3])])
def test_r_equivariance_against_sympy(C, sigma):
    moved_F, xs = act(C.F, sigma)
    moved_R = _cross_oracle_expr(moved_F, xs)
    acted, _ = act(x_resultant(C), sigma)
    scale = sympy.Matrix([[sympy.nsimplify(str(c)) for c in row] for row in sigma]).det() ** C.d
    assert sympy.expand(moved_R - scale * acted) == 0


def test_permutation_fixes_fermat_dual_up_to_sign():
    rep = equivariance_check(CONIC, CONIC_SIGMAS[1])
    assert rep.delta_factor in (1, -1)


@pytest.mark.parametrize("C", [CONIC, CUBIC])
def test_mabuchi_contained_on_default_frames(C):
    verdict = mabuchi_bound_check(C, default_frames(3))
    assert verdict.semistable and verdict.tested_frames == 6


@pytest.mark.parametrize("C", [CONIC, CUBIC])
def test_swapped_polytopes_separate(C):
    NR, ND = normalized_polytopes(C, TorusFrame.identity(3))
    assert contains_polytope(NR, ND)
    if NR != ND:
        res = contains_polytope(ND, NR)
        assert not res
        assert res.min_outer > res.min_inner


@pytest.mark.parametrize("k", [1, 2, 5])
def test_verdict_is_scale_free(k):
    assert mabuchi_bound_check(CUBIC, scale=k).status is mabuchi_bound_check(CUBIC).status


def test_curve_certificate_replay_rejects_forgery():
    cert = Certificate(TorusFrame.identity(3), OnePSG((1, 0, -1)), Fraction(1))
    assert not replay_curve_certificate(CUBIC, cert)


def test_stability_data_shapes():
    data = stability_data(CUBIC)
    assert data.R_X.degrees == (3, 3)
    assert data.Delta_X.degree == 6
    assert data.degrees.r == 36
