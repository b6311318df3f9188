"""Plane curves: Chow form, dual curve, and the polytope test for the K-energy.

For a smooth plane curve ``X = {F = 0}`` of degree ``d``:

* the X-resultant is ``R_X(u, v) = F(u × v)`` on pairs of lines (bidegree ``(d, d)``);
* the hyperdiscriminant is the equation of the dual curve (degree ``d(d-1)``).

The normalized powers ``R = R_X^{deg Δ_X}`` and ``Δ = Δ_X^{deg R_X}`` are never
expanded; their weight polytopes are scaled copies.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Sequence

import sympy

from ._exact import Gaussian, det
from .forms import FormError, SparseForm, Variance
from .geometry import LatticePolytope, contains_polytope, scale_polytope
from .pairs import Certificate, PairVerdict, Status, default_frames
from .torus import OnePSG, TorusFrame, apply_group_element, as_matrix, one_psg_weight, weight_polytope

__all__ = [
    "CurveError",
    "SingularCurveError",
    "PlaneCurve",
    "DegreeData",
    "CurveStabilityData",
    "EquivarianceReport",
    "degrees_and_mu",
    "x_resultant",
    "hyperdiscriminant",
    "stability_data",
    "normalized_polytopes",
    "mabuchi_bound_check",
    "equivariance_check",
    "fermat_curve",
    "replay_curve_certificate",
]


class CurveError(FormError):
    pass


class SingularCurveError(CurveError):
    pass


@dataclass(frozen=True)
class DegreeData:
    d: int
    deg_R: int
    deg_Delta: int
    mu: int
    r: int


def degrees_and_mu(d: int) -> DegreeData:
    """Degrees of ``R_X`` and ``Δ_X`` for a smooth plane curve, ``μ = 3 - d``, and ``r``."""
    if d < 2:
        raise CurveError("plane curves of degree < 2 are linear")
    n = 1
    deg_R = (n + 1) * d
    deg_Delta = d * (d - 1)
    mu = 3 - d
    r = deg_R * deg_Delta
    # common degree d(n+1)(n(n+1)d - dμ)
    assert r == d * (n + 1) * (n * (n + 1) * d - d * mu), "degree identity failed"
    return DegreeData(d, deg_R, deg_Delta, mu, r)


def _sympy_coeff(c: Gaussian):
    return sympy.Rational(c.re.numerator, c.re.denominator) + sympy.I * sympy.Rational(
        c.im.numerator, c.im.denominator
    )


def _is_smooth(F: SparseForm) -> bool:
    """Singular locus ``{∇F = 0}`` is empty in P^2 (checked with a Gröbner basis)."""
    gens = sympy.symbols("x y z")
    partials = []
    for i in range(3):
        dF = F.derivative(i)
        expr = sum(
            (_sympy_coeff(c) * sympy.Mul(*[g**a for g, a in zip(gens, e)]) for e, c in dF.terms.items()),
            sympy.Integer(0),
        )
        partials.append(sympy.expand(expr))
    domain = sympy.QQ if all(c.is_real for c in F.terms.values()) else sympy.QQ_I
    G = sympy.groebner(partials, *gens, order="grevlex", domain=domain)
    pure = set()
    for g in G.exprs:
        lm = sympy.Poly(g, *gens).monoms(order="grevlex")[0]
        nz = [i for i, a in enumerate(lm) if a]
        if len(nz) == 1:
            pure.add(nz[0])
        elif not nz:
            return True  # unit ideal
    return pure == {0, 1, 2}


@dataclass(frozen=True)
class PlaneCurve:
    F: SparseForm

    def __post_init__(self):
        F = self.F.require_nonzero("curve equation")
        if F.num_vars != 3 or F.blocks != (3,) or F.variance is not Variance.CO:
            raise CurveError("a plane curve is a covariant form in 3 variables")
        if F.degree < 2:
            raise CurveError("plane curves need degree >= 2")

    @property
    def d(self) -> int:
        return self.F.degree

    @cached_property
    def smooth(self) -> bool:
        return _is_smooth(self.F)

    def transform(self, sigma) -> PlaneCurve:
        return PlaneCurve(apply_group_element(sigma, self.F))


def fermat_curve(d: int) -> PlaneCurve:
    return PlaneCurve(SparseForm(3, {(d, 0, 0): 1, (0, d, 0): 1, (0, 0, d): 1}))


def _contra_var(i: int, n: int, blocks) -> SparseForm:
    e = [0] * n
    e[i] = 1
    return SparseForm(n, {tuple(e): 1}, Variance.CONTRA, blocks)


@lru_cache(maxsize=256)
def _x_resultant(F: SparseForm) -> SparseForm:
    blocks = (3, 3)
    u = [_contra_var(i, 6, blocks) for i in range(3)]
    v = [_contra_var(3 + i, 6, blocks) for i in range(3)]
    cross = [
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    ]
    return F.substitute(cross)


def x_resultant(C: PlaneCurve) -> SparseForm:
    """``R_X(u, v) = F(u × v)``: vanishes iff the lines ``u`` and ``v`` meet on the curve."""
    return _x_resultant(C.F)


def _det_forms(mat: list[list[SparseForm | None]], zero: SparseForm) -> SparseForm:
    """Laplace expansion along rows, memoized on the set of used columns."""
    n = len(mat)
    memo: dict[tuple[int, int], SparseForm] = {}

    def minor(row: int, used: int) -> SparseForm:
        if row == n:
            return None  # empty product
        key = (row, used)
        if key in memo:
            return memo[key]
        total = zero
        sign = 1
        for col in range(n):
            if used >> col & 1:
                continue
            entry = mat[row][col]
            if entry is not None:
                rest = minor(row + 1, used | (1 << col))
                if rest is None or not rest.is_zero():
                    term = entry if rest is None else entry * rest
                    total = total + term if sign > 0 else total - term
            sign = -sign
        memo[key] = total
        return total

    out = minor(0, 0)
    return zero if out is None else out


def _line_restriction(F: SparseForm) -> SparseForm:
    """``F(w x, w y, -(u x + v y))`` as a form in ``(x, y | u, v, w)``."""
    n, blocks = 5, (2, 3)

    def mono(e):
        return SparseForm(n, {e: 1}, Variance.CO, blocks)

    X = mono((1, 0, 0, 0, 1))
    Y = mono((0, 1, 0, 0, 1))
    Z = -(mono((1, 0, 1, 0, 0)) + mono((0, 1, 0, 1, 0)))
    return F.substitute([X, Y, Z])


@lru_cache(maxsize=256)
def _hyperdiscriminant(F: SparseForm) -> SparseForm:
    d = F.degree
    m = d - 1
    G = _line_restriction(F)
    partials = [G.derivative(0), G.derivative(1)]

    def coeffs(P: SparseForm) -> list[SparseForm | None]:
        # coefficient of x^(m-k) y^k as a contravariant form in (u, v, w)
        buckets: list[dict] = [dict() for _ in range(m + 1)]
        for e, c in P.terms.items():
            buckets[e[1]][e[2:]] = c
        return [SparseForm(3, b, Variance.CONTRA) if b else None for b in buckets]

    p, q = coeffs(partials[0]), coeffs(partials[1])
    size = 2 * m
    syl: list[list[SparseForm | None]] = []
    for src in (p, q):
        for shift in range(m):
            row: list[SparseForm | None] = [None] * size
            for k, c in enumerate(src):
                row[shift + k] = c
            syl.append(row)
    zero = SparseForm(3, {}, Variance.CONTRA)
    res = _det_forms(syl, zero)
    if res.is_zero():
        raise SingularCurveError("elimination degenerated: the line discriminant vanishes identically")
    extraneous = d * (d - 1)
    try:
        delta = res.divide_monomial((0, 0, extraneous))
    except FormError:
        low = min(e[2] for e in res.terms)
        raise CurveError(
            f"extraneous factor w^{extraneous} does not divide the eliminant (lowest w-power {low})"
        ) from None
    if delta.degree != d * (d - 1):
        raise CurveError(f"dual curve has degree {delta.degree}, expected {d * (d - 1)}")
    return delta.monic()


def hyperdiscriminant(C: PlaneCurve) -> SparseForm:
    """Equation of the dual curve, contravariant, degree ``d(d-1)``, leading coefficient 1.

    Obtained as the discriminant of ``F`` restricted to the line ``ux + vy + wz = 0``
    (a Sylvester resultant of the two partials), divided by ``w^{d(d-1)}``.
    """
    if not C.smooth:
        raise SingularCurveError("the curve is singular; its dual has the wrong degree")
    return _hyperdiscriminant(C.F)


@dataclass(frozen=True)
class CurveStabilityData:
    R_X: SparseForm
    Delta_X: SparseForm
    degrees: DegreeData


def stability_data(C: PlaneCurve) -> CurveStabilityData:
    R = x_resultant(C)
    D = hyperdiscriminant(C)
    deg = degrees_and_mu(C.d)
    if R.degrees != (C.d, C.d) or D.degree != deg.deg_Delta:
        raise CurveError("eliminated degrees disagree with the degree bookkeeping")
    return CurveStabilityData(R, D, deg)


def normalized_polytopes(
    C: PlaneCurve, frame: TorusFrame, scale: int = 1
) -> tuple[LatticePolytope, LatticePolytope]:
    """``(N(R), N(Δ))`` with ``N(R) = deg Δ_X · N(R_X)`` and ``N(Δ) = deg R_X · N(Δ_X)``."""
    data = stability_data(C)
    NR = scale_polytope(weight_polytope(data.R_X, frame), data.degrees.deg_Delta * scale)
    ND = scale_polytope(weight_polytope(data.Delta_X, frame), data.degrees.deg_R * scale)
    return NR, ND


def mabuchi_bound_check(
    C: PlaneCurve, frames: Sequence[TorusFrame] | None = None, scale: int = 1
) -> PairVerdict:
    """Test ``N(R) ⊆ N(Δ)`` on each frame; a failure certifies an unbounded degeneration."""
    if frames is None:
        frames = default_frames(3)
    frames = list(frames)
    if not frames:
        raise ValueError("at least one torus frame is required")
    if scale < 1:
        raise ValueError("scale must be a positive integer")
    data = stability_data(C)
    for frame in frames:
        NR, ND = normalized_polytopes(C, frame, scale)
        res = contains_polytope(NR, ND)
        if not res.contained:
            u = OnePSG.from_direction(res.certificate)
            margin = scale * (
                data.degrees.deg_R * one_psg_weight(data.Delta_X, frame, u)
                - data.degrees.deg_Delta * one_psg_weight(data.R_X, frame, u)
            )
            assert margin > 0
            return PairVerdict(Status.DESTABILIZED, Certificate(frame, u, margin), len(frames))
    return PairVerdict(Status.SEMISTABLE_FOR_TESTED_TORI, None, len(frames))


def replay_curve_certificate(C: PlaneCurve, cert: Certificate, scale: int = 1) -> bool:
    data = stability_data(C)
    margin = scale * (
        data.degrees.deg_R * one_psg_weight(data.Delta_X, cert.frame, cert.u)
        - data.degrees.deg_Delta * one_psg_weight(data.R_X, cert.frame, cert.u)
    )
    return margin > 0 and margin == cert.margin


@dataclass(frozen=True)
class EquivarianceReport:
    """Scalars ``c`` with ``R(σX) = c_R σ·R(X)`` and ``Δ(σX) = c_Δ σ·Δ(X)``.

    With the conventions of :mod:`pairstab.torus`, ``c_R = det(σ)^d`` exactly.
    ``None`` means the two sides are not proportional.
    """

    det: Gaussian
    r_factor: Gaussian | None
    delta_factor: Gaussian | None
    expected_r_factor: Gaussian = field(default=None)

    @property
    def exact(self) -> bool:
        return (
            self.r_factor is not None
            and self.delta_factor is not None
            and self.r_factor == self.expected_r_factor
        )


def equivariance_check(C: PlaneCurve, sigma) -> EquivarianceReport:
    s = as_matrix(sigma)
    moved = C.transform(s)
    R_moved = x_resultant(moved)
    R_acted = apply_group_element(s, x_resultant(C))
    D_moved = hyperdiscriminant(moved)
    D_acted = apply_group_element(s, hyperdiscriminant(C))
    dt = det(s)
    return EquivarianceReport(
        det=dt,
        r_factor=R_moved.proportionality(R_acted),
        delta_factor=D_moved.proportionality(D_acted),
        expected_r_factor=dt ** C.d,
    )
