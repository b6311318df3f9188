"""The energy ``p_{v,w}(σ) = log||σ·w||² - log||σ·v||²`` and its asymptotics.

Norms-squared are exact rationals; logarithms only appear in reported
floats.
"""

from __future__ import annotations

import math
import random
import statistics
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Sequence

from ._exact import Gaussian, as_fraction, identity, inverse, matmul
from .forms import SparseForm
from .pairs import Pair, destabilizing_slope
from .torus import Matrix, OnePSG, TorusFrame, apply_group_element, as_matrix, diagonal

__all__ = [
    "HermitianFrame",
    "STANDARD",
    "UNITARY_INVARIANT",
    "EnergySample",
    "SlopeReport",
    "ScanReport",
    "DEFAULT_ALPHAS",
    "norm_sq",
    "hermitian_pairing",
    "energy",
    "fs_distance",
    "distance_identity_residual",
    "energy_along_psg",
    "energy_scan",
    "cayley_rotation",
]

DEFAULT_ALPHAS = tuple(Fraction(1, 10**k) for k in range(1, 7))


@dataclass(frozen=True)
class HermitianFrame:
    """Diagonal Hermitian norm on a monomial basis.

    ``scheme="standard"`` gives every monomial weight 1.
    ``scheme="invariant"`` uses ``a!/d!`` per block, which makes the norm
    invariant under unitary substitutions. ``overrides`` maps exponent
    tuples to explicit positive weights.
    """

    scheme: str = "standard"
    overrides: tuple = ()

    def __post_init__(self):
        if self.scheme not in ("standard", "invariant"):
            raise ValueError(f"unknown Hermitian scheme {self.scheme!r}")
        ov = tuple(sorted((tuple(e), as_fraction(c)) for e, c in dict(self.overrides).items()))
        if any(c <= 0 for _, c in ov):
            raise ValueError("Hermitian weights must be positive")
        object.__setattr__(self, "overrides", ov)

    def weight(self, form: SparseForm, exps: tuple) -> Fraction:
        for e, c in self.overrides:
            if e == exps:
                return c
        if self.scheme == "standard":
            return Fraction(1)
        w = Fraction(1)
        start = 0
        for b in form.blocks:
            block = exps[start : start + b]
            num = 1
            for a in block:
                num *= factorial(a)
            w *= Fraction(num, factorial(sum(block)))
            start += b
        return w


STANDARD = HermitianFrame()
UNITARY_INVARIANT = HermitianFrame("invariant")


def norm_sq(f: SparseForm, h: HermitianFrame = STANDARD) -> Fraction:
    return sum((h.weight(f, e) * c.abs2() for e, c in f.terms.items()), Fraction(0))


def hermitian_pairing(x: Sequence[SparseForm], y: Sequence[SparseForm], h: HermitianFrame = STANDARD) -> Gaussian:
    """``<x, y>`` on a direct sum, linear in ``x``, antilinear in ``y``."""
    total = Gaussian(0)
    for fx, fy in zip(x, y):
        for e, c in fx.terms.items():
            d = fy.terms.get(e)
            if d is not None:
                total = total + c * d.conjugate() * h.weight(fx, e)
    return total


def _log(q: Fraction) -> float:
    return math.log(q.numerator) - math.log(q.denominator)


@dataclass(frozen=True)
class EnergySample:
    sigma: Matrix
    norm_v_sq: Fraction
    norm_w_sq: Fraction
    p: float


def energy(v: SparseForm, w: SparseForm, sigma, h: HermitianFrame = STANDARD) -> EnergySample:
    s = as_matrix(sigma)
    nv = norm_sq(apply_group_element(s, v.require_nonzero("v")), h)
    nw = norm_sq(apply_group_element(s, w.require_nonzero("w")), h)
    return EnergySample(s, nv, nw, _log(nw) - _log(nv))


def fs_distance(x: Sequence[SparseForm], y: Sequence[SparseForm], h: HermitianFrame = STANDARD) -> float:
    """Fubini-Study distance between the lines through ``x`` and ``y``, in ``[0, π/2]``."""
    nx = sum((norm_sq(f, h) for f in x), Fraction(0))
    ny = sum((norm_sq(f, h) for f in y), Fraction(0))
    if not nx or not ny:
        raise ValueError("Fubini-Study distance needs nonzero vectors")
    ip2 = hermitian_pairing(x, y, h).abs2()
    if not ip2:
        return math.pi / 2
    # arccos(|<x,y>| / |x||y|) evaluated as an arctangent of an exact ratio
    ratio = (nx * ny - ip2) / ip2
    return math.atan(math.sqrt(ratio))


def distance_identity_residual(v: SparseForm, w: SparseForm, sigma, h: HermitianFrame = STANDARD) -> float:
    """``|p(σ) - log tan² d(σ[(v,w)], σ[(v,0)])|``."""
    s = as_matrix(sigma)
    sv = apply_group_element(s, v)
    sw = apply_group_element(s, w)
    zero_w = sw.scale(0)
    d = fs_distance((sv, sw), (sv, zero_w), h)
    sample = energy(v, w, s, h)
    return abs(sample.p - math.log(math.tan(d) ** 2))


@dataclass(frozen=True)
class SlopeReport:
    """Energy along ``λ(α)`` against ``log|α|²``.

    ``finest_slope`` is the secant slope between the two smallest ``α``;
    ``fitted_slope`` is the least-squares slope over the whole grid;
    ``drift`` is the spread of ``p - exact_slope * log|α|²`` over the grid.
    """

    exact_slope: Fraction
    fitted_slope: float
    finest_slope: float
    rounded_slope: int
    drift: float
    rows: tuple = field(repr=False)


def energy_along_psg(
    v: SparseForm,
    w: SparseForm,
    u: OnePSG,
    frame: TorusFrame | None = None,
    alphas: Sequence = DEFAULT_ALPHAS,
    h: HermitianFrame = STANDARD,
) -> SlopeReport:
    if frame is None:
        frame = TorusFrame.identity(v.blocks[0])
    grid = sorted((as_fraction(a) for a in alphas), reverse=True)
    if len(grid) < 2:
        raise ValueError("need at least two alphas")
    if grid[-1] <= 0:
        raise ValueError("alphas must be positive")
    rows = []
    xs, ys = [], []
    for a in grid:
        sample = energy(v, w, frame.one_psg(u, a), h)
        x = 2 * _log(a)
        xs.append(x)
        ys.append(sample.p)
        rows.append({"alpha": a, "log_alpha_sq": x, "p": sample.p,
                     "norm_v_sq": sample.norm_v_sq, "norm_w_sq": sample.norm_w_sq})
    exact = destabilizing_slope(Pair(v, w), frame, u)
    fitted = statistics.linear_regression(xs, ys).slope
    finest = (ys[-1] - ys[-2]) / (xs[-1] - xs[-2])
    resid = [y - float(exact) * x for x, y in zip(xs, ys)]
    return SlopeReport(
        exact_slope=exact,
        fitted_slope=fitted,
        finest_slope=finest,
        rounded_slope=round(finest),
        drift=max(resid) - min(resid),
        rows=tuple(rows),
    )


def cayley_rotation(skew: Sequence[Sequence[int]]) -> Matrix:
    """Rational orthogonal matrix ``(I - S)(I + S)^{-1}`` for skew-symmetric ``S``."""
    n = len(skew)
    S = [[Fraction(x) for x in row] for row in skew]
    I = identity(n)
    minus = [[I[i][j] - S[i][j] for j in range(n)] for i in range(n)]
    plus = [[I[i][j] + S[i][j] for j in range(n)] for i in range(n)]
    return as_matrix(matmul(minus, inverse(plus)))


def _random_rotation(n: int, rng: random.Random, bound: int = 3) -> Matrix:
    skew = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            c = rng.randint(-bound, bound)
            skew[i][j], skew[j][i] = c, -c
    return cayley_rotation(skew)


def _random_exponents(n: int, rng: random.Random, span: int) -> list[int]:
    while True:
        ks = [rng.randint(-span, span) for _ in range(n - 1)]
        last = -sum(ks)
        if abs(last) <= span:
            return ks + [last]


@dataclass(frozen=True)
class ScanReport:
    """Smallest sampled energy. A heuristic probe, never a lower-bound proof."""

    min_p: float
    argmin: Matrix
    samples: int
    seed: int
    diag_range: int
    rows: tuple = field(repr=False, default=())


def energy_scan(
    v: SparseForm,
    w: SparseForm,
    h: HermitianFrame = STANDARD,
    *,
    seed: int = 0,
    samples: int = 64,
    diag_range: int = 4,
    base: int = 2,
) -> ScanReport:
    """Sample ``σ = κ₁ t κ₂`` with rational rotations ``κ`` and diagonal ``t``."""
    n = v.blocks[0]
    rng = random.Random(seed)
    best = energy(v, w, diagonal([1] * n), h)
    rows = [(0, best.p)]
    for k in range(1, samples):
        k1 = _random_rotation(n, rng)
        k2 = _random_rotation(n, rng)
        t = [Fraction(base) ** e for e in _random_exponents(n, rng, diag_range)]
        sigma = matmul(matmul(k1, diagonal(t)), k2)
        sample = energy(v, w, sigma, h)
        rows.append((k, sample.p))
        if sample.p < best.p:
            best = sample
    return ScanReport(best.p, best.sigma, samples, seed, diag_range, tuple(rows))
