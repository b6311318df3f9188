"""Pairs of binary forms: closed-form criterion vs. the polytope test.

For ``f`` of degree ``e`` and ``g`` of degree ``d`` the pair is semistable iff
``e <= d`` and ``ord_p(g) - ord_p(f) <= (d - e)/2`` for every point ``p``.
Forms are given factored, as points of P^1 with multiplicities, so orders
of vanishing are exact.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

from ._exact import Gaussian, as_gaussian, inverse
from .forms import SparseForm
from .pairs import Pair, PairVerdict, check_pair_numerical
from .torus import TorusFrame, as_matrix

__all__ = [
    "P1Point",
    "FactoredBinaryForm",
    "OracleReport",
    "ENUMERATION_POINTS",
    "expand",
    "closed_form_check",
    "root_adapted_frames",
    "oracle_equivalence",
    "enumerate_forms",
    "enumerate_oracle",
]


@dataclass(frozen=True)
class P1Point:
    """A point ``[a:b]`` of P^1, stored as ``[a/b:1]`` or ``[1:0]``."""

    a: Gaussian
    b: Gaussian = field(default=Gaussian(1))

    def __post_init__(self):
        a, b = as_gaussian(self.a), as_gaussian(self.b)
        if not a and not b:
            raise ValueError("[0:0] is not a point of P^1")
        if b:
            a, b = a / b, Gaussian(1)
        else:
            a = Gaussian(1)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def sort_key(self):
        return (not self.b, self.a.re, self.a.im)

    @property
    def vector(self) -> tuple[Gaussian, Gaussian]:
        return (self.a, self.b)

    def linear_factor(self) -> SparseForm:
        """``b x - a y``, vanishing exactly at this point."""
        return SparseForm(2, {(1, 0): self.b, (0, 1): -self.a})

    def __str__(self):
        return f"[{self.a}:{self.b}]"


ZERO_PT = P1Point(0, 1)
INF_PT = P1Point(1, 0)
ENUMERATION_POINTS = (P1Point(0, 1), P1Point(1, 0), P1Point(1, 1), P1Point(1, -1), P1Point(2, 1))
PADDING_POINTS = (P1Point(1, 1), P1Point(1, -1))
AUXILIARY_POINTS = (P1Point(3, 7), P1Point(-5, 11), P1Point(13, 17))


@dataclass(frozen=True)
class FactoredBinaryForm:
    """Product of ``(b x - a y)^m`` over distinct points ``[a:b]``."""

    factors: tuple[tuple[P1Point, int], ...] = ()

    def __post_init__(self):
        merged: dict[P1Point, int] = {}
        for pt, m in self.factors:
            if not isinstance(pt, P1Point):
                pt = P1Point(*pt)
            if int(m) < 1:
                raise ValueError("multiplicities must be positive")
            merged[pt] = merged.get(pt, 0) + int(m)
        object.__setattr__(self, "factors", tuple(sorted(merged.items())))

    @classmethod
    def of(cls, *factors) -> FactoredBinaryForm:
        return cls(tuple(factors))

    @property
    def degree(self) -> int:
        return sum(m for _, m in self.factors)

    @property
    def roots(self) -> tuple[P1Point, ...]:
        return tuple(pt for pt, _ in self.factors)

    def order(self, p: P1Point) -> int:
        return dict(self.factors).get(p, 0)

    def transform(self, sigma) -> FactoredBinaryForm:
        """Roots of ``σ·f`` are ``σ^{-T}`` applied to the roots of ``f`` (up to a scalar factor)."""
        s = as_matrix(sigma)
        inv = inverse(s)
        out = []
        for pt, m in self.factors:
            a, b = pt.vector
            # σ^{-T} (a, b)
            na = inv[0][0] * a + inv[1][0] * b
            nb = inv[0][1] * a + inv[1][1] * b
            out.append((P1Point(na, nb), m))
        return FactoredBinaryForm(tuple(out))

    @classmethod
    def parse(cls, text: str) -> FactoredBinaryForm:
        """Parse ``"[a:b]^m * [c:d]"``; ``"1"`` is the constant form."""
        s = text.strip()
        if s in ("", "1"):
            return cls()
        factors = []
        for chunk in s.split("*"):
            m = _FACTOR_RE.fullmatch(chunk.strip())
            if m is None:
                raise ValueError(f"cannot parse factor {chunk.strip()!r}")
            pt = P1Point(Gaussian.parse(m.group(1)), Gaussian.parse(m.group(2)))
            factors.append((pt, int(m.group(3) or 1)))
        return cls(tuple(factors))

    def __str__(self):
        if not self.factors:
            return "1"
        return " * ".join(str(pt) if m == 1 else f"{pt}^{m}" for pt, m in self.factors)


_FACTOR_RE = re.compile(r"\[\s*([^:\]]+?)\s*:\s*([^\]]+?)\s*\](?:\s*\^\s*(\d+))?")


@lru_cache(maxsize=4096)
def expand(f: FactoredBinaryForm) -> SparseForm:
    out = SparseForm.constant(2, 1)
    for pt, m in f.factors:
        out = out * pt.linear_factor() ** m
    return out


def closed_form_check(f: FactoredBinaryForm, g: FactoredBinaryForm) -> bool:
    e, d = f.degree, g.degree
    if e > d:
        return False
    bound = Fraction(d - e, 2)
    return all(g.order(p) - f.order(p) <= bound for p in set(f.roots) | set(g.roots))


@lru_cache(maxsize=None)
def _adapted_frame(p: P1Point, q: P1Point) -> TorusFrame:
    # c^T maps q -> [1:0] and p -> [0:1], i.e. c^T = [q | p]^{-1}
    cols = [[q.a, p.a], [q.b, p.b]]
    ct = inverse(cols)
    c = [[ct[j][i] for j in range(2)] for i in range(2)]
    return TorusFrame(as_matrix(c), f"{p}->0, {q}->inf")


def root_adapted_frames(f: FactoredBinaryForm, g: FactoredBinaryForm) -> list[TorusFrame]:
    """Frames whose diagonal torus fixes a pair of roots, plus an auxiliary point.

    In the frame for ``(p, q)`` the point ``p`` becomes ``[0:1]`` and ``q``
    becomes ``[1:0]``. The auxiliary point avoids every root and is paired
    with the first root (or padding point) in both orders.
    """
    pts = sorted(set(f.roots) | set(g.roots))
    for pad in PADDING_POINTS:
        if len(pts) >= 2:
            break
        if pad not in pts:
            pts.append(pad)
    pts.sort()
    aux = next(a for a in AUXILIARY_POINTS if a not in pts)
    frames = [_adapted_frame(p, q) for p, q in itertools.permutations(pts, 2)]
    frames.append(_adapted_frame(aux, pts[0]))
    frames.append(_adapted_frame(pts[0], aux))
    return frames


@dataclass(frozen=True)
class OracleReport:
    f: FactoredBinaryForm
    g: FactoredBinaryForm
    closed_form: bool
    verdict: PairVerdict

    @property
    def polytope(self) -> bool:
        return self.verdict.semistable

    @property
    def agree(self) -> bool:
        return self.closed_form == self.polytope


def oracle_equivalence(f: FactoredBinaryForm, g: FactoredBinaryForm) -> OracleReport:
    verdict = check_pair_numerical(Pair(expand(f), expand(g)), root_adapted_frames(f, g))
    return OracleReport(f, g, closed_form_check(f, g), verdict)


def enumerate_forms(max_degree: int, points: Sequence[P1Point] = ENUMERATION_POINTS) -> Iterator[FactoredBinaryForm]:
    """Every factored form of degree ``<= max_degree`` with roots in ``points``."""
    for deg in range(max_degree + 1):
        for combo in itertools.combinations_with_replacement(range(len(points)), deg):
            counts: dict[int, int] = {}
            for i in combo:
                counts[i] = counts.get(i, 0) + 1
            yield FactoredBinaryForm(tuple((points[i], m) for i, m in counts.items()))


def enumerate_oracle(
    max_e: int = 5,
    max_d: int = 5,
    points: Sequence[P1Point] = ENUMERATION_POINTS,
) -> Iterable[OracleReport]:
    fs = list(enumerate_forms(max_e, points))
    gs = list(enumerate_forms(max_d, points))
    for f in fs:
        for g in gs:
            yield oracle_equivalence(f, g)
