"""Exact rational convex geometry.

Points are tuples of :class:`fractions.Fraction`. Polytopes carry both a
vertex description and a constraint description; all predicates are decided
with exact arithmetic.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from ._exact import as_fraction, nullspace, primitive_integer_vector, rank, rref

__all__ = [
    "RationalVector",
    "Constraint",
    "LatticePolytope",
    "Containment",
    "ContainmentResult",
    "GeometryError",
    "rvec",
    "pairing",
    "convex_hull",
    "minimize_linear",
    "contains_polytope",
    "quotient_project",
    "scale_polytope",
]

RationalVector = tuple  # tuple[Fraction, ...]
Constraint = tuple  # (normal: tuple[int, ...], offset: Fraction)


class GeometryError(ValueError):
    pass


def rvec(*coords) -> RationalVector:
    """Build a rational vector from anything ``as_fraction`` accepts."""
    if len(coords) == 1 and not isinstance(coords[0], (int, Fraction, str)):
        coords = tuple(coords[0])
    return tuple(as_fraction(c) for c in coords)


def pairing(u: Sequence, x: Sequence) -> Fraction:
    total = Fraction(0)
    for a, b in zip(u, x):
        if a and b:
            total += a * b
    return total


@dataclass(frozen=True)
class LatticePolytope:
    """Bounded nonempty polytope in canonical form.

    ``halfspaces`` are pairs ``(n, b)`` meaning ``<n, x> >= b``; ``equalities``
    are pairs ``(n, b)`` meaning ``<n, x> == b``. Normals are primitive
    integer vectors. Vertices are sorted lexicographically.
    """

    vertices: tuple[RationalVector, ...]
    halfspaces: tuple[Constraint, ...]
    equalities: tuple[Constraint, ...]

    @property
    def ambient_dim(self) -> int:
        return len(self.vertices[0])

    @property
    def dim(self) -> int:
        """Dimension of the affine hull."""
        return self.ambient_dim - len(self.equalities)

    def contains_point(self, x: Sequence) -> bool:
        return all(pairing(n, x) == b for n, b in self.equalities) and all(
            pairing(n, x) >= b for n, b in self.halfspaces
        )


def _canonical_points(points: Iterable[Sequence]) -> list[RationalVector]:
    pts = [tuple(as_fraction(c) for c in p) for p in points]
    if not pts:
        raise GeometryError("convex hull of an empty point set")
    n = len(pts[0])
    if n < 1:
        raise GeometryError("points must have dimension >= 1")
    if any(len(p) != n for p in pts):
        raise GeometryError("points have mixed dimensions")
    return sorted(set(pts))


def _equality_normals(directions: list[list[Fraction]], n: int) -> list[tuple[int, ...]]:
    basis = nullspace(directions, n) if directions else nullspace([], n)
    out = []
    for vec in basis:
        prim = primitive_integer_vector(vec)
        # first nonzero entry positive
        if next(c for c in prim if c) < 0:
            prim = tuple(-c for c in prim)
        out.append(prim)
    return out


def convex_hull(points: Iterable[Sequence]) -> LatticePolytope:
    """Convex hull of a finite nonempty point set.

    Lower-dimensional inputs are handled by computing the affine hull first
    and enumerating facets inside it.
    """
    pts = _canonical_points(points)
    n = len(pts[0])
    p0 = pts[0]
    diffs = [[a - b for a, b in zip(p, p0)] for p in pts[1:]]
    nonzero = [d for d in diffs if any(d)]
    if nonzero:
        red, pivots = rref(nonzero, n)
    else:
        red, pivots = [], []
    k = len(pivots)

    eq_normals = _equality_normals(red, n)
    equalities = tuple(sorted((nv, pairing(nv, p0)) for nv in eq_normals))

    if k == 0:
        return LatticePolytope(vertices=(p0,), halfspaces=(), equalities=equalities)

    # coordinates on the pivot columns identify the affine hull injectively
    proj = [tuple(p[c] for c in pivots) for p in pts]
    facets: set[tuple[tuple[int, ...], Fraction]] = set()
    for subset in combinations(range(len(proj)), k):
        base = proj[subset[0]]
        rows = [[a - b for a, b in zip(proj[i], base)] for i in subset[1:]]
        normal_space = nullspace(rows, k)
        if len(normal_space) != 1:
            continue
        nrm = primitive_integer_vector(normal_space[0])
        off = pairing(nrm, base)
        lo = hi = False
        for y in proj:
            s = pairing(nrm, y) - off
            if s > 0:
                hi = True
            elif s < 0:
                lo = True
            if lo and hi:
                break
        if lo and hi:
            continue
        if lo:
            nrm = tuple(-c for c in nrm)
            off = -off
        facets.add((nrm, off))

    vertices = []
    for p, y in zip(pts, proj):
        tight = [list(nrm) for nrm, off in facets if pairing(nrm, y) == off]
        if rank(tight, k) == k:
            vertices.append(p)

    halfspaces = []
    for nrm, off in facets:
        full = [0] * n
        for c, val in zip(pivots, nrm):
            full[c] = val
        halfspaces.append((tuple(full), off))
    halfspaces.sort()
    return LatticePolytope(
        vertices=tuple(sorted(vertices)),
        halfspaces=tuple(halfspaces),
        equalities=equalities,
    )


def _check_dims(a: int, b: int) -> None:
    if a != b:
        raise GeometryError(f"dimension mismatch: {a} vs {b}")


def minimize_linear(P: LatticePolytope, u: Sequence) -> Fraction:
    """Exact minimum of ``<u, x>`` over ``P``."""
    _check_dims(len(u), P.ambient_dim)
    uu = tuple(as_fraction(c) for c in u)
    return min(pairing(uu, v) for v in P.vertices)


class Containment(enum.Enum):
    CONTAINED = "CONTAINED"
    SEPARATED = "SEPARATED"


@dataclass(frozen=True)
class ContainmentResult:
    verdict: Containment
    certificate: tuple[int, ...] | None = None
    min_inner: Fraction | None = None
    min_outer: Fraction | None = None

    @property
    def contained(self) -> bool:
        return self.verdict is Containment.CONTAINED

    def __bool__(self) -> bool:
        return self.contained


def contains_polytope(P: LatticePolytope, Q: LatticePolytope) -> ContainmentResult:
    """Decide ``P ⊆ Q``.

    On failure the certificate ``u`` is a primitive integer vector with
    ``min_Q <u,.> > min_P <u,.>``.
    """
    _check_dims(P.ambient_dim, Q.ambient_dim)
    for x in P.vertices:
        for nrm, off in Q.equalities:
            val = pairing(nrm, x)
            if val != off:
                u = nrm if val < off else tuple(-c for c in nrm)
                return _separated(P, Q, u)
        for nrm, off in Q.halfspaces:
            if pairing(nrm, x) < off:
                return _separated(P, Q, nrm)
    return ContainmentResult(Containment.CONTAINED)


def _separated(P: LatticePolytope, Q: LatticePolytope, u: tuple[int, ...]) -> ContainmentResult:
    lo_p = minimize_linear(P, u)
    lo_q = minimize_linear(Q, u)
    assert lo_q > lo_p, "separating certificate failed to replay"
    return ContainmentResult(Containment.SEPARATED, tuple(u), lo_p, lo_q)


def quotient_project(x: Sequence) -> RationalVector:
    """Project onto the sum-zero hyperplane along the all-ones direction."""
    if len(x) < 1:
        raise GeometryError("cannot project an empty vector")
    xs = tuple(as_fraction(c) for c in x)
    mean = sum(xs, Fraction(0)) / len(xs)
    return tuple(c - mean for c in xs)


def scale_polytope(P: LatticePolytope, k) -> LatticePolytope:
    k = as_fraction(k)
    if k <= 0:
        raise GeometryError("scale factor must be positive")
    return LatticePolytope(
        vertices=tuple(tuple(c * k for c in v) for v in P.vertices),
        halfspaces=tuple((nrm, off * k) for nrm, off in P.halfspaces),
        equalities=tuple((nrm, off * k) for nrm, off in P.equalities),
    )
