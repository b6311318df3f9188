"""Torus actions on sparse forms: weight spaces, weight polytopes, 1-PSG weights.

Conventions. A matrix ``s`` acts on a covariant form by ``(s.F)(x) = F(s^T x)``
and on a contravariant form by ``(s.G)(u) = G(s^{-1} u)``, block by block.
Both are left actions. Under the diagonal torus a covariant monomial
``x^a`` has character ``proj(a)`` and a contravariant one ``-proj(a)``, where
``proj`` subtracts the mean (SL characters). Forms with several blocks add
the characters of their blocks.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Sequence

from ._exact import Gaussian, as_gaussian, det, inverse, matmul, primitive_integer_vector
from .forms import FormError, SparseForm, Variance, ZeroFormError
from .geometry import LatticePolytope, RationalVector, convex_hull, pairing, quotient_project

__all__ = [
    "Matrix",
    "as_matrix",
    "diagonal",
    "TorusFrame",
    "OnePSG",
    "WeightSupport",
    "apply_group_element",
    "character",
    "weight_decompose",
    "weight_polytope",
    "one_psg_weight",
    "shear_frames",
]

Matrix = tuple  # tuple[tuple[Gaussian, ...], ...]


def as_matrix(rows: Sequence[Sequence]) -> Matrix:
    m = tuple(tuple(as_gaussian(x) for x in row) for row in rows)
    if not m or any(len(r) != len(m) for r in m):
        raise FormError("group elements must be square matrices")
    return m


def diagonal(entries: Sequence) -> Matrix:
    n = len(entries)
    return as_matrix([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)])


def _identity(n: int) -> Matrix:
    return diagonal([1] * n)


@lru_cache(maxsize=4096)
def _inverse(m: Matrix) -> Matrix:
    try:
        return as_matrix(inverse(m))
    except ZeroDivisionError:
        raise FormError("group element is singular") from None


def apply_group_element(sigma: Sequence[Sequence], v: SparseForm) -> SparseForm:
    """Act by an invertible matrix on every block of ``v``."""
    s = as_matrix(sigma)
    n = len(s)
    if any(b != n for b in v.blocks):
        raise FormError(f"{n}x{n} matrix cannot act on blocks {v.blocks}")
    if v.variance is Variance.CO:
        if not det(s):
            raise FormError("group element is singular")
        sub = tuple(zip(*s))  # x_i -> sum_j s[j][i] x_j
    else:
        sub = _inverse(s)  # u_i -> sum_j sinv[i][j] u_j
    images = []
    start = 0
    for b in v.blocks:
        for i in range(b):
            terms = {}
            for j in range(b):
                c = sub[i][j]
                if c:
                    e = [0] * v.num_vars
                    e[start + j] = 1
                    terms[tuple(e)] = c
            images.append(SparseForm(v.num_vars, terms, v.variance, v.blocks))
        start += b
    return v.substitute(images, template=v)


@dataclass(frozen=True)
class TorusFrame:
    """The maximal torus ``c T c^{-1}`` for a conjugator ``c``."""

    conjugator: Matrix
    description: str = field(default="", compare=False)

    def __post_init__(self):
        m = as_matrix(self.conjugator)
        if not det(m):
            raise FormError("torus frame conjugator is singular")
        object.__setattr__(self, "conjugator", m)

    @classmethod
    def identity(cls, n: int) -> TorusFrame:
        return cls(_identity(n), "identity")

    @property
    def size(self) -> int:
        return len(self.conjugator)

    @cached_property
    def inverse(self) -> Matrix:
        return _inverse(self.conjugator)

    def one_psg(self, u: OnePSG, alpha) -> Matrix:
        """The group element ``c diag(alpha^u) c^{-1}``."""
        alpha = as_gaussian(alpha)
        d = [alpha ** k for k in u.u]
        cd = [[x * d[j] for j, x in enumerate(row)] for row in self.conjugator]
        return as_matrix(matmul(cd, self.inverse))


def shear_frames(n: int, count: int, seed: int = 0, bound: int = 3) -> list[TorusFrame]:
    """Seeded unipotent conjugators ``L U`` with small integer entries."""
    rng = random.Random(seed)
    frames = []
    while len(frames) < count:
        lower = [[1 if i == j else (rng.randint(-bound, bound) if i > j else 0) for j in range(n)] for i in range(n)]
        upper = [[1 if i == j else (rng.randint(-bound, bound) if i < j else 0) for j in range(n)] for i in range(n)]
        c = as_matrix(matmul(lower, upper))
        if c == _identity(n) or any(f.conjugator == c for f in frames):
            continue
        frames.append(TorusFrame(c, f"shear seed={seed} #{len(frames)}"))
    return frames


@dataclass(frozen=True)
class OnePSG:
    """Integral cocharacter ``u`` of the diagonal SL torus (entries sum to 0)."""

    u: tuple[int, ...]

    def __post_init__(self):
        u = tuple(self.u)
        if not all(isinstance(c, int) and not isinstance(c, bool) for c in u):
            raise ValueError("1-PSG entries must be integers")
        if sum(u) != 0:
            raise ValueError(f"1-PSG {u} does not sum to zero; use OnePSG.from_direction")
        if not any(u):
            raise ValueError("the trivial 1-PSG is not allowed")
        object.__setattr__(self, "u", u)

    @classmethod
    def from_direction(cls, vec: Sequence) -> OnePSG:
        """Primitive integral cocharacter along the projection of ``vec``."""
        proj = quotient_project(vec)
        if not any(proj):
            raise ValueError(f"{tuple(vec)} is killed by the quotient projection")
        return cls(primitive_integer_vector(proj))

    def __neg__(self) -> OnePSG:
        return OnePSG(tuple(-c for c in self.u))

    def __len__(self) -> int:
        return len(self.u)


def character(v: SparseForm, exps: Sequence[int]) -> RationalVector:
    """Torus character of the monomial ``exps`` in the module of ``v``."""
    b0 = v.blocks[0]
    if any(b != b0 for b in v.blocks):
        raise FormError("weights need equally sized blocks")
    total = [Fraction(0)] * b0
    start = 0
    for b in v.blocks:
        for i, c in enumerate(quotient_project(exps[start : start + b])):
            total[i] += c
        start += b
    if v.variance is Variance.CONTRA:
        return tuple(-c for c in total)
    return tuple(total)


@dataclass(frozen=True)
class WeightSupport:
    """Weight-space decomposition of a form relative to a torus frame.

    ``frame_components`` are expressed in the frame's diagonal coordinates;
    :attr:`components` transports them back.
    """

    form: SparseForm
    frame: TorusFrame
    frame_components: dict

    @property
    def weights(self) -> list[RationalVector]:
        return sorted(self.frame_components)

    @cached_property
    def components(self) -> dict:
        return {
            wt: apply_group_element(self.frame.conjugator, comp)
            for wt, comp in sorted(self.frame_components.items())
        }


def _frame_coordinates(v: SparseForm, frame: TorusFrame) -> SparseForm:
    if frame.size != v.blocks[0]:
        raise FormError(f"frame of size {frame.size} does not match blocks {v.blocks}")
    return apply_group_element(frame.inverse, v)


def weight_decompose(v: SparseForm, frame: TorusFrame) -> WeightSupport:
    v.require_nonzero()
    local = _frame_coordinates(v, frame)
    groups: dict[RationalVector, dict] = {}
    for e, c in local.items():
        groups.setdefault(character(v, e), {})[e] = c
    comps = {
        wt: SparseForm(v.num_vars, terms, v.variance, v.blocks) for wt, terms in groups.items()
    }
    return WeightSupport(v, frame, comps)


@lru_cache(maxsize=65536)
def _weights(v: SparseForm, frame: TorusFrame) -> tuple[RationalVector, ...]:
    if v.is_zero():
        raise ZeroFormError("weights of the zero form are undefined")
    local = _frame_coordinates(v, frame)
    return tuple(sorted({character(v, e) for e in local.terms}))


@lru_cache(maxsize=65536)
def weight_polytope(v: SparseForm, frame: TorusFrame) -> LatticePolytope:
    """Convex hull of the characters occurring in ``v`` for ``frame``."""
    return convex_hull(_weights(v, frame))


def one_psg_weight(v: SparseForm, frame: TorusFrame, u: OnePSG) -> Fraction:
    """Minimum of ``<u, a>`` over the characters ``a`` occurring in ``v``."""
    pts = _weights(v, frame)
    if len(u.u) != len(pts[0]):
        raise FormError("1-PSG has wrong length")
    return min(pairing(u.u, a) for a in pts)
