"""Sparse homogeneous forms with Gaussian-rational coefficients."""

from __future__ import annotations

import enum
from fractions import Fraction
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

from ._exact import Gaussian, as_gaussian

__all__ = ["Variance", "SparseForm", "FormError", "ZeroFormError"]

Exponent = tuple  # tuple[int, ...]

_ONE = Gaussian(1)
_ZERO = Gaussian(0)


class FormError(ValueError):
    pass


class ZeroFormError(FormError):
    pass


class Variance(str, enum.Enum):
    CO = "co"
    CONTRA = "contra"


class SparseForm:
    """Multi-homogeneous polynomial stored as ``{exponent: coefficient}``.

    ``blocks`` partitions the variables into consecutive groups; the form must
    be homogeneous in each group separately. Zero coefficients are dropped,
    so the zero form has no terms.
    """

    __slots__ = ("num_vars", "variance", "blocks", "_terms", "_hash")

    def __init__(
        self,
        num_vars: int,
        terms: Mapping[Sequence[int], object] | Iterable[tuple[Sequence[int], object]] = (),
        variance: Variance | str = Variance.CO,
        blocks: Sequence[int] | None = None,
    ):
        if num_vars < 1:
            raise FormError("num_vars must be positive")
        blocks = (num_vars,) if blocks is None else tuple(int(b) for b in blocks)
        if sum(blocks) != num_vars or any(b < 1 for b in blocks):
            raise FormError(f"blocks {blocks} do not partition {num_vars} variables")
        items = terms.items() if isinstance(terms, Mapping) else terms
        store: dict[Exponent, Gaussian] = {}
        for exps, coeff in items:
            e = tuple(int(a) for a in exps)
            if len(e) != num_vars:
                raise FormError(f"exponent {e} has wrong length for {num_vars} variables")
            if any(a < 0 for a in e):
                raise FormError(f"negative exponent in {e}")
            c = as_gaussian(coeff)
            if e in store:
                c = store[e] + c
            store[e] = c
        self.num_vars = num_vars
        self.variance = Variance(variance)
        self.blocks = blocks
        self._terms = {e: c for e, c in store.items() if c}
        self._hash = None
        self._check_homogeneous()

    @classmethod
    def _raw(cls, num_vars, terms, variance, blocks) -> SparseForm:
        f = object.__new__(cls)
        f.num_vars = num_vars
        f.variance = variance
        f.blocks = blocks
        f._terms = terms
        f._hash = None
        return f

    def _check_homogeneous(self) -> None:
        degs = None
        for e in self._terms:
            d = self._block_degrees(e)
            if degs is None:
                degs = d
            elif d != degs:
                raise FormError(f"form is not homogeneous in its blocks: {degs} vs {d}")

    def _block_degrees(self, e: Exponent) -> tuple[int, ...]:
        out = []
        start = 0
        for b in self.blocks:
            out.append(sum(e[start : start + b]))
            start += b
        return tuple(out)

    # constructors ---------------------------------------------------------
    @classmethod
    def constant(cls, num_vars: int, c=1, variance=Variance.CO, blocks=None) -> SparseForm:
        return cls(num_vars, {(0,) * num_vars: c}, variance, blocks)

    @classmethod
    def variable(cls, i: int, num_vars: int, variance=Variance.CO, blocks=None) -> SparseForm:
        e = [0] * num_vars
        e[i] = 1
        if blocks is not None and len(tuple(blocks)) > 1:
            raise FormError("a single variable is not homogeneous in several blocks")
        return cls(num_vars, {tuple(e): 1}, variance, blocks)

    @classmethod
    def linear(cls, coeffs: Sequence, variance=Variance.CO) -> SparseForm:
        n = len(coeffs)
        terms = {}
        for i, c in enumerate(coeffs):
            e = [0] * n
            e[i] = 1
            terms[tuple(e)] = c
        return cls(n, terms, variance)

    def _like(self, terms: dict) -> SparseForm:
        return SparseForm._raw(self.num_vars, terms, self.variance, self.blocks)

    def with_variance(self, variance: Variance | str) -> SparseForm:
        return SparseForm._raw(self.num_vars, dict(self._terms), Variance(variance), self.blocks)

    # accessors ------------------------------------------------------------
    @property
    def terms(self) -> Mapping[Exponent, Gaussian]:
        return MappingProxyType(self._terms)

    def items(self) -> list[tuple[Exponent, Gaussian]]:
        """Terms in lexicographic exponent order."""
        return sorted(self._terms.items())

    def support(self) -> list[Exponent]:
        return sorted(self._terms)

    def coefficient(self, exps: Sequence[int]) -> Gaussian:
        return self._terms.get(tuple(exps), _ZERO)

    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self) -> int:
        return len(self._terms)

    @property
    def degrees(self) -> tuple[int, ...]:
        """Degree in each block (zeros for the zero form)."""
        if not self._terms:
            return (0,) * len(self.blocks)
        return self._block_degrees(next(iter(self._terms)))

    @property
    def degree(self) -> int:
        return sum(self.degrees)

    def leading(self) -> tuple[Exponent, Gaussian]:
        if not self._terms:
            raise ZeroFormError("zero form has no leading term")
        e = max(self._terms)
        return e, self._terms[e]

    def require_nonzero(self, what: str = "form") -> SparseForm:
        if not self._terms:
            raise ZeroFormError(f"{what} must be nonzero")
        return self

    # arithmetic -----------------------------------------------------------
    def _compatible(self, other: SparseForm) -> None:
        if (self.num_vars, self.blocks, self.variance) != (other.num_vars, other.blocks, other.variance):
            raise FormError("forms live in different modules")

    def __add__(self, other: SparseForm) -> SparseForm:
        if not isinstance(other, SparseForm):
            return NotImplemented
        self._compatible(other)
        if self._terms and other._terms and self.degrees != other.degrees:
            raise FormError("cannot add forms of different degrees")
        out = dict(self._terms)
        for e, c in other._terms.items():
            s = out.get(e, _ZERO) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return self._like(out)

    def __neg__(self) -> SparseForm:
        return self._like({e: -c for e, c in self._terms.items()})

    def __sub__(self, other: SparseForm) -> SparseForm:
        if not isinstance(other, SparseForm):
            return NotImplemented
        return self + (-other)

    def scale(self, c) -> SparseForm:
        c = as_gaussian(c)
        if not c:
            return self._like({})
        return self._like({e: c * v for e, v in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, SparseForm):
            self._compatible(other)
            return self._like(_poly_mul(self._terms, other._terms))
        if isinstance(other, (int, Fraction, Gaussian)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, Gaussian)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k: int) -> SparseForm:
        if k < 0:
            raise FormError("negative powers of forms are not forms")
        result = self._like({(0,) * self.num_vars: _ONE})
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def divide_monomial(self, exps: Sequence[int]) -> SparseForm:
        """Exact division by a monomial; raises if it does not divide."""
        exps = tuple(exps)
        out = {}
        for e, c in self._terms.items():
            q = tuple(a - b for a, b in zip(e, exps))
            if any(a < 0 for a in q):
                raise FormError(f"monomial {exps} does not divide the form")
            out[q] = c
        return SparseForm(self.num_vars, out, self.variance, self.blocks)

    def derivative(self, i: int) -> SparseForm:
        out = {}
        for e, c in self._terms.items():
            if e[i]:
                d = list(e)
                d[i] -= 1
                out[tuple(d)] = c * e[i]
        return self._like(out)

    def monic(self) -> SparseForm:
        """Scale so that the lexicographically largest term has coefficient 1."""
        _, c = self.leading()
        return self.scale(c.reciprocal())

    def proportionality(self, other: SparseForm) -> Gaussian | None:
        """Scalar ``c`` with ``self == c * other``, or ``None``."""
        if self.num_vars != other.num_vars or set(self._terms) != set(other._terms):
            return None
        if not self._terms:
            return _ONE
        e0 = next(iter(self._terms))
        c = self._terms[e0] / other._terms[e0]
        for e, v in self._terms.items():
            if v != c * other._terms[e]:
                return None
        return c

    def substitute(self, images: Sequence[SparseForm], *, template: SparseForm | None = None) -> SparseForm:
        """Replace variable ``i`` by the form ``images[i]``.

        All images must live in one module; the result lives there too (or in
        ``template``'s module when given).
        """
        if len(images) != self.num_vars:
            raise FormError("need one image per variable")
        target = template if template is not None else images[0]
        one = {(0,) * target.num_vars: _ONE}
        power_cache: dict[tuple[int, int], dict] = {}

        def power(i: int, k: int) -> dict:
            key = (i, k)
            if key not in power_cache:
                if k == 0:
                    power_cache[key] = one
                elif k == 1:
                    power_cache[key] = dict(images[i]._terms)
                else:
                    half = power(i, k // 2)
                    sq = _poly_mul(half, half)
                    power_cache[key] = _poly_mul(sq, images[i]._terms) if k % 2 else sq
            return power_cache[key]

        acc: dict = {}
        for e, c in self._terms.items():
            prod = {k: v * c for k, v in one.items()}
            for i, a in enumerate(e):
                if a:
                    prod = _poly_mul(prod, power(i, a))
            for k, v in prod.items():
                s = acc.get(k, _ZERO) + v
                if s:
                    acc[k] = s
                else:
                    acc.pop(k, None)
        return SparseForm(target.num_vars, acc, target.variance, target.blocks)

    def evaluate(self, point: Sequence):
        """Evaluate at a point (Gaussian/Fraction exact, complex/float numeric)."""
        if len(point) != self.num_vars:
            raise FormError("point has wrong length")
        exact = all(isinstance(x, (int, Fraction, Gaussian)) for x in point)
        pt = [as_gaussian(x) for x in point] if exact else [complex(x) for x in point]
        total = _ZERO if exact else 0j
        for e, c in self._terms.items():
            term = c if exact else complex(c)
            for x, a in zip(pt, e):
                if a:
                    term = term * x**a
            total = total + term
        return total

    # identity -------------------------------------------------------------
    def _key(self):
        return (self.num_vars, self.variance.value, self.blocks, tuple(sorted(self._terms.items(), key=lambda t: t[0])))

    def __eq__(self, other):
        if not isinstance(other, SparseForm):
            return NotImplemented
        return (
            self.num_vars == other.num_vars
            and self.variance == other.variance
            and self.blocks == other.blocks
            and self._terms == other._terms
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._key())
        return self._hash

    def __repr__(self):
        return f"SparseForm({self.num_vars}, {self}, variance={self.variance.value!r}, blocks={self.blocks})"

    def __str__(self):
        if not self._terms:
            return "0"
        names = _var_names(self.num_vars, self.variance)
        parts = []
        for e, c in sorted(self._terms.items(), reverse=True):
            mono = "*".join(
                n if a == 1 else f"{n}^{a}" for n, a in zip(names, e) if a
            )
            coeff = str(c)
            if c.im and c.re:
                coeff = f"({coeff})"
            if not mono:
                parts.append(coeff)
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append(f"-{mono}")
            else:
                parts.append(f"{coeff}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


def _var_names(n: int, variance: Variance) -> list[str]:
    if variance is Variance.CO and n <= 3:
        return ["x", "y", "z"][:n]
    if variance is Variance.CONTRA and n <= 3:
        return ["u", "v", "w"][:n]
    prefix = "x" if variance is Variance.CO else "u"
    return [f"{prefix}{i}" for i in range(n)]


def _poly_mul(a: dict, b: dict) -> dict:
    out: dict = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            s = out.get(e, _ZERO) + ca * cb
            if s:
                out[e] = s
            else:
                out.pop(e, None)
    return out
