"""Exact scalars and small dense linear algebra.

Everything here works over ``Fraction`` or :class:`Gaussian` entries; the
routines only need field operations and comparison with zero.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import reduce
from numbers import Rational
from typing import Iterable, Sequence

__all__ = [
    "Gaussian",
    "as_fraction",
    "as_gaussian",
    "fraction_str",
    "primitive_integer_vector",
    "rref",
    "nullspace",
    "rank",
    "det",
    "inverse",
    "matmul",
    "transpose",
    "identity",
]


class Gaussian:
    """A Gaussian rational ``re + im*i`` with ``Fraction`` parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        if isinstance(re, Gaussian):
            if im:
                raise TypeError("cannot combine a Gaussian real part with an imaginary part")
            self.re, self.im = re.re, re.im
            return
        self.re = re if type(re) is Fraction else as_fraction(re)
        self.im = im if type(im) is Fraction else as_fraction(im)

    @classmethod
    def _make(cls, re: Fraction, im: Fraction) -> Gaussian:
        g = object.__new__(cls)
        g.re = re
        g.im = im
        return g

    # arithmetic -----------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, Gaussian):
            if isinstance(other, (int, Fraction)):
                return Gaussian._make(self.re + other, self.im)
            return NotImplemented
        return Gaussian._make(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, Gaussian):
            if isinstance(other, (int, Fraction)):
                return Gaussian._make(self.re - other, self.im)
            return NotImplemented
        return Gaussian._make(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        if isinstance(other, (int, Fraction)):
            return Gaussian._make(other - self.re, -self.im)
        return NotImplemented

    def __neg__(self):
        return Gaussian._make(-self.re, -self.im)

    def __pos__(self):
        return self

    def __mul__(self, other):
        if not isinstance(other, Gaussian):
            if isinstance(other, (int, Fraction)):
                return Gaussian._make(self.re * other, self.im * other)
            return NotImplemented
        a, b, c, d = self.re, self.im, other.re, other.im
        if not b and not d:
            return Gaussian._make(a * c, b)
        return Gaussian._make(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, Gaussian):
            if isinstance(other, (int, Fraction)):
                if not other:
                    raise ZeroDivisionError("Gaussian division by zero")
                return Gaussian._make(self.re / other, self.im / other)
            return NotImplemented
        if not other.im:
            if not other.re:
                raise ZeroDivisionError("Gaussian division by zero")
            return Gaussian._make(self.re / other.re, self.im / other.re)
        return self * other.reciprocal()

    def __rtruediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.reciprocal() * other
        return NotImplemented

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.reciprocal() ** (-n)
        result = Gaussian._make(Fraction(1), Fraction(0))
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def reciprocal(self) -> Gaussian:
        n = self.abs2()
        if not n:
            raise ZeroDivisionError("Gaussian division by zero")
        return Gaussian._make(self.re / n, -self.im / n)

    def conjugate(self) -> Gaussian:
        return Gaussian._make(self.re, -self.im)

    def abs2(self) -> Fraction:
        """Squared modulus, an exact rational."""
        return self.re * self.re + self.im * self.im

    @property
    def is_real(self) -> bool:
        return not self.im

    # comparison / hashing --------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, Gaussian):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return not self.im and self.re == other
        return NotImplemented

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def sort_key(self) -> tuple[Fraction, Fraction]:
        return (self.re, self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"Gaussian({self})"

    def __str__(self):
        if not self.im:
            return fraction_str(self.re)
        if not self.re:
            return _imag_str(self.im)
        sign = "-" if self.im < 0 else "+"
        return f"{fraction_str(self.re)}{sign}{_imag_str(abs(self.im))}"

    @classmethod
    def parse(cls, text: str) -> Gaussian:
        """Parse strings such as ``"1/2+3/5i"`` or ``"-i"``."""
        s = text.replace(" ", "")
        if not s:
            raise ValueError("empty Gaussian rational")
        m = _GAUSS_RE.fullmatch(s)
        if m is None:
            raise ValueError(f"not a Gaussian rational: {text!r}")
        re_part, im_sign, im_mag, lone_im = m.group("re", "imsign", "immag", "lone")
        if lone_im is not None:
            mag = m.group("lonemag")
            return cls(0, _signed(m.group("lonesign"), mag))
        real = Fraction(re_part) if re_part else Fraction(0)
        imag = Fraction(0)
        if im_sign is not None:
            imag = _signed(im_sign, im_mag)
        return cls(real, imag)


_NUM = r"\d+(?:/\d+)?"
_GAUSS_RE = re.compile(
    rf"(?P<lone>(?P<lonesign>[+-]?)(?P<lonemag>{_NUM})?i)"
    rf"|(?P<re>[+-]?{_NUM})(?:(?P<imsign>[+-])(?P<immag>{_NUM})?i)?"
)


def _signed(sign: str | None, mag: str | None) -> Fraction:
    value = Fraction(mag) if mag else Fraction(1)
    return -value if sign == "-" else value


def _imag_str(im: Fraction) -> str:
    if im == 1:
        return "i"
    if im == -1:
        return "-i"
    return f"{fraction_str(im)}i"


def fraction_str(q: Fraction) -> str:
    return str(q)


def as_fraction(x) -> Fraction:
    if type(x) is Fraction:
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, Gaussian):
        if x.im:
            raise ValueError(f"{x} is not real")
        return x.re
    raise TypeError(f"cannot convert {type(x).__name__} exactly to a rational")


def as_gaussian(x) -> Gaussian:
    if isinstance(x, Gaussian):
        return x
    if isinstance(x, str):
        return Gaussian.parse(x)
    return Gaussian(x)


def primitive_integer_vector(vec: Sequence[Fraction]) -> tuple[int, ...]:
    """Positive multiple of ``vec`` with coprime integer entries."""
    den = reduce(math.lcm, (Fraction(c).denominator for c in vec), 1)
    ints = [int(Fraction(c) * den) for c in vec]
    g = reduce(math.gcd, (abs(c) for c in ints), 0)
    if g == 0:
        raise ValueError("zero vector has no primitive representative")
    return tuple(c // g for c in ints)


# ---------------------------------------------------------------------------
# dense linear algebra over an exact field


def _is_zero(x) -> bool:
    return not x


def _field_entry(x):
    # plain ints would turn into floats under true division
    if isinstance(x, (Fraction, Gaussian)):
        return x
    if isinstance(x, int) and not isinstance(x, bool):
        return Fraction(x)
    raise TypeError(f"{type(x).__name__} is not an exact field element")


def rref(rows: Sequence[Sequence], ncols: int | None = None):
    """Reduced row echelon form. Returns ``(rows, pivot_columns)``."""
    m = [[_field_entry(x) for x in r] for r in rows]
    if ncols is None:
        ncols = len(m[0]) if m else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == len(m):
            break
        p = next((i for i in range(r, len(m)) if not _is_zero(m[i][c])), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        piv = m[r][c]
        if piv != 1:
            m[r] = [x / piv for x in m[r]]
        for i in range(len(m)):
            if i != r and not _is_zero(m[i][c]):
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return m[:r], pivots


def rank(rows: Sequence[Sequence], ncols: int | None = None) -> int:
    if not rows:
        return 0
    return len(rref(rows, ncols)[1])


def nullspace(rows: Sequence[Sequence], ncols: int) -> list[list]:
    """Basis of ``{x : A x = 0}``, one vector per free column, in column order."""
    if not rows:
        return [[Fraction(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    red, pivots = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        vec = [Fraction(0)] * ncols
        vec[f] = Fraction(1)
        for row, pc in zip(red, pivots):
            vec[pc] = -row[f]
        basis.append(vec)
    return basis


def det(mat: Sequence[Sequence]):
    n = len(mat)
    m = [[_field_entry(x) for x in r] for r in mat]
    result = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if not _is_zero(m[i][c])), None)
        if p is None:
            return Fraction(0)
        if p != c:
            m[c], m[p] = m[p], m[c]
            result = -result
        piv = m[c][c]
        result = result * piv
        for i in range(c + 1, n):
            if not _is_zero(m[i][c]):
                f = m[i][c] / piv
                m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    return result


def inverse(mat: Sequence[Sequence]) -> list[list]:
    n = len(mat)
    aug = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(mat)]
    red, pivots = rref(aug, 2 * n)
    if pivots[:n] != list(range(n)) or len(red) < n:
        raise ZeroDivisionError("matrix is singular")
    return [row[n:] for row in red]


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list]:
    bt = list(zip(*b))
    out = []
    for row in a:
        out.append([sum((x * y for x, y in zip(row, col)), 0 * row[0]) for col in bt])
    return out


def transpose(a: Sequence[Sequence]) -> list[list]:
    return [list(col) for col in zip(*a)]


def identity(n: int, one=Fraction(1)) -> list[list]:
    zero = one - one
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def dot(a: Iterable, b: Iterable):
    total = 0
    for x, y in zip(a, b):
        total += x * y
    return total
