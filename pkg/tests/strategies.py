from fractions import Fraction

from hypothesis import strategies as st

from pairstab.forms import SparseForm

small_fracs = st.builds(Fraction, st.integers(-6, 6), st.integers(1, 3))


def points(dim: int, min_size: int = 1, max_size: int = 7):
    return st.lists(st.tuples(*[small_fracs] * dim), min_size=min_size, max_size=max_size)


@st.composite
def forms(draw, n: int = 2, degree: int | None = None, max_degree: int = 4, max_terms: int = 4, coeff=(-3, 3)):
    d = draw(st.integers(0, max_degree)) if degree is None else degree

    def exps(draw_):
        cuts = sorted(draw_(st.lists(st.integers(0, d), min_size=n - 1, max_size=n - 1)))
        bounds = [0] + cuts + [d]
        return tuple(bounds[i + 1] - bounds[i] for i in range(n))

    terms = {}
    for _ in range(draw(st.integers(1, max_terms))):
        c = draw(st.integers(*coeff).filter(bool))
        terms[exps(draw)] = c
    f = SparseForm(n, terms)
    if not f.terms:
        f = SparseForm(n, {(d,) + (0,) * (n - 1): 1})
    return f


def sl_matrices(n: int, bound: int = 2):
    """Unimodular integer matrices as products of a lower and an upper unitriangular matrix."""
    entries = st.integers(-bound, bound)

    @st.composite
    def build(draw):
        L = [[1 if i == j else (draw(entries) if j < i else 0) for j in range(n)] for i in range(n)]
        U = [[1 if i == j else (draw(entries) if j > i else 0) for j in range(n)] for i in range(n)]
        return [[sum(L[i][k] * U[k][j] for k in range(n)) for j in range(n)] for i in range(n)]

    return build()
