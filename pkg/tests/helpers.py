"""Random polynomials, matrices and hypothesis strategies shared by the tests."""
from hypothesis import strategies as st

from combpol.field import matrix_rank
from combpol.poly import SparsePolynomial, reduce_poly


def random_poly(spec, d, rng, terms=3, max_exp=None, constant=False):
    """Up to ``terms`` random monomials; no constant term unless asked"""
    top = max_exp if max_exp is not None else (spec.q - 1 if spec.is_finite else 3)
    out = {}
    for _ in range(terms):
        m = tuple(rng.randint(0, top) for _ in range(d))
        if not constant and not any(m):
            continue
        out[m] = rng.choice(spec.elements[1:]) if spec.is_finite else rng.randint(1, 5)
    return SparsePolynomial(spec, d, out)


def random_reduced_poly(spec, d, rng, terms=3):
    return reduce_poly(random_poly(spec, d, rng, terms))


def random_invertible(spec, d, rng):
    while True:
        rows = [[rng.choice(spec.elements) for _ in range(d)] for _ in range(d)]
        if matrix_rank(rows, spec) == d:
            return rows


def random_table_values(spec, d, rng):
    """Values of a random mapping F^d -> F with alpha(0) = 0"""
    size = spec.q ** d
    return (spec.zero,) + tuple(rng.choice(spec.elements) for _ in range(size - 1))


def polynomials(spec, d, max_terms=4):
    """Reduced polynomials over a finite field with f(0) = 0"""
    exponents = st.tuples(*[st.integers(0, spec.q - 1)] * d).filter(any)
    coefficients = st.sampled_from(spec.elements[1:])
    return st.dictionaries(exponents, coefficients, max_size=max_terms).map(
        lambda terms: SparsePolynomial(spec, d, terms)
    )
