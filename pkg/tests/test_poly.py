"""Parsing, reduction, tables, degrees, basis change and the pl/tpl/dpl tests."""
import random

import pytest
from hypothesis import given, settings

from combpol.errors import (
    BudgetExceededError,
    DimensionError,
    ParseError,
    PreconditionError,
    SingularMatrixError,
)
from combpol.field import field_make
from combpol.poly import (
    FunctionTable,
    PointSpace,
    SparsePolynomial,
    change_of_basis,
    degree,
    dpl_member,
    dpl_offender,
    evaluate,
    homogenize,
    interpolate,
    is_homogeneous,
    is_reduced,
    is_totally_reduced,
    p_degree,
    parse_poly,
    pl_member,
    reduce_poly,
    reduced_monomials,
    to_table,
    tpl_member,
    tpl_offender,
)

from helpers import polynomials, random_invertible, random_poly, random_reduced_poly

QUINTIC = "x1*x2*x3*x4*x5 + x1^2*x2^2*x3^2*x4^2"
GF4 = field_make(2, 2)
GF3 = field_make(3)


# ----- parsing and formatting -------------------------------------------------------

def test_parse_quintic(gf4):
    f = parse_poly(QUINTIC, gf4, 5)
    assert len(f) == 2
    assert f.coefficient((1, 1, 1, 1, 1)) == gf4.one
    assert f.coefficient((2, 2, 2, 2, 0)) == gf4.one
    assert str(f) == QUINTIC


def test_parse_zero_and_cancellation(gf3):
    assert parse_poly("0", gf3).is_zero()
    assert (parse_poly("2*x1^2", gf3) + parse_poly("x1^2", gf3)).is_zero()
    assert parse_poly("2*x1^2 + x1^2", gf3).is_zero()


def test_parse_signs_and_rationals(gf3, rationals):
    f = parse_poly("x1 - x2", gf3)
    assert f.coefficient((0, 1)) == gf3.element(2)
    g = parse_poly("1/2*x1 - 1/3*x2^2", rationals)
    assert str(g.coefficient((1, 0))) == "1/2"
    assert str(g.coefficient((0, 2))) == "-1/3"


def test_parse_infers_dimension(gf2):
    assert parse_poly("x3", gf2).d == 3
    assert parse_poly("x1", gf2, 4).d == 4


def test_parse_block_variables(gf4):
    f = parse_poly("x1_1*x2_1^2 + x1_1^2*x2_1", gf4, block_size=1)
    assert f.d == 2
    assert set(f.exponents()) == {(1, 2), (2, 1)}
    with pytest.raises(ParseError):
        parse_poly("x1_1", gf4)
    with pytest.raises(ParseError):
        parse_poly("x1", gf4, block_size=2)
    with pytest.raises(ParseError):
        parse_poly("x1_3", gf4, block_size=2)


@pytest.mark.parametrize("text", ["x1 +", "x1^", "x1^1/2", "x0", "x1 x2", "3*x1", "x1 # x2", ""])
def test_parse_errors(gf3, text):
    with pytest.raises(ParseError):
        parse_poly(text, gf3)


def test_parse_index_beyond_dimension(gf3):
    with pytest.raises(ParseError):
        parse_poly("x3", gf3, 2)


def test_json_document_reparses(gf4):
    f = parse_poly(QUINTIC, gf4, 5)
    assert SparsePolynomial.from_json(f.to_json()) == f


# ----- arithmetic and reduction ---------------------------------------------------------

def test_constructor_validates(gf2):
    with pytest.raises(DimensionError):
        SparsePolynomial(gf2, 2, {(1,): 1})
    with pytest.raises(DimensionError):
        SparsePolynomial(gf2, 1, {(-1,): 1})
    with pytest.raises(PreconditionError):
        SparsePolynomial.variable(gf2, 1, 0) ** -1


def test_reduce_frobenius(gf4):
    assert reduce_poly(parse_poly("x1^4", gf4)) == parse_poly("x1", gf4)
    assert reduce_poly(parse_poly("x1^6", gf4)) == parse_poly("x1^3", gf4)
    assert reduce_poly(parse_poly("x1^3", gf4)) == parse_poly("x1^3", gf4)
    assert reduce_poly(parse_poly("x1^7", gf4)) == parse_poly("x1", gf4)


def test_reduce_expanded_product(gf4):
    x1, x2 = (SparsePolynomial.variable(gf4, 2, i) for i in range(2))
    f = x1 * x1 * (x1 + x2) ** 2
    assert not is_reduced(f)
    assert reduce_poly(f) == parse_poly("x1 + x1^2*x2^2", gf4)


def test_reduce_over_rationals_is_identity(rationals):
    f = parse_poly("x1^9 + 1/2*x2^4", rationals)
    assert reduce_poly(f) is f
    assert is_reduced(f)


def test_evaluate(gf4):
    f = parse_poly(QUINTIC, gf4, 5)
    assert evaluate(f, [1] * 5) == gf4.zero
    t = gf4.element(2)
    assert evaluate(parse_poly("x1^2*x2^2", gf4), [t, t]) == t
    assert evaluate(f, [0] * 5) == gf4.zero
    with pytest.raises(DimensionError):
        evaluate(f, [1, 1])


# ----- tables and interpolation ---------------------------------------------------------

def test_point_space_order(gf3):
    space = PointSpace(gf3, 2)
    points = list(space)
    assert [space.index(u) for u in points] == list(range(9))
    assert space.point(5) == (gf3.element(1), gf3.element(2))
    assert space.decode([2, 0]) == (gf3.element(2), gf3.zero)


def test_interpolate_small_tables(gf3, gf4):
    identity = FunctionTable(gf3, 1, tuple(gf3.elements))
    assert interpolate(identity) == parse_poly("x1", gf3)
    assert interpolate(to_table(parse_poly("x1^4", gf4))) == parse_poly("x1", gf4)
    zero = FunctionTable(gf4, 2, (gf4.zero,) * 16)
    assert interpolate(zero).is_zero()


@pytest.mark.parametrize("p,e,d", [(2, 1, 3), (3, 1, 2), (2, 2, 2), (5, 1, 2), (2, 3, 1), (3, 2, 1)])
def test_interpolate_inverts_to_table(p, e, d):
    spec = field_make(p, e)
    rng = random.Random(p * 100 + e * 10 + d)
    for _ in range(10):
        f = random_reduced_poly(spec, d, rng, terms=4)
        assert interpolate(to_table(f)) == f


def test_function_table_validation(gf4):
    with pytest.raises(DimensionError):
        FunctionTable(gf4, 2, (gf4.zero,) * 15)
    with pytest.raises(ParseError):
        FunctionTable.from_json([0, 1, 2, 3])
    with pytest.raises(BudgetExceededError):
        to_table(parse_poly("x1", gf4, 5), budget=100)
    tab = to_table(parse_poly("x1*x2", gf4))
    assert FunctionTable.from_json(tab.to_json()) == tab


@settings(max_examples=50, deadline=None)
@given(polynomials(GF3, 2), polynomials(GF3, 2))
def test_reduced_polynomials_equal_iff_tables_equal(f, g):
    assert (f == g) == (to_table(f) == to_table(g))


def test_equivalent_exponents_share_a_table(gf4, rng):
    for _ in range(20):
        f = random_poly(gf4, 2, rng, terms=3)
        lifted = SparsePolynomial(gf4, 2, {
            tuple(k + 3 * rng.randint(0, 2) if k else 0 for k in m): c for m, c in f.items()
        })
        assert to_table(lifted) == to_table(f)
        assert reduce_poly(lifted) == reduce_poly(f)


# ----- degrees -------------------------------------------------------------------------

def test_degrees(gf4, gf3, rationals):
    f = parse_poly(QUINTIC, gf4, 5)
    assert degree(f) == 8
    assert p_degree(f) == 5
    assert p_degree(parse_poly("x1^7*x2^4", gf3)) == 5
    assert p_degree(parse_poly("x1^3*x2", rationals)) == 4
    zero = SparsePolynomial.zero(gf3, 2)
    assert degree(zero) == -1
    assert p_degree(zero) == -1


def test_is_homogeneous(gf4):
    assert is_homogeneous(parse_poly("x1^2 + x1*x2", gf4))
    assert is_homogeneous(parse_poly("x1^2 + x1*x2", gf4), 2)
    assert not is_homogeneous(parse_poly(QUINTIC, gf4, 5), 5)


# ----- basis change -----------------------------------------------------------------------

def test_change_of_basis_examples(gf4):
    matrix = [[1, 1], [0, 1]]
    assert change_of_basis(parse_poly("x1^2*x2^2", gf4), matrix) == parse_poly("x1 + x1^2*x2^2", gf4)
    assert change_of_basis(parse_poly("x1*x2", gf4), matrix) == parse_poly("x1^2 + x1*x2", gf4)


def test_change_of_basis_identity_reduces(gf4):
    f = parse_poly("x1^5 + x2", gf4)
    assert change_of_basis(f, [[1, 0], [0, 1]]) == reduce_poly(f)


def test_change_of_basis_errors(gf3):
    f = parse_poly("x1*x2", gf3)
    with pytest.raises(SingularMatrixError):
        change_of_basis(f, [[1, 2], [2, 1]])
    with pytest.raises(DimensionError):
        change_of_basis(f, [[1]])


def test_change_of_basis_realizes_the_same_mapping(gf3, rng):
    for _ in range(10):
        f = random_reduced_poly(gf3, 2, rng)
        matrix = random_invertible(gf3, 2, rng)
        g = change_of_basis(f, matrix)
        space = PointSpace(gf3, 2)
        for a in space:
            old = tuple(sum((matrix[i][j] * a[i] for i in range(2)), gf3.zero) for j in range(2))
            assert evaluate(g, a) == evaluate(f, old)


# ----- totally reduced and pl/tpl/dpl --------------------------------------------------------

def test_totally_reduced(gf4, gf3):
    assert not is_totally_reduced(parse_poly("x1^2", gf4))
    assert is_totally_reduced(parse_poly("x1^2", gf3))
    assert is_totally_reduced(parse_poly("x1*x2*x3", gf4))


def test_memberships_quintic(gf4):
    f = parse_poly(QUINTIC, gf4, 5)
    assert pl_member(f, 5)
    assert tpl_member(f, 5)
    assert dpl_member(f, 5)
    assert not pl_member(f, 4)


def test_memberships_cube(gf4):
    f = parse_poly("x1^3", gf4)
    assert pl_member(f, 2)
    assert not tpl_member(f, 2)
    assert tpl_offender(f, 2) == (3,)
    assert dpl_offender(f, 2) == (3,)


def test_memberships_zero_and_constant(gf4):
    zero = SparsePolynomial.zero(gf4, 2)
    for n in (1, 2, 5):
        assert pl_member(zero, n) and tpl_member(zero, n) and dpl_member(zero, n)
    with pytest.raises(PreconditionError):
        tpl_member(parse_poly("1 + x1", gf4), 2)
    assert not dpl_member(parse_poly("1 + x1", gf4), 1)


def test_dpl_over_rationals_means_exact_degree(rationals):
    assert dpl_member(parse_poly("x1^2 + 3*x1*x2", rationals), 2)
    assert not dpl_member(parse_poly("x1^2 + x1^4", rationals), 2)


def test_memberships_invariant_under_basis_change(gf4, gf3):
    rng = random.Random(77)
    for spec in (gf3, gf4):
        for _ in range(15):
            f = random_reduced_poly(spec, 2, rng)
            g = change_of_basis(f, random_invertible(spec, 2, rng))
            assert degree(g) == degree(f)
            assert p_degree(g) == p_degree(f)
            for n in (1, 2, 3):
                assert tpl_member(g, n) == tpl_member(f, n)
                assert dpl_member(g, n) == dpl_member(f, n)


def test_homogenize_quintic(gf4):
    f = parse_poly(QUINTIC, gf4, 5)
    h = homogenize(f, 5)
    assert str(h) == "x1^2*x2^2*x3^2*x4^2 + x1^4*x2*x3*x4*x5"
    assert is_homogeneous(h, 8)
    assert reduce_poly(h) == f
    with pytest.raises(PreconditionError):
        homogenize(parse_poly("x1 + x1^2", gf4), 2)


def test_reduced_monomials(gf2):
    assert list(reduced_monomials(gf2, 2)) == [(0, 0), (0, 1), (1, 0), (1, 1)]
