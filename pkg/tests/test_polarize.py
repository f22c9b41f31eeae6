"""Defects on tables and formal defects, regular chains, combinatorial degree."""
import random
from itertools import permutations, product

import pytest
from hypothesis import given, settings

from combpol.digits import lucas_binom
from combpol.errors import BudgetExceededError, PreconditionError
from combpol.field import field_make
from combpol.forms import characteristic_forms
from combpol.poly import (
    FunctionTable,
    PointSpace,
    SparsePolynomial,
    degree,
    is_reduced,
    p_degree,
    parse_poly,
    to_table,
)
from combpol.polarize import (
    DefectTable,
    FormalDefect,
    RegularChain,
    comb_degree,
    comb_degree_oracle,
    defect_table,
    defect_table_recurrence,
    defect_value,
    formal_defect,
    formal_defect_via_chains,
    last_link_profile,
    longest_regular_chains,
)

from helpers import polynomials, random_poly, random_reduced_poly, random_table_values

GF4 = field_make(2, 2)


def _table(spec, d, rng):
    return FunctionTable(spec, d, random_table_values(spec, d, rng))


# ----- table defects -----------------------------------------------------------------

def test_first_defect_is_the_mapping(gf3, rng):
    tab = _table(gf3, 2, rng)
    first = defect_table(tab, 1)
    assert [first.values[(i,)] for i in range(9)] == list(tab.values)


def test_second_defect_of_a_square(gf3):
    tab = to_table(parse_poly("x1^2", gf3))
    delta = defect_table(tab, 2)
    for u, v in product(gf3.elements, repeat=2):
        assert delta([(u,), (v,)]) == 2 * u * v


def test_second_defect_of_a_cube(gf4):
    tab = to_table(parse_poly("x1^3", gf4))
    delta = defect_table(tab, 2)
    for x, y in product(gf4.elements, repeat=2):
        assert delta([(x,), (y,)]) == x * y * y + x * x * y


def test_defect_needs_zero_at_origin(gf3):
    tab = to_table(parse_poly("1 + x1", gf3))
    with pytest.raises(PreconditionError):
        defect_table(tab, 2)
    with pytest.raises(PreconditionError):
        defect_table(to_table(parse_poly("x1", gf3)), 0)


def test_defect_budget_and_explicit_tuples(gf4, rng):
    tab = _table(gf4, 2, rng)
    with pytest.raises(BudgetExceededError):
        defect_table(tab, 3, budget=1000)
    space = tab.space
    tuples = [[space.random_point(rng) for _ in range(3)] for _ in range(20)]
    partial = defect_table(tab, 3, tuples=tuples, seed=9)
    assert not partial.complete
    assert partial.seed == 9
    for args in tuples:
        assert partial(args) == defect_value(tab, args)


@pytest.mark.parametrize("p,e,d,n", [(2, 1, 3, 2), (2, 1, 3, 3), (3, 1, 2, 2), (3, 1, 2, 3), (2, 2, 2, 2)])
def test_recurrence_matches_inclusion_exclusion(p, e, d, n):
    spec = field_make(p, e)
    rng = random.Random(31 * p + 7 * d + n)
    for _ in range(3):
        tab = _table(spec, d, rng)
        assert defect_table(tab, n).values == defect_table_recurrence(tab, n).values


def test_defects_are_symmetric(gf2, rng):
    tab = _table(gf2, 3, rng)
    delta = defect_table(tab, 3)
    for key, value in delta.values.items():
        for perm in permutations(key):
            assert delta.values[perm] == value


def test_polarization_is_linear(gf3, rng):
    a, b = _table(gf3, 2, rng), _table(gf3, 2, rng)
    c = gf3.element(2)
    combined = defect_table(a.scale(c) + b, 2)
    da, db = defect_table(a, 2), defect_table(b, 2)
    for key, value in combined.values.items():
        assert value == c * da.values[key] + db.values[key]


def test_repeated_characteristic_argument_vanishes(gf2, gf3, rng):
    for spec, d, n in ((gf2, 3, 2), (gf2, 3, 3), (gf3, 2, 3)):
        tab = _table(spec, d, rng)
        space = tab.space
        p = spec.p
        for u in space:
            for rest in product(list(space), repeat=n - p):
                assert defect_value(tab, [u] * p + list(rest)) == spec.zero


def test_defect_table_document_reparses(gf2, rng):
    delta = defect_table(_table(gf2, 2, rng), 2)
    assert DefectTable.from_json(delta.to_json()) == delta


def _low_degree_poly(spec, d, rng, top):
    while True:
        f = random_reduced_poly(spec, d, rng, terms=3)
        if not f.is_zero() and comb_degree(f) <= top:
            return f


def _first_slot_additive(tab, n):
    space = tab.space
    points = list(space)
    for u in points:
        for w in points:
            for rest in product(points, repeat=n - 1):
                rest = list(rest)
                lhs = defect_value(tab, [space.add(u, w)] + rest)
                if lhs != defect_value(tab, [u] + rest) + defect_value(tab, [w] + rest):
                    return False
    return True


def test_defect_is_additive_exactly_from_the_comb_degree(gf3):
    rng = random.Random(31)
    for _ in range(6):
        f = _low_degree_poly(gf3, 2, rng, 3)
        tab = to_table(f)
        n = comb_degree(f)
        assert _first_slot_additive(tab, n), str(f)
        if n > 1:
            assert not _first_slot_additive(tab, n - 1), str(f)


def _pairwise_distinct(key):
    return len(set(key)) == len(key)


def test_characteristic_forms_are_fixed_by_distinct_arguments(gf3):
    points = list(PointSpace(gf3, 2))
    distinct = list(permutations(points, 3))
    nonzero = 0
    for phi in characteristic_forms(gf3, 2, 3):
        if phi.is_zero():
            continue
        nonzero += 1
        assert any(phi(args) for args in distinct), str(phi)
    assert nonzero > 0


def test_third_defects_agreeing_off_the_diagonal_are_equal(gf3):
    rng = random.Random(53)
    cubic = parse_poly("x1^2*x2", gf3)
    outcomes = set()
    for k in range(10):
        f = _low_degree_poly(gf3, 2, rng, 3)
        g = f + (_low_degree_poly(gf3, 2, rng, 2) if k % 2 else cubic)
        df = defect_table(to_table(f), 3)
        dg = defect_table(to_table(g), 3)
        off_diagonal = all(df.values[key] == dg.values[key] for key in df.values if _pairwise_distinct(key))
        everywhere = df.values == dg.values
        assert off_diagonal == everywhere, (str(f), str(g))
        outcomes.add(everywhere)
    assert outcomes == {True, False}


# ----- formal defects ----------------------------------------------------------------

def test_formal_defect_of_a_cube(gf4):
    defect = formal_defect(parse_poly("x1^3", gf4), 2)
    assert str(defect) == "x1_1*x2_1^2 + x1_1^2*x2_1"
    assert defect.poly == parse_poly("x1_1*x2_1^2 + x1_1^2*x2_1", gf4, block_size=1)


@pytest.mark.parametrize("field", ["2", "3", "2^2", "Q"])
def test_formal_defect_of_a_bilinear_monomial(field):
    from combpol.field import parse_field

    spec = parse_field(field)
    defect = formal_defect(parse_poly("x1*x2", spec), 2)
    assert defect.poly == parse_poly("x1_1*x2_2 + x1_2*x2_1", spec, block_size=2)


def test_formal_defect_vanishes_above_p_degree(gf4):
    f = parse_poly("x1^3", gf4)
    assert formal_defect(f, 3).is_zero()
    assert not formal_defect(f, 2).is_zero()


def test_formal_defect_rejects_bad_input(gf3):
    with pytest.raises(PreconditionError):
        formal_defect(parse_poly("2 + x1", gf3), 2)
    with pytest.raises(PreconditionError):
        formal_defect(parse_poly("x1", gf3), 2, method="fft")
    with pytest.raises(BudgetExceededError):
        formal_defect(parse_poly("x1^20*x2^20*x3^20", field_make(23)), 4, budget=100)


@pytest.mark.parametrize("field", ["2", "3", "2^2", "Q"])
def test_expansion_methods_agree(field):
    from combpol.field import parse_field

    spec = parse_field(field)
    rng = random.Random(len(field))
    for _ in range(8):
        f = random_poly(spec, 2, rng, terms=3, max_exp=4)
        for n in (1, 2, 3):
            assert formal_defect(f, n, "multinomial") == formal_defect(f, n, "subsets")


def test_chain_sum_matches_multinomial_expansion(gf3, gf4, rationals):
    rng = random.Random(5)
    for spec in (gf3, gf4, rationals):
        for _ in range(10):
            m = tuple(rng.randint(0, 5) for _ in range(2))
            if not any(m):
                continue
            mono = SparsePolynomial.monomial(spec, m)
            for s in (1, 2, 3):
                assert formal_defect_via_chains(mono, s) == formal_defect(mono, s)


def test_chain_sum_needs_a_monomial(gf3):
    with pytest.raises(PreconditionError):
        formal_defect_via_chains(parse_poly("x1 + x2", gf3), 2)


def test_formal_defect_evaluates_to_table_defect(gf3, gf4):
    for spec, text in ((gf3, "x1^2*x2 + 2*x2^2"), (gf4, "x1^3 + x1*x2^2")):
        f = parse_poly(text, spec)
        tab = to_table(f)
        space = PointSpace(spec, 2)
        for n in (2, 3):
            defect = formal_defect(f, n)
            for args in product(list(space)[:5], repeat=n):
                assert defect.evaluate(args) == defect_value(tab, list(args))


def test_formal_defect_is_block_symmetric(gf3):
    defect = formal_defect(parse_poly("x1^2*x2 + x1*x2*x3", gf3), 3)
    for perm in permutations(range(3)):
        assert defect.permute_blocks(perm) == defect


def test_formal_defect_document_reparses(gf4):
    defect = formal_defect(parse_poly("x1^3 + x1*x2", gf4), 2)
    assert FormalDefect.from_json(defect.to_json()) == defect


@settings(max_examples=40, deadline=None)
@given(polynomials(GF4, 2, max_terms=3))
def test_formal_defect_of_a_reduced_polynomial_is_reduced(f):
    for n in (1, 2, 3):
        assert is_reduced(formal_defect(f, n).poly)


@settings(max_examples=40, deadline=None)
@given(polynomials(GF4, 2, max_terms=2))
def test_distinct_monomials_have_disjoint_defects(f):
    monos = f.monomials()
    for n in (1, 2):
        supports = [set(formal_defect(g, n).poly.exponents()) for g in monos]
        for i in range(len(supports)):
            for j in range(i + 1, len(supports)):
                assert not supports[i] & supports[j]


# ----- regular chains ----------------------------------------------------------------

def test_chains_below_7_4():
    listing = longest_regular_chains((7, 4), field_make(3), enumerate_all=True)
    assert listing.length == 5
    assert len(listing.chains) == 60
    assert not listing.truncated
    assert "(7,4)>(4,4)>(1,4)>(0,4)>(0,1)>(0,0)" in {str(c) for c in listing.chains}
    for chain in listing.chains:
        assert chain.length == 5
        for a, b in zip(chain.chain, chain.chain[1:]):
            assert lucas_binom(a[0], b[0], 3) * lucas_binom(a[1], b[1], 3) % 3
            assert a != b


def test_chains_below_3_in_characteristic_2():
    listing = longest_regular_chains((3,), field_make(2), enumerate_all=True)
    assert listing.length == 2
    assert {c.chain for c in listing.chains} == {((3,), (2,), (0,)), ((3,), (1,), (0,))}


def test_chain_length_of_square_free_multiexponent(gf2, rationals):
    for spec in (gf2, field_make(5), rationals):
        assert longest_regular_chains((1, 1, 1, 1), spec).length == 4


def test_chain_enumeration_limit(gf2):
    listing = longest_regular_chains((1, 1, 1, 1), gf2, enumerate_all=True, limit=5)
    assert len(listing.chains) == 5
    assert listing.truncated


def test_chain_enumeration_exactly_at_limit():
    listing = longest_regular_chains((7, 4), field_make(3), enumerate_all=True, limit=60)
    assert len(listing.chains) == 60
    assert not listing.truncated


def test_chains_need_a_nonzero_multiexponent(gf2):
    with pytest.raises(PreconditionError):
        longest_regular_chains((0, 0), gf2)


def test_regular_chain_checks():
    chain = RegularChain(((7, 4), (4, 4), (1, 4), (0, 4), (0, 1), (0, 0)))
    assert chain.is_regular(3)
    assert chain.last_link == (0, 1)
    assert not RegularChain(((3,), (1,), (0,))).is_regular(3)


def test_last_link_profile(gf2, gf3):
    assert last_link_profile((3,), gf2) == {(1, 1), (1, 2)}
    assert last_link_profile((1, 1), gf2) == {(1, 1), (2, 1)}
    assert last_link_profile((2,), gf3) == {(1, 1)}
    assert last_link_profile((7, 4), gf3) == {(1, 1), (1, 3), (2, 1), (2, 3)}


# ----- combinatorial degree ----------------------------------------------------------

def test_comb_degree_examples(gf4, gf3, rationals):
    assert comb_degree(parse_poly("x1*x2*x3*x4*x5 + x1^2*x2^2*x3^2*x4^2", gf4)) == 5
    assert comb_degree(parse_poly("x1^7*x2^4", gf3)) == 5
    assert comb_degree(parse_poly("x1^3*x2", rationals)) == 4
    assert comb_degree(SparsePolynomial.zero(gf3, 2)) == -1


def test_comb_degree_is_degree_over_prime_fields(rng):
    for spec in (field_make(2), field_make(3), field_make(5)):
        for _ in range(10):
            f = random_poly(spec, 3, rng)
            assert comb_degree(f) == degree(f)


def test_oracle_examples(gf2, gf3):
    assert comb_degree_oracle(parse_poly("x1 + x1^2", gf2)) == 1
    assert comb_degree_oracle(SparsePolynomial.zero(gf3, 1)) == -1
    assert comb_degree_oracle(parse_poly("x1^7*x2^4", gf3)) == 5


def test_oracle_matches_p_weights(rng):
    for p, e in ((2, 1), (3, 1), (2, 2), (3, 2)):
        spec = field_make(p, e)
        for _ in range(5):
            m = tuple(rng.randint(0, 4) for _ in range(2))
            if not any(m):
                continue
            mono = SparsePolynomial.monomial(spec, m)
            assert comb_degree_oracle(mono) == comb_degree(mono)


def test_monomial_comb_degree_at_most_degree(gf4, rng):
    for _ in range(20):
        m = tuple(rng.randint(0, 3) for _ in range(3))
        if not any(m):
            continue
        mono = SparsePolynomial.monomial(gf4, m)
        assert p_degree(mono) <= degree(mono)
        assert (p_degree(mono) == degree(mono)) == all(k < 2 for k in m)
