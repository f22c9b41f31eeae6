"""
Combinatorial polarization.

Two table-level paths compute the n-th defect of a mapping alpha: V -> F
(inclusion-exclusion over subset sums, and the two-slot recurrence).
Two formal paths expand the defect of a polynomial symbolically (the
multinomial collapse and the literal subset substitution), and a third
sums over chains of multiexponents. Regular chains and the combinatorial
degree live here as well.
"""
import logging
import math
from dataclasses import dataclass, field
from itertools import product
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Set, Tuple

from .digits import lucas_binom, p_digits, p_weight
from .errors import BudgetExceededError, ConsistencyError, DimensionError, ParseError, PreconditionError
from .field import FieldElement, FieldSpec, parse_field
from .poly import (
    TABLE_BUDGET,
    FunctionTable,
    MultiExponent,
    Point,
    PointSpace,
    SparsePolynomial,
    block_names,
    check_budget,
    degree,
    evaluate,
    format_poly,
    p_degree,
    parse_poly,
    require_no_constant,
    substitute,
)

logger = logging.getLogger(__name__)

__all__ = [
    "ChainListing",
    "DefectTable",
    "FormalDefect",
    "RegularChain",
    "comb_degree",
    "comb_degree_oracle",
    "defect_table",
    "defect_table_recurrence",
    "defect_value",
    "formal_defect",
    "formal_defect_via_chains",
    "last_link_profile",
    "longest_regular_chains",
    "lucas_binom",
    "p_weight",
]

EXPANSION_BUDGET = 2_000_000
CHAIN_LIMIT = 10_000


# ----- table defects ----------------------------------------------------------

def require_zero_at_origin(tab: FunctionTable) -> None:
    if tab.values[0]:
        raise PreconditionError(f"polarization needs alpha(0) = 0, got {tab.values[0]}")


def defect_value(tab: FunctionTable, args: Sequence[Point]) -> FieldElement:
    """Delta^n alpha(u_1, ..., u_n) by inclusion-exclusion over nonempty subsets"""
    n = len(args)
    if n < 1:
        raise PreconditionError("the defect needs at least one argument")
    space = tab.space
    sums: List[Point] = [space.zero] * (1 << n)
    total = tab.spec.zero
    for mask in range(1, 1 << n):
        low = (mask & -mask).bit_length() - 1
        sums[mask] = space.add(sums[mask & (mask - 1)], args[low])
        value = tab(sums[mask])
        if (n - bin(mask).count("1")) % 2:
            total = total - value
        else:
            total = total + value
    return total


@dataclass(frozen=True)
class DefectTable:
    """Values of Delta^n alpha on argument tuples, keyed by point indices.

    ``complete`` is set when every tuple of V^n is present.
    """

    spec: FieldSpec
    d: int
    n: int
    values: Mapping[Tuple[int, ...], FieldElement]
    complete: bool = True
    seed: Optional[int] = None

    @property
    def space(self) -> PointSpace:
        return PointSpace(self.spec, self.d)

    def __call__(self, args: Sequence[Point]) -> FieldElement:
        key = tuple(self.space.index(u) for u in args)
        try:
            return self.values[key]
        except KeyError:
            raise DimensionError(f"tuple {key} was not evaluated") from None

    def __len__(self) -> int:
        return len(self.values)

    def is_zero(self) -> bool:
        return not any(self.values.values())

    def to_json(self) -> dict:
        space = self.space
        entries = [
            {"args": [space.encode(space.point(i)) for i in key], "value": v.value}
            for key, v in sorted(self.values.items())
        ]
        out = {"field": self.spec.label, "d": self.d, "n": self.n, "complete": self.complete, "entries": entries}
        if self.seed is not None:
            out["seed"] = self.seed
        return out

    @classmethod
    def from_json(cls, data: Mapping) -> "DefectTable":
        spec = parse_field(str(data["field"]))
        d, n = int(data["d"]), int(data["n"])
        space = PointSpace(spec, d)
        values = {}
        for entry in data["entries"]:
            key = tuple(space.index(space.decode(u)) for u in entry["args"])
            if len(key) != n:
                raise ParseError(f"defect entry with {len(key)} arguments, expected {n}")
            values[key] = spec.element(int(entry["value"]))
        return cls(spec, d, n, values, bool(data.get("complete", False)), data.get("seed"))


def _argument_tuples(tab: FunctionTable, n: int, tuples: Optional[Iterable[Sequence[Point]]],
                     budget: int) -> Tuple[List[Tuple[int, ...]], bool]:
    space = tab.space
    if tuples is not None:
        keys = [tuple(space.index(u) for u in args) for args in tuples]
        for key in keys:
            if len(key) != n:
                raise DimensionError(f"argument tuple of length {len(key)} for arity {n}")
        return keys, False
    total = space.size ** n
    if total > budget:
        raise BudgetExceededError(
            f"Delta^{n} over {tab.spec}^{tab.d} has {total} tuples, budget is {budget}; pass explicit tuples"
        )
    return list(product(range(space.size), repeat=n)), True


def defect_table(tab: FunctionTable, n: int, tuples: Optional[Iterable[Sequence[Point]]] = None,
                 budget: int = TABLE_BUDGET, seed: Optional[int] = None) -> DefectTable:
    """Delta^n alpha on all of V^n (within budget) or on the given tuples"""
    require_zero_at_origin(tab)
    if n < 1:
        raise PreconditionError(f"arity must be >= 1, got {n}")
    keys, complete = _argument_tuples(tab, n, tuples, budget)
    space = tab.space
    values = {key: defect_value(tab, [space.point(i) for i in key]) for key in keys}
    logger.debug("defect table Delta^%d: %d tuples", n, len(values))
    return DefectTable(tab.spec, tab.d, n, values, complete, seed)


def defect_table_recurrence(tab: FunctionTable, n: int, tuples: Optional[Iterable[Sequence[Point]]] = None,
                            budget: int = TABLE_BUDGET, seed: Optional[int] = None) -> DefectTable:
    """Delta^n alpha via Delta^k(u1, u2, ...) = Delta^(k-1)(u1+u2, ...) - Delta^(k-1)(u1, ...) - Delta^(k-1)(u2, ...)"""
    require_zero_at_origin(tab)
    if n < 1:
        raise PreconditionError(f"arity must be >= 1, got {n}")
    keys, complete = _argument_tuples(tab, n, tuples, budget)
    space = tab.space
    memo: Dict[Tuple[int, ...], FieldElement] = {}

    def add(i: int, j: int) -> int:
        return space.index(space.add(space.point(i), space.point(j)))

    def delta(key: Tuple[int, ...]) -> FieldElement:
        if len(key) == 1:
            return tab.values[key[0]]
        if key not in memo:
            rest = key[2:]
            memo[key] = delta((add(key[0], key[1]),) + rest) - delta((key[0],) + rest) - delta((key[1],) + rest)
        return memo[key]

    values = {key: delta(key) for key in keys}
    return DefectTable(tab.spec, tab.d, n, values, complete, seed)


# ----- formal defects -------------------------------------------------------

@dataclass(frozen=True)
class FormalDefect:
    """Delta^n f as a polynomial in n blocks of base_d variables.

    Variable (i, j), coordinate j of block i, has index (i-1)*base_d + (j-1).
    """

    n: int
    base_d: int
    poly: SparsePolynomial

    def __post_init__(self):
        if self.poly.d != self.n * self.base_d:
            raise DimensionError(f"formal defect needs {self.n * self.base_d} variables, got {self.poly.d}")

    @property
    def spec(self) -> FieldSpec:
        return self.poly.spec

    def is_zero(self) -> bool:
        return self.poly.is_zero()

    def block(self, m: MultiExponent, i: int) -> MultiExponent:
        """Exponents of block i (0-based) inside a multiexponent of poly"""
        return m[i * self.base_d:(i + 1) * self.base_d]

    def permute_blocks(self, perm: Sequence[int]) -> "FormalDefect":
        """Move block i to position perm[i]"""
        if sorted(perm) != list(range(self.n)):
            raise PreconditionError(f"{list(perm)} is not a permutation of 0..{self.n - 1}")
        terms = {}
        for m, c in self.poly.terms.items():
            moved = [0] * self.poly.d
            for i in range(self.n):
                target = perm[i] * self.base_d
                moved[target:target + self.base_d] = self.block(m, i)
            terms[tuple(moved)] = c
        return FormalDefect(self.n, self.base_d, SparsePolynomial(self.spec, self.poly.d, terms))

    def evaluate(self, args: Sequence[Sequence]) -> FieldElement:
        if len(args) != self.n or any(len(u) != self.base_d for u in args):
            raise DimensionError(f"formal defect takes {self.n} vectors of length {self.base_d}")
        return evaluate(self.poly, [a for u in args for a in u])

    def __str__(self) -> str:
        return format_poly(self.poly, block_names(self.base_d))

    def to_json(self) -> dict:
        return {"field": self.spec.label, "n": self.n, "d": self.base_d, "poly": str(self)}

    @classmethod
    def from_json(cls, data: Mapping) -> "FormalDefect":
        spec = parse_field(str(data["field"]))
        n, base_d = int(data["n"]), int(data["d"])
        return cls(n, base_d, parse_poly(str(data["poly"]), spec, n * base_d, block_size=base_d))


def _binom_in(a: int, b: int, p) -> int:
    return lucas_binom(a, b, p)


def _splits(total: int, parts: int, p) -> Iterator[Tuple[Tuple[int, ...], int]]:
    """Ordered splits of total into ``parts`` non-negative pieces with the multinomial coefficient.

    Pieces whose multinomial vanishes mod p are skipped.
    """
    if parts == 1:
        yield (total,), 1
        return
    for k in range(total + 1):
        c = _binom_in(total, k, p)
        if not c:
            continue
        for rest, rc in _splits(total - k, parts - 1, p):
            yield (k,) + rest, c * rc


def _defect_of_monomial(m: MultiExponent, n: int, p, counter: List[int], budget: int) -> Dict[MultiExponent, int]:
    """Integer coefficients of Delta^n x^m: every block must carry a nonzero exponent"""
    d = len(m)
    per_coord = [list(_splits(k, n, p)) for k in m]
    remaining = [sum(m[j:]) for j in range(d)] + [0]
    out: Dict[MultiExponent, int] = {}

    def walk(j: int, blocks: List[Tuple[int, ...]], used: int, coeff: int) -> None:
        if n - bin(used).count("1") > remaining[j]:
            return
        if j == d:
            counter[0] += 1
            if counter[0] > budget:
                raise BudgetExceededError(f"formal expansion exceeded {budget} terms")
            key = tuple(blocks[j2][i] for i in range(n) for j2 in range(d))
            out[key] = out.get(key, 0) + coeff
            return
        for split, c in per_coord[j]:
            mask = used
            for i, k in enumerate(split):
                if k:
                    mask |= 1 << i
            blocks.append(split)
            walk(j + 1, blocks, mask, coeff * c)
            blocks.pop()

    walk(0, [], 0, 1)
    return out


def _formal_multinomial(f: SparsePolynomial, n: int, budget: int) -> SparsePolynomial:
    spec = f.spec
    counter = [0]
    terms: Dict[MultiExponent, FieldElement] = {}
    for m, c in f.terms.items():
        for key, k in _defect_of_monomial(m, n, spec.p, counter, budget).items():
            value = c * spec.from_int(k)
            terms[key] = terms[key] + value if key in terms else value
    logger.debug("multinomial expansion of Delta^%d: %d terms visited", n, counter[0])
    return SparsePolynomial(spec, n * f.d, terms)


def _formal_subsets(f: SparsePolynomial, n: int, budget: int) -> SparsePolynomial:
    spec, d = f.spec, f.d
    estimate = (2 ** n - 1) * sum(math.prod(math.comb(k + n - 1, n - 1) for k in m) for m in f.terms)
    check_budget(estimate, budget, f"subset expansion of Delta^{n}")
    total = SparsePolynomial.zero(spec, n * d)
    for mask in range(1, 1 << n):
        members = [i for i in range(n) if mask >> i & 1]
        images = [
            sum((SparsePolynomial.variable(spec, n * d, i * d + j) for i in members),
                SparsePolynomial.zero(spec, n * d))
            for j in range(d)
        ]
        value = substitute(f, images, reduce_steps=False)
        total = total - value if (n - len(members)) % 2 else total + value
    return total


def formal_defect(f: SparsePolynomial, n: int, method: str = "multinomial",
                  budget: int = EXPANSION_BUDGET) -> FormalDefect:
    """Delta^n f as a formal, unreduced polynomial in n*d variables.

    ``multinomial`` expands each monomial by the multinomial theorem and keeps
    the terms in which every block occurs; ``subsets`` substitutes the block
    sums of every nonempty subset and collects.
    """
    require_no_constant(f, "formal_defect")
    if n < 1:
        raise PreconditionError(f"arity must be >= 1, got {n}")
    if method == "multinomial":
        poly = _formal_multinomial(f, n, budget)
    elif method == "subsets":
        poly = _formal_subsets(f, n, budget)
    else:
        raise PreconditionError(f"unknown expansion method {method!r}; use multinomial or subsets")
    return FormalDefect(n, f.d, poly)


def generalized_binom(m: Sequence[int], k: Sequence[int], p) -> int:
    """prod_i binom(m_i, k_i) mod p (exact over Q)"""
    result = 1
    for a, b in zip(m, k):
        result *= lucas_binom(a, b, p)
        if not result:
            return 0
    return result if math.isinf(p) else result % p


def formal_defect_via_chains(mono: SparsePolynomial, s: int, budget: int = EXPANSION_BUDGET) -> FormalDefect:
    """Delta^s x^m as the sum over chains m = m_1 > ... > m_s > 0 of
    prod binom(m_i, m_(i+1)) x_1^(m_s) x_2^(m_(s-1) - m_s) ... x_s^(m_1 - m_2)
    """
    if len(mono) != 1:
        raise PreconditionError(f"formal_defect_via_chains takes a single monomial, got {len(mono)} terms")
    if s < 1:
        raise PreconditionError(f"chain length must be >= 1, got {s}")
    (m, c), = mono.items()
    if not any(m):
        raise PreconditionError("the monomial must be non-constant")
    spec, d = mono.spec, mono.d
    p = spec.p
    terms: Dict[MultiExponent, FieldElement] = {}
    visited = [0]

    def emit(chain: List[MultiExponent], coeff: int) -> None:
        visited[0] += 1
        if visited[0] > budget:
            raise BudgetExceededError(f"chain expansion exceeded {budget} chains")
        blocks = [chain[-1]] + [
            tuple(a - b for a, b in zip(chain[i], chain[i + 1])) for i in range(len(chain) - 2, -1, -1)
        ]
        key = tuple(k for block in blocks for k in block)
        value = c * spec.from_int(coeff)
        terms[key] = terms[key] + value if key in terms else value

    def extend(chain: List[MultiExponent], coeff: int) -> None:
        if len(chain) == s:
            emit(chain, coeff)
            return
        top = chain[-1]
        for nxt in product(*(range(k + 1) for k in top)):
            if nxt == top or sum(nxt) < s - len(chain):
                continue
            b = generalized_binom(top, nxt, p)
            if b:
                chain.append(nxt)
                extend(chain, coeff * b)
                chain.pop()

    extend([tuple(m)], 1)
    return FormalDefect(s, d, SparsePolynomial(spec, s * d, terms))


# ----- regular chains -----------------------------------------------------------

@dataclass(frozen=True)
class RegularChain:
    """m = m_1 > ... > m_s, ending in the zero multiexponent"""

    chain: Tuple[MultiExponent, ...]

    @property
    def length(self) -> int:
        return len(self.chain) - 1

    def is_regular(self, p) -> bool:
        return all(
            generalized_binom(a, b, p) and a != b and all(y <= x for x, y in zip(a, b))
            for a, b in zip(self.chain, self.chain[1:])
        )

    @property
    def last_link(self) -> MultiExponent:
        """The last nonzero multiexponent"""
        return self.chain[-2] if len(self.chain) > 1 else self.chain[-1]

    def __str__(self) -> str:
        return ">".join("(" + ",".join(map(str, m)) + ")" for m in self.chain)


@dataclass
class ChainListing:
    m: MultiExponent
    p: object
    length: int
    chains: List[RegularChain] = field(default_factory=list)
    truncated: bool = False

    def to_json(self) -> dict:
        return {
            "m": list(self.m),
            "p": "inf" if math.isinf(self.p) else self.p,
            "length": self.length,
            "chains": [[list(x) for x in c.chain] for c in self.chains],
            "truncated": self.truncated,
        }


def _digit_steps(t: int, p) -> List[int]:
    """The amounts p^j that may be subtracted from t without a borrow"""
    if math.isinf(p):
        return [1] if t else []
    return [p ** j for j, digit in enumerate(p_digits(t, p)) if digit]


def _require_nonzero(m: Sequence[int]) -> None:
    if not any(m):
        raise PreconditionError("regular chains need a nonzero multiexponent")


def longest_regular_chains(m: Sequence[int], spec: FieldSpec, enumerate_all: bool = False,
                           limit: int = CHAIN_LIMIT) -> ChainListing:
    """Length sum_i omega_p(m_i) of the longest regular chains below m.

    With ``enumerate_all`` the chains are produced by subtracting one base-p
    digit unit p^j from one exponent per step; at most ``limit`` are kept.
    """
    m = tuple(int(k) for k in m)
    _require_nonzero(m)
    p = spec.p
    length = sum(p_weight(k, p) for k in m)
    listing = ChainListing(m, p, length)
    if not enumerate_all:
        return listing

    def walk(chain: List[MultiExponent]) -> bool:
        top = chain[-1]
        if not any(top):
            found = RegularChain(tuple(chain))
            if found.length != length or not found.is_regular(p):
                raise ConsistencyError(f"chain {found} is not a longest regular chain")
            if len(listing.chains) == limit:
                return False
            listing.chains.append(found)
            return True
        for i, k in enumerate(top):
            for step in _digit_steps(k, p):
                nxt = top[:i] + (k - step,) + top[i + 1:]
                chain.append(nxt)
                go_on = walk(chain)
                chain.pop()
                if not go_on:
                    return False
        return True

    listing.truncated = not walk([m])
    if listing.truncated:
        logger.warning("chain enumeration for %s stopped at %d chains", m, limit)
    return listing


def last_link_profile(m: Sequence[int], spec: FieldSpec) -> Set[Tuple[int, int]]:
    """Pairs (coordinate, p^j), coordinates 1-based, of the one-hot links that end longest regular chains.

    Only p^0 occurs exactly when x^m is totally reduced.
    """
    m = tuple(int(k) for k in m)
    _require_nonzero(m)
    return {(i + 1, step) for i, k in enumerate(m) for step in _digit_steps(k, spec.p)}


# ----- combinatorial degree -----------------------------------------------------

def comb_degree(f: SparsePolynomial) -> int:
    """p_degree(f); -1 for the zero polynomial"""
    require_no_constant(f, "comb_degree")
    return p_degree(f)


def comb_degree_oracle(f: SparsePolynomial, budget: int = EXPANSION_BUDGET) -> int:
    """The largest n with formal Delta^n f nonzero, found by expanding n = 1, 2, ..."""
    require_no_constant(f, "comb_degree_oracle")
    if f.is_zero():
        return -1
    top = degree(f)
    for n in range(1, top + 2):
        if formal_defect(f, n, budget=budget).is_zero():
            return n - 1
    raise ConsistencyError(f"Delta^{top + 1} of a degree-{top} polynomial is nonzero")
