"""
Sparse multivariate polynomials over a FieldSpec, function tables on F^d,
and the syntactic space-membership tests (pl / tpl / dpl).

Variables are 0-based internally and printed as x1, ..., xd. A polynomial
in n blocks of base_d variables (the n-th formal defect) prints its
variable (i, j) as ``x{i}_{j}``.
"""
import logging
import math
import re
from dataclasses import dataclass
from functools import cached_property
from itertools import product
from types import MappingProxyType
from typing import Callable, Dict, Iterator, List, Mapping, Optional, Sequence, Tuple

from .digits import p_weight
from .errors import (
    BudgetExceededError,
    DimensionError,
    ParseError,
    PreconditionError,
)
from .field import FieldElement, FieldSpec, parse_field, require_invertible

logger = logging.getLogger(__name__)

MultiExponent = Tuple[int, ...]

# Largest number of points q^d a dense table may have
TABLE_BUDGET = 2 ** 20


class SparsePolynomial:
    """Immutable map MultiExponent -> nonzero coefficient"""

    __slots__ = ("spec", "d", "_terms", "_hash")

    def __init__(self, spec: FieldSpec, d: int, terms: Optional[Mapping[Sequence[int], object]] = None):
        if d < 0:
            raise DimensionError(f"variable count must be >= 0, got {d}")
        clean: Dict[MultiExponent, FieldElement] = {}
        for m, c in (terms or {}).items():
            m = tuple(int(x) for x in m)
            if len(m) != d:
                raise DimensionError(f"multiexponent {m} has length {len(m)}, expected {d}")
            if any(x < 0 for x in m):
                raise DimensionError(f"negative exponent in {m}")
            c = spec.coerce(c)
            if m in clean:
                c = clean[m] + c
            clean[m] = c
        self.spec = spec
        self.d = d
        self._terms = {m: c for m, c in clean.items() if c}
        self._hash = None

    @classmethod
    def _raw(cls, spec: FieldSpec, d: int, terms: Dict[MultiExponent, FieldElement]) -> "SparsePolynomial":
        """Trusted constructor: terms already validated, zero coefficients allowed"""
        poly = cls.__new__(cls)
        poly.spec = spec
        poly.d = d
        poly._terms = {m: c for m, c in terms.items() if c}
        poly._hash = None
        return poly

    # ----- constructors ----------------------------------------------------

    @classmethod
    def zero(cls, spec: FieldSpec, d: int) -> "SparsePolynomial":
        return cls._raw(spec, d, {})

    @classmethod
    def constant(cls, spec: FieldSpec, d: int, c) -> "SparsePolynomial":
        return cls._raw(spec, d, {(0,) * d: spec.coerce(c)})

    @classmethod
    def monomial(cls, spec: FieldSpec, m: Sequence[int], c=1) -> "SparsePolynomial":
        return cls(spec, len(m), {tuple(m): c})

    @classmethod
    def variable(cls, spec: FieldSpec, d: int, i: int) -> "SparsePolynomial":
        m = [0] * d
        m[i] = 1
        return cls._raw(spec, d, {tuple(m): spec.one})

    # ----- inspection ------------------------------------------------------

    @property
    def terms(self) -> Mapping[MultiExponent, FieldElement]:
        return MappingProxyType(self._terms)

    def items(self) -> List[Tuple[MultiExponent, FieldElement]]:
        """Terms in canonical (lexicographic exponent) order"""
        return sorted(self._terms.items())

    def exponents(self) -> List[MultiExponent]:
        return sorted(self._terms)

    def coefficient(self, m: Sequence[int]) -> FieldElement:
        return self._terms.get(tuple(m), self.spec.zero)

    def monomials(self) -> List["SparsePolynomial"]:
        return [SparsePolynomial._raw(self.spec, self.d, {m: c}) for m, c in self.items()]

    def is_zero(self) -> bool:
        return not self._terms

    @property
    def constant_term(self) -> FieldElement:
        return self.coefficient((0,) * self.d)

    def __len__(self) -> int:
        return len(self._terms)

    # ----- arithmetic ------------------------------------------------------

    def _check_compatible(self, other: "SparsePolynomial") -> None:
        if other.d != self.d:
            raise DimensionError(f"polynomials in {self.d} and {other.d} variables")
        self.spec.coerce(other.spec.zero)

    def _lift(self, other) -> "SparsePolynomial":
        if isinstance(other, SparsePolynomial):
            self._check_compatible(other)
            return other
        return SparsePolynomial.constant(self.spec, self.d, other)

    def __add__(self, other) -> "SparsePolynomial":
        other = self._lift(other)
        out = dict(self._terms)
        for m, c in other._terms.items():
            out[m] = out[m] + c if m in out else c
        return SparsePolynomial._raw(self.spec, self.d, out)

    __radd__ = __add__

    def __neg__(self) -> "SparsePolynomial":
        return SparsePolynomial._raw(self.spec, self.d, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other) -> "SparsePolynomial":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "SparsePolynomial":
        return self._lift(other) - self

    def scale(self, c) -> "SparsePolynomial":
        c = self.spec.coerce(c)
        return SparsePolynomial._raw(self.spec, self.d, {m: c * v for m, v in self._terms.items()})

    def __mul__(self, other) -> "SparsePolynomial":
        if not isinstance(other, SparsePolynomial):
            return self.scale(other)
        self._check_compatible(other)
        return _multiply(self, other, reduce_q=None)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "SparsePolynomial":
        if k < 0:
            raise PreconditionError("negative powers of polynomials are not defined")
        result = SparsePolynomial.constant(self.spec, self.d, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparsePolynomial):
            return NotImplemented
        return self.d == other.d and self.spec == other.spec and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.spec, self.d, frozenset(self._terms.items())))
        return self._hash

    def __str__(self) -> str:
        return format_poly(self)

    def __repr__(self) -> str:
        return f"SparsePolynomial({self.spec.label}, d={self.d}, {format_poly(self)!r})"

    # ----- serialization ---------------------------------------------------

    def to_json(self) -> dict:
        return {"field": self.spec.label, "d": self.d, "poly": format_poly(self)}

    @classmethod
    def from_json(cls, data: Mapping) -> "SparsePolynomial":
        spec = parse_field(str(data["field"]))
        return parse_poly(str(data["poly"]), spec, int(data["d"]))


def _multiply(a: SparsePolynomial, b: SparsePolynomial, reduce_q: Optional[int]) -> SparsePolynomial:
    out: Dict[MultiExponent, FieldElement] = {}
    for ma, ca in a._terms.items():
        for mb, cb in b._terms.items():
            m = tuple(x + y for x, y in zip(ma, mb))
            if reduce_q is not None:
                m = reduce_exponents(m, reduce_q)
            c = ca * cb
            out[m] = out[m] + c if m in out else c
    return SparsePolynomial._raw(a.spec, a.d, out)


# ----- text grammar ---------------------------------------------------------

def default_names(i: int) -> str:
    return f"x{i + 1}"


def block_names(base_d: int) -> Callable[[int], str]:
    """Names x{i}_{j} for block i, coordinate j (both 1-based)"""
    def name(k: int) -> str:
        block, coord = divmod(k, base_d)
        return f"x{block + 1}_{coord + 1}"
    return name


def format_poly(f: SparsePolynomial, names: Callable[[int], str] = default_names) -> str:
    if f.is_zero():
        return "0"
    parts = []
    for m, c in f.items():
        factors = []
        for i, k in enumerate(m):
            if k == 1:
                factors.append(names(i))
            elif k > 1:
                factors.append(f"{names(i)}^{k}")
        if c != f.spec.one or not factors:
            factors.insert(0, str(c))
        parts.append("*".join(factors))
    return " + ".join(parts)


_TOKEN = re.compile(
    r"\s*(?:(?P<var>x(?P<i>\d+)(?:_(?P<j>\d+))?)|(?P<num>\d+(?:/\d+)?)|(?P<op>[-+*^]))"
)


def _tokenize(text: str) -> List[Tuple[str, re.Match]]:
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        match = _TOKEN.match(text, pos)
        if not match or match.end() == pos:
            raise ParseError(f"unexpected character {text[pos:].strip()[:1]!r} at position {pos} in {text!r}")
        kind = "var" if match.group("var") else "num" if match.group("num") else match.group("op")
        tokens.append((kind, match))
        pos = match.end()
    return tokens


def parse_poly(
    text: str,
    spec: FieldSpec,
    d: Optional[int] = None,
    block_size: Optional[int] = None,
) -> SparsePolynomial:
    """Parse the polynomial grammar (terms joined by + or -, factors joined by *).

    A factor is a coefficient literal in the field's element encoding or a
    power ``xK^E``; with ``block_size`` given, ``xI_J`` names coordinate J of
    block I. When d is omitted it is the largest variable index used.
    """
    tokens = _tokenize(text)
    if not tokens:
        raise ParseError("empty polynomial text")

    terms: List[Tuple[Dict[int, int], FieldElement]] = []
    pos = 0
    max_index = -1

    def index_of(match: re.Match) -> int:
        i = int(match.group("i"))
        j = match.group("j")
        if j is None:
            if block_size is not None:
                raise ParseError(f"variable {match.group('var')} needs block form xI_J")
            k = i - 1
        else:
            if block_size is None:
                raise ParseError(f"block variable {match.group('var')} outside a formal defect")
            if not 1 <= int(j) <= block_size:
                raise ParseError(f"coordinate {j} of {match.group('var')} exceeds block size {block_size}")
            k = (i - 1) * block_size + int(j) - 1
        if i < 1:
            raise ParseError(f"variable indices start at 1, got {match.group('var')}")
        return k

    while pos < len(tokens):
        negative = False
        while pos < len(tokens) and tokens[pos][0] in "+-":
            negative ^= tokens[pos][0] == "-"
            pos += 1
        powers: Dict[int, int] = {}
        coeff = spec.one
        expect_factor = True
        while pos < len(tokens) and expect_factor:
            kind, match = tokens[pos]
            if kind == "num":
                coeff = coeff * spec.parse_element(match.group("num"))
                pos += 1
            elif kind == "var":
                k = index_of(match)
                pos += 1
                exponent = 1
                if pos < len(tokens) and tokens[pos][0] == "^":
                    if pos + 1 >= len(tokens) or tokens[pos + 1][0] != "num" or "/" in tokens[pos + 1][1].group("num"):
                        raise ParseError(f"exponent after {match.group('var')} must be a non-negative integer")
                    exponent = int(tokens[pos + 1][1].group("num"))
                    pos += 2
                powers[k] = powers.get(k, 0) + exponent
                max_index = max(max_index, k)
            else:
                raise ParseError(f"expected a coefficient or variable, found {kind!r}")
            if pos < len(tokens) and tokens[pos][0] == "*":
                pos += 1
            else:
                expect_factor = False
        if expect_factor:
            raise ParseError(f"incomplete term at the end of {text!r}")
        if pos < len(tokens) and tokens[pos][0] not in "+-":
            raise ParseError(f"expected + or - between terms in {text!r}")
        terms.append((powers, -coeff if negative else coeff))

    if d is None:
        d = max_index + 1
        if block_size is not None:
            d = -(-d // block_size) * block_size
        d = max(d, 1)
    elif max_index >= d:
        raise ParseError(f"variable index {max_index + 1} exceeds dimension {d}")

    out: Dict[MultiExponent, FieldElement] = {}
    for powers, c in terms:
        m = [0] * d
        for k, e in powers.items():
            m[k] = e
        m = tuple(m)
        out[m] = out[m] + c if m in out else c
    return SparsePolynomial._raw(spec, d, out)


# ----- reduction and evaluation --------------------------------------------

def reduce_exponents(m: Sequence[int], q: int) -> MultiExponent:
    """Map every positive exponent into [1, q-1] keeping its class mod q-1"""
    return tuple(k if k < q else (k - 1) % (q - 1) + 1 for k in m)


def reduce_poly(f: SparsePolynomial) -> SparsePolynomial:
    """The unique representative of f's class with all exponents < q.

    Over the rationals the relation is equality and f is returned as is.
    """
    if not f.spec.is_finite:
        return f
    q = f.spec.q
    out: Dict[MultiExponent, FieldElement] = {}
    for m, c in f._terms.items():
        m = reduce_exponents(m, q)
        out[m] = out[m] + c if m in out else c
    return SparsePolynomial._raw(f.spec, f.d, out)


def is_reduced(f: SparsePolynomial) -> bool:
    return not f.spec.is_finite or all(k < f.spec.q for m in f._terms for k in m)


def evaluate(f: SparsePolynomial, point: Sequence) -> FieldElement:
    """f at the point; 0**0 = 1"""
    if len(point) != f.d:
        raise DimensionError(f"point of length {len(point)} for a polynomial in {f.d} variables")
    spec = f.spec
    point = [spec.coerce(a) for a in point]
    total = spec.zero
    for m, c in f._terms.items():
        value = c
        for a, k in zip(point, m):
            if k:
                value = value * spec.power(a, k)
        total = total + value
    return total


# ----- points and tables ----------------------------------------------------

Point = Tuple[FieldElement, ...]


class PointSpace:
    """The points of F^d in lexicographic order of coordinate encodings"""

    def __init__(self, spec: FieldSpec, d: int):
        spec.require_finite("point enumeration")
        self.spec = spec
        self.d = d
        self.q = spec.q
        self.size = spec.q ** d

    def __iter__(self) -> Iterator[Point]:
        return iter(product(self.spec.elements, repeat=self.d))

    def index(self, point: Sequence[FieldElement]) -> int:
        k = 0
        for a in point:
            k = k * self.q + a.value
        return k

    def point(self, index: int) -> Point:
        coords = []
        for _ in range(self.d):
            index, c = divmod(index, self.q)
            coords.append(self.spec.elements[c])
        return tuple(reversed(coords))

    @property
    def zero(self) -> Point:
        return (self.spec.zero,) * self.d

    def basis(self, i: int) -> Point:
        return tuple(self.spec.one if k == i else self.spec.zero for k in range(self.d))

    def add(self, u: Sequence[FieldElement], v: Sequence[FieldElement]) -> Point:
        return tuple(a + b for a, b in zip(u, v))

    def scale(self, a: FieldElement, u: Sequence[FieldElement]) -> Point:
        return tuple(a * b for b in u)

    def total(self, points: Sequence[Sequence[FieldElement]]) -> Point:
        acc = self.zero
        for u in points:
            acc = self.add(acc, u)
        return acc

    def random_point(self, rng) -> Point:
        return tuple(rng.choice(self.spec.elements) for _ in range(self.d))

    def encode(self, point: Sequence[FieldElement]) -> List[int]:
        return [a.value for a in point]

    def decode(self, values: Sequence[int]) -> Point:
        if len(values) != self.d:
            raise DimensionError(f"point {list(values)} has length {len(values)}, expected {self.d}")
        return tuple(self.spec.element(int(v)) for v in values)


def check_budget(size: int, budget: int, what: str) -> None:
    if size > budget:
        raise BudgetExceededError(f"{what} needs {size} entries, budget is {budget}")


@dataclass(frozen=True)
class FunctionTable:
    """A mapping F^d -> F stored densely in PointSpace order"""

    spec: FieldSpec
    d: int
    values: Tuple[FieldElement, ...]

    def __post_init__(self):
        self.spec.require_finite("function tables")
        if len(self.values) != self.spec.q ** self.d:
            raise DimensionError(
                f"table over {self.spec}^{self.d} needs {self.spec.q ** self.d} values, got {len(self.values)}"
            )

    @cached_property
    def space(self) -> PointSpace:
        return PointSpace(self.spec, self.d)

    def __call__(self, point: Sequence[FieldElement]) -> FieldElement:
        return self.values[self.space.index(point)]

    def at(self, index: int) -> FieldElement:
        return self.values[index]

    @classmethod
    def from_function(cls, spec: FieldSpec, d: int, fn: Callable[[Point], FieldElement],
                      budget: int = TABLE_BUDGET) -> "FunctionTable":
        check_budget(spec.q ** d, budget, f"a table over {spec}^{d}")
        return cls(spec, d, tuple(spec.coerce(fn(u)) for u in PointSpace(spec, d)))

    def __add__(self, other: "FunctionTable") -> "FunctionTable":
        return FunctionTable(self.spec, self.d, tuple(a + b for a, b in zip(self.values, other.values)))

    def scale(self, c) -> "FunctionTable":
        c = self.spec.coerce(c)
        return FunctionTable(self.spec, self.d, tuple(c * a for a in self.values))

    def to_json(self) -> dict:
        return {"field": self.spec.label, "d": self.d, "values": [a.value for a in self.values]}

    @classmethod
    def from_json(cls, data) -> "FunctionTable":
        """The object form {field, d, values}; a bare array is rejected"""
        if isinstance(data, list):
            raise ParseError("a bare value array needs field and d; use {field, d, values}")
        try:
            spec = parse_field(str(data["field"]))
            values = tuple(spec.element(int(v)) for v in data["values"])
            d = int(data["d"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"malformed table document: {exc}") from exc
        return cls(spec, d, values)


def to_table(f: SparsePolynomial, budget: int = TABLE_BUDGET) -> FunctionTable:
    """The function F^d -> F realized by f"""
    f.spec.require_finite("to_table")
    logger.debug("tabulating %d terms on %s^%d", len(f), f.spec, f.d)
    return FunctionTable.from_function(f.spec, f.d, lambda u: evaluate(f, u), budget)


def _lagrange_matrix(spec: FieldSpec) -> List[List[FieldElement]]:
    """M[j][c] = coefficient of x^j in 1 - (x - c)^(q-1), the indicator of c"""
    q = spec.q
    binoms = [spec.from_int(math.comb(q - 1, j)) for j in range(q)]
    rows = []
    for j in range(q):
        row = []
        for c in spec.elements:
            value = -(binoms[j] * spec.power(-c, q - 1 - j))
            if j == 0:
                value = value + 1
            row.append(value)
        rows.append(row)
    return rows


def interpolate(tab: FunctionTable) -> SparsePolynomial:
    """The unique reduced polynomial realizing tab.

    Applies the univariate Lagrange indicator matrix along each axis, which
    is the expansion of sum_a tab(a) * prod_k L_{a_k}(x_k).
    """
    spec, d = tab.spec, tab.d
    q = spec.q
    matrix = _lagrange_matrix(spec)
    coeffs = list(tab.values)
    size = len(coeffs)
    for axis in range(d):
        stride = q ** (d - 1 - axis)
        out = [spec.zero] * size
        for idx, value in enumerate(coeffs):
            if not value:
                continue
            digit = (idx // stride) % q
            base = idx - digit * stride
            for j in range(q):
                weight = matrix[j][digit]
                if weight:
                    out[base + j * stride] = out[base + j * stride] + weight * value
        coeffs = out
    terms = {}
    for idx, c in enumerate(coeffs):
        if c:
            m = []
            for _ in range(d):
                idx, k = divmod(idx, q)
                m.append(k)
            terms[tuple(reversed(m))] = c
    return SparsePolynomial._raw(spec, d, terms)


# ----- degrees ----------------------------------------------------------------

def degree(f: SparsePolynomial) -> int:
    """Max total degree over M(f); -1 for the zero polynomial"""
    return max((sum(m) for m in f._terms), default=-1)


def monomial_p_degree(m: Sequence[int], p) -> int:
    return sum(p_weight(k, p) for k in m)


def p_degree(f: SparsePolynomial) -> int:
    """Max over M(f) of the sum of p-weights of the exponents; -1 for zero"""
    return max((monomial_p_degree(m, f.spec.p) for m in f._terms), default=-1)


def is_homogeneous(f: SparsePolynomial, n: Optional[int] = None) -> bool:
    degrees = {sum(m) for m in f._terms}
    if n is not None:
        return degrees <= {n}
    return len(degrees) <= 1


# ----- composition and basis change ------------------------------------------

def substitute(f: SparsePolynomial, images: Sequence[SparsePolynomial], reduce_steps: bool = True) -> SparsePolynomial:
    """f(images[0], ..., images[d-1]).

    Over a finite field intermediate products are reduced when
    ``reduce_steps`` is set; the reduced result is the same either way.
    """
    if len(images) != f.d:
        raise DimensionError(f"{len(images)} images for a polynomial in {f.d} variables")
    if not images:
        return f
    target_d = images[0].d
    spec = f.spec
    reduce_q = spec.q if spec.is_finite and reduce_steps else None
    powers: Dict[Tuple[int, int], SparsePolynomial] = {}

    def power_of(j: int, k: int) -> SparsePolynomial:
        if (j, k) not in powers:
            if k == 0:
                powers[(j, k)] = SparsePolynomial.constant(spec, target_d, 1)
            elif k == 1:
                powers[(j, k)] = images[j]
            else:
                half = power_of(j, k // 2)
                value = _multiply(half, half, reduce_q)
                if k % 2:
                    value = _multiply(value, images[j], reduce_q)
                powers[(j, k)] = value
        return powers[(j, k)]

    total: Dict[MultiExponent, FieldElement] = {}
    for m, c in f._terms.items():
        term = SparsePolynomial.constant(spec, target_d, c)
        for j, k in enumerate(m):
            if k:
                term = _multiply(term, power_of(j, k), reduce_q)
        for mm, cc in term._terms.items():
            total[mm] = total[mm] + cc if mm in total else cc
    return SparsePolynomial._raw(spec, target_d, total)


def change_of_basis(f: SparsePolynomial, matrix: Sequence[Sequence]) -> SparsePolynomial:
    """The reduced polynomial realizing f's mapping in the basis e*_i = sum_j C[i][j] e_j.

    A vector sum_i a_i e*_i has old coordinates x_j = sum_i C[i][j] a_i.
    """
    spec, d = f.spec, f.d
    rows = [[spec.coerce(c) for c in row] for row in matrix]
    require_invertible(rows, spec)
    if len(rows) != d:
        raise DimensionError(f"{len(rows)}x{len(rows)} matrix for a polynomial in {d} variables")
    images = []
    for j in range(d):
        terms = {}
        for i in range(d):
            if rows[i][j]:
                m = [0] * d
                m[i] = 1
                terms[tuple(m)] = rows[i][j]
        images.append(SparsePolynomial._raw(spec, d, terms))
    return reduce_poly(substitute(f, images))


# ----- totally reduced and the spaces pl / tpl / dpl --------------------------

def monomial_totally_reduced(m: Sequence[int], p) -> bool:
    return all(k < p for k in m)


def is_totally_reduced(f: SparsePolynomial) -> bool:
    """Every exponent of every monomial is below chr F"""
    return all(monomial_totally_reduced(m, f.spec.p) for m in f._terms)


def require_no_constant(f: SparsePolynomial, what: str) -> None:
    if f.constant_term:
        raise PreconditionError(f"{what} needs f(0) = 0, but f has constant term {f.constant_term}")


def pl_member(f: SparsePolynomial, n: int) -> bool:
    """Combinatorial degree at most n"""
    require_no_constant(f, "pl membership")
    return p_degree(f) <= n


def tpl_offender(f: SparsePolynomial, n: int) -> Optional[MultiExponent]:
    """First monomial keeping f out of tpl(V, n), or None"""
    require_no_constant(f, "tpl membership")
    p = f.spec.p
    for m in f.exponents():
        weight = monomial_p_degree(m, p)
        if weight > n or (weight == n and not monomial_totally_reduced(m, p)):
            return m
    return None


def tpl_member(f: SparsePolynomial, n: int) -> bool:
    return tpl_offender(f, n) is None


def dpl_offender(f: SparsePolynomial, n: int) -> Optional[MultiExponent]:
    """First monomial whose degree is 0 or not congruent to n mod q-1 (equal to n over Q)"""
    spec = f.spec
    for m in f.exponents():
        deg = sum(m)
        if deg == 0:
            return m
        if spec.is_finite:
            if (deg - n) % (spec.q - 1):
                return m
        elif deg != n:
            return m
    return None


def dpl_member(f: SparsePolynomial, n: int) -> bool:
    return dpl_offender(f, n) is None


def homogenize(f: SparsePolynomial, n: int) -> SparsePolynomial:
    """An unreduced homogeneous polynomial realizing the same mapping as f in dpl(V, n).

    Each monomial's first positive exponent is raised by a multiple of q-1
    up to the largest degree D among f's monomials.
    """
    offender = dpl_offender(f, n)
    if offender is not None:
        raise PreconditionError(f"homogenize needs f in dpl(V,{n}); monomial {offender} has degree {sum(offender)}")
    if not f.spec.is_finite or f.is_zero():
        return f
    top = degree(f)
    out: Dict[MultiExponent, FieldElement] = {}
    for m, c in f._terms.items():
        gap = top - sum(m)
        lifted = list(m)
        if gap:
            first = next(i for i, k in enumerate(m) if k)
            lifted[first] += gap
        lifted = tuple(lifted)
        out[lifted] = out[lifted] + c if lifted in out else c
    return SparsePolynomial._raw(f.spec, f.d, out)


def reduced_monomials(spec: FieldSpec, d: int) -> Iterator[MultiExponent]:
    """All exponent vectors with 0 <= m_i < q"""
    spec.require_finite("reduced_monomials")
    return iter(product(range(spec.q), repeat=d))
