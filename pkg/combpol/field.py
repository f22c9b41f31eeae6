"""
Exact arithmetic in GF(p^e) and in the rational field.

The rationals play the role of "characteristic infinity": FieldSpec.p is
math.inf for them, so comparisons such as ``n < spec.p`` read naturally.

Finite elements are encoded by the integer k = c_0 + c_1 p + ... + c_{e-1} p^{e-1},
where (c_0, ..., c_{e-1}) are the coefficients of the residue class
c_0 + c_1 t + ... in GF(p)[t]/(modulus). Elements of a finite field are
interned: every arithmetic result is one of ``spec.elements``.
"""
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import product
from typing import Iterable, List, Optional, Sequence, Tuple, Union

from sympy import isprime
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_gcdex, gf_mul, gf_rem

from .digits import Characteristic
from .errors import FieldError, FieldMismatchError, ParseError, SingularMatrixError

logger = logging.getLogger(__name__)

INFINITY = math.inf
FINITE = "finite"
RATIONAL = "rational"

# Largest q for which addition/multiplication tables are precomputed
FIELD_TABLE_LIMIT = 256


def _encode(coeffs: Sequence[int], p: int) -> int:
    return sum(c * p ** i for i, c in enumerate(coeffs))


def _decode(k: int, p: int, e: int) -> Tuple[int, ...]:
    out = []
    for _ in range(e):
        k, c = divmod(k, p)
        out.append(c)
    return tuple(out)


def _to_gf(coeffs: Sequence[int]) -> List[int]:
    """Ascending coefficient tuple -> sympy galoistools dense list (descending, stripped)"""
    dense = [ZZ(c) for c in reversed(coeffs)]
    while dense and dense[0] == 0:
        dense.pop(0)
    return dense


def _from_gf(dense: Sequence[int], e: int) -> Tuple[int, ...]:
    coeffs = [int(c) for c in reversed(dense)]
    return tuple(coeffs + [0] * (e - len(coeffs)))


def _is_irreducible(modulus: Tuple[int, ...], p: int) -> bool:
    """Trial division by every monic polynomial of degree 1..e//2"""
    e = len(modulus) - 1
    target = _to_gf(modulus)
    for k in range(1, e // 2 + 1):
        for low in product(range(p), repeat=k):
            if not gf_rem(target, _to_gf(low + (1,)), p, ZZ):
                return False
    return True


def _least_irreducible(p: int, e: int) -> Tuple[int, ...]:
    for low in product(range(p), repeat=e):
        candidate = low + (1,)
        if e == 1 or _is_irreducible(candidate, p):
            return candidate
    raise FieldError(f"no monic irreducible of degree {e} over GF({p})")  # unreachable


@dataclass(frozen=True)
class FieldSpec:
    """A concrete model of F: GF(p^e) with a fixed modulus, or Q"""

    kind: str
    p: Characteristic
    e: int = 1
    modulus: Tuple[int, ...] = ()

    @property
    def is_finite(self) -> bool:
        return self.kind == FINITE

    @property
    def q(self) -> Union[int, float]:
        """|F|; math.inf for the rationals"""
        return self.p ** self.e if self.is_finite else INFINITY

    @property
    def label(self) -> str:
        return f"{self.p}^{self.e}" if self.is_finite else "Q"

    def __str__(self) -> str:
        return f"GF({self.q})" if self.is_finite else "Q"

    def require_finite(self, what: str) -> None:
        if not self.is_finite:
            raise FieldError(f"{what} needs a finite field, got Q")

    # ----- elements -------------------------------------------------------

    @cached_property
    def elements(self) -> Tuple["FieldElement", ...]:
        self.require_finite("element enumeration")
        return tuple(FieldElement(self, k) for k in range(self.q))

    @property
    def zero(self) -> "FieldElement":
        return self.elements[0] if self.is_finite else FieldElement(self, Fraction(0))

    @property
    def one(self) -> "FieldElement":
        return self.elements[1] if self.is_finite else FieldElement(self, Fraction(1))

    def element(self, value: Union[int, Fraction]) -> "FieldElement":
        """Element from its encoding (finite) or its rational value"""
        if self.is_finite:
            if not isinstance(value, int) or not 0 <= value < self.q:
                raise FieldError(f"{value!r} is not an element encoding of {self}")
            return self.elements[value]
        return FieldElement(self, Fraction(value))

    def from_int(self, n: int) -> "FieldElement":
        """Image of the integer n under Z -> F"""
        if self.is_finite:
            return self.elements[n % self.p]
        return FieldElement(self, Fraction(n))

    def coerce(self, x: Union["FieldElement", int]) -> "FieldElement":
        if isinstance(x, FieldElement):
            if x.spec is not self and x.spec != self:
                raise FieldMismatchError(f"operands belong to {x.spec} and {self}")
            return x
        if isinstance(x, int):
            return self.from_int(x)
        if isinstance(x, Fraction) and not self.is_finite:
            return FieldElement(self, x)
        raise FieldError(f"cannot interpret {x!r} as an element of {self}")

    def coefficients(self, a: "FieldElement") -> Tuple[int, ...]:
        """(c_0, ..., c_{e-1}) of a finite element"""
        self.require_finite("coefficient vectors")
        return _decode(a.value, self.p, self.e)

    # ----- raw arithmetic on encodings -------------------------------------

    @cached_property
    def _tables(self) -> Optional[Tuple[list, list]]:
        if not self.is_finite or self.e == 1 or self.q > FIELD_TABLE_LIMIT:
            return None
        logger.debug("building arithmetic tables for %s", self)
        q = self.q
        add = [[self._poly_add(a, b) for b in range(q)] for a in range(q)]
        mul = [[self._poly_mul(a, b) for b in range(q)] for a in range(q)]
        return add, mul

    def _poly_add(self, a: int, b: int) -> int:
        p = self.p
        ca, cb = _decode(a, p, self.e), _decode(b, p, self.e)
        return _encode([(x + y) % p for x, y in zip(ca, cb)], p)

    def _poly_mul(self, a: int, b: int) -> int:
        p = self.p
        prod = gf_mul(_to_gf(_decode(a, p, self.e)), _to_gf(_decode(b, p, self.e)), p, ZZ)
        return _encode(_from_gf(gf_rem(prod, _to_gf(self.modulus), p, ZZ), self.e), p)

    def _raw_add(self, a: int, b: int) -> int:
        if self.e == 1:
            return (a + b) % self.p
        tables = self._tables
        return tables[0][a][b] if tables else self._poly_add(a, b)

    def _raw_neg(self, a: int) -> int:
        if self.e == 1:
            return -a % self.p
        p = self.p
        return _encode([-c % p for c in _decode(a, p, self.e)], p)

    def _raw_mul(self, a: int, b: int) -> int:
        if self.e == 1:
            return a * b % self.p
        tables = self._tables
        return tables[1][a][b] if tables else self._poly_mul(a, b)

    @cached_property
    def _inverses(self) -> Tuple[int, ...]:
        return tuple(0 if k == 0 else self._compute_inverse(k) for k in range(self.q))

    def _compute_inverse(self, a: int) -> int:
        p = self.p
        if self.e == 1:
            return pow(a, p - 2, p)
        s, _, h = gf_gcdex(_to_gf(_decode(a, p, self.e)), _to_gf(self.modulus), p, ZZ)
        # h is the monic gcd, equal to 1 because the modulus is irreducible
        return _encode(_from_gf(s, self.e), p)

    # ----- element arithmetic ----------------------------------------------

    def add(self, a, b) -> "FieldElement":
        a, b = self.coerce(a), self.coerce(b)
        if self.is_finite:
            return self.elements[self._raw_add(a.value, b.value)]
        return FieldElement(self, a.value + b.value)

    def neg(self, a) -> "FieldElement":
        a = self.coerce(a)
        if self.is_finite:
            return self.elements[self._raw_neg(a.value)]
        return FieldElement(self, -a.value)

    def sub(self, a, b) -> "FieldElement":
        return self.add(a, self.neg(b))

    def mul(self, a, b) -> "FieldElement":
        a, b = self.coerce(a), self.coerce(b)
        if self.is_finite:
            return self.elements[self._raw_mul(a.value, b.value)]
        return FieldElement(self, a.value * b.value)

    def inv(self, a) -> "FieldElement":
        a = self.coerce(a)
        if not a:
            raise FieldError(f"division by zero in {self}")
        if self.is_finite:
            return self.elements[self._inverses[a.value]]
        return FieldElement(self, 1 / a.value)

    def div(self, a, b) -> "FieldElement":
        return self.mul(a, self.inv(b))

    def power(self, a, k: int) -> "FieldElement":
        """a**k with 0**0 = 1; negative k inverts first"""
        a = self.coerce(a)
        if k < 0:
            return self.power(self.inv(a), -k)
        if not self.is_finite:
            return FieldElement(self, a.value ** k)
        result, base = 1, a.value
        while k:
            if k & 1:
                result = self._raw_mul(result, base)
            base = self._raw_mul(base, base)
            k >>= 1
        return self.elements[result]

    # ----- text encoding ---------------------------------------------------

    def format_element(self, a: "FieldElement") -> str:
        if self.is_finite:
            return str(a.value)
        v = a.value
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"

    def parse_element(self, text: str) -> "FieldElement":
        text = text.strip()
        try:
            if self.is_finite:
                k = int(text)
                if not 0 <= k < self.q:
                    raise ParseError(f"element encoding {k} out of range 0..{self.q - 1} for {self}")
                return self.elements[k]
            return FieldElement(self, Fraction(text))
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"invalid element literal {text!r} for {self}") from exc


@dataclass(frozen=True, eq=False)
class FieldElement:
    """An element of the field described by ``spec``; immutable"""

    spec: FieldSpec
    value: Union[int, Fraction]

    def __eq__(self, other) -> bool:
        if isinstance(other, FieldElement):
            return self.value == other.value and (self.spec is other.spec or self.spec == other.spec)
        if isinstance(other, int):
            return self == self.spec.from_int(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.spec.kind, self.spec.p, self.spec.e, self.value))

    def __bool__(self) -> bool:
        return self.value != 0

    def __add__(self, other):
        return self.spec.add(self, other)

    __radd__ = __add__

    def __sub__(self, other):
        return self.spec.sub(self, other)

    def __rsub__(self, other):
        return self.spec.sub(other, self)

    def __mul__(self, other):
        return self.spec.mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self.spec.div(self, other)

    def __rtruediv__(self, other):
        return self.spec.div(other, self)

    def __neg__(self):
        return self.spec.neg(self)

    def __pow__(self, k: int):
        return self.spec.power(self, k)

    def __str__(self) -> str:
        return self.spec.format_element(self)

    def __repr__(self) -> str:
        return f"<{self.spec} {self}>"


def field_make(p: Characteristic, e: int = 1) -> FieldSpec:
    """Deterministic FieldSpec for GF(p^e), or Q when p is infinite.

    The modulus is the lexicographically least monic irreducible of degree e
    by (c_0, ..., c_{e-1}); equal arguments give the very same object.
    """
    return _make_field(p, e)


@lru_cache(maxsize=None)
def _make_field(p: Characteristic, e: int) -> FieldSpec:
    if isinstance(p, float) and math.isinf(p):
        if e != 1:
            raise FieldError(f"the rational field has no extension degree (got e={e})")
        return FieldSpec(RATIONAL, INFINITY)
    if not isinstance(p, int) or p < 2 or not isprime(p):
        raise FieldError(f"characteristic must be a prime or infinity, got {p!r}")
    if not isinstance(e, int) or e < 1:
        raise FieldError(f"extension degree must be >= 1, got {e!r}")
    modulus = _least_irreducible(p, e)
    logger.debug("GF(%d^%d) modulus %s", p, e, modulus)
    return FieldSpec(FINITE, p, e, modulus)


def parse_field(text: str) -> FieldSpec:
    """``p^e``, ``p`` or ``Q``"""
    raw = text.strip()
    if raw.lower() in ("q", "inf", "infinity", "∞"):
        return field_make(INFINITY)
    base, _, exp = raw.partition("^")
    try:
        p = int(base)
        e = int(exp) if exp else 1
    except ValueError as exc:
        raise ParseError(f"invalid field spec {text!r}; expected p^e, p or Q") from exc
    return field_make(p, e)


def arith(a: FieldElement, b: FieldElement, op: str) -> FieldElement:
    """Binary field operation named by ``op`` (add, sub, mul, div)"""
    if a.spec is not b.spec and a.spec != b.spec:
        raise FieldMismatchError(f"operands belong to {a.spec} and {b.spec}")
    try:
        fn = {"add": a.spec.add, "sub": a.spec.sub, "mul": a.spec.mul, "div": a.spec.div}[op]
    except KeyError:
        raise FieldError(f"unknown field operation {op!r}") from None
    return fn(a, b)


def enumerate_elements(spec: FieldSpec) -> List[FieldElement]:
    """All q elements in encoding order 0, 1, ..., q-1"""
    spec.require_finite("enumerate_elements")
    return list(spec.elements)


# ----- linear algebra over a FieldSpec --------------------------------------

Matrix = List[List[FieldElement]]


def row_reduce(rows: Iterable[Sequence[FieldElement]], spec: FieldSpec) -> Tuple[Matrix, List[int]]:
    """Reduced row echelon form; returns (nonzero rows, pivot columns)"""
    work = [list(r) for r in rows]
    if not work:
        return [], []
    ncols = len(work[0])
    pivots: List[int] = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(work)) if work[i][c]), None)
        if pivot is None:
            continue
        work[r], work[pivot] = work[pivot], work[r]
        inv = spec.inv(work[r][c])
        work[r] = [x * inv for x in work[r]]
        for i in range(len(work)):
            if i != r and work[i][c]:
                factor = work[i][c]
                work[i] = [x - factor * y for x, y in zip(work[i], work[r])]
        pivots.append(c)
        r += 1
        if r == len(work):
            break
    return work[:r], pivots


def matrix_rank(rows: Iterable[Sequence[FieldElement]], spec: FieldSpec) -> int:
    return len(row_reduce(rows, spec)[1])


def nullspace(rows: Iterable[Sequence[FieldElement]], ncols: int, spec: FieldSpec) -> Matrix:
    """Basis of {x : A x = 0}"""
    reduced, pivots = row_reduce(rows, spec)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        vec = [spec.zero] * ncols
        vec[f] = spec.one
        for row, pc in zip(reduced, pivots):
            vec[pc] = -row[f]
        basis.append(vec)
    return basis


def require_invertible(matrix: Sequence[Sequence[FieldElement]], spec: FieldSpec) -> None:
    n = len(matrix)
    if any(len(row) != n for row in matrix):
        raise SingularMatrixError(f"basis change needs a square matrix, got {n} rows of lengths {[len(r) for r in matrix]}")
    if matrix_rank(matrix, spec) != n:
        raise SingularMatrixError("basis change matrix is singular")


def set_table_limit(limit: int) -> None:
    """Largest q for which fields precompute their tables.

    Changing the limit drops the field cache, so field_make hands out fresh
    specs built under the new limit; elements of older specs still compare equal.
    """
    global FIELD_TABLE_LIMIT
    limit = int(limit)
    if limit != FIELD_TABLE_LIMIT:
        FIELD_TABLE_LIMIT = limit
        _make_field.cache_clear()
