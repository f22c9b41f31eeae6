"""
Symmetric n-linear forms on F^d, the characteristic property, and the
polynomials realizing a characteristic form.

A form is stored by its values on basis tuples (e_i1, ..., e_in) with
i1 <= ... <= in (0-based internally, 1-based in JSON); every other value
comes from the multilinear expansion.
"""
import logging
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement, product
from typing import Any, Dict, Iterator, List, Mapping, Optional, Sequence, Tuple

from sympy.ntheory import multiplicity

from .errors import BudgetExceededError, ConsistencyError, DimensionError, ParseError, PreconditionError
from .field import FieldElement, FieldSpec, nullspace, parse_field
from .poly import (
    TABLE_BUDGET,
    FunctionTable,
    Point,
    PointSpace,
    SparsePolynomial,
    reduce_poly,
)
from .polarize import defect_value, require_zero_at_origin

logger = logging.getLogger(__name__)

IndexTuple = Tuple[int, ...]

LINEARITY_BUDGET = 2 ** 20
SAMPLE_COUNT = 1000
DEFAULT_SEED = 20240601


def index_tuples(d: int, n: int) -> List[IndexTuple]:
    """Non-decreasing n-tuples over range(d); C(d+n-1, n) of them"""
    return list(combinations_with_replacement(range(d), n))


@dataclass(frozen=True)
class Verdict:
    """A yes/no answer that carries a counterexample on "no" """

    ok: bool
    witness: Optional[Dict[str, Any]] = None

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class SymmetricForm:
    spec: FieldSpec
    d: int
    n: int
    values: Mapping[IndexTuple, FieldElement]

    def __post_init__(self):
        if self.n < 1 or self.d < 1:
            raise DimensionError(f"forms need n >= 1 and d >= 1, got n={self.n}, d={self.d}")
        expected = set(index_tuples(self.d, self.n))
        if set(self.values) != expected:
            raise DimensionError(
                f"a symmetric {self.n}-linear form on F^{self.d} stores exactly {len(expected)} basis values"
            )

    # ----- constructors --------------------------------------------------

    @classmethod
    def from_values(cls, spec: FieldSpec, d: int, n: int, values: Mapping[Sequence[int], Any]) -> "SymmetricForm":
        """Missing basis values default to zero; keys are sorted into canonical order"""
        full = {s: spec.zero for s in index_tuples(d, n)}
        for key, v in values.items():
            key = tuple(sorted(key))
            if key not in full:
                raise DimensionError(f"index tuple {key} out of range for n={n}, d={d}")
            full[key] = spec.coerce(v)
        return cls(spec, d, n, full)

    @classmethod
    def zero(cls, spec: FieldSpec, d: int, n: int) -> "SymmetricForm":
        return cls.from_values(spec, d, n, {})

    @classmethod
    def from_vector(cls, spec: FieldSpec, d: int, n: int, vector: Sequence[FieldElement]) -> "SymmetricForm":
        keys = index_tuples(d, n)
        if len(vector) != len(keys):
            raise DimensionError(f"{len(vector)} values for {len(keys)} basis tuples")
        return cls(spec, d, n, dict(zip(keys, vector)))

    @classmethod
    def random(cls, spec: FieldSpec, d: int, n: int, rng: random.Random) -> "SymmetricForm":
        if spec.is_finite:
            draw = lambda: rng.choice(spec.elements)  # noqa: E731
        else:
            draw = lambda: spec.element(Fraction(rng.randint(-9, 9), rng.randint(1, 4)))  # noqa: E731
        return cls(spec, d, n, {s: draw() for s in index_tuples(d, n)})

    # ----- access ------------------------------------------------------------

    def vector(self) -> List[FieldElement]:
        return [self.values[s] for s in index_tuples(self.d, self.n)]

    def basis_value(self, indices: Sequence[int]) -> FieldElement:
        return self.values[tuple(sorted(indices))]

    def __call__(self, args: Sequence[Sequence[FieldElement]]) -> FieldElement:
        return form_eval(self, args)

    def is_zero(self) -> bool:
        return not any(self.values.values())

    def __add__(self, other: "SymmetricForm") -> "SymmetricForm":
        return SymmetricForm(self.spec, self.d, self.n, {s: v + other.values[s] for s, v in self.values.items()})

    def __str__(self) -> str:
        parts = [f"phi({','.join(str(i + 1) for i in s)})={v}" for s, v in sorted(self.values.items()) if v]
        return ", ".join(parts) if parts else "0"

    @classmethod
    def characteristic_constraints(cls, spec: FieldSpec, d: int, n: int,
                                   budget: int = TABLE_BUDGET) -> List[List[FieldElement]]:
        return characteristic_constraints(spec, d, n, budget)

    # ----- serialization -----------------------------------------------------

    def to_json(self) -> dict:
        return {
            "field": self.spec.label,
            "n": self.n,
            "d": self.d,
            "values": [
                {"idx": [i + 1 for i in s], "val": v.value if self.spec.is_finite else str(v)}
                for s, v in sorted(self.values.items())
            ],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "SymmetricForm":
        try:
            spec = parse_field(str(data["field"]))
            n, d = int(data["n"]), int(data["d"])
            values = {}
            for entry in data["values"]:
                key = tuple(int(i) - 1 for i in entry["idx"])
                if len(key) != n or any(not 0 <= i < d for i in key):
                    raise ParseError(f"index tuple {entry['idx']} invalid for n={n}, d={d}")
                values[key] = spec.parse_element(str(entry["val"]))
        except (KeyError, TypeError) as exc:
            raise ParseError(f"malformed form document: {exc}") from exc
        return cls.from_values(spec, d, n, values)


# ----- evaluation ---------------------------------------------------------------

def _functional(spec: FieldSpec, d: int, args: Sequence[Sequence[FieldElement]]) -> Dict[IndexTuple, FieldElement]:
    """Coefficients c_s with phi(args) = sum_s c_s * phi(e_s) for every symmetric phi"""
    supports = [[(j, a) for j, a in enumerate(u) if a] for u in args]
    out: Dict[IndexTuple, FieldElement] = {}
    for picks in product(*supports):
        coeff = spec.one
        for _, a in picks:
            coeff = coeff * a
        key = tuple(sorted(j for j, _ in picks))
        out[key] = out[key] + coeff if key in out else coeff
    return out


def form_eval(phi: SymmetricForm, args: Sequence[Sequence]) -> FieldElement:
    """phi(v_1, ..., v_n) by full multilinear expansion over basis coordinates"""
    if len(args) != phi.n:
        raise DimensionError(f"form of arity {phi.n} applied to {len(args)} arguments")
    spec = phi.spec
    coerced = []
    for u in args:
        if len(u) != phi.d:
            raise DimensionError(f"argument of length {len(u)} for a form on F^{phi.d}")
        coerced.append([spec.coerce(a) for a in u])
    total = spec.zero
    for key, coeff in _functional(spec, phi.d, coerced).items():
        total = total + coeff * phi.values[key]
    return total


def _basis_vector(spec: FieldSpec, d: int, i: int) -> Point:
    return tuple(spec.one if k == i else spec.zero for k in range(d))


# ----- the characteristic property ----------------------------------------------

def _repeated_arguments(spec: FieldSpec, d: int, n: int, budget: int) -> Iterator[Tuple[Point, IndexTuple]]:
    """(u, v) with u over F^d minus 0 and v over basis tuples of length n-p"""
    space = PointSpace(spec, d)
    free = index_tuples(d, n - spec.p) if n > spec.p else [()]
    if space.size * len(free) > budget:
        raise BudgetExceededError(
            f"characteristic check over {spec}^{d} needs {space.size * len(free)} evaluations, budget is {budget}"
        )
    for index in range(1, space.size):
        u = space.point(index)
        for v in free:
            yield u, v


def is_characteristic(phi: SymmetricForm, budget: int = TABLE_BUDGET) -> Verdict:
    """phi(p*u, v_1, ..., v_(n-p)) = 0 for all u and basis v; vacuous when n < chr F"""
    spec = phi.spec
    if phi.n < spec.p:
        return Verdict(True)
    p = spec.p
    for u, v in _repeated_arguments(spec, phi.d, phi.n, budget):
        args = [u] * p + [_basis_vector(spec, phi.d, i) for i in v]
        value = form_eval(phi, args)
        if value:
            return Verdict(False, {
                "u": [a.value for a in u],
                "v": [i + 1 for i in v],
                "value": value.value,
            })
    return Verdict(True)


def characteristic_constraints(spec: FieldSpec, d: int, n: int, budget: int = TABLE_BUDGET) -> List[List[FieldElement]]:
    """Rows over the stored basis values expressing phi(p*u, e_v) = 0, one per (u, v)"""
    if n < spec.p:
        return []
    keys = index_tuples(d, n)
    position = {s: k for k, s in enumerate(keys)}
    rows = []
    for u, v in _repeated_arguments(spec, d, n, budget):
        args = [u] * spec.p + [_basis_vector(spec, d, i) for i in v]
        row = [spec.zero] * len(keys)
        for key, coeff in _functional(spec, d, args).items():
            row[position[key]] = coeff
        if any(row):
            rows.append(row)
    return rows


def characteristic_forms(spec: FieldSpec, d: int, n: int, budget: int = TABLE_BUDGET) -> Iterator[SymmetricForm]:
    """Every characteristic symmetric n-linear form on F^d"""
    spec.require_finite("characteristic_forms")
    width = len(index_tuples(d, n))
    basis = nullspace(characteristic_constraints(spec, d, n, budget), width, spec)
    count = spec.q ** len(basis)
    if count > budget:
        raise BudgetExceededError(f"{count} characteristic forms exceed the budget {budget}")
    logger.debug("characteristic %d-linear forms on %s^%d: dimension %d", n, spec, d, len(basis))
    for coeffs in product(spec.elements, repeat=len(basis)):
        vector = [spec.zero] * width
        for c, b in zip(coeffs, basis):
            if c:
                vector = [x + c * y for x, y in zip(vector, b)]
        yield SymmetricForm.from_vector(spec, d, n, vector)


def random_characteristic_form(spec: FieldSpec, d: int, n: int, rng: random.Random,
                               budget: int = TABLE_BUDGET) -> SymmetricForm:
    """A random element of the characteristic forms' solution space"""
    if not spec.is_finite or n < spec.p:
        return SymmetricForm.random(spec, d, n, rng)
    width = len(index_tuples(d, n))
    basis = nullspace(characteristic_constraints(spec, d, n, budget), width, spec)
    vector = [spec.zero] * width
    for b in basis:
        c = rng.choice(spec.elements)
        vector = [x + c * y for x, y in zip(vector, b)]
    return SymmetricForm.from_vector(spec, d, n, vector)


# ----- realization ------------------------------------------------------------------

def _compositions(n: int, d: int, cap) -> Iterator[Tuple[int, ...]]:
    """(t_1, ..., t_d) with sum n and every t_i < cap"""
    if d == 1:
        if n < cap:
            yield (n,)
        return
    top = n if math.isinf(cap) else min(n, cap - 1)
    for t in range(top + 1):
        for rest in _compositions(n - t, d - 1, cap):
            yield (t,) + rest


def realization_coefficient(t: Sequence[int], spec: FieldSpec) -> FieldElement:
    """1 / (t_1! ... t_d!) as the formal quotient multinomial / n!"""
    n = sum(t)
    multinomial = math.factorial(n)
    for k in t:
        multinomial //= math.factorial(k)
    if not spec.is_finite:
        return spec.element(Fraction(multinomial, math.factorial(n)))
    p = spec.p
    a = multiplicity(p, multinomial)
    b = multiplicity(p, math.factorial(n))
    if a != b:
        raise ConsistencyError(f"p-adic valuations differ for t={tuple(t)}: multinomial {a}, n! {b}")
    unit = multinomial // p ** a
    unit_factorial = math.factorial(n) // p ** b
    return spec.from_int(unit) / spec.from_int(unit_factorial)


def realize(phi: SymmetricForm) -> SparsePolynomial:
    """The homogeneous, totally reduced degree-n polynomial alpha with Delta^n alpha = phi.

    alpha(sum a_i e_i) = sum over t with |t| = n, t_i < chr F of
    a^t / (t_1! ... t_d!) * phi(t_1*e_1, ..., t_d*e_d).
    """
    spec, d, n = phi.spec, phi.d, phi.n
    terms = {}
    for t in _compositions(n, d, spec.p):
        key = tuple(i for i, k in enumerate(t) for _ in range(k))
        value = phi.values[key]
        if value:
            terms[t] = realization_coefficient(t, spec) * value
    return SparsePolynomial(spec, d, terms)


def recover_small_arity(phi: SymmetricForm) -> SparsePolynomial:
    """u -> phi(n*u) / n!, expanded symbolically; needs n < chr F"""
    spec, d, n = phi.spec, phi.d, phi.n
    if n >= spec.p:
        raise PreconditionError(f"recovering alpha from phi(n*u)/n! needs n < chr F, got n={n}, p={spec.p}")
    variables = [SparsePolynomial.variable(spec, d, j) for j in range(d)]
    total = SparsePolynomial.zero(spec, d)
    for picks in product(range(d), repeat=n):
        value = phi.basis_value(picks)
        if not value:
            continue
        term = SparsePolynomial.constant(spec, d, value)
        for j in picks:
            term = term * variables[j]
        total = total + term
    return reduce_poly(total.scale(spec.inv(spec.from_int(math.factorial(n)))))


# ----- forms from defects -------------------------------------------------------------

@dataclass
class FormCheck:
    """Outcome of defect_as_form: the form on success, otherwise a witness"""

    form: Optional[SymmetricForm]
    witness: Optional[Dict[str, Any]] = None
    mode: str = "full"
    seed: Optional[int] = None
    checked: int = 0
    stages: Dict[str, str] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.form is not None

    def __bool__(self) -> bool:
        return self.ok

    def to_json(self) -> dict:
        out = {"ok": self.ok, "mode": self.mode, "checked": self.checked, "stages": dict(self.stages)}
        if self.form is not None:
            out["form"] = self.form.to_json()
        if self.witness is not None:
            out["witness"] = self.witness
        if self.seed is not None:
            out["seed"] = self.seed
        return out


def defect_as_form(tab: FunctionTable, n: int, budget: int = LINEARITY_BUDGET,
                   samples: int = SAMPLE_COUNT, seed: int = DEFAULT_SEED) -> FormCheck:
    """Delta^n alpha read off on basis tuples, then verified to be n-linear.

    The checks, in order: homogeneity in the first slot (scalar a, vector u,
    basis vectors elsewhere), additivity in the first slot, and agreement of
    Delta^n alpha with the multilinear extension of the basis values. They run
    over everything when q^((n+1)d) is within ``budget`` and on ``samples``
    seeded draws otherwise.
    """
    require_zero_at_origin(tab)
    if n < 1:
        raise PreconditionError(f"arity must be >= 1, got {n}")
    spec, d = tab.spec, tab.d
    space = tab.space
    basis = [_basis_vector(spec, d, i) for i in range(d)]

    phi = SymmetricForm(spec, d, n, {
        s: defect_value(tab, [basis[i] for i in s]) for s in index_tuples(d, n)
    })

    exhaustive = space.size ** (n + 1) <= budget
    rng = None if exhaustive else random.Random(seed)
    check = FormCheck(None, mode="full" if exhaustive else "sampled", seed=None if exhaustive else seed)
    rest_tuples = index_tuples(d, n - 1)
    logger.debug("defect_as_form n=%d over %s^%d: %s", n, spec, d, check.mode)

    def encode(u: Point) -> List[int]:
        return [a.value for a in u]

    # homogeneity
    if exhaustive:
        cases = ((a, u, v) for a in spec.elements[2:] for u in space for v in rest_tuples)
    else:
        cases = ((rng.choice(spec.elements), space.random_point(rng), rng.choice(rest_tuples)) for _ in range(samples))
    for a, u, v in cases:
        check.checked += 1
        rest = [basis[i] for i in v]
        lhs = defect_value(tab, [space.scale(a, u)] + rest)
        rhs = a * defect_value(tab, [u] + rest)
        if lhs != rhs:
            check.witness = {"kind": "homogeneity", "a": a.value, "u": encode(u),
                             "v": [i + 1 for i in v], "lhs": lhs.value, "rhs": rhs.value}
            check.stages["homogeneity"] = "failed"
            return check
    check.stages["homogeneity"] = "passed"

    # additivity in the first slot
    if exhaustive:
        cases = ((u, w, v) for u in space for w in space for v in rest_tuples)
    else:
        cases = ((space.random_point(rng), space.random_point(rng), rng.choice(rest_tuples)) for _ in range(samples))
    for u, w, v in cases:
        check.checked += 1
        rest = [basis[i] for i in v]
        lhs = defect_value(tab, [space.add(u, w)] + rest)
        rhs = defect_value(tab, [u] + rest) + defect_value(tab, [w] + rest)
        if lhs != rhs:
            check.witness = {"kind": "additivity", "u": encode(u), "w": encode(w),
                             "v": [i + 1 for i in v], "lhs": lhs.value, "rhs": rhs.value}
            check.stages["additivity"] = "failed"
            return check
    check.stages["additivity"] = "passed"

    # agreement with the multilinear extension on whole tuples
    if exhaustive:
        cases = product(space, repeat=n)
    else:
        cases = ([space.random_point(rng) for _ in range(n)] for _ in range(samples))
    for args in cases:
        check.checked += 1
        lhs = defect_value(tab, list(args))
        rhs = form_eval(phi, args)
        if lhs != rhs:
            check.witness = {"kind": "expansion", "args": [encode(u) for u in args],
                             "lhs": lhs.value, "rhs": rhs.value}
            check.stages["expansion"] = "failed"
            return check
    check.stages["expansion"] = "passed"
    check.form = phi
    return check
