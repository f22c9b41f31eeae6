"""
n-applications: the syntactic verdict tpl(V,n) ∩ dpl(V,n), the semantic
cross-check against the definition, the non-homogeneous counterexamples,
and the quadratic / dimension demonstrations.
"""
import logging
from dataclasses import asdict, dataclass
from itertools import product
from typing import Any, Dict, List, Mapping, Optional, Tuple

from .errors import ConsistencyError, PreconditionError
from .field import FieldSpec, matrix_rank
from .forms import (
    DEFAULT_SEED,
    LINEARITY_BUDGET,
    SAMPLE_COUNT,
    Verdict,
    characteristic_constraints,
    characteristic_forms,
    defect_as_form,
    index_tuples,
    realize,
)
from .poly import (
    TABLE_BUDGET,
    FunctionTable,
    MultiExponent,
    SparsePolynomial,
    check_budget,
    degree,
    dpl_offender,
    homogenize,
    is_homogeneous,
    is_reduced,
    monomial_p_degree,
    monomial_totally_reduced,
    reduce_poly,
    reduced_monomials,
    require_no_constant,
    to_table,
    tpl_offender,
)
from .polarize import comb_degree, defect_table

logger = logging.getLogger(__name__)

HOMOGENEITY_BUDGET = 2 ** 16

PASSED = "passed"
FAILED = "failed"
SKIPPED = "skipped"


@dataclass
class SemanticCheck:
    status: str
    witness: Optional[Dict[str, Any]] = None
    homogeneity: str = SKIPPED
    linearity: str = SKIPPED
    seed: Optional[int] = None
    reason: Optional[str] = None

    @property
    def ran(self) -> bool:
        return self.status != SKIPPED

    def to_json(self) -> dict:
        return {k: v for k, v in asdict(self).items() if v is not None}

    @classmethod
    def from_json(cls, data: Mapping) -> "SemanticCheck":
        return cls(**{k: data.get(k) for k in ("status", "witness", "seed", "reason")},
                   homogeneity=data.get("homogeneity", SKIPPED), linearity=data.get("linearity", SKIPPED))


@dataclass
class ClassificationReport:
    field: str
    d: int
    n: int
    degree: int
    comb_degree: int
    pl: bool
    tpl: bool
    dpl: bool
    is_n_application: bool
    homogeneous_of_degree_n: bool
    semantic_check: SemanticCheck
    tpl_offender: Optional[List[int]] = None
    dpl_offender: Optional[List[int]] = None
    homogenized: Optional[str] = None
    agreement: Optional[bool] = None

    @property
    def seed(self) -> Optional[int]:
        return self.semantic_check.seed

    def to_json(self) -> dict:
        out = asdict(self)
        out["semantic_check"] = self.semantic_check.to_json()
        out["seed"] = self.seed
        return out

    @classmethod
    def from_json(cls, data: Mapping) -> "ClassificationReport":
        values = {k: v for k, v in data.items() if k != "seed"}
        values["semantic_check"] = SemanticCheck.from_json(data["semantic_check"])
        return cls(**values)


# ----- semantic checks ----------------------------------------------------------

def check_homogeneity(tab: FunctionTable, n: int) -> Verdict:
    """alpha(a u) = a^n alpha(u) for every scalar a and vector u"""
    space = tab.space
    for a in tab.spec.elements:
        an = a ** n
        for index in range(space.size):
            u = space.point(index)
            lhs = tab(space.scale(a, u))
            rhs = an * tab.values[index]
            if lhs != rhs:
                return Verdict(False, {"kind": "homogeneity", "a": a.value, "u": space.encode(u),
                                       "lhs": lhs.value, "rhs": rhs.value})
    return Verdict(True)


def semantic_napp_check(f: SparsePolynomial, n: int,
                        homogeneity_budget: int = HOMOGENEITY_BUDGET,
                        linearity_budget: int = LINEARITY_BUDGET,
                        samples: int = SAMPLE_COUNT,
                        seed: int = DEFAULT_SEED) -> SemanticCheck:
    """Test the definition directly on f's mapping: homogeneity of degree n,
    then n-linearity of Delta^n (exhaustive or seeded sampling).
    """
    spec = f.spec
    if not spec.is_finite:
        return SemanticCheck(SKIPPED, reason="the rational field has no finite table")
    size = spec.q ** f.d
    if size > homogeneity_budget:
        return SemanticCheck(SKIPPED, reason=f"q^d = {size} exceeds the homogeneity budget {homogeneity_budget}")
    tab = to_table(f)
    result = SemanticCheck(PASSED, homogeneity="exhaustive")
    verdict = check_homogeneity(tab, n)
    if not verdict:
        result.status = FAILED
        result.witness = verdict.witness
        return result
    form_check = defect_as_form(tab, n, budget=linearity_budget, samples=samples, seed=seed)
    result.linearity = form_check.mode
    result.seed = form_check.seed
    if not form_check:
        result.status = FAILED
        result.witness = form_check.witness
    return result


# ----- classification -------------------------------------------------------------

def classify(f: SparsePolynomial, n: int, semantic: bool = True,
             homogeneity_budget: int = HOMOGENEITY_BUDGET,
             linearity_budget: int = LINEARITY_BUDGET,
             samples: int = SAMPLE_COUNT,
             seed: int = DEFAULT_SEED) -> ClassificationReport:
    """Decide whether the mapping of f is an n-application (f in tpl ∩ dpl)"""
    if n < 1:
        raise PreconditionError(f"arity must be >= 1, got {n}")
    if not is_reduced(f):
        raise PreconditionError("classify needs a reduced polynomial (all exponents < q); reduce it first")
    require_no_constant(f, "classify")

    cdeg = comb_degree(f)
    tpl_bad = tpl_offender(f, n)
    dpl_bad = dpl_offender(f, n)
    is_napp = tpl_bad is None and dpl_bad is None

    if semantic:
        check = semantic_napp_check(f, n, homogeneity_budget, linearity_budget, samples, seed)
    else:
        check = SemanticCheck(SKIPPED, reason="not requested")

    agreement = None
    if check.ran:
        agreement = (check.status == PASSED) == is_napp
        if not agreement:
            logger.warning("semantic check (%s) disagrees with tpl ∩ dpl verdict %s for %s", check.status, is_napp, f)

    homogenized = None
    if is_napp and f.spec.is_finite and not f.is_zero():
        homogenized = str(homogenize(f, n))

    return ClassificationReport(
        field=f.spec.label,
        d=f.d,
        n=n,
        degree=degree(f),
        comb_degree=cdeg,
        pl=cdeg <= n,
        tpl=tpl_bad is None,
        dpl=dpl_bad is None,
        is_n_application=is_napp,
        homogeneous_of_degree_n=is_homogeneous(f, n),
        semantic_check=check,
        tpl_offender=list(tpl_bad) if tpl_bad is not None else None,
        dpl_offender=list(dpl_bad) if dpl_bad is not None else None,
        homogenized=homogenized,
        agreement=agreement,
    )


def _monomial_is_napp(m: MultiExponent, spec: FieldSpec, n: int) -> bool:
    deg = sum(m)
    if deg == 0:
        return False
    weight = monomial_p_degree(m, spec.p)
    if weight > n or (weight == n and not monomial_totally_reduced(m, spec.p)):
        return False
    if not spec.is_finite:
        return deg == n
    return (deg - n) % (spec.q - 1) == 0


def napp_monomial_basis(spec: FieldSpec, d: int, n: int, budget: int = TABLE_BUDGET) -> List[MultiExponent]:
    """Reduced monomials lying in tpl(V,n) ∩ dpl(V,n); they span the n-applications"""
    spec.require_finite("napp_monomial_basis")
    check_budget(spec.q ** d, budget, f"monomial enumeration over {spec}^{d}")
    return [m for m in reduced_monomials(spec, d) if _monomial_is_napp(m, spec, n)]


# ----- counterexamples --------------------------------------------------------------

def counterexample_digits(spec: FieldSpec, n: int) -> Tuple[int, ...]:
    """Lexicographically least (a_0, ..., a_(e-1)) with sum a_i p^i = n+q-1 and sum a_i < n"""
    p, e, q = spec.p, spec.e, spec.q
    target = n + q - 1
    top = p ** (e - 1)
    ranges = [range(target // p ** i + 1) for i in range(e - 1)]
    for head in product(*ranges):
        rest = target - sum(a * p ** i for i, a in enumerate(head))
        if rest < 0 or rest % top:
            continue
        digits = head + (rest // top,)
        if sum(digits) < n:
            return digits
    raise PreconditionError(f"no digit representation of n+q-1 = {target} with fewer than {n} digits")


def construct_counterexample(spec: FieldSpec, n: int, d: int) -> SparsePolynomial:
    """An n-application of degree n+q-1 that is not homogeneous of degree n:

    x_1...x_n + prod_i (x_(s_i+1) ... x_(s_i+a_i))^(p^i), with s_i = a_0 + ... + a_(i-1).
    """
    if n < 5:
        raise PreconditionError(
            f"the construction needs n >= 5; for n < 5 every n-application has degree at most n (got n={n})"
        )
    spec.require_finite("construct_counterexample")
    if spec.e < 2:
        raise PreconditionError(f"needs a non-prime field (e >= 2), got {spec}")
    if n < spec.q:
        raise PreconditionError(f"needs n >= q, got n={n}, q={spec.q}")
    if d < n:
        raise PreconditionError(f"needs d >= n, got d={d}, n={n}")

    digits = counterexample_digits(spec, n)
    logger.debug("counterexample digits for q=%d, n=%d: %s", spec.q, n, digits)
    linear = [1 if i < n else 0 for i in range(d)]
    lifted = [0] * d
    start = 0
    for i, a in enumerate(digits):
        for k in range(start, start + a):
            lifted[k] = spec.p ** i
        start += a
    f = SparsePolynomial(spec, d, {tuple(linear): 1, tuple(lifted): 1})

    report = classify(f, n, semantic=False)
    if not report.is_n_application or report.degree != n + spec.q - 1 or report.comb_degree != n:
        raise ConsistencyError(f"constructed polynomial {f} is not a degree-{n + spec.q - 1} {n}-application")
    return f


# ----- demonstrations --------------------------------------------------------------

@dataclass
class QuadraticDemo:
    field: str
    d: int
    forms: int
    two_applications: int
    recovered: bool
    injective: bool
    bijective: bool
    kernel_dimension: int
    witness: Optional[Dict[str, str]] = None

    def to_json(self) -> dict:
        return {k: v for k, v in asdict(self).items() if v is not None}


def quadratic_correspondence_demo(spec: FieldSpec, d: int, budget: int = TABLE_BUDGET) -> QuadraticDemo:
    """Quadratic forms are exactly the 2-applications.

    Odd characteristic: every symmetric bilinear form phi is realized as
    u -> phi(u,u)/2 and the map is a bijection onto the 2-applications.
    Characteristic 2: only alternating forms occur; phi is realized by
    sum_(i<j) a_i a_j phi(e_i, e_j) and the additive maps form the kernel.
    """
    spec.require_finite("quadratic_correspondence_demo")
    check_budget(spec.q ** len(index_tuples(d, 2)), budget, f"bilinear forms on {spec}^{d}")
    basis = napp_monomial_basis(spec, d, 2, budget)
    kernel = [m for m in basis if monomial_p_degree(m, spec.p) < 2]
    two_applications = spec.q ** len(basis)

    realized = set()
    recovered = True
    forms = 0
    for phi in characteristic_forms(spec, d, 2, budget):
        forms += 1
        alpha = realize(phi)
        check = defect_as_form(to_table(alpha), 2)
        if not check or check.form != phi:
            logger.warning("Delta^2 of the realization of %s does not recover it", phi)
            recovered = False
        realized.add(alpha)

    injective = len(realized) == forms
    bijective = injective and forms * spec.q ** len(kernel) == two_applications
    demo = QuadraticDemo(spec.label, d, forms, two_applications, recovered, injective, bijective, len(kernel))

    if spec.p == 2:
        x1 = SparsePolynomial.variable(spec, d, 0)
        nonzero = [g for g in realized if not g.is_zero()]
        # only the zero form exists when d = 1
        alpha = min(nonzero, key=lambda g: (len(g), str(g))) if nonzero else SparsePolynomial.zero(spec, d)
        beta = reduce_poly(alpha + x1 * x1)
        same = defect_table(to_table(alpha), 2).values == defect_table(to_table(beta), 2).values
        if alpha == beta or not same:
            raise ConsistencyError("the additive shift x1^2 should change alpha but not its second defect")
        demo.witness = {"alpha": str(alpha), "alpha_prime": str(beta)}
    return demo


@dataclass
class DimensionReport:
    field: str
    d: int
    n: int
    monomial_count: int
    form_dimension: int
    agree: bool

    def to_json(self) -> dict:
        return asdict(self)


def correspondence_dimension_check(spec: FieldSpec, d: int, n: int, budget: int = TABLE_BUDGET) -> DimensionReport:
    """dim(tpl ∩ dpl) - dim(pl_(n-1) ∩ dpl) against dim C_n(V), computed independently.

    The left side counts admissible monomials of combinatorial degree exactly
    n: reduced monomials over a finite field, monomials with exponents up to
    n over Q. The right side is the number of stored basis values of an
    n-linear form minus the rank of the characteristic constraints (an empty
    system over Q).
    """
    if spec.is_finite:
        candidates = napp_monomial_basis(spec, d, n, budget)
    else:
        check_budget((n + 1) ** d, budget, f"monomial enumeration over Q^{d}")
        candidates = [m for m in product(range(n + 1), repeat=d) if _monomial_is_napp(m, spec, n)]
    monomials = sum(1 for m in candidates if monomial_p_degree(m, spec.p) == n)
    rank = matrix_rank(characteristic_constraints(spec, d, n, budget), spec)
    dimension = len(index_tuples(d, n)) - rank
    report = DimensionReport(spec.label, d, n, monomials, dimension, monomials == dimension)
    if not report.agree:
        logger.warning("dimension mismatch over %s^%d, n=%d: %d monomials, %d-dimensional forms",
                       spec, d, n, monomials, dimension)
    return report
