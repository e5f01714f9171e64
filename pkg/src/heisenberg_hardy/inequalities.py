"""Catalog and numerical verification of weighted Hardy, Rellich and
uncertainty-type inequalities on H^n.

Every inequality is normalised to ``constant * lhs <= rhs`` where ``lhs``
is one weighted integral and ``rhs`` is either a single integral, a Hölder
product ``R1^(1/p) R2^(1/q)`` or a scaled sum ``(R1 + R2) / K``.  The
margin ``rhs - constant * lhs`` is nonnegative exactly when the inequality
holds for the function at hand.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field, replace
from typing import Callable, Iterable, Optional

from .calculus import ScalarField
from .errors import CaseError, CatalogError, ParameterError
from .functionals import Factor, Term, TermValues, integrate_terms
from .quadrature import QuadratureSpec

__all__ = [
    "KINDS",
    "InequalityCase",
    "VerificationReport",
    "DiscriminantReport",
    "hardy_interpolation_case",
    "hardy_case",
    "hpw_case",
    "rellich_interpolation_case",
    "rellich_p2_case",
    "hardy_p2_case",
    "embedding_case",
    "evaluate_case",
    "evaluate_cases",
    "evaluate_hardy_interpolation",
    "evaluate_hardy",
    "evaluate_hpw",
    "evaluate_rellich_interpolation",
    "evaluate_rellich_p2",
    "evaluate_hardy_p2",
    "evaluate_named_case",
    "verify_embedding_bound",
    "discriminant_check",
    "catalog",
    "named_catalog",
    "get_case",
    "catalog_ids",
    "manifest_csv",
    "admissibility",
]

KINDS = ("hardy-interp", "hardy", "hpw", "rellich-interp", "rellich-p2", "hardy-p2",
         "embedding-bound", "uncertainty-variant")
FORMS = ("holder", "squared", "single", "sum")
_REL_FLOOR = 1e-12


@dataclass(frozen=True)
class InequalityCase:
    """One instance ``constant * lhs <= rhs`` with its weighted integrands.

    ``form`` says how ``rhs`` is assembled from ``r1`` and ``r2``:
    ``holder`` gives ``r1^(1/p) r2^(1/q)``, ``squared`` and ``single``
    give ``r1`` alone, and ``sum`` gives ``(r1 + r2) / rhs_divisor``.
    """

    id: str
    kind: str
    n: int
    p: float
    a: float
    b: float
    constant: float
    constant_formula: str
    form: str
    lhs_term: Term
    r1_term: Term
    r2_term: Optional[Term] = None
    mid_term: Optional[Term] = None
    rhs_divisor: float = 1.0
    anchor: str = ""
    constraint_notes: str = ""

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ParameterError(f"unknown kind {self.kind!r}")
        if self.form not in FORMS:
            raise ParameterError(f"unknown form {self.form!r}")

    @property
    def q(self) -> float:
        return self.p / (self.p - 1.0)

    @property
    def lam(self) -> float:
        return self.a + self.b

    @property
    def Q(self) -> int:
        return 2 * self.n + 2

    @property
    def lhs_weights(self) -> Term:
        return self.lhs_term

    @property
    def rhs_weights(self) -> tuple:
        return tuple(t for t in (self.r1_term, self.r2_term) if t is not None)

    def terms(self) -> list:
        return [t for t in (self.lhs_term, self.r1_term, self.r2_term, self.mid_term) if t is not None]


@dataclass
class VerificationReport:
    """Outcome of one (inequality, function) pair."""

    case_id: str
    function: str
    lhs: float
    rhs: float
    constant: float
    margin: float
    lhs_err: float
    rhs_err: float
    passed: bool
    converged: bool = True
    extras: dict = field(default_factory=dict)

    @property
    def combined_error(self) -> float:
        return self.rhs_err + abs(self.constant) * self.lhs_err

    @property
    def ratio(self) -> float:
        """``rhs / lhs`` (the Rayleigh-type quotient), ``nan`` when lhs vanishes."""
        return self.rhs / self.lhs if self.lhs != 0 else math.nan

    def as_dict(self) -> dict:
        return {"id": self.case_id, "function": self.function, "lhs": self.lhs, "rhs": self.rhs,
                "constant": self.constant, "margin": self.margin, "lhs_err": self.lhs_err,
                "rhs_err": self.rhs_err, "pass": self.passed}


def _f(power):
    return Factor("f", power)


def _g(power):
    return Factor("grad", power)


def _lap(power, p):
    return Factor("lap", power) if p == 2 else Factor("plap", power, p)


# ---------------------------------------------------------------------------
# admissibility
# ---------------------------------------------------------------------------

def admissibility(kind: str, n: int, p: float, a: float, b: float, extra=()) -> list:
    """Names of violated admissibility predicates (empty when admissible)."""
    Q = 2 * n + 2
    lam = a + b
    bad = []
    if kind in ("hardy-interp", "uncertainty-variant", "hardy", "hpw", "rellich-interp"):
        if not 1 < p < Q:
            bad.append("1 < p < Q")
    if kind in ("hardy-interp", "uncertainty-variant") and math.isclose(Q, 1 + lam):
        bad.append("Q != 1 + a + b")
    if kind == "rellich-interp":
        lo = (p - Q) / (p - 1) if p != 1 else -math.inf
        if not lo - 1e-12 <= lam + 1 <= 1e-12:
            bad.append("(p-Q)/(p-1) <= a + b + 1 <= 0")
    if kind == "rellich-p2" and math.isclose(Q, a + b - 1):
        bad.append("Q != a + b - 1")
    if kind == "hardy-p2" and math.isclose(Q, a + b + 1):
        bad.append("Q != a + b + 1")
    for name, pred in extra:
        if not pred(n, p, a, b):
            bad.append(name)
    return bad


def _require(kind, n, p, a, b, extra=()):
    bad = admissibility(kind, n, p, a, b, extra)
    if bad:
        raise CaseError(f"{kind} (n={n}, p={p}, a={a}, b={b}) violates: {'; '.join(bad)}")


# ---------------------------------------------------------------------------
# case builders
# ---------------------------------------------------------------------------

def hardy_interpolation_case(a: float, b: float, p: float, n: int = 1, *, id: str = "",
                             kind: str = "hardy-interp", formula: str = "|Q-1-(a+b)|/p",
                             anchor: str = "", extra=()) -> InequalityCase:
    """Weighted Hardy interpolation with constant ``|Q - 1 - lambda| / p``."""
    _require(kind, n, p, a, b, extra)
    Q = 2 * n + 2
    lam = a + b
    q = p / (p - 1)
    return InequalityCase(
        id=id or f"hardy-interp-p{p:g}-a{a:g}-b{b:g}", kind=kind, n=n, p=p, a=a, b=b,
        constant=abs(Q - 1 - lam) / p, constant_formula=formula, form="holder",
        lhs_term=Term((_f(p),), p, p + lam + 1),
        r1_term=Term((_g(p),), 0.0, a * p),
        r2_term=Term((_f(p),), p, p + b * q),
        mid_term=Term((_f(p - 1), _g(1.0)), p - 1, p - 1 + lam),
        anchor=anchor or "weighted Hardy interpolation inequality",
        constraint_notes="1 < p < Q; Q != 1 + a + b",
    )


def hardy_case(p: float, n: int = 1, *, id: str = "") -> InequalityCase:
    """``((Q-p)/p)^p int (|z|/d)^p |f|^p / d^p <= int |grad_H f|^p``."""
    _require("hardy", n, p, 0.0, p - 1)
    Q = 2 * n + 2
    return InequalityCase(
        id=id or f"hardy-p{p:g}", kind="hardy", n=n, p=p, a=0.0, b=p - 1,
        constant=((Q - p) / p) ** p, constant_formula="((Q-p)/p)^p", form="single",
        lhs_term=Term((_f(p),), p, 2 * p), r1_term=Term((_g(p),), 0.0, 0.0),
        anchor="sharp weighted Hardy inequality", constraint_notes="1 < p < Q")


def hpw_case(p: float, n: int = 1, *, id: str = "") -> InequalityCase:
    """Heisenberg-Pauli-Weyl type uncertainty inequality with constant ``(Q-p)/p``."""
    _require("hpw", n, p, 0.0, p - 1)
    Q = 2 * n + 2
    q = p / (p - 1)
    return InequalityCase(
        id=id or f"hpw-p{p:g}", kind="hpw", n=n, p=p, a=0.0, b=p - 1,
        constant=(Q - p) / p, constant_formula="(Q-p)/p", form="holder",
        lhs_term=Term((_f(p),), p, 2 * p), r1_term=Term((_g(p),), 0.0, 0.0),
        r2_term=Term((_f(q),), q, 2 * q),
        anchor="HPW uncertainty principle", constraint_notes="1 < p < Q")


def rellich_interpolation_case(a: float, b: float, p: float, n: int = 1, *, id: str = "",
                               squared: bool = False, formula: str = "(Q-p+(a+b+1)(p-1))/p",
                               anchor: str = "") -> InequalityCase:
    """Rellich-type interpolation with the p-sub-Laplacian."""
    _require("rellich-interp", n, p, a, b)
    Q = 2 * n + 2
    lam = a + b
    q = p / (p - 1)
    const = (Q - p + (lam + 1) * (p - 1)) / p
    lhs = Term((_g(p),), p, p + lam + 1)
    r2 = Term((_g(q),), p, p + b * q)
    if squared:
        if not (p == 2 and math.isclose(r2.dpow, lhs.dpow)):
            raise CaseError("the squared form needs p = 2 and b = a + 1")
        return InequalityCase(
            id=id, kind="rellich-interp", n=n, p=p, a=a, b=b, constant=const ** 2,
            constant_formula=formula, form="squared", lhs_term=lhs,
            r1_term=Term((_lap(2.0, p),), 0.0, a * p),
            anchor=anchor or "Rellich interpolation, squared form",
            constraint_notes="(p-Q)/(p-1) <= a+b+1 <= 0; b = a + 1")
    return InequalityCase(
        id=id or f"rellich-interp-p{p:g}-a{a:g}-b{b:g}", kind="rellich-interp", n=n, p=p,
        a=a, b=b, constant=const, constant_formula=formula, form="holder", lhs_term=lhs,
        r1_term=Term((_lap(p, p),), 0.0, a * p), r2_term=r2,
        mid_term=Term((_lap(1.0, p), _g(1.0)), p - 1, p - 1 + lam),
        anchor=anchor or "Rellich-type interpolation inequality",
        constraint_notes="1 < p < Q; (p-Q)/(p-1) <= a+b+1 <= 0")


def rellich_p2_case(a: float, b: float, n: int = 1, *, id: str = "", squared: bool = False,
                    formula: str = "|Q+a+b-1|/2", anchor: str = "") -> InequalityCase:
    """``|Q+a+b-1|/2 int (|z|/d)^2 |grad f|^2 / d^(a+b+1) <= sqrt(R1 R2)``."""
    _require("rellich-p2", 1 if n is None else n, 2.0, a, b)
    Q = 2 * n + 2
    const = abs(Q + a + b - 1) / 2
    lhs = Term((_g(2.0),), 2.0, 2.0 + a + b + 1)
    r1 = Term((Factor("lap", 2.0),), 0.0, 2.0 * a)
    r2 = Term((_g(2.0),), 2.0, 2.0 + 2.0 * b)
    common = dict(kind="rellich-p2", n=n, p=2.0, a=a, b=b, constant_formula=formula,
                  lhs_term=lhs, r1_term=r1, constraint_notes="Q != a + b - 1")
    if squared:
        if not math.isclose(b, a + 1):
            raise CaseError("the squared form needs b = a + 1")
        return InequalityCase(id=id, constant=const ** 2, form="squared",
                              anchor=anchor or "Hardy-Rellich inequality, squared form", **common)
    return InequalityCase(id=id or f"rellich-p2-a{a:g}-b{b:g}", constant=const, form="holder",
                          r2_term=r2, mid_term=Term((Factor("lap", 1.0), _g(1.0)), 1.0, 1.0 + a + b),
                          anchor=anchor or "weighted Rellich-type inequality (p = 2)", **common)


def hardy_p2_case(a: float, b: float, n: int = 1, *, id: str = "", squared: bool = False,
                  formula: str = "|Q-(a+b+1)|/2", anchor: str = "") -> InequalityCase:
    """``|Q-(a+b+1)|/2 int (|z|/d)^2 |f|^2 / d^(a+b+1) <= sqrt(R1 R2)``."""
    _require("hardy-p2", n, 2.0, a, b)
    Q = 2 * n + 2
    const = abs(Q - (a + b + 1)) / 2
    lhs = Term((_f(2.0),), 2.0, 2.0 + a + b + 1)
    r1 = Term((_g(2.0),), 0.0, 2.0 * a)
    r2 = Term((_f(2.0),), 2.0, 2.0 + 2.0 * b)
    common = dict(kind="hardy-p2", n=n, p=2.0, a=a, b=b, constant_formula=formula,
                  lhs_term=lhs, r1_term=r1, constraint_notes="Q != a + b + 1")
    if squared:
        if not math.isclose(b, a + 1):
            raise CaseError("the squared form needs b = a + 1")
        return InequalityCase(id=id, constant=const ** 2, form="squared",
                              anchor=anchor or "weighted Hardy inequality, squared form", **common)
    return InequalityCase(id=id or f"hardy-p2-a{a:g}-b{b:g}", constant=const, form="holder",
                          r2_term=r2, mid_term=Term((_f(1.0), _g(1.0)), 1.0, 1.0 + a + b),
                          anchor=anchor or "weighted Hardy inequality with sharp constant (p = 2)",
                          **common)


EMBEDDINGS = ("H1-into-L2", "H2-into-D12", "D22-into-D12")


def embedding_case(kind: str, a: float, b: float = None, n: int = 1) -> InequalityCase:
    """Young-inequality bounds behind the weighted embeddings.

    ``H1-into-L2``: ``L <= (R1 + R2) / |Q - (a+b+1)|`` with the Hardy integrals.
    ``H2-into-D12``: ``L <= (R1 + R2) / |Q + a + b - 1|`` with the Rellich integrals.
    ``D22-into-D12``: with ``alpha = a`` and ``b = alpha + 1``,
    ``((Q + 2 alpha)/2)^2 int (|z|/d)^2 |grad f|^2 / d^(2 alpha + 2) <= int |Delta_H f|^2 / d^(2 alpha)``.
    """
    Q = 2 * n + 2
    if kind == "H1-into-L2":
        base = hardy_p2_case(a, b, n)
        div = abs(Q - (a + b + 1))
        formula = "1/|Q-(a+b+1)|"
    elif kind == "H2-into-D12":
        base = rellich_p2_case(a, b, n)
        div = abs(Q + a + b - 1)
        if div == 0:
            raise CaseError("Q + a + b - 1 = 0 leaves no bound")
        formula = "1/|Q+a+b-1|"
    elif kind == "D22-into-D12":
        alpha = a
        if not alpha <= Q / 2 - 2:
            raise CaseError("needs alpha <= Q/2 - 2")
        if math.isclose(alpha, Q / 2):
            raise CaseError("needs alpha != Q/2")
        base = rellich_p2_case(alpha, alpha + 1, n, squared=True, formula="((Q+2a)/2)^2")
        return replace(base, id=f"embed-{kind}-a{alpha:g}", kind="embedding-bound",
                       anchor="second-order weighted embedding")
    else:
        raise ParameterError(f"unknown embedding kind {kind!r}; choose from {EMBEDDINGS}")
    return replace(base, id=f"embed-{kind}-a{a:g}-b{b:g}", kind="embedding-bound", form="sum",
                   constant=1.0, rhs_divisor=div, constant_formula=formula, mid_term=None,
                   anchor="Young-inequality embedding bound")


# ---------------------------------------------------------------------------
# evaluation
# ---------------------------------------------------------------------------

def _rel(err, val):
    if val == 0:
        return 0.0 if err == 0 else math.inf
    return err / abs(val)


def _assemble(case: InequalityCase, tv: TermValues, label: str) -> VerificationReport:
    lhs, lhs_err = tv[case.lhs_term], tv.error(case.lhs_term)
    r1, e1 = tv[case.r1_term], tv.error(case.r1_term)
    if case.form in ("single", "squared"):
        rhs, rhs_err = r1, e1
    elif case.form == "sum":
        r2, e2 = tv[case.r2_term], tv.error(case.r2_term)
        rhs, rhs_err = (r1 + r2) / case.rhs_divisor, (e1 + e2) / case.rhs_divisor
    else:
        r2, e2 = tv[case.r2_term], tv.error(case.r2_term)
        p, q = case.p, case.q
        rhs = max(r1, 0.0) ** (1 / p) * max(r2, 0.0) ** (1 / q)
        if rhs == 0:
            # derivative-free bound when a factor vanishes
            rhs_err = (r1 + e1) ** (1 / p) * (r2 + e2) ** (1 / q)
        else:
            rhs_err = rhs * (_rel(e1, r1) / p + _rel(e2, r2) / q)
    margin = rhs - case.constant * lhs
    report = VerificationReport(case.id, label, lhs, rhs, case.constant, margin, lhs_err,
                                rhs_err, False, tv.converged)
    tol = report.combined_error + _REL_FLOOR * (abs(rhs) + abs(case.constant * lhs))
    report.passed = bool(margin >= -tol)
    if case.mid_term is not None:
        report.extras["intermediate"] = tv[case.mid_term]
        report.extras["intermediate_err"] = tv.error(case.mid_term)
    if case.kind == "hpw":
        # Hölder step of the proof chain: L <= L^(1/p) S^(1/q)
        r2 = tv[case.r2_term]
        report.extras["intermediate"] = case.constant * max(lhs, 0) ** (1 / case.p) * max(r2, 0) ** (1 / case.q)
    return report


def evaluate_cases(cases: Iterable[InequalityCase], f: ScalarField,
                   spec: QuadratureSpec) -> list:
    """Evaluate several cases on one function with a single shared cubature."""
    cases = list(cases)
    for c in cases:
        if c.n != spec.n:
            raise ParameterError(f"case {c.id} is for n={c.n}, quadrature for n={spec.n}")
    terms = [t for c in cases for t in c.terms()]
    tv = integrate_terms(f, terms, spec)
    return [_assemble(c, tv, f.label) for c in cases]


def evaluate_case(case: InequalityCase, f: ScalarField, spec: QuadratureSpec) -> VerificationReport:
    return evaluate_cases([case], f, spec)[0]


def evaluate_hardy_interpolation(case: InequalityCase, f, spec) -> VerificationReport:
    if case.kind not in ("hardy-interp", "uncertainty-variant"):
        raise CaseError(f"case {case.id} is of kind {case.kind}, not hardy-interp")
    return evaluate_case(case, f, spec)


def evaluate_hardy(p: float, f, spec) -> VerificationReport:
    if not 1 < p < spec.Q:
        raise ParameterError(f"need 1 < p < Q = {spec.Q}")
    return evaluate_case(hardy_case(p, spec.n), f, spec)


def evaluate_hpw(p: float, f, spec) -> VerificationReport:
    if not 1 < p < spec.Q:
        raise ParameterError(f"need 1 < p < Q = {spec.Q}")
    return evaluate_case(hpw_case(p, spec.n), f, spec)


def evaluate_rellich_interpolation(case: InequalityCase, f, spec) -> VerificationReport:
    if case.kind != "rellich-interp":
        raise CaseError(f"case {case.id} is of kind {case.kind}, not rellich-interp")
    return evaluate_case(case, f, spec)


def evaluate_rellich_p2(a: float, b: float, f, spec) -> VerificationReport:
    return evaluate_case(rellich_p2_case(a, b, spec.n), f, spec)


def evaluate_hardy_p2(a: float, b: float, f, spec) -> VerificationReport:
    return evaluate_case(hardy_p2_case(a, b, spec.n), f, spec)


def verify_embedding_bound(pair, kind: str, f, spec) -> VerificationReport:
    """``pair`` is ``(a, b)``; for ``D22-into-D12`` it is ``(alpha,)`` or ``(alpha, alpha+1)``."""
    a = pair[0]
    b = pair[1] if len(pair) > 1 else None
    return evaluate_case(embedding_case(kind, a, b, spec.n), f, spec)


@dataclass
class DiscriminantReport:
    """Quadratic ``A s^2 + B s + C >= 0`` from expanding a nonnegative square.

    ``B`` is the full linear coefficient, so nonnegativity for every real
    ``s`` is equivalent to ``B^2 - 4 A C <= 0``.
    """

    function: str
    kind: str
    a: float
    b: float
    A: float
    B: float
    C: float
    A_err: float
    B_err: float
    C_err: float
    identity_residual: float
    identity_err: float

    @property
    def discriminant(self) -> float:
        return self.B ** 2 - 4 * self.A * self.C

    @property
    def discriminant_err(self) -> float:
        return 2 * abs(self.B) * self.B_err + 4 * (self.A_err * abs(self.C) + abs(self.A) * self.C_err)

    @property
    def passed(self) -> bool:
        return self.discriminant <= self.discriminant_err + _REL_FLOOR * (self.B ** 2 + 4 * abs(self.A * self.C))


def discriminant_check(a: float, b: float, f: ScalarField, spec: QuadratureSpec,
                       kind: str = "hardy") -> DiscriminantReport:
    """Evaluate ``A``, ``B``, ``C`` by separate integrals.

    ``hardy``: ``A = int (|z|/d)^2 |f|^2/d^(2b)``, ``B = 2 int f <grad f, grad d>/d^(a+b)``,
    ``C = int |grad f|^2/d^(2a)``; the integration-by-parts identity
    ``B = -(Q-(a+b+1)) int (|z|/d)^2 |f|^2/d^(a+b+1)`` is reported as a residual.
    ``rellich``: the same with ``f -> grad f`` and ``grad f -> Delta_H f``, and
    ``B = (Q+a+b-1) int (|z|/d)^2 |grad f|^2/d^(a+b+1)``.
    """
    Q = spec.Q
    if kind == "hardy":
        tA = Term((_f(2.0),), 2.0, 2.0 + 2 * b)
        tB = Term((Factor("f_graddot"),), 0.0, a + b)
        tC = Term((_g(2.0),), 0.0, 2 * a)
        tL = Term((_f(2.0),), 2.0, 3.0 + a + b)
        coef = -(Q - (a + b + 1))
    elif kind == "rellich":
        tA = Term((_g(2.0),), 2.0, 2.0 + 2 * b)
        tB = Term((Factor("lap_graddot"),), 0.0, a + b)
        tC = Term((Factor("lap", 2.0),), 0.0, 2 * a)
        tL = Term((_g(2.0),), 2.0, 3.0 + a + b)
        coef = Q + a + b - 1
    else:
        raise ParameterError("kind must be 'hardy' or 'rellich'")
    tv = integrate_terms(f, [tA, tB, tC, tL], spec)
    B, B_err = 2 * tv[tB], 2 * tv.error(tB)
    resid = B - coef * tv[tL]
    return DiscriminantReport(f.label, kind, a, b, tv[tA], B, tv[tC], tv.error(tA), B_err,
                              tv.error(tC), resid, B_err + abs(coef) * tv.error(tL))


# ---------------------------------------------------------------------------
# catalog
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class _Template:
    id: str
    kind: str
    p: float
    a: Callable
    b: Callable
    formula: str
    anchor: str
    squared: bool = False
    extra: tuple = ()
    note: str = ""

    def build(self, n: int, p=None, a=None, b=None) -> InequalityCase:
        p = self.p if p is None else float(p)
        a = self.a(p) if a is None else float(a)
        b = self.b(p) if b is None else float(b)
        if self.kind == "hardy":
            return replace(hardy_case(p, n), id=self.id, anchor=self.anchor)
        if self.kind == "hpw":
            return replace(hpw_case(p, n), id=self.id, anchor=self.anchor)
        if self.kind in ("hardy-interp", "uncertainty-variant"):
            return hardy_interpolation_case(a, b, p, n, id=self.id, kind=self.kind,
                                            formula=self.formula, anchor=self.anchor,
                                            extra=self.extra)
        if self.kind == "rellich-interp":
            return rellich_interpolation_case(a, b, p, n, id=self.id, squared=self.squared,
                                              formula=self.formula, anchor=self.anchor)
        if self.kind == "rellich-p2":
            return rellich_p2_case(a, b, n, id=self.id, squared=self.squared,
                                   formula=self.formula, anchor=self.anchor)
        return hardy_p2_case(a, b, n, id=self.id, squared=self.squared, formula=self.formula,
                             anchor=self.anchor)

    def violations(self, n, p=None, a=None, b=None) -> list:
        p = self.p if p is None else float(p)
        a = self.a(p) if a is None else float(a)
        b = self.b(p) if b is None else float(b)
        bad = admissibility(self.kind, n, p, a, b, self.extra)
        if self.squared and not math.isclose(b, a + 1):
            bad.append("b = a + 1")
        if self.kind in ("rellich-p2", "hardy-p2") and p != 2:
            bad.append("p = 2")
        return bad


def _const(v):
    return lambda p: float(v)


_Q_NE_AP = (("Q != a p", lambda n, p, a, b: not math.isclose(2 * n + 2, a * p)),)

_UNCERTAINTY = "uncertainty principle from the Hardy interpolation"
_HARDY_P2 = "consequence of the p = 2 weighted Hardy inequality"
_RELLICH_P2 = "Hardy-Rellich / HPW consequence of the p = 2 Rellich inequality"
_REMARK = "Rellich interpolation with a + b + 1 = 0"

_NAMED = [
    _Template("cor2.3-i", "uncertainty-variant", 2.0, lambda p: -p, lambda p: p, "(Q-1)/p",
              _UNCERTAINTY + ", a + b = 0, a = -p",
              note="printed left weight 1/d^p; parent left weight 1/d^(a+b+1) = 1/d is used"),
    _Template("cor2.3-ii", "uncertainty-variant", 2.0, lambda p: -p, lambda p: p - 1, "Q/p",
              _UNCERTAINTY + ", a + b + 1 = 0, a = -p"),
    _Template("cor2.3-iii", "uncertainty-variant", 2.0, _const(0), _const(-1), "Q/p",
              _UNCERTAINTY + ", a + b + 1 = 0, a = 0"),
    _Template("cor2.3-iv", "uncertainty-variant", 2.0, _const(-2), _const(1), "Q/p",
              _UNCERTAINTY + ", a + b + 1 = 0, a = -2",
              note="printed second weight 1/d^p; parent weight 1/d^(bq) = 1/d^q is used"),
    _Template("cor2.3-v", "uncertainty-variant", 2.0, _const(1), _const(-2), "Q/p",
              _UNCERTAINTY + ", a + b + 1 = 0, a = 1"),
    _Template("cor2.3-vi", "uncertainty-variant", 2.0, _const(1), lambda p: p - 2, "|Q-ap|/p",
              _UNCERTAINTY + ", a + b + 1 = a p", extra=_Q_NE_AP),
    _Template("cor3.4-1", "hardy-p2", 2.0, _const(-1), _const(0), "(Q/2-(a+1))^2",
              _HARDY_P2 + ", b = a + 1", squared=True),
    _Template("cor3.4-2", "hardy-p2", 2.0, _const(0.5), _const(-0.5), "(Q/2-(b+1))^2",
              _HARDY_P2 + ", a = b + 1",
              note="printed constant is squared against a square-root right side; "
                   "the parent constant |Q/2-(b+1)| is used"),
    _Template("cor3.4-3", "hardy-p2", 2.0, _const(0), _const(1), "((Q-2)/2)^2",
              _HARDY_P2 + ", a = 0, b = 1", squared=True),
    _Template("cor3.4-4", "hardy-p2", 2.0, _const(1), _const(0), "(Q-2)/2",
              _HARDY_P2 + ", a = 1, b = 0"),
    _Template("cor3.4-5", "hardy-p2", 2.0, _const(0), _const(-1), "Q/2",
              _HARDY_P2 + ", b = -(a + 1)"),
    _Template("cor3.4-6", "hardy-p2", 2.0, _const(-1), _const(1), "(Q-1)/2",
              _HARDY_P2 + ", a = -1, b = 1"),
    _Template("cor3.4-7", "hardy-p2", 2.0, _const(0), _const(0), "(Q-1)/2",
              _HARDY_P2 + ", a = b = 0"),
    _Template("cor3.4-8", "hardy-p2", 2.0, _const(1), _const(-1), "(Q-1)/2",
              _HARDY_P2 + ", a = 1, b = -1"),
    _Template("cor3.4-9", "hardy-p2", 2.0, _const(-2), _const(1), "Q/2",
              _HARDY_P2 + ", a = -(b + 1)"),
    _Template("cor3.6-1", "rellich-p2", 2.0, _const(-1), _const(0), "|Q+2a|^2/4",
              _RELLICH_P2 + ", b = a + 1", squared=True),
    _Template("cor3.6-2", "rellich-p2", 2.0, _const(0), _const(-1), "(Q-2)/2",
              _RELLICH_P2 + ", b = -(a + 1)"),
    _Template("cor3.6-3", "rellich-p2", 2.0, _const(1), _const(-1), "(Q-1)/2",
              _RELLICH_P2 + ", a = 1, b = -1"),
    _Template("cor3.6-4", "rellich-p2", 2.0, _const(0), _const(0), "(Q-1)/2",
              _RELLICH_P2 + ", a = b = 0",
              note="printed left integrand |f|^2; the parent |grad_H f|^2 is used"),
    _Template("cor3.6-5", "rellich-p2", 2.0, _const(0), _const(1), "(Q/2)^2",
              _RELLICH_P2 + ", a = 0, b = 1", squared=True),
    _Template("cor3.6-6", "rellich-p2", 2.0, _const(1), _const(0), "Q/2",
              _RELLICH_P2 + ", a = 1, b = 0",
              note="printed left integrand grad_H |f|^2; the parent |grad_H f|^2 is used"),
    _Template("rem2.6-i", "rellich-interp", 3.0, _const(0), _const(-1), "(Q-p)/p",
              _REMARK + ", a = 0, b = -1"),
    _Template("rem2.6-ii-p2", "rellich-interp", 2.0, _const(-1), _const(0), "((Q-2)/2)^2",
              _REMARK + ", a = -1, b = 0, p = 2", squared=True),
    _Template("rem2.6-iii", "rellich-interp", 3.0, _const(1), _const(-2), "(Q-p)/p",
              _REMARK + ", a = 1, b = -2"),
    _Template("rem2.6-iv", "rellich-interp", 3.0, _const(-2), _const(1), "(Q-p)/p",
              _REMARK + ", a = -2, b = 1"),
]


def _base_templates(n: int):
    Q = 2 * n + 2
    out = []
    for p in (1.5, 2.0, 3.0):
        for a, b in ((0, 0), (0, 1), (1, -2)):
            if 1 < p < Q and not math.isclose(Q, 1 + a + b):
                out.append(_Template(f"thm2.1-p{p:g}-a{a:g}-b{b:g}", "hardy-interp", p,
                                     _const(a), _const(b), "|Q-1-(a+b)|/p",
                                     "weighted Hardy interpolation"))
    out.append(_Template("cor2.2-hardy", "hardy", 2.0, _const(0), lambda p: p - 1,
                         "((Q-p)/p)^p", "sharp weighted Hardy inequality"))
    out.append(_Template("cor2.2-hpw", "hpw", 2.0, _const(0), lambda p: p - 1, "(Q-p)/p",
                         "HPW uncertainty principle"))
    grid = range(-2, 3)
    for a in grid:
        for b in grid:
            if a + b + 1 != Q:
                out.append(_Template(f"lem3.3-a{a}-b{b}", "hardy-p2", 2.0, _const(a), _const(b),
                                     "|Q-(a+b+1)|/2", "weighted Hardy inequality (p = 2)"))
    for a in grid:
        for b in grid:
            if a + b - 1 != Q:
                out.append(_Template(f"lem3.5-a{a}-b{b}", "rellich-p2", 2.0, _const(a), _const(b),
                                     "|Q+a+b-1|/2", "weighted Rellich-type inequality (p = 2)"))
    out.append(_Template("thm2.4-p2-a1-b-2", "rellich-interp", 2.0, _const(1), _const(-2),
                         "(Q-p+(a+b+1)(p-1))/p", "Rellich-type interpolation"))
    out.append(_Template("thm2.4-p3-a0-b-1.25", "rellich-interp", 3.0, _const(0), _const(-1.25),
                         "(Q-p+(a+b+1)(p-1))/p", "Rellich-type interpolation"))
    return out


def _templates(n: int) -> dict:
    return {t.id: t for t in _base_templates(n) + _NAMED}


def catalog_ids(n: int = 1, named_only: bool = False) -> list:
    if named_only:
        return [t.id for t in _NAMED]
    return list(_templates(n))


def get_case(case_id: str, n: int = 1, p=None, a=None, b=None) -> InequalityCase:
    """Instantiate a catalog entry, optionally overriding ``p``, ``a`` or ``b``."""
    try:
        tpl = _templates(n)[case_id]
    except KeyError:
        raise CatalogError(case_id) from None
    return tpl.build(n, p, a, b)


def case_violations(case_id: str, n: int = 1, p=None, a=None, b=None) -> list:
    """Violated predicates for a catalog entry at overridden parameters."""
    try:
        tpl = _templates(n)[case_id]
    except KeyError:
        raise CatalogError(case_id) from None
    return tpl.violations(n, p, a, b)


def case_note(case_id: str, n: int = 1) -> str:
    return _templates(n)[case_id].note


def named_catalog(n: int = 1) -> list:
    """The 25 named special cases (6 + 9 + 6 + 4)."""
    return [t.build(n) for t in _NAMED]


def catalog(n: int = 1) -> list:
    """Every shipped entry: parameter grids followed by the named special cases."""
    return [t.build(n) for t in _templates(n).values()]


def evaluate_named_case(case_id: str, f: ScalarField, spec: QuadratureSpec) -> VerificationReport:
    return evaluate_case(get_case(case_id, spec.n), f, spec)


def manifest_csv(n: int = 1) -> str:
    """One record per entry: id, kind, p, a, b, constant formula, constant value, anchor."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["id", "kind", "p", "a", "b", "constant_formula", "constant", "form", "anchor"])
    for c in catalog(n):
        w.writerow([c.id, c.kind, f"{c.p:.12g}", f"{c.a:.12g}", f"{c.b:.12g}",
                    c.constant_formula, f"{c.constant:.12g}", c.form, c.anchor])
    return buf.getvalue()
