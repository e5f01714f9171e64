"""Configuration-driven verification runs and parameter sweeps.

Config files are flat ``key = value`` lists with dotted keys, e.g.::

    n = 1
    suites = identities, catalog
    quadrature.tol = 1e-6
    corpus.labels = radial-bump, nonradial-x
    cases.ids = cor2.2-hardy
    cases.p = 2
    output.dir = out

Unknown keys, unknown case ids and unknown corpus labels are usage errors.
"""

from __future__ import annotations

import configparser
import csv
import json
import time
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from . import __version__
from .calculus import check_gauge_identities
from .corpus import ball_corpus, corpus_function, corpus_labels, halfspace_corpus
from .errors import CaseError, ConfigError, ParameterError
from .group import gauge
from .inequalities import case_violations, catalog_ids, evaluate_cases, get_case
from .quadrature import METHODS, QuadratureSpec
from .sharpness import DEFAULT_SCHEDULE, sharpness_schedule
from .vector_fields import (HalfSpaceSpec, divergence_identity, example1_alpha_star,
                            example1_field, verify_ball_hardy, verify_field_inequality,
                            verify_halfspace_hardy, verify_log_hardy)

__all__ = ["RunConfig", "load_config", "parse_config", "run", "emit_sweep", "write_report",
           "IDENTITY_TOLERANCE", "SUITES", "FIELD_LABELS", "CSV_COLUMNS"]

SUITES = ("identities", "catalog", "sharpness", "fields")
FIELD_LABELS = ("radial", "halfspace", "ball", "log")
IDENTITY_TOLERANCE = 1e-6
CSV_COLUMNS = ("id", "function", "lhs", "rhs", "constant", "margin", "lhs_err", "rhs_err", "pass")
SWEEP_COLUMNS = ("case", "function", "param", "value", "p", "a", "b", "status", "violated",
                 "lhs", "rhs", "constant", "margin", "ratio")
_DEFAULT_SHARP = ("cor2.2-hardy", "thm2.1-p2-a0-b0", "thm2.1-p2-a0-b1")


@dataclass
class RunConfig:
    n: int = 1
    suites: tuple = SUITES
    epsilon: float = 0.05
    R_outer: float = 4.0
    tol: float = 1e-6
    method: str = "adaptive-subdivision"
    seed: int = 0
    max_subdivisions: int = 200_000
    corpus: tuple = ()
    cases: tuple = ("all",)
    case_p: Optional[float] = None
    identity_points: int = 200
    sharpness_cases: tuple = _DEFAULT_SHARP
    sharpness_schedule: tuple = DEFAULT_SCHEDULE
    sharpness_xatol: float = 1e-4
    fields: tuple = FIELD_LABELS
    field_p: float = 2.0
    out_dir: str = "out"
    formats: tuple = ("json", "csv")

    def __post_init__(self):
        self.validate()

    def validate(self):
        if self.n < 1:
            raise ConfigError("n must be a positive integer")
        for s in self.suites:
            if s not in SUITES:
                raise ConfigError(f"unknown suite {s!r}; choose from {SUITES}")
        if not self.suites:
            raise ConfigError("no suite selected")
        if self.method not in METHODS:
            raise ConfigError(f"unknown quadrature method {self.method!r}")
        if not self.corpus:
            self.corpus = tuple(corpus_labels(self.n))
        known = set(corpus_labels(self.n))
        for lab in self.corpus:
            if lab not in known:
                raise ConfigError(f"unknown corpus label {lab!r}")
        if not self.cases:
            raise ConfigError("empty case selection")
        ids = set(catalog_ids(self.n))
        for cid in self.case_ids() + list(self.sharpness_cases):
            if cid not in ids:
                raise ConfigError(f"unknown case id {cid!r}")
        if self.case_p is not None:
            for cid in self.case_ids():
                bad = case_violations(cid, self.n, p=self.case_p)
                if bad:
                    raise ConfigError(f"case {cid} at p={self.case_p:g} violates: {'; '.join(bad)}")
        for lab in self.fields:
            if lab not in FIELD_LABELS:
                raise ConfigError(f"unknown field {lab!r}; choose from {FIELD_LABELS}")
        for fmt in self.formats:
            if fmt not in ("json", "csv"):
                raise ConfigError(f"unknown report format {fmt!r}")
        try:
            self.quadrature()
        except ParameterError as exc:
            raise ConfigError(str(exc)) from None

    def case_ids(self) -> list:
        if tuple(self.cases) == ("all",):
            return catalog_ids(self.n)
        return list(self.cases)

    def quadrature(self) -> QuadratureSpec:
        return QuadratureSpec(n=self.n, epsilon=self.epsilon, R_outer=self.R_outer,
                              target_rel_tol=self.tol, method=self.method, seed=self.seed,
                              max_subdivisions=self.max_subdivisions)

    def echo(self) -> dict:
        out = asdict(self)
        return {k: list(v) if isinstance(v, tuple) else v for k, v in out.items()}


# key -> (attribute, parser)
def _list(text):
    return tuple(x.strip() for x in text.split(",") if x.strip())


def _floats(text):
    return tuple(float(x) for x in _list(text))


_KEYS = {
    "n": ("n", int),
    "suites": ("suites", _list),
    "quadrature.epsilon": ("epsilon", float),
    "quadrature.R_outer": ("R_outer", float),
    "quadrature.tol": ("tol", float),
    "quadrature.method": ("method", str),
    "quadrature.seed": ("seed", int),
    "quadrature.max_subdivisions": ("max_subdivisions", int),
    "corpus.labels": ("corpus", _list),
    "cases.ids": ("cases", _list),
    "cases.p": ("case_p", float),
    "identities.points": ("identity_points", int),
    "sharpness.cases": ("sharpness_cases", _list),
    "sharpness.schedule": ("sharpness_schedule", _floats),
    "sharpness.xatol": ("sharpness_xatol", float),
    "fields.labels": ("fields", _list),
    "fields.p": ("field_p", float),
    "output.dir": ("out_dir", str),
    "output.formats": ("formats", _list),
}


def parse_config(text: str) -> RunConfig:
    """Parse the flat dotted-key format (``#`` and ``;`` start comments)."""
    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    parser.optionxform = str
    try:
        parser.read_string("[run]\n" + text)
    except configparser.Error as exc:
        raise ConfigError(f"malformed config: {exc}") from None
    values = {}
    for key, raw in parser["run"].items():
        if key not in _KEYS:
            raise ConfigError(f"unknown config key {key!r}")
        attr, conv = _KEYS[key]
        try:
            values[attr] = conv(raw.strip())
        except ValueError:
            raise ConfigError(f"bad value for {key}: {raw!r}") from None
    return RunConfig(**values)


def load_config(path) -> RunConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    return parse_config(text)


# ---------------------------------------------------------------------------
# suites
# ---------------------------------------------------------------------------

def _identity_points(n, count, seed):
    """Random points with ``0.2 <= d <= 3``, drawn by rejection from a box."""
    rng = np.random.default_rng(seed)
    out = []
    while sum(len(b) for b in out) < count:
        pts = rng.uniform(-3.0, 3.0, size=(4 * count, 2 * n + 1))
        pts[:, -1] *= 3.0
        d = gauge(pts)
        out.append(pts[(d >= 0.2) & (d <= 3.0)])
    return np.concatenate(out)[:count]


def _identities(cfg: RunConfig) -> list:
    rep = check_gauge_identities(_identity_points(cfg.n, cfg.identity_points, cfg.seed))
    return [{"identity": name, "max_residual": val, "tolerance": IDENTITY_TOLERANCE,
             "pass": bool(val <= IDENTITY_TOLERANCE)} for name, val in rep.rows()]


def _catalog(cfg: RunConfig, spec) -> list:
    cases = [get_case(cid, cfg.n, p=cfg.case_p) for cid in cfg.case_ids()]
    rows = []
    for lab in cfg.corpus:
        f = corpus_function(lab, cfg.n)
        rows.extend(r.as_dict() for r in evaluate_cases(cases, f, spec))
    rows.sort(key=lambda r: (r["id"], r["function"]))
    return rows


def _sharpness(cfg: RunConfig) -> list:
    rows = []
    for cid in cfg.sharpness_cases:
        case = get_case(cid, cfg.n)
        res = sharpness_schedule(case, cfg.sharpness_schedule, xatol=cfg.sharpness_xatol)
        ratios = [r.fun for r in res]
        rows.append({
            "case": cid, "constant": case.constant, "widths": list(cfg.sharpness_schedule),
            "ratios": ratios, "ratio": ratios[-1], "flag": res[-1].flag,
            "monotone": all(b <= a for a, b in zip(ratios, ratios[1:])),
            "bound_respected": all(r.bound_respected for r in res),
            "converged": all(r.converged for r in res),
        })
    return rows


def _fields(cfg: RunConfig, spec) -> list:
    rows = []
    p, Q = cfg.field_p, 2 * cfg.n + 2
    funcs = [corpus_function(lab, cfg.n) for lab in cfg.corpus]
    if "radial" in cfg.fields:
        V = example1_field(example1_alpha_star(p, Q), p, cfg.n)
        for f in funcs:
            rep = verify_field_inequality(V, p, f, spec)
            row = rep.as_dict()
            row["chain_ok"] = rep.extras["chain_ok"]
            rows.append(row)
            resid, err, _ = divergence_identity(V, p, f, spec)
            rows.append({"id": f"divergence-identity-{V.label}", "function": f.label,
                         "lhs": resid, "rhs": 0.0, "constant": 1.0, "margin": -abs(resid),
                         "lhs_err": err, "rhs_err": 0.0, "pass": bool(abs(resid) <= err + 1e-12)})
    if "halfspace" in cfg.fields:
        nu = np.zeros(2 * cfg.n + 1)
        nu[0] = 1.0
        hs = HalfSpaceSpec(tuple(nu), 0.0)
        rows.extend(verify_halfspace_hardy(hs, p, f, spec).as_dict() for f in halfspace_corpus(cfg.n))
    if "ball" in cfg.fields:
        rows.extend(verify_ball_hardy(3.0, p, f, spec).as_dict() for f in ball_corpus(cfg.n))
    if "log" in cfg.fields:
        rows.extend(verify_log_hardy(4.0, f, spec).as_dict() for f in ball_corpus(cfg.n))
    return rows


def run(cfg: RunConfig, seed: Optional[int] = None) -> tuple:
    """Execute the selected suites; returns ``(report dict, exit status)``."""
    if seed is not None:
        cfg.seed = int(seed)
    spec = cfg.quadrature()
    report = {"version": __version__, "config": cfg.echo(), "identities": [], "cases": [],
              "sharpness": [], "timing": {}}
    ok = True
    for suite in SUITES:
        if suite not in cfg.suites:
            continue
        t0 = time.perf_counter()
        if suite == "identities":
            report["identities"] = _identities(cfg)
            ok &= all(r["pass"] for r in report["identities"])
        elif suite == "catalog":
            rows = _catalog(cfg, spec)
            report["cases"].extend(rows)
            ok &= all(r["pass"] for r in rows)
        elif suite == "sharpness":
            report["sharpness"] = _sharpness(cfg)
            ok &= all(r["bound_respected"] for r in report["sharpness"])
        else:
            rows = _fields(cfg, spec)
            report["cases"].extend(rows)
            ok &= all(r["pass"] for r in rows)
        report["timing"][suite] = round(time.perf_counter() - t0, 3)
    return report, (0 if ok else 1)


def _fmt(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return f"{v:.12g}"
    return "" if v is None else str(v)


def write_report(report: dict, out_dir, formats=("json", "csv")) -> list:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    if "json" in formats:
        path = out / "report.json"
        path.write_text(json.dumps(report, indent=2, allow_nan=True) + "\n")
        written.append(path)
    if "csv" in formats:
        path = out / "cases.csv"
        with path.open("w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(CSV_COLUMNS)
            for row in report["cases"]:
                w.writerow([_fmt(row[c]) for c in CSV_COLUMNS])
        written.append(path)
    return written


# ---------------------------------------------------------------------------
# sweeps
# ---------------------------------------------------------------------------

SWEEP_PARAMS = ("p", "a", "b", "truncation")


def emit_sweep(case_id: str, param: str, grid, cfg: RunConfig, out_dir=None) -> tuple:
    """Evaluate one catalog entry over a parameter grid and write ``sweep-<id>.csv``.

    ``p``, ``a`` and ``b`` re-instantiate the case on the first configured
    corpus function; inadmissible points are kept as rows marked
    ``excluded`` with the violated predicates.  ``truncation`` runs the
    sharpness schedule over the given log-widths.  Returns ``(path, exit status)``.
    """
    if param not in SWEEP_PARAMS:
        raise ConfigError(f"cannot sweep {param!r}; choose from {SWEEP_PARAMS}")
    if case_id not in catalog_ids(cfg.n):
        raise ConfigError(f"unknown case id {case_id!r}")
    grid = [float(g) for g in grid]
    if not grid:
        raise ConfigError("empty grid")
    spec = cfg.quadrature()
    rows = []
    ok = True
    if param == "truncation":
        case = get_case(case_id, cfg.n)
        for w, res in zip(grid, sharpness_schedule(case, grid, xatol=cfg.sharpness_xatol)):
            rows.append(dict(case=case_id, function="extremal-family", param=param, value=w,
                             p=case.p, a=case.a, b=case.b, status=res.flag, violated="",
                             lhs=None, rhs=None, constant=case.constant, margin=None,
                             ratio=res.fun))
            ok &= res.bound_respected
    else:
        f = corpus_function(cfg.corpus[0], cfg.n)
        for v in grid:
            over = {param: v}
            bad = case_violations(case_id, cfg.n, **over)
            base = get_case(case_id, cfg.n)
            pa = {"p": base.p, "a": base.a, "b": base.b}
            if bad:
                pa[param] = v
                rows.append(dict(case=case_id, function=f.label, param=param, value=v, **pa,
                                 status="excluded", violated="; ".join(bad), lhs=None, rhs=None,
                                 constant=None, margin=None, ratio=None))
                continue
            try:
                case = get_case(case_id, cfg.n, **over)
            except CaseError as exc:
                pa[param] = v
                rows.append(dict(case=case_id, function=f.label, param=param, value=v, **pa,
                                 status="excluded", violated=str(exc), lhs=None, rhs=None,
                                 constant=None, margin=None, ratio=None))
                continue
            rep = evaluate_cases([case], f, spec)[0]
            rows.append(dict(case=case_id, function=f.label, param=param, value=v, p=case.p,
                             a=case.a, b=case.b, status="pass" if rep.passed else "fail",
                             violated="", lhs=rep.lhs, rhs=rep.rhs, constant=rep.constant,
                             margin=rep.margin, ratio=rep.ratio))
            ok &= rep.passed
    out = Path(out_dir or cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    path = out / f"sweep-{case_id}.csv"
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SWEEP_COLUMNS)
        for row in rows:
            w.writerow([_fmt(row[c]) for c in SWEEP_COLUMNS])
    return path, (0 if ok else 1)
