"""Table-entry catalog, verification reports and timing benchmarks.

A catalog is a JSON document (``"version": 1``) listing entries that reduce to
combinations of P_n(a) and Q_n(a). See ``docs/catalog.md`` for the schema. All
rationals are written as strings such as ``"1/2"``; floats are rejected.
"""

from __future__ import annotations

import json
import logging
import re
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Any, Iterable, Mapping

from .exact_core import ClosedForm, ExactValue, LaurentPoly
from .integral_families import integral_p, integral_q
from .quadrature import IntegrandSpec, integrate
from .recurrences import gr_3_351_1
from .special_numerics import DomainError, SingularityError, context, eval_closedform, eval_exact

log = logging.getLogger(__name__)

CATALOG_VERSION = 1
FAMILIES = ("P", "Q", "combo", "interval")
DEFAULT_PRECISION = 40
DEFAULT_N_MAX = 10
DEFAULT_A_VALUES = (Fraction(1, 2), Fraction(1), Fraction(2), Fraction(10))
PASS_SLACK_DIGITS = 5


class CatalogError(ValueError):
    pass


# -- small parsers ------------------------------------------------------------

_RATIONAL = re.compile(r"^[+-]?\d+(/\d+)?$")
_AFFINE_TERM = re.compile(r"([+-]?)\s*(\d+(?:/\d+)?)?\s*(\*?\s*([a-z]))?")


def parse_rational(value, where: str) -> Fraction:
    if isinstance(value, bool) or isinstance(value, float):
        raise CatalogError(f"{where}: expected a rational string like \"1/2\", got {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str) and _RATIONAL.match(value.strip()):
        return Fraction(value.strip())
    raise CatalogError(f"{where}: not a rational: {value!r}")


@dataclass(frozen=True)
class Affine:
    """``const + coef * var`` for a single named variable."""

    const: Fraction
    coef: Fraction = Fraction(0)
    var: str | None = None

    def __call__(self, env: Mapping[str, Fraction | None]) -> Fraction:
        if not self.coef:
            return self.const
        value = env.get(self.var)
        if value is None:
            raise CatalogError(f"parameter {self.var!r} is required")
        return self.const + self.coef * value

    def variables(self) -> set[str]:
        return {self.var} if self.coef else set()


def parse_affine(value, where: str, allowed: Iterable[str]) -> Affine:
    """Parse ``"n+1"``, ``"-a"``, ``"2*n"``, ``"1/2"`` and the like."""
    if isinstance(value, int) and not isinstance(value, bool):
        return Affine(Fraction(value))
    if not isinstance(value, str) or not value.strip():
        raise CatalogError(f"{where}: expected an expression string, got {value!r}")
    text = value.replace(" ", "")
    const, coef, var = Fraction(0), Fraction(0), None
    pos = 0
    while pos < len(text):
        m = _AFFINE_TERM.match(text, pos)
        if not m or m.end() == pos or (pos and not m.group(1)):
            raise CatalogError(f"{where}: cannot parse {value!r}")
        sign = -1 if m.group(1) == "-" else 1
        num = Fraction(m.group(2)) if m.group(2) else None
        name = m.group(4)
        if name is None:
            if num is None:
                raise CatalogError(f"{where}: cannot parse {value!r}")
            const += sign * num
        else:
            if name not in allowed:
                raise CatalogError(f"{where}: unknown variable {name!r} in {value!r}")
            if var is not None and var != name:
                raise CatalogError(f"{where}: only one variable allowed in {value!r}")
            var = name
            coef += sign * (num if num is not None else 1)
        pos = m.end()
    return Affine(const, coef, var)


def _parse_laurent(obj, where: str) -> dict[int, Affine]:
    if not isinstance(obj, dict):
        raise CatalogError(f"{where}: expected an object mapping exponents to coefficients")
    out = {}
    for key, val in obj.items():
        try:
            exp = int(key)
        except ValueError:
            raise CatalogError(f"{where}: exponent {key!r} is not an integer") from None
        out[exp] = parse_affine(val, f"{where}[{key}]", ("n",))
    return out


def _laurent(template: Mapping[int, Affine], env) -> LaurentPoly:
    return LaurentPoly({k: v(env) for k, v in template.items()})


# -- catalog entries -------------------------------------------------------------

@dataclass(frozen=True)
class ComboTerm:
    coeff: Mapping[int, Affine]
    family: str
    n: Affine


@dataclass(frozen=True)
class IntegrandTerm:
    coeff: Mapping[int, Affine]
    n: Affine
    a: Affine
    log: str | None


@dataclass(frozen=True)
class TableEntry:
    id: str
    family: str
    params: Mapping[str, Fraction]
    rhs_description: str = ""
    sweep: tuple[str, ...] = ()
    combo: tuple[ComboTerm, ...] = ()
    integrand: tuple[IntegrandTerm, ...] = ()
    rhs: Mapping[str, Any] | None = None
    scale_exp: Fraction = Fraction(0)

    def needs(self) -> set[str]:
        if self.family in ("P", "Q"):
            return {"n", "a"}
        if self.family == "interval":
            return {"n", "a", "u"}
        needed = {"a"}
        for term in self.combo:
            needed |= term.n.variables()
            for c in term.coeff.values():
                needed |= c.variables()
        for term in self.integrand:
            needed |= term.n.variables() | term.a.variables()
        return needed


def _parse_combo(items, where: str) -> tuple[ComboTerm, ...]:
    if not isinstance(items, list) or not items:
        raise CatalogError(f"{where}: expected a non-empty list")
    terms = []
    for i, item in enumerate(items):
        w = f"{where}[{i}]"
        if not isinstance(item, dict):
            raise CatalogError(f"{w}: expected an object")
        fam = item.get("family")
        if fam not in ("P", "Q"):
            raise CatalogError(f"{w}.family: must be \"P\" or \"Q\", got {fam!r}")
        if "n" not in item:
            raise CatalogError(f"{w}: missing field \"n\"")
        terms.append(ComboTerm(_parse_laurent(item.get("coeff", {"0": "1"}), f"{w}.coeff"), fam,
                               parse_affine(item["n"], f"{w}.n", ("n",))))
    return tuple(terms)


def _parse_integrand(items, where: str) -> tuple[IntegrandTerm, ...]:
    if not isinstance(items, list) or not items:
        raise CatalogError(f"{where}: expected a non-empty list")
    terms = []
    for i, item in enumerate(items):
        w = f"{where}[{i}]"
        for req in ("n", "a"):
            if req not in item:
                raise CatalogError(f"{w}: missing field {req!r}")
        logarg = item.get("log")
        if logarg not in (None, "x", "1-x"):
            raise CatalogError(f"{w}.log: must be null, \"x\" or \"1-x\"")
        terms.append(IntegrandTerm(_parse_laurent(item.get("coeff", {"0": "1"}), f"{w}.coeff"),
                                   parse_affine(item["n"], f"{w}.n", ("n",)),
                                   parse_affine(item["a"], f"{w}.a", ("a",)), logarg))
    return tuple(terms)


def _parse_rhs(obj, where: str):
    if obj is None:
        return None
    if not isinstance(obj, dict) or len(obj) != 1:
        raise CatalogError(f"{where}: expected exactly one of closed_form, combo, exact")
    kind, body = next(iter(obj.items()))
    if kind == "closed_form":
        extra = set(body) - {"r0", "r1", "r2"}
        if extra:
            raise CatalogError(f"{where}.closed_form: unknown components {sorted(extra)}")
        return {"closed_form": {k: _parse_laurent(v, f"{where}.closed_form.{k}") for k, v in body.items()}}
    if kind == "combo":
        return {"combo": _parse_combo(body, f"{where}.combo")}
    if kind == "exact":
        exps = body.get("exp", {})
        return {"exact": {parse_rational(k, f"{where}.exact.exp key"): parse_rational(v, f"{where}.exact.exp[{k}]")
                          for k, v in exps.items()}}
    raise CatalogError(f"{where}: unknown rhs kind {kind!r}")


def parse_entry(obj, index: int) -> TableEntry:
    where = f"entries[{index}]"
    if not isinstance(obj, dict):
        raise CatalogError(f"{where}: expected an object")
    entry_id = obj.get("id")
    if not isinstance(entry_id, str) or not entry_id:
        raise CatalogError(f"{where}: missing field \"id\"")
    where = f"{where} ({entry_id})"
    family = obj.get("family")
    if family not in FAMILIES:
        raise CatalogError(f"{where}.family: must be one of {FAMILIES}, got {family!r}")
    raw_params = obj.get("params", {})
    if not isinstance(raw_params, dict):
        raise CatalogError(f"{where}.params: expected an object")
    params = {k: parse_rational(v, f"{where}.params.{k}") for k, v in raw_params.items()}
    sweep = obj.get("sweep", [])
    if not isinstance(sweep, list) or any(s not in ("n", "a") for s in sweep):
        raise CatalogError(f"{where}.sweep: must be a list drawn from [\"n\", \"a\"]")
    combo = _parse_combo(obj["combo"], f"{where}.combo") if "combo" in obj else ()
    if family == "combo" and not combo:
        raise CatalogError(f"{where}: family combo requires field \"combo\"")
    integrand = _parse_integrand(obj["integrand"], f"{where}.integrand") if "integrand" in obj else ()
    entry = TableEntry(
        id=entry_id,
        family=family,
        params=params,
        rhs_description=str(obj.get("rhs_description", "")),
        sweep=tuple(sweep),
        combo=combo,
        integrand=integrand,
        rhs=_parse_rhs(obj.get("rhs"), f"{where}.rhs"),
        scale_exp=parse_rational(obj.get("scale_exp", 0), f"{where}.scale_exp"),
    )
    for name in sorted(entry.needs()):
        if name not in params and name not in entry.sweep:
            if name == "u" and family == "interval":
                continue   # defaults to 1
            raise CatalogError(f"{where}: missing parameter {name!r} (give it in params or sweep)")
    if "n" in params and (params["n"].denominator != 1 or params["n"] < 0):
        raise CatalogError(f"{where}.params.n: must be a non-negative integer")
    return entry


def parse_catalog(text: str, source: str = "<catalog>") -> list[TableEntry]:
    if not text.strip():
        log.warning("catalog %s is empty", source)
        return []
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CatalogError(f"{source}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise CatalogError(f"{source}: top level must be an object")
    if doc.get("version") != CATALOG_VERSION:
        raise CatalogError(f"{source}: unsupported or missing version {doc.get('version')!r}")
    raw = doc.get("entries", [])
    if not isinstance(raw, list):
        raise CatalogError(f"{source}: \"entries\" must be a list")
    entries, seen = [], set()
    for i, obj in enumerate(raw):
        entry = parse_entry(obj, i)
        if entry.id in seen:
            raise CatalogError(f"{source}: duplicate id {entry.id!r}")
        seen.add(entry.id)
        entries.append(entry)
    if not entries:
        log.warning("catalog %s has no entries", source)
    return entries


def default_catalog_text() -> str:
    return resources.files("explogint").joinpath("data/default_catalog.json").read_text(encoding="utf-8")


def load_catalog(path: str | Path | None = None) -> list[TableEntry]:
    """Load and validate a catalog file; ``None`` loads the bundled default."""
    if path is None:
        return parse_catalog(default_catalog_text(), "default catalog")
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise CatalogError(f"{path}: {exc.strerror}") from None
    return parse_catalog(text, str(path))


# -- evaluation of one entry instance ------------------------------------------

def _combo_form(terms: Iterable[ComboTerm], env) -> ClosedForm:
    total = ClosedForm()
    for term in terms:
        n = term.n(env)
        if n.denominator != 1 or n < 0:
            raise CatalogError(f"family index evaluates to {n}")
        fam = integral_p(int(n)) if term.family == "P" else integral_q(int(n))
        total = total + fam * _laurent(term.coeff, env)
    return total


def exact_instance(entry: TableEntry, env) -> tuple[ExactValue, ClosedForm | None, dict[str, bool]]:
    """Exact value, its symbolic form in ``a`` (if any), and the rhs agreement checks."""
    a = env.get("a")
    checks: dict[str, bool] = {}
    if entry.family == "interval":
        n, u = int(env["n"]), env.get("u", Fraction(1))
        pair = gr_3_351_1(n, a, u)
        value = ExactValue({(0, None): pair.rational, (pair.exponent, None): pair.exp_coeff})
        if a != 0:
            checks["u^(n+1) P_n(-au)"] = value == integral_p(n).at(-a * u) * u ** (n + 1)
        return value, None, checks
    if entry.family in ("P", "Q"):
        n = int(env["n"])
        form = integral_p(n) if entry.family == "P" else integral_q(n)
    else:
        form = _combo_form(entry.combo, env)
    if form.r2 and a <= 0:
        raise DomainError(f"G(a) is undefined for a = {a}")
    value = form.at(a).times_exp(entry.scale_exp)
    if entry.rhs:
        kind, body = next(iter(entry.rhs.items()))
        if kind == "closed_form":
            rhs = ClosedForm(*(_laurent(body.get(k, {}), env) for k in ("r0", "r1", "r2")))
            checks["rhs"] = form == rhs
        elif kind == "combo":
            checks["rhs"] = form == _combo_form(body, env)
        else:
            checks["rhs"] = value == ExactValue.exp_poly(body)
    return value, form, checks


def oracle_instance(entry: TableEntry, env, precision: int):
    ctx = context(precision + 10)
    a = env.get("a")
    if entry.family == "interval":
        return integrate(IntegrandSpec(int(env["n"]), -a, 0, env.get("u", Fraction(1))), precision)
    if entry.family in ("P", "Q"):
        return integrate(IntegrandSpec(int(env["n"]), a, 1 if entry.family == "Q" else 0), precision)
    if entry.integrand:
        total = ctx.mpf(0)
        for term in entry.integrand:
            coeff = _laurent(term.coeff, env)(a)
            spec = IntegrandSpec(int(term.n(env)), term.a(env), 0 if term.log is None else 1,
                                 log_of_complement=term.log == "1-x")
            total += ctx.mpf(coeff.numerator) / coeff.denominator * integrate(spec, precision + 5)
        return total
    total = ctx.mpf(0)
    for term in entry.combo:
        coeff = _laurent(term.coeff, env)(a)
        spec = IntegrandSpec(int(term.n(env)), a, 1 if term.family == "Q" else 0)
        total += ctx.mpf(coeff.numerator) / coeff.denominator * integrate(spec, precision + 5)
    return total * ctx.exp(ctx.mpf(entry.scale_exp.numerator) / entry.scale_exp.denominator)


# -- reports ---------------------------------------------------------------------

@dataclass
class VerificationReport:
    id: str
    params: dict[str, str]
    symbolic: str
    value: str | None
    oracle: str | None
    residual: str | None
    precision: int
    status: str
    reason: str = ""
    exact_checks: dict[str, bool] = field(default_factory=dict)
    timing_ms: dict[str, float] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: Mapping) -> VerificationReport:
        return cls(**d)

    def without_timing(self) -> dict:
        d = self.to_dict()
        d.pop("timing_ms")
        return d


def _fmt(x, digits: int) -> str:
    return context(digits).nstr(x, digits, min_fixed=-5, max_fixed=5)


def _instances(entry: TableEntry, a_values, n_max: int):
    ns = range(n_max + 1) if "n" in entry.sweep else [entry.params.get("n")]
    as_ = list(a_values) if "a" in entry.sweep else [entry.params.get("a")]
    for n in ns:
        for a in as_:
            env = dict(entry.params)
            if n is not None:
                env["n"] = Fraction(n)
            if a is not None:
                env["a"] = Fraction(a)
            yield env


def _sort_key(env):
    return (env.get("n", Fraction(-1)), env.get("a", Fraction(0)))


def verify_instance(entry: TableEntry, env, precision: int) -> VerificationReport:
    shown = {k: str(v) for k, v in sorted(env.items())}
    tol_digits = precision - PASS_SLACK_DIGITS
    try:
        t0 = time.perf_counter()
        value, form, checks = exact_instance(entry, env)
        numeric = eval_exact(value, precision)
        t1 = time.perf_counter()
        oracle = oracle_instance(entry, env, precision)
        t2 = time.perf_counter()
    except (DomainError, SingularityError, ZeroDivisionError) as exc:
        return VerificationReport(entry.id, shown, "", None, None, None, precision, "skipped",
                                  reason=f"domain error: {exc}")
    ctx = context(precision + 10)
    residual = abs(ctx.mpf(numeric) - ctx.mpf(oracle))
    ok = residual <= ctx.mpf(10) ** (-tol_digits)
    reason = ""
    if not ok:
        reason = f"residual exceeds 1e-{tol_digits}"
    if not all(checks.values()):
        ok = False
        bad = ", ".join(k for k, v in checks.items() if not v)
        reason = (reason + "; " if reason else "") + f"exact right-hand side mismatch: {bad}"
    symbolic = str(value) if form is None else f"{form}  |  at a={env.get('a')}: {value}"
    return VerificationReport(
        entry.id, shown, symbolic, _fmt(numeric, precision), _fmt(oracle, precision),
        context(precision).nstr(residual, 3), precision, "pass" if ok else "fail", reason, checks,
        {"closed_form": round((t1 - t0) * 1e3, 3), "oracle": round((t2 - t1) * 1e3, 3)},
    )


def _run_one(job):
    entry, env, precision = job
    return verify_instance(entry, env, precision)


def verify(entries: Iterable[TableEntry], a_values=DEFAULT_A_VALUES, n_max: int = DEFAULT_N_MAX,
           precision: int = DEFAULT_PRECISION, jobs: int = 1) -> list[VerificationReport]:
    """One report per (entry, parameter combination), ordered by (id, n, a)."""
    if precision < 20:
        raise ValueError("precision must be at least 20 digits")
    work = []
    for entry in sorted(entries, key=lambda e: e.id):
        for env in sorted(_instances(entry, a_values, n_max), key=_sort_key):
            work.append((entry, env, precision))
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_run_one, work))
    return [_run_one(job) for job in work]


# -- benchmark --------------------------------------------------------------------

@dataclass
class BenchRow:
    n: int
    closed_form_median_ms: float
    oracle_median_ms: float
    speedup: float
    low_confidence: bool


def bench(n_max: int, a=Fraction(1), precision: int = DEFAULT_PRECISION, repetitions: int = 5) -> list[BenchRow]:
    """Median wall time of closed-form evaluation vs. quadrature for Q_n(a)."""
    if repetitions < 1:
        raise ValueError("repetitions must be at least 1")
    a = Fraction(a)
    rows = []
    for n in range(n_max + 1):
        form = integral_q(n)
        spec = IntegrandSpec(n, a, 1)
        cf_times, q_times = [], []
        for _ in range(repetitions):
            t0 = time.perf_counter()
            eval_closedform(form, a, precision)
            t1 = time.perf_counter()
            integrate(spec, precision)
            t2 = time.perf_counter()
            cf_times.append((t1 - t0) * 1e3)
            q_times.append((t2 - t1) * 1e3)
        cf, q = statistics.median(cf_times), statistics.median(q_times)
        rows.append(BenchRow(n, round(cf, 4), round(q, 4), round(q / cf, 2) if cf else float("inf"),
                             repetitions == 1))
    return rows
