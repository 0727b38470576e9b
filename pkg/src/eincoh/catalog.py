"""Principal-orbit examples: group data, per-family formulas for A, and
regeneration of the example tables with verdicts.

The catalog ships as a versioned JSON resource (``data/catalog.json``).
Single orbits are listed under ``records``; m-indexed families live under
``generators`` with an explicit m-range and regime annotations that say
which verdict is expected on which sub-range.
"""

from __future__ import annotations

import ast
import json
import operator
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction as F
from importlib import resources
from pathlib import Path
from typing import Iterable, Optional

import jsonschema

from .exactpoly import QuadraticSurd, as_rational, exact_cmp, format_rational
from .thresholds import (
    StructuralTriple,
    VerdictTag,
    a1_threshold,
    chi_tilde,
    classify,
    discriminant_and_mu,
    omega_at_0,
    psi,
)

FAMILIES = ("TypeI", "TypeII", "TypeIII", "GeneralizedWallach", "S3OverProduct")
CATALOG_ENV = "EINCOH_CATALOG"


class CatalogError(ValueError):
    """Schema violation or inconsistent catalog content."""


# ---------------------------------------------------------------------------
# per-family formulas
# ---------------------------------------------------------------------------

def _open_unit(name: str, x: F) -> None:
    if not 0 < x < 1:
        raise ValueError(f"{name} must lie in (0, 1), got {format_rational(x)}")


def a_type_one(alpha, c1s, c2s, d1: int, d2: int) -> F:
    alpha, c1s, c2s = as_rational(alpha), as_rational(c1s), as_rational(c2s)
    _open_unit("alpha", alpha)
    if d1 < 2:
        raise ValueError("d1 must be at least 2")
    return (1 - alpha) * alpha * (2 * c1s + 1) / (2 * c2s + 1) ** 2 * F((d2 - 1) ** 2, d1 - 1)


def a_generalized_wallach(a1, d1: int, d2: int) -> F:
    a1 = as_rational(a1)
    if not 0 < a1 < F(1, 2):
        raise ValueError(f"a1 must lie in (0, 1/2), got {format_rational(a1)}")
    if d1 < 2:
        raise ValueError("d1 must be at least 2")
    return a1 * (1 - 2 * a1) * F((d2 - 1) ** 2, d1 - 1)


def a_type_three(alpha, beta, dimM, d2: int) -> F:
    alpha, dimM = as_rational(alpha), as_rational(dimM)
    _open_unit("alpha", alpha)
    if dimM < 0:
        raise ValueError("dim M must be non-negative")
    if dimM == 0:
        beta = F(0)
    else:
        if beta is None:
            raise ValueError("beta is required when dim M > 0")
        beta = as_rational(beta)
        if not 0 <= beta <= 1:
            raise ValueError(f"beta must lie in [0, 1], got {format_rational(beta)}")
    den = (d2 + 2 * dimM * (1 - beta) + 6 * (1 - alpha)) ** 2
    return alpha * (1 - alpha) / den * F(d2 * d2 * (d2 - 1) ** 2, 2)


def a_s3_over_product(alpha, cstar, d1: int, d2: int) -> F:
    alpha, cstar = as_rational(alpha), as_rational(cstar)
    _open_unit("alpha", alpha)
    if cstar < 0:
        raise ValueError("c* must be non-negative")
    if d1 < 2:
        raise ValueError("d1 must be at least 2")
    return 2 * alpha * (1 - alpha) / (1 + 2 * cstar) ** 2 * F((d2 - 1) ** 2, d1 - 1)


def family_A(family: str, params: dict, d1: int, d2: int) -> Optional[F]:
    """A from the family formula, or None when the parameters do not determine it."""
    p = params
    if family == "TypeI" and {"alpha", "c1s", "c2s"} <= p.keys():
        return a_type_one(p["alpha"], p["c1s"], p["c2s"], d1, d2)
    if family == "GeneralizedWallach" and "a1" in p:
        return a_generalized_wallach(p["a1"], d1, d2)
    if family == "TypeIII" and {"alpha", "dimM"} <= p.keys():
        return a_type_three(p["alpha"], p.get("beta"), p["dimM"], d2)
    if family == "S3OverProduct" and {"alpha", "cstar"} <= p.keys():
        return a_s3_over_product(p["alpha"], p["cstar"], d1, d2)
    return None


# ---------------------------------------------------------------------------
# records
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OrbitRecord:
    name: str
    family: str
    groups: tuple[str, str, str]
    d1: int
    d2: int
    params: dict
    A: F
    A_listed: Optional[F] = None
    A_formula: Optional[F] = None
    expected_verdict: Optional[VerdictTag] = None
    table: str = ""
    printed: dict = field(default_factory=dict)
    m: Optional[int] = None

    @property
    def triple(self) -> StructuralTriple:
        return StructuralTriple(self.d1, self.d2, self.A)

    def to_json(self) -> dict:
        out = {"name": self.name, "family": self.family,
               "groups": dict(zip("KHG", self.groups)), "d1": self.d1, "d2": self.d2,
               "params": {k: format_rational(v) for k, v in sorted(self.params.items())},
               "A": format_rational(self.A), "table": self.table}
        if self.expected_verdict is not None:
            out["expected"] = self.expected_verdict.value
        if self.m is not None:
            out["m"] = self.m
        return out


_RATIONAL = {"type": "string", "pattern": r"^\s*-?\d+(\s*/\s*\d+|\.\d+)?\s*$"}
_EXPR = {"type": "string", "minLength": 1}
_GROUPS = {"type": "object", "required": ["K", "H", "G"],
           "properties": {k: {"type": "string"} for k in "KHG"},
           "additionalProperties": False}
_TAGS = [t.value for t in VerdictTag]
_SURD = {"type": "object", "required": ["a", "b", "m"],
         "properties": {"a": _RATIONAL, "b": _RATIONAL, "m": {"type": "integer", "minimum": 1}}}

SCHEMA = {
    "type": "object",
    "required": ["version"],
    "properties": {
        "version": {"const": 1},
        "records": {"type": "array", "items": {
            "type": "object",
            "required": ["name", "family", "groups", "d1", "d2"],
            "properties": {
                "name": {"type": "string", "minLength": 1},
                "family": {"enum": list(FAMILIES)},
                "groups": _GROUPS,
                "d1": {"type": "integer", "minimum": 2},
                "d2": {"type": "integer", "minimum": 2},
                "params": {"type": "object", "additionalProperties": _RATIONAL},
                "A": _RATIONAL,
                "expected": {"enum": _TAGS},
                "table": {"type": "string"},
                "printed": {"type": "object", "additionalProperties": {
                    "oneOf": [_RATIONAL, _SURD]}},
            },
            "additionalProperties": False}},
        "generators": {"type": "array", "items": {
            "type": "object",
            "required": ["name", "family", "groups", "m", "d1", "d2"],
            "properties": {
                "name": {"type": "string", "minLength": 1},
                "family": {"enum": list(FAMILIES)},
                "groups": _GROUPS,
                "m": {"type": "array", "items": {"type": "integer"}, "minItems": 2, "maxItems": 2},
                "d1": _EXPR,
                "d2": _EXPR,
                "params": {"type": "object", "additionalProperties": _EXPR},
                "A": _EXPR,
                "table": {"type": "string"},
                "printed": {"type": "object", "additionalProperties": _EXPR},
                "regimes": {"type": "array", "items": {
                    "type": "object", "required": ["m", "expected"],
                    "properties": {
                        "m": {"type": "array", "items": {"type": "integer"},
                              "minItems": 2, "maxItems": 2},
                        "expected": {"enum": _TAGS}},
                    "additionalProperties": False}},
            },
            "additionalProperties": False}},
    },
    "additionalProperties": False,
}


_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub,
           ast.Mult: operator.mul, ast.Div: operator.truediv}


def eval_expr(expr: str, m: int) -> F:
    """Evaluate an arithmetic expression in the single variable m, exactly."""

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int) \
                and not isinstance(node.value, bool):
            return F(node.value)
        if isinstance(node, ast.Name) and node.id == "m":
            return F(m)
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp):
            if type(node.op) in _BINOPS:
                return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
            if isinstance(node.op, ast.Pow):
                e = ev(node.right)
                if e.denominator != 1 or e < 0:
                    raise CatalogError(f"exponent must be a non-negative integer in {expr!r}")
                return ev(node.left) ** int(e)
        raise CatalogError(f"unsupported syntax in expression {expr!r}")

    try:
        tree = ast.parse(expr, mode="eval")
    except SyntaxError as exc:
        raise CatalogError(f"cannot parse expression {expr!r}") from exc
    try:
        return ev(tree)
    except ZeroDivisionError as exc:
        raise CatalogError(f"division by zero in {expr!r} at m={m}") from exc


def _as_int(v: F, what: str) -> int:
    if v.denominator != 1:
        raise CatalogError(f"{what} is not an integer: {format_rational(v)}")
    return int(v)


def _printed_value(v):
    if isinstance(v, dict):
        return QuadraticSurd(as_rational(v["a"]), as_rational(v["b"]), v["m"])
    return as_rational(v)


def _make_record(raw: dict, *, m: Optional[int] = None, expected=None) -> OrbitRecord:
    d1, d2 = raw["d1"], raw["d2"]
    params = raw.get("params", {})
    if d2 < d1:
        raise CatalogError(f"{raw['name']}: need d2 >= d1")
    try:
        A_formula = family_A(raw["family"], params, d1, d2)
    except ValueError as exc:
        raise CatalogError(f"{raw['name']}: {exc}") from exc
    A_listed = raw.get("A")
    if A_formula is None and A_listed is None:
        raise CatalogError(f"{raw['name']}: A is neither listed nor computable from params")
    A = A_formula if A_formula is not None else A_listed
    if expected is None and raw.get("expected"):
        expected = VerdictTag(raw["expected"])
    g = raw["groups"]
    return OrbitRecord(name=raw["name"], family=raw["family"], groups=(g["K"], g["H"], g["G"]),
                       d1=d1, d2=d2, params=dict(params), A=A, A_listed=A_listed,
                       A_formula=A_formula, expected_verdict=expected,
                       table=raw.get("table", ""), printed=dict(raw.get("printed", {})), m=m)


def _record_from_json(raw: dict) -> OrbitRecord:
    conv = dict(raw)
    conv["params"] = {k: as_rational(v) for k, v in raw.get("params", {}).items()}
    if "A" in raw:
        conv["A"] = as_rational(raw["A"])
    conv["printed"] = {k: _printed_value(v) for k, v in raw.get("printed", {}).items()}
    return _make_record(conv)


def expand_generator(gen: dict) -> list[OrbitRecord]:
    lo, hi = gen["m"]
    if lo > hi:
        raise CatalogError(f"{gen['name']}: empty m-range")
    out = []
    for m in range(lo, hi + 1):
        expected = None
        for reg in gen.get("regimes", []):
            if reg["m"][0] <= m <= reg["m"][1]:
                expected = VerdictTag(reg["expected"])
        sub = lambda s: s.replace("{m}", str(m))
        raw = {"name": sub(gen["name"]), "family": gen["family"],
               "groups": {k: sub(v) for k, v in gen["groups"].items()},
               "d1": _as_int(eval_expr(gen["d1"], m), "d1"),
               "d2": _as_int(eval_expr(gen["d2"], m), "d2"),
               "params": {k: eval_expr(v, m) for k, v in gen.get("params", {}).items()},
               "printed": {k: eval_expr(v, m) for k, v in gen.get("printed", {}).items()},
               "table": gen.get("table", "")}
        if "A" in gen:
            raw["A"] = eval_expr(gen["A"], m)
        out.append(_make_record(raw, m=m, expected=expected))
    return out


def parse_catalog(doc) -> list[OrbitRecord]:
    try:
        jsonschema.validate(doc, SCHEMA)
    except jsonschema.ValidationError as exc:
        raise CatalogError(f"schema violation: {exc.message}") from exc
    records = [_record_from_json(r) for r in doc.get("records", [])]
    for gen in doc.get("generators", []):
        records.extend(expand_generator(gen))
    if not records:
        raise CatalogError("catalog contains no records")
    names = [r.name for r in records]
    dup = sorted({x for x in names if names.count(x) > 1})
    if dup:
        raise CatalogError(f"duplicate record names: {dup}")
    return records


def catalog_path() -> Optional[Path]:
    env = os.environ.get(CATALOG_ENV)
    return Path(env) if env else None


def load_catalog(path: Optional[os.PathLike] = None) -> list[OrbitRecord]:
    """Load and validate a catalog. Without a path, EINCOH_CATALOG and then
    the shipped resource are used."""
    path = Path(path) if path is not None else catalog_path()
    try:
        if path is None:
            text = resources.files("eincoh").joinpath("data/catalog.json").read_text("utf-8")
        else:
            text = Path(path).read_text("utf-8")
    except OSError as exc:
        raise CatalogError(f"cannot read catalog: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CatalogError(f"catalog is not valid JSON: {exc}") from exc
    return parse_catalog(doc)


def builtin_catalog() -> list[OrbitRecord]:
    text = resources.files("eincoh").joinpath("data/catalog.json").read_text("utf-8")
    return parse_catalog(json.loads(text))


# ---------------------------------------------------------------------------
# checking
# ---------------------------------------------------------------------------

_PRINTED_CHECKS = {
    "psi": lambda r: psi(r.d1, r.d2),
    "a1": lambda r: a1_threshold(r.d1, r.d2),
    "a1_surd": lambda r: a1_threshold(r.d1, r.d2),
    "a1_bound": lambda r: omega_at_0(r.d1, r.d2),
    "chi_base": lambda r: F(r.d2 * (r.d2 - 1) ** 2, (r.d2 + 8) ** 2),
    "delta": lambda r: discriminant_and_mu(r.triple).delta,
}


@dataclass(frozen=True)
class RecordCheck:
    name: str
    triple: StructuralTriple
    verdict: VerdictTag
    expected: Optional[VerdictTag]
    problems: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.problems

    def to_json(self) -> dict:
        return {"name": self.name, "triple": str(self.triple), "verdict": self.verdict.value,
                "expected": None if self.expected is None else self.expected.value,
                "ok": self.ok, "problems": list(self.problems)}


def check_record(rec: OrbitRecord) -> RecordCheck:
    problems = []
    if rec.A_listed is not None and rec.A_formula is not None and rec.A_listed != rec.A_formula:
        problems.append(f"A from formula {format_rational(rec.A_formula)} "
                        f"!= listed {format_rational(rec.A_listed)}")
    for key, want in sorted(rec.printed.items()):
        fn = _PRINTED_CHECKS.get(key)
        if fn is None:
            problems.append(f"unknown printed quantity {key!r}")
            continue
        got = fn(rec)
        if exact_cmp(got, want) != 0:
            problems.append(f"{key}: computed {got} != printed {want}")
    verdict = classify(rec.triple).tag
    if rec.expected_verdict is not None and verdict != rec.expected_verdict:
        problems.append(f"verdict {verdict.value} != expected {rec.expected_verdict.value}")
    return RecordCheck(rec.name, rec.triple, verdict, rec.expected_verdict, tuple(problems))


def check_catalog(records: Iterable[OrbitRecord], workers: int = 1) -> list[RecordCheck]:
    records = list(records)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(check_record, records))
    return [check_record(r) for r in records]


def twistor_identity_holds(rec: OrbitRecord) -> bool:
    """For twistor spaces over Wolf spaces A equals chi_tilde(2, d2)."""
    return a_type_one(rec.params["alpha"], F(1, 2), F(1, 2), 2, rec.d2) == chi_tilde(2, rec.d2)


# ---------------------------------------------------------------------------
# tables
# ---------------------------------------------------------------------------

TABLE_TITLES = {
    "table1": "Twistor spaces over Wolf spaces",
    "table2": "Two-summands non-existence (A >= Psi)",
    "table3": "Indeterminable case",
    "table4": "Type II orbits",
    "remark": "Degenerate discriminant",
    "konishi": "Konishi bundles over Wolf spaces",
    "table9": "Type III orbits over strongly irreducible spaces",
    "table5": "Generalized Wallach spaces",
    "s3_over_product": "S3-bundles over products",
}

_PARAM_ORDER = ("alpha", "beta", "c1s", "c2s", "cstar", "a1", "dimM")


def _render(rows: list[list[str]]) -> str:
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in rows]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


def emit_tables(records: Iterable[OrbitRecord]) -> dict[str, str]:
    """Render one aligned text table per table tag, keyed by file name."""
    groups: dict[str, list[OrbitRecord]] = {}
    for r in records:
        groups.setdefault(r.table or "other", []).append(r)
    out = {}
    for tag, recs in groups.items():
        rows = [["K", "H", "G", "d1", "d2", "params", "A", "Psi", "A1", "verdict", "expected"]]
        for r in recs:
            params = " ".join(f"{k}={format_rational(r.params[k])}"
                              for k in _PARAM_ORDER if k in r.params)
            pv = "-" if r.d1 == 2 and r.d2 <= 4 else format_rational(psi(r.d1, r.d2))
            rows.append([*r.groups, str(r.d1), str(r.d2), params or "-",
                         format_rational(r.A), pv, str(a1_threshold(r.d1, r.d2)),
                         classify(r.triple).tag.value,
                         r.expected_verdict.value if r.expected_verdict else "-"])
        title = TABLE_TITLES.get(tag, tag)
        out[f"{tag}.txt"] = f"# {title}\n\n" + _render(rows)
    return out


def write_tables(records: Iterable[OrbitRecord], outdir: os.PathLike) -> list[Path]:
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    written = []
    for fname, text in sorted(emit_tables(records).items()):
        p = outdir / fname
        p.write_text(text, encoding="utf-8")
        written.append(p)
    return written
