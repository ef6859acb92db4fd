"""File formats, validation, and deterministic report emission.

Every document is a JSON object whose ``schema`` field names its kind, e.g.
``"hoinv/action@1"``. Rationals are always written as ``"num/den"``.
"""
from __future__ import annotations

import json
import math
import sys
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any

from hoinv import __version__
from hoinv.comb import DeltaComb, PolyExpSum
from hoinv.errors import KindMismatchError, MalformedInputError, MissingInputError, OutputError
from hoinv.invariants import ActionSpec, PresentationSpec, parse_word
from hoinv.linalg import RationalMatrix, format_rational
from hoinv.modular import QExpansion

KINDS = ("action", "presentation", "subgroup", "polyexp", "comb", "qexp", "report")
SIG_DIGITS = 12


def schema_name(kind: str) -> str:
    return f"hoinv/{kind}@1"


def read_document(path) -> dict:
    p = Path(path)
    if not p.is_file():
        raise MissingInputError(f"input file not found: {path}")
    try:
        data = json.loads(p.read_text())
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise MalformedInputError(f"{path}: not valid JSON ({exc})") from exc
    if not isinstance(data, dict):
        raise MalformedInputError(f"{path}: top level must be a JSON object")
    return data


def document_kind(doc: dict) -> str:
    schema = doc.get("schema")
    if not isinstance(schema, str) or not schema.startswith("hoinv/") or "@" not in schema:
        raise MalformedInputError("document does not declare a 'schema' of the form hoinv/<kind>@<version>")
    kind, version = schema[len("hoinv/"):].split("@", 1)
    if kind not in KINDS:
        raise MalformedInputError(f"unknown document kind {kind!r}")
    if version != "1":
        raise MalformedInputError(f"unsupported schema version {version!r} for {kind}")
    return kind


def _require(doc: dict, key: str):
    if key not in doc:
        raise MalformedInputError(f"missing field {key!r}")
    return doc[key]


def action_from_doc(doc: dict) -> ActionSpec:
    dim = _require(doc, "dimension")
    gens = _require(doc, "generators")
    if not isinstance(gens, dict) or not gens:
        raise MalformedInputError("field 'generators' must be a non-empty object label -> matrix")
    items = []
    for label, rows in gens.items():
        if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
            raise MalformedInputError(f"field 'generators.{label}' must be a list of rows")
        try:
            m = RationalMatrix.from_rows(rows, dim)
        except MalformedInputError as exc:
            raise MalformedInputError(f"field 'generators.{label}': {exc}") from exc
        items.append((label, m))
    labels = [l for l, _ in items]
    words = doc.get("parabolic_words", [])
    if not isinstance(words, list):
        raise MalformedInputError("field 'parabolic_words' must be a list")
    parsed = tuple(parse_word(w, labels) for w in words)
    depth = doc.get("closure_depth", 2)
    if not isinstance(depth, int) or isinstance(depth, bool):
        raise MalformedInputError("field 'closure_depth' must be an integer")
    return ActionSpec(dim, tuple(items), parsed, depth)


def action_to_doc(a: ActionSpec) -> dict:
    from hoinv.invariants import format_word

    return {
        "schema": schema_name("action"),
        "dimension": a.dimension,
        "generators": {l: m.to_strings() for l, m in a.generators},
        "parabolic_words": [format_word(w) for w in a.parabolic_words],
        "closure_depth": a.closure_depth,
    }


def presentation_from_doc(doc: dict) -> PresentationSpec:
    labels = _require(doc, "generators")
    if not isinstance(labels, list) or not all(isinstance(l, str) for l in labels):
        raise MalformedInputError("field 'generators' must be a list of labels")
    return PresentationSpec.build(labels, doc.get("relators", []), doc.get("parabolic_words", []))


def subgroup_from_doc(doc: dict) -> list:
    words = _require(doc, "words")
    if not isinstance(words, list) or not words:
        raise MalformedInputError("field 'words' must be a non-empty list")
    return words


def qexp_from_doc(doc: dict) -> QExpansion:
    coeffs = _require(doc, "coefficients")
    if not isinstance(coeffs, list) or not coeffs or not all(isinstance(a, int) for a in coeffs):
        raise MalformedInputError("field 'coefficients' must be a non-empty list of integers")
    return QExpansion(doc.get("weight", 2), doc.get("level", 1), tuple(coeffs), doc.get("constant_term", 0))


def family_to_doc(x) -> dict:
    kind = "polyexp" if isinstance(x, PolyExpSum) else "comb"
    return {"schema": schema_name(kind), "terms": x.to_json()}


def from_doc(doc: dict, kind: str):
    declared = document_kind(doc)
    if declared != kind:
        raise KindMismatchError(f"expected a {kind} document, got {declared}")
    if kind == "action":
        return action_from_doc(doc)
    if kind == "presentation":
        return presentation_from_doc(doc)
    if kind == "subgroup":
        return subgroup_from_doc(doc)
    if kind == "polyexp":
        return PolyExpSum.from_json(doc.get("terms", {}))
    if kind == "comb":
        return DeltaComb.from_json(doc.get("terms", {}))
    if kind == "qexp":
        return qexp_from_doc(doc)
    return Report.from_dict(doc)


def parse_inputs(path, kind: str):
    """Load and validate a document of the given kind.

    Missing files raise exit code 2, kind mismatches 3, anything malformed 4;
    the message names the first offending field.
    """
    if kind not in KINDS:
        raise ValueError(f"unknown kind {kind!r}")
    return from_doc(read_document(path), kind)


def jsonable(x: Any) -> Any:
    """Normalize a value into plain JSON types, deterministically.

    Fractions become ``"num/den"``, floats are rounded to 12 significant
    digits, complex numbers become ``[re, im]``.
    """
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, int):
        return int(x)
    if isinstance(x, Fraction):
        return format_rational(x)
    if isinstance(x, complex):
        return [jsonable(x.real), jsonable(x.imag)]
    if isinstance(x, float):
        if not math.isfinite(x):
            return repr(x)
        r = float(f"{x:.{SIG_DIGITS}g}")
        return 0.0 if r == 0 else r
    if hasattr(x, "item") and callable(x.item):  # numpy scalar
        return jsonable(x.item())
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    raise TypeError(f"cannot serialize {type(x).__name__}")


@dataclass
class RunConfig:
    command: str
    paths: dict[str, str] = field(default_factory=dict)
    out: str | None = None
    tol: float | None = None
    max_order: int | None = None
    closure_depth: int | None = None
    truncation: int | None = None
    samples: int | None = None
    genus: int | None = None
    level: int | None = None
    seed: int = 0

    def __post_init__(self):
        if self.tol is not None and not self.tol > 0:
            raise MalformedInputError("--tol must be positive")
        for name in ("max_order", "closure_depth", "truncation", "samples", "genus", "level"):
            v = getattr(self, name)
            if v is not None and v < 0:
                raise MalformedInputError(f"--{name.replace('_', '-')} must be non-negative")
        if self.truncation is not None and self.truncation > 100_000:
            raise MalformedInputError("--truncation must be at most 100000")
        if self.max_order is not None and self.max_order > 10_000:
            raise MalformedInputError("--max-order must be at most 10000")

    def to_dict(self) -> dict:
        # the output location is not part of the computation
        return {k: v for k, v in asdict(self).items() if k != "out" and v is not None and v != {}}

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        return cls(**d)


@dataclass
class Check:
    name: str
    values: dict
    passed: bool

    def __post_init__(self):
        self.values = jsonable(self.values)
        self.passed = bool(self.passed)


@dataclass
class Report:
    config: dict
    checks: list[Check] = field(default_factory=list)
    inputs: dict = field(default_factory=dict)
    version: str = __version__

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name: str, values: dict, passed: bool = True) -> Check:
        c = Check(name, values, passed)
        self.checks.append(c)
        return c

    def to_dict(self) -> dict:
        return {
            "schema": schema_name("report"),
            "version": self.version,
            "config": jsonable(self.config),
            "inputs": jsonable(self.inputs),
            "checks": [{"name": c.name, "values": c.values, "passed": c.passed} for c in self.checks],
            "status": "pass" if self.passed else "fail",
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Report":
        try:
            checks = [Check(c["name"], c["values"], c["passed"]) for c in d["checks"]]
            rep = cls(d["config"], checks, d.get("inputs", {}), d["version"])
        except (KeyError, TypeError) as exc:
            raise MalformedInputError(f"malformed report: {exc}") from exc
        if d.get("status") not in (None, "pass" if rep.passed else "fail"):
            raise MalformedInputError("report status disagrees with its checks")
        return rep

    def __eq__(self, other):
        if not isinstance(other, Report):
            return NotImplemented
        return self.to_dict() == other.to_dict()


def dumps_document(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def write_document(doc: dict, path) -> None:
    text = dumps_document(doc)
    if path is None or str(path) == "-":
        sys.stdout.write(text)
        return
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise OutputError(f"cannot write {path}: {exc}") from exc


def emit_report(r: Report, path) -> None:
    """Write ``r`` as sorted-key JSON; identical reports give identical bytes."""
    write_document(r.to_dict(), path)
