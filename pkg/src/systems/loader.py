"""
System loader

Parses CLI system specs and point strings.

Grammar:
    rotation:alpha=<golden|p/q|float>
    torus:A=<file|inline JSON rows>[,b=<v1,v2,...>]
    interval:square | interval:logistic:r=<val> | interval:tent | interval:pl=<file>
    shift | shift:pre=<word>,per=<word> | shift:rule=<name>
    projective:T=<file|inline JSON rows>
"""

import json
import logging
import re
from fractions import Fraction
from typing import Any, Optional

from src.utils.errors import UsageError
from src.utils.result_store import ResultStore, parse_number
from .catalog import (
    SystemSpec,
    affine_torus,
    bernoulli_shift,
    golden_alpha,
    interval_map,
    projective_action,
    rotation,
    unit_vector,
)
from .points import SymbolicPoint, vec

logger = logging.getLogger(__name__)

_TORUS_RE = re.compile(r"^A=(?P<A>.+?)(?:,b=(?P<b>.+))?$")


def load_rows(text: str, store: ResultStore) -> list[list[Any]]:
    if text.lstrip().startswith("["):
        try:
            rows = json.loads(text)
        except json.JSONDecodeError as e:
            raise UsageError(f"Bad inline matrix {text!r}: {e}") from e
        return [[parse_number(v) for v in row] for row in rows]
    return store.load_matrix(text)


def _parse_scalar(text: str, exact: bool) -> Any:
    text = text.strip()
    try:
        if exact or "/" in text:
            return Fraction(text)
        return float(text)
    except (ValueError, ZeroDivisionError) as e:
        raise UsageError(f"Cannot parse {text!r} as a number: {e}") from e


def _parse_symbolic(body: str) -> SymbolicPoint:
    fields = dict(part.split("=", 1) for part in body.split(",") if "=" in part)
    if "rule" in fields:
        return SymbolicPoint(rule=fields["rule"].strip())
    if "per" not in fields:
        raise UsageError(f"Symbolic point needs per=<word> or rule=<name>, got {body!r}")
    return SymbolicPoint(fields.get("pre", "").strip(), fields["per"].strip())


def parse_system_spec(spec: str, store: Optional[ResultStore] = None) -> tuple[SystemSpec, Optional[Any]]:
    """
    Parse a system spec.

    Returns:
        (system, default starting point or None). Only shift specs carry a point.

    Raises:
        UsageError: on unknown or malformed specs.
    """
    store = store or ResultStore()
    spec = spec.strip()
    family, _, body = spec.partition(":")

    if family == "rotation":
        if not body.startswith("alpha="):
            raise UsageError(f"rotation needs alpha=<val>, got {spec!r}")
        raw = body[len("alpha="):]
        alpha = golden_alpha() if raw == "golden" else _parse_scalar(raw, exact=False)
        return rotation(alpha), None

    if family == "torus":
        match = _TORUS_RE.match(body)
        if not match:
            raise UsageError(f"torus needs A=<file>[,b=...], got {spec!r}")
        rows = load_rows(match.group("A"), store)
        if any(not isinstance(v, int) for row in rows for v in row):
            raise UsageError("Torus matrix entries must be integers")
        b = None
        if match.group("b"):
            b = [_parse_scalar(v, exact=True) for v in match.group("b").split(",")]
        return affine_torus(rows, b), None

    if family == "interval":
        if body in ("square", "tent"):
            return interval_map(body), None
        if body.startswith("logistic:r="):
            return interval_map("logistic", r=_parse_scalar(body[len("logistic:r="):], exact=False)), None
        if body.startswith("pl="):
            data = store.load_json(body[len("pl="):])
            points = [[parse_number(t), parse_number(y)] for t, y in data.get("breakpoints", [])]
            return interval_map("custom-piecewise-linear", breakpoints=points), None
        raise UsageError(f"Unknown interval map {body!r}")

    if family == "shift":
        return bernoulli_shift(), (_parse_symbolic(body) if body else None)

    if family == "projective":
        if not body.startswith("T="):
            raise UsageError(f"projective needs T=<file>, got {spec!r}")
        rows = load_rows(body[len("T="):], store)
        return projective_action([[float(v) for v in row] for row in rows]), None

    raise UsageError(f"Unknown system spec {spec!r}")


def parse_point(s: SystemSpec, text: str, allow_float: bool = False) -> Any:
    """
    Parse a starting point for s.

    Coordinates are comma separated; "p/q" is exact. On expanding maps and
    rational rotations every coordinate is read exactly unless allow_float is set.
    """
    if s.kind == "shift":
        return _parse_symbolic(text)

    exact = s.exact_by_default and not allow_float
    coords = [_parse_scalar(c, exact=exact) for c in text.split(",")]
    if s.kind == "projective":
        return unit_vector([float(c) for c in coords])
    return vec(coords)
