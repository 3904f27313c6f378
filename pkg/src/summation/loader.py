"""
Method loader

Builds SummationMethod objects from CLI spec strings and JSON files.

Grammar:
    cesaro | cesaro:float
    riesz:log | riesz:log-exact | riesz:file=<path>
    matrix:file=<path>
    interleave(<spec>,<spec>)
    subseq(<spec>,even|odd|geometric:<r>|file=<path>)
"""

import logging
from typing import Optional

from src.utils.errors import MatrixRowOutOfRange, UsageError
from src.utils.result_store import ResultStore, parse_number
from .methods import (
    SummationMethod,
    cesaro,
    custom_matrix,
    even_indices,
    geometric_indices,
    harmonic_weights,
    interleave,
    odd_indices,
    riesz,
    sequence_indices,
    subsequence,
)

logger = logging.getLogger(__name__)


def split_top_level(text: str) -> list[str]:
    """Split on commas that are not nested inside parentheses."""
    parts, depth, current = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise UsageError(f"Unbalanced parentheses in {text!r}")
        if ch == "," and depth == 0:
            parts.append("".join(current).strip())
            current = []
        else:
            current.append(ch)
    if depth != 0:
        raise UsageError(f"Unbalanced parentheses in {text!r}")
    parts.append("".join(current).strip())
    return parts


def load_matrix_method(path: str, store: Optional[ResultStore] = None) -> SummationMethod:
    """
    Load a custom summation matrix {"rows": [[[k, s], ...], ...]}.

    Entries s are floats or "p/q" strings.
    """
    store = store or ResultStore()
    data = store.load_json(path)
    rows = data.get("rows") if isinstance(data, dict) else None
    if not isinstance(rows, list):
        raise UsageError(f"Matrix file {path} needs a 'rows' list")

    parsed = []
    for n, row in enumerate(rows):
        try:
            parsed.append([(int(k), parse_number(s)) for k, s in row])
        except (TypeError, ValueError) as e:
            raise UsageError(f"Row {n} of {path} is not a list of [k, s] pairs: {e}") from e

    logger.info(f"Loaded summation matrix with {len(parsed)} rows from {path}")
    return custom_matrix(parsed, name=f"matrix:{path}")


def load_riesz_method(path: str, store: Optional[ResultStore] = None) -> SummationMethod:
    """Load a finite Riesz weight list {"p": [p_0, p_1, ...]}."""
    store = store or ResultStore()
    data = store.load_json(path)
    values = data.get("p") if isinstance(data, dict) else None
    if not isinstance(values, list) or not values:
        raise UsageError(f"Riesz file {path} needs a non-empty 'p' list")
    weights = tuple(parse_number(v) for v in values)

    def p(k: int):
        if k >= len(weights):
            raise MatrixRowOutOfRange(f"riesz:{path} defines p_k for k < {len(weights)}, got {k}")
        return weights[k]

    return riesz(p, name=f"riesz:{path}")


def _parse_index_map(text: str, store: ResultStore):
    if text == "even":
        return even_indices, "even"
    if text == "odd":
        return odd_indices, "odd"
    if text.startswith("geometric:"):
        try:
            ratio = float(text.split(":", 1)[1])
            return geometric_indices(ratio), text
        except ValueError as e:
            raise UsageError(f"Bad geometric index map {text!r}: {e}") from e
    if text.startswith("file="):
        values = store.load_json(text[len("file="):])
        if isinstance(values, dict):
            values = values.get("indices")
        if not isinstance(values, list):
            raise UsageError(f"Index file must hold a list or {{'indices': [...]}}: {text}")
        return sequence_indices(values), text
    raise UsageError(f"Unknown index map {text!r} (expected even|odd|geometric:<r>|file=<path>)")


def parse_method_spec(spec: str, store: Optional[ResultStore] = None) -> SummationMethod:
    """
    Parse a method spec string into a SummationMethod.

    Raises:
        UsageError: on unknown or malformed specs.
    """
    store = store or ResultStore()
    spec = spec.strip()

    if spec == "cesaro":
        return cesaro()
    if spec == "cesaro:float":
        return cesaro(exact=False)
    if spec == "riesz:log":
        return riesz(harmonic_weights(), name="riesz:log")
    if spec == "riesz:log-exact":
        return riesz(harmonic_weights(exact=True), name="riesz:log-exact")
    if spec.startswith("riesz:file="):
        return load_riesz_method(spec[len("riesz:file="):], store)
    if spec.startswith("matrix:file="):
        return load_matrix_method(spec[len("matrix:file="):], store)

    if spec.startswith("interleave(") and spec.endswith(")"):
        args = split_top_level(spec[len("interleave("):-1])
        if len(args) != 2:
            raise UsageError(f"interleave takes two method specs, got {len(args)}")
        return interleave(parse_method_spec(args[0], store), parse_method_spec(args[1], store))

    if spec.startswith("subseq(") and spec.endswith(")"):
        args = split_top_level(spec[len("subseq("):-1])
        if len(args) != 2:
            raise UsageError(f"subseq takes a method spec and an index map, got {len(args)} arguments")
        index_map, label = _parse_index_map(args[1], store)
        return subsequence(parse_method_spec(args[0], store), index_map, label=label)

    raise UsageError(f"Unknown method spec {spec!r}")

