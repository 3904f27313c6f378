"""
Result Store

Handles reading input files (matrices, grids, observables) and writing JSON/CSV
results, either to a local path or to stdout.
"""

import dataclasses
import io
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Optional, Union

import numpy as np
import pandas as pd

from src.utils.errors import UsageError

logger = logging.getLogger(__name__)


def to_jsonable(value: Any) -> Any:
    """
    Convert results into JSON-serialisable structures.

    Fractions become "p/q" strings (the same notation input files use), numpy
    scalars and arrays become Python floats and lists, dataclasses become dicts.
    Floats keep Python's shortest round-trip repr.
    """
    if isinstance(value, Fraction):
        return str(value) if value.denominator != 1 else value.numerator
    if isinstance(value, (bool, int, str)) or value is None:
        return value
    if isinstance(value, float):
        return value
    if isinstance(value, np.generic):
        return to_jsonable(value.item())
    if isinstance(value, np.ndarray):
        return [to_jsonable(v) for v in value.tolist()]
    if dataclasses.is_dataclass(value) and not isinstance(value, type):
        if hasattr(value, "to_dict"):
            return to_jsonable(value.to_dict())
        return {f.name: to_jsonable(getattr(value, f.name)) for f in dataclasses.fields(value)}
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    return str(value)


def parse_number(raw: Union[str, int, float]) -> Union[Fraction, float, int]:
    """
    Parse a matrix/weight entry: ints stay ints, "p/q" strings become Fractions,
    anything else becomes a float.
    """
    if isinstance(raw, bool):
        raise UsageError(f"Boolean is not a number: {raw}")
    if isinstance(raw, int):
        return raw
    if isinstance(raw, float):
        return raw
    text = str(raw).strip()
    try:
        if "/" in text:
            return Fraction(text)
        if text.lstrip("+-").isdigit():
            return int(text)
        return float(text)
    except (ValueError, ZeroDivisionError) as e:
        raise UsageError(f"Cannot parse number {raw!r}: {e}") from e


class ResultStore:
    """Local file I/O for ergolab inputs and outputs."""

    def __init__(self, base_dir: Optional[Path] = None):
        """
        Initialize the store.

        Args:
            base_dir: Directory relative paths are resolved against (default: cwd)
        """
        self.base_dir = Path(base_dir) if base_dir else Path.cwd()

    def _resolve(self, path: Union[str, Path]) -> Path:
        p = Path(path)
        return p if p.is_absolute() else self.base_dir / p

    def load_json(self, path: Union[str, Path]) -> Any:
        """
        Load a JSON input file.

        Raises:
            UsageError: if the file is missing or malformed.
        """
        resolved = self._resolve(path)
        try:
            with open(resolved, "r", encoding="utf-8") as fh:
                data = json.load(fh)
            logger.debug(f"Loaded {resolved}")
            return data
        except FileNotFoundError as e:
            raise UsageError(f"File not found: {resolved}") from e
        except json.JSONDecodeError as e:
            raise UsageError(f"Failed to parse {resolved}: {e}") from e

    def load_matrix(self, path: Union[str, Path]) -> list[list[Union[Fraction, float, int]]]:
        """
        Load a matrix file of the form {"rows": [[...], ...]}.

        Returns:
            Rows with entries parsed by parse_number.
        """
        data = self.load_json(path)
        rows = data.get("rows") if isinstance(data, dict) else None
        if not isinstance(rows, list) or not rows:
            raise UsageError(f"Matrix file {path} needs a non-empty 'rows' list")
        return [[parse_number(v) for v in row] for row in rows]

    def write_json(self, payload: Any, path: Optional[Union[str, Path]] = None) -> str:
        """
        Serialise payload and write it to path, or stdout when path is None.

        Returns:
            The JSON text written.
        """
        text = json.dumps(to_jsonable(payload), indent=2, sort_keys=True)

        if path is None:
            sys.stdout.write(text + "\n")
            return text

        resolved = self._resolve(path)
        resolved.parent.mkdir(parents=True, exist_ok=True)
        resolved.write_text(text + "\n", encoding="utf-8")
        logger.info(f"Wrote {resolved}")
        return text

    def write_csv(self, df: pd.DataFrame, path: Optional[Union[str, Path]] = None) -> str:
        """
        Write a summary table as CSV to path, or stdout when path is None.

        Returns:
            The CSV text written.
        """
        buffer = io.StringIO()
        df.to_csv(buffer, index=False, float_format="%.17g")
        text = buffer.getvalue()

        if path is None:
            sys.stdout.write(text)
            return text

        resolved = self._resolve(path)
        resolved.parent.mkdir(parents=True, exist_ok=True)
        resolved.write_text(text, encoding="utf-8")
        logger.info(f"Wrote {len(df)} rows to {resolved}")
        return text
