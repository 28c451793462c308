"""Reading and writing one-column numeric series files."""
from __future__ import annotations

import math
from pathlib import Path
import sys
from typing import TextIO

import numpy as np

__all__ = ["EmptyInputError", "SeriesFormatError", "format_series", "read_series", "write_series"]


class EmptyInputError(ValueError):
    """The input holds no observations."""


class SeriesFormatError(ValueError):
    """A data row is blank, non-numeric or not finite."""


def _parse(text: str, source: str) -> np.ndarray:
    lines = text.splitlines()
    # a trailing newline is fine, interior blank lines are not
    while lines and not lines[-1].strip():
        lines.pop()
    if not lines:
        raise EmptyInputError(f"{source}: no data")
    values = []
    for i, raw in enumerate(lines, start=1):
        token = raw.strip()
        try:
            v = float(token)
        except ValueError:
            if i == 1 and token:
                continue  # header
            raise SeriesFormatError(f"{source}: line {i}: not a number: {raw!r}") from None
        if not math.isfinite(v):
            raise SeriesFormatError(f"{source}: line {i}: non-finite value {raw!r}")
        values.append(v)
    if not values:
        raise EmptyInputError(f"{source}: no data rows after the header")
    return np.array(values)


def read_series(source: str | Path | TextIO | None = None) -> np.ndarray:
    """
    Read one value per line, with an optional header line.

    ``None`` or ``"-"`` reads standard input. Blank rows and NaN/inf values
    are rejected rather than skipped.

    Raises
    ------
    OSError
        The file cannot be read.
    EmptyInputError
        No observations.
    SeriesFormatError
        A row does not parse as a finite number.
    """
    if source is None or str(source) == "-":
        return _parse(sys.stdin.read(), "<stdin>")
    if hasattr(source, "read"):
        return _parse(source.read(), getattr(source, "name", "<stream>"))
    return _parse(Path(source).read_text(), str(source))


def format_series(values, header: str | None = None) -> str:
    """One ``repr``-formatted value per line, so reading back is exact."""
    out = [header] if header else []
    out.extend(repr(float(v)) for v in np.asarray(values, dtype=float).ravel())
    return "\n".join(out) + "\n"


def write_series(values, target: str | Path | TextIO | None = None, header: str | None = None) -> None:
    text = format_series(values, header)
    if target is None or str(target) == "-":
        sys.stdout.write(text)
    elif hasattr(target, "write"):
        target.write(text)
    else:
        Path(target).write_text(text)
