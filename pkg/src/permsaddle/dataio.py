"""Readers for paired-sample and score files.

Both accept comma-, semicolon-, tab- or whitespace-separated numbers, one
record per line.  Blank lines and ``#`` comments are skipped; a first row
that does not parse as numbers is taken as a header.
"""

from __future__ import annotations

import re
from pathlib import Path

import numpy as np

from .errors import DataFormatError
from .rankstat import PairedSample

_SPLIT = re.compile(r"[,;\s]+")


def _rows(text: str, source: str) -> list[tuple[int, list[float]]]:
    rows: list[tuple[int, list[float]]] = []
    first_content = True
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = [f for f in _SPLIT.split(line) if f]
        try:
            values = [float(f) for f in fields]
        except ValueError:
            if first_content:
                first_content = False
                continue
            raise DataFormatError(f"{source}:{lineno}: non-numeric value in {raw.strip()!r}") from None
        first_content = False
        rows.append((lineno, values))
    return rows


def parse_pairs(text: str, source: str = "<input>") -> PairedSample:
    xs, ys = [], []
    for lineno, values in _rows(text, source):
        if len(values) != 2:
            raise DataFormatError(f"{source}:{lineno}: expected 2 columns (x, y), found {len(values)}")
        xs.append(values[0])
        ys.append(values[1])
    if len(xs) < 2:
        raise DataFormatError(f"{source}: need at least 2 data rows, found {len(xs)}")
    return PairedSample(np.array(xs), np.array(ys))


def read_pairs(path: str | Path) -> PairedSample:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise DataFormatError(f"cannot read {path}: {exc.strerror}") from exc
    return parse_pairs(text, str(path))


def read_scores(path: str | Path) -> tuple[np.ndarray, np.ndarray]:
    """Score file: one column (``a = b``) or two columns (``a``, ``b``)."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise DataFormatError(f"cannot read {path}: {exc.strerror}") from exc
    rows = _rows(text, str(path))
    if not rows:
        raise DataFormatError(f"{path}: no scores found")
    width = len(rows[0][1])
    if width not in (1, 2):
        raise DataFormatError(f"{path}:{rows[0][0]}: expected 1 or 2 columns, found {width}")
    for lineno, values in rows:
        if len(values) != width:
            raise DataFormatError(f"{path}:{lineno}: expected {width} columns, found {len(values)}")
    arr = np.array([v for _, v in rows])
    return (arr[:, 0], arr[:, 0].copy()) if width == 1 else (arr[:, 0], arr[:, 1])
