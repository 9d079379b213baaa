"""Plain-text input formats for the CLI.

Matrices are written row-major, one row per line, entries separated by
whitespace or commas.  An entry is an integer, a fraction ``p/q`` or a
decimal (``0.25``, ``1e-3``).  ``#`` starts a comment; blank lines are
ignored.  A matrix made only of integers and fractions is exact; any
decimal entry makes the whole matrix a float matrix.

Seed files hold eight 4x4 blocks introduced by ``[s0]`` ... ``[s7]``.
Chain files hold one octonion per line as eight coefficients of e_0..e_7.
"""

from __future__ import annotations

import re
from fractions import Fraction
from pathlib import Path

import numpy as np

from .exact_linalg import ExactMatrix
from .octonion import Octonion
from .perturbation import AmplitudeChain, PerturbationSeed

__all__ = ["InputError", "parse_matrix", "parse_rational", "read_matrix", "read_seed", "read_chain"]

_RATIONAL = re.compile(r"^[+-]?\d+(/\d+)?$")
_DECIMAL = re.compile(r"^[+-]?(\d+\.\d*|\.\d+|\d+)([eE][+-]?\d+)?$")


class InputError(ValueError):
    """Malformed input; carries a 1-based line and column."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None, source: str = "<input>"):
        loc = source
        if line is not None:
            loc += f":{line}"
            if column is not None:
                loc += f":{column}"
        super().__init__(f"{loc}: {message}")
        self.line = line
        self.column = column


def _tokens(line: str):
    """Yield (column, token) with 1-based columns."""
    for m in re.finditer(r"[^\s,]+", line):
        yield m.start() + 1, m.group()


def parse_rational(tok: str) -> tuple[Fraction | float, bool]:
    """Return (value, exact)."""
    if _RATIONAL.match(tok):
        if tok.split("/")[-1] == "0" and "/" in tok:
            raise ZeroDivisionError("zero denominator")
        return Fraction(tok), True
    if _DECIMAL.match(tok):
        return float(tok), False
    raise ValueError(f"not a number: {tok!r}")


def _strip(line: str) -> str:
    return line.split("#", 1)[0]


def _parse_rows(lines, source, start_line=1):
    rows, exact = [], True
    for lineno, raw in enumerate(lines, start=start_line):
        text = _strip(raw)
        if not text.strip():
            continue
        row = []
        for col, tok in _tokens(text):
            try:
                v, ex = parse_rational(tok)
            except (ValueError, ZeroDivisionError) as e:
                raise InputError(str(e), lineno, col, source) from None
            exact = exact and ex
            row.append(v)
        if rows and len(row) != len(rows[0][1]):
            raise InputError(f"row has {len(row)} entries, expected {len(rows[0][1])}", lineno, 1, source)
        rows.append((lineno, row))
    return rows, exact


def parse_matrix(text: str, shape: tuple[int, int] | None = None, source: str = "<input>"):
    """Parse a matrix; returns an ExactMatrix or a float ndarray."""
    rows, exact = _parse_rows(text.splitlines(), source)
    if not rows:
        raise InputError("no matrix rows found", source=source)
    data = [r for _, r in rows]
    if shape is not None:
        if len(data) != shape[0]:
            raise InputError(f"expected {shape[0]} rows, found {len(data)}", rows[-1][0], None, source)
        if len(data[0]) != shape[1]:
            raise InputError(f"expected {shape[1]} columns, found {len(data[0])}", rows[0][0], None, source)
    if exact:
        return ExactMatrix(data)
    return np.array(data, dtype=float)


def _read(path) -> tuple[str, str]:
    p = Path(path)
    return p.read_text(), str(p)


def read_matrix(path, shape=None):
    text, src = _read(path)
    return parse_matrix(text, shape, src)


def read_seed(path, lam=Fraction(1, 100)) -> PerturbationSeed:
    text, src = _read(path)
    blocks: dict[int, list[tuple[int, str]]] = {}
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = _strip(raw).strip()
        if not body:
            continue
        m = re.fullmatch(r"\[s(\d)\]", body)
        if m:
            current = int(m.group(1))
            if current > 7:
                raise InputError(f"block index {current} out of range 0..7", lineno, 1, src)
            if current in blocks:
                raise InputError(f"duplicate block [s{current}]", lineno, 1, src)
            blocks[current] = []
            continue
        if current is None:
            raise InputError("matrix row before any [sN] header", lineno, 1, src)
        blocks[current].append((lineno, raw))
    missing = [i for i in range(8) if i not in blocks]
    if missing:
        raise InputError(f"missing blocks: {', '.join(f'[s{i}]' for i in missing)}", source=src)
    mats = []
    for i in range(8):
        lines = blocks[i]
        rows = []
        for lineno, raw in lines:
            parsed, exact = _parse_rows([raw], src, lineno)
            if not exact:
                raise InputError("seed entries must be exact rationals", lineno, 1, src)
            rows.append(parsed[0][1])
        if len(rows) != 4 or any(len(r) != 4 for r in rows):
            ln = lines[0][0] if lines else None
            raise InputError(f"block [s{i}] must be 4x4", ln, None, src)
        mats.append(ExactMatrix(rows))
    try:
        return PerturbationSeed(mats[0], tuple(mats[1:]), lam)
    except ValueError as e:
        raise InputError(str(e), source=src) from None


def read_chain(path) -> AmplitudeChain:
    text, src = _read(path)
    rows, exact = _parse_rows(text.splitlines(), src)
    if not rows:
        raise InputError("chain file has no amplitudes", source=src)
    if not exact:
        raise InputError("amplitude coefficients must be exact rationals", rows[0][0], None, src)
    if len(rows[0][1]) != 8:
        raise InputError(f"each amplitude needs 8 coefficients, found {len(rows[0][1])}", rows[0][0], 1, src)
    return AmplitudeChain(tuple(Octonion(r) for _, r in rows))
