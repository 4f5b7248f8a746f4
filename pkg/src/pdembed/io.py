"""Diagram files and deterministic number formatting.

CSV files have the header ``birth,death``; a row ``diag,diag`` is the
diagonal, and a diagram read with an explicit arity is padded with diagonal
entries.  A leading ``id`` column (header ``id,birth,death``) stores several
diagrams in one file, grouped by id in order of first appearance.

JSON files hold either one object ``{"n": 3, "points": [[1.0, 2.0], "diag"]}``
or a list of such objects.
"""

from __future__ import annotations

import csv
import io
import json
import math
from collections.abc import Iterable, Sequence
from pathlib import Path

from .diagram import DIAG, PersistenceDiagram

__all__ = [
    "DiagramFormatError",
    "ArityError",
    "fmt",
    "parse_diagrams_csv",
    "parse_diagrams_json",
    "read_diagrams",
    "read_many",
    "format_diagrams_csv",
    "format_diagrams_json",
    "write_diagrams",
]


class DiagramFormatError(ValueError):
    """Malformed diagram file."""


class ArityError(DiagramFormatError):
    """A diagram does not fit the requested arity."""


def fmt(v: float) -> str:
    """Shortest round-trip text for a float; stable across runs and platforms."""
    v = float(v)
    if v == 0:
        return "0.0"  # folds -0.0
    return repr(v)


def _diag_cell(cell: str) -> bool:
    return cell.strip().lower() in ("diag", "d", "delta")


def _point(b: str, d: str, where: str):
    if _diag_cell(b) and _diag_cell(d):
        return DIAG
    if _diag_cell(b) or _diag_cell(d):
        raise DiagramFormatError(f"{where}: half-diagonal row {b!r},{d!r}")
    try:
        bv, dv = float(b), float(d)
    except ValueError:
        raise DiagramFormatError(f"{where}: non-numeric row {b!r},{d!r}") from None
    if not (math.isfinite(bv) and math.isfinite(dv)):
        raise DiagramFormatError(f"{where}: non-finite coordinate")
    if bv < 0:
        raise DiagramFormatError(f"{where}: negative birth {bv!r}")
    if not dv > bv:
        raise DiagramFormatError(f"{where}: death {dv!r} must exceed birth {bv!r}")
    return (bv, dv)


Raw = tuple[list, "int | None", str]  # points, declared arity, location


def _finish(raw: Raw, n: int | None) -> PersistenceDiagram:
    points, declared, where = raw
    if n is not None and declared is not None and declared != n:
        raise ArityError(f"{where}: arity {declared} differs from requested {n}")
    if n is None:
        n = declared if declared is not None else len(points)
    if n < 1:
        raise DiagramFormatError(f"{where}: empty diagram needs an explicit arity")
    if len(points) > n:
        raise ArityError(f"{where}: {len(points)} points exceed arity {n}")
    return PersistenceDiagram(points, n)


def _raw_csv(text: str, source: str) -> list[Raw]:
    rows = [r for r in csv.reader(io.StringIO(text)) if r and any(c.strip() for c in r)]
    if not rows:
        raise DiagramFormatError(f"{source}: empty file")
    header = [c.strip().lower() for c in rows[0]]
    if header == ["birth", "death"]:
        width = 2
    elif header == ["id", "birth", "death"]:
        width = 3
    else:
        raise DiagramFormatError(f"{source}: header must be 'birth,death' or 'id,birth,death'")
    grouped: dict[str, list] = {"": []} if width == 2 else {}
    for line, r in enumerate(rows[1:], start=2):
        if len(r) != width:
            raise DiagramFormatError(f"{source}:{line}: {len(r)} fields, expected {width}")
        key = "" if width == 2 else r[0].strip()
        grouped.setdefault(key, []).append(_point(r[-2], r[-1], f"{source}:{line}"))
    return [(pts, None, source if key == "" else f"{source}[id={key}]") for key, pts in grouped.items()]


def _raw_json(text: str, source: str) -> list[Raw]:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise DiagramFormatError(f"{source}: invalid JSON ({e.msg})") from None
    objs = data if isinstance(data, list) else [data]
    out = []
    for i, obj in enumerate(objs):
        where = f"{source}[{i}]"
        if not isinstance(obj, dict) or "points" not in obj:
            raise DiagramFormatError(f"{where}: expected an object with 'points'")
        arity = obj.get("n")
        if arity is not None and (not isinstance(arity, int) or arity < 1):
            raise DiagramFormatError(f"{where}: 'n' must be a positive integer")
        pts = []
        for p in obj["points"]:
            if isinstance(p, str):
                if not _diag_cell(p):
                    raise DiagramFormatError(f"{where}: unknown point {p!r}")
                pts.append(DIAG)
            elif isinstance(p, (list, tuple)) and len(p) == 2:
                pts.append(_point(str(p[0]), str(p[1]), where))
            else:
                raise DiagramFormatError(f"{where}: malformed point {p!r}")
        out.append((pts, arity, where))
    return out


def parse_diagrams_csv(text: str, n: int | None = None, source: str = "<csv>") -> list[PersistenceDiagram]:
    return [_finish(r, n) for r in _raw_csv(text, source)]


def parse_diagrams_json(text: str, n: int | None = None, source: str = "<json>") -> list[PersistenceDiagram]:
    return [_finish(r, n) for r in _raw_json(text, source)]


def _raw_file(path: Path) -> list[Raw]:
    text = path.read_text()
    if path.suffix.lower() == ".json":
        return _raw_json(text, str(path))
    return _raw_csv(text, str(path))


def read_diagrams(path: str | Path, n: int | None = None) -> list[PersistenceDiagram]:
    """Diagrams stored in ``path``; the format follows the suffix (``.json`` or CSV)."""
    return [_finish(r, n) for r in _raw_file(Path(path))]


def read_many(paths: Iterable[str | Path], n: int | None = None) -> list[PersistenceDiagram]:
    """Diagrams from several files, all padded to one arity.

    Without ``n`` the arity is the largest declared arity or point count.
    """
    raws = [r for p in paths for r in _raw_file(Path(p))]
    if not raws:
        raise DiagramFormatError("no diagrams in input")
    if n is None:
        n = max(r[1] if r[1] is not None else len(r[0]) for r in raws)
    return [_finish(r, n) for r in raws]


def format_diagrams_csv(diagrams: Sequence[PersistenceDiagram]) -> str:
    lines = ["birth,death"] if len(diagrams) == 1 else ["id,birth,death"]
    for i, x in enumerate(diagrams):
        prefix = "" if len(diagrams) == 1 else f"{i},"
        for p in x.points:
            lines.append(prefix + ("diag,diag" if p is DIAG else f"{fmt(p[0])},{fmt(p[1])}"))
    return "\n".join(lines) + "\n"


def format_diagrams_json(diagrams: Sequence[PersistenceDiagram]) -> str:
    objs = [{"n": x.arity, "points": ["diag" if p is DIAG else [p[0], p[1]] for p in x.points]}
            for x in diagrams]
    return json.dumps(objs[0] if len(objs) == 1 else objs) + "\n"


def write_diagrams(path: str | Path, diagrams: Iterable[PersistenceDiagram]) -> None:
    path = Path(path)
    diagrams = list(diagrams)
    text = format_diagrams_json(diagrams) if path.suffix.lower() == ".json" else format_diagrams_csv(diagrams)
    path.write_text(text)
