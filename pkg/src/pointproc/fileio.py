"""Model documents, event tables and report serialisation.

Numbers are written with ``repr``, the shortest decimal string that
round-trips to the same double, so output bytes are reproducible.
"""
from __future__ import annotations

import json
from pathlib import Path

from .errors import ModelSpecError, PointProcessError
from .models import ModelSpec, model_from_dict, model_to_dict
from .pattern import PointPattern, validate_pattern

UNMARKED_HEADER = "time"
MARKED_HEADER = "time,mark"


class EventFileError(PointProcessError, ValueError):
    pass


def format_number(x: float) -> str:
    return repr(float(x))


def read_model(path) -> ModelSpec:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ModelSpecError(f"cannot read model file {path}: {exc.strerror}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelSpecError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None
    return model_from_dict(doc)


def write_model(path, model: ModelSpec) -> None:
    Path(path).write_text(json.dumps(model_to_dict(model), indent=2) + "\n", encoding="utf-8")


def format_events(pattern: PointPattern) -> str:
    lines = [MARKED_HEADER if pattern.marked else UNMARKED_HEADER]
    if pattern.marked:
        lines += [f"{format_number(t)},{format_number(k)}" for t, k in zip(pattern.times, pattern.marks)]
    else:
        lines += [format_number(t) for t in pattern.times]
    return "\n".join(lines) + "\n"


def write_events(path, pattern: PointPattern) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_events(pattern))


def parse_events(text: str, t_end: float, source: str = "<events>") -> PointPattern:
    """Parse an event table; rows must already be sorted by time."""
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise EventFileError(f"{source}: missing header")
    header = lines[0].strip()
    if header not in (UNMARKED_HEADER, MARKED_HEADER):
        raise EventFileError(f"{source}: header must be '{UNMARKED_HEADER}' or '{MARKED_HEADER}', got {header!r}")
    marked = header == MARKED_HEADER
    width = 2 if marked else 1
    rows = []
    for lineno, line in enumerate(lines[1:], start=2):
        cells = line.strip().split(",")
        if len(cells) != width:
            raise EventFileError(f"{source}:{lineno}: expected {width} column(s), got {len(cells)}")
        try:
            values = [float(c) for c in cells]
        except ValueError:
            raise EventFileError(f"{source}:{lineno}: not a number: {line!r}") from None
        rows.append(tuple(values) if marked else values[0])
    try:
        return validate_pattern(rows, t_end, marked=marked)
    except PointProcessError as exc:
        raise EventFileError(f"{source}: {exc}") from exc


def read_events(path, t_end: float) -> PointPattern:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise EventFileError(f"cannot read event file {path}: {exc}") from None
    return parse_events(text, t_end, str(path))


def dump_json(doc) -> str:
    return json.dumps(doc, indent=2, allow_nan=False) + "\n"
