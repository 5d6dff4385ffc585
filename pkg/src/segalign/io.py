"""Reading and writing segment sequence files (CSV and JSON Lines)."""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path
from typing import Iterable, List, Optional, Union

from .model import NL, Segment, is_nl

COLUMNS = ("label", "t_begin", "t_end")
FORMATS = ("csv", "jsonl")

PathLike = Union[str, Path]


class InputError(Exception):
    """Any problem attributable to user input; the CLI maps it to exit code 1."""


class ParseError(InputError):
    def __init__(self, message: str, path: Optional[PathLike] = None, line: Optional[int] = None):
        self.path = path
        self.line = line
        where = ""
        if path is not None:
            where = f"{path}:"
            if line is not None:
                where += f"{line}:"
            where += " "
        elif line is not None:
            where = f"line {line}: "
        super().__init__(where + message)


class MissingColumn(ParseError):
    pass


class NonNumericTimestamp(ParseError):
    pass


def infer_format(path: PathLike) -> str:
    suffix = Path(path).suffix.lower().lstrip(".")
    if suffix in ("jsonl", "ndjson"):
        return "jsonl"
    if suffix == "csv":
        return "csv"
    raise InputError(f"{path}: cannot infer format from suffix {suffix!r}; pass csv or jsonl")


def _timestamp(value, name: str, path, line: int) -> float:
    if isinstance(value, bool):
        raise NonNumericTimestamp(f"{name} is not a number: {value!r}", path, line)
    try:
        t = float(value)
    except (TypeError, ValueError):
        raise NonNumericTimestamp(f"{name} is not a number: {value!r}", path, line) from None
    if not math.isfinite(t):
        raise NonNumericTimestamp(f"{name} is not finite: {value!r}", path, line)
    return t


def _label(value, nl_sentinel: str):
    label = str(value)
    return NL if label == nl_sentinel else label


def _parse_csv(text: str, path, nl_sentinel: str) -> List[Segment]:
    rows = csv.reader(io.StringIO(text))
    try:
        header = next(rows)
    except StopIteration:
        raise MissingColumn("empty file, expected header label,t_begin,t_end", path, 1) from None
    header = [h.strip() for h in header]
    missing = [c for c in COLUMNS if c not in header]
    if missing:
        raise MissingColumn(f"missing column(s) {', '.join(missing)} in header {header}", path, 1)
    if tuple(header) != COLUMNS:
        raise ParseError(f"header must be exactly label,t_begin,t_end, got {','.join(header)}", path, 1)
    segments = []
    for row in rows:
        line = rows.line_num
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != 3:
            raise ParseError(f"expected 3 fields, got {len(row)}", path, line)
        label, tb, te = row
        segments.append(Segment(
            _label(label.strip(), nl_sentinel),
            _timestamp(tb.strip(), "t_begin", path, line),
            _timestamp(te.strip(), "t_end", path, line),
        ))
    return segments


def _parse_jsonl(text: str, path, nl_sentinel: str) -> List[Segment]:
    segments = []
    for line, raw in enumerate(text.splitlines(), start=1):
        if not raw.strip():
            continue
        try:
            obj = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc.msg}", path, line) from None
        if not isinstance(obj, dict):
            raise ParseError("expected a JSON object", path, line)
        missing = [c for c in COLUMNS if c not in obj]
        if missing:
            raise MissingColumn(f"missing key(s) {', '.join(missing)}", path, line)
        if obj["label"] is None or isinstance(obj["label"], (dict, list)):
            raise ParseError(f"label must be a string or number, got {obj['label']!r}", path, line)
        segments.append(Segment(
            _label(obj["label"], nl_sentinel),
            _timestamp(obj["t_begin"], "t_begin", path, line),
            _timestamp(obj["t_end"], "t_end", path, line),
        ))
    return segments


def parse_sequence_text(text: str, fmt: str, nl_sentinel: str = "NL", path=None) -> List[Segment]:
    if fmt == "csv":
        return _parse_csv(text, path, nl_sentinel)
    if fmt == "jsonl":
        return _parse_jsonl(text, path, nl_sentinel)
    raise ValueError(f"unknown format {fmt!r}, expected one of {FORMATS}")


def parse_sequence_file(
    path: PathLike, fmt: Optional[str] = None, nl_sentinel: str = "NL"
) -> List[Segment]:
    """Read segments in file order. Ordering and interval checks happen later, in validation."""
    fmt = fmt or infer_format(path)
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror or exc}") from exc
    except UnicodeDecodeError as exc:
        raise ParseError(f"not UTF-8 text ({exc.reason})", path) from exc
    return parse_sequence_text(text, fmt, nl_sentinel, path)


def _number(t: float):
    return int(t) if float(t).is_integer() else t


def format_sequence(segments: Iterable[Segment], fmt: str, nl_sentinel: str = "NL") -> str:
    out = io.StringIO()
    if fmt == "csv":
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(COLUMNS)
        for s in segments:
            label = nl_sentinel if is_nl(s.label) else s.label
            writer.writerow([label, repr(_number(s.t_begin)), repr(_number(s.t_end))])
    elif fmt == "jsonl":
        for s in segments:
            label = nl_sentinel if is_nl(s.label) else s.label
            out.write(json.dumps({"label": label, "t_begin": _number(s.t_begin), "t_end": _number(s.t_end)}))
            out.write("\n")
    else:
        raise ValueError(f"unknown format {fmt!r}, expected one of {FORMATS}")
    return out.getvalue()


def write_sequence_file(
    path: PathLike, segments: Iterable[Segment], fmt: Optional[str] = None, nl_sentinel: str = "NL"
) -> None:
    fmt = fmt or infer_format(path)
    Path(path).write_text(format_sequence(segments, fmt, nl_sentinel), encoding="utf-8")
