"""Dataset loading, profiling, and data-quality reporting.

A DatasetFrame stores cells as parsed at load time: floats for
numeric-looking fields, None for empty fields, str for everything else.
Column dtype is decided later by inspect_frame so stray tokens in an
otherwise numeric column degrade to missing values instead of flipping the
whole column to text.
"""

from __future__ import annotations

import csv
import math
import re
from dataclasses import dataclass
from datetime import datetime

import numpy as np

from .config import PatternConfig, QualityConfig
from .errors import EmptyFrameError, FileMissingError, MalformedCsvError

NUMERIC = "numeric"
CATEGORICAL = "categorical"
DATETIME = "datetime"
CONSTANT = "constant"

_DATETIME_FORMATS = (
    "%Y-%m-%d", "%Y/%m/%d", "%d/%m/%Y", "%m/%d/%Y",
    "%Y-%m-%d %H:%M:%S", "%Y-%m-%dT%H:%M:%S",
)


@dataclass
class DatasetFrame:
    column_names: list[str]
    columns: list[list]          # columns[i] aligns with column_names[i]
    n_rows: int

    def column(self, name: str) -> list:
        return self.columns[self.column_names.index(name)]

    def row(self, index: int) -> list:
        return [col[index] for col in self.columns]


@dataclass
class ColumnProfile:
    name: str
    inferred_dtype: str
    missing_count: int
    missing_pct: float
    unique_count: int
    uniqueness_ratio: float
    mean: float | None = None
    std: float | None = None
    min: float | None = None
    max: float | None = None
    parse_failure_count: int = 0
    integer_valued: bool = False


@dataclass
class DatasetMetadata:
    n_rows: int
    n_cols: int
    profiles: list[ColumnProfile]
    estimated_memory_bytes: int
    preview: list[list]
    duplicate_row_count: int = 0

    def profile(self, name: str) -> ColumnProfile:
        for p in self.profiles:
            if p.name == name:
                return p
        raise KeyError(name)


@dataclass(frozen=True)
class QualityIssue:
    kind: str                    # see _ISSUE_KINDS
    detail: str
    column: str | None = None


_ISSUE_KINDS = (
    "constant_column", "duplicate_rows", "high_missingness",
    "parse_failures", "suspicious_cardinality",
)


def _parse_cell(raw: str):
    text = raw.strip()
    if text == "":
        return None
    try:
        value = float(text)
    except ValueError:
        return text
    # inf/nan tokens would poison downstream stats; keep them as text
    if not math.isfinite(value):
        return text
    return value


def load_csv(path, delimiter: str = ",", header: bool = True) -> DatasetFrame:
    """Read a delimiter-separated file into a column-major DatasetFrame.

    The first row must be the header. Empty fields become missing (None),
    numeric-looking fields become floats, everything else stays text.
    """
    if not header:
        raise ValueError("headerless files are not supported")
    try:
        # utf-8-sig strips a leading BOM, which would otherwise corrupt the
        # first column name and break schema pattern matching
        handle = open(path, "r", encoding="utf-8-sig", newline="")
    except FileNotFoundError:
        raise FileMissingError(f"dataset file not found: {path}") from None
    except OSError as exc:
        raise FileMissingError(f"dataset file unreadable: {path} ({exc})") from None

    with handle:
        reader = csv.reader(handle, delimiter=delimiter)
        try:
            names = next(reader)
        except StopIteration:
            raise MalformedCsvError(f"{path}: file is empty") from None
        names = [n.strip() for n in names]
        if len(set(names)) != len(names):
            raise MalformedCsvError(f"{path}: duplicate column names after trimming")
        n_cols = len(names)
        columns: list[list] = [[] for _ in range(n_cols)]
        for line_no, row in enumerate(reader, start=2):
            if not row:
                continue        # blank line, common in hand-edited files
            if len(row) != n_cols:
                raise MalformedCsvError(
                    f"{path}: row {line_no} has {len(row)} fields, expected {n_cols}"
                )
            for i, raw in enumerate(row):
                columns[i].append(_parse_cell(raw))
    n_rows = len(columns[0]) if columns else 0
    if n_rows == 0:
        raise MalformedCsvError(f"{path}: no data rows after the header")
    return DatasetFrame(column_names=names, columns=columns, n_rows=n_rows)


def _parse_datetime(text: str) -> bool:
    for fmt in _DATETIME_FORMATS:
        try:
            datetime.strptime(text, fmt)
            return True
        except ValueError:
            continue
    try:
        datetime.fromisoformat(text)
        return True
    except ValueError:
        return False


def _profile_column(name: str, cells: list, n_rows: int, cfg: QualityConfig) -> ColumnProfile:
    non_missing = [c for c in cells if c is not None]
    numbers = [c for c in non_missing if isinstance(c, float)]
    texts = [c for c in non_missing if isinstance(c, str)]
    missing_count = n_rows - len(non_missing)
    parse_failures = 0

    unique_count = len({str(c) for c in non_missing})
    if unique_count <= 1:
        dtype = CONSTANT
    elif non_missing and len(numbers) / len(non_missing) >= cfg.numeric_parse_threshold:
        dtype = NUMERIC
        # stray text in a numeric column degrades to missing
        parse_failures = len(texts)
        missing_count += parse_failures
    elif texts and (
        sum(1 for t in texts if _parse_datetime(t)) / len(non_missing)
        >= cfg.datetime_parse_threshold
    ):
        dtype = DATETIME
    else:
        dtype = CATEGORICAL

    effective_non_missing = n_rows - missing_count
    profile = ColumnProfile(
        name=name,
        inferred_dtype=dtype,
        missing_count=missing_count,
        missing_pct=missing_count / n_rows,
        unique_count=unique_count,
        uniqueness_ratio=(unique_count / effective_non_missing) if effective_non_missing else 0.0,
        parse_failure_count=parse_failures,
    )
    if numbers and dtype in (NUMERIC, CONSTANT):
        arr = np.asarray(numbers, dtype=float)
        profile.mean = float(arr.mean())
        profile.std = float(arr.std())            # population denominator
        profile.min = float(arr.min())
        profile.max = float(arr.max())
        profile.integer_valued = bool(np.all(arr == np.floor(arr)))
    return profile


def inspect_frame(frame: DatasetFrame, cfg: QualityConfig | None = None) -> DatasetMetadata:
    """Compute per-column profiles, summary statistics, and a row preview."""
    cfg = cfg or QualityConfig()
    if frame.n_rows < 1 or not frame.column_names:
        raise EmptyFrameError("frame must have at least one row and one column")

    profiles = [
        _profile_column(name, cells, frame.n_rows, cfg)
        for name, cells in zip(frame.column_names, frame.columns)
    ]

    numeric_cols = sum(1 for p in profiles if p.inferred_dtype in (NUMERIC,))
    text_bytes = sum(
        len(cell.encode("utf-8"))
        for col in frame.columns
        for cell in col
        if isinstance(cell, str)
    )
    memory = 8 * frame.n_rows * numeric_cols + text_bytes

    preview = [frame.row(i) for i in range(min(5, frame.n_rows))]
    seen = set()
    duplicates = 0
    for i in range(frame.n_rows):
        key = tuple(str(v) for v in frame.row(i))
        if key in seen:
            duplicates += 1
        else:
            seen.add(key)

    return DatasetMetadata(
        n_rows=frame.n_rows,
        n_cols=len(frame.column_names),
        profiles=profiles,
        estimated_memory_bytes=memory,
        preview=preview,
        duplicate_row_count=duplicates,
    )


def _looks_like_identifier(name: str, patterns: PatternConfig) -> bool:
    normalized = name.strip().lower().replace(" ", "_")
    return any(re.search(p, normalized) for p in patterns.identifier_patterns)


def flag_quality_issues(
    metadata: DatasetMetadata, cfg: QualityConfig | None = None,
    patterns: PatternConfig | None = None,
) -> list[QualityIssue]:
    """Deterministic rule table over the metadata, sorted by (kind, column).

    Identifier-named columns are exempt from the cardinality rule: a unique
    key is healthy, the rule targets miscast categoricals.
    """
    cfg = cfg or QualityConfig()
    patterns = patterns or PatternConfig()
    issues: list[QualityIssue] = []
    for p in metadata.profiles:
        if p.missing_pct > cfg.high_missingness_cutoff:
            issues.append(QualityIssue(
                "high_missingness",
                f"{p.missing_pct:.0%} of values missing",
                column=p.name,
            ))
        if p.inferred_dtype == CONSTANT:
            issues.append(QualityIssue(
                "constant_column", "column holds a single value", column=p.name,
            ))
        if (
            p.inferred_dtype == CATEGORICAL
            and p.uniqueness_ratio > cfg.suspicious_cardinality_cutoff
            and not _looks_like_identifier(p.name, patterns)
        ):
            issues.append(QualityIssue(
                "suspicious_cardinality",
                f"{p.unique_count} distinct values over "
                f"{metadata.n_rows - p.missing_count} rows",
                column=p.name,
            ))
        if p.parse_failure_count:
            issues.append(QualityIssue(
                "parse_failures",
                f"{p.parse_failure_count} cells failed numeric parsing",
                column=p.name,
            ))
    if metadata.duplicate_row_count:
        issues.append(QualityIssue(
            "duplicate_rows", f"{metadata.duplicate_row_count} duplicate rows",
        ))
    issues.sort(key=lambda i: (i.kind, i.column or ""))
    return issues
