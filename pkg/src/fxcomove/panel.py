"""Date-aligned multivariate time-series panels.

A :class:`Panel` holds ``T`` observations on ``m`` named series. Panels are
immutable: every transform returns a new panel and appends a note to
``transform_log``.
"""

from __future__ import annotations

import csv
import math
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .errors import DomainError, IngestionError, SizeError

_INT_RE = re.compile(r"^[+-]?\d+$")
_ISO_RE = re.compile(r"^\d{4}-\d{2}(-\d{2})?([T ][0-9:.+\-Z]*)?$")


@dataclass(frozen=True)
class Panel:
    """Observable process ``X_t``: ``values[t, j]`` is series ``names[j]`` at ``dates[t]``."""

    names: tuple[str, ...]
    dates: tuple
    values: np.ndarray
    transform_log: tuple[str, ...] = ()

    def __post_init__(self):
        values = np.array(self.values, dtype=float, copy=True)
        if values.ndim == 1:
            values = values[:, None]
        if values.ndim != 2:
            raise SizeError("panel values must be a T x m matrix")
        T, m = values.shape
        names = tuple(str(n) for n in self.names)
        dates = tuple(self.dates)
        if T < 1:
            raise SizeError("panel needs at least one observation")
        if len(names) != m:
            raise SizeError(f"{len(names)} names for {m} series")
        if len(set(names)) != m:
            raise IngestionError("series names must be unique")
        if len(dates) != T:
            raise SizeError(f"{len(dates)} dates for {T} rows")
        if not np.all(np.isfinite(values)):
            raise IngestionError("panel contains missing or non-finite values")
        keys = [_date_key(d) for d in dates]
        if any(b <= a for a, b in zip(keys, keys[1:])):
            raise IngestionError("dates must be strictly increasing")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "dates", dates)
        object.__setattr__(self, "transform_log", tuple(self.transform_log))

    @classmethod
    def from_array(cls, values, names: Sequence[str] | None = None, dates=None) -> "Panel":
        """Wrap a bare array, defaulting to names ``x0..`` and an integer date index."""
        arr = np.asarray(values, dtype=float)
        if arr.ndim == 1:
            arr = arr[:, None]
        T, m = arr.shape
        if names is None:
            names = [f"x{j}" for j in range(m)]
        if dates is None:
            dates = range(T)
        return cls(tuple(names), tuple(dates), arr)

    @property
    def T(self) -> int:
        return self.values.shape[0]

    @property
    def m(self) -> int:
        return self.values.shape[1]

    def column(self, name: str) -> np.ndarray:
        return self.values[:, self.names.index(name)]

    def select(self, names: Sequence[str]) -> "Panel":
        idx = [self.names.index(n) for n in names]
        return Panel(tuple(names), self.dates, self.values[:, idx], self.transform_log)

    def with_values(self, values, note: str, dates=None) -> "Panel":
        return Panel(
            self.names,
            self.dates if dates is None else tuple(dates),
            values,
            self.transform_log + (note,),
        )


def _date_key(label):
    if isinstance(label, (int, np.integer)):
        return (0, int(label), "")
    return (1, 0, str(label))


def _parse_date(text: str, row: int):
    text = text.strip()
    if _INT_RE.match(text):
        return int(text)
    if _ISO_RE.match(text):
        return text
    raise IngestionError(f"row {row}: date {text!r} is neither an integer nor ISO-8601")


def load_panel_csv(path, schema: Mapping | None = None) -> Panel:
    """Read a panel from a comma-separated file with a header row.

    Parameters
    ----------
    path : str or Path
        CSV file. The date column defaults to ``date``. Every other column is
        treated as a numeric series unless ``schema`` says otherwise.
    schema : mapping, optional
        ``{"date": <column>, "columns": <list or {csv_name: series_name}>}``.

    Rows are returned in ascending date order. Numbers are parsed with
    :func:`float`, which always uses a dot decimal separator. Empty cells,
    non-numeric cells and duplicate dates raise :class:`IngestionError`
    naming the offending row and column (rows count from 1, header is row 1).
    """
    path = Path(path)
    schema = dict(schema or {})
    date_col = schema.get("date", "date")
    with path.open("r", encoding="utf-8", newline="") as fh:
        rows = list(csv.reader(fh))
    rows = [r for r in rows if any(cell.strip() for cell in r)]
    if not rows:
        raise IngestionError(f"{path}: file is empty")
    header = [h.strip() for h in rows[0]]
    if date_col not in header:
        raise IngestionError(f"{path}: no {date_col!r} column in header")
    wanted = schema.get("columns")
    if wanted is None:
        mapping = {h: h for h in header if h != date_col}
    elif isinstance(wanted, Mapping):
        mapping = dict(wanted)
    else:
        mapping = {c: c for c in wanted}
    missing = [c for c in mapping if c not in header]
    if missing:
        raise IngestionError(f"{path}: columns not found: {missing}")
    if not mapping:
        raise IngestionError(f"{path}: no numeric columns")
    body = rows[1:]
    if not body:
        raise IngestionError(f"{path}: header only, no observations")

    d_idx = header.index(date_col)
    c_idx = [header.index(c) for c in mapping]
    dates = []
    values = np.empty((len(body), len(c_idx)))
    for i, row in enumerate(body):
        line = i + 2
        if len(row) != len(header):
            raise IngestionError(f"row {line}: expected {len(header)} fields, got {len(row)}")
        dates.append(_parse_date(row[d_idx], line))
        for j, c in enumerate(c_idx):
            cell = row[c].strip()
            try:
                v = float(cell)
            except ValueError:
                raise IngestionError(
                    f"row {line}, column {header[c]!r}: non-numeric value {cell!r}"
                ) from None
            if not math.isfinite(v):
                raise IngestionError(f"row {line}, column {header[c]!r}: missing value {cell!r}")
            values[i, j] = v

    kinds = {type(d) for d in dates}
    if len(kinds) > 1:
        raise IngestionError(f"{path}: mixed integer and ISO dates")
    order = sorted(range(len(dates)), key=lambda i: _date_key(dates[i]))
    dates = [dates[i] for i in order]
    for a, b in zip(dates, dates[1:]):
        if a == b:
            raise IngestionError(f"{path}: duplicate date {a!r}")
    note = f"load_csv({path.name})"
    return Panel(tuple(mapping.values()), tuple(dates), values[order], (note,))


def log_transform(p: Panel) -> Panel:
    """Elementwise natural log; every entry must be strictly positive."""
    bad = np.argwhere(p.values <= 0)
    if bad.size:
        t, j = bad[0]
        raise DomainError(
            f"log of non-positive value {p.values[t, j]!r} "
            f"(series {p.names[j]!r}, date {p.dates[t]!r})"
        )
    return p.with_values(np.log(p.values), "log")


def first_difference(p: Panel) -> Panel:
    """``X_t - X_{t-1}``, labelled with the later date."""
    if p.T < 2:
        raise SizeError("first difference needs T >= 2")
    return p.with_values(np.diff(p.values, axis=0), "diff", dates=p.dates[1:])


@dataclass(frozen=True)
class DescriptiveStats:
    series: tuple[str, ...]
    mean: np.ndarray
    sd: np.ndarray
    min: np.ndarray
    max: np.ndarray
    n: int

    def to_dict(self) -> dict:
        return {
            "series": list(self.series),
            "mean": self.mean.tolist(),
            "sd": self.sd.tolist(),
            "min": self.min.tolist(),
            "max": self.max.tolist(),
            "n": int(self.n),
        }


def describe(p: Panel) -> DescriptiveStats:
    """Mean, sample standard deviation (divisor ``T-1``), min, max and N per series."""
    if p.T < 2:
        raise SizeError("describe needs T >= 2 (sample sd undefined)")
    v = p.values
    mean = v.mean(axis=0)
    lo, hi = v.min(axis=0), v.max(axis=0)
    # keep min <= mean <= max despite rounding on constant series
    mean = np.clip(mean, lo, hi)
    return DescriptiveStats(
        series=p.names,
        mean=mean,
        sd=(v - v[0]).std(axis=0, ddof=1),  # shift keeps constant series exactly at 0
        min=lo,
        max=hi,
        n=p.T,
    )
