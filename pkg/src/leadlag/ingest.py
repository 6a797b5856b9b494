"""CSV loading, rate-of-change transform, and lagged-panel construction.

The input format is deliberately narrow: UTF-8, comma-separated, one header
row of unique variable names, optionally a leading date column (detected by
an ISO-8601 parse of the first body cell), then a fully numeric body with
plain decimal points. Anything else is rejected with an error naming the
offending row and column.
"""

from __future__ import annotations

import csv
import math
import re
from dataclasses import dataclass

import numpy as np

from .errors import DataError, UsageError

_ISO_MONTH = re.compile(r"^\d{4}-\d{2}(-\d{2})?$")

#: Fewest overlapping samples any pairwise metric may see (kNN estimators
#: with k=3 need k+1 points; correlation needs 3).
MIN_OVERLAP = 3


@dataclass(frozen=True)
class CsvOptions:
    """Parsing knobs for :func:`load_csv`.

    detect_dates: when True (default), a first column whose first body cell
    parses as an ISO-8601 date (YYYY-MM or YYYY-MM-DD) is treated as the
    timestamp column rather than a variable.
    """

    delimiter: str = ","
    detect_dates: bool = True


@dataclass(frozen=True)
class TimeSeriesTable:
    """Aligned multivariate series in raw levels, one column per variable."""

    variable_names: tuple[str, ...]
    values: np.ndarray  # shape (T, V), float64
    timestamps: tuple[str, ...] | None = None

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", values)
        if values.ndim != 2 or values.shape[1] != len(self.variable_names):
            raise DataError("value matrix shape does not match variable names")
        if values.shape[0] < 2:
            raise DataError("need at least 2 rows of observations")
        if len(set(self.variable_names)) != len(self.variable_names):
            raise DataError("variable names must be unique")
        if any(not name for name in self.variable_names):
            raise DataError("variable names must be non-empty")
        if not np.all(np.isfinite(values)):
            t, i = np.argwhere(~np.isfinite(values))[0]
            raise DataError(
                f"non-finite value at row {t + 1}, column '{self.variable_names[i]}'"
            )
        if self.timestamps is not None and len(self.timestamps) != values.shape[0]:
            raise DataError("timestamp count does not match row count")

    @property
    def n_steps(self) -> int:
        return self.values.shape[0]

    @property
    def n_variables(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True)
class ReturnsTable:
    """Per-step rates of change, stored as fractions (0.10 = +10%)."""

    variable_names: tuple[str, ...]
    returns: np.ndarray  # shape (T-1, V)

    def __post_init__(self):
        returns = np.asarray(self.returns, dtype=float)
        object.__setattr__(self, "returns", returns)
        if not np.all(np.isfinite(returns)):
            raise DataError("returns contain non-finite values")

    @property
    def n_samples(self) -> int:
        return self.returns.shape[0]

    @property
    def n_variables(self) -> int:
        return self.returns.shape[1]


@dataclass(frozen=True)
class LaggedPanel:
    """All lags 0..max_lag of every return series.

    The lag-k series of variable i, indexed by panel time t, equals the base
    series at t-k; stored as the base prefix of length (T-1)-k, so entry s of
    the stored array is base[s] observed at panel time s+k.
    """

    base: ReturnsTable
    max_lag: int

    def __post_init__(self):
        t1 = self.base.n_samples
        if not 0 <= self.max_lag <= t1 - MIN_OVERLAP:
            raise UsageError(
                f"max_lag must be in [0, {t1 - MIN_OVERLAP}] for {t1} return rows, "
                f"got {self.max_lag}"
            )

    @property
    def n_variables(self) -> int:
        return self.base.n_variables

    @property
    def n_series(self) -> int:
        return self.base.n_variables * (self.max_lag + 1)

    def series(self, var: int, lag: int) -> np.ndarray:
        """Stored values of the lag-`lag` view of variable `var`."""
        self._check_id(var, lag)
        t1 = self.base.n_samples
        return self.base.returns[: t1 - lag, var]

    def series_length(self, lag: int) -> int:
        return self.base.n_samples - lag

    def _check_id(self, var: int, lag: int) -> None:
        if not 0 <= var < self.n_variables:
            raise UsageError(f"variable index {var} out of range")
        if not 0 <= lag <= self.max_lag:
            raise UsageError(f"lag {lag} out of range [0, {self.max_lag}]")


@dataclass(frozen=True)
class AlignedPair:
    """Time-aligned overlap of two lagged series.

    offsets record where each slice starts inside its stored lag array, which
    the estimators use to key tie-breaking jitter to (variable, lag, sample)
    rather than to the pair.
    """

    xs: np.ndarray
    ys: np.ndarray
    id_x: tuple[int, int]  # (variable index, lag)
    id_y: tuple[int, int]
    offset_x: int = 0
    offset_y: int = 0

    def __post_init__(self):
        object.__setattr__(self, "xs", np.asarray(self.xs, dtype=float))
        object.__setattr__(self, "ys", np.asarray(self.ys, dtype=float))
        if self.xs.shape != self.ys.shape or self.xs.ndim != 1:
            raise DataError("aligned pair requires two equal-length vectors")

    @property
    def n(self) -> int:
        return self.xs.shape[0]

    def swapped(self) -> "AlignedPair":
        return AlignedPair(
            self.ys, self.xs, self.id_y, self.id_x, self.offset_y, self.offset_x
        )


def _parse_iso_date(cell: str) -> bool:
    return bool(_ISO_MONTH.match(cell.strip()))


def load_csv(path, options: CsvOptions = CsvOptions()) -> TimeSeriesTable:
    """Load and validate a multivariate series from CSV.

    Column order is preserved. Errors name the 1-based body row and the
    column involved.
    """
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            rows = list(csv.reader(fh, delimiter=options.delimiter))
    except OSError as exc:
        raise DataError(f"cannot read '{path}': {exc}") from exc

    rows = [row for row in rows if row and any(cell.strip() for cell in row)]
    if len(rows) < 3:
        raise DataError("CSV needs a header row and at least 2 data rows")

    header, body = rows[0], rows[1:]
    width = len(header)
    for r, row in enumerate(body, start=1):
        if len(row) != width:
            raise DataError(
                f"ragged row {r}: expected {width} cells, found {len(row)}"
            )

    has_dates = options.detect_dates and _parse_iso_date(body[0][0])
    timestamps: tuple[str, ...] | None = None
    if has_dates:
        stamps = []
        for r, row in enumerate(body, start=1):
            cell = row[0].strip()
            if not _parse_iso_date(cell):
                raise DataError(
                    f"row {r}, column '{header[0]}': expected ISO-8601 date, got '{row[0]}'"
                )
            stamps.append(cell)
        timestamps = tuple(stamps)

    first_var = 1 if has_dates else 0
    names = tuple(name.strip() for name in header[first_var:])
    if len(set(names)) != len(names):
        dupe = next(n for n in names if names.count(n) > 1)
        raise DataError(f"duplicate variable name '{dupe}' in header")
    if any(not n for n in names):
        raise DataError("empty variable name in header")

    values = np.empty((len(body), len(names)))
    for r, row in enumerate(body, start=1):
        for c, name in enumerate(names):
            cell = row[first_var + c].strip()
            try:
                value = float(cell)
            except ValueError:
                raise DataError(
                    f"row {r}, column '{name}': non-numeric cell '{row[first_var + c]}'"
                ) from None
            if not math.isfinite(value):
                raise DataError(f"row {r}, column '{name}': non-finite value '{cell}'")
            values[r - 1, c] = value

    return TimeSeriesTable(names, values, timestamps)


def rate_of_change(table: TimeSeriesTable) -> ReturnsTable:
    """Per-step fractional change, (x[t+1] - x[t]) / x[t]; length T-1."""
    raw = table.values
    denom = raw[:-1]
    if np.any(denom == 0.0):
        t, i = np.argwhere(denom == 0.0)[0]
        raise DataError(
            f"zero level at row {t + 1}, column '{table.variable_names[i]}': "
            "rate of change undefined"
        )
    return ReturnsTable(table.variable_names, (raw[1:] - denom) / denom)


def build_lags(returns: ReturnsTable, max_lag: int) -> LaggedPanel:
    """Panel of all lags 0..max_lag; V*(max_lag+1) logical series."""
    return LaggedPanel(returns, max_lag)


def align_pair(
    panel: LaggedPanel, a: tuple[int, int], b: tuple[int, int]
) -> AlignedPair:
    """Maximal time-aligned overlap of two lagged series.

    The overlap has n = (T-1) - max(k, m) samples; the deeper-lagged series
    contributes its earliest rows, the shallower one its latest.
    """
    (i, k), (j, m) = a, b
    panel._check_id(i, k)
    panel._check_id(j, m)
    deepest = max(k, m)
    n = panel.base.n_samples - deepest
    if n < MIN_OVERLAP:
        raise DataError(
            f"pair ({i},{k})/({j},{m}) overlaps in only {n} samples; need >= {MIN_OVERLAP}"
        )
    off_x = deepest - k
    off_y = deepest - m
    xs = panel.series(i, k)[off_x : off_x + n]
    ys = panel.series(j, m)[off_y : off_y + n]
    return AlignedPair(xs, ys, (i, k), (j, m), off_x, off_y)
