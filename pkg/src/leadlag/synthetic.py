"""Seeded synthetic demonstration dataset: 13 monthly indicators, 42 rows.

A latent AR(1) factor drives twelve indicator series (s02..s13), each mixing
the factor with its own AR(1) idiosyncratic component plus per-variable
volatility and drift. The first series, s01, is planted as the known top of
the "influential" ranking: its monthly change tracks the latent factor two
to three months earlier, so every driver sends heavy edges into s01 in the
toward-lead orientation and s01 wins the PageRank argmax under all three
metrics once the decay parameter is moderate (a >= 0.5), for any reasonable
damping.

Everything derives from one fixed seed, so the bundled CSV can be
regenerated bit-for-bit.
"""

from __future__ import annotations

import numpy as np

from .ingest import TimeSeriesTable

SEED = 20240711
N_VARIABLES = 13
N_MONTHS = 42
PLANTED_VARIABLE = "s01"

_AR_COEFF = 0.3
_BURN_IN = 12
_FACTOR_LOADING = 0.7  # each driver's weight on the latent factor
_SIGNAL_LAG2 = 0.93  # s01's response to the factor two months back
_SIGNAL_LAG3 = 0.25  # ...and three months back
_SIGNAL_SHARE = 0.96  # fraction of s01's return variance that is signal
_PLANTED_VOL = 0.045
_PLANTED_DRIFT = 0.004


def variable_names() -> tuple[str, ...]:
    return tuple(f"s{i + 1:02d}" for i in range(N_VARIABLES))


def month_stamps() -> tuple[str, ...]:
    stamps = []
    year, month = 2019, 7
    for _ in range(N_MONTHS):
        stamps.append(f"{year:04d}-{month:02d}")
        month += 1
        if month > 12:
            year, month = year + 1, 1
    return tuple(stamps)


def _ar1_paths(rng: np.random.Generator, length: int, n_series: int) -> np.ndarray:
    """Unit-variance AR(1) paths, one per column."""
    scale = np.sqrt(1.0 - _AR_COEFF**2)
    shocks = rng.standard_normal((length, n_series))
    paths = np.empty_like(shocks)
    paths[0] = shocks[0]
    for t in range(1, length):
        paths[t] = _AR_COEFF * paths[t - 1] + scale * shocks[t]
    return paths


def generate_table(seed: int = SEED) -> TimeSeriesTable:
    """Build the demonstration table of raw monthly levels."""
    rng = np.random.default_rng(seed)
    n_returns = N_MONTHS - 1
    total = n_returns + _BURN_IN
    n_drivers = N_VARIABLES - 1

    factor = _ar1_paths(rng, total, 1)[:, 0]
    idiosyncratic = _ar1_paths(rng, total, n_drivers)
    drivers = (
        _FACTOR_LOADING * factor[:, None]
        + np.sqrt(1.0 - _FACTOR_LOADING**2) * idiosyncratic
    )

    # s01 follows the factor with a 2-3 month delay plus its own noise.
    signal = np.zeros(total)
    signal[2:] += _SIGNAL_LAG2 * factor[:-2]
    signal[3:] += _SIGNAL_LAG3 * factor[:-3]
    signal_var = (
        _SIGNAL_LAG2**2
        + _SIGNAL_LAG3**2
        + 2.0 * _SIGNAL_LAG2 * _SIGNAL_LAG3 * _AR_COEFF
    )
    planted = np.sqrt(_SIGNAL_SHARE / signal_var) * signal + np.sqrt(
        1.0 - _SIGNAL_SHARE
    ) * rng.standard_normal(total)

    vols = np.geomspace(0.008, 0.05, n_drivers)
    drifts = np.linspace(0.001, 0.008, n_drivers)
    returns = np.empty((n_returns, N_VARIABLES))
    returns[:, 0] = _PLANTED_DRIFT + _PLANTED_VOL * planted[_BURN_IN:]
    returns[:, 1:] = drifts + vols * drivers[_BURN_IN:]

    levels = np.empty((N_MONTHS, N_VARIABLES))
    levels[0] = 100.0 * (1.0 + np.arange(N_VARIABLES))
    for t in range(n_returns):
        levels[t + 1] = levels[t] * (1.0 + returns[t])

    return TimeSeriesTable(variable_names(), levels, month_stamps())


def to_csv_text(table: TimeSeriesTable) -> str:
    """Render a table in the toolkit's CSV input format (exact floats)."""
    lines = ["date," + ",".join(table.variable_names)]
    for t in range(table.n_steps):
        stamp = table.timestamps[t] if table.timestamps else str(t)
        cells = ",".join(repr(float(x)) for x in table.values[t])
        lines.append(f"{stamp},{cells}")
    return "\n".join(lines) + "\n"
