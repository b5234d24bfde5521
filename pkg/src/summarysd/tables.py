"""Reference divisor tables for n = 1..50 and error-bound utilities.

The tables give the expected normalised range (``xi``) and expected
normalised interquartile range (``eta``) of standard normal samples, as
published upstream.  They are shipped as a plain tab-separated fixture
(``data/divisor_tables.tsv``, one line per n: ``n<TAB>xi<TAB>eta``) so
the transcription is auditable, and are treated as ground truth by the
correction formulas and the refitting pipeline.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from typing import Callable

__all__ = [
    "TableKind",
    "DivisorTable",
    "ErrorBounds",
    "load_tables",
    "xi_table",
    "eta_table",
    "error_bounds",
    "FIXTURE_NAME",
]

FIXTURE_NAME = "divisor_tables.tsv"

N_MIN, N_MAX = 1, 50


class TableKind(enum.Enum):
    XI = "xi"
    ETA = "eta"


@dataclass(frozen=True)
class DivisorTable:
    """Immutable lookup table n -> divisor value for n in 1..50."""

    kind: TableKind
    values: tuple[float, ...]  # index 0 holds n = 1

    def __post_init__(self):
        if len(self.values) != N_MAX:
            raise ValueError(f"expected {N_MAX} entries, got {len(self.values)}")

    def value(self, n: int) -> float:
        if not N_MIN <= n <= N_MAX:
            raise KeyError(f"{self.kind.value} table covers n in {N_MIN}..{N_MAX}, got {n}")
        return self.values[n - 1]

    def __call__(self, n: int) -> float:
        return self.value(n)


@dataclass(frozen=True)
class ErrorBounds:
    """Sup/inf of |reference - approximation| over an integer range."""

    sup_abs: float
    inf_abs: float
    argmax_n: int
    argmin_n: int


def _read_fixture() -> list[tuple[int, float, float]]:
    text = resources.files("summarysd.data").joinpath(FIXTURE_NAME).read_text()
    rows = []
    for line in text.strip().splitlines():
        n_s, xi_s, eta_s = line.split("\t")
        rows.append((int(n_s), float(xi_s), float(eta_s)))
    return rows


@lru_cache(maxsize=1)
def load_tables() -> tuple[DivisorTable, DivisorTable]:
    """Load the (xi, eta) fixture tables, validating their integrity."""
    rows = _read_fixture()
    ns = [r[0] for r in rows]
    if ns != list(range(N_MIN, N_MAX + 1)):
        raise ValueError("fixture must cover n = 1..50 exactly, in order")
    xi_vals = tuple(r[1] for r in rows)
    eta_vals = tuple(r[2] for r in rows)
    if xi_vals[0] != 0.0:
        raise ValueError("xi(1) must be exactly 0")
    if any(b <= a for a, b in zip(xi_vals[1:], xi_vals[2:])):
        raise ValueError("xi must be strictly increasing for n >= 2")
    if any(b < a for a, b in zip(eta_vals, eta_vals[1:])):
        raise ValueError("eta must be non-decreasing")
    return (
        DivisorTable(TableKind.XI, xi_vals),
        DivisorTable(TableKind.ETA, eta_vals),
    )


def xi_table(n: int) -> float:
    """Tabulated expected normalised range for n in 1..50."""
    return load_tables()[0].value(n)


def eta_table(n: int) -> float:
    """Tabulated expected normalised IQR for n in 1..50."""
    return load_tables()[1].value(n)


def error_bounds(
    reference: DivisorTable,
    approx: Callable[[int], float],
    n_min: int,
    n_max: int,
) -> ErrorBounds:
    """Sup and inf of |reference(n) - approx(n)| over n_min..n_max."""
    if n_min < N_MIN or n_max > N_MAX or n_min > n_max:
        raise ValueError(f"range must satisfy {N_MIN} <= n_min <= n_max <= {N_MAX}")
    sup_abs = -1.0
    inf_abs = float("inf")
    argmax_n = argmin_n = n_min
    for n in range(n_min, n_max + 1):
        err = abs(reference.value(n) - approx(n))
        if err > sup_abs:
            sup_abs, argmax_n = err, n
        if err < inf_abs:
            inf_abs, argmin_n = err, n
    return ErrorBounds(sup_abs, inf_abs, argmax_n, argmin_n)
