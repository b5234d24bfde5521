"""Independent numerical recomputation of the divisor tables.

The expected normalised range is recovered by adaptive quadrature of
the order-statistic identity

    E[X_(n) - X_(1)] = integral of z * n * phi(z)
                       * (Phi(z)^(n-1) - (1 - Phi(z))^(n-1)) dz

and the expected normalised IQR by reproducible Monte Carlo under a
choice of quantile conventions.  Neither path reuses the correction
formulas, so either side can audit the other against the fixtures.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad

from . import tables
from .specfun import _quantile_bulk, std_normal_cdf, std_normal_pdf

__all__ = [
    "QuadratureConfig",
    "McConfig",
    "QuantileConvention",
    "QuadratureError",
    "expected_range",
    "expected_iqr",
    "regenerate_tables",
    "RegenerationResult",
]


class QuadratureError(RuntimeError):
    """Quadrature failed to reach the requested tolerance."""


class QuantileConvention(enum.Enum):
    """How sample quartiles are read off the order statistics.

    BLOM_INTERP
        Linear interpolation at rank h = p (n + 0.25) + 0.375.
    TYPE7_INTERP
        Linear interpolation at rank h = (n - 1) p + 1 (the common
        spreadsheet/NumPy default).
    NEAREST_RANK
        Order statistic at round((n + 1) p), ties to even.
    QUARTER_GROUPS
        Treats the table index q as a quartile-group count: sample size
        4q + 1 with Q1 and Q3 the exact order statistics at positions
        q + 1 and 3q + 1.  This is the convention that reproduces the
        reference table (see the regeneration report).
    """

    BLOM_INTERP = "blom"
    TYPE7_INTERP = "type7"
    NEAREST_RANK = "nearest"
    QUARTER_GROUPS = "quarter-groups"


@dataclass(frozen=True)
class QuadratureConfig:
    abs_tol: float = 1e-9
    rel_tol: float = 1e-9
    integration_bound: float = 8.0

    def __post_init__(self):
        if self.abs_tol <= 0 or self.rel_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.integration_bound < 8.0:
            raise ValueError("integration bound must be at least 8")


@dataclass(frozen=True)
class McConfig:
    replications: int = 1_000_000
    seed: int = 0
    quantile_convention: QuantileConvention = QuantileConvention.QUARTER_GROUPS
    chunk_size: int = 100_000

    def __post_init__(self):
        if self.replications < 10_000:
            raise ValueError("need at least 10^4 replications")
        if self.chunk_size < 1:
            raise ValueError("chunk size must be positive")

    def chunk_schedule(self) -> list[int]:
        """Deterministic chunk sizes summing to ``replications``."""
        full, rem = divmod(self.replications, self.chunk_size)
        sched = [self.chunk_size] * full
        if rem:
            sched.append(rem)
        return sched


def expected_range(n: int, cfg: QuadratureConfig = QuadratureConfig()) -> float:
    """Expected range of n standard normal observations, by quadrature."""
    if n < 2:
        raise ValueError(f"expected range defined for n >= 2, got {n}")

    def integrand(z: float) -> float:
        c = std_normal_cdf(z)
        return z * n * std_normal_pdf(z) * (c ** (n - 1) - (1.0 - c) ** (n - 1))

    b = cfg.integration_bound
    value, abserr = quad(
        integrand, -b, b, epsabs=cfg.abs_tol, epsrel=cfg.rel_tol, limit=200
    )
    if abserr > 10 * max(cfg.abs_tol, cfg.rel_tol * abs(value)):
        raise QuadratureError(
            f"expected_range(n={n}): error estimate {abserr:.3e} exceeds budget "
            f"(abs_tol={cfg.abs_tol:.1e}, rel_tol={cfg.rel_tol:.1e})"
        )
    return value


def _chunk_iqr(rng: np.random.Generator, n: int, rows: int, conv: QuantileConvention) -> np.ndarray:
    """IQR of ``rows`` samples under the given convention.

    Sampling is inverse-transform through the audited normal quantile so
    the oracle has a single accuracy surface.
    """
    if conv is QuantileConvention.QUARTER_GROUPS:
        m = 4 * n + 1
        z = _quantile_bulk(rng.random((rows, m)))
        part = np.partition(z, (n, 3 * n), axis=1)
        return part[:, 3 * n] - part[:, n]

    z = np.sort(_quantile_bulk(rng.random((rows, n))), axis=1)
    out = []
    for p in (0.25, 0.75):
        if conv is QuantileConvention.BLOM_INTERP:
            h = p * (n + 0.25) + 0.375
        elif conv is QuantileConvention.TYPE7_INTERP:
            h = (n - 1) * p + 1.0
        else:  # NEAREST_RANK
            h = float(round((n + 1) * p))
        h = min(max(h, 1.0), float(n))
        lo = int(math.floor(h))
        hi = min(lo + 1, n)
        frac = h - lo
        out.append(z[:, lo - 1] * (1.0 - frac) + z[:, hi - 1] * frac)
    return out[1] - out[0]


def expected_iqr(n: int, cfg: McConfig = McConfig()) -> tuple[float, float]:
    """Monte Carlo expected IQR of n normals: (estimate, std. error).

    Output is a deterministic function of (seed, replications,
    chunk_size, convention): each chunk draws from its own spawned
    stream in schedule order, so the result cannot depend on execution
    parallelism.
    """
    if n < 2:
        raise ValueError(f"expected IQR defined for n >= 2, got {n}")
    schedule = cfg.chunk_schedule()
    streams = np.random.SeedSequence(cfg.seed).spawn(len(schedule))
    total = 0.0
    total_sq = 0.0
    for rows, ss in zip(schedule, streams):
        iqr = _chunk_iqr(np.random.Generator(np.random.PCG64(ss)), n,
                         rows, cfg.quantile_convention)
        total += float(iqr.sum())
        total_sq += float(np.square(iqr).sum())
    reps = cfg.replications
    mean = total / reps
    var = max(total_sq / reps - mean * mean, 0.0)
    return mean, math.sqrt(var / reps)


@dataclass
class RegenerationResult:
    """Regenerated divisor values plus deviations from the fixtures."""

    n_values: list[int]
    xi: dict[int, float] = field(default_factory=dict)
    eta: dict[QuantileConvention, dict[int, tuple[float, float]]] = field(default_factory=dict)
    best_convention: QuantileConvention | None = None

    def xi_deviations(self) -> dict[int, float]:
        xi_tab, _ = tables.load_tables()
        return {n: self.xi[n] - xi_tab.value(n) for n in self.xi}

    def eta_deviations(self, conv: QuantileConvention) -> dict[int, float]:
        _, eta_tab = tables.load_tables()
        return {n: est - eta_tab.value(n) for n, (est, _) in self.eta[conv].items()}

    def max_eta_deviation(self, conv: QuantileConvention) -> float:
        return max(abs(d) for d in self.eta_deviations(conv).values())

    def fixture_lines(self, conv: QuantileConvention | None = None) -> list[str]:
        """Rows in the fixture format ``n<TAB>xi<TAB>eta`` (blank if absent)."""
        conv = conv or self.best_convention
        lines = []
        for n in self.n_values:
            xi_s = f"{self.xi[n]:.6f}" if n in self.xi else ""
            eta_s = ""
            if conv is not None and conv in self.eta and n in self.eta[conv]:
                eta_s = f"{self.eta[conv][n][0]:.6f}"
            lines.append(f"{n}\t{xi_s}\t{eta_s}")
        return lines

    def report_lines(self) -> list[str]:
        """Per-n deviation sidecar, one convention block at a time."""
        lines = []
        if self.xi:
            dev = self.xi_deviations()
            lines.append("# range divisor (quadrature) deviation from fixture")
            for n in sorted(dev):
                lines.append(f"xi\t{n}\t{self.xi[n]:.6f}\t{dev[n]:+.6f}")
        for conv in self.eta:
            dev = self.eta_deviations(conv)
            lines.append(f"# IQR divisor (Monte Carlo, convention={conv.value})")
            for n in sorted(dev):
                est, se = self.eta[conv][n]
                lines.append(f"eta\t{n}\t{est:.6f}\t{dev[n]:+.6f}\t{se:.6f}")
            lines.append(
                f"# convention={conv.value} max |deviation| = "
                f"{self.max_eta_deviation(conv):.6f}"
            )
        if self.best_convention is not None:
            lines.append(f"# best convention: {self.best_convention.value}")
        return lines


def regenerate_tables(
    cfg_q: QuadratureConfig = QuadratureConfig(),
    cfg_mc: McConfig = McConfig(),
    n_min: int = 2,
    n_max: int = 50,
    which: str = "both",
    conventions: tuple[QuantileConvention, ...] | None = None,
) -> RegenerationResult:
    """Recompute divisor tables over n_min..n_max.

    ``which`` selects "xi", "eta" or "both".  For eta, every requested
    convention is run and the one with the smallest maximum deviation
    from the fixture table is flagged as best.
    """
    ns = list(range(n_min, n_max + 1))
    result = RegenerationResult(n_values=ns)
    if which in ("xi", "both"):
        for n in ns:
            result.xi[n] = expected_range(n, cfg_q)
    if which in ("eta", "both"):
        convs = conventions or tuple(QuantileConvention)
        for conv in convs:
            conv_cfg = McConfig(
                replications=cfg_mc.replications,
                seed=cfg_mc.seed,
                quantile_convention=conv,
                chunk_size=cfg_mc.chunk_size,
            )
            result.eta[conv] = {n: expected_iqr(n, conv_cfg) for n in ns}
        result.best_convention = min(result.eta, key=result.max_eta_deviation)
    return result
