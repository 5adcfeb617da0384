"""Growth-exponent estimation: log-log least squares plus a percentile bootstrap."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

CONVENTIONS = ("log-of-means", "mean-of-logs")
HYPOTHESIS = 48 / 19


@dataclass
class SizeTable:
    """Observed surface sizes grouped by lattice size."""

    samples: dict[int, np.ndarray] = field(default_factory=dict)

    @classmethod
    def from_mapping(cls, data: Mapping[int, Iterable[float]]) -> "SizeTable":
        return cls({int(n): np.asarray(list(v), dtype=np.float64) for n, v in data.items()})

    @classmethod
    def from_records(cls, records: Iterable[tuple[int, float]]) -> "SizeTable":
        grouped: dict[int, list[float]] = {}
        for n, size in records:
            grouped.setdefault(int(n), []).append(float(size))
        return cls.from_mapping(grouped)

    @property
    def ns(self) -> list[int]:
        return sorted(self.samples)

    def replicates(self, n: int) -> int:
        return len(self.samples[n])

    def mean(self, n: int) -> float:
        return float(np.mean(self.samples[n]))

    def __len__(self) -> int:
        return sum(len(v) for v in self.samples.values())


@dataclass(frozen=True)
class ExponentEstimate:
    slope: float
    intercept: float
    ns: tuple[int, ...]
    means: tuple[float, ...]
    convention: str = "log-of-means"
    replicates: int = 0
    lo: float | None = None
    hi: float | None = None
    alpha: float | None = None

    @property
    def has_interval(self) -> bool:
        return self.lo is not None

    def contains(self, value: float) -> bool:
        if not self.has_interval:
            raise ValueError("no interval: run bootstrap_ci")
        return self.lo <= value <= self.hi

    def as_dict(self) -> dict:
        return {
            "slope": self.slope,
            "intercept": self.intercept,
            "convention": self.convention,
            "ns": list(self.ns),
            "means": list(self.means),
            "bootstrap_replicates": self.replicates,
            "alpha": self.alpha,
            "interval": [self.lo, self.hi] if self.has_interval else None,
            "contains_48_19": self.contains(HYPOTHESIS) if self.has_interval else None,
        }


def _ols(x: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Row-wise least squares of y (B, k) on x (k,); returns (slopes, intercepts)."""
    # elementwise row sums, not BLAS: a 1-row and a B-row fit must round identically
    xc = x - x.mean()
    ybar = y.mean(axis=1)
    slope = ((y - ybar[:, None]) * xc).sum(axis=1) / (xc * xc).sum()
    return slope, ybar - slope * x.mean()


def _level(samples: np.ndarray, idx: np.ndarray, convention: str) -> np.ndarray:
    """Per-resample log level of one n; ``idx`` has shape (B, reps)."""
    picked = samples[idx]
    if convention == "log-of-means":
        return np.log(picked.mean(axis=1))
    return np.log(picked).mean(axis=1)


def _validate(table: SizeTable, convention: str) -> None:
    if convention not in CONVENTIONS:
        raise ValueError(f"unknown convention {convention!r}; pick one of {CONVENTIONS}")
    ns = [n for n in table.ns if len(table.samples[n])]
    if len(ns) < 2:
        raise ValueError("need at least two distinct lattice sizes with samples")
    if len(ns) != len(table.ns):
        raise ValueError("every lattice size in the table needs at least one sample")
    for n in ns:
        if n <= 0 or np.any(table.samples[n] <= 0):
            raise ValueError(f"non-positive lattice size or surface size at n={n}")


def _fit(table: SizeTable, idx: dict[int, np.ndarray], convention: str):
    ns = table.ns
    x = np.log(np.asarray(ns, dtype=np.float64))
    y = np.stack([_level(table.samples[n], idx[n], convention) for n in ns], axis=1)
    return _ols(x, y)


def fit_exponent(table: SizeTable, convention: str = "log-of-means") -> ExponentEstimate:
    """Slope of the least-squares line through (log n, log M_n), one point per n."""
    _validate(table, convention)
    ident = {n: np.arange(table.replicates(n))[None, :] for n in table.ns}
    slope, intercept = _fit(table, ident, convention)
    return ExponentEstimate(
        slope=float(slope[0]),
        intercept=float(intercept[0]),
        ns=tuple(table.ns),
        means=tuple(table.mean(n) for n in table.ns),
        convention=convention,
    )


def percentile_interval(values: np.ndarray, alpha: float) -> tuple[float, float]:
    """Drop the lowest and highest alpha/2 fraction of the sorted values."""
    v = np.sort(np.asarray(values, dtype=np.float64))
    k = int(math.floor(len(v) * alpha / 2 + 1e-9))
    return float(v[k]), float(v[len(v) - 1 - k])


def bootstrap_ci(
    table: SizeTable,
    B: int = 1000,
    alpha: float = 0.05,
    rng: np.random.Generator | int | None = 0,
    convention: str = "log-of-means",
) -> ExponentEstimate:
    """Point estimate plus a nonparametric percentile bootstrap interval.

    Each replicate resamples, with replacement, the samples within every n
    separately and refits the slope.
    """
    if B < 100:
        raise ValueError("need at least 100 bootstrap replicates")
    if not 0 < alpha < 1:
        raise ValueError("alpha must lie in (0, 1)")
    point = fit_exponent(table, convention)
    gen = rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)
    idx = {n: gen.integers(0, table.replicates(n), size=(B, table.replicates(n))) for n in table.ns}
    slopes, _ = _fit(table, idx, convention)
    lo, hi = percentile_interval(slopes, alpha)
    if not lo <= point.slope <= hi:
        warnings.warn(
            f"point estimate {point.slope:.6f} outside bootstrap interval [{lo:.6f}, {hi:.6f}]",
            RuntimeWarning,
            stacklevel=2,
        )
    return ExponentEstimate(
        slope=point.slope,
        intercept=point.intercept,
        ns=point.ns,
        means=point.means,
        convention=convention,
        replicates=B,
        lo=lo,
        hi=hi,
        alpha=alpha,
    )


@dataclass(frozen=True)
class Summary:
    n: int
    count: int
    min: float
    q1: float
    median: float
    q3: float
    max: float
    mean: float


def summarize(table: SizeTable) -> list[Summary]:
    """Five-number summary and mean per n (linearly interpolated quartiles)."""
    out = []
    for n in table.ns:
        s = table.samples[n]
        if len(s) == 0:
            raise ValueError(f"no samples at n={n}")
        q = np.percentile(s, [0, 25, 50, 75, 100])
        out.append(Summary(n, len(s), *(float(v) for v in q), float(np.mean(s))))
    return out
