"""Ingestion of external eigenvalue data and distribution comparison.

Samples arrive as CSV rows (level_norm, place_q, x, weight); rows violating
the domain bounds are rejected one by one with a count.  The comparison
machinery builds the theoretical CDF of a chosen density on a fixed fine
grid (Kronrod panels, no adaptivity, hence byte-stable) and reports the
weighted Kolmogorov-Smirnov distance plus per-interval discrepancies.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError
from .measures import Density, integrate_density

CSV_COLUMNS = ("level_norm", "place_q", "x", "weight")


@dataclass(frozen=True)
class EmpiricalSample:
    """Weighted eigenvalue observations, all inside [-2, 2]."""

    level_norm: np.ndarray
    place_q: np.ndarray
    x: np.ndarray
    weight: np.ndarray

    def __post_init__(self) -> None:
        n = len(self.x)
        if not (len(self.level_norm) == len(self.place_q) == len(self.weight) == n):
            raise ValueError("column lengths disagree")

    def __len__(self) -> int:
        return len(self.x)

    def total_weight(self) -> float:
        return float(np.sum(self.weight))


def _validate_row(
    level_norm: int, place_q: int, x: float, weight: float, lo: float, hi: float
) -> None:
    if level_norm < 1:
        raise DomainError("level_norm must be a positive integer")
    if place_q < 2:
        raise DomainError("place_q must be at least 2")
    if not (lo <= x <= hi):
        raise DomainError(f"x must lie in [{lo}, {hi}]")
    if not (math.isfinite(weight) and weight >= 0.0):
        raise DomainError("weight must be finite and nonnegative")


def sample_from_rows(
    rows: Iterable[tuple[int, int, float, float]],
    lo: float = -2.0,
    hi: float = 2.0,
) -> tuple[EmpiricalSample, int]:
    """Build a sample, rejecting invalid rows; returns (sample, rejected count).

    The default domain bounds are the normalized-eigenvalue interval [-2, 2];
    pass the spectral window instead when the observations are per-place
    spectral parameters.
    """
    kept: list[tuple[int, int, float, float]] = []
    rejected = 0
    for level_norm, place_q, x, weight in rows:
        try:
            _validate_row(int(level_norm), int(place_q), float(x), float(weight), lo, hi)
        except (DomainError, ValueError):
            rejected += 1
            continue
        kept.append((int(level_norm), int(place_q), float(x), float(weight)))
    if kept:
        arr = np.array(kept, dtype=float)
        sample = EmpiricalSample(
            level_norm=arr[:, 0].astype(int),
            place_q=arr[:, 1].astype(int),
            x=arr[:, 2],
            weight=arr[:, 3],
        )
    else:
        empty = np.array([], dtype=float)
        sample = EmpiricalSample(empty.astype(int), empty.astype(int), empty, empty)
    return sample, rejected


def read_sample_csv(
    text: str, lo: float = -2.0, hi: float = 2.0
) -> tuple[EmpiricalSample, int]:
    """Parse CSV with the mandatory header (level_norm, place_q, x, weight)."""
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise ValueError("empty CSV: the header row is mandatory")
    if tuple(h.strip() for h in header) != CSV_COLUMNS:
        raise ValueError(f"CSV header must be exactly {','.join(CSV_COLUMNS)}")
    rows = []
    for row in reader:
        if not row:
            continue
        if len(row) != 4:
            raise ValueError(f"malformed CSV row: {row!r}")
        rows.append((int(row[0]), int(row[1]), float(row[2]), float(row[3])))
    return sample_from_rows(rows, lo, hi)


def write_sample_csv(sample: EmpiricalSample) -> str:
    """Serialize with repr-exact floats so reading back is lossless."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for ln, pq, x, w in zip(sample.level_norm, sample.place_q, sample.x, sample.weight):
        writer.writerow([int(ln), int(pq), repr(float(x)), repr(float(w))])
    return out.getvalue()


# ---------------------------------------------------------------------------
# theoretical CDF on a fixed grid

_KRONROD = (
    (0.000000000000000000000000000000000, 0.209482141084727828012999174891714),
    (0.207784955007898467600689403773245, 0.204432940075298892414161999234649),
    (-0.207784955007898467600689403773245, 0.204432940075298892414161999234649),
    (0.405845151377397166906606412076961, 0.190350578064785409913256402421014),
    (-0.405845151377397166906606412076961, 0.190350578064785409913256402421014),
    (0.586087235467691130294144838258730, 0.169004726639267902826583426598550),
    (-0.586087235467691130294144838258730, 0.169004726639267902826583426598550),
    (0.741531185599394439863864773280788, 0.140653259715525918745189590510238),
    (-0.741531185599394439863864773280788, 0.140653259715525918745189590510238),
    (0.864864423359769072789712788640926, 0.104790010322250183839876322541518),
    (-0.864864423359769072789712788640926, 0.104790010322250183839876322541518),
    (0.949107912342758524526189684047851, 0.063092092629978553290700663189204),
    (-0.949107912342758524526189684047851, 0.063092092629978553290700663189204),
    (0.991455371120812639206854697526329, 0.022935322010529224963732008058970),
    (-0.991455371120812639206854697526329, 0.022935322010529224963732008058970),
)


class CdfInterpolator:
    """CDF of a density on a finite interval, tabulated on a fixed grid.

    Semicircle-type densities on [-2, 2] get a theta-uniform grid through
    x = 2 cos(theta), which concentrates nodes at the square-root endpoints
    and keeps the substituted integrand smooth; other densities (e.g. the
    finite-place spectral windows) use a uniform grid.  Fixed Kronrod panels
    per cell keep the table byte-stable.
    """

    def __init__(self, density: Density, grid: int = 2048):
        if not math.isfinite(density.hi - density.lo):
            raise ValueError("CDF tabulation needs a finite domain")
        increments = np.empty(grid)
        if density.cos_substitution:
            thetas = np.linspace(math.pi, 0.0, grid + 1)  # x ascending from -2 to 2
            xs = 2.0 * np.cos(thetas)
            for i in range(grid):
                t0, t1 = thetas[i], thetas[i + 1]  # t0 > t1
                half = 0.5 * (t1 - t0)
                mid = 0.5 * (t0 + t1)
                acc = 0.0
                for node, wk in _KRONROD:
                    theta = mid + half * node
                    acc += wk * density.fn(2.0 * math.cos(theta)) * 2.0 * math.sin(theta)
                increments[i] = acc * -half  # orientation: decreasing theta
        else:
            xs = np.linspace(density.lo, density.hi, grid + 1)
            for i in range(grid):
                half = 0.5 * (xs[i + 1] - xs[i])
                mid = 0.5 * (xs[i] + xs[i + 1])
                acc = 0.0
                for node, wk in _KRONROD:
                    acc += wk * density.fn(mid + half * node)
                increments[i] = acc * half
        cdf = np.concatenate([[0.0], np.cumsum(increments)])
        self.total = float(cdf[-1])
        self.xs = xs
        self.cdf = cdf / self.total

    def __call__(self, x: np.ndarray | float) -> np.ndarray | float:
        return np.interp(x, self.xs, self.cdf)

    def inverse(self, u: np.ndarray) -> np.ndarray:
        return np.interp(u, self.cdf, self.xs)


def inverse_cdf_sample(
    density: Density, size: int, seed: int = 0, grid: int = 4096
) -> np.ndarray:
    """Draw iid points from a finite-domain density through the tabulated CDF."""
    interp = CdfInterpolator(density, grid)
    rng = np.random.default_rng(seed)
    return interp.inverse(rng.random(size))


def ks_distance(sample: EmpiricalSample, density: Density, grid: int = 2048) -> float:
    """Weighted Kolmogorov-Smirnov distance against the density's CDF."""
    if len(sample) == 0:
        raise ValueError("KS distance of an empty sample")
    interp = CdfInterpolator(density, grid)
    order = np.argsort(sample.x, kind="stable")
    xs = sample.x[order]
    ws = sample.weight[order]
    total = float(np.sum(ws))
    if total <= 0.0:
        raise ValueError("total sample weight must be positive")
    cum = np.cumsum(ws) / total
    theo = np.asarray(interp(xs))
    below = np.concatenate([[0.0], cum[:-1]])
    return float(np.max(np.maximum(np.abs(cum - theo), np.abs(below - theo))))


def interval_report(
    sample: EmpiricalSample,
    density: Density,
    intervals: Sequence[tuple[float, float]],
    tol: float = 1e-10,
) -> list[dict]:
    """Per-interval empirical mass vs theoretical mass."""
    total = sample.total_weight()
    out = []
    for a, b in intervals:
        if a > b:
            a, b = b, a
        theo = integrate_density(density, a, b, tol).value if a < b else 0.0
        if len(sample) and total > 0.0:
            mask = (sample.x >= a) & (sample.x <= b)
            emp = float(np.sum(sample.weight[mask])) / total
        else:
            emp = 0.0
        out.append(
            {
                "interval": [a, b],
                "empirical_mass": emp,
                "theoretical_mass": theo,
                "discrepancy": emp - theo,
            }
        )
    return out


def compare_report(
    sample: EmpiricalSample,
    density: Density,
    rejected: int = 0,
    intervals: Sequence[tuple[float, float]] = (),
    grid: int = 2048,
) -> dict:
    report = {
        "measure": density.tag,
        "rows": int(len(sample)),
        "rejected_rows": int(rejected),
        "total_weight": sample.total_weight() if len(sample) else 0.0,
        "theoretical_mass": CdfInterpolator(density, grid).total,
        "ks_distance": ks_distance(sample, density, grid) if len(sample) else None,
        "intervals": interval_report(sample, density, intervals) if intervals else [],
    }
    return report
