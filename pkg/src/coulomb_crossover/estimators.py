"""Histogram estimators of one- and two-point functions from gas snapshots.

Counts are kept per snapshot; statistical errors come from batch means
over contiguous blocks of snapshots, which absorbs autocorrelation along
the chain. All estimators depend on the snapshots only through bin counts
and are therefore invariant under relabelling the particles.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import InsufficientSamples
from .radial import RadialDensity

__all__ = [
    "HistogramEstimate",
    "PairCorrelationEstimate",
    "snapshot_counts",
    "estimate_radial_density",
    "estimate_line_density",
    "estimate_pair_correlation",
    "merge_counts",
    "bin_average_radial",
    "MIN_BATCHES",
]

MIN_BATCHES = 20


@dataclass
class HistogramEstimate:
    """Binned one-point density with batch-means errors.

    For radial histograms ``normalized_density`` is g with
    sum(width * r_mid * g) = 1/(2 pi) over the range, directly comparable
    to :class:`RadialDensity`; on the line it integrates to one.

    Attributes:
        bin_edges: Bin edges.
        counts: Total particle counts per bin over all snapshots.
        normalized_density: Density per bin.
        std_error: Standard error per bin (NaN without batching).
        samples: Number of snapshots.
        n_particles: Particles per snapshot.
        radial: Whether bins are radii in the plane.
    """

    bin_edges: np.ndarray
    counts: np.ndarray
    normalized_density: np.ndarray
    std_error: np.ndarray
    samples: int
    n_particles: int
    radial: bool = True

    @property
    def centers(self) -> np.ndarray:
        return 0.5 * (self.bin_edges[1:] + self.bin_edges[:-1])


@dataclass
class PairCorrelationEstimate:
    """Binned R_2 / N^2 and its connected part R_2 / N^2 - (R_1 / N)^2.

    Attributes:
        bin_edges: Bin edges (radii in the plane, points on the line).
        r1: One-point density per bin, as in :class:`HistogramEstimate`.
        r2: Two-point density per pair of bins.
        connected: ``r2 - outer(r1, r1)``.
        connected_error: Batch-means standard error of ``connected``.
        independent_value: The connected part of N independent particles
            with the same one-point law, ``-outer(r1, r1) / N``.
    """

    bin_edges: np.ndarray
    r1: np.ndarray
    r2: np.ndarray
    connected: np.ndarray
    connected_error: np.ndarray
    independent_value: np.ndarray
    samples: int
    n_particles: int


def _coordinates(snapshot, radial: bool) -> np.ndarray:
    snap = np.asarray(snapshot)
    if radial:
        return np.abs(snap)
    if np.iscomplexobj(snap):
        raise ValueError("line histograms need real positions")
    return snap


def snapshot_counts(samples, edges, radial: bool = True) -> np.ndarray:
    """Bin counts for each snapshot, shape (snapshots, bins)."""
    edges = np.asarray(edges, dtype=float)
    rows = []
    for snap in samples:
        coord = _coordinates(snap, radial)
        idx = np.searchsorted(edges, coord, side="right") - 1
        inside = (idx >= 0) & (idx < edges.size - 1)
        rows.append(np.bincount(idx[inside], minlength=edges.size - 1))
    if not rows:
        return np.zeros((0, edges.size - 1), dtype=np.int64)
    return np.asarray(rows, dtype=np.int64)


def merge_counts(*blocks: np.ndarray) -> np.ndarray:
    """Concatenate per-snapshot counts from several chain segments."""
    return np.concatenate(blocks, axis=0)


def _bin_measure(edges: np.ndarray, radial: bool) -> np.ndarray:
    if radial:
        return math.pi * (edges[1:] ** 2 - edges[:-1] ** 2)
    return np.diff(edges)


def _batches(n_samples: int, n_batches: int) -> list[slice]:
    bounds = np.linspace(0, n_samples, n_batches + 1).astype(int)
    return [slice(lo, hi) for lo, hi in zip(bounds[:-1], bounds[1:])]


def _histogram(counts: np.ndarray, edges, n_particles: int, radial: bool,
               n_batches: int, errors: bool) -> HistogramEstimate:
    edges = np.asarray(edges, dtype=float)
    samples = counts.shape[0]
    if samples == 0 or (errors and samples < n_batches):
        raise InsufficientSamples(
            f"{samples} snapshots cannot form {n_batches} batches"
        )
    scale = 1.0 / (n_particles * _bin_measure(edges, radial))
    density = counts.sum(axis=0) / samples * scale
    if errors:
        per_batch = np.array([counts[b].mean(axis=0) * scale for b in _batches(samples, n_batches)])
        err = per_batch.std(axis=0, ddof=1) / math.sqrt(n_batches)
    else:
        err = np.full(density.shape, np.nan)
    return HistogramEstimate(edges, counts.sum(axis=0), density, err, samples, n_particles, radial)


def estimate_radial_density(samples, bins, *, r_max: float | None = None,
                            n_batches: int = MIN_BATCHES, errors: bool = True,
                            counts: np.ndarray | None = None) -> HistogramEstimate:
    """Histogram of |zeta_j| normalised like a radial density g.

    Args:
        samples: Iterable of complex position arrays, or ``None`` when
            ``counts`` are given.
        bins: Number of bins on [0, r_max] or explicit edges.
        r_max: Upper edge when ``bins`` is a count; defaults to the largest
            radius seen.
        n_batches: Batches for the error estimate.
        errors: Without errors a single snapshot is enough.
        counts: Precomputed per-snapshot counts for ``bins``.

    Raises:
        InsufficientSamples: With fewer snapshots than batches.
    """
    if counts is None:
        snaps = [np.asarray(s) for s in samples]
        if not snaps:
            raise InsufficientSamples("no snapshots")
        n = snaps[0].size
        edges = _edges(bins, r_max, snaps, radial=True)
        counts = snapshot_counts(snaps, edges, radial=True)
    else:
        edges = np.asarray(bins, dtype=float)
        n = int(samples)
    return _histogram(counts, edges, n, True, n_batches, errors)


def estimate_line_density(samples, bins, *, extent: float | None = None,
                          n_batches: int = MIN_BATCHES, errors: bool = True,
                          counts: np.ndarray | None = None) -> HistogramEstimate:
    """Histogram of real positions normalised to unit integral.

    Arguments mirror :func:`estimate_radial_density`; bins without explicit
    edges span [-extent, extent].
    """
    if counts is None:
        snaps = [np.asarray(s) for s in samples]
        if not snaps:
            raise InsufficientSamples("no snapshots")
        n = snaps[0].size
        edges = _edges(bins, extent, snaps, radial=False)
        counts = snapshot_counts(snaps, edges, radial=False)
    else:
        edges = np.asarray(bins, dtype=float)
        n = int(samples)
    return _histogram(counts, edges, n, False, n_batches, errors)


def _edges(bins, limit, snaps, radial: bool) -> np.ndarray:
    if np.ndim(bins) == 1:
        return np.asarray(bins, dtype=float)
    if limit is None:
        limit = max(float(np.max(np.abs(s))) for s in snaps) * (1 + 1e-9)
    if radial:
        return np.linspace(0.0, limit, int(bins) + 1)
    return np.linspace(-limit, limit, int(bins) + 1)


def estimate_pair_correlation(samples, edges, *, radial: bool = True,
                              n_batches: int = MIN_BATCHES) -> PairCorrelationEstimate:
    """Binned two-point function and its connected part.

    With n the bin-count vector of a snapshot, ordered pairs j != k in bins
    (A, B) number n_A n_B - delta_AB n_A.

    Raises:
        InsufficientSamples: With fewer snapshots than batches.
    """
    snaps = [np.asarray(s) for s in samples]
    if len(snaps) < n_batches:
        raise InsufficientSamples(f"{len(snaps)} snapshots cannot form {n_batches} batches")
    edges = np.asarray(edges, dtype=float)
    n = snaps[0].size
    counts = snapshot_counts(snaps, edges, radial).astype(float)
    measure = _bin_measure(edges, radial)
    norm2 = 1.0 / (n * n * np.outer(measure, measure))
    norm1 = 1.0 / (n * measure)

    def estimate(block):
        s = block.shape[0]
        r1 = block.mean(axis=0) * norm1
        pairs = block.T @ block / s - np.diag(block.mean(axis=0))
        r2 = pairs * norm2
        return r1, r2, r2 - np.outer(r1, r1)

    r1, r2, conn = estimate(counts)
    per_batch = np.array([estimate(counts[b])[2] for b in _batches(len(snaps), n_batches)])
    err = per_batch.std(axis=0, ddof=1) / math.sqrt(n_batches)
    return PairCorrelationEstimate(edges, r1, r2, conn, err, -np.outer(r1, r1) / n, len(snaps), n)


def bin_average_radial(density: RadialDensity, edges) -> np.ndarray:
    """Average of g over each annulus, int g r dr / int r dr."""
    edges = np.asarray(edges, dtype=float)
    r, g = density.grid, density.values
    # cumulative int_0^r g(s) s ds by the trapezoid rule on the fine grid
    cum = np.concatenate(([0.0], np.cumsum(0.5 * (g[1:] * r[1:] + g[:-1] * r[:-1]) * np.diff(r))))
    mass = np.interp(edges, r, cum, right=cum[-1])
    return np.diff(mass) / (0.5 * np.diff(edges**2))
