"""Exact finite-N identities evaluated on sampled gases.

For a test function psi the Ward functional of a planar gas is
W = beta I - II + III with

    I   = 1/4 sum_{j != k} (psi(zeta_j) - psi(zeta_k)) / (zeta_j - zeta_k)
    II  = m sum_j dQ(zeta_j) psi(zeta_j)
    III = sum_j dpsi(zeta_j),

d the holomorphic Wirtinger derivative. On the line the same sums with V'
and psi' give W = 2 beta I - II + III. Integration by parts against the
Gibbs density shows E W = 0 for every N.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import CoincidentPoints, InsufficientSamples
from .estimators import MIN_BATCHES, snapshot_counts
from .potentials import eval_1d, eval_2d
from .sampler import GasConfig, burn_in, run_chain

__all__ = [
    "TestFunction",
    "Estimate",
    "WardTerms",
    "WardReport",
    "ward_terms",
    "ward_expectation",
    "ward_from_snapshots",
    "loop_residual_1d",
    "loop_inputs_from_snapshots",
    "LoopResidual",
    "DiagnosticsReport",
    "ReportEntry",
    "default_test_functions",
]


@dataclass(frozen=True)
class TestFunction:
    """psi(z) = z^k |z|^(2j) e^(-s |z|^2) in the plane, lambda^(k+2j) e^(-s lambda^2) on the line.

    The default ``j = 0, s = 1`` is the family z^k e^(-|z|^2). For
    rotation-invariant gases every psi with k != 1 has E III = E II = 0 by
    symmetry alone, so the informative choices there are k = 1 with varying
    j or s. ``s = 0`` gives a polynomial, useful for exact hand checks.
    """

    __test__ = False  # not a pytest class

    k: int = 1
    j: int = 0
    s: float = 1.0

    def __post_init__(self):
        if self.k < 0 or self.j < 0:
            raise ValueError("k and j must be nonnegative")
        if self.s < 0:
            raise ValueError("s must be nonnegative")

    @property
    def kind(self) -> str:
        return "poly_gauss"

    def value(self, z):
        z = np.asarray(z)
        r2 = (z * np.conj(z)).real
        return z**self.k * r2**self.j * np.exp(-self.s * r2)

    def derivative(self, z):
        """d psi in the plane (complex input), psi' on the line (real input)."""
        z = np.asarray(z)
        r2 = (z * np.conj(z)).real
        e = np.exp(-self.s * r2)
        k, j = self.k, self.j
        if np.iscomplexobj(z):
            # psi = z^(k+j) zbar^j e^(-s z zbar)
            first = (k + j) * z ** max(k + j - 1, 0) * np.conj(z) ** j if k + j > 0 else 0.0
            return (first - self.s * z ** (k + j) * np.conj(z) ** (j + 1)) * e
        p = k + 2 * j
        first = p * z ** max(p - 1, 0) if p > 0 else 0.0
        return (first - 2.0 * self.s * z ** (p + 1)) * e

    def label(self) -> str:
        return f"k={self.k},j={self.j},s={self.s:g}"


def default_test_functions(dimension: int) -> list[TestFunction]:
    """Three test functions with nonzero expected terms for symmetric gases."""
    if dimension == 2:
        return [TestFunction(1, 0, 1.0), TestFunction(1, 1, 1.0), TestFunction(1, 0, 0.5)]
    return [TestFunction(1, 0, 1.0), TestFunction(3, 0, 1.0), TestFunction(1, 0, 0.5)]


@dataclass(frozen=True)
class Estimate:
    """A Monte Carlo mean with its standard error (complex allowed)."""

    value: complex
    error: float

    def __str__(self) -> str:
        v = self.value
        if isinstance(v, complex) and v.imag != 0:
            return f"{v.real:.6g}{v.imag:+.6g}j ± {self.error:.3g}"
        return f"{complex(v).real:.6g} ± {self.error:.3g}"

    @property
    def z_score(self) -> float:
        return abs(self.value) / self.error if self.error > 0 else math.inf


@dataclass(frozen=True)
class WardTerms:
    """The three sums and W for one configuration."""

    term_I: complex
    term_II: complex
    term_III: complex
    total: complex


@dataclass(frozen=True)
class WardReport:
    """Expectations of the Ward terms with batch-means errors."""

    psi: TestFunction
    term_I: Estimate
    term_II: Estimate
    term_III: Estimate
    total: Estimate
    samples: int

    def passed(self, sigmas: float = 3.0) -> bool:
        return abs(self.total.value) < sigmas * self.total.error


def ward_terms(positions, config: GasConfig, psi: TestFunction, *, mutate: float = 1.0) -> WardTerms:
    """Evaluate I, II, III and W on one configuration.

    Args:
        positions: Complex (plane) or real (line) particle positions.
        config: Supplies m, beta, the potential and the dimension.
        psi: Test function.
        mutate: Factor applied to II; values other than 1 break the
            identity on purpose (negative control).

    Raises:
        CoincidentPoints: If two positions coincide.
    """
    z = np.asarray(positions)
    n = z.size
    if config.dimension == 2:
        z = z.astype(complex)
        grad = eval_2d(config.potential, z).grad_z
    else:
        z = z.astype(float)
        grad = eval_1d(config.potential, z)[1]
    values = psi.value(z)
    term_i = 0.0
    if n > 1:
        diff = z[:, None] - z[None, :]
        off = ~np.eye(n, dtype=bool)
        if np.any(diff[off] == 0):
            raise CoincidentPoints("two particles share a position")
        quotient = (values[:, None] - values[None, :])[off] / diff[off]
        term_i = 0.25 * complex(np.sum(quotient))
    term_ii = config.m * complex(np.sum(grad * values)) * mutate
    term_iii = complex(np.sum(psi.derivative(z)))
    factor = config.beta if config.dimension == 2 else 2.0 * config.beta
    total = factor * term_i - term_ii + term_iii
    return WardTerms(complex(term_i), term_ii, term_iii, total)


def _batch_estimate(series: np.ndarray, n_batches: int) -> Estimate:
    bounds = np.linspace(0, series.size, n_batches + 1).astype(int)
    means = np.array([series[lo:hi].mean() for lo, hi in zip(bounds[:-1], bounds[1:])])
    spread = np.sqrt(np.var(means.real, ddof=1) + np.var(means.imag, ddof=1))
    return Estimate(complex(series.mean()), float(spread / math.sqrt(n_batches)))


def ward_from_snapshots(snapshots, config: GasConfig, psis, *, mutate: float = 1.0,
                        n_batches: int = MIN_BATCHES) -> list[WardReport]:
    """Ward expectations for several test functions from one set of snapshots.

    Raises:
        InsufficientSamples: With fewer snapshots than batches.
    """
    psis = list(psis)
    rows = [[ward_terms(s, config, p, mutate=mutate) for p in psis] for s in snapshots]
    if len(rows) < n_batches:
        raise InsufficientSamples(f"{len(rows)} snapshots cannot form {n_batches} batches")
    reports = []
    for col, psi in enumerate(psis):
        terms = [r[col] for r in rows]
        est = {
            name: _batch_estimate(np.array([getattr(t, name) for t in terms]), n_batches)
            for name in ("term_I", "term_II", "term_III", "total")
        }
        reports.append(WardReport(psi, samples=len(rows), **est))
    return reports


def ward_expectation(config: GasConfig, psi, samples: int, *, thin: int = 1,
                     mutate: float = 1.0) -> list[WardReport] | WardReport:
    """Run a chain and estimate E W for ``psi`` (one or a list).

    ``samples`` snapshots are taken every ``thin`` sweeps after burn-in.
    """
    single = isinstance(psi, TestFunction)
    psis = [psi] if single else list(psi)
    ensemble, _ = burn_in(config)
    snaps = list(run_chain(config, ensemble, sweeps=samples * thin, thin=thin))
    reports = ward_from_snapshots(snaps, config, psis, mutate=mutate)
    return reports[0] if single else reports


def _derivative(f: np.ndarray, h: float, axis: int = -1) -> np.ndarray:
    """Sixth-order central differences, lower order near the ends."""
    f = np.moveaxis(np.asarray(f, dtype=float), axis, -1)
    out = np.gradient(f, h, axis=-1, edge_order=2)
    if f.shape[-1] >= 5:
        out[..., 2:-2] = (
            -f[..., 4:] + 8 * f[..., 3:-1] - 8 * f[..., 1:-3] + f[..., :-4]
        ) / (12 * h)
    if f.shape[-1] >= 7:
        out[..., 3:-3] = (
            f[..., 6:] - 9 * f[..., 5:-1] + 45 * f[..., 4:-2]
            - 45 * f[..., 2:-4] + 9 * f[..., 1:-5] - f[..., :-6]
        ) / (60 * h)
    return np.moveaxis(out, -1, axis)


@dataclass(frozen=True)
class LoopResidual:
    """Left minus right side of the loop equation on a grid.

    Attributes:
        grid: Points lambda.
        lhs: beta PV int R_2(lambda, lambda') / (lambda - lambda') dlambda'.
        rhs: m V'(lambda) R_1(lambda) + R_1'(lambda).
        residual: ``lhs - rhs``.
        error: Standard error of the residual (zeros for exact input).
    """

    grid: np.ndarray
    lhs: np.ndarray
    rhs: np.ndarray
    residual: np.ndarray
    error: np.ndarray

    def within(self, sigmas: float = 3.0) -> np.ndarray:
        return np.abs(self.residual) <= sigmas * self.error


def _loop_sides(grid, r1, r2, config: GasConfig):
    h = grid[1] - grid[0]
    n = grid.size
    k = np.arange(n)
    offset = grid[:, None] - grid[None, :]
    with np.errstate(divide="ignore"):
        kernel = np.where(k[:, None] != k[None, :], h / offset, 0.0)
    # punctured trapezoid rule for the principal value: the omitted cell
    # contributes -h d/dlambda' R_2(lambda, lambda') at lambda' = lambda
    diag_slope = np.diagonal(_derivative(r2, h, axis=1))
    lhs = config.beta * (np.sum(kernel * r2, axis=1) - h * diag_slope)
    vprime = eval_1d(config.potential, grid)[1]
    rhs = config.m * vprime * r1 + _derivative(r1, h)
    return lhs, rhs


def loop_residual_1d(grid, r1, r2, config: GasConfig, *, r1_batches=None, r2_batches=None) -> LoopResidual:
    """Residual of beta PV int R_2/(lambda - lambda') = m V' R_1 + R_1'.

    Args:
        grid: Uniform grid (bin centres), symmetric pairing of neighbours
            around each point handles the principal value.
        r1: R_{N,1} on the grid.
        r2: R_{N,2} on grid x grid.
        config: Supplies m, beta and V.
        r1_batches, r2_batches: Optional per-batch estimates (stacked on
            axis 0); their spread gives the error of the residual.
    """
    grid = np.asarray(grid, dtype=float)
    if not np.allclose(np.diff(grid), grid[1] - grid[0], rtol=1e-9, atol=0):
        raise ValueError("loop_residual_1d needs a uniform grid")
    lhs, rhs = _loop_sides(grid, np.asarray(r1, float), np.asarray(r2, float), config)
    if r1_batches is not None and r2_batches is not None:
        res = np.array([np.subtract(*_loop_sides(grid, a, b, config)) for a, b in zip(r1_batches, r2_batches)])
        error = res.std(axis=0, ddof=1) / math.sqrt(res.shape[0])
    else:
        error = np.zeros_like(lhs)
    return LoopResidual(grid, lhs, rhs, lhs - rhs, error)


def loop_inputs_from_snapshots(snapshots, edges, n_batches: int = MIN_BATCHES):
    """Binned R_{N,1}, R_{N,2} with per-batch copies for :func:`loop_residual_1d`.

    Returns ``(centres, r1, r2, r1_batches, r2_batches)``.
    """
    snaps = [np.asarray(s, dtype=float) for s in snapshots]
    if len(snaps) < n_batches:
        raise InsufficientSamples(f"{len(snaps)} snapshots cannot form {n_batches} batches")
    edges = np.asarray(edges, dtype=float)
    width = np.diff(edges)
    counts = snapshot_counts(snaps, edges, radial=False).astype(float)

    def sides(block):
        mean = block.mean(axis=0)
        r1 = mean / width
        r2 = (block.T @ block / block.shape[0] - np.diag(mean)) / np.outer(width, width)
        return r1, r2

    r1, r2 = sides(counts)
    bounds = np.linspace(0, len(snaps), n_batches + 1).astype(int)
    parts = [sides(counts[lo:hi]) for lo, hi in zip(bounds[:-1], bounds[1:])]
    centres = 0.5 * (edges[1:] + edges[:-1])
    return centres, r1, r2, np.array([p[0] for p in parts]), np.array([p[1] for p in parts])


@dataclass(frozen=True)
class ReportEntry:
    """One named check: value ± error against a tolerance."""

    name: str
    value: float
    error: float
    passed: bool
    note: str = ""

    def line(self) -> str:
        status = "ok" if self.passed else "FAIL"
        err = f" ± {self.error:.3g}" if self.error == self.error and self.error > 0 else ""
        note = f"  # {self.note}" if self.note else ""
        return f"{self.name}: {self.value:.6g}{err} [{status}]{note}"


@dataclass
class DiagnosticsReport:
    """Named residuals with error bars; serialises as ``key: value ± error``."""

    entries: list[ReportEntry] = field(default_factory=list)

    def add(self, name: str, value: float, error: float = float("nan"), passed: bool = True,
            note: str = "") -> None:
        self.entries.append(ReportEntry(name, float(value), float(error), bool(passed), note))

    @property
    def all_passed(self) -> bool:
        return all(e.passed for e in self.entries)

    def to_text(self) -> str:
        lines = [e.line() for e in self.entries]
        lines.append(f"overall: {'ok' if self.all_passed else 'FAIL'}")
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        return {
            "entries": [e.__dict__ for e in self.entries],
            "all_passed": self.all_passed,
        }
