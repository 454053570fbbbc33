"""Finite-N sampling of Coulomb gas Gibbs measures.

The target density is proportional to

    prod_{j<k} |zeta_j - zeta_k|^beta  exp(-m sum_j Q(zeta_j))

in the plane (or with V on the line). The crossover scaling uses m = 1 and
beta = 2c/N; the standard scaling fixes beta and sets m = beta N / 2.

Two samplers are provided. Metropolis sweeps propose a Gaussian move for
each particle in turn and have no discretisation bias. Euler-Maruyama
steps of the overdamped Langevin dynamics

    d zeta_j = sqrt(2) dz_j - 2 m dbar Q(zeta_j) dt
               + beta sum_k 1 / conj(zeta_j - zeta_k) dt

(and dlambda_j = sqrt(2) dB_j - m V'(lambda_j) dt
+ beta sum_k 1/(lambda_j - lambda_k) dt on the line) move all particles at
once. Here dz_j is complex Brownian motion whose real and imaginary parts
each have variance dt.

Random numbers for sweep s are drawn from a generator seeded by
SeedSequence(seed, spawn_key=(s,)), so a chain is reproduced bit for bit
from its seed, its positions and its sweep count, however the run is split.
"""

import math
import warnings
from dataclasses import dataclass, field, replace

import numba as nb
import numpy as np

from .errors import Collision, RangeError
from .potentials import PotentialSpec

__all__ = [
    "GasConfig",
    "GasEnsemble",
    "StepSizeWarning",
    "initial_ensemble",
    "step_metropolis",
    "step_langevin",
    "advance",
    "run_chain",
    "burn_in",
    "integrated_autocorrelation_time",
]

COLLISION_DISTANCE = 1e-12
# Langevin pair drift for attractive gases uses max(distance, this).
ATTRACTIVE_CLAMP = 1e-8
MAX_HALVINGS = 40
TARGET_ACCEPTANCE = 0.45
# pairs per block whose squared-distance products share one logarithm
_LOG_BLOCK = 64

_RADIAL, _ELLIPTIC, _GAUSS_LOG = 0, 1, 2


class StepSizeWarning(RuntimeWarning):
    """A Langevin step moves particles by more than 0.1 of their spacing."""


@dataclass(frozen=True)
class GasConfig:
    """Run configuration of a finite-N gas.

    Attributes:
        dimension: 1 (line) or 2 (plane).
        potential: Confining potential of matching dimension.
        n: Number of particles.
        scaling: ``"crossover"`` (m = 1, beta = 2c/N) or ``"standard"``
            (m = beta N / 2 at fixed beta).
        c: Crossover coupling; must exceed -dimension.
        beta_fixed: beta of the standard scaling.
        steps: Post-burn-in sweeps (Metropolis) or steps (Langevin).
        burn_in: Burn-in length; ``None`` chooses 10 integrated
            autocorrelation times of sum |zeta_j|^2.
        dt: Langevin time step.
        seed: Root seed.
        method: ``"metropolis"`` or ``"langevin"``.
    """

    dimension: int
    potential: PotentialSpec
    n: int
    scaling: str = "crossover"
    c: float = 1.0
    beta_fixed: float = 2.0
    steps: int = 10_000
    burn_in: int | None = None
    dt: float = 1e-3
    seed: int = 0
    method: str = "metropolis"

    def __post_init__(self):
        if self.dimension not in (1, 2):
            raise ValueError(f"dimension must be 1 or 2, got {self.dimension}")
        if self.potential.dimension != self.dimension:
            raise ValueError(
                f"{self.potential.family} is a {self.potential.dimension}D potential"
            )
        if self.n < 1:
            raise ValueError("n must be at least 1")
        if self.scaling not in ("crossover", "standard"):
            raise ValueError(f"unknown scaling {self.scaling!r}")
        if self.scaling == "crossover" and not self.c > -self.dimension:
            raise RangeError(f"crossover needs c > -{self.dimension}, got {self.c}")
        if self.scaling == "standard" and not self.beta_fixed > 0:
            raise RangeError("standard scaling needs beta > 0")
        if self.method not in ("metropolis", "langevin"):
            raise ValueError(f"unknown method {self.method!r}")
        if not self.dt > 0:
            raise ValueError("dt must be positive")

    @property
    def m(self) -> float:
        return 1.0 if self.scaling == "crossover" else 0.5 * self.beta_fixed * self.n

    @property
    def beta(self) -> float:
        return 2.0 * self.c / self.n if self.scaling == "crossover" else self.beta_fixed

    def to_dict(self) -> dict:
        out = {
            "dimension": self.dimension,
            "n": self.n,
            "scaling": self.scaling,
            "c": self.c,
            "beta_fixed": self.beta_fixed,
            "steps": self.steps,
            "burn_in": "auto" if self.burn_in is None else self.burn_in,
            "dt": self.dt,
            "seed": self.seed,
            "method": self.method,
        }
        out.update({f"potential.{k}": v for k, v in self.potential.to_dict().items()})
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "GasConfig":
        pot = {k.split(".", 1)[1]: v for k, v in data.items() if k.startswith("potential.")}
        burn = data.get("burn_in", "auto")
        return cls(
            dimension=int(data["dimension"]),
            potential=PotentialSpec.from_dict(pot),
            n=int(data["n"]),
            scaling=str(data.get("scaling", "crossover")),
            c=float(data.get("c", 1.0)),
            beta_fixed=float(data.get("beta_fixed", 2.0)),
            steps=int(data.get("steps", 10_000)),
            burn_in=None if burn in (None, "auto", "None") else int(burn),
            dt=float(data.get("dt", 1e-3)),
            seed=int(data.get("seed", 0)),
            method=str(data.get("method", "metropolis")),
        )


@dataclass
class GasEnsemble:
    """Particle positions and the bookkeeping needed to continue a chain.

    The random state is not stored: sweep s always draws from the stream
    keyed by (seed, s), so ``sweep_count`` is the whole RNG state.

    Attributes:
        positions: Complex array (plane) or real array (line) of length N.
        sweep_count: Sweeps or steps performed so far.
        proposal_scale: Metropolis proposal standard deviation.
        accepted: Accepted Metropolis moves since creation.
        proposed: Proposed Metropolis moves since creation.
        clamped: Langevin pair drifts clamped at short distance (c < 0).
        halvings: Langevin steps retried with half the time step.
    """

    positions: np.ndarray
    sweep_count: int = 0
    proposal_scale: float = 0.5
    accepted: int = 0
    proposed: int = 0
    clamped: int = 0
    halvings: int = 0
    _checked_dt: bool = field(default=False, repr=False)

    @property
    def acceptance_rate(self) -> float:
        return self.accepted / self.proposed if self.proposed else float("nan")

    def copy(self) -> "GasEnsemble":
        return replace(self, positions=self.positions.copy())


def _potential_code(spec: PotentialSpec) -> tuple[int, float, float]:
    if spec.family == "radial_monomial":
        return _RADIAL, spec.alpha, spec.strength
    if spec.family == "gaussian_2d":
        return _RADIAL, 1.0, 1.0
    if spec.family == "elliptic_ginibre":
        return _ELLIPTIC, spec.tau, 0.0
    return _GAUSS_LOG, spec.a, 0.0


def _sweep_rng(seed: int, sweep: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(sweep,))))


def _draws(config: GasConfig, first: int, count: int):
    """Normals (count, d, N) and uniforms (count, 2, N) for sweeps first..first+count-1."""
    d, n = config.dimension, config.n
    normals = np.empty((count, d, n))
    uniforms = np.empty((count, 2, n))
    for k in range(count):
        rng = _sweep_rng(config.seed, first + k)
        normals[k] = rng.standard_normal((d, n))
        uniforms[k] = rng.random((2, n))
    return normals, uniforms


def initial_ensemble(config: GasConfig) -> GasEnsemble:
    """Independent draws from the c = 0 law (approximately, for radial Q)."""
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(config.seed, spawn_key=(2**32,))))
    n, m = config.n, config.m
    spec = config.potential
    if config.dimension == 1:
        pos = rng.standard_normal(n) / math.sqrt(m)
        if spec.a != 0:
            pos[pos == 0] = 1e-3
        scale = 1.0 / math.sqrt(m)
    else:
        if spec.family == "elliptic_ginibre":
            width = math.sqrt(0.5 / m)
            pos = width * (
                math.sqrt(1 + spec.tau) * rng.standard_normal(n)
                + 1j * math.sqrt(1 - spec.tau) * rng.standard_normal(n)
            )
            scale = width
        else:
            code, alpha, s = _potential_code(spec)
            # radius with density proportional to r exp(-m s r^(2 alpha))
            t = rng.gamma(1.0 / alpha, 1.0, size=n)
            radius = (t / (m * s)) ** (0.5 / alpha)
            pos = radius * np.exp(2j * math.pi * rng.random(n))
            scale = float((1.0 / (m * s)) ** (0.5 / alpha))
    return GasEnsemble(pos, proposal_scale=0.8 * scale)


# --- numba kernels -------------------------------------------------------


@nb.njit(cache=True)
def _q_value(code, p0, p1, x, y):
    if code == _RADIAL:
        r2 = x * x + y * y
        if p0 == 1.0:
            return p1 * r2
        return p1 * r2**p0
    if code == _ELLIPTIC:
        return (x * x + y * y - p0 * (x * x - y * y)) / (1.0 - p0 * p0)
    v = 0.5 * x * x
    if p0 != 0.0:
        v -= p0 * math.log(abs(x))
    return v


# Reassociation lets LLVM vectorise the distance loops and block products.
_FAST = {"reassoc", "contract", "nsz"}


@nb.njit(cache=True, fastmath=_FAST)
def _pair_log_ratio(x, y, i, xn, yn, bn, bo):
    """sum_{j != i} log(|new - zeta_j|^2 / |old - zeta_j|^2), or NaN on coincidence.

    One logarithm is taken per block of products when the products stay
    within range.
    """
    n = x.shape[0]
    xo = x[i]
    yo = y[i]
    for j in range(n):
        dx = xn - x[j]
        dy = yn - y[j]
        bn[j] = dx * dx + dy * dy
        ex = xo - x[j]
        ey = yo - y[j]
        bo[j] = ex * ex + ey * ey
    bn[i] = 1.0
    bo[i] = 1.0
    total = 0.0
    blocks = n // _LOG_BLOCK
    for b in range(blocks):
        pn = 1.0
        po = 1.0
        base = b * _LOG_BLOCK
        for k in range(base, base + _LOG_BLOCK):
            pn *= bn[k]
            po *= bo[k]
        if pn > 1e-290 and po > 1e-290 and pn < 1e290 and po < 1e290:
            total += math.log(pn) - math.log(po)
        else:
            for k in range(base, base + _LOG_BLOCK):
                if bn[k] == 0.0:
                    return np.nan
                total += math.log(bn[k]) - math.log(bo[k])
    for k in range(blocks * _LOG_BLOCK, n):
        if bn[k] == 0.0:
            return np.nan
        total += math.log(bn[k]) - math.log(bo[k])
    return total


@nb.njit(cache=True)
def _metropolis_kernel(x, y, dim, normals, uniforms, sigma, beta, m, code, p0, p1):
    """Sweeps with delayed acceptance; returns accepted moves.

    Stage one accepts with min(1, e^(-m dQ)); stage two with
    min(1, (prod of distance ratios)^beta). The product of the two stage
    ratios is the Gibbs ratio and each stage is symmetric in the old and
    new position, so detailed balance holds. Proposals onto another
    particle are rejected.
    """
    n = x.shape[0]
    bn = np.empty(n)
    bo = np.empty(n)
    accepted = 0
    for s in range(normals.shape[0]):
        for i in range(n):
            xo = x[i]
            yo = y[i]
            xn = xo + sigma * normals[s, 0, i]
            yn = yo
            if dim == 2:
                yn = yo + sigma * normals[s, 1, i]
            dq = _q_value(code, p0, p1, xn, yn) - _q_value(code, p0, p1, xo, yo)
            la = -m * dq
            if not (la >= 0.0 or uniforms[s, 0, i] < math.exp(la)):
                continue
            if beta != 0.0 and n > 1:
                ratio = _pair_log_ratio(x, y, i, xn, yn, bn, bo)
                if np.isnan(ratio):
                    continue
                lb = 0.5 * beta * ratio
                if not (lb >= 0.0 or uniforms[s, 1, i] < math.exp(lb)):
                    continue
            x[i] = xn
            y[i] = yn
            accepted += 1
    return accepted


@nb.njit(cache=True)
def _drift(x, y, dim, beta, m, code, p0, p1, clamp, out_x, out_y):
    """Langevin drift; returns the number of clamped pairs, or -1 on coincidence."""
    n = x.shape[0]
    clamped = 0
    for j in range(n):
        xj = x[j]
        yj = y[j]
        if dim == 1:
            # -m V'(x)
            g = xj
            if p0 != 0.0:
                g -= p0 / xj
            out_x[j] = -m * g
            out_y[j] = 0.0
        elif code == _RADIAL:
            r2 = xj * xj + yj * yj
            f = p1 * p0
            if p0 != 1.0:
                f *= r2 ** (p0 - 1.0)
            # -2 m dbar Q = -2 m s alpha r^(2 alpha - 2) z
            out_x[j] = -2.0 * m * f * xj
            out_y[j] = -2.0 * m * f * yj
        else:
            sc = 1.0 / (1.0 - p0 * p0)
            out_x[j] = -2.0 * m * sc * (xj - p0 * xj)
            out_y[j] = -2.0 * m * sc * (yj + p0 * yj)
    if beta == 0.0:
        return 0
    floor2 = clamp * clamp
    for j in range(n):
        for k in range(j + 1, n):
            dx = x[j] - x[k]
            dy = y[j] - y[k]
            d2 = dx * dx + dy * dy
            if d2 < floor2:
                d2 = floor2
                clamped += 1
            elif d2 == 0.0:
                return -1
            # 1 / conj(dz) = dz / |dz|^2, and 1/(dx) on the line
            fx = beta * dx / d2
            fy = beta * dy / d2
            out_x[j] += fx
            out_y[j] += fy
            out_x[k] -= fx
            out_y[k] -= fy
    return clamped


@nb.njit(cache=True)
def _min_distance2(x, y):
    n = x.shape[0]
    best = np.inf
    for j in range(n):
        for k in range(j + 1, n):
            dx = x[j] - x[k]
            dy = y[j] - y[k]
            d2 = dx * dx + dy * dy
            if d2 < best:
                best = d2
    return best


@nb.njit(cache=True)
def _langevin_kernel(x, y, dim, normals, dt, beta, m, code, p0, p1, clamp, collide2, max_halvings):
    """Euler-Maruyama steps; returns (clamped pairs, halvings, max drift move)."""
    n = x.shape[0]
    fx = np.empty(n)
    fy = np.empty(n)
    xn = np.empty(n)
    yn = np.empty(n)
    clamped = 0
    halvings = 0
    biggest = 0.0
    for s in range(normals.shape[0]):
        hits = _drift(x, y, dim, beta, m, code, p0, p1, clamp, fx, fy)
        if hits < 0:
            return clamped, -1, biggest
        clamped += hits
        h = dt
        for attempt in range(max_halvings + 1):
            noise = math.sqrt(2.0 * h)
            for j in range(n):
                xn[j] = x[j] + fx[j] * h + noise * normals[s, 0, j]
                if dim == 2:
                    yn[j] = y[j] + fy[j] * h + noise * normals[s, 1, j]
                else:
                    yn[j] = 0.0
            if n == 1 or _min_distance2(xn, yn) >= collide2:
                break
            if attempt == max_halvings:
                return clamped, -1, biggest
            h *= 0.5
            halvings += 1
        for j in range(n):
            move = math.sqrt(fx[j] * fx[j] + fy[j] * fy[j]) * h
            if move > biggest:
                biggest = move
            x[j] = xn[j]
            y[j] = yn[j]
    return clamped, halvings, biggest


# --- public steppers -----------------------------------------------------


def _split(config: GasConfig, ensemble: GasEnsemble):
    pos = ensemble.positions
    if config.dimension == 2:
        return np.ascontiguousarray(pos.real, dtype=float), np.ascontiguousarray(pos.imag, dtype=float)
    return np.array(pos, dtype=float), np.zeros(config.n)


def _merge(config: GasConfig, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return x + 1j * y if config.dimension == 2 else x


def _typical_spacing(config: GasConfig, x: np.ndarray, y: np.ndarray) -> float:
    if config.dimension == 1:
        return float((x.max() - x.min()) / max(config.n - 1, 1))
    radius = float(np.sqrt(np.max(x * x + y * y)))
    return radius * math.sqrt(math.pi / config.n)


def _advance(config: GasConfig, ensemble: GasEnsemble, count: int, method: str) -> GasEnsemble:
    out = ensemble.copy()
    if count <= 0:
        return out
    x, y = _split(config, out)
    normals, uniforms = _draws(config, out.sweep_count, count)
    code, p0, p1 = _potential_code(config.potential)
    if method == "metropolis":
        acc = _metropolis_kernel(
            x, y, config.dimension, normals, uniforms, out.proposal_scale,
            config.beta, config.m, code, p0, p1,
        )
        out.accepted += int(acc)
        out.proposed += count * config.n
    else:
        clamp = ATTRACTIVE_CLAMP if config.beta < 0 else 0.0
        clamped, halvings, biggest = _langevin_kernel(
            x, y, config.dimension, normals, config.dt, config.beta, config.m,
            code, p0, p1, clamp, COLLISION_DISTANCE**2, MAX_HALVINGS,
        )
        if halvings < 0:
            raise Collision(
                f"particles coincide or stay within {COLLISION_DISTANCE} after "
                f"{MAX_HALVINGS} halvings of dt"
            )
        out.clamped += int(clamped)
        out.halvings += int(halvings)
        if not out._checked_dt and config.n > 1:
            spacing = _typical_spacing(config, x, y)
            if biggest > 0.1 * spacing:
                warnings.warn(
                    f"drift moves particles by {biggest:.3g} per step, more than "
                    f"0.1 of the spacing {spacing:.3g}; reduce dt",
                    StepSizeWarning,
                    stacklevel=3,
                )
            out._checked_dt = True
    out.positions = _merge(config, x, y)
    out.sweep_count += count
    return out


def step_metropolis(config: GasConfig, ensemble: GasEnsemble) -> GasEnsemble:
    """One sweep of single-particle Gaussian proposals, in index order."""
    return _advance(config, ensemble, 1, "metropolis")


def step_langevin(config: GasConfig, ensemble: GasEnsemble) -> GasEnsemble:
    """One Euler-Maruyama step of the interacting SDE.

    A step that brings two particles within 1e-12 is redone with half the
    time step (same noise draw), repeatedly if needed.

    Raises:
        Collision: If 40 halvings do not separate the particles.
    """
    return _advance(config, ensemble, 1, "langevin")


def advance(config: GasConfig, ensemble: GasEnsemble, sweeps: int) -> GasEnsemble:
    """``sweeps`` sweeps (or steps) of ``config.method``; returns a new ensemble."""
    return _advance(config, ensemble, sweeps, config.method)


def _tune(config: GasConfig, ensemble: GasEnsemble, sweeps: int) -> GasEnsemble:
    """Adapt the Metropolis proposal scale over ``sweeps`` sweeps."""
    block = 10
    done = 0
    while done < sweeps:
        k = min(block, sweeps - done)
        before_acc, before_prop = ensemble.accepted, ensemble.proposed
        ensemble = _advance(config, ensemble, k, "metropolis")
        rate = (ensemble.accepted - before_acc) / (ensemble.proposed - before_prop)
        ensemble.proposal_scale *= math.exp(rate - TARGET_ACCEPTANCE)
        done += k
    return ensemble


def integrated_autocorrelation_time(series, window_factor: float = 5.0) -> float:
    """Integrated autocorrelation time with Sokal's self-consistent window."""
    x = np.asarray(series, dtype=float)
    x = x - x.mean()
    n = x.size
    if n < 4 or not np.any(x):
        return 1.0
    size = 1 << (2 * n - 1).bit_length()
    f = np.fft.rfft(x, size)
    acf = np.fft.irfft(f * np.conj(f), size)[:n]
    acf /= acf[0]
    tau = 1.0
    for window in range(1, n):
        tau = 1.0 + 2.0 * np.sum(acf[1 : window + 1])
        if window >= window_factor * tau:
            break
    return max(float(tau), 1.0)


def burn_in(
    config: GasConfig,
    ensemble: GasEnsemble | None = None,
    *,
    chunk: int = 200,
    max_sweeps: int = 20_000,
) -> tuple[GasEnsemble, int]:
    """Run the burn-in phase; returns the ensemble and its length.

    With ``config.burn_in`` set, exactly that many sweeps are run (the
    first half also tunes the Metropolis proposal). Otherwise the chain runs
    in chunks until its length exceeds 10 integrated autocorrelation times
    of sum |zeta_j|^2, estimated on the second half of the series so far.
    """
    ensemble = initial_ensemble(config) if ensemble is None else ensemble
    method = config.method
    first = ensemble.sweep_count
    if config.burn_in is not None:
        tune = config.burn_in // 2 if method == "metropolis" else 0
        if tune:
            ensemble = _tune(config, ensemble, tune)
        ensemble = _advance(config, ensemble, config.burn_in - tune, method)
        return ensemble, config.burn_in
    if method == "metropolis":
        ensemble = _tune(config, ensemble, 100)
    start = ensemble.sweep_count
    series = []
    while True:
        for _ in range(chunk // 10):
            ensemble = _advance(config, ensemble, 10, method)
            series.append(float(np.sum(np.abs(ensemble.positions) ** 2)))
        length = ensemble.sweep_count - start
        tail = series[len(series) // 2 :]
        tau = 10.0 * integrated_autocorrelation_time(tail)
        if length >= 10.0 * tau or length >= max_sweeps:
            return ensemble, ensemble.sweep_count - first


def run_chain(
    config: GasConfig,
    ensemble: GasEnsemble | None = None,
    *,
    sweeps: int | None = None,
    thin: int = 1,
):
    """Yield snapshots of positions every ``thin`` sweeps.

    Starts from ``ensemble`` as given (no burn-in; see :func:`burn_in`),
    or from a burned-in fresh ensemble when ``ensemble`` is None. The final
    ensemble is returned as the generator's return value.
    """
    if ensemble is None:
        ensemble, _ = burn_in(config)
    total = config.steps if sweeps is None else sweeps
    done = 0
    while done < total:
        k = min(thin, total - done)
        ensemble = _advance(config, ensemble, k, config.method)
        done += k
        if k == thin:
            yield ensemble.positions
    return ensemble
