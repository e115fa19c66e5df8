"""Monte Carlo sampling of Wishart and fixed-trace spectra.

Samples are drawn in fixed-size chunks.  Chunk ``c`` uses its own Philox
stream keyed by ``(seed, c)``, and per-sample results are concatenated in
chunk order, so a report depends only on ``(seed, N, chunk_size)`` and never
on the number of worker threads.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, Optional

import numpy as np

from .dims import Dims, as_dims
from .errors import ConvergenceError, DomainError
from .exactnum import to_float
from .moments import induced_T2_target, induced_T_mean, page_mean, vpo_variance

DEFAULT_CHUNK = 1 << 15
MAX_JACOBI_SWEEPS = 50
JACOBI_TOL = 1e-13


def chunk_rng(seed: int, chunk: int) -> np.random.Generator:
    """Independent counter-based stream for one chunk."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, chunk])))


def complex_normals(rng: np.random.Generator, shape) -> np.ndarray:
    """Complex normals with E|z|^2 = 1 via Box-Muller (real, imag ~ N(0, 1/2))."""
    u = rng.random((2,) + tuple(shape))
    radius = np.sqrt(-np.log1p(-u[0]))
    return radius * np.exp(2j * np.pi * u[1])


def sample_ginibre(d, rng: np.random.Generator, size: Optional[int] = None) -> np.ndarray:
    """m x n complex Ginibre matrix (or a stack of ``size`` of them)."""
    d = as_dims(d)
    shape = (d.m, d.n) if size is None else (size, d.m, d.n)
    return complex_normals(rng, shape)


# eigensolver -----------------------------------------------------------------


def hermitian_eigenvalues_batch(H: np.ndarray, tol: float = JACOBI_TOL) -> np.ndarray:
    """Eigenvalues (descending) of a stack of Hermitian matrices by cyclic complex Jacobi.

    Each rotation first removes the phase of the pivot, then applies the real
    symmetric Jacobi rotation.  All matrices in the stack are rotated in
    lockstep; a matrix whose pivot is already zero gets the identity.
    """
    H = np.array(H, dtype=complex, copy=True)
    if H.ndim != 3 or H.shape[1] != H.shape[2]:
        raise DomainError("expected a stack of square matrices")
    m = H.shape[-1]
    if m > 32:
        raise DomainError("hermitian_eigenvalues supports m <= 32")
    Hh = np.conj(np.swapaxes(H, 1, 2))
    scale = np.maximum(np.sqrt(np.sum(np.abs(H) ** 2, axis=(1, 2))), 1.0)
    if np.any(np.sqrt(np.sum(np.abs(H - Hh) ** 2, axis=(1, 2))) > 1e-12 * scale):
        raise DomainError("input is not Hermitian within 1e-12")
    H = 0.5 * (H + Hh)
    if m == 1:
        return H[:, :, 0].real.copy()
    norm = np.sqrt(np.sum(np.abs(H) ** 2, axis=(1, 2)))
    offmask = ~np.eye(m, dtype=bool)
    for _ in range(MAX_JACOBI_SWEEPS):
        off = np.sqrt(np.sum(np.abs(H[:, offmask]) ** 2, axis=1))
        if np.all(off <= tol * norm):
            break
        for p in range(m - 1):
            for q in range(p + 1, m):
                h = H[:, p, q]
                g = np.abs(h)
                active = g > 0.0
                gs = np.where(active, g, 1.0)
                phase = np.where(active, h / gs, 1.0)
                theta = (H[:, q, q].real - H[:, p, p].real) / (2.0 * gs)
                t = np.where(theta >= 0, 1.0, -1.0) / (np.abs(theta) + np.hypot(theta, 1.0))
                c = np.where(active, 1.0 / np.sqrt(t * t + 1.0), 1.0)
                s = np.where(active, t * c, 0.0)
                cph = np.conj(phase)
                cp = H[:, :, p].copy()
                cq = H[:, :, q]
                H[:, :, p] = c[:, None] * cp - (s * cph)[:, None] * cq
                H[:, :, q] = s[:, None] * cp + (c * cph)[:, None] * cq
                rp = H[:, p, :].copy()
                rq = H[:, q, :]
                H[:, p, :] = c[:, None] * rp - (s * phase)[:, None] * rq
                H[:, q, :] = s[:, None] * rp + (c * phase)[:, None] * rq
                H[:, p, q] = 0.0
                H[:, q, p] = 0.0
    else:
        off = np.sqrt(np.sum(np.abs(H[:, offmask]) ** 2, axis=1))
        if not np.all(off <= tol * norm):
            raise ConvergenceError(f"Jacobi did not converge in {MAX_JACOBI_SWEEPS} sweeps")
    ev = np.diagonal(H, axis1=1, axis2=2).real
    return -np.sort(-ev, axis=1)


def hermitian_eigenvalues(H) -> np.ndarray:
    """Eigenvalues of one Hermitian matrix, descending."""
    H = np.asarray(H, dtype=complex)
    return hermitian_eigenvalues_batch(H[None])[0]


# samples -------------------------------------------------------------------


@dataclass(frozen=True)
class SpectralSample:
    theta: np.ndarray
    r: float
    lam: np.ndarray
    S: float
    T: float


def _xlogx(x: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(x > 0, x * np.log(np.where(x > 0, x, 1.0)), 0.0)


def spectra_from_ginibre(Y: np.ndarray) -> Dict[str, np.ndarray]:
    """theta, r, lambda, S, T for a stack of Ginibre draws."""
    W = Y @ np.conj(np.swapaxes(Y, -1, -2))
    theta = hermitian_eigenvalues_batch(W)
    r = np.sum(theta, axis=1)
    lam = theta / r[:, None]
    S = -np.sum(_xlogx(lam), axis=1)
    T = np.sum(_xlogx(theta), axis=1)
    return {"theta": theta, "r": r, "lam": lam, "S": S, "T": T}


def draw_batch(d, rng: np.random.Generator, size: int) -> Dict[str, np.ndarray]:
    return spectra_from_ginibre(sample_ginibre(d, rng, size))


def draw_sample(d, rng: np.random.Generator) -> SpectralSample:
    b = draw_batch(d, rng, 1)
    return SpectralSample(b["theta"][0], float(b["r"][0]), b["lam"][0], float(b["S"][0]), float(b["T"][0]))


def invariant_violations(d: Dims, batch: Dict[str, np.ndarray]) -> Dict[str, float]:
    """Largest per-sample deviation of each invariant over a batch."""
    r, S, T, lam, theta = batch["r"], batch["S"], batch["T"], batch["lam"], batch["theta"]
    return {
        "entropy_identity": float(np.max(np.abs(_xlogx(r) - r * S - T))),
        "lambda_sum": float(np.max(np.abs(np.sum(lam, axis=1) - 1.0))),
        "S_below_zero": float(max(0.0, -np.min(S))),
        "S_above_log_m": float(max(0.0, np.max(S) - math.log(d.m))),
        "nonpositive_r": int(np.sum(r <= 0)),
        "unsorted": int(np.sum(np.diff(theta, axis=1) > 0)),
    }


# estimation ------------------------------------------------------------------


@dataclass(frozen=True)
class Estimate:
    value: float
    se: float
    prediction: Optional[float] = None

    @property
    def z(self) -> Optional[float]:
        if self.prediction is None:
            return None
        diff = self.value - self.prediction
        if self.se > 0:
            return diff / self.se
        return 0.0 if abs(diff) <= 1e-12 else math.inf

    def to_dict(self) -> dict:
        return {"value": self.value, "se": self.se, "prediction": self.prediction, "z": self.z}


@dataclass(frozen=True)
class EstimatorReport:
    dims: Dims
    N: int
    seed: int
    chunk_size: int
    estimates: Dict[str, Estimate]
    corr_r_S: float
    invariants: Dict[str, float] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "m": self.dims.m,
            "n": self.dims.n,
            "N": self.N,
            "seed": self.seed,
            "chunk_size": self.chunk_size,
            "estimates": {k: v.to_dict() for k, v in self.estimates.items()},
            "corr_r_S": self.corr_r_S,
            "corr_bound": 3.0 / math.sqrt(self.N),
            "invariants": self.invariants,
        }


def _mean_se(x: np.ndarray):
    n = x.size
    return float(np.mean(x)), float(np.std(x, ddof=1) / math.sqrt(n))


def _var_se(x: np.ndarray):
    """Sample variance and its delta-method standard error sqrt((mu4 - s^4)/N)."""
    n = x.size
    c = x - np.mean(x)
    var = float(np.sum(c * c) / (n - 1))
    mu4 = float(np.mean(c**4))
    return var, math.sqrt(max(mu4 - var * var, 0.0) / n)


def _corr(x: np.ndarray, y: np.ndarray) -> float:
    sx, sy = np.std(x), np.std(y)
    if sx == 0 or sy == 0:
        return 0.0
    return float(np.mean((x - x.mean()) * (y - y.mean())) / (sx * sy))


def simulate(d, N: int, seed: int, threads: int = 1, chunk_size: int = DEFAULT_CHUNK):
    """Per-sample (S, T, r) arrays plus merged invariant violations."""
    d = as_dims(d)
    nchunks = -(-N // chunk_size)

    def run(c: int):
        size = min(chunk_size, N - c * chunk_size)
        batch = draw_batch(d, chunk_rng(seed, c), size)
        return batch["S"], batch["T"], batch["r"], invariant_violations(d, batch)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(run, range(nchunks)))
    else:
        parts = [run(c) for c in range(nchunks)]
    S = np.concatenate([p[0] for p in parts])
    T = np.concatenate([p[1] for p in parts])
    r = np.concatenate([p[2] for p in parts])
    inv: Dict[str, float] = {}
    for p in parts:
        for k, v in p[3].items():
            inv[k] = max(inv.get(k, 0), v)
    return S, T, r, inv


def estimate_moments(
    d, N: int, seed: int, threads: int = 1, chunk_size: int = DEFAULT_CHUNK
) -> EstimatorReport:
    """Moment estimates with standard errors, paired with closed-form predictions."""
    d = as_dims(d)
    if N < 1000:
        raise DomainError("estimate_moments needs N >= 1000")
    if threads < 1:
        raise DomainError("threads must be >= 1")
    S, T, r, inv = simulate(d, N, seed, threads, chunk_size)
    mn = float(d.m * d.n)
    est = {}
    v, se = _mean_se(S)
    est["mean_S"] = Estimate(v, se, to_float(page_mean(d)))
    v, se = _var_se(S)
    est["var_S"] = Estimate(v, se, to_float(vpo_variance(d)))
    v, se = _mean_se(T)
    est["E_T"] = Estimate(v, se, to_float(induced_T_mean(d)))
    v, se = _mean_se(T * T)
    est["E_T2"] = Estimate(v, se, to_float(induced_T2_target(d)))
    v, se = _mean_se(r)
    est["mean_r"] = Estimate(v, se, mn)
    v, se = _var_se(r)
    est["var_r"] = Estimate(v, se, mn)
    return EstimatorReport(d, N, seed, chunk_size, est, _corr(r, S), inv)
