"""Improved CEEMDAN: seeded noise ensemble, noise-mode operator, deterministic
parallel execution.

Noise source is numpy's PCG64 with standard-normal variates; each ensemble
member draws from its own stream derived from (master seed, member index)
with a SplitMix64 mix, so results never depend on the worker count.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .core import TimeSeries, find_extrema
from .emd import Decomposition, Imf, MonotoneComponentError, SiftConfig, extract_imfs, local_mean

PRNG_NAME = "numpy-pcg64/standard_normal"

# members per reduction chunk; fixed so the summation order is identical
# for every worker count
_CHUNK = 16


@dataclass(frozen=True)
class DecompParams:
    """Ensemble size, relative noise amplitude, master seed and sift controls."""

    ensemble_size: int = 100
    noise_amplitude: float = 0.2
    seed: int = 0
    sift: SiftConfig = field(default_factory=SiftConfig)

    def __post_init__(self):
        if self.ensemble_size < 1:
            raise ValueError("ensemble_size must be >= 1")
        if not (0 < self.noise_amplitude <= 1):
            raise ValueError("noise_amplitude must be in (0, 1]")
        if not (0 <= self.seed < 2**64):
            raise ValueError("seed must be a 64-bit unsigned integer")


def _splitmix64(v: int) -> int:
    v = (v + 0x9E3779B97F4A7C15) & 0xFFFFFFFFFFFFFFFF
    v = ((v ^ (v >> 30)) * 0xBF58476D1CE4E5B9) & 0xFFFFFFFFFFFFFFFF
    v = ((v ^ (v >> 27)) * 0x94D049BB133111EB) & 0xFFFFFFFFFFFFFFFF
    return v ^ (v >> 31)


def member_seed(master_seed: int, index: int) -> int:
    """Per-member stream seed; pure function of (master seed, member index)."""
    return _splitmix64(master_seed ^ _splitmix64(index))


def white_noise(master_seed: int, index: int, n: int) -> np.ndarray:
    rng = np.random.Generator(np.random.PCG64(member_seed(master_seed, index)))
    return rng.standard_normal(n)


class NoiseBank:
    """Per-member white-noise realizations and their precomputed EMD modes."""

    def __init__(self, modes: list[np.ndarray]):
        # modes[i] has shape (k_i, n): EMD modes of member i, residual dropped
        self.modes = modes

    def __len__(self) -> int:
        return len(self.modes)

    def mode(self, i: int, k: int) -> np.ndarray | None:
        """k-th (1-based) mode of member i, or None when exhausted."""
        m = self.modes[i]
        return m[k - 1] if k <= len(m) else None

    @property
    def depth(self) -> int:
        return max(len(m) for m in self.modes)


def _member_modes(args) -> np.ndarray:
    seed, index, n, cfg = args
    w = white_noise(seed, index, n)
    d = extract_imfs(TimeSeries(w, 1.0), cfg)
    return np.array([imf.samples for imf in d.imfs])


def build_noise_bank(
    seed: int, ensemble_size: int, n: int, cfg: SiftConfig, workers: int = 1
) -> NoiseBank:
    jobs = [(seed, i, n, cfg) for i in range(ensemble_size)]
    if workers <= 1:
        modes = [_member_modes(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            modes = list(pool.map(_member_modes, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
    return NoiseBank(modes)


def noise_mode(w, k: int) -> np.ndarray:
    """k-th EMD mode of a noise realization (the E_k operator)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    d = extract_imfs(TimeSeries(np.asarray(w, dtype=float), 1.0))
    if k > len(d.imfs):
        raise ValueError(f"mode {k} requested but only {len(d.imfs)} modes available")
    return d.imfs[k - 1].samples


def _member_mean(y: np.ndarray) -> np.ndarray:
    try:
        return local_mean(y)
    except MonotoneComponentError:
        return y


def _chunk_stage_sum(r: np.ndarray, beta: float, chunk_modes: list) -> np.ndarray:
    """Sum of local means over one chunk of members, in member order."""
    total = np.zeros_like(r)
    for ek in chunk_modes:
        y = r if ek is None else r + beta * ek
        total += _member_mean(y)
    return total


def _chunk_stage_sum_args(args) -> np.ndarray:
    return _chunk_stage_sum(*args)


def _stage_mean(
    r: np.ndarray,
    betas: np.ndarray,
    k: int,
    bank: NoiseBank,
    pool: ProcessPoolExecutor | None,
) -> np.ndarray:
    """Ensemble-averaged local mean at stage k, reduced in fixed member order."""
    n_members = len(bank)
    jobs = []
    for lo in range(0, n_members, _CHUNK):
        members = range(lo, min(lo + _CHUNK, n_members))
        modes = [bank.mode(i, k) for i in members]
        if np.isscalar(betas):
            jobs.append((r, float(betas), modes))
        else:
            # per-member beta (stage 1): fold the scaling into the modes
            scaled = [
                None if m is None else betas[i] * m for i, m in zip(members, modes)
            ]
            jobs.append((r, 1.0, scaled))
    if pool is None:
        sums = [_chunk_stage_sum_args(j) for j in jobs]
    else:
        sums = list(pool.map(_chunk_stage_sum_args, jobs))
    total = np.zeros_like(r)
    for s in sums:
        total += s
    return total / n_members


def decompose_iceemdan(
    x: TimeSeries, params: DecompParams = DecompParams(), workers: int = 1
) -> Decomposition:
    """Improved CEEMDAN decomposition.

    Stage 1 averages the local mean of x plus scaled first noise modes;
    each later stage k averages the local mean of the running residual plus
    scaled k-th noise modes. IMFs are successive residual differences, so
    the telescoping sum reconstructs x exactly. Output is a pure function
    of (x, params), independent of `workers`.
    """
    s = x.samples.astype(float)
    n = s.size
    cfg = params.sift
    eps = params.noise_amplitude
    pool = ProcessPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        bank = build_noise_bank(params.seed, params.ensemble_size, n, cfg, workers)

        maxima, minima = find_extrema(s)
        if maxima.size + minima.size < 3:
            return Decomposition((), s.copy(), "CEEMDAN", params, x.fs)

        # beta_0 = eps * std(x) / std(E_1(w_i)), per member
        std_x = float(np.std(s))
        e1_std = np.array(
            [
                np.std(bank.mode(i, 1)) if bank.mode(i, 1) is not None else 1.0
                for i in range(len(bank))
            ]
        )
        betas0 = eps * std_x / e1_std

        imfs: list[Imf] = []
        r = _stage_mean(s, betas0, 1, bank, pool)
        imfs.append(Imf(s - r, 1))
        k = 2
        while len(imfs) < cfg.max_imfs:
            maxima, minima = find_extrema(r)
            if maxima.size + minima.size < 3:
                break
            beta = eps * float(np.std(r))
            r_next = _stage_mean(r, beta, k, bank, pool)
            imfs.append(Imf(r - r_next, k))
            r = r_next
            k += 1
        return Decomposition(tuple(imfs), r, "CEEMDAN", params, x.fs)
    finally:
        if pool is not None:
            pool.shutdown()
