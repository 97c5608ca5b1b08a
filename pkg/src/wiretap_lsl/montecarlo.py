"""Seeded Monte Carlo estimation of ergodic rates.

The ground truth against which every deterministic-equivalent value is
validated. Realizations are drawn in fixed-size blocks with per-block
RNG streams derived from a master seed, so estimates are bit-identical
for a given seed regardless of how blocks would be scheduled.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import ChannelStatistics, sample_channel_block
from .detequiv import _precoder_matrix

_BLOCK_SIZE = 256


@dataclass(frozen=True)
class McEstimate:
    """Sample mean with its standard error over n realizations."""

    mean: float
    std_error: float
    num_realizations: int
    seed: int


def _block_seeds(seed: int, num_blocks: int):
    return np.random.SeedSequence(seed).spawn(num_blocks)


def _logdet_block(h: np.ndarray, p: np.ndarray) -> np.ndarray:
    """(1/M) ln det(I + H P Hᴴ) for a (count, N, M) stack of channels."""
    count, n, m = h.shape
    gram = np.eye(n) + h @ p @ h.conj().transpose(0, 2, 1)
    # Symmetrize before the batched Cholesky; rounding breaks exact
    # conjugate symmetry at high SNR.
    gram = 0.5 * (gram + gram.conj().transpose(0, 2, 1))
    chol = np.linalg.cholesky(gram)
    diags = np.diagonal(chol, axis1=1, axis2=2).real
    return 2.0 * np.sum(np.log(diags), axis=1) / m


def mc_ergodic_mi(stats: ChannelStatistics, p, n: int, seed: int) -> McEstimate:
    """Average per-antenna MI over n sampled channel realizations."""
    if n < 1:
        raise ValueError("n must be >= 1")
    pmat = _precoder_matrix(p)
    num_blocks = (n + _BLOCK_SIZE - 1) // _BLOCK_SIZE
    values = np.empty(n)
    offset = 0
    for child in _block_seeds(seed, num_blocks):
        count = min(_BLOCK_SIZE, n - offset)
        rng = np.random.default_rng(child)
        h = sample_channel_block(stats, count, rng)
        values[offset : offset + count] = _logdet_block(h, pmat)
        offset += count
    mean = float(values.mean())
    std_error = float(values.std(ddof=1) / np.sqrt(n)) if n > 1 else 0.0
    return McEstimate(mean=mean, std_error=std_error, num_realizations=n, seed=seed)


def mc_secrecy_rate(
    stats_m: ChannelStatistics,
    stats_e: ChannelStatistics,
    p,
    n: int,
    seed: int,
) -> McEstimate:
    """Clamped difference of the two links' Monte Carlo mean MIs.

    The clamp is applied to the difference of the averages, never per
    realization. Both links consume the same seed (common random
    numbers), so identical statistics yield an exact zero.
    """
    est_m = mc_ergodic_mi(stats_m, p, n, seed)
    est_e = mc_ergodic_mi(stats_e, p, n, seed)
    mean = max(0.0, est_m.mean - est_e.mean)
    std_error = float(np.hypot(est_m.std_error, est_e.std_error))
    return McEstimate(mean=mean, std_error=std_error, num_realizations=n, seed=seed)


@dataclass(frozen=True)
class ValidationRow:
    """One cross-check of the deterministic equivalent against Monte Carlo."""

    snr_db: float
    strategy: str
    rs_lsl: float
    rs_mc: float
    std_error: float
    flagged: bool


def validate_lsl(config, snr_grid, n: int, seed: int) -> list[ValidationRow]:
    """Run both pipelines per (SNR, strategy) and flag disagreements.

    A point is flagged when |rs_lsl - rs_mc| > max(3*std_error,
    0.02*rs_mc). Flags are reported, never raised.
    """
    from .experiment import build_statistics  # local import to avoid a cycle
    from .precoders import optimize

    rows = []
    for snr_db in snr_grid:
        stats_m, stats_e = build_statistics(config, snr_db=snr_db)
        for strategy in config.strategies:
            precoder, rate, _ = optimize(strategy, stats_m, stats_e)
            mc = mc_secrecy_rate(stats_m, stats_e, precoder, n, seed)
            gap = abs(rate.rs - mc.mean)
            flagged = gap > max(3.0 * mc.std_error, 0.02 * mc.mean)
            rows.append(
                ValidationRow(
                    snr_db=float(snr_db),
                    strategy=str(strategy.value if hasattr(strategy, "value") else strategy),
                    rs_lsl=rate.rs,
                    rs_mc=mc.mean,
                    std_error=mc.std_error,
                    flagged=flagged,
                )
            )
    return rows
