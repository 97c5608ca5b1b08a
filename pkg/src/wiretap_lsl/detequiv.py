"""Large-system (deterministic-equivalent) rates for correlated MIMO links.

The ergodic mutual information of one link is approximated by a
closed-form expression parameterized by a pair (e, delta) that solves
two coupled trace equations; the secrecy rate is the clamped difference
of the two links' approximations. All rates here are in nats per
transmit antenna; conversion to bits happens at the reporting boundary.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import ChannelStatistics
from .errors import NoConvergence
from .linalg import eigh, hermitianize

_FP_TOL = 1e-12
_FP_MAX_ITER = 10_000
_STALL_STEPS = 10


@dataclass(frozen=True)
class FixedPoint:
    """Solution (e, delta) of one link's coupled trace equations."""

    e: float
    delta: float
    iterations: int
    residual: float


@dataclass(frozen=True)
class LslRate:
    """Deterministic-equivalent rates: both links' MI and their clamped gap."""

    i_main: float
    i_eave: float

    @property
    def rs(self) -> float:
        return max(0.0, self.i_main - self.i_eave)


def _precoder_matrix(p) -> np.ndarray:
    """Accept either a Precoder or a bare Hermitian matrix."""
    return np.asarray(getattr(p, "p", p), dtype=complex)


def _spectra(stats: ChannelStatistics, p) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues of R and of the symmetrized T^(1/2) P T^(1/2)."""
    r_eigs, _ = eigh(stats.r_corr)
    k = hermitianize(stats.t_sqrt @ _precoder_matrix(p) @ stats.t_sqrt)
    k_eigs, _ = eigh(k)
    return np.clip(r_eigs, 0.0, None), np.clip(k_eigs, 0.0, None)


def solve_fixed_point(stats: ChannelStatistics, p) -> FixedPoint:
    """Solve e = (rho/N) tr{R(I+dR)^-1}, d = (rho/M) tr{K(I+b e K)^-1}.

    K is the symmetrized T^(1/2) P T^(1/2). Plain alternating
    substitution from e = d = rho; under-relaxation (0.5) kicks in only
    if the residual stalls for 10 consecutive steps.
    """
    rho, beta = stats.snr, stats.beta
    n, m = stats.num_rx, stats.num_tx
    r_eigs, k_eigs = _spectra(stats, p)

    e = delta = rho
    residual = np.inf
    stall = 0
    damp = 1.0
    for it in range(1, _FP_MAX_ITER + 1):
        e_new = (rho / n) * np.sum(r_eigs / (1.0 + delta * r_eigs))
        delta_new = (rho / m) * np.sum(k_eigs / (1.0 + beta * e_new * k_eigs))
        e_new = damp * e_new + (1.0 - damp) * e
        delta_new = damp * delta_new + (1.0 - damp) * delta
        new_residual = max(abs(e_new - e), abs(delta_new - delta))
        if new_residual >= residual:
            stall += 1
            if stall >= _STALL_STEPS:
                damp = 0.5
        else:
            stall = 0
        e, delta, residual = e_new, delta_new, new_residual
        if residual <= _FP_TOL:
            return FixedPoint(e=float(e), delta=float(delta), iterations=it, residual=float(residual))
    raise NoConvergence(f"fixed point residual {residual:.3e} after {_FP_MAX_ITER} iterations")


def lsl_mutual_information(stats: ChannelStatistics, p, fp: FixedPoint) -> float:
    """Deterministic-equivalent ergodic MI, nats per transmit antenna.

    (1/M) ln det(I + b e K) + (1/M) ln det(I + d R) - (b/rho) d e, with
    K = T^(1/2) P T^(1/2) (same determinant as T P, but guaranteed HPD).
    """
    rho, beta, m = stats.snr, stats.beta, stats.num_tx
    if rho == 0.0:
        return 0.0
    r_eigs, k_eigs = _spectra(stats, p)
    term_t = np.sum(np.log1p(beta * fp.e * k_eigs))
    term_r = np.sum(np.log1p(fp.delta * r_eigs))
    return float((term_t + term_r) / m - (beta / rho) * fp.delta * fp.e)


def lsl_secrecy_rate(stats_m: ChannelStatistics, stats_e: ChannelStatistics, p) -> LslRate:
    """Clamped difference of both links' deterministic-equivalent MIs."""
    if stats_m.num_tx != stats_e.num_tx:
        raise ValueError("both links must share the transmit antenna count")
    fp_m = solve_fixed_point(stats_m, p)
    fp_e = solve_fixed_point(stats_e, p)
    return LslRate(
        i_main=lsl_mutual_information(stats_m, p, fp_m),
        i_eave=lsl_mutual_information(stats_e, p, fp_e),
    )


def lsl_objective(
    em: float,
    ee: float,
    stats_m: ChannelStatistics,
    stats_e: ChannelStatistics,
    p,
) -> float:
    """Optimization surrogate: clamped gap of the two log-det terms only.

    em and ee are frozen trace parameters; the residual -(b/rho) d e
    terms of the full MI expression are deliberately absent.
    """
    m = stats_m.num_tx
    _, k_m = _spectra(stats_m, p)
    _, k_e = _spectra(stats_e, p)
    gap = np.sum(np.log1p(stats_m.beta * em * k_m)) - np.sum(np.log1p(stats_e.beta * ee * k_e))
    return float(max(0.0, gap / m))
