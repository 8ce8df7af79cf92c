"""Independent Monte-Carlo oracle for the closed-form outage expressions.

Samples the correlated Rayleigh channel model, forms the instantaneous
effective gain and estimates outage empirically for any phase-shift design,
including per-realization co-phasing with perfect channel knowledge.

Reproducibility contract: trial ``i`` draws all of its Gaussians from the
counter-based stream (seed, channel domain, i) in a fixed layout
(2 normals for the direct channel, then 2N for the source-surface vector,
then 2N for the surface-destination vector, Box-Muller throughout), so
trials are order-independent units of work and every estimate is a pure
function of (scenario, design, trials, seed).
"""

from dataclasses import dataclass

import numpy as np

from . import rng
from .closedform import SystemParameters, snr_threshold
from .correlation import CorrelationMatrix, matrix_sqrt
from .errors import DomainError
from .phaseshift import Equal, Fixed, OptimalCsi, PhaseShiftDesign, UniformRandom, phase_vector


@dataclass(frozen=True)
class ChannelRealization:
    """One draw of the direct scalar channel and the two surface-side vectors."""

    h_sd: complex
    h_sr: np.ndarray
    h_rd: np.ndarray

    def __post_init__(self):
        if self.h_sr.shape != self.h_rd.shape or self.h_sr.ndim != 1:
            raise DomainError("channel vectors must be 1-D and of equal length")
        if not (
            np.isfinite(self.h_sd)
            and np.all(np.isfinite(self.h_sr))
            and np.all(np.isfinite(self.h_rd))
        ):
            raise DomainError("channel realization has non-finite entries")

    @property
    def n(self) -> int:
        return self.h_sr.shape[0]


@dataclass(frozen=True)
class McEstimate:
    """Empirical outage estimate with its binomial standard error."""

    trials: int
    failures: int
    p_hat: float
    std_err: float

    @classmethod
    def from_counts(cls, trials: int, failures: int) -> "McEstimate":
        p = failures / trials
        return cls(trials, failures, p, float(np.sqrt(p * (1.0 - p) / trials)))


def _draw_channels(gen, beta_sd, l_sr, l_rd, n):
    """Fixed draw layout: 2 normals for h_sd, then 2N for h_sr, then 2N for h_rd."""
    g = rng.standard_normals(gen, 2 + 4 * n)
    h_sd = complex(np.sqrt(beta_sd / 2.0) * (g[0] + 1j * g[1]))
    g_sr = (g[2 : 2 + n] + 1j * g[2 + n : 2 + 2 * n]) / np.sqrt(2.0)
    g_rd = (g[2 + 2 * n : 2 + 3 * n] + 1j * g[2 + 3 * n :]) / np.sqrt(2.0)
    return h_sd, l_sr @ g_sr, l_rd @ g_rd


def sample_channels(
    beta_sd: float,
    l_sr: np.ndarray,
    l_rd: np.ndarray,
    seed: int,
    trial_index: int,
) -> ChannelRealization:
    """Draw the channel realization of one trial.

    l_sr and l_rd are square-root factors of the covariance matrices (from
    correlation.matrix_sqrt); the surface vectors are L @ g with g a standard
    complex Gaussian vector.
    """
    n = l_sr.shape[0]
    if l_sr.shape != (n, n) or l_rd.shape != (n, n):
        raise DomainError("covariance factors must be square and of equal size")
    gen = rng.stream(seed, rng.DOMAIN_CHANNEL, trial_index)
    h_sd, h_sr, h_rd = _draw_channels(gen, beta_sd, l_sr, l_rd, n)
    return ChannelRealization(h_sd=h_sd, h_sr=h_sr, h_rd=h_rd)


def effective_gain(ch: ChannelRealization, phases: np.ndarray) -> float:
    """|h_sd + sum_n conj(h_sr[n]) phases[n] h_rd[n]|^2."""
    phases = np.asarray(phases)
    if phases.shape != ch.h_sr.shape:
        raise DomainError(f"phase vector shape {phases.shape} does not match n={ch.n}")
    cascade = np.sum(np.conj(ch.h_sr) * phases * ch.h_rd)
    return float(np.abs(ch.h_sd + cascade) ** 2)


def cophased_phases(ch: ChannelRealization) -> np.ndarray:
    """Per-realization phases aligning every cascaded term with the direct channel.

    The resulting amplitude is |h_sd| + sum_n |h_sr[n]| |h_rd[n]|; with a
    blocked direct channel the reference phase is zero.
    """
    reference = np.angle(ch.h_sd) if ch.h_sd != 0 else 0.0
    return np.exp(1j * (reference - np.angle(np.conj(ch.h_sr) * ch.h_rd)))


def _resolve_phases(design: PhaseShiftDesign, n: int):
    """Static designs materialize once; per-trial designs return None here."""
    if isinstance(design, (Equal, Fixed)):
        return phase_vector(design, n)
    if isinstance(design, (UniformRandom, OptimalCsi)):
        return None
    raise DomainError(f"unknown phase-shift design {design!r}")


def gain_samples(
    beta_sd: float,
    r_sr: CorrelationMatrix,
    r_rd: CorrelationMatrix,
    design: PhaseShiftDesign,
    trials: int,
    seed: int,
) -> np.ndarray:
    """Effective gains of trials 0..trials-1; the raw material of every estimate.

    Equivalent to chaining sample_channels / phase resolution / effective_gain
    per trial, with the per-trial stream bookkeeping hoisted out of the loop.
    """
    if trials < 1:
        raise DomainError(f"need at least one trial, got {trials}")
    n = r_sr.n
    l_sr, l_rd = matrix_sqrt(r_sr), matrix_sqrt(r_rd)
    static = _resolve_phases(design, n)
    channel_streams = rng.StreamFamily(seed)
    phase_streams = rng.StreamFamily(design.seed) if isinstance(design, UniformRandom) else None
    gains = np.empty(trials)
    for i in range(trials):
        gen = channel_streams.get(rng.DOMAIN_CHANNEL, i)
        h_sd, h_sr, h_rd = _draw_channels(gen, beta_sd, l_sr, l_rd, n)
        if static is not None:
            phases = static
        elif phase_streams is not None:
            pg = phase_streams.get(rng.DOMAIN_PHASE, i)
            phases = np.exp(1j * pg.uniform(-np.pi, np.pi, n))
        else:
            reference = np.angle(h_sd) if h_sd != 0 else 0.0
            phases = np.exp(1j * (reference - np.angle(np.conj(h_sr) * h_rd)))
        gains[i] = np.abs(h_sd + np.sum(np.conj(h_sr) * phases * h_rd)) ** 2
    return gains


def estimate_outage(
    params: SystemParameters,
    r_sr: CorrelationMatrix,
    r_rd: CorrelationMatrix,
    design: PhaseShiftDesign,
    trials: int,
    seed: int,
) -> McEstimate:
    """Empirical outage: the fraction of trials whose gain falls below threshold.

    Failure counting uses the strict inequality gain < z, matching the
    capacity-below-target definition.
    """
    z = snr_threshold(params)
    gains = gain_samples(params.beta_sd, r_sr, r_rd, design, trials, seed)
    failures = int(np.count_nonzero(gains < z))
    return McEstimate.from_counts(trials, failures)


@dataclass(frozen=True)
class SampleMoments:
    """Sample moments of the effective gain, with standard errors as diagnostics."""

    trials: int
    mean: float
    variance: float
    second_moment: float
    se_mean: float
    se_variance: float
    se_second_moment: float


def sample_gain_moments(
    params: SystemParameters,
    r_sr: CorrelationMatrix,
    r_rd: CorrelationMatrix,
    design: PhaseShiftDesign,
    trials: int,
    seed: int,
) -> SampleMoments:
    """Unbiased sample mean/variance of the gain plus its raw second moment."""
    if trials < 2:
        raise DomainError(f"need at least two trials for moments, got {trials}")
    gains = gain_samples(params.beta_sd, r_sr, r_rd, design, trials, seed)
    mean = float(np.mean(gains))
    variance = float(np.var(gains, ddof=1))
    second = float(np.mean(gains**2))
    centered = gains - mean
    m4 = float(np.mean(centered**4))
    se_mean = float(np.sqrt(variance / trials))
    # Asymptotic standard error of the sample variance.
    se_variance = float(np.sqrt(max(m4 - variance**2, 0.0) / trials))
    se_second = float(np.std(gains**2, ddof=1) / np.sqrt(trials))
    return SampleMoments(trials, mean, variance, second, se_mean, se_variance, se_second)
