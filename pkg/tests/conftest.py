"""Shared fixtures, including the one expensive Monte-Carlo dataset."""

import numpy as np
import pytest

from irslink.correlation import ArrayGeometry, matrix_sqrt, sinc_correlation
from irslink.montecarlo import effective_gain, sample_channels
from irslink.phaseshift import Equal, phase_vector

WAVELENGTH = 0.1  # 3 GHz carrier, meters


def square_sinc(side, spacing_over_lambda=1 / 40):
    d = spacing_over_lambda * WAVELENGTH
    return sinc_correlation(ArrayGeometry(side, side, d, d, WAVELENGTH))


@pytest.fixture(scope="session")
def sinc16():
    return square_sinc(4)


@pytest.fixture(scope="session")
def heavy_mc(sinc16):
    """One million trials of the N=16 planar model with a common quarter-turn phase.

    Drawn through the public per-trial operations so it doubles as the oracle
    for the closed-form moments, the direct-channel power and the sample
    covariance of the surface channel.
    """
    beta_sd = 1.0
    trials = 1_000_000
    cov_trials = 100_000
    seed = 321
    factor = matrix_sqrt(sinc16)
    phases = phase_vector(Equal(np.pi / 4), sinc16.n)
    gains = np.empty(trials)
    hsd_power = 0.0
    cov = np.zeros((sinc16.n, sinc16.n), dtype=complex)
    for i in range(trials):
        ch = sample_channels(beta_sd, factor, factor, seed, i)
        gains[i] = effective_gain(ch, phases)
        hsd_power += abs(ch.h_sd) ** 2
        if i < cov_trials:
            cov += np.outer(ch.h_sr, np.conj(ch.h_sr))
    return {
        "r": sinc16,
        "beta_sd": beta_sd,
        "phases": phases,
        "seed": seed,
        "trials": trials,
        "gains": gains,
        "hsd_power_mean": hsd_power / trials,
        "cov": cov / cov_trials,
        "cov_trials": cov_trials,
    }
