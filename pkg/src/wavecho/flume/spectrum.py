"""Pierson-Moskowitz sea-state spectra and their monochromatic decomposition.

A sea state (Hs, Tp) is turned into a set of component waves on a uniform
frequency grid between 1/30 Hz and the kh = pi model cutoff of 1/6.21 Hz.
Component amplitudes are rescaled so the discrete zeroth moment reproduces
Hs = 4 sqrt(m0) exactly; wavenumbers come from the Airy dispersion relation
at the offshore depth; phases are uniform random, drawn once per seed and
shared by every scenario built from that seed.
"""

from dataclasses import dataclass

import numpy as np

from ..errors import InvalidSeaStateError, ResolutionError

GRAVITY = 9.81

F_MIN = 1.0 / 30.0   # gravity-wave spectrum floor
F_MAX = 1.0 / 6.21   # kh = pi at 30 m offshore depth
MIN_BINS = 50


@dataclass
class SpectrumSpec:
    hs: float
    tp: float
    f_min: float
    f_max: float
    df: float
    frequencies: np.ndarray
    amplitudes: np.ndarray
    wavenumbers: np.ndarray
    omegas: np.ndarray
    phases: np.ndarray

    @property
    def n_components(self) -> int:
        return self.frequencies.size


def pm_spectrum(hs: float, tp: float, f) -> np.ndarray:
    """Spectral density S(f) in m^2/Hz.

    Canonical one-parameter shape A f^-5 exp(-1.25 (f/fp)^-4), with A fixed
    analytically so the [0, inf) integral m0 satisfies Hs = 4 sqrt(m0).
    """
    if hs <= 0 or tp <= 0:
        raise InvalidSeaStateError(f"Hs and Tp must be positive, got ({hs}, {tp})")
    f = np.asarray(f, dtype=float)
    fp = 1.0 / tp
    m0 = (hs / 4.0) ** 2
    # integral of f^-5 exp(-1.25 (fp/f)^4) over f >= 0 equals 1/(5 fp^4)
    amp = m0 * 5.0 * fp ** 4
    with np.errstate(divide="ignore", over="ignore"):
        dens = amp * f ** -5.0 * np.exp(-1.25 * (fp / f) ** 4)
    return np.where(f > 0.0, dens, 0.0)


def dispersion_wavenumber(omega, depth: float, tol: float = 1e-12):
    """Solve the Airy relation omega^2 = g k tanh(k h) for k by Newton."""
    scalar = np.isscalar(omega)
    omega = np.atleast_1d(np.asarray(omega, dtype=float))
    target = omega ** 2 / GRAVITY
    # deep-water start, floored by the shallow-water limit
    k = np.maximum(target, omega / np.sqrt(GRAVITY * depth))
    for _ in range(100):
        th = np.tanh(k * depth)
        f_val = k * th - target
        f_prime = th + k * depth * (1.0 - th ** 2)
        dk = f_val / f_prime
        k = k - dk
        if np.max(np.abs(dk)) < tol * np.max(k):
            break
    return float(k[0]) if scalar else k


def frequency_grid(duration: float, f_min: float = F_MIN, f_max: float = F_MAX):
    """Uniform bins of width 1/duration covering [f_min, f_max].

    The grid starts at f_min and extends one bin past f_max whenever the
    range is not an integer multiple of df, so both endpoints are inside the
    covered band (921 bins for the 2-hour runs).
    """
    df = 1.0 / duration
    span = (f_max - f_min) / df
    n = int(np.floor(span * (1.0 + 1e-12))) + 2
    return f_min + df * np.arange(n), df


def discretize_spectrum(
    hs: float,
    tp: float,
    duration: float,
    seed: int,
    depth_offshore: float = 30.0,
    f_min: float = F_MIN,
    f_max: float = F_MAX,
) -> SpectrumSpec:
    """Decompose a PM spectrum into monochromatic components.

    ``duration`` fixes the bin width df = 1/duration so the superposed wave
    train does not repeat within one run.  Raises ResolutionError when that
    leaves fewer than MIN_BINS components.
    """
    if hs <= 0 or tp <= 0:
        raise InvalidSeaStateError(f"Hs and Tp must be positive, got ({hs}, {tp})")
    freqs, df = frequency_grid(duration, f_min, f_max)
    if freqs.size < MIN_BINS:
        raise ResolutionError(
            f"duration {duration:g}s gives only {freqs.size} bins (need {MIN_BINS})"
        )
    dens = pm_spectrum(hs, tp, freqs)
    m0_discrete = float(np.sum(dens) * df)
    dens = dens * ((hs / 4.0) ** 2 / m0_discrete)
    amplitudes = np.sqrt(2.0 * dens * df)
    omegas = 2.0 * np.pi * freqs
    wavenumbers = dispersion_wavenumber(omegas, depth_offshore)
    phases = np.random.default_rng([int(seed), 7]).uniform(0.0, 2.0 * np.pi, freqs.size)
    return SpectrumSpec(
        hs=hs, tp=tp, f_min=f_min, f_max=f_max, df=df,
        frequencies=freqs, amplitudes=amplitudes,
        wavenumbers=wavenumbers, omegas=omegas, phases=phases,
    )
