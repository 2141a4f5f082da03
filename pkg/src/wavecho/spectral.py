"""Cochlea-style spectral frontend: sliding-window Fourier analysis.

Forward transform is the unnormalized DFT (numpy convention); the inverse
carries the 1/F factor.  A per-sample recurrence keeps the coefficients of a
moving F-sample window current in O(F) work, with a full recomputation every
RESYNC_INTERVAL updates to bound rounding drift.
"""

from dataclasses import dataclass

import numpy as np

from .errors import InconsistentSpectrumError, NumericInputError, ShapeError

DEFAULT_WINDOW = 16
RESYNC_INTERVAL = 4096

_twiddle_cache: dict = {}
_latest_cache: dict = {}


def _twiddle(f: int) -> np.ndarray:
    if f not in _twiddle_cache:
        _twiddle_cache[f] = np.exp(2j * np.pi * np.arange(f) / f)
    return _twiddle_cache[f]


def _latest_basis(f: int) -> np.ndarray:
    # Row of the inverse DFT matrix for the newest-sample slot.
    if f not in _latest_cache:
        _latest_cache[f] = np.exp(2j * np.pi * np.arange(f) * (f - 1) / f) / f
    return _latest_cache[f]


@dataclass
class SpectralFrame:
    """DFT of the most recent F samples plus the raw window (oldest first)."""

    window: np.ndarray
    coeffs: np.ndarray
    updates_since_sync: int = 0

    @property
    def f(self) -> int:
        return self.window.shape[0]

    def copy(self) -> "SpectralFrame":
        return SpectralFrame(self.window.copy(), self.coeffs.copy(), self.updates_since_sync)


def window_transform(samples) -> SpectralFrame:
    """Build a frame from exactly F raw samples."""
    samples = np.asarray(samples, dtype=float)
    if samples.ndim != 1 or samples.size == 0:
        raise ShapeError(f"expected a 1-D sample window, got shape {samples.shape}")
    if not np.all(np.isfinite(samples)):
        raise NumericInputError("non-finite window sample")
    return SpectralFrame(window=samples.copy(), coeffs=np.fft.fft(samples))


def incremental_update(frame: SpectralFrame, new_sample: float) -> SpectralFrame:
    """Slide the window one sample forward.

    Per-bin recurrence X_k <- (X_k + (s_new - s_oldest)) * e^{i 2 pi k / F};
    equals the direct DFT of the shifted window up to rounding.
    """
    if not np.isfinite(new_sample):
        raise NumericInputError("non-finite sample pushed into spectral frame")
    window = np.empty_like(frame.window)
    window[:-1] = frame.window[1:]
    window[-1] = new_sample
    count = frame.updates_since_sync + 1
    if count >= RESYNC_INTERVAL:
        return SpectralFrame(window, np.fft.fft(window), 0)
    coeffs = (frame.coeffs + (new_sample - frame.window[0])) * _twiddle(frame.f)
    return SpectralFrame(window, coeffs, count)


def split_to_input(frame: SpectralFrame) -> np.ndarray:
    """Stack [real parts; imaginary parts] into the reservoir input vector."""
    return np.concatenate([frame.coeffs.real, frame.coeffs.imag])


def coeffs_from_split(vec: np.ndarray) -> np.ndarray:
    """Inverse of split_to_input for a predicted spectral vector."""
    vec = np.asarray(vec, dtype=float)
    if vec.ndim != 1 or vec.size % 2:
        raise ShapeError("spectral vector must be 1-D with even length")
    f = vec.size // 2
    return vec[:f] + 1j * vec[f:]


def inverse_transform(coeffs) -> np.ndarray:
    """1/F-normalized inverse DFT of the spectrum of a real window.

    Coefficients must be conjugate-symmetric within tolerance; the
    (sub-1e-9) imaginary residue of the inverse is discarded.
    """
    coeffs = np.asarray(coeffs, dtype=complex)
    if coeffs.ndim != 1 or coeffs.size == 0:
        raise ShapeError("expected a 1-D coefficient vector")
    f = coeffs.size
    mirrored = np.conj(coeffs[(-np.arange(f)) % f])
    scale = max(1.0, float(np.max(np.abs(coeffs))))
    violation = float(np.max(np.abs(coeffs - mirrored)))
    if violation > 1e-6 * scale:
        raise InconsistentSpectrumError(
            f"conjugate symmetry violated by {violation:g} (scale {scale:g})"
        )
    return np.fft.ifft(coeffs).real


def reconstruct_latest(coeffs) -> float:
    """Newest-sample slot of the inverse transform (the predicted sample).

    Tolerant of mild asymmetry: used on readout-predicted spectra, where
    exact conjugate symmetry is not guaranteed.
    """
    coeffs = np.asarray(coeffs, dtype=complex)
    return float((coeffs @ _latest_basis(coeffs.size)).real)
