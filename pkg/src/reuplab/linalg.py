"""Small dense linear-algebra helpers: DFT coefficient extraction on uniform
grids, singular/eigen spectra, and thresholded numeric rank.

Conventions
-----------
* ``dft_extract`` works on samples taken at x_k = 2*pi*k/n for k = 0..n-1 and
  returns coefficients c_w = (1/n) * sum_k samples[k] * exp(-i*w*x_k) for
  w = -max_freq..max_freq, stored in an array indexed by ``w + max_freq``.
  The sum is evaluated directly (no FFT): grids here are small, of arbitrary
  odd length, and the direct form is exact for bandlimited inputs.
* Spectra (singular values, symmetric eigenvalues) are always returned in
  descending order with tiny negative eigenvalues clamped to zero.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InsufficientGridError, InvalidInputError

# Relative size below which a negative eigenvalue counts as rounding noise.
_CLAMP_REL = 1e-12
# Relative asymmetry tolerated by sym_eig_descending.
_SYM_REL = 1e-12


@dataclass(frozen=True)
class SpectrumResult:
    """Descending, non-negative singular values or eigenvalues."""

    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", np.asarray(self.values, dtype=float))

    def __len__(self):
        return len(self.values)


def dft_extract(samples, max_freq: int) -> np.ndarray:
    """Extract Fourier coefficients c_w, w in {-max_freq..max_freq}.

    ``samples`` must be real values on the uniform grid x_k = 2*pi*k/n.
    Requires n >= 2*max_freq + 1 so every requested frequency is resolvable.
    """
    samples = np.asarray(samples, dtype=float)
    if samples.ndim != 1 or samples.size == 0:
        raise InvalidInputError("samples must be a nonempty 1-D real sequence")
    if not np.all(np.isfinite(samples)):
        raise InvalidInputError("samples contain non-finite values")
    if max_freq < 0:
        raise InvalidInputError("max_freq must be >= 0")
    n = samples.size
    if n < 2 * max_freq + 1:
        raise InsufficientGridError(
            f"{n} samples cannot resolve frequencies up to {max_freq} "
            f"(need at least {2 * max_freq + 1})"
        )
    xk = 2.0 * np.pi * np.arange(n) / n
    omegas = np.arange(-max_freq, max_freq + 1)
    # direct summation: (2E+1, n) phase matrix against the sample vector
    phases = np.exp(-1j * np.outer(omegas, xk))
    return phases @ samples.astype(complex) / n


def svd_values(m) -> SpectrumResult:
    """Descending singular values of a dense real matrix."""
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.size == 0:
        raise InvalidInputError("matrix must be 2-D and nonempty")
    if not np.all(np.isfinite(m)):
        raise InvalidInputError("matrix contains non-finite entries")
    s = np.linalg.svd(m, compute_uv=False)
    return SpectrumResult(np.maximum(s, 0.0))


def sym_eig_descending(m) -> SpectrumResult:
    """Descending eigenvalues of a symmetric PSD matrix, clamped at zero.

    Asymmetry beyond 1e-12 (relative to the largest entry) or negative
    eigenvalues beyond rounding size signal an upstream bug and raise.
    """
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.size == 0:
        raise InvalidInputError("matrix must be square and nonempty")
    if not np.all(np.isfinite(m)):
        raise InvalidInputError("matrix contains non-finite entries")
    scale = np.max(np.abs(m))
    if scale > 0 and np.max(np.abs(m - m.T)) > _SYM_REL * scale:
        raise InvalidInputError("matrix is not symmetric within tolerance")
    lam = np.linalg.eigvalsh(0.5 * (m + m.T))[::-1].copy()
    tol = _CLAMP_REL * max(lam[0], 0.0)
    if lam[-1] < -tol:
        raise InvalidInputError(
            f"matrix is not PSD: eigenvalue {lam[-1]:.3e} below -{tol:.3e}"
        )
    return SpectrumResult(np.maximum(lam, 0.0))


def numeric_rank(s: SpectrumResult, threshold: float) -> int:
    """Number of spectrum values strictly above ``threshold``."""
    if threshold <= 0:
        raise InvalidInputError("threshold must be positive")
    return int(np.sum(s.values > threshold))
