"""Fourier-side view of a circuit: coefficient extraction on the diagnostic
grid, real representatives, the coefficient-matching Jacobian, frequency
redundancy counts, and closed-form references for the smallest serial and
parallel circuits built from generic SU(2) blocks.

Circuit outputs are trigonometric polynomials supported on integer
frequencies |w| <= E = N*L, so sampling on the diagnostic grid of
n_diag = 2N(L+1)+1 points makes the DFT extraction exact.  The 2N grid
frequencies above E lie outside the accessible spectrum; their extracted
mass is checked against an aliasing threshold and then discarded.

Real representative ordering: (Re c_0, Re c_1, Im c_1, ..., Re c_E, Im c_E).

Closed-form conventions
-----------------------
The reference circuits use the diagonal encoding S(x) with per-basis-state
phase phi_k(x) = (x/2) * sum_n (1 - 2*k_n), k_n the n-th bit of k.  A term
pairing row k with column j of the rotated observable then oscillates at
frequency w = sum_n (k_n - j_n); with this assignment the bilinear sum
reproduces the circuit output exactly (verified against brute-force DFT
to 1e-15).  SU(2) blocks are parameterized uniformly as
[[alpha, -conj(beta)], [beta, conj(alpha)]].
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .circuit import ArchitectureSpec, forward_batch, validate_parameters
from .errors import InternalConsistencyError, InvalidInputError
from .gradients import data_jacobian
from .linalg import dft_extract

_ALIAS_ERROR = 1e-8
_SYMMETRY_TOL = 1e-8


@dataclass(frozen=True)
class FourierSpectrum:
    """Complex coefficients c_w for w in {-budget..budget}, stored at index
    w + budget."""

    budget: int
    coeffs: np.ndarray

    def __post_init__(self):
        coeffs = np.asarray(self.coeffs, dtype=complex)
        if coeffs.shape != (2 * self.budget + 1,):
            raise InvalidInputError(
                f"expected {2 * self.budget + 1} coefficients, got {coeffs.shape}"
            )
        object.__setattr__(self, "coeffs", coeffs)

    def coeff(self, omega: int) -> complex:
        if abs(omega) > self.budget:
            raise InvalidInputError(f"|omega| > {self.budget}")
        return complex(self.coeffs[omega + self.budget])


@dataclass(frozen=True)
class CoefficientJacobian:
    """(2E+1) x P matrix of derivatives of the real representative."""

    spec: ArchitectureSpec
    matrix: np.ndarray


def diag_grid(spec: ArchitectureSpec) -> np.ndarray:
    """The 2N(L+1)+1 equally spaced diagnostic points in [0, 2pi)."""
    n_diag = 2 * spec.n_qubits * (spec.fm_layers + 1) + 1
    return 2.0 * np.pi * np.arange(n_diag) / n_diag


def fourier_coefficients(spec: ArchitectureSpec, theta) -> FourierSpectrum:
    """Extract c_w, |w| <= E, from circuit outputs on the diagnostic grid.

    Raises if the out-of-spectrum DFT frequencies carry mass >= 1e-8,
    which would indicate aliasing or a simulator bug.
    """
    theta = validate_parameters(spec, theta)
    grid = diag_grid(spec)
    samples = forward_batch(spec, theta[None, :], grid)[0]
    max_freq = spec.n_qubits * (spec.fm_layers + 1)  # (n_diag - 1) / 2
    full = dft_extract(samples, max_freq)
    e = spec.encoding_budget
    out_of_band = np.concatenate(
        (full[: max_freq - e], full[max_freq + e + 1:])
    )
    worst = np.max(np.abs(out_of_band))
    if worst >= _ALIAS_ERROR:
        raise InternalConsistencyError(
            f"out-of-spectrum coefficient magnitude {worst:.3e} >= {_ALIAS_ERROR}"
        )
    return FourierSpectrum(e, full[max_freq - e: max_freq + e + 1])


def real_representative(spectrum: FourierSpectrum) -> np.ndarray:
    """Stack (Re c_0, Re c_1, Im c_1, ...) of a conjugate-symmetric spectrum."""
    e = spectrum.budget
    c = spectrum.coeffs
    asym = np.max(np.abs(c[::-1].conj() - c))
    if asym > _SYMMETRY_TOL:
        raise InvalidInputError(
            f"spectrum is not conjugate-symmetric (deviation {asym:.3e})"
        )
    rep = np.empty(2 * e + 1)
    rep[0] = c[e].real
    rep[1::2] = c[e + 1:].real
    rep[2::2] = c[e + 1:].imag
    return rep


def spectrum_from_representative(rep) -> FourierSpectrum:
    """Inverse of ``real_representative`` (exact round trip)."""
    rep = np.asarray(rep, dtype=float)
    if rep.ndim != 1 or rep.size % 2 == 0:
        raise InvalidInputError("representative must have odd length")
    e = (rep.size - 1) // 2
    pos = rep[1::2] + 1j * rep[2::2]
    coeffs = np.concatenate((pos[::-1].conj(), [rep[0] + 0j], pos))
    return FourierSpectrum(e, coeffs)


def coefficient_jacobian(spec: ArchitectureSpec, theta) -> CoefficientJacobian:
    """J[k, j] = d (real representative)_k / d theta_j.

    The DFT and the real-representative stacking are linear, so each column
    is that map applied to the parameter-shift gradients of the output over
    the diagnostic grid.
    """
    theta = validate_parameters(spec, theta)
    grid = diag_grid(spec)
    grads = data_jacobian(spec, theta, grid)  # (n_diag, P)
    e = spec.encoding_budget
    omegas = np.arange(e + 1)
    dft_rows = np.exp(-1j * np.outer(omegas, grid)) / grid.size  # (E+1, n_diag)
    c = dft_rows @ grads  # (E+1, P) complex
    j = np.empty((2 * e + 1, spec.n_parameters))
    j[0] = c[0].real
    j[1::2] = c[1:].real
    j[2::2] = c[1:].imag
    return CoefficientJacobian(spec, j)


def frequency_redundancy(e: int, omega: int) -> int:
    """Number of distinct encoding combinations producing frequency omega:
    binomial(2E, E - omega)."""
    if abs(omega) > e:
        raise InvalidInputError(f"|omega| = {abs(omega)} exceeds budget {e}")
    return math.comb(2 * e, e - omega)


# ---------------------------------------------------------------------------
# closed-form references and their brute-force oracle circuits
# ---------------------------------------------------------------------------

def su2_matrix(alpha: complex, beta: complex) -> np.ndarray:
    """[[alpha, -conj(beta)], [beta, conj(alpha)]]; requires unit norm."""
    if abs(abs(alpha) ** 2 + abs(beta) ** 2 - 1.0) > 1e-10:
        raise InvalidInputError("(alpha, beta) must satisfy |a|^2 + |b|^2 = 1")
    return np.array([[alpha, -np.conj(beta)], [beta, np.conj(alpha)]])


def serial_c2_reference(w1, w2, w3) -> complex:
    """Highest-frequency coefficient c_{+2} of the two-encoding serial
    circuit W3 S(x) W2 S(x) W1 measured in Z, for SU(2) blocks given as
    (alpha_l, beta_l) pairs:

        c_{+2} = -2 * a1 * a2^2 * conj(b1) * b3 * a3

    All three blocks couple simultaneously, with the interior block entering
    squared.  (The final factor is a3, not conj(a3): the unconjugated form
    is what the brute-force DFT of this circuit yields to machine precision.)
    """
    (a1, b1), (a2, b2), (a3, b3) = w1, w2, w3
    for a, b in ((a1, b1), (a2, b2), (a3, b3)):
        su2_matrix(a, b)  # unitarity check
    return -2.0 * a1 * a2 ** 2 * np.conj(b1) * b3 * a3


def encoding_phases(n_qubits: int, x: float) -> np.ndarray:
    """Diagonal of the n-qubit encoding at input x: entry k gets
    exp(i * phi_k) with phi_k = (x/2) * sum_n (1 - 2 k_n)."""
    idx = np.arange(1 << n_qubits)
    ones = np.array([bin(i).count("1") for i in idx])
    return np.exp(1j * (x / 2.0) * (n_qubits - 2 * ones))


def serial_su2_output(x: float, w1, w2, w3) -> float:
    """Brute-force output of the E=2 serial oracle circuit."""
    mats = [su2_matrix(*w) for w in (w1, w2, w3)]
    s = np.diag(encoding_phases(1, x))
    psi = mats[2] @ s @ mats[1] @ s @ mats[0] @ np.array([1.0, 0.0])
    z = np.array([1.0, -1.0])
    return float(np.real(np.vdot(psi, z * psi)))


def parallel_su2_output(x: float, v, mt) -> float:
    """Brute-force output <v| S(x)^dag Mt S(x) |v> of the parallel oracle
    circuit with per-qubit diagonal encoding."""
    v = np.asarray(v, dtype=complex)
    mt = np.asarray(mt, dtype=complex)
    n_qubits = int(np.log2(v.size))
    phases = encoding_phases(n_qubits, x)
    sv = phases * v
    return float(np.real(np.vdot(sv, mt @ sv)))


def parallel_coefficient_reference(n_qubits: int, v, mt, omega: int) -> complex:
    """Bilinear closed form for the parallel (L=1) circuit coefficient:

        c_w = sum over (j, k) with sum_n (k_n - j_n) = w
              of conj(v_k) * Mt[k, j] * v_j

    where v is the encoded state and Mt the back-rotated observable.  With
    this frequency assignment, sum_w c_w e^{iwx} equals the circuit output
    ``parallel_su2_output`` exactly.
    """
    v = np.asarray(v, dtype=complex)
    mt = np.asarray(mt, dtype=complex)
    dim = 1 << n_qubits
    if v.shape != (dim,) or mt.shape != (dim, dim):
        raise InvalidInputError("dimension mismatch between v, Mt and n_qubits")
    if abs(np.linalg.norm(v) - 1.0) > 1e-10:
        raise InvalidInputError("v must be a unit vector")
    if np.max(np.abs(mt - mt.conj().T)) > 1e-10:
        raise InvalidInputError("Mt must be Hermitian")
    if abs(omega) > n_qubits:
        raise InvalidInputError(f"|omega| exceeds the L=1 budget {n_qubits}")
    ones = np.array([bin(i).count("1") for i in range(dim)])
    total = 0.0 + 0.0j
    for k in range(dim):
        for j in range(dim):
            if ones[k] - ones[j] == omega:
                total += np.conj(v[k]) * mt[k, j] * v[j]
    return complex(total)
