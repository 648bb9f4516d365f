"""Structural trainability diagnostics: Jacobian rank reports, the
sensitivity Gram matrix over data points, spectral knees, gradient-phase
trajectories with a canonical single-qubit gauge, and gradient-variance
statistics over random initializations.

Thresholds (fixed, not tunable): singular values above 1e-10 count toward
rank; normalized eigenvalues lambda_i/lambda_1 above 1e-6 count toward the
spectral knee; parameters whose trajectory never exceeds 1e-14 in modulus
are flagged inactive.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .circuit import ArchitectureSpec, statevectors
from .errors import InvalidInputError, UndefinedMetricError
from .fourier import CoefficientJacobian
from .linalg import SpectrumResult, numeric_rank, svd_values

RANK_THRESHOLD = 1e-10
KNEE_RATIO = 1e-6
INACTIVE_TOL = 1e-14
_RATIO_GUARD = 1e-10


@dataclass(frozen=True)
class DiagnosticsReport:
    rank: int
    singular_values: SpectrumResult
    knee: int
    ceiling: int
    kernel_dim: int


def jacobian_report(jac: CoefficientJacobian) -> DiagnosticsReport:
    """Rank, spectral knee, theoretical ceiling and kernel dimension of a
    coefficient-matching Jacobian."""
    spec = jac.spec
    s = svd_values(jac.matrix)
    rank = numeric_rank(s, RANK_THRESHOLD)
    if s.values[0] > 0:
        knee = int(np.sum((s.values / s.values[0]) ** 2 > KNEE_RATIO))
    else:
        knee = 0
    ceiling = min(2 * spec.encoding_budget + 1, spec.n_parameters)
    return DiagnosticsReport(
        rank=rank,
        singular_values=s,
        knee=min(knee, rank),
        ceiling=ceiling,
        kernel_dim=spec.n_parameters - rank,
    )


def jacobian_qfim(data_jac) -> np.ndarray:
    """Sensitivity Gram matrix J_data^T J_data / n over the data points."""
    data_jac = np.asarray(data_jac, dtype=float)
    if data_jac.ndim != 2 or data_jac.shape[0] < 1:
        raise InvalidInputError("data Jacobian must be a nonempty 2-D matrix")
    f = data_jac.T @ data_jac / data_jac.shape[0]
    return 0.5 * (f + f.T)


def spectral_knee(spectrum: SpectrumResult) -> int:
    """Count of normalized eigenvalues lambda_i/lambda_1 above 1e-6."""
    lam = spectrum.values
    if lam.size == 0 or lam[0] <= 0:
        raise UndefinedMetricError("spectral knee undefined for a zero spectrum")
    return int(np.sum(lam / lam[0] > KNEE_RATIO))


def max_qfim_rank(n_qubits: int) -> int:
    """Geometric ceiling 2^(N+1) - 2 on the state QFIM rank."""
    if n_qubits < 1:
        raise InvalidInputError("n_qubits must be positive")
    return 2 ** (n_qubits + 1) - 2


# ---------------------------------------------------------------------------
# orthogonal-complement conventions
# ---------------------------------------------------------------------------

def perp_state_single_qubit(psi) -> np.ndarray:
    """Time-reversal partner (conj(psi_1), -conj(psi_0)) of a single-qubit
    state: exactly orthogonal, unit norm, and gauge-equivariant
    (psi -> e^{ia} psi maps the output to e^{-ia} times itself)."""
    psi = np.asarray(psi, dtype=complex)
    if psi.shape != (2,):
        raise InvalidInputError("expected a single-qubit state of length 2")
    if abs(np.linalg.norm(psi) - 1.0) > 1e-10:
        raise InvalidInputError("state must be normalized")
    return np.array([np.conj(psi[1]), -np.conj(psi[0])])


def perp_reference_multi(psi) -> np.ndarray:
    """Deterministic unit vector orthogonal to ``psi`` for N > 1: the first
    standard basis vector with |<e_k|psi>| < 1 - 1e-9, Gram-Schmidt
    orthogonalized against psi."""
    psi = np.asarray(psi, dtype=complex)
    if abs(np.linalg.norm(psi) - 1.0) > 1e-10:
        raise InvalidInputError("state must be normalized")
    for k in range(psi.size):
        if abs(psi[k]) < 1.0 - 1e-9:
            e = np.zeros(psi.size, dtype=complex)
            e[k] = 1.0
            v = e - psi * np.conj(psi[k])
            return v / np.linalg.norm(v)
    raise InvalidInputError("no basis vector sufficiently non-parallel")


# ---------------------------------------------------------------------------
# gradient-phase trajectories
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TrajectorySample:
    """g_j(x) = <psi_perp | d_j psi> over an x grid, one row per parameter,
    plus per-parameter max-modulus normalization."""

    xs: np.ndarray
    g: np.ndarray            # (P, n_x) complex
    normalized_g: np.ndarray  # (P, n_x) complex, zero rows for inactive params
    max_abs: np.ndarray      # (P,)
    active: np.ndarray       # (P,) bool


def g_trajectory(spec: ArchitectureSpec, theta, xs) -> TrajectorySample:
    """Trace every parameter's gradient coefficient along the x grid.

    The orthogonal complement uses the time-reversal gauge for N = 1 and
    the deterministic Gram-Schmidt reference otherwise.  Parameters whose
    trace never exceeds 1e-14 in modulus are flagged inactive and keep a
    zero normalized row.
    """
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    if xs.size == 0:
        raise InvalidInputError("xs must be nonempty")
    psis = statevectors(spec, theta, xs)
    if spec.n_qubits == 1:
        perps = np.stack([psis[:, 1].conj(), -psis[:, 0].conj()], axis=1)
    else:
        perps = np.stack([perp_reference_multi(p) for p in psis])
    p = spec.n_parameters
    g = np.empty((p, xs.size), dtype=complex)
    for j in range(p):
        dpsis = statevectors(spec, theta, xs, insert_param=j)
        g[j] = np.einsum("xd,xd->x", perps.conj(), dpsis)
    max_abs = np.max(np.abs(g), axis=1)
    active = max_abs >= INACTIVE_TOL
    normalized = np.zeros_like(g)
    normalized[active] = g[active] / max_abs[active, None]
    return TrajectorySample(xs=xs, g=g, normalized_g=normalized,
                            max_abs=max_abs, active=active)


def phase_lock_metric(t: TrajectorySample, j: int, k: int) -> float:
    """Mean over x of |Im(g_j / g_k)|, skipping points where |g_k| falls
    below 1e-10 of its maximum."""
    if not (t.active[j] and t.active[k]):
        raise UndefinedMetricError(f"parameter {j if not t.active[j] else k} is inactive")
    gk = t.g[k]
    mask = np.abs(gk) >= _RATIO_GUARD * t.max_abs[k]
    if not np.any(mask):
        raise UndefinedMetricError("all points skipped by the ratio guard")
    return float(np.mean(np.abs(np.imag(t.g[j][mask] / gk[mask]))))


# ---------------------------------------------------------------------------
# gradient variance over random initializations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GradientVarianceStats:
    per_parameter: np.ndarray  # (P,) variance of dL/d theta_k over inits
    median: float
    iqr: float


def gradient_variance(spec: ArchitectureSpec, n_inits: int,
                      x_sample_size: int, rng: np.random.Generator,
                      target=None, xs=None,
                      init_thetas=None) -> GradientVarianceStats:
    """Population variance, over uniform-[0, 2pi] initializations, of each
    component of the MSE loss gradient on a fixed random target/dataset.

    ``target`` and ``xs`` default to a fresh unit-variance target of degree
    E and a uniform x sample drawn from ``rng``; pass them explicitly to
    share one dataset across an architecture family.  ``init_thetas``
    overrides the initialization draws (used to force degenerate cases in
    tests).
    """
    from .training import eval_target, mse_loss_and_gradient, sample_target

    if n_inits < 2:
        raise InvalidInputError("need at least two initializations")
    if target is None:
        target = sample_target(spec.encoding_budget, rng)
    if xs is None:
        xs = rng.uniform(0.0, 2.0 * np.pi, x_sample_size)
    xs = np.asarray(xs, dtype=float)
    ys = eval_target(target, xs)
    p = spec.n_parameters
    if init_thetas is None:
        init_thetas = rng.uniform(0.0, 2.0 * np.pi, (n_inits, p))
    grads = np.empty((n_inits, p))
    for i in range(n_inits):
        _, grads[i], _ = mse_loss_and_gradient(spec, init_thetas[i], xs, ys)
    var = np.var(grads, axis=0)
    q25, q75 = np.percentile(var, [25.0, 75.0])
    return GradientVarianceStats(
        per_parameter=var,
        median=float(np.median(var)),
        iqr=float(q75 - q25),
    )
