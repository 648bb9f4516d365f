"""Exact derivatives of circuit outputs and states.

All trainable angles enter through Pauli rotations with +-1/2 generator
eigenvalues, so the two-point parameter-shift rule
g_j = [f(theta + (pi/2) e_j) - f(theta - (pi/2) e_j)] / 2 is exact.
State derivatives come from a second forward pass that inserts the
generator -(i/2)G right after parameter j's elementary rotation.
"""

from __future__ import annotations

import numpy as np

from .circuit import ArchitectureSpec, forward_batch, statevectors, validate_parameters, _z_weights
from .errors import InternalConsistencyError, InvalidInputError


def _shifted_settings(theta: np.ndarray, delta: float) -> np.ndarray:
    """Rows 2j / 2j+1 hold theta with entry j shifted by +delta / -delta."""
    p = theta.size
    settings = np.repeat(theta[None, :], 2 * p, axis=0)
    idx = np.arange(p)
    settings[2 * idx, idx] += delta
    settings[2 * idx + 1, idx] -= delta
    return settings


def data_jacobian(spec: ArchitectureSpec, theta, xs) -> np.ndarray:
    """Output-gradient rows over data points: entry (i, j) is the exact
    parameter-shift derivative of f(xs[i]; theta) w.r.t. theta_j."""
    theta = validate_parameters(spec, theta)
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    if xs.size == 0:
        raise InvalidInputError("xs must be nonempty")
    f = forward_batch(spec, _shifted_settings(theta, np.pi / 2), xs)
    return ((f[0::2] - f[1::2]) / 2.0).T


def parameter_shift_grad(spec: ArchitectureSpec, theta, x: float) -> np.ndarray:
    """Exact gradient of f(x; theta) w.r.t. all parameters."""
    return data_jacobian(spec, theta, [float(x)])[0]


def finite_difference_grad(spec: ArchitectureSpec, theta, x: float,
                           h: float) -> np.ndarray:
    """Central-difference gradient oracle, error O(h^2)."""
    if h <= 0:
        raise InvalidInputError("step size h must be positive")
    theta = validate_parameters(spec, theta)
    f = forward_batch(spec, _shifted_settings(theta, h), [float(x)])[:, 0]
    return (f[0::2] - f[1::2]) / (2.0 * h)


def state_derivative(spec: ArchitectureSpec, theta, x: float, j: int) -> np.ndarray:
    """Exact d|psi(x, theta)>/d theta_j as a complex vector of length 2**N."""
    return statevectors(spec, theta, [float(x)], insert_param=j)[0]


def expectation_grad_from_state(spec: ArchitectureSpec, psi: np.ndarray,
                                dpsi: np.ndarray) -> float:
    """2*Re<psi|M|d_j psi> for M = Z on the last qubit; must agree with the
    parameter-shift gradient component."""
    w = _z_weights(spec.n_qubits)
    return float(2.0 * np.real(np.vdot(psi, w * dpsi)))


def state_qfim(spec: ArchitectureSpec, theta, x: float) -> np.ndarray:
    """Quantum Fisher information matrix of |psi(x, theta)>:
    F_jk = 4 Re[<d_j psi|d_k psi> - <d_j psi|psi><psi|d_k psi>].

    Symmetric PSD by construction; a negative eigenvalue beyond rounding
    size (1e-12 * lambda_1) indicates a bug and raises.
    """
    theta = validate_parameters(spec, theta)
    p = spec.n_parameters
    psi = statevectors(spec, theta, [float(x)])[0]
    derivs = np.stack([state_derivative(spec, theta, x, j) for j in range(p)])
    a = derivs.conj() @ psi            # a_j = <d_j psi | psi>
    gram = derivs.conj() @ derivs.T    # <d_j psi | d_k psi>
    f = 4.0 * np.real(gram - np.outer(a, a.conj()))
    f = 0.5 * (f + f.T)
    lam = np.linalg.eigvalsh(f)
    if lam[0] < -1e-12 * max(lam[-1], 0.0):
        raise InternalConsistencyError(
            f"QFIM eigenvalue {lam[0]:.3e} violates positive semidefiniteness"
        )
    return f
