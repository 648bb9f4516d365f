"""Statevector simulation of the re-uploading circuit family.

Architecture: ``fm_layers`` (= L) data-encoding layers interleaved with L+1
trainable ansatz positions; each position stacks ``tbl`` trainable blocks.
A trainable block applies Rot on qubit 0, then for q = 1..N-1 a
CNOT(q-1 -> q) followed by Rot on qubit q (for N = 1 it is a single Rot).
An encoding layer applies RX(x) to every qubit.  The observable is Pauli-Z
on the last qubit (index N-1).

Fixed conventions (documented because coefficient-level comparisons depend
on them; all structural rank results are invariant under these choices):

* Rot(phi, theta, omega) applies RZ(phi), then RY(theta), then RZ(omega),
  i.e. the matrix RZ(omega) @ RY(theta) @ RZ(phi).
* RX(x) = exp(-i*x*sigma_x/2); RZ(a) = diag(e^{-ia/2}, e^{+ia/2}).
* Qubit ordering is little-endian: bit q of a basis index is the state of
  qubit q, so |q0=1, q1=0> is basis index 1.
* The CNOT ladder is linear (controls 0..N-2), not a closed ring.

Parameter layout: index j <-> (position, sub_block, qubit, angle) in
position-major order, j = ((position*tbl + sub_block)*N + qubit)*3 + angle.

The batched evaluator ``forward_batch`` simulates a grid of parameter
settings x data points in one pass; everything above it is pure.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError


@dataclass(frozen=True)
class ArchitectureSpec:
    """Circuit family coordinates (N, L, tbl); observable fixed to Z on the
    last qubit."""

    n_qubits: int
    fm_layers: int
    tbl: int = 1

    def __post_init__(self):
        if self.n_qubits < 1 or self.fm_layers < 1 or self.tbl < 1:
            raise InvalidInputError(
                "n_qubits, fm_layers and tbl must all be positive"
            )

    @property
    def encoding_budget(self) -> int:
        """E = N*L, the number of single-qubit encoding gates."""
        return self.n_qubits * self.fm_layers

    @property
    def n_parameters(self) -> int:
        return parameter_count(self)

    @property
    def dim(self) -> int:
        return 1 << self.n_qubits

    @property
    def observable(self) -> str:
        return f"Z{self.n_qubits - 1}"


def parameter_count(spec: ArchitectureSpec) -> int:
    """P = (L+1) * tbl * 3N."""
    return (spec.fm_layers + 1) * spec.tbl * 3 * spec.n_qubits


@dataclass(frozen=True)
class ParameterLayout:
    """Bijection between flat parameter index and circuit coordinates."""

    spec: ArchitectureSpec

    def index(self, position: int, sub_block: int, qubit: int, angle: int) -> int:
        s = self.spec
        if not (0 <= position <= s.fm_layers):
            raise InvalidInputError(f"position {position} out of range")
        if not (0 <= sub_block < s.tbl):
            raise InvalidInputError(f"sub_block {sub_block} out of range")
        if not (0 <= qubit < s.n_qubits):
            raise InvalidInputError(f"qubit {qubit} out of range")
        if not (0 <= angle < 3):
            raise InvalidInputError(f"angle {angle} out of range")
        return ((position * s.tbl + sub_block) * s.n_qubits + qubit) * 3 + angle

    def coords(self, j: int) -> tuple[int, int, int, int]:
        s = self.spec
        if not (0 <= j < s.n_parameters):
            raise InvalidInputError(f"parameter index {j} out of range")
        j, angle = divmod(j, 3)
        j, qubit = divmod(j, s.n_qubits)
        position, sub_block = divmod(j, s.tbl)
        return position, sub_block, qubit, angle


def build_parameter_layout(spec: ArchitectureSpec) -> ParameterLayout:
    return ParameterLayout(spec)


def validate_parameters(spec: ArchitectureSpec, theta) -> np.ndarray:
    theta = np.asarray(theta, dtype=float)
    if theta.shape != (spec.n_parameters,):
        raise InvalidInputError(
            f"parameter vector has shape {theta.shape}, "
            f"expected ({spec.n_parameters},)"
        )
    if not np.all(np.isfinite(theta)):
        raise InvalidInputError("parameter vector contains non-finite values")
    return theta


# ---------------------------------------------------------------------------
# gate matrices
# ---------------------------------------------------------------------------

def rot_matrix(phi: float, theta: float, omega: float) -> np.ndarray:
    """2x2 matrix of RZ(omega) @ RY(theta) @ RZ(phi)."""
    return _rot_matrices(np.array([[phi, theta, omega]]))[0]


def _rot_matrices(angles: np.ndarray) -> np.ndarray:
    """Rot matrices for an (..., 3) array of (phi, theta, omega)."""
    phi, th, om = angles[..., 0], angles[..., 1], angles[..., 2]
    c, s = np.cos(th / 2), np.sin(th / 2)
    m = np.empty(angles.shape[:-1] + (2, 2), dtype=complex)
    m[..., 0, 0] = np.exp(-0.5j * (phi + om)) * c
    m[..., 0, 1] = -np.exp(0.5j * (phi - om)) * s
    m[..., 1, 0] = np.exp(-0.5j * (phi - om)) * s
    m[..., 1, 1] = np.exp(0.5j * (phi + om)) * c
    return m

def _rx_matrices(xs: np.ndarray) -> np.ndarray:
    """RX(x) = exp(-i*x*sigma_x/2) for an (...,) array of angles."""
    c, s = np.cos(xs / 2), np.sin(xs / 2)
    m = np.empty(np.shape(xs) + (2, 2), dtype=complex)
    m[..., 0, 0] = c
    m[..., 0, 1] = -1j * s
    m[..., 1, 0] = -1j * s
    m[..., 1, 1] = c
    return m


def _rz_matrix(a: float) -> np.ndarray:
    return np.array([[np.exp(-0.5j * a), 0.0], [0.0, np.exp(0.5j * a)]])


def _ry_matrix(a: float) -> np.ndarray:
    c, s = np.cos(a / 2), np.sin(a / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


# generators -(i/2)*G inserted when differentiating RZ/RY angles
_GEN_Z = np.array([[-0.5j, 0.0], [0.0, 0.5j]])
_GEN_Y = np.array([[0.0, -0.5], [0.5, 0.0]], dtype=complex)
_ANGLE_GENERATOR = {0: _GEN_Z, 1: _GEN_Y, 2: _GEN_Z}


# ---------------------------------------------------------------------------
# batched statevector engine
# ---------------------------------------------------------------------------
# States are stored as (S, B, 2**N): S parameter settings x B data points.

def _apply_1q(state: np.ndarray, mats: np.ndarray, qubit: int) -> np.ndarray:
    """Apply 2x2 matrices to one qubit axis.  ``mats`` has shape (2,2) for a
    shared gate, (S,2,2) for per-setting gates or (B,2,2) tagged by ndim and
    leading-dimension match; per-setting wins ambiguity (callers never pass
    per-point trainable gates)."""
    S, B, dim = state.shape
    lo = 1 << qubit
    hi = dim >> (qubit + 1)
    st = state.reshape(S, B, hi, 2, lo)
    if mats.ndim == 2:
        out = np.einsum("pq,sbhql->sbhpl", mats, st)
    elif mats.shape[0] == S:
        out = np.einsum("spq,sbhql->sbhpl", mats, st)
    elif mats.shape[0] == B:
        out = np.einsum("bpq,sbhql->sbhpl", mats, st)
    else:
        raise InvalidInputError("gate batch does not match state batch")
    return out.reshape(S, B, dim)


def _cnot_perm(control: int, target: int, n_qubits: int) -> np.ndarray:
    idx = np.arange(1 << n_qubits)
    return idx ^ (((idx >> control) & 1) << target)


def _z_weights(n_qubits: int) -> np.ndarray:
    idx = np.arange(1 << n_qubits)
    return 1.0 - 2.0 * ((idx >> (n_qubits - 1)) & 1)


class _Engine:
    """Precomputed per-spec machinery for repeated circuit evaluation."""

    def __init__(self, spec: ArchitectureSpec):
        self.spec = spec
        self.weights = _z_weights(spec.n_qubits)
        self.cnot_perms = [
            _cnot_perm(q - 1, q, spec.n_qubits) for q in range(1, spec.n_qubits)
        ]

    def run(self, thetas: np.ndarray, xs: np.ndarray,
            insert_param: int | None = None) -> np.ndarray:
        """Simulate all settings x points; returns states (S, B, dim).

        ``insert_param`` places the generator -(i/2)G directly after that
        parameter's elementary rotation, yielding d|psi>/d theta_j.
        """
        spec = self.spec
        S, B = thetas.shape[0], xs.shape[0]
        if insert_param is not None and S != 1:
            raise InvalidInputError("generator insertion needs a single setting")
        state = np.zeros((S, B, spec.dim), dtype=complex)
        state[:, :, 0] = 1.0
        rot_mats = _rot_matrices(thetas.reshape(S, -1, 3))  # (S, P/3, 2, 2)
        rx_mats = _rx_matrices(xs)  # (B, 2, 2)
        insert_triplet = -1 if insert_param is None else insert_param // 3
        insert_angle = -1 if insert_param is None else insert_param % 3

        for position in range(spec.fm_layers + 1):
            if position > 0:
                for q in range(spec.n_qubits):
                    state = _apply_1q(state, rx_mats, q)
            for sub in range(spec.tbl):
                for q in range(spec.n_qubits):
                    if q > 0:
                        state = state[:, :, self.cnot_perms[q - 1]]
                    triplet = (position * spec.tbl + sub) * spec.n_qubits + q
                    if triplet != insert_triplet:
                        state = _apply_1q(state, rot_mats[:, triplet], q)
                    else:
                        # elementary form so the generator lands in-slot
                        angles = thetas[0, 3 * triplet: 3 * triplet + 3]
                        elems = (_rz_matrix(angles[0]), _ry_matrix(angles[1]),
                                 _rz_matrix(angles[2]))
                        for a, gate in enumerate(elems):
                            state = _apply_1q(state, gate, q)
                            if a == insert_angle:
                                state = _apply_1q(
                                    state, _ANGLE_GENERATOR[a], q)
        return state

    def expectation(self, states: np.ndarray) -> np.ndarray:
        return np.real(
            np.einsum("sbd,d->sb", np.abs(states) ** 2, self.weights)
        )


def forward_batch(spec: ArchitectureSpec, thetas, xs) -> np.ndarray:
    """<Z on last qubit> for each parameter setting (rows of ``thetas``)
    at each input point; returns shape (n_settings, n_points)."""
    thetas = np.atleast_2d(np.asarray(thetas, dtype=float))
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    if thetas.shape[1] != spec.n_parameters:
        raise InvalidInputError(
            f"settings have {thetas.shape[1]} parameters, "
            f"expected {spec.n_parameters}"
        )
    eng = _Engine(spec)
    return eng.expectation(eng.run(thetas, xs))


def statevectors(spec: ArchitectureSpec, theta, xs,
                 insert_param: int | None = None) -> np.ndarray:
    """|psi(x, theta)> for each x, shape (n_points, 2**N).

    With ``insert_param`` set, returns d|psi>/d theta_j instead (generator
    insertion during the forward pass).
    """
    theta = validate_parameters(spec, theta)
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    if insert_param is not None and not (0 <= insert_param < spec.n_parameters):
        raise InvalidInputError(f"parameter index {insert_param} out of range")
    eng = _Engine(spec)
    return eng.run(theta[None, :], xs, insert_param=insert_param)[0]


# ---------------------------------------------------------------------------
# single-state operations
# ---------------------------------------------------------------------------

def zero_state(n_qubits: int) -> np.ndarray:
    state = np.zeros(1 << n_qubits, dtype=complex)
    state[0] = 1.0
    return state


def _infer_n_qubits(state: np.ndarray) -> int:
    n = int(np.log2(state.size))
    if (1 << n) != state.size:
        raise InvalidInputError("state length is not a power of two")
    return n


def apply_rot(state, qubit: int, phi: float, theta: float, omega: float) -> np.ndarray:
    """Apply Rot(phi, theta, omega) to ``qubit`` of a single statevector."""
    state = np.asarray(state, dtype=complex)
    n = _infer_n_qubits(state)
    if not (0 <= qubit < n):
        raise InvalidInputError(f"qubit {qubit} out of range for {n} qubits")
    mat = rot_matrix(phi, theta, omega)
    return _apply_1q(state[None, None, :], mat, qubit)[0, 0]


def apply_encoding(state, x: float, n_qubits: int | None = None) -> np.ndarray:
    """Apply RX(x) to every qubit."""
    state = np.asarray(state, dtype=complex)
    n = _infer_n_qubits(state)
    if n_qubits is not None and n_qubits != n:
        raise InvalidInputError("n_qubits inconsistent with state length")
    mat = _rx_matrices(np.asarray(float(x)))
    out = state[None, None, :]
    for q in range(n):
        out = _apply_1q(out, mat, q)
    return out[0, 0]


def apply_trainable_block(state, spec: ArchitectureSpec, position: int,
                          sub_block: int, theta) -> np.ndarray:
    """Apply one trainable block (Rot on qubit 0, then CNOT+Rot up the
    ladder), reading its angles from the flat parameter vector."""
    state = np.asarray(state, dtype=complex)
    if _infer_n_qubits(state) != spec.n_qubits:
        raise InvalidInputError("state size does not match spec")
    theta = validate_parameters(spec, theta)
    layout = ParameterLayout(spec)
    out = state[None, None, :]
    for q in range(spec.n_qubits):
        if q > 0:
            out = out[:, :, _cnot_perm(q - 1, q, spec.n_qubits)]
        base = layout.index(position, sub_block, q, 0)
        out = _apply_1q(out, _rot_matrices(theta[base:base + 3]), q)
    return out[0, 0]


def forward(spec: ArchitectureSpec, theta, x: float) -> float:
    """Scalar circuit output f(x; theta) = <Z on last qubit>, in [-1, 1]."""
    theta = validate_parameters(spec, theta)
    return float(forward_batch(spec, theta[None, :], [float(x)])[0, 0])
