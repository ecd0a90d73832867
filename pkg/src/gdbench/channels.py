"""Discrete-time channel representations and exact Bloch evolution.

The Pauli-Liouville convention used throughout: a channel is a real 4x4
matrix L acting on the coefficient vector (1, rx, ry, rz) of
rho = (I + r.sigma)/2.  Trace preservation fixes the first row to
(1, 0, 0, 0); the lower-right 3x3 block is the unital part and the first
column below the top entry is the nonunital vector.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from gdbench.eigen import eigensystem_exact
from gdbench.model import BlochGenerator, PerturbedGDParams

PAULIS = (
    np.eye(2, dtype=complex),
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


@dataclass(frozen=True)
class LiouvilleChannel:
    """Trace-preserving qubit channel in the Pauli basis {I, X, Y, Z}."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float)
        if m.shape != (4, 4):
            raise ValueError("Liouville matrix must be 4x4")
        if np.max(np.abs(m[0] - np.array([1.0, 0, 0, 0]))) > 1e-12:
            raise ValueError("first row must be (1, 0, 0, 0): not trace preserving")
        m = m.copy()
        m[0] = (1.0, 0.0, 0.0, 0.0)
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def unital(self) -> np.ndarray:
        return self.matrix[1:, 1:]

    @property
    def nonunital(self) -> np.ndarray:
        return self.matrix[1:, 0]

    def apply_bloch(self, r: Sequence[float]) -> np.ndarray:
        return self.unital @ np.asarray(r, dtype=float) + self.nonunital

    def choi(self) -> np.ndarray:
        """Choi matrix (id otimes channel applied to the maximally entangled state)."""
        return _choi_of_map(self.matrix)

    def is_cptp(self, tol: float = 1e-12) -> bool:
        return bool(np.linalg.eigvalsh(self.choi()).min() >= -tol)


def _choi_of_map(liouville: np.ndarray) -> np.ndarray:
    """Choi matrix of a (not necessarily trace-preserving) Pauli-basis map."""
    choi = np.zeros((4, 4), dtype=complex)
    omega = np.zeros((4, 4), dtype=complex)
    for i in range(2):
        for j in range(2):
            omega[2 * i + i, 2 * j + j] = 0.5
    # Expand omega in the two-qubit Pauli basis and push the map through
    # the second factor.
    for i in range(4):
        for j in range(4):
            c = np.trace(np.kron(PAULIS[i], PAULIS[j]).conj().T @ omega).real / 4.0
            out_j = liouville[:, j]
            for k in range(4):
                if out_j[k] != 0.0:
                    choi += c * out_j[k] * np.kron(PAULIS[i], PAULIS[k])
    return choi


@dataclass(frozen=True)
class KrausSet:
    """Kraus operators of the discrete-time generalized damping channel."""

    operators: tuple
    x: float
    a: float
    b: float

    def to_liouville(self) -> LiouvilleChannel:
        m = np.zeros((4, 4))
        for i in range(4):
            for j in range(4):
                acc = 0.0
                for k in self.operators:
                    acc += 0.5 * np.trace(PAULIS[i] @ k @ PAULIS[j] @ k.conj().T).real
                m[i, j] = acc
        return LiouvilleChannel(matrix=m)

    def completeness_defect(self) -> float:
        s = sum(k.conj().T @ k for k in self.operators)
        return float(np.max(np.abs(s - np.eye(2))))


def discrete_params(gamma1_rate: float, gamma2_rate: float, dt: float) -> tuple:
    """Discrete damping probabilities over a step dt."""
    if dt <= 0:
        raise ValueError("dt must be positive")
    g1 = 1.0 - np.exp(-gamma1_rate * dt)
    g2 = 1.0 - np.exp(-2.0 * gamma2_rate * dt)
    return float(g1), float(g2)


def liouville_gd(gamma1: float, gamma2: float, lambda_eq: float) -> LiouvilleChannel:
    """Generalized damping channel in the Pauli basis."""
    _check_discrete(gamma1, gamma2, lambda_eq)
    b = np.sqrt((1.0 - gamma1) * (1.0 - gamma2))
    m = np.diag([1.0, b, b, 1.0 - gamma1])
    m[3, 0] = gamma1 * (2.0 * lambda_eq - 1.0)
    return LiouvilleChannel(matrix=m)


def kraus_gd(gamma1: float, gamma2: float, lambda_eq: float) -> KrausSet:
    """Kraus form of the generalized damping channel.

    Raises when the internal scalar x would be imaginary (the parameter set
    does not define a completely positive channel of this form).
    """
    _check_discrete(gamma1, gamma2, lambda_eq)
    rad = (
        (1.0 - gamma1) * (1.0 - gamma2)
        - gamma1**2 * lambda_eq * (1.0 - lambda_eq)
        + 0.25 * gamma1**2
    )
    if rad < -1e-15:
        raise ValueError(f"non-CP regime: x^2 = {rad} < 0")
    x = np.sqrt(max(rad, 0.0))
    a = x + gamma1 / 2.0 - gamma1 * lambda_eq
    b = np.sqrt((1.0 - gamma1) * (1.0 - gamma2))
    norm = a**2 + b**2
    p0 = np.diag([1.0, 0.0]).astype(complex)
    p1 = np.diag([0.0, 1.0]).astype(complex)
    raise_op = np.array([[0, 1], [0, 0]], dtype=complex)  # |0><1|
    lower_op = np.array([[0, 0], [1, 0]], dtype=complex)  # |1><0|
    c0 = 1.0 - gamma1 / 2.0 - x
    c2 = 1.0 - gamma1 / 2.0 + x
    if c0 < -1e-15 or c2 < -1e-15:
        raise ValueError("non-CP regime: negative Kraus weight")
    k0 = np.sqrt(max(c0, 0.0) / norm) * (a * p0 - b * p1)
    k1 = np.sqrt(lambda_eq * gamma1) * raise_op
    k2 = np.sqrt(max(c2, 0.0) / norm) * (b * p0 + a * p1)
    k3 = np.sqrt((1.0 - lambda_eq) * gamma1) * lower_op
    ops = tuple(op.copy() for op in (k0, k1, k2, k3))
    for op in ops:
        op.setflags(write=False)
    return KrausSet(operators=ops, x=float(x), a=float(a), b=float(b))


def evolve_bloch(gen: BlochGenerator, r0: Sequence[float], t: float) -> np.ndarray:
    """Exact solution of dr/dt = C r + d at time t >= 0."""
    if t < 0:
        raise ValueError("t must be nonnegative")
    es = eigensystem_exact(gen)
    v = es.eigvecs
    eta = es.eigvals
    decay = np.exp(eta * t)
    drive_gain = _expm1_over(eta, t)
    r0 = np.asarray(r0, dtype=float)
    return v @ (decay * (v.T @ r0)) + v @ (drive_gain * (v.T @ gen.drive))


def _expm1_over(eta: np.ndarray, t: float) -> np.ndarray:
    """(e^{eta t} - 1)/eta, series-expanded where eta*t underflows the quotient."""
    out = np.empty_like(eta)
    x = eta * t
    small = np.abs(x) < 1e-8
    out[small] = t * (1.0 + x[small] / 2.0 + x[small] ** 2 / 6.0)
    out[~small] = np.expm1(x[~small]) / eta[~small]
    return out


def liouville_pgd(params: PerturbedGDParams, dt: float) -> LiouvilleChannel:
    """Discrete-time channel of the perturbed generalized damping flow over dt."""
    if dt <= 0:
        raise ValueError("dt must be positive")
    from gdbench.model import bloch_generator

    gen = bloch_generator(params)
    es = eigensystem_exact(gen)
    v = es.eigvecs
    eta = es.eigvals
    p = np.exp(eta * dt)
    n = _expm1_over(eta, dt) * (v.T @ gen.drive)
    m = np.eye(4)
    m[1:, 1:] = v @ np.diag(p) @ v.T
    m[1:, 0] = v @ n
    return LiouvilleChannel(matrix=m)


def _check_discrete(gamma1: float, gamma2: float, lambda_eq: float):
    if not 0.0 <= gamma1 <= 1.0 or not 0.0 <= gamma2 <= 1.0:
        raise ValueError("gamma1, gamma2 must lie in [0, 1]")
    if not 0.5 <= lambda_eq <= 1.0:
        raise ValueError("lambda_eq must lie in [1/2, 1]")
