"""Continuous-time noise model: perturbed generalized damping.

A qubit relaxing at rate ``gamma1`` toward a ground-state population
``lambda_eq`` while dephasing at rate ``gamma2`` is the generalized damping
(GD) process.  Additional unknown dissipative noise enters as small
off-diagonal couplings (``alpha_r``, ``alpha_i``, ``beta_raw``,
``delta_raw``) of the dissipator coefficient matrix, which turn the Bloch
dynamics into a general affine flow dr/dt = C r + d.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

SQRT2 = np.sqrt(2.0)


@dataclass(frozen=True)
class PerturbedGDParams:
    """Parameters of the perturbed generalized damping model (all rates 1/time)."""

    gamma1_rate: float
    gamma2_rate: float
    lambda_eq: float = 1.0
    alpha_r: float = 0.0
    alpha_i: float = 0.0
    beta_raw: float = 0.0
    delta_raw: float = 0.0

    def __post_init__(self):
        if self.gamma1_rate < 0:
            raise ValueError(f"gamma1_rate must be >= 0, got {self.gamma1_rate}")
        if self.gamma2_rate < 0:
            raise ValueError(f"gamma2_rate must be >= 0, got {self.gamma2_rate}")
        if not 0.5 <= self.lambda_eq <= 1.0:
            raise ValueError(f"lambda_eq must lie in [1/2, 1], got {self.lambda_eq}")

    @property
    def gamma2_prime(self) -> float:
        """Total dephasing rate: gamma1/2 + gamma2 (inverse T2)."""
        return 0.5 * self.gamma1_rate + self.gamma2_rate

    @property
    def beta_eff(self) -> float:
        """Effective transverse coupling (beta_raw + delta_raw)/sqrt(2)."""
        return (self.beta_raw + self.delta_raw) / SQRT2

    @property
    def alpha_abs(self) -> float:
        return float(np.hypot(self.alpha_r, self.alpha_i))


@dataclass(frozen=True)
class SpamParams:
    """State preparation and measurement error model.

    Preparation shrinks the Bloch vector by (1 - k); measurement maps the
    ideal expectation v to (1 - n1) v + n2.
    """

    k: float = 0.0
    n1: float = 0.0
    n2: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.k < 1.0:
            raise ValueError(f"k must lie in [0, 1), got {self.k}")
        if not 0.0 <= self.n1 < 1.0:
            raise ValueError(f"n1 must lie in [0, 1), got {self.n1}")


@dataclass(frozen=True)
class BlochGenerator:
    """Affine Bloch-vector generator dr/dt = c_matrix r + drive."""

    c_matrix: np.ndarray
    drive: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.c_matrix, dtype=float)
        d = np.asarray(self.drive, dtype=float)
        if c.shape != (3, 3) or d.shape != (3,):
            raise ValueError("BlochGenerator needs a 3x3 matrix and a 3-vector")
        if not np.array_equal(c, c.T):
            raise ValueError("generator matrix must be exactly symmetric")
        c.setflags(write=False)
        d.setflags(write=False)
        object.__setattr__(self, "c_matrix", c)
        object.__setattr__(self, "drive", d)


def build_coefficient_matrix(params: PerturbedGDParams) -> np.ndarray:
    """Dissipator coefficient matrix in the {sigma+, sigma-, Z/sqrt(2)} basis.

    Always Hermitian by construction; positive semi-definiteness is a
    separate diagnostic (see :func:`is_dissipator_psd`) because indefinite
    matrices still define sensible perturbative Bloch dynamics.
    """
    p = params
    a = np.array(
        [
            [p.lambda_eq * p.gamma1_rate, p.alpha_r - 1j * p.alpha_i, p.beta_raw],
            [p.alpha_r + 1j * p.alpha_i, (1 - p.lambda_eq) * p.gamma1_rate, p.delta_raw],
            [p.beta_raw, p.delta_raw, p.gamma2_rate],
        ],
        dtype=complex,
    )
    return a


def is_dissipator_psd(params: PerturbedGDParams, tol: float = 1e-12) -> bool:
    """Whether the coefficient matrix is positive semi-definite (to tol)."""
    a = build_coefficient_matrix(params)
    scale = max(1.0, float(np.linalg.norm(a, np.inf)))
    return bool(np.linalg.eigvalsh(a).min() >= -tol * scale)


def bloch_generator(params: PerturbedGDParams) -> BlochGenerator:
    """Bloch-space generator (C, drive) of the perturbed damping flow."""
    p = params
    g2p = p.gamma2_prime
    b = p.beta_eff
    c = np.array(
        [
            [p.alpha_r - g2p, p.alpha_i, b],
            [p.alpha_i, -p.alpha_r - g2p, 0.0],
            [b, 0.0, -p.gamma1_rate],
        ]
    )
    drive = np.array(
        [
            2.0 * SQRT2 * p.delta_raw - 2.0 * b,
            0.0,
            p.gamma1_rate * (2.0 * p.lambda_eq - 1.0),
        ]
    )
    return BlochGenerator(c_matrix=c, drive=drive)
