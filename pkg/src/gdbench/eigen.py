"""Eigensystem of the symmetric 3x3 Bloch generator.

Eigenvalues come from the closed trigonometric form for real symmetric 3x3
matrices (m, p, q, phi parameterization); eigenvectors come from a dense
symmetric diagonalization.  The two routes are cross-checked on every call.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from gdbench.model import BlochGenerator, PerturbedGDParams

_CROSS_CHECK_TOL = 1e-11


@dataclass(frozen=True)
class EigenSystem:
    """Eigenvalues (ascending) and orthonormal eigenvector columns of C."""

    eigvals: np.ndarray
    eigvecs: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.eigvals, dtype=float)
        vecs = np.asarray(self.eigvecs, dtype=float)
        vals.setflags(write=False)
        vecs.setflags(write=False)
        object.__setattr__(self, "eigvals", vals)
        object.__setattr__(self, "eigvecs", vecs)


def _closed_form_eigenvalues(c: np.ndarray) -> np.ndarray:
    """Trigonometric eigenvalues of a real symmetric 3x3 matrix, ascending."""
    m = np.trace(c) / 3.0
    k = c - m * np.eye(3)
    q = 0.5 * np.linalg.det(k)
    p = np.sum(k * k) / 6.0
    if p <= 0.0:
        # C proportional to the identity: fully degenerate.
        return np.array([m, m, m])
    disc = p**3 - q**2
    if disc < 0.0:
        disc = 0.0  # roundoff at near-degeneracy
    phi = np.arctan2(np.sqrt(disc), q) / 3.0
    sp = np.sqrt(p)
    eta = np.array(
        [
            m - sp * (np.cos(phi) + np.sqrt(3.0) * np.sin(phi)),
            m - sp * (np.cos(phi) - np.sqrt(3.0) * np.sin(phi)),
            m + 2.0 * sp * np.cos(phi),
        ]
    )
    return np.sort(eta)


def eigensystem_exact(gen: BlochGenerator) -> EigenSystem:
    """Eigen decomposition of the Bloch generator.

    Raises if the closed-form eigenvalues and the iterative diagonalization
    disagree beyond their combined numerical envelope: 1e-11 away from
    degeneracy, widened by the sqrt(eps) precision loss the trigonometric
    form suffers when two eigenvalues coincide.
    """
    c = gen.c_matrix
    eta_closed = _closed_form_eigenvalues(c)
    scale = max(1.0, float(np.abs(c).max()))
    k = c - (np.trace(c) / 3.0) * np.eye(3)
    p = np.sum(k * k) / 6.0
    if p <= 1e-30 * scale**2:
        return EigenSystem(eigvals=eta_closed, eigvecs=np.eye(3))
    vals, vecs = np.linalg.eigh(c)  # ascending
    tol = _CROSS_CHECK_TOL * scale + 1e-7 * np.sqrt(p)
    if np.max(np.abs(vals - eta_closed)) > tol:
        raise ArithmeticError(
            "closed-form and iterative eigenvalues disagree: "
            f"{eta_closed} vs {vals}"
        )
    return EigenSystem(eigvals=vals, eigvecs=vecs)


def eigenvalues_approx(params: PerturbedGDParams) -> np.ndarray:
    """Leading-order eigenvalues for small perturbations.

    Returns (eta1, eta2, eta3) in the convention where eta3 is the slow
    (amplitude-damping-like) mode.  Valid only when gamma2' > gamma1.
    """
    g2p = params.gamma2_prime
    g1 = params.gamma1_rate
    if g2p <= g1:
        raise ValueError("approximation requires gamma2' > gamma1")
    alpha = params.alpha_abs
    shift = params.beta_eff**2 / (g2p - g1)
    return np.array([-g2p + alpha - shift, -g2p - alpha, -g1 + shift])
