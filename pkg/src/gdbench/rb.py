"""Randomized-benchmarking observables computed directly from channels.

The error rate r, the per-Pauli projected rates rX/rY/rZ, and the unitarity
are all functions of the unital block of the Pauli-Liouville matrix, so they
can be evaluated for any trace-preserving channel without simulating gate
sequences.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, asdict

import numpy as np

from gdbench.channels import LiouvilleChannel
from gdbench.eigen import eigensystem_exact
from gdbench.model import PerturbedGDParams, bloch_generator

CSV_FIELDS = ("r", "rX", "rY", "rZ", "unitarity")


@dataclass(frozen=True)
class RBReport:
    """Benchmarking observables of one channel."""

    r: float
    rX: float
    rY: float
    rZ: float
    unitarity: float

    def to_csv_row(self) -> str:
        return ",".join(f"{getattr(self, f):.17g}" for f in CSV_FIELDS)

    def to_json(self) -> str:
        return json.dumps(asdict(self))


def rb_observables(channel: LiouvilleChannel) -> RBReport:
    """Error rate, projected error rates, and unitarity of a channel.

    The projected rate convention r_sigma = 1/2 - (Lambda_u)_{sigma,sigma}/6
    reproduces the generalized-damping closed forms and makes the
    perturbation-magnitude identity (see esum_from_observables) exact.
    """
    u = channel.unital
    return RBReport(
        r=float(0.5 - np.trace(u) / 6.0),
        rX=float(0.5 - u[0, 0] / 6.0),
        rY=float(0.5 - u[1, 1] / 6.0),
        rZ=float(0.5 - u[2, 2] / 6.0),
        unitarity=float(np.sum(u * u) / 3.0),
    )


def ideal_predictions(gamma1: float, gamma2: float) -> RBReport:
    """Closed-form observables of the ideal generalized damping channel."""
    b = float(np.sqrt((1.0 - gamma1) * (1.0 - gamma2)))
    return RBReport(
        r=1.0 / 3.0 + gamma1 / 6.0 - b / 3.0,
        rX=0.5 - b / 6.0,
        rY=0.5 - b / 6.0,
        rZ=0.5 - (1.0 - gamma1) / 6.0,
        unitarity=(3.0 - 4.0 * gamma1 - 2.0 * gamma2 + 2.0 * gamma1 * gamma2 + gamma1**2)
        / 3.0,
    )


def perturbed_error_rate(params: PerturbedGDParams, dt: float) -> float:
    """Error rate of the perturbed channel from the exact generator spectrum."""
    if dt <= 0:
        raise ValueError("dt must be positive")
    eta = eigensystem_exact(bloch_generator(params)).eigvals
    return float(0.5 - np.sum(np.exp(eta * dt)) / 6.0)


def esum_from_observables(
    measured: RBReport, ideal: RBReport, gamma1: float, gamma2: float
) -> float:
    """Frobenius-squared magnitude of a unital perturbation from observables.

    Exact for any trace-preserving channel written as generalized damping
    plus a unital block perturbation, when the true gammas are supplied.
    A negative return (possible with estimated gammas) is warned about but
    not clamped; clamping policy belongs to the bound constructors.
    """
    b = np.sqrt((1.0 - gamma1) * (1.0 - gamma2))
    value = (
        3.0 * (measured.unitarity - ideal.unitarity)
        - 12.0 * (1.0 - gamma1) * (ideal.rZ - measured.rZ)
        - 12.0 * b * (ideal.rX - measured.rX + ideal.rY - measured.rY)
    )
    if value < -1e-13:
        warnings.warn(f"negative perturbation magnitude {value}; inputs inconsistent")
    return float(value)
