import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from gdbench import PerturbedGDParams


def random_params(rng, s=1e-2, gamma2_prime=0.1, gamma1=0.01):
    """Sample a perturbed parameter set at strength s (uniform in [-s, s])."""
    lam = rng.uniform(0.8, 1.0)
    ar, ai, b, d = rng.uniform(-s, s, size=4)
    return PerturbedGDParams(
        gamma1_rate=gamma1,
        gamma2_rate=gamma2_prime - gamma1 / 2.0,
        lambda_eq=lam,
        alpha_r=ar,
        alpha_i=ai,
        beta_raw=b,
        delta_raw=d,
    )


@pytest.fixture
def rng():
    return np.random.default_rng(20260826)
