import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gdbench import PerturbedGDParams
from gdbench.channels import (
    LiouvilleChannel,
    discrete_params,
    evolve_bloch,
    kraus_gd,
    liouville_gd,
    liouville_pgd,
)
from gdbench.model import bloch_generator
from conftest import random_params
from oracles import kraus_to_liouville_matrix, ode_evolve


def _params(**kw):
    base = dict(gamma1_rate=0.01, gamma2_rate=0.095, lambda_eq=0.9,
                alpha_r=0.0, alpha_i=0.0, beta_raw=0.0, delta_raw=0.0)
    base.update(kw)
    return PerturbedGDParams(**base)


class TestLiouvilleChannel:
    def test_trace_preservation_enforced(self):
        bad = np.eye(4)
        bad[0, 1] = 1e-3
        with pytest.raises(ValueError):
            LiouvilleChannel(bad)

    def test_accessors(self):
        m = liouville_gd(0.1, 0.05, 0.9)
        assert m.unital.shape == (3, 3)
        assert m.nonunital.shape == (3,)
        assert m.nonunital[2] == pytest.approx(0.1 * (2 * 0.9 - 1))

    def test_apply_bloch(self):
        m = liouville_gd(0.1, 0.05, 1.0)
        out = m.apply_bloch([0.0, 0.0, -1.0])
        # ground state relaxes toward the fixed point
        assert out[2] > -1.0


class TestDiscreteParams:
    def test_values(self):
        g1, g2 = discrete_params(0.01, 0.095, 1.0)
        assert g1 == pytest.approx(1.0 - math.exp(-0.01))
        assert g2 == pytest.approx(1.0 - math.exp(-2 * 0.095))

    def test_dt_zero_rejected(self):
        with pytest.raises(ValueError):
            discrete_params(0.3, 0.2, 0.0)


class TestGDChannel:
    def test_cptp_on_grid(self):
        for g1 in (0.0, 0.3, 0.9):
            for g2 in (0.0, 0.5):
                for lam in (0.5, 0.8, 1.0):
                    assert liouville_gd(g1, g2, lam).is_cptp(tol=1e-12)

    def test_structure(self):
        m = liouville_gd(0.2, 0.1, 0.75).matrix
        b = math.sqrt((1 - 0.2) * (1 - 0.1))
        assert m[1, 1] == pytest.approx(b)
        assert m[2, 2] == pytest.approx(b)
        assert m[3, 3] == pytest.approx(1 - 0.2)
        assert m[3, 0] == pytest.approx(0.2 * (2 * 0.75 - 1))


class TestKrausGD:
    def test_completeness(self, rng):
        for _ in range(50):
            g1 = rng.uniform(0.0, 0.9)
            g2 = rng.uniform(0.0, 0.9)
            lam = rng.uniform(0.5, 1.0)
            ks = kraus_gd(g1, g2, lam)
            assert ks.completeness_defect() < 1e-12

    def test_matches_liouville_gd(self, rng):
        for _ in range(50):
            g1 = rng.uniform(0.0, 0.9)
            g2 = rng.uniform(0.0, 0.9)
            lam = rng.uniform(0.5, 1.0)
            got = kraus_gd(g1, g2, lam).to_liouville().matrix
            want = liouville_gd(g1, g2, lam).matrix
            assert np.abs(got - want).max() < 1e-12

    def test_direct_conversion_oracle(self, rng):
        for _ in range(20):
            g1 = rng.uniform(0.0, 0.9)
            g2 = rng.uniform(0.0, 0.9)
            lam = rng.uniform(0.5, 1.0)
            ks = kraus_gd(g1, g2, lam)
            oracle = kraus_to_liouville_matrix(ks.operators)
            assert np.abs(ks.to_liouville().matrix - oracle).max() < 1e-12

    def test_identity_at_zero(self):
        ks = kraus_gd(0.0, 0.0, 1.0)
        assert np.abs(ks.to_liouville().matrix - np.eye(4)).max() < 1e-14

    def test_invalid_discrete_params_rejected(self):
        with pytest.raises(ValueError):
            kraus_gd(0.9, -0.5, 0.5)
        with pytest.raises(ValueError):
            kraus_gd(1.5, 0.1, 0.9)


class TestEvolveBloch:
    def test_vs_ode_oracle(self, rng):
        for _ in range(25):
            p = random_params(rng, s=5e-3)
            gen = bloch_generator(p)
            r0 = rng.uniform(-1, 1, size=3)
            r0 /= max(1.0, np.linalg.norm(r0))
            got = evolve_bloch(gen, r0, 0.7)
            want = ode_evolve(gen, r0, 0.7)
            assert np.abs(got - want).max() < 1e-8

    def test_t_zero_identity(self, rng):
        p = random_params(rng)
        r0 = np.array([0.3, -0.2, 0.5])
        assert np.allclose(evolve_bloch(bloch_generator(p), r0, 0.0), r0)

    def test_long_time_fixed_point(self):
        p = _params(lambda_eq=0.9)
        gen = bloch_generator(p)
        r = evolve_bloch(gen, [0.5, 0.5, 0.5], 5000.0)
        # fixed point: C r + drive = 0
        assert np.abs(gen.c_matrix @ r + gen.drive).max() < 1e-12


class TestLiouvillePGD:
    def test_unperturbed_equals_gd(self):
        p = _params()
        got = liouville_pgd(p, 1.0).matrix
        g1, g2 = discrete_params(0.01, 0.095, 1.0)
        want = liouville_gd(g1, g2, 0.9).matrix
        assert np.abs(got - want).max() < 1e-14

    def test_dt_to_zero_is_identity(self, rng):
        p = random_params(rng)
        m = liouville_pgd(p, 1e-12).matrix
        assert np.abs(m - np.eye(4)).max() < 1e-10

    def test_matches_evolve_bloch(self, rng):
        for _ in range(50):
            p = random_params(rng, s=5e-3)
            gen = bloch_generator(p)
            ch = liouville_pgd(p, 1.3)
            r0 = rng.uniform(-0.5, 0.5, size=3)
            assert np.abs(ch.apply_bloch(r0) - evolve_bloch(gen, r0, 1.3)).max() < 1e-12

    def test_semigroup(self, rng):
        for _ in range(50):
            p = random_params(rng, s=5e-3)
            a = liouville_pgd(p, 0.6).matrix
            b = liouville_pgd(p, 1.1).matrix
            c = liouville_pgd(p, 1.7).matrix
            assert np.abs(a @ b - c).max() < 1e-10

    def test_unperturbed_cptp_over_time(self):
        p = _params(lambda_eq=0.7)
        for t in (0.1, 1.0, 10.0, 100.0):
            assert liouville_pgd(p, t).is_cptp(tol=1e-12)


@settings(max_examples=100, deadline=None)
@given(
    s=st.floats(0.0, 1e-2),
    t1=st.floats(0.01, 5.0),
    t2=st.floats(0.01, 5.0),
    seed=st.integers(0, 2**31),
)
def test_semigroup_property(s, t1, t2, seed):
    rng = np.random.default_rng(seed)
    p = random_params(rng, s=s)
    a = liouville_pgd(p, t1).matrix
    b = liouville_pgd(p, t2).matrix
    c = liouville_pgd(p, t1 + t2).matrix
    assert np.abs(a @ b - c).max() < 1e-10


@settings(max_examples=100, deadline=None)
@given(
    s=st.floats(0.0, 1e-2),
    t=st.floats(0.0, 20.0),
    seed=st.integers(0, 2**31),
)
def test_pgd_consistent_with_continuous_evolution(s, t, seed):
    rng = np.random.default_rng(seed)
    p = random_params(rng, s=s)
    r0 = rng.uniform(-0.5, 0.5, size=3)
    got = liouville_pgd(p, t).apply_bloch(r0) if t > 0 else r0
    want = evolve_bloch(bloch_generator(p), r0, t)
    assert np.abs(got - want).max() < 1e-12
