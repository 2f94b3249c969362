import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cartan_git.errors import DomainError, StepError
from cartan_git.wasserstein_1d import (DensityOnCircle, PotentialFunction, cartan_geodesic_density,
                                       continuity_residual, density_trajectory, helmholtz_1d, helmholtz_residual,
                                       mass_drift, spectral_antiderivative, spectral_derivative, taylor_defect)


def test_density_validation():
    with pytest.raises(DomainError):
        DensityOnCircle(np.ones(16))
    with pytest.raises(DomainError):
        DensityOnCircle.normalized(np.cos(np.arange(16.0)) + 0.5)


def test_spectral_calculus():
    x = 2 * np.pi * np.arange(64) / 64
    assert np.allclose(spectral_derivative(np.sin(3 * x)), 3 * np.cos(3 * x))
    assert np.allclose(spectral_antiderivative(np.cos(x)), np.sin(x))


def test_helmholtz_constant_field():
    k, f = helmholtz_1d(np.ones(64), DensityOnCircle.uniform(64))
    assert k == pytest.approx(1.0)
    assert np.max(np.abs(f.f)) < 1e-12


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_helmholtz_reconstructs(seed):
    rng = np.random.default_rng(seed)
    x = 2 * np.pi * np.arange(64) / 64
    rho = DensityOnCircle.normalized(np.exp(0.5 * np.sin(x + rng.uniform(0, 6))))
    X = rng.normal() + np.cos(2 * x) * rng.normal()
    k, f = helmholtz_1d(X, rho)
    assert helmholtz_residual(X, rho, k, f) < 1e-8


def test_mass_conserved():
    rho0 = DensityOnCircle.from_function(lambda x: np.exp(0.3 * np.sin(x)), 128)
    f = PotentialFunction.from_function(np.cos, 128)
    assert mass_drift(density_trajectory(rho0, f, np.linspace(0, 1, 5))) < 1e-8


def test_zero_potential_is_stationary():
    rho0 = DensityOnCircle.from_function(lambda x: 2 + np.cos(x), 64)
    assert np.allclose(cartan_geodesic_density(rho0, PotentialFunction.zero(64), 0.5).rho, rho0.rho)


def test_taylor_defect_second_order():
    rho0 = DensityOnCircle.uniform(128)
    f = PotentialFunction.from_function(np.cos, 128)
    d = [taylor_defect(rho0, f, t) for t in (0.1, 0.05, 0.025)]
    assert 3.5 < d[0] / d[1] < 4.5 and 3.5 < d[1] / d[2] < 4.5


def test_continuity_equation_converges():
    res = []
    for n, dt in ((256, 1e-3), (512, 5e-4)):
        rho0 = DensityOnCircle.uniform(n)
        f = PotentialFunction.from_function(np.cos, n)
        ts = np.linspace(0, 0.25, int(round(0.25 / dt)) + 1)
        res.append(continuity_residual(ts, density_trajectory(rho0, f, ts), f))
    assert res[0] < 1e-4 and 3.0 < res[0] / res[1] < 5.5


def test_step_bound_enforced():
    with pytest.raises(StepError):
        density_trajectory(DensityOnCircle.uniform(16), PotentialFunction.zero(16), [0.0, 1.0], max_step=0.1)
