import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cartan_git.errors import DomainError
from cartan_git.hamiltonian import (LinearAction, ProjectivePoint, TangentVector, cocycle_sigma, complex_structure,
                                    inf_action, metric, momentum, momentum_defect, momentum_norm, random_point,
                                    random_tangent, symplectic_form)
from cartan_git.lie_core import kappa, random_g, random_unitary, sl_su_pair, torus_pair

ACTIONS = {
    "torus(1,-1)": LinearAction(torus_pair(1), [1, -1]),
    "su2": LinearAction(sl_su_pair(2)),
    "su3": LinearAction(sl_su_pair(3)),
    "torus2": LinearAction(torus_pair(2), [[1, 0], [0, 1], [-1, -1]]),
}


def test_projective_point_normalizes_phase():
    a = ProjectivePoint(np.array([2j, 2.0]))
    b = ProjectivePoint(np.array([1.0, -1j]))
    assert a == b
    assert np.isclose(np.linalg.norm(a.v), 1.0)
    assert a.distance(b) < 1e-12


def test_zero_vector_rejected():
    with pytest.raises(DomainError):
        ProjectivePoint(np.zeros(2))


def test_tangent_must_be_horizontal():
    m = ProjectivePoint(np.array([1.0, 0.0]))
    with pytest.raises(DomainError):
        TangentVector(m, np.array([1.0, 0.0]))


@pytest.mark.parametrize("name", sorted(ACTIONS))
def test_momentum_defining_relation(name, rng):
    act = ACTIONS[name]
    for _ in range(10):
        m = random_point(act.dim_v, rng)
        assert momentum_defect(act, m, random_g(act.klein, rng), random_tangent(m, rng)) < 1e-6


@pytest.mark.parametrize("name", sorted(ACTIONS))
def test_momentum_equivariance(name, rng):
    act = ACTIONS[name]
    for _ in range(5):
        m = random_point(act.dim_v, rng)
        assert np.linalg.norm(cocycle_sigma(act, random_unitary(act.klein, rng), m)) < 1e-10


def test_torus_fixed_point_pairing():
    act = ACTIONS["torus(1,-1)"]
    j = momentum(act, ProjectivePoint(np.array([1.0, 0.0])))
    assert kappa(act.klein, j, act.klein.g_basis[0]) == pytest.approx(1.0)


def test_su2_momentum_norm_constant(rng):
    act = ACTIONS["su2"]
    norms = [momentum_norm(act, random_point(2, rng)) for _ in range(10)]
    assert np.ptp(norms) < 1e-12


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_kahler_compatibility(seed):
    rng = np.random.default_rng(seed)
    m = random_point(3, rng)
    X, Y = random_tangent(m, rng), random_tangent(m, rng)
    assert symplectic_form(m, X, complex_structure(m, Y)) == pytest.approx(metric(m, X, Y), abs=1e-12)
    assert symplectic_form(m, X, Y) == pytest.approx(-symplectic_form(m, Y, X), abs=1e-12)


def test_inf_action_kills_fixed_point():
    act = ACTIONS["torus(1,-1)"]
    m = ProjectivePoint(np.array([1.0, 0.0]))
    assert inf_action(act, act.klein.g_basis[0], m).norm() < 1e-14


def test_shift_requires_torus():
    with pytest.raises(DomainError):
        LinearAction(sl_su_pair(2), shift=[1.0])
