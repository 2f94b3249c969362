import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cartan_git.errors import DomainError, ShapeError
from cartan_git.lie_core import (adjoint, bracket, dagger, gl_u_pair, group_exp, kappa_a, kappa_trace,
                                 polar_decompose, random_a, random_g, random_unitary, sl_su_pair, torus_pair)

PAIRS = [sl_su_pair(2), sl_su_pair(3), gl_u_pair(2), torus_pair(2), torus_pair(3, m_indices=[0])]


@pytest.mark.parametrize("pair", PAIRS, ids=lambda p: p.name)
def test_coordinates_round_trip(pair, rng):
    x = random_a(pair, rng)
    assert np.allclose(pair.from_coords(pair.coords(x)), x)
    x1, x2 = pair.split(x)
    assert np.allclose(x1 + 1j * x2, x)
    assert pair.in_g(x1)


@pytest.mark.parametrize("pair", PAIRS, ids=lambda p: p.name)
def test_dimensions(pair):
    assert pair.dim_a == pair.dim_g + pair.dim_m
    assert len(pair.a_basis) == pair.dim_a


def test_su2_dimensions():
    k = sl_su_pair(2)
    assert (k.dim_g, k.dim_m, k.n) == (3, 3, 2)


def test_m_orthonormal():
    k = sl_su_pair(3)
    G = np.array([[kappa_trace(x, y) for y in k.m_orthonormal] for x in k.m_orthonormal])
    assert np.allclose(G, np.eye(k.dim_m))


def test_element_outside_a_rejected():
    with pytest.raises(DomainError):
        torus_pair(2, m_indices=[0]).coords(np.diag([0.0, 1.0]).astype(complex))
    with pytest.raises(ShapeError):
        sl_su_pair(2).coords(np.eye(3))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_jacobi_identity(seed):
    rng = np.random.default_rng(seed)
    k = sl_su_pair(2)
    x, y, z = (random_a(k, rng) for _ in range(3))
    jac = bracket(x, bracket(y, z)) + bracket(y, bracket(z, x)) + bracket(z, bracket(x, y))
    assert np.linalg.norm(jac) < 1e-12


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_polar_decomposition(seed):
    rng = np.random.default_rng(seed)
    k = sl_su_pair(2)
    a = group_exp(random_a(k, rng)) @ random_unitary(k, rng)
    h, u = polar_decompose(a)
    assert np.allclose(h, dagger(h))
    assert np.allclose(u @ dagger(u), np.eye(2))
    assert np.allclose(group_exp(h) @ u, a)


def test_kappa_adjoint_invariant(rng):
    k = sl_su_pair(2)
    mu, y = random_g(k, rng), random_a(k, rng)
    u = random_unitary(k, rng)
    assert kappa_a(k, adjoint(u, mu), adjoint(u, y)) == pytest.approx(kappa_a(k, mu, y), abs=1e-12)


def test_group_exp_of_diagonal():
    assert np.allclose(group_exp(np.diag([1.0, -1.0])), np.diag([np.e, 1 / np.e]))
