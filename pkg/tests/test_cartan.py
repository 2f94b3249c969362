import numpy as np
import pytest

from cartan_git.cartan import (BundlePoint, CartanBundle, coadjoint, complexified_action_rank, fd_rho,
                               imaginary_stabilizer, stabilizer_basis, stabilizer_kernel_defect)
from cartan_git.errors import ConfigError, DomainError, PreconditionError
from cartan_git.hamiltonian import LinearAction, ProjectivePoint
from cartan_git.lie_core import random_a, sl_su_pair, torus_pair
from cartan_git.kempf_ness import kn_profile, GeodesicRay


def _torus(v):
    return CartanBundle(LinearAction(torus_pair(1), [1, -1]), ProjectivePoint(np.array(v, dtype=complex)))


def test_theta_round_trip(sl2_bundle, rng):
    b = sl2_bundle
    p = b.random_point(rng)
    xi = random_a(b.klein, rng)
    assert np.allclose(b.theta(p, b.theta_inverse(p, xi)), xi)


def test_rho_matches_finite_difference(sl2_bundle, rng):
    b = sl2_bundle
    for _ in range(5):
        p = b.random_point(rng)
        xi = random_a(b.klein, rng)
        assert (b.rho(xi, p) - fd_rho(b, xi, p)).norm() < 1e-6


def test_calabi_operator_coadjoint_identity(sl2_bundle, rng):
    b = sl2_bundle
    p = b.random_point(rng)
    xi = b.klein.g_basis[1]
    res = b.calabi_operator(p, xi) + coadjoint(xi, b.momentum_at(p))
    assert np.linalg.norm(res) < 1e-6


@pytest.mark.parametrize("v, real_dim", [((1, 1), 0), ((1, 0), 2)])
def test_torus_stabilizer_dimension(v, real_dim):
    stab = stabilizer_basis(_torus(v))
    assert stab.dim == real_dim


def test_sl2_stabilizer_is_borel(sl2_bundle):
    stab = stabilizer_basis(sl2_bundle)
    assert stab.dim == 4 and stab.complex_dim == 2
    assert stab.closure_residual < 1e-10
    assert stab.contains(sl2_bundle.klein, np.array([[0, 1], [0, 0]], complex))
    assert not stab.contains(sl2_bundle.klein, np.array([[0, 0], [1, 0]], complex))
    assert len(imaginary_stabilizer(sl2_bundle, stab)) == 1


def test_stabilizer_transported_to_other_points(sl2_bundle, rng):
    stab = stabilizer_basis(sl2_bundle)
    for _ in range(5):
        assert stabilizer_kernel_defect(sl2_bundle, stab, sl2_bundle.random_point(rng)) < 1e-10


def test_rank_of_rho_matches_complexified_action(sl2_bundle, rng):
    r_rho, r_c = complexified_action_rank(sl2_bundle, sl2_bundle.random_point(rng))
    assert r_rho == r_c == 2


def test_certificate_gate():
    b = _torus((1, 1))
    with pytest.raises(PreconditionError):
        kn_profile(GeodesicRay(b, b.identity(), np.array([[1.0]]), [0.0, 1.0]))
    cert = b.certify(20, seed=0)
    assert cert.passed and cert.max_defect < 1e-5


def test_bad_tolerance_and_singular_point(sl2_bundle):
    with pytest.raises(ConfigError):
        stabilizer_basis(sl2_bundle, tol=0.0)
    with pytest.raises(DomainError):
        BundlePoint(np.zeros((2, 2)))
