import numpy as np
import pytest

from cartan_git.cartan import CartanBundle, imaginary_stabilizer, stabilizer_basis
from cartan_git.errors import ConfigError, DomainError
from cartan_git.futaki_extremal import (character_defect, extremal_element, extremal_residual, futaki_constancy,
                                        futaki_invariance_defect, futaki_tilde, imaginary_trace_form, matrix_form,
                                        momentum_projection, xi_form, xi_form_spread)
from cartan_git.hamiltonian import LinearAction, ProjectivePoint
from cartan_git.lie_core import torus_pair

H = np.diag([1.0, -1.0]).astype(complex)
E = np.array([[0, 1], [0, 0]], complex)


def test_futaki_constant_on_sl2(sl2_bundle):
    rep = futaki_constancy(sl2_bundle, H, n_samples=20)
    assert rep.mean == pytest.approx(1.0, abs=1e-10)
    assert rep.relative_spread() < 1e-10


def test_futaki_is_a_character(sl2_bundle):
    assert character_defect(sl2_bundle, H, E) < 1e-10
    assert futaki_invariance_defect(sl2_bundle, sl2_bundle.identity(), H) < 1e-10


def test_futaki_rejects_non_stabilizer(sl2_bundle):
    with pytest.raises(DomainError):
        futaki_tilde(sl2_bundle, sl2_bundle.identity(), E.T)


def test_imaginary_trace_form_is_invariant(sl2_bundle):
    basis = stabilizer_basis(sl2_bundle).basis
    form = xi_form_spread(sl2_bundle, basis, imaginary_trace_form(sl2_bundle.klein), n_points=10)
    assert form.spread < 1e-10


def test_extremal_on_torus_fixed_point():
    b = CartanBundle(LinearAction(torus_pair(1), [1, -1]), ProjectivePoint(np.array([1.0, 0.0])))
    b.certify(20)
    basis = imaginary_stabilizer(b, stabilizer_basis(b))
    form = xi_form(b, b.identity(), basis)
    z = extremal_element(b, basis, form)
    assert np.allclose(z, [[1.0]])
    assert extremal_residual(b, basis, form, z) < 1e-12
    assert np.allclose(z, momentum_projection(b, basis))


def test_extremal_with_custom_form():
    b = CartanBundle(LinearAction(torus_pair(2), np.eye(2, dtype=int)), ProjectivePoint(np.array([1.0, 0.0])))
    b.certify(20)
    basis = imaginary_stabilizer(b, stabilizer_basis(b))
    form = xi_form(b, b.identity(), basis, matrix_form(b.klein, np.diag([2.0, 3.0])))
    z = extremal_element(b, basis, form)
    assert extremal_residual(b, basis, form, z) < 1e-10
    assert np.allclose(z, np.diag([0.5, 0.0]))


def test_matrix_form_validates_shape(sl2_bundle):
    with pytest.raises(ConfigError):
        matrix_form(sl2_bundle.klein, np.eye(2))
