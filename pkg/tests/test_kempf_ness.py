import warnings

import numpy as np
import pytest

from cartan_git.cartan import BundlePoint, CartanBundle
from cartan_git.errors import DomainError, NonConvergenceError
from cartan_git.hamiltonian import LinearAction, ProjectivePoint
from cartan_git.kempf_ness import (GeodesicRay, Segment, classify_stability, find_momentum_zero, hm_oracle_torus,
                                   kn_lifted, kn_profile, loop_integral, loop_through, momentum_residual, slope,
                                   unique_mod_stabilizer_defect)
from cartan_git.lie_core import torus_pair


def torus_bundle(weights, v, shift=None):
    W = np.array(weights)
    W = W[:, None] if W.ndim == 1 else W
    b = CartanBundle(LinearAction(torus_pair(W.shape[1]), W, shift), ProjectivePoint(np.array(v, dtype=complex)))
    b.certify(20, seed=0)
    return b


def test_closed_form_profile(torus_bundle):
    ts = np.linspace(0, 1.5, 7)
    prof = kn_profile(GeodesicRay(torus_bundle, torus_bundle.identity(), np.array([[1.0]]), ts))
    assert np.allclose(prof.psi, 0.5 * np.log(np.cosh(2 * ts)), atol=1e-10)
    assert np.allclose(prof.dpsi, np.tanh(2 * ts), atol=1e-10)


def test_kn_lifted_zero_at_identity(sl2_bundle):
    assert kn_lifted(sl2_bundle.action, np.eye(2), sl2_bundle.basepoint) == 0.0


@pytest.mark.parametrize("v, direction, expected", [
    ((1, 1), 1.0, 1.0),
    ((1, 1), -1.0, 1.0),
    ((1, 0), 1.0, 1.0),
    ((1, 0), -1.0, -1.0),
])
def test_slopes_of_rank_one_torus(v, direction, expected):
    b = torus_bundle([1, -1], v)
    assert slope(GeodesicRay(b, b.identity(), np.array([[direction]]), [0.0])) == pytest.approx(expected, abs=1e-6)


@pytest.mark.parametrize("v, label", [((1, 1), "stable"), ((1, 0), "unstable")])
def test_classification_matches_oracle(v, label):
    b = torus_bundle([1, -1], v)
    verdict = classify_stability(b)
    assert verdict.label == label
    assert hm_oracle_torus([1, -1], b.basepoint).label == label


def test_semistable_zero_weight():
    b = torus_bundle([0, 0], (1, 1))
    assert classify_stability(b).label == "semistable"
    assert hm_oracle_torus([0, 0], b.basepoint).label == "semistable"


def test_triangle_loop_is_exact(sl2_bundle, rng):
    pts = [sl2_bundle.random_point(rng) for _ in range(3)]
    assert abs(loop_integral(sl2_bundle, loop_through(pts))) < 1e-8


def test_open_path_rejected(sl2_bundle):
    seg = Segment(sl2_bundle.identity(), np.diag([1.0, -1.0]).astype(complex))
    with pytest.raises(DomainError):
        loop_integral(sl2_bundle, [seg])


def test_descent_converges_on_stable_torus():
    b = torus_bundle([1, -1], (1, 3))
    hist = []
    p = find_momentum_zero(b, history=hist)
    assert momentum_residual(b, p) < 1e-8
    assert all(h1[1] <= h0[1] + 1e-14 for h0, h1 in zip(hist, hist[1:]))


def test_descent_fails_on_unstable_torus():
    b = torus_bundle([1, -1], (1, 0))
    with pytest.raises(NonConvergenceError) as info:
        find_momentum_zero(b, max_iter=50)
    assert info.value.partial is not None


def test_repeated_weight_uniqueness():
    b = torus_bundle([[1, 1], [-1, 1]], (1, 1), shift=[0.0, 1.0])
    z0 = find_momentum_zero(b, BundlePoint(np.diag(np.exp([0.7, -1.3])).astype(complex)))
    z1 = find_momentum_zero(b, BundlePoint(np.diag(np.exp([-0.4, 2.0])).astype(complex)))
    assert unique_mod_stabilizer_defect(b, z0, z1) < 1e-6


def test_slope_warns_without_plateau():
    b = torus_bundle([1, -1], (1, 1))
    ray = GeodesicRay(b, b.identity(), np.array([[1e-3]]), [0.0])
    with warnings.catch_warnings(record=True) as w:
        warnings.simplefilter("always")
        slope(ray, horizon=16.0)
    assert any(issubclass(x.category, RuntimeWarning) for x in w)
