"""Futaki character of the stabilizer and extremal elements."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import config
from .cartan import BundlePoint, CartanBundle, StabilizerBasis, stabilizer_basis
from .errors import ConfigError, DegeneracyError, DomainError
from .lie_core import KleinPair, _mat, bracket, kappa_a, kappa_trace, random_unitary


def _stab(bundle: CartanBundle, stab: StabilizerBasis | None) -> StabilizerBasis:
    return stabilizer_basis(bundle) if stab is None else stab


def futaki_tilde(bundle: CartanBundle, p: BundlePoint, zeta,
                 stab: StabilizerBasis | None = None) -> float:
    """``kappa_a(J(chi(p)), theta_p(p . zeta))`` for ``zeta`` in the stabilizer at ``e``."""
    stab = _stab(bundle, stab)
    if not stab.contains(bundle.klein, zeta):
        raise DomainError("zeta is not in the stabilizer span")
    return kappa_a(bundle.klein, bundle.momentum_at(p), bundle.stabilizer_transport(p, zeta))


@dataclass
class FutakiReport:
    zeta: np.ndarray
    samples: list
    mean: float
    spread: float

    @property
    def values(self) -> np.ndarray:
        return np.array([v for _, v in self.samples])

    def relative_spread(self) -> float:
        return self.spread / (1.0 + abs(self.mean))

    def to_json(self) -> dict:
        z = np.asarray(self.zeta)
        return {
            "zeta": {"re": np.round(z.real, 12).tolist(), "im": np.round(z.imag, 12).tolist()},
            "mean": float(self.mean),
            "spread": float(self.spread),
            "samples": [float(v) for v in self.values],
        }


def sample_points(bundle: CartanBundle, n_samples: int, radius: float, seed: int,
                  factors: int = 3) -> list[BundlePoint]:
    """Products of ``factors`` small exponentials, covering a patch of the base."""
    rng = np.random.default_rng(seed)
    return [bundle.random_point(rng, radius, factors) for _ in range(n_samples)]


def futaki_constancy(bundle: CartanBundle, zeta, n_samples: int = 50, radius: float = 1.0,
                     seed: int = 0, stab: StabilizerBasis | None = None) -> FutakiReport:
    bundle.require_certified()
    stab = _stab(bundle, stab)
    pts = sample_points(bundle, n_samples, radius, seed)
    samples = [(p, futaki_tilde(bundle, p, zeta, stab)) for p in pts]
    vals = np.array([v for _, v in samples])
    return FutakiReport(_mat(zeta), samples, float(vals.mean()), float(vals.max() - vals.min()))


def futaki_invariance_defect(bundle: CartanBundle, p: BundlePoint, zeta, n: int = 10,
                             seed: int = 0, stab: StabilizerBasis | None = None) -> float:
    """``max |F(g p) - F(p)|`` over random unitary ``g``."""
    stab = _stab(bundle, stab)
    rng = np.random.default_rng(seed)
    f0 = futaki_tilde(bundle, p, zeta, stab)
    return max(abs(futaki_tilde(bundle, p.left(random_unitary(bundle.klein, rng)), zeta, stab) - f0)
               for _ in range(n))


def character_defect(bundle: CartanBundle, zeta, eta, n_samples: int = 10, radius: float = 1.0,
                     seed: int = 0, stab: StabilizerBasis | None = None) -> float:
    """Mean of ``|F([zeta, eta])(p)|`` over sampled points."""
    stab = _stab(bundle, stab)
    for x in (zeta, eta):
        if not stab.contains(bundle.klein, x):
            raise DomainError("arguments must lie in the stabilizer span")
    br = bracket(zeta, eta)
    pts = sample_points(bundle, n_samples, radius, seed)
    return float(np.mean([abs(futaki_tilde(bundle, p, br, stab)) for p in pts]))


# -- invariant forms --------------------------------------------------------------


BilinearForm = Callable[[np.ndarray, np.ndarray], float]


def m_trace_form(klein: KleinPair) -> BilinearForm:
    """``Xi(xi, eta) = kappa(xi_2, eta_2)`` on the ``m``-components."""

    def form(x, y):
        return kappa_trace(klein.split(x)[1], klein.split(y)[1])

    return form


def imaginary_trace_form(klein: KleinPair) -> BilinearForm:
    """``Xi(xi, eta) = Im tr(xi eta)``: Ad-invariant under ``G^c``, zero on ``g x g``."""

    def form(x, y):
        return float(np.imag(np.trace(_mat(x) @ _mat(y))))

    return form


def matrix_form(klein: KleinPair, gram) -> BilinearForm:
    """Form given by a symmetric matrix on the coordinates of ``m``."""
    gram = np.asarray(gram, dtype=float)
    if gram.shape != (klein.dim_m, klein.dim_m):
        raise ConfigError("form matrix must be dim m x dim m")
    if np.linalg.norm(gram - gram.T) > 1e-12 * max(1.0, np.linalg.norm(gram)):
        raise ConfigError("form matrix must be symmetric")

    def form(x, y):
        cx = klein.coords(x)[klein.dim_g:]
        cy = klein.coords(y)[klein.dim_g:]
        return float(cx @ gram @ cy)

    return form


@dataclass
class StabilizerForm:
    matrix: np.ndarray
    basis: list
    n_samples: int = 1
    spread: float = 0.0


def _basis_list(basis) -> list:
    return list(basis.basis) if isinstance(basis, StabilizerBasis) else list(basis)


def xi_form(bundle: CartanBundle, p: BundlePoint, basis, form: BilinearForm | None = None) -> StabilizerForm:
    """Gram matrix ``Xi(theta_p(p . zeta_i), theta_p(p . zeta_j))``."""
    form = m_trace_form(bundle.klein) if form is None else form
    zs = [bundle.stabilizer_transport(p, z) for z in _basis_list(basis)]
    M = np.array([[form(x, y) for y in zs] for x in zs]).reshape(len(zs), len(zs))
    if np.linalg.norm(M - M.T) > 1e-10 * max(1.0, np.linalg.norm(M)):
        raise ConfigError("bilinear form is not symmetric")
    return StabilizerForm(0.5 * (M + M.T), _basis_list(basis))


def xi_form_spread(bundle: CartanBundle, basis, form: BilinearForm | None = None,
                   n_points: int = 20, radius: float = 1.0, seed: int = 0) -> StabilizerForm:
    """Evaluate the stabilizer form at ``e`` and at sampled base points; report the spread."""
    ref = xi_form(bundle, bundle.identity(), basis, form)
    spread = 0.0
    for p in sample_points(bundle, n_points, radius, seed):
        spread = max(spread, float(np.max(np.abs(xi_form(bundle, p, basis, form).matrix - ref.matrix),
                                          initial=0.0)))
    return StabilizerForm(ref.matrix, ref.basis, n_points + 1, spread)


# -- extremal elements ------------------------------------------------------------


def futaki_vector(bundle: CartanBundle, basis, p: BundlePoint | None = None) -> np.ndarray:
    p = bundle.identity() if p is None else p
    j = bundle.momentum_at(p)
    return np.array([kappa_a(bundle.klein, j, bundle.stabilizer_transport(p, z))
                     for z in _basis_list(basis)])


def extremal_element(bundle: CartanBundle, basis, form: StabilizerForm,
                     p: BundlePoint | None = None) -> np.ndarray:
    """Solve ``Xi(zeta_m, zeta_i) = F(zeta_i)`` for ``zeta_m`` in the span of ``basis``."""
    zs = _basis_list(basis)
    if not zs:
        return np.zeros((bundle.n, bundle.n), complex)
    M = form.matrix
    if np.linalg.cond(M) > 1e8:
        raise DegeneracyError("stabilizer form is degenerate (condition number above 1e8)")
    F = futaki_vector(bundle, zs, p)
    c = np.linalg.solve(M.T, F)
    return sum(ci * z for ci, z in zip(c, zs))


def extremal_residual(bundle: CartanBundle, basis, form: StabilizerForm, zeta_m,
                      p: BundlePoint | None = None) -> float:
    """``max_i |F(zeta_i) - Xi(zeta_m, zeta_i)|`` with ``Xi`` from the stored Gram matrix."""
    zs = _basis_list(basis)
    if not zs:
        return 0.0
    B = np.array([bundle.klein.coords(z) for z in zs]).T
    c, *_ = np.linalg.lstsq(B, bundle.klein.coords(zeta_m), rcond=None)
    F = futaki_vector(bundle, zs, p)
    return float(np.max(np.abs(F - c @ form.matrix)))


def momentum_projection(bundle: CartanBundle, basis) -> np.ndarray:
    """``-i`` times the kappa-orthogonal projection of ``J(m)`` onto ``i * span(basis)``.

    For imaginary stabilizer elements and the ``m``-trace form this equals
    the extremal element.
    """
    zs = _basis_list(basis)
    if not zs:
        return np.zeros((bundle.n, bundle.n), complex)
    gens = [-1j * z for z in zs]
    G = np.array([[kappa_trace(x, y) for y in gens] for x in gens])
    j = bundle.momentum_at(bundle.identity())
    rhs = np.array([kappa_trace(j, x) for x in gens])
    c = np.linalg.solve(G, rhs)
    return -1j * sum(ci * x for ci, x in zip(c, gens))
