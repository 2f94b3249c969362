"""The Cartan bundle ``P = G^c -> G \\ G^c`` of a Klein pair.

Bundle points are invertible matrices ``a``; the connection is the right
Maurer-Cartan form ``theta_a(xi a) = lambda(xi)``, so the integral curve of
``theta^{-1}(xi)`` through ``a`` is ``exp(t lambda^{-1}(xi)) a``.  The
orbit model is ``chi(a) = [a . m]`` for the base point ``m``.

The stabilizer acts on the right: ``p . zeta`` is the derivative of
``a exp(t zeta)``, hence ``theta_p(p . zeta) = lambda(a zeta a^{-1})``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .config import EQUIVARIANCE_TOL, STABILIZER_SVD_TOL, SVD_GAP_RATIO
from .errors import AmbiguityError, ConfigError, DomainError, PreconditionError
from .hamiltonian import (FD_STEP, LinearAction, ProjectivePoint, TangentVector,
                          horizontal, inf_action, momentum)
from .lie_core import (KleinPair, _mat, _real_vec, bracket, group_exp, kappa_a,
                       random_a, random_unitary)


@dataclass(frozen=True, eq=False)
class BundlePoint:
    a: np.ndarray

    def __post_init__(self):
        a = np.array(_mat(self.a), dtype=complex)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise DomainError("bundle points are square matrices")
        if not np.all(np.isfinite(a)) or np.linalg.cond(a) > 1e14:
            raise DomainError("bundle point must be an invertible matrix")
        a.setflags(write=False)
        object.__setattr__(self, "a", a)

    @classmethod
    def identity(cls, n: int) -> "BundlePoint":
        return cls(np.eye(n))

    def left(self, g) -> "BundlePoint":
        return BundlePoint(_mat(g) @ self.a)

    def right(self, z) -> "BundlePoint":
        return BundlePoint(self.a @ _mat(z))


@dataclass(frozen=True)
class Certificate:
    max_defect: float
    n_samples: int
    tol: float
    seed: int

    @property
    def passed(self) -> bool:
        return self.max_defect < self.tol


@dataclass(eq=False)
class CartanBundle:
    """Cartan bundle of ``klein`` acting on ``P(V)`` through ``action``.

    Parameters
    ----------
    action : LinearAction
        Linear action whose Klein pair defines ``g`` inside ``a``.
    basepoint : ProjectivePoint
        The point ``m`` with ``chi(e) = m``.
    lam : ndarray, optional
        Real ``(dim a, dim a)`` matrix of ``lambda`` in the coordinates of
        ``klein.a_basis``.  Its first ``dim g`` columns must be the
        identity so that ``lambda`` fixes ``g``.
    """

    action: LinearAction
    basepoint: ProjectivePoint
    lam: np.ndarray | None = None
    certificate: Certificate | None = field(default=None, init=False)

    def __post_init__(self):
        if self.basepoint.dim != self.action.dim_v:
            raise DomainError("base point does not live in the representation space")
        k = self.klein
        if self.lam is not None:
            lam = np.array(self.lam, dtype=float)
            if lam.shape != (k.dim_a, k.dim_a):
                raise ConfigError("lambda must be a square matrix on the a-coordinates")
            if np.linalg.norm(lam[:, : k.dim_g] - np.eye(k.dim_a)[:, : k.dim_g]) > 1e-12:
                raise ConfigError("lambda must restrict to the identity on g")
            if np.linalg.cond(lam) > 1e12:
                raise ConfigError("lambda is singular")
            self.lam = lam

    @property
    def klein(self) -> KleinPair:
        return self.action.klein

    @property
    def n(self) -> int:
        return self.klein.n

    def identity(self) -> BundlePoint:
        return BundlePoint.identity(self.n)

    # -- lambda -------------------------------------------------------------

    def lam_apply(self, xi) -> np.ndarray:
        if self.lam is None:
            return _mat(xi)
        return self.klein.from_coords(self.lam @ self.klein.coords(xi))

    def lam_inverse(self, xi) -> np.ndarray:
        if self.lam is None:
            return _mat(xi)
        return self.klein.from_coords(np.linalg.solve(self.lam, self.klein.coords(xi)))

    # -- connection and orbit model -----------------------------------------

    def theta(self, p: BundlePoint, tangent) -> np.ndarray:
        return self.lam_apply(_mat(tangent) @ np.linalg.inv(p.a))

    def theta_inverse(self, p: BundlePoint, xi) -> np.ndarray:
        return self.lam_inverse(xi) @ p.a

    def chi(self, p: BundlePoint) -> ProjectivePoint:
        return self.action.act(p.a, self.basepoint)

    def rho(self, xi, p: BundlePoint) -> TangentVector:
        """``T chi(theta_p^{-1}(xi))``: the projected ``lambda^{-1}(xi)`` acting on ``chi(p)``."""
        return inf_action(self.action, self.lam_inverse(xi), self.chi(p))

    def momentum_at(self, p: BundlePoint) -> np.ndarray:
        return momentum(self.action, self.chi(p))

    def stabilizer_transport(self, p: BundlePoint, zeta) -> np.ndarray:
        """``theta_p(p . zeta)`` for the right stabilizer action."""
        return self.lam_apply(p.a @ _mat(zeta) @ np.linalg.inv(p.a))

    def geodesic(self, p: BundlePoint, xi, t: float) -> BundlePoint:
        return BundlePoint(group_exp(t * self.lam_inverse(xi)) @ p.a)

    # -- Calabi operator ----------------------------------------------------

    def calabi_operator(self, p: BundlePoint, xi, h: float = FD_STEP) -> np.ndarray:
        """``C_p(xi)``: derivative of ``J`` along ``rho(xi, p)`` by central differences."""
        m = self.chi(p)
        X = self.rho(xi, p)
        jp = momentum(self.action, ProjectivePoint(m.v + h * X.w))
        jm = momentum(self.action, ProjectivePoint(m.v - h * X.w))
        return (jp - jm) / (2 * h)

    def a_equivariance_defect(self, p: BundlePoint, xi, eta) -> float:
        k = self.klein
        j = self.momentum_at(p)
        c_xi = self.calabi_operator(p, xi)
        c_eta = self.calabi_operator(p, eta)
        return abs(kappa_a(k, c_xi, eta) - kappa_a(k, c_eta, xi) + kappa_a(k, j, bracket(xi, eta)))

    def random_point(self, rng: np.random.Generator, radius: float = 1.0, factors: int = 2) -> BundlePoint:
        """Product of ``factors`` exponentials of random elements of ``a`` with norm at most ``radius``."""
        a = np.eye(self.n, dtype=complex)
        for _ in range(factors):
            xi = random_a(self.klein, rng)
            nrm = np.linalg.norm(xi)
            xi = xi / nrm * radius * rng.uniform() if nrm > 0 else xi
            a = group_exp(xi) @ a
        return BundlePoint(a)

    def certify(self, n_samples: int = 100, seed: int = 0, tol: float = EQUIVARIANCE_TOL,
                radius: float = 1.0) -> Certificate:
        """Sample the a-equivariance defect and cache the resulting certificate."""
        rng = np.random.default_rng(seed)
        worst = 0.0
        for _ in range(n_samples):
            p = self.random_point(rng, radius)
            xi, eta = random_a(self.klein, rng), random_a(self.klein, rng)
            worst = max(worst, self.a_equivariance_defect(p, xi, eta))
        self.certificate = Certificate(worst, n_samples, tol, seed)
        return self.certificate

    def require_certified(self):
        if self.certificate is None:
            raise PreconditionError("bundle has not been certified a-equivariant; call certify()")
        if not self.certificate.passed:
            raise PreconditionError(
                f"a-equivariance defect {self.certificate.max_defect:.3g} exceeds {self.certificate.tol:g}")


def coadjoint(xi, mu) -> np.ndarray:
    """``ad*_xi mu``, the kappa-transpose of ``ad_xi``: ``kappa(ad*_xi mu, eta) = kappa(mu, [xi, eta])``."""
    return bracket(mu, xi)


def fd_rho(bundle: CartanBundle, xi, p: BundlePoint, h: float = FD_STEP) -> TangentVector:
    """Finite-difference oracle for :meth:`CartanBundle.rho` along ``theta^{-1}(xi)``."""
    m = bundle.chi(p)
    vp = bundle.chi(bundle.geodesic(p, xi, h)).v
    vm = bundle.chi(bundle.geodesic(p, xi, -h)).v
    # align phases with the base representative before differencing
    vp = vp * np.exp(-1j * np.angle(np.vdot(m.v, vp)))
    vm = vm * np.exp(-1j * np.angle(np.vdot(m.v, vm)))
    return horizontal(m, (vp - vm) / (2 * h))


@dataclass(frozen=True)
class StabilizerBasis:
    """Real basis of the stabilizer subalgebra ``a_m`` at a bundle point.

    Attributes
    ----------
    basis : list of ndarray
        Elements of ``a`` (coordinate-orthonormal).
    tol : float
        Singular-value cutoff used.
    singular_values : ndarray
        Full spectrum of ``xi -> rho(xi, p)``, padded with zeros to ``dim a``.
    closure_residual : float
        Largest distance of a bracket of basis elements from their span.
    """

    basis: list
    tol: float
    singular_values: np.ndarray
    closure_residual: float
    complexified: bool = False

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def complex_dim(self) -> float:
        return self.dim / 2 if self.complexified else float(self.dim)

    def coordinates(self, klein: KleinPair, zeta, tol: float = 1e-8) -> np.ndarray:
        """Coordinates of ``zeta`` in the basis; raises if ``zeta`` is outside the span."""
        if self.dim == 0:
            if np.linalg.norm(_mat(zeta)) > tol:
                raise DomainError("element is not in the (trivial) stabilizer")
            return np.zeros(0)
        B = np.array([klein.coords(b) for b in self.basis]).T
        z = klein.coords(zeta)
        c, *_ = np.linalg.lstsq(B, z, rcond=None)
        if np.linalg.norm(B @ c - z) > tol * max(1.0, np.linalg.norm(z)):
            raise DomainError("element is not in the stabilizer span")
        return c

    def contains(self, klein: KleinPair, zeta, tol: float = 1e-8) -> bool:
        try:
            self.coordinates(klein, zeta, tol)
        except DomainError:
            return False
        return True


def _rho_matrix(bundle: CartanBundle, p: BundlePoint) -> np.ndarray:
    return np.array([_real_vec(bundle.rho(b, p).w) for b in bundle.klein.a_basis]).T


def _numerical_nullspace(M: np.ndarray, ncols: int, tol: float) -> tuple[np.ndarray, np.ndarray]:
    _, s, vh = np.linalg.svd(M, full_matrices=True)
    sv = np.zeros(ncols)
    sv[: len(s)] = s
    above, below = sv[sv > tol], sv[sv <= tol]
    if len(above) and len(below) and below.max() / above.min() > SVD_GAP_RATIO:
        raise AmbiguityError(
            f"no spectral gap at cutoff {tol:g}: {below.max():.3g} vs {above.min():.3g}")
    return sv, vh[sv <= tol]


def stabilizer_basis(bundle: CartanBundle, p: BundlePoint | None = None,
                     tol: float = STABILIZER_SVD_TOL) -> StabilizerBasis:
    """Numerical kernel of ``xi -> rho(xi, p)`` on ``a``."""
    if tol <= 0:
        raise ConfigError("stabilizer tolerance must be positive")
    k = bundle.klein
    p = bundle.identity() if p is None else p
    sv, null = _numerical_nullspace(_rho_matrix(bundle, p), k.dim_a, tol)
    basis = [k.from_coords(c) for c in null]
    resid = 0.0
    if basis:
        B = null.T
        for i, x in enumerate(basis):
            for y in basis[i + 1:]:
                z = k.coords(bracket(x, y))
                c, *_ = np.linalg.lstsq(B, z, rcond=None)
                resid = max(resid, float(np.linalg.norm(B @ c - z)))
    return StabilizerBasis(basis, tol, sv, resid, complexified=k.complexified)


def imaginary_stabilizer(bundle: CartanBundle, stab: StabilizerBasis, tol: float = 1e-8) -> list:
    """Basis of ``a_m`` intersected with ``i m``, as elements ``i zeta2``."""
    k = bundle.klein
    if stab.dim == 0:
        return []
    G = np.array([k.coords(b)[: k.dim_g] for b in stab.basis]).T
    _, s, vh = np.linalg.svd(G, full_matrices=True)
    sv = np.zeros(stab.dim)
    sv[: len(s)] = s
    out = []
    for c in vh[sv <= tol]:
        z = sum(ci * b for ci, b in zip(c, stab.basis))
        out.append(z)
    return out


def complexified_action_rank(bundle: CartanBundle, p: BundlePoint, tol: float = 1e-8) -> tuple[int, int]:
    """SVD ranks of ``xi -> rho(xi, p)`` on ``a`` and of the complexified infinitesimal action at ``chi(p)``."""
    k = bundle.klein
    m = bundle.chi(p)
    cols = []
    for b in k.g_basis:
        cols.append(_real_vec(inf_action(bundle.action, b, m).w))
        cols.append(_real_vec(1j * inf_action(bundle.action, b, m).w))
    r_c = int(np.sum(np.linalg.svd(np.array(cols).T, compute_uv=False) > tol))
    r_rho = int(np.sum(np.linalg.svd(_rho_matrix(bundle, p), compute_uv=False) > tol))
    return r_rho, r_c


def stabilizer_kernel_defect(bundle: CartanBundle, stab: StabilizerBasis, p: BundlePoint) -> float:
    """``max |rho(a zeta a^{-1}, p)|`` over the basis.

    The right translate of the stabilizer at ``e`` is what annihilates
    ``rho`` at a general point ``p = a``.
    """
    worst = 0.0
    for z in stab.basis:
        worst = max(worst, float(np.linalg.norm(bundle.rho(bundle.stabilizer_transport(p, z), p).w)))
    return worst


def unitary_orbit_points(bundle: CartanBundle, p: BundlePoint, count: int,
                         rng: np.random.Generator) -> list[BundlePoint]:
    return [p.left(random_unitary(bundle.klein, rng)) for _ in range(count)]
