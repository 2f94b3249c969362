"""Kempf-Ness function, slopes of geodesic rays and stability.

Directions in ``i m`` are handed around as Hermitian matrices, e.g.
``diag(1, -1)`` for SL(2, C).  Along the ray ``t -> exp(t xi) a`` the
derivative of the Kempf-Ness function is ``kappa_a(J(chi(a_t)), xi)``;
for ``xi`` Hermitian this is the familiar expectation value of ``xi`` in
the normalized vector ``a_t . v``.
"""

from __future__ import annotations

import csv
import itertools
import math
import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.integrate
import scipy.optimize

from . import config
from .cartan import BundlePoint, CartanBundle, stabilizer_basis
from .errors import ConfigError, DomainError, NonConvergenceError, PreconditionError
from .hamiltonian import LinearAction, ProjectivePoint, inf_action, momentum, momentum_pairings
from .lie_core import _mat, dagger, group_exp, kappa_a, kappa_c, polar_decompose


# -- closed form ---------------------------------------------------------------


def kn_lifted(act: LinearAction, a, v: ProjectivePoint) -> float:
    """``Psi_[v](a) = 1/2 log |a.v|^2 - 1/2 log |v|^2``.

    A momentum shift ``s`` on a torus contributes ``-sum_k s_k log |a_kk|``.
    """
    a = _mat(a)
    vec = v.v if isinstance(v, ProjectivePoint) else np.asarray(v, dtype=complex)
    av = act.rep_group(a) @ vec
    val = 0.5 * math.log(np.vdot(av, av).real) - 0.5 * math.log(np.vdot(vec, vec).real)
    if act.shift is not None:
        val -= float(act.shift @ np.log(np.abs(np.diag(a))))
    return val


def kn_derivative_identity_defect(act: LinearAction, a, zeta, v: ProjectivePoint,
                                  h: float = config.FD_STEP) -> float:
    """``|d/dt Psi(exp(t zeta) a) - Im kappa_C(J(a.m), zeta)|`` at ``t = 0``."""
    a, zeta = _mat(a), _mat(zeta)
    fd = (kn_lifted(act, group_exp(h * zeta) @ a, v) - kn_lifted(act, group_exp(-h * zeta) @ a, v)) / (2 * h)
    j = momentum(act, act.act(a, v))
    return abs(fd - kappa_c(j, zeta).imag)


# -- rays and profiles ---------------------------------------------------------


@dataclass(frozen=True, eq=False)
class GeodesicRay:
    bundle: CartanBundle
    start: BundlePoint
    direction: np.ndarray
    ts: np.ndarray = field(default_factory=lambda: np.linspace(0.0, 1.0, 11))

    def __post_init__(self):
        d = _mat(self.direction)
        self.bundle.klein.coords(d)  # raises unless d lies in g + i m
        ts = np.asarray(self.ts, dtype=float)
        if ts.ndim != 1 or len(ts) < 1 or np.any(np.diff(ts) <= 0):
            raise DomainError("ray sample grid must be strictly increasing")
        object.__setattr__(self, "direction", d)
        object.__setattr__(self, "ts", ts)

    def point(self, t: float) -> BundlePoint:
        return self.bundle.geodesic(self.start, self.direction, t)

    def is_imaginary(self) -> bool:
        xi1, _ = self.bundle.klein.split(self.direction)
        return np.linalg.norm(xi1) < 1e-12 * max(1.0, np.linalg.norm(self.direction))


def alpha(bundle: CartanBundle, p: BundlePoint, xi) -> float:
    """The 1-form ``kappa_a(J(chi(p)), theta_p(.))`` evaluated on ``theta_p^{-1}(xi)``."""
    return kappa_a(bundle.klein, bundle.momentum_at(p), xi)


@dataclass
class KNProfile:
    ts: np.ndarray
    psi: np.ndarray
    dpsi: np.ndarray
    d2psi: np.ndarray

    def rows(self):
        return list(zip(self.ts, self.psi, self.dpsi, self.d2psi))

    def to_csv(self, path):
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["t", "psi", "dpsi", "d2psi"])
            for r in self.rows():
                w.writerow([f"{x:.15g}" for x in r])


def kn_profile(ray: GeodesicRay, h2: float = 1e-4) -> KNProfile:
    """Integrate ``dPsi/dt = kappa_a(J, xi)`` along the ray.

    ``psi`` is accumulated interval by interval with adaptive quadrature;
    ``d2psi`` is a central difference of ``dpsi`` with step ``h2``.
    """
    b = ray.bundle
    b.require_certified()

    def dpsi(t):
        return alpha(b, ray.point(t), ray.direction)

    ts = ray.ts
    d1 = np.array([dpsi(t) for t in ts])
    psi = np.zeros_like(ts)
    for i in range(1, len(ts)):
        val, _ = scipy.integrate.quad(dpsi, ts[i - 1], ts[i], epsabs=1e-13, epsrel=1e-12)
        psi[i] = psi[i - 1] + val
    d2 = np.array([(dpsi(t + h2) - dpsi(t - h2)) / (2 * h2) for t in ts])
    return KNProfile(ts, psi, d1, d2)


def convexity_reference(ray: GeodesicRay) -> np.ndarray:
    """``|xi . chi(gamma(t))|^2`` in the Fubini-Study metric, on the ray grid."""
    b = ray.bundle
    return np.array([b.rho(ray.direction, ray.point(t)).norm() ** 2 for t in ray.ts])


# -- exactness on loops ----------------------------------------------------------


@dataclass(frozen=True)
class Segment:
    """The geodesic ``t -> exp(t H) p`` for ``t`` in ``[0, 1]``."""

    start: BundlePoint
    direction: np.ndarray

    def end(self, bundle: CartanBundle) -> BundlePoint:
        return bundle.geodesic(self.start, self.direction, 1.0)


def segment_between(p: BundlePoint, q: BundlePoint) -> Segment:
    """Geodesic from ``p`` to the G-orbit of ``q``: ``q = u exp(H) p`` with ``H`` Hermitian."""
    c = q.a @ np.linalg.inv(p.a)
    h, _ = polar_decompose(dagger(c))
    return Segment(p, h)


def loop_through(points) -> list[Segment]:
    pts = list(points)
    return [segment_between(pts[k], pts[(k + 1) % len(pts)]) for k in range(len(pts))]


def _same_coset(p: BundlePoint, q: BundlePoint, tol: float = 1e-8) -> bool:
    u = q.a @ np.linalg.inv(p.a)
    return np.linalg.norm(dagger(u) @ u - np.eye(len(u))) < tol * max(1.0, np.linalg.norm(u) ** 2)


def loop_integral(bundle: CartanBundle, loop) -> float:
    total = 0.0
    for k, seg in enumerate(loop):
        nxt = loop[(k + 1) % len(loop)].start
        if not _same_coset(seg.end(bundle), nxt):
            raise DomainError(f"segment {k} does not end on the G-orbit of the next start")
        val, _ = scipy.integrate.quad(
            lambda t: alpha(bundle, bundle.geodesic(seg.start, seg.direction, t), seg.direction),
            0.0, 1.0, epsabs=1e-13, epsrel=1e-12)
        total += val
    return total


def path_independence_defect(bundle: CartanBundle, loops) -> float:
    """``max |loop integral of alpha|`` over closed piecewise-geodesic loops."""
    bundle.require_certified()
    return max((abs(loop_integral(bundle, lp)) for lp in loops), default=0.0)


# -- slopes and stability --------------------------------------------------------


def _ray_derivative(bundle: CartanBundle, vec: np.ndarray, xi) -> float:
    vals = momentum_pairings(bundle.action, vec)
    j = bundle.klein.covector_from_pairings(vals)
    return kappa_a(bundle.klein, j, xi)


def slope(ray: GeodesicRay, horizon: float = 1024.0, min_horizon: float = 8.0,
          chunk: float = 0.5, rel: float = config.PLATEAU_REL) -> float:
    """``lim Psi(gamma(t)) / t`` read off as the plateau of ``dPsi/dt``.

    The orbit vector is propagated in chunks and renormalized so that
    large horizons do not overflow.  Convexity makes ``dPsi/dt``
    nondecreasing; the value is accepted once two consecutive doublings
    of the horizon change it by less than ``rel`` (relative).
    """
    b = ray.bundle
    xi = ray.direction
    if np.linalg.norm(xi) == 0:
        return 0.0
    step = b.action.rep_group(group_exp(chunk * b.lam_inverse(xi)))
    vec = b.chi(ray.start).v.copy()
    t, target = 0.0, min_horizon
    prev, streak = None, 0
    while True:
        while t < target - 1e-12:
            vec = step @ vec
            vec /= np.linalg.norm(vec)
            t += chunk
        if not np.all(np.isfinite(vec)):
            raise NonConvergenceError("ray propagation produced non-finite values", partial=prev)
        d = _ray_derivative(b, vec, xi)
        if prev is not None and abs(d - prev) <= rel * max(1.0, abs(d)):
            streak += 1
            if streak >= 2:
                return d
        else:
            streak = 0
        prev = d
        if target >= horizon:
            warnings.warn(f"slope did not plateau by t = {horizon}; returning partial value {d:.6g}",
                          RuntimeWarning, stacklevel=2)
            return d
        target *= 2


@dataclass
class StabilityVerdict:
    label: str
    witness: np.ndarray
    slope: float
    n_directions: int = 0

    def to_json(self) -> dict:
        w = np.asarray(self.witness)
        if np.iscomplexobj(w):
            w = w.real if np.allclose(w.imag, 0) else np.stack([w.real, w.imag])
        return {"label": self.label, "slope": float(self.slope), "witness": np.round(w, 12).tolist()}


def _support(v: ProjectivePoint, tol: float = 1e-12) -> np.ndarray:
    return np.flatnonzero(np.abs(v.v) > tol)


def hm_oracle_torus(weights, v: ProjectivePoint, shift=None) -> StabilityVerdict:
    """Hilbert-Mumford verdict from the support-weight polytope, by linear programming.

    ``stable`` if 0 is an interior point of the convex hull of the support
    weights, ``semistable`` if it lies on the boundary, ``unstable`` if
    outside.  The witness is a direction ``h`` with the worst slope
    ``max_k w_k . h``.
    """
    W = np.array(weights, dtype=float)
    if W.ndim == 1:
        W = W[:, None]
    if shift is not None:
        W = W - np.asarray(shift, dtype=float)[None, :]
    S = _support(v)
    if len(S) == 0:
        raise DomainError("empty support")
    Ws = W[S]
    n, r = Ws.shape

    def slope_of(h):
        return float(np.max(Ws @ h))

    # unstable iff some h has w.h <= -1 on the whole support
    sep = scipy.optimize.linprog(np.zeros(r), A_ub=Ws, b_ub=-np.ones(n),
                                 bounds=[(None, None)] * r, method="highs")
    if sep.status == 0:
        h = sep.x / np.max(np.abs(sep.x))
        return StabilityVerdict("unstable", h, slope_of(h))
    # 0 lies in the hull; interior iff a strictly positive convex combination vanishes
    # and the support weights span R^r
    c = np.zeros(n + 1)
    c[-1] = -1.0
    A_eq = np.zeros((r + 1, n + 1))
    A_eq[:r, :n] = Ws.T
    A_eq[r, :n] = 1.0
    b_eq = np.zeros(r + 1)
    b_eq[r] = 1.0
    A_ub = np.hstack([-np.eye(n), np.ones((n, 1))])
    res = scipy.optimize.linprog(c, A_ub=A_ub, b_ub=np.zeros(n), A_eq=A_eq, b_eq=b_eq,
                                 bounds=[(0, None)] * n + [(None, None)], method="highs")
    full_rank = np.linalg.matrix_rank(Ws, tol=1e-9) == r
    if res.status == 0 and res.x[-1] > 1e-9 and full_rank:
        return StabilityVerdict("stable", np.zeros(r), 0.0)
    if not full_rank:
        _, _, vh = np.linalg.svd(Ws)
        h = vh[-1]
    else:
        box = scipy.optimize.linprog(Ws.sum(axis=0), A_ub=Ws, b_ub=np.zeros(n),
                                     bounds=[(-1, 1)] * r, method="highs")
        h = box.x
    h = h / np.max(np.abs(h))
    return StabilityVerdict("semistable", h, slope_of(h))


def cartan_lattice(bundle: CartanBundle) -> list[np.ndarray]:
    """Generators of an integer lattice in a Cartan subalgebra of ``i m`` (Hermitian diagonals)."""
    k = bundle.klein
    n = k.n
    if k.algebra_tag == "torus":
        idx = [j for j in range(n)
               if any(np.allclose(mb, k.g_basis[j]) for mb in k.m_basis)]
        return [np.diag(np.eye(n)[j]).astype(complex) for j in idx]
    diag_m = []
    for mb in k.m_basis:
        if np.linalg.norm(mb - np.diag(np.diag(mb))) < 1e-12:
            diag_m.append(np.diag(np.diag(mb)))
    if k.algebra_tag == "sl" and len(diag_m) == n - 1:
        return [np.diag(np.eye(n)[j] - np.eye(n)[j + 1]).astype(complex) for j in range(n - 1)]
    # generic: Hermitian diagonals i*d inside i m
    return [1j * d for d in diag_m]


def primitive_directions(dim: int, radius: int) -> list[np.ndarray]:
    out = []
    for c in itertools.product(range(-radius, radius + 1), repeat=dim):
        c = np.array(c)
        if np.any(c) and math.gcd(*[abs(int(x)) for x in c]) == 1:
            out.append(c)
    return out


def sample_directions(bundle: CartanBundle, radius: int = 5, n_conjugates: int = 0,
                      seed: int = 0, budget: int = 4000) -> list[np.ndarray]:
    """Rational directions in a Cartan subalgebra of ``i m``, plus unitary conjugates.

    The sup-norm radius is reduced until the number of primitive vectors
    fits in ``budget``.
    """
    gens = cartan_lattice(bundle)
    if not gens:
        return []
    r = radius
    while r > 1 and (2 * r + 1) ** len(gens) > budget:
        r -= 1
    dirs = [sum(int(ci) * g for ci, g in zip(c, gens)) for c in primitive_directions(len(gens), r)]
    if n_conjugates:
        from .lie_core import random_unitary
        rng = np.random.default_rng(seed)
        base = list(dirs)
        for _ in range(n_conjugates):
            u = random_unitary(bundle.klein, rng)
            dirs.extend(u @ d @ dagger(u) for d in base)
    return dirs


def classify_stability(bundle: CartanBundle, directions=None, radius: int = 5,
                       n_conjugates: int = 0, seed: int = 0,
                       tol: float = config.SLOPE_TOL) -> StabilityVerdict:
    """Label the base point by the minimal slope over sampled rays from ``e``.

    A ``stable`` label means stable relative to the sampled rays.
    """
    bundle.require_certified()
    if directions is None:
        directions = sample_directions(bundle, radius, n_conjugates, seed)
    directions = list(directions)
    if not directions:
        raise ConfigError("stability needs at least one sampled direction")
    start = bundle.identity()
    best, witness = math.inf, None
    for d in directions:
        s = slope(GeodesicRay(bundle, start, d, [0.0]))
        if s < best:
            best, witness = s, d
    if best > tol:
        label = "stable"
    elif best >= -tol:
        label = "semistable"
    else:
        label = "unstable"
    return StabilityVerdict(label, witness, best, len(directions))


def torus_direction_vector(bundle: CartanBundle, d) -> np.ndarray:
    """Real diagonal of a torus direction ``d``."""
    return np.real(np.diag(_mat(d)))


# -- descent to a momentum zero ---------------------------------------------------


def momentum_residual(bundle: CartanBundle, p: BundlePoint) -> float:
    """``max |kappa_a(J(chi(p)), b)|`` over the basis of ``a``."""
    j = bundle.momentum_at(p)
    return max(abs(kappa_a(bundle.klein, j, b)) for b in bundle.klein.a_basis)


def _gradient(bundle: CartanBundle, p: BundlePoint):
    j = bundle.momentum_at(p)
    dirs = [1j * e for e in bundle.klein.m_orthonormal]
    g = np.array([kappa_a(bundle.klein, j, d) for d in dirs])
    X = sum((gi * d for gi, d in zip(g, dirs)), np.zeros((bundle.n, bundle.n), complex))
    return g, X


def find_momentum_zero(bundle: CartanBundle, start: BundlePoint | None = None,
                       tol: float = config.MOMENTUM_ZERO_TOL, max_iter: int = 500,
                       armijo: float = config.ARMIJO_C, max_step: float = 1.0,
                       history: list | None = None) -> BundlePoint:
    """Steepest descent of the Kempf-Ness function along ``i m``.

    Each step moves along the geodesic ``exp(-s X) p`` where ``X`` is the
    kappa-gradient; ``s`` starts at ``max_step`` and is halved until the
    Armijo condition holds.
    """
    if tol <= 0:
        raise ConfigError("tolerance must be positive")
    bundle.require_certified()
    if bundle.lam is not None:
        raise ConfigError("descent is implemented for the untwisted connection only")
    p = bundle.identity() if start is None else start
    psi = kn_lifted(bundle.action, p.a, bundle.basepoint)
    for it in range(max_iter):
        res = momentum_residual(bundle, p)
        if history is not None:
            history.append((it, psi, res))
        if res < tol:
            return p
        g, X = _gradient(bundle, p)
        g2 = float(g @ g)
        s = max_step
        accepted = None
        while s >= 1e-14:
            try:
                q = BundlePoint(group_exp(-s * X) @ p.a)
                psi_q = kn_lifted(bundle.action, q.a, bundle.basepoint)
            except (DomainError, ValueError, OverflowError):
                psi_q = math.nan
            if not math.isfinite(psi_q):
                raise NonConvergenceError(f"Kempf-Ness value became non-finite or degenerate after {it} steps", partial=p)
            if psi_q <= psi - armijo * s * g2:
                # keep halving while the value still improves (avoids oscillating across a valley)
                if accepted is not None and psi_q >= accepted[1]:
                    break
                accepted = (q, psi_q)
            elif accepted is not None:
                break
            s *= 0.5
        if accepted is None:
            raise NonConvergenceError(f"line search stalled after {it} steps", partial=p)
        q, psi_q = accepted
        p, psi = q, psi_q
    raise NonConvergenceError(
        f"no momentum zero within {max_iter} steps (residual {momentum_residual(bundle, p):.3g})",
        partial=p)


def unique_mod_stabilizer_defect(bundle: CartanBundle, p0: BundlePoint, p1: BundlePoint,
                                 zero_tol: float = 1e-6, restarts: int = 5, seed: int = 0) -> float:
    """Distance between two momentum zeros modulo ``G`` on the left and ``exp(a_m)`` on the right.

    ``G p`` is encoded by the positive matrix ``p^H p``, so the defect is
    ``min_c |p0^H p0 - q^H q|`` with ``q = p1 exp(sum c_k zeta_k)``.
    """
    for p in (p0, p1):
        if momentum_residual(bundle, p) > zero_tol:
            raise PreconditionError("both points must be momentum zeros")
    target = dagger(p0.a) @ p0.a
    stab = stabilizer_basis(bundle).basis

    def dist(c):
        z = sum((ci * b for ci, b in zip(c, stab)), np.zeros((bundle.n, bundle.n), complex))
        q = p1.a @ group_exp(z)
        return float(np.linalg.norm(target - dagger(q) @ q))

    best = dist(np.zeros(len(stab)))
    if not stab:
        return best
    rng = np.random.default_rng(seed)
    for r in range(restarts):
        x0 = np.zeros(len(stab)) if r == 0 else rng.normal(size=len(stab))
        res = scipy.optimize.minimize(dist, x0, method="Nelder-Mead",
                                      options={"xatol": 1e-12, "fatol": 1e-14, "maxiter": 4000})
        best = min(best, float(res.fun))
    return best
