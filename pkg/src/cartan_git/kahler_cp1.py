"""S^1-invariant Kahler metrics on CP^1 in moment coordinates.

A metric is encoded by its symplectic potential ``u = u_G + s`` on the
moment interval ``[-1, 1]``, where ``u_G`` is the Fubini-Study potential
with ``u_G'' = 1 / (1 - x^2)``.  Scalar curvature is ``S = -(1/u'')''``,
whose average over ``dx`` is always 2.

The K-energy relative to ``u_G`` has three independent evaluations here:

* line integral ``int dt int u_dot (S_t - S0) dx`` along any path,
* the entropy / Aubin-Mabuchi decomposition in Kahler-potential terms,
* the closed form ``-int log((1-x^2) u'') dx + 2 (s(1) + s(-1)) - S0 int s dx``.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
import scipy.integrate
import scipy.interpolate
import scipy.optimize
import scipy.special
from numpy.polynomial import Polynomial

from . import config
from .errors import DomainError, NonConvergenceError, NumericError, StepError

S0_FS = 2.0


# -- finite differences -------------------------------------------------------


def _fd_weights(offsets, deriv: int) -> np.ndarray:
    """Weights ``w`` with ``sum_k w_k f(x + o_k h) ~ h^deriv f^(deriv)(x)``."""
    offsets = np.asarray(offsets, dtype=float)
    k = len(offsets)
    A = np.vander(offsets, k, increasing=True).T
    b = np.zeros(k)
    b[deriv] = math.factorial(deriv)
    return np.linalg.solve(A, b)


def diff_matrix(n_nodes: int, h: float, deriv: int) -> np.ndarray:
    """Fourth-order differentiation matrix on a uniform grid with one-sided closures."""
    width = 5 if deriv == 1 else 6
    D = np.zeros((n_nodes, n_nodes))
    central = np.arange(-2, 3)
    wc = _fd_weights(central, deriv)
    for j in range(n_nodes):
        if 2 <= j <= n_nodes - 3:
            D[j, j - 2: j + 3] = wc
        elif j < 2:
            offs = np.arange(width) - j
            D[j, :width] = _fd_weights(offs, deriv)
        else:
            offs = np.arange(n_nodes - width, n_nodes) - j
            D[j, n_nodes - width:] = _fd_weights(offs, deriv)
    return D / h ** deriv


_DIFF_CACHE: dict = {}


def _diff(n: int, deriv: int) -> np.ndarray:
    key = (n, deriv)
    if key not in _DIFF_CACHE:
        _DIFF_CACHE[key] = diff_matrix(n + 1, 2.0 / n, deriv)
        _DIFF_CACHE[key].setflags(write=False)
    return _DIFF_CACHE[key]


def grid(n: int) -> np.ndarray:
    if n < 8 or n % 2:
        raise DomainError("grid size must be an even integer >= 8")
    return np.linspace(-1.0, 1.0, n + 1)


def integrate(values: np.ndarray, x: np.ndarray) -> float:
    return float(scipy.integrate.simpson(values, x=x))


def u_fs(x) -> np.ndarray:
    """Fubini-Study symplectic potential ``1/2 [(1+x) log(1+x) + (1-x) log(1-x)]``."""
    x = np.asarray(x, dtype=float)
    return 0.5 * (scipy.special.xlogy(1 + x, 1 + x) + scipy.special.xlogy(1 - x, 1 - x))


# -- potentials --------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class SymplecticPotential1D:
    """``u = u_G + s`` sampled on ``n + 1`` uniform nodes of ``[-1, 1]``.

    Parameters
    ----------
    s : ndarray
        Values of the smooth correction at the nodes.
    poly : Polynomial, optional
        Exact representation of ``s``; when present its derivatives are
        used instead of finite differences.
    """

    s: np.ndarray
    poly: Polynomial | None = None

    def __post_init__(self):
        s = np.array(self.s, dtype=float)
        n = len(s) - 1
        grid(n)
        if not np.all(np.isfinite(s)):
            raise NumericError("potential has non-finite values")
        s.setflags(write=False)
        object.__setattr__(self, "s", s)
        w = self.weighted_hessian
        if np.any(w <= 0):
            raise DomainError("symplectic potential is not strictly convex")

    @classmethod
    def fubini_study(cls, n: int = 512) -> "SymplecticPotential1D":
        return cls.from_polynomial(Polynomial([0.0]), n)

    @classmethod
    def from_polynomial(cls, p, n: int = 512) -> "SymplecticPotential1D":
        p = Polynomial(p) if not isinstance(p, Polynomial) else p
        return cls(p(grid(n)), p)

    @classmethod
    def from_function(cls, f: Callable, n: int = 512) -> "SymplecticPotential1D":
        return cls(f(grid(n)))

    @property
    def n(self) -> int:
        return len(self.s) - 1

    @property
    def x(self) -> np.ndarray:
        return grid(self.n)

    @property
    def ds(self) -> np.ndarray:
        if self.poly is not None:
            return self.poly.deriv(1)(self.x)
        return _diff(self.n, 1) @ self.s

    @property
    def d2s(self) -> np.ndarray:
        if self.poly is not None:
            return self.poly.deriv(2)(self.x)
        return _diff(self.n, 2) @ self.s

    @property
    def weighted_hessian(self) -> np.ndarray:
        """``(1 - x^2) u''``; positive, and equal to 1 at both ends."""
        x = self.x
        return 1.0 + (1.0 - x * x) * self.d2s

    @property
    def inverse_hessian(self) -> np.ndarray:
        """``psi = 1 / u''``, vanishing at ``x = +-1``."""
        x = self.x
        return (1.0 - x * x) / self.weighted_hessian

    def u(self) -> np.ndarray:
        return u_fs(self.x) + self.s

    def u_second(self) -> np.ndarray:
        with np.errstate(divide="ignore"):
            return 1.0 / self.inverse_hessian

    def guillemin_defect(self) -> float:
        w = self.weighted_hessian
        return float(max(abs(w[0] - 1.0), abs(w[-1] - 1.0)))

    def combine(self, other: "SymplecticPotential1D", a: float, b: float) -> "SymplecticPotential1D":
        """``a * self + b * other`` on the correction (``u_G`` weights must sum to one)."""
        if other.n != self.n:
            raise DomainError("potentials live on different grids")
        poly = a * self.poly + b * other.poly if self.poly is not None and other.poly is not None else None
        return SymplecticPotential1D(a * self.s + b * other.s, poly)

    def resample(self, n: int) -> "SymplecticPotential1D":
        if self.poly is not None:
            return SymplecticPotential1D.from_polynomial(self.poly, n)
        spline = scipy.interpolate.CubicSpline(self.x, self.s)
        return SymplecticPotential1D(spline(grid(n)))

    def s_derivatives(self, xq) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """``s, s', s''`` at arbitrary points of ``[-1, 1]``."""
        xq = np.asarray(xq, dtype=float)
        if self.poly is not None:
            return self.poly(xq), self.poly.deriv(1)(xq), self.poly.deriv(2)(xq)
        spline = scipy.interpolate.CubicSpline(self.x, self.s)
        return spline(xq), spline(xq, 1), spline(xq, 2)


def scalar_curvature(u: SymplecticPotential1D) -> np.ndarray:
    """``S = -(1/u'')''`` by fourth-order differences."""
    return -(_diff(u.n, 2) @ u.inverse_hessian)


def average_scalar_curvature(u: SymplecticPotential1D, S: np.ndarray | None = None) -> float:
    S = scalar_curvature(u) if S is None else S
    return integrate(S, u.x) / 2.0


def futaki_cp1(u: SymplecticPotential1D) -> float:
    """``-int (S - S0) x dx``: the Futaki invariant paired with the rotation generator."""
    S = scalar_curvature(u)
    S0 = average_scalar_curvature(u, S)
    return -integrate((S - S0) * u.x, u.x)


# -- K-energy ---------------------------------------------------------------------


@dataclass
class KEnergyValue:
    value: float
    entropy: float = 0.0
    s0_am: float = 0.0
    minus_am_ric: float = 0.0

    def decomposition_residual(self) -> float:
        return abs(self.entropy + self.s0_am + self.minus_am_ric - self.value)


Path = Callable[[float], SymplecticPotential1D]


def linear_path(u0: SymplecticPotential1D, u1: SymplecticPotential1D) -> Path:
    return lambda t: u0.combine(u1, 1.0 - t, t)


def reparametrized_path(u0: SymplecticPotential1D, u1: SymplecticPotential1D) -> Path:
    return lambda t: u0.combine(u1, 1.0 - t * t, t * t)


def bent_path(u0: SymplecticPotential1D, u1: SymplecticPotential1D, bend: SymplecticPotential1D) -> Path:
    """``u0 + t (u1 - u0) + t (1 - t) bend``."""

    def path(t):
        base = u0.combine(u1, 1.0 - t, t)
        return base.combine(bend, 1.0, t * (1.0 - t))

    return path


def k_energy_line_integral(path: Path, n_time: int = 16, h: float = 1e-4) -> float:
    """``int_0^1 dt int u_dot (S_t - S0) dx`` by Gauss-Legendre in ``t``.

    ``u_dot`` is a central difference in ``t`` (exact for paths that are
    polynomial of degree two in ``t``).
    """
    nodes, weights = np.polynomial.legendre.leggauss(n_time)
    ts = 0.5 * (nodes + 1.0)
    total = 0.0
    for t, w in zip(ts, weights):
        ut = path(t)
        udot = (path(t + h).s - path(t - h).s) / (2 * h)
        S = scalar_curvature(ut)
        S0 = average_scalar_curvature(ut, S)
        total += 0.5 * w * integrate(udot * (S - S0), ut.x)
    return total


def k_energy_entropy_form(u: SymplecticPotential1D) -> KEnergyValue:
    """Entropy plus Aubin-Mabuchi terms, with the relative Kahler potential pulled back to ``x``.

    With ``c = cosh s' + x sinh s'`` the relative Kahler potential is
    ``varrho = x s' - s - log c`` and the new volume density relative to
    the Fubini-Study one is ``w = (1 + (1 - x^2) s'') / c^2``.
    """
    x = u.x
    s, ds = u.s, u.ds
    wh = u.weighted_hessian
    c = np.cosh(ds) + x * np.sinh(ds)
    if np.any(c <= 0) or np.any(wh <= 0):
        raise NumericError("K-energy integrand left its domain")
    varrho = x * ds - s - np.log(c)
    w = wh / c ** 2
    S0 = average_scalar_curvature(u)
    entropy = -integrate(np.log(wh) - 2.0 * np.log(c), x)
    am = 0.5 * integrate(varrho * (1.0 + w), x)
    am_ric = 2.0 * integrate(varrho * w, x)
    value = entropy + S0 * am - am_ric
    return KEnergyValue(value, entropy, S0 * am, -am_ric)


def k_energy_closed_form(u: SymplecticPotential1D) -> float:
    """``-int log((1-x^2) u'') dx + 2 (s(1) + s(-1)) - S0 int s dx``."""
    x = u.x
    return -integrate(np.log(u.weighted_hessian), x) + 2.0 * (u.s[0] + u.s[-1]) - S0_FS * integrate(u.s, x)


# -- Legendre duality and geodesics ----------------------------------------------


def _x_of_rho(u: SymplecticPotential1D, rho: np.ndarray, tol: float = 1e-14, max_iter: int = 60) -> np.ndarray:
    """Solve ``u'(x) = rho`` in the variable ``y = artanh x`` by Newton's method."""
    rho = np.asarray(rho, dtype=float)
    y = rho.copy()
    for _ in range(max_iter):
        x = np.tanh(y)
        _, d1, d2 = u.s_derivatives(x)
        g = y + d1 - rho
        dg = 1.0 + d2 * (1.0 - x * x)
        step = g / dg
        y = y - step
        if np.max(np.abs(step)) < tol:
            return np.tanh(y)
    raise NonConvergenceError("Legendre inversion did not converge")


@dataclass(frozen=True, eq=False)
class KahlerPotential1D:
    """Radial Kahler potential ``phi(rho)`` with ``phi' = x``, sampled on a rho grid."""

    rho: np.ndarray
    phi: np.ndarray
    dphi: np.ndarray

    def spline(self):
        return scipy.interpolate.CubicHermiteSpline(self.rho, self.phi, self.dphi)


def kahler_potential_values(u: SymplecticPotential1D, rho) -> np.ndarray:
    rho = np.asarray(rho, dtype=float)
    x = _x_of_rho(u, rho)
    s = u.s_derivatives(x)[0]
    return x * rho - u_fs(x) - s


def legendre_transform(u: SymplecticPotential1D, radius: float = 6.0, n_rho: int = 4096) -> KahlerPotential1D:
    rho = np.linspace(-radius, radius, n_rho + 1)
    x = _x_of_rho(u, rho)
    phi = x * rho - u_fs(x) - u.s_derivatives(x)[0]
    return KahlerPotential1D(rho, phi, x)


def inverse_legendre(k: KahlerPotential1D, xq) -> np.ndarray:
    """``u(x) = sup_rho (x rho - phi(rho))`` for ``x`` inside ``phi'`` range."""
    sp = k.spline()
    dsp = sp.derivative()
    xq = np.atleast_1d(np.asarray(xq, dtype=float))
    out = np.empty_like(xq)
    for i, xv in enumerate(xq):
        if not (k.dphi[0] < xv < k.dphi[-1]):
            raise DomainError("x is outside the range of phi' on the sampled rho window")
        r = scipy.optimize.brentq(lambda t: dsp(t) - xv, k.rho[0], k.rho[-1], xtol=1e-15, rtol=1e-15)
        out[i] = xv * r - sp(r)
    return out


def legendre_round_trip_defect(u: SymplecticPotential1D, radius: float = 6.0, n_rho: int = 4096) -> float:
    """``max |u - L^{-1} L u|`` at nodes whose slope lies well inside the rho window."""
    k = legendre_transform(u, radius, n_rho)
    x = u.x[1:-1]
    slope = np.arctanh(x) + u.s_derivatives(x)[1]
    mask = np.abs(slope) < radius - 0.5
    back = inverse_legendre(k, x[mask])
    return float(np.max(np.abs(back - u.u()[1:-1][mask])))


def toric_geodesic(u0: SymplecticPotential1D, u1: SymplecticPotential1D, t: float) -> SymplecticPotential1D:
    """``(1 - t) u0 + t u1``."""
    if not 0.0 <= t <= 1.0:
        raise DomainError("geodesic parameter must lie in [0, 1]")
    return u0.combine(u1, 1.0 - t, t)


def geodesic_equation_residual(path: Path, n: int, t: float = 0.5, radius: float = 2.0,
                               dt_factor: float = 1.0) -> float:
    """``max |phi_tt - phi_t_rho^2 / phi_rho_rho|`` by central differences.

    The rho grid has ``n`` intervals on ``[-radius, radius]``; the time step
    is ``dt_factor * 2 radius / n`` so both errors scale together.
    """
    h = 2.0 * radius / n
    dt = dt_factor * h
    rho = np.linspace(-radius - h, radius + h, n + 3)
    phis = {k: kahler_potential_values(path(t + k * dt), rho) for k in (-1, 0, 1)}
    p0, pm, pp = phis[0], phis[-1], phis[1]
    phi_tt = (pp - 2 * p0 + pm) / dt ** 2
    phi_t = (pp - pm) / (2 * dt)
    phi_t_rho = (phi_t[2:] - phi_t[:-2]) / (2 * h)
    phi_rr = (p0[2:] - 2 * p0[1:-1] + p0[:-2]) / h ** 2
    res = phi_tt[1:-1] - phi_t_rho ** 2 / phi_rr
    return float(np.max(np.abs(res)))


# -- K-energy descent -------------------------------------------------------------


@dataclass
class DescentResult:
    potential: SymplecticPotential1D
    history: list = field(default_factory=list)
    converged: bool = False

    @property
    def sup_defect(self) -> float:
        return self.history[-1][2]

    def to_csv(self, path):
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["iter", "E", "sup_defect"])
            for it, e, d in self.history:
                w.writerow([it, f"{e:.15g}", f"{d:.15g}"])


def _sup_defect(u: SymplecticPotential1D) -> tuple[float, np.ndarray]:
    S = scalar_curvature(u)
    S0 = average_scalar_curvature(u, S)
    return float(np.max(np.abs(S - S0))), S - S0


def k_energy_descent(u0: SymplecticPotential1D, step: float = 1.0, iters: int = config.CP1_DESCENT_MAX_ITER,
                     target: float = config.CP1_DESCENT_TARGET, armijo: float = config.ARMIJO_C,
                     preconditioned: bool = True) -> DescentResult:
    """Decrease the K-energy until ``|S - S0|_inf < target``.

    The update is ``s <- s - step * P (S - S0)`` where ``P`` is the
    pseudo-inverse of the discrete linearization ``D2 diag(psi^2) D2`` of
    ``s -> S`` (so the step is Newton-like; ``preconditioned=False`` uses
    the plain gradient).  ``step`` is halved until the Armijo condition on
    the closed-form K-energy holds.
    """
    u = SymplecticPotential1D(u0.s)
    x = u.x
    D2 = _diff(u.n, 2)
    E = k_energy_closed_form(u)
    res = DescentResult(u)
    for it in range(iters + 1):
        sup, g = _sup_defect(u)
        res.history.append((it, E, sup))
        if sup < target:
            res.potential, res.converged = u, True
            return res
        if it == iters:
            break
        if preconditioned:
            psi = u.inverse_hessian
            L = D2 @ (psi[:, None] ** 2 * D2)
            d = -np.linalg.lstsq(L, g, rcond=1e-12)[0]
        else:
            d = -g
        d -= np.polynomial.polynomial.polyval(x, np.polynomial.polynomial.polyfit(x, d, 1))
        slope_e = integrate(g * d, x)
        if slope_e >= 0:
            d, slope_e = -g, -integrate(g * g, x)
        a = step
        while True:
            try:
                cand = SymplecticPotential1D(u.s + a * d)
                e_c = k_energy_closed_form(cand)
            except (DomainError, NumericError, FloatingPointError):
                e_c = math.inf
            if e_c <= E + armijo * a * slope_e:
                break
            a *= 0.5
            if a < 1e-12:
                raise StepError(f"line search failed at iteration {it}")
        u, E = cand, e_c
    res.potential = u
    return res


def random_perturbation(rng: np.random.Generator, n: int = 512, degree: int = 6,
                        max_curvature: float = 0.9) -> SymplecticPotential1D:
    """Random polynomial correction with ``sup |s''|`` drawn from ``[0.1, max_curvature]``.

    Bounding ``s''`` keeps ``(1 - x^2) u''`` within ``[1 - max_curvature, 1 + max_curvature]``
    and the curvature boundary layers resolvable on a 512-interval grid.
    """
    if not 0 < max_curvature < 1:
        raise DomainError("max_curvature must lie in (0, 1) to keep the potential convex")
    coef = np.zeros(degree + 1)
    coef[2:] = rng.normal(size=degree - 1)
    p = Polynomial(coef)
    xx = np.linspace(-1, 1, 2001)
    peak = np.max(np.abs(p.deriv(2)(xx)))
    target = rng.uniform(0.1, 1.0) * max_curvature
    return SymplecticPotential1D.from_polynomial(p * (target / peak), n)


def bump(n: int = 512, amplitude: float = 0.05) -> SymplecticPotential1D:
    """``amplitude * (1 - x^2)^2``."""
    return SymplecticPotential1D.from_polynomial(amplitude * Polynomial([1, 0, -1]) ** 2, n)


def potential_rows(u: SymplecticPotential1D):
    S = scalar_curvature(u)
    return list(zip(u.x, u.s, u.u_second(), S))


def write_potential_csv(u: SymplecticPotential1D, path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["x", "s", "u_xx", "S"])
        for row in potential_rows(u):
            w.writerow([f"{v:.15g}" for v in row])
