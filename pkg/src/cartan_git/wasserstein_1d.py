"""Densities on the circle moved by gradient flows.

With ``mu = rho dx`` on ``S^1 = [0, 2 pi)``, a vector field splits as
``X = c / rho + f'`` where ``c / rho`` is ``mu``-divergence free and ``f`` is
mean-zero.  The geodesics of the associated Cartan connection push ``rho``
forward along the flow of ``f'``; they solve ``rho_t + (rho f')' = 0``.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from . import config
from .errors import DomainError, NumericError, StepError

TWO_PI = 2.0 * np.pi


def circle_grid(n: int) -> np.ndarray:
    if n < 4:
        raise DomainError("need at least four nodes on the circle")
    return TWO_PI * np.arange(n) / n


def _mass(rho: np.ndarray) -> float:
    return float(np.sum(rho) * TWO_PI / len(rho))


@dataclass(frozen=True, eq=False)
class DensityOnCircle:
    rho: np.ndarray

    def __post_init__(self):
        r = np.array(self.rho, dtype=float)
        circle_grid(len(r))
        if not np.all(np.isfinite(r)) or np.any(r <= 0):
            raise DomainError("density must be finite and positive")
        if abs(_mass(r) - 1.0) > 1e-10:
            raise DomainError(f"density must have unit mass, got {_mass(r):.12g}")
        r.setflags(write=False)
        object.__setattr__(self, "rho", r)

    @classmethod
    def normalized(cls, values) -> "DensityOnCircle":
        v = np.asarray(values, dtype=float)
        return cls(v / _mass(v))

    @classmethod
    def from_function(cls, g, n: int) -> "DensityOnCircle":
        return cls.normalized(g(circle_grid(n)))

    @classmethod
    def uniform(cls, n: int) -> "DensityOnCircle":
        return cls(np.full(n, 1.0 / TWO_PI))

    @property
    def n(self) -> int:
        return len(self.rho)

    @property
    def x(self) -> np.ndarray:
        return circle_grid(self.n)

    @property
    def mass(self) -> float:
        return _mass(self.rho)


@dataclass(frozen=True, eq=False)
class PotentialFunction:
    f: np.ndarray

    def __post_init__(self):
        f = np.array(self.f, dtype=float)
        circle_grid(len(f))
        if abs(np.mean(f)) * TWO_PI > 1e-12 * max(1.0, np.max(np.abs(f))):
            raise DomainError("potential must have mean zero")
        f.setflags(write=False)
        object.__setattr__(self, "f", f)

    @classmethod
    def from_function(cls, g, n: int) -> "PotentialFunction":
        v = np.asarray(g(circle_grid(n)), dtype=float)
        return cls(v - v.mean())

    @classmethod
    def zero(cls, n: int) -> "PotentialFunction":
        return cls(np.zeros(n))

    @property
    def n(self) -> int:
        return len(self.f)


# -- spectral helpers ----------------------------------------------------------------


def _wavenumbers(n: int) -> np.ndarray:
    return np.fft.fftfreq(n, d=1.0 / n)


def spectral_derivative(values: np.ndarray, order: int = 1) -> np.ndarray:
    n = len(values)
    k = _wavenumbers(n)
    fk = np.fft.fft(values)
    if n % 2 == 0 and order % 2 == 1:
        fk[n // 2] = 0.0
    return np.real(np.fft.ifft((1j * k) ** order * fk))


def spectral_antiderivative(values: np.ndarray) -> np.ndarray:
    """Mean-zero ``F`` with ``F' = values``; ``values`` must have mean zero."""
    n = len(values)
    k = _wavenumbers(n)
    fk = np.fft.fft(values)
    if abs(fk[0]) > 1e-9 * max(1.0, np.max(np.abs(fk))):
        raise DomainError("a periodic antiderivative needs a mean-zero integrand")
    out = np.zeros_like(fk)
    nz = k != 0
    out[nz] = fk[nz] / (1j * k[nz])
    if n % 2 == 0:
        out[n // 2] = 0.0
    return np.real(np.fft.ifft(out))


class TrigSeries:
    """Trigonometric interpolant of periodic samples, keeping only non-negligible modes."""

    def __init__(self, values: np.ndarray, rel_cut: float = 1e-15):
        values = np.asarray(values, dtype=float)
        n = len(values)
        fk = np.fft.fft(values) / n
        k = _wavenumbers(n)
        if n % 2 == 0:
            # split the Nyquist mode symmetrically so the interpolant is real
            fk = np.append(fk, fk[n // 2] / 2)
            fk[n // 2] /= 2
            k = np.append(k, n / 2)
        keep = np.abs(fk) > rel_cut * max(np.max(np.abs(fk)), 1e-300)
        self.k = k[keep]
        self.c = fk[keep]

    def __call__(self, x, order: int = 0) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        coef = self.c * (1j * self.k) ** order
        return np.real(np.exp(1j * np.multiply.outer(x, self.k)) @ coef)


# -- Helmholtz splitting ----------------------------------------------------------------


def helmholtz_1d(X, rho: DensityOnCircle) -> tuple[float, PotentialFunction]:
    """Split ``X = k * rho_u / rho + f'`` with ``rho_u = 1 / (2 pi)``.

    The constant ``k`` is reported relative to the uniform density, so that
    ``X = 1`` with uniform ``rho`` gives ``k = 1``.
    """
    X = np.asarray(X, dtype=float)
    if X.shape != rho.rho.shape:
        raise DomainError("vector field and density must share a grid")
    inv = 1.0 / rho.rho
    c = np.sum(X) / np.sum(inv)
    f = spectral_antiderivative(X - c * inv)
    return float(TWO_PI * c), PotentialFunction(f - f.mean())


def helmholtz_residual(X, rho: DensityOnCircle, k: float, f: PotentialFunction) -> float:
    X = np.asarray(X, dtype=float)
    rebuilt = (k / TWO_PI) / rho.rho + spectral_derivative(f.f)
    return float(np.max(np.abs(rebuilt - X)))


# -- geodesics ------------------------------------------------------------------------


def density_trajectory(rho0: DensityOnCircle, f: PotentialFunction, times,
                       max_step: float = config.RK4_MAX_STEP) -> list[DensityOnCircle]:
    """Push ``rho0`` along the flow of ``f'`` and sample at ``times``.

    Each node ``y`` is traced backwards, ``x' = -f'(x)``, together with
    ``(log J)' = -f''(x)``; then ``rho_t(y) = rho0(x(t)) J(t)``.  A single
    RK4 pass covers all requested times.
    """
    if rho0.n != f.n:
        raise DomainError("density and potential must share a grid")
    times = np.asarray(times, dtype=float)
    if np.any(times < 0) or np.any(np.diff(times) < 0):
        raise DomainError("times must be nonnegative and nondecreasing")
    if not 0 < max_step <= config.RK4_MAX_STEP:
        raise StepError(f"RK4 step must lie in (0, {config.RK4_MAX_STEP}]")
    fs = TrigSeries(f.f)
    r0 = TrigSeries(rho0.rho)

    def rhs(state):
        x = state[0]
        return np.stack([-fs(x, 1), -fs(x, 2)])

    state = np.stack([rho0.x.copy(), np.zeros(rho0.n)])
    out = []
    t = 0.0
    for target in times:
        span = target - t
        if span > 0:
            steps = max(1, math.ceil(span / max_step - 1e-9))
            h = span / steps
            for _ in range(steps):
                k1 = rhs(state)
                k2 = rhs(state + 0.5 * h * k1)
                k3 = rhs(state + 0.5 * h * k2)
                k4 = rhs(state + h * k3)
                state = state + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
            t = target
        if not np.all(np.isfinite(state)):
            raise NumericError("characteristics left the finite range")
        rho_t = r0(state[0]) * np.exp(state[1])
        if abs(_mass(rho_t) - 1.0) > 1e-10:
            # report drift instead of silently renormalizing
            out.append(_unchecked_density(rho_t))
        else:
            out.append(DensityOnCircle(rho_t))
    return out


def _unchecked_density(values: np.ndarray) -> DensityOnCircle:
    d = object.__new__(DensityOnCircle)
    v = np.array(values, dtype=float)
    v.setflags(write=False)
    object.__setattr__(d, "rho", v)
    return d


def cartan_geodesic_density(rho0: DensityOnCircle, f: PotentialFunction, t: float,
                            max_step: float = config.RK4_MAX_STEP) -> DensityOnCircle:
    return density_trajectory(rho0, f, [t], max_step)[0]


def mass_drift(trajectory) -> float:
    return max(abs(r.mass - 1.0) for r in trajectory)


def continuity_residual(times, trajectory, f: PotentialFunction) -> float:
    """``max |rho_t + (rho f')'|`` over interior times, second-order central differences."""
    times = np.asarray(times, dtype=float)
    if len(trajectory) < 3 or len(times) != len(trajectory):
        raise DomainError("need at least three trajectory samples with matching times")
    dts = np.diff(times)
    if np.max(np.abs(dts - dts[0])) > 1e-12 * max(1.0, abs(dts[0])):
        raise DomainError("continuity residual needs a uniform time grid")
    dt = dts[0]
    n = f.n
    h = TWO_PI / n
    fp = (np.roll(f.f, -1) - np.roll(f.f, 1)) / (2 * h)
    worst = 0.0
    for i in range(1, len(trajectory) - 1):
        rt = (trajectory[i + 1].rho - trajectory[i - 1].rho) / (2 * dt)
        flux = trajectory[i].rho * fp
        div = (np.roll(flux, -1) - np.roll(flux, 1)) / (2 * h)
        worst = max(worst, float(np.max(np.abs(rt + div))))
    return worst


def taylor_defect(rho0: DensityOnCircle, f: PotentialFunction, t: float) -> float:
    """``max |rho(t) - (rho0 - t (rho0 f')')|``; second order in ``t``."""
    rt = cartan_geodesic_density(rho0, f, t).rho
    lin = rho0.rho - t * spectral_derivative(rho0.rho * spectral_derivative(f.f))
    return float(np.max(np.abs(rt - lin)))


def write_trajectory_csv(times, trajectory, path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["t", "node", "rho"])
        for t, r in zip(times, trajectory):
            for j, v in enumerate(r.rho):
                w.writerow([f"{t:.12g}", j, f"{v:.15g}"])
