"""Projective space with the Fubini-Study structure and linear unitary actions.

Tangent vectors at ``[v]`` are represented by horizontal vectors ``w`` with
``<v, w> = 0`` for the stored unit representative ``v``.  With this chart
the Fubini-Study form is ``omega(X, Y) = 2 Im <X, Y>`` and the momentum map
of a unitary action is

    kappa(J([v]), xi) = -i <v, xi v> / <v, v>,

so that for a torus with weights ``lam`` the pairing with ``i diag(lam)``
is ``sum_k lam_k |v_k|^2``.  The factor 2 is what makes the defining
relation ``omega(xi.m, X) + kappa(dJ(X), xi) = 0`` hold exactly; see
:func:`momentum_defect`.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .config import FD_STEP
from .errors import DomainError, ShapeError
from .lie_core import KleinPair, _mat, dagger, kappa, kappa_trace

FS_SCALE = 2.0


def _normalize(v: np.ndarray) -> np.ndarray:
    v = np.asarray(v, dtype=complex)
    nrm = np.linalg.norm(v)
    if nrm == 0 or not np.isfinite(nrm):
        raise DomainError("projective point needs a finite nonzero vector")
    v = v / nrm
    big = np.flatnonzero(np.abs(v) > 1e-8)
    phase = v[big[0]] / abs(v[big[0]])
    return v / phase


@dataclass(frozen=True, eq=False)
class ProjectivePoint:
    """A point ``[v]`` of P(V), stored as a unit vector with a real first entry."""

    v: np.ndarray

    def __post_init__(self):
        u = _normalize(self.v)
        u.setflags(write=False)
        object.__setattr__(self, "v", u)

    @property
    def dim(self) -> int:
        return self.v.shape[0]

    def distance(self, other: "ProjectivePoint") -> float:
        """Chordal distance ``sqrt(1 - |<u, v>|^2)``; zero iff the points agree."""
        # |v - <u, v> u| equals sqrt(1 - |<u, v>|^2) without the cancellation near 0
        return float(np.linalg.norm(other.v - np.vdot(self.v, other.v) * self.v))

    def __eq__(self, other):
        if not isinstance(other, ProjectivePoint) or other.dim != self.dim:
            return NotImplemented
        return self.distance(other) < 1e-12

    def __hash__(self):
        return hash(tuple(np.round(self.v, 10)))


@dataclass(frozen=True, eq=False)
class TangentVector:
    base: ProjectivePoint
    w: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.w, dtype=complex)
        if w.shape != self.base.v.shape:
            raise ShapeError("tangent vector does not match its base point")
        if abs(np.vdot(self.base.v, w)) > 1e-10 * max(1.0, np.linalg.norm(w)):
            raise DomainError("tangent vector must be orthogonal to the base representative")
        w.setflags(write=False)
        object.__setattr__(self, "w", w)

    def __add__(self, other):
        _same_base(self, other)
        return TangentVector(self.base, self.w + other.w)

    def __sub__(self, other):
        _same_base(self, other)
        return TangentVector(self.base, self.w - other.w)

    def __mul__(self, c: float):
        return TangentVector(self.base, c * self.w)

    __rmul__ = __mul__

    def norm(self) -> float:
        """Length in the Fubini-Study metric ``g = 2 Re <., .>``."""
        return float(np.sqrt(FS_SCALE) * np.linalg.norm(self.w))


def _same_base(x: TangentVector, y: TangentVector):
    if x.base is not y.base and not np.array_equal(x.base.v, y.base.v):
        raise DomainError("tangent vectors are based at different points")


def horizontal(m: ProjectivePoint, w) -> TangentVector:
    """Project an arbitrary vector to the horizontal space at ``m``."""
    w = np.asarray(w, dtype=complex)
    return TangentVector(m, w - np.vdot(m.v, w) * m.v)


@dataclass(frozen=True, eq=False)
class LinearAction:
    """A linear action of ``G^c`` on ``V``.

    With ``weights=None`` the matrices of the Klein pair act directly on
    ``C^n``.  For a torus pair, ``weights`` is an integer ``(dim V, rank)``
    matrix: generator ``k`` acts on coordinate ``j`` with weight
    ``weights[j, k]``.  ``shift`` (torus only) subtracts a constant
    character from the momentum map, which keeps it equivariant.
    """

    klein: KleinPair
    weights: np.ndarray | None = None
    shift: np.ndarray | None = field(default=None)

    def __post_init__(self):
        if self.weights is not None:
            w = np.array(self.weights, dtype=int)
            if w.ndim == 1:
                w = w[:, None]
            if self.klein.algebra_tag != "torus" or w.shape[1] != self.klein.n:
                raise ShapeError("weights need a torus pair of matching rank")
            w.setflags(write=False)
            object.__setattr__(self, "weights", w)
        if self.shift is not None:
            if self.weights is None:
                raise DomainError("a momentum shift is only supported for torus actions")
            s = np.array(self.shift, dtype=float).reshape(self.klein.n)
            s.setflags(write=False)
            object.__setattr__(self, "shift", s)

    @property
    def dim_v(self) -> int:
        return self.klein.n if self.weights is None else self.weights.shape[0]

    @property
    def effective_weights(self) -> np.ndarray | None:
        if self.weights is None:
            return None
        if self.shift is None:
            return self.weights.astype(float)
        return self.weights - self.shift[None, :]

    def rep(self, xi) -> np.ndarray:
        xi = _mat(xi)
        if self.weights is None:
            return xi
        return np.diag(self.weights @ np.diag(xi))

    def rep_group(self, a) -> np.ndarray:
        a = _mat(a)
        if self.weights is None:
            return a
        d = np.diag(a)
        return np.diag(np.prod(d[None, :] ** self.weights, axis=1))

    def act(self, a, m: ProjectivePoint) -> ProjectivePoint:
        return ProjectivePoint(self.rep_group(a) @ m.v)


def point(v) -> ProjectivePoint:
    return ProjectivePoint(np.asarray(v, dtype=complex))


def inf_action(act: LinearAction, xi, m: ProjectivePoint) -> TangentVector:
    """The fundamental vector ``xi.m``; complex-linear in ``xi``."""
    xv = act.rep(xi) @ m.v
    return horizontal(m, xv)


def symplectic_form(m: ProjectivePoint, X: TangentVector, Y: TangentVector) -> float:
    for Z in (X, Y):
        if Z.base is not m and not np.array_equal(Z.base.v, m.v):
            raise DomainError("tangent vector based elsewhere")
    return float(FS_SCALE * np.imag(np.vdot(X.w, Y.w)))


def complex_structure(m: ProjectivePoint, X: TangentVector) -> TangentVector:
    if X.base is not m and not np.array_equal(X.base.v, m.v):
        raise DomainError("tangent vector based elsewhere")
    return TangentVector(m, 1j * X.w)


def metric(m: ProjectivePoint, X: TangentVector, Y: TangentVector) -> float:
    return symplectic_form(m, X, complex_structure(m, Y))


def momentum_pairings(act: LinearAction, v: np.ndarray) -> np.ndarray:
    """``kappa(J([v]), b)`` for every basis element ``b`` of g."""
    v = np.asarray(v, dtype=complex)
    nv = np.vdot(v, v).real
    vals = np.array([np.real(-1j * np.vdot(v, act.rep(b) @ v)) / nv for b in act.klein.g_basis])
    if act.shift is not None:
        vals = vals - act.shift
    return vals


def momentum(act: LinearAction, m: ProjectivePoint) -> np.ndarray:
    """``J(m)`` as an element of g (identified with g* through kappa)."""
    for b in act.klein.g_basis:
        r = act.rep(b)
        if np.linalg.norm(r + dagger(r)) > 1e-12:
            raise DomainError("momentum map needs a unitary representation of g")
    v = m.v if isinstance(m, ProjectivePoint) else np.asarray(m, dtype=complex)
    return act.klein.covector_from_pairings(momentum_pairings(act, v))


def chart_curve(m: ProjectivePoint, X: TangentVector, t: float) -> ProjectivePoint:
    """The curve ``t -> [v + t w]`` with velocity ``X`` at ``t = 0``."""
    return ProjectivePoint(m.v + t * X.w)


def momentum_derivative(act: LinearAction, m: ProjectivePoint, X: TangentVector,
                        h: float = FD_STEP) -> np.ndarray:
    """Central difference of ``J`` along ``X``."""
    jp = momentum(act, chart_curve(m, X, h))
    jm = momentum(act, chart_curve(m, X, -h))
    return (jp - jm) / (2 * h)


def momentum_defect(act: LinearAction, m: ProjectivePoint, xi, X: TangentVector,
                    h: float = FD_STEP) -> float:
    """Residual ``|omega(xi.m, X) + kappa(dJ(X), xi)|`` of the defining relation."""
    lhs = symplectic_form(m, inf_action(act, xi, m), X)
    dj = momentum_derivative(act, m, X, h)
    return abs(lhs + kappa(act.klein, dj, xi))


def cocycle_sigma(act: LinearAction, g, m: ProjectivePoint) -> np.ndarray:
    """Non-equivariance ``sigma(g) = J(g.m) - Ad_g J(m)``."""
    g = _mat(g)
    j_gm = momentum(act, act.act(g, m))
    j_m = momentum(act, m)
    return j_gm - g @ j_m @ np.linalg.inv(g)


def momentum_norm(act: LinearAction, m: ProjectivePoint) -> float:
    j = momentum(act, m)
    return float(np.sqrt(kappa_trace(j, j)))


def random_point(dim: int, rng: np.random.Generator) -> ProjectivePoint:
    return ProjectivePoint(rng.normal(size=dim) + 1j * rng.normal(size=dim))


def random_tangent(m: ProjectivePoint, rng: np.random.Generator) -> TangentVector:
    n = m.dim
    return horizontal(m, rng.normal(size=n) + 1j * rng.normal(size=n))
