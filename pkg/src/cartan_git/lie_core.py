"""Matrix Lie algebras, Klein pairs and the pairings used throughout.

Algebra elements are plain complex square matrices. The compact algebra
``g`` is always a real subspace of anti-Hermitian matrices, and the
ambient algebra of a Klein pair is ``a = g + i m`` with ``m`` a subspace
of ``g``.  Elements of ``g*`` are identified with ``g`` through

    kappa(mu, xi) = -Re tr(mu xi)

which is positive definite on anti-Hermitian matrices.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np
import scipy.linalg

from .errors import DomainError, NumericError, ShapeError

ALGEBRA_TAGS = ("u", "su", "sl", "gl", "torus", "a")
GROUP_TAGS = ("U", "SU", "SL", "GL", "T", "Tc")


def _mat(x) -> np.ndarray:
    return np.asarray(getattr(x, "matrix", x), dtype=complex)


def dagger(x: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(x, -1, -2))


@dataclass(frozen=True)
class AlgebraElement:
    """A matrix tagged with the algebra it lives in.

    Construction validates the tag: anti-Hermitian for ``u``/``su``,
    traceless for ``su``/``sl``, diagonal for ``torus``.
    """

    matrix: np.ndarray
    algebra_tag: str = "gl"

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ShapeError(f"algebra element must be square, got {m.shape}")
        if not np.all(np.isfinite(m)):
            raise NumericError("algebra element has non-finite entries")
        tag = self.algebra_tag
        if tag not in ALGEBRA_TAGS:
            raise DomainError(f"unknown algebra tag {tag!r}")
        if tag in ("u", "su") and np.linalg.norm(m + dagger(m)) > 1e-12 * max(1.0, np.linalg.norm(m)):
            raise DomainError("element of u(n) must be anti-Hermitian")
        if tag in ("su", "sl") and abs(np.trace(m)) > 1e-12 * max(1.0, np.linalg.norm(m)):
            raise DomainError("element must be traceless")
        if tag == "torus" and np.linalg.norm(m - np.diag(np.diag(m))) > 0:
            raise DomainError("torus elements are diagonal")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)


@dataclass(frozen=True)
class GroupElement:
    matrix: np.ndarray
    group_tag: str = "GL"

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ShapeError(f"group element must be square, got {m.shape}")
        tag = self.group_tag
        if tag not in GROUP_TAGS:
            raise DomainError(f"unknown group tag {tag!r}")
        n = m.shape[0]
        if tag in ("U", "SU", "T") and np.linalg.norm(dagger(m) @ m - np.eye(n)) > 1e-10:
            raise DomainError("unitary group element expected")
        if tag in ("SU", "SL") and abs(np.linalg.det(m) - 1) > 1e-10:
            raise DomainError("determinant one expected")
        if tag in ("T", "Tc") and np.linalg.norm(m - np.diag(np.diag(m))) > 0:
            raise DomainError("torus elements are diagonal")
        if abs(np.linalg.det(m)) < 1e-300:
            raise DomainError("group element must be invertible")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)


def bracket(x, y) -> np.ndarray:
    x, y = _mat(x), _mat(y)
    if x.shape != y.shape:
        raise ShapeError(f"cannot bracket {x.shape} with {y.shape}")
    return x @ y - y @ x


def group_exp(x) -> np.ndarray:
    """Matrix exponential (scaling and squaring with a Pade core)."""
    x = _mat(x)
    if not np.all(np.isfinite(x)):
        raise NumericError("exp of non-finite matrix")
    return scipy.linalg.expm(x)


def adjoint(g, x) -> np.ndarray:
    g, x = _mat(g), _mat(x)
    if g.shape != x.shape:
        raise ShapeError(f"Ad of {g.shape} on {x.shape}")
    try:
        return g @ x @ np.linalg.inv(g)
    except np.linalg.LinAlgError as exc:
        raise DomainError("Ad_g needs an invertible g") from exc


def polar_decompose(a) -> tuple[np.ndarray, np.ndarray]:
    """Split ``a = exp(h) u`` with ``h`` Hermitian and ``u`` unitary."""
    a = _mat(a)
    if abs(np.linalg.det(a)) < 1e-300 or np.linalg.cond(a) > 1e14:
        raise DomainError("polar decomposition of a singular matrix")
    # a a^H = exp(2h)
    w, v = np.linalg.eigh(a @ dagger(a))
    if np.min(w) <= 0:
        raise DomainError("polar decomposition of a singular matrix")
    h = (v * (0.5 * np.log(w))) @ dagger(v)
    h = 0.5 * (h + dagger(h))
    exp_minus_h = (v * (1 / np.sqrt(w))) @ dagger(v)
    return h, exp_minus_h @ a


def _real_vec(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x)
    return np.concatenate([x.real.ravel(), x.imag.ravel()])


def su_basis(n: int) -> list[np.ndarray]:
    """Real basis of su(n): i*(generalized Pauli matrices)."""
    basis = []
    for j in range(n):
        for k in range(j + 1, n):
            e = np.zeros((n, n), complex)
            e[j, k], e[k, j] = 1, -1
            basis.append(e)
            f = np.zeros((n, n), complex)
            f[j, k], f[k, j] = 1j, 1j
            basis.append(f)
    for k in range(1, n):
        d = np.zeros(n)
        d[:k] = 1
        d[k] = -k
        basis.append(1j * np.diag(d) / np.sqrt(k * (k + 1) / 2))
    return basis


def u_basis(n: int) -> list[np.ndarray]:
    return su_basis(n) + [1j * np.eye(n) / np.sqrt(n)]


def torus_basis(r: int) -> list[np.ndarray]:
    basis = []
    for k in range(r):
        e = np.zeros((r, r), complex)
        e[k, k] = 1j
        basis.append(e)
    return basis


@dataclass(frozen=True, eq=False)
class KleinPair:
    """The pair ``g`` inside ``a = g + i m``.

    ``g_basis`` is a real basis of anti-Hermitian matrices spanning ``g``,
    ``m_basis`` spans the Ad_G-stable subspace ``m`` of ``g``.  With
    ``m == g`` this is the complexified pair.
    """

    g_basis: tuple
    m_basis: tuple
    algebra_tag: str
    group_tag: str
    name: str = ""
    complexified: bool = field(default=False)

    def __post_init__(self):
        gb = tuple(np.array(b, dtype=complex) for b in self.g_basis)
        mb = tuple(np.array(b, dtype=complex) for b in self.m_basis)
        n = gb[0].shape[0]
        for b in gb + mb:
            if b.shape != (n, n):
                raise ShapeError("basis matrices of a Klein pair must share a size")
            if np.linalg.norm(b + dagger(b)) > 1e-12:
                raise DomainError("g and m must consist of anti-Hermitian matrices")
        object.__setattr__(self, "g_basis", gb)
        object.__setattr__(self, "m_basis", mb)
        # m must lie in g
        g_mat = np.array([_real_vec(b) for b in gb]).T
        for b in mb:
            c, *_ = np.linalg.lstsq(g_mat, _real_vec(b), rcond=None)
            if np.linalg.norm(g_mat @ c - _real_vec(b)) > 1e-10:
                raise DomainError("m must be a subspace of g")

    @property
    def n(self) -> int:
        return self.g_basis[0].shape[0]

    @property
    def dim_g(self) -> int:
        return len(self.g_basis)

    @property
    def dim_m(self) -> int:
        return len(self.m_basis)

    @property
    def dim_a(self) -> int:
        return self.dim_g + self.dim_m

    @cached_property
    def a_basis(self) -> list[np.ndarray]:
        """Real basis of ``a``: the g-basis followed by i times the m-basis."""
        return list(self.g_basis) + [1j * b for b in self.m_basis]

    @cached_property
    def _g_gram(self) -> np.ndarray:
        return np.array([[kappa_trace(x, y) for y in self.g_basis] for x in self.g_basis])

    @cached_property
    def _m_gram(self) -> np.ndarray:
        return np.array([[kappa_trace(x, y) for y in self.m_basis] for x in self.m_basis])

    @cached_property
    def m_orthonormal(self) -> list[np.ndarray]:
        """A kappa-orthonormal basis of ``m``."""
        w, v = np.linalg.eigh(self._m_gram)
        return [sum(v[i, k] * self.m_basis[i] for i in range(self.dim_m)) / np.sqrt(w[k])
                for k in range(self.dim_m)]

    @cached_property
    def _a_matrix(self) -> np.ndarray:
        return np.array([_real_vec(b) for b in self.a_basis]).T

    def coords(self, xi) -> np.ndarray:
        """Real coordinates of ``xi`` in :attr:`a_basis`; raises if ``xi`` is not in ``a``."""
        xi = _mat(xi)
        if xi.shape != (self.n, self.n):
            raise ShapeError(f"expected a {self.n}x{self.n} matrix, got {xi.shape}")
        target = _real_vec(xi)
        c, *_ = np.linalg.lstsq(self._a_matrix, target, rcond=None)
        if np.linalg.norm(self._a_matrix @ c - target) > 1e-9 * max(1.0, np.linalg.norm(target)):
            raise DomainError("element is not in g + i m")
        return c

    def from_coords(self, c) -> np.ndarray:
        return np.tensordot(np.asarray(c, dtype=float), np.array(self.a_basis), axes=1)

    def g_coords(self, xi) -> np.ndarray:
        """Coordinates of an element of ``g`` in the g-basis."""
        c = self.coords(xi)
        if np.linalg.norm(c[self.dim_g:]) > 1e-9 * max(1.0, np.linalg.norm(c)):
            raise DomainError("element is not in g")
        return c[: self.dim_g]

    def split(self, xi) -> tuple[np.ndarray, np.ndarray]:
        """Write ``xi = xi1 + i xi2`` with ``xi1`` in g and ``xi2`` in m."""
        c = self.coords(xi)
        xi1 = np.tensordot(c[: self.dim_g], np.array(self.g_basis), axes=1)
        xi2 = np.tensordot(c[self.dim_g:], np.array(self.m_basis), axes=1)
        return xi1, xi2

    def in_g(self, xi, tol: float = 1e-10) -> bool:
        xi = _mat(xi)
        return np.linalg.norm(xi + dagger(xi)) <= tol * max(1.0, np.linalg.norm(xi))

    def project_g(self, x) -> np.ndarray:
        """kappa-orthogonal projection of an anti-Hermitian matrix onto ``g``."""
        x = _mat(x)
        rhs = np.array([kappa_trace(x, b) for b in self.g_basis])
        c = np.linalg.solve(self._g_gram, rhs)
        return np.tensordot(c, np.array(self.g_basis), axes=1)

    def project_m(self, x) -> np.ndarray:
        x = _mat(x)
        if self.dim_m == 0:
            return np.zeros((self.n, self.n), complex)
        rhs = np.array([kappa_trace(x, b) for b in self.m_basis])
        c = np.linalg.solve(self._m_gram, rhs)
        return np.tensordot(c, np.array(self.m_basis), axes=1)

    def covector_from_pairings(self, values) -> np.ndarray:
        """The element ``mu`` of g with ``kappa(mu, g_basis[k]) == values[k]``."""
        c = np.linalg.solve(self._g_gram, np.asarray(values, dtype=float))
        return np.tensordot(c, np.array(self.g_basis), axes=1)


def kappa_trace(mu, xi) -> float:
    return float(-np.real(np.trace(_mat(mu) @ _mat(xi))))


def kappa(pair: KleinPair, mu, xi) -> float:
    """The duality ``g* x g -> R``, ``-Re tr(mu xi)``."""
    mu, xi = _mat(mu), _mat(xi)
    if mu.shape != (pair.n, pair.n) or xi.shape != (pair.n, pair.n):
        raise DomainError("kappa arguments do not match the Klein pair")
    if not (pair.in_g(mu) and pair.in_g(xi)):
        raise DomainError("kappa pairs elements of g")
    return kappa_trace(mu, xi)


def kappa_a(pair: KleinPair, mu, xi) -> float:
    """The Klein-pair duality ``kappa_a(mu, xi1 + i xi2) = -kappa(mu, xi2)``.

    Vanishes on ``g``; for the complexified pair this is ``Im kappa_C``.
    """
    mu = _mat(mu)
    if not pair.in_g(mu):
        raise DomainError("kappa_a expects mu in g (identified with g*)")
    _, xi2 = pair.split(xi)
    return -kappa_trace(mu, xi2)


def kappa_c(mu, xi) -> complex:
    """Hermitian extension of kappa to the complexification."""
    mu, xi = _mat(mu), _mat(xi)
    mu1, mu2 = 0.5 * (mu - dagger(mu)), -0.5j * (mu + dagger(mu))
    xi1, xi2 = 0.5 * (xi - dagger(xi)), -0.5j * (xi + dagger(xi))
    k = kappa_trace
    return k(mu1, xi1) + 1j * k(mu2, xi1) - 1j * k(mu1, xi2) + k(mu2, xi2)


# -- shipped Klein pairs -------------------------------------------------------


def sl_su_pair(n: int = 2) -> KleinPair:
    """(sl(n,C), su(n)), the complexified pair of SU(n)."""
    b = su_basis(n)
    return KleinPair(tuple(b), tuple(b), "sl", "SU", name=f"sl{n}", complexified=True)


def gl_u_pair(n: int) -> KleinPair:
    b = u_basis(n)
    return KleinPair(tuple(b), tuple(b), "gl", "U", name=f"gl{n}", complexified=True)


def torus_pair(r: int, m_indices: Sequence[int] | None = None) -> KleinPair:
    """Rank-``r`` torus pair; ``m_indices`` selects the generators spanning m."""
    b = torus_basis(r)
    if m_indices is None:
        m_indices = range(r)
    m = tuple(b[k] for k in m_indices)
    return KleinPair(tuple(b), m, "torus", "T", name=f"torus{r}", complexified=len(m) == r)


def real_form_pair(g_basis: Sequence[np.ndarray], m_basis: Sequence[np.ndarray],
                   group_tag: str = "U", name: str = "") -> KleinPair:
    """The pair ``g`` inside ``g + i m`` for a user chosen Ad_G-stable ``m``."""
    complexified = len(m_basis) == len(g_basis)
    return KleinPair(tuple(g_basis), tuple(m_basis), "a", group_tag, name=name,
                     complexified=complexified)


def random_g(pair: KleinPair, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    c = rng.normal(size=pair.dim_g) * scale
    return np.tensordot(c, np.array(pair.g_basis), axes=1)


def random_a(pair: KleinPair, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    c = rng.normal(size=pair.dim_a) * scale
    return pair.from_coords(c)


def random_unitary(pair: KleinPair, rng: np.random.Generator) -> np.ndarray:
    return group_exp(random_g(pair, rng, scale=2.0))
