"""Geometric structures on R^n and the linear algebra around them.

A geometric structure is a nondegenerate bilinear form ``b(x, y) = x^T M y``.
Its geometric pair ``(b, B)`` is the unique invertible ``B`` with
``<x, y> = b(x, B y)``, i.e. ``B = M^{-1}``. Everything downstream (transforms,
Laplacians, lattices) is phrased through ``B``.
"""
from __future__ import annotations

import enum
import json
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import scipy.linalg

from ._numerics import as_matrix
from .errors import Degenerate, DimensionMismatch, TrivialAlgebraWarning


class Side(str, enum.Enum):
    LEFT = "left"
    RIGHT = "right"

    @classmethod
    def coerce(cls, value) -> "Side":
        if isinstance(value, cls):
            return value
        return cls(str(value).lower())

    @property
    def other(self) -> "Side":
        return Side.RIGHT if self is Side.LEFT else Side.LEFT


def _is_degenerate(m: np.ndarray) -> bool:
    n = m.shape[0]
    scale = np.linalg.norm(m, np.inf)
    if scale == 0.0:
        return True
    return abs(np.linalg.det(m)) <= 1e-12 * scale**n


@dataclass(frozen=True, eq=False)
class GeometricStructure:
    """The form ``b(x, y) = x^T M y``; ``M`` is stored read-only."""

    M: np.ndarray

    def __post_init__(self):
        m = as_matrix(self.M, name="structure matrix")
        if _is_degenerate(m):
            raise Degenerate(f"bilinear form is degenerate (det = {np.linalg.det(m):.3e})")
        m.setflags(write=False)
        object.__setattr__(self, "M", m)

    @property
    def dim(self) -> int:
        return self.M.shape[0]

    def __call__(self, x, y):
        return evaluate(self, x, y)

    def to_json(self) -> dict:
        return {"dim": self.dim, "matrix": self.M.tolist()}

    def __repr__(self):
        return f"GeometricStructure(M={self.M.tolist()!r})"


def make_structure(matrix) -> GeometricStructure:
    """Validate ``matrix`` and wrap it as a geometric structure.

    Raises ``NonSquare`` for non-square input and ``Degenerate`` when
    ``|det M| <= 1e-12 * ||M||_inf^n``.
    """
    return GeometricStructure(matrix)


def evaluate(b: GeometricStructure, x, y):
    """``b(x, y) = x^T M y``. Stacked inputs (shape ``(..., n)``) broadcast."""
    n = b.dim
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape[-1:] != (n,) or y.shape[-1:] != (n,):
        raise DimensionMismatch(f"expected vectors of length {n}")
    return np.einsum("...i,ij,...j->...", x, b.M, y)


@dataclass(frozen=True, eq=False)
class GeometricPair:
    structure: GeometricStructure
    B: np.ndarray
    det_b: float
    condition: float = field(default=np.nan)

    @property
    def dim(self) -> int:
        return self.structure.dim

    @property
    def M(self) -> np.ndarray:
        return self.structure.M

    @property
    def abs_det_b(self) -> float:
        return abs(self.det_b)

    @property
    def B_inv(self) -> np.ndarray:
        return self.structure.M

    @property
    def B_inv_T(self) -> np.ndarray:
        return self.structure.M.T

    def b(self, x, y):
        return evaluate(self.structure, x, y)

    def quadratic(self, xi) -> np.ndarray:
        """``b(xi, xi)`` through the symmetric part of ``M`` (rows of ``xi``)."""
        sym = 0.5 * (self.M + self.M.T)
        xi = np.asarray(xi, dtype=float)
        return np.einsum("...i,ij,...j->...", xi, sym, xi)

    def dual_quadratic(self, zeta) -> np.ndarray:
        """``<zeta, B zeta>`` through the symmetric part of ``B``."""
        sym = 0.5 * (self.B + self.B.T)
        zeta = np.asarray(zeta, dtype=float)
        return np.einsum("...i,ij,...j->...", zeta, sym, zeta)

    def __repr__(self):
        return f"GeometricPair(M={self.M.tolist()!r}, B={self.B.tolist()!r}, det_b={self.det_b!r})"


def geometric_pair(b) -> GeometricPair:
    """Build ``(b, B)`` with ``B = M^{-1}`` from a partial-pivot LU factorization.

    Accepts a ``GeometricStructure`` or anything ``make_structure`` accepts.
    """
    if not isinstance(b, GeometricStructure):
        b = make_structure(b)
    m = b.M
    n = b.dim
    lu, piv = scipy.linalg.lu_factor(m)
    B = scipy.linalg.lu_solve((lu, piv), np.eye(n))
    # det from the LU diagonal and the pivot parity
    sign = (-1.0) ** int(np.count_nonzero(piv != np.arange(n)))
    det_b = float(sign * np.prod(np.diag(lu)))
    B.setflags(write=False)
    return GeometricPair(structure=b, B=B, det_b=det_b, condition=float(np.linalg.cond(m)))


def _pair_from_parts(M: np.ndarray, B: np.ndarray, det_b: float, condition: float) -> GeometricPair:
    M = np.array(M, dtype=float)
    B = np.array(B, dtype=float)
    B.setflags(write=False)
    return GeometricPair(structure=GeometricStructure(M), B=B, det_b=det_b, condition=condition)


def opposite(pair: GeometricPair) -> GeometricPair:
    """Pair of ``b^op(x, y) = b(y, x)``: matrix ``M^T``, pair matrix ``B^T``, same det."""
    return _pair_from_parts(pair.M.T, pair.B.T, pair.det_b, pair.condition)


def negated(pair: GeometricPair) -> GeometricPair:
    """Pair of ``-b``: matrix ``-M``, pair matrix ``-B``."""
    n = pair.dim
    return _pair_from_parts(-pair.M, -pair.B, (-1.0) ** n * pair.det_b, pair.condition)


def adjoint(pair: GeometricPair, A, side) -> np.ndarray:
    """Left adjoint ``B^T A^T B^{-T}`` or right adjoint ``B A^T B^{-1}``.

    These satisfy ``b(A^{*L} x, y) = b(x, A y)`` and ``b(A x, y) = b(x, A^{*R} y)``.
    """
    A = as_matrix(A, pair.dim, name="operator")
    side = Side.coerce(side)
    if side is Side.LEFT:
        return pair.B.T @ A.T @ pair.B_inv_T
    return pair.B @ A.T @ pair.B_inv


def in_group(pair: GeometricPair, A, tol: float = 1e-10) -> tuple[bool, float]:
    """Membership in ``G_b = {A : A B A^T = B}``; returns ``(member, residual)``."""
    A = as_matrix(A, pair.dim, name="group candidate")
    residual = float(np.linalg.norm(A @ pair.B @ A.T - pair.B, np.inf))
    return residual <= tol, residual


def in_lie_algebra(pair: GeometricPair, X, tol: float = 1e-10) -> tuple[bool, float]:
    """Membership in ``g_b = {X : X B = -B X^T}``; returns ``(member, residual)``."""
    X = as_matrix(X, pair.dim, name="algebra candidate")
    residual = float(np.linalg.norm(X @ pair.B + pair.B @ X.T, np.inf))
    return residual <= tol, residual


def lie_algebra_basis(pair: GeometricPair, rel_tol: float = 1e-10) -> np.ndarray:
    """Orthonormal basis (shape ``(k, n, n)``) of the null space of ``X -> X B + B X^T``.

    Singular values below ``rel_tol`` times the largest are treated as zero.
    """
    n = pair.dim
    cols = []
    for idx in range(n * n):
        E = np.zeros(n * n)
        E[idx] = 1.0
        E = E.reshape(n, n)
        cols.append((E @ pair.B + pair.B @ E.T).ravel())
    L = np.array(cols).T
    _, s, vt = np.linalg.svd(L)
    cutoff = rel_tol * s[0] if s.size and s[0] > 0 else 0.0
    rank = int(np.count_nonzero(s > cutoff))
    return vt[rank:].reshape(-1, n, n)


def sample_group_element(pair: GeometricPair, seed: int = 0, scale: float = 0.5) -> np.ndarray:
    """Random element ``exp(X)`` of ``G_b`` with ``X`` in ``g_b`` and ``||X||_F = scale``.

    If the Lie algebra is trivial the identity is returned and a
    ``TrivialAlgebraWarning`` is emitted.
    """
    n = pair.dim
    basis = lie_algebra_basis(pair)
    if basis.shape[0] == 0:
        warnings.warn("Lie algebra of the form is trivial; returning the identity",
                      TrivialAlgebraWarning, stacklevel=2)
        return np.eye(n)
    if scale == 0.0:
        return np.eye(n)
    rng = np.random.default_rng(seed)
    coeffs = rng.standard_normal(basis.shape[0])
    X = np.tensordot(coeffs, basis, axes=1)
    X *= scale / np.linalg.norm(X)
    return scipy.linalg.expm(X)


@dataclass(frozen=True)
class Classification:
    symmetric: bool
    skew_symmetric: bool
    positive_definite: bool


def classify(pair, tol: float = 1e-12) -> Classification:
    """Symmetry flags of ``M`` and positive definiteness of ``b(x, x)``."""
    M = pair.M
    scale = max(1.0, float(np.linalg.norm(M, np.inf)))
    t = tol * scale
    symmetric = bool(np.linalg.norm(M - M.T, np.inf) <= t)
    skew = bool(np.linalg.norm(M + M.T, np.inf) <= t)
    lam_min = float(np.linalg.eigvalsh(0.5 * (M + M.T))[0])
    return Classification(symmetric=symmetric, skew_symmetric=skew, positive_definite=lam_min > t)


def canonical_pair(n: int) -> GeometricPair:
    return geometric_pair(np.eye(n))


def symplectic_matrix(n: int) -> np.ndarray:
    """Canonical ``J = [[0, I], [-I, 0]]`` for even ``n``."""
    if n % 2:
        raise DimensionMismatch("symplectic structures need even dimension")
    k = n // 2
    J = np.zeros((n, n))
    J[:k, k:] = np.eye(k)
    J[k:, :k] = -np.eye(k)
    return J


def random_structure(rng: np.random.Generator, n: int, kind: str = "general",
                     min_singular: float = 0.4) -> GeometricStructure:
    """Random well-conditioned structure for property checks.

    ``kind`` is one of ``general``, ``symmetric``, ``skew`` or ``positive``
    (nonsymmetric with positive definite symmetric part).
    """
    while True:
        if kind == "symmetric":
            Q, _ = np.linalg.qr(rng.standard_normal((n, n)))
            ev = rng.uniform(0.5, 2.0, n) * rng.choice([-1.0, 1.0], n)
            M = Q @ np.diag(ev) @ Q.T
        elif kind == "skew":
            J = symplectic_matrix(n)
            S = rng.standard_normal((n, n)) * 0.3 + np.eye(n)
            M = S.T @ J @ S
        elif kind == "positive":
            Q, _ = np.linalg.qr(rng.standard_normal((n, n)))
            P = Q @ np.diag(rng.uniform(0.6, 1.6, n)) @ Q.T
            K = rng.standard_normal((n, n)) * 0.4
            M = P + (K - K.T)
        else:
            M = rng.standard_normal((n, n)) + np.eye(n)
        s = np.linalg.svd(M, compute_uv=False)
        if s[-1] >= min_singular and s[0] <= 3.0:
            return make_structure(M)


def load_structure(path) -> GeometricStructure:
    data = json.loads(Path(path).read_text())
    return structure_from_json(data)


def structure_from_json(data: dict) -> GeometricStructure:
    matrix = data["matrix"]
    if "dim" in data and int(data["dim"]) != len(matrix):
        raise DimensionMismatch(f"dim {data['dim']} does not match matrix with {len(matrix)} rows")
    return make_structure(matrix)

