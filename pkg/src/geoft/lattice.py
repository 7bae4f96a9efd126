"""Full lattices and Poisson summation in classical and geometric form.

Both sides of every summation formula are truncated lattice sums of
Gaussians. Truncation radii come from a packing-radius tail bound, so each
reported gap is certified to be a property of the identity rather than of
the cut-off.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from ._numerics import as_matrix, as_vector, pairwise_sum
from .errors import RadiusTooLarge, SingularMatrix, TailBoundViolated
from .fields import (GaussianFunction, Pullback, gaussian_geometric_ft,
                     gaussian_inverse_geometric_ft)
from .forms import GeometricPair, GeometricStructure, Side, opposite

MAX_POINTS = 10_000_000
DEFAULT_TAIL_TOL = 1e-14


@dataclass(frozen=True, eq=False)
class Lattice:
    """``G(Z^n)`` for an invertible generator ``G``."""

    generator: np.ndarray

    def __post_init__(self):
        G = as_matrix(self.generator, name="lattice generator")
        if abs(np.linalg.det(G)) <= 1e-14 * max(1.0, np.linalg.norm(G, np.inf)) ** G.shape[0]:
            raise SingularMatrix("lattice generator is singular")
        G.setflags(write=False)
        object.__setattr__(self, "generator", G)

    @property
    def dim(self) -> int:
        return self.generator.shape[0]

    @property
    def det(self) -> float:
        return float(abs(np.linalg.det(self.generator)))

    def dual(self) -> "Lattice":
        return Lattice(np.linalg.inv(self.generator).T)

    @property
    def packing_radius(self) -> float:
        """Lower bound ``sigma_min(G) / 2`` on half the minimal distance."""
        return float(np.linalg.svd(self.generator, compute_uv=False)[-1]) / 2.0

    def to_json(self) -> dict:
        return {"generator": self.generator.tolist()}

    @classmethod
    def from_json(cls, data: dict) -> "Lattice":
        return cls(data["generator"])

    @classmethod
    def integer(cls, n: int) -> "Lattice":
        return cls(np.eye(n))


def structure_from_lattice(G) -> GeometricPair:
    """Pair of ``b(x, y) = <x, G^{-1} y>``: ``M = G^{-1}``, ``B = G``, ``det b = 1 / det G``."""
    G = Lattice(G).generator if not isinstance(G, Lattice) else G.generator
    M = np.linalg.inv(G)
    B = np.array(G, dtype=float)
    B.setflags(write=False)
    return GeometricPair(GeometricStructure(M), B, 1.0 / float(np.linalg.det(G)),
                         float(np.linalg.cond(G)))


def lattices_from_structure(pair: GeometricPair) -> tuple[Lattice, Lattice]:
    """``(B(Z^n), B^T(Z^n))``."""
    return Lattice(pair.B), Lattice(pair.B.T)


def enumerate_points(L: Lattice, radius: float, center=None, return_indices: bool = False):
    """All ``G k`` with ``||G k - center|| <= radius`` in lexicographic order of ``k``.

    The search box in ``k`` is ``G^{-1} center +- radius * ||row_i(G^{-1})||``.
    """
    if radius <= 0:
        raise ValueError("radius must be positive")
    n = L.dim
    center = np.zeros(n) if center is None else as_vector(center, n)
    Ginv = np.linalg.inv(L.generator)
    mid = Ginv @ center
    half = radius * np.linalg.norm(Ginv, axis=1)
    lo = np.ceil(mid - half - 1e-12).astype(np.int64)
    hi = np.floor(mid + half + 1e-12).astype(np.int64)
    counts = np.maximum(hi - lo + 1, 0)
    if float(np.prod(counts.astype(float))) > MAX_POINTS:
        raise RadiusTooLarge(f"search box holds {int(np.prod(counts.astype(float)))} points")
    axes = [np.arange(a, b + 1, dtype=np.int64) for a, b in zip(lo, hi)]
    mesh = np.meshgrid(*axes, indexing="ij")
    k = np.stack([m.ravel() for m in mesh], axis=-1)
    pts = k @ L.generator.T
    keep = np.linalg.norm(pts - center, axis=1) <= radius
    if return_indices:
        return k[keep], pts[keep]
    return pts[keep]


def gaussian_tail_bound(g: GaussianFunction, L: Lattice, radius: float) -> float:
    """Bound on ``sum |g(p)|`` over points ``p`` of any translate of ``L`` outside ``B(c, radius)``.

    Points are ``2 rho`` apart (``rho`` the packing radius), so a ball of
    radius ``r`` holds at most ``((r + rho) / rho)^n`` of them; summing that
    count against the Gaussian envelope shell by shell gives the bound.
    """
    n = L.dim
    lam = float(np.linalg.eigvalsh(g.A)[0])
    rho = L.packing_radius
    total = 0.0
    j = 0
    while True:
        r = radius + j * rho
        term = ((r + rho + rho) / rho) ** n * math.exp(-math.pi * lam * r * r)
        total += term
        if term < 1e-40 * max(total, 1e-300) or term == 0.0:
            break
        j += 1
    return abs(g.amp) * total


def solve_radius(g: GaussianFunction, L: Lattice, tol: float = DEFAULT_TAIL_TOL) -> float:
    """Smallest radius on a 1/8 grid whose tail bound is below ``tol``."""
    lam = float(np.linalg.eigvalsh(g.A)[0])
    r = max(L.packing_radius, 0.5 / math.sqrt(lam))
    while gaussian_tail_bound(g, L, r) >= tol:
        r += 0.125 / math.sqrt(lam)
    return r


class PoissonForm(str, enum.Enum):
    CLASSICAL = "Classical"
    LEFT_B = "LeftB"
    RIGHT_OPPOSITE = "RightOpposite"
    LATTICE_LEFT = "LatticeLeft"
    LATTICE_RIGHT = "LatticeRight"
    INVERSE_LEFT = "InverseLeft"
    INVERSE_RIGHT = "InverseRight"
    INVERSE_OPPOSITE = "InverseOpposite"

    @classmethod
    def coerce(cls, value) -> "PoissonForm":
        if isinstance(value, cls):
            return value
        aliases = {"poil": "LeftB", "poir": "RightOpposite", "pl": "LatticeLeft",
                   "pr": "LatticeRight", "psf": "Classical"}
        key = str(value)
        key = aliases.get(key.lower(), key)
        for member in cls:
            if member.value.lower() == key.lower():
                return member
        raise ValueError(f"unknown Poisson form {value!r}")


@dataclass(frozen=True)
class PoissonReport:
    form: str
    lhs: complex
    rhs: complex
    abs_gap: float
    radii: tuple
    point_counts: tuple
    tail_bounds: tuple

    def to_json(self) -> dict:
        return {"form": self.form, "lhs": [self.lhs.real, self.lhs.imag],
                "rhs": [self.rhs.real, self.rhs.imag], "abs_gap": self.abs_gap,
                "radii": list(self.radii), "point_counts": list(self.point_counts),
                "tail_bounds": list(self.tail_bounds)}


@dataclass(frozen=True)
class _DualSum:
    """``scale * sum_k summand(k) * exp(sign 2 pi i phase(k))`` over ``k in Z^n``.

    ``summand`` is a ``Pullback`` of a Gaussian, whose argument map fixes the
    lattice used for truncation.
    """

    summand: Pullback
    scale: float
    phase: callable
    sign: float


# forms stated for a structure b and its left/right lattice
_PAIR_FORMS = {PoissonForm.LATTICE_LEFT, PoissonForm.LATTICE_RIGHT,
               PoissonForm.INVERSE_LEFT, PoissonForm.INVERSE_RIGHT}
_RIGHT_LATTICE_FORMS = {PoissonForm.LATTICE_RIGHT, PoissonForm.INVERSE_LEFT}


def _resolve(form: PoissonForm, L: Lattice, pair: GeometricPair | None):
    """Structure and summation lattice for ``form``.

    Without an explicit pair the structure is read off ``L``: ``B = G``, or
    ``B = G^T`` for forms summing over the right lattice ``B^T(Z^n)``.
    """
    if pair is not None and form in _PAIR_FORMS:
        left, right = lattices_from_structure(pair)
        return pair, (right if form in _RIGHT_LATTICE_FORMS else left)
    if form in _RIGHT_LATTICE_FORMS:
        return structure_from_lattice(L.generator.T), L
    return structure_from_lattice(L.generator), L


def _dual_sum(form: PoissonForm, f: GaussianFunction, L: Lattice, pair: GeometricPair, x) -> _DualSum:
    if form is PoissonForm.CLASSICAL:
        # (1/det L) sum_{m in L*} Ff(m) e^{2 pi i <x, m>}, with m = G^{-T} k
        Gd = np.linalg.inv(L.generator).T
        return _DualSum(Pullback(f.classical_ft(), Gd, 1.0), 1.0 / L.det,
                        lambda k: (k @ Gd.T) @ x, 1.0)
    if form in (PoissonForm.LEFT_B, PoissonForm.LATTICE_LEFT):
        return _DualSum(gaussian_geometric_ft(f, pair, Side.LEFT), pair.abs_det_b,
                        lambda k: (k @ pair.M) @ x, 1.0)
    if form is PoissonForm.LATTICE_RIGHT:
        return _DualSum(gaussian_geometric_ft(f, pair, Side.RIGHT), pair.abs_det_b,
                        lambda k: pair.b(x, k), 1.0)
    if form is PoissonForm.RIGHT_OPPOSITE:
        op = opposite(pair)
        return _DualSum(gaussian_geometric_ft(f, op, Side.RIGHT), op.abs_det_b,
                        lambda k: op.b(x, k), 1.0)
    if form is PoissonForm.INVERSE_RIGHT:
        inv = gaussian_inverse_geometric_ft(f, pair, Side.RIGHT)
        return _DualSum(inv, 1.0, lambda k: pair.b(k, x), -1.0)
    if form is PoissonForm.INVERSE_LEFT:
        inv = gaussian_inverse_geometric_ft(f, pair, Side.LEFT)
        return _DualSum(inv, 1.0, lambda k: pair.b(x, k), -1.0)
    if form is PoissonForm.INVERSE_OPPOSITE:
        op = opposite(pair)
        inv = gaussian_inverse_geometric_ft(f, op, Side.LEFT)
        return _DualSum(inv, 1.0, lambda k: op.b(x, k), -1.0)
    raise ValueError(form)


def _summand_envelope(p: Pullback) -> tuple[GaussianFunction, Lattice]:
    """Base Gaussian (amplitude folded in) and the lattice ``C(Z^n)`` it is sampled on."""
    base = p.base.scaled(p.scale)
    return base, Lattice(p.C)


def poisson_check(f: GaussianFunction, L: Lattice, x=None, form=PoissonForm.CLASSICAL,
                  radius_space: float | None = None, radius_freq: float | None = None,
                  tol: float = DEFAULT_TAIL_TOL, pair: GeometricPair | None = None) -> PoissonReport:
    """Evaluate both sides of a Poisson summation formula for a Gaussian.

    ``lhs = sum_{n in L} f(n + x)``. The right side depends on ``form``.
    Structures are derived from ``L`` unless ``pair`` is given for one of the
    left/right-lattice forms, in which case that lattice of ``pair`` replaces
    ``L``.
    Radii default to the smallest certified ones; explicit radii whose tail
    bound exceeds ``tol`` raise ``TailBoundViolated``.
    """
    form = PoissonForm.coerce(form)
    if not isinstance(L, Lattice):
        L = Lattice(L)
    n = L.dim
    x = np.zeros(n) if x is None else as_vector(x, n, "shift")
    pair, space = _resolve(form, L, pair)

    # space side: points n + x near the Gaussian centre
    rs = radius_space if radius_space is not None else solve_radius(f, space, tol)
    bound_s = gaussian_tail_bound(f, space, rs)
    dual = _dual_sum(form, f, space, pair, x)
    env, freq_lat = _summand_envelope(dual.summand)
    rf = radius_freq if radius_freq is not None else solve_radius(env, freq_lat, tol)
    bound_f = gaussian_tail_bound(env, freq_lat, rf)
    if bound_s >= tol or bound_f >= tol:
        raise TailBoundViolated(f"tail bounds {bound_s:.2e}, {bound_f:.2e} exceed {tol:.1e}")

    pts = enumerate_points(space, rs, f.c - x)
    lhs = complex(pairwise_sum(f(pts + x))) if len(pts) else 0j

    k, _ = enumerate_points(freq_lat, rf, env.c, return_indices=True)
    k = k.astype(float)
    if len(k):
        terms = dual.summand(k) * np.exp(dual.sign * 2j * np.pi * dual.phase(k))
        rhs = complex(dual.scale * pairwise_sum(terms))
    else:
        rhs = 0j
    return PoissonReport(form.value, lhs, rhs, abs(lhs - rhs), (rs, rf), (len(pts), len(k)),
                         (bound_s, bound_f))
