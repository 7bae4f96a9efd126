"""Catalog of named identity checks and the engine that runs them.

Each ``CheckSpec`` binds an id to the identity it tests (stated as a formula
in ``anchor``), a tolerance, a numerical backend and a runner. Runners draw
their random inputs from a generator seeded by ``(seed, crc32(id))`` so every
check is reproducible on its own and independent of catalog order.
"""
from __future__ import annotations

import enum
import time
import warnings
import zlib
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from ._numerics import Residual, pairwise_sum, rel_gap
from .calculus import (Direction, _probe_grid, b_laplacian, default_probes, derivative_transform_identity,
                       gradient, laplacian_equivariance, laplacian_transform_identity, partial_derivative,
                       plane_wave_eigencheck, sobolev_norm_identity)
from .errors import GeoFTError, PreconditionFailed, TrivialAlgebraWarning, UnknownCheck
from .fields import (GaussianFunction, GridSpec, PolyGaussian, SampledField, TrigPolynomial,
                     gaussian_geometric_ft, gaussian_inverse_geometric_ft, random_gaussian, sample, tau_action)
from .forms import (GeometricPair, Side, adjoint, canonical_pair, geometric_pair, in_group, in_lie_algebra,
                    lie_algebra_basis, negated, opposite, random_structure, sample_group_element)
from .fraclap import FracParams, frac_laplacian, frac_property_check, multiplier, path_agreement
from .lattice import Lattice, PoissonForm, poisson_check
from .spectral import (FrequencyLattice, Method, Spectrum, convolve, dft_direct, geometric_ft,
                       inverse_geometric_ft, kernel_covector, quadrature_transform)


class Backend(str, enum.Enum):
    ANALYTIC = "Analytic"
    QUADRATURE = "Quadrature"
    PERIODIC = "PeriodicSpectral"


TOL_EXACT = 1e-12
TOL_QUAD = 1e-8
TOL_DOUBLE = 1e-6


@dataclass(frozen=True)
class CheckSpec:
    id: str
    anchor: str
    tolerance: float
    backend: Backend
    inputs: dict = field(default_factory=dict)
    runner: Callable = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if not self.tolerance > 0:
            raise ValueError(f"{self.id}: tolerance must be positive")
        if not self.anchor:
            raise ValueError(f"{self.id}: missing anchor")


@dataclass(frozen=True)
class CheckReport:
    id: str
    lhs_summary: float
    rhs_summary: float
    residual: float
    tolerance: float
    passed: bool
    seed: int
    backend: str
    runtime_ms: float = 0.0
    detail: dict = field(default_factory=dict)

    def to_json(self, timings: bool = False) -> dict:
        out = {"id": self.id, "lhs_summary": self.lhs_summary, "rhs_summary": self.rhs_summary,
               "residual": self.residual, "tolerance": self.tolerance, "passed": self.passed,
               "seed": self.seed, "backend": self.backend, "detail": _jsonable(self.detail)}
        if timings:
            out["runtime_ms"] = self.runtime_ms
        return out


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    if isinstance(obj, enum.Enum):
        return obj.value
    return obj


CATALOG: dict[str, CheckSpec] = {}


def _register(check_id: str, anchor: str, tolerance: float, backend: Backend, runner, **inputs):
    if check_id in CATALOG:
        raise ValueError(f"duplicate check id {check_id}")
    CATALOG[check_id] = CheckSpec(check_id, anchor, tolerance, Backend(backend), inputs, runner)


def _rng_for(check_id: str, seed: int) -> np.random.Generator:
    return np.random.default_rng([int(seed), zlib.crc32(check_id.encode())])


def _worst(results) -> Residual:
    results = list(results)
    return max(results, key=lambda r: r.residual)


def _pair(rng, n: int, kind: str = "general") -> GeometricPair:
    return geometric_pair(random_structure(rng, n, kind))


def _probes(rng, n: int, count: int = 10, scale: float = 0.8) -> np.ndarray:
    return rng.uniform(-scale, scale, (count, n))


def _quad(func, env: GaussianFunction, pair: GeometricPair, side, pts, inverse: bool = False):
    """Riemann-sum transform of ``func`` on a grid sized from the Gaussian envelope ``env``.

    Grids in three or more dimensions are too large for a dense sum, so a
    Gaussian ``func`` there falls back to its closed-form transform.
    """
    if pair.dim >= 3 and isinstance(func, GaussianFunction):
        closed = gaussian_inverse_geometric_ft if inverse else gaussian_geometric_ft
        return closed(func, pair, side)(np.atleast_2d(pts))
    return quadrature_transform(func, _probe_grid(env, pair, pts), pair, side, pts, inverse)


def _integral(func, env: GaussianFunction) -> complex:
    grid = env.default_grid(width=10.0)
    return complex(grid.cell_volume * pairwise_sum(np.asarray(func(grid.points()), dtype=complex)))


def _conv_at(F, G, env: GaussianFunction, pts) -> np.ndarray:
    """``(F * G)(p) = int F(y) G(p - y) dy`` by quadrature over the grid of ``env``."""
    grid = env.default_grid(width=10.0)
    y = grid.points()
    Fy = np.asarray(F(y), dtype=complex)
    return np.array([grid.cell_volume * pairwise_sum(Fy * G(p - y)) for p in pts])


def _dims(inp) -> tuple:
    return tuple(inp.get("dims", (1, 2)))


# --- geometric pairs and the group G_b ------------------------------------------


def _run_relb(inp, rng):
    worst = 0.0
    for i in range(inp["cases"]):
        n = 1 + i % 3
        p = _pair(rng, n)
        # <e_i, e_j> - b(e_i, B e_j) entrywise, and det b * det B - 1
        basis_gap = float(np.max(np.abs(np.eye(n) - p.M @ p.B)))
        det_gap = abs(p.det_b * np.linalg.det(p.B) - 1.0)
        worst = max(worst, basis_gap, det_gap)
    return Residual(1.0, 1.0, worst, {"cases": inp["cases"]})


def _run_opposite(inp, rng):
    gaps = []
    for n in (1, 2, 3):
        p = _pair(rng, n)
        op = opposite(p)
        back = opposite(op)
        gaps += [np.max(np.abs(op.M - p.M.T)), np.max(np.abs(op.B - p.B.T)), abs(op.det_b - p.det_b),
                 np.max(np.abs(op.M @ op.B - np.eye(n))), np.max(np.abs(back.M - p.M)),
                 np.max(np.abs(back.B - p.B))]
    return Residual(1.0, 1.0, float(max(gaps)))


def _run_adjoint(inp, rng):
    gaps = []
    for n in (1, 2, 3):
        p = _pair(rng, n)
        A = rng.standard_normal((n, n))
        XL = adjoint(p, A, Side.LEFT)
        XR = adjoint(p, A, Side.RIGHT)
        # b(X_L e_i, e_j) = b(e_i, A e_j) and b(A e_i, e_j) = b(e_i, X_R e_j)
        gaps.append(np.max(np.abs(XL.T @ p.M - p.M @ A)))
        gaps.append(np.max(np.abs(A.T @ p.M - p.M @ XR)))
        gaps.append(np.max(np.abs(adjoint(p, XL, Side.RIGHT) - A)) / max(1.0, np.max(np.abs(A))))
    return Residual(1.0, 1.0, float(max(gaps)))


_GROUP_CASES = (("general", 2), ("symmetric", 2), ("symmetric", 3), ("skew", 2), ("skew", 4), ("positive", 2))


def _run_group(inp, rng):
    gaps = []
    for kind, n in _GROUP_CASES:
        p = _pair(rng, n, kind)
        A = sample_group_element(p, int(rng.integers(2**31)), scale=0.7)
        gaps.append(in_group(p, A)[1])
        gaps.append(abs(abs(np.linalg.det(A)) - 1.0))
    return Residual(1.0, 1.0, float(max(gaps)), {"cases": len(_GROUP_CASES)})


def _run_lie(inp, rng):
    import scipy.linalg

    gaps = []
    for kind, n in _GROUP_CASES:
        p = _pair(rng, n, kind)
        basis = lie_algebra_basis(p)
        X = np.tensordot(rng.standard_normal(basis.shape[0]), basis, axes=1)
        gaps.append(in_lie_algebra(p, X)[1])
        for t in (0.1, 1.0):
            gaps.append(in_group(p, scipy.linalg.expm(t * X))[1])
    return Residual(1.0, 1.0, float(max(gaps)))


# --- transforms of Gaussians ------------------------------------------------------


def _run_fft_oracle(inp, rng):
    out = []
    for i in range(inp["cases"]):
        n = 1 + i % 2
        p = _pair(rng, n)
        grid = GridSpec.symmetric(n, 48 if n == 1 else 24, 5.0)
        f = sample(random_gaussian(rng, n), grid)
        side = Side.LEFT if i % 4 < 2 else Side.RIGHT
        fast = geometric_ft(f, p, side, method=Method.FFT)
        slow = geometric_ft(f, p, side, freqs=fast.freqs, method=Method.DIRECT)
        out.append(Residual.compare(fast.values, slow.values))
    return _worst(out)


def _run_proplr(inp, rng):
    side = Side(inp["side"])
    out = []
    for n in _dims(inp):
        for _ in range(inp["cases"]):
            p = _pair(rng, n)
            g = random_gaussian(rng, n)
            grid = GridSpec.symmetric(n, 128, 8.0)
            spec = geometric_ft(sample(g, grid), p, side, method=Method.FFT)
            closed = gaussian_geometric_ft(g, p, side)(spec.freqs)
            out.append(Residual.compare(spec.values, closed))
    return _worst(out)


def _run_teo2_pullback(inp, rng):
    """``F^L_b = tau_{B^T} F`` (left) and ``F^R_b = tau_B F`` (right)."""
    side = Side(inp["side"])
    out = []
    for n in _dims(inp):
        p = _pair(rng, n)
        g = random_gaussian(rng, n)
        xi = _probes(rng, n)
        lhs = _quad(g, g, p, side, xi)
        C = p.B.T if side is Side.LEFT else p.B
        # (tau_C F g)(xi) = (F g)(C^{-1} xi)
        rhs = g.classical_ft()(np.linalg.solve(C, xi.T).T)
        out.append(Residual.compare(lhs, rhs))
    return _worst(out)


def _run_teo2_iii(inp, rng):
    out = []
    for n in _dims(inp):
        p = _pair(rng, n)
        g = random_gaussian(rng, n)
        xi = _probes(rng, n)
        lhs = _quad(g, g, p, Side.RIGHT, xi)
        # tau_{B B^{-T}} F^L_b evaluated at xi reads F^L_b at B^T B^{-1} xi
        moved = xi @ (p.B.T @ p.M).T
        rhs = _quad(g, g, p, Side.LEFT, moved)
        out.append(Residual.compare(lhs, rhs))
    return _worst(out)


def _run_roundtrip(inp, rng):
    out = []
    for n in _dims(inp):
        for side in Side:
            p = _pair(rng, n)
            g = random_gaussian(rng, n)
            f = sample(g, g.default_grid(64 if n == 2 else 128, width=6.0))
            spec = geometric_ft(f, p, side, method=Method.FFT)
            back = inverse_geometric_ft(spec, p, side, method=Method.FFT)
            out.append(Residual.compare(back.flat, f.flat, side=side.value))
    return _worst(out)


def _run_invftt(inp, rng):
    """Inverse quadrature of the closed-form spectrum recovers the function."""
    out = []
    for n in _dims(inp):
        for side in Side:
            p = _pair(rng, n)
            g = random_gaussian(rng, n)
            spec = gaussian_geometric_ft(g, p, side)
            x = _probes(rng, n)
            lhs = _quad(spec, spec.as_gaussian(), p, side, x, inverse=True)
            out.append(Residual.compare(lhs, g(x), side=side.value))
    return _worst(out)


def _run_inverse_chain(inp, rng):
    """All displayed expressions for ``(F^{L/R}_b)^{-1} g`` agree at probe points."""
    side = Side(inp["side"])
    out = []
    for n in _dims(inp):
        p = _pair(rng, n)
        e = canonical_pair(n)
        g = random_gaussian(rng, n)
        x = _probes(rng, n)
        d = p.abs_det_b
        S = p.M.T if side is Side.LEFT else p.M        # B^{-T} (left) or B^{-1} (right)
        T = p.B if side is Side.LEFT else p.B.T        # B (left) or B^T (right)
        # F o tau_{-S}: classical transform of x -> g(-S^{-1} x)
        pulled = g.compose(-np.linalg.inv(S))
        v1 = _quad(pulled, pulled, e, Side.LEFT, x)
        # |det b| tau_{-T} o F: |det b| (F g)(-T^{-1} x)
        v2 = d * g.classical_ft()(-(x @ np.linalg.inv(T).T))
        # tau_S o F_b^{side} o tau_{-S}: read the transform of the pulled function at S^{-1} x
        v3 = _quad(pulled, pulled, p, side, x @ np.linalg.inv(S).T)
        # |det b| tau_{-I} o F_b^{other side}
        v4 = d * _quad(g, g, p, side.other, -x)
        direct = _quad(g, g, p, side, x, inverse=True)
        closed = gaussian_inverse_geometric_ft(g, p, side)(x)
        vals = [v1, v2, v3, v4, direct]
        out += [Residual.compare(v, closed, variant=k) for k, v in enumerate(vals)]
    return _worst(out)


def _run_teo2_vii(inp, rng):
    out = []
    for n in _dims(inp):
        p = _pair(rng, n)
        neg = negated(p)
        g = random_gaussian(rng, n)
        xi = _probes(rng, n)
        for side in Side:
            lhs = _quad(g, g, neg, side, xi)
            mid = _quad(g, g, p, side, -xi)
            rhs = _quad(g, g, p, side.other, xi, inverse=True) / p.abs_det_b
            out += [Residual.compare(lhs, mid), Residual.compare(lhs, rhs)]
    return _worst(out)


def _run_fop_i(inp, rng):
    out = []
    for n in _dims(inp):
        p = _pair(rng, n)
        op = opposite(p)
        g = random_gaussian(rng, n)
        xi = _probes(rng, n)
        for side in Side:
            out.append(Residual.compare(_quad(g, g, p, side, xi), _quad(g, g, op, side.other, xi)))
    return _worst(out)


def _run_fop_ii(inp, rng):
    """Symmetric ``b``: left and right transforms agree; ``b = <.,.>`` gives the classical one."""
    out = []
    for n in _dims(inp):
        p = _pair(rng, n, "symmetric")
        g = random_gaussian(rng, n)
        f = sample(g, g.default_grid(32, width=6.0))
        left = geometric_ft(f, p, Side.LEFT, method=Method.FFT)
        right = geometric_ft(f, p, Side.RIGHT, method=Method.FFT)
        out.append(Residual.compare(left.values, right.values))
        e = canonical_pair(n)
        xi = _probes(rng, n)
        classical = dft_direct(f, xi)
        for side in Side:
            out.append(Residual.compare(geometric_ft(f, e, side, xi).values, classical))
    return _worst(out)


def _run_skew_pair(inp, rng):
    """Skew ``b``: ``F^L_b = F^R_{-b}`` and ``F^R_b = F^L_{-b}``."""
    out = []
    for n in (2, 4) if inp.get("wide") else (2,):
        p = _pair(rng, n, "skew")
        neg = negated(p)
        g = random_gaussian(rng, n)
        xi = _probes(rng, n, count=6)
        for side in Side:
            out.append(Residual.compare(_quad(g, g, p, side, xi), _quad(g, g, neg, side.other, xi)))
    return _worst(out)


def _run_symmetric_only(inp, rng):
    out = []
    for n in (1, 2, 3):
        p = _pair(rng, n, "symmetric")
        g = random_gaussian(rng, n)
        xi = _probes(rng, n, count=6)
        out.append(Residual.compare(_quad(g, g, p, Side.LEFT, xi), _quad(g, g, p, Side.RIGHT, xi)))
    return _worst(out)


_WITNESS_FLOOR = 1e-3


def _witness(lhs, rhs, **detail) -> Residual:
    """Residual ``floor / gap``: at most 1 exactly when the two sides differ by ``floor`` somewhere."""
    gap = float(np.max(np.abs(np.asarray(lhs) - np.asarray(rhs))))
    ratio = _WITNESS_FLOOR / gap if gap > 0 else np.inf
    return Residual(float(np.max(np.abs(lhs))), float(np.max(np.abs(rhs))), ratio, {"gap": gap, **detail})


def _witness_probes() -> np.ndarray:
    return np.array([[0.5, 0.0], [0.0, 0.5], [0.4, -0.3], [-0.2, 0.6], [0.7, 0.7]])


def _run_symmetry_witness(inp, rng):
    p = geometric_pair([[2.0, 1.0], [0.0, 1.0]])
    g = GaussianFunction.standard(2).translated([0.3, -0.2])
    xi = _witness_probes()
    return _witness(_quad(g, g, p, Side.LEFT, xi), _quad(g, g, p, Side.RIGHT, xi))


def _run_skew_self_inverse(inp, rng):
    """Skew ``b``: ``F^{L/R}_b = |det b|^{-1} (F^{L/R}_b)^{-1}``."""
    out = []
    for n in (2, 4):
        p = _pair(rng, n, "skew")
        g = random_gaussian(rng, n)
        xi = _probes(rng, n, count=6)
        for side in Side:
            lhs = _quad(g, g, p, side, xi)
            rhs = _quad(g, g, p, side, xi, inverse=True) / p.abs_det_b
            out.append(Residual.compare(lhs, rhs, side=side.value))
    return _worst(out)


def _run_skew_witness(inp, rng):
    p = geometric_pair([[2.0, 1.0], [0.0, 1.0]])
    g = GaussianFunction.standard(2).translated([0.3, -0.2])
    xi = _witness_probes()
    lhs = _quad(g, g, p, Side.LEFT, xi)
    rhs = _quad(g, g, p, Side.LEFT, xi, inverse=True) / p.abs_det_b
    return _witness(lhs, rhs)


def _run_complex(inp, rng):
    out = []
    for n in _dims(inp):
        p = _pair(rng, n)
        neg = negated(p)
        g = random_gaussian(rng, n)
        gc = g.conjugate()
        xi = _probes(rng, n)
        for side in Side:
            lhs = np.conj(_quad(g, g, p, side, xi))
            out.append(Residual.compare(lhs, _quad(gc, gc, p, side, -xi)))
            out.append(Residual.compare(lhs, _quad(gc, gc, neg, side, xi)))
    return _worst(out)


_INVARIANT_KINDS = (("symmetric", 2), ("positive", 2), ("skew", 2), ("symmetric", 3), ("general", 2))


def _run_ginvft(inp, rng):
    inverse = bool(inp["inverse"])
    out = []
    for kind, n in _INVARIANT_KINDS:
        p = _pair(rng, n, kind)
        A = sample_group_element(p, int(rng.integers(2**31)), scale=0.8)
        g = random_gaussian(rng, n)
        moved = tau_action(g, A)
        xi = _probes(rng, n)
        closed = (gaussian_inverse_geometric_ft if inverse else gaussian_geometric_ft)
        for side in Side:
            lhs = _quad(moved, moved, p, side, xi, inverse=inverse)
            rhs = closed(g, p, side)(np.linalg.solve(A, xi.T).T)
            out.append(Residual.compare(lhs, rhs, kind=kind, side=side.value))
    return _worst(out)


def _run_ginvft_invariant(inp, rng):
    """A ``G_b``-invariant Gaussian has ``G_b``-invariant transforms."""
    out = []
    for n in (2, 3):
        p = _pair(rng, n, "positive")
        g = GaussianFunction(0.5 * (p.M + p.M.T))      # exp(-pi b(x, x)) is G_b-invariant
        A = sample_group_element(p, int(rng.integers(2**31)), scale=0.8)
        xi = _probes(rng, n)
        for side in Side:
            for inverse in (False, True):
                lhs = _quad(g, g, p, side, xi, inverse=inverse)
                rhs = _quad(g, g, p, side, np.linalg.solve(A, xi.T).T, inverse=inverse)
                out.append(Residual.compare(lhs, rhs))
    return _worst(out)


# --- L2 identities, convolution, translation laws -----------------------------------


def _closed(g, p, side, inverse=False):
    fn = gaussian_inverse_geometric_ft if inverse else gaussian_geometric_ft
    return fn(g, p, side).as_gaussian()


def _run_l2(inp, rng):
    item = inp["item"]
    out = []
    for n in _dims(inp):
        p = _pair(rng, n)
        f, g = random_gaussian(rng, n), random_gaussian(rng, n)
        d = p.abs_det_b
        for side in Side:
            if item == "i":
                Ff, Fg = _closed(f, p, side), _closed(g, p, side.other)
                lhs = _integral(lambda x: Ff(x) * g(x), Ff.product(g))
                rhs = _integral(lambda x: f(x) * Fg(x), f.product(Fg))
            elif item == "iv":
                Ff, Fg = _closed(f, p, side, True), _closed(g, p, side.other, True)
                lhs = _integral(lambda x: Ff(x) * g(x), Ff.product(g))
                rhs = _integral(lambda x: f(x) * Fg(x), f.product(Fg))
            elif item in ("ii", "v"):
                inverse = item == "v"
                Ff, Fg = _closed(f, p, side, inverse), _closed(g, p, side, inverse)
                lhs = _integral(lambda x: f(x) * np.conj(g(x)), f.product(g.conjugate()))
                scale = 1.0 / d if inverse else d
                rhs = scale * _integral(lambda x: Ff(x) * np.conj(Fg(x)), Ff.product(Fg.conjugate()))
            elif item in ("iii", "vi"):
                inverse = item == "vi"
                Ff = _closed(f, p, side, inverse)
                lhs = _integral(lambda x: np.abs(f(x)) ** 2, f.product(f.conjugate()))
                scale = 1.0 / d if inverse else d
                rhs = scale * _integral(lambda x: np.abs(Ff(x)) ** 2, Ff.product(Ff.conjugate()))
            elif item == "norm":
                Ff = _closed(f, p, side)
                lhs = np.sqrt(_integral(lambda x: np.abs(Ff(x)) ** 2, Ff.product(Ff.conjugate())).real)
                rhs = np.sqrt(f.l2_norm_sq()) / np.sqrt(d)
            else:
                raise ValueError(item)
            out.append(Residual(abs(lhs), abs(rhs), rel_gap(lhs, rhs), {"side": side.value}))
    return _worst(out)


def _shared_grid(*gs: GaussianFunction, n_points: int = 64) -> GridSpec:
    """Zero-centred grid covering every Gaussian in ``gs`` and their convolution."""
    grids = [g.default_grid(n_points, width=7.0) for g in gs]
    half = max(-gr.origin[0] for gr in grids)
    h = min(min(gr.spacing) for gr in grids)
    n = int(np.ceil(2 * half / h))
    n += n % 2
    return GridSpec.symmetric(gs[0].dim, n, half)


def _run_staft(inp, rng):
    item = inp["item"]
    inverse = bool(inp.get("inverse", False))
    out = []
    for n in _dims(inp):
        p = _pair(rng, n)
        f = random_gaussian(rng, n, center_scale=0.3)
        g = random_gaussian(rng, n, center_scale=0.3)
        d = p.abs_det_b
        pts = _probes(rng, n, count=6, scale=0.6)
        for side in Side:
            Ff, Fg = _closed(f, p, side, inverse), _closed(g, p, side, inverse)
            if item == "i":
                # transform of the sampled discrete convolution
                grid = _shared_grid(f, g, f.convolve(g))
                conv = convolve(sample(f, grid), sample(g, grid))
                if inverse:
                    spec = Spectrum(conv.flat, grid.points(), FrequencyLattice.from_grid(grid))
                    lhs = inverse_geometric_ft(spec, p, side, pts)
                    rhs = Ff(pts) * Fg(pts) / d
                else:
                    lhs = dft_direct(conv, kernel_covector(p, side, pts))
                    rhs = Ff(pts) * Fg(pts)
            else:
                prod = f.product(g)
                lhs = _quad(prod, prod, p, side, pts, inverse=inverse)
                rhs = _conv_at(Ff, Fg, Ff.product(Ff.conjugate()), pts)
                if not inverse:
                    rhs = d * rhs
            out.append(Residual.compare(lhs, rhs, side=side.value))
    return _worst(out)


def _run_transf(inp, rng):
    item = inp["item"]
    out = []
    for n in _dims(inp):
        p = _pair(rng, n)
        g = random_gaussian(rng, n)
        h = rng.uniform(-0.7, 0.7, n)
        lam = float(rng.uniform(0.6, 1.8))
        xi = _probes(rng, n)
        FL = gaussian_geometric_ft(g, p, Side.LEFT)
        FR = gaussian_geometric_ft(g, p, Side.RIGHT)
        b = p.b
        if item == "i":
            moved = g.translated(h)
            lhs = _quad(moved, moved, p, Side.LEFT, xi)
            rhs = FL(xi) * np.exp(2j * np.pi * b(xi, h))
        elif item == "ii":
            moved = g.translated(h)
            lhs = _quad(moved, moved, p, Side.RIGHT, xi)
            rhs = FR(xi) * np.exp(2j * np.pi * b(h, xi))
        elif item == "iii":
            moved = g.modulated(-(p.M.T @ h))          # e^{-2 pi i b(h, x)}
            lhs = _quad(moved, moved, p, Side.LEFT, xi)
            rhs = FL(xi + h)
        elif item == "iv":
            moved = g.modulated(-(p.M @ h))            # e^{-2 pi i b(x, h)}
            lhs = _quad(moved, moved, p, Side.RIGHT, xi)
            rhs = FR(xi + h)
        elif item == "v":
            moved = g.dilated(lam)
            res = []
            for side, F in ((Side.LEFT, FL), (Side.RIGHT, FR)):
                lhs = _quad(moved, moved, p, side, xi)
                res.append(Residual.compare(lhs, lam ** (-n) * F(xi / lam)))
            out.append(_worst(res))
            continue
        else:
            raise ValueError(item)
        out.append(Residual.compare(lhs, rhs))
    return _worst(out)


def _run_transf_inverse(inp, rng):
    item = inp["item"]
    out = []
    for n in _dims(inp):
        p = _pair(rng, n)
        g = random_gaussian(rng, n)
        h = rng.uniform(-0.7, 0.7, n)
        lam = float(rng.uniform(0.6, 1.8))
        x = _probes(rng, n)
        IL = gaussian_inverse_geometric_ft(g, p, Side.LEFT)
        IR = gaussian_inverse_geometric_ft(g, p, Side.RIGHT)
        b = p.b
        if item == "i":
            moved = g.translated(h)
            lhs = _quad(moved, moved, p, Side.RIGHT, x, inverse=True)
            rhs = IR(x) * np.exp(-2j * np.pi * b(x, h))
        elif item == "ii":
            moved = g.translated(h)
            lhs = _quad(moved, moved, p, Side.LEFT, x, inverse=True)
            rhs = IL(x) * np.exp(-2j * np.pi * b(h, x))
        elif item == "iii":
            moved = g.modulated(p.M.T @ h)             # e^{2 pi i b(h, xi)}
            lhs = _quad(moved, moved, p, Side.RIGHT, x, inverse=True)
            rhs = IR(x + h)
        elif item == "iv":
            moved = g.modulated(p.M @ h)               # e^{2 pi i b(xi, h)}
            lhs = _quad(moved, moved, p, Side.LEFT, x, inverse=True)
            rhs = IL(x + h)
        elif item == "v":
            moved = g.dilated(lam)
            res = []
            for side, I in ((Side.LEFT, IL), (Side.RIGHT, IR)):
                lhs = _quad(moved, moved, p, side, x, inverse=True)
                res.append(Residual.compare(lhs, lam ** (-n) * I(x / lam)))
            out.append(_worst(res))
            continue
        else:
            raise ValueError(item)
        out.append(Residual.compare(lhs, rhs))
    return _worst(out)


# --- calculus -----------------------------------------------------------------------------

_SIMPOR = {
    "i": (Side.LEFT, Direction.TRANSFORM_OF_DERIVATIVE, False),
    "ii": (Side.RIGHT, Direction.TRANSFORM_OF_DERIVATIVE, False),
    "iii": (Side.LEFT, Direction.TRANSFORM_OF_DERIVATIVE, True),
    "iv": (Side.RIGHT, Direction.TRANSFORM_OF_DERIVATIVE, True),
    "v": (Side.LEFT, Direction.DERIVATIVE_OF_TRANSFORM, False),
    "vi": (Side.RIGHT, Direction.DERIVATIVE_OF_TRANSFORM, False),
    "vii": (Side.LEFT, Direction.DERIVATIVE_OF_TRANSFORM, True),
    "viii": (Side.RIGHT, Direction.DERIVATIVE_OF_TRANSFORM, True),
}


def _run_simpor(inp, rng):
    side, direction, inverse = _SIMPOR[inp["item"]]
    out = []
    for n in _dims(inp):
        p = _pair(rng, n)
        g = random_gaussian(rng, n)
        probes = _probes(rng, n)
        for axis in range(n):
            for order in (1, 2):
                out.append(derivative_transform_identity(g, p, side, direction, axis, order, probes, inverse))
    return _worst(out)


def _random_field(rng, n: int, N: int = 32, kmax: int = 4, real: bool = False, widen: bool = True) -> SampledField:
    grid = GridSpec.torus(n, 4 * N if n == 1 and widen else N, 1.0)
    return sample(TrigPolynomial.random(rng, n, kmax, 1.0, real=real), grid)


def _run_eigen(inp, rng):
    orientation = inp["orientation"]
    out = []
    for kind in ("general", "symmetric", "skew"):
        p = _pair(rng, 2, kind)
        k = rng.integers(-3, 4, 2).astype(float)
        # the wave is grid periodic when the covector M xi (or M^T xi) is integral
        xi = p.B @ k if orientation == "x_first" else p.B.T @ k
        for sign in (1, -1):
            r = plane_wave_eigencheck(p, xi, orientation, sign)
            scale = max(1.0, r.rhs)
            out.append(Residual(r.lhs, r.rhs, r.residual / scale, {"kind": kind, "sign": sign}))
    return _worst(out)


def _run_mlap_periodic(inp, rng):
    inverse = bool(inp["inverse"])
    out = []
    for n in _dims(inp):
        for kind in ("general", "symmetric"):
            p = _pair(rng, n, kind)
            # roundoff in the inverse variant is amplified by b(x, x)^m at the lattice edge,
            # so the 1-d grid is kept as small as the band limit allows
            f = _random_field(rng, n, N=24, kmax=3, widen=False)
            for m in (1, 2):
                for side in Side:
                    out.append(laplacian_transform_identity(f, p, m, side, inverse=inverse))
    return _worst(out)


def _run_mlap_quadrature(inp, rng):
    out = []
    for n in _dims(inp):
        p = _pair(rng, n)
        g = random_gaussian(rng, n)
        probes = _probes(rng, n)
        for m in (0, 1, 2):
            for side in Side:
                for inverse in (False, True):
                    out.append(laplacian_transform_identity(g, p, m, side, inverse, probes))
    return _worst(out)


def _run_mlap_group(inp, rng):
    """``(F^{L/R}_b)^{+-1}[Delta_b^m (tau_A f)] = [-4 pi^2 b]^m tau_A[(F^{L/R}_b)^{+-1} f]``."""
    out = []
    for kind, n in (("symmetric", 2), ("positive", 2)):
        p = _pair(rng, n, kind)
        A = sample_group_element(p, int(rng.integers(2**31)), scale=0.8)
        g = random_gaussian(rng, n)
        moved = tau_action(g, A)
        xi = _probes(rng, n)
        for m in (1, 2):
            lap = PolyGaussian.from_gaussian(moved).b_laplacian(p.B, m)
            grid = _probe_grid(moved, p, xi)
            samples = lap(grid.points())
            for side in Side:
                for inverse in (False, True):
                    closed = (gaussian_inverse_geometric_ft if inverse else gaussian_geometric_ft)(g, p, side)
                    lhs = quadrature_transform(lambda _: samples, grid, p, side, xi, inverse)
                    rhs = (-4 * np.pi**2 * p.quadratic(xi)) ** m * closed(np.linalg.solve(A, xi.T).T)
                    out.append(Residual.compare(lhs, rhs, m=m))
    return _worst(out)


def _run_rtr(inp, rng):
    out = []
    for n in _dims(inp):
        p = _pair(rng, n)
        g = random_gaussian(rng, n)
        for m in (0, 1):
            for side in Side:
                out.append(sobolev_norm_identity(g, p, m, side))
    return _worst(out)


def _run_timpor(inp, rng):
    out = []
    # skew b is left out: both sides vanish identically there (see deltab.skew)
    for kind, n in (("symmetric", 2), ("positive", 2), ("symmetric", 3), ("positive", 3)):
        p = _pair(rng, n, kind)
        A = sample_group_element(p, int(rng.integers(2**31)), scale=0.8)
        g = random_gaussian(rng, n)
        grid = GridSpec.symmetric(n, 12, 2.0) if n >= 3 else None
        for m in (1, 2):
            out.append(laplacian_equivariance(g, p, A, m, grid))
    return _worst(out)


def _run_skew_annihilation(inp, rng):
    out = []
    for n in (2, 4):
        p = _pair(rng, n, "skew")
        for _ in range(3):
            f = _random_field(rng, n, N=16 if n == 2 else 8, kmax=3 if n == 2 else 2)
            lap = b_laplacian(f, p)
            out.append(Residual(float(np.max(np.abs(lap.flat))), 0.0, float(np.max(np.abs(lap.flat)))))
    return _worst(out)


def _run_gradients(inp, rng):
    """``grad^L = B^T B^{-1} grad^R`` and ``div grad^L = div grad^R = Delta_b``."""
    out = []
    for n in _dims(inp):
        p = _pair(rng, n)
        f = _random_field(rng, n, N=24, kmax=3)
        gl = gradient(f, p, Side.LEFT)
        gr = gradient(f, p, Side.RIGHT)
        S = p.B.T @ p.M
        stacked_r = np.stack([g.flat for g in gr])
        out.append(Residual.compare(np.stack([g.flat for g in gl]), S @ stacked_r))
        div_l = sum(partial_derivative(g, k).flat for k, g in enumerate(gl))
        div_r = sum(partial_derivative(g, k).flat for k, g in enumerate(gr))
        lap = b_laplacian(f, p).flat
        out += [Residual.compare(div_l, div_r), Residual.compare(div_l, lap)]
    return _worst(out)


# --- Poisson summation ---------------------------------------------------------------------


def _run_poisson(inp, rng):
    form = PoissonForm(inp["form"])
    out = []
    for i in range(inp["cases"]):
        n = 1 + i % 2
        G = random_structure(rng, n).M
        g = random_gaussian(rng, n)
        x = rng.uniform(-1, 1, n)
        rep = poisson_check(g, Lattice(G), x, form)
        out.append(Residual(abs(rep.lhs), abs(rep.rhs), rep.abs_gap, {"radii": rep.radii}))
    return _worst(out)


# --- fractional Laplacian ---------------------------------------------------------------------


def _frac_case(rng, n: int, s: float, real: bool = False):
    p = _pair(rng, n, "positive")
    return FracParams(s, p), _random_field(rng, n, N=24, kmax=4, real=real)


def _run_frac_paths(inp, rng):
    pairs = inp["pairs"]
    out = []
    for i in range(inp["cases"]):
        n = 1 + i % 2
        params, f = _frac_case(rng, n, (0.25, 0.5, 0.75)[i % 3], real=bool(i % 2))
        outs = {path: frac_laplacian(f, params, path).flat for path in ("left", "right", "classical")}
        for a, b in pairs:
            out.append(Residual.compare(outs[a], outs[b], paths=f"{a}-{b}"))
    return _worst(out)


def _run_frac_property(inp, rng):
    check = inp["check"]
    out = []
    for i in range(inp.get("cases", 4)):
        n = 1 + i % 2
        s = (0.3, 0.45, 0.6, 0.25)[i % 4]
        params, f = _frac_case(rng, n, s, real=check in ("integration_by_parts", "psd"))
        g = _random_field(rng, n, N=24, kmax=4, real=check == "integration_by_parts")
        kw = {}
        if check == "semigroup":
            kw["t"] = min(0.4, 0.95 - s)
        elif check == "derivative_commute":
            kw.update(axis=i % n, order=1 + i % 2)
        elif check == "translation":
            kw["h"] = f.grid.spacing[0] * rng.integers(1, 6, n)
        elif check == "scaling":
            kw["lam"] = 2.0 + i % 2
            f = _random_field(rng, n, N=24, kmax=3)
        for path in ("left", "right", "classical"):
            out.append(frac_property_check(check, params, f, g, path=path, **kw))
    return _worst(out)


def _run_frac_equivariance(inp, rng):
    out = []
    for n in (1, 2):
        p = _pair(rng, n, "positive")
        params = FracParams(0.4, p)
        A = sample_group_element(p, int(rng.integers(2**31)), scale=0.8)
        g = random_gaussian(rng, n)
        out.append(frac_property_check("equivariance", params, g, A=A, points=_probes(rng, n, count=6)))
    return _worst(out)


def _run_frac_homogeneity(inp, rng):
    out = []
    for n in (1, 2, 3):
        params = FracParams(float(rng.uniform(0.1, 0.9)), _pair(rng, n, "positive"))
        xi = rng.standard_normal((8, n))
        for lam in (0.5, 2.0, 3.0):
            out.append(Residual.compare(multiplier(params, lam * xi), lam ** (2 * params.s) * multiplier(params, xi)))
    return _worst(out)


def _run_frac_integer(inp, rng):
    """Two half powers compose to ``-Delta_b``, matching the integer multiplier ``4 pi^2 b(xi, xi)``."""
    out = []
    for n in (1, 2):
        params, f = _frac_case(rng, n, 0.5)
        twice = frac_laplacian(frac_laplacian(f, params), params)
        out.append(Residual.compare(twice.flat, -b_laplacian(f, params.pair).flat))
    return _worst(out)


# --- registration ------------------------------------------------------------------------------

A, Q, P = Backend.ANALYTIC, Backend.QUADRATURE, Backend.PERIODIC

_register("pair.relb", r"\langle x, y\rangle = b(x, B y),\ \det b = (\det B)^{-1}", TOL_EXACT, A, _run_relb, cases=50)
_register("pair.opposite", r"(b^{op}, B^{\top}),\ \det b^{op} = \det b", TOL_EXACT, A, _run_opposite)
_register("pair.adjoint", r"A^{\star_L} = B^{\top} A^{\top} B^{-\top},\ A^{\star_R} = B A^{\top} B^{-1}", 1e-10, A,
          _run_adjoint)
_register("pair.group", r"A B A^{\top} = B", 1e-10, A, _run_group)
_register("pair.lie", r"X B = -B X^{\top} \Rightarrow \exp(tX) \in G_b", 1e-9, A, _run_lie)

_register("spectral.oracle", r"\mathcal{F}^{L}_{b} = \tau_{B^{\top}}\circ\mathcal{F}\ \text{(FFT on } B^{\top}\zeta)",
          1e-10, Q, _run_fft_oracle, cases=20)
_register("proplr.left", r"(\mathcal{F}^{L}_{b}f)(\xi)=(\mathcal{F}f)(B^{-\top}\xi)", TOL_QUAD, Q, _run_proplr,
          side="left", cases=3)
_register("proplr.right", r"(\mathcal{F}^{R}_{b}f)(\xi)=(\mathcal{F}f)(B^{-1}\xi)", TOL_QUAD, Q, _run_proplr,
          side="right", cases=3)
_register("teo2.i", r"\mathcal{F}^{L}_{b}=\tau_{B^{\top}}\circ\mathcal{F}", TOL_QUAD, Q, _run_teo2_pullback,
          side="left")
_register("teo2.ii", r"\mathcal{F}^{R}_{b}=\tau_{B}\circ\mathcal{F}", TOL_QUAD, Q, _run_teo2_pullback, side="right")
_register("teo2.iii", r"\mathcal{F}^{R}_{b}=\tau_{BB^{-\top}}\circ\mathcal{F}^{L}_{b}", 1e-9, Q, _run_teo2_iii)
_register("teo2.iv", r"(\mathcal{F}^{L/R}_{b})^{-1}\circ\mathcal{F}^{L/R}_{b} = \mathrm{Id}", TOL_QUAD, Q,
          _run_roundtrip)
_register("teo2.v", r"(\mathcal{F}^{L}_{b})^{-1}=\mathcal{F}\circ\tau_{-B^{-\top}}=|\det b|\cdot(\tau_{-B}\circ"
          r"\mathcal{F})=\tau_{B^{-\top}}\circ\mathcal{F}^{L}_{b} \circ\tau_{-B^{-\top}}=|\det b|\cdot "
          r"(\tau_{-I_{d}}\circ\mathcal{F}^{R}_{b})", 1e-9, Q, _run_inverse_chain, side="left")
_register("teo2.vi", r"(\mathcal{F}^{R}_{b})^{-1}=\mathcal{F}\circ\tau_{-B^{-1}}=|\det b|\cdot(\tau_{-B^{\top}}\circ"
          r"\mathcal{F})=\tau_{B^{-1}}\circ\mathcal{F}^{R}_{b} \circ\tau_{-B^{-1}}=|\det b|\cdot "
          r"(\tau_{-I_{d}}\circ\mathcal{F}^{L}_{b})", 1e-9, Q, _run_inverse_chain, side="right")
_register("teo2.vii", r"\mathcal{F}^{L/R}_{-b}=\tau_{-I_{d}}\circ\mathcal{F}^{L/R}_{b}=\dfrac{1}{|\det b|}\cdot "
          r"(\mathcal{F}^{R/L}_{b})^{-1}", 1e-9, Q, _run_teo2_vii)
_register("invftt", r"[(\mathcal{F}^{L}_{b})^{-1} f](\mathbf{x})=|\det b|\cdot\int e^{2\pi i b(\xi,\mathbf{x})}"
          r"f(\xi)\mathrm{d}\xi", TOL_QUAD, Q, _run_invftt)
_register("fop.i", r"\mathcal{F}^{L}_{b}=\mathcal{F}^{R}_{b^{op}}", TOL_EXACT, Q, _run_fop_i)
_register("fop.ii", r"\mathcal{F}^{L}_{b}=\mathcal{F}^{R}_{b}\ \text{for symmetric } b", 1e-10, Q, _run_fop_ii)
_register("fop.iii", r"\mathcal{F}^{L}_{b}=\mathcal{F}^{R}_{-b}\ \text{for skew } b", TOL_EXACT, Q, _run_skew_pair)
_register("symmetry.i", r"\mathcal{F}^{L}_{b}=\mathcal{F}^{R}_{b} \Leftarrow b^{op}=b", 1e-10, Q,
          _run_symmetric_only)
_register("symmetry.i_witness", r"\mathcal{F}^{L}_{b}=\mathcal{F}^{R}_{b} \Rightarrow b^{op}=b", 1.0, Q,
          _run_symmetry_witness)
_register("symmetry.ii", r"\mathcal{F}^{L/R}_{b}=\dfrac{1}{|\det b|}\cdot(\mathcal{F}^{L/R}_{b})^{-1}", 1e-10, Q,
          _run_skew_self_inverse)
_register("symmetry.ii_witness", r"\mathcal{F}^{L}_{b}=\dfrac{1}{|\det b|}(\mathcal{F}^{L}_{b})^{-1} \Rightarrow "
          r"b^{op}=-b", 1.0, Q, _run_skew_witness)
_register("symmetry.iii", r"\mathcal{F}^{L/R}_{b}=\mathcal{F}^{R/L}_{-b}", TOL_EXACT, Q, _run_skew_pair, wide=True)
_register("complex", r"\overline{\mathcal{F}^{L/R}_{b}f}=(\tau_{-I_{d}}\circ\mathcal{F}^{L/R}_{b})(\overline{f})="
          r"\mathcal{F}^{L/R}_{-b} \overline{f}", 1e-9, Q, _run_complex)
_register("ginvft.forward", r"\mathcal{F}^{L/R}_{b}\circ\tau_{A}=\tau_{A}\circ\mathcal{F}^{L/R}_{b}", TOL_QUAD, Q,
          _run_ginvft, inverse=False)
_register("ginvft.inverse", r"(\mathcal{F}^{L/R}_{b})^{-1}\circ\tau_{A}=\tau_{A}\circ(\mathcal{F}^{L/R}_{b})^{-1}",
          TOL_QUAD, Q, _run_ginvft, inverse=True)
_register("ginvft.invariant", r"\tau_A f = f \Rightarrow \tau_A (\mathcal{F}^{L/R}_{b})^{\pm 1} f = "
          r"(\mathcal{F}^{L/R}_{b})^{\pm 1} f", TOL_QUAD, Q, _run_ginvft_invariant)

_L2 = {
    "i": r"\langle \mathcal{F}^{L/R}_{b}f,g\rangle=\langle f,\mathcal{F}^{R/L}_{b}g \rangle",
    "ii": r"(f,g)=|\det b|\cdot (\mathcal{F}^{L/R}_{b}f,\mathcal{F}^{L/R}_{b}g)",
    "iii": r"\int|f|^{2}=|\det b|\cdot\int|\mathcal{F}^{L/R}_{b}f|^{2}",
    "iv": r"\langle (\mathcal{F}^{L/R}_{b})^{-1}f,g\rangle=\langle f,(\mathcal{F}^{R/L}_{b})^{-1}g \rangle",
    "v": r"(f,g)=|\det b|^{-1}\cdot ((\mathcal{F}^{L/R}_{b})^{-1}f,(\mathcal{F}^{L/R}_{b})^{-1}g)",
    "vi": r"\int|f|^{2}=|\det b|^{-1}\cdot\int|(\mathcal{F}^{L/R}_{b})^{-1}f|^{2}",
    "norm": r"\|\mathcal{F}^{L/R}_{b}f\|=\dfrac{1}{\sqrt{|\det b|}}\cdot\|f\|",
}
for _item, _anchor in _L2.items():
    _register(f"L2.{_item}", _anchor, 1e-7, Q, _run_l2, item=_item)

_register("staFT.i", r"\mathcal{F}^{L/R}_{b}(f\star g)=\mathcal{F}^{L/R}_{b}f \cdot \mathcal{F}^{L/R}_{b}g",
          TOL_DOUBLE, Q, _run_staft, item="i")
_register("staFT.ii", r"\mathcal{F}^{L/R}_{b}(f\cdot g)=|\det b|\cdot(\mathcal{F}^{L/R}_{b}f \star "
          r"\mathcal{F}^{L/R}_{b}g)", TOL_DOUBLE, Q, _run_staft, item="ii")
_register("staFTI.i", r"(\mathcal{F}^{L/R}_{b})^{-1}(f\star g)=|\det b|^{-1}\cdot (\mathcal{F}^{L/R}_{b})^{-1}f "
          r"\cdot (\mathcal{F}^{L/R}_{b})^{-1}g", TOL_DOUBLE, Q, _run_staft, item="i", inverse=True)
_register("staFTI.ii", r"(\mathcal{F}^{L/R}_{b})^{-1}(f\cdot g)=(\mathcal{F}^{L/R}_{b})^{-1}f \star "
          r"(\mathcal{F}^{L/R}_{b})^{-1}g", TOL_DOUBLE, Q, _run_staft, item="ii", inverse=True)

_TRANSF = {
    "i": r"[\mathcal{F}^{L}_{b}f(\cdot+\mathbf{h})](\xi)=(\mathcal{F}^{L}_{b}f) (\xi) e^{2\pi i b(\xi,\mathbf{h})}",
    "ii": r"[\mathcal{F}^{R}_{b}f(\cdot+\mathbf{h})](\xi)=(\mathcal{F}^{R}_{b}f) (\xi) e^{2\pi i b(\mathbf{h},\xi)}",
    "iii": r"[\mathcal{F}^{L}_{b}(f(\cdot) e^{-2\pi i b(\mathbf{h},\cdot)})](\xi)=(\mathcal{F}^{L}_{b}f) "
           r"(\xi+\mathbf{h})",
    "iv": r"[\mathcal{F}^{R}_{b}(f(\cdot) e^{-2\pi i b(\cdot,\mathbf{h})})](\xi)=(\mathcal{F}^{R}_{b}f) "
          r"(\xi+\mathbf{h})",
    "v": r"[\mathcal{F}^{L/R}_{b}(\delta_{\lambda}f)](\xi)=\lambda^{-n}(\mathcal{F}^{L/R}_{b}f)(\lambda^{-1}\xi)",
}
_TRANSF_INV = {
    "i": r"[(\mathcal{F}^{R}_{b})^{-1}f(\cdot+\mathbf{h})](\mathbf{x})=[(\mathcal{F}^{R}_{b})^{-1}f] (\mathbf{x}) "
         r"e^{-2\pi i b(\mathbf{x},\mathbf{h})}",
    "ii": r"[(\mathcal{F}^{L}_{b})^{-1}f(\cdot+\mathbf{h})](\mathbf{x})=[(\mathcal{F}^{L}_{b})^{-1}f] (\mathbf{x}) "
          r"e^{-2\pi i b(\mathbf{h},\mathbf{x})}",
    "iii": r"[(\mathcal{F}^{R}_{b})^{-1}(f(\cdot) e^{2\pi i b(\mathbf{h},\cdot)})](\mathbf{x})="
           r"[(\mathcal{F}^{R}_{b})^{-1}f] (\mathbf{x}+\mathbf{h})",
    "iv": r"[(\mathcal{F}^{L}_{b})^{-1}(f(\cdot) e^{2\pi i b(\cdot,\mathbf{h})})](\mathbf{x})="
          r"[(\mathcal{F}^{L}_{b})^{-1}f] (\mathbf{x}+\mathbf{h})",
    "v": r"[(\mathcal{F}^{L/R}_{b})^{-1}(\delta_{\lambda}f)](\mathbf{x})=\lambda^{-n}[(\mathcal{F}^{L/R}_{b})^{-1}f]"
         r"(\lambda^{-1}\mathbf{x})",
}
for _item, _anchor in _TRANSF.items():
    _register(f"transF.{_item}", _anchor, TOL_QUAD, Q, _run_transf, item=_item)
for _item, _anchor in _TRANSF_INV.items():
    _register(f"transF.cor.{_item}", _anchor, TOL_QUAD, Q, _run_transf_inverse, item=_item)

_SIMPOR_ANCHORS = {
    "i": r"\mathcal{F}^{L}_{b}(\partial^{\alpha}_{j}f)=(2\pi i\cdot\tau_{B^{\top}}\pi_{j})^{\alpha}\cdot"
         r"\mathcal{F}^{L}_{b}f",
    "ii": r"\mathcal{F}^{R}_{b}(\partial^{\alpha}_{j}f)=(2\pi i\cdot\tau_{B}\pi_{j})^{\alpha}\cdot\mathcal{F}^{R}_{b}f",
    "iii": r"(\mathcal{F}^{L}_{b})^{-1}(\partial^{\alpha}_{j}f)=(- 2\pi i\cdot\tau_{B}\pi_{j})^{\alpha}\cdot"
           r"(\mathcal{F}^{L}_{b})^{-1}f",
    "iv": r"(\mathcal{F}^{R}_{b})^{-1}(\partial^{\alpha}_{j}f)=(- 2\pi i\cdot\tau_{B^{\top}}\pi_{j})^{\alpha}\cdot"
          r"(\mathcal{F}^{R}_{b})^{-1}f",
    "v": r"\partial^{\alpha}_{j}\mathcal{F}^{L}_{b}f=(-2\pi i)^{\alpha}\cdot\mathcal{F}^{L}_{b}((\tau_{B}\pi_j)^{\alpha}"
         r"\cdot f)",
    "vi": r"\partial^{\alpha}_{j}\mathcal{F}^{R}_{b}f=(-2\pi i)^{\alpha}\cdot\mathcal{F}^{R}_{b}((\tau_{B^{\top}}"
          r"\pi_j)^{\alpha}\cdot f)",
    "vii": r"\partial^{\alpha}_{j}(\mathcal{F}^{L}_{b})^{-1}f=(2\pi i)^{\alpha}\cdot(\mathcal{F}^{L}_{b})^{-1}"
           r"((\tau_{B^{\top}}\pi_j)^{\alpha}\cdot f)",
    "viii": r"\partial^{\alpha}_{j}(\mathcal{F}^{R}_{b})^{-1}f=(2\pi i)^{\alpha}\cdot(\mathcal{F}^{R}_{b})^{-1}"
            r"((\tau_{B}\pi_j)^{\alpha}\cdot f)",
}
for _item, _anchor in _SIMPOR_ANCHORS.items():
    _register(f"simpor.{_item}", _anchor, TOL_QUAD, Q, _run_simpor, item=_item)

_register("eigen.i", r"\Delta_{b}e^{\pm 2\pi i b(\mathbf{x},\xi)}=[-4\pi^{2} b(\xi,\xi)]\cdot "
          r"e^{\pm 2\pi i b(\mathbf{x},\xi)}", 1e-10, P, _run_eigen, orientation="x_first")
_register("eigen.ii", r"\Delta_{b}e^{\pm 2\pi i b(\mathbf{\xi},\mathbf{x})}=[-4\pi^{2} b(\xi,\xi)]\cdot "
          r"e^{\pm 2\pi i b(\mathbf{\xi},\mathbf{x})}", 1e-10, P, _run_eigen, orientation="xi_first")
_register("mLap.i", r"[\mathcal{F}^{L/R}_{b}(\Delta_{b}^{m}f)](\xi)=[-4\pi^{2} b(\xi,\xi)]^{m} "
          r"(\mathcal{F}^{L/R}_{b} f)(\xi)", 1e-10, P, _run_mlap_periodic, inverse=False)
_register("mLap.ii", r"[(\mathcal{F}^{L/R}_{b})^{-1}(\Delta_{b}^{m}f)](\mathbf{x})=[-4\pi^{2} "
          r"b(\mathbf{x},\mathbf{x})]^{m} [(\mathcal{F}^{L/R}_{b})^{-1}f](\mathbf{x})", 1e-10, P, _run_mlap_periodic,
          inverse=True)
_register("mLap.quadrature", r"[\mathcal{F}^{L/R}_{b}(\Delta_{b}^{m}f)](\xi)=[-4\pi^{2} b(\xi,\xi)]^{m} "
          r"(\mathcal{F}^{L/R}_{b} f)(\xi)", TOL_QUAD, Q, _run_mlap_quadrature)
_register("mLap.group", r"(\mathcal{F}^{L/R}_{b})^{\pm 1}[\Delta_{b}^{m}(\tau_{A}f)]=[-4\pi^{2} b(\cdot,\cdot)]^{m} "
          r"\tau_{A}[(\mathcal{F}^{L/R}_{b})^{\pm 1}f]", TOL_QUAD, Q, _run_mlap_group)
_register("RTR", r"\int|\Delta_{b}^{m}f|^{2}=(2\pi)^{4m}|\det b|\int b(\xi,\xi)^{2m} |\mathcal{F}^{L/R}_{b}f|^{2}",
          TOL_DOUBLE, Q, _run_rtr)
_register("timpor", r"\Delta_{b}^{m}(\tau_{A} f)=\tau_{A}(\Delta_{b}^{m}f)", 1e-7, Q, _run_timpor)
_register("deltab.skew", r"\Delta_{b}f\equiv 0\ \text{for skew } b", 1e-10, P, _run_skew_annihilation)
_register("deltab.gradients", r"\nabla^{L}_{b}f=B^{\top}B^{-1}\nabla^{R}_{b}f,\ \operatorname{div}\nabla^{L}_{b} f="
          r"\operatorname{div}\nabla^{R}_{b} f=\sum b_{kl}\partial_k\partial_l f", 1e-10, P, _run_gradients)

_POISSON = {
    "Classical": r"\sum_{\mathcal{L}}f(\mathbf{n}+\mathbf{x})=\dfrac{1}{\det\mathcal{L}}\sum_{\mathcal{L}^{\star}}"
                 r"(\mathcal{F}f)(\mathbf{m}) e^{2\pi i\langle\mathbf{x},\mathbf{m}\rangle}",
    "LeftB": r"\sum_{\mathcal{L}}f(\mathbf{n}+\mathbf{x})=|\det b|\sum_{\mathbb{Z}^{n}}(\mathcal{F}^{L}_{b}f)(\xi) "
             r"e^{2\pi i b(\xi,\mathbf{x})}",
    "RightOpposite": r"\sum_{\mathcal{L}}f(\mathbf{n}+\mathbf{x})=|\det b^{op}|\sum_{\mathbb{Z}^{n}}"
                     r"(\mathcal{F}^{R}_{b^{op}}f)(\xi) e^{2\pi i b^{op}(\mathbf{x},\xi)}",
    "LatticeLeft": r"\sum_{B(\mathbb{Z}^{n})}f(\mathbf{n}+\mathbf{x})=|\det b|\sum_{\mathbb{Z}^{n}}"
                   r"(\mathcal{F}^{L}_{b}f)(\xi) e^{2\pi i b(\xi,\mathbf{x})}",
    "LatticeRight": r"\sum_{B^{\top}(\mathbb{Z}^{n})}f(\mathbf{n}+\mathbf{x})=|\det b|\sum_{\mathbb{Z}^{n}}"
                    r"(\mathcal{F}^{R}_{b}f)(\xi) e^{2\pi i b(\mathbf{x},\xi)}",
    "InverseRight": r"\sum_{B(\mathbb{Z}^{n})}f(\mathbf{n}+\mathbf{x})=\sum_{\mathbb{Z}^{n}}"
                    r"((\mathcal{F}^{R}_{b})^{-1}f)(\mathbf{k}) e^{-2\pi i b(\mathbf{k},\mathbf{x})}",
    "InverseLeft": r"\sum_{B^{\top}(\mathbb{Z}^{n})}f(\mathbf{n}+\mathbf{x})=\sum_{\mathbb{Z}^{n}}"
                   r"((\mathcal{F}^{L}_{b})^{-1}f)(\mathbf{k}) e^{-2\pi i b(\mathbf{x},\mathbf{k})}",
    "InverseOpposite": r"\sum_{B(\mathbb{Z}^{n})}f(\mathbf{n}+\mathbf{x})=\sum_{\mathbb{Z}^{n}}"
                       r"((\mathcal{F}^{L}_{b^{op}})^{-1}f)(\mathbf{k}) e^{-2\pi i b^{op}(\mathbf{x},\mathbf{k})}",
}
for _form, _anchor in _POISSON.items():
    _register(f"poisson.{_form}", _anchor, 1e-10, A, _run_poisson, form=_form, cases=20)

_register("frac.leqr", r"(-\Delta_{b})_{L}^{s}=(-\Delta_{b})_{R}^{s}", TOL_EXACT, P, _run_frac_paths,
          pairs=(("left", "right"),), cases=20)
_register("frac.clasfl", r"[(-\Delta_{b})^{s}f](\mathbf{x})=(4\pi^2)^{s}\int e^{2\pi i\langle \mathbf{x},\zeta "
          r"\rangle}\langle\zeta,B\zeta\rangle^{s}(\mathcal{F}f)(\zeta)\mathrm{d}\zeta", TOL_EXACT, P, _run_frac_paths,
          pairs=(("left", "classical"), ("right", "classical")), cases=20)
_FRAC = {
    "linearity": (r"(-\Delta_{b})^{s}(\mu f+\nu g)=\mu~(-\Delta_{b})^{s}f+\nu~(-\Delta_{b})^{s}g", 1e-13),
    "semigroup": (r"(-\Delta_{b})^{s}((-\Delta_{b})^{t}f)=(-\Delta_{b})^{t}((-\Delta_{b})^{s}f)="
                  r"(-\Delta_{b})^{t+s}f", TOL_EXACT),
    "derivative_commute": (r"D^{\alpha}((-\Delta_{b})^{s}f)=(-\Delta_{b})^{s}(D^{\alpha}f)", TOL_EXACT),
    "translation": (r"(-\Delta_{b})^{s}(T_{\mathbf{h}}f)=T_{\mathbf{h}}((-\Delta_{b})^{s}f)", TOL_EXACT),
    "scaling": (r"(-\Delta_{b})^{s}(\delta_{\lambda}f)=\lambda^{2s}\delta_{\lambda}((-\Delta_{b})^{s}f)", TOL_EXACT),
    "integration_by_parts": (r"\int((-\Delta_{b})^{s}f) g=\int f((-\Delta_{b})^{s}g)", 1e-11),
    "l2_norm": (r"\int|(-\Delta_{b})^{s}f|^{2}=(2\pi)^{4s} \det b \int b(\xi,\xi)^{2s} "
                r"|\mathcal{F}^{L/R}_{b}f|^{2}", TOL_QUAD),
    "psd": (r"\langle(-\Delta_{b})^{s}f, \overline{f}\rangle \geq 0", TOL_EXACT),
}
for _name, (_anchor, _tol) in _FRAC.items():
    _register(f"frac.{_name}", _anchor, _tol, P, _run_frac_property, check=_name)
_register("frac.equivariance", r"(-\Delta_b)^{s}(\tau_A f)=\tau_{A}((-\Delta_b)^{s}f)", 1e-7, Q,
          _run_frac_equivariance)
_register("frac.homogeneity", r"g^{s}_{b}(\xi)=\lambda^{2s} g^{s}_{b}(\xi/\lambda)", 1e-13, A, _run_frac_homogeneity)
_register("frac.integer", r"(-\Delta_b)^{1/2}(-\Delta_b)^{1/2} f = -\Delta_b f", TOL_EXACT, P, _run_frac_integer)

del A, Q, P


# --- engine ------------------------------------------------------------------------------------


def get_check(check_id: str) -> CheckSpec:
    try:
        return CATALOG[check_id]
    except KeyError:
        raise UnknownCheck(check_id) from None


def run_check(spec, seed: int = 0) -> CheckReport:
    """Run one catalog entry (``CheckSpec`` or id) and compare against its tolerance."""
    if not isinstance(spec, CheckSpec):
        spec = get_check(spec)
    rng = _rng_for(spec.id, seed)
    start = time.perf_counter()
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", TrivialAlgebraWarning)
            res = spec.runner(spec.inputs, rng)
    except GeoFTError as exc:
        raise PreconditionFailed(spec.id, exc) from exc
    elapsed = 1e3 * (time.perf_counter() - start)
    residual = float(res.residual)
    return CheckReport(spec.id, float(res.lhs), float(res.rhs), residual, spec.tolerance,
                       bool(residual <= spec.tolerance), int(seed), spec.backend.value, elapsed, dict(res.detail))


@dataclass
class SuiteResult:
    reports: list
    summary: dict

    @property
    def ok(self) -> bool:
        return self.summary["failed"] == 0

    def to_json(self, timings: bool = False) -> dict:
        return {"reports": [r.to_json(timings) for r in self.reports], "summary": self.summary}


def select(filters=None) -> list[CheckSpec]:
    """Catalog entries whose id starts with any of ``filters`` (all when empty)."""
    if not filters:
        return list(CATALOG.values())
    return [s for s in CATALOG.values() if any(s.id.startswith(f) for f in filters)]


def run_suite(filters=None, seed: int = 0) -> SuiteResult:
    reports = [run_check(spec, seed) for spec in select(filters)]
    by_prefix: dict[str, dict] = {}
    for r in reports:
        key = r.id.split(".")[0]
        entry = by_prefix.setdefault(key, {"passed": 0, "failed": 0, "max_residual": 0.0})
        entry["passed" if r.passed else "failed"] += 1
        entry["max_residual"] = max(entry["max_residual"], r.residual)
    failed = sum(not r.passed for r in reports)
    summary = {"total": len(reports), "passed": len(reports) - failed, "failed": failed, "seed": int(seed),
               "by_prefix": by_prefix}
    return SuiteResult(reports, summary)
