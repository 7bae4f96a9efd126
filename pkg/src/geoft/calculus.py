"""Gradients, the b-Laplacian and the derivative/transform exchange rules.

Sampled fields are differentiated spectrally on periodic grids and by
fourth-order finite differences on truncated grids. The identity checks use
analytic derivatives of Gaussians (``PolyGaussian``) so that only quadrature
error enters their residuals.
"""
from __future__ import annotations

import enum

import numpy as np
import scipy.fft

from ._numerics import Residual, as_points, as_vector, pairwise_sum, rel_gap, thread_count
from .errors import AxisOutOfRange, DimensionMismatch, IncommensurateWave
from .fields import (GaussianFunction, GridSpec, PolyGaussian, SampledField, b_plane_wave,
                     gaussian_geometric_ft, gaussian_inverse_geometric_ft, sample)
from .forms import GeometricPair, Side
from .spectral import Method, Spectrum, geometric_ft, inverse_geometric_ft, quadrature_transform


class Direction(str, enum.Enum):
    TRANSFORM_OF_DERIVATIVE = "transform_of_derivative"
    DERIVATIVE_OF_TRANSFORM = "derivative_of_transform"


def _wavenumbers(grid: GridSpec) -> list[np.ndarray]:
    """Per-axis DFT frequencies (cycles per unit length) in FFT order."""
    return [scipy.fft.fftfreq(n, h) for n, h in zip(grid.shape, grid.spacing)]


def _spectral_apply(f: SampledField, multiplier: np.ndarray) -> SampledField:
    w = thread_count()
    spec = scipy.fft.fftn(f.values, workers=w)
    return f.with_values(scipy.fft.ifftn(spec * multiplier, workers=w))


# fourth-order first-derivative stencils (times 1/(12 h))
_EDGE0 = np.array([-25.0, 48.0, -36.0, 16.0, -3.0])
_EDGE1 = np.array([-3.0, -10.0, 18.0, -6.0, 1.0])


def _fd_first(values: np.ndarray, axis: int, h: float) -> np.ndarray:
    v = np.moveaxis(values, axis, 0)
    n = v.shape[0]
    if n < 5:
        raise ValueError("finite differences need at least 5 points per axis")
    out = np.empty_like(v)
    out[2:-2] = (v[:-4] - 8 * v[1:-3] + 8 * v[3:-1] - v[4:]) / (12 * h)
    out[0] = np.tensordot(_EDGE0, v[:5], axes=1) / (12 * h)
    out[1] = np.tensordot(_EDGE1, v[:5], axes=1) / (12 * h)
    out[-1] = -np.tensordot(_EDGE0, v[::-1][:5], axes=1) / (12 * h)
    out[-2] = -np.tensordot(_EDGE1, v[::-1][:5], axes=1) / (12 * h)
    return np.moveaxis(out, 0, axis)


def partial_derivative(f: SampledField, axis: int, order: int = 1) -> SampledField:
    """``d^order / dx_axis^order`` of a sampled field.

    Periodic grids use the exact spectral multiplier ``(2 pi i q)^order``
    (the unpaired Nyquist bin is zeroed for odd orders). Truncated grids
    apply a fourth-order difference ``order`` times.
    """
    grid = f.grid
    if not 0 <= axis < grid.dim:
        raise AxisOutOfRange(f"axis {axis} outside 0..{grid.dim - 1}")
    if order < 1:
        raise ValueError("order must be at least 1")
    if grid.periodic:
        q = _wavenumbers(grid)[axis]
        mult = (2j * np.pi * q) ** order
        n = grid.shape[axis]
        if order % 2 and n % 2 == 0:
            mult[n // 2] = 0.0
        shape = [1] * grid.dim
        shape[axis] = n
        return _spectral_apply(f, mult.reshape(shape))
    vals = f.values
    for _ in range(order):
        vals = _fd_first(vals, axis, grid.spacing[axis])
    return f.with_values(vals)


def gradient(f: SampledField, pair: GeometricPair | None = None, side="classical") -> list[SampledField]:
    """Classical gradient, or ``B^T grad f`` (left) / ``B grad f`` (right)."""
    grads = [partial_derivative(f, j).values for j in range(f.grid.dim)]
    side = str(getattr(side, "value", side)).lower()
    if side == "classical":
        return [f.with_values(g) for g in grads]
    if pair is None or pair.dim != f.grid.dim:
        raise DimensionMismatch("gradient needs a structure of the field's dimension")
    S = pair.B.T if Side.coerce(side) is Side.LEFT else pair.B
    stacked = np.stack(grads, axis=0)
    return [f.with_values(v) for v in np.tensordot(S, stacked, axes=1)]


def laplacian_symbol(grid: GridSpec, pair: GeometricPair) -> np.ndarray:
    """``-4 pi^2 <q, B q>`` on the FFT-ordered frequency grid."""
    mesh = np.meshgrid(*_wavenumbers(grid), indexing="ij")
    q = np.stack(mesh, axis=-1)
    return -4 * np.pi**2 * pair.dual_quadratic(q)


def b_laplacian(f: SampledField, pair: GeometricPair, m: int = 1) -> SampledField:
    """``Delta_b^m f`` with ``Delta_b = sum_kl B_kl d_k d_l``; ``m = 0`` is the identity."""
    if m < 0:
        raise ValueError("m must be non-negative")
    if pair.dim != f.grid.dim:
        raise DimensionMismatch("field and structure dimensions differ")
    if m == 0:
        return f
    if f.grid.periodic:
        symbol = laplacian_symbol(f.grid, pair)
        out = f
        for _ in range(m):
            out = _spectral_apply(out, symbol)
        return out
    out = f
    n = pair.dim
    Bs = 0.5 * (pair.B + pair.B.T)
    for _ in range(m):
        acc = np.zeros(f.grid.shape, dtype=complex)
        for k in range(n):
            dk = partial_derivative(out, k)
            for l in range(n):
                if Bs[k, l] != 0:
                    acc += Bs[k, l] * partial_derivative(dk, l).values
        out = f.with_values(acc)
    return out


def plane_wave_eigencheck(pair: GeometricPair, xi, orientation: str = "x_first", sign: int = 1,
                          grid: GridSpec | None = None) -> Residual:
    """``||Delta_b w + 4 pi^2 b(xi, xi) w||_inf`` for ``w = exp(+-2 pi i b(x, xi))`` or ``b(xi, x)``.

    The wave must be periodic on ``grid`` (default: unit torus, 32 points).
    """
    xi = as_vector(xi, pair.dim)
    grid = grid or GridSpec.torus(pair.dim, 32)
    wave = b_plane_wave(pair, xi, orientation, sign)
    cycles = np.asarray(wave.k) * grid.periods
    if np.any(np.abs(cycles - np.round(cycles)) > 1e-9):
        raise IncommensurateWave(f"wave vector {wave.k} is not periodic on the grid")
    if np.any(np.abs(np.round(cycles)) >= np.array(grid.shape) / 2):
        raise IncommensurateWave("wave vector at or beyond the grid Nyquist frequency")
    w = sample(wave, grid.with_mode("periodic"))
    eig = -4 * np.pi**2 * float(pair.b(xi, xi))
    lhs = b_laplacian(w, pair).flat
    rhs = eig * w.flat
    return Residual.compare(lhs, rhs, relative=False, eigenvalue=eig)


def _probe_grid(g: GaussianFunction, pair: GeometricPair, probes: np.ndarray,
                width: float = 10.0) -> GridSpec:
    """Quadrature grid resolving every kernel frequency the probes can produce."""
    reach = max(float(np.max(np.abs(probes @ pair.M))), float(np.max(np.abs(probes @ pair.M.T))))
    return g.default_grid(width=width, max_freq=reach)


def _polynomial_row(pair: GeometricPair, side: Side, direction: Direction, inverse: bool, j: int):
    """Row ``r`` with the exchanged factor equal to ``<r, point>``."""
    M = pair.M
    left = side is Side.LEFT
    if direction is Direction.TRANSFORM_OF_DERIVATIVE:
        # tau_{B^T} pi_j (xi) = (M^T xi)_j ;  tau_B pi_j (xi) = (M xi)_j
        use_mt = left != inverse
    else:
        use_mt = left == inverse
    return M[:, j] if use_mt else M[j, :]


def derivative_transform_identity(f: GaussianFunction, pair: GeometricPair, side,
                                  direction=Direction.TRANSFORM_OF_DERIVATIVE, axis: int = 0,
                                  order: int = 1, probes=None, inverse: bool = False) -> Residual:
    """Exchange of ``d_j^alpha`` with the (inverse) left/right transforms.

    Transform-of-derivative compares the quadrature transform of the
    analytically differentiated Gaussian with the closed-form transform times
    ``(+-2 pi i <r, xi>)^alpha``. Derivative-of-transform differentiates the
    closed form analytically and compares with the quadrature transform of
    ``<r, x>^alpha f``. The row ``r`` is a row or column of ``M`` per side.
    """
    if f.dim != pair.dim:
        raise DimensionMismatch("Gaussian and structure dimensions differ")
    if not 0 <= axis < pair.dim:
        raise AxisOutOfRange(f"axis {axis} outside 0..{pair.dim - 1}")
    side = Side.coerce(side)
    direction = Direction(direction)
    probes = as_points(probes if probes is not None else default_probes(pair.dim), pair.dim)
    closed = (gaussian_inverse_geometric_ft if inverse else gaussian_geometric_ft)(f, pair, side)
    r = _polynomial_row(pair, side, direction, inverse, axis)
    base = PolyGaussian.from_gaussian(f)
    if direction is Direction.TRANSFORM_OF_DERIVATIVE:
        deriv = base.derivative(axis, order)
        grid = _probe_grid(f, pair, probes)
        lhs = quadrature_transform(deriv, grid, pair, side, probes, inverse)
        c = -2j * np.pi if inverse else 2j * np.pi
        rhs = (c * (probes @ r)) ** order * closed(probes)
    else:
        lhs = PolyGaussian.from_gaussian(closed.as_gaussian()).derivative(axis, order)(probes)
        weighted = base
        for _ in range(order):
            weighted = weighted.times_linear(r)
        grid = _probe_grid(f, pair, probes)
        c = 2j * np.pi if inverse else -2j * np.pi
        rhs = c**order * quadrature_transform(weighted, grid, pair, side, probes, inverse)
    return Residual.compare(lhs, rhs, direction=direction.value, side=side.value, inverse=inverse)


def default_probes(n: int, count: int = 10, seed: int = 7, scale: float = 0.8) -> np.ndarray:
    return np.random.default_rng(seed).uniform(-scale, scale, (count, n))


def laplacian_transform_identity(f, pair: GeometricPair, m: int = 1, side=Side.LEFT,
                                 inverse: bool = False, probes=None) -> Residual:
    """``F(Delta_b^m f) = [-4 pi^2 b(xi, xi)]^m F f`` and its inverse-transform variant.

    A ``GaussianFunction`` runs the quadrature backend (analytic ``Delta_b^m``
    against the closed-form transform at probe points). A periodic
    ``SampledField`` runs the spectral backend over the whole FFT lattice; for
    ``inverse`` the field is read as samples in frequency.
    """
    side = Side.coerce(side)
    if m < 0:
        raise ValueError("m must be non-negative")
    if isinstance(f, SampledField):
        return _laplacian_identity_periodic(f, pair, m, side, inverse)
    probes = as_points(probes if probes is not None else default_probes(pair.dim), pair.dim)
    lap = PolyGaussian.from_gaussian(f).b_laplacian(pair.B, m)
    lhs = quadrature_transform(lap, _probe_grid(f, pair, probes), pair, side, probes, inverse)
    closed = (gaussian_inverse_geometric_ft if inverse else gaussian_geometric_ft)(f, pair, side)
    rhs = (-4 * np.pi**2 * pair.quadratic(probes)) ** m * closed(probes)
    return Residual.compare(lhs, rhs, backend="quadrature", m=m, inverse=inverse)


def _laplacian_identity_periodic(f: SampledField, pair, m, side, inverse) -> Residual:
    if not f.grid.periodic:
        raise ValueError("spectral backend needs a periodic field")
    lap = b_laplacian(f, pair, m)
    if not inverse:
        lhs = geometric_ft(lap, pair, side, method=Method.FFT)
        base = geometric_ft(f, pair, side, method=Method.FFT)
        rhs = (-4 * np.pi**2 * pair.quadratic(base.freqs)) ** m * base.values
        return Residual.compare(lhs.values, rhs, backend="periodic", m=m, inverse=False)
    # centred reciprocal lattice keeps each x paired with its own wave
    lhs = inverse_geometric_ft(Spectrum.from_field(lap), pair, side, method=Method.FFT)
    base = inverse_geometric_ft(Spectrum.from_field(f), pair, side, method=Method.FFT)
    pts = base.grid.points() if isinstance(base, SampledField) else base.freqs
    lv = lhs.flat if isinstance(lhs, SampledField) else lhs.values
    bv = base.flat if isinstance(base, SampledField) else base.values
    rhs = (-4 * np.pi**2 * pair.quadratic(pts)) ** m * bv
    return Residual.compare(lv, rhs, backend="periodic", m=m, inverse=True)


def sobolev_norm_identity(f: GaussianFunction, pair: GeometricPair, m: int = 1, side=Side.LEFT) -> Residual:
    """``||Delta_b^m f||^2`` against ``(2 pi)^{4m} |det b| int b(xi,xi)^{2m} |F f|^2``.

    Both integrals are grid quadratures; the residual is the relative gap.
    """
    side = Side.coerce(side)
    lap = PolyGaussian.from_gaussian(f).b_laplacian(pair.B, m)
    grid = f.default_grid(width=10.0)
    vals = lap(grid.points())
    lhs = grid.cell_volume * float(pairwise_sum(np.abs(vals) ** 2))
    spec = gaussian_geometric_ft(f, pair, side).as_gaussian()
    fgrid = spec.default_grid(width=10.0)
    xi = fgrid.points()
    weight = pair.quadratic(xi) ** (2 * m)
    integrand = weight * np.abs(spec(xi)) ** 2
    rhs = (2 * np.pi) ** (4 * m) * pair.abs_det_b * fgrid.cell_volume * float(pairwise_sum(integrand))
    return Residual(lhs, rhs, rel_gap(lhs, rhs), {"m": m, "side": side.value})


def laplacian_equivariance(f: GaussianFunction, pair: GeometricPair, A, m: int = 1,
                           grid: GridSpec | None = None) -> Residual:
    """``Delta_b^m (tau_A f)`` against ``tau_A (Delta_b^m f)`` sampled on one grid."""
    from .fields import tau_action

    A = np.asarray(A, dtype=float)
    moved = tau_action(f, A)
    grid = grid or moved.default_grid(64, width=6.0)
    pts = grid.points()
    lhs = PolyGaussian.from_gaussian(moved).b_laplacian(pair.B, m)(pts)
    rhs = PolyGaussian.from_gaussian(f).b_laplacian(pair.B, m)(np.linalg.solve(A, pts.T).T)
    return Residual.compare(lhs, rhs, m=m)
