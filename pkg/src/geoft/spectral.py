"""Discrete classical and geometric Fourier transforms.

Two evaluation strategies share one convention. ``Direct`` is a Riemann-sum
quadrature at arbitrary frequencies and serves as the oracle. ``FFTSheared``
uses the fact that on the lattice ``xi_k = B^T zeta_k`` (left) or
``B zeta_k`` (right), with ``zeta_k`` the DFT lattice of the grid, the kernel
``b(xi, x)`` collapses to ``<zeta_k, x>`` and the sum is a plain FFT.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
import scipy.fft
import scipy.signal

from ._numerics import as_points, chunked_map, pairwise_sum, thread_count
from .errors import (DimensionMismatch, EmptyFrequencyList, GridMismatch, NotGridRealizable,
                     UnsupportedMode)
from .fields import GridMode, GridSpec, SampledField
from .forms import GeometricPair, Side

# phase-matrix entries materialised per chunk in the direct sums
_CHUNK_ENTRIES = 1 << 20


class Sign(str, enum.Enum):
    FORWARD = "forward"
    INVERSE = "inverse"


class Method(str, enum.Enum):
    DIRECT = "direct"
    FFT = "fft"

    @classmethod
    def coerce(cls, value) -> "Method":
        if isinstance(value, cls):
            return value
        value = str(value).lower()
        return cls.FFT if value in ("fft", "fftsheared", "fft_sheared") else cls(value)


@dataclass(frozen=True, eq=False)
class FrequencyLattice:
    """Points ``origin + generator @ k`` for ``0 <= k_i < counts_i``, row-major."""

    origin: np.ndarray
    generator: np.ndarray
    counts: tuple

    def __post_init__(self):
        object.__setattr__(self, "origin", np.asarray(self.origin, dtype=float))
        object.__setattr__(self, "generator", np.atleast_2d(np.asarray(self.generator, dtype=float)))
        object.__setattr__(self, "counts", tuple(int(c) for c in self.counts))

    @property
    def dim(self) -> int:
        return len(self.counts)

    @property
    def size(self) -> int:
        return int(np.prod(self.counts))

    @property
    def cell_volume(self) -> float:
        return float(abs(np.linalg.det(self.generator)))

    def indices(self) -> np.ndarray:
        mesh = np.meshgrid(*[np.arange(c) for c in self.counts], indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=-1)

    def points(self) -> np.ndarray:
        # an origin on the lattice is folded into integer indices so the zero point is exactly 0
        shift = np.linalg.solve(self.generator, self.origin)
        whole = np.round(shift)
        if np.all(np.abs(shift - whole) < 1e-9):
            return (self.indices() + whole) @ self.generator.T
        return self.origin + self.indices() @ self.generator.T

    @classmethod
    def from_grid(cls, grid: GridSpec) -> "FrequencyLattice":
        return cls(np.array(grid.origin), np.diag(grid.spacing), grid.shape)

    def as_grid(self, mode=GridMode.TRUNCATED, tol: float = 1e-12) -> GridSpec:
        """The equivalent axis-aligned ``GridSpec``; raises if the generator is sheared."""
        G = self.generator
        off = G - np.diag(np.diag(G))
        if np.max(np.abs(off), initial=0.0) > tol * np.max(np.abs(G)) or np.any(np.diag(G) <= 0):
            raise UnsupportedMode("lattice is not axis aligned")
        return GridSpec(self.counts, tuple(self.origin), tuple(np.diag(G)), mode)

    def to_json(self) -> dict:
        return {"origin": self.origin.tolist(), "generator": self.generator.tolist(),
                "counts": list(self.counts)}

    @classmethod
    def from_json(cls, data: dict) -> "FrequencyLattice":
        gen = np.asarray(data["generator"], dtype=float)
        origin = data.get("origin", np.zeros(gen.shape[0]))
        return cls(origin, gen, tuple(data["counts"]))


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Transform values at explicit frequencies or on a frequency lattice.

    ``grid`` records the spatial grid an FFT spectrum came from, so the fast
    inverse can land back on it exactly.
    """

    values: np.ndarray
    freqs: np.ndarray
    lattice: FrequencyLattice | None = None
    grid: GridSpec | None = None

    def to_json(self) -> dict:
        out = {"domain": "frequency",
               "values": np.stack([self.values.real, self.values.imag], axis=-1).tolist()}
        if self.lattice is not None:
            out["lattice"] = self.lattice.to_json()
        else:
            out["freqs"] = self.freqs.tolist()
        if self.grid is not None:
            out["grid"] = self.grid.to_json()
        return out

    @classmethod
    def from_json(cls, data: dict) -> "Spectrum":
        raw = np.asarray(data["values"], dtype=float).reshape(-1, 2)
        values = raw[:, 0] + 1j * raw[:, 1]
        grid = GridSpec.from_json(data["grid"]) if "grid" in data else None
        if "lattice" in data:
            lat = FrequencyLattice.from_json(data["lattice"])
            return cls(values, lat.points(), lat, grid)
        return cls(values, np.asarray(data["freqs"], dtype=float).reshape(len(values), -1), None, grid)

    @classmethod
    def from_field(cls, field: SampledField) -> "Spectrum":
        """Treat samples on an axis-aligned frequency grid as a spectrum."""
        lat = FrequencyLattice.from_grid(field.grid)
        return cls(field.flat.copy(), lat.points(), lat)


def _exp_sum(values: np.ndarray, nodes: np.ndarray, targets: np.ndarray, sign: float) -> np.ndarray:
    """``sum_j values_j exp(sign 2 pi i <nodes_j, t>)`` for each target, pairwise reduced."""
    if len(targets) == 0:
        raise EmptyFrequencyList("no evaluation points given")
    chunk = max(1, _CHUNK_ENTRIES // max(1, len(nodes)))

    def block(start, stop):
        phase = np.exp(sign * 2j * np.pi * (targets[start:stop] @ nodes.T))
        return pairwise_sum(phase * values, axis=-1)

    return chunked_map(block, len(targets), chunk)


def dft_direct(f: SampledField, freqs, sign=Sign.FORWARD, weight: float = 1.0) -> np.ndarray:
    """``weight * prod(h) * sum_x f(x) exp(-+2 pi i <x, xi>)`` at every ``xi``.

    The sum runs over grid points in row-major order with a fixed pairwise
    reduction tree, so the result does not depend on the thread count.
    """
    freqs = np.asarray(freqs, dtype=float)
    if freqs.size == 0:
        raise EmptyFrequencyList("no frequencies given")
    xi = as_points(freqs, f.grid.dim, "frequencies")
    s = -1.0 if Sign(sign) is Sign.FORWARD else 1.0
    return weight * f.grid.cell_volume * _exp_sum(f.flat, f.grid.points(), xi, s)


def kernel_covector(pair: GeometricPair, side, xi: np.ndarray) -> np.ndarray:
    """Rows ``eta`` with ``b(xi, x) = <eta, x>`` (left) or ``b(x, xi) = <eta, x>`` (right)."""
    side = Side.coerce(side)
    return xi @ pair.M if side is Side.LEFT else xi @ pair.M.T


def sheared_lattice(grid: GridSpec, pair: GeometricPair, side) -> FrequencyLattice:
    """``B^T zeta_k`` (left) or ``B zeta_k`` (right) over the centred DFT lattice of ``grid``."""
    side = Side.coerce(side)
    S = pair.B.T if side is Side.LEFT else pair.B
    zeta0 = np.array([ax[0] for ax in grid.dual_axes()])
    D = np.diag([1.0 / (n * h) for n, h in zip(grid.shape, grid.spacing)])
    return FrequencyLattice(S @ zeta0, S @ D, grid.shape)


def geometric_ft(f: SampledField, pair: GeometricPair, side, freqs=None, method=Method.DIRECT) -> Spectrum:
    """Left or right geometric transform of sampled data.

    ``Direct`` evaluates at ``freqs``. ``FFTSheared`` ignores ``freqs`` and
    returns values on ``sheared_lattice(f.grid, pair, side)``.
    """
    if f.grid.dim != pair.dim:
        raise DimensionMismatch("field and structure dimensions differ")
    method = Method.coerce(method)
    if method is Method.DIRECT:
        if freqs is None:
            raise EmptyFrequencyList("Direct method needs explicit frequencies")
        xi = as_points(freqs, pair.dim, "frequencies")
        return Spectrum(dft_direct(f, kernel_covector(pair, side, xi)), xi)
    lattice = sheared_lattice(f.grid, pair, side)
    return Spectrum(_fft_forward(f), lattice.points(), lattice, f.grid)


def _fft_forward(f: SampledField) -> np.ndarray:
    grid = f.grid
    spec = scipy.fft.fftshift(scipy.fft.fftn(f.values, workers=thread_count()))
    zeta = grid.dual_points()
    return grid.cell_volume * spec.ravel() * np.exp(-2j * np.pi * (zeta @ np.array(grid.origin)))


def classical_ft(f: SampledField, freqs=None, method=Method.DIRECT) -> Spectrum:
    from .forms import canonical_pair

    return geometric_ft(f, canonical_pair(f.grid.dim), Side.LEFT, freqs, method)


def _inverse_targets(pair: GeometricPair, side, x: np.ndarray) -> np.ndarray:
    # left kernel b(xi, x) = <xi, M x>; right kernel b(x, xi) = <xi, M^T x>
    side = Side.coerce(side)
    return x @ pair.M.T if side is Side.LEFT else x @ pair.M


def inverse_geometric_ft(spectrum: Spectrum, pair: GeometricPair, side, points=None,
                         method=Method.DIRECT, origin=None):
    """``|det b| * int exp(+2 pi i b(., .)) F(xi) d xi`` by quadrature over the spectrum lattice.

    ``Direct`` returns an array of values at ``points``. ``FFTSheared``
    returns a ``SampledField`` on the reciprocal grid: the source grid when
    the spectrum carries one, otherwise the reciprocal lattice as a grid when
    it is axis aligned. A sheared reciprocal lattice comes back as a
    ``Spectrum`` holding the values and their points.
    """
    if spectrum.lattice is None:
        raise UnsupportedMode("inverse quadrature needs a frequency lattice")
    lat = spectrum.lattice
    if lat.dim != pair.dim:
        raise DimensionMismatch("spectrum and structure dimensions differ")
    weight = pair.abs_det_b * lat.cell_volume
    method = Method.coerce(method)
    if method is Method.DIRECT:
        if points is None:
            if spectrum.grid is None:
                raise EmptyFrequencyList("Direct inverse needs evaluation points")
            points = spectrum.grid.points()
        x = as_points(points, pair.dim)
        return weight * _exp_sum(spectrum.values, lat.points(), _inverse_targets(pair, side, x), 1.0)
    return _fft_inverse(spectrum, pair, Side.coerce(side), weight, origin)


def reciprocal_generator(lat: FrequencyLattice, pair: GeometricPair, side) -> np.ndarray:
    """``H`` with ``G^T K H = diag(1/N)``, ``K = M`` (left) or ``M^T`` (right)."""
    side = Side.coerce(side)
    K = pair.M if side is Side.LEFT else pair.M.T
    inv_n = np.diag([1.0 / c for c in lat.counts])
    return np.linalg.solve(lat.generator.T @ K, inv_n)


def _fft_inverse(spectrum: Spectrum, pair: GeometricPair, side: Side, weight: float, origin):
    lat = spectrum.lattice
    K = pair.M if side is Side.LEFT else pair.M.T
    if spectrum.grid is not None:
        grid = spectrum.grid
        H = np.diag(grid.spacing)
        x0 = np.array(grid.origin)
    else:
        H = reciprocal_generator(lat, pair, side)
        x0 = (-H @ np.array([c // 2 for c in lat.counts]) if origin is None
              else np.asarray(origin, dtype=float))
        out_lat = FrequencyLattice(x0, H, lat.counts)
        try:
            grid = out_lat.as_grid(tol=1e-10)
        except UnsupportedMode:
            grid = None
    k = lat.indices()
    # exponent <xi0 + G k, K (x0 + H m)>; the k.m/N part is the FFT kernel
    Kx0 = K @ x0
    pre = spectrum.values * np.exp(2j * np.pi * (k @ (lat.generator.T @ Kx0)))
    core = scipy.fft.ifftn(pre.reshape(lat.counts), workers=thread_count()).ravel() * lat.size
    m = FrequencyLattice(np.zeros(lat.dim), np.eye(lat.dim), lat.counts).indices()
    post = np.exp(2j * np.pi * (lat.origin @ Kx0 + m @ (H.T @ K.T @ lat.origin)))
    values = weight * core * post
    if grid is None:
        # sheared output lattice: hand back values with their points
        return Spectrum(values, out_lat.points(), out_lat)
    return SampledField(grid, values)


def quadrature_transform(func, grid: GridSpec, pair: GeometricPair, side, points,
                         inverse: bool = False) -> np.ndarray:
    """Riemann-sum transform of an analytic ``func`` sampled on ``grid``.

    Forward gives ``F^{L/R}_b func`` at ``points``; ``inverse`` gives
    ``(F^{L/R}_b)^{-1} func`` with ``func`` read as a function of frequency.
    """
    nodes = grid.points()
    values = np.asarray(func(nodes), dtype=complex)
    pts = as_points(points, pair.dim)
    if inverse:
        targets = _inverse_targets(pair, side, pts)
        return pair.abs_det_b * grid.cell_volume * _exp_sum(values, nodes, targets, 1.0)
    return grid.cell_volume * _exp_sum(values, nodes, kernel_covector(pair, side, pts), -1.0)


def convolve(f: SampledField, g: SampledField) -> SampledField:
    """``(f * g)(x) = int f(y) g(x - y) dy`` on the common grid.

    Truncated grids use linear convolution and periodic grids circular
    convolution, both scaled by the cell volume. Requires ``origin / h``
    integral on every axis so that ``x - y`` lands on the grid.
    """
    if f.grid != g.grid:
        raise GridMismatch("convolution needs identical grids")
    grid = f.grid
    steps = np.asarray(grid.origin) / np.asarray(grid.spacing)
    shift = np.round(steps).astype(int)
    if np.any(np.abs(steps - shift) > 1e-9):
        raise NotGridRealizable("grid origin must be an integer multiple of the spacing")
    if grid.periodic:
        prod = scipy.fft.fftn(f.values, workers=thread_count()) * scipy.fft.fftn(g.values, workers=thread_count())
        circ = scipy.fft.ifftn(prod, workers=thread_count())
        # out[m] = circ[(m - o/h) mod N]
        out = np.roll(circ, tuple(int(s) for s in shift), axis=tuple(range(grid.dim)))
        return f.with_values(grid.cell_volume * out)
    full = scipy.signal.fftconvolve(f.values, g.values, mode="full")
    idx = []
    for n, s in zip(grid.shape, shift):
        idx.append(np.arange(n) - s)
    mesh = np.meshgrid(*idx, indexing="ij")
    valid = np.ones(grid.shape, dtype=bool)
    for i, n in zip(mesh, full.shape):
        valid &= (i >= 0) & (i < n)
    clipped = tuple(np.clip(i, 0, n - 1) for i, n in zip(mesh, full.shape))
    return f.with_values(grid.cell_volume * np.where(valid, full[clipped], 0))
