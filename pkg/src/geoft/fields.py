"""Grids, sampled fields and the analytic Gaussian test family.

Modulated Gaussians

    g(x) = amp * exp(2 pi i <w, x>) * exp(-pi (x - c)^T A (x - c))

are closed under the classical Fourier transform, linear changes of variable,
translation, modulation, dilation, conjugation and products, so every identity
check has an analytic side to compare against.
"""
from __future__ import annotations

import enum
import itertools
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ._numerics import as_matrix, as_points, as_vector
from .errors import DimensionMismatch, NotGridRealizable, SingularMatrix
from .forms import GeometricPair, Side


class GridMode(str, enum.Enum):
    TRUNCATED = "truncated"
    PERIODIC = "periodic"


@dataclass(frozen=True)
class GridSpec:
    """Uniform rectangular grid; point ``m`` sits at ``origin + spacing * m``."""

    shape: tuple
    origin: tuple
    spacing: tuple
    mode: GridMode = GridMode.TRUNCATED

    def __post_init__(self):
        shape = tuple(int(s) for s in np.atleast_1d(self.shape))
        origin = tuple(float(o) for o in np.atleast_1d(self.origin))
        spacing = tuple(float(h) for h in np.atleast_1d(self.spacing))
        if not (len(shape) == len(origin) == len(spacing)):
            raise DimensionMismatch("shape, origin and spacing must have equal length")
        if any(s < 2 for s in shape):
            raise ValueError(f"every axis needs at least 2 points, got {shape}")
        if any(h <= 0 for h in spacing):
            raise ValueError(f"spacings must be positive, got {spacing}")
        object.__setattr__(self, "shape", shape)
        object.__setattr__(self, "origin", origin)
        object.__setattr__(self, "spacing", spacing)
        object.__setattr__(self, "mode", GridMode(self.mode))

    @classmethod
    def symmetric(cls, dim: int, n_points: int, half_width: float, mode=GridMode.TRUNCATED):
        """``[-half_width, half_width)`` on every axis with ``n_points`` points."""
        h = 2.0 * half_width / n_points
        return cls((n_points,) * dim, (-half_width,) * dim, (h,) * dim, mode)

    @classmethod
    def torus(cls, dim: int, n_points: int, period: float = 1.0):
        """Periodic grid on ``[0, period)^dim``."""
        return cls((n_points,) * dim, (0.0,) * dim, (period / n_points,) * dim, GridMode.PERIODIC)

    @property
    def dim(self) -> int:
        return len(self.shape)

    @property
    def size(self) -> int:
        return int(np.prod(self.shape))

    @property
    def cell_volume(self) -> float:
        return float(np.prod(self.spacing))

    @property
    def periods(self) -> np.ndarray:
        return np.array(self.shape) * np.array(self.spacing)

    @property
    def periodic(self) -> bool:
        return self.mode is GridMode.PERIODIC

    def axes(self) -> list[np.ndarray]:
        return [o + h * np.arange(n) for n, o, h in zip(self.shape, self.origin, self.spacing)]

    def points(self) -> np.ndarray:
        """All grid points, shape ``(size, dim)``, row-major (last axis fastest)."""
        mesh = np.meshgrid(*self.axes(), indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=-1)

    def dual_axes(self) -> list[np.ndarray]:
        """Standard DFT frequencies ``k / (N h)`` per axis, ``k = -N//2 .. N - N//2 - 1``."""
        return [np.arange(-(n // 2), n - n // 2) / (n * h) for n, h in zip(self.shape, self.spacing)]

    def dual_points(self) -> np.ndarray:
        mesh = np.meshgrid(*self.dual_axes(), indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=-1)

    def with_mode(self, mode) -> "GridSpec":
        return GridSpec(self.shape, self.origin, self.spacing, mode)

    def to_json(self) -> dict:
        return {"dim": self.dim, "shape": list(self.shape), "origin": list(self.origin),
                "spacing": list(self.spacing), "mode": self.mode.value}

    @classmethod
    def from_json(cls, data: dict) -> "GridSpec":
        grid = cls(tuple(data["shape"]), tuple(data["origin"]), tuple(data["spacing"]),
                   data.get("mode", "truncated"))
        if "dim" in data and int(data["dim"]) != grid.dim:
            raise DimensionMismatch("grid dim does not match shape")
        return grid


@dataclass(frozen=True, eq=False)
class SampledField:
    grid: GridSpec
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=complex)
        if vals.size != self.grid.size:
            raise DimensionMismatch(f"{vals.size} values for a grid of {self.grid.size} points")
        object.__setattr__(self, "values", vals.reshape(self.grid.shape))

    @property
    def flat(self) -> np.ndarray:
        return self.values.ravel()

    def with_values(self, values) -> "SampledField":
        return SampledField(self.grid, values)

    def __add__(self, other):
        _check_same_grid(self, other)
        return self.with_values(self.values + other.values)

    def __sub__(self, other):
        _check_same_grid(self, other)
        return self.with_values(self.values - other.values)

    def __mul__(self, scalar):
        return self.with_values(self.values * scalar)

    __rmul__ = __mul__

    def to_json(self) -> dict:
        flat = self.flat
        return {"grid": self.grid.to_json(),
                "values": np.stack([flat.real, flat.imag], axis=-1).tolist()}

    @classmethod
    def from_json(cls, data: dict) -> "SampledField":
        grid = GridSpec.from_json(data["grid"])
        raw = np.asarray(data["values"], dtype=float).reshape(-1, 2)
        return cls(grid, raw[:, 0] + 1j * raw[:, 1])


def _check_same_grid(f: SampledField, g: SampledField):
    from .errors import GridMismatch

    if f.grid != g.grid:
        raise GridMismatch("fields live on different grids")


# --- Gaussian family -------------------------------------------------------


def _sym(m: np.ndarray) -> np.ndarray:
    return 0.5 * (m + m.T)


@dataclass(frozen=True, eq=False)
class GaussianFunction:
    """``amp * e^{2 pi i <w,x>} * exp(-pi (x-c)^T A (x-c))`` with ``A`` SPD."""

    A: np.ndarray
    c: np.ndarray = None
    amp: complex = 1.0
    w: np.ndarray = None

    def __post_init__(self):
        A = as_matrix(self.A, name="Gaussian shape")
        n = A.shape[0]
        if np.linalg.norm(A - A.T, np.inf) > 1e-12 * max(1.0, np.linalg.norm(A, np.inf)):
            raise ValueError("Gaussian shape matrix must be symmetric")
        A = _sym(A)
        if np.linalg.eigvalsh(A)[0] <= 0:
            raise ValueError("Gaussian shape matrix must be positive definite")
        c = np.zeros(n) if self.c is None else as_vector(self.c, n, "center")
        w = np.zeros(n) if self.w is None else as_vector(self.w, n, "modulation")
        for arr in (A, c, w):
            arr.setflags(write=False)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "w", w)
        object.__setattr__(self, "amp", complex(self.amp))

    @property
    def dim(self) -> int:
        return self.A.shape[0]

    @classmethod
    def standard(cls, n: int) -> "GaussianFunction":
        return cls(np.eye(n))

    def __call__(self, x) -> np.ndarray:
        single = np.ndim(x) <= 1 and (self.dim > 1 or np.ndim(x) == 0 or np.size(x) == 1)
        pts = as_points(x, self.dim)
        d = pts - self.c
        quad = np.einsum("ij,jk,ik->i", d, self.A, d)
        vals = self.amp * np.exp(2j * np.pi * (pts @ self.w) - np.pi * quad)
        return vals[0] if single else vals

    # canonical form  K * exp(-pi x^T A x + 2 pi <u, x>),  u = A c + i w
    def canonical(self):
        u = self.A @ self.c + 1j * self.w
        K = self.amp * np.exp(-np.pi * self.c @ self.A @ self.c)
        return self.A, u, K

    @classmethod
    def from_canonical(cls, A, u, K) -> "GaussianFunction":
        A = _sym(np.asarray(A, dtype=float))
        u = np.asarray(u, dtype=complex)
        c = np.linalg.solve(A, u.real)
        return cls(A, c, K * np.exp(np.pi * c @ A @ c), u.imag)

    def classical_ft(self) -> "GaussianFunction":
        """Closed-form ``xi -> int e^{-2 pi i <x, xi>} g(x) dx``."""
        A_inv = _sym(np.linalg.inv(self.A))
        amp = self.amp / math.sqrt(np.linalg.det(self.A)) * np.exp(2j * np.pi * (self.c @ self.w))
        return GaussianFunction(A_inv, self.w.copy(), amp, -self.c)

    def compose(self, C) -> "GaussianFunction":
        """``x -> g(C x)`` for invertible ``C``."""
        C = as_matrix(C, self.dim, "linear map")
        if abs(np.linalg.det(C)) == 0.0:
            raise SingularMatrix("cannot compose a Gaussian with a singular map")
        return GaussianFunction(_sym(C.T @ self.A @ C), np.linalg.solve(C, self.c), self.amp, C.T @ self.w)

    def scaled(self, s) -> "GaussianFunction":
        return GaussianFunction(self.A, self.c, self.amp * s, self.w)

    def translated(self, h) -> "GaussianFunction":
        """``x -> g(x + h)``."""
        h = as_vector(h, self.dim, "shift")
        return GaussianFunction(self.A, self.c - h, self.amp * np.exp(2j * np.pi * (self.w @ h)), self.w)

    def modulated(self, k) -> "GaussianFunction":
        """``x -> e^{2 pi i <k, x>} g(x)``."""
        return GaussianFunction(self.A, self.c, self.amp, self.w + as_vector(k, self.dim, "wave vector"))

    def dilated(self, lam: float) -> "GaussianFunction":
        """``x -> g(lam x)``."""
        return self.compose(lam * np.eye(self.dim))

    def conjugate(self) -> "GaussianFunction":
        return GaussianFunction(self.A, self.c, np.conj(self.amp), -self.w)

    def negated_argument(self) -> "GaussianFunction":
        return self.compose(-np.eye(self.dim))

    def product(self, other: "GaussianFunction") -> "GaussianFunction":
        A1, u1, K1 = self.canonical()
        A2, u2, K2 = other.canonical()
        return GaussianFunction.from_canonical(A1 + A2, u1 + u2, K1 * K2)

    def convolve(self, other: "GaussianFunction") -> "GaussianFunction":
        """Closed-form ``(f * g)(x) = int f(y) g(x - y) dy``."""
        spectrum = self.classical_ft().product(other.classical_ft())
        return spectrum.classical_ft().negated_argument()

    def l2_norm_sq(self) -> float:
        return abs(self.amp) ** 2 * 2.0 ** (-self.dim / 2) / math.sqrt(np.linalg.det(self.A))

    def default_grid(self, n_points: int = 128, width: float = 8.0, max_freq: float = 0.0,
                     mode=GridMode.TRUNCATED) -> GridSpec:
        """Zero-centred truncation box covering ``c +- width / sqrt(lambda_min)``.

        The point count is raised (kept even) until the Nyquist frequency
        clears the spectrum around the modulation, widened by ``max_freq``.
        """
        ev = np.linalg.eigvalsh(self.A)
        half = float(np.max(np.abs(self.c))) + width / math.sqrt(ev[0])
        # Nyquist must clear the spectrum: |F g| < e^{-36} beyond it
        h_max = 0.5 / (float(np.max(np.abs(self.w))) + max_freq + 3.4 * math.sqrt(ev[-1]))
        n = max(n_points, int(math.ceil(2 * half / h_max)))
        n += n % 2
        return GridSpec.symmetric(self.dim, n, half, mode)

    def to_json(self) -> dict:
        return {"A": self.A.tolist(), "c": self.c.tolist(), "amp": [self.amp.real, self.amp.imag],
                "w": self.w.tolist()}

    @classmethod
    def from_json(cls, data: dict) -> "GaussianFunction":
        amp = data.get("amp", 1.0)
        if isinstance(amp, (list, tuple)):
            amp = complex(amp[0], amp[1])
        return cls(data["A"], data.get("c"), amp, data.get("w"))

    def __repr__(self):
        return (f"GaussianFunction(A={self.A.tolist()}, c={self.c.tolist()}, "
                f"amp={self.amp!r}, w={self.w.tolist()})")


def gaussian_eval(g: GaussianFunction, x):
    return g(x)


def gaussian_classical_ft(g: GaussianFunction) -> GaussianFunction:
    return g.classical_ft()


@dataclass(frozen=True, eq=False)
class Pullback:
    """Evaluator ``x -> scale * g(C x)`` kept in factored form.

    Evaluating through the factors keeps ``(F g)(B^{-T} xi)`` literally what
    the transform identities state; ``as_gaussian`` gives the folded form.
    """

    base: GaussianFunction
    C: np.ndarray
    scale: complex = 1.0

    @property
    def dim(self) -> int:
        return self.base.dim

    def __call__(self, x):
        pts = as_points(x, self.dim)
        vals = self.scale * self.base(pts @ self.C.T)
        return vals[0] if np.ndim(x) <= 1 and (self.dim > 1 or np.size(x) == 1) else vals

    def as_gaussian(self) -> GaussianFunction:
        return self.base.compose(self.C).scaled(self.scale)


def gaussian_geometric_ft(g: GaussianFunction, pair: GeometricPair, side) -> Pullback:
    """Closed form of the left/right transform: ``(F g)(B^{-T} xi)`` or ``(F g)(B^{-1} xi)``."""
    if g.dim != pair.dim:
        raise DimensionMismatch("Gaussian and structure dimensions differ")
    side = Side.coerce(side)
    C = pair.B_inv_T if side is Side.LEFT else pair.B_inv
    return Pullback(g.classical_ft(), np.array(C), 1.0)


def gaussian_inverse_geometric_ft(g: GaussianFunction, pair: GeometricPair, side) -> Pullback:
    """Closed form of the inverse transforms.

    Left: ``|det b| (F g)(-B^{-1} x)``; right: ``|det b| (F g)(-B^{-T} x)``.
    """
    if g.dim != pair.dim:
        raise DimensionMismatch("Gaussian and structure dimensions differ")
    side = Side.coerce(side)
    C = -pair.B_inv if side is Side.LEFT else -pair.B_inv_T
    return Pullback(g.classical_ft(), np.array(C), pair.abs_det_b)


def tau_action(g: GaussianFunction, A) -> GaussianFunction:
    """``(tau_A g)(x) = g(A^{-1} x)``."""
    A = as_matrix(A, g.dim, "group element")
    if abs(np.linalg.det(A)) <= 1e-14 * max(1.0, np.linalg.norm(A, np.inf)) ** g.dim:
        raise SingularMatrix("tau_A needs an invertible A")
    return g.compose(np.linalg.inv(A))


def random_gaussian(rng: np.random.Generator, n: int, spread=(0.6, 1.8), center_scale=0.5,
                    modulation_scale=0.3, complex_amp: bool = True) -> GaussianFunction:
    Q, _ = np.linalg.qr(rng.standard_normal((n, n)))
    A = Q @ np.diag(rng.uniform(*spread, n)) @ Q.T
    c = rng.uniform(-center_scale, center_scale, n)
    w = rng.uniform(-modulation_scale, modulation_scale, n)
    amp = complex(rng.uniform(0.5, 1.5), rng.uniform(-0.5, 0.5) if complex_amp else 0.0)
    return GaussianFunction(_sym(A), c, amp, w)


# --- polynomial x Gaussian (analytic derivatives) --------------------------


@dataclass(frozen=True, eq=False)
class PolyGaussian:
    """``P(x) * K * exp(-pi x^T A x + 2 pi <u, x>)``; ``P`` maps exponent tuples to coefficients."""

    A: np.ndarray
    u: np.ndarray
    K: complex
    poly: dict = field(default_factory=dict)

    @classmethod
    def from_gaussian(cls, g: GaussianFunction) -> "PolyGaussian":
        A, u, K = g.canonical()
        return cls(A, u, K, {(0,) * g.dim: 1.0 + 0j})

    @property
    def dim(self) -> int:
        return self.A.shape[0]

    def _with_poly(self, poly) -> "PolyGaussian":
        return PolyGaussian(self.A, self.u, self.K, {k: v for k, v in poly.items() if v != 0})

    @staticmethod
    def _add_into(acc: dict, key, val):
        acc[key] = acc.get(key, 0j) + val

    def __add__(self, other: "PolyGaussian") -> "PolyGaussian":
        out = dict(self.poly)
        ratio = other.K / self.K
        for k, v in other.poly.items():
            self._add_into(out, k, v * ratio)
        return self._with_poly(out)

    def scaled(self, s) -> "PolyGaussian":
        return self._with_poly({k: v * s for k, v in self.poly.items()})

    def times_linear(self, a, const=0.0) -> "PolyGaussian":
        """Multiply by ``<a, x> + const``."""
        a = np.asarray(a, dtype=complex)
        out: dict = {}
        for k, v in self.poly.items():
            if const != 0:
                self._add_into(out, k, v * const)
            for j in range(self.dim):
                if a[j] != 0:
                    kk = list(k)
                    kk[j] += 1
                    self._add_into(out, tuple(kk), v * a[j])
        return self._with_poly(out)

    def derivative(self, j: int, order: int = 1) -> "PolyGaussian":
        out = self
        for _ in range(order):
            out = out._derivative_once(j)
        return out

    def _derivative_once(self, j: int) -> "PolyGaussian":
        # d/dx_j exp(...) = 2 pi (u_j - (A x)_j) exp(...)
        res: dict = {}
        for k, v in self.poly.items():
            if k[j] > 0:
                kk = list(k)
                kk[j] -= 1
                self._add_into(res, tuple(kk), v * k[j])
            self._add_into(res, k, v * 2 * np.pi * self.u[j])
            for i in range(self.dim):
                if self.A[j, i] != 0:
                    kk = list(k)
                    kk[i] += 1
                    self._add_into(res, tuple(kk), -v * 2 * np.pi * self.A[j, i])
        return self._with_poly(res)

    def b_laplacian(self, B, m: int = 1) -> "PolyGaussian":
        """``(sum_kl B_kl d_k d_l)^m`` applied analytically.

        Mixed partials commute, so only the symmetric part of ``B`` is used;
        a skew ``B`` then cancels exactly instead of to roundoff.
        """
        B = _sym(np.asarray(B, dtype=float))
        out = self
        n = self.dim
        for _ in range(m):
            acc = None
            for k, l in itertools.product(range(n), range(n)):
                if B[k, l] == 0:
                    continue
                term = out.derivative(l).derivative(k).scaled(B[k, l])
                acc = term if acc is None else acc + term
            out = acc if acc is not None else out.scaled(0.0)
        return out

    def __call__(self, x) -> np.ndarray:
        pts = as_points(x, self.dim)
        expo = -np.pi * np.einsum("ij,jk,ik->i", pts, self.A, pts) + 2 * np.pi * (pts @ self.u)
        base = self.K * np.exp(expo)
        poly = np.zeros(len(pts), dtype=complex)
        for k, v in self.poly.items():
            poly += v * np.prod(pts ** np.array(k), axis=1)
        return poly * base


# --- periodic band-limited fields ------------------------------------------


@dataclass(frozen=True, eq=False)
class TrigPolynomial:
    """``sum_k c_k exp(2 pi i <k / L, x>)`` over integer wave indices ``k``."""

    periods: np.ndarray
    indices: np.ndarray
    coeffs: np.ndarray

    @property
    def dim(self) -> int:
        return len(self.periods)

    @property
    def wave_vectors(self) -> np.ndarray:
        return self.indices / np.asarray(self.periods)

    @classmethod
    def random(cls, rng: np.random.Generator, dim: int, kmax: int, periods=1.0, real: bool = True,
               n_terms: int | None = None) -> "TrigPolynomial":
        periods = np.broadcast_to(np.asarray(periods, dtype=float), (dim,)).copy()
        grid = np.array(list(itertools.product(range(-kmax, kmax + 1), repeat=dim)))
        coeffs = (rng.standard_normal(len(grid)) + 1j * rng.standard_normal(len(grid)))
        coeffs /= (1.0 + np.sum(grid**2, axis=1))
        if n_terms is not None and n_terms < len(grid):
            keep = np.zeros(len(grid), dtype=bool)
            keep[rng.choice(len(grid), n_terms, replace=False)] = True
            coeffs = np.where(keep, coeffs, 0)
        if real:
            # c_{-k} = conj(c_k); the index grid is symmetric under negation
            flipped = coeffs[::-1]
            coeffs = 0.5 * (coeffs + np.conj(flipped))
        return cls(periods, grid, coeffs)

    def __call__(self, x) -> np.ndarray:
        pts = as_points(x, self.dim)
        return np.exp(2j * np.pi * pts @ self.wave_vectors.T) @ self.coeffs

    def map_coeffs(self, func) -> "TrigPolynomial":
        """New polynomial with ``c_k -> func(wave_vector_k) * c_k``."""
        return TrigPolynomial(self.periods, self.indices, self.coeffs * func(self.wave_vectors))

    def translated(self, h) -> "TrigPolynomial":
        h = as_vector(h, self.dim)
        return self.map_coeffs(lambda kv: np.exp(2j * np.pi * kv @ h))


@dataclass(frozen=True)
class PlaneWave:
    """``x -> amp * exp(2 pi i <k, x>)``."""

    k: tuple
    amp: complex = 1.0

    def __call__(self, x):
        k = np.asarray(self.k, dtype=float)
        pts = as_points(x, len(k))
        return self.amp * np.exp(2j * np.pi * pts @ k)


def b_plane_wave(pair: GeometricPair, xi, orientation: str = "x_first", sign: int = 1) -> PlaneWave:
    """``exp(+-2 pi i b(x, xi))`` (``x_first``) or ``exp(+-2 pi i b(xi, x))`` (``xi_first``)."""
    xi = as_vector(xi, pair.dim)
    k = pair.M @ xi if orientation == "x_first" else pair.M.T @ xi
    return PlaneWave(tuple(float(v) for v in sign * k))


def sample(func, grid: GridSpec) -> SampledField:
    """Sample any point-wise callable (Gaussian, PlaneWave, TrigPolynomial, ...)."""
    dim = getattr(func, "dim", None)
    if dim is None and isinstance(func, PlaneWave):
        dim = len(func.k)
    if dim is not None and dim != grid.dim:
        raise DimensionMismatch(f"function of dimension {dim} sampled on a {grid.dim}-d grid")
    return SampledField(grid, np.asarray(func(grid.points()), dtype=complex))


# --- operations on samples --------------------------------------------------


class FieldOp(str, enum.Enum):
    TRANSLATE = "translate"
    MODULATE = "modulate"
    DILATE = "dilate"
    CONJUGATE = "conjugate"
    NEGATE = "negate"


def _index_shift(grid: GridSpec, target_offsets, tol=1e-9):
    """Integer index shifts realising per-axis coordinate offsets, or raise."""
    steps = np.asarray(target_offsets, dtype=float) / np.asarray(grid.spacing)
    rounded = np.round(steps)
    if np.any(np.abs(steps - rounded) > tol):
        raise NotGridRealizable(f"offset {target_offsets} is not a multiple of the grid spacing")
    return rounded.astype(int)


def _gather(f: SampledField, index_maps) -> SampledField:
    """``out[m] = f[index_maps(m)]``; out-of-range indices read zero (truncated grids)."""
    grid = f.grid
    idx = np.meshgrid(*index_maps, indexing="ij")
    if grid.periodic:
        idx = [i % n for i, n in zip(idx, grid.shape)]
        return f.with_values(f.values[tuple(idx)])
    valid = np.ones(idx[0].shape, dtype=bool)
    for i, n in zip(idx, grid.shape):
        valid &= (i >= 0) & (i < n)
    clipped = [np.clip(i, 0, n - 1) for i, n in zip(idx, grid.shape)]
    return f.with_values(np.where(valid, f.values[tuple(clipped)], 0))


def field_map(f, op, param=None):
    """Apply ``T_h``, modulation, ``delta_lambda``, conjugation or ``x -> -x``.

    Gaussians are transformed analytically. On samples, translations must be
    grid multiples and dilations integer factors that map the grid into
    itself; truncated grids read zero outside the box (decaying fields).
    """
    op = FieldOp(op)
    if isinstance(f, GaussianFunction):
        return {
            FieldOp.TRANSLATE: lambda: f.translated(param),
            FieldOp.MODULATE: lambda: f.modulated(param),
            FieldOp.DILATE: lambda: f.dilated(param),
            FieldOp.CONJUGATE: f.conjugate,
            FieldOp.NEGATE: f.negated_argument,
        }[op]()
    grid = f.grid
    if op is FieldOp.CONJUGATE:
        return f.with_values(np.conj(f.values))
    if op is FieldOp.MODULATE:
        k = as_vector(param, grid.dim)
        return f.with_values(f.values * np.exp(2j * np.pi * grid.points() @ k).reshape(grid.shape))
    if op is FieldOp.TRANSLATE:
        shift = _index_shift(grid, as_vector(param, grid.dim))
        return _gather(f, [np.arange(n) + s for n, s in zip(grid.shape, shift)])
    if op is FieldOp.NEGATE:
        # -x_m = o + h m'  =>  m' = -m - 2 o / h
        offs = _index_shift(grid, -2.0 * np.asarray(grid.origin))
        return _gather(f, [-np.arange(n) + s for n, s in zip(grid.shape, offs)])
    if op is FieldOp.DILATE:
        lam = float(param)
        if lam != round(lam) or lam < 1:
            raise NotGridRealizable("sample-level dilation needs a positive integer factor")
        lam = int(round(lam))
        # lam x_m = o + h m'  =>  m' = lam m + (lam - 1) o / h
        offs = _index_shift(grid, (lam - 1) * np.asarray(grid.origin))
        return _gather(f, [lam * np.arange(n) + s for n, s in zip(grid.shape, offs)])
    raise ValueError(op)


# --- file formats -----------------------------------------------------------


def load_json(path) -> dict:
    return json.loads(Path(path).read_text())


def dump_json(obj, path=None) -> str:
    text = json.dumps(obj, indent=1, sort_keys=True)
    if path is not None:
        Path(path).write_text(text + "\n")
    return text
