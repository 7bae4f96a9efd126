"""Shared numerical plumbing: deterministic reductions, thread caps, residual norms."""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

THREADS_ENV = "GEOFT_THREADS"


def thread_count() -> int:
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def pairwise_sum(a, axis: int = -1) -> np.ndarray:
    """Sum along ``axis`` with a fixed binary-tree shape.

    Level k adds neighbours ``(2i, 2i+1)`` of level k-1; odd lengths are padded
    with a trailing zero. The tree depends only on the length, never on the
    thread count or memory layout, so results are bit-stable.
    """
    a = np.moveaxis(np.asarray(a), axis, -1)
    if a.shape[-1] == 0:
        return np.zeros(a.shape[:-1], dtype=a.dtype)
    while a.shape[-1] > 1:
        if a.shape[-1] % 2:
            pad = np.zeros(a.shape[:-1] + (1,), dtype=a.dtype)
            a = np.concatenate([a, pad], axis=-1)
        a = a[..., 0::2] + a[..., 1::2]
    return a[..., 0]


def chunked_map(func, n_items: int, chunk: int):
    """Apply ``func(start, stop)`` over consecutive chunks and concatenate.

    Chunks are independent, so running them on a thread pool does not change
    any value; results are gathered in chunk order.
    """
    bounds = [(s, min(s + chunk, n_items)) for s in range(0, n_items, chunk)]
    workers = thread_count()
    if workers > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda b: func(*b), bounds))
    else:
        parts = [func(*b) for b in bounds]
    return np.concatenate(parts) if parts else np.zeros(0, dtype=complex)


def rel_linf(a, b) -> float:
    """max|a - b| / max(max|a|, max|b|); 0 when both sides vanish identically."""
    a = np.asarray(a)
    b = np.asarray(b)
    scale = max(float(np.max(np.abs(a), initial=0.0)), float(np.max(np.abs(b), initial=0.0)))
    diff = float(np.max(np.abs(a - b), initial=0.0))
    if scale == 0.0:
        return diff
    return diff / scale


def rel_gap(a: complex, b: complex) -> float:
    scale = max(abs(a), abs(b))
    if scale == 0.0:
        return 0.0
    return abs(a - b) / scale


def as_matrix(m, n: int | None = None, name: str = "matrix") -> np.ndarray:
    from .errors import DimensionMismatch, NonSquare

    arr = np.array(m, dtype=float)
    if arr.ndim == 0:
        arr = arr.reshape(1, 1)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise NonSquare(f"{name} must be square, got shape {arr.shape}")
    if n is not None and arr.shape[0] != n:
        raise DimensionMismatch(f"{name} has size {arr.shape[0]}, expected {n}")
    return arr


def as_vector(v, n: int | None = None, name: str = "vector", dtype=float) -> np.ndarray:
    from .errors import DimensionMismatch

    arr = np.atleast_1d(np.array(v, dtype=dtype))
    if arr.ndim != 1:
        raise DimensionMismatch(f"{name} must be one-dimensional, got shape {arr.shape}")
    if n is not None and arr.shape[0] != n:
        raise DimensionMismatch(f"{name} has length {arr.shape[0]}, expected {n}")
    return arr


def as_points(p, n: int, name: str = "points") -> np.ndarray:
    """Coerce to an (m, n) float array; a single vector becomes one row."""
    from .errors import DimensionMismatch

    arr = np.array(p, dtype=float)
    if arr.ndim == 0:
        arr = arr.reshape(1, 1)
    if arr.ndim == 1:
        arr = arr.reshape(1, -1) if arr.shape[0] == n else arr.reshape(-1, 1)
    if arr.shape[-1] != n:
        raise DimensionMismatch(f"{name} have dimension {arr.shape[-1]}, expected {n}")
    return arr


@dataclass(frozen=True)
class Residual:
    """Outcome of comparing two sides of an identity.

    ``lhs`` and ``rhs`` summarise each side by its largest magnitude.
    """

    lhs: float
    rhs: float
    residual: float
    detail: dict = field(default_factory=dict)

    @classmethod
    def compare(cls, lhs, rhs, relative: bool = True, **detail) -> "Residual":
        lhs = np.asarray(lhs)
        rhs = np.asarray(rhs)
        res = rel_linf(lhs, rhs) if relative else float(np.max(np.abs(lhs - rhs), initial=0.0))
        return cls(float(np.max(np.abs(lhs), initial=0.0)), float(np.max(np.abs(rhs), initial=0.0)),
                   float(res), detail)
