"""Independent reference computations used to freeze expected values.

Nothing here imports geoft: kernels are written out from ``M`` directly and
integrals use scipy quadrature or plain tensor Riemann sums.
"""
import itertools
import math
import warnings

import numpy as np
from scipy import integrate, special


def theta3_at_pi() -> float:
    """``sum_k exp(-pi k^2) = pi^{1/4} / Gamma(3/4)``."""
    return math.pi ** 0.25 / special.gamma(0.75)


def theta4_at_pi() -> float:
    """``sum_k (-1)^k exp(-pi k^2) = 2^{-1/4} pi^{1/4} / Gamma(3/4)``."""
    return 2 ** -0.25 * theta3_at_pi()


def quad_complex_1d(func, lo=-12.0, hi=12.0) -> complex:
    # a vanishing real or imaginary part makes quad warn about unreachable relative accuracy
    warnings.simplefilter("ignore", integrate.IntegrationWarning)
    re = integrate.quad(lambda t: func(t).real, lo, hi, limit=400, epsabs=1e-14, epsrel=1e-13)[0]
    im = integrate.quad(lambda t: func(t).imag, lo, hi, limit=400, epsabs=1e-14, epsrel=1e-13)[0]
    return complex(re, im)


def gaussian(A, c=None, amp=1.0, w=None):
    A = np.atleast_2d(np.asarray(A, dtype=float))
    n = A.shape[0]
    c = np.zeros(n) if c is None else np.asarray(c, dtype=float)
    w = np.zeros(n) if w is None else np.asarray(w, dtype=float)

    def g(x):
        x = np.asarray(x, dtype=float).reshape(-1, n)
        d = x - c
        return amp * np.exp(2j * np.pi * x @ w - np.pi * np.einsum("ij,jk,ik->i", d, A, d))

    return g


def riemann_transform(func, M, side, xi, half=7.0, n_points=160, inverse=False):
    """Tensor Riemann sum of the left/right transform (or inverse) in 1 or 2 dims.

    Forward left: ``int exp(-2 pi i xi^T M x) f(x) dx``; forward right uses
    ``x^T M xi``. Inverse left: ``|det M| int exp(2 pi i xi^T M x) f(xi) dxi``
    evaluated at ``x``; inverse right uses ``x^T M xi``.
    """
    M = np.atleast_2d(np.asarray(M, dtype=float))
    n = M.shape[0]
    h = 2 * half / n_points
    axis = -half + h * np.arange(n_points)
    nodes = np.array(list(itertools.product(axis, repeat=n)))
    vals = func(nodes)
    pts = np.atleast_2d(np.asarray(xi, dtype=float))
    out = []
    for p in pts:
        if not inverse:
            phase = nodes @ (M.T @ p) if side == "left" else nodes @ (M @ p)
            out.append(h ** n * np.sum(np.exp(-2j * np.pi * phase) * vals))
        else:
            # nodes are frequencies; left kernel b(xi, x) = xi^T M x, right b(x, xi) = x^T M xi
            phase = nodes @ (M @ p) if side == "left" else nodes @ (M.T @ p)
            out.append(abs(np.linalg.det(M)) * h ** n * np.sum(np.exp(2j * np.pi * phase) * vals))
    return np.array(out)


def brute_lattice_points(G, radius, box=5):
    G = np.asarray(G, dtype=float)
    n = G.shape[0]
    pts = [G @ np.array(k) for k in itertools.product(range(-box, box + 1), repeat=n)]
    return sorted((tuple(p) for p in pts if np.linalg.norm(p) <= radius))
