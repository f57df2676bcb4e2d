"""Tensor Gauss-Jacobi rules on the standard simplex via the Duffy map.

With stick-breaking coordinates u_1 = s_1, u_i = s_i prod_{k<i} (1 - s_k),
the Dirichlet weight prod u_i^(e_i - 1) (1 - sum u)^(e_0 - 1) times the
Jacobian factorises into s_i^(e_i - 1) (1 - s_i)^(e_0 + e_{i+1} + ... + e_n - 1),
so every boundary power is absorbed exactly by a one-dimensional Jacobi rule.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Callable, Sequence

import numpy as np
from scipy.special import roots_jacobi

from .errors import NoConvergence

START_ORDER = 8
MAX_POINTS = 4_000_000


@lru_cache(maxsize=256)
def _jacobi01(order: int, p: float, q: float) -> tuple[np.ndarray, np.ndarray]:
    """Nodes/weights on [0, 1] for the weight s^p (1 - s)^q."""
    x, w = roots_jacobi(order, q, p)
    return (x + 1.0) / 2.0, w / 2.0 ** (1.0 + p + q)


@lru_cache(maxsize=128)
def simplex_rule(exponents: tuple[float, ...], order: int) -> tuple[np.ndarray, np.ndarray]:
    """Points u (N x n) and weights for the Dirichlet weight with ``exponents``.

    ``exponents`` is (e_0, e_1, ..., e_n); the weight is
    (1 - sum u)^(e_0 - 1) prod u_i^(e_i - 1).  With all e = 1 the weights sum
    to 1/n!.
    """
    e0, es = exponents[0], exponents[1:]
    n = len(es)
    if n == 0:
        return np.zeros((1, 0)), np.ones(1)
    grids, wts = [], []
    for i in range(n):
        q = e0 + sum(es[i + 1:]) - 1.0
        s, w = _jacobi01(order, es[i] - 1.0, q)
        grids.append(s)
        wts.append(w)
    mesh = np.meshgrid(*grids, indexing="ij")
    wmesh = np.meshgrid(*wts, indexing="ij")
    s = np.stack([g.ravel() for g in mesh], axis=1)
    w = np.prod(np.stack([g.ravel() for g in wmesh], axis=1), axis=1)
    u = np.empty_like(s)
    rest = np.ones(s.shape[0])
    for i in range(n):
        u[:, i] = s[:, i] * rest
        rest = rest * (1.0 - s[:, i])
    u.setflags(write=False)
    w.setflags(write=False)
    return u, w


def dirichlet_integral(exponents: Sequence[float], f: Callable[[np.ndarray], np.ndarray],
                       tol: float = 1e-12, start: int = START_ORDER) -> float:
    """int over the simplex of (1 - sum u)^(e0-1) prod u_i^(e_i-1) f(u) du.

    ``f`` receives an (N, n) array of points and returns N values.  The order
    is doubled until successive estimates differ by less than tol (relative
    to max(1, |I|)).
    """
    exponents = tuple(float(e) for e in exponents)
    n = len(exponents) - 1
    if n == 0:
        return float(np.asarray(f(np.zeros((1, 0))), dtype=float).reshape(-1)[0])
    order = start
    u, w = simplex_rule(exponents, order)
    prev = float(np.dot(w, f(u)))
    while True:
        order *= 2
        if order**n > MAX_POINTS:
            raise NoConvergence(
                f"simplex quadrature did not reach tol={tol} within {MAX_POINTS} points"
            )
        u, w = simplex_rule(exponents, order)
        cur = float(np.dot(w, f(u)))
        if abs(cur - prev) <= tol * max(1.0, abs(cur)):
            return cur
        prev = cur
