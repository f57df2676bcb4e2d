"""Appell F1, F2 and Lauricella F_D^(n) on real arguments.

The F_D series is summed by total degree s:

    F_D = sum_s (a)_s / (c)_s * e_s,

where e_s is the t^s coefficient of prod_i (1 - z_i t)^(-b_i).  The e_s come
from convolving the binomial series of each factor, which keeps every term
O(1) and converges whenever max |z_i| < 1.  The truncation degree is doubled
until two successive sums agree.  F2 is summed shell by shell in the total
degree, each shell generated from the previous one by term ratios.

Outside the series region we fall back on integral representations: the
one-dimensional Euler integral (c > a > 0) or the Dirichlet simplex integral
(b_i > 0, c > sum b_i).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import integrate

from .errors import DomainError, NoConvergence, PoleAtC
from .special_fn import gauss_2f1, is_nonpositive_int

SERIES_TOL = 1e-12
FD_SERIES_RADIUS = 0.95
F1_SERIES_RADIUS = 0.4
MAX_DEGREE = 1 << 16


@dataclass(frozen=True)
class LauricellaParams:
    a: float
    alphas: tuple[float, ...]
    c: float

    def __post_init__(self):
        if not self.alphas:
            raise DomainError("F_D needs at least one variable")
        if is_nonpositive_int(self.c):
            raise PoleAtC(f"c = {self.c} is a non-positive integer")


def _pochhammer_ratio(a: float, c: float, n: int) -> np.ndarray:
    """(a)_s / (c)_s for s = 0..n-1 by running products."""
    s = np.arange(n - 1, dtype=float)
    r = np.empty(n)
    r[0] = 1.0
    r[1:] = np.cumprod((a + s) / (c + s))
    return r


def _binomial_series(b: float, z: float, n: int) -> np.ndarray:
    """Coefficients of (1 - z t)^(-b): (b)_k z^k / k!."""
    k = np.arange(n - 1, dtype=float)
    g = np.empty(n)
    g[0] = 1.0
    g[1:] = np.cumprod((b + k) * z / (k + 1.0))
    return g


def _fd_truncated(a, bs, c, zs, n):
    e = np.ones(1)
    for b, z in zip(bs, zs):
        e = np.convolve(e, _binomial_series(b, z, n))[:n]
    terms = _pochhammer_ratio(a, c, n) * e
    return math.fsum(terms.tolist()), terms


def _doubling(fn, tol, what):
    n = 32
    prev, _ = fn(n)
    while n < MAX_DEGREE:
        n *= 2
        cur, terms = fn(n)
        tail = float(np.max(np.abs(terms[n // 2:])))
        if abs(cur - prev) <= tol * max(1.0, abs(cur)) and tail <= tol * max(1.0, abs(cur)):
            return cur
        prev = cur
    raise NoConvergence(f"{what} series did not converge by degree {MAX_DEGREE}")


def lauricella_fd_series(a: float, alphas: Sequence[float], c: float,
                         zs: Sequence[float], tol: float = SERIES_TOL) -> float:
    if max(abs(z) for z in zs) >= 1.0:
        raise DomainError("F_D series needs |z_i| < 1")
    return _doubling(lambda n: _fd_truncated(a, alphas, c, zs, n), tol, "F_D")


def lauricella_fd_euler(a: float, alphas: Sequence[float], c: float,
                        zs: Sequence[float], tol: float = 1e-11) -> float:
    """Gamma(c)/(Gamma(a)Gamma(c-a)) int t^(a-1)(1-t)^(c-a-1) prod (1-z_i t)^(-b_i)."""
    if not c > a > 0:
        raise DomainError(f"single-integral representation needs c > a > 0 (a={a}, c={c})")
    f = lambda t: math.prod((1.0 - z * t) ** (-b) for b, z in zip(alphas, zs))
    val, _ = integrate.quad(f, 0.0, 1.0, weight="alg", wvar=(a - 1.0, c - a - 1.0),
                            epsabs=tol * 1e-3, epsrel=tol * 1e-2, limit=400)
    return math.exp(math.lgamma(c) - math.lgamma(a) - math.lgamma(c - a)) * val


def lauricella_fd_dirichlet(a: float, alphas: Sequence[float], c: float,
                            zs: Sequence[float], tol: float = 1e-11) -> float:
    """Dirichlet simplex representation; needs b_i > 0 and c > sum b_i."""
    from .simplex import dirichlet_integral

    b0 = c - sum(alphas)
    if b0 <= 0 or min(alphas) <= 0:
        raise DomainError("Dirichlet representation needs b_i > 0 and c > sum b_i")
    z = np.asarray(zs, dtype=float)
    val = dirichlet_integral((b0, *alphas), lambda u: (1.0 - u @ z) ** (-a), tol)
    lnorm = math.lgamma(c) - math.lgamma(b0) - sum(math.lgamma(b) for b in alphas)
    return math.exp(lnorm) * val


def lauricella_fd(p: LauricellaParams | float, zs: Sequence[float] | None = None,
                  tol: float = SERIES_TOL, *, alphas=None, c=None) -> float:
    """F_D^(n)(a; b_1..b_n; c; z_1..z_n) for real z_i < 1.

    Call as ``lauricella_fd(LauricellaParams(a, alphas, c), zs)`` or
    ``lauricella_fd(a, zs, alphas=..., c=...)``.
    """
    if not isinstance(p, LauricellaParams):
        p = LauricellaParams(float(p), tuple(float(b) for b in alphas), float(c))
    zs = [float(z) for z in zs]
    if len(zs) != len(p.alphas):
        raise DomainError(f"{len(p.alphas)} parameters but {len(zs)} arguments")
    if any(z >= 1.0 for z in zs):
        raise DomainError("all arguments must be < 1")
    # drop variables that cannot contribute
    keep = [(b, z) for b, z in zip(p.alphas, zs) if z != 0.0 and b != 0.0]
    if not keep:
        return 1.0
    a, c = p.a, p.c
    bs, zs = [b for b, _ in keep], [z for _, z in keep]
    if len(bs) == 1:
        return gauss_2f1(a, bs[0], c, zs[0], tol)
    if max(abs(z) for z in zs) < FD_SERIES_RADIUS:
        return lauricella_fd_series(a, bs, c, zs, tol)
    if all(z < 0 for z in zs):
        # Pfaff-type map sends every argument into (0, 1)
        ws = [z / (z - 1.0) for z in zs]
        pref = math.prod((1.0 - z) ** (-b) for b, z in zip(bs, zs))
        if max(ws) < FD_SERIES_RADIUS:
            return pref * lauricella_fd_series(c - a, bs, c, ws, tol)
    if c > a > 0:
        return lauricella_fd_euler(a, bs, c, zs, max(tol, 1e-11))
    if min(bs) > 0 and c > sum(bs):
        return lauricella_fd_dirichlet(a, bs, c, zs, max(tol, 1e-11))
    raise NoConvergence("no convergent representation of F_D for these arguments")


def appell_f1(a: float, b: float, b2: float, c: float, x: float, y: float,
              tol: float = SERIES_TOL) -> float:
    """Appell F1(a; b, b'; c; x, y) for x, y < 1."""
    if is_nonpositive_int(c):
        raise PoleAtC(f"c = {c} is a non-positive integer")
    if x >= 1.0 or y >= 1.0:
        raise DomainError("F1 needs x, y < 1")
    if abs(x) <= F1_SERIES_RADIUS and abs(y) <= F1_SERIES_RADIUS:
        return lauricella_fd_series(a, (b, b2), c, (x, y), tol)
    if b > 0 and b2 > 0 and c - b - b2 > 0 and not (max(abs(x), abs(y)) < FD_SERIES_RADIUS):
        return lauricella_fd_dirichlet(a, (b, b2), c, (x, y), max(tol, 1e-11))
    return lauricella_fd(a, (x, y), tol, alphas=(b, b2), c=c)


def _f2_shells(a, b, b2, c, c2, x, y, tol):
    """Sum F2 shell by shell in the total degree s = m + l.

    Each shell is produced from the previous one by term ratios, so no
    Pochhammer symbol or factorial is ever formed explicitly.
    """
    shell = np.ones(1)
    total = [1.0]
    quiet = 0
    s_mono = 2 * (abs(a) + abs(b) + abs(b2) + abs(c) + abs(c2)) + 10
    for s in range(1, MAX_DEGREE):
        m = np.arange(1, s + 1, dtype=float)
        nxt = np.empty(s + 1)
        nxt[0] = shell[0] * (a + s - 1) * (b2 + s - 1) * y / ((c2 + s - 1) * s)
        nxt[1:] = shell * (a + s - 1) * (b + m - 1) * x / ((c + m - 1) * m)
        shell = nxt
        contrib = math.fsum(shell.tolist())
        total.append(contrib)
        if s > s_mono and float(np.sum(np.abs(shell))) <= 1e-3 * tol * abs(math.fsum(total)):
            quiet += 1
            if quiet >= 5:
                return math.fsum(total)
        else:
            quiet = 0
    raise NoConvergence(f"F2 series did not converge by degree {MAX_DEGREE}")


def appell_f2(a: float, b: float, b2: float, c: float, c2: float, x: float, y: float,
              tol: float = SERIES_TOL) -> float:
    """Appell F2 by its double series; needs |x| + |y| < 1."""
    for cc in (c, c2):
        if is_nonpositive_int(cc):
            raise PoleAtC(f"lower parameter {cc} is a non-positive integer")
    if abs(x) + abs(y) >= 1.0:
        raise DomainError("F2 series needs |x| + |y| < 1")
    if x == 0.0 and y == 0.0:
        return 1.0
    return _f2_shells(a, b, b2, c, c2, x, y, tol)


def appell_f2_square(a: float, b: float, b2: float, c: float, c2: float, x: float,
                     y: float, tol: float = 1e-10) -> float:
    """F2 from its integral over the unit square (b, b' > 0, c > b, c' > b')."""
    if not (b > 0 and b2 > 0 and c > b and c2 > b2):
        raise DomainError("square integral needs c > b > 0 and c' > b' > 0")

    def inner(v):
        val, _ = integrate.quad(lambda u: (1.0 - x * u - y * v) ** (-a), 0.0, 1.0,
                                weight="alg", wvar=(b - 1.0, c - b - 1.0),
                                epsabs=tol * 1e-3, epsrel=tol * 1e-2, limit=200)
        return val

    val, _ = integrate.quad(inner, 0.0, 1.0, weight="alg", wvar=(b2 - 1.0, c2 - b2 - 1.0),
                            epsabs=tol * 1e-3, epsrel=tol * 1e-2, limit=200)
    lnorm = (math.lgamma(c) + math.lgamma(c2) - math.lgamma(b) - math.lgamma(b2)
             - math.lgamma(c - b) - math.lgamma(c2 - b2))
    return math.exp(lnorm) * val


def f2_reduction_pq(q: int, a: float, p: int, b: float, x: float, y: float,
                    tol: float = SERIES_TOL) -> float:
    """Right-hand side of the 2F1 reduction of F2(q+1, a, p+1; b, p+2; x, y)."""
    if not (isinstance(p, int) and isinstance(q, int) and 0 <= p < q):
        raise DomainError("reduction needs integers 0 <= p < q")
    if is_nonpositive_int(b):
        raise PoleAtC(f"b = {b} is a non-positive integer")
    if abs(x) + abs(y) >= 1.0 or y == 0.0:
        raise DomainError("reduction needs |x| + |y| < 1 and y != 0")
    poch = lambda s, k: math.prod(s + i for i in range(k))
    pref = (p + 1) / y ** (p + 1)
    lead = -math.factorial(p) / (q * poch(1 - q, p)) * pref * gauss_2f1(a, q - p, b, x, tol)
    w = x / (1.0 - y)
    outer = []
    for k in range(p + 1):
        inner = math.fsum(
            (-x) ** mm * math.comb(p - k, mm) * poch(a, mm) / poch(b, mm)
            * gauss_2f1(a + mm, q - k, b + mm, w, tol)
            for mm in range(p - k + 1)
        )
        outer.append((-1) ** k / ((q - k) * (1.0 - y) ** (q - k)) * math.comb(p, k) * inner)
    return lead + pref * math.fsum(outer)
