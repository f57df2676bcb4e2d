"""Gauss hypergeometric function 2F1 on the real branch z < 1.

Evaluation dispatches between the raw power series (|z| <= 0.5), a Pfaff
transformed series (z < -0.5) and the Euler transformed series
(0.5 < z < 1).  The remaining operations express the classical identities
(contiguity, Pfaff/Euler, the hypergeometric ODE) as residuals so that they
can be checked numerically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

from scipy import integrate

from .errors import DomainError, NoConvergence, PoleAtC

SERIES_TOL = 1e-12
QUAD_TOL = 1e-10
MAX_TERMS = 10**6
DISPATCH_RADIUS = 0.5


def is_nonpositive_int(x: float) -> bool:
    return x <= 0 and float(x).is_integer()


@dataclass(frozen=True)
class GaussParams:
    a: float
    b: float
    c: float

    def __post_init__(self):
        if is_nonpositive_int(self.c):
            raise PoleAtC(f"c = {self.c} is a non-positive integer")

    def shifted(self, da=0, db=0, dc=0) -> "GaussParams":
        return GaussParams(self.a + da, self.b + db, self.c + dc)


def _check(a, b, c, z):
    if is_nonpositive_int(c):
        raise PoleAtC(f"c = {c} is a non-positive integer")
    if not math.isfinite(z):
        raise DomainError(f"z = {z} is not finite")
    if z >= 1.0:
        raise DomainError(f"z = {z} lies on or beyond the branch point z = 1")


def _series(a, b, c, z, tol, max_terms):
    """Sum the defining series; requires |z| < 1 unless it terminates."""
    terms = [1.0]
    t = 1.0
    running = 1.0  # cheap estimate of the sum, only used for the stopping scale
    # past this index the term ratio is monotone in n
    n_mono = math.ceil(abs(a) + abs(b) + abs(c)) + 2
    az = abs(z)
    for n in range(max_terms):
        num = (a + n) * (b + n)
        if num == 0.0:
            return math.fsum(terms)
        ratio = num / ((c + n) * (n + 1)) * z
        t *= ratio
        terms.append(t)
        running += t
        if n + 1 >= n_mono:
            rho = max(abs(ratio), az)
            if rho < 1.0 and abs(t) * rho / (1.0 - rho) <= 1e-4 * tol * abs(running):
                return math.fsum(terms)
    raise NoConvergence(
        f"2F1({a}, {b}; {c}; {z}) series did not reach tol={tol} in {max_terms} terms"
    )


def gauss_2f1(a: float, b: float, c: float, z: float, tol: float = SERIES_TOL,
              max_terms: int = MAX_TERMS) -> float:
    """2F1(a, b; c; z) for real z < 1."""
    _check(a, b, c, z)
    if z == 0.0:
        return 1.0
    if is_nonpositive_int(a) or is_nonpositive_int(b):
        return _series(a, b, c, z, tol, max_terms)
    if abs(z) <= DISPATCH_RADIUS:
        return _series(a, b, c, z, tol, max_terms)
    if z < -DISPATCH_RADIUS:
        w = z / (z - 1.0)
        return (1.0 - z) ** (-a) * gauss_2f1(a, c - b, c, w, tol, max_terms)
    # 0.5 < z < 1: flip to the side where the terms decay faster
    if c - a - b < 0:
        return (1.0 - z) ** (c - a - b) * _series(c - a, c - b, c, z, tol, max_terms)
    return _series(a, b, c, z, tol, max_terms)


def gauss_2f1_deriv(a: float, b: float, c: float, z: float, k: int = 1,
                    tol: float = SERIES_TOL) -> float:
    """k-th z-derivative via d/dz F(a,b;c) = (ab/c) F(a+1,b+1;c+1)."""
    coef = 1.0
    for i in range(k):
        coef *= (a + i) * (b + i) / (c + i)
    if coef == 0.0:
        return 0.0
    return coef * gauss_2f1(a + k, b + k, c + k, z, tol)


def gauss_2f1_euler_integral(a: float, b: float, c: float, z: float,
                             tol: float = QUAD_TOL) -> float:
    """Euler integral Gamma(c)/(Gamma(b)Gamma(c-b)) int t^(b-1)(1-t)^(c-b-1)(1-zt)^(-a)."""
    if not (b > 0 and c > b):
        raise DomainError(f"Euler integral needs c > b > 0, got b={b}, c={c}")
    _check(a, b, c, z)
    val, _err = integrate.quad(
        lambda t: (1.0 - z * t) ** (-a), 0.0, 1.0,
        weight="alg", wvar=(b - 1.0, c - b - 1.0),
        epsabs=tol * 1e-3, epsrel=tol * 1e-2, limit=400,
    )
    lnorm = math.lgamma(c) - math.lgamma(b) - math.lgamma(c - b)
    return math.exp(lnorm) * val


def _zdf_lines(a, b, c, z, tol):
    """The six contiguous-function expressions for z F'(z)."""
    for cc in (c, c - 1.0, c + 1.0):
        if is_nonpositive_int(cc):
            raise PoleAtC(f"shifted lower parameter {cc} is a non-positive integer")
    F = gauss_2f1(a, b, c, z, tol)
    f = lambda da=0, db=0, dc=0: gauss_2f1(a + da, b + db, c + dc, z, tol)
    lines = [
        a * (f(da=1) - F),
        b * (f(db=1) - F),
        (c - 1.0) * (f(dc=-1) - F),
        ((c - a) * f(da=-1) + (a - c + b * z) * F) / (1.0 - z),
        ((c - b) * f(db=-1) + (b - c + a * z) * F) / (1.0 - z),
        z * ((c - a) * (c - b) * f(dc=1) + c * (a + b - c) * F) / (c * (1.0 - z)),
    ]
    return F, lines


def contiguous_residuals(a: float, b: float, c: float, z: float,
                         tol: float = SERIES_TOL) -> list[float]:
    """All 15 pairwise differences of the contiguous expressions for z dF/dz.

    Each difference is divided by max(1, |F|, max |line|) so the check is
    meaningful in double precision when F is large.
    """
    if not -1.0 < z < 1.0:
        raise DomainError("contiguous relations are checked on -1 < z < 1")
    F, lines = _zdf_lines(a, b, c, z, tol)
    scale = max(1.0, abs(F), *(abs(v) for v in lines))
    return [(u - v) / scale for u, v in combinations(lines, 2)]


def transform_check(a: float, b: float, c: float, z: float,
                    tol: float = SERIES_TOL) -> tuple[float, float, float]:
    """Scaled residuals of both Pfaff transformations and the Euler transformation."""
    _check(a, b, c, z)
    w = z / (z - 1.0)
    if w >= 1.0:
        raise DomainError(f"z/(z-1) = {w} is outside the real branch")
    F = gauss_2f1(a, b, c, z, tol)
    p1 = (1.0 - z) ** (-b) * gauss_2f1(c - a, b, c, w, tol)
    p2 = (1.0 - z) ** (-a) * gauss_2f1(a, c - b, c, w, tol)
    eu = (1.0 - z) ** (c - a - b) * gauss_2f1(c - a, c - b, c, z, tol)
    scale = max(1.0, abs(F))
    return ((F - p1) / scale, (F - p2) / scale, (F - eu) / scale)


def ode_residual(a: float, b: float, c: float, z: float, h: float = 1e-4,
                 w=None) -> float:
    """|z(1-z)w'' + (c-(a+b+1)z)w' - ab w| with central differences.

    ``w`` defaults to 2F1(a, b; c; .); pass another callable to probe the
    residual of a non-solution.
    """
    if not -0.9 < z < 0.9:
        raise DomainError("ODE residual is evaluated on -0.9 < z < 0.9")
    if w is None:
        w = lambda x: gauss_2f1(a, b, c, x)
    wm, w0, wp = w(z - h), w(z), w(z + h)
    d1 = (wp - wm) / (2.0 * h)
    d2 = (wp - 2.0 * w0 + wm) / (h * h)
    return abs(z * (1.0 - z) * d2 + (c - (a + b + 1.0) * z) * d1 - a * b * w0)


def kummer_1f1(a: float, b: float, x: float, tol: float = SERIES_TOL) -> float:
    """Confluent 1F1(a; b; x) by its power series (real x)."""
    if is_nonpositive_int(b):
        raise PoleAtC(f"b = {b} is a non-positive integer")
    terms = [1.0]
    t = running = 1.0
    for n in range(MAX_TERMS):
        t *= (a + n) / ((b + n) * (n + 1)) * x
        terms.append(t)
        running += t
        if t == 0.0 or (n > abs(x) + abs(a) and abs(t) <= tol * abs(running) * 1e-2):
            return math.fsum(terms)
    raise NoConvergence(f"1F1({a}; {b}; {x}) did not converge")


def kummer_1f1_integral(a: float, b: float, x: float, tol: float = QUAD_TOL) -> float:
    """Gamma(b)/(Gamma(a)Gamma(b-a)) int_0^1 e^(xt) t^(a-1) (1-t)^(b-a-1) dt."""
    if not (a > 0 and b > a):
        raise DomainError(f"integral representation needs b > a > 0, got a={a}, b={b}")
    val, _err = integrate.quad(
        lambda t: math.exp(x * t), 0.0, 1.0, weight="alg", wvar=(a - 1.0, b - a - 1.0),
        epsabs=tol * 1e-3, epsrel=tol * 1e-2, limit=400,
    )
    return math.exp(math.lgamma(b) - math.lgamma(a) - math.lgamma(b - a)) * val
