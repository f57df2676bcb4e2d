"""The hypergeometric family H_alpha(z; m; j) and the companion G_alpha(s).

    H_alpha(z; m; j) = Gamma(d+1) int_{simplex} w_alpha(u) (1 - z.u)^(-d-1) du,
    d = |alpha| + (m - j)/2 - 2,

with w_alpha(u) = (1 - sum u)^(alpha_0 - 1) prod u_s^(alpha_s - 1) / prod Gamma(alpha_i).
The parameter alpha_l pairs with z_l.  Four routes are provided:

* ``h_alpha_quadrature``: Gauss-Jacobi quadrature of the simplex integral;
* ``h_alpha_via_fd``: Gamma(d+1)/Gamma(|alpha|) F_D(d+1; alpha_1..alpha_n; |alpha|; z);
* ``h_alpha_reduced``: a divided difference of z^(N-1) H_{alpha_0+N-1,1}(z) over the
  nodes z_l repeated alpha_l times (N = alpha_1 + ... + alpha_n), with H_{a,1}
  given by a single 2F1;
* ``h_even_m``: for even m >= 4, a (m-4)/2-th derivative at zero of an
  elementary product.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import integrate

from .divided_diff import Func1D, NodeList, divdiff, fd_derivative
from .errors import DomainError, NoConvergence
from .multivar_hyper import lauricella_fd
from .simplex import dirichlet_integral
from .special_fn import gauss_2f1

MAX_VARIABLES = 4
QUAD_TOL = 1e-11


@dataclass(frozen=True)
class MultiIndex:
    alpha: tuple[int, ...]

    def __post_init__(self):
        if not self.alpha:
            raise DomainError("multi-index must have at least alpha_0")
        if any(int(a) != a or a < 1 for a in self.alpha):
            raise DomainError(f"multi-index entries must be positive integers: {self.alpha}")
        object.__setattr__(self, "alpha", tuple(int(a) for a in self.alpha))

    @classmethod
    def of(cls, alpha) -> "MultiIndex":
        return alpha if isinstance(alpha, MultiIndex) else cls(tuple(alpha))

    @property
    def size(self) -> int:
        return sum(self.alpha)

    @property
    def n(self) -> int:
        return len(self.alpha) - 1

    def d(self, m: float, j: int = 2) -> float:
        return self.size + (m - j) / 2.0 - 2.0

    def __str__(self):
        return ",".join(map(str, self.alpha))


@dataclass(frozen=True)
class HFamilyArgs:
    zbar: tuple[float, ...]
    m: float
    j: int = 2


def _prepare(alpha, zbar, m, j):
    alpha = MultiIndex.of(alpha)
    z = tuple(float(v) for v in zbar)
    if len(z) != alpha.n:
        raise DomainError(f"alpha = ({alpha}) needs {alpha.n} arguments, got {len(z)}")
    if alpha.n > MAX_VARIABLES:
        raise DomainError(f"at most {MAX_VARIABLES} variables are supported")
    if any(v >= 1.0 for v in z):
        raise DomainError(f"every z_l must be < 1, got {z}")
    if j < 0:
        raise DomainError("j must be >= 0")
    d = alpha.d(m, j)
    if d <= -1.0:
        raise DomainError(f"d(alpha; m; j) = {d} must exceed -1")
    return alpha, z, d


def weight_omega(alpha, u: Sequence[float]) -> float:
    alpha = MultiIndex.of(alpha)
    u = [float(x) for x in u]
    if len(u) != alpha.n:
        raise DomainError("point dimension does not match the multi-index")
    rest = 1.0 - sum(u)
    val = rest ** (alpha.alpha[0] - 1)
    for a, x in zip(alpha.alpha[1:], u):
        val *= x ** (a - 1)
    return val / math.prod(math.gamma(a) for a in alpha.alpha)


# G_alpha ---------------------------------------------------------------------

def g_alpha_simplex(alpha, sbar: Sequence[float], tol: float = QUAD_TOL) -> float:
    """int_simplex w_alpha(u) exp(-B(s,u)), B = s_0 (1 - sum u) + sum s_l u_l."""
    alpha = MultiIndex.of(alpha)
    s = np.asarray(sbar, dtype=float)
    if s.shape != (alpha.n + 1,) or np.any(s <= 0):
        raise DomainError("need n+1 positive spectral parameters")
    norm = math.prod(math.gamma(a) for a in alpha.alpha)
    if alpha.n == 0:
        return math.exp(-s[0]) / norm
    ds = s[1:] - s[0]
    f = lambda u: np.exp(-s[0] - u @ ds)
    return dirichlet_integral(alpha.alpha, f, tol) / norm


def g_alpha_contour(alpha, sbar: Sequence[float], tol: float = QUAD_TOL) -> float:
    """(2 pi i)^-1 int e^(-lam) prod (s_j - lam)^(-alpha_j) dlam on the wedge.

    The contour runs in from infinity along lam = t(1 - i) and back out along
    lam = t(1 + i); by conjugate symmetry the value is Im(I)/pi with I the
    integral over the upper ray.
    """
    alpha = MultiIndex.of(alpha)
    s = np.asarray(sbar, dtype=float)
    if s.shape != (alpha.n + 1,) or np.any(s <= 0):
        raise DomainError("need n+1 positive spectral parameters")
    direction = 1.0 + 1.0j
    a = np.asarray(alpha.alpha, dtype=float)

    def im_part(t):
        lam = t * direction
        return (np.exp(-lam) * np.prod((s - lam) ** (-a)) * direction).imag

    # quad's roundoff warning is redundant with the error check below
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        val, err = integrate.quad(im_part, 0.0, np.inf, epsabs=tol * 1e-2, epsrel=tol,
                                  limit=500)
    if not np.isfinite(val) or err > 100 * tol * max(1.0, abs(val)):
        raise NoConvergence(f"contour quadrature error estimate {err} exceeds tolerance")
    return val / math.pi


# H_alpha ---------------------------------------------------------------------

def h_alpha_quadrature(alpha, zbar: Sequence[float], m: float, j: int = 2,
                       tol: float = QUAD_TOL) -> float:
    alpha, z, d = _prepare(alpha, zbar, m, j)
    norm = math.prod(math.gamma(a) for a in alpha.alpha)
    if alpha.n == 0:
        return math.gamma(d + 1.0) / norm
    zv = np.asarray(z)
    f = lambda u: (1.0 - u @ zv) ** (-d - 1.0)
    return math.gamma(d + 1.0) / norm * dirichlet_integral(alpha.alpha, f, tol)


def h_alpha_via_fd(alpha, zbar: Sequence[float], m: float, j: int = 2,
                   tol: float = 1e-13) -> float:
    alpha, z, d = _prepare(alpha, zbar, m, j)
    dt = d + 1.0
    pref = math.gamma(dt) / math.gamma(alpha.size)
    if alpha.n == 0:
        return pref
    return pref * lauricella_fd(dt, z, tol, alphas=alpha.alpha[1:], c=alpha.size)


def h_ab(a: int, b: int, z: float, m: float, j: int = 2, tol: float = 1e-13) -> float:
    """H_{a,b}(z; m; j) = Gamma(d~)/Gamma(a+b) 2F1(d~, b; a+b; z)."""
    dt = a + b + (m - j) / 2.0 - 1.0
    if dt <= 0:
        raise DomainError(f"d(alpha; m; j) = {dt - 1} must exceed -1")
    return math.gamma(dt) / math.gamma(a + b) * gauss_2f1(dt, b, a + b, z, tol)


def h_ab_deriv(a: int, b: int, z: float, m: float, k: int, j: int = 2) -> float:
    """d^k/dz^k H_{a,b} = (b)_k H_{a,b+k}."""
    if k == 0:
        return h_ab(a, b, z, m, j)
    return math.prod(b + i for i in range(k)) * h_ab(a, b + k, z, m, j)


def _reduction_kernel(a0: int, big_n: int, m: float, j: int) -> Func1D:
    """g(z) = z^(N-1) H_{a0+N-1,1}(z) with its exact derivatives."""
    top = a0 + big_n - 1
    p = big_n - 1

    def g(x):
        return x**p * h_ab(top, 1, x, m, j)

    def dg(x, k):
        acc = []
        for i in range(min(k, p) + 1):
            mono = math.perm(p, i) * x ** (p - i)
            acc.append(math.comb(k, i) * mono * h_ab_deriv(top, 1, x, m, k - i, j))
        return math.fsum(acc)

    return Func1D(g, dg, allow_fd=False)


def h_alpha_reduced(alpha, zbar: Sequence[float], m: float, j: int = 2) -> float:
    alpha, z, d = _prepare(alpha, zbar, m, j)
    if alpha.n == 0:
        return math.gamma(d + 1.0) / math.gamma(alpha.size)
    big_n = sum(alpha.alpha[1:])
    kernel = _reduction_kernel(alpha.alpha[0], big_n, m, j)
    nodes = NodeList.build(list(zip(z, alpha.alpha[1:])))
    return divdiff(kernel, nodes)


def reduction_condition(zbar: Sequence[float], alpha=None) -> float:
    """Condition estimate of the node set used by the reduction route."""
    from .divided_diff import condition_estimate

    mults = MultiIndex.of(alpha).alpha[1:] if alpha is not None else [1] * len(zbar)
    return condition_estimate(NodeList.build(list(zip(zbar, mults))))


def _taylor_factor(shift, e, order):
    """Taylor coefficients at 0 of (1 - shift - z)^(-e) up to z^order."""
    base = 1 - shift
    coef = [base ** (-e)]
    for k in range(order):
        coef.append(coef[-1] * (e + k) / ((k + 1) * base))
    return coef


def h_even_m(alpha, zbar: Sequence[float], m: int):
    """H_alpha for even m >= 4 and n <= 2 from the derivative formula.

    The j_m-th derivative at z = 0 of (1-z)^(-a0) prod (1-z_l-z)^(-alpha_l),
    j_m = (m-4)/2, is read off the product of Taylor series, so the result is
    exact for rational inputs (Fractions go through untouched).
    """
    alpha = MultiIndex.of(alpha)
    if alpha.n not in (1, 2):
        raise DomainError("the derivative formula covers one or two variables")
    if int(m) != m or m < 4 or int(m) % 2:
        raise DomainError(f"m = {m} must be an even integer >= 4")
    if len(zbar) != alpha.n or any(v >= 1 for v in zbar):
        raise DomainError("bad argument vector")
    jm = (int(m) - 4) // 2
    series = _taylor_factor(0, alpha.alpha[0], jm)
    for a, u in zip(alpha.alpha[1:], zbar):
        other = _taylor_factor(u, a, jm)
        series = [sum(series[i] * other[k - i] for i in range(k + 1)) for k in range(jm + 1)]
    return math.factorial(jm) * series[jm]


def h_alpha(alpha, zbar: Sequence[float], m: float, j: int = 2, route: str = "reduced"):
    routes = {
        "quadrature": h_alpha_quadrature,
        "fd": h_alpha_via_fd,
        "reduced": h_alpha_reduced,
        "even": lambda a, z, m, j=2: h_even_m(a, z, m),
    }
    if route not in routes:
        raise DomainError(f"unknown route {route!r}; choose from {sorted(routes)}")
    return routes[route](alpha, zbar, m, j)


def recursion_residuals_m(a: int, b: int, c: int | None, zbar: Sequence[float],
                          m: float, j: int = 2) -> list[float]:
    """Residuals of the m -> m+2 recursions, scaled by max(1, |H(m+2)|).

    Entry 0 is the index-raising form, entry 1 the differential form
    (d~_m + sum z_l d/dz_l) H(m) with central-difference derivatives.
    """
    alpha = (a, b) if c is None else (a, b, c)
    z = [float(v) for v in zbar]
    if len(z) != len(alpha) - 1:
        raise DomainError("argument count does not match the indices")
    H = lambda al, zz, mm: h_alpha_reduced(al, zz, mm, j)
    up = H(alpha, z, m + 2)
    raised = []
    for l in range(len(alpha)):
        bumped = list(alpha)
        bumped[l] += 1
        raised.append(alpha[l] * H(tuple(bumped), z, m))
    dt = sum(alpha) + (m - j) / 2.0 - 1.0
    euler = [dt * H(alpha, z, m)]
    for l in range(len(z)):
        def along(t, l=l):
            zz = list(z)
            zz[l] = t
            return H(alpha, zz, m)
        euler.append(z[l] * fd_derivative(along, z[l], 1))
    scale = max(1.0, abs(up))
    return [(up - math.fsum(raised)) / scale, (up - math.fsum(euler)) / scale]
