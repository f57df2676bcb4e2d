"""Rearrangement of the integrated b2 and the spectral functions K and H.

``rearrange`` turns each word b0^a0 k^e1 rho_1 b0^a1 k^e2 rho_2 ... of the
sphere-integrated b2 into a multi-index alpha, a power of k pulled to the
left, and a modular multiplier prod (1 - z_l)^(e_{l+1}) that records every
interior k moved across rho_1..rho_l.  The coefficient lists assembled from
these terms define K(y; m) (one variable, operand Tr hess k) and
H(y1, y2; m) (two variables, operand Tr grad k grad k), with
z = 1 - y, z1 = 1 - y1 and z2 = 1 - y1 y2.

Every spectral function is available by three routes: the H_alpha
combination, the hypergeometric form, and the closed form.  Closed forms are
evaluated in mpmath because they are dominated by cancellation near
y = 1, y1 y2 = 1 and m = 2.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Sequence

import mpmath

from .coeffs import LaurentM
from .divided_diff import Func1D, NodeList, divdiff
from .errors import DomainError, MalformedWord
from .h_family import MultiIndex, h_ab, h_alpha
from .multivar_hyper import appell_f1
from .special_fn import gauss_2f1
from .symbol_calculus import (SymbolPoly, collect_in_m, operand_tag, resolvent_b,
                              sphere_integrate, sphere_volume)

ROUTES = ("halpha", "hyper", "closed")
CLOSED_DPS = 120
CLOSED_EPS = mpmath.mpf("1e-15")
SINGULAR_BAND = 1e-6
# mpmath precision is process-global; workdps is not thread safe
_MP_LOCK = threading.Lock()


@dataclass(frozen=True)
class RearrangedTerm:
    """coeff * k^(k_exponent) * prod (1 - z_l)^multiplier[l-1] * H_alpha(z; m; j) [operand].

    ``k_shift`` is the sum of interior k powers; the k exponent is
    -(d + 1) + k_shift with d = |alpha| + (m - j)/2 - 2.
    """

    coeff: LaurentM
    alpha: MultiIndex
    k_shift: int
    multiplier: tuple[int, ...]
    operand: str | None
    j: int = 2

    def k_exponent(self, m: float) -> float:
        return -(self.alpha.d(m, self.j) + 1.0) + self.k_shift

    def describe(self) -> str:
        mult = " ".join(f"(1-z{l + 1})^{e}" if e > 1 else f"(1-z{l + 1})"
                        for l, e in enumerate(self.multiplier) if e)
        idx = ",".join(map(str, self.alpha.alpha))
        parts = [f"({self.coeff})", mult, f"H_{{{idx}}}"]
        return " ".join(p for p in parts if p) + (f" [{self.operand}]" if self.operand else "")


def _segments(word):
    """Split a normalized word into [(b0 power, k power)] runs and the rho letters."""
    runs, rhos = [[0, 0]], []
    for g in word:
        if g.kind == "b0":
            if runs[-1][1]:
                raise MalformedWord("b0 after k inside one segment; word is not normalized")
            runs[-1][0] += g.power
        elif g.kind == "k":
            runs[-1][1] += g.power
        else:
            rhos.append(g)
            runs.append([0, 0])
    return runs, rhos


def rearrange_term(t, coeff: LaurentM, j: int = 2) -> RearrangedTerm:
    if t.xi or t.deltas:
        raise MalformedWord("rearrangement needs a xi-free, fully contracted term")
    runs, rhos = _segments(t.word)
    alpha = [a for a, _ in runs]
    if any(a < 1 for a in alpha):
        raise MalformedWord(f"every segment needs a b0 factor, got powers {alpha}")
    size = sum(alpha)
    if t.r_power != 2 * size - 2 - j:
        raise MalformedWord(f"r^{t.r_power} does not match |alpha| = {size} at j = {j}")
    ks = [e for _, e in runs]
    return RearrangedTerm(coeff, MultiIndex(tuple(alpha)), sum(ks), tuple(ks[1:]),
                          operand_tag(t) if rhos else None, j)


def rearrange(poly: SymbolPoly, m: float | None = None, j: int = 2) -> list[RearrangedTerm]:
    """Rearranged terms for a xi-free polynomial, like terms collected in m.

    With ``m`` given, the d(alpha; m; j) > -1 guard is checked for every term.
    """
    out = [rearrange_term(t, c, j) for t, c in collect_in_m(poly)]
    if m is not None:
        for r in out:
            if r.alpha.d(m, j) <= -1:
                raise DomainError(f"d(alpha; m; j) <= -1 for alpha = {r.alpha.alpha}")
    return out


def overall_factor(m: float) -> float:
    """Vol(S^{m-1})/2, factored out of K and H."""
    return sphere_volume(m) / 2.0


@lru_cache(maxsize=1)
def spectral_terms() -> dict[str, tuple[RearrangedTerm, ...]]:
    """The K and H coefficient lists, derived from b2 through the full pipeline."""
    terms = rearrange(sphere_integrate(resolvent_b(2)))
    by_op: dict[str, list] = {"TraceHess": [], "TraceGradGrad": []}
    for r in terms:
        if r.operand not in by_op:
            raise MalformedWord(f"unexpected operand {r.operand!r}")
        by_op[r.operand].append(r)
    return {"K": tuple(by_op["TraceHess"]), "H": tuple(by_op["TraceGradGrad"])}


def coefficient_table(which: str) -> list[tuple[LaurentM, tuple[int, ...], tuple[int, ...]]]:
    """[(coefficient in m, alpha, multiplier exponents)] for ``which`` in {K, H}."""
    return [(r.coeff, r.alpha.alpha, r.multiplier) for r in spectral_terms()[which]]


# H_alpha route ------------------------------------------------------------------

def _check_y(*ys):
    for y in ys:
        if not (y > 0 and math.isfinite(y)):
            raise DomainError(f"modular variables must be positive, got {y}")


def _zbar(ys: Sequence[float]) -> list[float]:
    out, acc = [], 1.0
    for y in ys:
        acc *= y
        out.append(1.0 - acc)
    return out


def _h_term(alpha: MultiIndex, zs: list[float], m: float, h_route: str) -> float:
    # z_l = 0 aggregates the index into alpha_0 (exact, and avoids a node at 0)
    if h_route in ("reduced", "fd") and alpha.n >= 2 and any(z == 0.0 for z in zs):
        a0 = alpha.alpha[0] + sum(a for a, z in zip(alpha.alpha[1:], zs) if z == 0.0)
        rest = [(a, z) for a, z in zip(alpha.alpha[1:], zs) if z != 0.0]
        alpha = MultiIndex((a0, *(a for a, _ in rest)))
        zs = [z for _, z in rest]
    if h_route == "even":
        from .h_family import h_even_m

        return h_even_m(alpha, zs, m)
    return h_alpha(alpha, zs, m, 2, h_route)


def _combo(which: str, ys: Sequence[float], m: float, h_route: str) -> float:
    zs = _zbar(ys)
    acc = []
    for r in spectral_terms()[which]:
        mult = math.prod((1.0 - z) ** e for z, e in zip(zs, r.multiplier))
        acc.append(r.coeff(m) * mult * _h_term(r.alpha, zs, m, h_route))
    return math.fsum(acc)


# hypergeometric route -----------------------------------------------------------

def _k_hyper(y: float, m: float) -> float:
    z = 1.0 - y
    h = m / 2.0
    return (-0.5 * math.gamma(h + 1) * gauss_2f1(h + 1, 1, 3, z)
            + 2.0 * math.gamma(h + 2) / (3.0 * m) * gauss_2f1(h + 2, 1, 4, z))


def _h_hyper(y1: float, y2: float, m: float) -> float:
    z1, z2 = 1.0 - y1, 1.0 - y1 * y2
    h = m / 2.0
    f1 = lambda a, b, b2, c: appell_f1(a, b, b2, c, z1, z2)
    return (2 * (m + 2) * math.gamma(h + 2) * f1(h + 2, 1, 1, 4)
            - 2 * math.gamma(h + 3) * f1(h + 3, 1, 1, 5)
            - math.gamma(h + 3) * y1 * f1(h + 3, 2, 1, 5)) / (6.0 * m)


# closed forms -------------------------------------------------------------------

def _kc(y, m):
    h = m / 2
    return (-8 * y ** (-h) * ((m * (y - 1) - 4 * y) * y**h + y * (m * (y - 1) + 4))
            * mpmath.gamma(h + 2) / ((m - 2) * m**2 * (m + 2) * (y - 1) ** 3))


def _hc(y1, y2, m):
    h = m / 2
    w = y1 * y2
    pre = 8 / (m * m * (m - 2)) * (y1 - 1) ** -2 * (y2 - 1) ** -2 * (w - 1) ** -3 * mpmath.gamma(h + 1)
    br = (2 * y1 ** (-h) * (w - 1) ** 3
          + 2 * (y2 - 1) ** 2 * (h * (y1 - 1) * (w - 1) + y1 * (1 - 2 * y1) * y2 + 1)
          - 2 * (y1 - 1) ** 2 * y2 * w ** (-h) * (h * (y2 - 1) * (w - 1) + y1 * y2**2 + y2 - 2))
    return pre * br


def _h21c(z, m):
    h = m / 2
    return (2 * (1 - z) ** (-h) * (-((m - 2) * z + 2) * (1 - z) ** h - 2 * z + 2)
            * mpmath.gamma(h + 1) / ((m - 2) * m * z**2))


def _h31c(z, m):
    h = m / 2
    return ((1 - z) ** (-h) * (-((m - 2) * z * (m * z + 4) + 8) * (1 - z) ** h - 8 * z + 8)
            * mpmath.gamma(h + 2) / (m * (m * m - 4) * z**3))


def _h41c(z, m):
    h = m / 2
    return ((1 - z) ** (-h) * (-((m - 2) * z * (m * z * ((m + 2) * z + 6) + 24) + 48) * (1 - z) ** h
                               - 48 * (z - 1))
            * mpmath.gamma(h + 3) / (3 * (m - 2) * m * (m + 2) * (m + 4) * z**4))


def _closed_eval(fn: Callable, args: Sequence[float], singular: Callable[..., bool],
                 direction: Sequence[float]) -> float:
    """Evaluate a closed form at high precision, straddling removable points.

    At a removable point the value is the mean of fn at p +/- eps*direction,
    which is exact to O(eps^2).
    """
    with _MP_LOCK, mpmath.workdps(CLOSED_DPS):
        p = [mpmath.mpf(a) for a in args]
        if not singular(*args):
            return float(fn(*p))
        plus = fn(*(a + CLOSED_EPS * d for a, d in zip(p, direction)))
        minus = fn(*(a - CLOSED_EPS * d for a, d in zip(p, direction)))
        return float((plus + minus) / 2)


def _near(x, target):
    return abs(x - target) < SINGULAR_BAND


def closed_form_h1(kind: str, z: float, m: float) -> float:
    """Closed forms of H_{2,1}, H_{3,1}, H_{4,1} (j = 2)."""
    fns = {"H21": _h21c, "H31": _h31c, "H41": _h41c}
    if kind not in fns:
        raise DomainError(f"kind must be one of {sorted(fns)}")
    if not z < 1:
        raise DomainError("z must be < 1")
    if not m >= 2:
        raise DomainError("closed forms need m >= 2")
    return _closed_eval(fns[kind], (z, m),
                        lambda z, m: _near(z, 0) or _near(m, 2),
                        (1.0, 0.7))


def _k_closed(y: float, m: float) -> float:
    return _closed_eval(_kc, (y, m), lambda y, m: _near(y, 1) or _near(m, 2), (1.0, 0.7))


def _h_closed(y1: float, y2: float, m: float) -> float:
    sing = lambda a, b, m: _near(a, 1) or _near(b, 1) or _near(a * b, 1) or _near(m, 2)
    return _closed_eval(_hc, (y1, y2, m), sing, (1.0, 2.3, 0.7))


# public spectral functions ------------------------------------------------------

def _route(route: str) -> str:
    r = route.lower().replace("_", "")
    if r not in ROUTES:
        raise DomainError(f"route must be one of HAlpha, Hyper, Closed (got {route!r})")
    return r


def k_delta(y: float, m: float, route: str = "HAlpha", h_route: str = "reduced") -> float:
    """K(y; m).  ``h_route`` picks the H_alpha evaluator for the HAlpha route."""
    _check_y(y)
    if m < 2:
        raise DomainError("m must be >= 2")
    r = _route(route)
    if r == "halpha":
        return _combo("K", (y,), m, h_route)
    if r == "hyper":
        return _k_hyper(y, m)
    return _k_closed(y, m)


def h_delta(y1: float, y2: float, m: float, route: str = "HAlpha",
            h_route: str = "reduced") -> float:
    """H(y1, y2; m)."""
    _check_y(y1, y2)
    if m < 2:
        raise DomainError("m must be >= 2")
    r = _route(route)
    if r == "halpha":
        return _combo("H", (y1, y2), m, h_route)
    if r == "hyper":
        return _h_hyper(y1, y2, m)
    return _h_closed(y1, y2, m)


def k_derivative(y: float, m: float, k: int) -> float:
    """d^k K / dy^k from d^k/dz^k H_{a,b} = (b)_k H_{a,b+k}, z = 1 - y."""
    _check_y(y)
    z = 1.0 - y
    acc = []
    for r in spectral_terms()["K"]:
        a, b = r.alpha.alpha
        poch = math.prod(b + i for i in range(k))
        acc.append(r.coeff(m) * (-1) ** k * poch * h_ab(a, b + k, z, m))
    return math.fsum(acc)


def k_function(m: float) -> Func1D:
    """K(.; m) with its exact derivative oracle, for divided differences."""
    return Func1D(lambda y: k_delta(y, m), lambda y, k: k_derivative(y, m, k), allow_fd=False)


# identities ---------------------------------------------------------------------

K1 = Fraction(1, 6)


def t_function(y: float, form: str = "definitional") -> float:
    """T(y) at m = 2, either from K(1) and H(y, 1/y) or from the 2F1 form."""
    _check_y(y)
    if form == "simplified":
        return float(K1) * (1.0 / y - gauss_2f1(3, 1, 5, 1.0 - y))
    if form != "definitional":
        raise DomainError("form must be 'definitional' or 'simplified'")
    # -K(1) (y^-1 - 1)/(y - 1) = K(1)/y; the y2 = 1/y slice puts z2 exactly at 0
    z = 1.0 - y
    acc = []
    for r in spectral_terms()["H"]:
        mult = (1.0 - z) ** r.multiplier[0]
        acc.append(r.coeff(2) * mult * _h_term(r.alpha, [z, 0.0], 2.0, "reduced"))
    return k_delta(1.0, 2.0) / y + math.fsum(acc)


def gauss_bonnet_residual(y_grid: Sequence[float], form: str = "definitional") -> float:
    return max(abs(t_function(y, form) + y**-2 * t_function(1.0 / y, form)) for y in y_grid)


def cm_terms(y1: float, y2: float, m: float, form: str = "derived",
             route: str = "HAlpha") -> tuple[float, list[float]]:
    """(-H(y1, y2; m), [three divided-difference terms]).

    ``form='derived'`` uses the node sets {1/y1, y2}, {1/(y1 y2), 1/y2},
    {y1 y2, y1}; ``form='printed'`` swaps y2 and 1/y2 in the first two.
    """
    _check_y(y1, y2)
    if form not in ("derived", "printed"):
        raise DomainError("form must be 'derived' or 'printed'")
    w = y1 * y2
    if _route(route) == "halpha":
        kf = k_function(m)
    else:
        kf = Func1D(lambda y: k_delta(y, m, route))
    if form == "derived":
        n1, n2 = (1 / y1, y2), (1 / w, 1 / y2)
    else:
        n1, n2 = (1 / y1, 1 / y2), (1 / w, y2)
    t1 = y1 ** (-m / 2 - 2) * divdiff(kf, NodeList.build(n1))
    t2 = -(w ** (-m / 2 - 2)) * divdiff(kf, NodeList.build(n2))
    t3 = -divdiff(kf, NodeList.build((w, y1)))
    return -h_delta(y1, y2, m, route), [t1, t2, t3]


def cm_residual(y1: float, y2: float, m: float, form: str = "derived",
                route: str = "HAlpha") -> float:
    """|-H - sum of terms| relative to max(1, |-H|, |terms|)."""
    lhs, terms = cm_terms(y1, y2, m, form, route)
    scale = max(1.0, abs(lhs), *(abs(t) for t in terms))
    return abs(lhs - math.fsum(terms)) / scale


def cm_limit_m2(y1: float, y2: float, hs: Sequence[float] = (4e-3, 2e-3, 1e-3)) -> dict:
    """m -> 2+ check of the relation built from the closed forms.

    Both sides are evaluated at m = 2 + h for the three steps ``hs`` (ratio 2)
    and Richardson-extrapolated to h = 0.  Returns the extrapolated residual
    and the distance of the extrapolated -H from the H_alpha route at m = 2.
    """
    def sides(m):
        lhs, terms = cm_terms(y1, y2, m, route="Closed")
        return lhs, math.fsum(terms)

    vals = [sides(2.0 + h) for h in hs]

    def richardson(seq):
        # two rounds for an O(h) + O(h^2) error expansion with ratio 2
        r1 = [2 * seq[i + 1] - seq[i] for i in range(len(seq) - 1)]
        return (4 * r1[1] - r1[0]) / 3

    lhs = richardson([v[0] for v in vals])
    rhs = richardson([v[1] for v in vals])
    direct = -h_delta(y1, y2, 2.0)
    scale = max(1.0, abs(lhs), abs(rhs))
    return {"residual": abs(lhs - rhs) / scale,
            "vs_direct": abs(lhs - direct) / max(1.0, abs(direct)),
            "lhs": lhs, "rhs": rhs, "direct": direct}
