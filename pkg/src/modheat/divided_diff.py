"""Divided differences over real nodes with multiplicities.

Distinct nodes use the symmetric sum formula; repeated nodes go through the
Hermite table, which needs derivatives.  Derivatives come from an oracle
``deriv(x, k)`` when one is supplied, otherwise from Richardson-extrapolated
central differences.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from .errors import DerivativeUnavailable, DomainError

MERGE_TOL = 1e-8

Deriv = Callable[[float, int], float]


@dataclass(frozen=True)
class NodeList:
    """Grouped nodes: ``values[i]`` carries multiplicity ``mults[i]``."""

    values: tuple[float, ...]
    mults: tuple[int, ...]

    def __post_init__(self):
        if len(self.values) != len(self.mults) or not self.values:
            raise DomainError("node list must be non-empty with one multiplicity per value")
        if any(k < 1 for k in self.mults):
            raise DomainError("multiplicities must be >= 1")

    @property
    def order(self) -> int:
        """n, where n + 1 is the total number of nodes counted with multiplicity."""
        return sum(self.mults) - 1

    @property
    def confluent(self) -> bool:
        return any(k > 1 for k in self.mults)

    def expanded(self) -> list[float]:
        return [v for v, k in zip(self.values, self.mults) for _ in range(k)]

    @classmethod
    def build(cls, nodes: Iterable, merge_tol: float = MERGE_TOL) -> "NodeList":
        """Accept floats and/or ``(value, multiplicity)`` pairs.

        Values closer than ``merge_tol * scale`` are merged into one confluent
        node placed at their multiplicity-weighted mean.
        """
        pairs = []
        for item in nodes:
            if isinstance(item, (tuple, list)):
                v, k = item
            else:
                v, k = item, 1
            pairs.append((float(v), int(k)))
        if not pairs:
            raise DomainError("empty node list")
        pairs.sort()
        scale = max(1.0, max(abs(v) for v, _ in pairs))
        groups: list[list[tuple[float, int]]] = [[pairs[0]]]
        for v, k in pairs[1:]:
            if v - groups[-1][-1][0] <= merge_tol * scale:
                groups[-1].append((v, k))
            else:
                groups.append([(v, k)])
        values, mults = [], []
        for g in groups:
            tot = sum(k for _, k in g)
            values.append(sum(v * k for v, k in g) / tot)
            mults.append(tot)
        return cls(tuple(values), tuple(mults))


@dataclass
class Func1D:
    f: Callable[[float], float]
    deriv: Optional[Deriv] = None
    allow_fd: bool = True
    fd_cache: dict = field(default_factory=dict, repr=False)

    def derivative(self, x: float, k: int) -> float:
        if k == 0:
            return self.f(x)
        if self.deriv is not None:
            return self.deriv(x, k)
        if not self.allow_fd:
            raise DerivativeUnavailable(
                f"order-{k} derivative needed at {x} but no oracle was supplied"
            )
        key = (x, k)
        if key not in self.fd_cache:
            self.fd_cache[key] = fd_derivative(self.f, x, k)
        return self.fd_cache[key]


def _as_func(f) -> Func1D:
    return f if isinstance(f, Func1D) else Func1D(f)


def _central(f, x, k, h):
    # k-th central difference with half-integer offsets collapsed for odd k
    acc = 0.0
    for i in range(k + 1):
        acc += (-1) ** i * math.comb(k, i) * f(x + (k / 2.0 - i) * h)
    return acc / h**k


def fd_derivative(f, x: float, k: int, h: Optional[float] = None) -> float:
    """Central difference of order k with one Richardson step (error O(h^4))."""
    if h is None:
        h = (1.0 + abs(x)) * 1e-5 ** (1.0 / k) if k > 1 else 1e-5 * (1.0 + abs(x))
    d1 = _central(f, x, k, h)
    d2 = _central(f, x, k, h / 2.0)
    return (4.0 * d2 - d1) / 3.0


def _distinct(f: Func1D, xs: Sequence[float]) -> float:
    total = []
    for l, xl in enumerate(xs):
        prod = 1.0
        for s, xs_ in enumerate(xs):
            if s != l:
                prod *= xl - xs_
        total.append(f.f(xl) / prod)
    return math.fsum(total)


def _hermite(f: Func1D, nodes: NodeList) -> float:
    zs = nodes.expanded()
    n = len(zs)
    table = [f.f(z) for z in zs]
    for k in range(1, n):
        nxt = []
        for i in range(n - k):
            lo, hi = zs[i], zs[i + k]
            if hi == lo:
                nxt.append(f.derivative(lo, k) / math.factorial(k))
            else:
                nxt.append((table[i + 1] - table[i]) / (hi - lo))
        table = nxt
    return table[0]


def divdiff(f, nodes, merge_tol: float = MERGE_TOL) -> float:
    """f[x_0, ..., x_n]; ``nodes`` is a NodeList or anything NodeList.build takes."""
    f = _as_func(f)
    if not isinstance(nodes, NodeList):
        nodes = NodeList.build(nodes, merge_tol)
    if len(nodes.values) == 1:
        k = nodes.mults[0] - 1
        return f.derivative(nodes.values[0], k) / math.factorial(k)
    if not nodes.confluent:
        return _distinct(f, nodes.values)
    return _hermite(f, nodes)


def divdiff_residue(f: Callable[[complex], complex], nodes, radius: float,
                    npts: int = 256) -> float:
    """(2 pi i)^-1 contour integral of f(z) / prod(z - x_i) on a circle.

    The circle is centred at the mean node value; the trapezoidal rule is
    spectrally accurate for analytic periodic integrands.
    """
    xs = nodes.expanded() if isinstance(nodes, NodeList) else NodeList.build(nodes, 0.0).expanded()
    center = sum(xs) / len(xs)
    if any(abs(x - center) >= radius for x in xs):
        raise DomainError("every node must lie strictly inside the contour")
    theta = 2.0 * np.pi * np.arange(npts) / npts
    z = center + radius * np.exp(1j * theta)
    denom = np.ones_like(z)
    for x in xs:
        denom *= z - x
    vals = np.array([complex(f(complex(zk))) for zk in z])
    # dz = i (z - c) dtheta, and the 2 pi i cancels against the mean
    return float(np.mean(vals * (z - center) / denom).real)


def leibniz_residual(f, g, nodes) -> float:
    """(fg)[x0,x1] - f(x0) g[x0,x1] - g(x1) f[x0,x1] for two distinct nodes."""
    xs = list(nodes.values) if isinstance(nodes, NodeList) else [float(v) for v in nodes]
    if len(xs) != 2 or xs[0] == xs[1]:
        raise DomainError("the product rule is checked on exactly two distinct nodes")
    x0, x1 = xs
    fg = lambda x: f(x) * g(x)
    return (divdiff(fg, [x0, x1]) - f(x0) * divdiff(g, [x0, x1])
            - g(x1) * divdiff(f, [x0, x1]))


def condition_estimate(nodes) -> float:
    """Amplification of function-value errors in the distinct-node formula."""
    if not isinstance(nodes, NodeList):
        nodes = NodeList.build(nodes)
    xs = nodes.values
    worst = 0.0
    for l, xl in enumerate(xs):
        prod = 1.0
        for s, x in enumerate(xs):
            if s != l:
                prod *= abs(xl - x)
        worst = max(worst, 1.0 / prod)
    return worst * len(xs)


__all__ = [
    "NodeList", "Func1D", "divdiff", "divdiff_residue", "leibniz_residual",
    "fd_derivative", "condition_estimate", "MERGE_TOL",
]
