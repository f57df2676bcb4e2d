"""Exact coefficients for the symbol calculus.

``QI`` is a Gaussian rational re + i*im over Fractions.  ``LaurentM`` is a
finite sum of c_p * m^(-p) with rational c_p, which is all the m-dependence
that sphere integration can produce.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Union

Rat = Union[int, Fraction]


@dataclass(frozen=True)
class QI:
    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re", Fraction(self.re))
        object.__setattr__(self, "im", Fraction(self.im))

    @classmethod
    def coerce(cls, x) -> "QI":
        if isinstance(x, QI):
            return x
        return cls(Fraction(x))

    def __add__(self, o):
        o = QI.coerce(o)
        return QI(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return QI(-self.re, -self.im)

    def __sub__(self, o):
        return self + (-QI.coerce(o))

    def __mul__(self, o):
        o = QI.coerce(o)
        return QI(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    @property
    def is_real(self) -> bool:
        return self.im == 0

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return f"{self.im}i"
        return f"({self.re}{'+' if self.im > 0 else '-'}{abs(self.im)}i)"


I = QI(0, 1)


class LaurentM:
    """sum_p c_p m^(-p); immutable, zero coefficients dropped."""

    __slots__ = ("_c",)

    def __init__(self, coeffs: Mapping[int, Rat] | None = None):
        clean = {}
        for p, c in (coeffs or {}).items():
            c = Fraction(c)
            if c:
                clean[int(p)] = c
        self._c = dict(sorted(clean.items()))

    @classmethod
    def const(cls, c: Rat) -> "LaurentM":
        return cls({0: c})

    @classmethod
    def mono(cls, c: Rat, p: int) -> "LaurentM":
        return cls({p: c})

    @property
    def coeffs(self) -> dict[int, Fraction]:
        return dict(self._c)

    def __add__(self, o):
        o = o if isinstance(o, LaurentM) else LaurentM.const(o)
        out = dict(self._c)
        for p, c in o._c.items():
            out[p] = out.get(p, 0) + c
        return LaurentM(out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentM({p: -c for p, c in self._c.items()})

    def __sub__(self, o):
        return self + (-(o if isinstance(o, LaurentM) else LaurentM.const(o)))

    def __mul__(self, o):
        o = o if isinstance(o, LaurentM) else LaurentM.const(o)
        out: dict[int, Fraction] = {}
        for p, c in self._c.items():
            for q, d in o._c.items():
                out[p + q] = out.get(p + q, 0) + c * d
        return LaurentM(out)

    __rmul__ = __mul__

    def __eq__(self, o):
        if not isinstance(o, LaurentM):
            o = LaurentM.const(o)
        return self._c == o._c

    def __hash__(self):
        return hash(tuple(self._c.items()))

    def __bool__(self):
        return bool(self._c)

    def __call__(self, m: float) -> float:
        return sum(float(c) * m ** (-p) for p, c in self._c.items())

    def as_fraction_polys(self) -> tuple[list[Fraction], list[Fraction]]:
        """(numerator, denominator) coefficient lists, ascending powers of m."""
        if not self._c:
            return [Fraction(0)], [Fraction(1)]
        top = max(max(self._c), 0)
        low = min(min(self._c), 0)
        # multiply through by m^top; negative p become positive powers
        num = [Fraction(0)] * (top - low + 1)
        for p, c in self._c.items():
            num[top - p] += c
        den = [Fraction(0)] * top + [Fraction(1)]
        return num, den

    @classmethod
    def from_fraction_polys(cls, num, den) -> "LaurentM":
        num = [Fraction(c) for c in num]
        den = [Fraction(c) for c in den]
        nz = [k for k, c in enumerate(den) if c]
        if len(nz) != 1:
            raise ValueError("denominator must be a monomial in m")
        top, lead = nz[0], den[nz[0]]
        return cls({top - k: c / lead for k, c in enumerate(num) if c})

    def __str__(self):
        if not self._c:
            return "0"
        parts = []
        for p, c in self._c.items():
            parts.append(str(c) if p == 0 else f"{c}/m" if p == 1 else f"{c}/m^{p}")
        return " + ".join(parts).replace("+ -", "- ")

    __repr__ = __str__
