"""Noncommutative symbol calculus for the resolvent approximation of k*Laplacian.

A ``SymbolTerm`` is

    coeff * m^(-mpow) * r^r_power * prod xi_a * prod 1_{ab} * word,

where the word is an ordered product of generators b0^a, k^e, (grad k)_a and
(hess k)_{ab}.  Repeated abstract indices are summed.  Generators are never
commuted, with one exception: b0 = (k r^2 - lambda)^(-1) is a function of k,
so inside a maximal run of b0/k letters the powers are collected as
b0^a k^e.

The only symbol entering is p2 = k r^2 (p1 = p0 = 0); lambda never appears
explicitly.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Sequence

from .coeffs import I, LaurentM, QI
from .errors import UnsupportedDerivative, UnsupportedJ, UnsupportedXiDegree

INDEX_NAMES = ("j", "l", "p", "q", "s", "t")


@dataclass(frozen=True, order=True)
class Gen:
    kind: str  # "b0" | "k" | "grad" | "hess"
    power: int = 1
    idx: tuple[str, ...] = ()

    def __post_init__(self):
        if self.kind not in ("b0", "k", "grad", "hess"):
            raise ValueError(f"unknown generator {self.kind!r}")
        if self.kind == "hess":
            object.__setattr__(self, "idx", tuple(sorted(self.idx)))

    def token(self) -> str:
        if self.kind in ("b0", "k"):
            return self.kind if self.power == 1 else f"{self.kind}^{self.power}"
        return f"{self.kind}[{','.join(self.idx)}]"

    def latex(self) -> str:
        if self.kind == "b0":
            return "b_0" if self.power == 1 else f"b_0^{{{self.power}}}"
        if self.kind == "k":
            return "k" if self.power == 1 else f"k^{{{self.power}}}"
        if self.kind == "grad":
            return f"(\\nabla k)_{{{self.idx[0]}}}"
        return f"(\\nabla^2 k)_{{{''.join(self.idx)}}}"

    @classmethod
    def parse(cls, tok: str) -> "Gen":
        if "[" in tok:
            kind, rest = tok.split("[", 1)
            return cls(kind, 1, tuple(rest.rstrip("]").split(",")))
        kind, _, power = tok.partition("^")
        return cls(kind, int(power) if power else 1)


B0 = lambda a=1: Gen("b0", a)
K = lambda e=1: Gen("k", e)
Grad = lambda a: Gen("grad", 1, (a,))
Hess = lambda a, b: Gen("hess", 1, (a, b))


def normalize_word(word: Sequence[Gen]) -> tuple[Gen, ...]:
    """Collect b0/k runs into b0^a k^e; other letters stay in place."""
    out: list[Gen] = []
    b = e = 0

    def flush():
        nonlocal b, e
        if b:
            out.append(B0(b))
        if e:
            out.append(K(e))
        b = e = 0

    for g in word:
        if g.kind == "b0":
            b += g.power
        elif g.kind == "k":
            e += g.power
        else:
            flush()
            out.append(g)
    flush()
    return tuple(out)


@dataclass(frozen=True)
class SymbolTerm:
    coeff: QI
    word: tuple[Gen, ...] = ()
    r_power: int = 0
    xi: tuple[str, ...] = ()
    deltas: tuple[tuple[str, str], ...] = ()
    mpow: int = 0

    def indices(self) -> list[str]:
        seen: list[str] = []
        for g in self.word:
            for a in g.idx:
                if a not in seen:
                    seen.append(a)
        for a in self.xi + tuple(x for d in self.deltas for x in d):
            if a not in seen:
                seen.append(a)
        return seen

    def rename(self, mapping: dict[str, str]) -> "SymbolTerm":
        mp = lambda a: mapping.get(a, a)
        word = tuple(replace(g, idx=tuple(mp(a) for a in g.idx)) if g.idx else g
                     for g in self.word)
        # re-sort hessian slots after renaming
        word = tuple(Gen(g.kind, g.power, g.idx) for g in word)
        xi = tuple(sorted(mp(a) for a in self.xi))
        deltas = tuple(sorted(tuple(sorted((mp(a), mp(b)))) for a, b in self.deltas))
        return replace(self, word=word, xi=xi, deltas=deltas)

    def canonical(self) -> "SymbolTerm":
        names = self.indices()
        if len(names) > len(INDEX_NAMES):
            raise ValueError("too many distinct abstract indices")
        targets = INDEX_NAMES[: len(names)]
        best = None
        for perm in itertools.permutations(targets):
            cand = self.rename(dict(zip(names, perm)))
            key = cand.sort_key()
            if best is None or key < best[0]:
                best = (key, cand)
        out = best[1] if best else self.rename({})
        return replace(out, word=normalize_word(out.word))

    def like_key(self):
        return (tuple(g.token() for g in self.word), self.xi, self.deltas,
                self.r_power, self.mpow)

    def sort_key(self):
        return self.like_key()

    @property
    def degree(self) -> int:
        """xi-lambda homogeneity degree, lambda counting as 2 and b0 as -2."""
        b0 = sum(g.power for g in self.word if g.kind == "b0")
        return self.r_power + len(self.xi) - 2 * b0

    def m_coeff(self) -> LaurentM:
        if not self.coeff.is_real:
            raise ValueError("coefficient is not real")
        return LaurentM.mono(self.coeff.re, self.mpow)

    def __str__(self):
        parts = [str(self.coeff)]
        if self.mpow:
            parts.append(f"m^-{self.mpow}")
        if self.r_power:
            parts.append(f"r^{self.r_power}")
        parts += [f"xi[{a}]" for a in self.xi]
        parts += [f"1[{a},{b}]" for a, b in self.deltas]
        parts += [g.token() for g in self.word]
        return " ".join(parts)


def _mul_terms(s: SymbolTerm, t: SymbolTerm, shared: Iterable[str] = ()) -> SymbolTerm:
    """Product s*t; dummy indices of t are renamed apart except ``shared``."""
    shared = set(shared)
    used = set(s.indices())
    clash = [a for a in t.indices() if a in used and a not in shared]
    if clash:
        fresh = (f"_{n}" for n in itertools.count())
        mapping = {}
        for a in clash:
            name = next(fresh)
            while name in used:
                name = next(fresh)
            mapping[a] = name
        t = t.rename(mapping)
    return SymbolTerm(
        coeff=s.coeff * t.coeff,
        word=normalize_word(s.word + t.word),
        r_power=s.r_power + t.r_power,
        xi=tuple(sorted(s.xi + t.xi)),
        deltas=tuple(sorted(s.deltas + t.deltas)),
        mpow=s.mpow + t.mpow,
    )


@dataclass(frozen=True)
class SymbolPoly:
    terms: tuple[SymbolTerm, ...] = ()
    sphere_volume: bool = False  # True: value is Vol(S^{m-1}) times this sum

    @classmethod
    def from_terms(cls, terms: Iterable[SymbolTerm], sphere_volume: bool = False) -> "SymbolPoly":
        merged: dict = {}
        for t in terms:
            c = t.canonical()
            key = c.like_key()
            if key in merged:
                merged[key] = replace(merged[key], coeff=merged[key].coeff + c.coeff)
            else:
                merged[key] = c
        kept = sorted((t for t in merged.values() if t.coeff), key=SymbolTerm.sort_key)
        return cls(tuple(kept), sphere_volume)

    def __add__(self, o: "SymbolPoly") -> "SymbolPoly":
        return SymbolPoly.from_terms(self.terms + o.terms, self.sphere_volume)

    def __mul__(self, o: "SymbolPoly") -> "SymbolPoly":
        return SymbolPoly.from_terms(_mul_terms(s, t) for s in self.terms for t in o.terms)

    def scale(self, c) -> "SymbolPoly":
        return SymbolPoly.from_terms(replace(t, coeff=t.coeff * c) for t in self.terms)

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)

    def __str__(self):
        return "\n".join(str(t) for t in self.terms) or "0"


def poly(*terms: SymbolTerm) -> SymbolPoly:
    return SymbolPoly.from_terms(terms)


def term(coeff, word=(), r_power=0, xi=(), deltas=(), mpow=0) -> SymbolTerm:
    return SymbolTerm(QI.coerce(coeff), tuple(word), r_power, tuple(sorted(xi)),
                      tuple(sorted(tuple(sorted(d)) for d in deltas)), mpow)


# derivatives -------------------------------------------------------------------

def _vertical(t: SymbolTerm, mu: str) -> list[SymbolTerm]:
    """D_mu = d/dxi_mu, product rule over r-power, xi factors and b0 letters."""
    out = []
    if t.r_power:
        out.append(replace(t, coeff=t.coeff * t.r_power, r_power=t.r_power - 2,
                           xi=tuple(sorted(t.xi + (mu,)))))
    for i, a in enumerate(t.xi):
        rest = t.xi[:i] + t.xi[i + 1:]
        out.append(replace(t, xi=rest, deltas=tuple(sorted(t.deltas + (tuple(sorted((mu, a))),)))))
    for i, g in enumerate(t.word):
        if g.kind == "b0":
            # D b0^a = -a b0^(a+1) (D p2) = -2a xi_mu b0^(a+1) k
            word = t.word[:i] + (B0(g.power + 1), K(1)) + t.word[i + 1:]
            out.append(replace(t, coeff=t.coeff * (-2 * g.power), word=normalize_word(word),
                               xi=tuple(sorted(t.xi + (mu,)))))
    return out


def _horizontal(t: SymbolTerm, mu: str, allow_b0: bool = False) -> list[SymbolTerm]:
    """nabla_mu, acting on the word letters only (r and xi are constants)."""
    out = []
    for i, g in enumerate(t.word):
        pre, post = t.word[:i], t.word[i + 1:]
        if g.kind == "k":
            for s in range(g.power):
                mid = (K(s),) if s else ()
                tail = (K(g.power - 1 - s),) if g.power - 1 - s else ()
                out.append(replace(t, word=normalize_word(pre + mid + (Grad(mu),) + tail + post)))
        elif g.kind == "grad":
            out.append(replace(t, word=pre + (Hess(g.idx[0], mu),) + post))
        elif g.kind == "hess":
            raise UnsupportedDerivative("third derivatives of k are not needed for b2")
        elif g.kind == "b0":
            if not allow_b0:
                raise UnsupportedDerivative("horizontal derivative of b0 requested")
            # nabla b0 = -b0 (nabla p2) b0 = -r^2 b0 (grad k) b0, Leibniz over b0^a
            for s in range(g.power):
                left = (B0(s + 1),)
                right = (B0(g.power - s),)
                out.append(replace(t, coeff=-t.coeff, r_power=t.r_power + 2,
                                   word=normalize_word(pre + left + (Grad(mu),) + right + post)))
    return out


def vertical(p: SymbolPoly, mu: str) -> SymbolPoly:
    return SymbolPoly(tuple(x for t in p for x in _vertical(t, mu)))


def horizontal(p: SymbolPoly, mu: str, allow_b0: bool = False) -> SymbolPoly:
    return SymbolPoly(tuple(x for t in p for x in _horizontal(t, mu, allow_b0)))


def _fresh(p: SymbolPoly, q: SymbolPoly, count: int) -> list[str]:
    used = {a for t in itertools.chain(p, q) for a in t.indices()}
    names = (f"mu{n}" for n in itertools.count())
    return list(itertools.islice((n for n in names if n not in used), count))


def star_aj(p: SymbolPoly, q: SymbolPoly, j: int, allow_b0: bool = False) -> SymbolPoly:
    """a_j(p, q) = ((-i)^j / j!) sum D^mu p . nabla^mu q over |mu| = j."""
    if j < 0:
        raise UnsupportedJ("j must be non-negative")
    if not allow_b0 and any(g.kind == "b0" for t in q for g in t.word):
        raise UnsupportedDerivative("the right slot must be a polynomial symbol")
    mus = _fresh(p, q, j)
    dp, dq = SymbolPoly(p.terms), SymbolPoly(q.terms)
    for mu in mus:
        dp = vertical(dp, mu)
        dq = horizontal(dq, mu, allow_b0)
    prefactor = QI(1)
    for _ in range(j):
        prefactor = prefactor * (-I)
    prefactor = prefactor * QI(Fraction(1, _factorial(j)))
    terms = [_mul_terms(s, t, mus) for s in dp for t in dq]
    return SymbolPoly.from_terms(terms).scale(prefactor)


def _factorial(n: int) -> int:
    out = 1
    for k in range(2, n + 1):
        out *= k
    return out


def symbol_p(nu: int) -> SymbolPoly:
    """Homogeneous parts of the symbol of k*Laplacian: p2 = k r^2, p1 = p0 = 0."""
    if nu == 2:
        return poly(term(1, (K(1),), r_power=2))
    return SymbolPoly()


def resolvent_b(j: int) -> SymbolPoly:
    """b_j from b_j = (sum a_mu(b_l, p_nu)) (-b0) over mu + l + 2 - nu = j, l < j."""
    if j < 0 or j > 2:
        raise UnsupportedJ(f"b_{j} is outside the supported range 0..2")
    b0 = poly(term(1, (B0(1),)))
    if j == 0:
        return b0
    acc = SymbolPoly()
    for l in range(j):
        bl = resolvent_b(l)
        for nu in (0, 1, 2):
            mu = j + nu - l - 2
            p_nu = symbol_p(nu)
            if mu < 0 or not p_nu.terms:
                continue
            acc = acc + star_aj(bl, p_nu, mu)
    return acc * b0.scale(-1)


def sphere_integrate(p: SymbolPoly) -> SymbolPoly:
    """Average over the unit sphere, up to the overall factor Vol(S^{m-1}).

    xi_a xi_b -> (1/m) 1_{ab} r^2, odd monomials vanish, and every Kronecker
    delta is then contracted into the word.
    """
    out = []
    for t in p:
        deg = len(t.xi)
        if deg % 2:
            continue
        if deg > 2:
            raise UnsupportedXiDegree(f"xi monomial of degree {deg}")
        if deg == 2:
            a, b = t.xi
            t = replace(t, xi=(), r_power=t.r_power + 2, mpow=t.mpow + 1,
                        deltas=t.deltas + ((a, b),))
        out.append(_contract(t))
    return SymbolPoly.from_terms(out, sphere_volume=True)


def _contract(t: SymbolTerm) -> SymbolTerm:
    deltas = list(t.deltas)
    while deltas:
        a, b = deltas.pop()
        if a == b:
            raise ValueError("self-contracted delta (trace of identity) is not expected")
        mp = {b: a}
        t = replace(t, deltas=()).rename(mp)
        deltas = [tuple(sorted((mp.get(x, x), mp.get(y, y)))) for x, y in deltas]
    return t


def sphere_volume(m: float) -> float:
    import math

    return 2.0 * math.pi ** (m / 2.0) / math.gamma(m / 2.0)


def operand_tag(t: SymbolTerm) -> str | None:
    """TraceHess / TraceGradGrad for fully contracted words, else None."""
    letters = [g for g in t.word if g.kind in ("grad", "hess")]
    if not letters:
        return None
    if len(letters) == 1 and letters[0].kind == "hess" and letters[0].idx[0] == letters[0].idx[1]:
        return "TraceHess"
    if (len(letters) == 2 and all(g.kind == "grad" for g in letters)
            and letters[0].idx == letters[1].idx):
        return "TraceGradGrad"
    return None


def collect_in_m(p: SymbolPoly) -> list[tuple[SymbolTerm, LaurentM]]:
    """Merge terms differing only in their power of m into LaurentM coefficients."""
    groups: dict = {}
    for t in p:
        key = (tuple(g.token() for g in t.word), t.xi, t.deltas, t.r_power)
        lm = t.m_coeff()
        if key in groups:
            groups[key] = (groups[key][0], groups[key][1] + lm)
        else:
            groups[key] = (replace(t, coeff=QI(1), mpow=0), lm)
    return [v for _, v in sorted(groups.items()) if v[1]]


# serialization -----------------------------------------------------------------

def term_to_dict(t: SymbolTerm) -> dict:
    num, den = LaurentM.mono(t.coeff.re, t.mpow).as_fraction_polys()
    d = {
        "coeff": {"num": [str(c) for c in num], "den": [str(c) for c in den]},
        "r_power": t.r_power,
        "xi": list(t.xi),
        "deltas": [list(x) for x in t.deltas],
        "word": [g.token() for g in t.word],
    }
    if t.coeff.im:
        inum, _ = LaurentM.mono(t.coeff.im, t.mpow).as_fraction_polys()
        d["coeff"]["num_imag"] = [str(c) for c in inum]
    return d


def term_from_dict(d: dict) -> SymbolTerm:
    lm = LaurentM.from_fraction_polys(d["coeff"]["num"], d["coeff"]["den"])
    im = (LaurentM.from_fraction_polys(d["coeff"]["num_imag"], d["coeff"]["den"])
          if "num_imag" in d["coeff"] else LaurentM())
    powers = set(lm.coeffs) | set(im.coeffs)
    if len(powers) > 1:
        raise ValueError("a single term carries one power of m")
    p = powers.pop() if powers else 0
    coeff = QI(lm.coeffs.get(p, 0), im.coeffs.get(p, 0))
    return SymbolTerm(coeff, tuple(Gen.parse(w) for w in d["word"]), int(d["r_power"]),
                      tuple(d["xi"]), tuple(tuple(x) for x in d["deltas"]), p)


def poly_to_json(p: SymbolPoly, **dump) -> str:
    payload = {"sphere_volume": p.sphere_volume, "terms": [term_to_dict(t) for t in p]}
    return json.dumps(payload, **dump)


def poly_from_json(text: str) -> SymbolPoly:
    data = json.loads(text)
    return SymbolPoly.from_terms((term_from_dict(d) for d in data["terms"]),
                                 sphere_volume=bool(data.get("sphere_volume", False)))


def term_latex(t: SymbolTerm) -> str:
    c = t.coeff.re
    sign = "-" if c < 0 else "+"
    mag = abs(c)
    num = "" if mag == 1 else str(mag.numerator)
    factors = []
    if t.r_power:
        factors.append(f"r^{{{t.r_power}}}")
    factors += [f"\\xi_{{{a}}}" for a in t.xi]
    factors += [f"\\mathbf 1_{{{a}{b}}}" for a, b in t.deltas]
    factors += [g.latex() for g in t.word]
    body = " ".join(factors)
    den = mag.denominator
    if t.mpow or den != 1:
        dtxt = " ".join(x for x in (str(den) if den != 1 else "",
                                     "m" if t.mpow == 1 else f"m^{{{t.mpow}}}" if t.mpow else "") if x)
        return f"{sign} \\frac{{{num or '1'} {body}}}{{{dtxt}}}"
    return f"{sign} {num} {body}".replace("  ", " ")


def poly_latex(p: SymbolPoly) -> str:
    text = " ".join(term_latex(t) for t in p)
    return text[2:] if text.startswith("+ ") else text
