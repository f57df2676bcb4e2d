"""Acceptance criteria, one test each, at the stated tolerances.

Each test prints a single PASS/FAIL line (shown even under pytest capture).
Run directly with ``python3 tests/test_acceptance.py`` for just these lines.
"""

import itertools
import math
import time

import numpy as np
import pytest

from modheat.coeffs import LaurentM
from modheat.h_family import g_alpha_contour, g_alpha_simplex, h_alpha_quadrature
from modheat.special_fn import gauss_2f1
from modheat.spectral import closed_form_h1, coefficient_table, h_delta, k_delta
from modheat.symbol_calculus import (B0, K, Grad, Hess, collect_in_m, poly, resolvent_b,
                                     sphere_integrate, term)
from modheat.verify import run_suite


@pytest.fixture
def announce(capsys):
    def emit(n, title, ok, elapsed, budget, detail=""):
        line = (f"criterion {n:>2} {'PASS' if ok else 'FAIL'}  {title}  {detail}"
                f"  [{elapsed:.2f} s / {budget} s]")
        with capsys.disabled():
            print("\n" + line)
        assert ok, line
    return emit


def _max_rel(pairs):
    return max(abs(a - b) / max(1.0, abs(b)) for a, b in pairs)


def test_criterion_01_2f1_sanity(announce):
    t0 = time.perf_counter()
    zs = np.linspace(-0.9, 0.9, 52)[1:-1]
    log_err = _max_rel((gauss_2f1(1, 1, 2, z), -math.log1p(-z) / z if z else 1.0) for z in zs)
    rng = np.random.default_rng(2024)
    pts = zip(rng.uniform(0.2, 5, 50), rng.uniform(0.2, 5, 50), rng.uniform(-0.9, 0.9, 50))
    pow_err = _max_rel((gauss_2f1(a, b, b, z), (1 - z) ** (-a)) for a, b, z in pts)
    el = time.perf_counter() - t0
    worst = max(log_err, pow_err)
    announce(1, "2F1 sanity", worst < 1e-12 and el < 1, el, 1,
             f"log={log_err:.1e} power={pow_err:.1e} tol=1e-12")


def test_criterion_02_contiguity_and_transforms(announce):
    t0 = time.perf_counter()
    cont = run_suite("contiguous", {"samples": 100, "tol": 1e-10})
    trans = run_suite("transforms", {"samples": 100, "tol": 1e-10})
    el = time.perf_counter() - t0
    ok = cont.passed and trans.passed and el < 5
    announce(2, "contiguity & transforms", ok, el, 5,
             f"contiguous={cont.max_residual:.1e} pfaff/euler={trans.max_residual:.1e} tol=1e-10")


def test_criterion_03_g_alpha_routes(announce):
    t0 = time.perf_counter()
    rng = np.random.default_rng(3)
    worst = 0.0
    for n in range(3):
        for alpha in itertools.product(range(1, 4), repeat=n + 1):
            for _ in range(20):
                s = [float(v) for v in rng.uniform(0.5, 3.0, size=n + 1)]
                worst = max(worst, abs(g_alpha_simplex(alpha, s) - g_alpha_contour(alpha, s)))
    el = time.perf_counter() - t0
    announce(3, "G_alpha simplex = contour", worst < 1e-8 and el < 30, el, 30,
             f"max={worst:.1e} tol=1e-8 (39 alphas x 20 points)")


def test_criterion_04_h_alpha_routes(announce):
    t0 = time.perf_counter()
    res = run_suite("reduction", {"samples": 10, "tol": 1e-8, "m": [2.5, 3, 4, 6]})
    el = time.perf_counter() - t0
    announce(4, "H_alpha route agreement", res.passed and el < 60, el, 60,
             f"max={res.max_residual:.1e} tol=1e-8 points={len(res.rows)}")


GOLDEN_B2 = poly(
    term(4, (B0(3), K(2), Hess("j", "l"), B0()), 2, xi=("j", "l")),
    term(-1, (B0(2), K(), Hess("j", "l"), B0()), 2, deltas=[("j", "l")]),
    term(4, (B0(2), K(), Grad("j"), B0(), Grad("l"), B0()), 2, xi=("j", "l")),
    term(-4, (B0(2), K(), Grad("j"), B0(2), K(), Grad("l"), B0()), 4, xi=("j", "l")),
    term(2, (B0(2), K(), Grad("j"), B0(), Grad("l"), B0()), 4, deltas=[("j", "l")]),
    term(-8, (B0(3), K(2), Grad("j"), B0(), Grad("l"), B0()), 4, xi=("j", "l")),
)
GOLDEN_INTEGRATED = {
    (("b0^2", "k", "hess[j,j]", "b0"), 2): LaurentM({0: -1}),
    (("b0^3", "k^2", "hess[j,j]", "b0"), 4): LaurentM({1: 4}),
    (("b0^2", "k", "grad[j]", "b0", "grad[j]", "b0"), 4): LaurentM({0: 2, 1: 4}),
    (("b0^2", "k", "grad[j]", "b0^2", "k", "grad[j]", "b0"), 6): LaurentM({1: -4}),
    (("b0^3", "k^2", "grad[j]", "b0", "grad[j]", "b0"), 6): LaurentM({1: -8}),
}


def test_criterion_05_b2_golden(announce):
    t0 = time.perf_counter()
    b2 = resolvent_b(2)
    integrated = sphere_integrate(b2)
    got = {(tuple(g.token() for g in t.word), t.r_power): c for t, c in collect_in_m(integrated)}
    el = time.perf_counter() - t0
    ok = (len(b2) == 6 and b2.terms == GOLDEN_B2.terms and len(integrated) == 6
          and integrated.sphere_volume and got == GOLDEN_INTEGRATED and el < 1)
    announce(5, "b2 symbolic golden", ok, el, 1, "exact equality, 6 + 6 terms")


def test_criterion_06_spectral_coefficients(announce):
    t0 = time.perf_counter()
    k = sorted(coefficient_table("K"), key=lambda r: r[1])
    h = sorted(coefficient_table("H"), key=lambda r: r[1])
    el = time.perf_counter() - t0
    ok = (k == [(LaurentM({0: -1}), (2, 1), (0,)), (LaurentM({1: 4}), (3, 1), (0,))]
          and h == [(LaurentM({0: 2, 1: 4}), (2, 1, 1), (0, 0)),
                    (LaurentM({1: -4}), (2, 2, 1), (1, 0)),  # (1 - z1) multiplier
                    (LaurentM({1: -8}), (3, 1, 1), (0, 0))]
          and el < 1)
    announce(6, "K/H coefficient lists", ok, el, 1,
             "K: " + ", ".join(f"{c} H{a}" for c, a, _ in k))


def test_criterion_07_gauss_bonnet(announce):
    t0 = time.perf_counter()
    res = run_suite("gauss-bonnet", {"points": 100, "y_min": 0.1, "y_max": 10,
                                     "tol": 1e-10, "k1_tol": 1e-12})
    el = time.perf_counter() - t0
    k1 = abs(k_delta(1.0, 2.0) - 1 / 6)
    announce(7, "Gauss-Bonnet m=2", res.passed and k1 < 1e-12 and el < 10, el, 10,
             f"max={res.max_residual:.1e} tol=1e-10 |K(1;2)-1/6|={k1:.1e}")


def test_criterion_08_cm_relation(announce):
    t0 = time.perf_counter()
    res = run_suite("cm-relation", {"points": 5, "y_min": 0.3, "y_max": 3.0,
                                    "m": [2.5, 3, 4, 5.5, 10], "tol": 1e-8,
                                    "confluent_tol": 1e-7, "limit_tol": 1e-6})
    el = time.perf_counter() - t0
    by_kind = {}
    for r in res.rows:
        by_kind[r["kind"]] = max(by_kind.get(r["kind"], 0.0), r["residual"])
    announce(8, "CM functional relation", res.passed and el < 120, el, 120,
             " ".join(f"{k}={v:.1e}" for k, v in by_kind.items()))


def test_criterion_09_closed_forms(announce):
    t0 = time.perf_counter()
    zs = np.linspace(-3.0, 0.85, 20)
    ys = np.geomspace(0.2, 5.0, 20)
    worst = {}
    for m in (3, 4, 6):
        for kind, alpha in (("H21", (2, 1)), ("H31", (3, 1)), ("H41", (4, 1))):
            err = _max_rel((closed_form_h1(kind, z, m), h_alpha_quadrature(alpha, [z], m))
                           for z in zs)
            worst[kind] = max(worst.get(kind, 0.0), err)
        err = _max_rel((k_delta(y, m, "Closed"), k_delta(y, m, "HAlpha", h_route="quadrature"))
                       for y in ys)
        worst["K"] = max(worst.get("K", 0.0), err)
        err = _max_rel((h_delta(y1, y2, m, "Closed"),
                        h_delta(y1, y2, m, "HAlpha", h_route="quadrature"))
                       for y1, y2 in zip(ys, ys[::-1] * 0.9))
        worst["H"] = max(worst.get("H", 0.0), err)
    el = time.perf_counter() - t0
    ok = max(worst.values()) < 1e-8 and el < 30
    announce(9, "closed forms vs quadrature", ok, el, 30,
             " ".join(f"{k}={v:.1e}" for k, v in worst.items()) + " tol=1e-8")


def test_criterion_10_m_recursions(announce):
    t0 = time.perf_counter()
    res = run_suite("recursion-m", {"samples": 20, "m": [2.5, 3, 4], "tol": 1e-9})
    el = time.perf_counter() - t0
    raising = [r for r in res.rows if "differential" not in r["kind"]]
    worst = max(r["residual"] for r in raising)
    announce(10, "m-recursions", worst < 1e-9 and el < 10, el, 10,
             f"max={worst:.1e} tol=1e-9 points={len(raising)}")


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
