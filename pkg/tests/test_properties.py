import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from modheat.divided_diff import divdiff
from modheat.h_family import h_alpha_reduced
from modheat.multivar_hyper import lauricella_fd
from modheat.special_fn import gauss_2f1
from modheat.spectral import h_delta, k_delta

param = st.floats(0.2, 4.0)
zin = st.floats(-0.85, 0.85)
yy = st.floats(0.2, 5.0)
mm = st.sampled_from([2.5, 3.0, 5.5, 10.0])

FAST = settings(max_examples=40, deadline=None)


@FAST
@given(param, param, st.floats(0.5, 5.0), zin)
def test_2f1_symmetric_in_ab(a, b, c, z):
    assert gauss_2f1(a, b, c, z) == pytest.approx(gauss_2f1(b, a, c, z), rel=1e-11)


@FAST
@given(param, st.floats(1.5, 5.0), st.lists(st.floats(-0.8, 0.8), min_size=2, max_size=3),
       st.lists(st.floats(0.3, 2.0), min_size=3, max_size=3), st.randoms(use_true_random=False))
def test_fd_permutation_symmetry(a, c, zs, bs, rnd):
    bs = bs[:len(zs)]
    order = list(range(len(zs)))
    rnd.shuffle(order)
    lhs = lauricella_fd(a, tuple(zs), alphas=tuple(bs), c=c)
    rhs = lauricella_fd(a, tuple(zs[i] for i in order), alphas=tuple(bs[i] for i in order), c=c)
    assert lhs == pytest.approx(rhs, rel=1e-10)


distinct = st.lists(st.floats(-2.0, 2.0), min_size=2, max_size=5).filter(
    lambda xs: min(abs(p - q) for i, p in enumerate(xs) for q in xs[i + 1:]) > 0.05)


@FAST
@given(distinct, st.randoms(use_true_random=False))
def test_divdiff_permutation_symmetry(xs, rnd):
    ys = list(xs)
    rnd.shuffle(ys)
    f = lambda x: math.exp(0.5 * x) + x**3
    assert divdiff(f, xs) == pytest.approx(divdiff(f, ys), rel=1e-8, abs=1e-10)


@FAST
@given(distinct, st.lists(st.floats(-3, 3), min_size=6, max_size=6))
def test_divdiff_polynomial_exactness(xs, coeffs):
    # leading coefficient for degree n-1, zero for lower degree
    n = len(xs) - 1
    poly = lambda x: sum(c * x**k for k, c in enumerate(coeffs[:n + 1]))
    assert divdiff(poly, xs) == pytest.approx(coeffs[n], abs=1e-7 * (1 + max(map(abs, coeffs))))
    low = lambda x: sum(c * x**k for k, c in enumerate(coeffs[:n]))
    assert divdiff(low, xs) == pytest.approx(0, abs=1e-7 * (1 + max(map(abs, coeffs))))


@FAST
@given(st.integers(2, 3), st.integers(1, 2), st.integers(1, 2),
       st.floats(-0.8, 0.8), st.floats(-0.8, 0.8), mm)
def test_h_alpha_permutation_symmetry(a0, a1, a2, z1, z2, m):
    lhs = h_alpha_reduced((a0, a1, a2), [z1, z2], m)
    rhs = h_alpha_reduced((a0, a2, a1), [z2, z1], m)
    assert lhs == pytest.approx(rhs, rel=1e-9, abs=1e-11)


@FAST
@given(yy, mm)
def test_k_inversion_symmetry(y, m):
    assert k_delta(1 / y, m) == pytest.approx(y ** (m / 2 + 1) * k_delta(y, m), rel=1e-9, abs=1e-12)


@settings(max_examples=15, deadline=None)
@given(yy, yy, mm)
def test_routes_agree(y1, y2, m):
    ref = h_delta(y1, y2, m, "HAlpha")
    assert h_delta(y1, y2, m, "Hyper") == pytest.approx(ref, rel=1e-8, abs=1e-10)
