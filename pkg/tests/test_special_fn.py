import math

import pytest

from modheat.errors import DomainError, PoleAtC
from modheat.special_fn import (contiguous_residuals, gauss_2f1, gauss_2f1_deriv,
                                gauss_2f1_euler_integral, kummer_1f1, kummer_1f1_integral,
                                ode_residual, transform_check)

# mpmath.hyp2f1 at 40 digits
ORACLE_2F1 = [
    ((2.5, 1.2, 4.1, 0.3), 1.2847892309367348927),
    ((1.5, 0.7, 2.2, -2.0), 0.56796309563362930172),
    ((3, 4, 5, 0.3), 2.3302268480086640621),
    ((0.5, 2.5, 1.5, 0.9), 12.649110640673521073),
    ((2, 3, 4, -0.95), 0.35522638995133861551),
    ((1.2, 3.4, 5.6, 0.75), 2.2805600223707976025),
    ((4.5, 2.5, 3.3, -7), 0.0015470510152888030134),
    ((0.3, -2.5, 1.7, 0.6), 0.78886184310180845244),
]


@pytest.mark.parametrize("args,expected", ORACLE_2F1)
def test_gauss_2f1_matches_frozen_oracle(args, expected):
    assert gauss_2f1(*args) == pytest.approx(expected, rel=1e-12)


def test_spec_examples():
    assert gauss_2f1(1, 1, 2, 0.5) == pytest.approx(2 * math.log(2), abs=1e-13)
    assert gauss_2f1(3, 2, 2, 0.5) == pytest.approx(8.0, abs=1e-12)
    assert gauss_2f1(1.7, -0.3, 2.9, 0.0) == 1.0


def test_errors():
    with pytest.raises(PoleAtC):
        gauss_2f1(1, 1, -2, 0.3)
    with pytest.raises(DomainError):
        gauss_2f1(1, 1, 2, 1.0)
    with pytest.raises(DomainError):
        gauss_2f1_euler_integral(1, 2, 2, 0.3)


def test_euler_integral():
    assert gauss_2f1_euler_integral(1, 1, 2, 0.5) == pytest.approx(2 * math.log(2), abs=1e-10)
    assert gauss_2f1_euler_integral(2, 1, 3, 0.0) == pytest.approx(1.0, abs=1e-12)
    assert gauss_2f1_euler_integral(2.5, 1.2, 4.1, 0.3) == pytest.approx(
        gauss_2f1(2.5, 1.2, 4.1, 0.3), abs=1e-10)


@pytest.mark.parametrize("p", [(3, 4, 5, 0.3), (2, 2, 3, -0.4), (1, 1, 2, 0.0)])
def test_contiguous(p):
    res = contiguous_residuals(*p)
    assert len(res) == 15
    assert max(map(abs, res)) < 1e-10


def test_contiguous_at_zero_is_exact():
    assert all(r == 0.0 for r in contiguous_residuals(1, 1, 2, 0.0))


def test_contiguous_pole():
    with pytest.raises(PoleAtC):
        contiguous_residuals(1, 1, 1, 0.2)  # c - 1 = 0


@pytest.mark.parametrize("p", [(2, 3, 4, 0.5), (1.5, 0.7, 2.2, -2.0), (0.4, 1.9, 2.7, 0.0)])
def test_transforms(p):
    assert max(map(abs, transform_check(*p))) < 1e-10


def test_ode_residual_and_negative_control():
    assert ode_residual(2, 3, 4, 0.2) < 1e-6
    assert ode_residual(1, 1, 2, 0.0) < 1e-6
    assert ode_residual(2, 3, 4, 0.2, w=lambda x: 1.0) == pytest.approx(6.0)


def test_derivative_relation():
    h = 1e-5
    fd = (gauss_2f1(2, 3, 4, 0.3 + h) - gauss_2f1(2, 3, 4, 0.3 - h)) / (2 * h)
    assert gauss_2f1_deriv(2, 3, 4, 0.3) == pytest.approx(fd, rel=1e-8)
    assert gauss_2f1_deriv(2, 3, 4, 0.3) == pytest.approx(6 / 4 * gauss_2f1(3, 4, 5, 0.3), rel=1e-13)


# mpmath.hyp1f1
@pytest.mark.parametrize("args,expected", [
    ((1.5, 3.2, 2.0), 2.8740559909255921454),
    ((2, 5, -3), 0.35593410067935299026),
    ((0.5, 1.5, 4), 8.2263138827536151124),
])
def test_kummer_series_and_integral(args, expected):
    assert kummer_1f1(*args) == pytest.approx(expected, rel=1e-12)
    assert kummer_1f1_integral(*args) == pytest.approx(expected, rel=1e-9)
