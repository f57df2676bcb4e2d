import math

import pytest
from scipy.integrate import quad

from modheat.divided_diff import fd_derivative
from modheat.errors import DomainError
from modheat.h_family import (MultiIndex, g_alpha_contour, g_alpha_simplex, h_ab, h_alpha,
                              h_alpha_quadrature, h_alpha_reduced, h_alpha_via_fd, h_even_m,
                              recursion_residuals_m, reduction_condition, weight_omega)
from modheat.simplex import simplex_rule

ROUTES = ("quadrature", "fd", "reduced")

# Gamma(d~)/Gamma(|alpha|) F_D with F_D from mpmath.quad of the Euler integral
ORACLE = [
    ((3, 1, 1), (-0.3, 0.7), 2.5, 0.71094927405158185553),
    ((2, 1, 1, 1), (0.1, -0.4, 0.5), 3, 0.71866067959685594788),
    # m = 4 collapses F_D to prod (1 - z_l)^(-alpha_l)
    ((2, 1, 1), (0.2, 0.6), 4, 1 / (0.8 * 0.4)),
    ((2, 2, 1), (0.25, 0.5), 4, 1 / (0.75**2 * 0.5)),
]


@pytest.mark.parametrize("alpha,z,m,expected", ORACLE)
@pytest.mark.parametrize("route", ROUTES)
def test_h_alpha_oracle(alpha, z, m, expected, route):
    assert h_alpha(alpha, z, m, 2, route) == pytest.approx(expected, rel=1e-9)


def test_weight_omega():
    assert weight_omega((1, 1), [0.3]) == 1.0
    assert weight_omega((2, 1), [0.5]) == 0.5
    val, _ = quad(lambda u: weight_omega((2, 1), [u]), 0, 1)
    assert val == pytest.approx(1 / math.gamma(3))


def test_simplex_rule_volume():
    for n in (1, 2, 3):
        _, w = simplex_rule(tuple([1.0] * (n + 1)), 6)
        assert w.sum() == pytest.approx(1 / math.factorial(n), rel=1e-13)


def test_g_alpha_examples():
    assert g_alpha_simplex((2,), [1.0]) == pytest.approx(math.exp(-1), rel=1e-13)
    assert g_alpha_contour((3,), [2.0]) == pytest.approx(math.exp(-2) / 2, rel=1e-8)
    assert g_alpha_simplex((1, 1), [1.0, 1.0]) == pytest.approx(math.exp(-1), rel=1e-12)
    # mpmath.quad of the simplex integral
    ref = 0.010759092047785737153
    assert g_alpha_simplex((2, 3), [0.5, 2.0]) == pytest.approx(ref, rel=1e-9)
    assert g_alpha_contour((2, 3), [0.5, 2.0]) == pytest.approx(ref, rel=1e-8)
    assert g_alpha_contour((1, 2), [1.0, 1.0]) == pytest.approx(
        g_alpha_simplex((1, 2), [1.0, 1.0]), abs=1e-8)


def test_g_alpha_scaling_cross_route():
    s = [3.0, 6.0]
    assert g_alpha_simplex((2, 1), s) == pytest.approx(g_alpha_contour((2, 1), s), abs=1e-8)


def test_h_alpha_spec_examples():
    assert h_alpha_quadrature((2, 1), [0.0], 4) == pytest.approx(1.0, abs=1e-12)
    assert h_alpha_quadrature((1, 1), [0.5], 2) == pytest.approx(2 * math.log(2), abs=1e-10)
    assert h_alpha_quadrature((3, 1), [0.3], 4) == pytest.approx(h_alpha_via_fd((3, 1), [0.3], 4),
                                                                 abs=1e-9)
    assert h_alpha_via_fd((2, 1, 1), [0.2, 0.5], 3) == pytest.approx(
        h_alpha_quadrature((2, 1, 1), [0.2, 0.5], 3), abs=1e-8)
    assert h_alpha_via_fd((2, 1, 1), [0.0, 0.0], 3) == pytest.approx(
        math.gamma(3.5) / math.gamma(4), rel=1e-14)


def test_reduction_structure():
    z1, z2, m = 0.2, 0.6, 4
    g = lambda z: z * h_ab(3, 1, z, m)
    assert h_alpha_reduced((2, 1, 1), [z1, z2], m) == pytest.approx(
        (g(z1) - g(z2)) / (z1 - z2), rel=1e-13)
    assert h_alpha_reduced((3, 1), [0.4], 3) == pytest.approx(h_alpha_via_fd((3, 1), [0.4], 3))
    fd = fd_derivative(lambda t: h_alpha_reduced((2, 1, 1), [t, 0.5], 4), 0.25, 1)
    assert h_alpha_reduced((2, 2, 1), [0.25, 0.5], 4) == pytest.approx(fd, abs=1e-6)


def test_confluent_reduction_limit():
    # z1 = z2 turns H_{a,b,c} into H_{a,b+c}
    conf = h_alpha_reduced((2, 1, 1), [0.3, 0.3], 3.0)
    assert conf == pytest.approx(h_alpha_quadrature((2, 2), [0.3], 3.0), abs=1e-6)
    near = h_alpha_quadrature((2, 1, 1), [0.3, 0.3 + 1e-7], 3.0)
    assert conf == pytest.approx(near, abs=1e-6)


def test_even_m():
    assert h_even_m((2, 1), [0.5], 4) == pytest.approx(2.0)
    # d/dz (1-z)^-1 (1-u-z)^-1 at z = 0 is 1/(1-u) + 1/(1-u)^2
    assert h_even_m((1, 1), [0.5], 6) == pytest.approx(6.0)
    assert h_alpha_quadrature((1, 1), [0.5], 6) == pytest.approx(6.0, rel=1e-10)
    assert h_even_m((1, 1, 1), [0.2, 0.4], 4) == pytest.approx(1 / (0.8 * 0.6))
    with pytest.raises(DomainError):
        h_even_m((1, 1), [0.5], 5)
    with pytest.raises(DomainError):
        h_even_m((1, 1), [0.5], 2)


@pytest.mark.parametrize("a,b,c,z,m,tol", [
    (2, 1, None, [0.3], 3, 1e-9),
    (2, 1, None, [0.0], 3, 1e-12),
    (2, 1, 1, [0.2, 0.5], 2.7, 1e-8),
])
def test_m_recursions(a, b, c, z, m, tol):
    raising, differential = recursion_residuals_m(a, b, c, z, m)
    assert abs(raising) < tol
    assert abs(differential) < 1e-6


def test_permutation_symmetry():
    a = h_alpha_reduced((2, 2, 1, 3), [0.1, -0.4, 0.6], 3.5)
    b = h_alpha_reduced((2, 3, 2, 1), [0.6, 0.1, -0.4], 3.5)
    assert a == pytest.approx(b, rel=1e-12)


def test_validation():
    with pytest.raises(DomainError):
        MultiIndex((2, 0))
    with pytest.raises(DomainError):
        h_alpha((2, 1), [1.0], 3)
    with pytest.raises(DomainError):
        h_alpha((1, 1, 1, 1, 1, 1), [0.1] * 5, 3)
    with pytest.raises(DomainError):
        h_alpha((1,), [], 2, j=6)
    with pytest.raises(DomainError):
        h_alpha((2, 1), [0.1], 3, route="bogus")
    assert reduction_condition([0.1, 0.1 + 1e-4]) > reduction_condition([0.1, 0.6])
