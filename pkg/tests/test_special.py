import cmath
import math
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ellreg.special import (
    SeriesControl,
    TruncationError,
    bloch_wigner,
    complex_gamma,
    dedekind_eta,
    dilog,
    gauss_legendre,
    incomplete_gamma_upper,
    incomplete_gamma_upper_complex,
    periodic_bernoulli2,
    siegel_theta,
)

CATALAN = 0.9159655941772190


def clausen2(theta, terms=2_000_000):
    # Brute-force oracle: D(e^{i theta}) = sum_{n>=1} sin(n theta) / n^2.
    n = np.arange(1, terms + 1, dtype=float)
    return float(np.sum(np.sin(n * theta) / (n * n)))


def test_dilog_at_minus_one():
    assert abs(dilog(-1.0) + math.pi**2 / 12.0) < 1e-14


def test_dilog_at_one_half():
    # Landen closed form: Li2(1/2) = pi^2/12 - log(2)^2 / 2.
    expected = math.pi**2 / 12.0 - 0.5 * math.log(2.0) ** 2
    assert abs(dilog(0.5) - expected) < 1e-14


def test_dilog_matches_raw_series_inside_disc():
    rng = random.Random(7)
    for _ in range(40):
        r = 0.85 * math.sqrt(rng.random())
        t = 2.0 * math.pi * rng.random()
        z = r * cmath.exp(1j * t)
        direct = sum(z**n / n**2 for n in range(1, 4000))
        assert abs(dilog(z) - direct) < 1e-12


def test_dilog_inversion_region_against_series():
    # Li2(z) for large z against the inversion formula evaluated manually.
    for z in [3.7 + 2.2j, -5.0 + 0.3j, 10.0 - 4.0j]:
        inv = sum((1.0 / z) ** n / n**2 for n in range(1, 200))
        lg = cmath.log(-z)
        expected = -inv - math.pi**2 / 6.0 - 0.5 * lg * lg
        assert abs(dilog(z) - expected) < 1e-13


def test_dilog_principal_branch_across_cut():
    # The cut sits on [1, oo); approaching from above and below must give
    # conjugate values with nonzero imaginary part.
    up = dilog(2.0 + 1e-12j)
    down = dilog(2.0 - 1e-12j)
    assert up.imag > 1.0
    assert abs(up - down.conjugate()) < 1e-9


def test_bloch_wigner_catalan():
    assert abs(bloch_wigner(1j) - CATALAN) < 1e-13
    assert abs(bloch_wigner(1j) - clausen2(math.pi / 2.0)) < 1e-6


def test_bloch_wigner_unit_circle_matches_clausen():
    for theta in [0.4, 1.1, 2.8]:
        z = cmath.exp(1j * theta)
        assert abs(bloch_wigner(z) - clausen2(theta)) < 5e-7


def test_bloch_wigner_vanishes_on_reals_and_antisymmetry():
    rng = random.Random(2024)
    for _ in range(1000):
        x = math.tan(math.pi * (rng.random() - 0.5)) * 3.0
        assert abs(bloch_wigner(x)) < 1e-13
        z = complex(4.0 * (rng.random() - 0.5), 4.0 * (rng.random() - 0.5))
        if z.imag == 0 or z in (0, 1):
            continue
        assert abs(bloch_wigner(z.conjugate()) + bloch_wigner(z)) < 1e-13


def test_bloch_wigner_inversion():
    rng = random.Random(11)
    for _ in range(200):
        z = complex(3.0 * (rng.random() - 0.5), 2.5 * (rng.random() - 0.5))
        if abs(z) < 1e-3 or abs(z - 1) < 1e-3 or z.imag == 0:
            continue
        assert abs(bloch_wigner(1.0 / z) + bloch_wigner(z)) < 1e-12


def test_bloch_wigner_five_term_relation():
    rng = random.Random(5)
    count = 0
    while count < 300:
        x = complex(2.4 * (rng.random() - 0.5), 2.4 * (rng.random() - 0.5))
        y = complex(2.4 * (rng.random() - 0.5), 2.4 * (rng.random() - 0.5))
        if min(abs(x), abs(y), abs(1 - x), abs(1 - y), abs(1 - x * y)) < 0.05:
            continue
        total = (
            bloch_wigner(x)
            + bloch_wigner(y)
            + bloch_wigner((1 - x) / (1 - x * y))
            + bloch_wigner(1 - x * y)
            + bloch_wigner((1 - y) / (1 - x * y))
        )
        assert abs(total) < 1e-11
        count += 1


def test_incomplete_gamma_closed_forms():
    assert abs(incomplete_gamma_upper(1.0, 1.0) - math.exp(-1.0)) < 1e-15
    assert abs(incomplete_gamma_upper(2.0, 1.0) - 2.0 * math.exp(-1.0)) < 1e-15
    for x in [0.2, 1.0, 3.5, 17.0]:
        assert abs(incomplete_gamma_upper(1.0, x) - math.exp(-x)) < 1e-15
        expected2 = (1.0 + x) * math.exp(-x)
        assert abs(incomplete_gamma_upper(2.0, x) - expected2) < 1e-14


def test_incomplete_gamma_against_trapezoid_oracle():
    # Gamma(s, x) = int_x^oo t^{s-1} e^{-t} dt, truncated far in the tail.
    for s in (1.0, 2.0, 3.0):
        for x in (0.1, 0.7, 2.0, 8.0, 20.0):
            # Truncating at x + 30 leaves a tail below 1e-12; a finer step
            # would push the trapezoid's own h^2 error past the tolerance.
            t = np.linspace(x, x + 30.0, 1_000_001)
            oracle = float(np.trapezoid(t ** (s - 1.0) * np.exp(-t), t))
            assert abs(incomplete_gamma_upper(s, x) - oracle) < 1e-10


def test_incomplete_gamma_recursion_includes_nonpositive_orders():
    # Gamma(s+1, x) = s Gamma(s, x) + x^s e^{-x}, exercised down to s = -1.5.
    for s in (-1.5, -1.0, -0.3, 0.0, 0.8, 2.5):
        for x in (0.15, 0.6, 1.0, 4.0, 12.0):
            lhs = incomplete_gamma_upper(s + 1.0, x)
            rhs = s * incomplete_gamma_upper(s, x) + math.exp(
                -x + s * math.log(x)
            )
            assert abs(lhs - rhs) < 1e-12 * max(1.0, abs(lhs))


def test_incomplete_gamma_rejects_nonpositive_x():
    with pytest.raises(ValueError):
        incomplete_gamma_upper(2.0, 0.0)
    with pytest.raises(ValueError):
        incomplete_gamma_upper(2.0, -1.0)


@given(st.floats(0.0, 1.0, exclude_max=True), st.sampled_from([2, 3, 5]))
@settings(max_examples=100, deadline=None)
def test_periodic_bernoulli2_distribution(x, r):
    # Sampling inside [0, 1) keeps x + k/r exactly representable enough
    # for the 1e-14 bound; periodicity itself is checked separately.
    lhs = periodic_bernoulli2(r * x)
    rhs = r * sum(periodic_bernoulli2(x + k / r) for k in range(r))
    assert abs(lhs - rhs) < 1e-14


def test_periodic_bernoulli2_distribution_away_from_origin():
    rng = random.Random(31)
    for _ in range(100):
        x = 40.0 * (rng.random() - 0.5)
        for r in (2, 3, 5):
            lhs = periodic_bernoulli2(r * x)
            rhs = r * sum(periodic_bernoulli2(x + k / r) for k in range(r))
            assert abs(lhs - rhs) < 1e-13


def test_periodic_bernoulli2_base_values():
    assert abs(periodic_bernoulli2(0.0) - 1.0 / 6.0) < 1e-16
    assert abs(periodic_bernoulli2(0.5) + 1.0 / 12.0) < 1e-16
    assert abs(periodic_bernoulli2(7.25) - periodic_bernoulli2(0.25)) < 1e-15


def test_dedekind_eta_at_i():
    # eta(i) = Gamma(1/4) / (2 pi^{3/4}).
    expected = math.gamma(0.25) / (2.0 * math.pi**0.75)
    assert abs(dedekind_eta(1j) - expected) < 1e-13


def test_dedekind_eta_modular_transformations():
    rng = random.Random(3)
    for _ in range(25):
        z = complex(rng.random() - 0.5, 0.4 + 1.5 * rng.random())
        shift = dedekind_eta(z + 1.0)
        assert abs(shift - cmath.exp(1j * math.pi / 12.0) * dedekind_eta(z)) < 1e-12
        flip = dedekind_eta(-1.0 / z)
        assert abs(flip - cmath.sqrt(z / 1j) * dedekind_eta(z)) < 1e-12


def test_dedekind_eta_domain_and_cap():
    with pytest.raises(ValueError):
        dedekind_eta(1.0 - 0.2j)
    with pytest.raises(TruncationError):
        dedekind_eta(0.001j, SeriesControl(abs_tol=1e-15, max_terms=3))


def test_siegel_theta_quasi_periodicity():
    rng = random.Random(9)
    for _ in range(25):
        z = complex(rng.random() - 0.5, 0.5 + rng.random())
        w = complex(1.5 * (rng.random() - 0.5), 0.8 * (rng.random() - 0.5))
        th = siegel_theta(w, z)
        assert abs(siegel_theta(w + 1.0, z) + th) < 1e-11
        shifted = siegel_theta(w + z, z)
        factor = -cmath.exp(-1j * math.pi * z - 2j * math.pi * w)
        assert abs(shifted - factor * th) < 1e-11
        assert abs(siegel_theta(-w, z) + th) < 1e-12


def test_siegel_theta_vanishes_at_lattice_points():
    z = 0.3 + 1.1j
    assert abs(siegel_theta(0.0, z)) < 1e-15
    assert abs(siegel_theta(1.0, z)) < 1e-12
    assert abs(siegel_theta(z, z)) < 1e-12


def test_siegel_theta_domain_and_cap():
    with pytest.raises(ValueError):
        siegel_theta(0.3, -1j)
    with pytest.raises(TruncationError):
        siegel_theta(0.3, 0.001j, SeriesControl(abs_tol=1e-15, max_terms=2))


def test_gauss_legendre_low_degree():
    assert abs(gauss_legendre(lambda t: t * t, 0.0, 1.0, 8) - 1.0 / 3.0) < 1e-15


def test_gauss_legendre_exact_for_degree_2n_minus_1():
    # Degree 15 with 8 nodes, integrated over an asymmetric interval.
    coeffs = [3.0, -1.0, 2.5, 0.0, 1.0, -4.0, 0.25, 2.0, -1.5, 0.5, 1.0, 0.0, -2.0, 1.0, 0.125, -0.75]

    def poly(t):
        return sum(c * t**k for k, c in enumerate(coeffs))

    exact = sum(c * (2.0 ** (k + 1) - (-1.0) ** (k + 1)) / (k + 1) for k, c in enumerate(coeffs))
    approx = gauss_legendre(poly, -1.0, 2.0, 8)
    assert abs(approx - exact) < 1e-11 * max(1.0, abs(exact))


def test_series_control_validation():
    with pytest.raises(ValueError):
        SeriesControl(abs_tol=0.0)
    with pytest.raises(ValueError):
        SeriesControl(max_terms=0)


def test_complex_gamma_matches_real_gamma():
    for x in (0.5, 1.0, 2.0, 3.7, 5.0, 9.25):
        got = complex_gamma(x)
        assert abs(got.imag) < 1e-12 * abs(got)
        assert got.real == pytest.approx(math.gamma(x), rel=1e-12)
    assert complex_gamma(0.5).real == pytest.approx(math.sqrt(math.pi), rel=1e-13)


def test_complex_gamma_moduli_on_critical_lines():
    # |Gamma(1 + it)|^2 = pi t / sinh(pi t), |Gamma(1/2 + it)|^2 = pi / cosh(pi t)
    for t in (0.7, 2.3):
        g1 = complex_gamma(1.0 + 1j * t)
        assert abs(g1) ** 2 == pytest.approx(math.pi * t / math.sinh(math.pi * t), rel=1e-11)
        gh = complex_gamma(0.5 + 1j * t)
        assert abs(gh) ** 2 == pytest.approx(math.pi / math.cosh(math.pi * t), rel=1e-11)


def test_complex_gamma_recursion_and_conjugation():
    for s in (1.3 + 0.9j, -0.7 + 2.1j, 0.2 - 1.4j):
        assert abs(complex_gamma(s + 1) - s * complex_gamma(s)) < 1e-11 * abs(complex_gamma(s + 1))
        assert abs(complex_gamma(s.conjugate()) - complex_gamma(s).conjugate()) < 1e-12 * abs(complex_gamma(s))


def test_incomplete_gamma_complex_real_axis_delegates():
    for s, x in ((2.0, 1.5), (0.5, 3.0), (-1.5, 2.0)):
        got = incomplete_gamma_upper_complex(complex(s), x)
        assert got.imag == 0.0
        assert got.real == pytest.approx(incomplete_gamma_upper(s, x), rel=1e-13)


def test_incomplete_gamma_complex_recursion():
    # Gamma(s+1, x) = s Gamma(s, x) + x^s e^{-x} on both evaluation branches.
    for s in (1.3 + 0.9j, -0.4 + 1.7j):
        for x in (0.4, 8.0):
            lhs = incomplete_gamma_upper_complex(s + 1, x)
            rhs = s * incomplete_gamma_upper_complex(s, x) + x**s * math.exp(-x)
            assert abs(lhs - rhs) < 1e-11 * max(1.0, abs(lhs))


def test_incomplete_gamma_complex_quadrature_oracle():
    s = 1.3 + 0.9j
    x = 2.0

    def integrand(t):
        return cmath.exp((s - 1.0) * cmath.log(t)) * math.exp(-t)

    oracle = sum(gauss_legendre(integrand, a, a + 5.0, 32)
                 for a in np.arange(x, x + 60.0, 5.0))
    got = incomplete_gamma_upper_complex(s, x)
    assert abs(got - oracle) < 1e-10


def test_incomplete_gamma_complex_small_x_limit():
    s = 1.3 + 0.9j
    got = incomplete_gamma_upper_complex(s, 1e-8)
    assert abs(got - complex_gamma(s)) < 1e-9
    assert abs(incomplete_gamma_upper_complex(s.conjugate(), 0.7)
               - incomplete_gamma_upper_complex(s, 0.7).conjugate()) < 1e-12
    with pytest.raises(ValueError):
        incomplete_gamma_upper_complex(s, 0.0)
