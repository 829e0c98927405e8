"""Tests for Eisenstein series routes and the eta one-form."""

import cmath
import math

import numpy as np
import pytest

from ellreg.characters import FiniteMap, enumerate_characters, fourier_transform
from ellreg.eisenstein import (
    RHO,
    RHO2,
    EtaForm,
    PairDivisor,
    UnimodularMatrix,
    arc_integral,
    divisor_bracket,
    e_star_map,
    e_star_point,
    e_star_stream,
    e_star_sum_zero_expansion,
    eta_chi,
    eta_form,
    g_column,
    integrate_eta_geodesic,
    integrate_eta_segment,
    suggested_rmax,
    zeta_star,
    zeta_star_qexp,
)
from ellreg.eisenstein import _restricted_zeta2

N = 11
Z0 = 0.31 + 0.83j


@pytest.mark.parametrize("ab", [(0, 0), (3, 0), (0, 4), (2, 7), (10, 1), (5, 5)])
def test_zeta_star_closed_form_vs_expansion(ab):
    a, b = ab
    closed = zeta_star(a, b, Z0, N)
    series = zeta_star_qexp(a, b, Z0, N, rmax=400)
    assert abs(closed - series) < 1e-11


def test_zeta_star_representative_independence():
    # The closed form must not depend on the chosen lifts of (a, b).
    v1 = zeta_star(3, 4, Z0, N)
    v2 = zeta_star(3 - N, 4 + 2 * N, Z0, N)
    assert abs(v1 - v2) < 1e-12


def test_zeta_star_rejects_lower_half_plane():
    with pytest.raises(ValueError):
        zeta_star(1, 1, 0.3 - 0.5j, N)


def test_restricted_zeta_partition():
    total = sum(_restricted_zeta2(v, N) for v in range(1, N + 1))
    assert abs(total - math.pi**2 / 6.0) < 1e-13


def test_e_star_stream_matches_closed_form():
    cases = [
        FiniteMap.delta(N, 3),
        FiniteMap(N, [1] * N),
        FiniteMap(N, [2, -1, 0, 3, 0, 0, -4, 0, 0, 0, 0]),
    ]
    for f in cases:
        closed = e_star_map(f, Z0)
        stream = e_star_stream(f, 0.8)
        got = complex(stream.value(np.array([Z0]))[0])
        assert abs(closed - got) < 1e-11


def test_sum_zero_expansion_route():
    f = FiniteMap(N, [2, -1, 0, 3, 0, 0, -4, 0, 0, 0, 0])
    assert abs(f.total()) == 0
    closed = e_star_map(f, Z0)
    third = e_star_sum_zero_expansion(f, Z0, rmax=400)
    assert abs(closed - third) < 1e-11


def test_modularity_under_unimodular_action():
    g = UnimodularMatrix(2, 1, 7, 4)
    for x in [(0, 1), (3, 5), (7, 0)]:
        lhs = e_star_point(x, g.act(Z0), N)
        rhs = e_star_point(g.row_action(x, N), Z0, N)
        assert abs(lhs - rhs) < 1e-11


def test_conjugation_symmetry():
    z = 0.27 + 0.91j
    lhs = e_star_point((4, 9), complex(-z.real, z.imag), N)
    rhs = e_star_point((-4, 9), z, N)
    assert abs(lhs - rhs) < 1e-12


def test_negation_symmetry():
    assert abs(e_star_point((4, 9), Z0, N) - e_star_point((-4, -9), Z0, N)) < 1e-12


def test_unimodular_matrix_validation_and_group_ops():
    with pytest.raises(ValueError):
        UnimodularMatrix(1, 1, 1, 1)
    g = UnimodularMatrix(2, 1, 7, 4)
    gi = g.inverse()
    assert (g @ gi) == UnimodularMatrix(1, 0, 0, 1)


def _loop_integral(form, corners):
    total = 0.0 + 0.0j
    for za, zb in zip(corners, corners[1:] + corners[:1]):
        val, _ = integrate_eta_segment(form, za, zb)
        total += val
    return total


def test_eta_pullback_identity():
    """g* eta(L, M) = eta(Lg, Mg), checked pointwise on coefficients."""
    l = FiniteMap(N, [0, 1, 0, 0, -2, 0, 0, 0, 0, 1, 0])
    m = FiniteMap(N, [3, 0, -1, 0, 0, 0, 0, -2, 0, 0, 0])
    rmax = suggested_rmax(N, 0.7)
    eta = EtaForm.from_residue_maps(l, m, rmax)
    # Both z and gz keep Im above the truncation domain for these g.
    cases = [
        (UnimodularMatrix(0, -1, 1, 0), 0.2 + 1.05j),
        (UnimodularMatrix(0, -1, 1, -1), 0.5 + 1.0j),
    ]
    for g, z in cases:
        pulled = eta.pullback(g)
        zz = np.array([z])
        P, Q = eta.coefficients(g.act(zz))
        gp = g.derivative(zz)
        P2, Q2 = pulled.coefficients(zz)
        assert np.max(np.abs(P * gp - P2)) < 1e-10
        assert np.max(np.abs(Q * np.conj(gp) - Q2)) < 1e-10


def test_eta_gamma1_divisor_stability():
    l = FiniteMap.delta(N, 2)
    m = FiniteMap.delta(N, 5)
    rmax = suggested_rmax(N, 0.8)
    eta = EtaForm.from_residue_maps(l, m, rmax)
    gam = UnimodularMatrix(1, 0, N, 1)
    pulled = eta.pullback(gam)
    assert pulled.left.coeffs == eta.left.coeffs
    assert pulled.right.coeffs == eta.right.coeffs


def test_eta_closed_for_degree_zero():
    l = FiniteMap(N, [1, -1] + [0] * 9)
    m = FiniteMap(N, [0, 0, 1, 0, 0, -1] + [0] * 5)
    rmax = suggested_rmax(N, 0.9)
    eta = EtaForm.from_residue_maps(l, m, rmax)
    c1, c2 = 0.15 + 1.0j, 0.45 + 1.25j
    corners = [c1, complex(c2.real, c1.imag), c2, complex(c1.real, c2.imag)]
    assert abs(_loop_integral(eta, corners)) < 1e-12


def test_eta_stokes_against_area_form():
    """Loop integral equals (pi i / N^2) integral of E*_D dx dy / y^2."""
    l = FiniteMap(N, [0, 1, 0, 0, -2, 0, 0, 0, 0, 1, 0])
    m = FiniteMap(N, [3, 0, -1, 0, 0, 0, 0, -2, 0, 0, 0])
    rmax = suggested_rmax(N, 0.9)
    eta = EtaForm.from_residue_maps(l, m, rmax)
    c1, c2 = 0.15 + 1.0j, 0.45 + 1.25j
    corners = [c1, complex(c2.real, c1.imag), c2, complex(c1.real, c2.imag)]
    loop = _loop_integral(eta, corners)
    bracket = divisor_bracket(l, m)
    stream = e_star_stream(bracket, 0.9)
    nx = ny = 160
    xs = np.linspace(c1.real, c2.real, nx + 1)
    xs = 0.5 * (xs[1:] + xs[:-1])
    ys = np.linspace(c1.imag, c2.imag, ny + 1)
    ys = 0.5 * (ys[1:] + ys[:-1])
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    vals = stream.value((X + 1j * Y).ravel()).reshape(X.shape)
    cell = (c2.real - c1.real) * (c2.imag - c1.imag) / (nx * ny)
    rhs = (1j * math.pi / N**2) * complex(np.sum(vals / Y**2)) * cell
    assert abs(loop - rhs) < 1e-7 * max(1.0, abs(loop))


def test_eta_real_divisors_give_imaginary_integrals():
    l = FiniteMap(N, [0, 1, 0, 0, -2, 0, 0, 0, 0, 1, 0])
    m = FiniteMap(N, [3, 0, -1, 0, 0, 0, 0, -2, 0, 0, 0])
    eta = eta_form(l, m, y_min=0.7)
    val, _ = integrate_eta_geodesic(eta, 0.1 + 0.9j, 0.4 + 1.2j)
    assert abs(val.real) < 1e-12
    val2, _ = integrate_eta_segment(eta, 0.1 + 0.9j, 0.4 + 1.2j)
    assert abs(val2.real) < 1e-12


def test_eta_antisymmetry_and_self_vanishing():
    l = FiniteMap(N, [0, 1, 0, 0, -2, 0, 0, 0, 0, 1, 0])
    m = FiniteMap(N, [3, 0, -1, 0, 0, 0, 0, -2, 0, 0, 0])
    e_lm = eta_form(l, m, y_min=0.8)
    e_ml = eta_form(m, l, y_min=0.8)
    e_ll = eta_form(l, l, y_min=0.8)
    z = np.array([0.2 + 0.95j])
    p1, q1 = e_lm.coefficients(z)
    p2, q2 = e_ml.coefficients(z)
    p3, q3 = e_ll.coefficients(z)
    assert abs(p1[0] + p2[0]) < 1e-13 and abs(q1[0] + q2[0]) < 1e-13
    assert abs(p3[0]) < 1e-14 and abs(q3[0]) < 1e-14


def test_arc_integral_pullback_vs_direct_geodesic():
    chi = [c for c in enumerate_characters(11) if c.order == 5][0]
    form = eta_chi(chi)
    g = g_column(2)
    via_pullback = arc_integral(form, g)
    deep = EtaForm(form.left, form.right, suggested_rmax(11, 0.14))
    direct, _ = integrate_eta_geodesic(deep, g.act(RHO), g.act(RHO2))
    assert abs(via_pullback - direct) < 1e-10


def test_arc_integral_lift_independence():
    chi = [c for c in enumerate_characters(11) if c.order == 5][0]
    form = eta_chi(chi)
    g = g_column(2)
    gam = UnimodularMatrix(1, 0, N, 1)
    assert abs(arc_integral(form, g) - arc_integral(form, gam @ g)) < 1e-11


def test_eta_chi_double_sum_assembly():
    """eta_chi assembled from character divisors equals the literal
    double sum over unit pairs (a, b) with weights chi(a) conj(chi)(b)."""
    chi = [c for c in enumerate_characters(11) if c.order == 5][0]
    local_rmax = suggested_rmax(N, math.sqrt(3) / 2)
    combined = eta_chi(chi)
    z = np.array([0.12 + 0.93j])
    P, Q = combined.coefficients(z)
    total_p = 0.0 + 0.0j
    total_q = 0.0 + 0.0j
    for a in range(1, N):
        wa = chi(a)
        if wa == 0:
            continue
        for b in range(1, N):
            wb = chi.conjugate()(b)
            if wb == 0:
                continue
            part = EtaForm.from_residue_maps(
                FiniteMap.delta(N, a), FiniteMap.delta(N, b), local_rmax
            )
            pp, qq = part.coefficients(z)
            total_p += wa * wb * pp[0]
            total_q += wa * wb * qq[0]
    assert abs(total_p - P[0]) < 1e-12
    assert abs(total_q - Q[0]) < 1e-12


def test_theorem3_weight_divisor():
    """eta(1, chihat) built from the Fourier transform of a character."""
    chi = [c for c in enumerate_characters(11) if c.order == 5][0]
    one = FiniteMap(N, [1] * N)
    chihat = fourier_transform(FiniteMap.from_character(chi))
    form = eta_form(one, chihat)
    val = arc_integral(form, g_column(3))
    assert np.isfinite(val.real) and np.isfinite(val.imag)


def test_quadrature_failure_is_loud():
    l = FiniteMap(N, [1, -1] + [0] * 9)
    m = FiniteMap(N, [0, 0, 1, 0, 0, -1] + [0] * 5)
    eta = eta_form(l, m, y_min=0.8)
    with pytest.raises(RuntimeError):
        integrate_eta_geodesic(
            eta, 0.1 + 0.9j, 0.4 + 1.2j, nodes=2, tol=1e-16, max_doublings=1
        )


def test_pair_divisor_algebra():
    d = PairDivisor.delta(N, 1, 2, 3.0) + PairDivisor.delta(N, 1, 2, -1.0)
    assert d.coeffs == {(1, 2): 2.0}
    assert d.degree == 2.0
    flipped = d.conjugation_flip()
    assert flipped.coeffs == {(10, 2): 2.0}
    scaled = d.scaled(0.5)
    assert scaled.coeffs == {(1, 2): 1.0}
