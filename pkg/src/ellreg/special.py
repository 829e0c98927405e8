"""Scalar special functions shared by the rest of the package.

Everything here is plain floating point: dilogarithms, the upper
incomplete gamma function, the periodic second Bernoulli polynomial,
Dedekind eta and Siegel theta products, and Gauss-Legendre quadrature.
Series are truncated against an explicit SeriesControl; hitting the
term cap raises instead of returning a silently wrong value.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * math.pi

# Even-index Bernoulli numbers B_2..B_30, used by the log-series branch
# of dilog.  B_1 = -1/2 is handled explicitly.
_BERNOULLI_EVEN = [
    1.0 / 6, -1.0 / 30, 1.0 / 42, -1.0 / 30, 5.0 / 66, -691.0 / 2730,
    7.0 / 6, -3617.0 / 510, 43867.0 / 798, -174611.0 / 330, 854513.0 / 138,
    -236364091.0 / 2730, 8553103.0 / 6, -23749461029.0 / 870,
    8615841276005.0 / 14322,
]


@dataclass(frozen=True)
class SeriesControl:
    """Truncation policy for infinite series and products."""

    abs_tol: float = 1e-13
    max_terms: int = 200_000

    def __post_init__(self):
        if not self.abs_tol > 0:
            raise ValueError("abs_tol must be positive")
        if self.max_terms < 1:
            raise ValueError("max_terms must be at least 1")


DEFAULT_CONTROL = SeriesControl()


class TruncationError(RuntimeError):
    """A series hit its term cap before meeting its tolerance."""


def _dilog_series(z):
    # Plain power series; callers guarantee |z| <= 1/2 so the tail is
    # geometric and 60 terms are already below double precision.
    total = 0.0 + 0.0j
    term = 1.0 + 0.0j
    for n in range(1, 80):
        term *= z
        total += term / (n * n)
        if abs(term) < 1e-18:
            break
    return total


def _dilog_log_series(z):
    # Expansion in w = -log(1-z), valid for |w| < 2*pi.  Used on the
    # annulus where neither the power series nor its pullbacks converge
    # quickly.
    w = -cmath.log(1.0 - z)
    total = w - w * w / 4.0
    wsq = w * w
    wpow = w
    fact = 1.0
    for k, b2k in enumerate(_BERNOULLI_EVEN, start=1):
        wpow *= wsq
        fact *= (2 * k) * (2 * k + 1)
        total += b2k * wpow / fact
        if abs(wpow / fact) < 1e-18:
            break
    return total


def dilog(z) -> complex:
    """Principal-branch dilogarithm Li_2(z), cut along [1, oo)."""
    z = complex(z)
    if z.imag == 0.0:
        z = complex(z.real, 0.0)
    az = abs(z)
    if az <= 0.5:
        return _dilog_series(z)
    if abs(1.0 - z) <= 0.5:
        # Reflection: Li2(z) + Li2(1-z) = pi^2/6 - log(z) log(1-z).
        if z == 1.0:
            return math.pi * math.pi / 6.0 + 0.0j
        return (
            math.pi * math.pi / 6.0
            - cmath.log(z) * cmath.log(1.0 - z)
            - _dilog_series(1.0 - z)
        )
    if az > 1.0:
        # Inversion: Li2(z) = -Li2(1/z) - pi^2/6 - log(-z)^2 / 2, which
        # lands back in the closed unit disc.
        minus_z = complex(-z.real, 0.0 if z.imag == 0.0 else -z.imag)
        lg = cmath.log(minus_z)
        return -dilog(1.0 / z) - math.pi * math.pi / 6.0 - 0.5 * lg * lg
    # Shell 0.5 < |z| <= 1 away from 1: here |log(1-z)| <= 1.8 and the
    # Bernoulli series converges rapidly.
    return _dilog_log_series(z)


def bloch_wigner(z) -> float:
    """Bloch-Wigner function D(z) = Im Li_2(z) + arg(1-z) log|z|.

    Real analytic off {0, 1}, zero on the real line, and the single-valued
    cousin of the dilogarithm.  D(0) and D(1) are defined as 0.
    """
    z = complex(z)
    if z == 0 or z == 1:
        return 0.0
    if z.imag == 0.0:
        # Exact zero on the reals regardless of rounding in the two parts.
        return 0.0
    return dilog(z).imag + cmath.phase(1.0 - z) * math.log(abs(z))


def _upper_gamma_cf(s, x):
    # Modified Lentz continued fraction for Gamma(s, x), stable for
    # x > max(1, s).
    tiny = 1e-300
    b = x + 1.0 - s
    c = 1.0 / tiny
    d = 1.0 / b if b != 0 else 1.0 / tiny
    h = d
    for i in range(1, 500):
        an = -i * (i - s)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 1e-16:
            break
    return math.exp(-x + s * math.log(x)) * h


def _lower_gamma_series(s, x):
    # gamma(s, x) by the standard ascending series, for x <= max(1, s), s > 0.
    total = 1.0 / s
    term = 1.0 / s
    sk = s
    for _ in range(1000):
        sk += 1.0
        term *= x / sk
        total += term
        if abs(term) < abs(total) * 1e-17:
            break
    return math.exp(-x + s * math.log(x)) * total


def _exp_integral_e1(x):
    # E_1(x) for 0 < x <= 1 via the convergent alternating series.
    total = -0.5772156649015328606 - math.log(x)
    term = -1.0
    for k in range(1, 60):
        term *= -x / k
        total -= term / k
        if abs(term / k) < 1e-18:
            break
    return total


def incomplete_gamma_upper(s: float, x: float) -> float:
    """Upper incomplete gamma Gamma(s, x) for real s and x > 0.

    Continued fraction for large x, ascending series for small x, with
    recursion in s to reach nonpositive orders.
    """
    if not x > 0:
        raise ValueError("incomplete_gamma_upper requires x > 0")
    s = float(s)
    x = float(x)
    if x > max(1.0, s):
        return _upper_gamma_cf(s, x)
    if s > 0:
        return math.gamma(s) - _lower_gamma_series(s, x)
    # s <= 0 and x <= 1: climb down from Gamma(0, x) = E_1(x) when s is
    # integral, otherwise climb up to a positive order and come back.
    if s == math.floor(s):
        g = _exp_integral_e1(x)
        k = 0.0
        while k > s:
            k -= 1.0
            g = (g - math.exp(-x + k * math.log(x))) / k
        return g
    shift = int(math.ceil(-s)) + 1
    g = math.gamma(s + shift) - _lower_gamma_series(s + shift, x)
    for j in range(shift - 1, -1, -1):
        sj = s + j
        g = (g - math.exp(-x + sj * math.log(x))) / sj
    return g


# Lanczos coefficients, g = 7, n = 9.
_LANCZOS = [
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
]


def complex_gamma(s) -> complex:
    """Gamma(s) for complex s via the Lanczos approximation."""
    s = complex(s)
    if s.real < 0.5:
        # Reflection formula; poles at nonpositive integers surface as
        # a zero denominator, which is the honest failure mode.
        return math.pi / (cmath.sin(math.pi * s) * complex_gamma(1.0 - s))
    z = s - 1.0
    acc = _LANCZOS[0] + sum(_LANCZOS[i] / (z + i) for i in range(1, 9))
    t = z + 7.5
    return math.sqrt(2.0 * math.pi) * t ** (z + 0.5) * cmath.exp(-t) * acc


def incomplete_gamma_upper_complex(s, x: float) -> complex:
    """Upper incomplete gamma Gamma(s, x) for complex s and real x > 0."""
    s = complex(s)
    if s.imag == 0.0:
        return complex(incomplete_gamma_upper(s.real, x))
    if not x > 0:
        raise ValueError("incomplete_gamma_upper_complex requires x > 0")
    if x > abs(s) + 1.0:
        # Same Lentz continued fraction as the real branch; every step
        # is already generic over complex s.
        tiny = 1e-300
        b = x + 1.0 - s
        c = 1.0 / tiny
        d = 1.0 / b if b != 0 else 1.0 / tiny
        h = d
        for i in range(1, 500):
            an = -i * (i - s)
            b += 2.0
            d = an * d + b
            if abs(d) < tiny:
                d = tiny
            c = b + an / c
            if abs(c) < tiny:
                c = tiny
            d = 1.0 / d
            delta = d * c
            h *= delta
            if abs(delta - 1.0) < 1e-16:
                break
        return cmath.exp(-x + s * cmath.log(x)) * h
    total = 1.0 / s
    term = 1.0 / s
    sk = s
    for _ in range(1000):
        sk += 1.0
        term *= x / sk
        total += term
        if abs(term) < abs(total) * 1e-17:
            break
    lower = cmath.exp(-x + s * cmath.log(x)) * total
    return complex_gamma(s) - lower


def periodic_bernoulli2(x: float) -> float:
    """One-periodic extension of B_2(t) = t^2 - t + 1/6 from [0, 1)."""
    t = x - math.floor(x)
    return t * t - t + 1.0 / 6.0


def dedekind_eta(z, ctl: SeriesControl = DEFAULT_CONTROL) -> complex:
    """Dedekind eta(z) = q^{1/24} prod (1 - q^n) with q = e^{2 pi i z}."""
    z = complex(z)
    if not z.imag > 0:
        raise ValueError("dedekind_eta requires Im z > 0")
    q = cmath.exp(2j * math.pi * z)
    aq = abs(q)
    prod = cmath.exp(1j * math.pi * z / 12.0)
    qn = 1.0 + 0.0j
    for n in range(1, ctl.max_terms + 1):
        qn *= q
        prod *= 1.0 - qn
        # Remaining factors differ from 1 by at most ~ sum |q|^m.
        if abs(qn) * aq / (1.0 - aq) < ctl.abs_tol:
            return prod
    raise TruncationError("dedekind_eta hit the term cap")


def siegel_theta(w, z, ctl: SeriesControl = DEFAULT_CONTROL) -> complex:
    """Siegel theta function used in the second Kronecker limit formula.

    theta(w, z) = e^{pi i z / 6} (e^{pi i w} - e^{-pi i w})
                  prod_{n>=1} (1 - q^n e^{2 pi i w})(1 - q^n e^{-2 pi i w}).
    """
    z = complex(z)
    w = complex(w)
    if not z.imag > 0:
        raise ValueError("siegel_theta requires Im z > 0")
    q = cmath.exp(2j * math.pi * z)
    aq = abs(q)
    ew = cmath.exp(2j * math.pi * w)
    prod = cmath.exp(1j * math.pi * z / 6.0) * (
        cmath.exp(1j * math.pi * w) - cmath.exp(-1j * math.pi * w)
    )
    qn = 1.0 + 0.0j
    for n in range(1, ctl.max_terms + 1):
        qn *= q
        prod *= (1.0 - qn * ew) * (1.0 - qn / ew)
        bound = abs(qn) * aq * (abs(ew) + 1.0 / abs(ew)) / (1.0 - aq)
        if bound < ctl.abs_tol:
            return prod
    raise TruncationError("siegel_theta hit the term cap")


def gauss_legendre_nodes(n: int, a: float, b: float):
    """Nodes and weights for n-point Gauss-Legendre on [a, b]."""
    if n < 1:
        raise ValueError("need at least one node")
    x, w = np.polynomial.legendre.leggauss(n)
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    return mid + half * x, half * w


def gauss_legendre(integrand, a: float, b: float, n: int):
    """n-point Gauss-Legendre integral of integrand over [a, b].

    Exact for polynomials of degree <= 2n - 1.
    """
    xs, ws = gauss_legendre_nodes(n, a, b)
    return sum(wi * integrand(xi) for xi, wi in zip(xs, ws))
