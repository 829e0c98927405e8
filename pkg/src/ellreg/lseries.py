"""Completed L-values of weight-2 forms by incomplete-gamma smoothing.

A weight-2 newform is carried as a coefficient stream plus its level.
The completed value Lambda(g, s) = M^{s/2} (2pi)^{-s} Gamma(s) L(g, s)
is computed from the split integral representation

    Lambda(g, s) = sum_n a_n G_s(cn) - w sum_n b_n G_{2-s}(cn),

with c = 2pi/sqrt(M), G_s(x) = x^{-s} Gamma(s, x), b_n the coefficients
of the functional-equation partner (complex conjugates here), and w the
Atkin-Lehner pseudo-eigenvalue, always measured numerically from the
transformation g(-1/(Mz)) = w M z^2 gbar(z).  The same machinery covers
twists f (x) chi of prime-level forms, the Rankin convolution identity
at the Dirichlet-coefficient level, and the residue of L(f (x) f, s) at
s = 2 expressed through the twisted central values.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .characters import DirichletCharacter, enumerate_characters, gauss_sum
from .elliptic import CurveModel, an_coefficients
from .special import (
    DEFAULT_CONTROL,
    SeriesControl,
    TruncationError,
    complex_gamma,
    incomplete_gamma_upper,
    incomplete_gamma_upper_complex,
)

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True, eq=False)
class ModularFormData:
    """Level and coefficient streams of a weight-2 form.

    coefficients[n] is a_n (index 0 unused), conjugates[n] the n-th
    coefficient of the functional-equation partner; for every form in
    scope that partner is the complex-conjugate stream.
    """

    level: int
    coefficients: np.ndarray
    conjugates: np.ndarray
    label: str = ""
    character: DirichletCharacter | None = None
    _root_cache: list = field(default_factory=list, repr=False)

    def __post_init__(self):
        if self.level < 1:
            raise ValueError("level must be a positive integer")
        a = np.asarray(self.coefficients, dtype=complex)
        b = np.asarray(self.conjugates, dtype=complex)
        if a.shape != b.shape or a.ndim != 1 or len(a) < 2:
            raise ValueError("coefficient streams must be matching 1-d arrays")
        if abs(a[1] - 1.0) > 1e-12:
            raise ValueError("expected a normalized eigenform with a_1 = 1")
        object.__setattr__(self, "coefficients", a)
        object.__setattr__(self, "conjugates", b)

    @property
    def nmax(self) -> int:
        return len(self.coefficients) - 1

    def conjugate_partner(self) -> "ModularFormData":
        """The form whose coefficients are the conjugate stream."""
        return ModularFormData(
            self.level,
            self.conjugates,
            self.coefficients,
            label=self.label + "~",
            character=None if self.character is None
            else self.character.conjugate(),
        )


def newform_from_curve(curve: CurveModel, nmax: int = 4000) -> ModularFormData:
    """Rational newform attached to an integral Weierstrass model."""
    a = np.array(an_coefficients(curve, nmax), dtype=complex)
    return ModularFormData(curve.conductor, a, a.copy(),
                           label="%da" % curve.conductor)


def _term_count(level: int, nmax: int, tol: float) -> int:
    # Smallest k with 4 k^{3/2} |q|^k / (1 - |q|) below tol, where the
    # 4 d(n) sqrt(n) <= 4 n^{3/2} Hasse-style bound controls the tail.
    c = TWO_PI / math.sqrt(level) if level > 2 else TWO_PI / math.sqrt(3)
    return _terms_for_rate(c, nmax, tol)


def _terms_for_rate(rate: float, nmax: int, tol: float) -> int:
    k = 8
    while k <= nmax:
        if 4.0 * k ** 1.5 * math.exp(-rate * k) / (1.0 - math.exp(-rate)) < tol:
            return k
        k += 1 + k // 8
    raise TruncationError(
        "need more coefficients: decay rate %.3g reaches only %.3g after "
        "%d terms" % (rate, 4.0 * nmax ** 1.5 * math.exp(-rate * nmax), nmax)
    )


def eval_form(form: ModularFormData, z: complex,
              ctl: SeriesControl = DEFAULT_CONTROL) -> complex:
    """Sum of the q-expansion at z in the upper half plane."""
    z = complex(z)
    if not z.imag > 0:
        raise ValueError("eval_form needs Im z > 0")
    k = _terms_for_rate(TWO_PI * z.imag, form.nmax, ctl.abs_tol)
    n = np.arange(1, k + 1)
    return complex(np.sum(form.coefficients[1:k + 1]
                          * np.exp(2j * math.pi * z * n)))


def root_number(form: ModularFormData, tol: float = 1e-8) -> complex:
    """Atkin-Lehner pseudo-eigenvalue from g(-1/(Mz)) = w M z^2 gbar(z).

    Sampled at two heights; the samples must agree and have modulus 1.
    """
    if form._root_cache:
        return form._root_cache[0]
    m = form.level
    partner = form.conjugate_partner()
    samples = []
    for c in (1.13, 1.41, 0.97, 1.67):
        y = c / math.sqrt(m)
        den = eval_form(partner, 1j * y)
        if abs(den) < 1e-12 * math.exp(-TWO_PI * y):
            continue
        num = eval_form(form, 1j / (m * y))
        samples.append(-num / (m * y * y * den))
        if len(samples) == 2:
            break
    if len(samples) < 2:
        raise RuntimeError("root number: q-expansion vanished at every "
                           "sample height")
    w1, w2 = samples
    if abs(w1 - w2) > tol or abs(abs(w1) - 1.0) > tol:
        raise RuntimeError(
            "root number inconsistent: samples %r, %r" % (w1, w2))
    w = 0.5 * (w1 + w2)
    w /= abs(w)
    form._root_cache.append(w)
    return w


def _gamma_factor(s, x: float) -> complex:
    # G_s(x) = x^{-s} Gamma(s, x)
    s = complex(s)
    if s.imag == 0.0:
        return incomplete_gamma_upper(s.real, x) * x ** (-s.real)
    return incomplete_gamma_upper_complex(s, x) * cmath.exp(-s * math.log(x))


def lambda_value(form: ModularFormData, s,
                 ctl: SeriesControl = DEFAULT_CONTROL,
                 w: complex | None = None) -> complex:
    """Completed value Lambda(g, s) = M^{s/2} (2pi)^{-s} Gamma(s) L(g, s)."""
    if w is None:
        w = root_number(form)
    m = form.level
    c = TWO_PI / math.sqrt(m)
    k = _term_count(m, form.nmax, ctl.abs_tol)
    total = 0.0 + 0.0j
    two_minus_s = 2.0 - complex(s)
    for n in range(1, k + 1):
        x = c * n
        total += form.coefficients[n] * _gamma_factor(s, x)
        total -= w * form.conjugates[n] * _gamma_factor(two_minus_s, x)
    return total


def l_value(form: ModularFormData, s,
            ctl: SeriesControl = DEFAULT_CONTROL,
            w: complex | None = None) -> complex:
    """Uncompleted L(g, s), from lambda_value and the Gamma factor."""
    s = complex(s)
    lam = lambda_value(form, s, ctl, w)
    if s.imag == 0.0:
        gamma_s = math.gamma(s.real)
    else:
        gamma_s = complex_gamma(s)
    return lam * (TWO_PI ** s) * form.level ** (-s / 2.0) / gamma_s


def dirichlet_series_direct(form: ModularFormData, s, nmax: int | None = None):
    """Plain partial sum of sum a_n / n^s; only sensible for Re s > 2."""
    k = form.nmax if nmax is None else min(nmax, form.nmax)
    n = np.arange(1, k + 1, dtype=float)
    return complex(np.sum(form.coefficients[1:k + 1] * n ** (-complex(s))))


def twist_by_character(form: ModularFormData,
                       chi: DirichletCharacter) -> ModularFormData:
    """The primitive twist f (x) chi, for chi primitive mod the prime level.

    Coefficients a_n chi(n), partner a_n chibar(n), level p^2.  The
    trivial character leaves the form untouched.
    """
    if chi.is_trivial:
        return form
    p = form.level
    if chi.modulus != p:
        raise ValueError("character modulus %d does not match level %d"
                         % (chi.modulus, p))
    if not chi.is_primitive:
        raise ValueError("twisting needs a primitive character")
    if form.character is not None:
        raise ValueError("twisting is only set up for trivial-character "
                         "forms")
    vals = np.array([chi(n) for n in range(p)], dtype=complex)
    mult = vals[np.arange(len(form.coefficients)) % p]
    return ModularFormData(
        p * p,
        form.coefficients * mult,
        form.conjugates * np.conj(mult),
        label=form.label + "*chi",
        character=chi,
    )


_WIDE = np.complex256 if hasattr(np, "complex256") else np.complex128
_WIDE_PI = np.longdouble(
    "3.141592653589793238462643383279502884"
) if hasattr(np, "complex256") else np.pi


def _character_values_wide(chi: DirichletCharacter, nmax: int) -> np.ndarray:
    # chi(0..nmax) at extended precision, from the exact root exponents.
    order = chi.order
    roots = np.exp(2j * _WIDE_PI * np.arange(order, dtype=np.longdouble)
                   / np.longdouble(order)).astype(_WIDE)
    out = np.zeros(nmax + 1, dtype=_WIDE)
    for n in range(nmax + 1):
        e = chi.exponent_at(n)
        if e is not None:
            out[n] = roots[e]
    return out


def rankin_sigma(chi1: DirichletCharacter, chi2: DirichletCharacter,
                 nmax: int) -> np.ndarray:
    """sigma_{chi1,chi2}(n) = sum_{d | n} d chi1(d) chi2(n/d), n <= nmax."""
    v1 = _character_values_wide(chi1, nmax)
    v2 = _character_values_wide(chi2, nmax)
    out = np.zeros(nmax + 1, dtype=_WIDE)
    for d in range(1, nmax + 1):
        cd = d * v1[d]
        if cd == 0:
            continue
        out[d::d] += cd * v2[1:nmax // d + 1]
    return out


def _dirichlet_convolve(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    nmax = len(a) - 1
    out = np.zeros(nmax + 1, dtype=a.dtype)
    for d in range(1, nmax + 1):
        ad = a[d]
        if ad == 0:
            continue
        out[d::d] += ad * b[1:nmax // d + 1]
    return out


def _dirichlet_inverse(a: np.ndarray) -> np.ndarray:
    nmax = len(a) - 1
    if a[1] == 0:
        raise ValueError("series with vanishing first coefficient has no "
                         "convolution inverse")
    support = [d for d in range(2, nmax + 1) if a[d] != 0]
    inv = np.zeros(nmax + 1, dtype=a.dtype)
    inv[1] = 1.0 / a[1]
    for n in range(2, nmax + 1):
        acc = 0.0 + 0.0j
        for d in support:
            if d > n:
                break
            if n % d == 0:
                acc += a[d] * inv[n // d]
        inv[n] = -acc / a[1]
    return inv


def rankin_convolution_check(form: ModularFormData,
                             chi1: DirichletCharacter,
                             chi2: DirichletCharacter,
                             nmax: int) -> float:
    """Coefficient identity behind the Rankin convolution.

    Compares a_n sigma_{chi1,chi2}(n) against the Dirichlet coefficients
    of L(f,chi2,s) L(f,chi1,s-1) / L(psi chi1 chi2, 2s-2) and returns the
    largest absolute mismatch for n <= nmax.  psi is the nebentypus,
    trivial mod the level here.
    """
    if nmax < 1:
        raise ValueError("nmax must be at least 1")
    if nmax > form.nmax:
        raise ValueError("form carries only %d coefficients" % form.nmax)
    a = form.coefficients[:nmax + 1].real.astype(np.longdouble).astype(_WIDE)
    if np.max(np.abs(form.coefficients[:nmax + 1].imag)) > 0:
        raise ValueError("the coefficient identity is set up for rational "
                         "eigenforms")
    n = np.arange(nmax + 1, dtype=np.longdouble)
    lhs = a * rankin_sigma(chi1, chi2, nmax)

    chi1v = _character_values_wide(chi1, nmax)
    chi2v = _character_values_wide(chi2, nmax)
    series_a = a * chi2v
    series_b = a * chi1v * n
    # The nebentypus is trivial mod the level, so the denominator series
    # L(psi chi1 chi2, 2s-2) contributes (chi1 chi2)(m) m^2 at n = m^2
    # for m prime to the level, zero elsewhere.
    prod_wide = _character_values_wide(chi1 * chi2, int(math.isqrt(nmax)))
    den = np.zeros(nmax + 1, dtype=_WIDE)
    m = 1
    while m * m <= nmax:
        if math.gcd(m, form.level) == 1:
            den[m * m] = prod_wide[m] * (m * m)
        m += 1
    rhs = _dirichlet_convolve(_dirichlet_convolve(series_a, series_b),
                              _dirichlet_inverse(den))
    return float(np.max(np.abs(lhs[1:] - rhs[1:])))


def twisted_lambda_table(form: ModularFormData,
                         ctl: SeriesControl = DEFAULT_CONTROL) -> dict:
    """Lambda(f (x) chi, 1) for every nontrivial character mod the level."""
    table = {}
    for chi in enumerate_characters(form.level):
        if chi.is_trivial:
            continue
        tw = twist_by_character(form, chi)
        table[chi] = lambda_value(tw, 1.0, ctl)
    return table


def residue_tensor_square(form: ModularFormData,
                          ctl: SeriesControl = DEFAULT_CONTROL,
                          lambda_table: dict | None = None) -> float:
    """Residue of L(f (x) f, s) at s = 2 for prime-level trivial-character f.

    (2 pi i / ((N+1)(N-1)^2)) sum Lambda(f x chi',1) Lambda(f x chi,1)
    / tau(chi chi') over ordered pairs of primitive characters mod N
    with chi chi' odd.
    """
    n = form.level
    if lambda_table is None:
        lambda_table = twisted_lambda_table(form, ctl)
    chars = list(lambda_table)
    total = 0.0 + 0.0j
    for chi in chars:
        for chi2 in chars:
            prod = chi * chi2
            if not prod.is_odd:
                continue
            total += (lambda_table[chi2] * lambda_table[chi]
                      / gauss_sum(prod))
    value = total * 2j * math.pi / ((n + 1) * (n - 1) ** 2)
    if abs(value.imag) > 1e-8 * max(1.0, abs(value.real)):
        raise RuntimeError("residue came out non-real: %r" % value)
    return value.real
