"""Dirichlet characters with exact root-of-unity arithmetic.

Characters are stored as exponent tables: chi(a) = exp(2 pi i e(a) / M)
with integer e(a) modulo a common order M, so products, conjugates and
equality are exact.  Complex values are cached on first use.
"""

from __future__ import annotations

import cmath
import math
from functools import lru_cache

from sympy import primitive_root

from .special import periodic_bernoulli2


def _xgcd(a, b):
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    return old_r, old_s, old_t


def _crt_pair(r1, m1, m2):
    # x with x = r1 (mod m1), x = 1 (mod m2); gcd(m1, m2) = 1.
    g, p, q = _xgcd(m1, m2)
    assert g == 1
    return (r1 * q * m2 + 1 * p * m1) % (m1 * m2)


def _factorize(n):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            out.append((d, e))
        d += 1
    if n > 1:
        out.append((n, 1))
    return out


@lru_cache(maxsize=None)
def _unit_group(n):
    """Generators (g_i, m_i) with (Z/nZ)* the direct product of <g_i>."""
    if n == 1:
        return ()
    gens = []
    for p, e in _factorize(n):
        pe = p**e
        if p == 2:
            if e == 2:
                gens.append((_crt_pair(pe - 1, pe, n // pe), 2))
            elif e >= 3:
                gens.append((_crt_pair(pe - 1, pe, n // pe), 2))
                gens.append((_crt_pair(5 % pe, pe, n // pe), 2 ** (e - 2)))
        else:
            g = int(primitive_root(pe))
            gens.append((_crt_pair(g, pe, n // pe), pe // p * (p - 1)))
    return tuple(gens)


@lru_cache(maxsize=None)
def _dlog_tables(n):
    """Discrete logs of every unit mod n on the generator tuple.

    Each generator is congruent to 1 away from its own prime power, so
    the joint logs are found by enumerating exponent tuples within each
    CRT component.  Moduli here are tiny, brute force is fine.
    """
    gens = _unit_group(n)
    units = [a for a in range(n) if math.gcd(a, n) == 1]
    # Enumerate the full product group once, recording exponent tuples.
    logs = {}
    orders = [m for _, m in gens]
    total = 1
    for m in orders:
        total *= m
    choices = [0] * len(gens)
    for _ in range(total):
        val = 1
        for (g, _), k in zip(gens, choices):
            val = val * pow(g, k, n) % n
        logs[val] = tuple(choices)
        i = 0
        while i < len(choices):
            choices[i] += 1
            if choices[i] < orders[i]:
                break
            choices[i] = 0
            i += 1
    assert len(logs) == len(units), "generators do not span the unit group"
    return logs


class DirichletCharacter:
    """A Dirichlet character modulo N with exact value exponents."""

    def __init__(self, modulus, order, exponents):
        self.modulus = modulus
        exps = [None if e is None else e % order for e in exponents]
        # Reduce so that `order` is the true multiplicative order of chi.
        g = order
        for e in exps:
            if e:
                g = math.gcd(g, e)
        order //= g
        # exponents[a] is None off the units, else an int modulo `order`.
        self._exp = tuple(None if e is None else e // g for e in exps)
        self.order = order
        assert len(self._exp) == modulus
        self._cache = None

    @property
    def exponents(self):
        return self._exp

    def _values(self):
        if self._cache is None:
            m = self.order
            roots = [cmath.exp(2j * math.pi * k / m) for k in range(m)]
            self._cache = tuple(
                0.0 if e is None else roots[e] for e in self._exp
            )
        return self._cache

    def __call__(self, n) -> complex:
        return self._values()[n % self.modulus]

    def exponent_at(self, n):
        """Exact exponent e with chi(n) = exp(2 pi i e / order), or None."""
        return self._exp[n % self.modulus]

    @property
    def is_trivial(self):
        return all(e is None or e == 0 for e in self._exp)

    @property
    def is_even(self):
        return self._exp[(-1) % self.modulus] == 0

    @property
    def is_odd(self):
        return not self.is_even

    @property
    def conductor(self):
        """Smallest d | N such that chi factors through (Z/dZ)*."""
        n = self.modulus
        for d in sorted(_divisors(n)):
            ok = True
            for a in range(n):
                if math.gcd(a, n) == 1 and a % d == 1 % d and self._exp[a] != 0:
                    ok = False
                    break
            if ok:
                return d
        return n

    @property
    def is_primitive(self):
        return self.conductor == self.modulus

    def conjugate(self):
        exps = [None if e is None else (-e) % self.order for e in self._exp]
        return DirichletCharacter(self.modulus, self.order, exps)

    def __mul__(self, other):
        if self.modulus != other.modulus:
            raise ValueError("character moduli differ")
        m = _lcm(self.order, other.order)
        exps = []
        for e1, e2 in zip(self._exp, other._exp):
            if e1 is None or e2 is None:
                exps.append(None)
            else:
                exps.append((e1 * (m // self.order) + e2 * (m // other.order)) % m)
        return DirichletCharacter(self.modulus, m, exps)

    def _reduced_key(self):
        # Exponents as fractions of a full turn, in lowest terms.
        key = []
        for e in self._exp:
            if e is None:
                key.append(None)
            else:
                g = math.gcd(e, self.order)
                key.append((e // g, self.order // g))
        return tuple(key)

    def __eq__(self, other):
        if not isinstance(other, DirichletCharacter):
            return NotImplemented
        return (
            self.modulus == other.modulus
            and self._reduced_key() == other._reduced_key()
        )

    def __hash__(self):
        return hash((self.modulus, self._reduced_key()))

    def __repr__(self):
        return f"DirichletCharacter(mod {self.modulus}, order {self.order})"


def _lcm(a, b):
    return a // math.gcd(a, b) * b


def _divisors(n):
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            if d != n // d:
                out.append(n // d)
        d += 1
    return sorted(out)


def enumerate_characters(modulus):
    """All phi(N) Dirichlet characters mod N, closed under products."""
    if modulus == 1:
        return [DirichletCharacter(1, 1, [0])]
    gens = _unit_group(modulus)
    logs = _dlog_tables(modulus)
    orders = [m for _, m in gens]
    total_order = 1
    for m in orders:
        total_order = _lcm(total_order, m)
    chars = []
    choices = [0] * len(orders)
    while True:
        exps = []
        for a in range(modulus):
            if math.gcd(a, modulus) != 1:
                exps.append(None)
                continue
            vec = logs[a]
            e = 0
            for k, c, m in zip(vec, choices, orders):
                e += k * c * (total_order // m)
            exps.append(e % total_order)
        chars.append(DirichletCharacter(modulus, total_order, exps))
        # Odometer increment over the exponent choices.
        i = 0
        while i < len(choices):
            choices[i] += 1
            if choices[i] < orders[i]:
                break
            choices[i] = 0
            i += 1
        else:
            break
        if i == len(choices):
            break
    return chars


def trivial_character(modulus):
    exps = [
        0 if math.gcd(a, modulus) == 1 else None for a in range(modulus)
    ]
    return DirichletCharacter(modulus, 1, exps)


class FiniteMap:
    """A function Z/NZ -> C given by its value table."""

    def __init__(self, modulus, values):
        values = list(values)
        if len(values) != modulus:
            raise ValueError("value table length must equal the modulus")
        self.modulus = modulus
        self.values = [complex(v) for v in values]

    @classmethod
    def from_character(cls, chi):
        return cls(chi.modulus, [chi(a) for a in range(chi.modulus)])

    @classmethod
    def delta(cls, modulus, support):
        vals = [0.0] * modulus
        vals[support % modulus] = 1.0
        return cls(modulus, vals)

    def __call__(self, n):
        return self.values[n % self.modulus]

    def conjugate(self):
        return FiniteMap(self.modulus, [v.conjugate() for v in self.values])

    def total(self):
        return sum(self.values)

    def __eq__(self, other):
        return (
            isinstance(other, FiniteMap)
            and self.modulus == other.modulus
            and self.values == other.values
        )


def gauss_sum(chi) -> complex:
    """tau(chi) = sum_a chi(a) e^{2 pi i a / N}."""
    n = chi.modulus
    return sum(
        chi(a) * cmath.exp(2j * math.pi * a / n) for a in range(1, n)
    )


def fourier_transform(f: FiniteMap) -> FiniteMap:
    """fhat(b) = sum_v f(v) e^{-2 pi i b v / N}."""
    n = f.modulus
    out = []
    for b in range(n):
        out.append(
            sum(
                f.values[v] * cmath.exp(-2j * math.pi * b * v / n)
                for v in range(n)
            )
        )
    return FiniteMap(n, out)


def twisted_bernoulli2(chi) -> complex:
    """B_{2,chi} = N sum_a chi(a) B2bar(a/N), a finite exact-style sum."""
    n = chi.modulus
    return n * sum(
        chi(a) * periodic_bernoulli2(a / n) for a in range(1, n + 1)
    )


def l_chi_2(chi) -> complex:
    """L(chi, 2) for an even nontrivial primitive character.

    Uses the closed form L(chi, 2) / pi^2 = B_{2, chibar} / (N tau(chibar)),
    equivalent to the functional equation at s = 2.
    """
    if chi.is_trivial:
        raise ValueError("l_chi_2 requires a nontrivial character")
    if not chi.is_even:
        raise ValueError("l_chi_2 requires an even character")
    if not chi.is_primitive:
        raise ValueError("l_chi_2 requires a primitive character")
    bar = chi.conjugate()
    return (
        math.pi**2
        * twisted_bernoulli2(bar)
        / (chi.modulus * gauss_sum(bar))
    )


def character_from_label(label):
    """Parse labels like '11:g=2,zeta5^1' meaning chi(2) = zeta_5.

    The generator must pin the character down uniquely among all
    characters mod N; otherwise the label is rejected.
    """
    try:
        mod_part, rest = label.split(":", 1)
        gen_part, root_part = rest.split(",", 1)
        modulus = int(mod_part)
        gen = int(gen_part.split("=", 1)[1])
        base, expo = root_part.split("^", 1)
        if not base.startswith("zeta"):
            raise ValueError
        root_order = int(base[4:])
        power = int(expo)
    except (ValueError, IndexError):
        raise ValueError(f"cannot parse character label {label!r}") from None
    if math.gcd(gen, modulus) != 1:
        raise ValueError("generator must be a unit")
    matches = []
    for chi in enumerate_characters(modulus):
        e = chi.exponent_at(gen)
        # chi(gen) = zeta_m^k exactly iff e/order = k/m (mod 1).
        if (e * root_order - power * chi.order) % (chi.order * root_order) == 0:
            matches.append(chi)
    if not matches:
        raise ValueError(f"no character mod {modulus} with that value")
    if len(matches) > 1:
        raise ValueError(f"label {label!r} is ambiguous")
    return matches[0]


def character_label(chi) -> str:
    """Inverse of character_from_label when (Z/N)* is cyclic.

    The value at the smallest primitive root pins the character down
    uniquely, so the label always round-trips.
    """
    n = chi.modulus
    if n <= 2:
        return f"{n}:g=1,zeta1^0"
    g = primitive_root(n)
    if g is None:
        raise ValueError(f"(Z/{n})* is not cyclic; no label for modulus {n}")
    return f"{n}:g={g},zeta{chi.order}^{chi.exponent_at(g)}"
