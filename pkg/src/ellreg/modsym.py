"""Manin symbols over the order-N pairs in (Z/NZ)^2.

The symbol xi(u, v) is the geodesic path {g0, ginfinity} on the modular
curve, for any integral unimodular g with bottom row (u, v) mod N.  This
module provides the two- and three-term relation quotient with exact
rational linear algebra, cusp classes and the boundary map, diamond and
T_2 actions, and two independent ways to pair symbols with a weight-2
rational newform of prime level: a bridge through twisted central
L-values and a direct path-integral oracle that reduces evaluation
points with the level-p involution.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from sympy import Matrix, Rational

from .characters import enumerate_characters, gauss_sum
from .eisenstein import SIGMA, TAU_MAT, UnimodularMatrix
from .lseries import (
    ModularFormData,
    eval_form,
    l_value,
    root_number,
    twist_by_character,
)
from .special import DEFAULT_CONTROL, SeriesControl, gauss_legendre_nodes

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class SymbolIndex:
    """A pair (u, v) of additive order N in (Z/NZ)^2."""

    level: int
    u: int
    v: int

    def __post_init__(self):
        if self.level < 1:
            raise ValueError("level must be positive")
        object.__setattr__(self, "u", self.u % self.level)
        object.__setattr__(self, "v", self.v % self.level)
        if math.gcd(math.gcd(self.u, self.v), self.level) != 1:
            raise ValueError("pair (%d, %d) does not have order %d"
                             % (self.u, self.v, self.level))

    @property
    def pair(self):
        return (self.u, self.v)

    def act(self, g: UnimodularMatrix) -> "SymbolIndex":
        return SymbolIndex(self.level, *g.row_action(self.pair, self.level))

    def negated(self) -> "SymbolIndex":
        return SymbolIndex(self.level, -self.u, -self.v)


def enumerate_symbols(level: int) -> list:
    out = []
    for u in range(level):
        for v in range(level):
            if math.gcd(math.gcd(u, v), level) == 1:
                out.append(SymbolIndex(level, u, v))
    return out


def matrix_lift(x: SymbolIndex) -> UnimodularMatrix:
    """Canonical unimodular matrix with bottom row (u, v) mod N.

    The bottom row is the smallest congruent coprime pair with
    0 <= c <= N and d >= min allowed, and the top row is reduced so that
    0 <= a < c whenever c > 0.  Deterministic, so paths are reproducible.
    """
    n, u, v = x.level, x.u, x.v
    for c in (u, u + n):
        if c == 0:
            if v == 1 % n:
                return UnimodularMatrix(1, 0, 0, 1)
            if v == (-1) % n:
                return UnimodularMatrix(-1, 0, 0, -1)
            continue
        for t in range(c + 2):
            d = v + t * n
            if math.gcd(c, d) == 1:
                a, b = _complete_row(c, d)
                return UnimodularMatrix(a, b, c, d)
    raise RuntimeError("no coprime lift found for %r" % (x,))


def _complete_row(c: int, d: int):
    # a d - b c = 1 with 0 <= a < c for c > 0.
    g, s, t = _xgcd(c, d)
    assert g == 1
    a, b = t, -s
    shift = a // c
    return a - shift * c, b - shift * d


def _xgcd(a: int, b: int):
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


class SymbolVector:
    """Sparse formal combination of order-N symbols."""

    def __init__(self, level: int, weights: dict | None = None):
        self.level = level
        self.weights = {}
        for key, value in (weights or {}).items():
            if not isinstance(key, SymbolIndex):
                key = SymbolIndex(level, *key)
            if key.level != level:
                raise ValueError("mixed levels in symbol vector")
            if value != 0:
                self.weights[key] = self.weights.get(key, 0) + value

    @classmethod
    def delta(cls, level: int, pair) -> "SymbolVector":
        return cls(level, {pair: 1})

    def __add__(self, other: "SymbolVector") -> "SymbolVector":
        if other.level != self.level:
            raise ValueError("mixed levels")
        merged = dict(self.weights)
        for key, value in other.weights.items():
            merged[key] = merged.get(key, 0) + value
        return SymbolVector(self.level, merged)

    def scaled(self, s) -> "SymbolVector":
        return SymbolVector(self.level,
                            {k: s * v for k, v in self.weights.items()})

    def items(self):
        return sorted(self.weights.items(),
                      key=lambda kv: (kv[0].u, kv[0].v))

    def __eq__(self, other):
        return (isinstance(other, SymbolVector)
                and self.level == other.level
                and self.weights == other.weights)

    def __repr__(self):
        return "SymbolVector(%d, %r)" % (
            self.level, {k.pair: v for k, v in self.items()})


def _maybe_symbol(level: int, u: int, v: int):
    u %= level
    v %= level
    if math.gcd(math.gcd(u, v), level) != 1:
        return None
    return SymbolIndex(level, u, v)


def hecke_t2(vec: SymbolVector) -> SymbolVector:
    """Four-term T_2 image, with pairs of smaller order contributing 0."""
    n = vec.level
    out = {}
    for x, c in vec.weights.items():
        u, v = x.pair
        for iu, iv in ((2 * u, v), (u, 2 * v), (2 * u, u + v),
                       (u + v, 2 * v)):
            image = _maybe_symbol(n, iu, iv)
            if image is not None:
                out[image] = out.get(image, 0) + c
    return SymbolVector(n, out)


def diamond(d: int, vec: SymbolVector) -> SymbolVector:
    """Diamond action [u, v] -> [du, dv] for a unit d."""
    n = vec.level
    if math.gcd(d, n) != 1:
        raise ValueError("%d is not a unit mod %d" % (d, n))
    return SymbolVector(
        n, {SymbolIndex(n, d * x.u, d * x.v): c
            for x, c in vec.weights.items()})


@dataclass(frozen=True)
class CuspClass:
    """Orbit of an order-N pair under sign and upper-triangular shifts."""

    level: int
    u: int
    v: int

    @property
    def pair(self):
        return (self.u, self.v)

    @property
    def gcd(self) -> int:
        return math.gcd(self.u, self.level)

    @property
    def width(self) -> int:
        return self.level // math.gcd(self.u * self.u, self.level)

    @property
    def is_infinity(self) -> bool:
        return self.pair == (0, 1)


def cusp_class_of(x: SymbolIndex) -> CuspClass:
    n = x.level
    best = None
    for s in (1, -1):
        for t in range(n):
            cand = ((s * x.u) % n, (s * (x.v + t * x.u)) % n)
            if best is None or cand < best:
                best = cand
    return CuspClass(n, *best)


def cusp_classes(level: int) -> list:
    seen = {}
    for x in enumerate_symbols(level):
        cls = cusp_class_of(x)
        seen.setdefault(cls.pair, cls)
    return [seen[key] for key in sorted(seen)]


def boundary(vec: SymbolVector) -> dict:
    """Difference of end cusps, [x] - [x sigma], extended linearly."""
    out = {}
    for x, c in vec.weights.items():
        for cls, s in ((cusp_class_of(x), c),
                       (cusp_class_of(x.act(SIGMA)), -c)):
            out[cls] = out.get(cls, 0) + s
            if out[cls] == 0:
                del out[cls]
    return out


@lru_cache(maxsize=None)
def _symbol_space(level: int):
    symbols = enumerate_symbols(level)
    reps = []
    rep_index = {}
    for x in symbols:
        key = min(x.pair, x.negated().pair)
        if key not in rep_index:
            rep_index[key] = len(reps)
            reps.append(SymbolIndex(level, *key))
    def idx(x):
        return rep_index[min(x.pair, x.negated().pair)]

    rel_rows = []
    for x in reps:
        row = [0] * len(reps)
        row[idx(x)] += 1
        row[idx(x.act(SIGMA))] += 1
        rel_rows.append(row)
        row = [0] * len(reps)
        row[idx(x)] += 1
        row[idx(x.act(TAU_MAT))] += 1
        row[idx(x.act(TAU_MAT).act(TAU_MAT))] += 1
        rel_rows.append(row)

    classes = cusp_classes(level)
    class_index = {c.pair: i for i, c in enumerate(classes)}
    bnd_rows = []
    for x in reps:
        row = [0] * len(classes)
        row[class_index[cusp_class_of(x).pair]] += 1
        row[class_index[cusp_class_of(x.act(SIGMA)).pair]] -= 1
        bnd_rows.append(row)

    relations = Matrix(rel_rows)
    bnd = Matrix(bnd_rows)  # maps symbol coordinates to cusp coordinates
    if relations * bnd != Matrix.zeros(relations.rows, bnd.cols):
        raise RuntimeError("relation vectors do not stay in the kernel "
                           "of the boundary map")
    return symbols, reps, idx, relations, bnd, classes


def relation_quotient_dims(level: int):
    """(dimension of the relation quotient, cuspidal dimension)."""
    _, reps, _, relations, bnd, _ = _symbol_space(level)
    quotient = len(reps) - relations.rank()
    cuspidal = (len(reps) - bnd.rank()) - relations.rank()
    return quotient, cuspidal


def cuspidal_hecke_t2_matrix(level: int) -> Matrix:
    """Exact matrix of T_2 on the cuspidal relation quotient."""
    _, reps, idx, relations, bnd, _ = _symbol_space(level)
    nreps = len(reps)

    # Coordinates on the quotient by the relation span: kill the pivot
    # coordinates of the row-reduced relation matrix.
    rref, pivots = relations.rref()
    free = [j for j in range(nreps) if j not in pivots]

    def reduce_vec(col: Matrix) -> Matrix:
        out = col[:, :]
        for r, j in enumerate(pivots):
            coeff = out[j, 0]
            if coeff != 0:
                out -= coeff * rref[r, :].T
        return Matrix([out[j, 0] for j in free])

    def t2_column(x: SymbolIndex) -> Matrix:
        col = [0] * nreps
        vec = hecke_t2(SymbolVector.delta(x.level, x.pair))
        for y, c in vec.weights.items():
            col[idx(y)] += c
        return Matrix(col)

    t2_quotient = Matrix.hstack(
        *[reduce_vec(t2_column(reps[j])) for j in free])

    # Boundary map expressed on the quotient coordinates.
    bnd_quotient = Matrix.vstack(*[bnd[j, :] for j in free]).T
    kernel = bnd_quotient.nullspace()
    if not kernel:
        return Matrix.zeros(0, 0)
    basis = Matrix.hstack(*kernel)
    image = t2_quotient * basis
    # Solve basis * A = image exactly; the action preserves the kernel.
    sol = basis.solve_least_squares(image)
    if basis * sol != image:
        raise RuntimeError("T_2 did not preserve the cuspidal subspace")
    return sol


class XiTable:
    """Values of the period pairing of a prime-level rational newform.

    The pairing is homogeneous, so it lives on the projective classes
    u/v; pairs of smaller order evaluate to zero.
    """

    def __init__(self, level: int, at_infinity: complex, units: dict):
        self.level = level
        self.at_infinity = at_infinity
        self.units = dict(units)

    def __call__(self, pair) -> complex:
        if isinstance(pair, SymbolIndex):
            u, v = pair.pair
        else:
            u, v = pair[0] % self.level, pair[1] % self.level
        if u == 0 and v == 0:
            return 0.0
        if v % self.level == 0:
            return self.at_infinity
        x = (u * pow(v, -1, self.level)) % self.level
        if x == 0:
            return -self.at_infinity
        return self.units[x]

    def plus(self, pair) -> complex:
        u, v = pair if not isinstance(pair, SymbolIndex) else pair.pair
        return 0.5 * (self((u, v)) + self((-u, v)))

    def minus(self, pair) -> complex:
        u, v = pair if not isinstance(pair, SymbolIndex) else pair.pair
        return 0.5 * (self((u, v)) - self((-u, v)))


def xi_bridge_table(form: ModularFormData,
                    ctl: SeriesControl = DEFAULT_CONTROL) -> XiTable:
    """Period pairing from twisted central values.

    xi(x) = (w / (2 pi (p-1))) sum_chi tau(chibar) chibar(x) L(f, chi, 1)
    over nontrivial characters mod p, xi(infinity) = (w / 2 pi) L(f, 1),
    and xi(0) = -xi(infinity).  The chibar(x) weight is the one that
    agrees with the quadrature route and satisfies the Hecke recursion.
    """
    p = form.level
    w = root_number(form)
    central = {}
    for chi in enumerate_characters(p):
        if chi.is_trivial:
            continue
        central[chi] = (gauss_sum(chi.conjugate()),
                        l_value(twist_by_character(form, chi), 1.0, ctl))
    units = {}
    for x in range(1, p):
        acc = 0j
        for chi, (tau_bar, lval) in central.items():
            acc += tau_bar * complex(chi(x)).conjugate() * lval
        units[x] = w * acc / (TWO_PI * (p - 1))
    at_inf = w * l_value(form, 1.0, ctl) / TWO_PI
    return XiTable(p, at_inf, units)


def _reduced_eval(form: ModularFormData, z: complex, w: complex,
                  ctl: SeriesControl = DEFAULT_CONTROL,
                  threshold: float | None = None,
                  max_steps: int = 40) -> complex:
    """f(z) anywhere in the upper half plane.

    Pushes z upward with translations, bottom rows (kp, d), and the
    level involution z -> -1/(pz) (which trades f for w times the
    conjugate stream) until the q-expansion converges comfortably.
    """
    p = form.level
    if threshold is None:
        threshold = 0.7 / p
    mult = 1.0 + 0.0j
    conjugated = False
    for _ in range(max_steps):
        shift = round(z.real)
        z -= shift
        if z.imag >= threshold:
            g = form.conjugate_partner() if conjugated else form
            return mult * eval_form(g, z, ctl)
        best = None
        for k in range(-8, 9):
            if k == 0:
                continue
            c = k * p
            for d in range(round(-c * z.real) - 2, round(-c * z.real) + 3):
                if math.gcd(c, d) != 1:
                    continue
                gain = 1.0 / abs(c * z + d) ** 2
                if gain > 1.0001 and (best is None or gain > best[0]):
                    best = (gain, c, d)
        fricke_gain = 1.0 / (p * abs(z) ** 2)
        if fricke_gain > 1.0001 and (best is None or fricke_gain > best[0]):
            # f(z) = (w / (p z^2)) fbar(-1/(pz)); fbar uses wbar
            mult *= (w if not conjugated else w.conjugate()) / (p * z * z)
            z = -1.0 / (p * z)
            conjugated = not conjugated
            continue
        if best is None:
            raise RuntimeError("point reduction stalled at %r" % (z,))
        _, c, d = best
        if c < 0:
            c, d = -c, -d  # same moebius map and same cocycle value
        a, b = _complete_row(c, d)
        # bottom row is (c, d) = (kp, d), so the map is level-stable and
        # f((az+b)/(cz+d)) = (cz+d)^2 f(z)
        mult /= (c * z + d) ** 2
        z = (a * z + b) / (c * z + d)
    raise RuntimeError("point reduction exceeded %d steps" % max_steps)


def period_integral_oracle(form: ModularFormData, x: SymbolIndex,
                           ctl: SeriesControl = DEFAULT_CONTROL,
                           nodes: int = 32, panel: float = 3.0) -> complex:
    """-i times the integral of f along the lift of x, by quadrature.

    Loose-tolerance independent route to the period pairing: both path
    ends are cusps, reached through the substitution t -> 1/t and
    pointwise reduced evaluation.
    """
    if form.level != x.level:
        raise ValueError("level mismatch between form and symbol")
    w = root_number(form)
    g = matrix_lift(x)

    def integrand(t: float) -> complex:
        zt = g.act(1j * t)
        up = _reduced_eval(form, zt, w, ctl) * g.derivative(1j * t)
        zs = g.act(1j / t)
        down = (_reduced_eval(form, zs, w, ctl) * g.derivative(1j / t)
                / (t * t))
        return up + down

    tmax = x.level * math.log(1.0 / ctl.abs_tol) / TWO_PI + 4.0
    total = 0.0 + 0.0j
    t0 = 1.0
    while t0 < tmax:
        t1 = min(t0 + panel, tmax)
        ts, ws = gauss_legendre_nodes(nodes, t0, t1)
        total += sum(wt * integrand(tt) for tt, wt in zip(ts, ws))
        t0 = t1
    # d(g(it)) = g'(it) i dt, and the overall -i of the pairing
    return total


def petersson(xi1: XiTable, xi2: XiTable) -> complex:
    """Pairing of two forms through their period tables.

    (i / (12 (N^2-1))) sum over (u, v) of
    xi1(u, v) conj(xi2(v, -u-v)) - xi1(v, -u-v) conj(xi2(u, v)),
    the sign being fixed so the pairing of a form with itself is
    positive for the path orientation used by the period tables.
    """
    if xi1.level != xi2.level:
        raise ValueError("level mismatch")
    n = xi1.level
    acc = 0j
    for u in range(n):
        for v in range(n):
            left = xi1((u, v)) * np.conj(xi2((v, -u - v)))
            right = xi1((v, -u - v)) * np.conj(xi2((u, v)))
            acc += left - right
    return acc * 1j / (12.0 * (n * n - 1))
