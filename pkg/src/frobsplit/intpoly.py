"""Polynomials over Z and over finite fields.

Covers the coefficient-level machinery the rest of the package leans on:
reduction mod a prime, complete factorisation over GF(q) (squarefree split,
distinct-degree split, Cantor-Zassenhaus equal-degree split), factorisation
over Z by the classical mod-p / Hensel / recombination route with a
Landau-Mignotte coefficient bound, and exact d-th roots of monic integer
polynomials.  Everything is exact; randomised splitting is driven by an
explicit seed and the output ordering is canonical, so all results are
reproducible.

Scale target is degree <= 20 with moderate coefficients, which is all the
Weil-polynomial work ever needs.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import gcd, isqrt

from .finfield import FFElement, FiniteField, is_prime, make_field


class ZeroPolynomial(ValueError):
    """Operation undefined for the zero polynomial."""


class NotMonic(ValueError):
    """A monic polynomial was required."""


class DegreeNotDivisible(ValueError):
    """d does not divide the degree of the input."""


# ---------------------------------------------------------------------------
# integer polynomials


@dataclass(frozen=True)
class IntPoly:
    """Integer polynomial; coeffs ascending, no trailing zeros, () is zero."""

    coeffs: tuple

    @staticmethod
    def make(coeffs) -> "IntPoly":
        c = list(coeffs)
        while c and c[-1] == 0:
            c.pop()
        return IntPoly(tuple(int(x) for x in c))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def lc(self) -> int:
        if self.is_zero():
            raise ZeroPolynomial("leading coefficient of zero")
        return self.coeffs[-1]

    def __add__(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return IntPoly.make(x + y for x, y in zip(a, b))

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return IntPoly(tuple(-c for c in self.coeffs))

    def __mul__(self, other):
        if self.is_zero() or other.is_zero():
            return IntPoly(())
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return IntPoly(tuple(out))

    def scale(self, c: int) -> "IntPoly":
        return IntPoly.make(c * a for a in self.coeffs)

    def __pow__(self, e: int):
        result = IntPoly((1,))
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def derivative(self) -> "IntPoly":
        return IntPoly.make(i * c for i, c in enumerate(self.coeffs) if i >= 1)

    def eval(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def content(self) -> int:
        g = 0
        for c in self.coeffs:
            g = gcd(g, c)
        return g

    def primitive(self) -> "IntPoly":
        if self.is_zero():
            return self
        g = self.content()
        if self.lc() < 0:
            g = -g
        return IntPoly(tuple(c // g for c in self.coeffs))

    def __str__(self):
        return ",".join(str(c) for c in self.coeffs) if self.coeffs else "0"


def poly_from_string(s: str) -> IntPoly:
    """Parse the comma-separated ascending-coefficient text format."""
    return IntPoly.make(int(tok.strip()) for tok in s.split(","))


def _q_coeffs(f: IntPoly):
    return tuple(Fraction(c) for c in f.coeffs)


def _q_trim(c):
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def _q_divmod(a, b):
    """Division with remainder on Fraction coefficient tuples."""
    a, b = _q_trim(a), _q_trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    r = list(a)
    while len(r) >= len(b) and _q_trim(r):
        r = list(_q_trim(r))
        if len(r) < len(b):
            break
        c = r[-1] / b[-1]
        d = len(r) - len(b)
        q[d] = c
        for j, bj in enumerate(b):
            r[d + j] -= c * bj
        r = list(_q_trim(r))
    return _q_trim(q), _q_trim(r)


def try_divide(f: IntPoly, g: IntPoly):
    """f / g over Z if the division is exact, else None."""
    if g.is_zero():
        raise ZeroPolynomial("division by the zero polynomial")
    q, r = _q_divmod(_q_coeffs(f), _q_coeffs(g))
    if r:
        return None
    if any(c.denominator != 1 for c in q):
        return None
    return IntPoly.make(int(c) for c in q)


def int_poly_gcd(f: IntPoly, g: IntPoly) -> IntPoly:
    """Primitive gcd over Z (computed by the rational Euclid algorithm)."""
    a, b = _q_coeffs(f), _q_coeffs(g)
    while _q_trim(b):
        a, b = b, _q_divmod(a, b)[1]
    a = _q_trim(a)
    if not a:
        return IntPoly(())
    lcm_den = 1
    for c in a:
        lcm_den = lcm_den * c.denominator // gcd(lcm_den, c.denominator)
    return IntPoly.make(int(c * lcm_den) for c in a).primitive()


# ---------------------------------------------------------------------------
# polynomials over a finite field


@dataclass(frozen=True)
class ModPoly:
    """Polynomial over a FiniteField; coeffs ascending FFElements, () is zero."""

    field: FiniteField
    coeffs: tuple

    @staticmethod
    def make(field: FiniteField, coeffs) -> "ModPoly":
        c = list(coeffs)
        while c and c[-1].is_zero():
            c.pop()
        return ModPoly(field, tuple(c))

    @staticmethod
    def from_ints(field: FiniteField, ints) -> "ModPoly":
        return ModPoly.make(field, [field.scalar(int(c)) for c in ints])

    @staticmethod
    def x(field: FiniteField) -> "ModPoly":
        return ModPoly.make(field, [field.zero(), field.one()])

    @staticmethod
    def one(field: FiniteField) -> "ModPoly":
        return ModPoly.make(field, [field.one()])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_one(self) -> bool:
        return len(self.coeffs) == 1 and self.coeffs[0] == self.field.one()

    def lc(self) -> FFElement:
        if self.is_zero():
            raise ZeroPolynomial("leading coefficient of zero")
        return self.coeffs[-1]

    def __add__(self, other):
        f = self.field
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (f.zero(),) * (n - len(self.coeffs))
        b = other.coeffs + (f.zero(),) * (n - len(other.coeffs))
        return ModPoly.make(f, [x + y for x, y in zip(a, b)])

    def __neg__(self):
        return ModPoly(self.field, tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        f = self.field
        if self.is_zero() or other.is_zero():
            return ModPoly(f, ())
        out = [f.zero()] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if not a.is_zero():
                for j, b in enumerate(other.coeffs):
                    out[i + j] = out[i + j] + a * b
        return ModPoly.make(f, out)

    def scale(self, c: FFElement) -> "ModPoly":
        return ModPoly.make(self.field, [c * a for a in self.coeffs])

    def __divmod__(self, other):
        f = self.field
        if other.is_zero():
            raise ZeroPolynomial("polynomial division by zero")
        q = [f.zero()] * max(len(self.coeffs) - len(other.coeffs) + 1, 1)
        r = list(self.coeffs)
        inv_lc = other.lc().inverse()
        while len(r) >= len(other.coeffs):
            while r and r[-1].is_zero():
                r.pop()
            if len(r) < len(other.coeffs):
                break
            c = r[-1] * inv_lc
            d = len(r) - len(other.coeffs)
            q[d] = c
            for j, bj in enumerate(other.coeffs):
                r[d + j] = r[d + j] - c * bj
        return ModPoly.make(f, q), ModPoly.make(f, r)

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def monic(self) -> "ModPoly":
        if self.is_zero():
            return self
        return self.scale(self.lc().inverse())

    def derivative(self) -> "ModPoly":
        f = self.field
        return ModPoly.make(f, [f.scalar(i) * c for i, c in enumerate(self.coeffs) if i >= 1])

    def eval(self, x: FFElement) -> FFElement:
        acc = self.field.zero()
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def powmod(self, e: int, modulus: "ModPoly") -> "ModPoly":
        result = ModPoly.one(self.field)
        base = self % modulus
        while e:
            if e & 1:
                result = (result * base) % modulus
            base = (base * base) % modulus
            e >>= 1
        return result

    def frobenius_coeffs(self) -> "ModPoly":
        """Apply x -> x^p to every coefficient."""
        return ModPoly.make(self.field, [c.frobenius() for c in self.coeffs])

    def sort_key(self):
        return (self.degree, tuple(c.index() for c in self.coeffs))

    def __str__(self):
        if self.is_zero():
            return "0"
        return ",".join(repr(c) for c in self.coeffs)


def mod_gcd(a: ModPoly, b: ModPoly) -> ModPoly:
    while not b.is_zero():
        a, b = b, a % b
    return a.monic() if not a.is_zero() else a


def reduce_mod(f: IntPoly, ell: int) -> ModPoly:
    """Coefficientwise reduction into GF(ell); the degree may drop."""
    if not is_prime(ell):
        raise ValueError(f"{ell} is not prime")
    field = make_field(ell, 1)
    return ModPoly.from_ints(field, f.coeffs)


def reduction_degree_drop(f: IntPoly, ell: int) -> bool:
    """True when the leading coefficient of f vanishes mod ell."""
    return (not f.is_zero()) and reduce_mod(f, ell).degree < f.degree


# -- factorisation over GF(q) ------------------------------------------------


def _pth_root(f: ModPoly) -> ModPoly:
    """Inverse of t -> t^p on polynomials all of whose exponents are p-th."""
    field = f.field
    p, k = field.p, field.k
    out = []
    for i, c in enumerate(f.coeffs):
        if i % p == 0:
            out.append(c ** (p ** (k - 1)))
        elif not c.is_zero():
            raise AssertionError("not a p-th power")
    return ModPoly.make(field, out)


def _squarefree_parts(f: ModPoly):
    """[(g_i, m_i)] with f = prod g_i^m_i, each g_i monic squarefree."""
    out = []
    d = f.derivative()
    if d.is_zero():
        for g, m in _squarefree_parts(_pth_root(f)):
            out.append((g, m * f.field.p))
        return out
    c = mod_gcd(f, d)
    w = f // c
    i = 1
    while not w.is_one():
        y = mod_gcd(w, c)
        z = w // y
        if z.degree >= 1:
            out.append((z.monic(), i))
        i += 1
        w, c = y, c // y
    if not c.is_one():
        for g, m in _squarefree_parts(_pth_root(c)):
            out.append((g, m * f.field.p))
    return out


def _distinct_degree(f: ModPoly):
    """[(g, d)]: g the product of the irreducible factors of degree d."""
    field = f.field
    q = field.q
    out = []
    h = ModPoly.x(field)
    x = ModPoly.x(field)
    rest = f
    d = 0
    while rest.degree >= 2 * (d + 1):
        d += 1
        h = h.powmod(q, rest)
        g = mod_gcd(h - x, rest)
        if g.degree >= 1:
            out.append((g, d))
            rest = rest // g
            h = h % rest
    if rest.degree >= 1:
        out.append((rest, rest.degree))
    return out


def _random_poly(field: FiniteField, max_deg: int, rng: random.Random) -> ModPoly:
    coeffs = [field.from_index(rng.randrange(field.q)) for _ in range(max_deg + 1)]
    return ModPoly.make(field, coeffs)


def _equal_degree(f: ModPoly, d: int, rng: random.Random):
    """Cantor-Zassenhaus split of a squarefree product of degree-d factors."""
    field = f.field
    if f.degree == d:
        return [f]
    q = field.q
    while True:
        h = _random_poly(field, f.degree - 1, rng)
        if h.degree < 1:
            continue
        g = mod_gcd(h, f)
        if 0 < g.degree < f.degree:
            break
        if q % 2 == 1:
            g = h.powmod((q**d - 1) // 2, f) - ModPoly.one(field)
        else:
            # char 2: the GF(2)-trace map splits where the power map cannot
            steps = d * field.k
            acc = h % f
            term = h % f
            for _ in range(steps - 1):
                term = (term * term) % f
                acc = acc + term
            g = acc
        g = mod_gcd(g, f)
        if 0 < g.degree < f.degree:
            break
    return _equal_degree(g.monic(), d, rng) + _equal_degree((f // g).monic(), d, rng)


def factor_mod(f: ModPoly, seed: int = 0):
    """Complete factorisation over GF(q).

    Returns (unit, [(monic irreducible, multiplicity)]) with a canonical
    ordering (degree, then coefficient vectors), so the answer does not
    depend on the seed that drives the equal-degree splitting.
    """
    if f.is_zero():
        raise ZeroPolynomial("cannot factor the zero polynomial")
    unit = f.lc()
    f = f.monic()
    rng = random.Random(seed)
    factors = []
    if f.degree >= 1:
        for part, mult in _squarefree_parts(f):
            for g, d in _distinct_degree(part):
                for h in _equal_degree(g.monic(), d, rng):
                    factors.append((h.monic(), mult))
    factors.sort(key=lambda gm: gm[0].sort_key())
    return unit, factors


def is_irreducible_mod(f: ModPoly) -> bool:
    """True iff f has a single irreducible factor with multiplicity 1."""
    if f.is_zero():
        raise ZeroPolynomial("irreducibility of the zero polynomial")
    if f.degree < 1:
        raise ValueError("irreducibility needs degree >= 1")
    _, factors = factor_mod(f)
    return len(factors) == 1 and factors[0][1] == 1 and factors[0][0].degree == f.degree


# -- factorisation over Z ----------------------------------------------------

_SMALL_PRIMES = (
    3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71,
    73, 79, 83, 89, 97, 101, 103, 107, 109, 113, 127, 131, 137, 139, 149,
)


def _mignotte_bound(f: IntPoly) -> int:
    n = f.degree
    norm = 1 + isqrt(sum(c * c for c in f.coeffs))
    return (2**n) * norm * abs(f.lc())


def _int_mod(coeffs, m):
    c = [x % m for x in coeffs]
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def _int_mul_mod(a, b, m):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % m
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


def _int_sub_mod(a, b, m):
    n = max(len(a), len(b))
    a = tuple(a) + (0,) * (n - len(a))
    b = tuple(b) + (0,) * (n - len(b))
    c = [(x - y) % m for x, y in zip(a, b)]
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def _int_divmod_monic_mod(a, b, m):
    """Divide by a monic b with all arithmetic mod m."""
    q = [0] * max(len(a) - len(b) + 1, 1)
    r = list(a)
    while len(r) >= len(b):
        while r and r[-1] % m == 0:
            r.pop()
        if len(r) < len(b):
            break
        c = r[-1] % m
        d = len(r) - len(b)
        q[d] = c
        for j, bj in enumerate(b):
            r[d + j] = (r[d + j] - c * bj) % m
    while r and r[-1] % m == 0:
        r.pop()
    qq = [x % m for x in q]
    while qq and qq[-1] == 0:
        qq.pop()
    return tuple(qq), tuple(r)


def _p_ext_gcd(a, b, p):
    """Extended Euclid over GF(p) on int-tuple polynomials: (g, s, t)."""
    r0, r1 = _int_mod(a, p), _int_mod(b, p)
    s0, s1 = (1,), ()
    t0, t1 = (), (1,)
    while r1:
        q, r = _int_divmod_with_inv(r0, r1, p)
        r0, r1 = r1, r
        s0, s1 = s1, _int_sub_mod(s0, _int_mul_mod(q, s1, p), p)
        t0, t1 = t1, _int_sub_mod(t0, _int_mul_mod(q, t1, p), p)
    inv = pow(r0[-1], p - 2, p)
    scale = lambda c: tuple(x * inv % p for x in c)  # noqa: E731
    return scale(r0), scale(s0), scale(t0)


def _int_divmod_with_inv(a, b, p):
    """Division over GF(p) for a not-necessarily-monic b."""
    inv = pow(b[-1], p - 2, p)
    bm = tuple(x * inv % p for x in b)
    q, r = _int_divmod_monic_mod(a, bm, p)
    q = tuple(x * inv % p for x in q)
    return q, r


def _hensel_pair(f, g, h, p, e):
    """Lift f = g*h from mod p to mod p^e (all monic, gcd(g,h)=1 mod p)."""
    _, s, t = _p_ext_gcd(g, h, p)
    modulus = p
    g, h = tuple(g), tuple(h)
    while modulus < p**e:
        target = modulus * p
        prod_ = _int_mul_mod(g, h, target)
        diff = _int_sub_mod(_int_mod(f, target), prod_, target)
        # every coefficient of diff is divisible by the current modulus
        d = tuple((c // modulus) % p for c in diff)
        while d and d[-1] == 0:
            d = d[:-1]
        if d:
            u = _int_divmod_monic_mod(_int_mul_mod(t, d, p), _int_mod(g, p), p)[1]
            num = _int_sub_mod(d, _int_mul_mod(u, _int_mod(h, p), p), p)
            v, rem = _int_divmod_with_inv(num, _int_mod(g, p), p)
            assert not rem, "hensel step: inexact division"
            g = _int_sub_mod(g, tuple(-modulus * c for c in u), target)
            h = _int_sub_mod(h, tuple(-modulus * c for c in v), target)
        modulus = target
    return _int_mod(g, p**e), _int_mod(h, p**e)


def _hensel_multi(f_star, mod_factors, p, e):
    """Lift the monic factors of f mod p to monic factors mod p^e."""
    if len(mod_factors) == 1:
        return [_int_mod(f_star, p**e)]
    mid = len(mod_factors) // 2
    left, right = mod_factors[:mid], mod_factors[mid:]
    g0 = (1,)
    for w in left:
        g0 = _int_mul_mod(g0, w, p)
    h0 = (1,)
    for w in right:
        h0 = _int_mul_mod(h0, w, p)
    g, h = _hensel_pair(f_star, g0, h0, p, e)
    return _hensel_multi(g, left, p, e) + _hensel_multi(h, right, p, e)


def _centered(coeffs, m):
    half = m // 2
    return tuple(c - m if c > half else c for c in coeffs)


def _zassenhaus(f: IntPoly, prime_offset: int = 0):
    """Irreducible factors of a squarefree primitive f with positive lc."""
    if f.degree <= 1:
        return [f]
    skipped = 0
    chosen = None
    for p in _SMALL_PRIMES:
        if f.lc() % p == 0:
            continue
        field = make_field(p, 1)
        fp = ModPoly.from_ints(field, f.coeffs)
        if fp.degree != f.degree:
            continue
        if mod_gcd(fp, fp.derivative()).degree != 0:
            continue
        if skipped < prime_offset:
            skipped += 1
            continue
        chosen = p
        break
    if chosen is None:
        raise AssertionError("no usable auxiliary prime below the table limit")
    p = chosen
    field = make_field(p, 1)
    _, factors = factor_mod(ModPoly.from_ints(field, f.coeffs).monic())
    mods = [tuple(c.lift() for c in g.coeffs) for g, _ in factors]
    if len(mods) == 1:
        return [f]
    bound = _mignotte_bound(f)
    e = 1
    while p**e <= 2 * bound:
        e += 1
    pe = p**e
    lc_inv = pow(f.lc() % pe, -1, pe)
    f_star = _int_mod(tuple(c * lc_inv for c in f.coeffs), pe)
    lifted = _hensel_multi(f_star, mods, p, e)

    result = []
    remaining = list(range(len(lifted)))
    current = f
    size = 1
    while size <= len(remaining) // 2:
        found = False
        for subset in combinations(remaining, size):
            cand = (current.lc() % pe,)
            for i in subset:
                cand = _int_mul_mod(cand, lifted[i], pe)
            cand_poly = IntPoly.make(_centered(cand, pe)).primitive()
            if cand_poly.degree < 1:
                continue
            quotient = try_divide(current, cand_poly)
            if quotient is not None:
                result.append(cand_poly)
                current = quotient
                remaining = [i for i in remaining if i not in subset]
                found = True
                break
        if not found:
            size += 1
    if current.degree >= 1:
        result.append(current)
    return result


def factor_over_Z(f: IntPoly, prime_offset: int = 0):
    """Factor a primitive or monic integer polynomial into irreducibles.

    Returns a canonically ordered tuple of (irreducible IntPoly, multiplicity)
    whose product reconstructs f.  prime_offset skips that many viable
    auxiliary primes (used to confirm the answer is prime-independent).
    """
    if f.is_zero():
        raise ZeroPolynomial("cannot factor the zero polynomial")
    if f.lc() < 0:
        raise ValueError("expected a primitive polynomial with positive leading coefficient")
    if f.primitive() != f and not f.is_monic():
        raise ValueError("expected a primitive or monic polynomial")
    if f.degree < 1:
        return ()
    sqf = try_divide(f, int_poly_gcd(f, f.derivative()))
    assert sqf is not None
    out = []
    for g in _zassenhaus(sqf.primitive(), prime_offset):
        mult = 0
        probe = f
        while True:
            nxt = try_divide(probe, g)
            if nxt is None:
                break
            probe = nxt
            mult += 1
        out.append((g, mult))
    out.sort(key=lambda gm: (gm[0].degree, gm[0].coeffs))
    return tuple(out)


# -- power structure ---------------------------------------------------------


def dth_root(f: IntPoly, d: int):
    """The monic g with g^d = f exactly, or None.

    Coefficients are solved top-down over Q and the result is verified by a
    full expansion; by Gauss's lemma a monic rational root of a monic integer
    polynomial is integral, so a non-integral verified root is impossible
    (asserted).
    """
    if f.is_zero() or not f.is_monic():
        raise NotMonic("d-th roots are extracted from monic polynomials only")
    if d < 1 or f.degree % d != 0:
        raise DegreeNotDivisible(f"{d} does not divide degree {f.degree}")
    if d == 1:
        return f
    n = f.degree
    m = n // d
    g = [Fraction(0)] * m + [Fraction(1)]
    fq = _q_coeffs(f)
    for j in range(1, m + 1):
        # expand with coefficients known so far; the t^(n-j) coefficient of
        # g^d is d*g[m-j] plus terms in already-solved entries
        partial = _q_pow(tuple(g), d)
        current = partial[n - j] if n - j < len(partial) else Fraction(0)
        g[m - j] = g[m - j] + (fq[n - j] - current) / d
    expansion = _q_pow(tuple(g), d)
    expansion = expansion + (Fraction(0),) * (len(fq) - len(expansion))
    if tuple(expansion) != fq:
        return None
    assert all(c.denominator == 1 for c in g), "verified root must be integral"
    return IntPoly.make(int(c) for c in g)


def _q_pow(coeffs, e):
    result = (Fraction(1),)
    base = coeffs
    while e:
        if e & 1:
            result = _q_mul(result, base)
        base = _q_mul(base, base)
        e >>= 1
    return result


def _q_mul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return tuple(out)


def max_power_structure(f: IntPoly):
    """(g, d) with f = g^d for the largest possible d; d = 1 means no power."""
    if f.is_zero() or not f.is_monic():
        raise NotMonic("power structure is defined for monic polynomials")
    if f.degree < 1:
        raise ValueError("power structure needs degree >= 1")
    n = f.degree
    for d in sorted((e for e in range(2, n + 1) if n % e == 0), reverse=True):
        g = dth_root(f, d)
        if g is not None:
            return g, d
    return f, 1
