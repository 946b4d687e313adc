"""Frobenius characteristic polynomial analysis.

A Weil polynomial here is a monic integer polynomial of even degree 2g whose
coefficients satisfy the functional-equation symmetry a_i = q^(g-i) a_(2g-i)
and whose roots all have absolute value sqrt(q).  The root condition is
decided exactly: the polynomial is rewritten as t^g h(t + q/t), and h must
have all of its roots real inside [-2 sqrt(q), 2 sqrt(q)].  Sturm sequences
with exact sign evaluation at the quadratic-irrational endpoints settle that
without floating point.

The splitting analysis extracts the maximal power structure f = g^d,
factors g over Z, and resolves the isogeny-exponent constraints in the two
cases where that is possible from f and q alone (prime residue field;
ordinary reduction).  The general division-algebra invariant is out of
scope, so unresolved factors carry their constraint set explicitly.

Simplicity certificates are sound but deliberately incomplete: an
irreducible reduction mod ell, or the two-factor dual-exchange pattern of
the even-rank unitary case, certifies simplicity; anything else reports
Unknown.  The dual-exchange certificate presumes a principally polarized
source, which is the setting the whole analysis lives in.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from math import comb, gcd, isqrt

from .finfield import is_prime, make_field
from .intpoly import (
    IntPoly,
    ModPoly,
    NotMonic,
    dth_root,
    factor_mod,
    factor_over_Z,
    int_poly_gcd,
    max_power_structure,
    mod_gcd,
    try_divide,
)


class OddDegree(ValueError):
    """Weil polynomials have even positive degree."""


class SymmetryViolation(ValueError):
    def __init__(self, index: int):
        super().__init__(f"coefficient symmetry fails at index {index}")
        self.index = index


class RootBoundViolation(ValueError):
    """Some root does not have absolute value sqrt(q)."""


class ZeroConstantTerm(ValueError):
    """The dual is undefined when 0 is a root."""


class NonIntegralDual(ValueError):
    """The monic dual has a non-integer coefficient."""


class BadAuxPrime(ValueError):
    """The auxiliary prime must not divide q."""


class InconsistentSignature(ValueError):
    """Signature pairs must sum to the rank."""


def _prime_power(q: int):
    """(p, a) with q = p^a, or raise."""
    if q < 2:
        raise ValueError(f"{q} is not a prime power")
    for p in range(2, isqrt(q) + 1):
        if q % p == 0:
            a = 0
            while q % p == 0:
                q //= p
                a += 1
            if q != 1 or not is_prime(p):
                raise ValueError("q must be a prime power")
            return p, a
    return q, 1  # q itself is prime


@dataclass(frozen=True)
class WeilPoly:
    """A validated Frobenius characteristic polynomial over GF(q)."""

    f: IntPoly
    q: int
    p: int
    a: int

    @property
    def g(self) -> int:
        return self.f.degree // 2

    @property
    def middle_coefficient(self) -> int:
        return self.f.coeffs[self.g]


def real_weil_transform(f: IntPoly, q: int) -> IntPoly:
    """The monic degree-g integer h with f(t) = t^g * h(t + q/t)."""
    if not f.is_monic():
        raise NotMonic("the transform needs a monic polynomial")
    if f.degree % 2 != 0 or f.degree < 2:
        raise OddDegree(f"degree {f.degree} is not even and positive")
    g = f.degree // 2
    rest = f
    out = [0] * (g + 1)
    base = IntPoly.make([q, 0, 1])  # t^2 + q
    for j in range(g, -1, -1):
        coeff = rest.coeffs[g + j] if g + j <= rest.degree else 0
        out[j] = coeff
        term = (base**j) * IntPoly.make([0] * (g - j) + [coeff])
        rest = rest - term
    if not rest.is_zero():
        # a symmetric polynomial always reduces; locate the broken index
        idx = next(i for i, c in enumerate(rest.coeffs) if c)
        raise SymmetryViolation(idx)
    return IntPoly.make(out)


# -- exact signs at x = c * sqrt(q) ------------------------------------------


def _eval_at_2sqrtq(coeffs, q: int, sign: int):
    """p(+-2 sqrt(q)) written as (A, B) meaning A + B*sqrt(q), exactly."""
    a = Fraction(0)
    b = Fraction(0)
    for i, c in enumerate(coeffs):
        if i % 2 == 0:
            a += c * Fraction(4 * q) ** (i // 2)
        else:
            b += c * Fraction(2) * Fraction(4 * q) ** (i // 2) * sign
    return a, b


def _sign_a_plus_b_sqrtq(a: Fraction, b: Fraction, q: int) -> int:
    if a == 0 and b == 0:
        return 0
    if a >= 0 and b >= 0:
        return 1
    if a <= 0 and b <= 0:
        return -1
    s = a * a - q * b * b
    if s == 0:
        return 0
    if a > 0:
        return 1 if s > 0 else -1
    return 1 if s < 0 else -1


def _sturm_chain(coeffs):
    from .intpoly import _q_divmod, _q_trim

    chain = [_q_trim(tuple(Fraction(c) for c in coeffs))]
    deriv = tuple(Fraction(i * c) for i, c in enumerate(coeffs) if i >= 1)
    chain.append(_q_trim(deriv))
    while chain[-1] and len(chain[-1]) > 1:
        rem = _q_divmod(chain[-2], chain[-1])[1]
        if not rem:
            break
        chain.append(tuple(-c for c in rem))
    return [c for c in chain if c]


def _variations(signs) -> int:
    nz = [s for s in signs if s != 0]
    return sum(1 for x, y in zip(nz, nz[1:]) if x * y < 0)


def _roots_in_open_interval(coeffs, q: int) -> int:
    """Distinct real roots of the squarefree poly in (-2 sqrt q, 2 sqrt q)."""
    chain = _sturm_chain(coeffs)
    lo = [_sign_a_plus_b_sqrtq(*_eval_at_2sqrtq(c, q, -1), q) for c in chain]
    hi = [_sign_a_plus_b_sqrtq(*_eval_at_2sqrtq(c, q, +1), q) for c in chain]
    return _variations(lo) - _variations(hi)


def weil_validate(f: IntPoly, q: int) -> WeilPoly:
    """Accept f as a Weil polynomial for q or raise a diagnostic."""
    p, a = _prime_power(q)
    if f.is_zero() or not f.is_monic():
        raise NotMonic("a Weil polynomial is monic")
    if f.degree % 2 != 0 or f.degree < 2:
        raise OddDegree(f"degree {f.degree} is not even and positive")
    g = f.degree // 2
    for i in range(g + 1):
        if f.coeffs[i] != q ** (g - i) * f.coeffs[2 * g - i]:
            raise SymmetryViolation(i)
    h = real_weil_transform(f, q)
    # work with the squarefree part; the root condition only sees root sets
    h_red = try_divide(h, int_poly_gcd(h, h.derivative()))
    assert h_red is not None
    boundary = 0
    rest = h_red
    s = isqrt(q)
    if s * s == q:
        for root in (2 * s, -2 * s):
            if rest.eval(root) == 0:
                rest = try_divide(rest, IntPoly.make([-root, 1]))
                boundary += 1
    else:
        quo = try_divide(rest, IntPoly.make([-4 * q, 0, 1]))
        if quo is not None:
            rest = quo
            boundary += 2
    interior = _roots_in_open_interval(rest.coeffs, q) if rest.degree >= 1 else 0
    if boundary + interior != h_red.degree:
        raise RootBoundViolation(
            f"{h_red.degree - boundary - interior} root(s) of the real transform "
            f"fall outside [-2*sqrt({q}), 2*sqrt({q})]"
        )
    return WeilPoly(f, q, p, a)


def ordinary_test(w: WeilPoly) -> bool:
    """Middle coefficient coprime to the residue characteristic."""
    return gcd(w.middle_coefficient, w.p) == 1


# -- duality -----------------------------------------------------------------


def dual_rational(coeffs, q: int):
    """Monic polynomial with root multiset {q/alpha}; exact Fractions.

    An involution on monic polynomials with nonzero constant term.
    """
    cs = tuple(Fraction(c) for c in coeffs)
    if not cs or cs[0] == 0:
        raise ZeroConstantTerm("0 is a root; the dual is undefined")
    n = len(cs) - 1
    rev = [cs[n - j] * Fraction(q) ** (n - j) for j in range(n + 1)]
    lead = rev[-1]
    return tuple(c / lead for c in rev)


def dual_polynomial(g: IntPoly, q: int) -> IntPoly:
    """Integer dual of a monic g; raises NonIntegralDual when it is not
    integral (that never happens for factors of a Weil polynomial)."""
    if not g.is_monic():
        raise NotMonic("the dual is defined for monic polynomials")
    out = dual_rational(g.coeffs, q)
    if any(c.denominator != 1 for c in out):
        raise NonIntegralDual(f"dual of {g} over q={q} is not integral")
    return IntPoly.make(int(c) for c in out)


def _mod_dual(g: ModPoly, q: int) -> ModPoly:
    """Mod-ell dual: roots alpha -> q/alpha, monic-normalized."""
    field = g.field
    if g.is_zero() or g.coeffs[0].is_zero():
        raise ZeroConstantTerm("0 is a root; the dual is undefined")
    n = g.degree
    qf = field.scalar(q)
    coeffs = [g.coeffs[n - j] * qf ** (n - j) for j in range(n + 1)]
    return ModPoly.make(field, coeffs).monic()


# -- certificates ------------------------------------------------------------


class Certificate(enum.Enum):
    SIMPLE = "certified-simple"
    SELF_PRODUCT = "certified-self-product"
    UNKNOWN = "unknown"


def simplicity_certificate(w: WeilPoly, ell: int) -> Certificate:
    """Certify simplicity of the reduction from the mod-ell factor shape.

    SIMPLE when f mod ell is irreducible, or when it splits into exactly two
    distinct irreducible factors of equal degree exchanged by the mod-ell
    duality (the even-rank unitary pattern, sound for principally polarized
    input).  Anything else is UNKNOWN; never a false certificate.
    """
    if not is_prime(ell):
        raise BadAuxPrime(f"{ell} is not prime")
    if w.q % ell == 0:
        raise BadAuxPrime(f"{ell} divides q = {w.q}")
    field = make_field(ell, 1)
    fbar = ModPoly.from_ints(field, w.f.coeffs)
    _, factors = factor_mod(fbar)
    if len(factors) == 1 and factors[0][1] == 1:
        return Certificate.SIMPLE
    if len(factors) == 2:
        (g1, m1), (g2, m2) = factors
        if (
            m1 == m2 == 1
            and g1.degree == g2.degree
            and g1.degree % 2 == 0  # the dual-pair pattern needs even rank
            and g1 != g2
            and _mod_dual(g1, w.q) == g2
        ):
            return Certificate.SIMPLE
    return Certificate.UNKNOWN


# -- the full splitting report -------------------------------------------------


@dataclass(frozen=True)
class FactorConstraint:
    """One isogeny factor of the decomposition, with its exponent data.

    The relation e * d_Y = multiplicity * power_d always holds; e and d_Y
    are filled in only when the prime-field or ordinary shortcut applies,
    otherwise `candidates` lists the admissible (e, d_Y) pairs.
    """

    poly: IntPoly
    multiplicity: int
    e: int | None
    d_y: int | None
    resolved_by: str | None
    candidates: tuple


@dataclass(frozen=True)
class CertificateRecord:
    ell: int | None  # None for global (factorisation-level) certificates
    status: Certificate
    detail: str


@dataclass(frozen=True)
class SplitReport:
    """Isogeny-decomposition data for one Weil polynomial."""

    weil: WeilPoly
    d: int
    root: IntPoly  # the d-th root g with g^d = f
    factors: tuple  # FactorConstraint, canonical order
    dual_pairs: tuple  # (i, j) indices of factors exchanged by duality
    self_dual: tuple  # indices of self-dual factors
    certificates: tuple  # CertificateRecord per consulted prime + global ones
    conclusion: Certificate
    isogeny_shape: str
    endomorphism_note: str
    ordinary: bool
    prime_field: bool


def analyze(w: WeilPoly, aux_primes=()) -> SplitReport:
    """Power structure, factorisation, constraints, duality, certificates."""
    root, d = max_power_structure(w.f)
    factors = factor_over_Z(root)
    ordinary = ordinary_test(w)
    prime_field = w.a == 1

    constraints = []
    for poly, mult in factors:
        total = mult * d
        if prime_field or ordinary:
            reason = "prime-field residue" if prime_field else "ordinary reduction"
            constraints.append(FactorConstraint(poly, mult, total, 1, reason, ()))
        else:
            cands = tuple(
                (e, total // e)
                for e in range(1, total + 1)
                if total % e == 0 and (poly.degree * (total // e)) % 2 == 0
            )
            constraints.append(FactorConstraint(poly, mult, None, None, None, cands))

    dual_pairs = []
    self_dual = []
    polys = [c.poly for c in constraints]
    for i, gi in enumerate(polys):
        di = dual_rational(gi.coeffs, w.q)
        if di == tuple(Fraction(c) for c in gi.coeffs):
            self_dual.append(i)
            continue
        for j in range(i + 1, len(polys)):
            if di == tuple(Fraction(c) for c in polys[j].coeffs):
                dual_pairs.append((i, j))

    records = []
    conclusion = Certificate.UNKNOWN
    for ell in aux_primes:
        status = simplicity_certificate(w, ell)
        records.append(CertificateRecord(ell, status, f"f mod {ell}"))
        if status is not Certificate.UNKNOWN and conclusion is Certificate.UNKNOWN:
            conclusion = status

    if d >= 2 and len(factors) == 1 and factors[0][1] == 1 and (prime_field or ordinary):
        e = constraints[0].e
        records.append(
            CertificateRecord(
                None,
                Certificate.SELF_PRODUCT,
                f"f = g^{d} with g irreducible; resolved exponent e = {e}",
            )
        )
        if conclusion is Certificate.UNKNOWN:
            conclusion = Certificate.SELF_PRODUCT
    if (
        d == 1
        and len(constraints) == 1
        and constraints[0].multiplicity == 1
        and constraints[0].d_y == 1
    ):
        if conclusion is Certificate.UNKNOWN:
            conclusion = Certificate.SIMPLE
        records.append(
            CertificateRecord(None, Certificate.SIMPLE, "irreducible with d(Y) = 1")
        )

    shape_parts = []
    for c in constraints:
        if c.e is not None:
            shape_parts.append("Y" if c.e == 1 else f"Y^{c.e}")
        else:
            shape_parts.append(f"Y^(e|{c.multiplicity * d})")
    isogeny_shape = " x ".join(shape_parts)

    if conclusion is Certificate.SIMPLE and len(constraints) == 1:
        note = f"commutative, CM by Q[t]/({constraints[0].poly})"
    elif all(c.d_y == 1 for c in constraints):
        note = "every simple factor has commutative endomorphism algebra"
    else:
        note = "division-algebra invariants unresolved (constraints carried)"

    return SplitReport(
        weil=w,
        d=d,
        root=root,
        factors=tuple(constraints),
        dual_pairs=tuple(dual_pairs),
        self_dual=tuple(self_dual),
        certificates=tuple(records),
        conclusion=conclusion,
        isogeny_shape=isogeny_shape,
        endomorphism_note=note,
        ordinary=ordinary,
        prime_field=prime_field,
    )


# -- CM signatures -------------------------------------------------------------


@dataclass(frozen=True)
class CMSignature:
    """Rank r with the multiset of conjugate-pair multiplicities."""

    r: int
    pairs: tuple

    def __post_init__(self):
        for pair in self.pairs:
            a, b = pair
            if a < 0 or b < 0 or a + b != self.r:
                raise InconsistentSignature(f"pair {pair} does not sum to r = {self.r}")


def _is_binomial_pair(a: int, b: int) -> bool:
    """(a, b) = (C(i, j-1), C(i, j)) for some naturals i, j."""
    top = max(a, b, 1)
    for i in range(0, top + 2):
        for j in range(1, i + 2):
            if comb(i, j - 1) == a and comb(i, j) == b:
                return True
    return False


def non_special(sig: CMSignature):
    """The sufficient non-specialness conditions the signature satisfies.

    Returns a tuple drawn from ('i', 'ii', 'iii', 'iv'); empty means "not
    certified", never "special".
    """
    out = []
    r = sig.r
    if r == 4 or is_prime(r):
        out.append("i")
    values = sorted({v for pair in sig.pairs for v in pair})
    if 1 in values:
        out.append("ii")
    small = [v for v in values if 1 <= v and 2 * v <= r]
    if any(
        (gcd(a, r) == 1 or gcd(b, r) == 1)
        for a in small
        for b in small
        if a < b
    ):
        out.append("iii")
    for a, b in sig.pairs:
        if gcd(a, b) == 1 and (
            not _is_binomial_pair(a, b) or not _is_binomial_pair(b, a)
        ):
            out.append("iv")
            break
    return tuple(out)
