import random
from fractions import Fraction

import pytest

from frobsplit.finfield import make_field
from frobsplit.intpoly import IntPoly, ModPoly, NotMonic, factor_mod, factor_over_Z
from frobsplit.weil import (
    BadAuxPrime,
    Certificate,
    CMSignature,
    InconsistentSignature,
    NonIntegralDual,
    OddDegree,
    RootBoundViolation,
    SymmetryViolation,
    ZeroConstantTerm,
    _mod_dual,
    analyze,
    dual_polynomial,
    dual_rational,
    non_special,
    ordinary_test,
    real_weil_transform,
    simplicity_certificate,
    weil_validate,
)

P = IntPoly.make


def test_validate_accepts_ordinary_quadratic():
    w = weil_validate(P([3, -1, 1]), 3)
    assert (-1) ** 2 - 4 * 3 < 0  # complex roots of absolute value sqrt(3)
    assert (w.p, w.a, w.g) == (3, 1, 1)


def test_validate_rejects_out_of_bound_real_roots():
    with pytest.raises(RootBoundViolation):
        weil_validate(P([3, -5, 1]), 3)  # root near 5 exceeds 2*sqrt(3)


def test_validate_accepts_repeated_complex_roots():
    weil_validate(P([9, 0, 6, 0, 1]), 3)  # (t^2+3)^2


def test_validate_accepts_boundary_real_roots():
    weil_validate(P([-3, 0, 1]) ** 2, 3)  # roots +-sqrt(3), each doubled
    weil_validate(P([-2, 1]) ** 2 * P([-2, 1]) ** 2, 4)  # (t-2)^4 over q=4
    # boundary pair mixed with an interior complex pair over q = 4
    weil_validate(P([-2, 1]) ** 2 * P([2, 1]) ** 2 * P([4, 3, 1]), 4)


def test_validate_never_crashes_on_random_monic_even_inputs():
    from frobsplit.weil import NotMonic, OddDegree

    rng = random.Random(314159)
    accepted = 0
    for _ in range(300):
        q = rng.choice([2, 3, 4, 5, 9])
        deg = rng.choice([2, 4, 6])
        coeffs = [rng.randrange(-3 * q, 3 * q + 1) for _ in range(deg)] + [1]
        f = P(coeffs)
        try:
            w = weil_validate(f, q)
        except (NotMonic, OddDegree, SymmetryViolation, RootBoundViolation):
            continue
        accepted += 1
        # accepted polynomials really satisfy the coefficient symmetry
        g = w.g
        for i in range(g + 1):
            assert f.coeffs[i] == q ** (g - i) * f.coeffs[2 * g - i]
    assert accepted > 0


def test_validate_symmetry_and_shape_errors():
    with pytest.raises(SymmetryViolation):
        weil_validate(P([-3, 0, 1]), 3)  # constant must be +q^g
    with pytest.raises(OddDegree):
        weil_validate(P([1, 1]), 3)
    with pytest.raises(NotMonic):
        weil_validate(P([3, 0, 2]), 3)
    with pytest.raises(ValueError):
        weil_validate(P([6, 0, 1]), 6)  # q must be a prime power


def test_validate_symmetry_catches_middle_indices():
    # degree 4 with a_1 != q * a_3
    with pytest.raises(SymmetryViolation) as exc:
        weil_validate(P([9, 1, 0, 2, 1]), 3)
    assert exc.value.index == 1


def test_real_weil_transform_examples():
    assert real_weil_transform(P([3, -1, 1]), 3) == P([-1, 1])
    assert real_weil_transform(P([9, 0, 6, 0, 1]), 3) == P([0, 0, 1])
    assert real_weil_transform(P([7, 0, 1]), 7) == P([0, 1])


def test_ordinary_test_examples():
    assert ordinary_test(weil_validate(P([3, -1, 1]), 3))
    assert not ordinary_test(weil_validate(P([9, 0, 6, 0, 1]), 3))
    assert not ordinary_test(weil_validate(P([3, 0, 1]), 3))


def test_dual_polynomial_examples():
    assert dual_polynomial(P([-1, 1]), 3) == P([-3, 1])
    assert dual_polynomial(P([3, -1, 1]), 3) == P([3, -1, 1])  # self-dual
    assert dual_polynomial(P([5, -2, 1]), 5) == P([5, -2, 1])
    with pytest.raises(ZeroConstantTerm):
        dual_polynomial(P([0, 1]), 3)
    with pytest.raises(NonIntegralDual):
        dual_polynomial(P([2, 0, 1]), 3)  # roots +-i*sqrt(2), dual not integral


def test_dual_rational_is_an_involution():
    rng = random.Random(4096)
    for _ in range(100):
        q = rng.choice([2, 3, 5, 7, 9])
        coeffs = [rng.randrange(-30, 31) for _ in range(3)] + [1]
        if coeffs[0] == 0:
            coeffs[0] = 1
        once = dual_rational(coeffs, q)
        twice = dual_rational(once, q)
        assert twice == tuple(Fraction(c) for c in coeffs)


def test_analyze_square_prime_field():
    w = weil_validate(P([9, 0, 6, 0, 1]), 3)
    rep = analyze(w, aux_primes=(2, 5, 7))
    assert rep.d == 2
    assert rep.root == P([3, 0, 1])
    assert rep.factors[0].poly == P([3, 0, 1]) and rep.factors[0].multiplicity == 1
    assert rep.prime_field
    assert (rep.factors[0].e, rep.factors[0].d_y) == (2, 1)
    assert rep.isogeny_shape == "Y^2"
    assert rep.conclusion is Certificate.SELF_PRODUCT
    # every consulted auxiliary prime is inconclusive: f is a square mod all
    assert all(
        rec.status is Certificate.UNKNOWN for rec in rep.certificates if rec.ell is not None
    )


def test_analyze_simple_ordinary():
    w = weil_validate(P([3, -1, 1]), 3)
    rep = analyze(w, aux_primes=(5, 7))
    assert rep.d == 1 and rep.root == w.f
    assert rep.factors[0].d_y == 1 and rep.factors[0].e == 1
    assert rep.conclusion is Certificate.SIMPLE
    assert "commutative" in rep.endomorphism_note


def test_analyze_two_factor_split_with_duality():
    f = P([3, -1, 1]) * P([3, 1, 1])
    w = weil_validate(f, 3)
    rep = analyze(w, aux_primes=())
    assert rep.d == 1
    assert len(rep.factors) == 2
    assert all(c.e == 1 and c.d_y == 1 for c in rep.factors)
    # both quadratics are t^2 -+ t + q: fixed points of the duality
    assert rep.self_dual == (0, 1)
    assert rep.isogeny_shape == "Y x Y"


def test_analyze_unresolved_constraints_over_extension_field():
    # q = 9 and a non-ordinary square: neither shortcut applies
    f = P([9, 0, 1]) ** 2  # (t^2+9)^2 over q=9
    w = weil_validate(f, 9)
    assert (w.p, w.a) == (3, 2)
    rep = analyze(w)
    assert rep.d == 2 and not rep.prime_field and not rep.ordinary
    c = rep.factors[0]
    assert c.e is None and c.d_y is None
    assert (2, 1) in c.candidates and (1, 2) in c.candidates
    assert "unresolved" in rep.endomorphism_note


def test_simplicity_certificate_examples():
    w = weil_validate(P([3, -1, 1]), 3)
    assert simplicity_certificate(w, 5) is Certificate.UNKNOWN
    assert simplicity_certificate(w, 7) is Certificate.SIMPLE
    w2 = weil_validate(P([3, 0, 1]), 3)
    assert simplicity_certificate(w2, 5) is Certificate.SIMPLE  # -3 nonsquare mod 5
    assert pow(2, 2, 5) != 5 - 3 and pow(1, 2, 5) != 5 - 3
    w4 = weil_validate(P([9, 0, 6, 0, 1]), 3)
    for ell in (2, 5, 7, 11, 13):
        assert simplicity_certificate(w4, ell) is Certificate.UNKNOWN
    with pytest.raises(BadAuxPrime):
        simplicity_certificate(w, 3)
    with pytest.raises(BadAuxPrime):
        simplicity_certificate(w, 4)


def test_simplicity_certificate_dual_pair_pattern():
    # frozen search result: irreducible quartic over q=3 whose mod-7
    # reduction splits into two dual-exchanged irreducible quadratics
    f = P([9, -6, 1, -2, 1])
    w = weil_validate(f, 3)
    assert len(factor_over_Z(f)) == 1
    field = make_field(7, 1)
    _, factors = factor_mod(ModPoly.from_ints(field, f.coeffs))
    assert len(factors) == 2
    (g1, m1), (g2, m2) = factors
    assert m1 == m2 == 1 and g1.degree == g2.degree == 2
    assert _mod_dual(g1, 3) == g2 and g1 != g2
    assert simplicity_certificate(w, 7) is Certificate.SIMPLE


def test_certificate_never_fires_on_power_structures():
    rng = random.Random(8)
    for _ in range(25):
        q = rng.choice([3, 5, 7])
        a = rng.choice([x for x in range(-3, 4) if x % q != 0 and x * x < 4 * q])
        g = P([q, -a, 1])
        d = rng.choice([2, 3])
        w = weil_validate(g**d, q)
        for ell in (2, 11, 13):
            if q % ell == 0:
                continue
            assert simplicity_certificate(w, ell) is not Certificate.SIMPLE


def test_certificate_simple_implies_irreducible_over_Z():
    rng = random.Random(21)
    for _ in range(30):
        q = rng.choice([3, 5])
        coeffs = [q * q, q * rng.randrange(-2, 3), rng.randrange(-6, 7), rng.randrange(-2, 3), 1]
        coeffs[1] = q * coeffs[3]
        f = P(coeffs)
        try:
            w = weil_validate(f, q)
        except Exception:
            continue
        for ell in (2, 7, 11):
            if simplicity_certificate(w, ell) is Certificate.SIMPLE:
                assert len(factor_over_Z(f)) == 1 and factor_over_Z(f)[0][1] == 1
                break


def test_analyze_recovers_powers_of_ordinary_quadratics():
    rng = random.Random(777)
    for _ in range(50):
        q = rng.choice([3, 5, 7, 11, 13])
        candidates = [x for x in range(-6, 7) if x % q != 0 and x * x < 4 * q]
        a = rng.choice(candidates)
        g = P([q, -a, 1])
        d = rng.choice([2, 3])
        w = weil_validate(g**d, q)
        rep = analyze(w)
        assert (rep.root, rep.d) == (g, d)


def test_non_special_examples():
    assert "i" in non_special(CMSignature(5, ((2, 3),)))
    assert "i" in non_special(CMSignature(4, ((2, 2),)))
    assert "ii" in non_special(CMSignature(6, ((1, 5),)))
    assert non_special(CMSignature(6, ((3, 3),))) == ()


def test_non_special_prime_rank_always_certified():
    rng = random.Random(5150)
    for r in (2, 3, 5, 7):
        for _ in range(5):
            a = rng.randrange(0, r + 1)
            sig = CMSignature(r, ((a, r - a),))
            assert "i" in non_special(sig)


def test_non_special_condition_iii():
    # r = 8, values 1 and 3 are both <= r/2 and coprime to 8
    sig = CMSignature(8, ((1, 7), (3, 5)))
    conds = non_special(sig)
    assert "iii" in conds and "ii" in conds


def test_non_special_condition_iv_binomial_exclusion():
    # (2, 3): gcd 1; neither (2,3) nor (3,2) should escape... C(3,1)=3, C(3,2)=3
    # (2,3) is NOT of the form (C(i,j-1), C(i,j)): check by the search itself
    sig = CMSignature(5, ((2, 3),))
    assert "iv" in non_special(sig)
    # (1, 5) = (C(5,0), C(5,1)) and (5, 1) = (C(5,4), C(5,5)): excluded both ways
    sig2 = CMSignature(6, ((1, 5),))
    assert "iv" not in non_special(sig2)


def test_signature_validation():
    with pytest.raises(InconsistentSignature):
        CMSignature(6, ((1, 4),))
    with pytest.raises(InconsistentSignature):
        CMSignature(3, ((-1, 4),))
