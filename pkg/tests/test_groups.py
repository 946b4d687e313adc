import random
from fractions import Fraction

import pytest

from frobsplit.finfield import FieldMismatch, make_field
from frobsplit.groups import (
    AnisotropicTorus,
    BudgetExceeded,
    DimensionMismatch,
    GroupDescriptor,
    GroupElement,
    build_anisotropic_torus,
    classify_element,
    classify_element_oracle,
    contains,
    enumerate_group,
    enumerate_group_packed,
    exhaustive_classification,
    group_order,
    identity_element,
    normalizer_census,
    pack_matrix,
    regular_torus_count,
    torus_census,
    torus_element_matrices,
    torus_order,
    unpack_matrix,
)

C3 = GroupDescriptor("C", 1, 3)
C5 = GroupDescriptor("C", 1, 5)
C7 = GroupDescriptor("C", 1, 7)
A2 = GroupDescriptor("A", 2, 3)


def test_descriptor_validation_and_flags():
    with pytest.raises(ValueError):
        GroupDescriptor("Q", 1, 3)
    with pytest.raises(ValueError):
        GroupDescriptor("C", 1, 4)
    assert C3.exceptional_field  # GF(3) is one of the small exceptions
    assert A2.exceptional_field  # base pair (GF(3), GF(9))
    assert not C5.exceptional_field


def test_group_order_formula_vs_enumeration():
    assert group_order(C3) == 48 == len(enumerate_group_packed(C3))
    assert group_order(C5) == 480 == len(enumerate_group_packed(C5))
    assert group_order(A2, "unitary") == 96 == len(enumerate_group_packed(A2, "unitary"))
    assert group_order(A2) == 192 == len(enumerate_group_packed(A2))
    assert group_order(C3, "derived") == 24 == len(enumerate_group_packed(C3, "derived"))
    assert group_order(A2, "derived") == 24 == len(enumerate_group_packed(A2, "derived"))


def test_contains_identity_and_diagonal():
    e = identity_element(C5)
    assert contains(C5, e.matrix).similitude == 1
    f5 = make_field(5, 1)
    a = f5.scalar(2)
    diag = ((a, f5.zero()), (f5.zero(), a.inverse()))
    elt = contains(C5, diag)
    assert elt is not None and elt.similitude == 1


def test_contains_rejects_perturbed_symplectic_4x4():
    desc = GroupDescriptor("C", 2, 3)
    torus = build_anisotropic_torus(desc)
    good = torus.generator.matrix
    assert contains(desc, good) is not None
    f3 = make_field(3, 1)
    rng = random.Random(11)
    rejected = 0
    for _ in range(20):
        i, j = rng.randrange(4), rng.randrange(4)
        bumped = [list(row) for row in good]
        bumped[i][j] = bumped[i][j] + f3.one()
        if contains(desc, tuple(tuple(r) for r in bumped)) is None:
            rejected += 1
    assert rejected >= 18  # perturbations essentially never stay similitudes


def test_contains_errors():
    f3 = make_field(3, 1)
    with pytest.raises(DimensionMismatch):
        contains(C3, ((f3.one(),),))
    f9 = make_field(3, 2)
    wrong = ((f9.one(), f9.zero()), (f9.zero(), f9.one()))
    with pytest.raises(FieldMismatch):
        contains(C3, wrong)


def test_torus_c_r1_orders_and_generator():
    torus = build_anisotropic_torus(C3)
    assert torus.order == 8 == torus_order(C3)
    # cyclic: the generator has full multiplicative order
    seen = set()
    g = identity_element(C3)
    for _ in range(torus.order):
        seen.add(pack_matrix(g.matrix))
        g = g * torus.generator
    assert len(seen) == 8 and pack_matrix(g.matrix) in seen
    assert build_anisotropic_torus(C5).order == 24


def test_torus_elements_are_distinct_commuting_similitudes():
    for desc in (C3, C5, A2):
        els = torus_element_matrices(desc)
        assert len({pack_matrix(e.matrix) for e in els}) == torus_order(desc)
        gens = build_anisotropic_torus(desc).generators
        for e in els[:10]:
            for g in gens:
                assert (e * g).matrix == (g * e).matrix
            assert contains(desc, e.matrix) is not None


def test_norm_one_subtorus_order():
    # the derived-subgroup slice of the C r=1 l=3 torus is the norm kernel
    census = torus_census(C3)
    assert census.subgroup_orders["derived"] == 4


def test_torus_generator_centralizer_is_the_torus():
    """Maximality certificate: the generator's centralizer has exactly the
    torus order, checked against full enumeration."""
    for desc in (C3, C5, A2):
        assert classify_element_oracle(build_anisotropic_torus(desc).generator, 1)


def test_census_values_c_r1():
    c = torus_census(C3, 1)
    assert (c.torus_order, c.regular_count, c.normalizer_order, c.weyl_order) == (8, 6, 16, 2)
    c5 = torus_census(C5, 1)
    assert (c5.torus_order, c5.regular_count) == (24, 20)
    assert (c5.normalizer_order, c5.weyl_order) == (48, 2)
    c52 = torus_census(C5, 2)
    assert c52.regular_count == 16  # brute-force over the 24 torus elements
    assert c52.regular_count_base == 20
    assert c5.b_estimate == Fraction(5, 6)


def test_census_m_fiber_bound():
    from frobsplit.groups import _TorusModel

    for desc in (C3, C5, A2):
        model = _TorusModel(desc)
        base = model.count_regular(1)
        for m in (2, 3, 4):
            assert model.count_regular(m) <= base * model.max_power_fiber(m)


def test_classify_examples():
    assert not classify_element(identity_element(C3), 1)
    torus = build_anisotropic_torus(C3)
    assert classify_element(torus.generator, 1)
    count, total = exhaustive_classification(C3, 1)
    assert (count, total) == (18, 48)


def test_classify_counts_are_class_functions_producing_18():
    # 3 irreducible monic quadratics over GF(3), each with 6 matrices
    f3 = make_field(3, 1)
    irreducible = 0
    for b in range(3):
        for c in range(3):
            if all((x * x + b * x + c) % 3 for x in range(3)):
                irreducible += 1
    assert irreducible == 3
    assert 3 * (48 // 8) == 18


@pytest.mark.parametrize("desc,m", [(C3, 1), (C3, 2), (A2, 1), (A2, 2), (C5, 1)])
def test_fast_path_agrees_with_oracle(desc, m):
    for elt in enumerate_group(desc):
        assert classify_element(elt, m) == classify_element_oracle(elt, m)


def test_fast_path_agrees_with_oracle_odd_unitary_rank():
    # GU_3 over GF(4): the odd-rank unitary fast path at a rank where the
    # norm polynomial really is a product of two conjugate cubics
    desc = GroupDescriptor("A", 3, 2)
    assert group_order(desc) == 648
    for elt in enumerate_group(desc):
        assert classify_element(elt, 1) == classify_element_oracle(elt, 1)
    count, total = exhaustive_classification(desc)
    nc = normalizer_census(desc)
    assert (count, total) == (144, 648)
    assert nc.weyl_order == 3
    assert (total // nc.normalizer_order) * regular_torus_count(desc) == count


def test_torus_generator_similitude_generates_the_scalars():
    for desc in (C3, C5, C7, A2):
        torus = build_anisotropic_torus(desc)
        sim = torus.generators[-1].similitude if desc.family == "A" and desc.r % 2 == 0 else torus.generator.similitude
        order = 1
        value = sim
        while value != 1:
            value = value * sim % desc.ell
            order += 1
        assert order == desc.ell - 1


def test_conjugation_invariance():
    rng = random.Random(31337)
    for desc in (C3, C5, A2):
        group = enumerate_group(desc)
        for _ in range(25):
            x = rng.choice(group)
            g = rng.choice(group)
            conj = g * x * g.inverse()
            for m in (1, 2):
                assert classify_element(x, m) == classify_element(conj, m)


@pytest.mark.parametrize("desc", [C3, C5, A2])
@pytest.mark.parametrize("m", [1, 2])
def test_count_identity(desc, m):
    """|J_{l,m}| = (|G|/|N|) * |T*_{l,m}| exactly."""
    count, total = exhaustive_classification(desc, m)
    nc = normalizer_census(desc)
    expected = (group_order(desc) // nc.normalizer_order) * regular_torus_count(desc, m)
    assert count == expected
    assert total == group_order(desc)


def test_normalizer_stability_across_primes():
    weyls = [normalizer_census(d).weyl_order for d in (C3, C5, C7)]
    assert weyls == [2, 2, 2]


def test_normalizer_fallback_for_out_of_budget_prime():
    big = GroupDescriptor("C", 1, 101)
    nc = normalizer_census(big)
    assert nc.weyl_order == 2
    assert nc.normalizer_order == 2 * torus_order(big)
    assert nc.stable_primes is not None and len(nc.stable_primes) >= 3


def test_budget_exceeded_paths():
    sp4 = GroupDescriptor("C", 2, 5)  # matrix space 5^16 is far over the cap
    with pytest.raises(BudgetExceeded):
        enumerate_group_packed(sp4)
    huge_torus = GroupDescriptor("C", 9, 11)
    with pytest.raises(BudgetExceeded):
        torus_census(huge_torus)


def test_interpolation_of_torus_polynomials():
    """Torus order and regular count at C r=1 fit degree-2 polynomials in
    ell: interpolating three primes predicts the fourth exactly."""
    primes = [3, 5, 7, 11]
    orders = []
    regulars = []
    for p in primes:
        c = torus_census(GroupDescriptor("C", 1, p), 1)
        orders.append(c.torus_order)
        regulars.append(c.regular_count)

    def lagrange_predict(xs, ys, x):
        total = Fraction(0)
        for i, (xi, yi) in enumerate(zip(xs, ys)):
            term = Fraction(yi)
            for j, xj in enumerate(xs):
                if i != j:
                    term *= Fraction(x - xj, xi - xj)
            total += term
        return total

    assert lagrange_predict(primes[:3], orders[:3], 11) == orders[3]
    assert lagrange_predict(primes[:3], regulars[:3], 11) == regulars[3]


@pytest.mark.parametrize(
    "desc",
    [
        C3,
        C5,
        A2,
        GroupDescriptor("C", 2, 3),
        GroupDescriptor("A", 1, 5),
        GroupDescriptor("A", 3, 2),
    ],
)
def test_exponent_model_matches_matrix_model(desc):
    """The integer census model and the matrix layer agree element by
    element on subgroup membership and (where the fast path applies) on
    regularity."""
    from frobsplit.groups import _TorusModel, mat_det

    model = _TorusModel(desc)
    matrices = torus_element_matrices(desc)
    one = desc.matrix_field.one()
    parts = ["full", "derived"] + (["unitary"] if desc.family == "A" else [])
    for idx, elt in zip(model.indices(), matrices):
        for part in parts:
            if part == "full":
                in_part_matrix = True
            elif part == "unitary":
                in_part_matrix = elt.similitude == 1
            elif desc.family == "C":
                in_part_matrix = elt.similitude == 1
            else:
                in_part_matrix = elt.similitude == 1 and mat_det(elt.matrix) == one
            assert model.in_part(idx, part) == in_part_matrix, (idx, part)
        assert model.is_regular(idx) == classify_element(elt, 1), idx
    for part in parts:
        assert model.count_part(part) == sum(
            1
            for idx in model.indices()
            if model.in_part(idx, part)
        )


def test_packed_round_trip():
    for desc in (C3, A2):
        torus = build_anisotropic_torus(desc)
        m = torus.generator.matrix
        assert unpack_matrix(desc, pack_matrix(m)) == m


def test_element_power_and_inverse():
    torus = build_anisotropic_torus(C5)
    g = torus.generator
    assert (g**3).matrix == (g * g * g).matrix
    assert (g * g.inverse()).matrix == identity_element(C5).matrix
    assert (g**-2).matrix == (g.inverse() * g.inverse()).matrix
