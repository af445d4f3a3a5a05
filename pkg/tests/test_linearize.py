from fractions import Fraction

import pytest

from rsft.coalgebra import TensorWord, check_master, coderivation
from rsft.core import AlgElement, bracket, identity_potential, rename_sides
from rsft.errors import NotAugmentation, NotHat
from rsft.linearize import (Augmentation, LinearizedMorphism,
                            augmentation_twist, augmentation_twist_series,
                            augmented_mc_linear_part, check_bilie_relations,
                            check_hat, linear_part, linearized_coderivation,
                            m_operation)
from rsft.mctwist import exp_mc, is_maurer_cartan
from rsft.scalars import NovikovPoly
from rsft.tables import Generator, GeneratorTable


def var(t, kind, name, side="", power=1):
    return AlgElement.variable(t, (kind, name, side), power=power)


def hat_table():
    # degrees a:1, b:2, c:2, d:4 at N = 0
    return GeneratorTable(0, [Generator("a", 1, 1), Generator("b", 2, 2),
                              Generator("c", 2, 1), Generator("d", 4, 1)])


def hat_h(t):
    # p_b q_a + p_d q_a q_c: master (no interacting pairs), bidegrees (1,1),(1,2)
    h = var(t, "p", "b") * var(t, "q", "a") + \
        var(t, "p", "d") * var(t, "q", "a") * var(t, "q", "c")
    assert h.degree() == -1
    return h


def aug_table():
    return GeneratorTable(0, [Generator("a", 0, 2), Generator("b", 1, 1)])


def aug_fixture():
    t = aug_table()
    h = var(t, "p", "b") - var(t, "p", "b") * var(t, "q", "a")
    f = var(t, "p", "a", "+").scale(Fraction(1, 2))
    return t, h, f


# -- checkHat ----------------------------------------------------------------

def test_check_hat_examples():
    t = hat_table()
    assert check_hat(var(t, "p", "b") * var(t, "q", "a"))
    assert not check_hat(var(t, "p", "b"))
    assert not check_hat(var(t, "q", "a"))


# -- m operations ------------------------------------------------------------

def test_m_operation_single_bracket():
    t = hat_table()
    h = hat_h(t)
    # m^1_1(q_b) = {p_b q_a, q_b} = kappa_b q_a
    out = m_operation(h, 1, 1, ["b"])
    assert out == var(t, "q", "a").scale(2)
    # m^1_2(q_d) = {p_d q_a q_c, q_d} = kappa_d q_a q_c
    out2 = m_operation(h, 1, 2, ["d"])
    assert out2 == var(t, "q", "a") * var(t, "q", "c")
    # degree count: deg(m^r_s) - deg(input) = (1-r)2N - 1
    assert out.degree() - var(t, "q", "b").degree() == -1


def test_m_operation_square_zero():
    t = hat_table()
    h = hat_h(t)
    for g in t.generators:
        once = m_operation(h, 1, 1, [g.name])
        # m11 lands in C; apply m11 again by bracketing each output generator
        acc = AlgElement.zero(t)
        for mon, c in once.terms.items():
            if mon_len(mon) != 1:
                continue
            (vname, e), = [((v[1]), e) for v, e in mon]
            acc = acc + m_operation(h, 1, 1, [vname]).scale(c)
        assert acc.is_zero()


def mon_len(mon):
    return sum(e for _v, e in mon)


def test_m_operation_requires_hat():
    t = hat_table()
    with pytest.raises(NotHat):
        m_operation(var(t, "p", "b"), 1, 1, ["b"])


# -- BiLie relations -----------------------------------------------------------

def test_bilie_relations_on_master_h():
    t = hat_table()
    h = hat_h(t)
    ok, failures = check_bilie_relations(h, 4, 4, word_len=[2, 3])
    assert ok, failures


def test_bilie_relations_detect_corruption():
    # a corrupted coefficient that breaks the master equation is reported
    t = GeneratorTable(0, [Generator("a", 1, 1), Generator("b", 2, 1),
                           Generator("c", 4, 1), Generator("d", 2, 1)])
    h = var(t, "p", "b") * var(t, "q", "a") + \
        var(t, "p", "c") * var(t, "q", "a") * var(t, "q", "b") + \
        var(t, "p", "a") * var(t, "p", "b") * var(t, "q", "d")
    assert h.degree() == -1
    assert not bracket(h, h).is_zero()
    ok, failures = check_bilie_relations(h, 4, 4, word_len=[2])
    assert not ok


def test_bilie_vacuous_components():
    t = hat_table()
    h = hat_h(t)
    # components with h^{r_i}_{s_i} = 0 contribute nothing: r=4 sums are empty
    ok, failures = check_bilie_relations(h, 2, 2, word_len=[2])
    assert ok


# -- augmentations ----------------------------------------------------------------

def test_augmentation_validation():
    t, h, f = aug_fixture()
    Augmentation(f, h)  # valid
    with pytest.raises(NotAugmentation):
        Augmentation(var(t, "p", "a", "+"), h)  # wrong normalization
    with pytest.raises(NotAugmentation):
        Augmentation(var(t, "q", "a", "-"), h)  # not in L_0
    bad_h = var(t, "p", "b")
    with pytest.raises(NotAugmentation):
        Augmentation(f, bad_h)  # h|_{L_f} = p_b^+ != 0


def test_augmentation_twist_closed_form():
    t, h, f = aug_fixture()
    hf = augmentation_twist(h, f)
    assert hf == (var(t, "p", "b") * var(t, "q", "a")).scale(-1)
    assert check_hat(hf)
    assert check_master(hf)


def test_augmentation_twist_two_paths_agree():
    t, h, f = aug_fixture()
    assert augmentation_twist(h, f) == augmentation_twist_series(h, f)
    # f = 0 with h already hat: h unchanged (on a hat element)
    t2 = hat_table()
    h2 = hat_h(t2)
    zero = AlgElement.zero(t2)
    assert augmentation_twist(h2, zero) == h2
    assert augmentation_twist_series(h2, zero) == h2


def test_augmentation_twist_q_zero_part():
    # (h_f)|_{q=0} = h|_{L_f} = 0
    t, h, f = aug_fixture()
    hf = augmentation_twist(h, f)
    assert hf.set_to_zero("q").filter_terms(lambda m: not m or True) \
        .q_part(0).is_zero()


def test_augmentation_changes_linearized_differential():
    t, h, f = aug_fixture()
    hf = augmentation_twist(h, f)
    # before the twist h is not hat, so m11 is not defined; after it is
    assert not check_hat(h)
    out = m_operation(hf, 1, 1, ["b"])
    assert out == var(t, "q", "a").scale(-1)


# -- linearized morphisms ------------------------------------------------------------

def lin_fixture():
    # identity cobordism over a hat Hamiltonian
    t = hat_table()
    h = hat_h(t)
    hp = rename_sides(h, {"": "+"})
    hm = rename_sides(h, {"": "-"})
    return t, h, hp, hm


def test_linearized_identity_morphism():
    t, h, hp, hm = lin_fixture()
    i = identity_potential(t)
    lin = LinearizedMorphism(i, hp, hm)
    for g in t.generators:
        w = (((("q", g.name, "+"), 1),),)
        assert lin.component(w) == var(t, "q", g.name, "-")
    # r >= 2 components vanish for the identity
    w2 = (((("q", "a", "+"), 1),), ((("q", "b", "+"), 1),))
    assert lin.component(w2).is_zero()


def test_linearized_chain_map_identity():
    t, h, hp, hm = lin_fixture()
    i = identity_potential(t)
    lin = LinearizedMorphism(i, hp, hm)
    words = [
        TensorWord.from_factors(t, [var(t, "q", "b", "+")]),
        TensorWord.from_factors(t, [var(t, "q", "d", "+")]),
        TensorWord.from_factors(t, [var(t, "q", "b", "+"), var(t, "q", "d", "+")]),
    ]
    h1p = linear_part(hp)
    h1m = linear_part(hm)
    for x in words:
        lhs = coderivation(h1m, lin.apply(x))
        rhs = lin.apply(coderivation(h1p, x))
        assert lhs == rhs


def test_linearized_morphism_validations():
    t, h, hp, hm = lin_fixture()
    i = identity_potential(t)
    with pytest.raises(NotHat):
        LinearizedMorphism(i, rename_sides(var(t, "p", "b"), {"": "+"}), hm)


def test_linearized_coderivation_stays_in_C():
    t, h, hp, hm = lin_fixture()
    x = TensorWord.from_factors(t, [var(t, "q", "b"), var(t, "q", "d")])
    out = linearized_coderivation(h, x)
    for word in out.words:
        for mon in word:
            assert mon_len(mon) == 1


# -- augmented Maurer-Cartan linear parts -----------------------------------------------

def nov_aug_fixture():
    t = GeneratorTable(0, [Generator("a", 0, 2), Generator("b", 1, 1)],
                       ring="novikov", energy=Fraction(2))
    h = var(t, "p", "b") - var(t, "p", "b") * var(t, "q", "a")
    f = var(t, "p", "a", "+").scale(Fraction(1, 2))
    lam12 = AlgElement.scalar(t, NovikovPoly.monomial(Fraction(1, 2), 1, t.energy))
    a = lam12 * var(t, "q", "a")
    return t, h, f, a


def test_augmented_mc_linear_part_trivial_cases():
    t, h, f, a = nov_aug_fixture()
    assert augmented_mc_linear_part(h, f, AlgElement.zero(t)).is_zero()
    # f = 0 with h hat: the pushforward along the identity renames, so the
    # linear part of a comes back unchanged
    t2 = GeneratorTable(0, [Generator("a", 0, 2), Generator("b", 1, 1)],
                        ring="novikov", energy=Fraction(2))
    hf = (AlgElement.variable(t2, ("p", "b", "")) *
          AlgElement.variable(t2, ("q", "a", ""))).scale(-1)
    lam12 = AlgElement.scalar(t2, NovikovPoly.monomial(Fraction(1, 2), 1, t2.energy))
    a2 = lam12 * AlgElement.variable(t2, ("q", "a", ""))
    assert is_maurer_cartan(a2, hf)
    out = augmented_mc_linear_part(hf, AlgElement.zero(t2), a2)
    assert out == a2


def test_augmented_mc_linear_part_satisfies_linearized_mc():
    t, h, f, a = nov_aug_fixture()
    assert is_maurer_cartan(a, h)
    hf = augmentation_twist(h, f)
    assert check_hat(hf)
    a1 = augmented_mc_linear_part(h, f, a)
    # linearized MC equation: D^lin(e^{a1}) = 0 modulo lambda^E
    h1 = linear_part(hf)
    if a1.is_zero():
        return
    assert coderivation(h1, exp_mc(a1)).is_zero()
