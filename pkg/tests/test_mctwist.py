from fractions import Fraction

import pytest

from rsft.coalgebra import TensorWord, check_master, coderivation, exp_word
from rsft.core import AlgElement, bracket, identity_potential, rename_sides
from rsft.errors import DegreeMismatch, NotMaurerCartan, ZeroFiltration
from rsft.mctwist import (apply_general_morphism, energy_word_bound,
                          exp_mc, exponential_product_check, is_maurer_cartan,
                          psi_map, pushforward_mc, split_potential,
                          twist_coderivation, twist_hamiltonian,
                          twisted_morphism)
from rsft.morphism import (MorphismHandle, Potential, apply_morphism,
                           check_chain_map)
from rsft.scalars import NovikovPoly
from rsft.tables import Generator, GeneratorTable


def var(t, kind, name, side="", power=1):
    return AlgElement.variable(t, (kind, name, side), power=power)


def lam(t, e, c=1):
    return AlgElement.scalar(t, NovikovPoly.monomial(Fraction(e), c, t.energy))


def fixture(energy=Fraction(2)):
    """h = p_x + p_x p_y q_z: master, with a = L^{1/2}(q_z + q_z q_y) a
    Maurer-Cartan element whose twist is h + 2 L^{1/2} q_z^2 p_x."""
    t = GeneratorTable(0, [Generator("x", 1, 1), Generator("y", 0, 2),
                           Generator("z", 0, 1)],
                       ring="novikov", energy=energy)
    h = var(t, "p", "x") + var(t, "p", "x") * var(t, "p", "y") * var(t, "q", "z")
    a = lam(t, Fraction(1, 2)) * (var(t, "q", "z")
                                  + var(t, "q", "z") * var(t, "q", "y"))
    return t, h, a


def cobordism_fixture(energy=Fraction(2), s=2):
    """Non-exact chain-map data over the fixture table: the rescaling
    potential f_s plus the q^-_z Novikov tail; exact at every order."""
    t, h, a = fixture(energy)
    hp = rename_sides(h, {"": "+"})
    hm = rename_sides(h, {"": "-"})
    f = (var(t, "q", "x", "-") * var(t, "p", "x", "+")) \
        + (var(t, "q", "y", "-") * var(t, "p", "y", "+")).scale(Fraction(s, 2)) \
        + (var(t, "q", "z", "-") * var(t, "p", "z", "+")).scale(s) \
        + lam(t, Fraction(1, 2)) * var(t, "q", "z", "-")
    return t, h, hp, hm, a, f


def test_energy_word_bound():
    assert energy_word_bound(Fraction(1, 2), Fraction(2)) == 3
    assert energy_word_bound(Fraction(1, 2), Fraction(3, 2)) == 2
    assert energy_word_bound(Fraction(1), Fraction(1)) == 0
    with pytest.raises(ZeroFiltration):
        energy_word_bound(Fraction(0), Fraction(1))


def test_is_mc_examples():
    t, h, a = fixture()
    assert check_master(h)
    assert is_maurer_cartan(a, h)
    # the twist is nontrivial: {h, a} != 0
    assert not bracket(h, a).is_zero()
    # zero element needs the explicit flag
    with pytest.raises(ZeroFiltration):
        is_maurer_cartan(AlgElement.zero(t), h)
    assert is_maurer_cartan(AlgElement.zero(t), h, allow_zero=True)
    # h = 0 accepts any admissible a
    assert is_maurer_cartan(a, AlgElement.zero(t))
    # wrong degree rejected
    bad = lam(t, Fraction(1, 2)) * var(t, "q", "x")
    with pytest.raises(DegreeMismatch):
        is_maurer_cartan(bad, h)
    # level-zero rejected
    with pytest.raises(ZeroFiltration):
        is_maurer_cartan(var(t, "q", "z"), h)


def mc_failure_fixture():
    # h = p_x q_u with a = L^{1/2} q_x q_w: D(e^a) = (kappa L^{1/2} q_u q_w
    # + ...) (.) e^a != 0
    t = GeneratorTable(0, [Generator("u", 0, 1), Generator("w", -1, 1),
                           Generator("x", 1, 1)],
                       ring="novikov", energy=Fraction(2))
    h = AlgElement.variable(t, ("p", "x", "")) * AlgElement.variable(t, ("q", "u", ""))
    a = AlgElement.scalar(t, NovikovPoly.monomial(Fraction(1, 2), 1, t.energy)) * \
        AlgElement.variable(t, ("q", "x", "")) * AlgElement.variable(t, ("q", "w", ""))
    assert h.degree() == -1 and a.degree() == 0
    assert check_master(h)
    return t, h, a


def test_is_mc_negative_control():
    t, h, a = mc_failure_fixture()
    assert not is_maurer_cartan(a, h)


def test_twist_requires_mc():
    t, h, a = mc_failure_fixture()
    with pytest.raises(NotMaurerCartan):
        twist_coderivation(h, a, TensorWord.unit(t))
    with pytest.raises(NotMaurerCartan):
        twist_hamiltonian(h, a)


def test_exponential_product_identities():
    t, h, a = fixture()
    b = lam(t, 1) * var(t, "q", "y", power=2)
    assert exponential_product_check(a, b)
    # b = 0: e^a = e^a (.) 1l
    assert exp_mc(a).odot(TensorWord.unit(t)) == exp_mc(a)
    # Psi^a Psi^{-a} = id on sample words
    x = TensorWord.from_factors(t, [var(t, "q", "x"), var(t, "q", "y")])
    assert psi_map(-a, psi_map(a, x)) == x
    assert psi_map(a, TensorWord.unit(t)) == exp_mc(a)


def test_twist_hamiltonian_closed_form():
    t, h, a = fixture()
    assert twist_hamiltonian(h, AlgElement.zero(t)) == h
    ha = twist_hamiltonian(h, a)
    expected = h + lam(t, Fraction(1, 2), 2) * var(t, "q", "z", power=2) * \
        var(t, "p", "x")
    assert ha == expected
    assert ha.in_overline()
    assert check_master(ha)
    # an element Poisson-commuting with h leaves h unchanged
    c = lam(t, 1) * var(t, "q", "z")
    assert bracket(h, c).is_zero()
    assert twist_hamiltonian(h, c) == h


def test_twist_coderivation_examples():
    t, h, a = fixture()
    zero = AlgElement.zero(t)
    ha = twist_hamiltonian(h, a)
    words = [
        TensorWord.unit(t),
        TensorWord.from_factors(t, [var(t, "q", "x")]),
        TensorWord.from_factors(t, [var(t, "q", "z")]),
        TensorWord.from_factors(t, [var(t, "q", "x"), var(t, "q", "z")]),
        TensorWord.from_factors(t, [var(t, "q", "z", power=2), var(t, "q", "x")]),
        TensorWord.from_factors(t, [var(t, "q", "y") * var(t, "q", "z")]),
    ]
    for x in words:
        # a = 0 (allow-zero): D^0 = D
        assert twist_coderivation(h, zero, x) == coderivation(h, x)
        # (D^a)^2 = 0
        assert twist_coderivation(h, a, twist_coderivation(h, a, x)).is_zero()
        # agreement with the twisted-Hamiltonian route
        assert twist_coderivation(h, a, x) == coderivation(ha, x)
    # D^a(1l) = 0
    assert twist_coderivation(h, a, TensorWord.unit(t)).is_zero()


def test_split_potential():
    t, h, hp, hm, a, f = cobordism_fixture()
    f0, fprime = split_potential(f)
    assert f0 == lam(t, Fraction(1, 2)) * var(t, "q", "z", side="-")
    assert f0.filtration_level() == Fraction(1, 2)
    assert fprime.in_overline
    i = identity_potential(t)
    z0, zprime = split_potential(i)
    assert z0.is_zero() and zprime.element == i
    with pytest.raises(ZeroFiltration):
        split_potential(i + var(t, "q", "z", side="-"))


def test_cobordism_fixture_is_chain_map():
    t, h, hp, hm, a, f = cobordism_fixture()
    assert check_chain_map(f, hp, hm)
    # f0 is Maurer-Cartan for the negative end: ->D^- e^{f0} = 0
    f0, fprime = split_potential(f)
    a0 = rename_sides(f0, {"-": ""})
    assert is_maurer_cartan(a0, h)
    # f' intertwines D^+ and the f0-twisted D^-
    handle = MorphismHandle(fprime)
    hm_f0 = rename_sides(twist_hamiltonian(h, a0), {"": "-"})
    words = [
        TensorWord.from_factors(t, [var(t, "q", "x", "+")]),
        TensorWord.from_factors(t, [var(t, "q", "z", "+")]),
        TensorWord.from_factors(t, [var(t, "q", "x", "+"), var(t, "q", "z", "+")]),
        TensorWord.from_factors(t, [var(t, "q", "y", "+") * var(t, "q", "z", "+")]),
    ]
    for x in words:
        lhs = coderivation(hm_f0, apply_morphism(handle, x))
        rhs = apply_morphism(handle, coderivation(hp, x))
        assert lhs == rhs


def test_pushforward_identity_morphism():
    t, h, a = fixture()
    handle = MorphismHandle.identity(t)
    ap = rename_sides(a, {"": "+"})
    out = pushforward_mc(handle, ap)
    assert out == rename_sides(a, {"": "-"})
    assert pushforward_mc(handle, AlgElement.zero(t)).is_zero()


def test_pushforward_exponential_identity():
    t, h, hp, hm, a, f = cobordism_fixture()
    f0, fprime = split_potential(f)
    handle = MorphismHandle(fprime)
    ap = rename_sides(a, {"": "+"})
    fstar = pushforward_mc(handle, ap)
    # Phi(e^a) = e^{f_*(a)} exactly modulo lambda^E
    assert apply_morphism(handle, exp_mc(ap)) == exp_mc(fstar)
    # and f_*(a) is Maurer-Cartan downstream (for the f0-twisted structure
    # here the plain h also annihilates it since x-variables never appear)
    assert is_maurer_cartan(rename_sides(fstar, {"-": ""}), h)


def test_twisted_morphism_properties():
    t, h, hp, hm, a, f = cobordism_fixture()
    f0, fprime = split_potential(f)
    handle = MorphismHandle(fprime)
    ap = rename_sides(a, {"": "+"})
    # a = 0 leaves the morphism unchanged
    h2, fstar0 = twisted_morphism(handle, AlgElement.zero(t))
    assert h2 is handle and fstar0.is_zero()
    # leading term of the twisted potential equals the pushforward series
    # (validated inside twisted_morphism), and Phi^a(1l) = 1l
    ha_handle, fstar = twisted_morphism(handle, ap)
    assert fstar == pushforward_mc(handle, ap)
    assert apply_morphism(ha_handle, TensorWord.unit(t)) == TensorWord.unit(t)


def test_twisted_morphism_chain_map_property():
    # Phi^a intertwines D^{a-twisted +} and D^{(f0, f_*(a))-twisted -}
    t, h, hp, hm, a, f = cobordism_fixture()
    f0, fprime = split_potential(f)
    handle = MorphismHandle(fprime)
    ap = rename_sides(a, {"": "+"})
    ha_plus = rename_sides(twist_hamiltonian(h, a), {"": "+"})
    handle_a, fstar = twisted_morphism(handle, ap)
    a0 = rename_sides(f0, {"-": ""})
    hm_tw = twist_hamiltonian(twist_hamiltonian(h, a0),
                              rename_sides(fstar, {"-": ""}), validate=False)
    hm_tw = rename_sides(hm_tw, {"": "-"})
    words = [
        TensorWord.from_factors(t, [var(t, "q", "x", "+")]),
        TensorWord.from_factors(t, [var(t, "q", "z", "+")]),
        TensorWord.from_factors(t, [var(t, "q", "x", "+"), var(t, "q", "z", "+")]),
    ]
    for x in words:
        lhs = coderivation(hm_tw, apply_morphism(handle_a, x))
        rhs = apply_morphism(handle_a, coderivation(ha_plus, x))
        assert lhs == rhs


def test_general_morphism_factorization():
    # Phi_general(1l) = e^{f0} (.) 1l
    t, h, hp, hm, a, f = cobordism_fixture()
    out = apply_general_morphism(f, TensorWord.unit(t))
    f0, fprime = split_potential(f)
    assert out == exp_mc(f0)
    # and on a sample word it is e^{f0} (.) Phi'(x)
    x = TensorWord.from_factors(t, [var(t, "q", "z", "+")])
    handle = MorphismHandle(fprime)
    assert apply_general_morphism(f, x) == exp_mc(f0).odot(apply_morphism(handle, x))


@pytest.mark.parametrize("energy", [Fraction(1, 2), Fraction(1), Fraction(3, 2)])
def test_mc_identities_across_energy_levels(energy):
    t, h, hp, hm, a, f = cobordism_fixture(energy)
    if a.is_zero():
        # at E = 1/2 the level-1/2 element vanishes identically: the twisted
        # structures degenerate to the untwisted ones modulo lambda^E
        assert energy == Fraction(1, 2)
        assert is_maurer_cartan(a, h, allow_zero=True)
        x = TensorWord.from_factors(t, [var(t, "q", "x")])
        assert twist_coderivation(h, a, x) == coderivation(h, x)
        return
    assert is_maurer_cartan(a, h)
    b = lam(t, Fraction(1, 4)) * var(t, "q", "y", power=2)
    assert exponential_product_check(a, b)
    x = TensorWord.from_factors(t, [var(t, "q", "x")])
    assert twist_coderivation(h, a, twist_coderivation(h, a, x)).is_zero()
    ha = twist_hamiltonian(h, a)
    assert twist_coderivation(h, a, x) == coderivation(ha, x)
    # pushforward identity at this energy level
    f0, fprime = split_potential(f)
    handle = MorphismHandle(fprime)
    ap = rename_sides(a, {"": "+"})
    fstar = pushforward_mc(handle, ap)
    assert apply_morphism(handle, exp_mc(ap)) == exp_mc(fstar)
