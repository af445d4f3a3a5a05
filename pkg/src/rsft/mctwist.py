"""Filtered completions, Maurer-Cartan elements and twisted structures.

Everything here works modulo the Novikov energy cutoff E carried by the
generator table: a claim "= 0" in a completed setting means "= 0 modulo
lambda^E".  All series bounds are derived from filtration arithmetic
(k * filtrationLevel(a) >= E terminates the loops), never from ad hoc
iteration caps.
"""

from fractions import Fraction

from .coalgebra import TensorWord, check_master, coderivation, exp_word, word_power
from .core import AlgElement, INHOMOGENEOUS, bracket, mon_count
from .errors import (DegreeMismatch, MasterEquationFails, NotChainMap,
                     NotMaurerCartan, RsftError, ZeroFiltration)
from .morphism import (MorphismHandle, Potential, apply_morphism,
                       check_chain_map, left_word_action, phi_component)


def energy_word_bound(level, energy):
    """Largest k with k*level < energy (0 when level >= energy)."""
    if level <= 0:
        raise ZeroFiltration("word bound needs a positive filtration level")
    k = int(energy / level)
    if Fraction(k) * level >= energy:
        k -= 1
    return max(k, 0)


def _mc_word_bound(a):
    table = a.table
    if table.ring != "novikov":
        raise RsftError("Maurer-Cartan machinery needs a filtered (novikov) ring")
    level = a.filtration_level()
    if level is None:
        return 0
    if level <= 0:
        raise ZeroFiltration("Maurer-Cartan element must have positive "
                             "filtration level")
    return energy_word_bound(level, table.energy)


def exp_mc(a):
    """e^a truncated where the filtration guarantees vanishing mod lambda^E."""
    if a.is_zero():
        return TensorWord.unit(a.table)
    return exp_word(a, _mc_word_bound(a))


def is_maurer_cartan(a, h, allow_zero=False):
    """D_h(e^a) == 0 modulo lambda^E (and word bounds derived from it)."""
    if a.is_zero():
        if not allow_zero:
            raise ZeroFiltration("the zero element needs allow_zero=True")
        return True
    d = a.degree()
    if d is INHOMOGENEOUS or d != 2 * a.table.N:
        raise DegreeMismatch("Maurer-Cartan element must have degree 2N")
    if not check_master(h):
        raise MasterEquationFails("Maurer-Cartan check needs {h,h} = 0")
    return coderivation(h, exp_mc(a)).is_zero()


def exponential_product_check(a, b):
    """e^{a+b} == e^a (.) e^b at the energy-derived cutoffs."""
    for x in (a, b):
        if x and (x.degree() is INHOMOGENEOUS or (x.degree() & 1)):
            raise DegreeMismatch("exponentials need even homogeneous elements")
    table = a.table
    lhs = exp_mc(a + b)
    rhs = exp_mc(a).odot(exp_mc(b))
    levels = [x.filtration_level() for x in (a, b) if x.filtration_level() is not None]
    if not levels:
        return lhs == rhs
    k = energy_word_bound(min(levels), table.energy)
    return lhs.truncate_words(k) == rhs.truncate_words(k)


def psi_map(a, x):
    """Psi^a(x) = e^a (.) x, a coalgebra map (note Psi^a(1l) = e^a)."""
    return exp_mc(a).odot(x)


def twist_coderivation(h, a, x, validate=True):
    """D^a = Psi^{-a} o D o Psi^a, exact modulo lambda^E."""
    if validate and not is_maurer_cartan(a, h, allow_zero=a.is_zero()):
        raise NotMaurerCartan("twisting needs a Maurer-Cartan element")
    return psi_map(-a, coderivation(h, psi_map(a, x)))


def twist_hamiltonian(h, a, validate=True):
    """h^a = h + {h,a} + 1/2{{h,a},a} + ...; the filtration level of the
    j-th term grows by at least level(a) per bracket, so the series is
    finite below the energy cutoff."""
    if validate and not is_maurer_cartan(a, h, allow_zero=a.is_zero()):
        raise NotMaurerCartan("twisting needs a Maurer-Cartan element")
    if a.is_zero():
        return h
    level = a.filtration_level()
    energy = a.table.energy
    out = h
    term = h
    j = 1
    while True:
        term = bracket(term, a)
        if term.is_zero():
            break
        if Fraction(j) * level >= energy:
            break
        out = out + term.scale(Fraction(1, _factorial(j)))
        j += 1
    return out


def _factorial(n):
    out = 1
    for k in range(2, n + 1):
        out *= k
    return out


def split_potential(f):
    """f = f0 + f' with f0 = f|_{p^+=0}; f0 must have positive filtration."""
    if isinstance(f, Potential):
        f = f.element
    f0 = f.set_to_zero("p", "+")
    fprime = f - f0
    if not f0.is_zero():
        level = f0.filtration_level()
        if f.table.ring != "novikov" or level is None or level <= 0:
            raise ZeroFiltration("the p^+-free part must have positive "
                                 "filtration level")
    return f0, Potential(fprime, require_overline=True)


def pushforward_mc(handle, a, hplus=None, hminus=None):
    """f_*(a) = sum 1/r! phi^r(a^{(.)r}), so that Phi(e^a) = e^{f_*(a)}.

    When the Hamiltonians are supplied, the chain-map precondition and the
    Maurer-Cartan property of the result are verified.
    """
    if hplus is not None:
        if not is_maurer_cartan(a, hplus, allow_zero=a.is_zero()):
            raise NotMaurerCartan("pushforward needs a Maurer-Cartan element")
        if hminus is not None and not check_chain_map(
                handle.potential.element, hplus, hminus):
            raise NotChainMap("pushforward needs a chain map")
    if a.is_zero():
        return AlgElement.zero(a.table)
    ea = exp_mc(a)
    out = AlgElement.zero(a.table)
    for word, coeff in ea.words.items():
        if not word:
            continue
        out = out + phi_component(handle, word).scale(coeff)
    if hminus is not None and not out.is_zero():
        if not is_maurer_cartan(out, hminus):
            raise NotMaurerCartan("pushforward failed to satisfy the "
                                  "Maurer-Cartan equation downstream")
    return out


def twisted_potential(handle, a):
    """The element g with (e^f) <-D_{e^a} = e^g, extracted from the S^1 part.

    For a subscript word with m factors of total q-length tau, single-factor
    survivors need exactly tau - m + 1 copies of f.
    """
    table = handle.table
    f = handle.potential.element
    g = AlgElement.zero(table)
    for word, coeff in exp_mc(a).words.items():
        m = len(word)
        tau = sum(mon_count(mon, "q") for mon in word)
        k = tau - m + 1
        if k < 0:
            continue
        val = left_word_action(word, word_power(f, k))
        g = g + val.s1_as_element().scale(coeff)
    return g


def twisted_morphism(handle, a, hplus=None, hminus=None):
    """Phi^a = Psi^{-f_*(a)} o Phi o Psi^a: handle for the potential f^a.

    Returns (handle^a, f_*(a)).  f^a consists of the p^+-carrying terms of
    the element g with (e^f) <-D_{e^a} = e^g; the p^+-free leading term of g
    is f_*(a) (verified when the Hamiltonians are supplied).
    """
    fstar = pushforward_mc(handle, a, hplus=hplus, hminus=hminus)
    if a.is_zero():
        return handle, fstar
    g = twisted_potential(handle, a)
    fa = g.filter_terms(lambda m: mon_count(m, "p", "+") > 0)
    leading = g - fa
    if leading != fstar:
        raise RsftError("twisted potential leading term disagrees with the "
                        "pushforward series")
    return MorphismHandle(Potential(fa)), fstar


def apply_general_morphism(f, x, hminus=None):
    """Morphism of a possibly non-exact potential via the factorization
    Psi^{f0} o Phi' (multiplication by e^{f0} after the overline part)."""
    f0, fprime = split_potential(f)
    handle = MorphismHandle(fprime)
    out = apply_morphism(handle, x)
    if f0.is_zero():
        return out
    return exp_mc(f0).odot(out)
