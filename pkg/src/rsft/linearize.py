"""Linearization: the hat regime, m-operations, and augmentation twists.

For h with no p-free and no q-free terms, iterated brackets on generators
produce the operations m^r_s: S^r C -> S^s C whose quadratic relations are
the bidegree expansion of {h,h} = 0.  Augmentations (morphisms to the
trivial structure) twist a general overline h into the hat ideal, where
everything linearizes.
"""

from fractions import Fraction

from .coalgebra import (TensorWord, arrow_apply, check_master, coderivation,
                        coderivation_component, split_p_components)
from .core import (AlgElement, bracket, identity_potential, mon_count,
                   rename_sides, restrict_to_lagrangian)
from .errors import NotAugmentation, NotChainMap, NotHat, RsftError
from .morphism import MorphismHandle, Potential, check_chain_map, phi_component


def check_hat(h):
    """h|_{p=0} = 0 = h|_{q=0}: both membership predicates."""
    return h.in_overline() and h.in_underline()


def m_operation(h, r, s, gammas):
    """m^r_s(q_g1 ... q_gr) = {...{h^r_s, q_g1}, ...}, q_gr}.

    gammas: generator names (or q-variables); the value is supported on
    q-monomials of length s.
    """
    if not check_hat(h):
        raise NotHat("m-operations need h in the hat ideal")
    if len(gammas) != r:
        raise RsftError(f"m^{r}_{s} needs exactly {r} generator inputs")
    table = h.table
    hrs = h.extract_bidegree(r, s)
    acc = hrs
    for g in gammas:
        if acc.is_zero():
            break
        var = g if isinstance(g, tuple) else ("q", g, "")
        acc = bracket(acc, AlgElement.variable(table, var))
    return acc


def linear_part(h, side=None):
    """The part of h linear in the q-variables (q-degree exactly one)."""
    return h.q_part(1, side)


def check_bilie_relations(h, r_max, s_max, word_len=None):
    """Both forms of the quadratic relations, for all 2 <= r <= r_max and
    2 <= s <= s_max:

      (i) sum over splittings {h^{r1}_{s1}, h^{r2}_{s2}} = 0, and
      (ii) the circ_1-composition form on generator words: the chain
           S^n C -> S^{n-r2+1} A -> S^{n-r+1} A -> S^{n-r+s} C
           (Koszul-normalized flattening at the end) sums to zero.

    Returns (ok, failures) with failures a list of (form, r, s[, n]) tags.
    """
    if not check_hat(h):
        raise NotHat("the relations need h in the hat ideal")
    if not check_master(h):
        return False, [("master", 0, 0)]
    table = h.table
    failures = []
    comps = {}
    for r in range(1, h.max_p_degree() + 1):
        for s in range(1, h.max_q_degree() + 1):
            part = h.extract_bidegree(r, s)
            if not part.is_zero():
                comps[(r, s)] = part
    for r in range(2, r_max + 1):
        for s in range(2, s_max + 1):
            acc = AlgElement.zero(table)
            for (r1, s1), h1 in comps.items():
                for (r2, s2), h2 in comps.items():
                    if r1 + r2 == r and s1 + s2 == s:
                        acc = acc + bracket(h1, h2)
            if not acc.is_zero():
                failures.append(("bidegree", r, s))
    # circ_1 form on generator words
    gens = [AlgElement.variable(table, ("q", g.name, ""))
            for g in table.generators]
    max_r = max((r for r, _s in comps), default=0)
    lengths = [n for n in (word_len or range(2, 2 * max_r + 1))]
    for n in lengths:
        words = _generator_words(table, gens, n)
        for r in range(2, r_max + 1):
            for s in range(2, s_max + 1):
                for w in words:
                    acc = TensorWord.zero(table)
                    for (r1, s1), h1 in comps.items():
                        r2, s2 = r - r1, s - s1
                        h2 = comps.get((r2, s2))
                        if h2 is None or r2 > n:
                            continue
                        step = coderivation_component(h2, r2, w)
                        step = coderivation_component(h1, r1, step)
                        acc = acc + step
                    if not _flatten(acc).is_zero():
                        failures.append(("circ1", r, s, n))
    return not failures, failures


def _generator_words(table, gens, n):
    words = []

    def rec(start, acc):
        if len(acc) == n:
            w = TensorWord.from_factors(table, list(acc))
            if not w.is_zero():
                words.append(w)
            return
        for i in range(start, len(gens)):
            rec(i, acc + [gens[i]])

    rec(0, [])
    return words


def _flatten(x):
    """Interpret a word of q-monomials as a single monomial (graded product)."""
    table = x.table
    out = AlgElement.zero(table)
    for word, coeff in x.words.items():
        acc = AlgElement(table, {(): coeff})
        for m in word:
            acc = acc * AlgElement(table, {m: table.coeff(1)})
            if acc.is_zero():
                break
        out = out + acc
    return out


# ---------------------------------------------------------------------------
# augmentations
# ---------------------------------------------------------------------------

class Augmentation:
    """f in overline-L_0 (pure p^+ power series) of degree 2N with
    h|_{L_f} = 0: a morphism to the trivial structure."""

    def __init__(self, element, h):
        table = element.table
        d = element.degree()
        if d is not None and d != 2 * table.N:
            raise NotAugmentation("augmentation must have degree 2N")
        for mon in element.terms:
            for (kind, _name, side), _e in mon:
                if (kind, side) != ("p", "+"):
                    raise NotAugmentation("augmentation lives in L_0: "
                                          "pure p^+ power series")
        if element and not element.in_overline(side="+"):
            raise NotAugmentation("augmentation must vanish at p^+ = 0")
        hp = rename_sides(h, {"": "+"})
        if not restrict_to_lagrangian(hp, element).is_zero():
            raise NotAugmentation("h|_{L_f} != 0: not an augmentation")
        self.element = element
        self.h = h
        self.table = table


def augmentation_twist(h, f):
    """h_f = h|_{L_{i+f}} renamed back to the unsided variables.

    The result lies in the hat ideal and still satisfies the master
    equation; the series description ->e^f h is available as
    augmentation_twist_series for cross-checking.
    """
    if isinstance(f, Augmentation):
        f = f.element
    else:
        f = Augmentation(f, h).element
    table = h.table
    hp = rename_sides(h, {"": "+"})
    fi = identity_potential(table).with_tag(None) + f.with_tag(None)
    restricted = restrict_to_lagrangian(hp, fi)
    out = rename_sides(restricted, {"+": ""})
    return rename_sides(out, {"-": ""})


def augmentation_twist_series(h, f):
    """->e^f h = sum 1/r! {f, {f, ..., {f, h}...}} with f read in P (pure p);
    each bracket consumes one q of h, so the series is finite."""
    if isinstance(f, Augmentation):
        f = f.element
    fp = rename_sides(f, {"+": ""})
    out = AlgElement.zero(h.table)
    term = h
    r = 0
    factorial = 1
    while not term.is_zero():
        out = out + term.scale(Fraction(1, factorial))
        r += 1
        factorial *= r
        term = bracket(fp, term)
    return out


# ---------------------------------------------------------------------------
# linearized structures
# ---------------------------------------------------------------------------

def linearized_coderivation(h, x, side=""):
    """D^lin from the parts of h linear in the q-variables, acting on
    words of single generators (stays inside S-bar C)."""
    h1 = linear_part(h)
    return coderivation(h1, x)


class LinearizedMorphism:
    """Phi^lin: the coalgebra morphism on S-bar(C^+) induced by the parts
    of f linear in the q^- variables."""

    def __init__(self, f, hplus, hminus, validate=True):
        if isinstance(f, Potential):
            f = f.element
        self.handle = MorphismHandle(Potential(f))
        self.table = f.table
        if validate:
            if not (rename_sides(hplus, {"+": ""}).in_hat()
                    and rename_sides(hminus, {"-": ""}).in_hat()):
                raise NotHat("linearized morphisms need hat Hamiltonians")
            if not f.in_underline(side="-") or not f.in_overline(side="+"):
                raise NotHat("linearized morphisms need f in hat-L")
            if not check_chain_map(f, hplus, hminus):
                raise NotChainMap("linearized morphism needs the chain-map "
                                  "criterion")

    def component(self, word):
        """psi^r on a word of single q^+-generators: the part of phi^r
        linear in the q^- variables."""
        val = phi_component(self.handle, word)
        return val.filter_terms(lambda m: mon_count(m, "q", "-") == 1)

    def apply(self, x):
        """e^psi-assembly over set partitions of the word factors."""
        from .core import mon_degree
        from .morphism import _partitions
        table = self.table
        out = TensorWord.zero(table)
        for word, coeff in x.words.items():
            if not word:
                out = out + TensorWord.unit(table, coeff)
                continue
            n = len(word)
            pars = [mon_degree(table, m) & 1 for m in word]
            for parts in _partitions(tuple(range(n))):
                order = [i for block in parts for i in block]
                sign = 1
                for a in range(len(order)):
                    for b in range(a + 1, len(order)):
                        if order[a] > order[b] and pars[order[a]] and pars[order[b]]:
                            sign = -sign
                factors = [self.component(tuple(word[i] for i in block))
                           for block in parts]
                if any(fa.is_zero() for fa in factors):
                    continue
                piece = TensorWord.from_factors(
                    table, factors, coeff=table.coeff(sign) * coeff)
                out = out + piece
        return out


def augmented_mc_linear_part(h, f, a):
    """((i+f)_* a)_1: the q-linear part of the Maurer-Cartan pushforward
    along the augmentation morphism, returned over the unsided generators."""
    if isinstance(f, Augmentation):
        f = f.element
    else:
        f = Augmentation(f, h).element
    if a.is_zero():
        return AlgElement.zero(a.table)
    table = h.table
    handle = MorphismHandle(Potential(
        identity_potential(table).with_tag(None) + f.with_tag(None)))
    from .mctwist import pushforward_mc
    ap = rename_sides(a, {"": "+"})
    pushed = pushforward_mc(handle, ap)
    linear = pushed.filter_terms(lambda m: mon_count(m, "q", "-") == 1)
    return rename_sides(linear, {"-": ""})
