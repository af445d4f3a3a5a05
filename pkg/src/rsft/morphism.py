"""Potentials and the coalgebra morphisms they induce.

A potential is a degree-2N element of L (power series in p^+ with polynomial
coefficients in q^- and the t-variables).  Elements of P^+ act on word sums
over L from the right ('left action' <-D, consuming q^+ against p^+), and
elements of P^- act from the left ('right action' D->, consuming p^- against
q^-).  The induced morphism is

    Phi(w_1 ... w_r) = ((e^f) <-D_{w_1 ... w_r})|_{p^+ = 0},

with arity components

    phi^r(w_1 ... w_r) = 1/(tau-r+1)! (f^{(tau-r+1)} <-D_{w_1...w_r})|_{p^+=0}

for inputs of total q^+-length tau; only single-tree contributions survive
the restriction at that exponent, so the value lands in S^1.
"""

from fractions import Fraction
from itertools import combinations

from . import trunc
from .coalgebra import (TensorWord, coderivation, exp_word, split_p_components,
                        unshuffle_sign, unshuffle_sign_back, word_power)
from .core import (AlgElement, INHOMOGENEOUS, bracket, identity_potential,
                   mon_count, mon_degree, rename_sides, restrict_to_lagrangian,
                   substitute)
from .errors import (InhomogeneousInput, MasterEquationFails, NonTerminating,
                     NotChainMap, NotOverline, RsftError)


# ---------------------------------------------------------------------------
# coderivation actions of P^+ (from the right) and P^- (from the left)
# ---------------------------------------------------------------------------

def _mon_element(table, m):
    return AlgElement(table, {m: table.coeff(1)})


def left_action_component(g, s, x):
    """<-D_{g_s} for g of pure q-degree s: unshuffle extension of
    (c_1 ... c_s) <- g = {c_1, {..., {c_s, g}...}."""
    table = x.table
    out = TensorWord.zero(table)
    for word, coeff in x.words.items():
        n = len(word)
        if s > n:
            continue
        pars = [mon_degree(table, m) & 1 for m in word]
        for chosen in combinations(range(n), s):
            sign = unshuffle_sign_back(pars, chosen)
            val = g
            for i in reversed(chosen):
                val = bracket(_mon_element(table, word[i]), val)
                if val.is_zero():
                    break
            if val.is_zero():
                continue
            rest = [word[i] for i in range(n) if i not in chosen]
            piece = TensorWord.from_factors(
                table, rest + [val], coeff=table.coeff(sign) * coeff)
            out = out + piece
    return out


def left_action(g, x):
    """x <-D_g, summing the pure-q-degree components of g in P^+."""
    if g.degree() is INHOMOGENEOUS:
        raise InhomogeneousInput("left action needs a homogeneous element")
    out = TensorWord.zero(x.table)
    for s in range(0, g.max_q_degree() + 1):
        gs = g.q_part(s)
        if not gs.is_zero():
            out = out + left_action_component(gs, s, x)
    return out


def right_action_component(g, r, x):
    """D_{g^r}-> for g of pure p-degree r: unshuffle extension of
    ->g(c_1 ... c_r) = {...{g, c_1}, ...}, c_r}."""
    table = x.table
    out = TensorWord.zero(table)
    for word, coeff in x.words.items():
        n = len(word)
        if r > n:
            continue
        pars = [mon_degree(table, m) & 1 for m in word]
        for chosen in combinations(range(n), r):
            sign = unshuffle_sign(pars, chosen)
            val = g
            for i in chosen:
                val = bracket(val, _mon_element(table, word[i]))
                if val.is_zero():
                    break
            if val.is_zero():
                continue
            rest = [word[i] for i in range(n) if i not in chosen]
            piece = TensorWord.from_factors(
                table, [val] + rest, coeff=table.coeff(sign) * coeff)
            out = out + piece
    return out


def right_action(g, x):
    """D_g->(x), summing the pure-p-degree components of g in P^-."""
    if g.degree() is INHOMOGENEOUS:
        raise InhomogeneousInput("right action needs a homogeneous element")
    out = TensorWord.zero(x.table)
    for r in range(0, g.max_p_degree() + 1):
        gr = g.p_part(r)
        if not gr.is_zero():
            out = out + right_action_component(gr, r, x)
    return out


def left_word_action(subscript, x):
    """x <-D_{w_1 ... w_k}: apply <-D_{w_i} factor by factor, left to right.

    subscript may be a TensorWord (linear extension over its words) or a
    single word tuple of q-monomials.
    """
    table = x.table
    if isinstance(subscript, tuple):
        items = [(subscript, table.coeff(1))]
    else:
        items = list(subscript.words.items())
    out = TensorWord.zero(table)
    for word, coeff in items:
        y = x
        for m in word:
            s = mon_count(m, "q")
            if mon_count(m, "p"):
                raise RsftError("subscript words must be pure q-monomials")
            y = left_action_component(_mon_element(table, m), s, y)
            if y.is_zero():
                break
        out = out + y.scale(coeff)
    return out


# ---------------------------------------------------------------------------
# potentials and morphism handles
# ---------------------------------------------------------------------------

class Potential:
    """Degree-2N element of L; overline means every term carries a p^+."""

    def __init__(self, element, require_overline=False):
        table = element.table
        d = element.degree()
        if d is INHOMOGENEOUS or (d is not None and d != 2 * table.N):
            raise RsftError("potential must be homogeneous of degree 2N")
        for mon in element.terms:
            for (kind, _name, side), _e in mon:
                if kind == "t":
                    continue
                if (kind, side) not in (("p", "+"), ("q", "-")):
                    raise RsftError("potential variables must be p^+ / q^- / t")
        self.element = element
        self.table = table
        if require_overline and not self.in_overline:
            raise NotOverline("potential has p^+-free terms; split it first")

    @property
    def in_overline(self):
        return self.element.in_overline(side="+")

    @property
    def in_hat(self):
        return self.in_overline and self.element.in_underline(side="-")


class MorphismHandle:
    """A potential in overline-L together with a phi-component cache."""

    def __init__(self, potential):
        if isinstance(potential, AlgElement):
            potential = Potential(potential)
        if not potential.in_overline:
            raise NotOverline("morphism needs f in overline-L; "
                              "use the Maurer-Cartan split for general f")
        self.potential = potential
        self.table = potential.table
        self._phi_cache = {}

    @classmethod
    def identity(cls, table):
        return cls(Potential(identity_potential(table)))


def identity_handle(table):
    return MorphismHandle.identity(table)


def phi_component(handle, word):
    """phi^r on a word of q^+-monomials (an AlgElement in the q^- variables)."""
    table = handle.table
    if isinstance(word, TensorWord):
        out = AlgElement.zero(table)
        for w, c in word.words.items():
            out = out + phi_component(handle, w).scale(c)
        return out
    cached = handle._phi_cache.get(word)
    if cached is not None:
        return cached
    tau = 0
    for m in word:
        q = mon_count(m, "q")
        if q == 0 or mon_count(m, "p"):
            return AlgElement.zero(table)
        tau += q
    r = len(word)
    n = tau - r + 1
    f = handle.potential.element
    x = word_power(f, n)
    y = left_word_action(word, x)
    y = y.restrict_zero("p", "+")
    for w in y.words:
        if len(w) > 1:
            raise RsftError("phi component produced a disconnected word")
    value = y.s1_as_element()
    handle._phi_cache[word] = value
    return value


def apply_morphism(handle, x, max_len=None):
    """Phi(x) for a word sum over A^+; exact for overline potentials.

    max_len only guards the output (a cutoff event is noted if it fires;
    structurally Phi maps S^{<=k} into S^{<=k}).
    """
    table = handle.table
    f = handle.potential.element
    out = TensorWord.zero(table)
    for word, coeff in x.words.items():
        if not word:
            out = out + TensorWord.unit(table, coeff)
            continue
        tau = sum(mon_count(m, "q") for m in word)
        ef = exp_word(f, tau)
        y = left_word_action(word, ef)
        y = y.restrict_zero("p", "+")
        out = out + y.scale(coeff)
    if max_len is not None:
        out = out.truncate_words(max_len)
    return out


def _partitions(indices):
    if not indices:
        yield []
        return
    first, rest = indices[0], indices[1:]
    for sub in _subsets(rest):
        block = (first,) + sub
        remaining = tuple(i for i in rest if i not in sub)
        for parts in _partitions(remaining):
            yield [block] + parts


def _subsets(seq):
    n = len(seq)
    for mask in range(1 << n):
        yield tuple(seq[i] for i in range(n) if mask & (1 << i))


def apply_morphism_assembled(handle, x):
    """Phi as e^phi: sum over set partitions of the factors (test oracle
    path; exact equality with apply_morphism is an acceptance criterion)."""
    table = handle.table
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
            factors = [phi_component(handle, tuple(word[i] for i in block))
                       for block in parts]
            if any(f.is_zero() for f in factors):
                continue
            piece = TensorWord.from_factors(table, factors,
                                            coeff=table.coeff(sign) * coeff)
            out = out + piece
    return out


# ---------------------------------------------------------------------------
# chain maps and composition
# ---------------------------------------------------------------------------

def check_chain_map(f, hplus, hminus):
    """h^-|_{L_f} == h^+|_{L_f} (Lemma-level criterion for D^- Phi = Phi D^+)."""
    from .coalgebra import check_master
    if not check_master(hplus) or not check_master(hminus):
        raise MasterEquationFails("chain-map check needs master Hamiltonians")
    if isinstance(f, Potential):
        f = f.element
    return restrict_to_lagrangian(hminus, f) == restrict_to_lagrangian(hplus, f)


def compose(fminus, fplus, pmax=None, max_passes=None):
    """Composite potential: the middle-variable substitution

        f = ( f^+(p^+, q) + f^-(p, q^-) - sum 1/kappa q_gamma p_gamma )|_L,
        L:  p_gamma = kappa d f^+ / d q_gamma,
            q_gamma = kappa d f^- / d p_gamma,

    resolved by fixed-point iteration.  Requires f^+ in overline-L (every
    f^+-vertex then carries a p^+, so contributing trees below the p^+-degree
    bound have boundedly many vertices) and a finite bound pmax.
    """
    if isinstance(fminus, Potential):
        fminus = fminus.element
    if isinstance(fplus, Potential):
        fplus = fplus.element
    table = fplus.table
    if not fplus.in_overline(side="+"):
        raise NotOverline("compose needs f^+ in overline-L; "
                          "use the Maurer-Cartan split for non-exact ends")
    if pmax is None:
        pmax = fplus.pmax if fplus.pmax is not None else fminus.pmax
    if pmax is None:
        raise RsftError("compose needs a finite max p-degree (pmax)")

    fp = rename_sides(fplus, {"-": ""}).with_pmax(None)
    fm = rename_sides(fminus, {"+": ""}).with_pmax(None)
    base = {}
    middle = AlgElement.zero(table)
    for g in table.generators:
        base[("p", g.name, "")] = fp.lpartial(("q", g.name, "")).scale(g.kappa)
        base[("q", g.name, "")] = fm.rpartial(("p", g.name, "")).scale(g.kappa)
        middle = middle + (
            AlgElement.variable(table, ("q", g.name, ""))
            * AlgElement.variable(table, ("p", g.name, ""))).scale(
                Fraction(1, g.kappa))

    def drop_heavy(x):
        kept = {}
        for mon, c in x.terms.items():
            if mon_count(mon, "p", "+") > pmax:
                trunc.note("pmax")
            else:
                kept[mon] = c
        return AlgElement(table, kept)

    def has_middle(x):
        return any(v[2] == "" and v[0] in ("p", "q")
                   for mon in x.terms for v, _e in mon)

    # resolve the substitution fixed point on the (small) graph values first;
    # surviving terms shed their middle variables within the pass budget
    # because every f^+-vertex contributes at least one p^+
    mapping = dict(base)
    budget = max_passes if max_passes is not None else 2 * pmax + 6
    passes = 0
    while any(has_middle(v) for v in mapping.values()):
        if passes >= budget:
            raise NonTerminating("composition substitution did not stabilize")
        mapping = {var: drop_heavy(substitute(val, mapping))
                   for var, val in base.items()}
        passes += 1
    expr = drop_heavy(substitute(fp + fm - middle, mapping))
    if has_middle(expr):
        raise NonTerminating("composition substitution did not stabilize")
    return Potential(expr.with_pmax(pmax).with_tag("L"))


# ---------------------------------------------------------------------------
# constraint (t-monomial) expansions and the filling maps
# ---------------------------------------------------------------------------

def word_t_extraction(x, tmon):
    """The coefficient word sum of the exact t-monomial inside a word sum.

    Each factor m = r * t^alpha contributes its t-content; pulling the t's to
    the front crosses the earlier reduced factors, producing Koszul signs.
    Repeated odd t's across factors vanish (t_1^2 = 0 for odd t_1).
    """
    table = x.table
    tmon = tuple(tmon)
    out = TensorWord.zero(table)
    for word, coeff in x.words.items():
        tprod = ()
        sign = 1
        reduced = []
        deg_so_far = 0
        dead = False
        for m in word:
            tpart = tuple((v, e) for v, e in m if v[0] == "t")
            rest = tuple((v, e) for v, e in m if v[0] != "t")
            if tpart:
                tdeg = sum(table.var_degree(v) * e for v, e in tpart)
                if (tdeg & 1) and ((deg_so_far + mon_degree(table, rest)) & 1):
                    sign = -sign
                from .core import mon_mul
                prod = mon_mul(table, tprod, tpart)
                if prod is None:
                    dead = True
                    break
                psign, tprod = prod
                sign *= psign
            reduced.append(rest)
            deg_so_far += mon_degree(table, rest)
        if dead or tprod != tmon:
            continue
        piece = TensorWord.from_factors(table, reduced,
                                        coeff=table.coeff(sign) * coeff)
        out = out + piece
    return out


def constraint_expansion(f, tmon, max_len):
    """e^f(T): the T-part of e^f at word-length cutoff, t-variables stripped."""
    if isinstance(f, Potential):
        f = f.element
    ef = exp_word(f, max_len)
    return word_t_extraction(ef, tmon)


def siegel_map(f, tmon, x, max_len):
    """Phi(T)(x) = ((e^f(T)) <-D_x)|_{p=0} for a filling (no q^- variables).

    The value lands in the scalar part of the word sum (S-bar Lambda collapses
    under the unit identification)."""
    if isinstance(f, Potential):
        f = f.element
    if any(v[0] == "q" for mon in f.terms for v, _e in mon):
        raise RsftError("filling potentials may not contain q^- variables")
    base = constraint_expansion(f, tmon, max_len)
    out = TensorWord.zero(f.table)
    for word, coeff in x.words.items():
        y = left_word_action(word, base)
        out = out + y.scale(coeff)
    return out.restrict_zero("p")
