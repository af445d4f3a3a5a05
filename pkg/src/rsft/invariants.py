"""Bounded searches for the torsion and order invariants.

All searches run over finite spans of words (bounded length, q-letters and
degree) with exact rational linear algebra; Found results carry certificates
that are re-verified by direct application before being returned, and an
exhausted search is reported as Unknown with the bounds used (infinity is
never asserted).
"""

from fractions import Fraction

from .coalgebra import (TensorWord, check_master, coderivation,
                        enumerate_words, split_p_components, word_degree)
from .core import AlgElement, INHOMOGENEOUS, bracket, mon_count
from .errors import (BracketNotZero, MasterEquationFails, NotChainMap, NotHat,
                     NotOverline, RsftError)
from .linalg import kernel_basis, solve
from .linearize import check_hat
from .morphism import (MorphismHandle, Potential, apply_morphism,
                       check_chain_map, left_action, left_word_action,
                       right_action)
from .scalars import NovikovPoly


class SearchBounds:
    def __init__(self, k_max=4, qlen_max=6, degree_window=None,
                 energy_levels=None):
        if k_max < 1 or qlen_max < 1:
            raise RsftError("search bounds must be positive")
        self.k_max = k_max
        self.qlen_max = qlen_max
        self.degree_window = degree_window
        self.energy_levels = tuple(energy_levels) if energy_levels else None

    def as_dict(self):
        out = {"k_max": self.k_max, "qlen_max": self.qlen_max}
        if self.degree_window is not None:
            out["degree_window"] = list(self.degree_window)
        if self.energy_levels is not None:
            out["energy_levels"] = [str(l) for l in self.energy_levels]
        return out


class SearchResult:
    def __init__(self, status, value=None, certificate=None, bounds=None,
                 level=None):
        self.status = status  # 'found' | 'unknown'
        self.value = value
        self.certificate = certificate
        self.bounds = bounds
        self.level = level

    @property
    def found(self):
        return self.status == "found"

    def as_dict(self):
        from .expr import format_tensor_word
        out = {"status": self.status}
        if self.found:
            out["value"] = self.value
            if self.certificate is not None:
                out["certificate"] = format_tensor_word(self.certificate)
        if self.bounds is not None:
            out["bounds"] = self.bounds.as_dict()
        if self.level is not None:
            out["level"] = str(self.level)
        return out

    def __repr__(self):
        if self.found:
            return f"Found({self.value})"
        return "Unknown"


def _element_side(h):
    sides = {v[2] for mon in h.terms for v, _e in mon if v[0] in ("p", "q")}
    if len(sides) > 1:
        raise RsftError("element mixes variable sides")
    return sides.pop() if sides else ""


def _generator_words(table, k, side, qlen_max, target_wdeg):
    """Words of single q-generators, length <= k, of the given word degree."""
    gens = [("q", g.name, side) for g in table.generators]
    words = []

    def rec(start, acc, qlen):
        if acc:
            w = tuple(acc)
            if word_degree(table, w) == target_wdeg:
                words.append(w)
        if len(acc) == k or qlen == qlen_max:
            return
        for i in range(start, len(gens)):
            mon = ((gens[i], 1),)
            if acc and acc[-1] == mon and (table.var_degree(gens[i]) & 1):
                continue
            rec(i, acc + [mon], qlen + 1)

    rec(0, [], 0)
    return words


def _word_images(h, words, comps=None):
    table = h.table
    comps = comps if comps is not None else split_p_components(h)
    images = {}
    for w in words:
        out = coderivation(h, TensorWord(table, {w: table.coeff(1)}),
                           components=comps)
        images[w] = out.words
    return images


def _solve_hits_unit(table, words, images):
    """Solve D x = 1l over Q given per-word image dicts; None or coeff list."""
    rows = sorted({out for img in images.values() for out in img},
                  key=lambda w: repr(w))
    row_idx = {r: i for i, r in enumerate(rows)}
    if () not in row_idx:
        return None
    mat = [[Fraction(0)] * len(words) for _ in rows]
    for j, w in enumerate(words):
        for out, c in images[w].items():
            mat[row_idx[out]][j] = c
    rhs = [Fraction(0)] * len(rows)
    rhs[row_idx[()]] = Fraction(1)
    return solve(mat, rhs)


def torsion(h, bounds):
    """T = min{k-1 : 1l in im(D|_{S^{<=k}})} searched over words of single
    q-generators (the only words whose image meets the scalars)."""
    if not check_master(h):
        raise MasterEquationFails("torsion needs {h,h} = 0")
    if not h.in_overline():
        raise NotOverline("torsion needs h in overline-P")
    table = h.table
    if table.ring == "novikov":
        raise RsftError("use torsion_by_level over a Novikov ring")
    side = _element_side(h)
    comps = split_p_components(h)
    for k in range(1, bounds.k_max + 1):
        words = _generator_words(table, k, side, bounds.qlen_max, 1)
        if not words:
            continue
        images = _word_images(h, words, comps)
        x = _solve_hits_unit(table, words, images)
        if x is None:
            continue
        cert = TensorWord(table, {w: c for w, c in zip(words, x) if c != 0})
        if coderivation(h, cert, components=comps) == TensorWord.unit(table):
            return SearchResult("found", k - 1, cert, bounds)
        raise RsftError("torsion certificate failed re-verification")
    return SearchResult("unknown", bounds=bounds)


def torsion_tilde(h, bounds):
    """T-tilde: solve pi(D x) = 1l, the projection of the image equation."""
    if not check_master(h):
        raise MasterEquationFails("torsion needs {h,h} = 0")
    if not h.in_overline():
        raise NotOverline("torsion needs h in overline-P")
    table = h.table
    if table.ring == "novikov":
        raise RsftError("use torsion_by_level over a Novikov ring")
    side = _element_side(h)
    comps = split_p_components(h)
    for k in range(1, bounds.k_max + 1):
        words = _generator_words(table, k, side, bounds.qlen_max, 1)
        for w in words:
            out = coderivation(h, TensorWord(table, {w: table.coeff(1)}),
                               components=comps)
            c = out.words.get(())
            if c:
                cert = TensorWord(table, {w: Fraction(1) / c})
                check = coderivation(h, cert, components=comps)
                if check.scalar_coefficient() == 1:
                    return SearchResult("found", k - 1, cert, bounds)
        # all degree-1 generator words of length <= k scanned
    return SearchResult("unknown", bounds=bounds)


def unrestricted_torsion(h, bounds):
    """Tiny-instance oracle: the same solve over all bounded words of
    q-monomials (not only single generators); used to cross-check the
    preimage restriction."""
    if not check_master(h):
        raise MasterEquationFails("torsion needs {h,h} = 0")
    table = h.table
    side = _element_side(h)
    comps = split_p_components(h)
    for k in range(1, bounds.k_max + 1):
        words = [w for w in enumerate_words(table, k, bounds.qlen_max, side=side)
                 if word_degree(table, w) == 1]
        if not words:
            continue
        images = _word_images(h, words, comps)
        x = _solve_hits_unit(table, words, images)
        if x is None:
            continue
        cert = TensorWord(table, {w: c for w, c in zip(words, x) if c != 0})
        if coderivation(h, cert, components=comps) == TensorWord.unit(table):
            return SearchResult("found", k - 1, cert, bounds)
        raise RsftError("torsion certificate failed re-verification")
    return SearchResult("unknown", bounds=bounds)


# ---------------------------------------------------------------------------
# Novikov torsion, level by level
# ---------------------------------------------------------------------------

def _exponent_lattice(h, level):
    """All sums of coefficient exponents of h staying below the level."""
    base = set()
    for c in h.terms.values():
        if isinstance(c, NovikovPoly):
            for a, _v in c.terms:
                base.add(a)
        else:
            base.add(Fraction(0))
    base.discard(Fraction(0))
    lattice = {Fraction(0)}
    frontier = [Fraction(0)]
    while frontier:
        cur = frontier.pop()
        for b in base:
            nxt = cur + b
            if nxt < level and nxt not in lattice:
                lattice.add(nxt)
                frontier.append(nxt)
    return sorted(lattice)


def torsion_by_level(h, bounds, levels=None):
    """Torsion modulo lambda^level, per requested energy level.

    The truncated Novikov module is flattened over the derived exponent
    lattice into a plain rational system (basis = word x lambda^sigma)."""
    if not check_master(h):
        raise MasterEquationFails("torsion needs {h,h} = 0")
    if not h.in_overline():
        raise NotOverline("torsion needs h in overline-P")
    table = h.table
    if table.ring != "novikov":
        raise RsftError("level-by-level torsion needs a Novikov ring")
    levels = levels if levels is not None else bounds.energy_levels
    if not levels:
        raise RsftError("no energy levels requested")
    comps = split_p_components(h)
    side = _element_side(h)
    out = {}
    for level in levels:
        level = Fraction(level)
        if level > table.energy:
            raise RsftError("requested level exceeds the ring cutoff")
        out[level] = _torsion_at_level(h, bounds, level, comps, side)
    return out


def _torsion_at_level(h, bounds, level, comps, side):
    table = h.table
    sigmas = _exponent_lattice(h, level)
    for k in range(1, bounds.k_max + 1):
        words = _generator_words(table, k, side, bounds.qlen_max, 1)
        if not words:
            continue
        images = _word_images(h, words, comps)
        cols = [(w, s) for w in words for s in sigmas]
        row_set = set()
        col_entries = []
        for w, s in cols:
            entries = {}
            for outw, coeff in images[w].items():
                for a, c in coeff.terms:
                    tot = a + s
                    if tot < level:
                        key = (outw, tot)
                        entries[key] = entries.get(key, Fraction(0)) + c
            col_entries.append(entries)
            row_set.update(entries)
        rows = sorted(row_set, key=lambda ws: (repr(ws[0]), ws[1]))
        row_idx = {r: i for i, r in enumerate(rows)}
        target = ((), Fraction(0))
        if target not in row_idx:
            continue
        mat = [[Fraction(0)] * len(cols) for _ in rows]
        for j, entries in enumerate(col_entries):
            for key, c in entries.items():
                mat[row_idx[key]][j] = c
        rhs = [Fraction(0)] * len(rows)
        rhs[row_idx[target]] = Fraction(1)
        x = solve(mat, rhs)
        if x is None:
            continue
        words_acc = {}
        for (w, s), c in zip(cols, x):
            if c == 0:
                continue
            coeff = NovikovPoly.monomial(s, c, table.energy)
            prev = words_acc.get(w)
            words_acc[w] = coeff if prev is None else prev + coeff
        cert = TensorWord(table, {w: c for w, c in words_acc.items() if c})
        reverify = coderivation(h, cert, components=comps) - TensorWord.unit(table)
        if _is_zero_mod_level(reverify, level):
            return SearchResult("found", k - 1, cert, bounds, level=level)
        raise RsftError("level torsion certificate failed re-verification")
    return SearchResult("unknown", bounds=bounds, level=level)


def _is_zero_mod_level(x, level):
    for coeff in x.words.values():
        if isinstance(coeff, NovikovPoly):
            if coeff.truncated(level):
                return False
        elif coeff != 0:
            return False
    return True


# ---------------------------------------------------------------------------
# order
# ---------------------------------------------------------------------------

def order(h, g, bounds):
    """O = min{k : 1l in im(pi D_g on H(S^{<=k}, D_h))}, searched over
    D_h-cycles in the bounded span (the S^{<=k}-cycle reading)."""
    if not check_hat(h):
        raise NotHat("order needs h in the hat ideal")
    if not check_master(h):
        raise MasterEquationFails("order needs {h,h} = 0")
    if g.degree() is INHOMOGENEOUS:
        raise RsftError("order needs homogeneous g")
    if not g.in_overline():
        raise NotOverline("order needs g in overline-P")
    if not bracket(h, g).is_zero():
        raise BracketNotZero("order needs {h,g} = 0")
    table = h.table
    if table.ring == "novikov":
        raise RsftError("order is computed over Q")
    if g.is_zero():
        return SearchResult("unknown", bounds=bounds)
    side = _element_side(h)
    target_wdeg = 2 * table.N - g.degree()
    comps_h = split_p_components(h)
    comps_g = split_p_components(g)
    for k in range(1, bounds.k_max + 1):
        words = [w for w in enumerate_words(table, k, bounds.qlen_max, side=side)
                 if word_degree(table, w) == target_wdeg]
        if not words:
            continue
        images = _word_images(h, words, comps_h)
        rows = sorted({out for img in images.values() for out in img},
                      key=lambda w: repr(w))
        row_idx = {r: i for i, r in enumerate(rows)}
        mat = [[Fraction(0)] * len(words) for _ in rows]
        for j, w in enumerate(words):
            for outw, c in images[w].items():
                mat[row_idx[outw]][j] = c
        kernel = kernel_basis(mat, len(words))
        if not kernel:
            continue
        phi = []
        for w in words:
            out = coderivation(g, TensorWord(table, {w: table.coeff(1)}),
                               components=comps_g)
            phi.append(out.words.get((), Fraction(0)))
        for v in kernel:
            val = sum((c * p for c, p in zip(v, phi)), Fraction(0))
            if val != 0:
                coeffs = [c / val for c in v]
                cert = TensorWord(table, {w: c for w, c in zip(words, coeffs)
                                          if c != 0})
                if not coderivation(h, cert, components=comps_h).is_zero():
                    raise RsftError("order certificate is not a cycle")
                check = coderivation(g, cert, components=comps_g)
                if check.scalar_coefficient() != 1:
                    raise RsftError("order certificate failed re-verification")
                return SearchResult("found", k, cert, bounds)
    return SearchResult("unknown", bounds=bounds)


def boundaries_die_under_pi_dg(h, g, bounds, side=None):
    """pi(D_g(D_h(y))) = 0 for every bounded word y (order well-definedness;
    tested, not assumed)."""
    table = h.table
    side = side if side is not None else _element_side(h)
    comps_h = split_p_components(h)
    comps_g = split_p_components(g)
    for k in range(1, bounds.k_max + 1):
        for w in enumerate_words(table, k, bounds.qlen_max, side=side):
            x = TensorWord(table, {w: table.coeff(1)})
            out = coderivation(g, coderivation(h, x, components=comps_h),
                               components=comps_g)
            if out.scalar_coefficient() != 0:
                return False
    return True


# ---------------------------------------------------------------------------
# the order-homotopy witness equation
# ---------------------------------------------------------------------------

def check_order_homotopy(hplus, hminus, f, gplus, gminus, g, max_len=5):
    """D_{g^-}->(e^f) - (e^f)<-D_{g^+} = (e^f (.) g)<-D^+ - D^- ->(g (.) e^f),
    verified on word lengths <= max_len."""
    if isinstance(f, Potential):
        f = f.element
    if not check_chain_map(f, hplus, hminus):
        raise NotChainMap("order homotopy needs the chain-map criterion")
    for hh, gg in ((hplus, gplus), (hminus, gminus)):
        if gg and not bracket(hh, gg).is_zero():
            raise BracketNotZero("order homotopy needs {h,g} = 0 on both ends")
    table = f.table
    from .coalgebra import exp_word
    margin = 2
    for el in (gplus, gminus, hplus, hminus):
        margin = max(margin, el.max_q_degree(), el.max_p_degree())
    K = max_len + margin
    ef = exp_word(f, K)
    gw = TensorWord.from_factors(table, [g]) if g else TensorWord.zero(table)
    lhs = right_action(gminus, ef) - left_action(gplus, ef)
    rhs = TensorWord.zero(table)
    if g:
        rhs = left_action(hplus, ef.odot(gw)) - right_action(hminus, gw.odot(ef))
    else:
        rhs = left_action(hplus, TensorWord.zero(table))
    diff = lhs - rhs
    return diff.truncate_words(max_len).is_zero()


# ---------------------------------------------------------------------------
# monotonicity harness
# ---------------------------------------------------------------------------

def monotonicity_harness(hplus, hminus, f, bounds, gplus=None, gminus=None,
                         g=None, max_len=5):
    """Both-sided searches with certificate transport.

    Torsion part: T+ and T-; when T+ is Found(k) the certificate is pushed
    through the morphism and re-verified to satisfy D^-(Phi(a)) = 1l.
    Order part (when the g's are given): O+ and O-, the homotopy witness
    equation, and the six-step proof-chain values, which must all equal 1l.
    """
    if isinstance(f, Potential):
        f = f.element
    if not check_chain_map(f, hplus, hminus):
        raise NotChainMap("monotonicity needs a chain map")
    table = f.table
    handle = MorphismHandle(Potential(f))
    report = {"chain_map": True}

    t_plus = torsion(hplus, bounds)
    t_minus = torsion(hminus, bounds)
    report["torsion_plus"] = t_plus
    report["torsion_minus"] = t_minus
    report["tilde_plus"] = torsion_tilde(hplus, bounds)
    report["tilde_minus"] = torsion_tilde(hminus, bounds)
    if t_plus.found and t_minus.found:
        report["torsion_monotone"] = t_plus.value >= t_minus.value
    if t_plus.found:
        transported = apply_morphism(handle, t_plus.certificate)
        ok = coderivation(hminus, transported) == TensorWord.unit(table)
        report["transport_certificate"] = transported
        report["transport_verified"] = ok
        if ok and not t_minus.found:
            report["transport_note"] = ("transported certificate exhibits "
                                        "T- <= T+ directly")

    if gplus is not None and gminus is not None:
        gw = g if g is not None else AlgElement.zero(table)
        report["order_homotopy"] = check_order_homotopy(
            hplus, hminus, f, gplus, gminus, gw, max_len=max_len)
        o_plus = order(hplus, gplus, bounds)
        o_minus = order(hminus, gminus, bounds)
        report["order_plus"] = o_plus
        report["order_minus"] = o_minus
        if o_plus.found and o_minus.found:
            report["order_monotone"] = o_plus.value >= o_minus.value
        if o_plus.found:
            report["order_chain"] = order_proof_chain(
                hplus, hminus, f, gplus, gminus, gw, o_plus.certificate,
                max_len=max_len)
    return report


def order_proof_chain(hplus, hminus, f, gplus, gminus, g, a, max_len=6):
    """The six equalities in the order-monotonicity proof, as values.

    a is a D^+-cycle with pi(D_{g^+} a) = 1l; every step evaluates to the
    unit scalar and the list of the six values is returned."""
    if isinstance(f, Potential):
        f = f.element
    table = f.table
    handle = MorphismHandle(Potential(f))
    from .coalgebra import exp_word
    tau = max((sum(mon_count(m, "q") for m in w) for w in a.words), default=0)
    margin = 2
    for el in (gplus, gminus, hplus, hminus):
        margin = max(margin, el.max_q_degree(), el.max_p_degree())
    K = tau + margin + max_len
    ef = exp_word(f, K)
    gw = TensorWord.from_factors(table, [g]) if g else TensorWord.zero(table)

    def pz(x):
        return x.restrict_zero("p", "+").scalar_coefficient()

    # v1: pi D_{g^-}(Phi(a))
    v1 = coderivation(gminus, apply_morphism(handle, a)).scalar_coefficient()
    # v2: pi ((D_{g^-}-> e^f) <-D_a)|_{p+=0}
    v2 = pz(left_word_action(a, right_action(gminus, ef)))
    # v3: substitute the homotopy equation for D_{g^-}-> e^f
    term_g_plus = left_action(gplus, ef)
    term_mid = left_action(hplus, ef.odot(gw)) if g else TensorWord.zero(table)
    term_last = right_action(hminus, gw.odot(ef)) if g else TensorWord.zero(table)
    v3 = pz(left_word_action(a, term_g_plus + term_mid - term_last))
    # v4: commute the a-action inside each term
    dga = coderivation(gplus, a)
    da = coderivation(hplus, a)
    t1 = pz(left_word_action(dga, ef))
    t2 = pz(left_word_action(da, ef.odot(gw))) if g else Fraction(0)
    t3 = pz(right_action(hminus, left_word_action(a, gw.odot(ef)))) if g \
        else Fraction(0)
    v4 = t1 + t2 - t3
    # v5: pi Phi(D_{g^+}(a))
    v5 = apply_morphism(handle, dga).scalar_coefficient()
    # v6: Phi(pi(D_{g^+}(a))) = the scalar itself
    v6 = dga.scalar_coefficient()
    values = [v1, v2, v3, v4, v5, v6]
    return {"values": values, "all_equal_unit": all(v == 1 for v in values)}
