"""The symmetric coalgebra on shifted algebra elements.

Words are canonically sorted tuples of nonscalar monomials; a factor equal to
a scalar is absorbed into the coefficient, so the coalgebra unit 1l is the
empty word.  Koszul signs for reordering factors use the unshifted monomial
degrees (the 2N shift is even).  Word degree is bookkept as

    wdeg(w_1 ... w_k) = sum |w_i| - 2N (k - 1),      wdeg(1l) = 0,

which the scalar absorption preserves and under which every coderivation
D_h shifts degree by |h| - 2N.
"""

from fractions import Fraction
from itertools import combinations

from . import trunc
from .core import (AlgElement, INHOMOGENEOUS, bracket, mon_count, mon_degree,
                   mon_sort_key)
from .errors import (ContextMismatch, DegreeMismatch, MasterEquationFails,
                     NotOverline, RsftError)
from .scalars import scalar_is_zero


def _normalize_word(table, factors):
    """Sort monomial factors, absorbing scalars; (sign, word) or None."""
    mons = [m for m in factors if m]
    sign = 1
    # parity inversion count relative to the original order, scalars removed
    pars = [mon_degree(table, m) & 1 for m in mons]
    keys = [mon_sort_key(table, m) for m in mons]
    n = len(mons)
    for i in range(n):
        for j in range(i + 1, n):
            if keys[i] > keys[j]:
                if pars[i] and pars[j]:
                    sign = -sign
            elif keys[i] == keys[j] and pars[i]:
                return None  # repeated odd factor
    order = sorted(range(n), key=lambda i: (keys[i], i))
    return sign, tuple(mons[i] for i in order)


def _merge_words(table, w1, w2):
    """Merge two canonically sorted words: (sign, word) or None.

    Equal sort keys mean equal monomials; two equal odd factors kill the
    word, equal even factors simply repeat.
    """
    if not w1:
        return 1, w2
    if not w2:
        return 1, w1
    k1 = [mon_sort_key(table, m) for m in w1]
    k2 = [mon_sort_key(table, m) for m in w2]
    p1 = [mon_degree(table, m) & 1 for m in w1]
    p2 = [mon_degree(table, m) & 1 for m in w2]
    odd_suffix = [0] * (len(w1) + 1)
    for i in range(len(w1) - 1, -1, -1):
        odd_suffix[i] = odd_suffix[i + 1] + p1[i]
    out = []
    sign = 1
    i = j = 0
    while i < len(w1) and j < len(w2):
        if k1[i] < k2[j]:
            out.append(w1[i])
            i += 1
        elif k1[i] > k2[j]:
            if p2[j] and (odd_suffix[i] & 1):
                sign = -sign
            out.append(w2[j])
            j += 1
        else:
            if p1[i]:
                return None
            out.append(w1[i])
            i += 1
    out.extend(w1[i:])
    out.extend(w2[j:])
    return sign, tuple(out)


class TensorWord:
    """Sparse sum of symmetric words: dict word-tuple -> scalar."""

    __slots__ = ("table", "words")

    def __init__(self, table, words):
        self.table = table
        self.words = words

    @classmethod
    def zero(cls, table):
        return cls(table, {})

    @classmethod
    def unit(cls, table, c=1):
        c = table.coeff(c)
        return cls(table, {} if scalar_is_zero(c) else {(): c})

    @classmethod
    def from_factors(cls, table, factors, coeff=1):
        """Multilinear expansion of a product of AlgElement factors."""
        coeff = table.coeff(coeff)
        if scalar_is_zero(coeff):
            return cls.zero(table)
        acc = {(): coeff}
        for f in factors:
            if isinstance(f, AlgElement):
                items = list(f.terms.items())
            else:  # a bare monomial
                items = [(f, table.coeff(1))]
            new = {}
            for word, c in acc.items():
                for m, cf in items:
                    if m:
                        merged = _merge_words(table, word, (m,))
                        if merged is None:
                            continue
                        sign, nw = merged
                    else:
                        sign, nw = 1, word
                    v = c * cf
                    if sign < 0:
                        v = -v
                    prev = new.get(nw)
                    v = v if prev is None else prev + v
                    if scalar_is_zero(v):
                        new.pop(nw, None)
                    else:
                        new[nw] = v
            acc = new
            if not acc:
                break
        return cls(table, acc)

    # -- linear structure ---------------------------------------------------

    def _check(self, other):
        if self.table is not other.table:
            raise ContextMismatch("words over different generator tables")

    def __add__(self, other):
        self._check(other)
        acc = dict(self.words)
        for w, c in other.words.items():
            prev = acc.get(w)
            s = c if prev is None else prev + c
            if scalar_is_zero(s):
                acc.pop(w, None)
            else:
                acc[w] = s
        return TensorWord(self.table, acc)

    def __neg__(self):
        return TensorWord(self.table, {w: -c for w, c in self.words.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = self.table.coeff(c)
        if scalar_is_zero(c):
            return TensorWord.zero(self.table)
        acc = {}
        for w, v in self.words.items():
            s = v * c
            if not scalar_is_zero(s):
                acc[w] = s
        return TensorWord(self.table, acc)

    def is_zero(self):
        return not self.words

    def __bool__(self):
        return bool(self.words)

    def __eq__(self, other):
        if not isinstance(other, TensorWord):
            return NotImplemented
        return self.table is other.table and self.words == other.words

    def __repr__(self):
        from .expr import format_tensor_word
        body = " ; ".join(format_tensor_word(self)) or "0"
        return f"<[{body}]>"

    # -- coalgebra/algebra structure ------------------------------------------

    def odot(self, other):
        """Symmetric product of word sums."""
        self._check(other)
        out = {}
        table = self.table
        for w1, c1 in self.words.items():
            for w2, c2 in other.words.items():
                norm = _merge_words(table, w1, w2)
                if norm is None:
                    continue
                sign, word = norm
                c = c1 * c2
                if sign < 0:
                    c = -c
                prev = out.get(word)
                c = c if prev is None else prev + c
                if scalar_is_zero(c):
                    out.pop(word, None)
                else:
                    out[word] = c
        return TensorWord(table, out)

    def truncate_words(self, max_len):
        """Drop words longer than max_len, noting the truncation."""
        if max_len is None:
            return self
        acc = {}
        for w, c in self.words.items():
            if len(w) > max_len:
                trunc.note("words")
            else:
                acc[w] = c
        return TensorWord(self.table, acc)

    def max_word_len(self):
        return max((len(w) for w in self.words), default=0)

    def restrict_zero(self, kind, side=None):
        """Set the given variables to zero (kills any word carrying one)."""
        acc = {}
        for w, c in self.words.items():
            if any(mon_count(m, kind, side) for m in w):
                continue
            acc[w] = c
        return TensorWord(self.table, acc)

    def filter_words(self, pred):
        return TensorWord(self.table,
                          {w: c for w, c in self.words.items() if pred(w)})

    def length_part(self, k):
        return self.filter_words(lambda w: len(w) == k)

    def s1_as_element(self, include_scalar=True):
        """The S^1 component as an algebra element (absorbed scalars count
        as the Lambda part of S^1 under the unit identification)."""
        pairs = []
        for w, c in self.words.items():
            if len(w) == 1:
                pairs.append((w[0], c))
            elif not w and include_scalar:
                pairs.append(((), c))
        return AlgElement.from_terms(self.table, pairs)

    def scalar_coefficient(self):
        return self.words.get((), self.table.coeff(0))

    def wdeg_components(self):
        acc = {}
        for w, c in self.words.items():
            acc.setdefault(word_degree(self.table, w), {})[w] = c
        return {d: TensorWord(self.table, ws) for d, ws in sorted(acc.items())}

    def filtration_level(self):
        from .scalars import filtration_level as slevel
        levels = [slevel(c) for c in self.words.values()]
        levels = [l for l in levels if l is not None]
        return min(levels) if levels else None


def word_degree(table, word):
    """wdeg as in the module docstring; the empty word sits in degree 0."""
    if not word:
        return 0
    return sum(mon_degree(table, m) for m in word) - 2 * table.N * (len(word) - 1)


def word_power(x, n, scaled=True):
    """x^{(.)n} as a word sum, divided by n! when scaled (default)."""
    table = x.table
    out = TensorWord.unit(table)
    xw = TensorWord.from_factors(table, [x])
    for k in range(1, n + 1):
        out = out.odot(xw)
        if scaled:
            out = out.scale(Fraction(1, k))
    return out


def unshuffle_sign(parities, chosen):
    """Koszul sign for moving the chosen positions to the front."""
    sign = 1
    chosen_set = set(chosen)
    for a in chosen:
        if not parities[a]:
            continue
        for b in range(a):
            if b not in chosen_set and parities[b]:
                sign = -sign
    return sign


def unshuffle_sign_back(parities, chosen):
    """Koszul sign for moving the chosen positions to the back."""
    sign = 1
    chosen_set = set(chosen)
    for a in chosen:
        if not parities[a]:
            continue
        for b in range(a + 1, len(parities)):
            if b not in chosen_set and parities[b]:
                sign = -sign
    return sign


# ---------------------------------------------------------------------------
# iterated brackets and the coderivation
# ---------------------------------------------------------------------------

def arrow_apply(h, ws):
    """->h^r(w_1 ... w_r) = {...{h^r, w_1}, ...}, w_r} with r = len(ws)."""
    r = len(ws)
    acc = h.p_part(r)
    for w in ws:
        if acc.is_zero():
            break
        if isinstance(w, tuple):
            w = AlgElement(h.table, {w: h.table.coeff(1)})
        acc = bracket(acc, w)
    return acc


def _mon_element(table, m):
    return AlgElement(table, {m: table.coeff(1)})


def coderivation(h, x, components=None):
    """D_h on a word sum, extending the iterated brackets as a coderivation.

    components may pre-split h by p-degree ({r: h^r}) to save recomputation.
    """
    table = x.table
    if h.degree() is INHOMOGENEOUS:
        from .errors import InhomogeneousInput
        raise InhomogeneousInput("coderivation needs a homogeneous element")
    if components is None:
        components = split_p_components(h)
    out = TensorWord.zero(table)
    for word, coeff in x.words.items():
        n = len(word)
        if n == 0:
            continue
        pars = [mon_degree(table, m) & 1 for m in word]
        for r, hr in components.items():
            if r > n:
                continue
            for chosen in combinations(range(n), r):
                sign = unshuffle_sign(pars, chosen)
                val = hr
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


def split_p_components(h):
    """{r: p-degree-r part of h} for r >= 1, omitting zero parts."""
    comps = {}
    for r in range(1, h.max_p_degree() + 1):
        hr = h.p_part(r)
        if not hr.is_zero():
            comps[r] = hr
    return comps


def coderivation_component(h, r, x):
    """The single D^r_h component (one unshuffle arity)."""
    hr = h.p_part(r)
    if hr.is_zero():
        return TensorWord.zero(x.table)
    return coderivation(h, x, components={r: hr})


# ---------------------------------------------------------------------------
# master equation, contact differential
# ---------------------------------------------------------------------------

def check_master(h):
    """True iff {h,h} = 0 (up to the carried truncations).

    Requires h homogeneous of degree 2N-1 in the overline ideal.
    """
    if h.is_zero():
        return True
    d = h.degree()
    if d is INHOMOGENEOUS or d != 2 * h.table.N - 1:
        raise DegreeMismatch("master equation needs degree 2N-1")
    if not h.in_overline():
        raise NotOverline("master equation input must vanish at p=0")
    return bracket(h, h).is_zero()


def check_commutator_lemma(h, g, samples):
    """D_h D_g - (-1)^{|h||g|} D_g D_h = D_{h,g} on every sample word."""
    if h.is_zero() or g.is_zero():
        sign = 1
    else:
        sign = -1 if (h.degree() & 1) and (g.degree() & 1) else 1
    hg = bracket(h, g)
    for x in samples:
        lhs = coderivation(h, coderivation(g, x))
        rhs_comm = coderivation(g, coderivation(h, x))
        lhs = lhs - rhs_comm.scale(sign)
        if not (lhs - coderivation(hg, x)).is_zero():
            return False
    return True


def contact_differential(h, x):
    """D^1(x) = {h^1, x}: the genus-zero contact-homology differential."""
    if not check_master(h):
        raise MasterEquationFails("contact differential needs {h,h} = 0")
    return arrow_apply(h, [x])


def exp_word(x, max_len):
    """e^x = sum x^{(.)k} / k! truncated at word length max_len.

    The scalar part of x exponentiates into the coefficient; over the
    rational ring it must vanish, over Novikov it must have positive
    filtration (the series then terminates below the energy cutoff).
    """
    table = x.table
    x0 = x.scalar_part()
    xplus = x.filter_terms(lambda m: bool(m))
    if scalar_is_zero(x0):
        unit_c = table.coeff(1)
    else:
        if table.ring != "novikov":
            raise RsftError("exp of an element with scalar part needs a "
                            "filtered (novikov) ring")
        level = x0.filtration_level()
        if level is None or level <= 0:
            raise RsftError("exp needs positive filtration on the scalar part")
        unit_c = table.coeff(1)
        power = table.coeff(1)
        k = 1
        while True:
            power = power * x0 * Fraction(1, k)
            if scalar_is_zero(power):
                break
            unit_c = unit_c + power
            k += 1
    out = TensorWord.unit(table, unit_c)
    xw = TensorWord.from_factors(table, [xplus])
    power = TensorWord.unit(table, unit_c)
    for k in range(1, max_len + 1):
        power = power.odot(xw).scale(Fraction(1, k))
        if power.is_zero():
            break
        out = out + power
    else:
        if not power.odot(xw).is_zero():
            trunc.note("words")
    return out


# ---------------------------------------------------------------------------
# homology in a finite window
# ---------------------------------------------------------------------------

def enumerate_q_monomials(table, max_len, side="", min_len=0, allow=None):
    """All q-monomials (given side) with min_len <= total exponent <= max_len,
    in canonical order."""
    gens = [g for g in table.generators
            if allow is None or g.name in allow]
    out = []

    def rec(idx, remaining, acc):
        if idx == len(gens):
            if len(acc) or min_len == 0:
                total = sum(e for _v, e in acc)
                if total >= min_len:
                    out.append(tuple(acc))
            return
        g = gens[idx]
        var = ("q", g.name, side)
        limit = 1 if (table.qdeg(g.name) & 1) else remaining
        rec(idx + 1, remaining, acc)
        for e in range(1, limit + 1):
            rec(idx + 1, remaining - e, acc + [(var, e)])

    rec(0, max_len, [])
    uniq = {}
    for m in out:
        total = sum(e for _v, e in m)
        if min_len <= total <= max_len:
            uniq[m] = True
    return sorted(uniq, key=lambda m: mon_sort_key(table, m))


def enumerate_words(table, k_max, qlen_max, side="", degree_pred=None):
    """Multiset words of nonempty q-monomials within the bounds."""
    mons = enumerate_q_monomials(table, qlen_max, side=side, min_len=1)
    pars = {m: mon_degree(table, m) & 1 for m in mons}
    qlen = {m: sum(e for _v, e in m) for m in mons}
    words = []

    def rec(start, length, budget, acc):
        if acc:
            words.append(tuple(acc))
        if length == k_max:
            return
        for i in range(start, len(mons)):
            m = mons[i]
            if qlen[m] > budget:
                continue
            if acc and acc[-1] == m and pars[m]:
                continue  # odd square
            if acc and mon_sort_key(table, m) < mon_sort_key(table, acc[-1]):
                continue
            rec(i, length + 1, budget - qlen[m], acc + [m])

    rec(0, 0, qlen_max, [])
    if degree_pred is not None:
        words = [w for w in words if degree_pred(word_degree(table, w))]
    return words


def homology_window(h, kind, degree_window, k_max=4, qlen_max=6, side=""):
    """Betti numbers over Q of D_h (kind='words') or D^1 (kind='contact')
    on the span of bounded words/monomials with degrees inside the window.

    Returns {'betti': {degree: n}, 'dims': {...}, 'honest': {degree: bool},
    'window_closed': bool}.  A degree is honest when the incoming
    differential from degree+1 stays inside the window basis.
    """
    from .linalg import rank
    table = h.table
    if table.ring != "rational":
        raise RsftError("homology windows are computed over Q only")
    lo, hi = degree_window
    if kind == "contact":
        if not check_master(h):
            raise MasterEquationFails("contact homology needs {h,h} = 0")
        basis = [m for m in enumerate_q_monomials(table, qlen_max, side=side)
                 if lo <= mon_degree(table, m) <= hi]
        deg_of = lambda m: mon_degree(table, m)

        def image_of(m):
            val = arrow_apply(h, [_mon_element(table, m)])
            return {mm: c for mm, c in val.terms.items()}
    elif kind == "words":
        comps = split_p_components(h)
        basis = [w for w in enumerate_words(table, k_max, qlen_max, side=side)
                 if lo <= word_degree(table, w) <= hi]
        basis = [()] + basis if lo <= 0 <= hi else basis
        deg_of = lambda w: word_degree(table, w)

        def image_of(w):
            val = coderivation(h, TensorWord(table, {w: table.coeff(1)}),
                               components=comps)
            return dict(val.words)
    else:
        raise RsftError(f"unknown homology kind {kind!r}")

    by_deg = {}
    for b in basis:
        by_deg.setdefault(deg_of(b), []).append(b)
    basis_set = set(basis)
    images = {b: image_of(b) for b in basis}
    escaped = {d: False for d in by_deg}
    for b in basis:
        if any(out not in basis_set for out in images[b]):
            escaped[deg_of(b)] = True

    def matrix_rank(d):
        cols = by_deg.get(d, [])
        if not cols:
            return 0
        rows = sorted({out for c in cols for out in images[c]},
                      key=lambda w: repr(w))
        idx = {r: i for i, r in enumerate(rows)}
        mat = [[Fraction(0)] * len(cols) for _ in rows]
        for j, c in enumerate(cols):
            for out, val in images[c].items():
                mat[idx[out]][j] = val
        return rank(mat)

    ranks = {d: matrix_rank(d) for d in by_deg}
    betti = {}
    honest = {}
    for d in sorted(by_deg):
        dim = len(by_deg[d])
        r_out = ranks.get(d, 0)
        r_in = ranks.get(d + 1, 0)
        betti[d] = dim - r_out - r_in
        honest[d] = not escaped.get(d + 1, False) and not escaped.get(d, False)
    return {
        "betti": betti,
        "dims": {d: len(bs) for d, bs in sorted(by_deg.items())},
        "honest": honest,
        "window_closed": not any(escaped.values()),
    }
