"""Exact graded supercommutative algebra of q/p/t variables.

Monomials are sorted tuples of ((kind, name, side), exponent) in the table's
canonical variable order; odd variables carry exponent at most one.  Elements
are sparse maps monomial -> scalar with no stored zeros.  All signs are
Koszul signs relative to the canonical order, computed from the unshifted
variable degrees.

The Poisson bracket pairs p- and q-variables of equal name and side:

    {f,g} = sum_gamma kappa_gamma ( R_{p} f * L_{q} g
                                    - (-1)^{|p||q|} R_{q} f * L_{p} g )

with R the right and L the left graded partial derivative.  This is the
unique biderivation with {p_gamma, q_gamma} = kappa_gamma, pairwise
commuting p's and q's, graded antisymmetry and graded Jacobi; the test suite
enforces all of these axioms.
"""

from fractions import Fraction

from . import trunc
from .errors import ContextMismatch, InhomogeneousInput, OddPowerViolation, RsftError
from .scalars import filtration_level as _scalar_level
from .scalars import scalar_is_zero

INHOMOGENEOUS = object()


# ---------------------------------------------------------------------------
# monomial helpers
# ---------------------------------------------------------------------------

def _mon_info(table, mon):
    info = table._mon_cache.get(mon)
    if info is None:
        degree = 0
        key = []
        for v, e in mon:
            vd, vk = table._var_info(v)
            degree += vd * e
            key.append((vk, e))
        info = (degree, tuple(key))
        table._mon_cache[mon] = info
    return info


def mon_degree(table, mon):
    return _mon_info(table, mon)[0]


def mon_parity(table, mon):
    return _mon_info(table, mon)[0] & 1


def mon_count(mon, kind, side=None):
    """Total exponent of variables of the given kind (optionally one side)."""
    n = 0
    for (k, _name, s), e in mon:
        if k == kind and (side is None or s == side):
            n += e
    return n


def mon_has(mon, kind, side=None):
    return mon_count(mon, kind, side) > 0


def mon_mul(table, m1, m2):
    """Product of two canonical monomials: (sign, monomial) or None if an
    odd variable squares to zero."""
    if not m1:
        return 1, m2
    if not m2:
        return 1, m1
    key = table.var_key
    par = table.var_parity
    odd_suffix = [0] * (len(m1) + 1)
    for k in range(len(m1) - 1, -1, -1):
        v, e = m1[k]
        odd_suffix[k] = odd_suffix[k + 1] + (par(v) * e)
    out = []
    sign = 1
    i = j = 0
    while i < len(m1) and j < len(m2):
        v1, e1 = m1[i]
        v2, e2 = m2[j]
        k1, k2 = key(v1), key(v2)
        if k1 < k2:
            out.append((v1, e1))
            i += 1
        elif k1 > k2:
            if par(v2) and (odd_suffix[i] & 1):
                sign = -sign
            out.append((v2, e2))
            j += 1
        else:
            if par(v1):
                return None
            out.append((v1, e1 + e2))
            i += 1
            j += 1
    out.extend(m1[i:])
    out.extend(m2[j:])
    return sign, tuple(out)


def _mon_find(table, mon, var):
    k = table.var_key(var)
    for idx, (v, _e) in enumerate(mon):
        if table.var_key(v) == k:
            return idx
    return None


def mon_lpartial(table, mon, var):
    """Left derivative: move var to the front, then differentiate.

    Returns (integer coefficient with sign, monomial) or None.
    """
    idx = _mon_find(table, mon, var)
    if idx is None:
        return None
    e = mon[idx][1]
    coeff = e
    if table.var_parity(var):
        before = sum(table.var_parity(v) * ee for v, ee in mon[:idx])
        if before & 1:
            coeff = -coeff
    rest = mon[:idx] + ((mon[idx][0], e - 1),) * (e > 1) + mon[idx + 1:]
    return coeff, rest


def mon_rpartial(table, mon, var):
    """Right derivative: move var to the end, then differentiate."""
    idx = _mon_find(table, mon, var)
    if idx is None:
        return None
    e = mon[idx][1]
    coeff = e
    if table.var_parity(var):
        after = sum(table.var_parity(v) * ee for v, ee in mon[idx + 1:])
        if after & 1:
            coeff = -coeff
    rest = mon[:idx] + ((mon[idx][0], e - 1),) * (e > 1) + mon[idx + 1:]
    return coeff, rest


def mon_sort_key(table, mon):
    return _mon_info(table, mon)[1]


# ---------------------------------------------------------------------------
# elements
# ---------------------------------------------------------------------------

class AlgElement:
    """Sparse exact element of the graded algebra over a generator table.

    tag is optional context metadata ('A', 'P', 'L', 'L0', possibly with a
    side suffix); binary operations require equal tags when both are set.
    pmax is the maximal stored total p-degree (None = unbounded); products
    exceeding it are dropped and the truncation is noted.
    """

    __slots__ = ("table", "terms", "pmax", "tag")

    def __init__(self, table, terms, pmax=None, tag=None):
        self.table = table
        self.terms = terms
        self.pmax = pmax
        self.tag = tag

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, table, pmax=None, tag=None):
        return cls(table, {}, pmax, tag)

    @classmethod
    def scalar(cls, table, c, pmax=None, tag=None):
        c = table.coeff(c)
        if scalar_is_zero(c):
            return cls.zero(table, pmax, tag)
        return cls(table, {(): c}, pmax, tag)

    @classmethod
    def variable(cls, table, var, power=1, pmax=None, tag=None):
        table.var_key(var)  # validates
        if power == 0:
            return cls.scalar(table, 1, pmax, tag)
        if table.var_parity(var) and power > 1:
            raise OddPowerViolation(f"odd variable {var} cannot carry power {power}")
        return cls(table, {((var, power),): table.coeff(1)}, pmax, tag)

    @classmethod
    def from_terms(cls, table, pairs, pmax=None, tag=None):
        """pairs: iterable of (monomial, coefficient); normalizes zeros."""
        acc = {}
        for mon, c in pairs:
            c = table.coeff(c)
            if scalar_is_zero(c):
                continue
            prev = acc.get(mon)
            c = c if prev is None else prev + c
            if scalar_is_zero(c):
                acc.pop(mon, None)
            else:
                acc[mon] = c
        return cls(table, acc, pmax, tag)

    # -- bookkeeping --------------------------------------------------------

    def _join_meta(self, other):
        if self.table is not other.table:
            raise ContextMismatch("elements live over different generator tables")
        if self.tag is not None and other.tag is not None and self.tag != other.tag:
            raise ContextMismatch(f"context tags differ: {self.tag} vs {other.tag}")
        tag = self.tag if self.tag is not None else other.tag
        if self.pmax is None:
            pmax = other.pmax
        elif other.pmax is None:
            pmax = self.pmax
        else:
            pmax = min(self.pmax, other.pmax)
        return pmax, tag

    def with_pmax(self, pmax):
        return AlgElement(self.table, self.terms, pmax, self.tag)

    def with_tag(self, tag):
        return AlgElement(self.table, self.terms, self.pmax, tag)

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, AlgElement):
            return NotImplemented
        return self.table is other.table and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    # -- linear structure ----------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, AlgElement):
            return NotImplemented
        pmax, tag = self._join_meta(other)
        acc = dict(self.terms)
        for mon, c in other.terms.items():
            prev = acc.get(mon)
            s = c if prev is None else prev + c
            if scalar_is_zero(s):
                acc.pop(mon, None)
            else:
                acc[mon] = s
        return AlgElement(self.table, acc, pmax, tag)

    def __neg__(self):
        return AlgElement(self.table, {m: -c for m, c in self.terms.items()},
                          self.pmax, self.tag)

    def __sub__(self, other):
        if not isinstance(other, AlgElement):
            return NotImplemented
        return self + (-other)

    def scale(self, c):
        c = self.table.coeff(c)
        if scalar_is_zero(c):
            return AlgElement.zero(self.table, self.pmax, self.tag)
        acc = {}
        for mon, v in self.terms.items():
            s = v * c
            if not scalar_is_zero(s):
                acc[mon] = s
        return AlgElement(self.table, acc, self.pmax, self.tag)

    def __rmul__(self, c):
        if isinstance(c, (int, Fraction)):
            return self.scale(c)
        return NotImplemented

    # -- graded product -------------------------------------------------------

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, AlgElement):
            return NotImplemented
        pmax, tag = self._join_meta(other)
        table = self.table
        acc = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                sm = mon_mul(table, m1, m2)
                if sm is None:
                    continue
                sign, mon = sm
                if pmax is not None and mon_count(mon, "p") > pmax:
                    trunc.note("pmax")
                    continue
                c = c1 * c2
                if sign < 0:
                    c = -c
                prev = acc.get(mon)
                c = c if prev is None else prev + c
                if scalar_is_zero(c):
                    acc.pop(mon, None)
                else:
                    acc[mon] = c
        return AlgElement(table, acc, pmax, tag)

    # -- degrees and memberships ----------------------------------------------

    def degree(self):
        """Common degree of all terms, None for zero, INHOMOGENEOUS else."""
        if not self.terms:
            return None
        degs = {mon_degree(self.table, m) for m in self.terms}
        if len(degs) == 1:
            return degs.pop()
        return INHOMOGENEOUS

    def is_homogeneous(self):
        return self.degree() is not INHOMOGENEOUS

    def degree_components(self):
        """Split into homogeneous pieces, sorted by degree."""
        acc = {}
        for mon, c in self.terms.items():
            acc.setdefault(mon_degree(self.table, mon), {})[mon] = c
        return [AlgElement(self.table, acc[d], self.pmax, self.tag)
                for d in sorted(acc)]

    def in_overline(self, side=None):
        """h|_{p=0} = 0: every term carries a p-variable (of the side)."""
        return all(mon_has(m, "p", side) for m in self.terms)

    def in_underline(self, side=None):
        return all(mon_has(m, "q", side) for m in self.terms)

    def in_hat(self, side=None):
        return self.in_overline(side) and self.in_underline(side)

    def scalar_part(self):
        return self.terms.get((), self.table.coeff(0))

    def filtration_level(self):
        """Minimal coefficient valuation across terms; None for zero."""
        levels = [_scalar_level(c) for c in self.terms.values()]
        levels = [l for l in levels if l is not None]
        return min(levels) if levels else None

    # -- extraction -------------------------------------------------------------

    def filter_terms(self, pred):
        return AlgElement(self.table,
                          {m: c for m, c in self.terms.items() if pred(m)},
                          self.pmax, self.tag)

    def extract_bidegree(self, r, s):
        """Terms of total p-exponent r and total q-exponent s."""
        return self.filter_terms(
            lambda m: mon_count(m, "p") == r and mon_count(m, "q") == s)

    def p_part(self, r, side=None):
        return self.filter_terms(lambda m: mon_count(m, "p", side) == r)

    def q_part(self, s, side=None):
        return self.filter_terms(lambda m: mon_count(m, "q", side) == s)

    def set_to_zero(self, kind, side=None):
        """Restriction kind=0: drop every term containing such a variable."""
        return self.filter_terms(lambda m: not mon_has(m, kind, side))

    def max_p_degree(self, side=None):
        return max((mon_count(m, "p", side) for m in self.terms), default=0)

    def max_q_degree(self, side=None):
        return max((mon_count(m, "q", side) for m in self.terms), default=0)

    def extract_t_part(self, tmon):
        """Coefficient of the exact t-monomial: an element free of t's.

        Convention h = sum_T T * g_T, so for odd t-content a Koszul sign
        appears when pulling the t's to the front of each term.
        """
        tmon = tuple(tmon)
        table = self.table
        tdeg = sum(table.var_degree(v) * e for v, e in tmon)
        out = {}
        for mon, c in self.terms.items():
            tpart = tuple((v, e) for v, e in mon if v[0] == "t")
            if tpart != tmon:
                continue
            rest = tuple((v, e) for v, e in mon if v[0] != "t")
            if (tdeg & 1) and (mon_degree(table, rest) & 1):
                c = -c
            out[rest] = c
        return AlgElement(table, out, self.pmax, None)

    def t_free(self):
        return self.filter_terms(lambda m: not mon_has(m, "t"))

    # -- derivatives ---------------------------------------------------------

    def lpartial(self, var):
        out = {}
        table = self.table
        for mon, c in self.terms.items():
            r = mon_lpartial(table, mon, var)
            if r is None:
                continue
            k, rest = r
            s = c * k
            prev = out.get(rest)
            s = s if prev is None else prev + s
            if scalar_is_zero(s):
                out.pop(rest, None)
            else:
                out[rest] = s
        return AlgElement(table, out, self.pmax, None)

    def rpartial(self, var):
        out = {}
        table = self.table
        for mon, c in self.terms.items():
            r = mon_rpartial(table, mon, var)
            if r is None:
                continue
            k, rest = r
            s = c * k
            prev = out.get(rest)
            s = s if prev is None else prev + s
            if scalar_is_zero(s):
                out.pop(rest, None)
            else:
                out[rest] = s
        return AlgElement(table, out, self.pmax, None)

    # -- misc -----------------------------------------------------------------

    def rename_variables(self, mapping):
        """Relabel variables (e.g. side changes); re-normalizes with signs.

        mapping: dict old_var -> new_var of equal degree.
        """
        table = self.table
        for old, new in mapping.items():
            if table.var_degree(old) != table.var_degree(new):
                raise RsftError(f"rename {old} -> {new} changes the degree")
        subs = {old: AlgElement.variable(table, new) for old, new in mapping.items()}
        return substitute(self, subs)

    def sorted_terms(self):
        return sorted(self.terms.items(),
                      key=lambda mc: mon_sort_key(self.table, mc[0]))

    def __repr__(self):
        from .expr import format_element
        return f"<{format_element(self)}>"


def rename_sides(x, side_map):
    """Relabel q/p variable sides, e.g. {'+': ''} or {'': '-'}."""
    mapping = {}
    for mon in x.terms:
        for (kind, name, side), _e in mon:
            if kind in ("q", "p") and side in side_map and side_map[side] != side:
                mapping[(kind, name, side)] = (kind, name, side_map[side])
    return x.rename_variables(mapping) if mapping else x


# ---------------------------------------------------------------------------
# bracket
# ---------------------------------------------------------------------------

def _require_homogeneous(x, what):
    if x.degree() is INHOMOGENEOUS:
        raise InhomogeneousInput(f"{what} must be homogeneous")


def bracket(f, g):
    """Graded Poisson bracket of degree -2N; see the module docstring."""
    if f.table is not g.table:
        raise ContextMismatch("bracket arguments over different tables")
    _require_homogeneous(f, "bracket argument")
    _require_homogeneous(g, "bracket argument")
    table = f.table
    pairs = set()
    for el in (f, g):
        for mon in el.terms:
            for (kind, name, side), _e in mon:
                if kind in ("q", "p"):
                    pairs.add((name, side))
    out = AlgElement.zero(table)
    for name, side in sorted(pairs, key=lambda ns: table.var_key(("q",) + ns)):
        pv = ("p", name, side)
        qv = ("q", name, side)
        kappa = table.kappa(name)
        a = f.rpartial(pv)
        if a:
            b = g.lpartial(qv)
            if b:
                out = out + (a * b).scale(kappa)
        a = f.rpartial(qv)
        if a:
            b = g.lpartial(pv)
            if b:
                term = (a * b).scale(kappa)
                if (table.qdeg(name) & 1) and (table.pdeg(name) & 1):
                    out = out + term
                else:
                    out = out - term
    return out


# ---------------------------------------------------------------------------
# substitution and Lagrangian restriction
# ---------------------------------------------------------------------------

def substitute(x, mapping):
    """Simultaneous graded substitution var -> element of the same degree.

    Each substituted value must have the degree of the variable it replaces,
    so Koszul reordering reduces to the ordinary graded product taken in the
    monomial's canonical letter order.
    """
    table = x.table
    for var, val in mapping.items():
        d = val.degree()
        if d is INHOMOGENEOUS or (d is not None and d != table.var_degree(var)):
            raise RsftError(f"substitution value for {var} must be homogeneous "
                            f"of degree {table.var_degree(var)}")
    out = AlgElement.zero(table, x.pmax)
    for mon, c in x.terms.items():
        acc = AlgElement(table, {(): c}, x.pmax, None)
        for var, e in mon:
            val = mapping.get(var)
            if val is None:
                acc = acc * AlgElement.variable(table, var, power=e, pmax=x.pmax)
            else:
                for _ in range(e):
                    acc = acc * val
            if acc.is_zero():
                break
        out = out + acc
    return out.with_tag(x.tag)


def lagrangian_mapping(table, f):
    """Substitution defining the graph L_f of a degree-2N element of L:
    p^-_gamma -> kappa * d f / d q^-_gamma (left derivative),
    q^+_gamma -> kappa * d f / d p^+_gamma (right derivative)."""
    mapping = {}
    for g in table.generators:
        kappa = g.kappa
        dm = f.lpartial(("q", g.name, "-")).scale(kappa)
        mapping[("p", g.name, "-")] = dm
        dp = f.rpartial(("p", g.name, "+")).scale(kappa)
        mapping[("q", g.name, "+")] = dp
    return mapping


def restrict_to_lagrangian(h, f):
    """h|_{L_f}: substitute every p^- and q^+ variable of h along L_f."""
    _require_homogeneous(h, "restricted element")
    d = f.degree()
    if d is not None and d != 2 * f.table.N:
        raise RsftError("Lagrangian-graph element must have degree 2N")
    return substitute(h, lagrangian_mapping(h.table, f))


def identity_potential(table, pmax=None):
    """i = sum 1/kappa q^-_gamma p^+_gamma, the identity morphism's element."""
    out = AlgElement.zero(table, pmax, tag="L")
    for g in table.generators:
        term = AlgElement.variable(table, ("q", g.name, "-"), pmax=pmax) * \
            AlgElement.variable(table, ("p", g.name, "+"), pmax=pmax)
        out = out + term.scale(Fraction(1, g.kappa)).with_tag("L")
    return out
