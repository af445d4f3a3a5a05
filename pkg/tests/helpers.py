"""Shared random generators and independent oracles for the test suite.

Everything is driven by seeded random.Random streams so consecutive runs are
byte-identical.
"""

import random
from fractions import Fraction

from rsft.core import AlgElement, bracket, mon_degree
from rsft.tables import Generator, GeneratorTable


def random_table(rng, n_gens=None, N=None, with_t=False):
    if N is None:
        N = rng.choice([-1, 0, 0, 1])
    if n_gens is None:
        n_gens = rng.randint(2, 4)
    gens = []
    for i in range(n_gens):
        qdeg = rng.randint(-3, 3)
        kappa = rng.choice([1, 1, 2, 3])
        gens.append(Generator(f"g{i}", qdeg, kappa))
    tvars = []
    if with_t:
        tvars = [("t1", rng.randint(-2, 3))]
    return GeneratorTable(N, gens, tvars)


def random_monomial(rng, table, max_letters=3, sides=("",), kinds=("q", "p"),
                    with_t=False):
    letters = []
    n = rng.randint(0, max_letters)
    pool = []
    for g in table.generators:
        for kind in kinds:
            for side in sides:
                pool.append((kind, g.name, side))
    if with_t:
        for name, _d in table.tvars:
            pool.append(("t", name, ""))
    for _ in range(n):
        letters.append(rng.choice(pool))
    counts = {}
    for v in letters:
        counts[v] = counts.get(v, 0) + 1
    mon = []
    for v in sorted(counts, key=table.var_key):
        e = counts[v]
        if table.var_parity(v):
            e = 1
        mon.append((v, e))
    return tuple(mon)


def random_homogeneous(rng, table, max_terms=3, max_letters=3, sides=("",),
                       kinds=("q", "p"), with_t=False, coeff_range=3):
    """Random homogeneous element: sample monomials, keep one degree class."""
    mons = [random_monomial(rng, table, max_letters, sides, kinds, with_t)
            for _ in range(max_terms * 3)]
    by_deg = {}
    for m in mons:
        by_deg.setdefault(mon_degree(table, m), []).append(m)
    degree = rng.choice(sorted(by_deg))
    chosen = []
    for m in by_deg[degree]:
        if m not in chosen:
            chosen.append(m)
        if len(chosen) == max_terms:
            break
    pairs = []
    for m in chosen:
        c = rng.randint(-coeff_range, coeff_range)
        pairs.append((m, Fraction(c)))
    return AlgElement.from_terms(table, pairs)


def brackets_to_zero(table, *elements):
    return all(bracket(a, b).is_zero() for a in elements for b in elements)


def expand_product_oracle(x, y):
    """Distributivity oracle: multiply term by term via fresh one-term
    elements, summing the results (independent of the product's own loop)."""
    table = x.table
    out = AlgElement.zero(table)
    for m1, c1 in x.terms.items():
        for m2, c2 in y.terms.items():
            a = AlgElement(table, {m1: c1})
            b = AlgElement(table, {m2: c2})
            out = out + a * b
    return out


def leibniz_rhs(f, g, h):
    """bracket(f, g*h) expanded by the graded Leibniz rule."""
    N2 = 2 * f.table.N
    sign = -1 if ((f.degree() - N2) & 1) and (g.degree() & 1) else 1
    return bracket(f, g) * h + (g * bracket(f, h)).scale(sign)


def jacobi_defect(f, g, h):
    sign = -1 if (f.degree() & 1) and (g.degree() & 1) else 1
    lhs = bracket(f, bracket(g, h))
    rhs = bracket(bracket(f, g), h) + bracket(g, bracket(f, h)).scale(sign)
    return lhs - rhs
