#!/usr/bin/env python3
"""Build the fixture zoo by brute-force coefficient search.

Every number in the shipped .ctx files is derived here: master elements by
quadratic coefficient search, chain-map potentials by scanning correction
pools, augmentations and Maurer-Cartan elements by direct verification.
Searches iterate in a fixed order, so reruns are byte-identical.

Usage: python scripts/build_fixtures.py [outdir]
"""

import itertools
import sys
from fractions import Fraction
from pathlib import Path

from rsft.context import ContextFile, parse_context
from rsft.coalgebra import check_master
from rsft.core import (AlgElement, bracket, identity_potential, rename_sides,
                       restrict_to_lagrangian)
from rsft.errors import RsftError
from rsft.invariants import SearchBounds, order
from rsft.linearize import check_hat
from rsft.mctwist import is_maurer_cartan
from rsft.morphism import check_chain_map
from rsft.scalars import NovikovPoly
from rsft.tables import Generator, GeneratorTable

OUT = Path(sys.argv[1]) if len(sys.argv) > 1 else \
    Path(__file__).resolve().parent.parent / "src" / "rsft" / "fixtures"


def mono(table, *letters):
    out = AlgElement.scalar(table, 1)
    for kind, name, side in letters:
        out = out * AlgElement.variable(table, (kind, name, side))
    return out


def lincomb(monomials, coeffs):
    out = None
    for m, c in zip(monomials, coeffs):
        if c == 0:
            continue
        term = m.scale(c)
        out = term if out is None else out + term
    if out is None:
        return monomials[0].scale(0)
    return out


def mon_pcount(m):
    return sum(e for (k, _n, _s), e in m if k == "p")


def mon_qcount(m):
    return sum(e for (k, _n, _s), e in m if k == "q")


def write_fixture(name, ctx):
    OUT.mkdir(parents=True, exist_ok=True)
    path = OUT / f"{name}.ctx"
    text = ctx.render()
    parse_context(text)  # round-trip sanity
    path.write_text(text, encoding="utf-8")
    print(f"wrote {path}")
    return path


# ---------------------------------------------------------------------------
# (a) trivial torsion context: h = p_x with |q_x| = 1
# ---------------------------------------------------------------------------

def build_trivial():
    table = GeneratorTable(0, [Generator("x", 1, 2)])
    h = AlgElement.variable(table, ("p", "x", "")).with_tag("P")
    assert check_master(h)
    ctx = ContextFile(table, {"h": h}, pmax=6)
    write_fixture("trivial_torsion", ctx)


# ---------------------------------------------------------------------------
# (b) hat master element by brute-force coefficient search, plus an order
#     input g with {h,g} = 0
# ---------------------------------------------------------------------------

def build_hat_master():
    table = GeneratorTable(0, [Generator("a", 1, 1), Generator("b", 2, 1),
                               Generator("c", 3, 2), Generator("d", 4, 1)])
    pool = [
        mono(table, ("p", "b", ""), ("q", "a", "")),
        mono(table, ("p", "c", ""), ("q", "b", "")),
        mono(table, ("p", "d", ""), ("q", "c", "")),
        mono(table, ("p", "d", ""), ("q", "a", ""), ("q", "b", "")),
        mono(table, ("p", "a", ""), ("p", "b", ""), ("q", "b", "")),
        mono(table, ("p", "a", ""), ("p", "d", ""), ("q", "d", "")),
        mono(table, ("p", "b", ""), ("p", "c", ""), ("q", "d", "")),
        mono(table, ("p", "a", ""), ("p", "c", ""), ("q", "c", "")),
        mono(table, ("p", "a", ""), ("p", "c", ""), ("q", "a", ""), ("q", "b", "")),
        mono(table, ("p", "b", ""), ("p", "b", ""), ("q", "c", "")),
        mono(table, ("p", "b", ""), ("p", "b", ""), ("q", "a", ""), ("q", "b", "")),
    ]
    for m in pool:
        assert m.degree() == -1, m
    n = len(pool)
    sym = {}
    for i in range(n):
        for j in range(i, n):
            b = bracket(pool[i], pool[j])
            if j > i:
                b = b + bracket(pool[j], pool[i])
            if not b.is_zero():
                sym[(i, j)] = b
    values = [-2, -1, 1, 2]
    best = None
    best_score = -1
    for size in (4, 5):
        for support in itertools.combinations(range(n), size):
            pairs = [(i, j) for (i, j) in sym
                     if i in support and j in support]
            for coeffs in itertools.product(values, repeat=size):
                cmap = dict(zip(support, coeffs))
                acc = None
                for (i, j) in pairs:
                    term = sym[(i, j)].scale(cmap[i] * cmap[j])
                    acc = term if acc is None else acc + term
                if acc is not None and not acc.is_zero():
                    continue
                full = [cmap.get(i, 0) for i in range(n)]
                h = lincomb(pool, full)
                if not check_hat(h) or h.extract_bidegree(1, 1).is_zero():
                    continue
                bidegs = {(mon_pcount(m), mon_qcount(m)) for m in h.terms}
                score = 4 * len(pairs) + 2 * len(bidegs) + size
                if score > best_score:
                    best_score = score
                    best = full
        if best is not None:
            break
    assert best is not None, "no hat master element found in the pool"
    h = lincomb(pool, best).with_tag("P")
    assert check_master(h) and check_hat(h)
    print(f"hat master coefficients: {best} (score {best_score})")

    g = find_order_input(table, h)
    elements = {"h": h}
    if g is not None:
        elements["g"] = g.with_tag("P")
    ctx = ContextFile(table, elements, pmax=6)
    write_fixture("hat_master", ctx)
    return table, h, g


def find_order_input(table, h):
    """Scan small pools per degree for g in overline-P with {h,g} = 0 and a
    Found order at desk bounds."""
    bounds = SearchBounds(k_max=3, qlen_max=5)
    candidates = []
    by_degree = {}
    for letters in itertools.chain(
            itertools.combinations_with_replacement(
                [("p", g.name, "") for g in table.generators], 1),
            itertools.combinations_with_replacement(
                [("p", g.name, "") for g in table.generators], 2)):
        try:
            m = mono(table, *letters)
        except RsftError:
            continue
        if m.is_zero():
            continue
        d = m.degree()
        by_degree.setdefault(d, [])
        if m not in by_degree[d]:
            by_degree[d].append(m)
    # allow mixed q-terms of matching degree to close the bracket
    for pm in [("p", g.name, "") for g in table.generators]:
        for qm in [("q", g.name, "") for g in table.generators]:
            m = mono(table, pm, qm)
            if m.is_zero():
                continue
            d = m.degree()
            by_degree.setdefault(d, [])
            if m not in by_degree[d]:
                by_degree[d].append(m)
    for d in sorted(by_degree):
        pool = by_degree[d]
        if len(pool) > 8:
            pool = pool[:8]
        hb = [bracket(h, m) for m in pool]
        for coeffs in itertools.product([-1, 0, 1, 2], repeat=len(pool)):
            if not any(coeffs):
                continue
            acc = None
            for c, b in zip(coeffs, hb):
                if c == 0:
                    continue
                term = b.scale(c)
                acc = term if acc is None else acc + term
            if acc is not None and not acc.is_zero():
                continue
            g = lincomb(pool, coeffs)
            if g.is_zero() or not g.in_overline():
                continue
            if g.degree() is None:
                continue
            try:
                res = order(h, g, bounds)
            except RsftError:
                continue
            if res.found:
                print(f"order input: degree {d}, coefficients {coeffs}, "
                      f"O = {res.value}")
                return g
    print("no order input with a Found result at desk bounds")
    return None


# ---------------------------------------------------------------------------
# (c) exact cobordism with torsion-finite ends and a nontrivial chain map
# ---------------------------------------------------------------------------

def build_exact_cobordism():
    # h = p_x p_y has torsion 1; the w-generator is h-decoupled, so chain
    # maps may carry arbitrary w-corrections and nontrivial higher phi's
    table = GeneratorTable(0, [Generator("x", 0, 1), Generator("y", 1, 2),
                               Generator("w", 0, 1)])
    h = mono(table, ("p", "x", ""), ("p", "y", ""))
    assert h.degree() == -1 and check_master(h)
    hp = rename_sides(h, {"": "+"}).with_tag("P+")
    hm = rename_sides(h, {"": "-"}).with_tag("P-")
    eps_pool = [
        mono(table, ("q", "w", "-"), ("q", "w", "-"), ("p", "w", "+")),
        mono(table, ("q", "w", "-"), ("q", "w", "-"), ("p", "w", "+"),
             ("p", "w", "+")),
        mono(table, ("q", "x", "-"), ("q", "x", "-"), ("p", "x", "+")),
        mono(table, ("q", "x", "-"), ("q", "w", "-"), ("p", "w", "+")),
    ]
    for m in eps_pool:
        assert m.degree() == 0, m
    diag_values = [Fraction(1), Fraction(2), Fraction(1, 2)]
    eps_values = [0, 1, -1, 2]
    best = None
    best_score = -1
    for sx in diag_values:
        for sy in diag_values:
            for sw in diag_values:
                diag = (mono(table, ("q", "x", "-"), ("p", "x", "+")).scale(sx)
                        + mono(table, ("q", "y", "-"), ("p", "y", "+"))
                        .scale(sy * Fraction(1, 2))
                        + mono(table, ("q", "w", "-"), ("p", "w", "+")).scale(sw))
                for coeffs in itertools.product(eps_values,
                                                repeat=len(eps_pool)):
                    f = diag + lincomb(eps_pool, [Fraction(c) for c in coeffs])
                    if not check_chain_map(f, hp, hm):
                        continue
                    nonzero = sum(1 for c in coeffs if c)
                    if (sx, sy, sw) == (1, 1, 1) and nonzero == 0:
                        continue
                    score = 2 * nonzero + (1 if (sx, sy) != (1, 1) else 0)
                    if score > best_score:
                        best_score = score
                        best = (sx, sy, sw, coeffs)
    assert best is not None, "no nontrivial exact chain map found"
    sx, sy, sw, coeffs = best
    print(f"exact cobordism: diag=({sx},{sy},{sw}) eps={coeffs} "
          f"(score {best_score})")
    f = (mono(table, ("q", "x", "-"), ("p", "x", "+")).scale(sx)
         + mono(table, ("q", "y", "-"), ("p", "y", "+")).scale(sy * Fraction(1, 2))
         + mono(table, ("q", "w", "-"), ("p", "w", "+")).scale(sw)
         + lincomb(eps_pool, [Fraction(c) for c in coeffs])).with_tag("L")
    assert check_chain_map(f, hp, hm)
    ctx = ContextFile(table, {"h_plus": hp, "h_minus": hm, "f": f}, pmax=6)
    write_fixture("exact_cobordism", ctx)


def build_hat_cobordism(table, h, g):
    """Cobordism data over the hat master: a nontrivial diagonal chain map
    whose restriction is also compatible with the order input g, so the
    homotopy witness equation holds with vanishing homotopy term."""
    hp = rename_sides(h, {"": "+"}).with_tag("P+")
    hm = rename_sides(h, {"": "-"}).with_tag("P-")
    gp = rename_sides(g, {"": "+"}).with_tag("P+") if g is not None else None
    gm = rename_sides(g, {"": "-"}).with_tag("P-") if g is not None else None
    diag_values = [Fraction(1), Fraction(2), Fraction(3), Fraction(1, 2)]
    best = None
    for svals in itertools.product(diag_values, repeat=len(table.generators)):
        if all(s == 1 for s in svals):
            continue
        f = None
        for gen, s in zip(table.generators, svals):
            term = mono(table, ("q", gen.name, "-"), ("p", gen.name, "+")) \
                .scale(s * Fraction(1, gen.kappa))
            f = term if f is None else f + term
        if not check_chain_map(f, hp, hm):
            continue
        if g is not None and restrict_to_lagrangian(gm, f) != \
                restrict_to_lagrangian(gp, f):
            continue
        best = (svals, f)
        break
    assert best is not None, "no diagonal hat cobordism found"
    svals, f = best
    print(f"hat cobordism: diag={tuple(str(s) for s in svals)}")
    elements = {"h_plus": hp, "h_minus": hm, "f": f.with_tag("L")}
    if g is not None:
        elements["g_plus"] = gp
        elements["g_minus"] = gm
    ctx = ContextFile(table, elements, pmax=6)
    write_fixture("hat_cobordism", ctx)


# ---------------------------------------------------------------------------
# (d) Novikov non-exact fixture with nonzero f0
# ---------------------------------------------------------------------------

def build_novikov():
    table = GeneratorTable(0, [Generator("x", 1, 1), Generator("y", 0, 2),
                               Generator("z", 0, 1)],
                           ring="novikov", energy=Fraction(2))
    h_pool = [
        AlgElement.variable(table, ("p", "x", "")),
        mono(table, ("p", "x", ""), ("p", "y", ""), ("q", "z", "")),
        mono(table, ("p", "x", ""), ("p", "z", ""), ("q", "z", "")),
        mono(table, ("p", "x", ""), ("p", "y", ""), ("q", "y", "")),
    ]
    lam12 = AlgElement.scalar(
        table, NovikovPoly.monomial(Fraction(1, 2), 1, table.energy))
    a_pool = [
        AlgElement.variable(table, ("q", "z", "")),
        AlgElement.variable(table, ("q", "y", "")),
        mono(table, ("q", "z", ""), ("q", "y", "")),
        mono(table, ("q", "z", ""), ("q", "z", "")),
    ]
    found = None
    for h_coeffs in itertools.product([0, 1], repeat=len(h_pool)):
        if h_coeffs[0] != 1:
            continue
        h = lincomb(h_pool, h_coeffs)
        if h.degree() != -1 or not h.in_overline():
            continue
        if not bracket(h, h).is_zero():
            continue
        hp = rename_sides(h, {"": "+"})
        hm = rename_sides(h, {"": "-"})
        # non-exact tail and diagonal rescale search
        for s in (Fraction(2), Fraction(3), Fraction(1)):
            for c in (1, 2):
                for tail_gen in ("z", "y"):
                    f = (mono(table, ("q", "x", "-"), ("p", "x", "+"))
                         + mono(table, ("q", "y", "-"), ("p", "y", "+"))
                         .scale(s * Fraction(1, 2))
                         + mono(table, ("q", "z", "-"), ("p", "z", "+")).scale(s)
                         + lam12.scale(c) * AlgElement.variable(
                             table, ("q", tail_gen, "-")))
                    if not check_chain_map(f, hp, hm):
                        continue
                    # Maurer-Cartan element with a nontrivial twist
                    for a_coeffs in itertools.product([0, 1], repeat=len(a_pool)):
                        if not any(a_coeffs):
                            continue
                        a = lam12 * lincomb(a_pool, a_coeffs)
                        if a.is_zero() or a.degree() != 0:
                            continue
                        try:
                            if not is_maurer_cartan(a, h):
                                continue
                        except RsftError:
                            continue
                        if bracket(h, a).is_zero():
                            continue
                        found = (h, f, a, s, c, h_coeffs, a_coeffs)
                        break
                    if found:
                        break
                if found:
                    break
            if found:
                break
        if found:
            break
    assert found is not None, "no Novikov fixture found"
    h, f, a, s, c, h_coeffs, a_coeffs = found
    print(f"novikov fixture: h={h_coeffs} diag s={s} tail c={c} a={a_coeffs}")
    hp = rename_sides(h, {"": "+"}).with_tag("P+")
    hm = rename_sides(h, {"": "-"}).with_tag("P-")
    ctx = ContextFile(table, {
        "h": h.with_tag("P"),
        "h_plus": hp,
        "h_minus": hm,
        "f": f.with_tag("L"),
        "a": a.with_tag("A"),
    }, pmax=6)
    write_fixture("novikov_nonexact", ctx)


# ---------------------------------------------------------------------------
# (e) augmentation fixture: h not in the hat ideal + f in L0 with h|_{L_f} = 0
# ---------------------------------------------------------------------------

def build_augmentation():
    table = GeneratorTable(0, [Generator("a", 0, 2), Generator("b", 1, 1)])
    pool = [
        AlgElement.variable(table, ("p", "b", "")),
        mono(table, ("p", "b", ""), ("q", "a", "")),
        mono(table, ("p", "b", ""), ("q", "a", ""), ("q", "a", "")),
    ]
    f_values = [Fraction(n, d) for d in (1, 2, 3, 4) for n in range(-4, 5)]
    found = None
    for coeffs in itertools.product([-1, 0, 1], repeat=len(pool)):
        if coeffs[0] == 0 or not any(coeffs[1:]):
            continue
        h = lincomb(pool, [Fraction(c) for c in coeffs])
        if not bracket(h, h).is_zero() or not h.in_overline():
            continue
        if check_hat(h):
            continue
        hp = rename_sides(h, {"": "+"})
        fa = AlgElement.variable(table, ("p", "a", "+"))
        for cf in f_values:
            if cf == 0:
                continue
            f = fa.scale(cf)
            if restrict_to_lagrangian(hp, f).is_zero():
                found = (h, f, coeffs, cf)
                break
        if found:
            break
    assert found is not None, "no augmentation fixture found"
    h, f, coeffs, cf = found
    print(f"augmentation fixture: h={coeffs}, f = {cf} * p:a+")
    ctx = ContextFile(table, {"h": h.with_tag("P"), "f": f.with_tag("L0")},
                      pmax=6)
    write_fixture("augmentation", ctx)


def main():
    build_trivial()
    table, h, g = build_hat_master()
    build_hat_cobordism(table, h, g)
    build_exact_cobordism()
    build_novikov()
    build_augmentation()
    print("fixture zoo complete")


if __name__ == "__main__":
    main()
