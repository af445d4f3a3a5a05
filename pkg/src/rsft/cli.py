"""Batch CLI: parse a context file, dispatch one kernel operation, emit a
deterministic report (JSON by default).

Exit codes: 0 success, 1 verification failure, 2 input error.  Reports are
byte-identical across runs for identical inputs; wallclock timing is only
included with the explicit --timing flag.
"""

import argparse
import json
import sys
import time
from fractions import Fraction

from . import trunc
from .coalgebra import check_master, coderivation, homology_window
from .context import load_context
from .core import AlgElement, bracket
from .errors import RsftError, ContextSyntaxError
from .expr import format_element, format_tensor_word, parse_element, parse_word
from .invariants import (SearchBounds, monotonicity_harness, order, torsion,
                         torsion_by_level, torsion_tilde)
from .linearize import (augmentation_twist, augmentation_twist_series,
                        check_bilie_relations, check_hat, m_operation)
from .mctwist import is_maurer_cartan, twist_coderivation, twist_hamiltonian
from .morphism import (MorphismHandle, Potential, apply_morphism,
                       check_chain_map, compose, siegel_map)

SCHEMA = 1


def _bounds(args):
    return SearchBounds(k_max=args.kmax, qlen_max=args.qlen_max,
                        energy_levels=_levels(args))


def _levels(args):
    if not getattr(args, "energy_levels", None):
        return None
    return [Fraction(part) for part in args.energy_levels.split(",") if part]


def _tmon(ctx, text):
    if not text or text.strip() in ("1", ""):
        return ()
    el = parse_element(ctx.table, text)
    if len(el.terms) != 1:
        raise RsftError("t-monomial must be a single monomial")
    (mon, c), = el.terms.items()
    if c != ctx.table.coeff(1) or any(v[0] != "t" for v, _e in mon):
        raise RsftError("t-monomial must be a product of t-variables")
    return mon


def _search_dict(res):
    return res.as_dict()


def _report_result(cmd, ctx, args):
    """Dispatch; returns (result dict, ok flag)."""
    table = ctx.table
    el = ctx.element

    if cmd == "check-master":
        value = check_master(el(args.elem))
        return {"master": value}, value

    if cmd == "bracket":
        out = bracket(el(args.lhs), el(args.rhs))
        return {"element": format_element(out)}, True

    if cmd == "coderive":
        word = parse_word(table, args.word, pmax=ctx.pmax)
        out = coderivation(el(args.elem), word)
        return {"words": format_tensor_word(out)}, True

    if cmd == "chaincheck":
        value = check_chain_map(el(args.f), el(args.hplus), el(args.hminus))
        return {"chain_map": value}, value

    if cmd == "compose":
        pmax = args.pmax if args.pmax is not None else ctx.pmax
        out = compose(el(args.fminus), el(args.fplus), pmax=pmax)
        return {"element": format_element(out.element)}, True

    if cmd == "apply":
        handle = MorphismHandle(Potential(el(args.f)))
        word = parse_word(table, args.word, pmax=ctx.pmax)
        out = apply_morphism(handle, word, max_len=args.cutoff_words)
        return {"words": format_tensor_word(out)}, True

    if cmd == "siegel":
        word = parse_word(table, args.word, pmax=ctx.pmax)
        out = siegel_map(el(args.f), _tmon(ctx, args.tmon), word,
                         max_len=args.cutoff_words or 6)
        return {"words": format_tensor_word(out)}, True

    if cmd == "mc-check":
        value = is_maurer_cartan(el(args.a), el(args.elem),
                                 allow_zero=args.allow_zero)
        return {"maurer_cartan": value}, value

    if cmd == "twist":
        h = el(args.elem)
        a = el(args.a)
        ha = twist_hamiltonian(h, a)
        result = {"hamiltonian": format_element(ha)}
        if args.word:
            word = parse_word(table, args.word, pmax=ctx.pmax)
            result["word_image"] = format_tensor_word(
                twist_coderivation(h, a, word, validate=False))
        return result, True

    if cmd == "linearize":
        h = el(args.elem)
        if not check_hat(h):
            return {"hat": False}, False
        ops = {}
        gens = [g.name for g in table.generators]
        import itertools as _it
        for r in range(1, args.rmax + 1):
            for s in range(1, args.smax + 1):
                if h.extract_bidegree(r, s).is_zero():
                    continue
                entries = {}
                for combo in _it.combinations_with_replacement(gens, r):
                    val = m_operation(h, r, s, list(combo))
                    if not val.is_zero():
                        entries["(" + ",".join(combo) + ")"] = \
                            format_element(val)
                if entries:
                    ops[f"m({r},{s})"] = entries
        return {"hat": True, "operations": ops}, True

    if cmd == "augment-twist":
        h = el(args.elem)
        f = el(args.f)
        hf = augmentation_twist(h, f)
        series = augmentation_twist_series(h, f)
        agree = hf == series
        hat = check_hat(hf)
        master = check_master(hf)
        ok = agree and hat and master
        return {"element": format_element(hf), "paths_agree": agree,
                "hat": hat, "master": master}, ok

    if cmd == "bilie-check":
        ok, failures = check_bilie_relations(el(args.elem), args.rmax,
                                             args.smax)
        return {"ok": ok, "failures": [list(f) for f in failures]}, ok

    if cmd == "torsion":
        h = el(args.elem)
        bounds = _bounds(args)
        if table.ring == "novikov":
            levels = _levels(args)
            if not levels:
                raise RsftError("Novikov torsion needs --energy-levels")
            out = torsion_by_level(h, bounds, levels)
            return {"levels": {str(l): _search_dict(r)
                               for l, r in sorted(out.items())}}, True
        if args.variant == "tilde":
            return _search_dict(torsion_tilde(h, bounds)), True
        return _search_dict(torsion(h, bounds)), True

    if cmd == "order":
        res = order(el(args.elem), el(args.g), _bounds(args))
        return _search_dict(res), True

    if cmd == "monotonicity":
        gplus = ctx.elements.get(args.gplus)
        gminus = ctx.elements.get(args.gminus)
        ghom = ctx.elements.get(args.ghom) if args.ghom else None
        report = monotonicity_harness(
            el(args.hplus), el(args.hminus), el(args.f), _bounds(args),
            gplus=gplus, gminus=gminus, g=ghom)
        result = {}
        ok = report.get("chain_map", False)
        for key, value in sorted(report.items()):
            if hasattr(value, "as_dict"):
                result[key] = value.as_dict()
            elif hasattr(value, "words"):
                result[key] = format_tensor_word(value)
            elif isinstance(value, dict) and "values" in value:
                result[key] = {
                    "values": [str(v) for v in value["values"]],
                    "all_equal_unit": value["all_equal_unit"],
                }
                ok = ok and value["all_equal_unit"]
            else:
                result[key] = value
        for key in ("torsion_monotone", "order_monotone",
                    "transport_verified", "order_homotopy"):
            if key in result and result[key] is False:
                ok = False
        return result, ok

    if cmd == "homology":
        lo, hi = args.window.split(":")
        res = homology_window(el(args.elem), args.kind,
                              (int(lo), int(hi)), k_max=args.kmax,
                              qlen_max=args.qlen_max)
        return {
            "betti": {str(d): b for d, b in sorted(res["betti"].items())},
            "dims": {str(d): b for d, b in sorted(res["dims"].items())},
            "honest": {str(d): b for d, b in sorted(res["honest"].items())},
            "window_closed": res["window_closed"],
        }, True

    raise RsftError(f"unknown command {cmd!r}")


def _add_common(sub):
    sub.add_argument("--context", required=True)
    sub.add_argument("--output", choices=("json", "text"), default="json")
    sub.add_argument("--timing", action="store_true")
    sub.add_argument("--kmax", type=int, default=4)
    sub.add_argument("--qlen-max", dest="qlen_max", type=int, default=6)
    sub.add_argument("--pmax", type=int, default=None)
    sub.add_argument("--energy-levels", dest="energy_levels", default=None)
    sub.add_argument("--cutoff-words", dest="cutoff_words", type=int,
                     default=None)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="rsft",
        description="exact kernel for the rational SFT algebra: graded "
                    "Poisson brackets, coderivations, morphisms, twisting, "
                    "linearization and torsion/order searches")
    subs = parser.add_subparsers(dest="command", required=True)

    def sub(name, **spec):
        s = subs.add_parser(name)
        _add_common(s)
        for flag, kwargs in spec.items():
            s.add_argument(f"--{flag}", **kwargs)
        return s

    sub("check-master", elem={"default": "h"})
    sub("bracket", lhs={"required": True}, rhs={"required": True})
    sub("coderive", elem={"default": "h"}, word={"required": True})
    sub("chaincheck", f={"default": "f"}, hplus={"default": "h_plus"},
        hminus={"default": "h_minus"})
    sub("compose", fminus={"required": True}, fplus={"required": True})
    sub("apply", f={"default": "f"}, word={"required": True})
    sub("siegel", f={"default": "f"}, tmon={"default": ""},
        word={"required": True})
    s = sub("mc-check", a={"default": "a"}, elem={"default": "h"})
    s.add_argument("--allow-zero", dest="allow_zero", action="store_true")
    sub("twist", elem={"default": "h"}, a={"default": "a"},
        word={"default": None})
    sub("linearize", elem={"default": "h"}, rmax={"type": int, "default": 2},
        smax={"type": int, "default": 2})
    sub("augment-twist", elem={"default": "h"}, f={"default": "f"})
    sub("bilie-check", elem={"default": "h"}, rmax={"type": int, "default": 4},
        smax={"type": int, "default": 4})
    sub("torsion", elem={"default": "h"},
        variant={"choices": ("plain", "tilde"), "default": "plain"})
    sub("order", elem={"default": "h"}, g={"default": "g"})
    sub("monotonicity", hplus={"default": "h_plus"},
        hminus={"default": "h_minus"}, f={"default": "f"},
        gplus={"default": "g_plus"}, gminus={"default": "g_minus"},
        ghom={"default": None})
    sub("homology", elem={"default": "h"},
        kind={"choices": ("words", "contact"), "default": "words"},
        window={"default": "-4:4"})
    return parser


def _render_text(report):
    lines = [f"command: {report['command']}", f"ok: {report['ok']}"]

    def walk(prefix, value):
        if isinstance(value, dict):
            for k in sorted(value):
                walk(f"{prefix}{k}.", value[k])
        elif isinstance(value, list):
            for i, v in enumerate(value):
                walk(f"{prefix}{i}.", v)
        else:
            lines.append(f"{prefix[:-1]}: {value}")

    walk("", report["result"])
    lines.append(f"truncation_active: {report['truncation_active']}")
    lines.append(f"energy_truncated: {report['energy_truncated']}")
    return "\n".join(lines)


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    started = time.monotonic()
    try:
        ctx = load_context(args.context)
        with trunc.watch() as watcher:
            result, ok = _report_result(args.command, ctx, args)
    except (RsftError, ContextSyntaxError, OSError, ValueError) as exc:
        error = {"schema": SCHEMA, "command": args.command,
                 "error": f"{type(exc).__name__}: {exc}", "ok": False}
        print(json.dumps(error, sort_keys=True, indent=2))
        return 2
    flags = {}
    for key in ("kmax", "qlen_max", "pmax", "energy_levels", "cutoff_words",
                "elem", "lhs", "rhs", "word", "f", "hplus", "hminus", "a",
                "g", "gplus", "gminus", "ghom", "fplus", "fminus", "tmon",
                "rmax", "smax", "variant", "kind", "window", "allow_zero"):
        if hasattr(args, key) and getattr(args, key) is not None:
            flags[key] = getattr(args, key)
    report = {
        "schema": SCHEMA,
        "command": args.command,
        "context": args.context,
        "flags": flags,
        "result": result,
        "ok": ok,
        "truncation_active": watcher.truncation_active,
        "energy_truncated": watcher.energy_truncated,
    }
    if args.timing:
        report["wallclock"] = round(time.monotonic() - started, 6)
    if args.output == "json":
        print(json.dumps(report, sort_keys=True, indent=2))
    else:
        print(_render_text(report))
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
