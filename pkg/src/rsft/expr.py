"""Element and word grammar: parsing and canonical printing.

Grammar (whitespace separates tokens but is otherwise insignificant):

    expr    :=  ['-'] term (('+'|'-') term)*
    term    :=  factor ('*' factor)*
    factor  :=  atom ['^' exponent]
    atom    :=  rational | variable | 'L' | '(' expr ')'
    rational:=  int ['/' int]
    variable:=  ('q'|'p'|'t') ':' name ['+'|'-']     (suffix only if adjacent)

'L' is the Novikov formal variable; its exponent may be rational (L^1/2).
Variable exponents must be integers, and odd variables reject powers >= 2.
Tensor words join factors with '(+)'; '1l' denotes the empty word.
"""

import re
from fractions import Fraction

from .core import AlgElement, mon_count, mon_sort_key
from .errors import ContextSyntaxError, OddPowerViolation, RsftError, UnknownGenerator
from .scalars import NovikovPoly

_TOKEN_RE = re.compile(r"""
    (?P<var>[qpt]:[A-Za-z_][A-Za-z0-9_]*[+-]?)
  | (?P<num>\d+)
  | (?P<op>[*^+\-()/])
  | (?P<lam>L)
  | (?P<bad>\S)
""", re.VERBOSE)


def _tokenize(text, line=None):
    tokens = []
    for m in _TOKEN_RE.finditer(text):
        kind = m.lastgroup
        if kind == "bad":
            raise ContextSyntaxError(f"unexpected character {m.group()!r}",
                                     line=line, column=m.start() + 1)
        tokens.append((kind, m.group(), m.start() + 1))
    return tokens


class _Parser:
    def __init__(self, table, tokens, line=None, pmax=None):
        self.table = table
        self.tokens = tokens
        self.pos = 0
        self.line = line
        self.pmax = pmax

    def _peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else (None, None, None)

    def _next(self):
        tok = self._peek()
        self.pos += 1
        return tok

    def _fail(self, msg, col=None):
        raise ContextSyntaxError(msg, line=self.line, column=col)

    def parse(self):
        e = self.expr()
        kind, text, col = self._peek()
        if kind is not None:
            self._fail(f"unexpected token {text!r}", col)
        return e

    def expr(self):
        negate = False
        kind, text, _ = self._peek()
        if kind == "op" and text in "+-":
            self._next()
            negate = text == "-"
        acc = self.term()
        if negate:
            acc = -acc
        while True:
            kind, text, _ = self._peek()
            if kind == "op" and text in "+-":
                self._next()
                t = self.term()
                acc = acc - t if text == "-" else acc + t
            else:
                return acc

    def term(self):
        acc = self.factor()
        while True:
            kind, text, _ = self._peek()
            if kind == "op" and text == "*":
                self._next()
                acc = acc * self.factor()
            else:
                return acc

    def factor(self):
        base_kind, base = self.atom()
        kind, text, col = self._peek()
        if kind == "op" and text == "^":
            self._next()
            if base_kind == "lam":
                exp = self.rational()
                if exp < 0:
                    self._fail("Novikov exponent must be nonnegative", col)
                return self._lam_power(exp)
            if base_kind == "var":
                exp, ecol = self.integer()
                if exp < 0:
                    self._fail("negative variable power", ecol)
                try:
                    return AlgElement.variable(self.table, base, power=exp,
                                               pmax=self.pmax)
                except OddPowerViolation as e:
                    loc = f" at line {self.line}, column {ecol}" \
                        if self.line is not None else ""
                    raise OddPowerViolation(str(e) + loc) from None
            if base_kind == "num":
                exp, _ = self.integer()
                if exp < 0:
                    self._fail("negative power", col)
                return AlgElement.scalar(self.table, base ** exp, pmax=self.pmax)
            self._fail("cannot raise this expression to a power", col)
        if base_kind == "lam":
            return self._lam_power(Fraction(1))
        if base_kind == "var":
            return AlgElement.variable(self.table, base, pmax=self.pmax)
        if base_kind == "num":
            return AlgElement.scalar(self.table, base, pmax=self.pmax)
        return base  # parenthesized element

    def _lam_power(self, exp):
        if self.table.ring != "novikov":
            self._fail("L^a scalars need a novikov ring context")
        c = NovikovPoly.monomial(exp, 1, self.table.energy)
        return AlgElement.from_terms(self.table, [((), c)], pmax=self.pmax)

    def atom(self):
        kind, text, col = self._next()
        if kind == "var":
            side = ""
            name = text
            if name[-1] in "+-":
                side = name[-1]
                name = name[:-1]
            vkind, vname = name.split(":", 1)
            var = (vkind, vname, side)
            if vkind == "t":
                if not self.table.has_tvar(vname):
                    raise UnknownGenerator(f"unknown t-variable {vname!r}")
            elif not self.table.has_gen(vname):
                raise UnknownGenerator(f"unknown generator {vname!r}")
            return "var", var
        if kind == "num":
            value = Fraction(int(text))
            nk, nt, _ = self._peek()
            if nk == "op" and nt == "/":
                self._next()
                dk, dt, dcol = self._next()
                if dk != "num":
                    self._fail("expected denominator", dcol)
                value = value / int(dt)
            return "num", value
        if kind == "lam":
            return "lam", None
        if kind == "op" and text == "(":
            e = self.expr()
            ck, ct, ccol = self._next()
            if not (ck == "op" and ct == ")"):
                self._fail("expected ')'", ccol)
            return "expr", e
        self._fail(f"unexpected token {text!r}" if text else "unexpected end of input", col)

    def rational(self):
        kind, text, col = self._next()
        if kind == "op" and text == "(":
            v = self.rational()
            ck, ct, ccol = self._next()
            if not (ck == "op" and ct == ")"):
                self._fail("expected ')'", ccol)
            return v
        if kind != "num":
            self._fail("expected a rational literal", col)
        value = Fraction(int(text))
        nk, nt, _ = self._peek()
        if nk == "op" and nt == "/":
            self._next()
            dk, dt, dcol = self._next()
            if dk != "num":
                self._fail("expected denominator", dcol)
            value = value / int(dt)
        return value

    def integer(self):
        kind, text, col = self._next()
        neg = False
        if kind == "op" and text == "-":
            neg = True
            kind, text, col = self._next()
        if kind != "num":
            self._fail("expected an integer power", col)
        v = int(text)
        return (-v if neg else v), col


def parse_element(table, text, line=None, pmax=None, tag=None):
    tokens = _tokenize(text, line=line)
    if not tokens:
        raise ContextSyntaxError("empty element expression", line=line)
    el = _Parser(table, tokens, line=line, pmax=pmax).parse()
    return el.with_tag(tag) if tag is not None else el


def parse_word(table, text, line=None, pmax=None):
    """Parse a tensor word: element factors joined by '(+)', or '1l'."""
    from .coalgebra import TensorWord
    chunks = text.split("(+)")
    factors = []
    for chunk in chunks:
        chunk = chunk.strip()
        if chunk == "1l":
            factors.append(AlgElement.scalar(table, 1, pmax=pmax))
        else:
            factors.append(parse_element(table, chunk, line=line, pmax=pmax))
    return TensorWord.from_factors(table, factors)


# ---------------------------------------------------------------------------
# canonical printing
# ---------------------------------------------------------------------------

def _format_fraction(c):
    return str(c)


def _format_var(var, exp):
    kind, name, side = var
    s = f"{kind}:{name}{side}"
    if exp != 1:
        s += f"^{exp}"
    return s


def _format_monomial(mon):
    return " * ".join(_format_var(v, e) for v, e in mon)


def _coeff_terms(coeff):
    """Expand a scalar into printable (rational, lam_exponent|None) pieces."""
    if isinstance(coeff, NovikovPoly):
        return [(c, a) for a, c in coeff.terms]
    return [(coeff, None)]


def format_element(x):
    """Deterministic canonical string; parses back to the same element."""
    pieces = []
    for mon, coeff in x.sorted_terms():
        for c, lam in _coeff_terms(coeff):
            parts = []
            if lam is not None and lam != 0:
                parts.append(f"L^{lam}" if lam != 1 else "L")
            if mon:
                parts.append(_format_monomial(mon))
            if not parts:
                body = _format_fraction(abs(c))
            else:
                body = " * ".join(parts)
                if abs(c) != 1:
                    body = f"{_format_fraction(abs(c))} * {body}"
            pieces.append(("-" if c < 0 else "+", body))
    if not pieces:
        return "0"
    first_sign, first_body = pieces[0]
    out = ("-" if first_sign == "-" else "") + first_body
    for sign, body in pieces[1:]:
        out += f" {sign} {body}"
    return out


def format_word_key(table, word):
    if not word:
        return "1l"
    return " (+) ".join(_format_monomial(m) for m in word)


def format_tensor_word(x):
    """Deterministic list of 'coeff * factors' strings, sorted canonically."""
    out = []
    for word in sorted(x.words, key=lambda w: tuple(mon_sort_key(x.table, m) for m in w)):
        coeff = x.words[word]
        body = format_word_key(x.table, word)
        for c, lam in _coeff_terms(coeff):
            prefix = _format_fraction(c)
            if lam is not None and lam != 0:
                prefix += f" * L^{lam}" if lam != 1 else " * L"
            out.append(f"{prefix} * {body}")
    return out
