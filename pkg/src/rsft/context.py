"""Context files: ring, generator table, and named elements.

Line-based format, whitespace tolerant, '#' comments:

    ring = rational            # or novikov
    energy_cutoff = 2          # required for novikov (rational)
    N = 0
    pmax = 8                   # optional truncation profile
    generator x qdeg=1 kappa=2 action=1/2 side=both
    tvar t1 degree=3
    elem h : P = p:x + 2 * q:x * p:y
    elem f : L degree=0 = q:x- * p:x+

Element tags fix the variable population: A/A+/A- (q only), P/P+/P-
(q and p of one side), L (p^+ and q^-), L0 (pure p^+); t-variables are
allowed everywhere.  Parsing round-trips through render() to identical data.
"""

from fractions import Fraction

from .core import AlgElement
from .errors import (ContextSyntaxError, DegreeAnnotationMismatch, RsftError,
                     UnknownGenerator)
from .expr import format_element, parse_element
from .tables import Generator, GeneratorTable

_TAGS = {
    "A": {("q", "")},
    "A+": {("q", "+")},
    "A-": {("q", "-")},
    "P": {("q", ""), ("p", "")},
    "P+": {("q", "+"), ("p", "+")},
    "P-": {("q", "-"), ("p", "-")},
    "L": {("p", "+"), ("q", "-")},
    "L0": {("p", "+")},
}


class ContextFile:
    def __init__(self, table, elements, pmax=None, path=None):
        self.table = table
        self.elements = elements
        self.pmax = pmax
        self.path = path

    def element(self, name):
        try:
            return self.elements[name]
        except KeyError:
            raise RsftError(f"context has no element named {name!r}") from None

    def render(self):
        lines = [f"ring = {self.table.ring}"]
        if self.table.ring == "novikov":
            lines.append(f"energy_cutoff = {self.table.energy}")
        lines.append(f"N = {self.table.N}")
        if self.pmax is not None:
            lines.append(f"pmax = {self.pmax}")
        for g in self.table.generators:
            line = f"generator {g.name} qdeg={g.qdeg} kappa={g.kappa}"
            if g.action is not None:
                line += f" action={g.action}"
            if g.sides != "both":
                line += f" side={g.sides}"
            lines.append(line)
        for name, deg in self.table.tvars:
            lines.append(f"tvar {name} degree={deg}")
        for name in sorted(self.elements):
            el = self.elements[name]
            tag = el.tag or "P"
            lines.append(f"elem {name} : {tag} = {format_element(el)}")
        return "\n".join(lines) + "\n"


def _parse_rational(text, line_no, what):
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise ContextSyntaxError(f"bad {what}: {text!r}", line=line_no)


def _parse_attrs(parts, line_no):
    attrs = {}
    for part in parts:
        if "=" not in part:
            raise ContextSyntaxError(f"expected key=value, got {part!r}",
                                     line=line_no)
        key, value = part.split("=", 1)
        attrs[key.strip()] = value.strip()
    return attrs


def _validate_tag(name, tag, element, line_no):
    allowed = _TAGS.get(tag)
    if allowed is None:
        raise ContextSyntaxError(f"unknown tag {tag!r} for element {name}",
                                 line=line_no)
    for mon in element.terms:
        for (kind, _vname, side), _e in mon:
            if kind == "t":
                continue
            if (kind, side) not in allowed:
                raise ContextSyntaxError(
                    f"element {name}: variable {kind}:{_vname}{side} not "
                    f"allowed in context {tag}", line=line_no)


def parse_context(text, path=None):
    """Parse a context file; errors carry (line, column) where known."""
    header = {}
    generators = []
    tvars = []
    elem_lines = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("generator "):
            parts = line.split()
            if len(parts) < 2:
                raise ContextSyntaxError("generator needs a name", line=line_no)
            name = parts[1]
            attrs = _parse_attrs(parts[2:], line_no)
            if "qdeg" not in attrs or "kappa" not in attrs:
                raise ContextSyntaxError(
                    f"generator {name} needs qdeg= and kappa=", line=line_no)
            try:
                qdeg = int(attrs.pop("qdeg"))
                kappa = int(attrs.pop("kappa"))
            except ValueError:
                raise ContextSyntaxError(
                    f"generator {name}: qdeg/kappa must be integers",
                    line=line_no)
            action = attrs.pop("action", None)
            if action is not None:
                action = _parse_rational(action, line_no, "action")
            side = attrs.pop("side", "both")
            if attrs:
                raise ContextSyntaxError(
                    f"generator {name}: unknown attributes {sorted(attrs)}",
                    line=line_no)
            generators.append(Generator(name, qdeg, kappa, action, side))
        elif line.startswith("tvar "):
            parts = line.split()
            attrs = _parse_attrs(parts[2:], line_no)
            if "degree" not in attrs:
                raise ContextSyntaxError(f"tvar {parts[1]} needs degree=",
                                         line=line_no)
            tvars.append((parts[1], int(attrs["degree"])))
        elif line.startswith("elem "):
            elem_lines.append((line_no, line))
        elif "=" in line:
            key, value = line.split("=", 1)
            header[key.strip()] = (value.strip(), line_no)
        else:
            raise ContextSyntaxError(f"cannot parse line: {raw!r}", line=line_no)

    ring, _ = header.get("ring", ("rational", 0))
    if ring not in ("rational", "novikov"):
        raise ContextSyntaxError(f"unknown ring {ring!r}",
                                 line=header.get("ring", (None, 1))[1])
    energy = None
    if "energy_cutoff" in header:
        value, line_no = header["energy_cutoff"]
        energy = _parse_rational(value, line_no, "energy cutoff")
    if ring == "novikov" and energy is None:
        raise ContextSyntaxError("novikov ring needs energy_cutoff = <rational>")
    n_value, n_line = header.get("N", ("0", 0))
    try:
        N = int(n_value)
    except ValueError:
        raise ContextSyntaxError(f"bad N: {n_value!r}", line=n_line)
    pmax = None
    if "pmax" in header:
        value, line_no = header["pmax"]
        try:
            pmax = int(value)
        except ValueError:
            raise ContextSyntaxError(f"bad pmax: {value!r}", line=line_no)

    table = GeneratorTable(N, generators, tvars, ring=ring, energy=energy)

    elements = {}
    for line_no, line in elem_lines:
        body = line[len("elem "):]
        if "=" not in body:
            raise ContextSyntaxError("elem needs '= <expression>'", line=line_no)
        head, expr_text = body.split("=", 1)
        if ":" not in head:
            raise ContextSyntaxError("elem needs ': <tag>'", line=line_no)
        name_part, tag_part = head.split(":", 1)
        name = name_part.strip()
        tag_tokens = tag_part.split()
        if not tag_tokens:
            raise ContextSyntaxError("missing element tag", line=line_no)
        tag = tag_tokens[0]
        degree_annot = None
        for token in tag_tokens[1:]:
            if token.startswith("degree="):
                degree_annot = int(token.split("=", 1)[1])
            else:
                raise ContextSyntaxError(f"unknown annotation {token!r}",
                                         line=line_no)
        if not name.isidentifier():
            raise ContextSyntaxError(f"bad element name {name!r}", line=line_no)
        if name in elements:
            raise ContextSyntaxError(f"duplicate element {name!r}", line=line_no)
        element = parse_element(table, expr_text, line=line_no, pmax=pmax,
                                tag=tag)
        _validate_tag(name, tag, element, line_no)
        if degree_annot is not None:
            actual = element.degree()
            if actual is not None and actual != degree_annot:
                raise DegreeAnnotationMismatch(
                    f"element {name} annotated degree {degree_annot} but "
                    f"computed {actual} (line {line_no})")
        elements[name] = element
    return ContextFile(table, elements, pmax=pmax, path=path)


def load_context(path):
    with open(path, "r", encoding="utf-8") as fh:
        return parse_context(fh.read(), path=str(path))
