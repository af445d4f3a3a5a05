"""Exact scalars: rationals and truncated Novikov polynomials.

Rational scalars are plain fractions.Fraction.  Novikov scalars are finite
sums sum_i c_i * L^{a_i} with rational c_i and nonnegative rational exponents
a_i, truncated at an energy cutoff E: every operation drops terms with
exponent >= E.  Equality, hashing and arithmetic are exact.
"""

from fractions import Fraction

from . import trunc


def _as_fraction(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


class NovikovPoly:
    """Finite Novikov sum, sorted by strictly increasing exponent.

    terms: tuple of (exponent, coefficient) pairs, exponents Fraction >= 0
    and < cutoff, coefficients nonzero Fraction.  cutoff may be None for an
    untruncated value (used transiently; context files always set one).
    """

    __slots__ = ("terms", "cutoff")

    def __init__(self, terms, cutoff):
        self.terms = terms
        self.cutoff = cutoff

    @classmethod
    def make(cls, pairs, cutoff):
        acc = {}
        for a, c in pairs:
            a = _as_fraction(a)
            c = _as_fraction(c)
            if a < 0:
                raise ValueError("Novikov exponents must be nonnegative")
            if cutoff is not None and a >= cutoff:
                if c != 0:
                    trunc.note("energy")
                continue
            acc[a] = acc.get(a, Fraction(0)) + c
        terms = tuple((a, acc[a]) for a in sorted(acc) if acc[a] != 0)
        return cls(terms, cutoff)

    @classmethod
    def from_rational(cls, c, cutoff):
        return cls.make([(Fraction(0), c)], cutoff)

    @classmethod
    def monomial(cls, exponent, coeff, cutoff):
        return cls.make([(exponent, coeff)], cutoff)

    def _join_cutoff(self, other):
        a, b = self.cutoff, other.cutoff
        if a is None:
            return b
        if b is None:
            return a
        return min(a, b)

    def _coerce(self, other):
        if isinstance(other, NovikovPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return NovikovPoly.from_rational(other, self.cutoff)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return NovikovPoly.make(self.terms + o.terms, self._join_cutoff(o))

    __radd__ = __add__

    def __neg__(self):
        return NovikovPoly(tuple((a, -c) for a, c in self.terms), self.cutoff)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        pairs = []
        for a1, c1 in self.terms:
            for a2, c2 in o.terms:
                pairs.append((a1 + a2, c1 * c2))
        return NovikovPoly.make(pairs, self._join_cutoff(o))

    __rmul__ = __mul__

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = NovikovPoly.from_rational(other, self.cutoff)
        if not isinstance(other, NovikovPoly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(("nov", self.terms))

    def filtration_level(self):
        """Minimal exponent of a nonzero term; None for the zero value."""
        if not self.terms:
            return None
        return self.terms[0][0]

    def truncated(self, cutoff):
        """Reduce modulo L^cutoff (drop exponents >= cutoff)."""
        return NovikovPoly.make(self.terms, cutoff)

    def constant_part(self):
        if self.terms and self.terms[0][0] == 0:
            return self.terms[0][1]
        return Fraction(0)

    def __repr__(self):
        return f"NovikovPoly({self.terms!r}, cutoff={self.cutoff!r})"


def scalar_add(x, y):
    return x + y


def scalar_mul(x, y):
    return x * y


def scalar_is_zero(x):
    if isinstance(x, NovikovPoly):
        return not x
    return x == 0


def filtration_level(x):
    """Filtration level of a scalar: exponent valuation (0 for rationals)."""
    if isinstance(x, NovikovPoly):
        return x.filtration_level()
    if x == 0:
        return None
    return Fraction(0)
