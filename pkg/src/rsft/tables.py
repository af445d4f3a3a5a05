"""Generator tables: the index set, gradings, weights and variable order.

A variable is a plain tuple (kind, name, side) with kind in {'q','p','t'} and
side in {'', '+', '-'}.  Side tags distinguish the two ends of a cobordism;
single-manifold elements use side ''.  The canonical monomial order is
q-variables before p-variables before t-variables, generators in table order,
and within one generator side '-' < '' < '+'.  All Koszul signs are
normalized against this order.
"""

from fractions import Fraction

from .errors import RsftError, UnknownGenerator
from .scalars import NovikovPoly

KINDS = ("q", "p", "t")
SIDES = ("-", "", "+")

_KIND_RANK = {"q": 0, "p": 1, "t": 2}
_SIDE_RANK = {"-": 0, "": 1, "+": 2}


class Generator:
    __slots__ = ("name", "qdeg", "kappa", "action", "sides")

    def __init__(self, name, qdeg, kappa, action=None, sides="both"):
        if kappa < 1:
            raise RsftError(f"generator {name}: weight kappa must be >= 1, got {kappa}")
        if sides not in ("both", "+", "-"):
            raise RsftError(f"generator {name}: bad side annotation {sides!r}")
        self.name = name
        self.qdeg = int(qdeg)
        self.kappa = int(kappa)
        self.action = None if action is None else Fraction(action)
        self.sides = sides


class GeneratorTable:
    """The index set Gamma with degrees, weights and t-variables.

    ring is 'rational' or 'novikov'; energy is the Novikov cutoff E (a
    Fraction) and must be set exactly when ring == 'novikov'.
    """

    def __init__(self, N, generators, tvars=(), ring="rational", energy=None):
        self.N = int(N)
        self.generators = tuple(generators)
        self.tvars = tuple((name, int(deg)) for name, deg in tvars)
        names = [g.name for g in self.generators] + [t[0] for t in self.tvars]
        if len(set(names)) != len(names):
            raise RsftError("generator and t-variable names must be pairwise distinct")
        if ring not in ("rational", "novikov"):
            raise RsftError(f"unknown ring {ring!r}")
        if ring == "novikov":
            if energy is None:
                raise RsftError("novikov ring needs an energy cutoff")
            energy = Fraction(energy)
            if energy <= 0:
                raise RsftError("energy cutoff must be positive")
        else:
            energy = None
        self.ring = ring
        self.energy = energy
        self._gen_index = {g.name: i for i, g in enumerate(self.generators)}
        self._tvar_index = {t[0]: i for i, t in enumerate(self.tvars)}
        self._tvar_deg = dict(self.tvars)
        self._var_cache = {}   # var -> (degree, sort key)
        self._mon_cache = {}   # monomial -> (degree, sort key)

    # -- lookups ----------------------------------------------------------

    def gen(self, name):
        try:
            return self.generators[self._gen_index[name]]
        except KeyError:
            raise UnknownGenerator(f"unknown generator {name!r}") from None

    def has_gen(self, name):
        return name in self._gen_index

    def has_tvar(self, name):
        return name in self._tvar_index

    def qdeg(self, name):
        return self.gen(name).qdeg

    def pdeg(self, name):
        return 2 * self.N - self.gen(name).qdeg

    def kappa(self, name):
        return self.gen(name).kappa

    def _var_info(self, var):
        info = self._var_cache.get(var)
        if info is not None:
            return info
        kind, name, side = var
        if kind == "q":
            degree = self.qdeg(name)
        elif kind == "p":
            degree = self.pdeg(name)
        elif kind == "t":
            try:
                degree = self._tvar_deg[name]
            except KeyError:
                raise UnknownGenerator(f"unknown t-variable {name!r}") from None
        else:
            raise RsftError(f"bad variable kind {kind!r}")
        if kind == "t":
            idx = self._tvar_index[name]
        else:
            idx = self._gen_index[name]
        key = (_KIND_RANK[kind], idx, _SIDE_RANK[side])
        info = (degree, key)
        self._var_cache[var] = info
        return info

    def var_degree(self, var):
        return self._var_info(var)[0]

    def var_parity(self, var):
        return self._var_info(var)[0] & 1

    def var_key(self, var):
        """Canonical sort key: q before p before t, table order, side order."""
        return self._var_info(var)[1]

    # -- scalars ----------------------------------------------------------

    def coeff(self, x):
        """Coerce x into this table's scalar ring."""
        if self.ring == "novikov":
            if isinstance(x, NovikovPoly):
                return x.truncated(self.energy)
            return NovikovPoly.from_rational(Fraction(x), self.energy)
        if isinstance(x, NovikovPoly):
            raise RsftError("Novikov scalar in a rational context")
        return Fraction(x)

    def one(self):
        return self.coeff(1)

    def gen_names(self, side=None):
        if side is None:
            return [g.name for g in self.generators]
        return [g.name for g in self.generators if g.sides in ("both", side)]
