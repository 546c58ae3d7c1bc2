"""Sparse exact differential polynomials in jet variables.

Generators are small integers: ``X_GEN`` and ``T_GEN`` for the explicit
independent variables, and ``jet(d, i)`` for the i-th x-derivative of
dependent variable number d.  A monomial is a tuple of (generator,
doubled exponent) pairs sorted by generator; exponents are stored twice
their mathematical value so that the half-integer powers needed by the
linearizing substitution stay exact integers.  Everything else sees
ordinary integer exponents as even doubled ones.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Tuple

from .coeffield import RF_ONE, RF_ZERO, RationalFunction, rf
from .errors import PoleAtParameter

X_GEN = 0
T_GEN = 1
_JET_BASE = 2
_ORDER_STRIDE = 4096

#: a monomial: ((generator, doubled exponent), ...) sorted by generator
Monomial = Tuple[Tuple[int, int], ...]

MONO_ONE: Monomial = ()


def jet(depvar: int, order: int) -> int:
    """Generator id of the order-th x-derivative of dependent variable depvar."""
    if order < 0 or order >= _ORDER_STRIDE:
        raise ValueError(f"jet order out of range: {order}")
    return _JET_BASE + depvar * _ORDER_STRIDE + order


def is_jet(gen: int) -> bool:
    return gen >= _JET_BASE


def jet_depvar(gen: int) -> int:
    return (gen - _JET_BASE) // _ORDER_STRIDE


def jet_order(gen: int) -> int:
    return (gen - _JET_BASE) % _ORDER_STRIDE


@dataclass(frozen=True)
class ExponentLattice:
    """Allowed exponents per generator.

    The default lattice admits nonnegative integers everywhere.  At most
    one generator (``extended``) may instead range over half-integers of
    either sign; that single extension is what the substitution check
    needs for sqrt(u) and 1/u.
    """

    extended: Optional[int] = None

    def permits(self, gen: int, exp2: int) -> bool:
        if gen == self.extended:
            return True
        return exp2 >= 0 and exp2 % 2 == 0


STANDARD_LATTICE = ExponentLattice()


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    out = []
    i = j = 0
    la, lb = len(a), len(b)
    while i < la and j < lb:
        ga, ea = a[i]
        gb, eb = b[j]
        if ga == gb:
            e = ea + eb
            if e:
                out.append((ga, e))
            i += 1
            j += 1
        elif ga < gb:
            out.append(a[i])
            i += 1
        else:
            out.append(b[j])
            j += 1
    out.extend(a[i:])
    out.extend(b[j:])
    return tuple(out)


def mono_weight2(m: Monomial) -> int:
    """Twice the total differential order sum(order * exponent)."""
    return sum(jet_order(g) * e for g, e in m if g >= _JET_BASE)


def mono_degree2(m: Monomial) -> int:
    """Twice the total polynomial degree (jet generators only)."""
    return sum(e for g, e in m if g >= _JET_BASE)


def mono_max_order(m: Monomial) -> Optional[int]:
    best = None
    for g, _ in m:
        if g >= _JET_BASE:
            o = jet_order(g)
            if best is None or o > best:
                best = o
    return best


def mono_sort_key(m: Monomial):
    # graded by total differential order, then lexicographic; within a
    # weight class this puts the pure top jet above products, so the
    # first rendered term is the leading linear part
    return (mono_weight2(m), m)


def _exp_text(e2: int) -> str:
    if e2 % 2 == 0:
        return str(e2 // 2)
    return f"({e2}/2)"


def jet_name(name: str, order: int) -> str:
    """Canonical jet spelling: w, w_x, w_xx, then w_3, w_4, ..."""
    if order == 0:
        return name
    if order <= 2:
        return name + "_" + "x" * order
    return f"{name}_{order}"


class DiffPoly:
    """Differential polynomial: canonical mapping monomial -> coefficient."""

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[dict] = None):
        object.__setattr__(self, "terms", terms or {})

    def __setattr__(self, name, value):
        raise AttributeError("DiffPoly is immutable")

    # -- constructors -----------------------------------------------------
    @staticmethod
    def zero() -> "DiffPoly":
        return DP_ZERO

    @staticmethod
    def constant(value) -> "DiffPoly":
        c = rf(value) if not isinstance(value, RationalFunction) else value
        if c.is_zero:
            return DP_ZERO
        return DiffPoly({MONO_ONE: c})

    @staticmethod
    def gen_power(gen: int, exp2: int, coeff=None) -> "DiffPoly":
        c = RF_ONE if coeff is None else (coeff if isinstance(coeff, RationalFunction) else rf(coeff))
        if exp2 == 0:
            return DiffPoly.constant(c)
        if c.is_zero:
            return DP_ZERO
        return DiffPoly({((gen, exp2),): c})

    @staticmethod
    def var(gen: int) -> "DiffPoly":
        return DiffPoly({((gen, 2),): RF_ONE})

    @staticmethod
    def from_terms(pairs: Iterable) -> "DiffPoly":
        terms: dict = {}
        for mono, coeff in pairs:
            c = coeff if isinstance(coeff, RationalFunction) else rf(coeff)
            if c.is_zero:
                continue
            cur = terms.get(mono)
            c = c if cur is None else cur + c
            if c.is_zero:
                terms.pop(mono, None)
            else:
                terms[mono] = c
        return DiffPoly(terms)

    # -- basic queries -----------------------------------------------------
    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        return isinstance(other, DiffPoly) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __len__(self):
        return len(self.terms)

    def coefficient(self, mono: Monomial) -> RationalFunction:
        return self.terms.get(mono, RF_ZERO)

    def free_term(self) -> RationalFunction:
        return self.terms.get(MONO_ONE, RF_ZERO)

    def contains_xt(self) -> bool:
        return any(g < _JET_BASE for m in self.terms for g, _ in m)

    def max_jet_order(self) -> Optional[int]:
        best = None
        for m in self.terms:
            o = mono_max_order(m)
            if o is not None and (best is None or o > best):
                best = o
        return best

    def depvars(self) -> set:
        return {jet_depvar(g) for m in self.terms for g, _ in m if g >= _JET_BASE}

    def sorted_terms(self):
        """Terms in canonical order: highest weight first."""
        return sorted(self.terms.items(), key=lambda kv: mono_sort_key(kv[0]),
                      reverse=True)

    # -- arithmetic ---------------------------------------------------------
    def __neg__(self):
        return DiffPoly({m: -c for m, c in self.terms.items()})

    def __add__(self, other):
        if not isinstance(other, DiffPoly):
            return NotImplemented
        if not self.terms:
            return other
        if not other.terms:
            return self
        a, b = self.terms, other.terms
        if len(a) < len(b):
            a, b = b, a
        out = dict(a)
        for m, c in b.items():
            cur = out.get(m)
            if cur is None:
                out[m] = c
            else:
                s = cur + c
                if s.is_zero:
                    del out[m]
                else:
                    out[m] = s
        return DiffPoly(out)

    def __sub__(self, other):
        if not isinstance(other, DiffPoly):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, RationalFunction)):
            return self.scalar_mul(other)
        if not isinstance(other, DiffPoly):
            return NotImplemented
        if not self.terms or not other.terms:
            return DP_ZERO
        a, b = self.terms, other.terms
        if len(a) > len(b):
            a, b = b, a
        out: dict = {}
        for m1, c1 in a.items():
            for m2, c2 in b.items():
                m = mono_mul(m1, m2)
                c = c1 * c2
                cur = out.get(m)
                if cur is None:
                    out[m] = c
                else:
                    s = cur + c
                    if s.is_zero:
                        del out[m]
                    else:
                        out[m] = s
        return DiffPoly(out)

    __rmul__ = __mul__

    def scalar_mul(self, c) -> "DiffPoly":
        c = c if isinstance(c, RationalFunction) else rf(c)
        if c.is_zero or not self.terms:
            return DP_ZERO
        return DiffPoly({m: v * c for m, v in self.terms.items()})

    # -- calculus -----------------------------------------------------------
    def partial(self, gen: int) -> "DiffPoly":
        """Partial derivative with respect to a single generator."""
        out: dict = {}
        for mono, coeff in self.terms.items():
            for idx, (g, e2) in enumerate(mono):
                if g != gen:
                    continue
                c = coeff * Fraction(e2, 2)
                ne2 = e2 - 2
                if ne2 == 0:
                    nm = mono[:idx] + mono[idx + 1:]
                else:
                    nm = mono[:idx] + ((g, ne2),) + mono[idx + 1:]
                cur = out.get(nm)
                s = c if cur is None else cur + c
                if s.is_zero:
                    out.pop(nm, None)
                else:
                    out[nm] = s
                break
        return DiffPoly(out)

    def dx(self) -> "DiffPoly":
        """Total x-derivative: bumps jets, differentiates explicit x."""
        out: dict = {}
        for mono, coeff in self.terms.items():
            for idx, (g, e2) in enumerate(mono):
                if g == T_GEN:
                    continue
                c = coeff * Fraction(e2, 2)
                ne2 = e2 - 2
                if ne2 == 0:
                    base = mono[:idx] + mono[idx + 1:]
                else:
                    base = mono[:idx] + ((g, ne2),) + mono[idx + 1:]
                if g == X_GEN:
                    nm = base
                else:
                    nm = mono_mul(base, ((jet(jet_depvar(g), jet_order(g) + 1), 2),))
                cur = out.get(nm)
                s = c if cur is None else cur + c
                if s.is_zero:
                    out.pop(nm, None)
                else:
                    out[nm] = s
        return DiffPoly(out)

    def dx_iter(self, n: int) -> "DiffPoly":
        cur = self
        for _ in range(n):
            cur = cur.dx()
        return cur

    def partial_t(self) -> "DiffPoly":
        return self.partial(T_GEN)

    def specialize(self, value) -> "DiffPoly":
        """Evaluate every coefficient at a parameter point."""
        out: dict = {}
        for mono, coeff in self.terms.items():
            try:
                v = coeff.eval(value)
            except PoleAtParameter as exc:
                raise PoleAtParameter(exc.value, exc.den_text, monomial=mono) from None
            if v == 0:
                continue
            cur = out.get(mono)
            nc = RationalFunction.from_fraction(v)
            s = nc if cur is None else cur + nc
            if not s.is_zero:
                out[mono] = s
        return DiffPoly(out)

    # -- rendering ------------------------------------------------------------
    def text(self, names: Tuple[str, ...], param: str = "alpha") -> str:
        if not self.terms:
            return "(0)"
        parts = []
        for mono, coeff in self.sorted_terms():
            factors = [f"({coeff.text(param)})"]
            for g, e2 in mono:
                if g == X_GEN:
                    base = "x"
                elif g == T_GEN:
                    base = "t"
                else:
                    base = jet_name(names[jet_depvar(g)], jet_order(g))
                if e2 == 2:
                    factors.append(base)
                else:
                    factors.append(f"{base}^{_exp_text(e2)}")
            parts.append("*".join(factors))
        return " + ".join(parts)

    def to_json(self):
        out = []
        for mono, coeff in self.sorted_terms():
            exps = []
            for g, e2 in mono:
                if g == X_GEN:
                    gj = "x"
                elif g == T_GEN:
                    gj = "t"
                else:
                    gj = [jet_depvar(g), jet_order(g)]
                exps.append([gj, e2 // 2 if e2 % 2 == 0 else f"{e2}/2"])
            out.append({"exps": exps, "coeff": coeff.to_json()})
        return out

    @staticmethod
    def from_json(obj) -> "DiffPoly":
        terms = {}
        for item in obj:
            mono = []
            for gj, e in item["exps"]:
                if gj == "x":
                    g = X_GEN
                elif gj == "t":
                    g = T_GEN
                else:
                    g = jet(gj[0], gj[1])
                if isinstance(e, str):
                    e2 = int(e.split("/")[0])
                else:
                    e2 = 2 * e
                mono.append((g, e2))
            mono.sort()
            terms[tuple(mono)] = RationalFunction.from_json(item["coeff"])
        return DiffPoly(terms)

    def __repr__(self):
        names = tuple(f"q{i}" for i in range(8))
        return f"DiffPoly[{self.text(names)}]"


DP_ZERO = DiffPoly({})
DP_ONE = DiffPoly({MONO_ONE: RF_ONE})


class EvoField:
    """Vector of differential polynomials, one per dependent variable."""

    __slots__ = ("components",)

    def __init__(self, components: Iterable[DiffPoly]):
        object.__setattr__(self, "components", tuple(components))

    def __setattr__(self, name, value):
        raise AttributeError("EvoField is immutable")

    def __getitem__(self, i) -> DiffPoly:
        return self.components[i]

    def __len__(self):
        return len(self.components)

    def __iter__(self):
        return iter(self.components)

    def __eq__(self, other):
        return isinstance(other, EvoField) and self.components == other.components

    def __hash__(self):
        return hash(self.components)

    @property
    def is_zero(self) -> bool:
        return all(c.is_zero for c in self.components)

    def __add__(self, other):
        return EvoField(a + b for a, b in zip(self.components, other.components))

    def __sub__(self, other):
        return EvoField(a - b for a, b in zip(self.components, other.components))

    def __neg__(self):
        return EvoField(-a for a in self.components)

    def scalar_mul(self, c) -> "EvoField":
        return EvoField(a.scalar_mul(c) for a in self.components)

    def max_jet_order(self) -> Optional[int]:
        orders = [c.max_jet_order() for c in self.components]
        orders = [o for o in orders if o is not None]
        return max(orders) if orders else None

    def contains_xt(self) -> bool:
        return any(c.contains_xt() for c in self.components)

    def specialize(self, value) -> "EvoField":
        return EvoField(c.specialize(value) for c in self.components)

    def text(self, names, param="alpha") -> str:
        return "(" + ", ".join(c.text(names, param) for c in self.components) + ")"

    def to_json(self):
        return [c.to_json() for c in self.components]

    @staticmethod
    def from_json(obj) -> "EvoField":
        return EvoField(DiffPoly.from_json(c) for c in obj)

    def __repr__(self):
        return f"EvoField({self.components!r})"


def total_x_derivative(f: DiffPoly) -> DiffPoly:
    """Module-level alias for the total derivative."""
    return f.dx()


def max_jet_order(f: DiffPoly) -> Optional[int]:
    return f.max_jet_order()


def specialize(f: DiffPoly, value) -> DiffPoly:
    return f.specialize(value)
