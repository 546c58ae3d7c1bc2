"""Exact arithmetic in Q and Q(parameter), plus exact linear algebra.

The coefficient field everywhere is the field of univariate rational
functions in a single formal parameter over Q.  Values are immutable and
kept fully reduced: gcd(num, den) = 1 and den monic, so equal field
elements have identical representations.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .errors import DivisionByZero, PoleAtParameter

# Arbitrary-precision rationals: numerator/denominator coprime, denominator
# positive, zero stored as 0/1.  fractions.Fraction guarantees all three.
BigRational = Fraction

#: degree of the zero polynomial; compares below every integer degree
NEG_INF = float("-inf")


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"cannot coerce {value!r} to a rational number")


class AlphaPoly:
    """Polynomial in the parameter with rational coefficients, dense ascending."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [_as_fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("AlphaPoly is immutable")

    @staticmethod
    def const(value) -> "AlphaPoly":
        return AlphaPoly((value,))

    @staticmethod
    def param() -> "AlphaPoly":
        return AlphaPoly((0, 1))

    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> Fraction:
        if not self.coeffs:
            return Fraction(0)
        return self.coeffs[-1]

    def __eq__(self, other):
        return isinstance(other, AlphaPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __neg__(self):
        return AlphaPoly(tuple(-c for c in self.coeffs))

    def __add__(self, other):
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return AlphaPoly(out)

    def __sub__(self, other):
        out = list(self.coeffs)
        b = other.coeffs
        if len(out) < len(b):
            out.extend([Fraction(0)] * (len(b) - len(out)))
        for i, c in enumerate(b):
            out[i] -= c
        return AlphaPoly(out)

    def __mul__(self, other):
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return _APOLY_ZERO
        if len(a) == 1:
            c = a[0]
            return AlphaPoly(tuple(c * x for x in b))
        if len(b) == 1:
            c = b[0]
            return AlphaPoly(tuple(c * x for x in a))
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if ca:
                for j, cb in enumerate(b):
                    out[i + j] += ca * cb
        return AlphaPoly(out)

    def scale(self, q: Fraction) -> "AlphaPoly":
        if q == 0:
            return _APOLY_ZERO
        return AlphaPoly(tuple(q * c for c in self.coeffs))

    def monic(self) -> "AlphaPoly":
        if not self.coeffs:
            return self
        lead = self.coeffs[-1]
        if lead == 1:
            return self
        return self.scale(1 / lead)

    def divmod(self, other: "AlphaPoly"):
        """Exact polynomial division with remainder."""
        if other.is_zero:
            raise DivisionByZero("polynomial division by zero")
        rem = list(self.coeffs)
        ob = other.coeffs
        dq = len(rem) - len(ob)
        if dq < 0:
            return _APOLY_ZERO, self
        quo = [Fraction(0)] * (dq + 1)
        olead = ob[-1]
        for i in range(dq, -1, -1):
            c = rem[i + len(ob) - 1]
            if c:
                q = c / olead
                quo[i] = q
                for j, oc in enumerate(ob):
                    rem[i + j] -= q * oc
        return AlphaPoly(quo), AlphaPoly(rem)

    def __floordiv__(self, other):
        q, _ = self.divmod(other)
        return q

    def gcd(self, other: "AlphaPoly") -> "AlphaPoly":
        """Monic gcd via the Euclidean algorithm."""
        a, b = self, other
        while not b.is_zero:
            _, r = a.divmod(b)
            a, b = b, r
        return a.monic()

    def eval(self, value: Fraction) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * value + c
        return acc

    def pow(self, n: int) -> "AlphaPoly":
        out = _APOLY_ONE
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def int_scale(self) -> Fraction:
        """Rational r such that r * self has coprime integer coefficients
        and a positive leading coefficient."""
        if not self.coeffs:
            return Fraction(1)
        from math import gcd, lcm
        den = lcm(*(c.denominator for c in self.coeffs))
        num = gcd(*(c.numerator for c in self.coeffs))
        r = Fraction(den, num)
        return -r if self.coeffs[-1] < 0 else r

    def text(self, param: str = "alpha") -> str:
        """Human form, descending degree, e.g. ``2*alpha - 1``."""
        if not self.coeffs:
            return "0"
        parts = []
        for deg in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[deg]
            if c == 0:
                continue
            if deg == 0:
                body = str(abs(c))
            else:
                mag = abs(c)
                head = "" if mag == 1 else f"{mag}*"
                body = f"{head}{param}" if deg == 1 else f"{head}{param}^{deg}"
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(f"+ {body}" if c > 0 else f"- {body}")
        return " ".join(parts)

    def __repr__(self):
        return f"AlphaPoly({self.text()})"


_APOLY_ZERO = AlphaPoly()
_APOLY_ONE = AlphaPoly((1,))
_ONE_COEFFS = (Fraction(1),)


class RationalFunction:
    """Element of the field Q(parameter), always in canonical reduced form."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        if isinstance(num, (int, Fraction, str)):
            num = AlphaPoly.const(_as_fraction(num))
        if den is None:
            den = _APOLY_ONE
        elif isinstance(den, (int, Fraction, str)):
            den = AlphaPoly.const(_as_fraction(den))
        num, den = _reduce(num, den)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):
        raise AttributeError("RationalFunction is immutable")

    @staticmethod
    def _raw(num: AlphaPoly, den: AlphaPoly) -> "RationalFunction":
        """Trusted constructor: arguments already canonical."""
        rf = object.__new__(RationalFunction)
        object.__setattr__(rf, "num", num)
        object.__setattr__(rf, "den", den)
        return rf

    @staticmethod
    def from_fraction(q) -> "RationalFunction":
        q = _as_fraction(q)
        if q == 0:
            return RF_ZERO
        if q == 1:
            return RF_ONE
        return RationalFunction._raw(AlphaPoly.const(q), _APOLY_ONE)

    @staticmethod
    def param() -> "RationalFunction":
        return RationalFunction._raw(AlphaPoly.param(), _APOLY_ONE)

    @property
    def is_zero(self) -> bool:
        return not self.num.coeffs

    @property
    def is_constant(self) -> bool:
        return len(self.num.coeffs) <= 1 and self.den.coeffs == _ONE_COEFFS

    def constant_value(self) -> Fraction:
        if not self.is_constant:
            raise ValueError("not a constant rational function")
        return self.num.coeffs[0] if self.num.coeffs else Fraction(0)

    def __eq__(self, other):
        return (isinstance(other, RationalFunction)
                and self.num.coeffs == other.num.coeffs
                and self.den.coeffs == other.den.coeffs)

    def __hash__(self):
        return hash((self.num.coeffs, self.den.coeffs))

    def __neg__(self):
        if self.is_zero:
            return self
        return RationalFunction._raw(-self.num, self.den)

    def __add__(self, other):
        if not isinstance(other, RationalFunction):
            return NotImplemented
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        if self.den.coeffs == _ONE_COEFFS and other.den.coeffs == _ONE_COEFFS:
            num = self.num + other.num
            if not num.coeffs:
                return RF_ZERO
            return RationalFunction._raw(num, _APOLY_ONE)
        if self.den.coeffs == other.den.coeffs:
            return RationalFunction(self.num + other.num, self.den)
        return RationalFunction(self.num * other.den + other.num * self.den,
                                self.den * other.den)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            q = _as_fraction(other)
            if q == 0 or self.is_zero:
                return RF_ZERO
            return RationalFunction._raw(self.num.scale(q), self.den)
        if not isinstance(other, RationalFunction):
            return NotImplemented
        if self.is_zero or other.is_zero:
            return RF_ZERO
        if self.den.coeffs == _ONE_COEFFS and other.den.coeffs == _ONE_COEFFS:
            return RationalFunction._raw(self.num * other.num, _APOLY_ONE)
        # cross-reduce before multiplying to keep the degrees down
        g1 = self.num.gcd(other.den)
        g2 = other.num.gcd(self.den)
        n1 = self.num if g1.degree <= 0 else self.num // g1
        d2 = other.den if g1.degree <= 0 else other.den // g1
        n2 = other.num if g2.degree <= 0 else other.num // g2
        d1 = self.den if g2.degree <= 0 else self.den // g2
        return RationalFunction(n1 * n2, d1 * d2)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return self * other.inverse()

    def inverse(self) -> "RationalFunction":
        if self.is_zero:
            raise DivisionByZero("inverse of zero in the coefficient field")
        num, den = self.den, self.num
        lead = den.leading
        if lead != 1:
            num = num.scale(1 / lead)
            den = den.scale(1 / lead)
        return RationalFunction._raw(num, den)

    def pow(self, n: int) -> "RationalFunction":
        if n < 0:
            return self.inverse().pow(-n)
        out = RF_ONE
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def eval(self, value) -> Fraction:
        """Exact value at a parameter point; raises at a pole."""
        value = _as_fraction(value)
        dv = self.den.eval(value)
        if dv == 0:
            shown = self.den.scale(self.den.int_scale())
            raise PoleAtParameter(value, shown.text())
        return self.num.eval(value) / dv

    def text(self, param: str = "alpha") -> str:
        if self.den.coeffs == _ONE_COEFFS:
            return self.num.text(param)
        # display with an integer-primitive denominator, e.g. 2*alpha - 1
        r = self.den.int_scale()
        num = self.num.scale(r)
        den = self.den.scale(r)
        return f"({num.text(param)})/({den.text(param)})"

    def to_json(self):
        return {"num": [str(c) for c in self.num.coeffs],
                "den": [str(c) for c in self.den.coeffs]}

    @staticmethod
    def from_json(obj) -> "RationalFunction":
        return RationalFunction(AlphaPoly(obj["num"]), AlphaPoly(obj["den"]))

    def __repr__(self):
        return f"RF({self.text()})"


def _reduce(num: AlphaPoly, den: AlphaPoly):
    """Canonicalize num/den: reduced fraction with monic denominator."""
    if den.is_zero:
        raise DivisionByZero("zero denominator in rational function")
    if num.is_zero:
        return _APOLY_ZERO, _APOLY_ONE
    if den.degree > 0:
        g = num.gcd(den)
        if g.degree > 0:
            num = num // g
            den = den // g
    lead = den.leading
    if lead != 1:
        num = num.scale(1 / lead)
        den = den.scale(1 / lead)
    return num, den


RF_ZERO = RationalFunction._raw(_APOLY_ZERO, _APOLY_ONE)
RF_ONE = RationalFunction._raw(_APOLY_ONE, _APOLY_ONE)


def rf(value) -> RationalFunction:
    """Coerce an int, Fraction, or string to a constant field element."""
    if isinstance(value, RationalFunction):
        return value
    return RationalFunction.from_fraction(_as_fraction(value))


# ---------------------------------------------------------------------------
# Exact linear algebra
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LinearSolution:
    """Full affine solution set of A x = b over the coefficient field."""

    consistent: bool
    particular: Optional[tuple]
    nullspace: tuple

    @property
    def nullity(self) -> int:
        return len(self.nullspace)


def sparse_rref(rows: list, ncols: int):
    """Reduced row echelon form of sparse rows (dicts col -> RF).

    Mutates nothing; returns (pivot_rows, pivot_cols) where pivot_rows[i]
    is a dict with a leading 1 in pivot_cols[i] and zeros in every other
    pivot column.  Rows are combined with fully reduced rational-function
    arithmetic, which in practice keeps the entry degrees small.
    """
    work = [dict(r) for r in rows if r]
    # occupancy: column -> set of row indices currently containing it
    occ: dict = {}
    for idx, r in enumerate(work):
        for c in r:
            occ.setdefault(c, set()).add(idx)
    pivot_rows: list = []
    pivot_cols: list = []
    for col in range(ncols):
        holders = occ.get(col)
        if not holders:
            continue
        # choose the sparsest available row for this pivot
        ridx = min(holders, key=lambda i: (len(work[i]), i))
        row = work[ridx]
        inv = row[col].inverse()
        row = {c: v * inv for c, v in row.items()}
        row[col] = RF_ONE
        # retire the chosen row from the worklist
        for c in work[ridx]:
            occ[c].discard(ridx)
        work[ridx] = {}
        # eliminate this column from every remaining row
        for other_idx in list(occ.get(col, ())):
            other = work[other_idx]
            factor = other.pop(col)
            occ[col].discard(other_idx)
            for c, v in row.items():
                if c == col:
                    continue
                cur = other.get(c)
                nv = v * (-factor) if cur is None else cur - factor * v
                if nv is None or nv.is_zero:
                    if cur is not None:
                        del other[c]
                        occ[c].discard(other_idx)
                else:
                    if cur is None:
                        occ.setdefault(c, set()).add(other_idx)
                    other[c] = nv
        # eliminate from previously found pivot rows (full RREF)
        for prow in pivot_rows:
            factor = prow.pop(col, None)
            if factor is None:
                continue
            for c, v in row.items():
                if c == col:
                    continue
                cur = prow.get(c)
                nv = v * (-factor) if cur is None else cur - factor * v
                if nv is None or nv.is_zero:
                    if cur is not None:
                        del prow[c]
                else:
                    prow[c] = nv
        pivot_rows.append(row)
        pivot_cols.append(col)
    return pivot_rows, pivot_cols


def solve_linear(A: Sequence[Sequence[RationalFunction]],
                 b: Sequence[RationalFunction]) -> LinearSolution:
    """Solve A x = b exactly; returns particular solution and nullspace basis.

    Inconsistency is a reportable outcome, not an exception.
    """
    nrows = len(A)
    if len(b) != nrows:
        raise ValueError("matrix and right-hand side dimensions differ")
    ncols = len(A[0]) if nrows else 0
    for row in A:
        if len(row) != ncols:
            raise ValueError("ragged matrix")
    rhs_col = ncols  # augmented column
    rows = []
    for i in range(nrows):
        r = {j: A[i][j] for j in range(ncols) if not A[i][j].is_zero}
        if not b[i].is_zero:
            r[rhs_col] = b[i]
        rows.append(r)
    pivot_rows, pivot_cols = sparse_rref(rows, ncols + 1)
    if pivot_cols and pivot_cols[-1] == rhs_col:
        return LinearSolution(False, None, ())
    pivot_of = dict(zip(pivot_cols, pivot_rows))
    free_cols = [c for c in range(ncols) if c not in pivot_of]
    particular = [RF_ZERO] * ncols
    for c, row in pivot_of.items():
        particular[c] = row.get(rhs_col, RF_ZERO)
    nullspace = []
    for f in free_cols:
        vec = [RF_ZERO] * ncols
        vec[f] = RF_ONE
        for c, row in pivot_of.items():
            coeff = row.get(f)
            if coeff is not None:
                vec[c] = -coeff
        nullspace.append(tuple(vec))
    return LinearSolution(True, tuple(particular), tuple(nullspace))
