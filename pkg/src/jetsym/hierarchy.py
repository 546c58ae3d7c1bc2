"""Hierarchy generation: the two-term recursion for the Burgers-type
system (fs) and the triangular recursion for ts1, plus the scaling
symmetry and the leading-linear structural check.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple

from .coeffield import AlphaPoly, RF_ONE, RationalFunction, rf
from .errors import StructuralViolation
from .jetalgebra import (DiffPoly, EvoField, T_GEN, X_GEN, is_jet, jet,
                         jet_order, mono_degree2)
from .operators import OperatorMatrix, OpTerm
from .systems import EvolutionSystem, builtin_system, parse_expression
from .varcalc import ExactnessCertificate

_FS_VARS = ("w", "z")
_S_POLY = AlphaPoly((-1, 2))  # 2*alpha - 1


def _fs_expr(src: str) -> DiffPoly:
    return parse_expression(src, _FS_VARS, "alpha")


def _over_s(num_coeffs) -> RationalFunction:
    """Rational function (polynomial in alpha) / (2*alpha - 1)."""
    return RationalFunction(AlphaPoly(num_coeffs), _S_POLY)


def fs_seed() -> Tuple[EvoField, EvoField]:
    """The two seed symmetries of the Burgers-type system.

    The second component of the second seed carries
    +4z(alpha*w_x + (2alpha+1)w^2)/(2alpha-1): with the minus sign the
    field fails the symmetry condition, which is checked in the tests.
    """
    k1 = EvoField((_fs_expr("w_x"), _fs_expr("z_x")))
    k2_1 = _fs_expr("w_xx + 8*w*w_x").scalar_mul(_over_s((-1,))) \
        + _fs_expr("2*z*z_x")
    k2_2 = _fs_expr("z_xx + 4*w*z_x - 2*z^3") \
        + _fs_expr("alpha*z*w_x + (2*alpha + 1)*z*w^2").scalar_mul(_over_s((4,)))
    return k1, EvoField((k2_1, k2_2))


def recursion_matrix() -> OperatorMatrix:
    """First-order matrix of the two-term recursion (applied to K_{n-1})."""
    one = DiffPoly.constant(RF_ONE)
    return OperatorMatrix([
        [
            (OpTerm(one, 1),
             OpTerm(_fs_expr("4*w"), 0),
             OpTerm(_fs_expr("4*w_x"), -1)),
            (),
        ],
        [
            (OpTerm(_fs_expr("2*z_x - 4*w*z"), -1),),
            (OpTerm(one, 1), OpTerm(_fs_expr("2*w"), 0)),
        ],
    ])


def second_recursion_matrix() -> OperatorMatrix:
    """Second-order lag matrix of the two-term recursion (applied to K_{n-2})."""
    m11 = (
        OpTerm(DiffPoly.constant(_over_s((0, -1))), 2),
        OpTerm(_fs_expr("w").scalar_mul(_over_s((0, -8))), 1),
        OpTerm(_fs_expr("6*alpha*w_x + 8*alpha*w^2").scalar_mul(_over_s((-2,)))
               + _fs_expr("2*z^2"), 0),
        OpTerm(_fs_expr("alpha*w_xx + 8*alpha*w*w_x").scalar_mul(_over_s((-4,)))
               + _fs_expr("4*z*z_x"), -1),
    )
    m12 = (OpTerm(_fs_expr("z"), 1), OpTerm(_fs_expr("z_x"), 0))
    m21 = (
        OpTerm(_fs_expr("z").scalar_mul(_over_s((0, 2))), 1),
        OpTerm(_fs_expr("w*z").scalar_mul(_over_s((0, 16))), 0),
        OpTerm(_fs_expr("w_x*z + 4*w^2*z").scalar_mul(_over_s((0, 8)))
               + _fs_expr("-4*z^3"), -1),
    )
    m22 = (OpTerm(_fs_expr("-2*z^2"), 0),)
    return OperatorMatrix([[m11, m12], [m21, m22]])


def _specialize_matrix(M: OperatorMatrix, value) -> OperatorMatrix:
    return OperatorMatrix([
        [tuple(OpTerm(t.coeff.specialize(value), t.power) for t in entry)
         for entry in row]
        for row in M.entries])


@dataclass(frozen=True)
class StepCertificates:
    """Im D_x witnesses consumed by one recursion step."""

    n: int
    prev: ExactnessCertificate
    prevprev: ExactnessCertificate


@dataclass(frozen=True)
class TriangularCoeffs:
    """Leading coefficients b_n and tails Q_n of the triangular hierarchy."""

    b: Tuple[RationalFunction, ...]  # b[0] unused, b[n] for member n
    Q: Tuple[DiffPoly, ...]


@dataclass(frozen=True)
class Hierarchy:
    """Generated symmetries K_1..K_N with provenance and certificates."""

    system: EvolutionSystem
    members: Tuple[EvoField, ...]
    provenance: Tuple[str, ...]
    certificates: Tuple[StepCertificates, ...]
    specialized_at: Optional[Fraction] = None
    triangular: Optional[TriangularCoeffs] = None

    def __len__(self):
        return len(self.members)

    def member(self, n: int) -> EvoField:
        """1-indexed access matching the K_n numbering."""
        return self.members[n - 1]

    def to_json(self):
        out = {
            "system": self.system.name,
            "parameter": self.system.parameter,
            "specialized_at": str(self.specialized_at)
            if self.specialized_at is not None else None,
            "members": [m.to_json() for m in self.members],
            "provenance": list(self.provenance),
            "certificates": [
                {"n": c.n,
                 "prev": c.prev.antiderivative.to_json(),
                 "prevprev": c.prevprev.antiderivative.to_json()}
                for c in self.certificates],
        }
        if self.triangular is not None:
            out["b_sequence"] = [b.to_json() for b in self.triangular.b[1:]]
        return out

    @staticmethod
    def from_json(obj) -> "Hierarchy":
        system = builtin_system(obj["system"])
        spec_at = obj.get("specialized_at")
        value = None
        if spec_at is not None:
            value = Fraction(spec_at)
            system = system.specialize(value)
        members = tuple(EvoField.from_json(m) for m in obj["members"])
        certs = tuple(
            StepCertificates(
                c["n"],
                ExactnessCertificate(DiffPoly.from_json(c["prev"]), DiffPoly({})),
                ExactnessCertificate(DiffPoly.from_json(c["prevprev"]), DiffPoly({})))
            for c in obj.get("certificates", ()))
        triangular = None
        if "b_sequence" in obj:
            bs = (rf(0),) + tuple(RationalFunction.from_json(b)
                                  for b in obj["b_sequence"])
            triangular = TriangularCoeffs(bs, ())
        return Hierarchy(system, members, tuple(obj.get("provenance", ())),
                         certs, value, triangular)


def fs_step(kprev: EvoField, kprevprev: EvoField,
            rec: Optional[OperatorMatrix] = None,
            m: Optional[OperatorMatrix] = None):
    """One application of the two-term recursion; returns (K_n, certificates)."""
    rec = rec if rec is not None else recursion_matrix()
    m = m if m is not None else second_recursion_matrix()
    first, certs1 = rec.apply_detailed(kprev)
    second, certs2 = m.apply_detailed(kprevprev)
    return first + second, certs1.get(0), certs2.get(0)


def fs_hierarchy(N: int, alpha0: Optional[Fraction] = None) -> Hierarchy:
    """Members K_1..K_N of the Burgers-type hierarchy.

    With alpha0 the whole computation runs over Q after specializing the
    seeds and both matrices; specializing at a pole of any seed
    coefficient raises PoleAtParameter.
    """
    if N < 1:
        raise ValueError("hierarchy length must be at least 1")
    system = builtin_system("fs")
    k1, k2 = fs_seed()
    rec, m = recursion_matrix(), second_recursion_matrix()
    if alpha0 is not None:
        alpha0 = Fraction(alpha0)
        k1, k2 = k1.specialize(alpha0), k2.specialize(alpha0)
        rec = _specialize_matrix(rec, alpha0)
        m = _specialize_matrix(m, alpha0)
        system = system.specialize(alpha0)
    members = [k1, k2][:N]
    provenance = ["seed", "seed"][:N]
    certificates = []
    while len(members) < N:
        n = len(members) + 1
        kn, cert_prev, cert_prevprev = fs_step(members[-1], members[-2], rec, m)
        members.append(kn)
        provenance.append("recursion")
        certificates.append(StepCertificates(n, cert_prev, cert_prevprev))
    return Hierarchy(system, tuple(members), tuple(provenance),
                     tuple(certificates), alpha0)


def triangular_coeffs(N: int) -> TriangularCoeffs:
    """b_n and Q_n sequences: b_1 = 1, b_2 = a, b_n = b_{n-1} - (1-a) b_{n-2}/2;
    Q_1 = 0, Q_2 = v^2, Q_n = D_x Q_{n-1} - ((1-a)/2) D_x^2 Q_{n-2} + v v_{n-2}.
    Index 0 of both sequences is an unused placeholder.
    """
    a = RationalFunction.param()
    half_one_minus_a = (rf(1) - a) * rf(Fraction(1, 2))
    b = [rf(0), rf(1), a]
    v = 1
    q = [DiffPoly.zero(), DiffPoly.zero(),
         DiffPoly.var(jet(v, 0)) * DiffPoly.var(jet(v, 0))]
    for n in range(3, N + 1):
        b.append(b[n - 1] - half_one_minus_a * b[n - 2])
        vterm = DiffPoly.var(jet(v, 0)) * DiffPoly.var(jet(v, n - 2))
        q.append(q[n - 1].dx() - q[n - 2].dx_iter(2).scalar_mul(half_one_minus_a)
                 + vterm)
    return TriangularCoeffs(tuple(b[:N + 1]), tuple(q[:N + 1]))


def ts1_hierarchy(N: int, a0: Optional[Fraction] = None) -> Hierarchy:
    """Members G_n = (b_n u_n + Q_n, v_n) of the triangular hierarchy."""
    if N < 1:
        raise ValueError("hierarchy length must be at least 1")
    system = builtin_system("ts1")
    coeffs = triangular_coeffs(N)
    members = []
    for n in range(1, N + 1):
        comp1 = DiffPoly.var(jet(0, n)).scalar_mul(coeffs.b[n]) + coeffs.Q[n]
        comp2 = DiffPoly.var(jet(1, n))
        members.append(EvoField((comp1, comp2)))
    provenance = tuple("seed" if n <= 2 else "recursion" for n in range(1, N + 1))
    specialized = None
    if a0 is not None:
        specialized = Fraction(a0)
        system = system.specialize(specialized)
        members = [m.specialize(specialized) for m in members]
        coeffs = TriangularCoeffs(
            tuple(rf(b.eval(specialized)) if not b.is_zero else rf(0)
                  for b in coeffs.b),
            tuple(q.specialize(specialized) for q in coeffs.Q))
    return Hierarchy(system, tuple(members), provenance, (), specialized, coeffs)


def scaling_symmetry(alpha0: Optional[Fraction] = None) -> EvoField:
    """S = 2t(1-2alpha) K_2 + x K_1 + (w, z)."""
    k1, k2 = fs_seed()
    t = DiffPoly.var(T_GEN)
    x = DiffPoly.var(X_GEN)
    two_t = t.scalar_mul(RationalFunction(AlphaPoly((2, -4))))  # 2(1-2alpha) t
    comps = []
    for c in range(2):
        comps.append(two_t * k2[c] + x * k1[c] + DiffPoly.var(jet(c, 0)))
    s = EvoField(comps)
    if alpha0 is not None:
        s = s.specialize(alpha0)
    return s


@dataclass(frozen=True)
class StructuralForm:
    """Leading linear coefficients of a symmetry in the canonical shape."""

    order: int
    leading: Tuple[RationalFunction, ...]


def structural_check(K: EvoField, j: int) -> StructuralForm:
    """Verify K = (alpha_j w_j + tail1, beta_j z_j + tail2) with tails of
    order < j containing neither free nor linear terms; returns the
    leading coefficients, raises StructuralViolation otherwise.
    """
    if K.contains_xt():
        raise StructuralViolation("field depends explicitly on x or t")
    leading = []
    for c, comp in enumerate(K.components):
        lead_mono = ((jet(c, j), 2),)
        lead = comp.coefficient(lead_mono)
        tail = comp - DiffPoly.gen_power(jet(c, j), 2, lead)
        top = tail.max_jet_order()
        if top is not None and top >= j:
            offender = next(m for m in tail.terms
                            if any(is_jet(g) and jet_order(g) >= j for g, _ in m))
            raise StructuralViolation(
                f"component {c} tail contains a jet of order >= {j}",
                monomial=offender, component=c)
        if not tail.free_term().is_zero:
            raise StructuralViolation(
                f"component {c} tail has a free term", monomial=(), component=c)
        for mono in tail.terms:
            if mono_degree2(mono) == 2:
                raise StructuralViolation(
                    f"component {c} tail has a linear term",
                    monomial=mono, component=c)
        leading.append(lead)
    return StructuralForm(j, tuple(leading))
