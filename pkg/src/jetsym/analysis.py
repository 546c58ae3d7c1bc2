"""Verification suite: symmetry condition, commutativity tables, conserved
densities (classification, bounded search, decomposition), and the
linearizing-substitution check.

Everything here works over the generic parameter field, so nonzero
polynomials in the parameter are invertible and no genericity case
analysis is needed; specializations are separate explicit runs.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Optional, Tuple

from .coeffield import RF_ONE, RF_ZERO, RationalFunction, rf, sparse_rref
from .errors import (AnsatzTooLarge, ExplicitXTDependence, NotDecomposable,
                     StructuralViolation)
from .hierarchy import Hierarchy, scaling_symmetry, structural_check
from .jetalgebra import DiffPoly, EvoField, MONO_ONE, jet
from .systems import EvolutionSystem, builtin_system
from .varcalc import (DxChain, ExactnessCertificate, commutator, dt_along,
                      euler_operator, frechet, integrate_dx)

DEFAULT_UNKNOWN_CAP = 20000


def _unknown_cap() -> int:
    env = os.environ.get("JETSYM_MAX_UNKNOWNS")
    return int(env) if env else DEFAULT_UNKNOWN_CAP


def _poly_scaled(field: EvoField):
    """Scale a field by the lcm of its coefficient denominators.

    Brackets and symmetry defects are linear in each argument over
    constants, so zero checks may run on the scaled field, where every
    coefficient operation stays in the fast polynomial path.  Returns
    (scaled field, scalar), scalar = 1 when nothing was cleared.
    """
    from .coeffield import AlphaPoly
    den = AlphaPoly((1,))
    for comp in field:
        for coeff in comp.terms.values():
            if coeff.den.degree > 0:
                g = den.gcd(coeff.den)
                den = den * (coeff.den // g)
    if den.degree <= 0:
        return field, RF_ONE
    c = RationalFunction(den)
    return field.scalar_mul(c), c


# ---------------------------------------------------------------------------
# Symmetry condition
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SymmetryCheck:
    ok: bool
    defect: EvoField


def symmetry_defect(K: EvoField, system: EvolutionSystem) -> EvoField:
    """D_t(K) - F'[K]; identically zero exactly for symmetries."""
    scaled, scale = _poly_scaled(K)
    chain_f = DxChain(system.rhs)
    chain_k = DxChain(scaled)
    comps = []
    for c in range(len(K)):
        comps.append(scaled[c].partial_t()
                     + frechet(scaled[c], system.rhs, chain_f)
                     - frechet(system.rhs[c], scaled, chain_k))
    defect = EvoField(comps)
    if not defect.is_zero and not scale == RF_ONE:
        defect = defect.scalar_mul(scale.inverse())
    return defect


def is_symmetry(K: EvoField, system: EvolutionSystem) -> SymmetryCheck:
    defect = symmetry_defect(K, system)
    return SymmetryCheck(defect.is_zero, defect)


# ---------------------------------------------------------------------------
# Commutativity
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CommutativityTable:
    size: int
    zero: Tuple[Tuple[bool, ...], ...]
    failures: Tuple  # ((i, j), defect EvoField) pairs, 1-indexed

    @property
    def all_zero(self) -> bool:
        return not self.failures


def commutativity_table(h: Hierarchy) -> CommutativityTable:
    """All-pairs commutators of the hierarchy members.

    Members are scaled to polynomial coefficients first; the bracket is
    bilinear over constants, so the zero pattern is unchanged and any
    nonzero bracket is divided back before reporting.
    """
    n = len(h.members)
    scaled = [_poly_scaled(m) for m in h.members]
    chains = [DxChain(m) for m, _ in scaled]
    zero = [[True] * n for _ in range(n)]
    failures = []
    for i in range(n):
        for j in range(i + 1, n):
            (f, cf), (g, cg) = scaled[i], scaled[j]
            bracket = EvoField(
                frechet(g[c], f, chains[i]) - frechet(f[c], g, chains[j])
                for c in range(len(f)))
            if not bracket.is_zero:
                zero[i][j] = zero[j][i] = False
                failures.append(((i + 1, j + 1),
                                 bracket.scalar_mul((cf * cg).inverse())))
    return CommutativityTable(n, tuple(tuple(r) for r in zero), tuple(failures))


# ---------------------------------------------------------------------------
# Conserved densities
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DensityClassification:
    status: str  # "trivial" | "nontrivial" | "not_conserved"
    dt_certificate: ExactnessCertificate
    rho_certificate: Optional[ExactnessCertificate]


def is_conserved_density(rho: DiffPoly, system: EvolutionSystem) -> DensityClassification:
    """Classify rho: conserved iff D_t(rho) is exact, trivial iff rho is."""
    if rho.contains_xt():
        raise ExplicitXTDependence("density classification needs x,t-free input")
    dt = dt_along(rho, system)
    dt_cert = integrate_dx(dt)
    # independent cross-check: the Euler images must agree with the remainder
    if dt_cert.is_exact:
        for d in range(system.nvars):
            assert euler_operator(dt, d).is_zero, "exactness oracles disagree"
    if not dt_cert.is_exact:
        return DensityClassification("not_conserved", dt_cert, None)
    rho_cert = integrate_dx(rho)
    status = "trivial" if rho_cert.is_exact else "nontrivial"
    return DensityClassification(status, dt_cert, rho_cert)


def density_decompose(rho: DiffPoly, system: Optional[EvolutionSystem] = None):
    """Split a conserved density as c * w + D_x(exact part), exactly.

    The Euler image with respect to the first variable must be the
    constant c and the second Euler image must vanish; anything else
    raises NotDecomposable.
    """
    if rho.contains_xt():
        raise ExplicitXTDependence("decomposition needs x,t-free input")
    e_w = euler_operator(rho, 0)
    e_z = euler_operator(rho, 1)
    if not e_z.is_zero or any(m != MONO_ONE for m in e_w.terms):
        raise NotDecomposable("density is not constant * w modulo Im D_x")
    c = e_w.free_term()
    resid = rho - DiffPoly.var(jet(0, 0)).scalar_mul(c)
    cert = integrate_dx(resid)
    if not cert.is_exact:
        raise NotDecomposable("residual after removing constant * w is inexact")
    return c, cert.antiderivative


@dataclass(frozen=True)
class DensityAnsatz:
    """Monomial densities bounded in jet order and total degree."""

    max_order: int
    max_degree: int

    def monomials(self, system: EvolutionSystem):
        gens = [jet(d, i) for d in range(system.nvars)
                for i in range(self.max_order + 1)]
        monos = [MONO_ONE]
        for deg in range(1, self.max_degree + 1):
            for combo in combinations_with_replacement(gens, deg):
                counts: dict = {}
                for g in combo:
                    counts[g] = counts.get(g, 0) + 2
                monos.append(tuple(sorted(counts.items())))
        return monos


@dataclass(frozen=True)
class TrivialDensity:
    density: DiffPoly
    constant_part: RationalFunction
    certificate: ExactnessCertificate


@dataclass(frozen=True)
class DensityReport:
    system_name: str
    ansatz: DensityAnsatz
    unknowns: int
    solution_dimension: int
    nontrivial_basis: Tuple[DiffPoly, ...]
    trivial_parts: Tuple[TrivialDensity, ...]

    @property
    def nontrivial_dimension(self) -> int:
        return len(self.nontrivial_basis)

    def to_json(self):
        return {
            "system": self.system_name,
            "max_order": self.ansatz.max_order,
            "max_degree": self.ansatz.max_degree,
            "unknowns": self.unknowns,
            "solution_dimension": self.solution_dimension,
            "nontrivial_dimension": self.nontrivial_dimension,
            "nontrivial_basis": [b.to_json() for b in self.nontrivial_basis],
            "trivial_parts": [
                {"density": t.density.to_json(),
                 "constant_part": t.constant_part.to_json(),
                 "antiderivative": t.certificate.antiderivative.to_json()}
                for t in self.trivial_parts],
        }


def density_search(system: EvolutionSystem, ansatz: DensityAnsatz,
                   cap: Optional[int] = None) -> DensityReport:
    """Exact search for conserved densities within the ansatz.

    Sets up the Euler images of D_t(rho) as a homogeneous linear system
    over the coefficient field, solves it exactly, and reduces the
    solution space modulo Im D_x and constants: basis elements whose own
    Euler images vanish are exact up to their free term and reported
    with certificates, the rest form the nontrivial quotient basis.
    """
    if ansatz.max_order < 0 or ansatz.max_degree < 0:
        raise ValueError("ansatz bounds must be nonnegative")
    cap = cap if cap is not None else _unknown_cap()
    monos = ansatz.monomials(system)
    if len(monos) > cap:
        raise AnsatzTooLarge(len(monos), cap)
    nvars = system.nvars
    # assemble: one equation per (euler variable, image monomial)
    rows: dict = {}
    for col, m in enumerate(monos):
        rho_m = DiffPoly({m: RF_ONE})
        dt = dt_along(rho_m, system)
        for d in range(nvars):
            image = euler_operator(dt, d)
            for mu, coeff in image.terms.items():
                rows.setdefault((d, mu), {})[col] = coeff
    pivot_rows, pivot_cols = sparse_rref(list(rows.values()), len(monos))
    pivot_of = dict(zip(pivot_cols, pivot_rows))
    free_cols = [c for c in range(len(monos)) if c not in pivot_of]
    solution_dim = len(free_cols)
    # nullspace basis, one density per free column
    densities = []
    for fcol in free_cols:
        terms = {monos[fcol]: RF_ONE}
        for pcol, prow in pivot_of.items():
            coeff = prow.get(fcol)
            if coeff is not None and not coeff.is_zero:
                terms[monos[pcol]] = -coeff
        densities.append(DiffPoly(terms))
    # quotient modulo Im D_x and constants via Euler images; the reduced
    # combination is tracked so Euler-trivial leftovers can be certified
    nontrivial = []
    trivial = []
    reducers = []  # (pivot key, normalized image row, matching density)
    for rho in densities:
        image: dict = {}
        for d in range(nvars):
            for mu, coeff in euler_operator(rho, d).terms.items():
                image[(d, mu)] = coeff
        combo = rho
        for key, row, dens in reducers:
            coeff = image.get(key)
            if coeff is None or coeff.is_zero:
                continue
            combo = combo - dens.scalar_mul(coeff)
            for k2, v2 in row.items():
                cur = image.get(k2, RF_ZERO) - coeff * v2
                if cur.is_zero:
                    image.pop(k2, None)
                else:
                    image[k2] = cur
        image = {k: v for k, v in image.items() if not v.is_zero}
        if image:
            key = min(image)
            inv = image[key].inverse()
            row = {k: v * inv for k, v in image.items()}
            reducers.append((key, row, combo.scalar_mul(inv)))
            nontrivial.append(rho)
        else:
            const = combo.free_term()
            cert = integrate_dx(combo - DiffPoly.constant(const))
            assert cert.is_exact, "Euler-trivial density failed integration"
            trivial.append(TrivialDensity(combo, const, cert))
    return DensityReport(system.name, ansatz, len(monos), solution_dim,
                         tuple(nontrivial), tuple(trivial))


# ---------------------------------------------------------------------------
# Linearizing substitution
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SubstitutionReport:
    ok: bool
    defects: Tuple[DiffPoly, DiffPoly]


def substitution_check(alpha0: Optional[Fraction] = None,
                       w_image: Optional[DiffPoly] = None,
                       z_image: Optional[DiffPoly] = None) -> SubstitutionReport:
    """Check that w = u_x/(4u), z = -v/(2 sqrt u) maps the triangular
    system into the Burgers-type system, as an identity of
    Laurent-half-integer differential polynomials in the (u, v) jets.

    The optional images override the substitution (used by mutation
    tests); exponents are handled on the half-integer lattice of u.
    """
    ts = builtin_system("ts")
    fs = builtin_system("fs")
    if alpha0 is not None:
        ts = ts.specialize(alpha0)
        fs = fs.specialize(alpha0)
    u, v = 0, 1
    if w_image is None:
        w_image = DiffPoly({((jet(u, 0), -2), (jet(u, 1), 2)): rf(Fraction(1, 4))})
    if z_image is None:
        z_image = DiffPoly({((jet(u, 0), -1), (jet(v, 0), 2)): rf(Fraction(-1, 2))})
    images = {0: [w_image], 1: [z_image]}
    order = fs.rhs.max_jet_order() or 0
    for d in (0, 1):
        for _ in range(order):
            images[d].append(images[d][-1].dx())

    def push(expr: DiffPoly) -> DiffPoly:
        from .jetalgebra import DP_ZERO, jet_depvar, jet_order
        acc = DP_ZERO
        for mono, coeff in expr.terms.items():
            term = DiffPoly.constant(coeff)
            for g, e2 in mono:
                base = images[jet_depvar(g)][jet_order(g)]
                power = e2 // 2
                for _ in range(power):
                    term = term * base
            acc = acc + term
        return acc

    d1 = dt_along(w_image, ts) - push(fs.rhs[0])
    d2 = dt_along(z_image, ts) - push(fs.rhs[1])
    return SubstitutionReport(d1.is_zero and d2.is_zero, (d1, d2))


# ---------------------------------------------------------------------------
# Hierarchy verification checklist
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CheckResult:
    name: str
    ok: bool
    detail: str = ""
    defect: object = None  # canonical JSON of the offending field, on failure

    def to_json(self):
        out = {"name": self.name, "status": "pass" if self.ok else "fail",
               "detail": self.detail}
        if self.defect is not None:
            out["defect"] = self.defect
        return out


@dataclass(frozen=True)
class VerificationReport:
    checks: Tuple[CheckResult, ...]

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def to_json(self):
        return {"ok": self.ok, "checks": [c.to_json() for c in self.checks]}

    def to_text(self) -> str:
        lines = []
        for c in self.checks:
            status = "PASS" if c.ok else "FAIL"
            suffix = f"  {c.detail}" if c.detail else ""
            lines.append(f"[{status}] {c.name}{suffix}")
        lines.append(f"overall: {'PASS' if self.ok else 'FAIL'}")
        return "\n".join(lines)


def verify_hierarchy(h: Hierarchy) -> VerificationReport:
    """The full verification checklist for a generated hierarchy."""
    checks = []
    system = h.system
    names = system.depvars
    param = system.parameter or "alpha"
    is_fs = system.name == "fs"
    for n in range(1, len(h.members) + 1):
        res = is_symmetry(h.member(n), system)
        detail = "" if res.ok else f"defect {res.defect.text(names, param)}"
        checks.append(CheckResult(f"symmetry K_{n}", res.ok, detail,
                                  None if res.ok else res.defect.to_json()))
    table = commutativity_table(h)
    detail = "" if table.all_zero else \
        "nonzero at " + ", ".join(str(p) for p, _ in table.failures)
    checks.append(CheckResult(
        "pairwise commutativity", table.all_zero, detail,
        None if table.all_zero else table.failures[0][1].to_json()))
    for n in range(1, len(h.members) + 1):
        try:
            form = structural_check(h.member(n), n)
            lead_ok = all(not c.is_zero for c in form.leading)
            checks.append(CheckResult(
                f"structural form K_{n}", lead_ok,
                "leading " + ", ".join(c.text(param) for c in form.leading)))
        except StructuralViolation as exc:
            checks.append(CheckResult(f"structural form K_{n}", False, str(exc)))
    if is_fs:
        s = scaling_symmetry(h.specialized_at)
        for n in range(1, len(h.members) + 1):
            k = h.member(n)
            defect = commutator(s, k) - k.scalar_mul(n)
            checks.append(CheckResult(f"scaling homogeneity [S, K_{n}] = {n} K_{n}",
                                      defect.is_zero))
        for n in range(1, len(h.members) + 1):
            try:
                c, _ = density_decompose(h.member(n)[0], system)
                ok = c.is_zero
                checks.append(CheckResult(
                    f"density decomposition of K_{n}^1 has zero w-part", ok,
                    "" if ok else f"constant part {c.text(param)}"))
            except NotDecomposable as exc:
                checks.append(CheckResult(
                    f"density decomposition of K_{n}^1 has zero w-part",
                    False, str(exc)))
        for cert in h.certificates:
            ok1 = cert.prev.antiderivative.dx() == h.member(cert.n - 1)[0]
            ok2 = cert.prevprev.antiderivative.dx() == h.member(cert.n - 2)[0]
            checks.append(CheckResult(
                f"Im D_x certificates for step {cert.n}", ok1 and ok2))
        # recursion steps only consume antiderivatives of earlier members,
        # so certify the first components of the trailing members directly
        start = max(len(h.members) - 1, 1)
        for n in range(start, len(h.members) + 1):
            cert = integrate_dx(h.member(n)[0])
            checks.append(CheckResult(
                f"K_{n}^1 lies in Im D_x", cert.is_exact,
                "" if cert.is_exact else "nonzero remainder",
                None if cert.is_exact else cert.remainder.to_json()))
    if system.name == "ts1" and h.triangular is not None:
        bs = h.triangular.b
        ok = True
        detail = ""
        for n in range(1, len(h.members) + 1):
            lead = h.member(n)[0].coefficient(((jet(0, n), 2),))
            if n < len(bs) and lead != bs[n]:
                ok = False
                detail = f"u_{n} coefficient differs from b_{n}"
                break
        checks.append(CheckResult("triangular leading coefficients", ok, detail))
        if len(bs) > 3:
            a_rf = (rf(h.specialized_at) if h.specialized_at is not None
                    else RationalFunction.param())
            rec_ok = all(
                bs[n] == bs[n - 1] - (rf(1) - a_rf) * rf(Fraction(1, 2)) * bs[n - 2]
                for n in range(3, len(bs)))
            checks.append(CheckResult("b recurrence", rec_ok))
    return VerificationReport(tuple(checks))
