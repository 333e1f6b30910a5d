"""Inverse direction: recurrence -> divided-difference equation.

The input recurrence is brought to monic form

    P_{n+1} = (x + Bin_n) P_n - Cin_n P_{n-1}.

A solution of phi D^2 y + psi S D y + lambda_n y = 0 in the variable
y = f x + g has monic recurrence coefficients Bt_n(a..e), Ct_n(a..e) from the
derivation engine, so we need

    Bt_n(a..e) = f Bin_n - g,        Ct_n(a..e) = f^2 Cin_n.

Clearing denominators and equating coefficients of powers of n (or N = q^n)
gives a polynomial system in a..e, f, g.  Since Bt and Ct are homogeneous of
degree 0 in (a..e), the scaling is fixed by two gauges: d = 1, then d = 0
with a = 1.  Every branch returned by the solver is checked by running the
forward engine on it.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from functools import reduce

from .bases import (
    LATTICE,
    QUADRATIC,
    UNKNOWNS,
    BasisKind,
    make_table,
    merge_tables,
    normalize_case,
    shift_index,
)
from .derive import DegenerateFamily, PhiPsi, generic_ttrr, lambda_closed_form, ttrr_coeffs
from .groebner import PolySystem, SolutionBranch, solve_system
from .lattice import verify_monic
from .kernel import KernelError, Poly, RatFunc, Symbol, SymbolKind, SymbolTable, exact_divide, poly_gcd, substitute
from .parser import MonicForm, NotIdentifiable, Recurrence, parse_expression, to_monic_form
from .printing import format_poly, format_ratfunc

F, G = "_f", "_g"
NO_SOLUTION = "no classical orthogonal polynomial solution exists"
CHECK_UPTO = 3  # lattice check of each returned branch on p_0 .. p_3

# (num Bt, den Bt, num Ct, den Ct) bounds in n or N
DEGREE_GATES = {
    BasisKind.WILSON: (4, 2, 8, 4),
    BasisKind.RACAH: (4, 2, 8, 4),
    BasisKind.POCHHAMMER: (2, 2, 7, 5),
    BasisKind.ASKEY_WILSON: (3, 4, 14, 14),
    BasisKind.QRACAH: (3, 4, 12, 12),
}


@dataclass
class DDESolution:
    basis: BasisKind
    pp: PhiPsi
    lam: RatFunc
    f: RatFunc
    g: RatFunc
    k_ratio: RatFunc
    lattice: RatFunc | None = None
    parameter_bindings: dict[str, RatFunc] = field(default_factory=dict)
    nonzero: list[Poly] = field(default_factory=list)
    free: list[str] = field(default_factory=list)
    gauge: str = ""
    caveats: list[str] = field(default_factory=list)

    @property
    def constraints(self) -> list[str]:
        out = [f"{k} = {format_ratfunc(v)}" for k, v in self.parameter_bindings.items()]
        out += [f"{format_poly(p)} != 0" for p in self.nonzero]
        return out

    def specialize(self, values: dict) -> "DDESolution":
        """Instantiate free unknowns (e.g. ``{"_g": 0}``); other fields follow."""
        T = self.pp.table
        bind = {k: T.ratfunc(v) if not isinstance(v, RatFunc) else v.to_table(T) for k, v in values.items()}

        def sub(r):
            return substitute(r, bind) if r is not None else None

        return DDESolution(
            self.basis,
            self.pp.substitute(bind),
            sub(self.lam),
            sub(self.f),
            sub(self.g),
            sub(self.k_ratio),
            sub(self.lattice),
            {k: sub(v) for k, v in self.parameter_bindings.items()},
            [c for c in (substitute(RatFunc(c), bind).num for c in self.nonzero) if not c.is_constant()],
            [u for u in self.free if u not in bind],
            self.gauge,
            list(self.caveats),
        )

    def to_json(self) -> dict:
        pp = self.pp
        out = {
            "basis": self.basis.value,
            "phi": [format_ratfunc(v) for v in (pp.a, pp.b, pp.c)],
            "psi": [format_ratfunc(v) for v in (pp.d, pp.e)],
            "lambda_n": format_ratfunc(self.lam),
            "f": format_ratfunc(self.f),
            "g": format_ratfunc(self.g),
            "k_ratio": format_ratfunc(self.k_ratio),
            "constraints": self.constraints,
            "free": list(self.free),
            "gauge": self.gauge,
            "caveats": list(self.caveats),
        }
        if self.lattice is not None:
            out["lattice"] = format_ratfunc(self.lattice)
        return out


@dataclass
class IdentifyResult:
    basis: BasisKind
    solutions: list[DDESolution]
    negative_reasons: list[str]
    monic: MonicForm | None
    seconds: float = 0.0

    @property
    def positive(self) -> bool:
        return bool(self.solutions)

    def __iter__(self):
        return iter(self.solutions)

    def __len__(self):
        return len(self.solutions)


# ---------------------------------------------------------------------------
# setup
# ---------------------------------------------------------------------------


def monic_coefficients(monic: MonicForm) -> tuple[RatFunc, RatFunc, RatFunc]:
    """(A_n, Bin_n, Cin_n): leading ratio and monic recurrence coefficients."""
    A, B, C = monic.split()
    idx = monic.index_name
    return A, B / A, C / (A * shift_index(A, -1, idx))


def _gate(basis: BasisKind, b: RatFunc, c: RatFunc, idx: str) -> str | None:
    nb, db, nc, dc = DEGREE_GATES[basis]
    checks = (
        (b.num.degree(idx), nb, "numerator of Bt_n"),
        (b.den.degree(idx), db, "denominator of Bt_n"),
        (c.num.degree(idx), nc, "numerator of Ct_n"),
        (c.den.degree(idx), dc, "denominator of Ct_n"),
    )
    for deg, bound, what in checks:
        if deg > bound:
            return f"degree of the {what} is {deg} > {bound}"
    return None


def _identification_table(basis: BasisKind, rec_table: SymbolTable) -> SymbolTable:
    gen = generic_ttrr(basis).table
    extra = SymbolTable([Symbol(F, SymbolKind.UNKNOWN), Symbol(G, SymbolKind.UNKNOWN)])
    return merge_tables(rec_table, gen, extra)


def _unknown_order(basis: BasisKind, gauge: dict) -> list[str]:
    order = ["_c", "_b", "_e", "_a", "_d"]
    if basis.has_lattice_parameter:
        order.append(LATTICE)
    order += [G, F]
    return [u for u in order if u not in gauge]


def _coefficient_equations(expr: Poly, idx: str) -> list[Poly]:
    return [c for c in expr.coefficients(idx).values() if not c.is_zero()]


def build_system(basis: BasisKind, b_in: RatFunc, c_in: RatFunc, gauge: dict, parameters: list[str]):
    """Polynomial system for one gauge; returns (PolySystem, table)."""
    T = _identification_table(basis, b_in.table)
    gen = generic_ttrr(basis)
    bind = {k: T.ratfunc(v) for k, v in gauge.items()}
    b_eng = substitute(gen.b_tilde.to_table(T), bind)
    c_eng = substitute(gen.c_tilde.to_table(T), bind)
    b_in = b_in.to_table(T)
    c_in = c_in.to_table(T)
    f, g = T.gen(F), T.gen(G)
    idx = basis.index_name
    eq_b = b_eng.num * b_in.den - b_eng.den * (f * b_in.num - g * b_in.den)
    eq_c = c_eng.num * c_in.den - c_eng.den * f * f * c_in.num
    eqs = _coefficient_equations(eq_b, idx) + _coefficient_equations(eq_c, idx)
    unknowns = _unknown_order(basis, gauge) + list(parameters)
    return PolySystem(eqs, unknowns, [f]), T


# ---------------------------------------------------------------------------
# branch post-processing
# ---------------------------------------------------------------------------


def _content_free(values: list[RatFunc], table: SymbolTable) -> list[RatFunc]:
    """Scale jointly so all entries are polynomials without common factor."""
    dens = [v.den for v in values if not v.is_zero()]
    if not dens:
        return values
    L = reduce(lambda a, b: exact_divide(a * b, poly_gcd(a, b)), dens)
    scaled = [v * L for v in values]
    nums = [v.as_poly() for v in scaled if not v.is_zero()]
    common = reduce(poly_gcd, nums)
    out = [v / common for v in scaled]
    # make the first nonzero of (a, d, b, c, e) have positive leading coefficient
    lead = next(out[i] for i in (0, 3, 1, 2, 4) if i < len(out) and not out[i].is_zero())
    if lead.num.leading_coefficient() < 0:
        out = [-v for v in out]
    return out


def _branch_to_solution(
    basis: BasisKind,
    br: SolutionBranch,
    T: SymbolTable,
    gauge: dict,
    A_in: RatFunc,
    b_in: RatFunc,
    c_in: RatFunc,
    parameters: list[str],
    gauge_name: str,
) -> tuple[DDESolution | None, str | None]:
    if br.equations:
        eqs = ", ".join(format_poly(p) for p in br.equations)
        return None, f"unresolved algebraic constraints: {eqs}"
    vals = {}
    for u in UNKNOWNS:
        if u in gauge:
            vals[u] = T.ratfunc(gauge[u])
        else:
            vals[u] = br.value(u, T)
    f = br.value(F, T)
    g = br.value(G, T)
    h = br.value(LATTICE, T) if basis.has_lattice_parameter else None
    pbind = {p: br.bindings[p] for p in parameters if p in br.bindings}
    nonzero = [p for p in br.nonzero if p != T.gen(F)]
    order = list(UNKNOWNS) + [LATTICE, G, F]
    free = [u for u in br.free if u in order]
    if gauge.get("_d") == 1 and "_a" in free:
        # present the cone: a free a in the d = 1 gauge becomes the pair (a, d)
        d = RatFunc(T.gen("_d"))
        hom = {"_a": RatFunc(T.gen("_a")) / d}
        vals = {u: substitute(v, hom) * d for u, v in vals.items()}
        vals["_d"] = d
        f, g = substitute(f, hom), substitute(g, hom)
        h = substitute(h, hom) if h is not None else None
        pbind = {k: substitute(v, hom) for k, v in pbind.items()}
        nonzero = [substitute(p, hom).num for p in nonzero]
        nonzero.append(d.num)
        free = sorted(set(free) | {"_d"}, key=order.index)
    if f.is_zero():
        return None, "transform degenerates (f = 0)"
    if vals["_a"].is_zero() and vals["_d"].is_zero():
        return None, "only a = d = 0"
    # input coefficients under the parameter bindings
    try:
        b_loc = substitute(b_in.to_table(T), pbind) if pbind else b_in.to_table(T)
        c_loc = substitute(c_in.to_table(T), pbind) if pbind else c_in.to_table(T)
        a_loc = substitute(A_in.to_table(T), pbind) if pbind else A_in.to_table(T)
    except KernelError:
        return None, "parameter values make the input recurrence singular"
    if c_loc.is_zero():
        return None, "parameter values make C_n vanish identically"
    scaled = _content_free([vals[u] for u in UNKNOWNS], T)
    pp = PhiPsi(*scaled)
    # soundness: forward engine on the found coefficients
    try:
        fwd = ttrr_coeffs(basis, pp, h=h)
    except (DegenerateFamily, KernelError) as err:
        return None, f"forward check failed: {err}"
    fwd_b = fwd.b_tilde.to_table(T)
    fwd_c = fwd.c_tilde.to_table(T)
    if not ((fwd_b - (f * b_loc - g)).is_zero() and (fwd_c - f * f * c_loc).is_zero()):
        return None, "forward check failed: recurrence not reproduced"
    lam = lambda_closed_form(basis, T, pp.a, pp.d)
    sol = DDESolution(
        basis, pp, lam, f, g, a_loc / f, h, pbind, nonzero, free, gauge_name,
    )
    return sol, None


def identify_monic(
    monic: MonicForm,
    basis: BasisKind,
    strict: bool = True,
    budget: int | None = None,
    check_upto: int = CHECK_UPTO,
) -> IdentifyResult:
    t0 = time.perf_counter()
    if normalize_case(monic.case) != basis.case:
        raise ValueError(f"basis {basis.value} needs the {basis.case} case")
    A, b_in, c_in = monic_coefficients(monic)
    # the gates bound degrees for generic parameters; in non-strict mode a
    # parameter binding may cancel factors, so there the solver decides
    reason = _gate(basis, b_in, c_in, basis.index_name) if strict else None
    if reason:
        return IdentifyResult(basis, [], [f"{NO_SOLUTION}: {reason}"], monic, time.perf_counter() - t0)
    params = [] if strict else monic.table.names_of_kind(SymbolKind.PARAMETER)
    solutions: list[DDESolution] = []
    reasons: list[str] = []
    for gauge_name, gauge in (("d=1", {"_d": 1}), ("d=0,a=1", {"_d": 0, "_a": 1})):
        system, T = build_system(basis, b_in, c_in, gauge, params)
        for br in solve_system(system, budget=budget):
            sol, why = _branch_to_solution(basis, br, T, gauge, A, b_in, c_in, params, gauge_name)
            if sol is not None:
                if not any(_same_solution(sol, s) for s in solutions):
                    sol.caveats = _low_degree_caveats(monic, sol, check_upto)
                    solutions.append(sol)
            elif why:
                reasons.append(f"{gauge_name}: {why}")
    if not solutions:
        reasons.insert(0, NO_SOLUTION)
    return IdentifyResult(basis, solutions, reasons, monic, time.perf_counter() - t0)


def _low_degree_caveats(monic: MonicForm, sol: DDESolution, upto: int) -> list[str]:
    """Lattice check of p_0 .. p_upto.

    The coefficient identities are identities of rational functions in n; when
    the equation's own coefficients have a removable singularity at a small
    index (e.g. lambda_0 = lambda_{-1}), the recurrence can still differ from
    the equation's polynomial solutions in the first steps. Such branches are
    kept and flagged here.
    """
    if upto < 1:
        return []
    try:
        report = verify_monic(monic, sol, upto)
    except KernelError as err:
        return [f"lattice check not possible: {err}"]
    out = []
    bad = report.first_failure()
    if bad is not None:
        out.append(f"lattice check fails at n = {bad.n}: the recurrence differs from the "
                   f"equation's polynomial solutions in the first steps")
    if report.singular_at is not None:
        out.append(f"p_n is undefined under the constraints from n = {report.singular_at}")
    return out


def _same_solution(a: DDESolution, b: DDESolution) -> bool:
    return (
        a.pp.values() == b.pp.values()
        and a.f == b.f
        and a.g == b.g
        and a.parameter_bindings.keys() == b.parameter_bindings.keys()
        and all(a.parameter_bindings[k] == b.parameter_bindings[k] for k in a.parameter_bindings)
    )


def identification_table(basis: BasisKind, monic: MonicForm) -> SymbolTable:
    """Symbol table that printed solutions for ``monic`` live in."""
    return _identification_table(basis, monic.table)


def solution_from_json(data: dict, monic: MonicForm) -> DDESolution:
    """Read back a solution printed by DDESolution.to_json."""
    basis = BasisKind.parse(data["basis"])
    T = _identification_table(basis, monic.table)

    def rf(text: str) -> RatFunc:
        return parse_expression(text, basis.case, table=T, allow_reserved=True)

    phi = [rf(t) for t in data["phi"]]
    psi = [rf(t) for t in data["psi"]]
    bindings: dict[str, RatFunc] = {}
    nonzero: list[Poly] = []
    for c in data.get("constraints", []):
        if c.endswith("!= 0"):
            nonzero.append(rf(c[: -len("!= 0")]).num)
        else:
            name, _, value = c.partition("=")
            bindings[name.strip()] = rf(value)
    lattice = rf(data["lattice"]) if data.get("lattice") is not None else None
    return DDESolution(
        basis,
        PhiPsi(*phi, *psi),
        rf(data["lambda_n"]),
        rf(data["f"]),
        rf(data["g"]),
        rf(data["k_ratio"]),
        lattice,
        bindings,
        nonzero,
        list(data.get("free", [])),
        data.get("gauge", ""),
        list(data.get("caveats", [])),
    )


def identify(rec: Recurrence, basis: BasisKind, strict: bool = True, budget: int | None = None,
             n_probe: int = 10, check_upto: int = CHECK_UPTO) -> IdentifyResult:
    """Classical solutions of ``rec`` expanded in ``basis`` (possibly none)."""
    if normalize_case(rec.case) != basis.case:
        raise ValueError(f"basis {basis.value} needs the {basis.case} case")
    monic = to_monic_form(rec, n_probe)
    if isinstance(monic, NotIdentifiable):
        return IdentifyResult(basis, [], [f"{NO_SOLUTION}: {monic.reason}"], None)
    return identify_monic(monic, basis, strict, budget, check_upto)


def identify_all(rec: Recurrence, strict: bool = True, budget: int | None = None,
                 n_probe: int = 10, check_upto: int = CHECK_UPTO) -> dict[BasisKind, IdentifyResult]:
    """Run every basis of the recurrence's case (fixed basis order)."""
    return {b: identify(rec, b, strict, budget, n_probe, check_upto)
            for b in BasisKind.for_case(normalize_case(rec.case))}


__all__ = [
    "DDESolution",
    "IdentifyResult",
    "NO_SOLUTION",
    "DEGREE_GATES",
    "build_system",
    "identify",
    "identify_all",
    "identify_monic",
    "identification_table",
    "solution_from_json",
    "monic_coefficients",
    "make_table",
    "QUADRATIC",
]
