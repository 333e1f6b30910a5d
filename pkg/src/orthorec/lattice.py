"""Divided-difference operators acting on actual lattices.

A polynomial f in the basis variable X is pulled back to a function of an
auxiliary lattice coordinate, the half-step shifts are applied there, and
the result is converted back to a polynomial in X:

    basis        auxiliary variable      X in terms of it      half steps
    wilson       w (real variable)       w^2                   w -> w +- I/2
    hahn         w                       w                     w -> w +- I/2
    racah        u = s + (h+1)/2         u^2 - (h+1)^2/4       u -> u +- 1/2
    aw           z = q^s                 (z + 1/z)/2           z -> p z, z / p
    qracah       z = q^-s                z + h q / z           z -> z / p, p z

    D f = (f(s+1/2) - f(s-1/2)) / (X(s+1/2) - X(s-1/2)),
    S f = (f(s+1/2) + f(s-1/2)) / 2.

Nothing here uses the stored structure relations, so the two can be
cross-validated against each other.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import TYPE_CHECKING, Sequence

from .bases import BasisKind
from .kernel import (
    IMAG,
    KernelError,
    Poly,
    RatFunc,
    Symbol,
    SymbolKind,
    SymbolTable,
    substitute,
)

if TYPE_CHECKING:
    from .derive import PhiPsi
    from .identify import DDESolution
    from .parser import MonicForm, Recurrence

AUX = "_s"


class LatticeError(KernelError):
    """A lattice computation left the polynomial world (an exactness violation)."""


@dataclass
class LatticeRep:
    """A function on the lattice: a rational function of the auxiliary variable."""

    value: RatFunc
    lattice: "Lattice" = field(repr=False)

    def to_poly(self) -> RatFunc:
        return self.lattice.from_lattice(self.value)


class Lattice:
    """Operator data for one basis over a given symbol table.

    ``var`` names the basis variable inside ``table``; ``h`` is the lattice
    parameter value for the Racah (gamma+delta) and q-Racah (gamma*delta)
    lattices and is ignored otherwise.
    """

    def __init__(self, basis: BasisKind, table: SymbolTable, var: str, h=None):
        if var not in table:
            raise KernelError(f"basis variable {var!r} not in {table!r}")
        self.basis = basis
        self.base_table = table
        self.var = var
        syms = list(table.symbols)
        pos = next(i for i, s in enumerate(syms) if s.name == var) + 1
        syms.insert(pos, Symbol(AUX, SymbolKind.VARIABLE))
        self.table = SymbolTable(syms)
        T = self.table
        s = RatFunc(T.gen(AUX))
        if basis.has_lattice_parameter:
            if h is None:
                raise KernelError(f"{basis.value} lattice needs the parameter h")
            hv = table.ratfunc(h) if not isinstance(h, RatFunc) else h
            self.h = hv.to_table(T)
        else:
            self.h = None
        if basis == BasisKind.WILSON:
            half = RatFunc(T.gen(IMAG)) / 2
            self.embed = s * s
            self.plus, self.minus = s + half, s - half
            self.step = 2
        elif basis == BasisKind.POCHHAMMER:
            half = RatFunc(T.gen(IMAG)) / 2
            self.embed = s
            self.plus, self.minus = s + half, s - half
            self.step = 1
        elif basis == BasisKind.RACAH:
            self.embed = s * s - (self.h + 1) ** 2 / 4
            self.plus, self.minus = s + Fraction(1, 2), s - Fraction(1, 2)
            self.step = 2
        elif basis == BasisKind.ASKEY_WILSON:
            p = RatFunc(T.gen("p"))
            self.embed = (s * s + 1) / (2 * s)
            self.plus, self.minus = p * s, s / p
            self.step = 1
        else:
            p = RatFunc(T.gen("p"))
            q = RatFunc(T.gen("q"))
            self.embed = s + self.h * q / s
            self.plus, self.minus = s / p, p * s
            self.step = 1
        self._delta = self._shift(self.embed, +1) - self._shift(self.embed, -1)
        top = self._top(self.embed)
        self._embed_lead = top[1]
        self._embed_powers = [RatFunc(T.one())]

    # -- helpers ------------------------------------------------------------
    def _shift(self, r: RatFunc, sign: int) -> RatFunc:
        return substitute(r, {AUX: self.plus if sign > 0 else self.minus})

    def _top(self, r: RatFunc) -> tuple[int, RatFunc]:
        """(aux-degree, leading coefficient) of a Laurent-type rational function."""
        den_parts = r.den.coefficients(AUX)
        if len(den_parts) != 1:
            raise LatticeError(f"not a Laurent polynomial in the lattice variable: {r}")
        (dd, dc), = den_parts.items()
        dn = r.num.degree(AUX)
        return dn - dd, RatFunc(r.num.coefficient(AUX, dn), dc)

    def _embed_pow(self, m: int) -> RatFunc:
        while len(self._embed_powers) <= m:
            self._embed_powers.append(self._embed_powers[-1] * self.embed)
        return self._embed_powers[m]

    # -- conversions --------------------------------------------------------
    def to_lattice(self, f) -> RatFunc:
        r = f if isinstance(f, RatFunc) else RatFunc(f)
        r = r.to_table(self.table)
        if r.den.depends_on([self.var]):
            raise LatticeError("only polynomials in the basis variable can be pulled back")
        return substitute(r, {self.var: self.embed})

    def from_lattice(self, r: RatFunc) -> RatFunc:
        """Inverse of to_lattice; raises LatticeError if r is not in the image."""
        X = RatFunc(self.table.gen(self.var))
        result = RatFunc(self.table.zero())
        guard = 0
        while not r.is_zero():
            guard += 1
            if guard > 200:
                raise LatticeError("lattice conversion did not terminate")
            deg, lead = self._top(r)
            if deg < 0 or deg % self.step:
                raise LatticeError(f"lattice function is not a polynomial in the basis variable: {r}")
            m = deg // self.step
            c = lead / self._embed_lead**m
            result = result + c * X**m
            r = r - c * self._embed_pow(m)
        return result.to_table(self.base_table) if not result.depends_on([AUX]) else result

    # -- operators ----------------------------------------------------------
    def D(self, r: RatFunc) -> RatFunc:
        return (self._shift(r, +1) - self._shift(r, -1)) / self._delta

    def S(self, r: RatFunc) -> RatFunc:
        return (self._shift(r, +1) + self._shift(r, -1)) / 2

    def apply(self, f, ops: Sequence[str]) -> RatFunc:
        """Apply operators right-to-left as written, e.g. ("S", "D") means S(D f)."""
        r = self.to_lattice(f)
        for op in reversed(ops):
            if op == "D":
                r = self.D(r)
            elif op == "S":
                r = self.S(r)
            else:
                raise ValueError(f"unknown operator {op!r}")
        return self.from_lattice(r)


def apply_operator(f, op: str, basis: BasisKind, var: str = "x", h=None) -> RatFunc:
    """Apply D or S (or a word such as "DD", "SD") to a polynomial in ``var``."""
    table = f.table
    lat = Lattice(basis, table, var, h)
    return lat.apply(f, tuple(op))


# ---------------------------------------------------------------------------
# sequence generation and end-to-end verification
# ---------------------------------------------------------------------------

WITNESS_CANDIDATES = (Fraction(1), Fraction(2), Fraction(3), Fraction(5, 2))
DEFAULT_SEED = 20240521


def index_value(table: SymbolTable, case: str, k: int) -> RatFunc:
    """Value of the index symbol at n = k (N = q^k in the q-case)."""
    if case == "q":
        return RatFunc(table.gen("q")) ** k
    return table.ratfunc(k)


def _index_name(case: str) -> str:
    return "N" if case == "q" else "n"


def generate_from_monic(t: RatFunc, u: RatFunc, case: str, upto: int) -> list[RatFunc]:
    """p_0 .. p_upto from p_{n+1} = t_n p_n + u_n p_{n-1}, p_{-1} = 0, p_0 = 1."""
    if upto > 12:
        raise ValueError("generation is limited to n <= 12")
    T = t.table
    idx = _index_name(case)
    prev, cur = RatFunc(T.zero()), RatFunc(T.one())
    out = [cur]
    for k in range(upto):
        at = {idx: index_value(T, case, k)} if idx in T else {}
        try:
            tk = substitute(t, at) if at else t
            # u_0 multiplies p_{-1} = 0 and may be singular there
            uk = (substitute(u, at) if at else u) if k else None
        except KernelError as err:
            raise LatticeError(f"recurrence is singular at n = {k}: {err}") from err
        prev, cur = cur, tk * cur + (uk * prev if k else RatFunc(T.zero()))
        out.append(cur)
    return out


def generate_pn(rec: "Recurrence", upto: int) -> list[RatFunc]:
    """p_0 .. p_upto of a recurrence, in the index convention of its monic form."""
    from .parser import NotIdentifiable, to_monic_form

    monic = to_monic_form(rec)
    if isinstance(monic, NotIdentifiable):
        raise LatticeError(f"cannot generate: {monic.reason}")
    return generate_from_monic(monic.t, monic.u, monic.case, upto)


def _residual(lat: Lattice, pp: "PhiPsi", lam_k: RatFunc, poly: RatFunc) -> RatFunc:
    X = RatFunc(lat.base_table.gen(lat.var))
    phi = pp.a * X * X + pp.b * X + pp.c
    psi = pp.d * X + pp.e
    r = lat.to_lattice(poly)
    d1 = lat.D(r)
    dd = lat.from_lattice(lat.D(d1))
    sd = lat.from_lattice(lat.S(d1))
    return phi * dd + psi * sd + lam_k * poly


def dde_residuals(pp: "PhiPsi", lam: RatFunc, polys: Sequence[RatFunc], basis: BasisKind,
                  var: str, h=None) -> list[RatFunc]:
    """phi D^2 P_n + psi S D P_n + lambda_n P_n for each P_n in ``polys``."""
    T = pp.table
    lat = Lattice(basis, T, var, h)
    idx = _index_name(basis.case)
    out = []
    for k, poly in enumerate(polys):
        lam_k = substitute(lam, {idx: index_value(T, basis.case, k)}) if idx in T else lam
        out.append(_residual(lat, pp, lam_k, poly.to_table(T)))
    return out


def difference_coefficients(lat: Lattice, pp: "PhiPsi") -> tuple[RatFunc, RatFunc]:
    """B(s), D(s) of the equivalent full-step difference equation.

    Solves psi = (x(s) - x(s+1)) B + (x(s) - x(s-1)) D together with
    phi = -(1/2)(x(s+1/2) - x(s-1/2))((x(s+1) - x(s)) B + (x(s) - x(s-1)) D).
    """
    x0 = lat.embed
    xp = lat._shift(lat._shift(x0, +1), +1)
    xm = lat._shift(lat._shift(x0, -1), -1)
    a, b, c, d, e = (v.to_table(lat.table) for v in pp.values())
    phi = a * x0 * x0 + b * x0 + c
    psi = d * x0 + e
    # with P = (x(s+1) - x(s)) B and M = (x(s) - x(s-1)) D:
    #   psi = -P + M,  -2 phi / delta = P + M
    w = -2 * phi / lat._delta
    P = (w - psi) / 2
    M = (w + psi) / 2
    return P / (xp - x0), M / (x0 - xm)


def difference_residual(lat: Lattice, pp: "PhiPsi", lam_k: RatFunc, poly: RatFunc) -> RatFunc:
    """B y(s+1) - (B + D) y(s) + D y(s-1) - lambda y(s), as a lattice function."""
    B, D = difference_coefficients(lat, pp)
    y = lat.to_lattice(poly)
    yp = lat._shift(lat._shift(y, +1), +1)
    ym = lat._shift(lat._shift(y, -1), -1)
    return B * yp - (B + D) * y + D * ym - lam_k.to_table(lat.table) * y


@dataclass
class VerifyRow:
    n: int
    ok: bool
    residual: RatFunc

    def to_json(self) -> dict:
        from .printing import format_ratfunc

        row = {"n": self.n, "status": "ok" if self.ok else "nonzero residual"}
        if not self.ok:
            row["residual"] = format_ratfunc(self.residual)
        return row


@dataclass
class VerifyReport:
    rows: list[VerifyRow]
    witnesses: dict[str, Fraction]
    singular_at: int | None = None  # p_n undefined under the constraints from here on

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.rows)

    def first_failure(self) -> VerifyRow | None:
        return next((r for r in self.rows if not r.ok), None)

    def to_json(self) -> dict:
        return {
            "rows": [r.to_json() for r in self.rows],
            "witnesses": {k: str(v) for k, v in self.witnesses.items()},
            "singular_at": self.singular_at,
            "ok": self.ok,
        }


def choose_witnesses(conditions: Sequence[Poly], names: Sequence[str], seed: int = DEFAULT_SEED,
                     tries: int = 500) -> dict[str, Fraction]:
    """Rational values for ``names`` keeping every condition nonzero.

    Candidates from WITNESS_CANDIDATES are tried first (in product order),
    then seeded random rationals.
    """
    names = list(names)
    if not names:
        return {}

    def good(vals):
        return all(not c.subs(vals).is_zero() for c in conditions)

    for combo in itertools.product(WITNESS_CANDIDATES, repeat=len(names)):
        vals = dict(zip(names, combo))
        if good(vals):
            return vals
    rng = random.Random(seed)
    for _ in range(tries):
        vals = {v: Fraction(rng.randint(-40, 40), rng.randint(1, 12)) for v in names}
        if good(vals):
            return vals
    raise LatticeError("no witness found for the nonvanishing conditions")


def verify_dde(rec: "Recurrence", sol: "DDESolution", upto: int = 5,
               seed: int = DEFAULT_SEED) -> VerifyReport:
    """Check the identified equation on p_0 .. p_upto with the actual operators.

    Parameter bindings are substituted symbolically; symbols occurring in a
    nonvanishing condition get seeded rational witnesses; everything else
    stays symbolic, so a zero residual is an identity in those symbols.
    """
    from .parser import NotIdentifiable, to_monic_form

    monic = to_monic_form(rec)
    if isinstance(monic, NotIdentifiable):
        raise LatticeError(f"cannot verify: {monic.reason}")
    return verify_monic(monic, sol, upto, seed)


def verify_monic(monic: "MonicForm", sol: "DDESolution", upto: int = 5,
                 seed: int = DEFAULT_SEED) -> VerifyReport:
    """verify_dde for an already normalized recurrence."""
    T = sol.pp.table
    involved = sorted({v for c in sol.nonzero for v in c.variables()}, key=T.index)
    involved = [v for v in involved if v not in ("I", "p", "q")]
    wit = choose_witnesses(sol.nonzero, involved, seed)
    bind = {k: v for k, v in sol.parameter_bindings.items()}
    wbind = {k: T.ratfunc(v) for k, v in wit.items()}

    def inst(r: RatFunc) -> RatFunc:
        r = r.to_table(T)
        if bind:
            r = substitute(r, bind)
        return substitute(r, wbind) if wbind else r

    pp = sol.pp.substitute({**bind, **wbind}) if (bind or wbind) else sol.pp
    lam = inst(sol.lam)
    f, g = inst(sol.f), inst(sol.g)
    h = inst(sol.lattice) if sol.lattice is not None else None
    # generate for generic parameters, then specialize: binding first would
    # resolve 0/0 coefficients at small n by continuity in n instead
    generic = generate_from_monic(monic.t, monic.u, monic.case, upto)
    var = monic.variable
    y = RatFunc(T.gen(var))
    back = {var: (y - g) / f}  # P_n(y) = p_n(x) with y = f x + g
    polys = []
    singular_at = None
    for k, p in enumerate(generic):
        try:
            polys.append(substitute(inst(p), back))
        except KernelError:
            singular_at = k
            break
    res = dde_residuals(pp, lam, polys, sol.basis, var, h)
    rows = [VerifyRow(k, r.is_zero(), r) for k, r in enumerate(res)]
    return VerifyReport(rows, wit, singular_at)


__all__ = [
    "AUX",
    "DEFAULT_SEED",
    "Lattice",
    "LatticeError",
    "LatticeRep",
    "VerifyReport",
    "VerifyRow",
    "apply_operator",
    "choose_witnesses",
    "dde_residuals",
    "difference_coefficients",
    "difference_residual",
    "generate_from_monic",
    "generate_pn",
    "index_value",
    "verify_dde",
    "verify_monic",
]
