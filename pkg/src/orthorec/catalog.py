"""Named families with their divided-difference equations.

phi(X) = a X^2 + b X + c and psi(X) = d X + e are stored as expression
strings in the basis variable x and parsed on demand.  Quantities that are
not rational in the parameters are carried as opaque parameters:

    cs, sn      cos(theta), sin(theta)            (Meixner-Pollaczek)
    t           exp(i theta_hat)                  (continuous q-Hahn, q-Meixner-Pollaczek)
    pa, pb      q^(alpha/2), q^(beta/2)           (continuous q-Jacobi, q-Laguerre)
    rp          q^(1/4)
    qN          q^N                               (dual q-Hahn, dual q-Krawtchouk)

``lattice`` is the lattice parameter of the Racah (gamma + delta) and
q-Racah (gamma * delta) bases.  ``witness`` holds rational parameter values
used by tests that need a numeric instance (points on the unit circle for
cos/sin).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .bases import BasisKind, make_table
from .derive import PhiPsi, lambda_closed_form
from .kernel import KernelError, RatFunc, SymbolKind, SymbolTable
from .parser import parse_expression
from .printing import format_ratfunc

VARIABLE = "x"

AW_PHI = "(q-1)^2/(4*q^(3/2))"
AW_PSI = "(q-1)/(2*q)"
QR_PHI = "(q-1)^2/(2*q^(3/2))"
QR_PSI = "(q-1)/q"


class CatalogError(KernelError, LookupError):
    pass


@dataclass(frozen=True)
class _FamilyDef:
    name: str
    basis: BasisKind
    parameters: tuple[str, ...]
    phi: str
    psi: str
    lam: str | None = None  # printed eigenvalue, when given with the family
    lattice: str | None = None
    witness: tuple[tuple[str, Fraction], ...] = ()
    reference: str | None = None


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    basis: BasisKind
    parameters: tuple[str, ...]
    table: SymbolTable
    pp: PhiPsi
    lam: RatFunc
    lattice: RatFunc | None
    witness: dict = field(default_factory=dict)
    printed_lambda: RatFunc | None = None
    reference: str | None = None

    @property
    def case(self) -> str:
        return self.basis.case

    def to_json(self) -> dict:
        pp = self.pp
        out = {
            "name": self.name,
            "case": self.case,
            "basis": self.basis.value,
            "parameters": list(self.parameters),
            "phi": [format_ratfunc(v) for v in (pp.a, pp.b, pp.c)],
            "psi": [format_ratfunc(v) for v in (pp.d, pp.e)],
            "lambda_n": format_ratfunc(self.lam),
        }
        if self.lattice is not None:
            out["lattice"] = format_ratfunc(self.lattice)
        return out


def _w(**kw) -> tuple:
    return tuple((k, Fraction(v)) for k, v in kw.items())


_WILSON_REFERENCE = (
    "-(a^2+x)*p(n) = A*p(n+1) - (A+C)*p(n) + C*p(n-1) with "
    "A = (n+a+b+c+d-1)*(n+a+b)*(n+a+c)*(n+a+d)/((2*n+a+b+c+d-1)*(2*n+a+b+c+d)), "
    "C = n*(n+b+c-1)*(n+b+d-1)*(n+c+d-1)/((2*n+a+b+c+d-2)*(2*n+a+b+c+d-1))"
)

_SPECS = [
    _FamilyDef(
        "wilson", BasisKind.WILSON, ("a", "b", "c", "d"),
        "x^2 - (c*d+a*b+a*c+b*c+b*d+a*d)*x + a*b*c*d",
        "(a+b+c+d)*x - a*b*c - a*b*d - a*c*d - b*c*d",
        lam="-n*(n-1+a+b+c+d)",
        witness=_w(a=Fraction(1, 3), b=Fraction(2, 5), c=Fraction(3, 7), d=Fraction(5, 11)),
        reference=_WILSON_REFERENCE,
    ),
    _FamilyDef(
        "continuous-dual-hahn", BasisKind.WILSON, ("a", "b", "c"),
        "-(a+b+c)*x + a*b*c",
        "x - (b*c+a*b+a*c)",
        lam="-n",
        witness=_w(a=Fraction(1, 3), b=Fraction(2, 5), c=Fraction(3, 7)),
    ),
    _FamilyDef(
        "continuous-hahn", BasisKind.POCHHAMMER, ("a", "b", "c", "d"),
        "2*x^2 - I*(a+b-c-d)*x - c*d - a*b",
        "2*(a+b+c+d)*x - 2*I*(a*b-c*d)",
        witness=_w(a=Fraction(1, 3), b=Fraction(2, 5), c=Fraction(3, 7), d=Fraction(5, 11)),
    ),
    _FamilyDef(
        "meixner-pollaczek", BasisKind.POCHHAMMER, ("lam", "cs", "sn"),
        "x*cs - lam*sn",
        "2*(x*sn + lam*cs)",
        witness=_w(lam=Fraction(3, 2), cs=Fraction(3, 5), sn=Fraction(4, 5)),
    ),
    _FamilyDef(
        "racah", BasisKind.RACAH, ("alpha", "beta", "gamma", "delta"),
        "x^2 + 1/2*(2*gamma+gamma*alpha+2*gamma*delta+gamma*beta+3*alpha+2*delta+2*alpha*beta"
        "+delta*alpha+3*beta+4-delta*beta)*x + 1/2*(gamma+1)*(1+gamma+delta)*(1+delta+beta)*(1+alpha)",
        "(2+alpha+beta)*x + (1+delta+beta)*(1+alpha)*(gamma+1)",
        lattice="gamma+delta",
        witness=_w(alpha=Fraction(1, 3), beta=Fraction(2, 5), gamma=Fraction(3, 7), delta=Fraction(5, 11)),
    ),
    _FamilyDef(
        "dual-hahn", BasisKind.RACAH, ("gamma", "delta", "N"),
        "1/2*(-gamma-1+2*N+delta)*x + 1/2*N*(gamma+1)*(1+gamma+delta)",
        "-x + N*(gamma+1)",
        lattice="gamma+delta",
        witness=_w(gamma=Fraction(1, 3), delta=Fraction(2, 5), N=7),
    ),
    _FamilyDef(
        "askey-wilson", BasisKind.ASKEY_WILSON, ("a", "b", "c", "d"),
        f"{AW_PHI}*(2*(a*b*c*d+1)*x^2 - (a+b+c+d+a*c*d+a*b*c+a*b*d+b*c*d)*x"
        " + a*b+c*d+b*d+b*c+a*c+a*d-a*b*c*d-1)",
        f"{AW_PSI}*(2*(a*b*c*d-1)*x + a+b+c+d-a*b*c-a*b*d-a*c*d-b*c*d)",
        witness=_w(a=Fraction(1, 3), b=Fraction(2, 5), c=Fraction(3, 7), d=Fraction(5, 11)),
    ),
    _FamilyDef(
        "continuous-dual-q-hahn", BasisKind.ASKEY_WILSON, ("a", "b", "c"),
        f"{AW_PHI}*(2*x^2 - (a+b+c+a*b*c)*x + b*c+a*c+a*b-1)",
        f"{AW_PSI}*(-2*x + a+b+c-a*b*c)",
        witness=_w(a=Fraction(1, 3), b=Fraction(2, 5), c=Fraction(3, 7)),
    ),
    _FamilyDef(
        "continuous-q-hahn", BasisKind.ASKEY_WILSON, ("a", "b", "c", "d", "t"),
        f"{AW_PHI}*(2*(a*b*c*d+1)*x^2 - (d+b*c*d+a*t^2+a*b*d*t^2+a*b*c*t^2+c+a*c*d+b*t^2)/t*x"
        " + (a*c*t^2+b*d*t^2-a*b*c*d*t^2+b*c*t^2+c*d-t^2+a*b*t^4+a*d*t^2)/t^2)",
        f"{AW_PSI}*(2*(a*b*c*d-1)*x + (c+d-a*c*d+b*t^2+a*t^2-b*c*d-a*b*c*t^2-a*b*d*t^2)/t)",
        witness=_w(a=Fraction(1, 3), b=Fraction(2, 5), c=Fraction(3, 7), d=Fraction(5, 11), t=Fraction(3, 5)),
    ),
    _FamilyDef(
        "al-salam-chihara", BasisKind.ASKEY_WILSON, ("a", "b"),
        f"{AW_PHI}*(2*x^2 - (b+a)*x + a*b-1)",
        f"{AW_PSI}*(-2*x + b+a)",
        witness=_w(a=Fraction(1, 3), b=Fraction(2, 5)),
    ),
    _FamilyDef(
        "q-meixner-pollaczek", BasisKind.ASKEY_WILSON, ("a", "t"),
        f"{AW_PHI}*(2*x^2 - a*(1+t^2)/t*x + a^2-1)",
        f"{AW_PSI}*(-2*x + a*(1+t^2)/t)",
        witness=_w(a=Fraction(1, 3), t=Fraction(3, 5)),
    ),
    _FamilyDef(
        "continuous-q-jacobi", BasisKind.ASKEY_WILSON, ("pa", "pb", "rp"),
        f"{AW_PHI}*(2*(pa^2*pb^2*q^2+1)*x^2 + rp*(sqrt(q)+1)*(pa-pb)*(pa*pb*q-1)*x"
        " + pa^2*q + pb^2*q - pa*pb*q^(1/2) - pa*pb*q^(3/2) - 2*pa*pb*q - pa^2*pb^2*q^2 - 1)",
        f"{AW_PSI}*(2*(pa^2*pb^2*q^2-1)*x + rp*(sqrt(q)+1)*(pa-pb)*(pa*pb*q+1))",
        witness=_w(pa=Fraction(1, 3), pb=Fraction(2, 5), rp=Fraction(3, 7)),
    ),
    _FamilyDef(
        "continuous-q-ultraspherical", BasisKind.ASKEY_WILSON, ("beta",),
        "(q-1)^2*((2*beta^2*q+2)*x^2 - (beta+1)*(beta*q+1))",
        "4*(q-1)*x*(beta^2*q-1)*sqrt(q)",
        witness=_w(beta=Fraction(1, 3)),
    ),
    _FamilyDef(
        "continuous-big-q-hermite", BasisKind.ASKEY_WILSON, ("a",),
        f"{AW_PHI}*(2*x^2 - a*x - 1)",
        f"{AW_PSI}*(-2*x + a)",
        witness=_w(a=Fraction(1, 3)),
    ),
    _FamilyDef(
        "continuous-q-laguerre", BasisKind.ASKEY_WILSON, ("pa", "rp"),
        f"{AW_PHI}*(2*x^2 - pa*rp*(sqrt(q)+1)*x + pa^2*q - 1)",
        f"{AW_PSI}*(-2*x + pa*rp*(sqrt(q)+1))",
        witness=_w(pa=Fraction(1, 3), rp=Fraction(3, 7)),
    ),
    # the x and constant terms of phi carry a factor q; without it the 4phi3
    # fails the equation from n = 2 on (see tests/test_catalog.py)
    _FamilyDef(
        "q-racah", BasisKind.QRACAH, ("alpha", "beta", "gamma", "delta"),
        f"{QR_PHI}*((q^2*alpha*beta+1)*x^2"
        " - q*(q*gamma*delta*beta+q*delta*beta*alpha+q*gamma*alpha+q*beta*alpha+gamma+gamma*delta+delta*beta+alpha)*x"
        " + 2*q*(q*gamma*delta*alpha+q*delta*beta*alpha+q*gamma*alpha+q*delta^2*beta*gamma+q*gamma^2*delta"
        "+q*gamma*delta*beta-gamma*delta*q^2*alpha*beta-gamma*delta))",
        f"{QR_PSI}*((q^2*alpha*beta-1)*x"
        " - q*(q*gamma*delta*beta+q*delta*beta*alpha+q*gamma*alpha+q*beta*alpha-gamma-gamma*delta-delta*beta-alpha))",
        lattice="gamma*delta",
        witness=_w(alpha=Fraction(1, 3), beta=Fraction(2, 5), gamma=Fraction(3, 7), delta=Fraction(5, 11)),
    ),
    _FamilyDef(
        "dual-q-hahn", BasisKind.QRACAH, ("gamma", "delta", "qN"),
        f"{QR_PHI}*(x^2 - (gamma*q+qN*gamma*q+gamma*delta*qN*q+1)/qN*x"
        " + 2*gamma*q*(gamma*delta*qN*q+1+delta-qN*delta)/qN)",
        f"{QR_PSI}*(-x + (-gamma*q+qN*gamma*q+gamma*delta*qN*q+1)/qN)",
        lattice="gamma*delta",
        witness=_w(gamma=Fraction(1, 3), delta=Fraction(2, 5), qN=Fraction(1, 7)),
    ),
    _FamilyDef(
        "dual-q-krawtchouk", BasisKind.QRACAH, ("c", "qN"),
        f"{QR_PHI}*(x^2 - (c+1)/qN*x + 2*c*(1-qN)/qN^2)",
        f"{QR_PSI}*(-x + (c+1)/qN)",
        lattice="c/(q*qN)",
        witness=_w(c=Fraction(1, 3), qN=Fraction(1, 7)),
    ),
]

FAMILY_NAMES = tuple(s.name for s in _SPECS)


def _split_phipsi(phi: RatFunc, psi: RatFunc, var: str, what: str) -> PhiPsi:
    coeffs = []
    for r, deg in ((phi, 2), (psi, 1)):
        if r.den.depends_on([var]) or r.num.degree(var) > deg:
            raise CatalogError(f"{what}: phi must be quadratic and psi linear in {var}")
        coeffs += [RatFunc(r.num.coefficient(var, k), r.den) for k in range(deg, -1, -1)]
    if coeffs[3].is_zero():
        raise CatalogError(f"{what}: psi must have degree 1")
    return PhiPsi(*coeffs)


def _build(fam: _FamilyDef) -> CatalogEntry:
    case = fam.basis.case
    table = make_table(case, variables=[VARIABLE], parameters=fam.parameters)
    phi = parse_expression(fam.phi, case, table=table)
    psi = parse_expression(fam.psi, case, table=table)
    pp = _split_phipsi(phi, psi, VARIABLE, fam.name)
    lam = lambda_closed_form(fam.basis, table, pp.a, pp.d)
    printed = parse_expression(fam.lam, case, table=table) if fam.lam else None
    lattice = parse_expression(fam.lattice, case, table=table) if fam.lattice else None
    return CatalogEntry(
        fam.name, fam.basis, fam.parameters, table, pp, lam, lattice,
        dict(fam.witness), printed, fam.reference,
    )


def custom_entry(basis: BasisKind, phi: str, psi: str, lattice: str | None = None,
                 variable: str = VARIABLE) -> CatalogEntry:
    """An entry for user-given phi(x), psi(x) (parameters in order of appearance)."""
    case = basis.case
    if basis.has_lattice_parameter and lattice is None:
        raise CatalogError(f"basis {basis.value} needs the lattice parameter")
    texts = [phi, psi] + ([lattice] if lattice else [])
    probe = parse_expression(" + ".join(f"({t})" for t in texts), case, variables=[variable])
    params = probe.table.names_of_kind(SymbolKind.PARAMETER)
    table = make_table(case, variables=[variable], parameters=params)
    pp = _split_phipsi(
        parse_expression(phi, case, table=table), parse_expression(psi, case, table=table), variable, "input"
    )
    lam = lambda_closed_form(basis, table, pp.a, pp.d)
    lat = parse_expression(lattice, case, table=table) if lattice else None
    return CatalogEntry("custom", basis, tuple(params), table, pp, lam, lat)


@lru_cache(maxsize=None)
def catalog_lookup(name: str) -> CatalogEntry:
    for fam in _SPECS:
        if fam.name == name:
            return _build(fam)
    raise CatalogError(f"unknown family {name!r}; known: {', '.join(FAMILY_NAMES)}")


def catalog_entries() -> list[CatalogEntry]:
    return [catalog_lookup(n) for n in FAMILY_NAMES]


__all__ = ["CatalogEntry", "CatalogError", "FAMILY_NAMES", "catalog_lookup", "catalog_entries", "custom_entry"]
