"""Polynomial bases on quadratic and q-quadratic lattices.

Each basis {Phi_m} comes with four structure relations used by the forward
engine (m is the basis index, D/S the divided-difference operators of the
lattice, X the basis variable):

    Phi_1 * D^2 Phi_m  = ell(m) * Phi_{m-1}
    Phi_1 * S D Phi_m  = m1(m) * Phi_{m-1} + m2(m) * Phi_m
    Phi_1 * Phi_m      = nu1(m) * Phi_m   + nu2(m) * Phi_{m+1}
    X * Phi_m          = mu1(m) * Phi_m   + mu2(m) * Phi_{m+1}

The constants are rational functions of the index (``n`` in the quadratic
case, ``N = q^n`` in the q-case) and of one basis parameter.  The explicit
product formulas for Phi_m are provided separately for cross-checks.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

from .kernel import (
    IMAG,
    Poly,
    RatFunc,
    Symbol,
    SymbolKind,
    SymbolTable,
    substitute,
)

QUADRATIC = "quadratic"
QCASE = "q"

# reserved names; user input can never produce identifiers starting with "_"
UNKNOWNS = ("_a", "_b", "_c", "_d", "_e")
ALPHA = "_alpha"
LATTICE = "_h"


class BasisKind(str, enum.Enum):
    WILSON = "wilson"  # theta_m(alpha, x) = (alpha + i x)_m (alpha - i x)_m, variable x^2
    POCHHAMMER = "hahn"  # (alpha + i x)_m
    RACAH = "racah"  # chi_m(gamma, delta, lambda(x)), lattice parameter h = gamma + delta
    ASKEY_WILSON = "aw"  # B_m(alpha, x) = (alpha q^s; q)_m (alpha q^-s; q)_m
    QRACAH = "qracah"  # xi_m(gamma, delta, mu(x)), lattice parameter h = gamma * delta

    @property
    def case(self) -> str:
        if self in (BasisKind.WILSON, BasisKind.POCHHAMMER, BasisKind.RACAH):
            return QUADRATIC
        return QCASE

    @property
    def index_name(self) -> str:
        return "n" if self.case == QUADRATIC else "N"

    @property
    def has_lattice_parameter(self) -> bool:
        return self in (BasisKind.RACAH, BasisKind.QRACAH)

    @property
    def basis_parameter(self) -> str:
        """Name of the basis-internal parameter (alpha or the lattice h)."""
        return LATTICE if self.has_lattice_parameter else ALPHA

    @classmethod
    def for_case(cls, case: str) -> list["BasisKind"]:
        return [b for b in cls if b.case == case]

    @classmethod
    def parse(cls, text: str) -> "BasisKind":
        aliases = {
            "wilson": cls.WILSON,
            "theta": cls.WILSON,
            "hahn": cls.POCHHAMMER,
            "pochhammer": cls.POCHHAMMER,
            "continuous-hahn": cls.POCHHAMMER,
            "racah": cls.RACAH,
            "chi": cls.RACAH,
            "aw": cls.ASKEY_WILSON,
            "askey-wilson": cls.ASKEY_WILSON,
            "qracah": cls.QRACAH,
            "q-racah": cls.QRACAH,
            "xi": cls.QRACAH,
        }
        try:
            return aliases[text.lower()]
        except KeyError:
            raise ValueError(f"unknown basis {text!r}") from None


def normalize_case(case: str) -> str:
    c = case.lower()
    if c in ("quadratic", "quad"):
        return QUADRATIC
    if c in ("q", "q-quadratic", "qquadratic"):
        return QCASE
    raise ValueError(f"unknown case {case!r}")


# ---------------------------------------------------------------------------
# symbol tables
# ---------------------------------------------------------------------------


def make_table(
    case: str,
    *,
    variables: Iterable[str] = (),
    unknowns: Iterable[str] = (),
    parameters: Iterable[str] = (),
    index: bool = True,
) -> SymbolTable:
    """Table with a canonical symbol order.

    Order: variables, index, unknowns, parameters, then the structural
    symbols I (always) and p, q (q-case only).
    """
    syms = [Symbol(v, SymbolKind.VARIABLE) for v in variables]
    if index:
        syms.append(Symbol("n" if case == QUADRATIC else "N", SymbolKind.INDEX))
    syms += [Symbol(u, SymbolKind.UNKNOWN) for u in unknowns]
    seen = {s.name for s in syms}
    for prm in parameters:
        if prm not in seen:
            syms.append(Symbol(prm, SymbolKind.PARAMETER))
            seen.add(prm)
    syms.append(Symbol(IMAG, SymbolKind.STRUCTURAL))
    if case == QCASE:
        syms.append(Symbol("p", SymbolKind.STRUCTURAL))
        syms.append(Symbol("q", SymbolKind.STRUCTURAL))
    return SymbolTable(syms)


def merge_tables(first: SymbolTable, *others: SymbolTable) -> SymbolTable:
    """Union of symbol tables keeping the canonical order of make_table."""
    by_kind: dict[SymbolKind, list[Symbol]] = {k: [] for k in SymbolKind}
    seen: dict[str, SymbolKind] = {}
    for t in (first,) + others:
        for s in t:
            if s.name in seen:
                continue
            seen[s.name] = s.kind
            by_kind[s.kind].append(s)
    structural = sorted(by_kind[SymbolKind.STRUCTURAL], key=lambda s: ("I", "p", "q").index(s.name)
                        if s.name in ("I", "p", "q") else 9)
    order = (
        by_kind[SymbolKind.VARIABLE]
        + by_kind[SymbolKind.INDEX]
        + by_kind[SymbolKind.UNKNOWN]
        + by_kind[SymbolKind.PARAMETER]
        + structural
    )
    return SymbolTable(order)


def shift_index(r, k: int, index_name: str):
    """Index shift n -> n + k (quadratic) or N -> q^k N (q-case)."""
    if k == 0:
        return r if isinstance(r, RatFunc) else RatFunc(r)
    table = r.table
    if index_name not in table:
        return r if isinstance(r, RatFunc) else RatFunc(r)
    idx = table.gen(index_name)
    if index_name == "n":
        image = idx + k
    else:
        q = table.gen("q")
        image = idx * q**k if k > 0 else RatFunc(idx, q ** (-k))
    return substitute(r, {index_name: image})


def index_value(table: SymbolTable, index_name: str, m: int) -> RatFunc:
    """The index symbol evaluated at the integer m (q^m in the q-case)."""
    if index_name == "n":
        return table.ratfunc(m)
    q = table.gen("q")
    return RatFunc(q**m) if m >= 0 else RatFunc(table.one(), q ** (-m))


# ---------------------------------------------------------------------------
# structure relations
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class StructureRelations:
    basis: BasisKind
    table: SymbolTable
    lowering: RatFunc  # ell
    mixed: tuple[RatFunc, RatFunc]  # (m1, m2)
    multiplication: tuple[RatFunc, RatFunc]  # (nu1, nu2)
    variable_multiplication: tuple[RatFunc, RatFunc]  # (mu1, mu2)

    @property
    def index_name(self) -> str:
        return self.basis.index_name

    @property
    def parameter(self) -> str:
        return self.basis.basis_parameter

    def constants(self) -> dict[str, RatFunc]:
        m1, m2 = self.mixed
        nu1, nu2 = self.multiplication
        mu1, mu2 = self.variable_multiplication
        return {"ell": self.lowering, "m1": m1, "m2": m2, "nu1": nu1, "nu2": nu2, "mu1": mu1, "mu2": mu2}

    def to_table(self, table: SymbolTable) -> "StructureRelations":
        conv = lambda r: r.to_table(table)  # noqa: E731
        return StructureRelations(
            self.basis,
            table,
            conv(self.lowering),
            tuple(conv(v) for v in self.mixed),
            tuple(conv(v) for v in self.multiplication),
            tuple(conv(v) for v in self.variable_multiplication),
        )


def _sr_table(basis: BasisKind) -> SymbolTable:
    return make_table(basis.case, parameters=[basis.basis_parameter])


@lru_cache(maxsize=None)
def structure_relations(basis: BasisKind) -> StructureRelations:
    """Structure-relation constants, symbolic in the index and basis parameter."""
    table = _sr_table(basis)
    R = table.ratfunc
    if basis.case == QUADRATIC:
        n = R(table.gen("n"))
        if basis == BasisKind.WILSON:
            al = R(table.gen(ALPHA))
            return StructureRelations(
                basis, table,
                n * (n - 1),
                (-n * (n - 1) * (n - 1 + al), n),
                (-(n * n + 2 * al * n), R(1)),
                (-(n + al) ** 2, R(1)),
            )
        if basis == BasisKind.POCHHAMMER:
            al = R(table.gen(ALPHA))
            i = R(table.gen(IMAG))
            return StructureRelations(
                basis, table,
                -n * (n - 1),
                (-i * n * (n - 1) / 2, i * n),
                (-n, R(1)),
                (i * (n + al), -i),
            )
        h = R(table.gen(LATTICE))
        return StructureRelations(
            basis, table,
            n * (n - 1),
            (n * (n - 1) * (2 * n + h - 1) / 2, -n),
            (-n * (n + h + 1), R(1)),
            (n * (n + h + 1), R(-1)),
        )
    N = R(table.gen("N"))
    q = R(table.gen("q"))
    p = R(table.gen("p"))
    if basis == BasisKind.ASKEY_WILSON:
        al = R(table.gen(ALPHA))

        # N^k for symbolic n-shifts: q^(n-1) = N/q
        def eta(a, Nn):
            return 2 * a * (1 - Nn) / (q - 1)

        def beta1(a, Nn):  # beta_1(a, n) with Nn = q^n
            return (1 - a * a * Nn * Nn / q) * (1 - 1 / Nn) / 2

        def beta2(Nn):
            return (1 + 1 / Nn) / 2

        Nm1 = N / q
        return StructureRelations(
            basis, table,
            eta(al, N) * eta(al * p, Nm1),
            (eta(al, N) * beta1(al * p, Nm1), eta(al, N) * beta2(Nm1)),
            ((1 - 1 / N) * (1 - al * al * N), 1 / N),
            ((1 + al * al * N * N) / (2 * al * N), -1 / (2 * al * N)),
        )
    h = R(table.gen(LATTICE))

    def eta_q(a, Nn):
        return a * (1 - Nn) / (q - 1)

    def beta1_q(a, Nn):
        return (1 - a * a * h * Nn * Nn) * (1 - 1 / Nn) / 2

    def beta2_q(Nn):
        return (1 + Nn) / (2 * Nn)

    Nm1 = N / q
    one = R(1)
    return StructureRelations(
        basis, table,
        eta_q(one, N) * eta_q(p, Nm1),
        (eta_q(one, N) * beta1_q(p, Nm1), eta_q(one, N) * beta2_q(Nm1)),
        ((1 - 1 / N) * (1 - h * q * N), 1 / N),
        ((1 + h * q * N * N) / N, -1 / N),
    )


# ---------------------------------------------------------------------------
# explicit basis elements
# ---------------------------------------------------------------------------


def basis_element(basis: BasisKind, m: int, table: SymbolTable, var: str, parameter) -> Poly | RatFunc:
    """Phi_m as an explicit product in the basis variable ``var``.

    ``parameter`` is the value of alpha (Wilson, Pochhammer, Askey-Wilson) or
    of the lattice parameter h (Racah: gamma+delta, q-Racah: gamma*delta);
    it may be a number, Poly or RatFunc over ``table``.
    """
    X = RatFunc(table.gen(var))
    a = table.ratfunc(parameter) if not isinstance(parameter, RatFunc) else parameter
    result = RatFunc(table.one())
    if basis == BasisKind.WILSON:
        for k in range(m):
            result = result * ((a + k) ** 2 + X)
    elif basis == BasisKind.POCHHAMMER:
        i = table.gen(IMAG)
        for k in range(m):
            result = result * (a + k + i * X)
    elif basis == BasisKind.RACAH:
        for k in range(m):
            result = result * (k * (a + k + 1) - X)
    elif basis == BasisKind.ASKEY_WILSON:
        q = table.gen("q")
        for k in range(m):
            result = result * (1 - 2 * a * X * q**k + a * a * q ** (2 * k))
    else:
        q = table.gen("q")
        for k in range(m):
            result = result * (1 + a * q ** (2 * k + 1) - X * q**k)
    return result


def leading_coefficient_in(basis: BasisKind, m: int, table: SymbolTable, parameter) -> RatFunc:
    """Leading coefficient of Phi_m in the basis variable."""
    a = table.ratfunc(parameter) if not isinstance(parameter, RatFunc) else parameter
    if basis == BasisKind.WILSON:
        return table.ratfunc(1)
    if basis == BasisKind.POCHHAMMER:
        return RatFunc(table.gen(IMAG) ** m)
    if basis == BasisKind.RACAH:
        return table.ratfunc((-1) ** m)
    q = table.gen("q")
    if basis == BasisKind.ASKEY_WILSON:
        return (-2 * a) ** m * RatFunc(q ** (m * (m - 1) // 2))
    return RatFunc((-1) ** m * q ** (m * (m - 1) // 2))


__all__ = [
    "QUADRATIC",
    "QCASE",
    "UNKNOWNS",
    "ALPHA",
    "LATTICE",
    "BasisKind",
    "StructureRelations",
    "structure_relations",
    "basis_element",
    "leading_coefficient_in",
    "make_table",
    "merge_tables",
    "shift_index",
    "index_value",
    "normalize_case",
]
