"""Forward direction: divided-difference equation -> three-term recurrence.

Given phi = a X^2 + b X + c and psi = d X + e, write a solution as

    p_n = k_n (Phi_n + r_n Phi_{n-1} + s_n Phi_{n-2} + ...)

in one of the bases of :mod:`orthorec.bases`, multiply the equation
phi D^2 p + psi S D p + lambda_n p = 0 by Phi_1 and rewrite everything in the
basis with the structure relations.  The Phi_{n+1}, Phi_n and Phi_{n-1}
coefficients give lambda_n, r_n = k'_n/k_n and s_n = k''_n/k_n in turn.
Comparing X p_n with the basis expansion then gives the monic recurrence

    P_{n+1} = (X + Bt_n) P_n - Ct_n P_{n-1}.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Mapping

from .bases import (
    ALPHA,
    LATTICE,
    QUADRATIC,
    UNKNOWNS,
    BasisKind,
    make_table,
    merge_tables,
    shift_index,
    structure_relations,
)
from .kernel import KernelError, Poly, RatFunc, SymbolTable, substitute


class DegenerateFamily(KernelError):
    """The coefficient equations are singular for this (phi, psi)."""


@dataclass(frozen=True)
class PhiPsi:
    """Coefficients of phi = a X^2 + b X + c and psi = d X + e."""

    a: RatFunc
    b: RatFunc
    c: RatFunc
    d: RatFunc
    e: RatFunc

    @classmethod
    def make(cls, table: SymbolTable, a, b, c, d, e) -> "PhiPsi":
        conv = lambda v: v if isinstance(v, RatFunc) else table.ratfunc(v)  # noqa: E731
        return cls(conv(a), conv(b), conv(c), conv(d), conv(e))

    @classmethod
    def generic(cls, table: SymbolTable) -> "PhiPsi":
        return cls.make(table, *(table.gen(u) for u in UNKNOWNS))

    @property
    def table(self) -> SymbolTable:
        return self.a.table

    def values(self) -> tuple[RatFunc, ...]:
        return (self.a, self.b, self.c, self.d, self.e)

    def to_table(self, table: SymbolTable) -> "PhiPsi":
        return PhiPsi(*(v.to_table(table) for v in self.values()))

    def scaled(self, tau) -> "PhiPsi":
        return PhiPsi(*(v * tau for v in self.values()))

    def substitute(self, bindings: Mapping[str, object]) -> "PhiPsi":
        return PhiPsi(*(substitute(v, bindings) for v in self.values()))


@dataclass(frozen=True)
class KRatios:
    lam: RatFunc  # lambda_n
    kp: RatFunc  # k'_n / k_n
    kpp: RatFunc  # k''_n / k_n


@dataclass(frozen=True)
class TTRRCoeffs:
    """Monic recurrence data.

    ``a_ratio`` is A_n k_n / k_{n+1}; with the basis convention
    k_{n+1}/k_n = A_n * standardization, i.e. ``standardization`` = mu2(n).
    ``c_tilde`` is None only for closed forms that are not available.
    """

    a_ratio: RatFunc
    b_tilde: RatFunc
    c_tilde: RatFunc | None
    standardization: RatFunc
    lam: RatFunc | None = None

    @property
    def table(self) -> SymbolTable:
        return self.a_ratio.table


# ---------------------------------------------------------------------------
# closed forms for lambda_n
# ---------------------------------------------------------------------------


def lambda_closed_form(basis: BasisKind, table: SymbolTable, a, d) -> RatFunc:
    """lambda_n from (a, d): quadratic -n((n-1)a + d); q-case the q-analogue."""
    a = table.ratfunc(a) if not isinstance(a, RatFunc) else a
    d = table.ratfunc(d) if not isinstance(d, RatFunc) else d
    if basis.case == QUADRATIC:
        n = RatFunc(table.gen("n"))
        return -n * ((n - 1) * a + d)
    N = RatFunc(table.gen("N"))
    q = RatFunc(table.gen("q"))
    p = RatFunc(table.gen("p"))
    return -(N - 1) * (2 * p * (N - q) * a + (q - 1) * (N + q) * d) / (2 * N * (q - 1) ** 2)


# ---------------------------------------------------------------------------
# generic engine
# ---------------------------------------------------------------------------


class _Engine:
    def __init__(self, basis: BasisKind, pp: PhiPsi, h=None):
        sr = structure_relations(basis)
        self.basis = basis
        self.index = basis.index_name
        T = merge_tables(sr.table, pp.table)
        self.table = T
        consts = {k: v.to_table(T) for k, v in sr.constants().items()}
        if h is not None and basis.has_lattice_parameter:
            hv = h.to_table(T) if isinstance(h, RatFunc) else T.ratfunc(h)
            consts = {k: substitute(v, {LATTICE: hv}) for k, v in consts.items()}
        self.consts = consts
        self.pp = pp.to_table(T)
        self._cache: dict[tuple[str, int], RatFunc] = {}

    def c(self, name: str, offset: int = 0) -> RatFunc:
        key = (name, offset)
        if key not in self._cache:
            self._cache[key] = shift_index(self.consts[name], offset, self.index)
        return self._cache[key]

    def shift(self, r: RatFunc, k: int) -> RatFunc:
        return shift_index(r, k, self.index)

    # vectors are {offset relative to n: coefficient}
    def mul_x(self, vec: dict[int, RatFunc]) -> dict[int, RatFunc]:
        out: dict[int, RatFunc] = {}
        for o, coef in vec.items():
            _acc(out, o, coef * self.c("mu1", o))
            _acc(out, o + 1, coef * self.c("mu2", o))
        return out

    def operator_part(self, j: int) -> dict[int, RatFunc]:
        """Phi_1 (phi D^2 + psi S D) Phi_{n-j} in the basis."""
        pp = self.pp
        o = -j
        low = {o - 1: self.c("ell", o)}
        low_x = self.mul_x(low)
        low_xx = self.mul_x(low_x)
        mixed = {o - 1: self.c("m1", o), o: self.c("m2", o)}
        mixed_x = self.mul_x(mixed)
        out: dict[int, RatFunc] = {}
        for vec, w in ((low_xx, pp.a), (low_x, pp.b), (low, pp.c), (mixed_x, pp.d), (mixed, pp.e)):
            if w.is_zero():
                continue
            for k, v in vec.items():
                _acc(out, k, v * w)
        return out

    def multiplication_part(self, j: int) -> dict[int, RatFunc]:
        o = -j
        return {o: self.c("nu1", o), o + 1: self.c("nu2", o)}

    def k_ratios(self) -> KRatios:
        Z = RatFunc(self.table.zero())
        W = [self.operator_part(j) for j in range(3)]
        U = [self.multiplication_part(j) for j in range(3)]
        lam = -W[0].get(1, Z) / U[0][1]

        def comb(j, k):
            return W[j].get(k, Z) + lam * U[j].get(k, Z)

        den_r = comb(1, 0)
        if den_r.is_zero():
            raise DegenerateFamily("lambda_n - lambda_{n-1} vanishes identically")
        r = -comb(0, 0) / den_r
        den_s = comb(2, -1)
        if den_s.is_zero():
            raise DegenerateFamily("lambda_n - lambda_{n-2} vanishes identically")
        s = -(comb(0, -1) + r * comb(1, -1)) / den_s
        return KRatios(lam, r, s)

    def ttrr(self, kr: KRatios) -> TTRRCoeffs:
        r, s = kr.kp, kr.kpp
        mu1, mu2 = self.c("mu1"), self.c("mu2")
        mu2m1 = self.c("mu2", -1)
        b = self.shift(r, 1) * mu2 - mu1 - r * mu2m1
        inner = r * self.c("mu1", -1) + s * self.c("mu2", -2) + b * r - self.shift(s, 1) * mu2
        c = mu2m1 * inner
        return TTRRCoeffs(1 / mu2, b, c, mu2, kr.lam)


def _acc(out: dict, k: int, v: RatFunc) -> None:
    if k in out:
        out[k] = out[k] + v
    else:
        out[k] = v


def derive_k_ratios(basis: BasisKind, pp: PhiPsi, h=None) -> KRatios:
    """lambda_n, k'_n/k_n and k''_n/k_n for the given divided-difference equation."""
    return _Engine(basis, pp, h).k_ratios()


def ttrr_coeffs(basis: BasisKind, pp: PhiPsi, h=None) -> TTRRCoeffs:
    """Monic recurrence coefficients for the given divided-difference equation.

    ``h`` fixes the lattice parameter of the Racah (gamma+delta) and q-Racah
    (gamma*delta) bases; when omitted it stays symbolic as ``_h``.
    """
    eng = _Engine(basis, pp, h)
    return eng.ttrr(eng.k_ratios())


@lru_cache(maxsize=None)
def generic_ttrr(basis: BasisKind) -> TTRRCoeffs:
    """ttrr_coeffs with a..e left as the unknowns _a.._e (cached per basis)."""
    table = make_table(basis.case, unknowns=UNKNOWNS, parameters=[basis.basis_parameter])
    coeffs = ttrr_coeffs(basis, PhiPsi.generic(table))
    if basis.basis_parameter == ALPHA:
        for r in (coeffs.b_tilde, coeffs.c_tilde):
            if r.depends_on([ALPHA]):
                raise KernelError(f"{basis.value}: basis parameter did not cancel")
    return coeffs


# ---------------------------------------------------------------------------
# printed closed forms (regression fixtures for the engine)
# ---------------------------------------------------------------------------


def closed_form_ttrr(basis: BasisKind, pp: PhiPsi, h=None) -> TTRRCoeffs:
    """Transcribed closed forms.

    All five bases provide A_n and B_n; C_n is available for the three
    quadratic bases only (c_tilde is None otherwise).
    """
    sr = structure_relations(basis)
    T = merge_tables(sr.table, pp.table)
    pp = pp.to_table(T)
    a, b, c, d, e = pp.values()
    R = T.ratfunc
    mu2 = sr.variable_multiplication[1].to_table(T)
    if basis.case == QUADRATIC:
        n = R(T.gen("n"))
        if basis == BasisKind.WILSON:
            ar = R(1)
            bd = -(n * (n - 1) * a * (2 * a * n * n - 2 * a * n + 4 * n * d - 2 * b - d)
                   - n * d * (2 * b + d - 2 * n * d) + e * (2 * a - d)) / (((2 * n - 2) * a + d) * (2 * a * n + d))
            m = n - 1
            brace = (m**6 * a**3 + m * d * b * b
                     + (-2 * m**4 * b + 3 * m**5 * d - 4 * c * m * m) * a * a
                     + (-2 * m * m * d * d + d * e) * b + (-e * n - c + e) * d * d
                     + (m * m * b * b - 4 * m**3 * d * b + 3 * m**4 * d * d - m * (e * n + 4 * c - e) * d - e * e) * a
                     + m**3 * d**3)
            cd = n * (a * n - 2 * a + d) / ((2 * a * n - a + d) * (2 * a * n - 3 * a + d) * (2 * a * n - 2 * a + d) ** 2) * brace
        elif basis == BasisKind.POCHHAMMER:
            i = R(T.gen("I"))
            ar = i
            bd = i * ((2 * b * n * n - 2 * b * n - 2 * e) * a + d * (2 * b * n + e)) / ((2 * a * n - 2 * a + d) * (2 * a * n + d))
            m = n - 1
            brace = (-8 * n * (n - 2) * m**4 * a**5
                     + (-4 * (7 * n * n - 13 * n + 2) * m**3 * d + 32 * c * n * (n - 2) * m * m) * a**4
                     + (-8 * n * (n - 2) * m * m * b * b - 2 * (19 * n * n - 34 * n + 10) * m * m * d * d
                        + 16 * c * m * (5 * n * n - 9 * n + 2) * d + 8 * e * e * n * (n - 2)) * a**3
                     + (-4 * m * (5 * n * n - 9 * n + 2) * d * b * b - 8 * e * n * (n - 2) * d * b
                        + (72 * n * n - 128 * n + 48) * d * d * c - m * (5 * n - 3) * (5 * n - 6) * d**3
                        + (12 * n - 8) * e * e * d) * a * a
                     + (-4 * (4 * n - 3) * m * d * d * b * b + (-12 * n + 8) * e * d * d * b
                        + (28 * n - 24) * d**3 * c - (8 * n - 7) * m * d**4 + 4 * e * e * d * d) * a
                     + (-4 * n + 4) * d**3 * b * b - 4 * b * d**3 * e + (1 - n) * d**5 + 4 * c * d**4)
            cd = n * brace / (4 * (2 * a * n - 2 * a + d) ** 2 * (2 * a * n - 3 * a + d) * (2 * a * n + d) * (2 * a * n - a + d))
        else:
            hv = _lattice_value(T, h)
            ar = R(-1)
            bd = -(a * n * (n - 1) * (2 * a * n * n - 2 * a * n + 4 * d * n + 2 * b - d)
                   + 2 * b * d * n + n * (2 * n - 1) * d * d + d * e - 2 * a * e) / ((2 * a * n - 2 * a + d) * (2 * a * n + d))
            m = n - 1
            brace = ((4 * c + (-4 * n + 4) * e) * d * d
                     + (-8 * m**4 * b + 4 * m**3 * (2 * hv * hv - 3 * n * n + 4 * hv + 6 * n - 1) * d + 16 * c * m * m) * a * a
                     + (-4 * m * m * b * b - 16 * m**3 * d * b
                        + m * m * (5 * hv * hv - 12 * n * n + 10 * hv + 24 * n - 7) * d * d
                        + ((16 * n - 16) * c - 4 * e * m * m) * d + 4 * e * e) * a
                     + 4 * m**4 * (n + hv) * (-n + 2 + hv) * a**3 + (-4 * n + 4) * d * b * b
                     + (-8 * m * m * d * d - 4 * d * e) * b + m * (-2 * n + 3 + hv) * (2 * n - 1 + hv) * d**3)
            cd = -n * (a * n - 2 * a + d) / (4 * (2 * a * n - a + d) * (2 * a * n - 3 * a + d) * (2 * a * n - 2 * a + d) ** 2) * brace
        ar_prev = shift_index(ar, -1, "n")
        return TTRRCoeffs(ar, bd / ar, cd / (ar * ar_prev), mu2)
    N = R(T.gen("N"))
    q = R(T.gen("q"))
    p = R(T.gen("p"))
    poly7 = N * N * q - N * q * q - N * N - 2 * N * q - q * q - N + q
    if basis == BasisKind.ASKEY_WILSON:
        al = R(T.gen(ALPHA))
        ar = -2 * al * N
        q33 = q**33
        q34 = q**34
        q67h = q**33 * p
        num = ((-4 * q34 * (q + 1) * (q - 1) ** 6 * (N - 1) * (N - q) * b
                + 2 * q67h * (q - 1) ** 8 * (N + 1) * (N + q) * e) * a
               - 2 * q67h * (q + 1) * (q - 1) ** 7 * (N - 1) * (N + q) * d * b
               + q33 * (q - 1) ** 8 * poly7 * e * d)
        den = (4 * q34 * (q - 1) ** 6 * (N * N - 1) * (N * N - q * q) * a * a
               + 4 * q67h * (q - 1) ** 7 * (N**4 - q * q) * d * a
               + q33 * (q - 1) ** 8 * (N * N + 1) * (N * N + q * q) * d * d)
        bd = 2 * N * N * al * num / den
    else:
        ar = -N
        q7h = q**3 * p
        num = ((-4 * N * N * q**4 * (q + 1) * (q - 1) ** 2 * (N - 1) * (N - q) * b
                + 2 * N * N * q7h * (q - 1) ** 4 * (N + 1) * (N + q) * e) * a
               - 2 * N * N * q7h * (q + 1) * (q - 1) ** 3 * (N - 1) * (N + q) * d * b
               + N * N * q**3 * (q - 1) ** 4 * poly7 * e * d)
        den = (4 * q**4 * (N * N - 1) * (N * N - q * q) * (q - 1) ** 2 * a * a
               + 4 * q7h * (q - 1) ** 3 * (N**4 - q * q) * d * a
               + q**3 * (q - 1) ** 4 * (N * N + 1) * (N * N + q * q) * d * d)
        bd = num / den
    return TTRRCoeffs(ar, bd / ar, None, mu2)


def _lattice_value(T: SymbolTable, h) -> RatFunc:
    if h is None:
        return RatFunc(T.gen(LATTICE))
    return h.to_table(T) if isinstance(h, RatFunc) else T.ratfunc(h)


__all__ = [
    "DegenerateFamily",
    "PhiPsi",
    "KRatios",
    "TTRRCoeffs",
    "lambda_closed_form",
    "derive_k_ratios",
    "ttrr_coeffs",
    "generic_ttrr",
    "closed_form_ttrr",
    "Poly",
]
