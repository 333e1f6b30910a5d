"""Canonical text form of polynomials and rational functions.

The output is accepted back by the expression parser: ``p`` (the square root
of ``q``) and the q-index ``N`` are folded into a single ``q^(...)`` factor,
so ``q*N*p`` prints as ``q^(n+3/2)``.
"""

from __future__ import annotations

from fractions import Fraction

from .kernel import IMAG, Q, SQRT_Q, Poly, RatFunc, SymbolKind, SymbolTable

Q_INDEX = "N"


def _q_index_position(table: SymbolTable):
    if Q_INDEX in table and table[Q_INDEX].kind == SymbolKind.INDEX:
        return table.index(Q_INDEX)
    return None


def _format_rational(c: Fraction) -> str:
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


def _q_exponent(qe: int, pe: int, ne: int) -> str | None:
    const = Fraction(qe) + Fraction(pe, 2)
    if ne == 0 and const == 0:
        return None
    if ne == 0:
        if const.denominator == 1:
            return f"q^{const.numerator}" if const != 1 else "q"
        return f"q^({_format_rational(const)})"
    lin = "n" if ne == 1 else f"{ne}*n"
    if const == 0:
        return f"q^{lin}" if ne == 1 else f"q^({lin})"
    sign = "+" if const > 0 else "-"
    return f"q^({lin}{sign}{_format_rational(abs(const))})"


def _monomial(table: SymbolTable, mon, qi, pi, ni) -> list[str]:
    parts = []
    for k, e in enumerate(mon):
        if e == 0 or k in (qi, pi, ni):
            continue
        name = table.names[k]
        parts.append(name if e == 1 else f"{name}^{e}")
    qpart = _q_exponent(
        mon[qi] if qi is not None else 0,
        mon[pi] if pi is not None else 0,
        mon[ni] if ni is not None else 0,
    )
    if qpart is not None:
        parts.append(qpart)
    return parts


def format_poly(f: Poly) -> str:
    if f.is_zero():
        return "0"
    table = f.table
    qi = table.q_index if table.q_index is not None and table[Q].kind == SymbolKind.STRUCTURAL else None
    pi = table.p_index
    ni = _q_index_position(table)
    out = []
    for mon, c in f.raw.terms():
        mon = tuple(int(e) for e in mon)
        c = Fraction(int(c.p), int(c.q))
        parts = _monomial(table, mon, qi, pi, ni)
        neg = c < 0
        a = abs(c)
        if not parts:
            body = _format_rational(a)
        elif a == 1:
            body = "*".join(parts)
        else:
            body = _format_rational(a) + "*" + "*".join(parts)
        if not out:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out)


def format_ratfunc(r: RatFunc) -> str:
    num = format_poly(r.num)
    if r.den.is_constant() and r.den.constant_value() == 1:
        return num
    den = format_poly(r.den)
    return f"({num})/({den})"


# ---------------------------------------------------------------------------
# sympy bridge (used for rare Gaussian gcd cases and for optional display)
# ---------------------------------------------------------------------------


def to_sympy(f: Poly, pform: bool = True):
    import sympy

    table = f.table
    raw = table.to_pform(f.raw) if pform else f.raw
    syms = []
    for name in table.names:
        syms.append(sympy.I if name == IMAG else sympy.Symbol(name))
    expr = sympy.Integer(0)
    for mon, c in raw.terms():
        term = sympy.Rational(int(c.p), int(c.q))
        for s, e in zip(syms, mon):
            if e:
                term *= s**e
        expr += term
    return expr


def from_sympy(expr, table: SymbolTable, pform: bool = True) -> Poly:
    import sympy

    placeholder = sympy.Symbol("_imag_unit_")
    expr = sympy.expand(expr).subs(sympy.I, placeholder)
    gens = [placeholder if n == IMAG else sympy.Symbol(n) for n in table.names]
    sp = sympy.Poly(expr, *gens, domain="QQ")
    terms = {}
    for mon, c in sp.terms():
        terms[tuple(int(e) for e in mon)] = Fraction(int(c.p), int(c.q))
    poly = Poly.from_terms(table, terms)
    if pform and table.has_p:
        poly = Poly(table, table.from_pform(poly.raw))
    return poly


__all__ = ["format_poly", "format_ratfunc", "to_sympy", "from_sympy", "SQRT_Q"]
