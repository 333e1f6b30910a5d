"""Text front end: expressions, three-term recurrences and their monic form.

Grammar (whitespace is ignored, identifiers are case-sensitive)::

    recurrence := expr "=" expr
    expr       := term (("+" | "-") term)*
    term       := unary (("*" | "/") unary)*
    unary      := ("-" | "+") unary | power
    power      := atom ("^" exponent)?
    exponent   := integer | "-" integer | ident | "(" expr ")"
    atom       := integer | ident | "p(" index ")" | "sqrt(q)" | "(" expr ")"
    index      := "n" (("+" | "-") integer)?

``I`` is the imaginary unit.  In the q-case ``q^(k*n + c)`` is accepted for
integer k and c a multiple of 1/2; the index itself only occurs through such
powers.  ``*`` and ``/`` are left-associative, so ``a/b/c`` is ``a/(b*c)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .bases import QCASE, QUADRATIC, make_table, normalize_case, shift_index
from .kernel import IMAG, KernelError, RatFunc, SymbolKind, SymbolTable, substitute
from .printing import format_ratfunc

SEQUENCE = "p"
_RESERVED = {SEQUENCE, "sqrt", IMAG}


class ParseError(KernelError):
    """Syntax error, with the character offset where it was detected."""

    def __init__(self, message: str, position: int | None = None):
        self.position = position
        where = f" at position {position}" if position is not None else ""
        super().__init__(message + where)


class UnsupportedOrder(ParseError):
    pass


class NotHolonomic(ParseError):
    pass


# ---------------------------------------------------------------------------
# tokenizer and AST
# ---------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    out = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:  # only trailing whitespace can fail to match
            break
        num, ident, op = m.groups()
        start = m.start(m.lastindex)
        if num is not None:
            out.append(("num", num, start))
        elif ident is not None:
            out.append(("id", ident, start))
        else:
            if op not in "+-*/^()=":
                raise ParseError(f"unexpected character {op!r}", start)
            out.append(("op", op, start))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


# AST nodes are tuples: ("num", int) ("id", name) ("seq", k) ("sqrtq",)
# ("neg", x) ("add", x, y) ("sub", x, y) ("mul", x, y) ("div", x, y) ("pow", x, e)


class _Parser:
    def __init__(self, text: str, allow_reserved: bool = False):
        self.toks = _tokenize(text)
        self.i = 0
        self.allow_reserved = allow_reserved

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, value: str):
        t = self.take()
        if t[1] != value or t[0] == "end":
            raise ParseError(f"expected {value!r}, found {t[1] or 'end of input'!r}", t[2])
        return t

    def at(self, value: str) -> bool:
        t = self.peek()
        return t[0] == "op" and t[1] == value

    def parse_equation(self):
        lhs = self.expr()
        self.expect("=")
        rhs = self.expr()
        self.finish()
        return lhs, rhs

    def parse_expr(self):
        e = self.expr()
        self.finish()
        return e

    def finish(self):
        t = self.peek()
        if t[0] != "end":
            raise ParseError(f"unexpected {t[1]!r}", t[2])

    def expr(self):
        node = self.term()
        while self.at("+") or self.at("-"):
            op = self.take()[1]
            node = ("add" if op == "+" else "sub", node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.at("*") or self.at("/"):
            op = self.take()[1]
            node = ("mul" if op == "*" else "div", node, self.unary())
        return node

    def unary(self):
        if self.at("-"):
            self.take()
            return ("neg", self.unary())
        if self.at("+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.at("^"):
            self.take()
            return ("pow", base, self.exponent())
        return base

    def exponent(self):
        t = self.peek()
        if t[0] == "num":
            self.take()
            return ("num", int(t[1]))
        if self.at("-"):
            self.take()
            t = self.take()
            if t[0] != "num":
                raise ParseError("expected an integer exponent", t[2])
            return ("neg", ("num", int(t[1])))
        if t[0] == "id":
            self.take()
            return ("id", t[1])
        if self.at("("):
            self.take()
            e = self.expr()
            self.expect(")")
            return e
        raise ParseError("bad exponent", t[2])

    def atom(self):
        t = self.take()
        kind, val, pos = t
        if kind == "num":
            return ("num", int(val))
        if kind == "op" and val == "(":
            e = self.expr()
            self.expect(")")
            return e
        if kind == "id":
            if val == SEQUENCE and self.at("("):
                self.take()
                return ("seq", self.index())
            if val == "sqrt" and self.at("("):
                self.take()
                arg = self.take()
                if arg[1] != "q":
                    raise ParseError("only sqrt(q) is supported", arg[2])
                self.expect(")")
                return ("sqrtq",)
            if val == SEQUENCE:
                raise ParseError(f"{SEQUENCE!r} is reserved for the sequence p(n+k)", pos)
            if val.startswith("_") and not self.allow_reserved:
                raise ParseError(f"identifiers starting with '_' are reserved: {val!r}", pos)
            return ("id", val)
        raise ParseError(f"unexpected {val or 'end of input'!r}", pos)

    def index(self) -> int:
        t = self.take()
        if t[1] != "n":
            raise ParseError("sequence index must be n, n+k or n-k", t[2])
        k = 0
        if self.at("+") or self.at("-"):
            sign = 1 if self.take()[1] == "+" else -1
            t = self.take()
            if t[0] != "num":
                raise ParseError("expected an integer offset", t[2])
            k = sign * int(t[1])
        self.expect(")")
        return k


def _identifiers(node, out: list[str]) -> None:
    tag = node[0]
    if tag == "id":
        if node[1] not in out:
            out.append(node[1])
    elif tag in ("neg",):
        _identifiers(node[1], out)
    elif tag in ("add", "sub", "mul", "div", "pow"):
        _identifiers(node[1], out)
        _identifiers(node[2], out)


# ---------------------------------------------------------------------------
# evaluation
# ---------------------------------------------------------------------------


class _Evaluator:
    """Evaluates an AST to linear forms {k: coefficient of p(n+k), None: rest}."""

    def __init__(self, table: SymbolTable, case: str):
        self.T = table
        self.case = case

    def const(self, v) -> RatFunc:
        return self.T.ratfunc(v)

    def scalar(self, node) -> RatFunc:
        form = self.ev(node)
        if any(k is not None for k in form):
            raise NotHolonomic("the sequence p(n+k) occurs where a coefficient is expected")
        return form.get(None, self.const(0))

    def ev(self, node) -> dict:
        tag = node[0]
        T = self.T
        if tag == "num":
            return {None: self.const(node[1])}
        if tag == "id":
            name = node[1]
            if self.case == QCASE and name in ("n", "N"):
                raise ParseError("in the q-case the index may only occur as q^n")
            if name == IMAG:
                return {None: RatFunc(T.gen(IMAG))}
            return {None: RatFunc(T.gen(name))}
        if tag == "sqrtq":
            if self.case != QCASE:
                raise ParseError("sqrt(q) is only available in the q-case")
            return {None: RatFunc(T.gen("p"))}
        if tag == "seq":
            return {node[1]: self.const(1)}
        if tag == "neg":
            return {k: -v for k, v in self.ev(node[1]).items()}
        if tag in ("add", "sub"):
            a = self.ev(node[1])
            b = self.ev(node[2])
            out = dict(a)
            for k, v in b.items():
                v = v if tag == "add" else -v
                out[k] = out[k] + v if k in out else v
            return out
        if tag == "mul":
            a = self.ev(node[1])
            b = self.ev(node[2])
            a_lin = any(k is not None for k in a)
            b_lin = any(k is not None for k in b)
            if a_lin and b_lin:
                raise NotHolonomic("product of two sequence terms")
            if b_lin:
                a, b = b, a
            s = b.get(None, self.const(0))
            return {k: v * s for k, v in a.items()}
        if tag == "div":
            a = self.ev(node[1])
            s = self.scalar(node[2])
            if s.is_zero():
                raise ParseError("division by zero")
            return {k: v / s for k, v in a.items()}
        if tag == "pow":
            return self.power(node)
        raise ParseError(f"internal: unknown node {tag}")

    def power(self, node) -> dict:
        base, ex = node[1], node[2]
        if self.case == QCASE and base == ("id", "q"):
            return {None: self.q_power(ex)}
        if base[0] == "seq":
            if ex == ("num", 1):
                return self.ev(base)
            raise NotHolonomic("power of a sequence term")
        k = self._int_exponent(ex)
        b = self.ev(base)
        if any(kk is not None for kk in b):
            if k == 1:
                return b
            raise NotHolonomic("power of a sequence term")
        return {None: b.get(None, self.const(0)) ** k}

    def _int_exponent(self, ex) -> int:
        e = self._exponent_value(ex)
        if not (e.is_constant() and e.constant_value().denominator == 1):
            raise ParseError(f"exponent must be an integer here: {format_ratfunc(e)}")
        return int(e.constant_value())

    def _exponent_value(self, ex) -> RatFunc:
        # exponents live in a small quadratic-style table with the index n
        ev = _Evaluator(_EXP_TABLE, QUADRATIC)
        try:
            return ev.scalar(ex)
        except KernelError as err:
            raise ParseError(f"unsupported exponent ({err})")

    def q_power(self, ex) -> RatFunc:
        e = self._exponent_value(ex)
        if not e.is_polynomial() or e.num.total_degree() > 1:
            raise ParseError("q-exponent must be of the form k*n + c")
        poly = e.num
        kn = poly.coefficient("n", 1)
        c0 = poly.coefficient("n", 0)
        if not (kn.is_constant() and c0.is_constant()):
            raise ParseError("q-exponent must be of the form k*n + c")
        k = kn.constant_value()
        c = c0.constant_value()
        if k.denominator != 1 or (2 * c).denominator != 1:
            raise ParseError("q-exponent needs an integer multiple of n plus a multiple of 1/2")
        T = self.T
        N = RatFunc(T.gen("N"))
        p = RatFunc(T.gen("p"))
        return N ** int(k) * p ** int(2 * c)


_EXP_TABLE = make_table(QUADRATIC, index=True)


def _table_for(case: str, variables: Sequence[str], names: Iterable[str]) -> SymbolTable:
    params = []
    for name in names:
        if name in variables or name == IMAG:
            continue
        if name == "n" and case == QUADRATIC:
            continue
        if name == "q" and case == QCASE:
            continue
        params.append(name)
    return make_table(case, variables=variables, parameters=params)


def parse_expression(
    text: str,
    case: str = QUADRATIC,
    *,
    table: SymbolTable | None = None,
    variables: Sequence[str] = ("x",),
    allow_reserved: bool = False,
) -> RatFunc:
    """Parse an expression (no sequence terms) into a rational function.

    With ``table`` given, every identifier must already be in it; otherwise a
    table is built from ``variables`` and the identifiers in order of first
    appearance. ``allow_reserved`` admits the internal ``_a``-style names
    (only together with ``table``), for reading back printed solutions.
    """
    case = normalize_case(case)
    if allow_reserved and table is None:
        raise ValueError("allow_reserved needs an explicit table")
    ast = _Parser(text, allow_reserved).parse_expr()
    names: list[str] = []
    _identifiers(ast, names)
    if table is None:
        table = _table_for(case, [v for v in variables], names)
    else:
        for name in names:
            if name not in table and not (case == QCASE and name == "q"):
                raise ParseError(f"unknown identifier {name!r}")
    return _Evaluator(table, case).scalar(ast)


# ---------------------------------------------------------------------------
# recurrences
# ---------------------------------------------------------------------------


@dataclass
class Recurrence:
    """q_n p(n+2) + r_n p(n+1) + s_n p(n) = 0 with coefficients in x, n/N and parameters."""

    case: str
    variable: str
    coeffs: tuple[RatFunc, RatFunc, RatFunc]
    text: str | None = field(default=None, compare=False)

    @property
    def table(self) -> SymbolTable:
        return self.coeffs[0].table

    @property
    def index_name(self) -> str:
        return "n" if self.case == QUADRATIC else "N"

    @property
    def parameters(self) -> list[str]:
        return self.table.names_of_kind(SymbolKind.PARAMETER)

    def __str__(self) -> str:
        return format_recurrence(self)


def parse_recurrence(text: str, case: str = QUADRATIC, variable: str = "x") -> Recurrence:
    """Parse ``lhs = rhs`` into the normalized three-term shape.

    Indices are shifted so that the highest occurring one becomes n+2.
    """
    case = normalize_case(case)
    if not text or not text.strip():
        raise ParseError("empty recurrence", 0)
    lhs, rhs = _Parser(text).parse_equation()
    names: list[str] = []
    _identifiers(lhs, names)
    _identifiers(rhs, names)
    table = _table_for(case, [variable], names)
    ev = _Evaluator(table, case)
    form = ev.ev(("sub", lhs, rhs))
    rest = form.pop(None, None)
    if rest is not None and not rest.is_zero():
        raise NotHolonomic("the equation has a term without p(n+k)")
    form = {k: v for k, v in form.items() if not v.is_zero()}
    if not form:
        raise ParseError("no sequence terms p(n+k) in the recurrence")
    bad = [k for k in form if k not in (-1, 0, 1, 2)]
    if bad or max(form) - min(form) > 2:
        raise UnsupportedOrder(f"unsupported sequence offsets {sorted(form)}")
    shift = 2 - max(form)
    idx = "n" if case == QUADRATIC else "N"
    coeffs = []
    for k in (2, 1, 0):
        v = form.get(k - shift)
        coeffs.append(shift_index(v, shift, idx) if v is not None else table.ratfunc(0))
    return Recurrence(case, variable, tuple(coeffs), text)


def format_recurrence(rec: Recurrence) -> str:
    parts = [f"({format_ratfunc(c)})*p(n{'+' + str(k) if k else ''})" for c, k in zip(rec.coeffs, (2, 1, 0))]
    return " + ".join(parts) + " = 0"


def monic_recurrence_text(b_tilde: RatFunc, c_tilde: RatFunc, variable: str = "x") -> str:
    """p(n+1) = (x + Bt_n) p(n) - Ct_n p(n-1) as parseable text."""
    return f"p(n+1) = ({variable} + ({format_ratfunc(b_tilde)}))*p(n) - ({format_ratfunc(c_tilde)})*p(n-1)"


# ---------------------------------------------------------------------------
# monic form
# ---------------------------------------------------------------------------


@dataclass
class MonicForm:
    """p_{n+1} = t_n p_n + u_n p_{n-1}, after shifting n by ``shift``."""

    t: RatFunc
    u: RatFunc
    shift: int
    variable: str
    case: str

    @property
    def table(self) -> SymbolTable:
        return self.t.table

    @property
    def index_name(self) -> str:
        return "n" if self.case == QUADRATIC else "N"

    def split(self) -> tuple[RatFunc, RatFunc, RatFunc]:
        """(A_n, B_n, C_n) with t_n = A_n x + B_n and u_n = -C_n."""
        x = self.variable
        num = self.t.num
        A = RatFunc(num.coefficient(x, 1), self.t.den)
        B = RatFunc(num.coefficient(x, 0), self.t.den)
        return A, B, -self.u


@dataclass
class NotIdentifiable:
    """Structured negative outcome (not an error)."""

    reason: str

    message = "no classical orthogonal polynomial solution exists"


def _value_at(r: RatFunc, case: str, i: int):
    """(numerator, denominator) of r at index i, parameters kept symbolic."""
    T = r.table
    if case == QUADRATIC:
        v = T.ratfunc(i)
        name = "n"
    else:
        v = RatFunc(T.gen("q")) ** i
        name = "N"
    num = substitute(RatFunc(r.num), {name: v})
    den = substitute(RatFunc(r.den), {name: v})
    return num, den


def to_monic_form(rec: Recurrence, n_probe: int = 10) -> MonicForm | NotIdentifiable:
    qn, rn, sn = rec.coeffs
    idx = rec.index_name
    if qn.is_zero():
        return NotIdentifiable("leading coefficient vanishes identically")
    shift = 0
    for i in range(n_probe + 1):
        hit = False
        for r, j in ((qn, i - 1), (sn, i)):
            num, den = _value_at(r, rec.case, j)
            if num.is_zero() or den.is_zero():
                hit = True
        if hit:
            shift = i + 1
    qm = shift_index(qn, -1, idx)
    t = -shift_index(rn, -1, idx) / qm
    u = -shift_index(sn, -1, idx) / qm
    if shift:
        t = shift_index(t, shift, idx)
        u = shift_index(u, shift, idx)
    x = rec.variable
    if t.den.depends_on([x]) or t.num.degree(x) != 1:
        return NotIdentifiable(f"t_n is not of degree 1 in {x}")
    if u.depends_on([x]):
        return NotIdentifiable(f"u_n depends on {x}")
    if u.is_zero():
        return NotIdentifiable("u_n vanishes identically")
    return MonicForm(t, u, shift, x, rec.case)


__all__ = [
    "ParseError",
    "UnsupportedOrder",
    "NotHolonomic",
    "Recurrence",
    "MonicForm",
    "NotIdentifiable",
    "parse_expression",
    "parse_recurrence",
    "format_recurrence",
    "monic_recurrence_text",
    "to_monic_form",
    "Fraction",
]
