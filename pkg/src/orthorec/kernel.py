"""Exact arithmetic kernel.

Multivariate polynomials and rational functions over the rationals, extended
by the imaginary unit ``I`` (``I**2 = -1``) and by ``p`` with ``p**2 = q``.
Both relations are applied eagerly, so a stored polynomial never carries an
exponent >= 2 in ``I`` or ``p``.

Arithmetic is delegated to python-flint's ``fmpq_mpoly``; this module adds the
symbol bookkeeping, the quotient-ring reductions, lowest-terms rational
functions and substitution.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Iterable, Mapping

import flint

__all__ = [
    "KernelError",
    "SymbolTableMismatch",
    "ZeroDenominator",
    "SymbolKind",
    "Symbol",
    "SymbolTable",
    "Poly",
    "RatFunc",
    "poly_gcd",
    "exact_divide",
    "factor_poly",
    "ratfunc_normalize",
    "substitute",
    "to_fmpq",
]

IMAG = "I"
SQRT_Q = "p"
Q = "q"

ORDERING = "deglex"


class KernelError(Exception):
    """Base class for kernel failures."""


class SymbolTableMismatch(KernelError):
    """Operands were built over different symbol tables."""


class ZeroDenominator(KernelError, ZeroDivisionError):
    """A rational function with an identically vanishing denominator."""


class SymbolKind(str, enum.Enum):
    VARIABLE = "variable"
    INDEX = "index"
    STRUCTURAL = "structural"
    PARAMETER = "parameter"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class Symbol:
    name: str
    kind: SymbolKind


def to_fmpq(value) -> flint.fmpq:
    if isinstance(value, flint.fmpq):
        return value
    if isinstance(value, int):
        return flint.fmpq(value)
    if isinstance(value, Fraction):
        return flint.fmpq(value.numerator, value.denominator)
    if isinstance(value, flint.fmpz):
        return flint.fmpq(value)
    raise TypeError(f"not an exact rational: {value!r}")


class SymbolTable:
    """Ordered, immutable collection of symbols sharing one flint context.

    Two tables with the same names in the same order are interchangeable.
    """

    def __init__(self, symbols: Iterable[Symbol]):
        symbols = list(symbols)
        names = [s.name for s in symbols]
        if len(set(names)) != len(names):
            raise KernelError(f"duplicate symbol names in {names}")
        if SQRT_Q in names and Q not in names:
            symbols.append(Symbol(Q, SymbolKind.STRUCTURAL))
            names.append(Q)
        self.symbols: tuple[Symbol, ...] = tuple(symbols)
        self.names: tuple[str, ...] = tuple(names)
        self._index = {n: i for i, n in enumerate(names)}
        self.ctx = flint.fmpq_mpoly_ctx.get(self.names or ("_0",), ORDERING)
        self.nvars = len(self.names) if self.names else 1
        gens = self.ctx.gens()
        self.i_index = self._index.get(IMAG)
        self.p_index = self._index.get(SQRT_Q)
        self.q_index = self._index.get(Q)
        self._i_rel = gens[self.i_index] ** 2 + 1 if self.i_index is not None else None
        self._p_rel = None
        self._to_pform_args = None
        if self.p_index is not None:
            p, q = gens[self.p_index], gens[self.q_index]
            self._p_rel = p**2 - q
            args = list(gens)
            args[self.q_index] = p**2
            self._to_pform_args = tuple(args)

    # -- lookup -------------------------------------------------------------
    def __contains__(self, name) -> bool:
        return name in self._index

    def __getitem__(self, name: str) -> Symbol:
        return self.symbols[self._index[name]]

    def __iter__(self):
        return iter(self.symbols)

    def __len__(self):
        return len(self.symbols)

    def __eq__(self, other) -> bool:
        return isinstance(other, SymbolTable) and self.names == other.names

    def __hash__(self):
        return hash(self.names)

    def __repr__(self):
        return f"SymbolTable({list(self.names)})"

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KernelError(f"symbol {name!r} not in table {list(self.names)}") from None

    def names_of_kind(self, kind: SymbolKind) -> list[str]:
        return [s.name for s in self.symbols if s.kind == kind]

    @property
    def has_i(self) -> bool:
        return self.i_index is not None

    @property
    def has_p(self) -> bool:
        return self.p_index is not None

    def extended(self, symbols: Iterable[Symbol]) -> "SymbolTable":
        extra = [s for s in symbols if s.name not in self._index]
        return SymbolTable(list(self.symbols) + extra)

    # -- constructors -------------------------------------------------------
    def gen(self, name: str) -> "Poly":
        return Poly(self, self.ctx.gens()[self.index(name)])

    def const(self, value) -> "Poly":
        return Poly(self, self.ctx.constant(to_fmpq(value)))

    def zero(self) -> "Poly":
        return Poly(self, self.ctx.from_dict({}))

    def one(self) -> "Poly":
        return self.const(1)

    def coerce(self, value) -> "Poly":
        if isinstance(value, Poly):
            if value.table != self:
                raise SymbolTableMismatch(f"{value.table!r} vs {self!r}")
            return value
        return self.const(value)

    def ratfunc(self, value) -> "RatFunc":
        if isinstance(value, RatFunc):
            if value.table != self:
                raise SymbolTableMismatch(f"{value.table!r} vs {self!r}")
            return value
        return RatFunc(self.coerce(value))

    # -- quotient ring reductions ------------------------------------------
    def reduce_raw(self, raw):
        degs = raw.degrees()
        if self.i_index is not None and degs[self.i_index] >= 2:
            raw = divmod(raw, self._i_rel)[1]
        if self.p_index is not None and degs[self.p_index] >= 2:
            raw = divmod(raw, self._p_rel)[1]
        return raw

    def to_pform(self, raw):
        """Replace q by p**2; an isomorphic, relation-free representation."""
        if self.p_index is None or raw.degrees()[self.q_index] <= 0:
            return raw
        return raw.compose(*self._to_pform_args, ctx=self.ctx)

    def from_pform(self, raw):
        if self.p_index is None:
            return raw
        return self.reduce_raw(raw)


_ZERO_Q = flint.fmpq(0)


class Poly:
    """Polynomial over a :class:`SymbolTable`, reduced modulo I**2+1 and p**2-q."""

    __slots__ = ("table", "raw")

    def __init__(self, table: SymbolTable, raw):
        self.table = table
        self.raw = raw

    @classmethod
    def reduced(cls, table: SymbolTable, raw) -> "Poly":
        return cls(table, table.reduce_raw(raw))

    @classmethod
    def from_terms(cls, table: SymbolTable, terms: Mapping[tuple, object]) -> "Poly":
        raw = table.ctx.from_dict({k: to_fmpq(v) for k, v in terms.items()})
        return cls.reduced(table, raw)

    # -- coercion -----------------------------------------------------------
    def _other(self, other):
        if isinstance(other, Poly):
            if other.table is not self.table and other.table != self.table:
                raise SymbolTableMismatch(f"{self.table!r} vs {other.table!r}")
            return other.raw
        if isinstance(other, (int, Fraction, flint.fmpq, flint.fmpz)):
            return self.table.ctx.constant(to_fmpq(other))
        return None

    # -- arithmetic ---------------------------------------------------------
    def __add__(self, other):
        if isinstance(other, RatFunc):
            return RatFunc(self) + other
        o = self._other(other)
        if o is None:
            return NotImplemented
        return Poly(self.table, self.raw + o)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, RatFunc):
            return RatFunc(self) - other
        o = self._other(other)
        if o is None:
            return NotImplemented
        return Poly(self.table, self.raw - o)

    def __rsub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return Poly(self.table, o - self.raw)

    def __neg__(self):
        return Poly(self.table, -self.raw)

    def __mul__(self, other):
        if isinstance(other, RatFunc):
            return RatFunc(self) * other
        o = self._other(other)
        if o is None:
            return NotImplemented
        return Poly.reduced(self.table, self.raw * o)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return RatFunc(self) / other

    def __rtruediv__(self, other):
        return RatFunc(self.table.coerce(other)) / RatFunc(self)

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return RatFunc(self) ** k
        result = self.table.one().raw
        base = self.raw
        while k:
            if k & 1:
                result = self.table.reduce_raw(result * base)
            k >>= 1
            if k:
                base = self.table.reduce_raw(base * base)
        return Poly(self.table, result)

    # -- comparison ---------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, RatFunc):
            return other == self
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self.raw == o

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    def __hash__(self):
        return hash((self.table.names, str(self.raw)))

    def __bool__(self):
        return not self.raw.is_zero()

    # -- queries ------------------------------------------------------------
    def is_zero(self) -> bool:
        return self.raw.is_zero()

    def is_constant(self) -> bool:
        return self.raw.is_constant()

    def constant_value(self) -> Fraction:
        if not self.raw.is_constant():
            raise KernelError(f"{self} is not constant")
        if self.raw.is_zero():
            return Fraction(0)
        c = self.raw.leading_coefficient()
        return Fraction(int(c.p), int(c.q))

    def degree(self, name: str) -> int:
        """Degree in ``name``; -1 for the zero polynomial."""
        if self.raw.is_zero():
            return -1
        return int(self.raw.degrees()[self.table.index(name)])

    def total_degree(self, names: Iterable[str] | None = None) -> int:
        if self.raw.is_zero():
            return -1
        if names is None:
            return int(self.raw.total_degree())
        idx = [self.table.index(n) for n in names]
        return int(max(sum(m[i] for i in idx) for m in self.raw.monoms()))

    def variables(self) -> set[str]:
        if self.raw.is_zero():
            return set()
        degs = self.raw.degrees()
        return {n for n, d in zip(self.table.names, degs) if d > 0}

    def depends_on(self, names: Iterable[str]) -> bool:
        if self.raw.is_zero():
            return False
        degs = self.raw.degrees()
        return any(degs[self.table.index(n)] > 0 for n in names if n in self.table)

    def terms(self) -> list[tuple[tuple[int, ...], flint.fmpq]]:
        return list(self.raw.terms())

    def __len__(self):
        return len(self.raw)

    def leading_coefficient(self) -> Fraction:
        if self.raw.is_zero():
            return Fraction(0)
        c = self.raw.leading_coefficient()
        return Fraction(int(c.p), int(c.q))

    def coefficients(self, name: str) -> dict[int, "Poly"]:
        """Split into powers of ``name``: {k: coefficient of name**k}."""
        i = self.table.index(name)
        buckets: dict[int, dict] = {}
        for mon, c in self.raw.terms():
            k = int(mon[i])
            m = list(mon)
            m[i] = 0
            buckets.setdefault(k, {})[tuple(m)] = c
        ctx = self.table.ctx
        return {k: Poly(self.table, ctx.from_dict(v)) for k, v in sorted(buckets.items())}

    def coefficient(self, name: str, k: int) -> "Poly":
        return self.coefficients(name).get(k, self.table.zero())

    def coefficients_in(self, names: Iterable[str]) -> dict[tuple, "Poly"]:
        """Split by the exponents of several symbols at once."""
        idx = [self.table.index(n) for n in names]
        buckets: dict[tuple, dict] = {}
        for mon, c in self.raw.terms():
            key = tuple(int(mon[i]) for i in idx)
            m = list(mon)
            for i in idx:
                m[i] = 0
            buckets.setdefault(key, {})[tuple(m)] = c
        ctx = self.table.ctx
        return {k: Poly(self.table, ctx.from_dict(v)) for k, v in sorted(buckets.items())}

    # -- complex structure --------------------------------------------------
    def has_imaginary(self) -> bool:
        i = self.table.i_index
        return i is not None and not self.raw.is_zero() and self.raw.degrees()[i] > 0

    def real_imag(self) -> tuple["Poly", "Poly"]:
        """Return (A, B) with self = A + I*B and neither containing I."""
        if not self.has_imaginary():
            return self, self.table.zero()
        i = self.table.i_index
        re, im = {}, {}
        for mon, c in self.raw.terms():
            if mon[i]:
                m = list(mon)
                m[i] = 0
                im[tuple(m)] = c
            else:
                re[mon] = c
        ctx = self.table.ctx
        return Poly(self.table, ctx.from_dict(re)), Poly(self.table, ctx.from_dict(im))

    def conjugate(self) -> "Poly":
        """Complex conjugate, treating every symbol other than I as real."""
        if not self.has_imaginary():
            return self
        a, b = self.real_imag()
        return a - self.table.gen(IMAG) * b

    # -- conversions --------------------------------------------------------
    def to_table(self, table: SymbolTable) -> "Poly":
        if table == self.table:
            return Poly(table, self.raw)
        missing = self.variables() - set(table.names)
        if missing:
            raise SymbolTableMismatch(f"symbols {sorted(missing)} not in {table!r}")
        return Poly(table, self.raw.project_to_context(table.ctx))

    def subs(self, values: Mapping[str, object]) -> "Poly":
        """Evaluate some symbols at rational numbers."""
        vals = {k: to_fmpq(v) for k, v in values.items() if k in self.table}
        if not vals:
            return self
        return Poly.reduced(self.table, self.raw.subs(vals))

    def compose(self, images: Mapping[str, "Poly"]) -> "Poly":
        """Polynomial substitution of several symbols simultaneously."""
        gens = self.table.ctx.gens()
        args = [images[n].raw if n in images else gens[i] for i, n in enumerate(self.table.names)]
        return Poly.reduced(self.table, self.raw.compose(*args, ctx=self.table.ctx))

    def derivative(self, name: str) -> "Poly":
        return Poly(self.table, self.raw.derivative(self.table.index(name)))

    def __str__(self):
        from .printing import format_poly

        return format_poly(self)

    def __repr__(self):
        return f"Poly({self})"


# ---------------------------------------------------------------------------
# gcd, exact division, factorization
# ---------------------------------------------------------------------------


def _check_same(*polys: Poly) -> SymbolTable:
    table = polys[0].table
    for p in polys[1:]:
        if p.table is not table and p.table != table:
            raise SymbolTableMismatch(f"{table!r} vs {p.table!r}")
    return table


def _monic_raw(raw):
    if raw.is_zero():
        return raw
    return raw / raw.leading_coefficient()


def _real_gcd_raw(table: SymbolTable, a, b):
    """gcd of two I-free raw polynomials, computed in p-form, returned in p-form."""
    return table.to_pform(a).gcd(table.to_pform(b))


def _sympy_gaussian_gcd(f: Poly, g: Poly) -> Poly:
    """gcd over Q(i) via sympy; only reached in rare corner cases."""
    import sympy

    from .printing import to_sympy, from_sympy

    table = f.table
    fe, ge = to_sympy(f), to_sympy(g)
    gens = [sympy.Symbol(n) for n in table.names if n != IMAG and n in (f.variables() | g.variables())]
    if not gens:
        return table.one()
    res = sympy.gcd(sympy.Poly(fe, *gens, extension=sympy.I), sympy.Poly(ge, *gens, extension=sympy.I))
    return from_sympy(res.as_expr(), table)


def poly_gcd(f: Poly, g: Poly) -> Poly:
    """Canonical gcd: leading coefficient (graded-lex) equal to 1; gcd(0, 0) = 0."""
    table = _check_same(f, g)
    if f.is_zero() and g.is_zero():
        return table.zero()
    if f.is_zero():
        return _make_canonical(g)
    if g.is_zero():
        return _make_canonical(f)
    if not f.has_imaginary() and not g.has_imaginary():
        raw = _monic_raw(_real_gcd_raw(table, f.raw, g.raw))
        return Poly(table, table.from_pform(raw))
    if f.has_imaginary() and g.has_imaginary():
        return _make_canonical(_sympy_gaussian_gcd(f, g))
    if g.has_imaginary():
        f, g = g, f
    # f complex, g real: real common factors divide both parts of f.
    a, b = f.real_imag()
    h = _real_gcd_raw(table, _real_gcd_raw(table, a.raw, b.raw), table.to_pform(g.raw))
    h = Poly(table, table.from_pform(_monic_raw(h)))
    g_rest = exact_divide(g, h)
    fa, fb = exact_divide(a, h), exact_divide(b, h)
    norm = fa * fa + fb * fb
    extra = _real_gcd_raw(table, norm.raw, g_rest.raw)
    if extra.is_constant():
        return h
    # a non-real factor of f may still divide g; let sympy sort it out
    return _make_canonical(h * _sympy_gaussian_gcd(fa + table.gen(IMAG) * fb, g_rest))


def _canonical_unit(f: Poly):
    """Return u in Q(i) (as a Poly) such that u*f has leading coefficient 1.

    The leading coefficient is read off the largest graded-lex monomial of the
    I-free parts of f, computed on the p-form representation.
    """
    table = f.table
    if not f.has_imaginary():
        lc = table.to_pform(f.raw).leading_coefficient()
        return table.const(1 / lc)
    a, b = f.real_imag()
    ar, br = table.to_pform(a.raw), table.to_pform(b.raw)
    lead = []
    for r in (ar, br):
        if not r.is_zero():
            mon = tuple(int(e) for e in next(iter(r.monoms())))
            lead.append((sum(mon), mon))
    best = max(lead)[1]
    ca = _coeff_at(ar, best)
    cb = _coeff_at(br, best)
    norm = ca * ca + cb * cb
    return table.const(ca / norm) - table.gen(IMAG) * table.const(cb / norm)


def _make_canonical(f: Poly) -> Poly:
    """Scale by a unit of Q(i) so the leading coefficient becomes 1."""
    if f.is_zero():
        return f
    return f * _canonical_unit(f)


def _coeff_at(raw, mon: tuple) -> flint.fmpq:
    for m, c in raw.terms():
        if tuple(int(e) for e in m) == mon:
            return c
    return _ZERO_Q


def exact_divide(f: Poly, g: Poly) -> Poly:
    """Return f/g, raising if g does not divide f in the quotient ring."""
    table = _check_same(f, g)
    if g.is_zero():
        raise ZeroDenominator("division by zero polynomial")
    if f.is_zero():
        return f
    if g.has_imaginary():
        gc = g.conjugate()
        f = f * gc
        g = g * gc
    fr, gr = table.to_pform(f.raw), table.to_pform(g.raw)
    if f.has_imaginary():
        a, b = f.real_imag()
        qa = _pform_div(table, a.raw, gr)
        qb = _pform_div(table, b.raw, gr)
        return Poly(table, table.from_pform(qa)) + table.gen(IMAG) * Poly(table, table.from_pform(qb))
    return Poly(table, table.from_pform(_pform_div(table, f.raw, gr)))


def _pform_div(table, num_raw, den_pform):
    n = table.to_pform(num_raw)
    q, r = divmod(n, den_pform)
    if not r.is_zero():
        raise KernelError("inexact polynomial division")
    return q


def factor_poly(f: Poly) -> tuple[Fraction, list[tuple[Poly, int]]]:
    """Factor over Q (I and p treated as indeterminates, q expressed via p).

    The product of the returned factors equals f exactly; the factors are
    irreducible over Q but not necessarily over Q(i).
    """
    table = f.table
    if f.is_zero():
        return Fraction(0), []
    content, facs = table.to_pform(f.raw).factor()
    out = []
    for fac, e in facs:
        out.append((Poly(table, table.from_pform(fac)), int(e)))
    return Fraction(int(content.p), int(content.q)), out


# ---------------------------------------------------------------------------
# rational functions
# ---------------------------------------------------------------------------


class RatFunc:
    """Quotient num/den in lowest terms with a canonically scaled denominator.

    The denominator is I-free and its leading coefficient (graded-lex on the
    representation with q replaced by p**2) is 1; this makes the pair unique.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, *, normalized: bool = False):
        if isinstance(num, RatFunc):
            if den is not None:
                raise TypeError("RatFunc(RatFunc, den) is not supported")
            self.num, self.den = num.num, num.den
            return
        if den is None:
            self.num = num
            self.den = num.table.one()
            return
        if normalized:
            self.num, self.den = num, den
            return
        n, d = _normalize_pair(num, den)
        self.num, self.den = n, d

    @property
    def table(self) -> SymbolTable:
        return self.num.table

    # -- arithmetic ---------------------------------------------------------
    def _coerce(self, other) -> "RatFunc | None":
        if isinstance(other, RatFunc):
            _check_same(self.num, other.num)
            return other
        if isinstance(other, Poly):
            _check_same(self.num, other)
            return RatFunc(other)
        if isinstance(other, (int, Fraction, flint.fmpq, flint.fmpz)):
            return RatFunc(self.table.const(other))
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.num.is_zero():
            return self
        if self.num.is_zero():
            return o
        if self.den == o.den:
            return RatFunc(self.num + o.num, self.den)
        if self.den.is_constant() and o.den.is_constant():
            return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)
        g = poly_gcd(self.den, o.den)
        d1 = exact_divide(self.den, g)
        d2 = exact_divide(o.den, g)
        return RatFunc(self.num * d2 + o.num * d1, d1 * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den, normalized=True)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.num.is_zero() or o.num.is_zero():
            return RatFunc(self.table.zero())
        if self.den.is_constant() and o.den.is_constant():
            return RatFunc(self.num * o.num, self.den * o.den)
        return RatFunc(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if self.num.is_zero():
            raise ZeroDenominator("inverse of zero")
        return RatFunc(self.den, self.num)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        # powers of a reduced fraction stay reduced up to the I-normalization
        return RatFunc(self.num**k, self.den**k)

    # -- comparison ---------------------------------------------------------
    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.num.raw == o.num.raw and self.den.raw == o.den.raw

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    def __hash__(self):
        return hash((hash(self.num), hash(self.den)))

    def __bool__(self):
        return not self.num.is_zero()

    # -- queries ------------------------------------------------------------
    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def constant_value(self) -> Fraction:
        return self.num.constant_value() / self.den.constant_value()

    def as_poly(self) -> Poly:
        if not self.den.is_constant():
            raise KernelError(f"{self} is not a polynomial")
        c = self.den.constant_value()
        return self.num if c == 1 else self.num * (1 / c)

    def variables(self) -> set[str]:
        return self.num.variables() | self.den.variables()

    def depends_on(self, names: Iterable[str]) -> bool:
        names = list(names)
        return self.num.depends_on(names) or self.den.depends_on(names)

    def degree_num(self, name: str) -> int:
        return self.num.degree(name)

    def degree_den(self, name: str) -> int:
        return self.den.degree(name)

    def to_table(self, table: SymbolTable) -> "RatFunc":
        return RatFunc(self.num.to_table(table), self.den.to_table(table), normalized=True) \
            if table == self.table else RatFunc(self.num.to_table(table), self.den.to_table(table))

    def subs(self, values: Mapping[str, object]) -> "RatFunc":
        return RatFunc(self.num.subs(values), self.den.subs(values))

    def __str__(self):
        from .printing import format_ratfunc

        return format_ratfunc(self)

    def __repr__(self):
        return f"RatFunc({self})"


def _normalize_pair(num: Poly, den: Poly) -> tuple[Poly, Poly]:
    table = _check_same(num, den)
    if den.is_zero():
        raise ZeroDenominator("zero denominator")
    if num.is_zero():
        return table.zero(), table.one()
    if den.has_imaginary():
        c = den.conjugate()
        num = num * c
        den = den * c
    if not den.is_constant():
        g = poly_gcd(num, den)
        if not g.is_constant():
            num = exact_divide(num, g)
            den = exact_divide(den, g)
    unit = _canonical_unit(den)
    if not (unit.is_constant() and unit.constant_value() == 1):
        num = num * unit
        den = den * unit
    return num, den


def ratfunc_normalize(num: Poly, den: Poly) -> RatFunc:
    return RatFunc(num, den)


# ---------------------------------------------------------------------------
# substitution
# ---------------------------------------------------------------------------


def substitute(target, bindings: Mapping[str, object]) -> RatFunc:
    """Simultaneously replace symbols by rational functions.

    ``target`` may be a Poly or a RatFunc; binding values may be numbers,
    Polys or RatFuncs over the same table.
    """
    if isinstance(target, RatFunc):
        num = substitute(target.num, bindings)
        den = substitute(target.den, bindings)
        if den.is_zero():
            raise ZeroDenominator("substitution annihilates the denominator")
        return num / den
    table = target.table
    binds: dict[str, RatFunc] = {}
    for name, value in bindings.items():
        if name not in table:
            raise KernelError(f"cannot bind {name!r}: not in {table!r}")
        binds[name] = table.ratfunc(value)
    if not binds or target.is_zero():
        return RatFunc(target)
    used = target.variables()
    binds = {k: v for k, v in binds.items() if k in used}
    if not binds:
        return RatFunc(target)
    if all(v.is_polynomial() for v in binds.values()):
        images = {k: v.as_poly() for k, v in binds.items()}
        return RatFunc(target.compose(images))
    # common denominator Q; x_v -> P_v / Q, homogenized with Q^(D - deg)
    dens = [v.den for v in binds.values()]
    common = reduce(_lcm, dens)
    names = list(binds)
    idx = [table.index(n) for n in names]
    D = target.total_degree(names)
    numers = {n: binds[n].num * exact_divide(common, binds[n].den) for n in names}
    wctx = flint.fmpq_mpoly_ctx.get(tuple(table.ctx.names()) + ("_w_",), ORDERING)
    terms = {}
    for mon, c in target.raw.terms():
        s = sum(mon[i] for i in idx)
        terms[tuple(mon) + (D - s,)] = c
    homog = wctx.from_dict(terms)
    gens = table.ctx.gens()
    args = list(gens)
    for n, i in zip(names, idx):
        args[i] = numers[n].raw
    args.append(common.raw)
    num = Poly.reduced(table, homog.compose(*args, ctx=table.ctx))
    return RatFunc(num, common**D)


def _lcm(a: Poly, b: Poly) -> Poly:
    if a == b:
        return a
    g = poly_gcd(a, b)
    return a * exact_divide(b, g)
