"""Groebner bases and a branching solver for the identification systems.

``buchberger`` is a plain Buchberger algorithm (with the coprime and chain
criteria) on flint polynomials over Q, for the orders lex, grlex and
grevlex.  ``solve_system`` triangularizes a system by repeated linear
elimination, factor splitting and case splits on leading coefficients; a lex
Groebner basis is used when neither applies.  Parameters that are not
unknowns are treated as transcendental: a factor free of unknowns is
nonzero.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import flint

from .kernel import (
    IMAG,
    SQRT_Q,
    KernelError,
    Poly,
    RatFunc,
    SymbolTable,
    factor_poly,
    substitute,
)
from .printing import format_poly, format_ratfunc

ORDERS = {"lex": "lex", "grlex": "deglex", "graded-lex": "deglex", "grevlex": "degrevlex"}
DEFAULT_BUDGET = 10**6
DEFAULT_DEPTH = 12


class BudgetExceeded(KernelError):
    """The step budget ran out; ``partial`` holds the basis computed so far."""

    def __init__(self, message: str, partial=None, steps: int = 0):
        super().__init__(message)
        self.partial = partial or []
        self.steps = steps


class _Budget:
    def __init__(self, limit: int | None):
        self.limit = DEFAULT_BUDGET if limit is None else limit
        self.used = 0

    def spend(self, k: int = 1, partial=None) -> None:
        self.used += k
        if self.used > self.limit:
            raise BudgetExceeded(f"step budget of {self.limit} exceeded", partial, self.used)


# ---------------------------------------------------------------------------
# Buchberger on flint polynomials
# ---------------------------------------------------------------------------


def _lm(f):
    return f.monomial(0)


def _lc(f):
    return f.coefficient(0)


def _divides(a: tuple, b: tuple) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lcm(a: tuple, b: tuple) -> tuple:
    return tuple(max(x, y) for x, y in zip(a, b))


def _mono(ctx, exps: tuple, coeff=1):
    return ctx.from_dict({exps: coeff})


def reduce_poly(f, basis: Sequence, budget: _Budget | None = None):
    """Full reduction of f modulo ``basis`` (normal form, leading terms first)."""
    ctx = f.context()
    rem = ctx.from_dict({})
    leads = [(_lm(g), _lc(g), g) for g in basis if not g.is_zero()]
    while not f.is_zero():
        m = _lm(f)
        c = _lc(f)
        for lm, lc, g in leads:
            if _divides(lm, m):
                shift = tuple(x - y for x, y in zip(m, lm))
                f = f - _mono(ctx, shift, c / lc) * g
                if budget is not None:
                    budget.spend(1)
                break
        else:
            term = _mono(ctx, m, c)
            rem = rem + term
            f = f - term
    return rem


def s_polynomial(f, g):
    ctx = f.context()
    lf, lg = _lm(f), _lm(g)
    L = _lcm(lf, lg)
    return (_mono(ctx, tuple(a - b for a, b in zip(L, lf)), 1 / _lc(f)) * f
            - _mono(ctx, tuple(a - b for a, b in zip(L, lg)), 1 / _lc(g)) * g)


def _monic(f):
    return f * (1 / _lc(f))


def _interreduce(G: list, budget: _Budget | None) -> list:
    G = [g for g in G if not g.is_zero()]
    # drop elements whose leading monomial is divisible by another's
    G.sort(key=lambda g: len(g))
    keep: list = []
    for g in G:
        if not any(_divides(_lm(h), _lm(g)) for h in keep):
            keep = [h for h in keep if not _divides(_lm(g), _lm(h))]
            keep.append(g)
    out = []
    for i, g in enumerate(keep):
        others = keep[:i] + keep[i + 1:]
        r = reduce_poly(g, others, budget)
        out.append(_monic(r))
    out.sort(key=lambda g: _sort_key(g), reverse=True)
    return out


def _sort_key(g):
    # descending by leading monomial w.r.t. the context order: compare via a two-term polynomial
    return _MonoKey(g)


class _MonoKey:
    __slots__ = ("g",)

    def __init__(self, g):
        self.g = g

    def __lt__(self, other):
        a, b = _lm(self.g), _lm(other.g)
        if a == b:
            return str(self.g) < str(other.g)
        ctx = self.g.context()
        probe = _mono(ctx, a) + _mono(ctx, b)
        return probe.monomial(0) == b

    def __eq__(self, other):
        return _lm(self.g) == _lm(other.g) and str(self.g) == str(other.g)


def buchberger(polys: Sequence, budget: int | _Budget | None = None) -> list:
    """Reduced Groebner basis of the ideal generated by flint polynomials.

    The monomial order is the one of the polynomials' context.  The zero
    ideal gives the empty list.
    """
    bud = budget if isinstance(budget, _Budget) else _Budget(budget)
    G = [_monic(f) for f in polys if not f.is_zero()]
    if not G:
        return []
    pairs = [(i, j) for i in range(len(G)) for j in range(i)]
    while pairs:
        # normal strategy: smallest lcm first (by total degree)
        pairs.sort(key=lambda ij: -sum(_lcm(_lm(G[ij[0]]), _lm(G[ij[1]]))))
        i, j = pairs.pop()
        li, lj = _lm(G[i]), _lm(G[j])
        L = _lcm(li, lj)
        if all(a == 0 or b == 0 for a, b in zip(li, lj)):
            continue  # coprime leading monomials
        if any(
            k not in (i, j)
            and _divides(_lm(G[k]), L)
            and (max(i, k), min(i, k)) not in pairs
            and (max(j, k), min(j, k)) not in pairs
            for k in range(len(G))
        ):
            continue  # chain criterion
        bud.spend(1, G)
        r = reduce_poly(s_polynomial(G[i], G[j]), G, bud)
        if r.is_zero():
            continue
        r = _monic(r)
        if r.is_constant():
            return [r]
        G.append(r)
        n = len(G) - 1
        pairs += [(n, k) for k in range(n)]
    return _interreduce(G, bud)


def is_groebner(G: Sequence) -> bool:
    """Buchberger criterion: every S-polynomial reduces to zero."""
    for f, g in itertools.combinations(G, 2):
        if not reduce_poly(s_polynomial(f, g), G).is_zero():
            return False
    return True


def ideal_contains(G: Sequence, f) -> bool:
    return reduce_poly(f, G).is_zero()


# ---------------------------------------------------------------------------
# systems and branches
# ---------------------------------------------------------------------------


@dataclass
class PolySystem:
    """Equations (kernel Polys, numerators only) in the listed unknowns."""

    equations: list[Poly]
    unknowns: list[str]
    nonzero: list[Poly] = field(default_factory=list)

    @property
    def table(self) -> SymbolTable:
        return self.equations[0].table if self.equations else self.nonzero[0].table


@dataclass
class SolutionBranch:
    bindings: dict[str, RatFunc]
    nonzero: list[Poly]
    equations: list[Poly]  # residual polynomial constraints not solved for
    free: list[str]

    def describe(self) -> dict:
        return {
            "bindings": {k: format_ratfunc(v) for k, v in self.bindings.items()},
            "nonzero": [format_poly(p) for p in self.nonzero],
            "equations": [format_poly(p) for p in self.equations],
            "free": list(self.free),
        }

    def value(self, name: str, table: SymbolTable) -> RatFunc:
        if name in self.bindings:
            return self.bindings[name]
        return RatFunc(table.gen(name))


def to_flint(polys: Sequence[Poly], names: Sequence[str], order: str):
    """Kernel Polys -> flint polys in a context with the given variable order."""
    table = polys[0].table
    ctx = flint.fmpq_mpoly_ctx.get(tuple(names), ORDERS[order])
    perm = [table.index(nm) for nm in names]
    out = []
    for f in polys:
        d = {}
        for mon, c in f.raw.terms():
            mon = tuple(int(e) for e in mon)
            if any(mon[k] for k in range(len(mon)) if k not in perm):
                raise KernelError("polynomial uses symbols outside the ordering")
            d[tuple(mon[k] for k in perm)] = c
        out.append(ctx.from_dict(d))
    return ctx, out


def from_flint(fs: Iterable, names: Sequence[str], table: SymbolTable) -> list[Poly]:
    pos = [table.index(nm) for nm in names]
    out = []
    for f in fs:
        terms = {}
        for mon, c in f.terms():
            full = [0] * len(table)
            for k, e in zip(pos, mon):
                full[k] = int(e)
            terms[tuple(full)] = c
        out.append(Poly.from_terms(table, terms))
    return out


def system_groebner(polys: Sequence[Poly], unknowns: Sequence[str], budget: _Budget | None = None,
                    order: str = "lex") -> list[Poly]:
    """Groebner basis w.r.t. ``order`` on the unknowns, then everything else (lex below).

    The structural relations I^2 = -1 and p^2 = q are added to the ideal.
    """
    table = polys[0].table
    used = set()
    for f in polys:
        used |= f.variables()
    rest = [nm for nm in table.names if nm in used and nm not in unknowns]
    names = list(unknowns) + rest
    gens = list(polys)
    if IMAG in rest:
        gens.append(table.gen(IMAG) ** 2 + 1)
    if SQRT_Q in rest:
        gens.append(table.gen(SQRT_Q) ** 2 - table.gen("q"))
        if "q" not in names:
            names.append("q")
    ctx, fl = to_flint(gens, names, order)
    G = buchberger(fl, budget)
    return from_flint(G, names, table)


# ---------------------------------------------------------------------------
# branching solver
# ---------------------------------------------------------------------------


def _canon(f: Poly) -> Poly:
    lc = f.leading_coefficient()
    return f * (1 / lc) if lc != 1 else f


def _unknown_factors(f: Poly, unknowns: Sequence[str]) -> list[Poly]:
    """Distinct factors of f that involve an unknown (multiplicity dropped)."""
    if not f.depends_on(unknowns):
        return []
    _, facs = factor_poly(f)
    out = []
    for g, _e in facs:
        if g.depends_on(unknowns):
            g = _canon(g)
            if g not in out:
                out.append(g)
    return out


@dataclass
class _State:
    eqs: list[Poly]
    bindings: dict[str, RatFunc]
    nonzero: list[Poly]
    depth: int


class _Solver:
    def __init__(self, system: PolySystem, budget: _Budget, max_depth: int):
        self.unknowns = list(system.unknowns)
        self.budget = budget
        self.max_depth = max_depth
        self.results: list[SolutionBranch] = []
        self.table = system.table

    # -- helpers --------------------------------------------------------------
    def _is_nonzero_known(self, g: Poly, nonzero: list[Poly]) -> bool:
        return g in nonzero

    def _simplify(self, eqs: list[Poly], nonzero: list[Poly]):
        """Return list of factor lists, or None if inconsistent."""
        out = []
        seen = set()
        for f in eqs:
            if f.is_zero():
                continue
            facs = _unknown_factors(f, self.unknowns)
            facs = [g for g in facs if not self._is_nonzero_known(g, nonzero)]
            if not facs:
                return None
            key = tuple(sorted(str(g) for g in facs))
            if key in seen:
                continue
            seen.add(key)
            out.append(facs)
        # an equation whose factor set contains another's is implied by it
        out.sort(key=len)
        pruned = []
        for facs in out:
            if any(all(g in facs for g in other) for other in pruned):
                continue
            pruned.append(facs)
        return pruned

    def _substitute_state(self, st: _State, u: str, value: RatFunc, extra_nonzero: Sequence[Poly]):
        binding = {u: value}
        eqs = []
        for f in st.eqs:
            r = substitute(f, binding)
            eqs.append(r.num)
        nonzero = []
        for g in list(st.nonzero) + list(extra_nonzero):
            r = substitute(g, binding)
            if r.num.is_zero():
                return None
            for h in _unknown_factors(r.num, self.unknowns):
                if h not in nonzero:
                    nonzero.append(h)
        bindings = {k: substitute(v, binding) for k, v in st.bindings.items()}
        bindings[u] = value
        self.budget.spend(1)
        return _State(eqs, bindings, nonzero, st.depth)

    # -- search ---------------------------------------------------------------
    def run(self, st: _State) -> None:
        self.budget.spend(1)
        facs_list = self._simplify(st.eqs, st.nonzero)
        if facs_list is None:
            return
        if not facs_list:
            free = [u for u in self.unknowns if u not in st.bindings]
            self.results.append(SolutionBranch(dict(st.bindings), list(st.nonzero), [], free))
            return
        st = _State([_prod(f) for f in facs_list], st.bindings, st.nonzero, st.depth)
        # (a) linear with a coefficient free of unknowns
        best = None
        for facs in facs_list:
            if len(facs) != 1:
                continue
            f = facs[0]
            for u in self.unknowns:
                if f.degree(u) != 1:
                    continue
                L = f.coefficient(u, 1)
                if L.depends_on(self.unknowns):
                    continue
                score = (len(f), self.unknowns.index(u))
                if best is None or score < best[0]:
                    best = (score, f, u, L)
        if best is not None:
            _, f, u, L = best
            value = -RatFunc(f.coefficient(u, 0), L)
            nxt = self._substitute_state(_State([g for g in st.eqs if g is not f], st.bindings, st.nonzero, st.depth), u, value, [])
            if nxt is not None:
                self.run(nxt)
            return
        if st.depth >= self.max_depth:
            self._residual(st)
            return
        # (b) factor split
        split = next((facs for facs in facs_list if len(facs) > 1), None)
        if split is not None:
            rest = [g for g in st.eqs if g != _prod(split)]
            for i, g in enumerate(split):
                self.run(_State(rest + [g], st.bindings, st.nonzero + split[:i], st.depth + 1))
            return
        # (c) linear with a coefficient that may vanish
        cand = None
        for facs in facs_list:
            f = facs[0]
            for u in self.unknowns:
                if f.degree(u) == 1:
                    L = f.coefficient(u, 1)
                    score = (len(L), len(f), self.unknowns.index(u))
                    if cand is None or score < cand[0]:
                        cand = (score, f, u, L)
        if cand is not None:
            _, f, u, L = cand
            others = [g for g in st.eqs if g is not f]
            value = -RatFunc(f.coefficient(u, 0), L)
            nxt = self._substitute_state(_State(others, st.bindings, st.nonzero, st.depth + 1), u, value, [L])
            if nxt is not None:
                self.run(nxt)
            self.run(_State(st.eqs + [L], st.bindings, st.nonzero, st.depth + 1))
            return
        # (d) Groebner basis
        G = system_groebner(st.eqs, self.unknowns, self.budget)
        G = [g for g in G if g.depends_on(self.unknowns) or not _structural_only(g)]
        if any(not g.depends_on(self.unknowns) for g in G):
            return  # a nonzero element free of unknowns: inconsistent
        if G and len(G) == 1 and G[0].is_constant():
            return
        if sorted(map(str, G)) == sorted(map(str, st.eqs)):
            self._residual(st)
            return
        self.run(_State(G, st.bindings, st.nonzero, st.depth + 1))

    def _residual(self, st: _State) -> None:
        free = [u for u in self.unknowns if u not in st.bindings]
        self.results.append(SolutionBranch(dict(st.bindings), list(st.nonzero), list(st.eqs), free))


def _prod(facs: list[Poly]) -> Poly:
    out = facs[0]
    for g in facs[1:]:
        out = out * g
    return out


def _structural_only(g: Poly) -> bool:
    """True for the added relations I^2 + 1 and p^2 - q (after reduction they vanish)."""
    return g.is_zero()


def _specializes(a: SolutionBranch, b: SolutionBranch, table: SymbolTable) -> bool:
    """True if branch a is an instance of branch b (a's values satisfy b's bindings)."""
    if b.equations or a.equations:
        return False
    amap = {u: v for u, v in a.bindings.items()}
    for u, bv in b.bindings.items():
        av = a.value(u, table)
        try:
            inst = substitute(bv, amap) if amap else bv
        except KernelError:
            return False
        if not (inst - av).is_zero():
            return False
    for g in b.nonzero:
        try:
            r = substitute(g, amap) if amap else RatFunc(g)
        except KernelError:
            return False
        if r.is_zero():
            return False
    return True


def solve_system(system: PolySystem, budget: int | None = None, max_depth: int = DEFAULT_DEPTH,
                 prune: bool = True) -> list[SolutionBranch]:
    """All solution branches of the system (each verified by substitution)."""
    if not system.equations:
        return [SolutionBranch({}, list(system.nonzero), [], list(system.unknowns))]
    bud = _Budget(budget)
    solver = _Solver(system, bud, max_depth)
    nonzero = []
    for g in system.nonzero:
        for h in _unknown_factors(g, system.unknowns):
            if h not in nonzero:
                nonzero.append(h)
    solver.run(_State(list(system.equations), {}, nonzero, 0))
    branches = []
    for br in solver.results:
        if not br.equations:
            for f in system.equations:
                if not substitute(f, br.bindings).is_zero():
                    raise KernelError("internal: branch does not satisfy the system")
            # the identities hold wherever the formulas are defined, so only
            # denominators (and the caller's conditions) need to stay nonzero
            br.nonzero = _defining_conditions(br, system)
        if not any(_same(br, other) for other in branches):
            branches.append(br)
    if prune:
        table = system.table
        kept = []
        for i, br in enumerate(branches):
            if any(j != i and _specializes(br, other, table) and not _specializes(other, br, table)
                   for j, other in enumerate(branches)):
                continue
            kept.append(br)
        branches = kept
    return branches


def _defining_conditions(br: SolutionBranch, system: PolySystem) -> list[Poly]:
    out: list[Poly] = []
    sources = [v.den for v in br.bindings.values()]
    for g in system.nonzero:
        r = substitute(g, br.bindings) if br.bindings else RatFunc(g)
        sources += [r.num, r.den]
    for src in sources:
        for h in _unknown_factors(src, system.unknowns):
            if h not in out:
                out.append(h)
    return out


def _same(a: SolutionBranch, b: SolutionBranch) -> bool:
    if set(a.bindings) != set(b.bindings):
        return False
    return all(a.bindings[k] == b.bindings[k] for k in a.bindings) and a.equations == b.equations


__all__ = [
    "BudgetExceeded",
    "PolySystem",
    "SolutionBranch",
    "buchberger",
    "is_groebner",
    "ideal_contains",
    "reduce_poly",
    "s_polynomial",
    "solve_system",
    "system_groebner",
    "to_flint",
    "from_flint",
]
