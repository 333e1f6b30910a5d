from __future__ import annotations

import random

import flint
import pytest
import sympy
from sympy.polys.orderings import grevlex, grlex, lex

from orthorec.bases import make_table
from orthorec.groebner import (
    BudgetExceeded,
    PolySystem,
    buchberger,
    ideal_contains,
    is_groebner,
    reduce_poly,
    s_polynomial,
    solve_system,
)
from orthorec.kernel import RatFunc, substitute
from orthorec.printing import format_ratfunc

FLINT_ORDER = {"lex": "lex", "grlex": "deglex", "grevlex": "degrevlex"}
SYMPY_ORDER = {"lex": "lex", "grlex": "grlex", "grevlex": "grevlex"}
ORDERINGS = {"lex": lex, "grlex": grlex, "grevlex": grevlex}


def _random_system(rng):
    nv = rng.randint(1, 3)
    order = rng.choice(sorted(FLINT_ORDER))
    names = tuple("xyz"[:nv])
    ctx = flint.fmpq_mpoly_ctx.get(names, FLINT_ORDER[order])
    polys = []
    for _ in range(rng.randint(1, 3)):
        terms = {}
        for _ in range(rng.randint(1, 4)):
            e = [0] * nv
            for _ in range(rng.randint(0, 3)):
                e[rng.randrange(nv)] += 1
            terms[tuple(e)] = rng.randint(-5, 5)
        polys.append(ctx.from_dict(terms))
    return names, order, ctx, polys


def _to_sympy(f, syms):
    expr = sympy.Integer(0)
    for mon, c in f.terms():
        term = sympy.Rational(int(c.p), int(c.q))
        for s, e in zip(syms, mon):
            term *= s ** int(e)
        expr += term
    return expr


def _monic_sympy(expr, syms, order):
    if expr == 0:
        return expr
    terms = sympy.Poly(expr, *syms).terms()
    lead = max(terms, key=lambda t: ORDERINGS[order](t[0]))
    return sympy.expand(expr / lead[1])


SYSTEMS = [_random_system(random.Random(seed)) for seed in range(500)]


@pytest.mark.parametrize("chunk", range(10))
def test_random_systems(chunk):
    for names, order, ctx, polys in SYSTEMS[chunk * 50 : (chunk + 1) * 50]:
        G = buchberger(polys)
        assert is_groebner(G)
        # every S-polynomial reduces to zero
        for i in range(len(G)):
            for j in range(i + 1, len(G)):
                assert reduce_poly(s_polynomial(G[i], G[j]), G).is_zero()
        # same ideal in both directions
        assert all(ideal_contains(G, f) for f in polys)
        # reduced Groebner bases are unique: compare with sympy
        syms = sympy.symbols(names)
        exprs = [_to_sympy(f, syms) for f in polys if not f.is_zero()]
        if not exprs:
            assert G == []
            continue
        ref = sympy.groebner(exprs, *syms, order=SYMPY_ORDER[order])
        ours = {sympy.expand(_monic_sympy(_to_sympy(g, syms), syms, SYMPY_ORDER[order])) for g in G}
        theirs = {sympy.expand(_monic_sympy(g, syms, SYMPY_ORDER[order])) for g in ref.exprs}
        assert ours == theirs, (polys, order)


# bivariate systems whose lex eliminant is the (squarefree, monic) resultant
RESULTANT_CASES = [
    ("x**2 + y**2 - 1", "x*y - 1"),
    ("x**2 - y", "x - y**2 - 1"),
    ("x**3 - 2*y", "x*y + x - 3"),
    ("x**2 + x*y + 2", "x - y**2 + y"),
    ("x**2 - 3*y**2 + x", "x*y - 2"),
]


@pytest.mark.parametrize("f_text, g_text", RESULTANT_CASES)
def test_lex_eliminant_matches_resultant(f_text, g_text):
    x, y = sympy.symbols("x y")
    f, g = sympy.sympify(f_text), sympy.sympify(g_text)
    res = sympy.Poly(sympy.resultant(f, g, x), y)
    res_monic = sympy.Poly(sympy.sqf_part(res.as_expr()), y).monic()
    ctx = flint.fmpq_mpoly_ctx.get(("x", "y"), "lex")

    def to_flint(e):
        p = sympy.Poly(e, x, y)
        return ctx.from_dict({m: int(c) for m, c in p.terms()})

    G = buchberger([to_flint(f), to_flint(g)])
    elim = [h for h in G if all(m[0] == 0 for m in h.monoms())]
    assert len(elim) == 1
    ours = sympy.Poly(_to_sympy(elim[0], (x, y)), y).monic()
    assert ours == res_monic


def test_known_bases():
    ctx = flint.fmpq_mpoly_ctx.get(("x", "y"), "lex")
    x, y = ctx.gens()
    G = buchberger([x**2 + y**2 - 1, x * y - 1])
    assert sorted(str(g) for g in G) == sorted(["x + y^3 - y", "y^4 - y^2 + 1"])
    assert buchberger([ctx.from_dict({})]) == []


def test_budget_exceeded_carries_partial():
    ctx = flint.fmpq_mpoly_ctx.get(("x", "y", "z"), "lex")
    x, y, z = ctx.gens()
    with pytest.raises(BudgetExceeded) as info:
        buchberger([x**3 - y * z + 1, y**3 - x * z - 2, z**3 - x * y + 3], budget=5)
    assert info.value.partial is not None


T = make_table("quadratic", unknowns=["u", "v"], parameters=["s"], index=False)


def test_solve_linear_and_factor_split():
    u, v, s = T.gen("u"), T.gen("v"), T.gen("s")
    system = PolySystem([u * v - s * v, v * (v - 1)], ["u", "v"])
    branches = solve_system(system)
    outs = sorted(
        tuple(sorted((k, format_ratfunc(val)) for k, val in b.bindings.items())) for b in branches
    )
    # v = 0 (u free) and v = 1, u = s
    assert (("v", "0"),) in outs
    assert (("u", "s"), ("v", "1")) in outs
    for b in branches:
        for eq in system.equations:
            assert substitute(eq, b.bindings).is_zero()


def test_solve_respects_nonzero():
    u, v = T.gen("u"), T.gen("v")
    system = PolySystem([u * v], ["u", "v"], nonzero=[u])
    branches = solve_system(system)
    assert len(branches) == 1
    assert branches[0].bindings["v"] == RatFunc(T.zero())


def test_solve_inconsistent_and_trivial():
    u, s = T.gen("u"), T.gen("s")
    assert solve_system(PolySystem([s], ["u"])) == []
    branches = solve_system(PolySystem([u - u], ["u"]))
    assert len(branches) == 1 and branches[0].bindings == {}


def test_solve_quadratic_irrational_stays_residual():
    u = T.gen("u")
    branches = solve_system(PolySystem([u * u - 2], ["u"]))
    assert len(branches) == 1
    assert branches[0].equations
