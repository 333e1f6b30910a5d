from __future__ import annotations

import dataclasses
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from orthorec.bases import (
    BasisKind,
    basis_element,
    index_value,
    leading_coefficient_in,
    make_table,
    merge_tables,
    structure_relations,
)
from orthorec.catalog import catalog_lookup
from orthorec.identify import identify
from orthorec.kernel import Poly, RatFunc, substitute
from orthorec.lattice import (
    Lattice,
    LatticeError,
    apply_operator,
    choose_witnesses,
    dde_residuals,
    difference_coefficients,
    difference_residual,
    generate_pn,
    verify_dde,
)
from orthorec.parser import parse_recurrence
from orthorec.printing import format_ratfunc, to_sympy

Q_HERMITE = "2*x*p(n)=p(n+1)+(1-q^n)*p(n-1)"


def _table(basis):
    return make_table(basis.case, variables=["x"], parameters=["al"], index=False)


@pytest.mark.parametrize("basis", list(BasisKind), ids=lambda b: b.value)
def test_structure_relations_hold_on_the_lattice(basis):
    # the stored constants against the operators acting on explicit products
    T = _table(basis)
    x = RatFunc(T.gen("x"))
    al = RatFunc(T.gen("al"))
    lat = Lattice(basis, T, "x", h=al)
    sr = structure_relations(basis)
    M = merge_tables(sr.table, T)
    c = {k: v.to_table(M) for k, v in sr.constants().items()}
    par = basis.basis_parameter
    phi = [RatFunc(basis_element(basis, m, T, "x", al)) for m in range(10)]
    zero = RatFunc(T.zero())

    def ev(name, m):
        r = substitute(c[name], {basis.index_name: index_value(M, basis.index_name, m), par: al.to_table(M)})
        return r.to_table(T)

    for m in range(9):
        prev = phi[m - 1] if m >= 1 else zero
        assert phi[1] * lat.apply(phi[m], ("D", "D")) == ev("ell", m) * prev
        assert phi[1] * lat.apply(phi[m], ("S", "D")) == ev("m1", m) * prev + ev("m2", m) * phi[m]
        assert phi[1] * phi[m] == ev("nu1", m) * phi[m] + ev("nu2", m) * phi[m + 1]
        assert x * phi[m] == ev("mu1", m) * phi[m] + ev("mu2", m) * phi[m + 1]


@pytest.mark.parametrize("basis", list(BasisKind), ids=lambda b: b.value)
def test_leading_coefficients(basis):
    T = _table(basis)
    for m in range(5):
        el = RatFunc(basis_element(basis, m, T, "x", T.gen("al")))
        lc = leading_coefficient_in(basis, m, T, T.gen("al"))
        assert el.num.degree("x") == m
        assert RatFunc(el.num.coefficient("x", m), el.den) == lc


def _poly_strategy(table, max_deg=4):
    coeffs = st.lists(st.fractions(min_value=-4, max_value=4, max_denominator=3), min_size=1, max_size=max_deg + 1)
    ix = table.index("x")

    def build(cs):
        terms = {}
        for k, c in enumerate(cs):
            mon = [0] * len(table)
            mon[ix] = k
            terms[tuple(mon)] = c
        return Poly.from_terms(table, terms)

    return coeffs.map(build)


@pytest.mark.parametrize("basis", list(BasisKind), ids=lambda b: b.value)
@settings(max_examples=25, deadline=None)
@given(data=st.data())
def test_operator_degree_laws(basis, data):
    T = _table(basis)
    f = data.draw(_poly_strategy(T))
    lat = Lattice(basis, T, "x", h=T.ratfunc(Fraction(3, 2)))
    deg = f.degree("x") if not f.is_zero() else -1
    d = lat.apply(f, ("D",))
    s = lat.apply(f, ("S",))
    # D lowers the degree by exactly one, S keeps it
    if deg >= 1:
        assert d.num.degree("x") == deg - 1 and d.den.degree("x") == 0
    else:
        assert d.is_zero()
    if deg >= 0:
        assert s.num.degree("x") == deg
    # both are linear
    g = f * 3 + 1
    assert lat.apply(g, ("D",)) == 3 * d
    assert lat.apply(g, ("S",)) == 3 * s + 1


def test_wilson_operator_examples():
    T = make_table("quadratic", variables=["x"], parameters=["al"], index=False)
    x, al = T.gen("x"), T.gen("al")
    assert apply_operator(x + al * al, "D", BasisKind.WILSON) == RatFunc(T.one())
    assert apply_operator(x, "S", BasisKind.WILSON) == RatFunc(x) - Fraction(1, 4)
    assert apply_operator(x * x, "D", BasisKind.WILSON) == RatFunc(2 * x) - Fraction(1, 2)


def test_askey_wilson_operator_example():
    T = make_table("q", variables=["x"], index=False)
    x, p, q = T.gen("x"), T.gen("p"), T.gen("q")
    # x = (z + 1/z)/2; S x = (p + 1/p)/2 x, D x = 1
    assert apply_operator(x, "D", BasisKind.ASKEY_WILSON) == RatFunc(T.one())
    assert apply_operator(x, "S", BasisKind.ASKEY_WILSON) == RatFunc(x * (q + 1), 2 * p)


def test_non_polynomial_rejected():
    T = make_table("quadratic", variables=["x"], index=False)
    lat = Lattice(BasisKind.WILSON, T, "x")
    with pytest.raises(LatticeError):
        lat.from_lattice(lat.to_lattice(T.gen("x")) * RatFunc(T.gen(lat.var)).to_table(lat.table)
                         + RatFunc(lat.table.gen("_s")))
    with pytest.raises(LatticeError):
        lat.to_lattice(RatFunc(T.one(), T.gen("x")))


def test_racah_needs_lattice_parameter():
    T = make_table("quadratic", variables=["x"], index=False)
    with pytest.raises(Exception):
        Lattice(BasisKind.RACAH, T, "x")


def test_generate_q_hermite():
    rec = parse_recurrence(Q_HERMITE, "q")
    ps = [format_ratfunc(p) for p in generate_pn(rec, 3)]
    assert ps[:3] == ["1", "2*x", "4*x^2 + q - 1"]
    # oracle: iterate the recurrence directly in sympy
    x, q = sympy.symbols("x q")
    ref = [sympy.Integer(1), 2 * x]
    for n in range(1, 3):
        ref.append(sympy.expand(2 * x * ref[n] - (1 - q**n) * ref[n - 1]))
    got = generate_pn(rec, 3)
    for r, g in zip(ref, got):
        assert sympy.expand(to_sympy(g.num, pform=False) / to_sympy(g.den, pform=False) - r) == 0


def test_verify_and_tampering():
    rec = parse_recurrence(Q_HERMITE, "q")
    sols = identify(rec, BasisKind.ASKEY_WILSON).solutions
    assert sols
    for sol in sols:
        assert verify_dde(rec, sol, 5).ok
    sol = sols[0]
    bad = dataclasses.replace(sol, pp=dataclasses.replace(sol.pp, e=sol.pp.e + 1))
    report = verify_dde(rec, bad, 5)
    assert not report.ok and report.first_failure().n == 1
    report = verify_dde(rec, dataclasses.replace(sol, lam=sol.lam * 0), 3)
    assert not report.ok
    assert report.rows[0].ok  # lambda_0 = 0 anyway


def test_witnesses_avoid_conditions():
    T = make_table("quadratic", parameters=["a", "b"], index=False)
    a, b = T.gen("a"), T.gen("b")
    conds = [a - 1, b - 1, a - b, a + b - 4]
    w = choose_witnesses(conds, ["a", "b"])
    assert all(not c.subs(w).is_zero() for c in conds)
    assert w == choose_witnesses(conds, ["a", "b"])
    with pytest.raises(LatticeError):
        choose_witnesses([T.zero()], ["a"], tries=5)


def test_racah_full_step_equation():
    e = catalog_lookup("racah")
    T = e.pp.table
    lat = Lattice(e.basis, T, "x", e.lattice)
    B, D = difference_coefficients(lat, e.pp)
    # oracle: the classical Racah difference equation written in
    # x with lambda(x) = x(x + gamma + delta + 1) and u = x + (gamma + delta + 1)/2
    s, x, al, be, ga, de = sympy.symbols("_s x alpha beta gamma delta")
    sub = {s: x + (ga + de + 1) / 2}
    Bk = (x + al + 1) * (x + be + de + 1) * (x + ga + 1) * (x + ga + de + 1) / (
        (2 * x + ga + de + 1) * (2 * x + ga + de + 2))
    Dk = x * (x - al + ga + de) * (x - be + ga) * (x + de) / ((2 * x + ga + de) * (2 * x + ga + de + 1))
    assert sympy.simplify((to_sympy(B.num) / to_sympy(B.den)).subs(sub) + Bk) == 0
    assert sympy.simplify((to_sympy(D.num) / to_sympy(D.den)).subs(sub) + Dk) == 0
    # the full-step residual is minus the operator residual, for any polynomial and lambda
    X = RatFunc(T.gen("x"))
    for k in range(1, 5):
        lam_k = substitute(e.lam, {"n": k})
        poly = X**k + 2 * X
        op = dde_residuals(e.pp, lam_k, [poly], e.basis, "x", e.lattice)[0]
        full = difference_residual(lat, e.pp, lam_k, poly)
        assert full == -lat.to_lattice(op)
