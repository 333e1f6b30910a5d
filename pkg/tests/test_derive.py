from __future__ import annotations

from fractions import Fraction

import pytest
import sympy

from orthorec.bases import BasisKind, index_value, make_table
from orthorec.derive import (
    DegenerateFamily,
    PhiPsi,
    closed_form_ttrr,
    derive_k_ratios,
    generic_ttrr,
    lambda_closed_form,
    ttrr_coeffs,
)
from orthorec.kernel import RatFunc, substitute
from orthorec.lattice import Lattice
from orthorec.printing import to_sympy

# concrete equations with no special relations between the coefficients
SAMPLE = (Fraction(1), Fraction(2, 3), Fraction(5, 7), Fraction(3), Fraction(-1, 2))
LATTICE_H = Fraction(3, 2)
Q_VALUE = {"q": 4, "p": 2}


def _sym(r: RatFunc):
    return to_sympy(r.num, pform=False) / to_sympy(r.den, pform=False)


@pytest.mark.parametrize("basis", list(BasisKind), ids=lambda b: b.value)
def test_generic_engine_matches_closed_forms(basis):
    g = generic_ttrr(basis)
    T = g.table
    cf = closed_form_ttrr(basis, PhiPsi.generic(T))
    assert g.a_ratio == cf.a_ratio.to_table(T)
    assert g.b_tilde == cf.b_tilde.to_table(T)
    if cf.c_tilde is not None:
        assert g.c_tilde == cf.c_tilde.to_table(T)
    assert g.lam == lambda_closed_form(basis, T, T.gen("_a"), T.gen("_d"))


def _monic_solutions(basis, upto):
    """Monic polynomial solutions p_0..p_upto, by undetermined coefficients.

    Only the lattice operators are used (never the structure relations);
    the linear algebra is done by sympy.
    """
    T = make_table(basis.case, variables=["x"], index=False)
    lat = Lattice(basis, T, "x", h=LATTICE_H if basis.has_lattice_parameter else None)
    a, b, c, d, e = SAMPLE
    X = RatFunc(T.gen("x"))
    phi = a * X * X + b * X + c
    psi = d * X + e
    x = sympy.Symbol("x")

    def L(k):
        r = lat.to_lattice(X**k)
        d1 = lat.D(r)
        out = phi * lat.from_lattice(lat.D(d1)) + psi * lat.from_lattice(lat.S(d1))
        return sympy.expand(_sym(out).subs(Q_VALUE))

    ops = [L(k) for k in range(upto + 1)]
    polys, lams = [], []
    for n in range(upto + 1):
        cs = sympy.symbols(f"c0:{n}") if n else ()
        lam = -sympy.Poly(ops[n], x).coeff_monomial(x**n)
        expr = ops[n] + lam * x**n + sum(ck * (ops[k] + lam * x**k) for k, ck in enumerate(cs))
        eqs = sympy.Poly(sympy.expand(expr), x).all_coeffs() if expr != 0 else []
        sol = sympy.solve(eqs, cs, dict=True) if cs else [{}]
        assert len(sol) == 1
        polys.append(sympy.expand(x**n + sum(sol[0][ck] * x**k for k, ck in enumerate(cs))))
        lams.append(lam)
    return polys, lams


@pytest.mark.parametrize("basis", list(BasisKind), ids=lambda b: b.value)
def test_recurrence_matches_direct_solutions(basis):
    upto = 5
    polys, lams = _monic_solutions(basis, upto)
    T = make_table(basis.case, index=True)
    pp = PhiPsi.make(T, *SAMPLE)
    co = ttrr_coeffs(basis, pp, h=LATTICE_H if basis.has_lattice_parameter else None)
    x = sympy.Symbol("x")
    for n in range(1, upto):
        at = {basis.index_name: index_value(co.table, basis.index_name, n)}
        bt = sympy.nsimplify(_sym(substitute(co.b_tilde, at)).subs(Q_VALUE))
        ct = sympy.nsimplify(_sym(substitute(co.c_tilde, at)).subs(Q_VALUE))
        lam = _sym(substitute(co.lam, at)).subs(Q_VALUE)
        # p_{n+1} = (x + Bt_n) p_n - Ct_n p_{n-1}
        assert sympy.expand(polys[n + 1] - (x + bt) * polys[n] + ct * polys[n - 1]) == 0
        assert sympy.simplify(lam - lams[n]) == 0


@pytest.mark.parametrize("basis", list(BasisKind), ids=lambda b: b.value)
def test_homogeneity(basis):
    # scaling phi and psi together scales lambda_n and leaves the recurrence alone
    T = make_table(basis.case, parameters=["t"])
    h = LATTICE_H if basis.has_lattice_parameter else None
    pp = PhiPsi.make(T, *SAMPLE)
    tau = RatFunc(T.gen("t"))
    base = ttrr_coeffs(basis, pp, h)
    scaled = ttrr_coeffs(basis, pp.scaled(tau), h)
    assert scaled.b_tilde == base.b_tilde
    assert scaled.c_tilde == base.c_tilde
    assert scaled.lam == base.lam * tau.to_table(base.table)


@pytest.mark.parametrize("basis", [BasisKind.WILSON, BasisKind.POCHHAMMER, BasisKind.ASKEY_WILSON],
                         ids=lambda b: b.value)
def test_basis_parameter_cancels(basis):
    g = generic_ttrr(basis)
    assert not g.b_tilde.depends_on(["_alpha"])
    assert not g.c_tilde.depends_on(["_alpha"])


def test_k_ratios_wilson_lambda():
    T = make_table("quadratic")
    kr = derive_k_ratios(BasisKind.WILSON, PhiPsi.make(T, 2, 0, 1, 3, 1))
    n = RatFunc(T.gen("n"))
    assert kr.lam == (-n * ((n - 1) * 2 + 3)).to_table(kr.lam.table)


def test_degenerate_family():
    T = make_table("quadratic")
    with pytest.raises(DegenerateFamily):
        ttrr_coeffs(BasisKind.WILSON, PhiPsi.make(T, 0, 0, 0, 0, 0))
