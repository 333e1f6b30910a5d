"""The eight acceptance criteria, one test (or parametrized group) each.

Each test records its outcome in conftest.ACCEPTANCE; a PASS/FAIL line per
criterion is printed in the terminal summary and on stdout.
"""

from __future__ import annotations

import contextlib
import io
import time

import pytest
import sympy

import conftest
import test_derive as derive_oracle
import test_groebner as solver_oracle
import test_lattice as structure_oracle
from orthorec.bases import BasisKind
from orthorec.catalog import FAMILY_NAMES, catalog_lookup
from orthorec.cli import EXIT_NEGATIVE, main
from orthorec.derive import ttrr_coeffs
from orthorec.identify import identify, identify_all
from orthorec.kernel import RatFunc
from orthorec.lattice import generate_pn, verify_dde
from orthorec.parser import monic_recurrence_text, parse_recurrence
from orthorec.printing import to_sympy

DESCRIPTIONS = {
    1: "Wilson recurrence -> Wilson DE and k_ratio",
    2: "continuous q-Hermite DE, k_ratio = 2, forward regenerates the recurrence",
    3: "Alhaidari system 2: six Wilson-type branches matching the printed equations",
    4: "Alhaidari system 1: no solution in any quadratic basis (exit 3)",
    5: "round trip forward -> identify -> verify for the 18 catalog families",
    6: "generic engine equals the closed forms; lambda_n formulas",
    7: "Buchberger on 500 random systems; lex eliminant vs resultant",
    8: "operators reproduce the structure relations for n = 0..8",
}


@contextlib.contextmanager
def criterion(k: int):
    desc, results = conftest.ACCEPTANCE.setdefault(k, (DESCRIPTIONS[k], []))
    try:
        yield
    except BaseException:
        results.append(False)
        print(f"FAIL criterion {k}: {desc}")
        raise
    results.append(True)
    print(f"PASS criterion {k}: {desc}")


def _sym(r: RatFunc):
    return to_sympy(r.num) / to_sympy(r.den)


def _jointly_proportional(ours, printed) -> bool:
    """printed == tau * ours entrywise, for a single nonzero tau."""
    ours = [sympy.cancel(o) for o in ours]
    printed = [sympy.cancel(p) for p in printed]
    k = next((i for i, o in enumerate(ours) if o != 0), None)
    if k is None or printed[k] == 0:
        return False
    tau = sympy.cancel(printed[k] / ours[k])
    return all(sympy.cancel(p - tau * o) == 0 for p, o in zip(printed, ours))


n, x, z = sympy.symbols("n x z")
a, b, c, d = sympy.symbols("a b c d")
mu, nu, sigma = sympy.symbols("mu nu sigma")
p, N = sympy.symbols("p N")  # p = sqrt(q), N = q^n


# ---------------------------------------------------------------------------
# 1. Wilson
# ---------------------------------------------------------------------------

WILSON_A = "(n+a+b+c+d-1)*(n+a+b)*(n+a+c)*(n+a+d)/((2*n+a+b+c+d-1)*(2*n+a+b+c+d))"
WILSON_C = "n*(n+b+c-1)*(n+b+d-1)*(n+c+d-1)/((2*n+a+b+c+d-2)*(2*n+a+b+c+d-1))"
WILSON_REC = f"-(a^2+x)*p(n) = ({WILSON_A})*p(n+1) - ({WILSON_A}+{WILSON_C})*p(n) + ({WILSON_C})*p(n-1)"


def test_criterion_1_wilson():
    with criterion(1):
        t0 = time.time()
        rec = parse_recurrence(WILSON_REC)
        res = identify(rec, BasisKind.WILSON, strict=True)
        seconds = time.time() - t0
        assert len(res) == 1
        sol = res.solutions[0]
        assert _sym(sol.f) == 1 and _sym(sol.g) == 0
        s = a + b + c + d
        phi = x**2 - (a * b + a * c + a * d + b * c + b * d + c * d) * x + a * b * c * d
        psi = s * x - (a * b * c + a * b * d + a * c * d + b * c * d)
        lam = -n * (n + s - 1)
        ours = [sum(_sym(v) * x**i for i, v in zip((2, 1, 0), (sol.pp.a, sol.pp.b, sol.pp.c))),
                _sym(sol.pp.d) * x + _sym(sol.pp.e), _sym(sol.lam)]
        assert _jointly_proportional(ours, [phi, psi, lam])
        k_ratio = -(2 * n + s) * (2 * n + s - 1) / ((n + a + d) * (n + a + c) * (n + a + b) * (n + s - 1))
        assert sympy.cancel(_sym(sol.k_ratio) - k_ratio) == 0
        assert verify_dde(rec, sol, 5).ok
        assert seconds < 120


# ---------------------------------------------------------------------------
# 2. continuous q-Hermite
# ---------------------------------------------------------------------------

Q_HERMITE = "2*x*p(n)=p(n+1)+(1-q^n)*p(n-1)"


def test_criterion_2_q_hermite():
    with criterion(2):
        t0 = time.time()
        rec = parse_recurrence(Q_HERMITE, "q")
        res = identify(rec, BasisKind.ASKEY_WILSON, strict=True)
        hits = [s for s in res if _sym(s.k_ratio) == 2]
        assert len(hits) == 1
        sol = hits[0]
        assert _sym(sol.f) == 1 and _sym(sol.g) == 0
        q = p**2
        phi = (2 * x**2 - 1) / 2
        psi = -2 * x * p / (q - 1)
        lam = 2 * p**3 * (N - 1) / (N * (q - 1) ** 2)
        ours = [_sym(sol.pp.a) * x**2 + _sym(sol.pp.b) * x + _sym(sol.pp.c),
                _sym(sol.pp.d) * x + _sym(sol.pp.e), _sym(sol.lam)]
        assert _jointly_proportional(ours, [phi, psi, lam])
        assert verify_dde(rec, sol, 5).ok

        # forward on the continuous big q-Hermite entry at a = 0
        e = catalog_lookup("continuous-big-q-hermite")
        T = e.pp.table
        fw = ttrr_coeffs(e.basis, e.pp.substitute({"a": T.ratfunc(0)}))
        assert fw.b_tilde.is_zero()
        assert sympy.cancel(4 * _sym(fw.c_tilde) - (1 - N)) == 0
        # with p_n = 2^n P_n the monic recurrence is the q-Hermite one
        forward = parse_recurrence(monic_recurrence_text(fw.b_tilde, fw.c_tilde, "x"), "q")
        for k, (P, ref) in enumerate(zip(generate_pn(forward, 6), generate_pn(rec, 6))):
            assert sympy.expand(2**k * _sym(P) - _sym(ref)) == 0
        assert time.time() - t0 < 60


# ---------------------------------------------------------------------------
# 3. Alhaidari, positive
# ---------------------------------------------------------------------------


def _bb(k):
    return f"(n+{k}+1+(mu+nu)/2)"


ALHAIDARI_2 = (
    f"z*p(n) = ((sigma+{_bb(0)}^2)*((mu^2-nu^2)/((2*n+mu+nu)*(2*n+mu+nu+2))+1)"
    f" - 2*n*(n+nu)/(2*n+mu+nu) - (mu+1)^2/2)*p(n)"
    f" - (sigma+{_bb(-1)}^2)*2*(n+mu)*(n+nu)/((2*n+mu+nu)*(2*n+mu+nu+1))*p(n-1)"
    f" - (sigma+{_bb(0)}^2)*2*(n+1)*(n+mu+nu+1)/((2*n+mu+nu+1)*(2*n+mu+nu+2))*p(n+1)"
)

# (name, bindings, phi, psi, lambda, written in mu (True) or nu (False))
ALHAIDARI_PRINTED = [
    ("branch 1", {},
     z**2 + (mu**2 - 2 * sigma - 3) * z + (mu - 1) ** 2 * (mu**2 + 2 * mu + 4 * sigma + 1) / 4,
     4 * z + 2 * (mu - 1) * (mu + 2 * sigma + 1), -4 * n * (n + 1), True),
    ("branch 2", {},
     z**2 + (mu**2 + 2 * mu - 2 * sigma + 1) * z + (mu + 1) ** 2 * (mu**2 + 2 * mu + 4 * sigma + 1) / 4,
     -4 * sigma * (mu + 1), -4 * n * (n - 1), True),
    ("branch 3", {},
     a**2 * z**2 + ((mu**2 + 2 * mu - 2 * sigma + 1) * a**2 - d * (mu + 1) * a - d**2 / 2) * z
     + (mu + 1) ** 2 * ((mu**2 + 2 * mu + 4 * sigma + 1) * a**2 - 2 * d * (mu + 1) * a + d**2) / 4,
     2 * a * d * z - (mu + 1) * (4 * a**2 * sigma - d * (mu + 1) * a + d**2),
     -4 * n * a * ((n - 1) * a + d), True),
    ("branch 4", {sigma: 0, mu: nu - 1},
     (4 * nu + 1) * z - nu**2 / 2, nu**2 + nu - 2 * z, n, False),
    ("branch 5", {sigma: sympy.Rational(-1, 4), mu: nu},
     (4 * nu + 3) * z - nu * (nu + 1) / 2, nu**2 + 2 * nu - 2 * z + sympy.Rational(1, 2), n, False),
    ("branch 6", {sigma: 0, mu: nu + 1},
     (4 * nu + 5) * z - (nu + 1) ** 2 / 2, nu**2 + 3 * nu - 2 * z + 2, n, False),
]


def _ours_in_printed_variables(sol, in_mu: bool):
    """Our (phi, psi, lambda) in z with y = f z + g, free _a, _d renamed a, d."""
    rename = {sympy.Symbol("_a"): a, sympy.Symbol("_d"): d}
    bind = {sympy.Symbol(k): _sym(v).subs(rename) for k, v in sol.parameter_bindings.items()}
    f, g = _sym(sol.f), _sym(sol.g)
    y = f * z + g
    vals = [_sym(v).subs(rename) for v in sol.pp.values()]
    ours = [vals[0] * y**2 + vals[1] * y + vals[2], vals[3] * y + vals[4], _sym(sol.lam).subs(rename)]
    ours = [sympy.cancel(o.subs(bind)) for o in ours]
    if in_mu and mu in bind:
        # rewrite the nu that mu was bound through back in terms of mu
        (nu_of_mu,) = sympy.solve(sympy.Eq(mu, bind[mu]), nu)
        ours = [sympy.cancel(o.subs(nu, nu_of_mu)) for o in ours]
    bind = {k: v for k, v in bind.items() if k != mu or not in_mu}
    return ours, bind


def test_criterion_3_alhaidari_positive():
    with criterion(3):
        t0 = time.time()
        rec = parse_recurrence(ALHAIDARI_2, variable="z")
        res = identify(rec, BasisKind.WILSON, strict=False)
        seconds = time.time() - t0
        assert len(res) >= 6
        constraint_sets = [set(s.constraints) for s in res]
        for wanted in ({"sigma = 0", "mu = nu - 1"}, {"sigma = -1/4", "mu = nu"}, {"sigma = 0", "mu = nu + 1"}):
            assert wanted in constraint_sets
        assert any(s.free == ["_a", "_d"] and {"_a != 0", "_d != 0"} <= set(s.constraints) for s in res)
        used = set()
        for name, bindings, phi, psi, lam, in_mu in ALHAIDARI_PRINTED:
            match = None
            for i, sol in enumerate(res):
                if i in used:
                    continue
                ours, bind = _ours_in_printed_variables(sol, in_mu)
                if {k: sympy.cancel(v) for k, v in bind.items()} != bindings:
                    continue
                if _jointly_proportional(ours, [phi, psi, lam]):
                    match = i
                    break
            assert match is not None, name
            used.add(match)
        assert seconds < 600


# ---------------------------------------------------------------------------
# 4. Alhaidari, negative
# ---------------------------------------------------------------------------

ALHAIDARI_1 = (
    "cs*p(n) = (z*sn*((n+(mu+nu+1)/2)^2+alpha) + (nu^2-mu^2)/((2*n+mu+nu)*(2*n+mu+nu+2)))*p(n)"
    " + 2*(n+mu)*(n+nu)/((2*n+mu+nu)*(2*n+mu+nu+1))*p(n-1)"
    " + 2*(n+1)*(n+mu+nu+1)/((2*n+mu+nu+1)*(2*n+mu+nu+2))*p(n+1)"
)


def test_criterion_4_alhaidari_negative():
    with criterion(4):
        rec = parse_recurrence(ALHAIDARI_1, variable="z")
        for strict in (True, False):
            out = identify_all(rec, strict=strict)
            assert set(out) == {BasisKind.WILSON, BasisKind.POCHHAMMER, BasisKind.RACAH}
            assert all(r.solutions == [] for r in out.values())
        with contextlib.redirect_stdout(io.StringIO()):
            code = main(["identify", ALHAIDARI_1, "--var", "z", "--strict", "false"])
        assert code == EXIT_NEGATIVE


# ---------------------------------------------------------------------------
# 5. catalog round trip
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("name", FAMILY_NAMES)
def test_criterion_5_round_trip(name):
    with criterion(5):
        e = catalog_lookup(name)
        fw = ttrr_coeffs(e.basis, e.pp, h=e.lattice)
        rec = parse_recurrence(monic_recurrence_text(fw.b_tilde, fw.c_tilde, "x"), e.case)
        hit = None
        for s in identify(rec, e.basis, strict=True):
            # fix the lattice-symmetry unknowns at the catalog's choice
            fixed = {}
            if "_h" in s.free:
                fixed["_h"] = e.lattice
            if "_g" in s.free:
                fixed["_g"] = 0
            if "_f" in s.free:
                fixed["_f"] = 1
            s = s.specialize(fixed) if fixed else s
            if not (s.f == RatFunc(s.f.table.one()) and s.g.is_zero()):
                continue
            T = s.pp.table
            cat = [v.to_table(T) for v in e.pp.values()] + [e.lam.to_table(T)]
            got = list(s.pp.values()) + [s.lam]
            i = next(k for k, v in enumerate(cat) if not v.is_zero())
            tau = got[i] / cat[i]
            if all((u - tau * v).is_zero() for u, v in zip(got, cat)):
                hit = s
                break
        assert hit is not None
        report = verify_dde(rec, hit, 5)
        assert report.ok and len(report.rows) == 6


# ---------------------------------------------------------------------------
# 6. closed forms
# ---------------------------------------------------------------------------


def _lambda_printed(basis, a_, d_):
    if basis.case == "quadratic":
        return -n * ((n - 1) * a_ + d_)
    q = p**2
    return -(N - 1) * (2 * p * (N - q) * a_ + (q - 1) * (N + q) * d_) / (2 * N * (q - 1) ** 2)


@pytest.mark.parametrize("basis", list(BasisKind), ids=lambda b: b.value)
def test_criterion_6_closed_forms(basis):
    with criterion(6):
        derive_oracle.test_generic_engine_matches_closed_forms(basis)
        derive_oracle.test_recurrence_matches_direct_solutions(basis)
        from orthorec.derive import generic_ttrr

        g = generic_ttrr(basis)
        printed = _lambda_printed(basis, sympy.Symbol("_a"), sympy.Symbol("_d"))
        assert sympy.cancel(_sym(g.lam) - printed) == 0


# ---------------------------------------------------------------------------
# 7. solver
# ---------------------------------------------------------------------------


def test_criterion_7_solver():
    with criterion(7):
        assert len(solver_oracle.SYSTEMS) >= 500
        for names, _, _, polys in solver_oracle.SYSTEMS:
            assert len(names) <= 3
            assert all(f.total_degree() <= 3 for f in polys)
        for chunk in range(10):
            solver_oracle.test_random_systems(chunk)
        assert len(solver_oracle.RESULTANT_CASES) == 5
        for f_text, g_text in solver_oracle.RESULTANT_CASES:
            solver_oracle.test_lex_eliminant_matches_resultant(f_text, g_text)


# ---------------------------------------------------------------------------
# 8. structure relations
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("basis", list(BasisKind), ids=lambda b: b.value)
def test_criterion_8_structure_relations(basis):
    with criterion(8):
        structure_oracle.test_structure_relations_hold_on_the_lattice(basis)
