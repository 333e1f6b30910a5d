"""Recognise two classical families from their recurrences.

Run with ``python demos/identify_known_families.py``.
"""

from __future__ import annotations

from orthorec.bases import BasisKind
from orthorec.identify import identify
from orthorec.lattice import verify_dde
from orthorec.parser import parse_recurrence
from orthorec.printing import format_ratfunc

A = "(n+a+b+c+d-1)*(n+a+b)*(n+a+c)*(n+a+d)/((2*n+a+b+c+d-1)*(2*n+a+b+c+d))"
C = "n*(n+b+c-1)*(n+b+d-1)*(n+c+d-1)/((2*n+a+b+c+d-2)*(2*n+a+b+c+d-1))"


def show(title, rec, basis):
    print(f"== {title}")
    res = identify(rec, basis)
    print(f"   {len(res)} solution(s) in {res.seconds:.1f}s")
    for sol in res:
        phi = ", ".join(format_ratfunc(v) for v in (sol.pp.a, sol.pp.b, sol.pp.c))
        psi = ", ".join(format_ratfunc(v) for v in (sol.pp.d, sol.pp.e))
        print(f"   phi = [{phi}]  psi = [{psi}]")
        print(f"   lambda_n = {format_ratfunc(sol.lam)}")
        print(f"   y = ({format_ratfunc(sol.f)})*x + ({format_ratfunc(sol.g)}), "
              f"k_(n+1)/k_n = {format_ratfunc(sol.k_ratio)}")
        if sol.free:
            print(f"   free: {sol.free}")
        print(f"   lattice check p_0..p_5: {'ok' if verify_dde(rec, sol, 5).ok else 'FAILED'}")


# Wilson polynomials, written as -(a^2 + x) p_n = A p_{n+1} - (A + C) p_n + C p_{n-1}
wilson = parse_recurrence(f"-(a^2+x)*p(n) = ({A})*p(n+1) - ({A}+{C})*p(n) + ({C})*p(n-1)")
show("Wilson", wilson, BasisKind.WILSON)

# continuous q-Hermite; both Askey-Wilson orientations x -> +-x are found,
# and the q-Racah basis finds it again on a scaled lattice
q_hermite = parse_recurrence("2*x*p(n)=p(n+1)+(1-q^n)*p(n-1)", "q")
show("continuous q-Hermite, Askey-Wilson basis", q_hermite, BasisKind.ASKEY_WILSON)
show("continuous q-Hermite, q-Racah basis", q_hermite, BasisKind.QRACAH)

# shifting and scaling x is detected as y = f x + g
shifted = parse_recurrence(f"-(a^2+(x/2-1))*p(n) = ({A})*p(n+1) - ({A}+{C})*p(n) + ({C})*p(n-1)")
show("Wilson in x/2 - 1", shifted, BasisKind.WILSON)
