"""Non-strict identification: which parameter values make a recurrence classical.

The recurrence below has parameters mu, nu, sigma. Letting the solver bind
them yields several branches: some of Wilson type, some of continuous dual
Hahn type. A second recurrence has no solution at all.
"""

from __future__ import annotations

from orthorec.bases import BasisKind
from orthorec.identify import identify, identify_all
from orthorec.parser import parse_recurrence
from orthorec.printing import format_ratfunc


def bb(k):
    return f"(n+{k}+1+(mu+nu)/2)"


rec = parse_recurrence(
    f"z*p(n) = ((sigma+{bb(0)}^2)*((mu^2-nu^2)/((2*n+mu+nu)*(2*n+mu+nu+2))+1)"
    f" - 2*n*(n+nu)/(2*n+mu+nu) - (mu+1)^2/2)*p(n)"
    f" - (sigma+{bb(-1)}^2)*2*(n+mu)*(n+nu)/((2*n+mu+nu)*(2*n+mu+nu+1))*p(n-1)"
    f" - (sigma+{bb(0)}^2)*2*(n+1)*(n+mu+nu+1)/((2*n+mu+nu+1)*(2*n+mu+nu+2))*p(n+1)",
    variable="z",
)

res = identify(rec, BasisKind.WILSON, strict=False)
print(f"{len(res)} branches in {res.seconds:.1f}s")
for i, sol in enumerate(res, 1):
    print(f"[{i}] constraints: {sol.constraints or ['none']}   gauge {sol.gauge}")
    print(f"    phi = [{', '.join(format_ratfunc(v) for v in (sol.pp.a, sol.pp.b, sol.pp.c))}]")
    print(f"    psi = [{', '.join(format_ratfunc(v) for v in (sol.pp.d, sol.pp.e))}]")
    print(f"    lambda_n = {format_ratfunc(sol.lam)},  y = ({format_ratfunc(sol.f)})*z")
    for note in sol.caveats:
        print(f"    caveat: {note}")

other = parse_recurrence(
    "cs*p(n) = (z*sn*((n+(mu+nu+1)/2)^2+alpha) + (nu^2-mu^2)/((2*n+mu+nu)*(2*n+mu+nu+2)))*p(n)"
    " + 2*(n+mu)*(n+nu)/((2*n+mu+nu)*(2*n+mu+nu+1))*p(n-1)"
    " + 2*(n+1)*(n+mu+nu+1)/((2*n+mu+nu+1)*(2*n+mu+nu+2))*p(n+1)",
    variable="z",
)
for basis, r in identify_all(other, strict=False).items():
    print(f"{basis.value}: {r.negative_reasons or [f'{len(r)} solutions']}")
