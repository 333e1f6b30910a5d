"""Forward direction: from a catalog equation to its monic recurrence and back."""

from __future__ import annotations

import sys

from orthorec.catalog import FAMILY_NAMES, catalog_lookup
from orthorec.derive import ttrr_coeffs
from orthorec.identify import identify
from orthorec.parser import monic_recurrence_text, parse_recurrence
from orthorec.printing import format_ratfunc

names = sys.argv[1:] or ["continuous-dual-hahn", "al-salam-chihara", "dual-hahn"]
for name in names:
    if name not in FAMILY_NAMES:
        sys.exit(f"unknown family {name}; choose from {', '.join(FAMILY_NAMES)}")
    e = catalog_lookup(name)
    fw = ttrr_coeffs(e.basis, e.pp, h=e.lattice)
    text = monic_recurrence_text(fw.b_tilde, fw.c_tilde)
    print(f"== {name} ({e.basis.value} basis)")
    print(f"   {text}")
    res = identify(parse_recurrence(text, e.case), e.basis)
    print(f"   identify: {len(res)} branch(es), free unknowns {[s.free for s in res]}")
    print(f"   catalog lambda_n = {format_ratfunc(e.lam)}")
