"""Command-line interface: identify, forward, verify, catalog.

Every command prints one JSON document on standard output. Exit codes:
0 success, 3 clean negative (no solution, or a verification residual),
1 internal or budget errors, 2 usage and input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

from . import __version__
from .bases import BasisKind, normalize_case
from .catalog import FAMILY_NAMES, CatalogError, catalog_lookup, custom_entry
from .derive import DegenerateFamily, ttrr_coeffs
from .groebner import DEFAULT_BUDGET, BudgetExceeded
from .identify import CHECK_UPTO, NO_SOLUTION, identify_monic, solution_from_json
from .kernel import KernelError
from .lattice import DEFAULT_SEED, verify_monic
from .parser import NotIdentifiable, ParseError, monic_recurrence_text, parse_recurrence, to_monic_form
from .printing import format_ratfunc

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_USAGE = 2
EXIT_NEGATIVE = 3


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    args: argparse.Namespace

    @property
    def indent(self) -> int | None:
        return self.args.json_indent if self.args.json_indent >= 0 else None


def _bool(text: str) -> bool:
    low = text.strip().lower()
    if low in ("true", "1", "yes", "on"):
        return True
    if low in ("false", "0", "no", "off"):
        return False
    raise argparse.ArgumentTypeError(f"expected true or false, got {text!r}")


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=DEFAULT_SEED, help="seed for witness selection")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="solver reduction-step budget")
    p.add_argument("--json-indent", type=int, default=2, help="JSON indent (-1 for compact)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="orthorec",
        description="Classical orthogonal polynomials on quadratic and q-quadratic lattices.",
    )
    parser.add_argument("--version", action="version", version=f"orthorec {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("identify", help="recurrence -> divided-difference equation")
    p.add_argument("expr", nargs="?", help="recurrence, e.g. '2*x*p(n)=p(n+1)+(1-q^n)*p(n-1)'")
    p.add_argument("--file", help="read the recurrence from a file")
    p.add_argument("--case", default="quadratic", help="quadratic or q")
    p.add_argument("--basis", default="auto", help="auto, wilson, hahn, racah, aw or qracah")
    p.add_argument("--strict", type=_bool, default=True, help="true: parameters stay free")
    p.add_argument("--var", default="x", help="name of the polynomial variable")
    p.add_argument("--probe", type=int, default=10, help="indices probed for singular coefficients")
    p.add_argument("--check-upto", type=int, default=CHECK_UPTO,
                   help="lattice check of each branch on p_0..p_k (0 disables)")
    _common(p)

    p = sub.add_parser("forward", help="divided-difference equation -> recurrence")
    p.add_argument("--family", help="catalog family name")
    p.add_argument("--basis", help="basis for --phi/--psi")
    p.add_argument("--phi", help="phi(x), at most quadratic")
    p.add_argument("--psi", help="psi(x), linear")
    p.add_argument("--lattice", help="lattice parameter (racah: gamma+delta, qracah: gamma*delta)")
    p.add_argument("--var", default="x", help="name of the polynomial variable")
    _common(p)

    p = sub.add_parser("verify", help="check identify output on the lattice")
    p.add_argument("input", nargs="?", default="-", help="identify JSON file ('-' for stdin)")
    p.add_argument("--upto", type=int, default=5, help="check p_0 .. p_upto")
    _common(p)

    p = sub.add_parser("catalog", help="list catalog families or show one")
    p.add_argument("name", nargs="?", help="family name")
    _common(p)
    return parser


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def _read_input(args) -> str:
    if args.file and args.expr:
        raise UsageError("give the recurrence either as an argument or with --file, not both")
    if args.file:
        try:
            with open(args.file, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as err:
            raise UsageError(f"cannot read {args.file}: {err}") from err
    else:
        text = args.expr or ""
    text = " ".join(text.split())
    if not text:
        raise UsageError("empty recurrence")
    return text


def _bases(case: str, choice: str) -> list[BasisKind]:
    if choice == "auto":
        return BasisKind.for_case(case)
    try:
        basis = BasisKind.parse(choice)
    except ValueError as err:
        raise UsageError(str(err)) from err
    if basis.case != case:
        raise UsageError(f"basis {basis.value} belongs to the {basis.case} case")
    return [basis]


def cmd_identify(cfg: RunConfig) -> tuple[dict, int]:
    args = cfg.args
    text = _read_input(args)
    try:
        case = normalize_case(args.case)
    except ValueError as err:
        raise UsageError(str(err)) from err
    bases = _bases(case, args.basis)
    rec = parse_recurrence(text, case, variable=args.var)
    out = {
        "schema_version": SCHEMA_VERSION,
        "command": "identify",
        "input": text,
        "case": case,
        "variable": args.var,
        "strict": args.strict,
    }
    monic = to_monic_form(rec, args.probe)
    if isinstance(monic, NotIdentifiable):
        out.update(shift=None, monic=None, solutions=[], negative_reasons=[f"{NO_SOLUTION}: {monic.reason}"])
        return out, EXIT_NEGATIVE
    out["shift"] = monic.shift
    out["monic"] = {"t_n": format_ratfunc(monic.t), "u_n": format_ratfunc(monic.u)}
    solutions, reasons, timings = [], [], {}
    for basis in bases:
        res = identify_monic(monic, basis, args.strict, args.budget, args.check_upto)
        solutions += [s.to_json() for s in res.solutions]
        reasons += [f"{basis.value}: {r}" for r in res.negative_reasons]
        timings[basis.value] = round(res.seconds, 3)
    out["solutions"] = solutions
    out["negative_reasons"] = reasons
    out["seconds"] = timings
    return out, EXIT_OK if solutions else EXIT_NEGATIVE


def cmd_forward(cfg: RunConfig) -> tuple[dict, int]:
    args = cfg.args
    if args.family:
        if args.phi or args.psi or args.basis or args.lattice:
            raise UsageError("--family cannot be combined with --phi/--psi/--basis/--lattice")
        entry = catalog_lookup(args.family)
        var = "x"
    else:
        if not (args.phi and args.psi and args.basis):
            raise UsageError("give --family, or all of --basis, --phi and --psi")
        try:
            basis = BasisKind.parse(args.basis)
        except ValueError as err:
            raise UsageError(str(err)) from err
        entry = custom_entry(basis, args.phi, args.psi, args.lattice, args.var)
        var = args.var
    coeffs = ttrr_coeffs(entry.basis, entry.pp, h=entry.lattice)
    out = {"schema_version": SCHEMA_VERSION, "command": "forward"}
    out.update(entry.to_json())
    out["a_ratio"] = format_ratfunc(coeffs.a_ratio)
    out["b_tilde"] = format_ratfunc(coeffs.b_tilde)
    out["c_tilde"] = format_ratfunc(coeffs.c_tilde)
    out["recurrence"] = monic_recurrence_text(coeffs.b_tilde, coeffs.c_tilde, var)
    return out, EXIT_OK


def cmd_verify(cfg: RunConfig) -> tuple[dict, int]:
    args = cfg.args
    try:
        if args.input == "-":
            data = json.load(sys.stdin)
        else:
            with open(args.input, encoding="utf-8") as fh:
                data = json.load(fh)
    except (OSError, json.JSONDecodeError) as err:
        raise UsageError(f"cannot read identify output: {err}") from err
    if data.get("command") != "identify":
        raise UsageError("verify expects the JSON printed by 'orthorec identify'")
    rec = parse_recurrence(data["input"], data["case"], variable=data.get("variable", "x"))
    monic = to_monic_form(rec)
    if isinstance(monic, NotIdentifiable):
        raise UsageError(f"input recurrence is not identifiable: {monic.reason}")
    results = []
    for i, sdata in enumerate(data.get("solutions", [])):
        sol = solution_from_json(sdata, monic)
        report = verify_monic(monic, sol, args.upto, args.seed)
        results.append({"solution": i, "basis": sol.basis.value, **report.to_json()})
    ok = all(r["ok"] for r in results)
    out = {
        "schema_version": SCHEMA_VERSION,
        "command": "verify",
        "input": data["input"],
        "upto": args.upto,
        "seed": args.seed,
        "results": results,
        "ok": ok,
    }
    return out, EXIT_OK if ok else EXIT_NEGATIVE


def cmd_catalog(cfg: RunConfig) -> tuple[dict, int]:
    name = cfg.args.name
    out = {"schema_version": SCHEMA_VERSION, "command": "catalog"}
    if name is None:
        out["families"] = [
            {"name": n, "basis": catalog_lookup(n).basis.value, "case": catalog_lookup(n).case}
            for n in FAMILY_NAMES
        ]
    else:
        try:
            out["family"] = catalog_lookup(name).to_json()
        except CatalogError as err:
            raise UsageError(str(err)) from err
    return out, EXIT_OK


COMMANDS = {
    "identify": cmd_identify,
    "forward": cmd_forward,
    "verify": cmd_verify,
    "catalog": cmd_catalog,
}


def run(cfg: RunConfig) -> tuple[dict, int]:
    """Run one command; returns (JSON document, exit code)."""
    try:
        return COMMANDS[cfg.command](cfg)
    except (UsageError, ParseError, CatalogError) as err:
        return _error(cfg, "usage", err), EXIT_USAGE
    except BudgetExceeded as err:
        return _error(cfg, "budget", err), EXIT_ERROR
    except (KernelError, DegenerateFamily) as err:
        return _error(cfg, "internal", err), EXIT_ERROR


def _error(cfg: RunConfig, kind: str, err: Exception) -> dict:
    return {"schema_version": SCHEMA_VERSION, "command": cfg.command, "error": {"kind": kind, "message": str(err)}}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse reports usage errors with status 2
        return int(exc.code or 0)
    cfg = RunConfig(args.command, args)
    doc, code = run(cfg)
    json.dump(doc, sys.stdout, indent=cfg.indent, ensure_ascii=False)
    sys.stdout.write("\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
