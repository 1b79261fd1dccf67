"""Command line entry point: ``detlab run | conjectures | matrix | gb``."""
from __future__ import annotations

import argparse
import json
import sys
from typing import List, Optional

from .conjectures import conjecture_harness
from .errors import BudgetExceeded, DetlabError, SpecError
from .groebner import Budget, Ideal
from .hessian import cloned_dual_ladder, polar_ladder, zeros_dual_ladder
from .matrices import MatrixSpec, build
from .poly import LEX, DEGREVLEX
from .report import emit
from .scenarios import REGISTRY, ScenarioConfig, load_config, run

EXIT_CONFIG = 2


def _write(data: bytes, out: Optional[str]) -> None:
    if out:
        with open(out, "wb") as fh:
            fh.write(data)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()


def _strip_timings(data: bytes) -> bytes:
    doc = json.loads(data)
    for c in doc.get("checks", []):
        c.pop("timing_ms", None)
    return (json.dumps(doc, indent=2, sort_keys=True) + "\n").encode()


def _matrix_for(family: str, m: int, r: Optional[int]):
    if family == "cloned":
        return build(MatrixSpec.cloned(m))
    if family == "zeros":
        if r is None:
            raise SpecError("--r is required for the zeros family")
        return build(MatrixSpec.zeros(m, r))
    if family == "generic":
        return build(MatrixSpec.generic(m))
    raise SpecError(f"unknown family {family!r}")


def cmd_run(args) -> int:
    if args.config:
        cfg = load_config(args.config)
    else:
        if args.family is None or args.m is None:
            raise SpecError("run needs --family and --m (or --config)")
        checks = [t.strip() for t in args.checks.split(",") if t.strip()]
        cfg = ScenarioConfig(args.family, args.m, args.r, checks, args.seed)
    rep = run(cfg)
    data = emit(rep, args.format)
    if args.no_timing and args.format == "json":
        data = _strip_timings(data)
    _write(data, args.out)
    return rep.exit_code()


def cmd_conjectures(args) -> int:
    rep = conjecture_harness(args.m, args.r, Budget.default())
    data = emit(rep, args.format)
    if args.no_timing and args.format == "json":
        data = _strip_timings(data)
    _write(data, args.out)
    return rep.exit_code()


def cmd_matrix(args) -> int:
    try:
        with open(args.spec) as fh:
            spec = MatrixSpec.from_json(fh.read())
    except OSError as exc:
        raise SpecError(f"cannot read {args.spec}: {exc}") from None
    M = build(spec)
    if args.print == "det":
        lines = [M.determinant().to_str()]
    elif args.print == "adjugate":
        adj = M.adjugate()
        lines = [f"adj[{k + 1},{l + 1}] = {adj[k][l].to_str()}" for k in range(M.m) for l in range(M.m)]
    else:
        grads = M.gradient_generators()
        lines = [f"d/d{name} = {g.to_str()}" for name, g in zip(M.ring.names, grads)]
    _write(("\n".join(lines) + "\n").encode(), args.out)
    return 0


def _named_ideal(args) -> Ideal:
    name = args.ideal
    family, m, r = args.family, args.m, args.r
    M = _matrix_for(family, m, r) if name != "ladder" and name != "dual_ladder" else None
    if name == "J":
        return Ideal(M.gradient_generators())
    if name in ("P", "I"):
        return Ideal(M.submaximal_minors())
    if name in ("N_j", "M_j"):
        if args.j is None:
            raise SpecError(f"{name} needs --j")
        side = "rows" if name == "N_j" else "cols"
        return Ideal(M.corner_strip_minors(args.j, side), M.ring)
    if name == "ladder":
        if family != "zeros" or r is None:
            raise SpecError("the polar ladder is defined for the zeros family")
        yr, minors, _, _ = polar_ladder(m, r)
        return Ideal(minors, yr)
    if name == "dual_ladder":
        if family == "cloned":
            yr, minors, quadrics, _, _ = cloned_dual_ladder(m)
            return Ideal(minors + quadrics, yr)
        if family == "zeros" and r is not None:
            yr, minors, _, _ = zeros_dual_ladder(m, r)
            return Ideal(minors, yr)
        raise SpecError("dual_ladder needs --family cloned or zeros with --r")
    raise SpecError(f"unknown ideal {name!r}")


def cmd_gb(args) -> int:
    I = _named_ideal(args)
    order = LEX if args.order == "lex" else DEGREVLEX
    G = I.with_order(order).groebner(Budget.default())
    lines = [p.to_str(order) for p in G.elements]
    if args.format == "json":
        doc = {"ideal": args.ideal, "order": args.order, "ring": list(I.ring.names),
               "basis": lines, "codimension": G.codimension()}
        data = (json.dumps(doc, indent=2) + "\n").encode()
    else:
        data = ("\n".join(lines) + f"\n# {len(lines)} elements, codimension {G.codimension()}\n").encode()
    _write(data, args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="detlab", description="Checks for degenerations of the generic determinant.")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="run registered checks for one scenario")
    r.add_argument("--family", choices=["cloned", "zeros"])
    r.add_argument("--m", type=int)
    r.add_argument("--r", type=int)
    r.add_argument("--checks", default="all", help="'all' or comma separated tags: " + ", ".join(REGISTRY))
    r.add_argument("--seed", type=int, default=42)
    r.add_argument("--out")
    r.add_argument("--format", choices=["json", "table"], default="json")
    r.add_argument("--config", help="JSON file with the same fields as the flags")
    r.add_argument("--no-timing", action="store_true", help="omit timings (byte-identical reruns)")
    r.set_defaults(func=cmd_run)

    c = sub.add_parser("conjectures", help="falsification probes for the zeros family")
    c.add_argument("--m", type=int, required=True)
    c.add_argument("--r", type=int, required=True)
    c.add_argument("--out")
    c.add_argument("--format", choices=["json", "table"], default="table")
    c.add_argument("--no-timing", action="store_true")
    c.set_defaults(func=cmd_conjectures)

    mx = sub.add_parser("matrix", help="print det, adjugate or gradient of a matrix spec")
    mx.add_argument("--spec", required=True)
    mx.add_argument("--print", choices=["det", "adjugate", "gradient"], default="det")
    mx.add_argument("--out")
    mx.set_defaults(func=cmd_matrix)

    g = sub.add_parser("gb", help="reduced Gröbner basis of a named ideal")
    g.add_argument("--ideal", required=True, choices=["J", "P", "I", "N_j", "M_j", "ladder", "dual_ladder"])
    g.add_argument("--order", choices=["degrevlex", "lex"], default="degrevlex")
    g.add_argument("--family", choices=["cloned", "zeros", "generic"], default="cloned")
    g.add_argument("--m", type=int, default=3)
    g.add_argument("--r", type=int)
    g.add_argument("--j", type=int)
    g.add_argument("--format", choices=["text", "json"], default="text")
    g.add_argument("--out")
    g.set_defaults(func=cmd_gb)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else 0
    try:
        return args.func(args)
    except (SpecError, ValueError) as exc:
        print(f"detlab: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except BudgetExceeded as exc:
        print(f"detlab: budget exhausted: {exc}", file=sys.stderr)
        return 3
    except DetlabError as exc:
        print(f"detlab: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
