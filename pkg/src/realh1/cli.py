"""Command-line interface: compute, catalog, validate, torus, oracle-check.

Exit codes: 0 success, 1 invalid descriptor or I/O error (or a failed
check), 2 a resource cap was exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

from . import descriptor as dmod
from .catalog import InvalidParams, UnknownEntry, catalog_get, list_entries
from .descriptor import DescriptorError, QuasiConnectedDescriptor, run_checks
from .fgab import F2Space
from .oracle import OracleBoundsExceeded, brute_h1_gamma, brute_orbits_full_group
from .orbits import (CLOSURE_CAP, DIM_CAP, ActionError, DimensionTooLarge, H1Space, OrbitReport,
                     bitstring, build_action, full_group_action, h1_compute, orbit_sets,
                     validate_action)
from .rootdata import GroupTooLarge

EXIT_OK, EXIT_INVALID, EXIT_CAP = 0, 1, 2
FULL_GROUP_CAP = 10**4
H1_ORACLE_POINTS = 50_000


class InputError(Exception):
    pass


@dataclass
class CliConfig:
    command: str
    catalog: str | None = None
    input: str | None = None
    all: bool = False
    format: str = "json"
    threads: int = 1
    dim_cap: int = DIM_CAP
    closure_cap: int = CLOSURE_CAP
    no_validate: bool = False
    oracle: bool = False
    filter: str | None = None
    export: str | None = None
    verbose: int = 0


# ---------------------------------------------------------------- input


def _load_input(path: str) -> QuasiConnectedDescriptor:
    try:
        if path == "-":
            text = sys.stdin.read()
        else:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror or exc}") from exc
    return dmod.loads(text)


def _load_one(cfg: CliConfig) -> QuasiConnectedDescriptor:
    if cfg.catalog is not None:
        return catalog_get(cfg.catalog)
    return _load_input(cfg.input)


def _sources(cfg: CliConfig) -> list[Callable[[], QuasiConnectedDescriptor]]:
    if cfg.all:
        return [lambda s=s: catalog_get(s) for s, _ in list_entries()]
    return [lambda: _load_one(cfg)]


def _emit_json(obj) -> None:
    sys.stdout.write(json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n")


def _err(msg: str) -> None:
    print(f"error: {msg}", file=sys.stderr)


# ---------------------------------------------------------------- compute


def _report_table(reports: Sequence[OrbitReport]) -> str:
    if len(reports) == 1:
        r = reports[0]
        lines = [f"group        {r.group_name}", f"family       {r.family}",
                 f"dim_h1_q     {r.dim_V}", f"w0_order     {r.w0_order}",
                 f"orbit_count  {r.orbit_count}", f"validated    {str(r.validated).lower()}",
                 "orbits:"]
        width = max(len("rep"), r.dim_V, 0 if r.dim_V else len("(empty)"))
        lines.append(f"  {'rep':<{width}}  size")
        lines += [f"  {rep or '(empty)':<{width}}  {size}" for rep, size in r.orbits]
        return "\n".join(lines)
    w = max(len("group"), *(len(r.group_name) for r in reports))
    lines = [f"{'group':<{w}}  {'family':<15}  {'dim':>3}  {'|W0|':>10}  {'orbits':>6}"]
    for r in reports:
        lines.append(f"{r.group_name:<{w}}  {r.family:<15}  {r.dim_V:>3}  {r.w0_order:>10}  {r.orbit_count:>6}")
    return "\n".join(lines)


def _compute_one(load, cfg: CliConfig) -> OrbitReport:
    desc = load()
    return h1_compute(desc, validate=not cfg.no_validate, dim_cap=cfg.dim_cap,
                      closure_cap=cfg.closure_cap)


def run_parallel(fn, items, threads: int) -> list:
    """Map ``fn`` over ``items`` keeping input order, whatever the thread count."""
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def cmd_compute(cfg: CliConfig) -> int:
    loaders = _sources(cfg)
    reports = run_parallel(lambda ld: _compute_one(ld, cfg), loaders, cfg.threads)
    if cfg.verbose:
        for r in reports:
            print(f"{r.group_name}: {r.timing:.3f}s", file=sys.stderr)
    if cfg.format == "table":
        print(_report_table(reports))
    else:
        _emit_json(reports[0].to_dict() if not cfg.all else [r.to_dict() for r in reports])
    if cfg.oracle:
        status = EXIT_OK
        for ld in loaders:
            for line, st in oracle_lines(ld()):
                print(f"{st}  {line}", file=sys.stderr)
                if st == "FAIL":
                    status = EXIT_INVALID
        return status
    return EXIT_OK


# ---------------------------------------------------------------- catalog


def cmd_catalog(cfg: CliConfig) -> int:
    if cfg.export:
        sys.stdout.write(dmod.dumps(catalog_get(cfg.export)) + "\n")
        return EXIT_OK
    entries = list_entries()
    if cfg.filter:
        entries = [(s, k) for s, k in entries if cfg.filter in (k, s.split(":")[0]) or s.startswith(cfg.filter)]
    if cfg.format == "json":
        _emit_json([{"entry": s, "kind": k} for s, k in entries])
    else:
        for s, k in entries:
            print(f"{s:<24} {k}")
    return EXIT_OK


# ---------------------------------------------------------------- validate


def validation_checks(desc: QuasiConnectedDescriptor, closure_cap: int = CLOSURE_CAP,
                      dim_cap: int = DIM_CAP) -> list[tuple[str, bool, str]]:
    checks = run_checks(desc)
    if not all(ok for _, ok, _ in checks):
        return checks
    try:
        space = build_action(desc, dim_cap)
        rep = validate_action(space, desc, closure_cap)
    except ActionError as exc:
        return checks + [("action-relations", False, str(exc))]
    if rep.ok:
        msg = f"{rep.relations_checked} relations checked, |W0| = {rep.group_order}"
        return checks + [("action-relations", True, msg)]
    return checks + [("action-relations", False, rep.failure)]


def _print_checks(checks, fmt: str) -> None:
    if fmt == "json":
        _emit_json([{"check": n, "ok": ok, "detail": m} for n, ok, m in checks])
    else:
        for n, ok, m in checks:
            print(f"{'PASS' if ok else 'FAIL'}  {n}: {m}")


def cmd_validate(cfg: CliConfig) -> int:
    try:
        if cfg.catalog is not None:
            desc = catalog_get(cfg.catalog)
        else:
            desc = _load_input_unvalidated(cfg.input)
    except DescriptorError as exc:
        _print_checks([(exc.check, False, exc.message)], cfg.format)
        return EXIT_INVALID
    checks = validation_checks(desc, cfg.closure_cap, cfg.dim_cap)
    _print_checks(checks, cfg.format)
    failed = [c for c in checks if not c[1]]
    if failed:
        _err(f"check {failed[0][0]} failed: {failed[0][2]}")
        return EXIT_INVALID
    return EXIT_OK


def _load_input_unvalidated(path: str) -> QuasiConnectedDescriptor:
    try:
        text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror or exc}") from exc
    return dmod.loads(text, validate=False)


# ---------------------------------------------------------------- torus


def torus_summary(desc: QuasiConnectedDescriptor) -> dict:
    space: F2Space = desc.h1_characters
    g = desc.M.group
    return {
        "group": desc.name,
        "character_group": str(g),
        "invariant_factors": list(g.invariant_factors),
        "sigma_M": [list(r) for r in desc.M.sigma.rows],
        "dim_h1_q": space.dimension,
        "h1_q_size": 2 ** space.dimension,
        "basis_lifts": [list(v) for v in space.basis_lifts],
    }


def cmd_torus(cfg: CliConfig) -> int:
    summary = torus_summary(_load_one(cfg))
    if cfg.format == "json":
        _emit_json(summary)
    else:
        print(f"group             {summary['group']}")
        print(f"X*(Q)             {summary['character_group']}")
        print(f"dim H^1(R, Q)     {summary['dim_h1_q']}  ({summary['h1_q_size']} classes)")
        for i, v in enumerate(summary["basis_lifts"]):
            print(f"  chi_{i + 1} = {v}")
    return EXIT_OK


# ---------------------------------------------------------------- oracle-check


def oracle_lines(desc: QuasiConnectedDescriptor) -> list[tuple[str, str]]:
    """Compare the engine with the brute-force oracles where they apply.

    Each line comes with a status: PASS, FAIL, or SKIP when the entry lies
    outside the oracle's bounds.
    """
    out = []
    g = desc.M.group
    dim = desc.h1_characters.dimension
    try:
        res = brute_h1_gamma([tuple(c) for c in g.relations.columns()], g.ambient_rank,
                             desc.M.sigma.rows, max_points=H1_ORACLE_POINTS)
        status = "PASS" if res.value == 2 ** dim else "FAIL"
        out.append((f"{desc.name}: |H^1(Gamma, X*(Q))| engine {2 ** dim}, oracle {res.value}", status))
    except OracleBoundsExceeded as exc:
        out.append((f"{desc.name}: H^1 oracle not run ({exc})", "SKIP"))
    try:
        maps = full_group_action(desc, FULL_GROUP_CAP)
        elements = [(m.linear, [int(b) for b in bitstring(m.d, dim)]) for m in maps]
        full = brute_orbits_full_group(dim, elements, FULL_GROUP_CAP).value
        space: H1Space = build_action(desc)
        engine = orbit_sets(dim, space.generators)
        ok = engine == full
        sizes = sorted(len(o) for o in engine)
        verdict = "agree" if ok else f"differ (full group sizes {sorted(len(o) for o in full)})"
        out.append((f"{desc.name}: orbit partitions {verdict}, sizes {sizes}", "PASS" if ok else "FAIL"))
    except (GroupTooLarge, OracleBoundsExceeded) as exc:
        out.append((f"{desc.name}: full-group oracle not run ({exc})", "SKIP"))
    return out


def cmd_oracle_check(cfg: CliConfig) -> int:
    status = EXIT_OK
    for load in _sources(cfg):
        for line, st in oracle_lines(load()):
            print(f"{st}  {line}")
            if st == "FAIL":
                status = EXIT_INVALID
    return status


# ---------------------------------------------------------------- parser


COMMANDS = {
    "compute": cmd_compute,
    "catalog": cmd_catalog,
    "validate": cmd_validate,
    "torus": cmd_torus,
    "oracle-check": cmd_oracle_check,
}


class _Parser(argparse.ArgumentParser):
    """Usage errors exit with 1 (bad input), keeping 2 for exceeded caps."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="realh1", description="Galois cohomology H^1(R, G) of real "
                                     "quasi-connected reductive groups")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add_source(p, allow_all=False):
        grp = p.add_mutually_exclusive_group(required=True)
        grp.add_argument("--catalog", metavar="ENTRY", help="built-in entry, e.g. compact:A1 or SU(2,1)")
        grp.add_argument("--input", metavar="PATH", help="descriptor JSON file, or - for stdin")
        if allow_all:
            grp.add_argument("--all", action="store_true", help="every catalog entry")

    def add_format(p, default="json"):
        p.add_argument("--format", choices=["json", "table"], default=default)

    def add_caps(p):
        p.add_argument("--dim-cap", type=int, default=DIM_CAP,
                       help=f"largest dim H^1(R, Q) to enumerate (at most {DIM_CAP})")
        p.add_argument("--closure-cap", type=int, default=CLOSURE_CAP,
                       help="largest W0 closure for custom entries")

    p = sub.add_parser("compute", help="count H^1(R, G) as W0-orbits on H^1(R, Q)")
    add_source(p, allow_all=True)
    add_format(p)
    add_caps(p)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--no-validate", action="store_true", help="skip the relation check of the action")
    p.add_argument("--oracle", action="store_true", help="also cross-check against the oracles")

    p = sub.add_parser("catalog", help="list built-in descriptors")
    add_format(p, default="table")
    p.add_argument("--filter", metavar="KIND", help="kind or name prefix, e.g. quasi-torus")
    p.add_argument("--export", metavar="ENTRY", help="print the descriptor JSON of one entry")

    p = sub.add_parser("validate", help="run the named descriptor and action checks")
    add_source(p)
    add_format(p, default="table")
    add_caps(p)

    p = sub.add_parser("torus", help="show H^1(R, Q) of the quasi-torus")
    add_source(p)
    add_format(p, default="table")

    p = sub.add_parser("oracle-check", help="compare the engine with the brute-force oracles")
    add_source(p, allow_all=True)
    return parser


def parse_config(argv: Sequence[str] | None = None) -> CliConfig:
    ns = build_parser().parse_args(argv)
    fields = CliConfig.__dataclass_fields__
    return CliConfig(**{k.replace("-", "_"): v for k, v in vars(ns).items() if k in fields})


def main(argv: Sequence[str] | None = None) -> int:
    cfg = parse_config(argv)
    try:
        return COMMANDS[cfg.command](cfg)
    except (GroupTooLarge, DimensionTooLarge) as exc:
        _err(f"resource cap exceeded: {exc}")
        return EXIT_CAP
    except DescriptorError as exc:
        _err(f"invalid descriptor ({exc.check}): {exc.message}")
        return EXIT_INVALID
    except (InputError, UnknownEntry, InvalidParams, ActionError) as exc:
        _err(str(exc.args[0] if exc.args else exc))
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
