"""Command line entry point: `python -m suite.main <command> ...` or the `hankelfiber` launcher."""

import argparse
import json
import logging
import sys
from typing import Optional

from algebra.polynomial import format_polynomial
from grassmann.plucker import PosetIso, hasse_document, phi_map, plucker_relations
from groebner.fiber import certify_kernel, fiber_report
from hankel.sections import HankelSpec, build_section, section_minors
from laplace.block_matrix import build_L1, build_L_a
from laplace.relations import (
    f_lap,
    flap_normalization,
    lap_polynomial,
    lap_relations,
    relation_metadata,
)
from suite.config import FORMATS, SUITES, load_config
from suite.report import emit_report, metrics_line
from suite.runner import run_suite
from syzygy.birational import gradient_birationality, minors_birationality, rees_fiber_type_check
from syzygy.eagon_northcott import en_syzygies
from syzygy.gradient import verify_linsyz
from utilities.budget import Budget
from utilities.errors import BudgetExceededError, ConfigError, HankelFiberError, ShapeError
from utilities.logging_setup import configure_logging

logger = logging.getLogger("hankelfiber")

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_CONFIG = 2


def _common(parser: argparse.ArgumentParser):
    parser.add_argument("--n", type=int, default=3)
    parser.add_argument("--r", type=int, default=0)
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--budget-pairs", type=int, default=None)
    parser.add_argument("--budget-secs", type=float, default=None)
    parser.add_argument("--json", action="store_true", help="print JSON instead of text")
    parser.add_argument("--out", default=None)
    parser.add_argument("--log-level", default=None)


def _parse_args(argv: Optional[list] = None) -> argparse.Namespace:
    parser = argparse.ArgumentParser(
        prog="hankelfiber",
        description="Exact checks on fiber rings of degenerate Hankel determinantal ideals.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    hankel = commands.add_parser("hankel", help="Hankel sections and their minors")
    hankel.add_argument("action", choices=("print", "minors"))
    hankel.add_argument("--shape", choices=("rect", "square"), default="rect")
    hankel.add_argument(
        "--text", action="store_true", help="minors as `[cols] = poly` lines instead of the JSON table"
    )
    _common(hankel)

    grass = commands.add_parser("grass", help="Pluecker relations and the dual poset")
    grass.add_argument("action", choices=("plucker", "poset", "phi"))
    grass.add_argument("--format", dest="fmt", choices=("dot", "json"), default="dot")
    _common(grass)

    laplace = commands.add_parser("laplace", help="Laplace quadrics and f_LAP")
    laplace.add_argument("action", choices=("lap", "flap", "matrix"))
    laplace.add_argument("--a", default=None, help="comma separated a for a single LAP_a")
    _common(laplace)

    fiber = commands.add_parser("fiber", help="special fiber invariants and kernels")
    fiber.add_argument("action", choices=("report", "kernel"))
    _common(fiber)

    syz = commands.add_parser("syz", help="syzygies, birationality and Rees algebras")
    syz.add_argument("action", choices=("en", "birational", "rees", "linsyz"))
    syz.add_argument("--target", choices=("minors", "gradient"), default="minors")
    _common(syz)

    suite = commands.add_parser("suite", help="run verification suites and emit a report")
    suite.add_argument("--n", default=None, help="n or a range such as 2..4")
    suite.add_argument("--r", default=None, help="comma separated r values; all when omitted")
    suite.add_argument("--suites", default=None, help=f"comma separated subset of {','.join(SUITES)}")
    suite.add_argument("--seed", type=int, default=None)
    suite.add_argument("--budget-pairs", type=int, default=None)
    suite.add_argument("--budget-secs", type=float, default=None)
    suite.add_argument("--format", dest="fmt", choices=FORMATS, default="json")
    suite.add_argument("--json", action="store_true", help="same as --format json")
    suite.add_argument("--out", default=None)
    suite.add_argument("--workers", type=int, default=1)
    suite.add_argument("--timings", action="store_true", help="record wall time per case")
    suite.add_argument("--slow", action="store_true", help="include the slow cases")
    suite.add_argument("--log-level", default=None)
    return parser.parse_args(argv)


def _budget(args, label: str) -> Budget:
    config = load_config(budget_pairs=args.budget_pairs, budget_secs=args.budget_secs, seed=args.seed)
    return config.budget(label)


def _seed(args) -> int:
    return load_config(seed=args.seed).seed


def _emit(args, payload) -> None:
    if args.json:
        text = json.dumps(payload, indent=2, sort_keys=True, default=str) + "\n"
    elif isinstance(payload, str):
        text = payload if payload.endswith("\n") else payload + "\n"
    else:
        text = "\n".join(f"{k}: {v}" for k, v in payload.items()) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def cmd_hankel(args) -> int:
    spec = HankelSpec(args.n, args.r, args.shape)
    if args.action == "print":
        text = build_section(spec).to_text()
        _emit(args, {"matrix": text} if args.json else text)
        return EXIT_PASS
    if args.shape != "rect":
        raise ShapeError("minor tables are built on the rectangular section")
    table = section_minors(args.n, args.r)
    if args.text:
        args.json = False
        _emit(args, "\n".join(f"{key} = {format_polynomial(v)}" for key, v in table.items()))
    else:
        args.json = True
        _emit(args, json.loads(table.to_json()))
    return EXIT_PASS


def cmd_grass(args) -> int:
    if args.action == "plucker":
        polys = [format_polynomial(p) for p in plucker_relations(args.n)]
        _emit(args, {"plucker": polys} if args.json else "\n".join(polys))
    elif args.action == "poset":
        args.json = False
        _emit(args, hasse_document(args.n, args.fmt))
    else:
        iso = PosetIso(args.n)
        images = [(str(a), format_polynomial(phi_map(iso, p))) for a, p in lap_relations(args.n)]
        if args.json:
            _emit(args, {"phi_lap": dict(images)})
        else:
            _emit(args, "\n".join(f"phi(LAP_{a}) = {p}" for a, p in images))
    return EXIT_PASS


def cmd_laplace(args) -> int:
    if args.action == "matrix":
        labeled = build_L1(args.n) if args.a is None else build_L_a(args.n, _int_list(args.a))
        args.json = False
        _emit(args, labeled.to_text())
        return EXIT_PASS
    if args.action == "flap":
        budget = _budget(args, f"f_lap n={args.n}")
        poly = f_lap(args.n, budget)
        if args.json:
            payload = relation_metadata(args.n, None, poly)
            payload["normalization"] = flap_normalization(args.n, budget)
            _emit(args, payload)
        else:
            _emit(args, format_polynomial(poly))
        return EXIT_PASS
    if args.a is not None:
        relations = [(_int_list(args.a), lap_polynomial(args.n, _int_list(args.a)))]
    else:
        relations = lap_relations(args.n)
    if args.json:
        _emit(args, {"relations": [relation_metadata(args.n, a, p) for a, p in relations]})
    else:
        _emit(args, "\n".join(f"LAP_{tuple(a)} = {format_polynomial(p)}" for a, p in relations))
    return EXIT_PASS


def cmd_fiber(args) -> int:
    budget = _budget(args, f"fiber n={args.n} r={args.r}")
    if args.action == "report":
        report = fiber_report(args.n, args.r, budget)
        _emit(args, report.to_dict() if args.json else f"n={args.n} r={args.r} {metrics_line(report.metrics())}")
        return EXIT_PASS if report.passed else EXIT_FAIL
    certificate = certify_kernel(args.n, args.r, budget)
    if args.json:
        _emit(args, certificate.to_dict(with_basis=True))
    else:
        summary = " ".join(f"{k}={v}" for k, v in certificate.to_dict().items())
        _emit(args, "\n".join(certificate.basis_text() + [f"# {summary}"]))
    return EXIT_PASS if certificate.equal else EXIT_FAIL


def cmd_syz(args) -> int:
    seed = _seed(args)
    if args.action == "en":
        syz = en_syzygies(args.n, args.r)
        ok = syz.annihilates()
        _emit(args, {"columns": syz.size, "annihilates": ok})
        return EXIT_PASS if ok else EXIT_FAIL
    if args.action == "linsyz":
        check = verify_linsyz(args.n, seed)
        _emit(args, check.to_dict())
        return EXIT_PASS if check.holds else EXIT_FAIL
    budget = _budget(args, f"syz {args.action} n={args.n}")
    if args.action == "birational":
        if args.target == "gradient":
            report = gradient_birationality(args.n, budget, seed)
        else:
            report = minors_birationality(args.n, args.r, budget, seed)
        _emit(args, report.to_dict())
        return EXIT_PASS if report.verdict == "birational-certified" else EXIT_FAIL
    report = rees_fiber_type_check(args.n, 1, budget)
    _emit(args, report.to_dict())
    return EXIT_PASS if report.fiber_type else EXIT_FAIL


def cmd_suite(args) -> int:
    config = load_config(
        n=args.n,
        r=args.r,
        suites=args.suites,
        budget_pairs=args.budget_pairs,
        budget_secs=args.budget_secs,
        seed=args.seed,
        out=args.out,
        fmt="json" if args.json else args.fmt,
        workers=args.workers,
        timings=args.timings,
        include_slow=args.slow,
    )
    doc = run_suite(config)
    payload = emit_report(doc, config.fmt, config.out)
    if config.out is None:
        sys.stdout.write(payload)
    return EXIT_FAIL if doc.failed else EXIT_PASS


def _int_list(text: str) -> tuple:
    try:
        return tuple(int(v) for v in text.split(",") if v.strip())
    except ValueError as exc:
        raise ConfigError(f"cannot parse index list {text!r}") from exc


COMMANDS = {
    "hankel": cmd_hankel,
    "grass": cmd_grass,
    "laplace": cmd_laplace,
    "fiber": cmd_fiber,
    "syz": cmd_syz,
    "suite": cmd_suite,
}


def main(argv: Optional[list] = None) -> int:
    args = _parse_args(argv)
    configure_logging(args.log_level)
    try:
        return COMMANDS[args.command](args)
    except (ConfigError, ShapeError) as exc:
        logger.error("[config] %s", exc)
        return EXIT_CONFIG
    except BudgetExceededError as exc:
        logger.warning("[budget] not determined: %s", exc)
        return EXIT_FAIL
    except HankelFiberError as exc:
        logger.error("[suite] %s", exc)
        return EXIT_FAIL
    except OSError as exc:
        logger.error("[suite] cannot write output: %s", exc)
        return EXIT_FAIL


if __name__ == "__main__":
    raise SystemExit(main())
