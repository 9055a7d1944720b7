"""Command line front end: ``minklab {build,check,verify,perm,matrix}``.

Exit codes: 0 all PASS, 1 any FAIL, 2 usage or input errors, 3 SKIPPED
without FAIL.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from ._parallel import default_workers
from .axioms import DEFAULT_BUDGET, check_axiom
from .errors import BadConfiguration, HypothesisViolated, MinklabError
from .field import enumerate_permutation_set
from .permalg import check_closure, decompose_involutions, default_base_circle, perm_table
from .plane import Plane, build_from_permutation_set
from .report import NOT_APPLICABLE, CheckReport, exit_code, failed, passed, render_reports, skipped
from .statements import STATEMENT_IDS, verify_statement
from .statements4 import STATEMENT4_IDS, verify as verify_statement4

AXIOMS = ("H", "T", "S", "G")
ALL_IDS = STATEMENT_IDS + STATEMENT4_IDS
USAGE_ERROR = 2


@dataclass
class RunConfig:
    command: str
    model: tuple  # ("pgl2", q) | ("nearfield9",) | ("file", path)
    stmts: list[str] = field(default_factory=list)
    axioms: list[str] = field(default_factory=list)
    seed: int = 0
    budget: int = DEFAULT_BUDGET
    fmt: str = "text"
    workers: int | None = None
    out: str | None = None
    base_circle: str = "auto"
    mode: str = "closure"
    closure: bool = False
    decompose: tuple[int, int] | None = None
    timing: bool = False


def load_model(model: tuple) -> Plane:
    kind = model[0]
    if kind == "pgl2":
        return build_from_permutation_set(enumerate_permutation_set("pgl2", model[1]))
    if kind == "nearfield9":
        return build_from_permutation_set(enumerate_permutation_set("nearfield9"))
    path = Path(model[1])
    head = path.read_text(encoding="utf-8").lstrip()[:8]
    if head.startswith("MINK"):
        return Plane.load(path)
    return build_from_permutation_set(enumerate_permutation_set("file", path=path))


def model_label(model: tuple) -> str:
    if model[0] == "pgl2":
        return f"pgl2({model[1]})"
    if model[0] == "nearfield9":
        return "nearfield9"
    return f"file({Path(model[1]).name})"


def _base_circle(plane: Plane, spec: str) -> int:
    if spec == "auto":
        return default_base_circle(plane)
    E = int(spec)
    if not 0 <= E < plane.n_circles:
        raise ValueError(f"base circle {E} out of range (0..{plane.n_circles - 1})")
    return E


def axiom_reports(plane: Plane, cfg: RunConfig, axioms) -> list[CheckReport]:
    out = []
    for ax in axioms:
        rep = check_axiom(plane, ax, workers=cfg.workers, seed=cfg.seed, budget=cfg.budget, mode=cfg.mode)
        if ax == "G" and cfg.mode == "direct":
            rep.statement = "G/direct"
        out.append(rep)
    return out


def statement_reports(plane: Plane, cfg: RunConfig, ids, E: int) -> list[CheckReport]:
    out = []
    for s in ids:
        if s in STATEMENT4_IDS:
            out.append(verify_statement4(plane, s, E=E, workers=cfg.workers, seed=cfg.seed, budget=cfg.budget))
        else:
            out.append(verify_statement(plane, s, workers=cfg.workers, seed=cfg.seed, budget=cfg.budget))
    return out


def decompose_report(plane: Plane, E: int, K: int, q: int) -> CheckReport:
    try:
        L, N = decompose_involutions(plane, E, K, q)
    except HypothesisViolated as exc:
        return skipped("decompose", NOT_APPLICABLE, detail=str(exc))
    except BadConfiguration as exc:
        return failed("decompose", {"E": E, "K": K, "q": q}, detail=str(exc))
    return passed("decompose", 1, detail=f"f_{K} = i_{L} o i_{N} over E={E}")


def run(cfg: RunConfig, stream=None) -> int:
    """Execute one command, writing the report to ``stream`` (or ``cfg.out``)."""
    stream = stream or sys.stdout
    plane = load_model(cfg.model)
    header = {"model": model_label(cfg.model), "seed": cfg.seed, "budget": cfg.budget}

    if cfg.command == "build":
        text = plane.dumps()
        if cfg.out:
            Path(cfg.out).write_text(text, encoding="utf-8")
        else:
            stream.write(text)
        summary = f"points={plane.n_points} circles={plane.n_circles} circle_size={plane.n}\n"
        (sys.stderr if not cfg.out else stream).write(summary)
        return 0

    if cfg.command == "check":
        reports = axiom_reports(plane, cfg, cfg.axioms or AXIOMS)
    elif cfg.command == "verify":
        E = _base_circle(plane, cfg.base_circle)
        header["base_circle"] = E
        reports = statement_reports(plane, cfg, cfg.stmts or ALL_IDS, E)
    elif cfg.command == "perm":
        E = _base_circle(plane, cfg.base_circle)
        header["base_circle"] = E
        reports = []
        if cfg.closure:
            reports.append(check_closure(perm_table(plane, E), cfg.workers, statement="closure"))
        if cfg.decompose is not None:
            reports.append(decompose_report(plane, E, *cfg.decompose))
        if cfg.stmts:
            reports += statement_reports(plane, cfg, cfg.stmts, E)
        if not reports:
            raise ValueError("perm needs --closure, --decompose or --stmt")
    elif cfg.command == "matrix":
        E = _base_circle(plane, cfg.base_circle)
        header["base_circle"] = E
        reports = axiom_reports(plane, cfg, AXIOMS) + statement_reports(plane, cfg, ALL_IDS, E)
    else:
        raise ValueError(f"unknown command {cfg.command!r}")

    text = render_reports(reports, cfg.fmt, timing=cfg.timing, header=header)
    if cfg.out:
        Path(cfg.out).write_text(text, encoding="utf-8")
    else:
        stream.write(text)
    return exit_code(reports)


def _stmt_list(values) -> list[str]:
    out = []
    for v in values or []:
        out += [s for s in v.split(",") if s]
    for s in out:
        if s not in ALL_IDS:
            raise argparse.ArgumentTypeError(f"unknown statement id {s!r}")
    return out


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    model = common.add_mutually_exclusive_group(required=True)
    model.add_argument("--pgl2", type=int, metavar="Q", help="plane of PGL(2, Q)")
    model.add_argument("--nearfield9", action="store_true", help="plane of the order 9 near-field")
    model.add_argument("--file", metavar="PATH", help="MINK v1 plane or PERMSET v1 permutation set")
    common.add_argument("--seed", type=int, default=None, help="RNG seed (default: $MINKLAB_SEED or 0)")
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="sample budget for sampled checks")
    common.add_argument("--format", dest="fmt", choices=("text", "structured"), default="text")
    common.add_argument("--workers", type=int, default=None, help="worker threads (default: all cores)")
    common.add_argument("--out", help="write the output here instead of stdout")
    common.add_argument("--timing", action="store_true", help="include wall times (breaks byte identity)")

    parser = argparse.ArgumentParser(prog="minklab", description="Build and verify finite Minkowski planes.")
    parser.add_argument("--version", action="version", version=f"minklab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("build", parents=[common], help="build a plane and write it as MINK v1")

    p = sub.add_parser("check", parents=[common], help="check axioms")
    p.add_argument("--axiom", action="append", choices=AXIOMS, help="repeatable; default all")
    p.add_argument("--mode", choices=("closure", "direct"), default="closure", help="how (G) is checked")

    p = sub.add_parser("verify", parents=[common], help="verify statements")
    p.add_argument("--stmt", action="append", help="statement id, repeatable or comma separated; default all")
    p.add_argument("--base-circle", default="auto")

    p = sub.add_parser("perm", parents=[common], help="base-circle permutation calculus")
    p.add_argument("--base-circle", default="auto")
    p.add_argument("--closure", action="store_true", help="composition closure of the f_K")
    p.add_argument("--decompose", nargs=2, type=int, metavar=("K", "Q"), help="write f_K = i_L o i_N, Q on N")
    p.add_argument("--stmt", action="append")

    p = sub.add_parser("matrix", parents=[common], help="every axiom and statement")
    p.add_argument("--base-circle", default="auto")
    return parser


def config_from_args(args) -> RunConfig:
    if args.pgl2 is not None:
        model = ("pgl2", args.pgl2)
    elif args.nearfield9:
        model = ("nearfield9",)
    else:
        model = ("file", args.file)
    seed = args.seed
    if seed is None:
        seed = int(os.environ.get("MINKLAB_SEED", "0"))
    workers = args.workers if args.workers is not None else default_workers()
    return RunConfig(
        command=args.command, model=model, stmts=_stmt_list(getattr(args, "stmt", None)),
        axioms=getattr(args, "axiom", None) or [], seed=seed, budget=args.budget, fmt=args.fmt, workers=workers,
        out=args.out, base_circle=getattr(args, "base_circle", "auto"), mode=getattr(args, "mode", "closure"),
        closure=getattr(args, "closure", False),
        decompose=tuple(args.decompose) if getattr(args, "decompose", None) else None, timing=args.timing,
    )


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_from_args(args)
        return run(cfg)
    except argparse.ArgumentTypeError as exc:
        parser.error(str(exc))
    except (MinklabError, ValueError, OSError) as exc:
        print(f"minklab: error: {exc}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
