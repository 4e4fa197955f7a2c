"""``qchan`` command-line interface.

Exit codes: 0 on success, 1 when ``--fail-on-negative`` is given and some
verdict is negative (not trace preserving or not completely positive), 2 on
any input or validation error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from . import __version__, jsonio
from .chanrep import to_choi, to_kraus, to_super
from .dilation import DilationSpec, check_density, ensure_unitary, extract_kraus, reduced_spectra
from .errors import QChanError
from .scenarios import SCENARIOS, W_VARIANTS, run_scenario
from .sweeps import SWEEPS, run_sweep
from .verdicts import (Tolerances, analyze_channel, analyze_channel_chain,
                       analyze_divisibility_unitary, ppt_min_eigenvalue)

EXIT_OK, EXIT_NEGATIVE, EXIT_INPUT = 0, 1, 2


class UsageError(QChanError):
    pass


@dataclass
class RunConfig:
    command: str
    args: argparse.Namespace
    tolerances: Tolerances
    samples: int = 100
    seed: int = 0
    out: Optional[str] = None
    fail_on_negative: bool = False
    emit_fixtures: Optional[str] = None


def _common(p: argparse.ArgumentParser):
    p.add_argument("--tol", type=float, default=None,
                   help="verdict and PSD tolerance (default 1e-9)")
    p.add_argument("--seed", type=int, default=0, help="random seed for sweeps")
    p.add_argument("--samples", type=int, default=100, help="sample count for sweeps")
    p.add_argument("--out", default=None, help="write the report here instead of stdout")
    p.add_argument("--fail-on-negative", action="store_true",
                   help="exit 1 if any verdict is not TP or not CP")
    p.add_argument("--emit-fixtures", nargs="?", const="fixtures", default=None, metavar="DIR",
                   help="write scenario unitaries, states and channels as JSON into DIR")
    p.add_argument("-v", "--verbose", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    _common(common)
    parser = argparse.ArgumentParser(
        prog="qchan",
        description="Verify quantum channels: representations, CP/TP/unitality verdicts, "
                    "dilations and CP-divisibility.")
    parser.add_argument("--version", action="version", version=f"qchan {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    p = sub.add_parser("analyze", parents=[common], help="verdicts for one channel")
    p.add_argument("--channel", required=True, help="channel JSON")

    p = sub.add_parser("dilate", parents=[common],
                       help="system and environment Kraus operators of a joint unitary")
    p.add_argument("--unitary", required=True, help="joint unitary (matrix JSON)")
    p.add_argument("--state", required=True, help="joint state (state JSON with dims)")
    p.add_argument("--side", choices=["system", "environment", "both"], default="both")
    p.add_argument("--repair", action="store_true",
                   help="replace a non-unitary input by its nearest unitary")

    p = sub.add_parser("divisibility", parents=[common],
                       help="CP-divisibility of a unitary chain or an abstract two-step chain")
    p.add_argument("--stage", action="append", default=[],
                   help="stage unitary (matrix JSON); repeat in application order")
    p.add_argument("--state", help="initial joint state for a unitary chain")
    p.add_argument("--total", help="total unitary (unitary chain) or total channel "
                                   "(abstract chain)")
    p.add_argument("--first", help="first-stage channel of an abstract chain")
    p.add_argument("--repair", action="store_true")

    for name, text in (("choi", "Choi matrix"), ("kraus", "signed Kraus set"),
                       ("super", "superoperator")):
        p = sub.add_parser(name, parents=[common], help=f"convert a channel to its {text}")
        p.add_argument("--channel", required=True, help="channel JSON")

    p = sub.add_parser("ppt", parents=[common], help="partial-transpose eigenvalue witness")
    p.add_argument("--state", required=True, help="bipartite state JSON with dims")
    p.add_argument("--side", choices=["A", "B"], default="B")

    p = sub.add_parser("scenario", parents=[common], help="run a worked scenario")
    p.add_argument("name", choices=sorted(SCENARIOS))
    p.add_argument("--w-variant", choices=W_VARIANTS, default="corrected",
                   help="W unitary: corrected (default) or as printed, repaired to the "
                        "nearest unitary")

    p = sub.add_parser("sweep", parents=[common], help="run a seeded property sweep")
    p.add_argument("name", choices=sorted(SWEEPS))
    return parser


def _load(path: str, what: str):
    try:
        return jsonio.load_json(path)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{what} {path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None
    except OSError as exc:
        raise UsageError(f"{what} {path}: cannot read ({exc.strerror})") from None


def _channel(path: str):
    return jsonio.channel_from_json(_load(path, "channel"), f"channel {path}")


def _matrix(path: str, what: str) -> np.ndarray:
    return jsonio.matrix_from_json(_load(path, what), f"{what} {path}")


def _state(path: str, need_dims: bool = True):
    rho, dims = jsonio.state_from_json(_load(path, "state"), f"state {path}")
    if need_dims and dims is None:
        raise UsageError(f"state {path}: field 'dims' is required for a bipartite state")
    return rho, dims


def _verdict_entry(label: str, verdict) -> dict:
    return {"label": label, **verdict.to_dict()}


def _cmd_analyze(cfg: RunConfig):
    ch = _channel(cfg.args.channel)
    k = to_kraus(ch, cfg.tolerances.rank)
    v = analyze_channel(k, cfg.tolerances)
    return [_verdict_entry("channel", v)], [], [], {"dim_in": k.dim_in, "dim_out": k.dim_out}


def _cmd_dilate(cfg: RunConfig):
    a = cfg.args
    u = _matrix(a.unitary, "unitary")
    rho, dims = _state(a.state)
    u, warns = ensure_unitary(u, cfg.tolerances.unitary, repair=a.repair, name="unitary")
    rho = check_density(rho, cfg.tolerances.verdict, name="state")
    sys_spec, env_spec = reduced_spectra(rho, dims)
    sides = ["system", "environment"] if a.side == "both" else [a.side]
    verdicts, channels = [], {}
    for side in sides:
        spectator = env_spec if side == "system" else sys_spec
        k = extract_kraus(DilationSpec(u, dims, spectator, side, cfg.tolerances.unitary))
        verdicts.append(_verdict_entry(side, analyze_channel(k, cfg.tolerances)))
        channels[side] = k
    return verdicts, [], warns, {"dims": list(dims), "channels": channels,
                                 "spectra": {"system": sys_spec.eigenvalues,
                                             "environment": env_spec.eigenvalues}}


def _cmd_divisibility(cfg: RunConfig):
    a = cfg.args
    if a.stage:
        if a.first:
            raise UsageError("--first belongs to an abstract chain; do not combine it with --stage")
        if not a.state:
            raise UsageError("a unitary chain needs --state (initial joint state with dims)")
        stages = [_matrix(p, "stage") for p in a.stage]
        rho, dims = _state(a.state)
        total = _matrix(a.total, "total") if a.total else None
        rep = analyze_divisibility_unitary(stages, rho, dims, total=total,
                                           tolerances=cfg.tolerances, repair=a.repair)
        verdicts = [_verdict_entry(f"stage {s.stage + 1} {s.side}", s.verdict)
                    for s in rep.stages]
        return verdicts, [], list(rep.warnings), {"divisibility": rep.to_dict()}
    if not (a.total and a.first):
        raise UsageError("divisibility needs either --stage ... --state, or --total and --first")
    chain = analyze_channel_chain(_channel(a.total), _channel(a.first), cfg.tolerances)
    verdicts = [_verdict_entry("total", chain.total), _verdict_entry("first", chain.first)]
    if chain.intermediate_verdict is not None:
        verdicts.append(_verdict_entry("intermediate", chain.intermediate_verdict))
    warns = [] if chain.status == "ok" else [f"divisibility undefined: {chain.message}"]
    return verdicts, [], warns, {"chain": chain.to_dict()}


def _convert(kind: str):
    def run(cfg: RunConfig):
        ch = _channel(cfg.args.channel)
        if kind == "choi":
            out = to_choi(ch)
        elif kind == "super":
            out = to_super(ch)
        else:
            out = to_kraus(ch, cfg.tolerances.rank)
        return [], [], [], {"channel": out}
    return run


def _cmd_ppt(cfg: RunConfig):
    rho, dims = _state(cfg.args.state)
    m = ppt_min_eigenvalue(rho, dims, cfg.args.side, cfg.tolerances.verdict)
    return [], [], [], {"dims": list(dims), "side": cfg.args.side, "min_eigenvalue": m,
                        "entangled_witness": m < -cfg.tolerances.psd}


def _emit_fixtures(fixtures: dict, directory: str) -> list:
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    written = []
    for name, obj in sorted(fixtures.items()):
        path = d / f"{name}.json"
        jsonio.write_json(jsonio.to_jsonable(obj), path)
        written.append(str(path))
    return written


def _cmd_scenario(cfg: RunConfig):
    res = run_scenario(cfg.args.name, cfg.tolerances, w_variant=cfg.args.w_variant)
    verdicts = []
    if res.stage_reports is not None:
        verdicts = [_verdict_entry(f"stage {s.stage + 1} {s.side}", s.verdict)
                    for s in res.stage_reports.stages]
    extra = {"scenario": res.to_dict()}
    if res.pt_report is not None:
        for key in ("pt_transpose", "pt_I_x_T", "pt_T_x_T"):
            verdicts.append(_verdict_entry(key[3:], analyze_channel(res.fixtures[key],
                                                                    cfg.tolerances)))
    if cfg.emit_fixtures:
        extra["fixtures_written"] = _emit_fixtures(res.fixtures, cfg.emit_fixtures)
    return verdicts, [m.to_dict() for m in res.paper_match], list(res.warnings), extra


def _cmd_sweep(cfg: RunConfig):
    res = run_sweep(cfg.args.name, cfg.samples, cfg.seed, cfg.tolerances)
    return [], [], [], {"sweep": res.to_dict(), "negative": not res.passed}


COMMANDS = {
    "analyze": _cmd_analyze, "dilate": _cmd_dilate, "divisibility": _cmd_divisibility,
    "choi": _convert("choi"), "kraus": _convert("kraus"), "super": _convert("super"),
    "ppt": _cmd_ppt, "scenario": _cmd_scenario, "sweep": _cmd_sweep,
}


def _is_negative(verdicts: list, extra: dict) -> bool:
    if extra.get("negative"):
        return True
    return any(not (v["trace_preserving"]["flag"] and v["completely_positive"]["flag"])
               for v in verdicts)


def dispatch(cfg: RunConfig) -> int:
    verdicts, matches, warns, extra = COMMANDS[cfg.command](cfg)
    negative = _is_negative(verdicts, extra)
    extra.pop("negative", None)
    report = jsonio.make_report(cfg.command, cfg.tolerances.to_dict(), verdicts, matches, warns,
                                **extra)
    text = jsonio.dumps(report)
    if cfg.out:
        Path(cfg.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_NEGATIVE if cfg.fail_on_negative and negative else EXIT_OK


def _config(args: argparse.Namespace) -> RunConfig:
    if args.tol is not None and not (args.tol > 0 and np.isfinite(args.tol)):
        raise UsageError(f"--tol must be a positive finite number, got {args.tol}")
    if args.samples < 1:
        raise UsageError(f"--samples must be positive, got {args.samples}")
    if args.emit_fixtures and args.command != "scenario":
        raise UsageError("--emit-fixtures only applies to the scenario command")
    return RunConfig(args.command, args, Tolerances.with_tol(args.tol), args.samples, args.seed,
                     args.out, args.fail_on_negative, args.emit_fixtures)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else EXIT_INPUT
    logging.basicConfig(level=logging.INFO if args.verbose else logging.ERROR,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return dispatch(_config(args))
    except (QChanError, ValueError, KeyError, TypeError, OSError, np.linalg.LinAlgError) as exc:
        print(f"qchan {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except Exception as exc:  # noqa: BLE001 - every failure maps to exit 2, never a traceback
        print(f"qchan {args.command}: internal error: {type(exc).__name__}: {exc}",
              file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
