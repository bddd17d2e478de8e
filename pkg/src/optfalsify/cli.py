"""Command line interface.

Exit codes: 0 on completed runs (falsification verdicts are results, not
errors), 1 when the postulate suite reports failures, 2 on validation or
configuration errors.
"""

from __future__ import annotations

import argparse
import math
import os
import re
import sys
from dataclasses import dataclass

import numpy as np

from . import serialize
from .coins import (
    campaign_uniforms,
    classical_baseline,
    falsify_campaign,
    sample_classical_coin,
    sample_generator,
    seeded_stream,
)
from .errors import OptFalsifyError, OutOfRangeError, SchemaError
from .linalg import DEFAULT_RANK_TOL
from .postulates import KNOWN_FAULTS, run_postulate_checks
from .quantum import QuantumState, born_probability, purify

ENV_SEED = "OPT_FALSIFY_SEED"


@dataclass(frozen=True)
class RunConfig:
    """Validated invocation parameters shared by the subcommands.

    master_seed is the seed given on the command line, or None when the
    caller left it to the config file / environment fallback.
    """

    command: str
    config_path: str | None = None
    master_seed: int | None = None
    rank_tol: float = DEFAULT_RANK_TOL
    n_trials: int | None = None
    out_path: str | None = None
    csv_path: str | None = None
    dims: tuple[int, ...] = (2, 3, 4)
    inject_fault: str | None = None

    def __post_init__(self) -> None:
        if self.master_seed is not None and self.master_seed < 0:
            raise OutOfRangeError("seed must be a non-negative integer")
        if not 0.0 < self.rank_tol < 1e-4:
            raise OutOfRangeError(
                f"rank tolerance {self.rank_tol!r} outside (0, 1e-4)"
            )
        if self.n_trials is not None and self.n_trials < 1:
            raise OutOfRangeError("trial count must be at least 1")


def _parse_dims(text: str) -> tuple[int, ...]:
    m = re.fullmatch(r"(\d+)\.\.(\d+)", text)
    if not m:
        raise argparse.ArgumentTypeError(
            f"expected a range like 2..4, got {text!r}"
        )
    lo, hi = int(m.group(1)), int(m.group(2))
    if lo < 2 or hi < lo:
        raise argparse.ArgumentTypeError(f"bad dimension range {text!r}")
    return tuple(range(lo, hi + 1))


def _resolve_seed(cli_seed: int | None, config_seed: int | None) -> int:
    """Priority: --seed flag, then config value, then $OPT_FALSIFY_SEED, then 0."""
    if cli_seed is not None:
        return cli_seed
    if config_seed is not None:
        return config_seed
    env = os.environ.get(ENV_SEED)
    if env is not None:
        try:
            seed = int(env)
        except ValueError:
            raise OutOfRangeError(f"{ENV_SEED} must be an integer, got {env!r}")
        if seed < 0:
            raise OutOfRangeError(f"{ENV_SEED} must be non-negative")
        return seed
    return 0


def _emit_doc(cfg: RunConfig, doc: dict) -> None:
    if cfg.out_path:
        serialize.write_json(cfg.out_path, doc)
    else:
        print(serialize.json_dumps(doc))


def _load_config_doc(cfg: RunConfig) -> dict:
    if not cfg.config_path:
        raise SchemaError(f"{cfg.command} requires --config")
    doc = serialize.read_json(cfg.config_path)
    if not isinstance(doc, dict):
        raise SchemaError("config file must contain a JSON object")
    return doc


def cmd_purify(cfg: RunConfig) -> int:
    doc = _load_config_doc(cfg)
    rho = serialize.object_from_json(doc, "config")
    if not isinstance(rho, QuantumState):
        raise SchemaError("purify expects a document with kind 'state'")
    pur = purify(rho, rank_tol=cfg.rank_tol)
    _emit_doc(cfg, serialize.purification_to_json(pur))
    print(
        f"purified dim-{pur.dim_a} state into environment dim {pur.dim_b}",
        file=sys.stderr,
    )
    return 0


def cmd_falsify_coin(cfg: RunConfig) -> int:
    doc = _load_config_doc(cfg)
    declared, true_state, n_trials, config_seed = serialize.campaign_config_from_json(
        doc
    )
    if cfg.n_trials is not None:
        n_trials = cfg.n_trials
    seed = _resolve_seed(cfg.master_seed, config_seed)
    report = falsify_campaign(declared, true_state, n_trials, seed)
    _emit_doc(cfg, serialize.report_to_json(report))
    if cfg.csv_path:
        fired = campaign_uniforms(seed, n_trials) < report.theoretical_rate
        labels = np.where(fired, "FALSIFIED", "INCONCLUSIVE")
        serialize.write_trace_csv(
            cfg.csv_path, labels, report.theoretical_rate, seed
        )
    print(
        f"verdict {report.verdict}: {report.n_falsified}/{report.n_trials} "
        f"falsifying outcomes (theoretical rate {report.theoretical_rate:.6g})",
        file=sys.stderr,
    )
    return 0


def cmd_sample(cfg: RunConfig) -> int:
    doc = _load_config_doc(cfg)
    declared = serialize.declared_from_json(
        serialize.require_key(doc, "declared", dict, "config")
    )
    n_trials = cfg.n_trials
    if n_trials is None:
        n_trials = serialize.require_key(doc, "n_trials", int, "config")
    config_seed = doc.get("seed") if isinstance(doc.get("seed"), int) else None
    seed = _resolve_seed(cfg.master_seed, config_seed)
    outcomes = sample_generator(declared, n_trials, seeded_stream(seed))
    rho = declared.state()
    probs = np.array(
        [born_probability(rho, e) for e in declared.observation_test()]
    )
    counts = np.bincount(outcomes, minlength=declared.dim)
    report = {
        "n_trials": int(n_trials),
        "seed": int(seed),
        "probs": [float(p) for p in probs],
        "counts": [int(c) for c in counts],
        "frequencies": [float(c / n_trials) for c in counts],
    }
    _emit_doc(cfg, report)
    if cfg.csv_path:
        serialize.write_trace_csv(
            cfg.csv_path, [int(k) for k in outcomes], probs[outcomes], seed
        )
    print(
        f"sampled {n_trials} outcomes from the declared generator (seed {seed})",
        file=sys.stderr,
    )
    return 0


def cmd_check_postulates(cfg: RunConfig) -> int:
    seed = _resolve_seed(cfg.master_seed, None)
    results = run_postulate_checks(dims=cfg.dims, seed=seed, fault=cfg.inject_fault)
    all_passed = all(r.passed for r in results)
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        worst = "inf" if math.isinf(r.worst) else f"{r.worst:.3e}"
        line = (
            f"{status} {r.name} (cases={r.cases}, worst={worst}, "
            f"bound={r.bound:.1e})"
        )
        if r.note:
            line += f" -- {r.note}"
        print(line)
    if cfg.out_path:
        doc = {
            "seed": int(seed),
            "dims": [int(d) for d in cfg.dims],
            "fault": cfg.inject_fault,
            "all_passed": all_passed,
            "results": [
                {
                    "name": r.name,
                    "cases": int(r.cases),
                    "worst": float(r.worst) if math.isfinite(r.worst) else None,
                    "bound": float(r.bound),
                    "passed": r.passed,
                    "note": r.note,
                }
                for r in results
            ],
        }
        serialize.write_json(cfg.out_path, doc)
    print(
        f"{sum(r.passed for r in results)}/{len(results)} properties passed",
        file=sys.stderr,
    )
    return 0 if all_passed else 1


def _outcome_list(doc: dict) -> np.ndarray:
    seq = serialize.require_key(doc, "outcomes", list, "config")
    out = np.empty(len(seq), dtype=np.int64)
    for i, v in enumerate(seq):
        if isinstance(v, bool) or not isinstance(v, int) or v not in (0, 1):
            raise SchemaError(f"config: outcomes[{i}] must be 0 or 1")
        out[i] = v
    return out


def cmd_classical_baseline(cfg: RunConfig) -> int:
    doc = _load_config_doc(cfg)
    declared_p = serialize.require_key(doc, "declared_p", float, "config")
    seed = None
    extra = {}
    if "outcomes" in doc:
        outcomes = _outcome_list(doc)
    else:
        true_p = (
            serialize.require_key(doc, "true_p", float, "config")
            if "true_p" in doc
            else declared_p
        )
        n_trials = cfg.n_trials
        if n_trials is None:
            n_trials = serialize.require_key(doc, "n_trials", int, "config")
        config_seed = doc.get("seed") if isinstance(doc.get("seed"), int) else None
        seed = _resolve_seed(cfg.master_seed, config_seed)
        outcomes = sample_classical_coin(true_p, n_trials, seed)
        extra = {"true_p": float(true_p)}
    verdict = classical_baseline(declared_p, outcomes, rank_tol=cfg.rank_tol)
    report = {
        "declared_p": float(declared_p),
        **extra,
        "n_trials": int(outcomes.size),
        "n_zero": int(np.count_nonzero(outcomes == 0)),
        "n_one": int(np.count_nonzero(outcomes == 1)),
        "seed": seed,
        "verdict": verdict.value,
    }
    _emit_doc(cfg, report)
    print(f"verdict {verdict.value}", file=sys.stderr)
    return 0


_COMMANDS = {
    "purify": cmd_purify,
    "falsify-coin": cmd_falsify_coin,
    "sample": cmd_sample,
    "check-postulates": cmd_check_postulates,
    "classical-baseline": cmd_classical_baseline,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="opt-falsify",
        description=(
            "Simulate falsification tests on quantum and classical random "
            "generators."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, help_text: str, *, config: bool, trials: bool, csv: bool,
            dims: bool, fault: bool, seed: bool, rank_tol: bool) -> None:
        sp = sub.add_parser(name, help=help_text)
        if config:
            sp.add_argument("--config", required=True, metavar="PATH",
                            help="JSON input document")
        if seed:
            sp.add_argument("--seed", type=int, default=None, metavar="N",
                            help=f"master seed (fallback: config, then ${ENV_SEED})")
        if trials:
            sp.add_argument("--trials", type=int, default=None, metavar="N",
                            help="override the configured trial count")
        if rank_tol:
            sp.add_argument("--rank-tol", type=float, default=DEFAULT_RANK_TOL,
                            dest="rank_tol", metavar="X",
                            help="relative eigenvalue cutoff for supports")
        sp.add_argument("--out", default=None, metavar="PATH",
                        help="write the JSON report here instead of stdout")
        if csv:
            sp.add_argument("--csv", default=None, metavar="PATH",
                            help="write a per-trial CSV trace")
        if dims:
            sp.add_argument("--dims", type=_parse_dims, default=(2, 3, 4),
                            metavar="A..B", help="dimension range to exercise")
        if fault:
            sp.add_argument("--inject-fault", default=None, dest="inject_fault",
                            choices=KNOWN_FAULTS, metavar="NAME",
                            help="deliberately break one check (self-test)")

    add("purify", "purify a density matrix into a minimal pure dilation",
        config=True, trials=False, csv=False, dims=False, fault=False,
        seed=False, rank_tol=True)
    add("falsify-coin", "run a Monte Carlo falsification campaign",
        config=True, trials=True, csv=True, dims=False, fault=False,
        seed=True, rank_tol=True)
    add("sample", "draw outcomes from a declared generator",
        config=True, trials=True, csv=True, dims=False, fault=False,
        seed=True, rank_tol=False)
    add("check-postulates", "re-run the dual-route property suites",
        config=False, trials=False, csv=False, dims=True, fault=True,
        seed=True, rank_tol=False)
    add("classical-baseline", "judge falsifiability of a classical coin",
        config=True, trials=True, csv=False, dims=False, fault=False,
        seed=True, rank_tol=True)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    ns = parser.parse_args(argv)
    try:
        cfg = RunConfig(
            command=ns.command,
            config_path=getattr(ns, "config", None),
            master_seed=getattr(ns, "seed", None),
            rank_tol=getattr(ns, "rank_tol", DEFAULT_RANK_TOL),
            n_trials=getattr(ns, "trials", None),
            out_path=getattr(ns, "out", None),
            csv_path=getattr(ns, "csv", None),
            dims=getattr(ns, "dims", (2, 3, 4)),
            inject_fault=getattr(ns, "inject_fault", None),
        )
        return _COMMANDS[ns.command](cfg)
    except (OptFalsifyError, ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
