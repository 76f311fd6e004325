"""qsh: run verification tasks from a JSON config and write a JSON report.

    qsh <task|all> --config FILE --out FILE [--tmax N] [--nmax N] [--jobs N] [--cache-dir DIR]

Exit status is 0 iff no task failed or raised.
"""
from __future__ import annotations

import argparse
import logging
import sys
import time
import traceback

from ..exact.modular import set_backend
from .config import TASKS, ConfigError, parse_config
from .report import build_report, exit_code, write_report
from .tasks import TASK_FUNCS, RunContext

log = logging.getLogger("qshuffle")


def run_tasks(cfg, tasks, timing: bool = False) -> dict:
    ctx = RunContext(cfg)
    results = {}
    for name in tasks:
        t0 = time.perf_counter()
        try:
            block = TASK_FUNCS[name](ctx)
        except Exception as exc:  # one failing task must not stop the others
            log.debug("task %s raised", name, exc_info=True)
            block = {"verdict": "error", "error": f"{type(exc).__name__}: {exc}",
                     "traceback": traceback.format_exc().splitlines()[-3:]}
        if timing:
            block["seconds"] = round(time.perf_counter() - t0, 3)
        results[name] = block
        log.info("%-22s %s", name, block["verdict"])
    return results


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qsh", description="Quantum shuffle algebra homology checks.")
    p.add_argument("task", help="task name, 'all', or 'config' to run the config's task list",
                   choices=list(TASKS) + ["all", "config"])
    p.add_argument("--config", required=True, help="JSON run configuration")
    p.add_argument("--out", required=True, help="where to write the JSON report")
    p.add_argument("--tmax", type=int, help="override t_max (F-length truncation)")
    p.add_argument("--nmax", type=int, help="override n_max (top homological degree)")
    p.add_argument("--jobs", type=int, help="worker processes for per-block homology")
    p.add_argument("--cache-dir", help="directory for cached component bases")
    p.add_argument("--backend", choices=["numba", "numpy"], help="modular rank kernel")
    p.add_argument("--timing", action="store_true", help="record wall time per task (breaks byte-identical reports)")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    overrides = {"t_max": args.tmax, "n_max": args.nmax, "jobs": args.jobs, "cache_dir": args.cache_dir}
    if args.task not in ("config",):
        overrides["tasks"] = list(TASKS) if args.task == "all" else [args.task]
    try:
        cfg = parse_config(args.config, overrides)
    except ConfigError as exc:
        for e in exc.errors:
            print(f"config error: {e}", file=sys.stderr)
        return 2
    if args.backend:
        set_backend(args.backend)
    results = run_tasks(cfg, cfg.tasks, timing=args.timing)
    report = build_report(cfg, results)
    write_report(report, args.out)
    for name, block in results.items():
        print(f"{name:22s} {block['verdict']}")
    return exit_code(report)


if __name__ == "__main__":
    sys.exit(main())
