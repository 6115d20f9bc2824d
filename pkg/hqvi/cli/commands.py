"""
Command implementations: compute, solve, verify.

Every command returns a process exit code: 0 ok, 1 failed verification,
2 usage or input error, 3 numeric failure.
"""

import argparse
import csv
import io
import sys
from pathlib import Path
from typing import Any, Dict, Optional, Sequence

from hqvi.config import Method, Precision, get_logger, settings, setup_logging
from hqvi.errors import HQVIError, UsageError
from hqvi.interpolate import ComputeOptions, compute
from hqvi.solver import solve
from hqvi.system import BetheSystem
from hqvi.utils import canonical_json
from .jobs import JobSpec, load_job
from .parser import job_overrides, parse_args
from .verify import VerifyOptions, format_table, run_verification

logger = get_logger("cli")

PROBLEM_KEYS = ["genus", "n", "ranks", "degree_e", "eps", "method", "precision", "seed", "retries", "threads"]


def _emit(text: str, out: Optional[Path]) -> None:
    if out is None:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
        return
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(text if text.endswith("\n") else text + "\n", encoding="utf-8")
    logger.info(f"📁 Output written to {out}")


def _envelope(command: str, result: Any) -> Dict[str, Any]:
    return {"schema": settings.schema_version, "command": command, "result": result}


def error_payload(error: HQVIError) -> Dict[str, Any]:
    return {"schema": settings.schema_version, "error": error.to_dict()}


def _compute_options(job: JobSpec) -> ComputeOptions:
    return ComputeOptions(
        method=job.resolved_method(),
        precision=job.precision,
        seed=job.seed,
        samples=job.samples,
        max_degree=job.max_degree,
        retries=job.retries,
        threads=job.threads,
    )


def cmd_compute(args: argparse.Namespace) -> int:
    """Recover a generating polynomial and write it with its diagnostics."""
    job = load_job(args.job, job_overrides(args, PROBLEM_KEYS + ["insertion", "samples", "max_degree"]))
    spec = job.problem()
    insertion = job.parsed_insertion()
    polynomial = compute(spec, insertion, _compute_options(job))

    if args.format == "csv":
        buffer = io.StringIO()
        csv.writer(buffer, lineterminator="\n").writerows(polynomial.to_rows())
        _emit(buffer.getvalue(), args.out)
    else:
        _emit(canonical_json(_envelope("compute", polynomial.to_dict())), args.out)
    return 0


def cmd_solve(args: argparse.Namespace) -> int:
    """Solve the Bethe system at explicit q and dump the representatives."""
    job = load_job(args.job, job_overrides(args, PROBLEM_KEYS + ["q"]))
    q = job.q_values()
    if q is None:
        raise UsageError("solve needs --q", {"field": "q"})
    method = job.resolved_method()
    if method == Method.EQUIVARIANT and job.eps is None:
        raise UsageError("The equivariant method needs --eps", {"field": "eps"})

    spec = job.problem()
    seed = job.seed if job.seed is not None else settings.default_seed
    precision = job.precision or settings.precision
    solutions = solve(spec, q, method=method, seed=seed, precision=precision)

    system = BetheSystem(solutions.spec, solutions.q)
    result = solutions.to_dict()
    for entry, rep in zip(result["representatives"], solutions.representatives):
        entry["J"] = complex(system.eval_J_factor(rep))
    result["spec"] = spec.to_dict()
    result["seed"] = seed
    _emit(canonical_json(_envelope("solve", result)), args.out)
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    """Run the acceptance matrix; exit 1 if any case fails."""
    seed = args.seed if args.seed is not None else settings.default_seed
    options = VerifyOptions(
        seed=seed,
        seed2=args.seed2 if args.seed2 is not None else seed + 1,
        precision=Precision(args.precision) if args.precision else None,
        retries=args.retries,
        threads=args.threads,
        cases=args.cases,
    )
    results = run_verification(args.only, options)
    if args.format == "json":
        payload = _envelope("verify", {
            "passed": all(r.passed for r in results),
            "cases": [r.to_dict() for r in results],
        })
        _emit(canonical_json(payload), args.out)
    else:
        _emit(format_table(results), args.out)
    return 0 if all(r.passed for r in results) else 1


COMMANDS = {
    "compute": cmd_compute,
    "solve": cmd_solve,
    "verify": cmd_verify,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = parse_args(argv)
    if args.log_level:
        setup_logging(log_level=args.log_level)
    try:
        return COMMANDS[args.command](args)
    except HQVIError as e:
        logger.error(f"❌ {e.code}: {e.message}")
        sys.stdout.write(canonical_json(error_payload(e)) + "\n")
        return e.exit_code
    except Exception as e:
        logger.exception(f"Unexpected failure: {e}")
        sys.stdout.write(canonical_json({
            "schema": settings.schema_version,
            "error": {"code": "INTERNAL", "message": str(e), "details": {}},
        }) + "\n")
        return 3
