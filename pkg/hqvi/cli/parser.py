"""
Argument parser for the hqvi command line.
"""

import argparse
from pathlib import Path
from typing import List, Optional, Sequence

from hqvi.config import Method, Precision

VERIFY_GROUPS = (
    "golden",
    "two_step",
    "punctual",
    "quot_k1",
    "counts",
    "equivariant",
    "twisting",
    "elementary_modification",
    "vanishing",
    "maximal_subsheaf",
    "seed_invariance",
)


def _add_problem_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--job", type=Path, help="JSON job file, or - for stdin; flags override its values")
    parser.add_argument("--genus", type=int, help="Genus g of the curve")
    parser.add_argument("--n", type=int, help="Rank n of the ambient bundle")
    parser.add_argument("--ranks", help="Rank chain, e.g. 1,2")
    parser.add_argument("--degree-e", dest="degree_e", type=int, help="Bundle degree e (<= 0)")
    parser.add_argument("--eps", help="Equivariant parameters, comma list")
    parser.add_argument("--method", choices=[m.value for m in Method])
    parser.add_argument("--precision", choices=[p.value for p in Precision])
    parser.add_argument("--seed", type=int, help="Seed (falls back to HQVI_SEED)")
    parser.add_argument("--retries", type=int)
    parser.add_argument("--threads", type=int, help="Worker threads (default: logical cores)")
    parser.add_argument("--out", type=Path, help="Write output here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hqvi",
        description="Virtual intersection numbers on Hyperquot schemes via Bethe-type systems.",
    )
    parser.add_argument(
        "--log-level", dest="log_level", type=str.upper,
        choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"],
        help="Override HQVI_LOG_LEVEL",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    compute = commands.add_parser("compute", help="Recover the generating polynomial")
    _add_problem_flags(compute)
    compute.add_argument("--insertion", help='Insertion, e.g. "c1[1]^3" or "1"')
    compute.add_argument("--samples", type=int)
    compute.add_argument("--max-degree", dest="max_degree", type=int)
    compute.add_argument("--format", choices=["json", "csv"], default="json")

    solve = commands.add_parser("solve", help="Solve the Bethe system at explicit parameters")
    _add_problem_flags(solve)
    solve.add_argument("--q", help="Quantum parameters, comma list, e.g. 0.7+0.2i,1.1-0.4i")
    solve.add_argument("--format", choices=["json"], default="json")

    verify = commands.add_parser("verify", help="Run the oracle and identity matrix")
    verify.add_argument(
        "--only", action="append", choices=VERIFY_GROUPS,
        help="Restrict to a group; may repeat",
    )
    verify.add_argument("--seed", type=int, help="Seed (falls back to HQVI_SEED)")
    verify.add_argument("--seed2", type=int, help="Second seed for the seed-invariance pair")
    verify.add_argument("--precision", choices=[p.value for p in Precision])
    verify.add_argument("--retries", type=int)
    verify.add_argument("--threads", type=int)
    verify.add_argument("--cases", type=int, default=None, help="Random cases per sweep cell")
    verify.add_argument("--format", choices=["table", "json"], default="table")
    verify.add_argument("--out", type=Path)
    return parser


def parse_args(argv: Optional[Sequence[str]] = None) -> argparse.Namespace:
    return build_parser().parse_args(list(argv) if argv is not None else None)


def job_overrides(args: argparse.Namespace, keys: List[str]) -> dict:
    return {key: getattr(args, key, None) for key in keys}
