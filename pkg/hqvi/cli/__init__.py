"""
Command-line front end.
"""

from .commands import cmd_compute, cmd_solve, cmd_verify, error_payload, main
from .jobs import JobSpec, load_job
from .parser import VERIFY_GROUPS, build_parser
from .verify import VerifyOptions, VerifyResult, run_verification

__all__ = [
    "cmd_compute",
    "cmd_solve",
    "cmd_verify",
    "error_payload",
    "main",
    "JobSpec",
    "load_job",
    "VERIFY_GROUPS",
    "build_parser",
    "VerifyOptions",
    "VerifyResult",
    "run_verification",
]
