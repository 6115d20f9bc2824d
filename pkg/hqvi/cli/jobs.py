"""
Job definitions shared by the command-line entry points.
"""

import json
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from pydantic import BaseModel, Field, ValidationError, field_validator

from hqvi.config import Method, Precision
from hqvi.core import parse_insertion
from hqvi.errors import UsageError
from hqvi.models import Insertion, ProblemSpec
from hqvi.utils import parse_complex_list


def _as_complex_text(value: Any) -> Optional[str]:
    """Accept "a,b", ["a", "b"], or [[re, im], ...] and return "a,b"."""
    if value is None or isinstance(value, str):
        return value
    parts = []
    for entry in value:
        if isinstance(entry, (list, tuple)):
            re, im = entry
            parts.append(repr(complex(float(re), float(im))))
        else:
            parts.append(str(entry))
    return ",".join(parts)


class JobSpec(BaseModel):
    """One compute or solve job, from a JSON file and/or flags."""
    genus: int = Field(..., ge=0, description="Genus of the curve")
    n: int = Field(..., ge=1, description="Rank of the ambient bundle")
    ranks: List[int] = Field(..., min_length=1, description="Rank chain r_1..r_k")
    degree_e: int = Field(default=0, description="Bundle degree e")
    insertion: str = Field(default="1", description="Insertion in the c<i>[<j>] / X[<l>] grammar")
    eps: Optional[str] = Field(default=None, description="Equivariant parameters, comma list")
    q: Optional[str] = Field(default=None, description="Quantum parameters for solve, comma list")
    method: Optional[Method] = Field(default=None, description="degeneration or equivariant")
    samples: Optional[int] = Field(default=None, ge=1)
    seed: Optional[int] = Field(default=None)
    precision: Optional[Precision] = Field(default=None)
    max_degree: Optional[int] = Field(default=None, ge=0)
    retries: Optional[int] = Field(default=None, ge=0)
    threads: Optional[int] = Field(default=None, ge=1)

    @field_validator("ranks", mode="before")
    @classmethod
    def split_ranks(cls, v: Union[str, List[int]]) -> List[int]:
        if isinstance(v, str):
            return [int(tok) for tok in v.replace(" ", "").split(",") if tok]
        return v

    @field_validator("eps", "q", mode="before")
    @classmethod
    def join_complex(cls, v: Any) -> Optional[str]:
        return _as_complex_text(v)

    def eps_values(self) -> Optional[List[complex]]:
        return self._complex("eps", self.eps)

    def q_values(self) -> Optional[List[complex]]:
        return self._complex("q", self.q)

    @staticmethod
    def _complex(name: str, text: Optional[str]) -> Optional[List[complex]]:
        if text is None:
            return None
        try:
            return parse_complex_list(text)
        except ValueError as e:
            raise UsageError(f"--{name}: {e}", {"field": name, "value": text})

    def problem(self) -> ProblemSpec:
        return ProblemSpec(
            genus=self.genus,
            ambient_rank=self.n,
            ranks=tuple(self.ranks),
            bundle_degree=self.degree_e,
            equivariant_params=tuple(self.eps_values() or ()),
        )

    def parsed_insertion(self) -> Insertion:
        return parse_insertion(self.insertion)

    def resolved_method(self) -> Method:
        if self.method is not None:
            return self.method
        return Method.EQUIVARIANT if self.eps is not None else Method.DEGENERATION


def load_job(path: Optional[Path], overrides: Dict[str, Any]) -> JobSpec:
    """
    Merge a JSON job file with command-line overrides and validate.

    Flags that were not given (None) leave the file's value in place. A path
    of "-" reads the job from stdin.

    Raises:
        UsageError: unreadable file or invalid job
    """
    data: Dict[str, Any] = {}
    if path is not None:
        try:
            text = sys.stdin.read() if str(path) == "-" else Path(path).read_text(encoding="utf-8")
            data = json.loads(text)
        except (OSError, json.JSONDecodeError) as e:
            raise UsageError(f"Cannot read job file {path}: {e}", {"path": str(path)})
        if not isinstance(data, dict):
            raise UsageError(f"Job file {path} must hold a JSON object", {"path": str(path)})
    data.update({k: v for k, v in overrides.items() if v is not None})
    try:
        return JobSpec.model_validate(data)
    except ValidationError as e:
        raise UsageError(
            f"Invalid job: {e.error_count()} problem(s)",
            {"errors": [{"field": ".".join(str(p) for p in err["loc"]), "message": err["msg"]} for err in e.errors()]},
        )
