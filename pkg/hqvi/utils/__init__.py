"""
Utility functions for hqvi.
"""

import hashlib
import json
import math
import numbers
from enum import Enum
from typing import Any, Iterable, List, Sequence, Union


def hash_string(s: str, length: int = 16) -> str:
    """
    Create a hash of a string.

    Args:
        s: String to hash.
        length: Length of the returned hash.

    Returns:
        Hash string.
    """
    return hashlib.sha256(s.encode()).hexdigest()[:length]


def hash_payload(payload: Any, length: int = 16) -> str:
    """Hash a JSON-serializable payload with sorted keys."""
    return hash_string(json.dumps(payload, sort_keys=True, default=str), length)


def derive_seed(*parts: Union[int, Sequence[int]]) -> List[int]:
    """
    Build a numpy SeedSequence entropy list from integer parts.

    Nested sequences are flattened, so a derived seed can be extended further.
    Independent streams for (seed, sample, path, attempt) tuples keep results
    independent of execution order.
    """
    flat: List[int] = []
    for part in parts:
        if isinstance(part, (list, tuple)):
            flat.extend(derive_seed(*part))
        else:
            flat.append(int(part) & 0xFFFFFFFF)
    return flat


def format_duration(seconds: float) -> str:
    """
    Format a duration in seconds to human-readable string.

    Args:
        seconds: Duration in seconds.

    Returns:
        Formatted duration string (e.g., "1m 30s" or "0.42s").
    """
    if seconds < 60:
        return f"{seconds:.2f}s"
    hours = int(seconds // 3600)
    minutes = int((seconds % 3600) // 60)
    secs = int(seconds % 60)

    parts = []
    if hours > 0:
        parts.append(f"{hours}h")
    if minutes > 0:
        parts.append(f"{minutes}m")
    if secs > 0 or not parts:
        parts.append(f"{secs}s")

    return " ".join(parts)


def complex_to_json(z: complex) -> List[float]:
    """Serialize a complex number as [re, im]."""
    z = complex(z)
    return [z.real, z.imag]


def complex_list_to_json(values: Iterable[complex]) -> List[List[float]]:
    return [complex_to_json(z) for z in values]


def parse_complex_list(text: str) -> List[complex]:
    """
    Parse a comma-separated list of complex numbers.

    Accepts Python literals with ``j`` or ``i`` as the imaginary unit,
    e.g. ``"0.7+0.2i, 1.1-0.4j, 2"``.

    Raises:
        ValueError: if an entry is not a complex literal.
    """
    values = []
    for raw in text.split(","):
        token = raw.strip().replace(" ", "").replace("i", "j")
        if not token:
            raise ValueError(f"Empty entry in complex list: {text!r}")
        values.append(complex(token))
    return values


def to_jsonable(value: Any) -> Any:
    """
    Convert nested results into plain JSON types.

    Complex numbers become [re, im], enums their value, and non-finite
    floats None.
    """
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, (bool, int, str)) or value is None:
        return value
    if type(value).__module__ == "numpy" and hasattr(value, "item"):
        return to_jsonable(value.item())
    if isinstance(value, numbers.Integral):
        return int(value)
    if isinstance(value, numbers.Real):
        value = float(value)
        return value if math.isfinite(value) else None
    if isinstance(value, numbers.Complex):
        return [to_jsonable(value.real), to_jsonable(value.imag)]
    if hasattr(value, "to_dict"):
        return to_jsonable(value.to_dict())
    return str(value)


def canonical_json(payload: Any) -> str:
    """Sorted-key JSON, byte-identical for equal payloads."""
    return json.dumps(to_jsonable(payload), sort_keys=True, indent=2, allow_nan=False)
