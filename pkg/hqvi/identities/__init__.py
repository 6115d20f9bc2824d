"""
Cross-checks between pipeline outputs.
"""

from .checks import (
    IdentityReport,
    check_elementary_modification,
    check_twisting,
    check_vanishing,
    first_level_insertion,
    vanishing_applies,
)

__all__ = [
    "IdentityReport",
    "check_elementary_modification",
    "check_twisting",
    "check_vanishing",
    "first_level_insertion",
    "vanishing_applies",
]
