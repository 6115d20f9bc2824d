"""
Extended-precision arithmetic for the dd mode.

A private mpmath context keeps the 128-bit working precision independent of
the global ``mpmath.mp`` state, so worker threads never race on it.
"""

from typing import Any, List, Sequence

from mpmath.ctx_mp import MPContext

EXTENDED_BITS = 128

extended = MPContext()
extended.prec = EXTENDED_BITS


def is_extended(value: Any) -> bool:
    return hasattr(value, "_mpc_") or hasattr(value, "_mpf_")


def to_extended(values: Sequence[Any]) -> List[Any]:
    """Lift complex numbers into the extended context."""
    lifted = []
    for v in values:
        if is_extended(v):
            lifted.append(extended.convert(v))
        else:
            c = complex(v)
            lifted.append(extended.mpc(c.real, c.imag))
    return lifted


def extended_solve(rows: Sequence[Sequence[Any]], rhs: Sequence[Any]) -> List[Any]:
    """Solve a square system by LU with partial pivoting in extended precision."""
    solution = extended.lu_solve(extended.matrix([list(r) for r in rows]), extended.matrix(list(rhs)))
    return [solution[i] for i in range(len(rhs))]


def extended_det(rows: Sequence[Sequence[Any]]) -> Any:
    return extended.det(extended.matrix([list(r) for r in rows]))


def extended_lstsq(rows: Sequence[Sequence[Any]], rhs: Sequence[Any]) -> List[Any]:
    """Least-squares solution through a skinny complex QR factorization."""
    a = extended.matrix([list(r) for r in rows])
    b = extended.matrix(list(rhs))
    q, r = extended.qr(a, mode="skinny")
    projected = q.H * b
    solution = extended.lu_solve(r, projected)
    return [solution[i] for i in range(a.cols)]
