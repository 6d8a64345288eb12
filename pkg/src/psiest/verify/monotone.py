"""Two independent tests of monotonicity for a sampled function.

``find_up_down`` searches for an up-then-down or down-then-up pattern
``i < j < k``; ``is_quasi_affine_sequence`` checks that every interior grid
point lies between the values at any two grid points enclosing it. On the
same grid and tolerance the two give the same boolean.
"""
from __future__ import annotations

from typing import Sequence


def find_up_down(values: Sequence[float], tol: float = 0.0) -> tuple[int, int, int] | None:
    """Indices ``(i, j, k)`` of a peak or valley whose swings both exceed ``tol``."""
    n = len(values)
    if n < 3:
        return None
    # prefix argmin / argmax, suffix argmin / argmax
    pmin, pmax = [0] * n, [0] * n
    for j in range(1, n):
        pmin[j] = j if values[j] < values[pmin[j - 1]] else pmin[j - 1]
        pmax[j] = j if values[j] > values[pmax[j - 1]] else pmax[j - 1]
    smin, smax = [n - 1] * n, [n - 1] * n
    for j in range(n - 2, -1, -1):
        smin[j] = j if values[j] < values[smin[j + 1]] else smin[j + 1]
        smax[j] = j if values[j] > values[smax[j + 1]] else smax[j + 1]
    for j in range(1, n - 1):
        fj = values[j]
        i, k = pmin[j - 1], smin[j + 1]
        if fj - values[i] > tol and fj - values[k] > tol:
            return (i, j, k)
        i, k = pmax[j - 1], smax[j + 1]
        if values[i] - fj > tol and values[k] - fj > tol:
            return (i, j, k)
    return None


def is_monotone_sequence(values: Sequence[float], tol: float = 0.0) -> bool:
    return find_up_down(values, tol) is None


def is_quasi_affine_sequence(values: Sequence[float], tol: float = 0.0) -> bool:
    """Sampled quasi-convexity and quasi-concavity on the grid.

    For grid points ``i < k`` and every grid point ``j`` strictly between
    them (``j = t*i + (1-t)*k`` for some ``t`` in (0, 1)), require
    ``min(f_i, f_k) <= f_j <= max(f_i, f_k)`` up to ``tol``.
    """
    n = len(values)
    for i in range(n):
        hi_between = -float("inf")
        lo_between = float("inf")
        for k in range(i + 2, n):
            fj = values[k - 1]
            hi_between = max(hi_between, fj)
            lo_between = min(lo_between, fj)
            top = max(values[i], values[k])
            bottom = min(values[i], values[k])
            if hi_between - top > tol or bottom - lo_between > tol:
                return False
    return True
