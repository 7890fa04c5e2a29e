"""Elimination helpers over galois field arrays.

Used for the GF(2) Artin-Schreier system and for rank and erasure solving over
GF(2^e). The reduction itself is galois' ``FieldArray.row_reduce``; the
helpers add the pivot columns, which the callers need to read off solutions
and ranks.
"""
from __future__ import annotations

import logging

import galois
import numpy as np

log = logging.getLogger(__name__)


def row_reduce(matrix: galois.FieldArray, ncols: int | None = None) -> tuple[galois.FieldArray, list[int]]:
    """Reduced row echelon form of ``matrix``, pivoting only in the first ``ncols`` columns.

    Returns the reduced copy and the list of pivot columns; the rank is ``len(pivots)``.
    """
    ncols = matrix.shape[1] if ncols is None else ncols
    R = matrix.row_reduce(ncols=ncols)
    leading = R[:, :ncols].view(np.ndarray) != 0
    pivots = leading.argmax(axis=1)[leading.any(axis=1)].tolist()
    log.debug("row_reduce: %d pivots in a %dx%d matrix", len(pivots), *matrix.shape)
    return R, pivots


def rank(matrix: galois.FieldArray) -> int:
    # eliminating the shorter side is cheaper
    if matrix.shape[0] > matrix.shape[1]:
        matrix = matrix.T
    return len(row_reduce(matrix)[1])


def solve(A: galois.FieldArray, b: galois.FieldArray) -> tuple[galois.FieldArray | None, int]:
    """Solve ``A x = b`` for a single right-hand side.

    Returns ``(x, rank)`` where ``x`` is ``None`` when the system is inconsistent.
    Free variables are set to zero; callers compare ``rank`` with ``A.shape[1]``
    to decide whether the solution is unique.
    """
    GF = type(A)
    rows, cols = A.shape
    augmented = GF.Zeros((rows, cols + 1))
    augmented[:, :cols] = A
    augmented[:, cols] = b
    R, pivots = row_reduce(augmented)
    if pivots and pivots[-1] == cols:
        return None, len(pivots) - 1
    x = GF.Zeros(cols)
    for i, j in enumerate(pivots):
        x[j] = R[i, cols]
    return x, len(pivots)
