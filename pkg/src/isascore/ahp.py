"""Pairwise-comparison weighting (analytic hierarchy process).

Expert judgments arrive as a reciprocal pairwise matrix; priorities are
derived with the row geometric mean and checked with the standard
consistency ratio.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import InputError

# Saaty random-consistency indices by matrix size.  Sizes beyond the
# published table fall back to the n=10 value.
_RANDOM_INDEX = {1: 0.0, 2: 0.0, 3: 0.58, 4: 0.90, 5: 1.12,
                 6: 1.24, 7: 1.32, 8: 1.41, 9: 1.45, 10: 1.49}

_RECIPROCAL_RTOL = 1e-6


@dataclass(frozen=True)
class PairwiseMatrix:
    """A positive reciprocal judgment matrix (diagonal 1, a_ji = 1/a_ij)."""

    entries: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.entries, dtype=float)
        object.__setattr__(self, "entries", a)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise InputError("pairwise matrix must be square")
        if a.shape[0] < 1:
            raise InputError("pairwise matrix must have at least one row")
        if not np.all(a > 0):
            raise InputError("pairwise matrix entries must be positive")
        if not np.allclose(np.diag(a), 1.0, rtol=_RECIPROCAL_RTOL):
            raise InputError("pairwise matrix diagonal must be 1")
        if not np.allclose(a * a.T, 1.0, rtol=_RECIPROCAL_RTOL):
            raise InputError("pairwise matrix must be reciprocal (a_ji = 1/a_ij)")

    @property
    def n(self) -> int:
        return self.entries.shape[0]


def derive_weights(matrix: PairwiseMatrix) -> tuple[np.ndarray, float]:
    """Derive priority weights and the consistency ratio.

    Weights are the normalized row geometric means.  The principal
    eigenvalue is estimated as the mean of (A w)_i / w_i, giving
    CI = (lambda_max - n) / (n - 1) and CR = CI / RI(n).  Sizes 1 and 2
    are consistent by construction, so CR is 0 there.

    Returns (weights summing to 1, consistency ratio).
    """
    a = matrix.entries
    n = matrix.n
    # geometric means in log space to avoid overflow on large judgments
    gm = np.exp(np.mean(np.log(a), axis=1))
    weights = gm / gm.sum()
    if n <= 2:
        return weights, 0.0
    lambda_max = float(np.mean((a @ weights) / weights))
    ci = (lambda_max - n) / (n - 1)
    ri = _RANDOM_INDEX.get(n, _RANDOM_INDEX[10])
    cr = ci / ri
    # tiny negative CI is numerical noise on a consistent matrix
    return weights, max(cr, 0.0)


def _parse_cell(token: str) -> float:
    if "/" in token:
        num, _, den = token.partition("/")
        return float(num) / float(den)
    return float(token)


def load_pairwise_matrix(path) -> PairwiseMatrix:
    """Read a whitespace-separated numeric grid; cells may be fractions (1/3)."""
    rows = []
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            rows.append([_parse_cell(tok) for tok in line.split()])
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"{path}:{lineno}: bad matrix cell: {exc}") from exc
    if not rows:
        raise InputError(f"{path}: empty matrix")
    if any(len(r) != len(rows) for r in rows):
        raise InputError(f"{path}: matrix is not square")
    return PairwiseMatrix(np.array(rows, dtype=float))
