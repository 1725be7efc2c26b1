"""
operator_entanglement.py

Operator Schmidt coefficients of bipartite operators and the operator
entanglement of unitaries (linear and von Neumann), by reshuffle + SVD and by
the doubled-space swap-trace contraction, plus the A(theta) route for the
spin-coupling gate and the theta scans built on it.
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import minimize_scalar

try:
    from .tensor_core import (
        NUMERIC_TOL,
        Bipartition,
        DimensionError,
        MultipartiteOperator,
        NotUnitaryError,
        as_operator,
        grouped,
        hermitian_eigenvalues,
        reshuffle_matrix,
        singular_values,
    )
    from .state_entanglement import (
        linear_entropy_of,
        schmidt_weights,
        von_neumann_entropy_of,
    )
except ImportError:
    from tensor_core import (
        NUMERIC_TOL,
        Bipartition,
        DimensionError,
        MultipartiteOperator,
        NotUnitaryError,
        as_operator,
        grouped,
        hermitian_eigenvalues,
        reshuffle_matrix,
        singular_values,
    )
    from state_entanglement import (
        linear_entropy_of,
        schmidt_weights,
        von_neumann_entropy_of,
    )

logger = logging.getLogger(__name__)

THETA_GRID_POINTS = 2001
MAXIMUM_MARGIN = 1e-9


@dataclass(frozen=True)
class OperatorSchmidt:
    """Descending operator Schmidt coefficients s_n of O = sum_n s_n A_n (x) B_n."""

    coefficients: Tuple[float, ...]
    d_left: int
    d_right: int

    def weights(self) -> np.ndarray:
        """s_n^2 normalized to unit sum (s_n^2 / d_left d_right for a unitary)."""
        return schmidt_weights(np.asarray(self.coefficients))

    def schmidt_number(self) -> int:
        return int(np.count_nonzero(self.weights()))

    def norm_squared(self) -> float:
        return float(np.sum(np.square(self.coefficients)))


def require_unitary(op, tol: float = NUMERIC_TOL) -> MultipartiteOperator:
    op = as_operator(op)
    defect = op.unitarity_defect()
    if defect > tol:
        raise NotUnitaryError(
            f"operator entanglement is defined for unitaries; defect {defect:.3e} > {tol:g}"
        )
    return op


def operator_schmidt(op, split: Optional[Bipartition] = None) -> OperatorSchmidt:
    data, d_left, d_right = grouped(as_operator(op), split)
    s = singular_values(reshuffle_matrix(data, d_left, d_right))
    return OperatorSchmidt(tuple(float(x) for x in s), d_left, d_right)


def linear_operator_entanglement(op, split: Optional[Bipartition] = None) -> float:
    """E(U) = 1 - sum_n s_n^4 / (d_L d_R)^2"""
    op = require_unitary(op)
    return linear_entropy_of(operator_schmidt(op, split).weights())


def von_neumann_operator_entanglement(op, split: Optional[Bipartition] = None) -> float:
    """E~(U) = -sum_n (s_n^2/d_L d_R) ln(s_n^2/d_L d_R), in nats."""
    op = require_unitary(op)
    return von_neumann_entropy_of(operator_schmidt(op, split).weights())


# Doubled-space contractions. With T[x1, x2, y1, y2] = U[(x1,x2),(y1,y2)] the
# traces over two copies of U reduce to four-tensor index sums; U (x) U itself
# is never formed.
_SAME_SIDE = "abcd,efgh,ebgd,afch->"  # Tr(U(x)U S13 Ud(x)Ud S13)
_CROSS_SIDE = "abcd,efgh,ebch,afgd->"  # Tr(U(x)U S24 Ud(x)Ud S13)


def _four_index(op, split: Optional[Bipartition]) -> Tuple[np.ndarray, int, int]:
    data, d_left, d_right = grouped(op, split)
    return data.reshape(d_left, d_right, d_left, d_right), d_left, d_right


def swap_traces(op, split: Optional[Bipartition] = None) -> Tuple[float, float]:
    """(Tr(U(x)2 S13 U+(x)2 S13), Tr(U(x)2 S24 U+(x)2 S13)) across ``split``.

    Copies are ordered (L, R, L', R'); S13 swaps the left factors, S24 the right.
    """
    t, _, _ = _four_index(as_operator(op), split)
    tc = t.conj()
    same = np.einsum(_SAME_SIDE, t, t, tc, tc, optimize=True)
    cross = np.einsum(_CROSS_SIDE, t, t, tc, tc, optimize=True)
    return float(same.real), float(cross.real)


def linear_op_ent_via_trace(op, split: Optional[Bipartition] = None) -> float:
    """E(U) = 1 - Tr(U(x)2 S13 U+(x)2 S13) / d^4 with d the common side dimension."""
    op = require_unitary(op)
    _, d_left, d_right = grouped(op, split)
    if d_left != d_right:
        raise DimensionError(
            f"trace route needs equal side dimensions, got {d_left} and {d_right}"
        )
    same, _ = swap_traces(op, split)
    return 1.0 - same / float(d_left * d_right) ** 2


def uniform_spectrum_entanglement(rank: int) -> Tuple[float, float]:
    """(E, E~) for r equal Schmidt coefficients: (1 - 1/r, ln r)."""
    return 1.0 - 1.0 / rank, math.log(rank)


# Spin-coupling gate U(theta) = exp(i theta N (x) N)


def spin_A_matrix(theta: float, d: int) -> np.ndarray:
    """A_mn(theta) = d^-2 sum_k exp(i theta k (m - n)): the reduced "mixed operator"."""
    k = np.arange(d)
    diff = np.subtract.outer(k, k)
    return np.exp(1j * theta * np.multiply.outer(k, diff)).sum(axis=0) / d**2


def spin_linear_entanglement(theta: float, d: int) -> float:
    mu = hermitian_eigenvalues(spin_A_matrix(theta, d))
    return linear_entropy_of(mu)


def spin_label(d: int) -> str:
    """Spin j = (d - 1)/2 as text: 1/2, 1, 3/2, ..."""
    return str(Fraction(d - 1, 2))


def theta_grid(points: int = THETA_GRID_POINTS) -> np.ndarray:
    """``points`` uniform angles on the half-open period [0, 2 pi)."""
    if points < 3:
        raise ValueError(f"theta grid needs at least 3 points, got {points}")
    return np.linspace(0.0, 2.0 * np.pi, points, endpoint=False)


@dataclass(frozen=True)
class SpinScanRow:
    theta: float
    j: str
    d: int
    e_linear: float

    def as_dict(self) -> dict:
        return {"theta": self.theta, "j": self.j, "d": self.d, "E_linear": self.e_linear}


@dataclass(frozen=True)
class SpinMaximum:
    d: int
    index: int
    grid_theta: float
    grid_value: float
    theta: float
    value: float


def spin_curve(d: int, grid: np.ndarray) -> np.ndarray:
    """E(theta) of U(theta) on every grid angle (batched A-matrix eigenvalues)."""
    k = np.arange(d)
    diff = np.subtract.outer(k, k)
    phases = np.exp(1j * np.multiply.outer(grid, np.multiply.outer(k, diff)))
    stack = phases.sum(axis=1) / d**2
    mu = np.clip(np.linalg.eigvalsh(stack), 0.0, 1.0)
    return 1.0 - np.sum(mu * mu, axis=-1)


def spin_scan(dims: Sequence[int], grid: Optional[np.ndarray] = None) -> List[SpinScanRow]:
    """Rows ordered by theta, then by d."""
    grid = theta_grid() if grid is None else np.asarray(grid, dtype=float)
    curves = {d: spin_curve(d, grid) for d in dims}
    rows = []
    for i, theta in enumerate(grid):
        for d in dims:
            rows.append(SpinScanRow(float(theta), spin_label(d), d, float(curves[d][i])))
    return rows


def find_maxima(
    d: int,
    grid: np.ndarray,
    values: np.ndarray,
    margin: float = MAXIMUM_MARGIN,
    refine: bool = True,
    periodic: bool = False,
) -> List[SpinMaximum]:
    """Grid points above both neighbours by more than ``margin``.

    A run of points equal within ``margin`` (a peak falling between nodes)
    counts once, at its first point. With ``periodic`` the grid wraps around;
    a closing point at first + 2 pi is dropped as a copy of the first.
    Otherwise the end points have one neighbour and are never reported.
    Each maximum is refined by bounded scalar optimization across its run.
    """
    grid = np.asarray(grid, dtype=float)
    values = np.asarray(values, dtype=float)
    n = len(grid)
    if n < 3:
        raise ValueError(f"need at least 3 grid points, got {n}")
    if periodic and abs(grid[-1] - grid[0] - 2.0 * np.pi) < 1e-12:
        n -= 1
    step = float(grid[1] - grid[0])

    def neighbour(i: int) -> Optional[int]:
        if 0 <= i < n:
            return i
        return i % n if periodic else None

    found = []
    for i in range(n):
        left = neighbour(i - 1)
        v = values[i]
        if left is None or not v - values[left] > margin:
            continue
        # walk along a plateau of near-equal values
        j = i
        nxt = neighbour(j + 1)
        while nxt is not None and nxt != i and abs(values[nxt] - v) <= margin:
            j = j + 1
            nxt = neighbour(j + 1)
        if nxt is None or not v - values[nxt] > margin:
            continue
        theta, value = float(grid[i]), float(v)
        if refine:
            res = minimize_scalar(
                lambda t: -spin_linear_entanglement(t, d),
                bounds=(grid[i] - step, grid[i] + (j - i + 1) * step),
                method="bounded",
                options={"xatol": 1e-12},
            )
            if -res.fun >= value:
                theta, value = float(res.x), float(-res.fun)
        found.append(SpinMaximum(d, i, float(grid[i]), float(v), theta, value))
    logger.debug("d=%d: %d maxima on a %d-point grid", d, len(found), n)
    return found


__all__ = [
    "MAXIMUM_MARGIN",
    "THETA_GRID_POINTS",
    "OperatorSchmidt",
    "SpinMaximum",
    "SpinScanRow",
    "find_maxima",
    "linear_op_ent_via_trace",
    "linear_operator_entanglement",
    "operator_schmidt",
    "require_unitary",
    "spin_A_matrix",
    "spin_curve",
    "spin_label",
    "spin_linear_entanglement",
    "spin_scan",
    "swap_traces",
    "theta_grid",
    "uniform_spectrum_entanglement",
    "von_neumann_operator_entanglement",
]
