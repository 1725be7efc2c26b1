"""
tensor_core.py

Dense multipartite operator kernel: tensor products, system permutations,
partial trace, reshuffling and the factorization helpers every other module
builds on.

Basis ordering is fixed with system 0 most significant, i.e. the composite
index is i = i_0*(d_1*d_2*...) + i_1*(d_2*...) + ... which is exactly what
``numpy.kron`` and a C-ordered reshape to ``dims`` produce.
"""

from dataclasses import dataclass
from functools import reduce
from operator import mul
from typing import FrozenSet, Iterable, Optional, Sequence, Tuple, Union

import numpy as np

# exact identities (permutations, products) vs. factorization-derived values
EXACT_TOL = 1e-12
NUMERIC_TOL = 1e-10


class DimensionError(ValueError):
    """Subsystem dimensions, positions or splits are inconsistent."""


class NotUnitaryError(ValueError):
    """An operator that must be unitary is not (within tolerance)."""


class NotHermitianError(ValueError):
    """A matrix that must be Hermitian is not (within tolerance)."""


class NonFiniteError(ValueError):
    """NaN or infinite entries reached a factorization."""


class CapExceededError(ValueError):
    """A dimension is above the cap configured for a method."""


class DomainError(ValueError):
    """A scalar argument lies outside the domain of a function."""


def dims_product(dims: Iterable[int]) -> int:
    return reduce(mul, dims, 1)


def check_dims(dims: Sequence[int]) -> Tuple[int, ...]:
    dims = tuple(int(d) for d in dims)
    for d in dims:
        if d < 2:
            raise DimensionError(f"subsystem dimensions must be >= 2, got {dims}")
    return dims


@dataclass(frozen=True, eq=False)
class MultipartiteOperator:
    """Square complex matrix tagged with its ordered subsystem dimensions.

    The underlying array is made read-only so values can be shared freely.
    """

    data: np.ndarray
    dims: Tuple[int, ...]

    def __post_init__(self):
        dims = check_dims(self.dims)
        data = np.array(self.data, dtype=np.complex128)
        total = dims_product(dims)
        if data.shape != (total, total):
            raise DimensionError(
                f"matrix of shape {data.shape} does not match dims {dims} (D={total})"
            )
        data.setflags(write=False)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "data", data)

    @classmethod
    def identity(cls, dims: Sequence[int]) -> "MultipartiteOperator":
        dims = check_dims(dims)
        return cls(np.eye(dims_product(dims), dtype=np.complex128), dims)

    @property
    def dim(self) -> int:
        return self.data.shape[0]

    @property
    def num_systems(self) -> int:
        return len(self.dims)

    def tensor(self) -> np.ndarray:
        """View with one output axis and one input axis per subsystem."""
        return self.data.reshape(self.dims + self.dims)

    def adjoint(self) -> "MultipartiteOperator":
        return MultipartiteOperator(self.data.conj().T, self.dims)

    def __matmul__(self, other: "MultipartiteOperator") -> "MultipartiteOperator":
        if not isinstance(other, MultipartiteOperator):
            return NotImplemented
        if other.dims != self.dims:
            raise DimensionError(f"cannot compose dims {self.dims} with {other.dims}")
        return MultipartiteOperator(self.data @ other.data, self.dims)

    def unitarity_defect(self) -> float:
        """max |(U^dagger U - I)_ij|"""
        gram = self.data.conj().T @ self.data
        return float(np.max(np.abs(gram - np.eye(self.dim))))

    def is_unitary(self, tol: float = NUMERIC_TOL) -> bool:
        return self.unitarity_defect() <= tol

    def allclose(self, other: "MultipartiteOperator", tol: float = EXACT_TOL) -> bool:
        return self.dims == other.dims and bool(
            np.max(np.abs(self.data - other.data)) <= tol
        )


OperatorLike = Union[MultipartiteOperator, np.ndarray]


def as_operator(op: OperatorLike, dims: Optional[Sequence[int]] = None) -> MultipartiteOperator:
    """Wrap a bare square array; a single system is assumed when dims is omitted."""
    if isinstance(op, MultipartiteOperator):
        if dims is not None and tuple(dims) != op.dims:
            raise DimensionError(f"operator dims {op.dims} differ from requested {tuple(dims)}")
        return op
    arr = np.asarray(op)
    if dims is None:
        dims = (arr.shape[0],)
    return MultipartiteOperator(arr, tuple(dims))


@dataclass(frozen=True)
class Bipartition:
    left: FrozenSet[int]
    right: FrozenSet[int]

    def __post_init__(self):
        left, right = frozenset(self.left), frozenset(self.right)
        if not left or not right:
            raise DimensionError("both sides of a bipartition must be nonempty")
        if left & right:
            raise DimensionError(f"sides overlap: {sorted(left & right)}")
        everything = left | right
        if everything != frozenset(range(len(everything))):
            raise DimensionError(
                f"bipartition must cover positions 0..{len(everything) - 1}, "
                f"got {sorted(everything)}"
            )
        object.__setattr__(self, "left", left)
        object.__setattr__(self, "right", right)

    @classmethod
    def from_left(cls, left: Iterable[int], num_systems: int) -> "Bipartition":
        left = frozenset(left)
        return cls(left, frozenset(range(num_systems)) - left)

    @classmethod
    def halves(cls, num_systems: int) -> "Bipartition":
        """First ceil(n/2) systems against the rest."""
        if num_systems < 2:
            raise DimensionError("a bipartition needs at least two systems")
        return cls.from_left(range((num_systems + 1) // 2), num_systems)

    @property
    def num_systems(self) -> int:
        return len(self.left) + len(self.right)

    def order(self) -> Tuple[int, ...]:
        """Left positions then right positions, each ascending."""
        return tuple(sorted(self.left)) + tuple(sorted(self.right))

    def side_dims(self, dims: Sequence[int]) -> Tuple[int, int]:
        if len(dims) != self.num_systems:
            raise DimensionError(
                f"bipartition over {self.num_systems} systems used with dims {tuple(dims)}"
            )
        return (
            dims_product(dims[p] for p in sorted(self.left)),
            dims_product(dims[p] for p in sorted(self.right)),
        )


def resolve_split(op_dims: Sequence[int], split: Optional[Bipartition]) -> Bipartition:
    if split is None:
        return Bipartition.halves(len(op_dims))
    if split.num_systems != len(op_dims):
        raise DimensionError(
            f"split over {split.num_systems} systems does not fit dims {tuple(op_dims)}"
        )
    return split


def kron(a: OperatorLike, b: OperatorLike) -> MultipartiteOperator:
    a, b = as_operator(a), as_operator(b)
    return MultipartiteOperator(np.kron(a.data, b.data), a.dims + b.dims)


def kron_all(*ops: OperatorLike) -> MultipartiteOperator:
    return reduce(kron, ops)


def _check_permutation(perm: Sequence[int], n: int) -> Tuple[int, ...]:
    perm = tuple(int(p) for p in perm)
    if sorted(perm) != list(range(n)):
        raise DimensionError(f"{perm} is not a permutation of 0..{n - 1}")
    return perm


def inverse_permutation(perm: Sequence[int]) -> Tuple[int, ...]:
    perm = _check_permutation(perm, len(perm))
    inv = [0] * len(perm)
    for new, old in enumerate(perm):
        inv[old] = new
    return tuple(inv)


def compose_permutations(first: Sequence[int], second: Sequence[int]) -> Tuple[int, ...]:
    """Permutation equivalent to applying ``first`` and then ``second``."""
    first = _check_permutation(first, len(first))
    second = _check_permutation(second, len(first))
    return tuple(first[s] for s in second)


def permute_systems(op: OperatorLike, perm: Sequence[int]) -> MultipartiteOperator:
    """Reorder subsystems: system k of the result is system ``perm[k]`` of ``op``."""
    op = as_operator(op)
    n = op.num_systems
    perm = _check_permutation(perm, n)
    axes = list(perm) + [n + p for p in perm]
    new_dims = tuple(op.dims[p] for p in perm)
    data = op.tensor().transpose(axes).reshape(op.dim, op.dim)
    return MultipartiteOperator(data, new_dims)


def permutation_operator(dims: Sequence[int], perm: Sequence[int]) -> MultipartiteOperator:
    """P with P|x_0 ... x_{n-1}> = |x_perm[0] ... x_perm[n-1]>.

    Only the output axes of the identity are moved, so P acts on the register
    rather than relabelling it. ``permute_systems(op, perm)`` equals P op P^dagger.
    """
    dims = check_dims(dims)
    n = len(dims)
    perm = _check_permutation(perm, n)
    if any(dims[p] != dims[k] for k, p in enumerate(perm)):
        raise DimensionError(f"permutation {perm} mixes unequal dimensions {dims}")
    eye = MultipartiteOperator.identity(dims).tensor()
    total = dims_product(dims)
    data = eye.transpose(list(perm) + list(range(n, 2 * n))).reshape(total, total)
    return MultipartiteOperator(data, dims)


def check_positions(positions: Iterable[int], n: int) -> Tuple[int, ...]:
    positions = tuple(int(p) for p in positions)
    if not positions:
        raise DimensionError("at least one position is required")
    if len(set(positions)) != len(positions):
        raise DimensionError(f"positions must be distinct, got {positions}")
    for p in positions:
        if not 0 <= p < n:
            raise DimensionError(f"position {p} out of range for {n} systems")
    return positions


def partial_trace(op: OperatorLike, keep: Iterable[int]) -> MultipartiteOperator:
    """Trace out every system not listed in ``keep``; kept systems stay in order."""
    op = as_operator(op)
    keep = tuple(sorted(check_positions(keep, op.num_systems)))
    drop = tuple(p for p in range(op.num_systems) if p not in keep)
    if not drop:
        return op
    n = op.num_systems
    order = keep + drop
    dk = dims_product(op.dims[p] for p in keep)
    dr = dims_product(op.dims[p] for p in drop)
    t = op.tensor().transpose(list(order) + [n + p for p in order])
    t = t.reshape(dk, dr, dk, dr)
    reduced = np.einsum("ajbj->ab", t)
    return MultipartiteOperator(reduced, tuple(op.dims[p] for p in keep))


def reshuffle_matrix(m: np.ndarray, d_left: int, d_right: int) -> np.ndarray:
    """R[(iL,jL),(iR,jR)] = O[(iL,iR),(jL,jR)] on a bare (dL*dR)-square array."""
    m = np.asarray(m)
    if m.shape != (d_left * d_right, d_left * d_right):
        raise DimensionError(
            f"array of shape {m.shape} does not split as {d_left}x{d_right}"
        )
    t = m.reshape(d_left, d_right, d_left, d_right).transpose(0, 2, 1, 3)
    return t.reshape(d_left * d_left, d_right * d_right)


def unreshuffle(r: np.ndarray, d_left: int, d_right: int) -> np.ndarray:
    """Inverse of :func:`reshuffle_matrix`."""
    r = np.asarray(r)
    if r.shape != (d_left * d_left, d_right * d_right):
        raise DimensionError(
            f"array of shape {r.shape} is not a {d_left}^2 x {d_right}^2 reshuffle"
        )
    t = r.reshape(d_left, d_left, d_right, d_right).transpose(0, 2, 1, 3)
    return t.reshape(d_left * d_right, d_left * d_right)


def grouped(op: OperatorLike, split: Optional[Bipartition] = None) -> Tuple[np.ndarray, int, int]:
    """Matrix of ``op`` with the left side's systems moved to the front."""
    op = as_operator(op)
    split = resolve_split(op.dims, split)
    d_left, d_right = split.side_dims(op.dims)
    order = split.order()
    data = op.data if order == tuple(range(op.num_systems)) else permute_systems(op, order).data
    return data, d_left, d_right


def reshuffle(op: OperatorLike, split: Optional[Bipartition] = None) -> np.ndarray:
    """Operator-Schmidt map of ``op`` across ``split`` as a dL^2 x dR^2 matrix.

    Non-contiguous splits are first brought to (left, right) order.
    """
    data, d_left, d_right = grouped(op, split)
    return reshuffle_matrix(data, d_left, d_right)


def embed(
    op: OperatorLike, total_dims: Sequence[int], positions: Sequence[int]
) -> MultipartiteOperator:
    """Act with ``op`` on ``positions`` of a register of ``total_dims``, identity elsewhere."""
    op = as_operator(op)
    total_dims = check_dims(total_dims)
    positions = check_positions(positions, len(total_dims))
    if len(positions) != op.num_systems:
        raise DimensionError(
            f"operator on {op.num_systems} systems placed at {len(positions)} positions"
        )
    for p, d in zip(positions, op.dims):
        if total_dims[p] != d:
            raise DimensionError(
                f"position {p} has dimension {total_dims[p]}, operator expects {d}"
            )
    rest = tuple(p for p in range(len(total_dims)) if p not in positions)
    full = op
    if rest:
        full = kron(op, MultipartiteOperator.identity([total_dims[p] for p in rest]))
    current = positions + rest
    perm = [current.index(k) for k in range(len(total_dims))]
    return permute_systems(full, perm)


def hs_inner(x: OperatorLike, y: OperatorLike) -> complex:
    """Hilbert-Schmidt product Tr(X^dagger Y)."""
    xd = x.data if isinstance(x, MultipartiteOperator) else np.asarray(x)
    yd = y.data if isinstance(y, MultipartiteOperator) else np.asarray(y)
    if xd.shape != yd.shape:
        raise DimensionError(f"shapes {xd.shape} and {yd.shape} differ")
    return complex(np.vdot(xd, yd))


def hs_norm(x: OperatorLike) -> float:
    return float(np.sqrt(hs_inner(x, x).real))


def singular_values(m: np.ndarray) -> np.ndarray:
    """Descending singular values; count is min(rows, cols)."""
    m = np.asarray(m)
    if not np.all(np.isfinite(m)):
        raise NonFiniteError("matrix contains non-finite entries")
    return np.linalg.svd(m, compute_uv=False)


def hermitian_eigenvalues(h: np.ndarray, tol: float = NUMERIC_TOL) -> np.ndarray:
    """Descending real eigenvalues of a Hermitian matrix."""
    h = h.data if isinstance(h, MultipartiteOperator) else np.asarray(h)
    if not np.all(np.isfinite(h)):
        raise NonFiniteError("matrix contains non-finite entries")
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {h.shape}")
    defect = float(np.max(np.abs(h - h.conj().T))) if h.size else 0.0
    if defect > tol:
        raise NotHermitianError(f"matrix is not Hermitian (defect {defect:.3e})")
    return np.linalg.eigvalsh(h)[::-1]


__all__ = [
    "EXACT_TOL",
    "NUMERIC_TOL",
    "Bipartition",
    "CapExceededError",
    "DimensionError",
    "DomainError",
    "MultipartiteOperator",
    "NonFiniteError",
    "NotHermitianError",
    "NotUnitaryError",
    "as_operator",
    "check_dims",
    "check_positions",
    "compose_permutations",
    "dims_product",
    "embed",
    "grouped",
    "hermitian_eigenvalues",
    "hs_inner",
    "hs_norm",
    "inverse_permutation",
    "kron",
    "kron_all",
    "partial_trace",
    "permutation_operator",
    "permute_systems",
    "reshuffle",
    "reshuffle_matrix",
    "resolve_split",
    "singular_values",
    "unreshuffle",
]
