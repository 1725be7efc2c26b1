"""
state_entanglement.py

Pure states on qudit registers, Haar sampling, reduced states and the two
state entanglement measures (von Neumann entropy in nats, linear entropy).
"""

import logging
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Tuple

import numpy as np
from scipy.special import entr

try:
    from .tensor_core import (
        EXACT_TOL,
        NUMERIC_TOL,
        Bipartition,
        DimensionError,
        DomainError,
        MultipartiteOperator,
        check_dims,
        check_positions,
        dims_product,
        as_operator,
        hermitian_eigenvalues,
        resolve_split,
        singular_values,
    )
except ImportError:
    from tensor_core import (
        EXACT_TOL,
        NUMERIC_TOL,
        Bipartition,
        DimensionError,
        DomainError,
        MultipartiteOperator,
        check_dims,
        check_positions,
        dims_product,
        as_operator,
        hermitian_eigenvalues,
        resolve_split,
        singular_values,
    )

logger = logging.getLogger(__name__)

# Schmidt weights below this are numerical residue of a smaller rank.
SPECTRUM_CUTOFF = 1e-14


@dataclass(frozen=True, eq=False)
class PureState:
    """Unit vector on a register of ``dims``; ``dims == ()`` is the scalar state."""

    amplitudes: np.ndarray
    dims: Tuple[int, ...]

    def __post_init__(self):
        dims = check_dims(self.dims)
        amps = np.array(self.amplitudes, dtype=np.complex128).reshape(-1)
        if amps.shape[0] != dims_product(dims):
            raise DimensionError(
                f"{amps.shape[0]} amplitudes do not match dims {dims}"
            )
        norm = float(np.linalg.norm(amps))
        if abs(norm - 1.0) > EXACT_TOL:
            raise DomainError(f"state norm is {norm!r}, expected 1")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)
        object.__setattr__(self, "dims", dims)

    @classmethod
    def from_vector(cls, vector, dims: Sequence[int], normalize: bool = True) -> "PureState":
        v = np.asarray(vector, dtype=np.complex128).reshape(-1)
        if normalize:
            v = v / np.linalg.norm(v)
        return cls(v, tuple(dims))

    @classmethod
    def basis(cls, index: Sequence[int], dims: Sequence[int]) -> "PureState":
        """Computational basis state |i_0, i_1, ...>."""
        dims = check_dims(dims)
        v = np.zeros(dims_product(dims), dtype=np.complex128)
        v[np.ravel_multi_index(tuple(index), dims)] = 1.0
        return cls(v, dims)

    @classmethod
    def product(cls, *states: "PureState") -> "PureState":
        amps = np.ones(1, dtype=np.complex128)
        dims: Tuple[int, ...] = ()
        for s in states:
            amps = np.kron(amps, s.amplitudes)
            dims = dims + s.dims
        return cls(amps, dims)

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]

    def apply(self, op) -> "PureState":
        op = as_operator(op, self.dims)
        return PureState.from_vector(op.data @ self.amplitudes, self.dims)

    def as_density(self) -> MultipartiteOperator:
        return MultipartiteOperator(np.outer(self.amplitudes, self.amplitudes.conj()), self.dims)


@dataclass(frozen=True)
class SchmidtSpectrum:
    """Descending Schmidt weights (squared Schmidt coefficients), summing to 1."""

    lambdas: Tuple[float, ...]

    @property
    def rank(self) -> int:
        return sum(1 for x in self.lambdas if x > 0.0)

    def linear_entropy(self) -> float:
        return linear_entropy_of(np.asarray(self.lambdas))

    def von_neumann_entropy(self) -> float:
        return von_neumann_entropy_of(np.asarray(self.lambdas))


def haar_random_vector(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Normalized i.i.d. standard complex Gaussian vector (Haar on the sphere)."""
    if dim < 1:
        raise DimensionError(f"dimension must be >= 1, got {dim}")
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)


def haar_random_state(
    dim: int, rng: np.random.Generator, dims: Optional[Sequence[int]] = None
) -> PureState:
    """Haar-random pure state; ``dims`` defaults to a single system (none when dim is 1)."""
    if dims is None:
        dims = () if dim == 1 else (dim,)
    elif dims_product(dims) != dim:
        raise DimensionError(f"dims {tuple(dims)} do not multiply to {dim}")
    return PureState(haar_random_vector(dim, rng), tuple(dims))


def maximally_entangled_pair(d: int) -> PureState:
    """(1/sqrt(d)) sum_n |n>|n> on dims (d, d)."""
    if d < 2:
        raise DimensionError(f"maximally entangled pair needs d >= 2, got {d}")
    v = np.eye(d, dtype=np.complex128).reshape(-1) / np.sqrt(d)
    return PureState(v, (d, d))


def _split_matrix(psi: PureState, keep: Tuple[int, ...]) -> np.ndarray:
    n = len(psi.dims)
    drop = tuple(p for p in range(n) if p not in keep)
    dk = dims_product(psi.dims[p] for p in keep)
    t = psi.amplitudes.reshape(psi.dims).transpose(keep + drop)
    return t.reshape(dk, -1)


def reduced_density(psi: PureState, keep: Iterable[int]) -> MultipartiteOperator:
    keep = tuple(sorted(check_positions(keep, len(psi.dims))))
    m = _split_matrix(psi, keep)
    return MultipartiteOperator(m @ m.conj().T, tuple(psi.dims[p] for p in keep))


def _clean_probabilities(p: np.ndarray) -> np.ndarray:
    """Clip eigenvalues/weights within tolerance of [0, 1]; reject anything else."""
    p = np.asarray(p, dtype=float)
    if p.size and (p.min() < -NUMERIC_TOL or p.max() > 1.0 + NUMERIC_TOL):
        raise DomainError(
            f"spectrum outside [0, 1] beyond tolerance: min={p.min()!r}, max={p.max()!r}"
        )
    return np.clip(p, 0.0, 1.0)


def linear_entropy_of(p: np.ndarray) -> float:
    p = _clean_probabilities(p)
    return float(1.0 - np.sum(p * p))


def von_neumann_entropy_of(p: np.ndarray) -> float:
    # entr(x) = -x ln x with entr(0) = 0
    p = _clean_probabilities(p)
    return float(np.sum(entr(p)))


def _density_spectrum(rho) -> np.ndarray:
    return hermitian_eigenvalues(as_operator(rho).data)


def von_neumann_entropy(rho) -> float:
    return von_neumann_entropy_of(_density_spectrum(rho))


def linear_entropy(rho) -> float:
    return linear_entropy_of(_density_spectrum(rho))


def schmidt_weights(s: np.ndarray) -> np.ndarray:
    """Squared singular values normalized to unit sum, residue below the cutoff zeroed.

    Works on a single spectrum or a stack (last axis).
    """
    lam = s * s
    total = lam.sum(axis=-1, keepdims=True)
    lam = np.where(lam < SPECTRUM_CUTOFF * total, 0.0, lam)
    return lam / lam.sum(axis=-1, keepdims=True)


def schmidt_spectrum(psi: PureState, split: Optional[Bipartition] = None) -> SchmidtSpectrum:
    split = resolve_split(psi.dims, split)
    m = _split_matrix(psi, tuple(sorted(split.left)))
    lam = schmidt_weights(singular_values(m))
    return SchmidtSpectrum(tuple(float(x) for x in lam))


def batch_schmidt_spectra(vectors: np.ndarray, d_left: int, d_right: int) -> np.ndarray:
    """Schmidt weights for a stack of vectors ordered (left, right); shape (n, min(dL, dR))."""
    vectors = np.asarray(vectors)
    s = np.linalg.svd(vectors.reshape(-1, d_left, d_right), compute_uv=False)
    return schmidt_weights(s)


def batch_linear_entropy(weights: np.ndarray) -> np.ndarray:
    return 1.0 - np.sum(weights * weights, axis=-1)


def batch_von_neumann_entropy(weights: np.ndarray) -> np.ndarray:
    return np.sum(entr(weights), axis=-1)


def average_purity_haar(d1: int, d2: int) -> float:
    """Haar average of Tr(rho_1^2) for a random pure state on d1 x d2."""
    return (d1 + d2) / (d1 * d2 + 1)


def swap_ancilla_example_state(d: int) -> PureState:
    """SWAP_AB applied to |Psi>_{A'A} (x) |Phi>_{BB'}, register (A', A, B, B')."""
    pair = maximally_entangled_pair(d)
    start = PureState.product(pair, pair)
    t = start.amplitudes.reshape(d, d, d, d).transpose(0, 2, 1, 3)
    return PureState(t.reshape(-1), (d, d, d, d))


__all__ = [
    "SPECTRUM_CUTOFF",
    "PureState",
    "SchmidtSpectrum",
    "average_purity_haar",
    "batch_linear_entropy",
    "batch_schmidt_spectra",
    "batch_von_neumann_entropy",
    "haar_random_state",
    "haar_random_vector",
    "linear_entropy",
    "linear_entropy_of",
    "maximally_entangled_pair",
    "reduced_density",
    "schmidt_spectrum",
    "schmidt_weights",
    "swap_ancilla_example_state",
    "von_neumann_entropy",
    "von_neumann_entropy_of",
]
