"""
gate_library.py

Two-qudit gates: generalized Pauli shift/clock, Fourier, projectors, CPHASE,
SUM (both directions), DSUM, SWAP placements, general controlled-U and the
spin-coupling gate U(theta) = exp(i theta N (x) N).

Gates are returned as ``MultipartiteOperator`` on dims (d, d) unless noted.
"""

import logging
import math
import re
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

import numpy as np

try:
    from .tensor_core import (
        EXACT_TOL,
        DimensionError,
        DomainError,
        MultipartiteOperator,
        NotUnitaryError,
        as_operator,
        check_dims,
        check_positions,
        embed,
        kron,
        permutation_operator,
        permute_systems,
    )
except ImportError:
    from tensor_core import (
        EXACT_TOL,
        DimensionError,
        DomainError,
        MultipartiteOperator,
        NotUnitaryError,
        as_operator,
        check_dims,
        check_positions,
        embed,
        kron,
        permutation_operator,
        permute_systems,
    )

logger = logging.getLogger(__name__)


def _check_d(d: int) -> int:
    d = int(d)
    if d < 2:
        raise DimensionError(f"qudit dimension must be >= 2, got {d}")
    return d


# One-qudit gates


def shift_x(d: int) -> MultipartiteOperator:
    """X|n> = |n+1 mod d>"""
    d = _check_d(d)
    return MultipartiteOperator(np.roll(np.eye(d, dtype=np.complex128), 1, axis=0), (d,))


def clock_z(d: int) -> MultipartiteOperator:
    """Z|n> = exp(2 pi i n / d)|n>"""
    d = _check_d(d)
    return MultipartiteOperator(np.diag(np.exp(2j * np.pi * np.arange(d) / d)), (d,))


def fourier(d: int) -> MultipartiteOperator:
    """F|n> = d^{-1/2} sum_k exp(2 pi i n k / d)|k>; the Hadamard gate at d = 2."""
    d = _check_d(d)
    n = np.arange(d)
    return MultipartiteOperator(np.exp(2j * np.pi * np.outer(n, n) / d) / np.sqrt(d), (d,))


def projector(n: int, m: int, d: int) -> MultipartiteOperator:
    """P_{n,m} = |n><m|"""
    d = _check_d(d)
    p = np.zeros((d, d), dtype=np.complex128)
    p[n % d, m % d] = 1.0
    return MultipartiteOperator(p, (d,))


def matrix_power(op: MultipartiteOperator, k: int) -> MultipartiteOperator:
    return MultipartiteOperator(np.linalg.matrix_power(op.data, k), op.dims)


def haar_random_unitary(d: int, rng: np.random.Generator) -> MultipartiteOperator:
    """QR of a complex Ginibre matrix with the phases of diag(R) absorbed into Q."""
    d = int(d)
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    diag = np.diag(r)
    q = q * (diag / np.abs(diag))
    return MultipartiteOperator(q, (d,))


# Two-qudit gates


def identity_gate(d: int) -> MultipartiteOperator:
    d = _check_d(d)
    return MultipartiteOperator.identity((d, d))


def _require_unitary_block(block: np.ndarray, n: int, tol: float = EXACT_TOL) -> np.ndarray:
    block = np.asarray(block, dtype=np.complex128)
    defect = float(np.max(np.abs(block.conj().T @ block - np.eye(block.shape[0]))))
    if defect > tol:
        raise NotUnitaryError(f"controlled block {n} is not unitary (defect {defect:.3e})")
    return block


@dataclass(frozen=True, eq=False)
class ControlledGate:
    """C_U = sum_n P_{n,n} (x) U_n with one unitary block per control level."""

    blocks: Tuple[np.ndarray, ...]
    tol: float = field(default=EXACT_TOL, repr=False)

    def __post_init__(self):
        blocks = tuple(np.asarray(b, dtype=np.complex128) for b in self.blocks)
        d = len(blocks)
        _check_d(d)
        for n, b in enumerate(blocks):
            if b.shape != (d, d):
                raise DimensionError(f"block {n} has shape {b.shape}, expected ({d}, {d})")
            _require_unitary_block(b, n, self.tol)
            b.setflags(write=False)
        object.__setattr__(self, "blocks", blocks)

    @property
    def d(self) -> int:
        return len(self.blocks)

    @classmethod
    def random(cls, d: int, rng: np.random.Generator) -> "ControlledGate":
        """Independent Haar-random blocks."""
        d = _check_d(d)
        return cls(tuple(haar_random_unitary(d, rng).data for _ in range(d)))

    @classmethod
    def random_orthogonal(cls, d: int, rng: np.random.Generator) -> "ControlledGate":
        """Blocks V X^n W: pairwise orthogonal under the Hilbert-Schmidt product."""
        d = _check_d(d)
        v = haar_random_unitary(d, rng).data
        w = haar_random_unitary(d, rng).data
        x = shift_x(d).data
        return cls(tuple(v @ np.linalg.matrix_power(x, n) @ w for n in range(d)))

    def operator(self) -> MultipartiteOperator:
        return controlled_u(self.blocks)


def controlled_u(blocks: Sequence[np.ndarray]) -> MultipartiteOperator:
    blocks = [np.asarray(b.data if isinstance(b, MultipartiteOperator) else b) for b in blocks]
    d = _check_d(len(blocks))
    out = np.zeros((d * d, d * d), dtype=np.complex128)
    for n, b in enumerate(blocks):
        if b.shape != (d, d):
            raise DimensionError(f"block {n} has shape {b.shape}, expected ({d}, {d})")
        _require_unitary_block(b, n)
        out[n * d:(n + 1) * d, n * d:(n + 1) * d] = b
    return MultipartiteOperator(out, (d, d))


def cphase(d: int) -> MultipartiteOperator:
    """sum_n P_{n,n} (x) Z^n"""
    z = clock_z(d)
    return controlled_u([matrix_power(z, n).data for n in range(z.dim)])


def swap_builder(total_dims: Sequence[int], i: int, j: int) -> MultipartiteOperator:
    """S_ij on a register of ``total_dims`` (0-based positions)."""
    total_dims = check_dims(total_dims)
    i, j = check_positions((i, j), len(total_dims))
    if total_dims[i] != total_dims[j]:
        raise DimensionError(
            f"cannot swap systems of dimension {total_dims[i]} and {total_dims[j]}"
        )
    perm = list(range(len(total_dims)))
    perm[i], perm[j] = perm[j], perm[i]
    return permutation_operator(total_dims, perm)


def swap_pair(
    total_dims: Sequence[int], first: Tuple[int, int], second: Tuple[int, int]
) -> MultipartiteOperator:
    """S_ik S_jl for first = (i, k), second = (j, l)."""
    return swap_builder(total_dims, *first) @ swap_builder(total_dims, *second)


def swap(d: int) -> MultipartiteOperator:
    d = _check_d(d)
    return swap_builder((d, d), 0, 1)


def sum_gate(d: int, direction: str = "12") -> MultipartiteOperator:
    """SUM(1->2)|m,n> = |m, m+n mod d>; direction "21" is its system-swapped image."""
    x = shift_x(d)
    forward = controlled_u([matrix_power(x, n).data for n in range(x.dim)])
    if direction == "12":
        return forward
    if direction == "21":
        return permute_systems(forward, (1, 0))
    raise ValueError(f"unknown SUM direction {direction!r}; use '12' or '21'")


def dsum(d: int) -> MultipartiteOperator:
    """SUM^-1(2->1) SUM(1->2)"""
    return sum_gate(d, "21").adjoint() @ sum_gate(d, "12")


def spin_gate(theta: float, d: int) -> MultipartiteOperator:
    """U(theta) = exp(i theta N (x) N): diagonal with entries exp(i theta m n)."""
    d = _check_d(d)
    theta = float(theta)
    if not math.isfinite(theta):
        raise DomainError(f"theta must be finite, got {theta!r}")
    n = np.arange(d)
    return MultipartiteOperator(np.diag(np.exp(1j * theta * np.outer(n, n).reshape(-1))), (d, d))


def local_gate(op: MultipartiteOperator, position: int = 0) -> MultipartiteOperator:
    """A one-qudit gate placed on ``position`` of a two-qudit register."""
    d = op.dim
    return embed(op, (d, d), (position,))


def phase_deviation(a: MultipartiteOperator, b: MultipartiteOperator, exact: bool = False) -> float:
    """max |a - e^{i phi} b| entrywise, phi fitted from <b, a> (phi = 0 when ``exact``)."""
    a, b = as_operator(a), as_operator(b)
    if a.data.shape != b.data.shape:
        raise DimensionError(f"cannot compare shapes {a.data.shape} and {b.data.shape}")
    phase = 1.0
    if not exact:
        overlap = np.vdot(b.data, a.data)
        if abs(overlap) > 0.0:
            phase = overlap / abs(overlap)
    return float(np.max(np.abs(a.data - phase * b.data)))


def local_product(
    a: Optional[MultipartiteOperator], b: Optional[MultipartiteOperator]
) -> MultipartiteOperator:
    """A (x) B on a two-qudit register; None stands for the identity."""
    if a is None and b is None:
        raise ValueError("local_product needs at least one factor")
    d = (a if a is not None else b).dim
    a = a if a is not None else MultipartiteOperator.identity((d,))
    b = b if b is not None else MultipartiteOperator.identity((d,))
    return kron(a, b)


def equal_up_to_phase(
    a: MultipartiteOperator, b: MultipartiteOperator, tol: float = EXACT_TOL, exact: bool = False
) -> bool:
    """Entrywise equality, modulo a global phase unless ``exact``."""
    a, b = as_operator(a), as_operator(b)
    if a.data.shape != b.data.shape:
        return False
    return phase_deviation(a, b, exact) <= tol


# Gate specifications (canonical text form used by the CLI)


class GateKind(str, Enum):
    IDENTITY = "identity"
    X = "x"
    Z = "z"
    FOURIER = "fourier"
    CPHASE = "cphase"
    SUM = "sum"
    DSUM = "dsum"
    SWAP = "swap"
    CONTROLLED = "controlled"
    SPIN = "spin"


_THETA_PI = re.compile(r"^\s*([+-]?\d*\.?\d*)\s*\*?\s*pi\s*(?:/\s*(\d*\.?\d+))?\s*$")


def parse_theta(text: str) -> float:
    """Decimal radians, or ``[a]pi[/b]`` (e.g. ``pi``, ``2pi/3``, ``0.5*pi``)."""
    m = _THETA_PI.match(text.lower())
    if m:
        coeff = m.group(1)
        a = 1.0 if coeff in ("", "+") else -1.0 if coeff == "-" else float(coeff)
        b = float(m.group(2)) if m.group(2) else 1.0
        return a * math.pi / b
    try:
        return float(text)
    except ValueError:
        raise DomainError(f"cannot parse angle {text!r}") from None


@dataclass(frozen=True, eq=False)
class GateSpec:
    kind: GateKind
    d: int
    direction: str = "12"
    theta: Optional[float] = None
    source: Optional[str] = None
    blocks: Optional[ControlledGate] = None

    def __post_init__(self):
        object.__setattr__(self, "kind", GateKind(self.kind))
        object.__setattr__(self, "d", _check_d(self.d))
        if self.kind is GateKind.SPIN and self.theta is None:
            raise ValueError("spin gate needs theta")
        if self.kind is GateKind.CONTROLLED:
            if self.blocks is None:
                raise ValueError("controlled gate needs blocks")
            if self.blocks.d != self.d:
                raise DimensionError(
                    f"controlled blocks have d={self.blocks.d}, spec asks for d={self.d}"
                )

    @classmethod
    def parse(cls, text: str, d: Optional[int] = None) -> "GateSpec":
        """``sum``, ``sum:21``, ``dsum``, ``swap``, ``cphase``, ``spin:<theta>``,
        ``controlled:<file>``, ``identity``, ``x``, ``z``, ``fourier``."""
        name, _, arg = text.strip().partition(":")
        name = name.lower()
        try:
            kind = GateKind(name)
        except ValueError:
            raise ValueError(f"unknown gate {text!r}") from None
        if kind is GateKind.CONTROLLED:
            gate = load_controlled_file(arg)
            if d is not None and d != gate.d:
                raise DimensionError(f"{arg} holds a d={gate.d} gate, requested d={d}")
            return cls(kind, gate.d, source=arg, blocks=gate)
        if d is None:
            raise ValueError(f"gate {text!r} needs a dimension")
        if kind is GateKind.SPIN:
            if not arg:
                raise ValueError("spin gate needs an angle, e.g. spin:pi/2")
            return cls(kind, d, theta=parse_theta(arg), source=arg)
        if kind is GateKind.SUM and arg:
            direction = arg.replace("->", "")
            if direction not in ("12", "21"):
                raise ValueError(f"unknown SUM direction {arg!r}")
            return cls(kind, d, direction=direction)
        if arg:
            raise ValueError(f"gate {name!r} takes no argument")
        return cls(kind, d)

    def __str__(self) -> str:
        if self.kind is GateKind.SPIN:
            return f"spin:{self.source if self.source else repr(self.theta)}"
        if self.kind is GateKind.CONTROLLED:
            return f"controlled:{self.source}"
        if self.kind is GateKind.SUM and self.direction != "12":
            return f"sum:{self.direction}"
        return self.kind.value

    def build(self) -> MultipartiteOperator:
        d = self.d
        if self.kind is GateKind.IDENTITY:
            return identity_gate(d)
        if self.kind is GateKind.X:
            return local_gate(shift_x(d))
        if self.kind is GateKind.Z:
            return local_gate(clock_z(d))
        if self.kind is GateKind.FOURIER:
            return local_gate(fourier(d))
        if self.kind is GateKind.CPHASE:
            return cphase(d)
        if self.kind is GateKind.SUM:
            return sum_gate(d, self.direction)
        if self.kind is GateKind.DSUM:
            return dsum(d)
        if self.kind is GateKind.SWAP:
            return swap(d)
        if self.kind is GateKind.SPIN:
            return spin_gate(self.theta, d)
        return self.blocks.operator()

    @property
    def is_controlled(self) -> bool:
        """Block-diagonal in the control basis by construction."""
        return self.kind in (
            GateKind.IDENTITY,
            GateKind.Z,
            GateKind.CPHASE,
            GateKind.CONTROLLED,
            GateKind.SPIN,
        ) or (self.kind is GateKind.SUM and self.direction == "12")

    def controlled_gate(self) -> Optional[ControlledGate]:
        """The block list of a controlled gate, None for anything else."""
        if not self.is_controlled:
            return None
        if self.blocks is not None:
            return self.blocks
        full = self.build().data
        d = self.d
        return ControlledGate(tuple(full[n * d:(n + 1) * d, n * d:(n + 1) * d] for n in range(d)))


def load_controlled_file(path: str) -> ControlledGate:
    """Read d, then d blocks of d rows of d ``re im`` pairs (blank lines ignored)."""
    p = Path(path)
    if not p.exists():
        raise ValueError(f"controlled gate file not found: {path}")
    lines = [ln.split() for ln in p.read_text(encoding="utf-8").splitlines() if ln.strip()]
    if not lines or len(lines[0]) != 1:
        raise ValueError(f"{path}: first line must hold the dimension d")
    d = _check_d(int(lines[0][0]))
    rows = lines[1:]
    if len(rows) != d * d:
        raise ValueError(f"{path}: expected {d * d} matrix rows, found {len(rows)}")
    blocks: List[np.ndarray] = []
    for n in range(d):
        block = np.zeros((d, d), dtype=np.complex128)
        for r in range(d):
            tokens = rows[n * d + r]
            if len(tokens) != 2 * d:
                raise ValueError(
                    f"{path}: block {n} row {r} has {len(tokens)} numbers, expected {2 * d}"
                )
            values = [float(t) for t in tokens]
            block[r] = np.array(values[0::2]) + 1j * np.array(values[1::2])
        blocks.append(block)
    logger.debug("Loaded %d-level controlled gate from %s", d, path)
    return ControlledGate(tuple(blocks))


def write_controlled_file(gate: ControlledGate, path: str) -> None:
    """Inverse of :func:`load_controlled_file`; floats written with repr()."""
    out = [str(gate.d)]
    for block in gate.blocks:
        for row in block:
            out.append(" ".join(f"{float(z.real)!r} {float(z.imag)!r}" for z in row))
        out.append("")
    Path(path).write_text("\n".join(out), encoding="utf-8")


__all__ = [
    "ControlledGate",
    "GateKind",
    "GateSpec",
    "clock_z",
    "controlled_u",
    "cphase",
    "dsum",
    "equal_up_to_phase",
    "fourier",
    "haar_random_unitary",
    "identity_gate",
    "load_controlled_file",
    "local_gate",
    "local_product",
    "matrix_power",
    "parse_theta",
    "phase_deviation",
    "projector",
    "shift_x",
    "spin_gate",
    "sum_gate",
    "swap",
    "swap_builder",
    "swap_pair",
    "write_controlled_file",
]
