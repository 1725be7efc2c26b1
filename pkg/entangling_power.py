"""
entangling_power.py

Entangling power of two-qudit gates, unassisted and ancilla-assisted:

 - Haar trace formulas evaluated by doubled-space contraction (``*_trace``)
 - decompositions into operator entanglements of U, U S and S (``*_schmidt``)
 - exact closed forms for SUM / CPHASE / DSUM / SWAP
 - Monte Carlo averages over Haar product inputs (linear or von Neumann)
 - a witnessed lower bound on the maximal von Neumann entanglement generation

The assisted register is (A', A, B, B') = positions (0, 1, 2, 3) with the gate
acting on (1, 2) and the entanglement cut (01)|(23).
"""

import logging
import math
import time
from dataclasses import asdict, dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.optimize import minimize

try:
    from .tensor_core import (
        NUMERIC_TOL,
        Bipartition,
        CapExceededError,
        DimensionError,
        DomainError,
        MultipartiteOperator,
        embed,
    )
    from .state_entanglement import (
        PureState,
        batch_linear_entropy,
        batch_schmidt_spectra,
        batch_von_neumann_entropy,
        haar_random_vector,
        maximally_entangled_pair,
        schmidt_weights,
        von_neumann_entropy_of,
    )
    from .gate_library import (
        ControlledGate,
        GateKind,
        GateSpec,
        fourier,
        swap,
        swap_pair,
    )
    from .operator_entanglement import (
        linear_operator_entanglement,
        require_unitary,
        swap_traces,
    )
    from .sampling_pool import map_chunks
except ImportError:
    from tensor_core import (
        NUMERIC_TOL,
        Bipartition,
        CapExceededError,
        DimensionError,
        DomainError,
        MultipartiteOperator,
        embed,
    )
    from state_entanglement import (
        PureState,
        batch_linear_entropy,
        batch_schmidt_spectra,
        batch_von_neumann_entropy,
        haar_random_vector,
        maximally_entangled_pair,
        schmidt_weights,
        von_neumann_entropy_of,
    )
    from gate_library import (
        ControlledGate,
        GateKind,
        GateSpec,
        fourier,
        swap,
        swap_pair,
    )
    from operator_entanglement import (
        linear_operator_entanglement,
        require_unitary,
        swap_traces,
    )
    from sampling_pool import map_chunks

logger = logging.getLogger(__name__)

ASSISTED_TRACE_CAP = 3
ASSISTED_TRACE_HARD_CAP = 4
DEFAULT_CHUNK_SIZE = 256
ASSISTED_SPLIT = Bipartition.from_left((0, 1), 4)


class Method(str, Enum):
    TRACE = "trace"
    SCHMIDT = "schmidt"
    MONTE_CARLO = "monte-carlo"
    CLOSED_FORM = "closed-form"

    @classmethod
    def parse(cls, text: str) -> "Method":
        text = text.strip().lower()
        if text == "mc":
            return cls.MONTE_CARLO
        return cls(text)


class EntropyKind(str, Enum):
    LINEAR = "linear"
    VON_NEUMANN = "von-neumann"
    BAR = "bar"


def two_qudit(u) -> MultipartiteOperator:
    """A gate on two systems; a bare d^2 x d^2 array is read as (d, d)."""
    if isinstance(u, MultipartiteOperator):
        op = u
    else:
        arr = np.asarray(u)
        d = math.isqrt(arr.shape[0])
        if d * d != arr.shape[0]:
            raise DimensionError(
                f"cannot read a {arr.shape[0]}-dimensional matrix as two equal qudits"
            )
        op = MultipartiteOperator(arr, (d, d))
    if op.num_systems != 2:
        raise DimensionError(f"expected a two-system gate, got dims {op.dims}")
    return op


def _equal_dims(u: MultipartiteOperator) -> int:
    d1, d2 = u.dims
    if d1 != d2:
        raise DimensionError(f"this route needs d1 == d2, got {d1} x {d2}")
    return d1


def assisted_register(u) -> MultipartiteOperator:
    """I (x) U (x) I on (A', A, B, B')."""
    u = two_qudit(u)
    d1, d2 = u.dims
    return embed(u, (d1, d1, d2, d2), (1, 2))


@lru_cache(maxsize=None)
def _swap_reference(d: int) -> Tuple[MultipartiteOperator, float]:
    s = swap(d)
    return s, linear_operator_entanglement(s)


@lru_cache(maxsize=None)
def _double_swap_reference(d: int) -> Tuple[MultipartiteOperator, float]:
    p = swap_pair((d, d, d, d), (0, 2), (1, 3))
    return p, linear_operator_entanglement(p, ASSISTED_SPLIT)


def _haar_trace_power(op: MultipartiteOperator, split: Optional[Bipartition] = None) -> float:
    """1 - [d1 d2^2 + d2 d1^2 + Tr(..S13..S13) + Tr(..S24..S13)] / (d1(d1+1) d2(d2+1))"""
    same, cross = swap_traces(op, split)
    if split is None:
        d1, d2 = op.dims
    else:
        d1, d2 = split.side_dims(op.dims)
    numerator = d1 * d2 * d2 + d2 * d1 * d1 + same + cross
    return 1.0 - numerator / (d1 * (d1 + 1) * d2 * (d2 + 1))


def ep_unassisted_trace(u) -> float:
    u = require_unitary(two_qudit(u))
    value = _haar_trace_power(u)
    logger.debug("e_p trace route on dims %s: %r", u.dims, value)
    return value


def ep_unassisted_schmidt(u) -> float:
    """(d/(d+1))^2 [E(U) + E(U S12) - E(S12)]"""
    u = require_unitary(two_qudit(u))
    d = _equal_dims(u)
    s, e_swap = _swap_reference(d)
    factor = (d / (d + 1)) ** 2
    return factor * (linear_operator_entanglement(u) + linear_operator_entanglement(u @ s) - e_swap)


def ep_assisted_schmidt(u) -> float:
    """(d^2/(d^2+1))^2 [E(U) + E(U S13 S24) - E(S13 S24)] across (01)|(23)."""
    u = require_unitary(two_qudit(u))
    d = _equal_dims(u)
    w = assisted_register(u)
    p, e_pair = _double_swap_reference(d)
    factor = (d * d / (d * d + 1)) ** 2
    return factor * (
        linear_operator_entanglement(w, ASSISTED_SPLIT)
        + linear_operator_entanglement(w @ p, ASSISTED_SPLIT)
        - e_pair
    )


def ep_assisted_trace(u, cap: int = ASSISTED_TRACE_CAP) -> float:
    """Haar trace formula on the doubled register of I (x) U (x) I, cut (01)|(23)."""
    u = require_unitary(two_qudit(u))
    if max(u.dims) > cap:
        raise CapExceededError(
            f"assisted trace route is capped at d <= {cap}, got dims {u.dims}"
        )
    value = _haar_trace_power(assisted_register(u), ASSISTED_SPLIT)
    logger.debug("e_p^anc trace route on dims %s: %r", u.dims, value)
    return value


def bar_transform(e: float) -> float:
    """-ln(1 - e), defined for 0 <= e < 1."""
    if not 0.0 <= e < 1.0:
        raise DomainError(f"bar transform needs 0 <= e < 1, got {e!r}")
    return -math.log1p(-e)


# Monte Carlo


@dataclass(frozen=True)
class MonteCarloEstimate:
    estimate: float
    stderr: float
    samples: int
    seed: int


def _sample_chunk(op_data, d_left, d_right, entropy, children) -> np.ndarray:
    vectors = np.empty((len(children), d_left * d_right), dtype=np.complex128)
    for k, child in enumerate(children):
        rng = np.random.default_rng(child)
        a = haar_random_vector(d_left, rng)
        b = haar_random_vector(d_right, rng)
        vectors[k] = np.kron(a, b)
    weights = batch_schmidt_spectra(vectors @ op_data.T, d_left, d_right)
    if entropy is EntropyKind.LINEAR:
        return batch_linear_entropy(weights)
    return batch_von_neumann_entropy(weights)


def ep_monte_carlo(
    u,
    assisted: bool = False,
    entropy: Union[str, EntropyKind] = EntropyKind.LINEAR,
    samples: int = 20000,
    seed: int = 0,
    workers: int = 1,
    chunk_size: int = DEFAULT_CHUNK_SIZE,
) -> MonteCarloEstimate:
    """Average output entanglement over Haar product inputs.

    Sample i draws from the stream SeedSequence(seed).spawn(samples)[i], so the
    estimate depends only on (seed, samples).
    """
    entropy = EntropyKind(entropy)
    if entropy is EntropyKind.BAR:
        raise ValueError("Monte Carlo estimates linear or von Neumann entropy only")
    if samples < 2:
        raise ValueError(f"need at least 2 samples, got {samples}")
    u = require_unitary(two_qudit(u))
    d1, d2 = u.dims
    if assisted:
        op_data, d_left, d_right = assisted_register(u).data, d1 * d1, d2 * d2
    else:
        op_data, d_left, d_right = u.data, d1, d2

    children = np.random.SeedSequence(seed).spawn(samples)
    chunks = [
        (op_data, d_left, d_right, entropy, children[start:start + chunk_size])
        for start in range(0, samples, chunk_size)
    ]
    logger.info(
        "Monte Carlo: %d samples, seed %d, %d chunk(s), %d worker(s), assisted=%s, %s",
        samples, seed, len(chunks), workers, assisted, entropy.value,
    )
    values = np.concatenate(map_chunks(_sample_chunk, chunks, workers))
    estimate = math.fsum(values) / samples
    stderr = float(np.std(values, ddof=1)) / math.sqrt(samples)
    return MonteCarloEstimate(estimate, stderr, samples, int(seed))


# Maximal entanglement generation


@dataclass(frozen=True, eq=False)
class MaxEntanglementEstimate:
    """Best von Neumann output entropy found, with the input that achieves it."""

    value: float
    left: PureState
    right: PureState
    evaluations: int


def _output_entropy(op_data, a, b, d_left, d_right) -> float:
    out = op_data @ np.kron(a, b)
    s = np.linalg.svd(out.reshape(d_left, d_right), compute_uv=False)
    return von_neumann_entropy_of(schmidt_weights(s))


def _local_candidates(d: int) -> List[np.ndarray]:
    eye = np.eye(d, dtype=np.complex128)
    f = fourier(d).data
    return [eye[k] for k in range(d)] + [f[:, k] for k in range(d)]


def _side_candidates(d: int, assisted: bool, ancilla_first: bool) -> List[np.ndarray]:
    local = _local_candidates(d)
    if not assisted:
        return local
    zero = np.eye(d, dtype=np.complex128)[0]
    pairs = [np.kron(zero, s) if ancilla_first else np.kron(s, zero) for s in local]
    return pairs + [maximally_entangled_pair(d).amplitudes]


def _unpack(x: np.ndarray, d_left: int, d_right: int) -> Tuple[np.ndarray, np.ndarray]:
    a = x[:d_left] + 1j * x[d_left:2 * d_left]
    b = x[2 * d_left:2 * d_left + d_right] + 1j * x[2 * d_left + d_right:]
    na, nb = np.linalg.norm(a), np.linalg.norm(b)
    if na == 0.0 or nb == 0.0:
        return a, b
    return a / na, b / nb


def _pack(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.concatenate([a.real, a.imag, b.real, b.imag])


def max_entanglement_estimate(
    u,
    assisted: bool = False,
    restarts: int = 4,
    iterations: int = 200,
    seed: int = 0,
) -> MaxEntanglementEstimate:
    """Lower bound on max over product inputs of the output von Neumann entropy.

    Structured inputs (computational and Fourier basis states, plus maximally
    entangled ancilla pairs when assisted) are scored first; the two best and
    ``restarts`` Haar-random inputs are then polished by L-BFGS. The reported
    value is always re-evaluated on the stored witness.
    """
    u = require_unitary(two_qudit(u))
    d1, d2 = u.dims
    if assisted:
        op_data, d_left, d_right = assisted_register(u).data, d1 * d1, d2 * d2
    else:
        op_data, d_left, d_right = u.data, d1, d2

    best = (-1.0, None, None)
    evaluations = 0

    def consider(a, b):
        nonlocal best, evaluations
        evaluations += 1
        value = _output_entropy(op_data, a, b, d_left, d_right)
        if value > best[0]:
            best = (value, a, b)
        return value

    scored = []
    for a in _side_candidates(d1, assisted, ancilla_first=True):
        for b in _side_candidates(d2, assisted, ancilla_first=False):
            scored.append((consider(a, b), a, b))
    scored.sort(key=lambda item: -item[0])
    starts = [(a, b) for _, a, b in scored[:2]]

    rng = np.random.default_rng(seed)
    for _ in range(restarts):
        starts.append((haar_random_vector(d_left, rng), haar_random_vector(d_right, rng)))

    def objective(x):
        a, b = _unpack(x, d_left, d_right)
        if not (np.linalg.norm(a) and np.linalg.norm(b)):
            return 0.0
        return -_output_entropy(op_data, a, b, d_left, d_right)

    for a, b in starts:
        res = minimize(objective, _pack(a, b), method="L-BFGS-B", options={"maxiter": iterations})
        a_opt, b_opt = _unpack(res.x, d_left, d_right)
        if np.linalg.norm(a_opt) and np.linalg.norm(b_opt):
            consider(a_opt, b_opt)

    value, a, b = best
    left_dims = (d1, d1) if assisted else (d1,)
    right_dims = (d2, d2) if assisted else (d2,)
    estimate = MaxEntanglementEstimate(
        value,
        PureState.from_vector(a, left_dims),
        PureState.from_vector(b, right_dims),
        evaluations,
    )
    logger.info(
        "Max entanglement estimate (assisted=%s): %r after %d evaluations",
        assisted, value, evaluations,
    )
    return estimate


# Closed forms


_CLOSED_FORM_KINDS = {
    GateKind.SUM: GateKind.SUM,
    GateKind.CPHASE: GateKind.SUM,
    GateKind.DSUM: GateKind.DSUM,
    GateKind.SWAP: GateKind.SWAP,
}


@dataclass(frozen=True)
class ClosedForm:
    kind: GateKind
    d: int
    assisted: bool
    value: Fraction

    def as_float(self) -> float:
        return float(self.value)

    def bar(self) -> float:
        """-ln(1 - e) from the exact 1 - e."""
        return -math.log(float(1 - self.value))


def _closed_form_kind(kind) -> GateKind:
    kind = GateKind(kind)
    if kind not in _CLOSED_FORM_KINDS:
        raise ValueError(f"no closed form for gate {kind.value!r}; use sum, cphase, dsum or swap")
    return _CLOSED_FORM_KINDS[kind]


def closed_form_power(kind, d: int, assisted: bool = False) -> ClosedForm:
    row = _closed_form_kind(kind)
    if d < 2:
        raise DimensionError(f"qudit dimension must be >= 2, got {d}")
    d2 = d * d
    if not assisted:
        value = Fraction(0) if row is GateKind.SWAP else Fraction(d * (d - 1), (d + 1) ** 2)
    elif row is GateKind.SUM:
        value = Fraction(d ** 3 * (d - 1), (d2 + 1) ** 2)
    elif row is GateKind.DSUM:
        value = Fraction(d ** 4 - d2 - d + 1, (d2 + 1) ** 2)
    else:
        value = Fraction((d2 - 1) ** 2, (d2 + 1) ** 2)
    return ClosedForm(GateKind(kind), d, assisted, value)


def closed_form_operator_entanglement(kind, d: int) -> Fraction:
    row = _closed_form_kind(kind)
    return 1 - Fraction(1, d) if row is GateKind.SUM else 1 - Fraction(1, d * d)


def closed_form_bar(kind, d: int, assisted: bool = False) -> float:
    return closed_form_power(kind, d, assisted).bar()


def proposition_predictions(e_op: float, d: int) -> Tuple[float, float]:
    """(e_p, e_p^anc) of a controlled gate with operator entanglement ``e_op``."""
    return (d / (d + 1)) ** 2 * e_op, (d * d / (d * d + 1)) ** 2 * e_op


# Verification reports


@dataclass(frozen=True)
class Check:
    name: str
    value: Optional[float]
    expected: Optional[float]
    tolerance: float
    passed: bool
    d: Optional[int] = None
    detail: str = ""

    @classmethod
    def close(cls, name, value, expected, tolerance, d=None, detail="") -> "Check":
        ok = value is not None and expected is not None and abs(value - expected) <= tolerance
        return cls(name, value, expected, tolerance, bool(ok), d, detail)

    @classmethod
    def at_least(cls, name, value, bound, tolerance=0.0, d=None, detail="") -> "Check":
        return cls(name, value, bound, tolerance, bool(value + tolerance >= bound), d, detail)

    @property
    def deviation(self) -> Optional[float]:
        if self.value is None or self.expected is None:
            return None
        return abs(self.value - self.expected)

    def as_dict(self) -> Dict:
        out = asdict(self)
        out["deviation"] = self.deviation
        return out


@dataclass(frozen=True)
class Prop1Report:
    d: int
    controlled: bool
    checks: Tuple[Check, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def _is_block_diagonal(u: MultipartiteOperator, tol: float) -> bool:
    d = u.dims[0]
    t = u.data.reshape(d, d, d, d)
    off = t.copy()
    for n in range(d):
        off[n, :, n, :] = 0.0
    return bool(np.max(np.abs(off)) <= tol)


def prop1_check(
    gate: Union[ControlledGate, GateSpec, MultipartiteOperator],
    tol: float = NUMERIC_TOL,
    trace_cap: int = ASSISTED_TRACE_CAP,
) -> Prop1Report:
    """Proportionality of e_p and e_p^anc to E(C_U), and the two swap-product identities.

    Non-controlled input is accepted and reported as such; the proportionality
    checks are then expected to fail.
    """
    if isinstance(gate, ControlledGate):
        u, controlled = gate.operator(), True
    elif isinstance(gate, GateSpec):
        u, controlled = gate.build(), gate.is_controlled
    else:
        u = two_qudit(gate)
        controlled = _is_block_diagonal(u, tol)
    d = _equal_dims(u)
    s, _ = _swap_reference(d)
    p, _ = _double_swap_reference(d)

    e_op = linear_operator_entanglement(u)
    ep = ep_unassisted_schmidt(u)
    ep_anc = ep_assisted_schmidt(u)
    d2 = d * d
    ratio = ep_anc / ep if ep > tol else None
    expected_ratio = ((d2 + d) / (d2 + 1)) ** 2
    if ratio is None and controlled:
        # a local controlled gate: e_p = e_p^anc = 0, the ratio has no value
        ratio_check = Check("enhancement_ratio", None, expected_ratio, tol, True, d, "undefined for e_p = 0")
    else:
        ratio_check = Check.close("enhancement_ratio", ratio, expected_ratio, tol, d)
    checks = [
        Check.close("ep_proportional", ep * ((d + 1) / d) ** 2, e_op, tol, d),
        Check.close("ep_anc_proportional", ep_anc * ((d2 + 1) / d2) ** 2, e_op, tol, d),
        ratio_check,
        Check.close("E(C_U S12)", linear_operator_entanglement(u @ s), 1 - 1 / d2, tol, d),
        Check.close(
            "E(C_U S13 S24)",
            linear_operator_entanglement(assisted_register(u) @ p, ASSISTED_SPLIT),
            1 - 1 / d2 ** 2,
            tol,
            d,
        ),
        Check.close("ep_routes_agree", ep_unassisted_trace(u), ep, tol, d),
    ]
    if d <= trace_cap:
        checks.append(Check.close("ep_anc_routes_agree", ep_assisted_trace(u, trace_cap), ep_anc, tol, d))
    report = Prop1Report(d, controlled, tuple(checks))
    if not report.passed and controlled:
        logger.warning("Proposition check failed for a controlled gate at d=%d", d)
    return report


@dataclass(frozen=True)
class BoundsReport:
    assisted: bool
    e_linear: float
    e_bar: float
    mc: MonteCarloEstimate
    e_max: MaxEntanglementEstimate
    checks: Tuple[Check, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def bounds_check(
    u,
    assisted: bool = False,
    samples: int = 20000,
    seed: int = 0,
    workers: int = 1,
    restarts: int = 4,
    iterations: int = 200,
    chunk_size: int = DEFAULT_CHUNK_SIZE,
) -> BoundsReport:
    """e_p <= bar e_p <= e~_p <= E~_max, with e~_p from Monte Carlo (5 sigma slack)."""
    u = require_unitary(two_qudit(u))
    d = _equal_dims(u)
    e_lin = ep_assisted_schmidt(u) if assisted else ep_unassisted_schmidt(u)
    e_lin = max(0.0, e_lin)
    e_bar = bar_transform(e_lin)
    mc = ep_monte_carlo(u, assisted, EntropyKind.VON_NEUMANN, samples, seed, workers, chunk_size)
    e_max = max_entanglement_estimate(u, assisted, restarts, iterations, seed)
    checks = (
        Check.at_least("bar_ge_linear", e_bar, e_lin, d=d),
        Check.at_least("vn_estimate_ge_bar", mc.estimate + 5 * mc.stderr, e_bar, d=d),
        Check.at_least("max_ge_vn_estimate", e_max.value, mc.estimate, 1e-9, d=d),
    )
    return BoundsReport(assisted, e_lin, e_bar, mc, e_max, checks)


# Asymptotics


# gate -> (unassisted leading term, its order), (assisted leading term, its order)
LEADING_TERMS = {
    GateKind.SUM: ((lambda d: math.log(d) - math.log(3), 1), (lambda d: math.log(d), 1)),
    GateKind.DSUM: (
        (lambda d: math.log(d) - math.log(3), 1),
        (lambda d: 2 * math.log(d) - math.log(3), 1),
    ),
    GateKind.SWAP: ((lambda d: 0.0, None), (lambda d: 2 * math.log(d) - math.log(4), 2)),
}


@dataclass(frozen=True)
class AsymptoticRow:
    gate: str
    d: int
    bar_ep: float
    leading: float
    residual: float
    bar_ep_anc: float
    leading_anc: float
    residual_anc: float
    shrinking: Optional[bool] = None
    vn_ep: Optional[float] = None
    vn_ep_anc: Optional[float] = None


def asymptotic_table(
    gates: Sequence = (GateKind.SUM, GateKind.DSUM, GateKind.SWAP),
    d_list: Sequence[int] = (2, 4, 8, 16, 32, 64),
    mc_samples: int = 0,
    mc_d_max: int = 4,
    seed: int = 0,
    workers: int = 1,
    chunk_size: int = DEFAULT_CHUNK_SIZE,
) -> List[AsymptoticRow]:
    """Closed-form bar e_p, bar e_p^anc against their leading terms.

    ``shrinking`` marks a row whose residuals are no larger in magnitude than
    the previous row's for the same gate (a residual that is exactly zero
    counts as shrinking). Monte Carlo von Neumann columns are filled for
    d <= ``mc_d_max`` when ``mc_samples`` is positive.
    """
    if list(d_list) != sorted(d_list):
        raise ValueError(f"d-list must be ascending, got {list(d_list)}")
    rows: List[AsymptoticRow] = []
    for kind in gates:
        kind = GateKind(kind)
        row_kind = _closed_form_kind(kind)
        (lead, _), (lead_anc, _) = LEADING_TERMS[row_kind]
        previous = None
        for d in d_list:
            bar = closed_form_bar(kind, d, False)
            bar_anc = closed_form_bar(kind, d, True)
            residual = bar - lead(d)
            residual_anc = bar_anc - lead_anc(d)
            shrinking = None
            if previous is not None:
                shrinking = (
                    abs(residual) <= abs(previous[0]) and abs(residual_anc) < abs(previous[1])
                )
            vn = vn_anc = None
            if mc_samples and d <= mc_d_max:
                gate = GateSpec(kind, d).build()
                vn = ep_monte_carlo(gate, False, EntropyKind.VON_NEUMANN, mc_samples, seed, workers, chunk_size).estimate
                vn_anc = ep_monte_carlo(gate, True, EntropyKind.VON_NEUMANN, mc_samples, seed, workers, chunk_size).estimate
            rows.append(
                AsymptoticRow(
                    kind.value, d, bar, lead(d), residual, bar_anc, lead_anc(d),
                    residual_anc, shrinking, vn, vn_anc,
                )
            )
            previous = (residual, residual_anc)
    return rows


# Report dispatch


@dataclass(frozen=True)
class PowerReport:
    gate: str
    d: int
    assisted: bool
    method: str
    entropy: str
    value: float
    stderr: Optional[float] = None
    samples: Optional[int] = None
    seed: Optional[int] = None
    runtime_ms: Optional[float] = None

    def __post_init__(self):
        is_mc = self.method == Method.MONTE_CARLO.value
        carried = (self.stderr is not None, self.samples is not None, self.seed is not None)
        if is_mc and not all(carried):
            raise ValueError("Monte Carlo reports carry stderr, samples and seed")
        if not is_mc and any(carried):
            raise ValueError("only Monte Carlo reports carry stderr, samples or seed")
        if self.value < -NUMERIC_TOL:
            raise DomainError(f"entangling power cannot be negative, got {self.value!r}")
        if self.entropy == EntropyKind.LINEAR.value and self.value >= 1.0:
            raise DomainError(f"linear-entropy power must be < 1, got {self.value!r}")
        if self.entropy == EntropyKind.VON_NEUMANN.value:
            # the smaller side of the output cut has dimension d, or d^2 with ancillas
            ceiling = (2.0 if self.assisted else 1.0) * math.log(self.d)
            if self.value > ceiling + NUMERIC_TOL:
                raise DomainError(
                    f"von Neumann power must be <= {ceiling!r} at d={self.d}, got {self.value!r}"
                )

    def as_dict(self) -> Dict:
        return asdict(self)


def compute_power(
    spec: GateSpec,
    assisted: bool = False,
    method: Union[str, Method] = Method.SCHMIDT,
    entropy: Union[str, EntropyKind] = EntropyKind.LINEAR,
    samples: int = 20000,
    seed: Optional[int] = None,
    workers: int = 1,
    chunk_size: int = DEFAULT_CHUNK_SIZE,
    trace_cap: int = ASSISTED_TRACE_CAP,
    timing: bool = False,
) -> PowerReport:
    method = Method.parse(method) if isinstance(method, str) else method
    entropy = EntropyKind(entropy)
    started = time.perf_counter()
    stderr = n = used_seed = None

    if method is Method.MONTE_CARLO:
        if entropy is EntropyKind.BAR:
            raise ValueError("bar entangling power is exact; use trace, schmidt or closed-form")
        if seed is None:
            raise ValueError("Monte Carlo needs a seed")
        mc = ep_monte_carlo(spec.build(), assisted, entropy, samples, seed, workers, chunk_size)
        value, stderr, n, used_seed = mc.estimate, mc.stderr, mc.samples, mc.seed
    else:
        if entropy is EntropyKind.VON_NEUMANN:
            raise ValueError("the von Neumann entangling power is only available by monte-carlo")
        if method is Method.CLOSED_FORM:
            value = closed_form_power(spec.kind, spec.d, assisted).as_float()
        elif method is Method.TRACE:
            u = spec.build()
            value = ep_assisted_trace(u, trace_cap) if assisted else ep_unassisted_trace(u)
        else:
            u = spec.build()
            value = ep_assisted_schmidt(u) if assisted else ep_unassisted_schmidt(u)
        if entropy is EntropyKind.BAR:
            value = bar_transform(max(0.0, value))

    runtime_ms = (time.perf_counter() - started) * 1000.0 if timing else None
    return PowerReport(
        str(spec), spec.d, assisted, method.value, entropy.value, value,
        stderr, n, used_seed, runtime_ms,
    )


__all__ = [
    "ASSISTED_TRACE_CAP",
    "ASSISTED_TRACE_HARD_CAP",
    "AsymptoticRow",
    "BoundsReport",
    "Check",
    "ClosedForm",
    "EntropyKind",
    "LEADING_TERMS",
    "MaxEntanglementEstimate",
    "Method",
    "MonteCarloEstimate",
    "PowerReport",
    "Prop1Report",
    "assisted_register",
    "asymptotic_table",
    "bar_transform",
    "bounds_check",
    "closed_form_bar",
    "closed_form_operator_entanglement",
    "closed_form_power",
    "compute_power",
    "ep_assisted_schmidt",
    "ep_assisted_trace",
    "ep_monte_carlo",
    "ep_unassisted_schmidt",
    "ep_unassisted_trace",
    "max_entanglement_estimate",
    "prop1_check",
    "proposition_predictions",
    "two_qudit",
]
