import math
from fractions import Fraction

import numpy as np
import pytest

from entangling_power import (
    ASSISTED_TRACE_CAP,
    EntropyKind,
    Method,
    PowerReport,
    asymptotic_table,
    bar_transform,
    bounds_check,
    closed_form_bar,
    closed_form_operator_entanglement,
    closed_form_power,
    compute_power,
    ep_assisted_schmidt,
    ep_assisted_trace,
    ep_monte_carlo,
    ep_unassisted_schmidt,
    ep_unassisted_trace,
    max_entanglement_estimate,
    prop1_check,
    proposition_predictions,
    two_qudit,
)
from gate_library import (
    ControlledGate,
    GateKind,
    GateSpec,
    cphase,
    dsum,
    haar_random_unitary,
    local_product,
    sum_gate,
    swap,
)
from operator_entanglement import linear_operator_entanglement
from tensor_core import CapExceededError, DimensionError, DomainError, MultipartiteOperator

NAMED = ("sum", "cphase", "dsum", "swap")


@pytest.mark.parametrize("d", [2, 3, 4, 5])
@pytest.mark.parametrize("gate", NAMED)
def test_schmidt_routes_match_closed_forms(gate, d):
    u = GateSpec.parse(gate, d).build()
    assert abs(ep_unassisted_schmidt(u) - closed_form_power(gate, d).as_float()) <= 1e-10
    assert abs(ep_assisted_schmidt(u) - closed_form_power(gate, d, True).as_float()) <= 1e-10
    expected_e = float(closed_form_operator_entanglement(gate, d))
    assert abs(linear_operator_entanglement(u) - expected_e) <= 1e-10


@pytest.mark.parametrize(
    "gate, d, assisted, expected",
    [
        ("sum", 2, False, Fraction(2, 9)),
        ("sum", 3, False, Fraction(3, 8)),
        ("swap", 2, True, Fraction(9, 25)),
        ("sum", 2, True, Fraction(8, 25)),
        ("dsum", 2, True, Fraction(11, 25)),
        ("dsum", 3, True, Fraction(7, 10)),
        ("swap", 5, False, Fraction(0)),
    ],
)
def test_closed_form_values(gate, d, assisted, expected):
    assert closed_form_power(gate, d, assisted).value == expected


def test_closed_form_cphase_uses_sum_row():
    assert closed_form_power("cphase", 4).value == closed_form_power("sum", 4).value
    with pytest.raises(ValueError):
        closed_form_power("spin", 2)
    with pytest.raises(DimensionError):
        closed_form_power("sum", 1)


@pytest.mark.parametrize("d", [2, 3])
@pytest.mark.parametrize("gate", NAMED)
def test_trace_and_schmidt_routes_agree(gate, d):
    u = GateSpec.parse(gate, d).build()
    assert abs(ep_unassisted_trace(u) - ep_unassisted_schmidt(u)) <= 1e-10
    assert abs(ep_assisted_trace(u) - ep_assisted_schmidt(u)) <= 1e-10


def _haar_two_qudit(d, rng):
    return MultipartiteOperator(haar_random_unitary(d * d, rng).data, (d, d))


@pytest.mark.parametrize("d", [2, 3])
def test_routes_agree_on_random_unitaries(d, rng):
    for _ in range(50):
        u = _haar_two_qudit(d, rng)
        ep = ep_unassisted_schmidt(u)
        assert abs(ep_unassisted_trace(u) - ep) <= 1e-10
        assert 0.0 <= ep + 1e-12
        assert ep <= 1 - 1 / d + 1e-12


@pytest.mark.parametrize("d", [2, 3])
def test_assisted_routes_agree_on_random_unitaries(d, rng):
    for _ in range(5):
        u = _haar_two_qudit(d, rng)
        ep_anc = ep_assisted_schmidt(u)
        assert abs(ep_assisted_trace(u) - ep_anc) <= 1e-10
        assert 0.0 <= ep_anc < 1.0


@pytest.mark.parametrize("d", [2, 3])
def test_assisted_routes_agree_on_random_controlled_gates(d, rng):
    for _ in range(20):
        u = ControlledGate.random(d, rng).operator()
        assert abs(ep_assisted_trace(u) - ep_assisted_schmidt(u)) <= 1e-10


def test_power_is_unchanged_by_local_unitaries(rng):
    for d in (2, 3):
        for u in (_haar_two_qudit(d, rng), dsum(d)):
            before = local_product(haar_random_unitary(d, rng), haar_random_unitary(d, rng))
            after = local_product(haar_random_unitary(d, rng), haar_random_unitary(d, rng))
            dressed = before @ u @ after
            assert abs(ep_unassisted_schmidt(dressed) - ep_unassisted_schmidt(u)) <= 1e-10
            assert abs(ep_assisted_schmidt(dressed) - ep_assisted_schmidt(u)) <= 1e-10
            assert abs(ep_unassisted_trace(dressed) - ep_unassisted_trace(u)) <= 1e-10


def test_swap_has_exactly_zero_power():
    for d in (2, 3, 4):
        assert ep_unassisted_schmidt(swap(d)) == 0.0
        assert ep_unassisted_trace(swap(d)) == 0.0
        expected = ((d * d - 1) / (d * d + 1)) ** 2
        assert abs(ep_assisted_schmidt(swap(d)) - expected) <= 1e-10


def test_trace_route_on_unequal_dims(rng):
    u = MultipartiteOperator(haar_random_unitary(6, rng).data, (2, 3))
    value = ep_unassisted_trace(u)
    assert 0.0 <= value < 1.0
    with pytest.raises(DimensionError):
        ep_unassisted_schmidt(u)


def test_assisted_trace_cap():
    with pytest.raises(CapExceededError):
        ep_assisted_trace(sum_gate(ASSISTED_TRACE_CAP + 1))
    assert abs(ep_assisted_trace(sum_gate(4), cap=4) - ep_assisted_schmidt(sum_gate(4))) <= 1e-10


def test_two_qudit_reads_bare_arrays():
    assert two_qudit(np.eye(9)).dims == (3, 3)
    with pytest.raises(DimensionError):
        two_qudit(np.eye(6))
    with pytest.raises(DimensionError):
        two_qudit(MultipartiteOperator.identity((2, 2, 2)))


def test_bar_transform():
    assert bar_transform(0.0) == 0.0
    assert abs(bar_transform(2 / 9) - math.log(9 / 7)) <= 1e-12
    assert bar_transform(2 / 9) == pytest.approx(0.251314, abs=1e-6)
    assert abs(closed_form_bar("sum", 2) - math.log(9 / 7)) <= 1e-12
    for bad in (-0.1, 1.0, 1.5):
        with pytest.raises(DomainError):
            bar_transform(bad)


def test_bar_is_at_least_linear():
    for d in (2, 3, 8):
        for gate in ("sum", "dsum", "swap"):
            for assisted in (False, True):
                cf = closed_form_power(gate, d, assisted)
                assert cf.bar() >= cf.as_float()


@pytest.mark.parametrize("assisted", [False, True])
@pytest.mark.parametrize("d", [2, 3])
def test_monte_carlo_sum_estimate(d, assisted):
    mc = ep_monte_carlo(sum_gate(d), assisted=assisted, samples=20_000, seed=11)
    assert mc.samples == 20_000
    assert mc.seed == 11
    assert mc.stderr <= 0.005
    expected = closed_form_power("sum", d, assisted).as_float()
    assert abs(mc.estimate - expected) <= 5 * mc.stderr


def test_monte_carlo_swap_is_exactly_zero():
    mc = ep_monte_carlo(swap(2), samples=500, seed=3)
    assert mc.estimate == 0.0
    assert mc.stderr == 0.0
    vn = ep_monte_carlo(swap(3), entropy="von-neumann", samples=300, seed=3)
    assert vn.estimate == 0.0


def test_monte_carlo_is_independent_of_workers_and_chunking():
    base = ep_monte_carlo(dsum(2), samples=1000, seed=42, workers=1)
    threaded = ep_monte_carlo(dsum(2), samples=1000, seed=42, workers=3)
    assert base.estimate == threaded.estimate
    assert base.stderr == threaded.stderr
    rechunked = ep_monte_carlo(dsum(2), samples=1000, seed=42, chunk_size=100)
    assert abs(base.estimate - rechunked.estimate) <= 1e-15
    other = ep_monte_carlo(dsum(2), samples=1000, seed=43)
    assert other.estimate != base.estimate


def test_monte_carlo_argument_errors():
    with pytest.raises(ValueError):
        ep_monte_carlo(sum_gate(2), entropy="bar", samples=10)
    with pytest.raises(ValueError):
        ep_monte_carlo(sum_gate(2), samples=1)


def test_max_entanglement_known_values():
    for d in (2, 3):
        est = max_entanglement_estimate(sum_gate(d), restarts=1, iterations=50)
        assert abs(est.value - math.log(d)) <= 1e-6
        assert est.left.dims == (d,)
        assert est.evaluations > 0
        anc = max_entanglement_estimate(swap(d), assisted=True, restarts=1, iterations=50)
        assert abs(anc.value - 2 * math.log(d)) <= 1e-6
        assert anc.left.dims == (d, d)
        assert anc.right.dims == (d, d)


def test_max_entanglement_of_swap_without_ancilla():
    est = max_entanglement_estimate(swap(2), restarts=2, iterations=50)
    assert abs(est.value) <= 1e-9


def test_proposition_holds_for_named_controlled_gates():
    for d in (2, 3):
        for gate in (sum_gate(d), cphase(d)):
            report = prop1_check(gate)
            assert report.controlled
            assert report.passed, [c for c in report.checks if not c.passed]
            names = {c.name for c in report.checks}
            assert "ep_anc_routes_agree" in names


@pytest.mark.parametrize("d", [2, 3, 4])
def test_proposition_holds_for_random_controlled_gates(d):
    rng = np.random.default_rng(99 + d)
    for _ in range(100):
        report = prop1_check(ControlledGate.random(d, rng))
        assert report.passed, [c for c in report.checks if not c.passed]
        if d > ASSISTED_TRACE_CAP:
            assert "ep_anc_routes_agree" not in {c.name for c in report.checks}


@pytest.mark.parametrize("text", ["identity", "z", "spin:0"])
def test_proposition_accepts_local_controlled_gates(text):
    d = 3
    report = prop1_check(GateSpec.parse(text, d))
    assert report.controlled
    assert report.passed, [c for c in report.checks if not c.passed]
    by_name = {c.name: c for c in report.checks}
    assert by_name["enhancement_ratio"].value is None
    assert abs(by_name["E(C_U S12)"].value - 8 / 9) <= 1e-10
    assert abs(by_name["E(C_U S13 S24)"].value - 80 / 81) <= 1e-10


def test_proposition_predictions_match_closed_forms():
    for d in (2, 3, 5):
        ep, ep_anc = proposition_predictions(1 - 1 / d, d)
        assert abs(ep - closed_form_power("sum", d).as_float()) <= 1e-12
        assert abs(ep_anc - closed_form_power("sum", d, True).as_float()) <= 1e-12


def test_proposition_fails_for_swap():
    report = prop1_check(GateSpec.parse("swap", 2))
    assert not report.controlled
    assert not report.passed
    by_name = {c.name: c for c in report.checks}
    assert not by_name["ep_proportional"].passed
    assert by_name["enhancement_ratio"].value is None
    assert prop1_check(swap(3)).controlled is False


def test_bounds_chain():
    for gate in (sum_gate(2), dsum(2)):
        for assisted in (False, True):
            report = bounds_check(gate, assisted, samples=1500, seed=1, restarts=1, iterations=40)
            assert report.passed, [c for c in report.checks if not c.passed]
            assert report.e_bar >= report.e_linear


@pytest.mark.parametrize("gate", NAMED)
def test_bounds_chain_at_three_levels(gate):
    u = GateSpec.parse(gate, 3).build()
    for assisted in (False, True):
        report = bounds_check(u, assisted, samples=2000, seed=4, restarts=1, iterations=40)
        assert report.passed, [c for c in report.checks if not c.passed]


def test_asymptotic_bounds():
    rows = {(r.gate, r.d): r for r in asymptotic_table(d_list=(8, 16, 32))}
    for d in (8, 16, 32):
        assert abs(rows["sum", d].residual) <= 2 / d
        assert abs(rows["sum", d].residual_anc) <= 3 / d
        assert abs(rows["dsum", d].residual_anc) <= 3 / d
        assert abs(rows["swap", d].residual_anc) <= 4 / d**2
        assert rows["swap", d].residual == 0.0
    for gate in ("sum", "swap"):
        assert rows[gate, 8].shrinking is None
        assert rows[gate, 16].shrinking
        assert rows[gate, 32].shrinking
    # the assisted DSUM residual peaks near d = 16 before decaying like 1/(3d)
    assert not rows["dsum", 16].shrinking
    assert rows["dsum", 32].shrinking


def test_asymptotic_table_with_monte_carlo_columns():
    rows = asymptotic_table([GateKind.SUM], d_list=(2, 8), mc_samples=200, mc_d_max=2, seed=4)
    assert rows[0].vn_ep is not None and rows[0].vn_ep_anc is not None
    assert rows[1].vn_ep is None
    with pytest.raises(ValueError):
        asymptotic_table(d_list=(8, 4))


def test_compute_power_methods_agree():
    spec = GateSpec.parse("sum", 2)
    values = [compute_power(spec, method=m).value for m in ("schmidt", "trace", "closed-form")]
    for v in values:
        assert abs(v - 2 / 9) <= 1e-10
    bar = compute_power(spec, method="schmidt", entropy="bar")
    assert abs(bar.value - math.log(9 / 7)) <= 1e-10
    mc = compute_power(spec, method="mc", samples=400, seed=8)
    assert mc.method == Method.MONTE_CARLO.value
    assert mc.samples == 400 and mc.seed == 8 and mc.stderr is not None
    assert compute_power(spec, method="schmidt").seed is None
    assert compute_power(spec, timing=True).runtime_ms >= 0.0


def test_compute_power_errors():
    spec = GateSpec.parse("sum", 2)
    with pytest.raises(ValueError):
        compute_power(spec, method="mc", entropy="bar", seed=1)
    with pytest.raises(ValueError):
        compute_power(spec, method="mc")
    with pytest.raises(ValueError):
        compute_power(spec, method="schmidt", entropy=EntropyKind.VON_NEUMANN)
    with pytest.raises(ValueError):
        compute_power(GateSpec.parse("spin:pi", 2), method="closed-form")
    with pytest.raises(CapExceededError):
        compute_power(GateSpec.parse("sum", 4), assisted=True, method="trace")


def test_power_report_invariants():
    PowerReport("sum", 2, False, "schmidt", "linear", 0.2)
    with pytest.raises(ValueError):
        PowerReport("sum", 2, False, "schmidt", "linear", 0.2, stderr=0.01)
    with pytest.raises(ValueError):
        PowerReport("sum", 2, False, "monte-carlo", "linear", 0.2, stderr=0.01)
    with pytest.raises(DomainError):
        PowerReport("sum", 2, False, "schmidt", "linear", 1.0)
    with pytest.raises(DomainError):
        PowerReport("sum", 2, False, "schmidt", "linear", -0.5)
    PowerReport("sum", 2, False, "schmidt", "bar", 1.5)


def test_power_report_bounds_von_neumann_value():
    PowerReport("sum", 3, False, "monte-carlo", "von-neumann", math.log(3), 0.01, 100, 1)
    PowerReport("swap", 3, True, "monte-carlo", "von-neumann", 2 * math.log(3) - 1e-3, 0.01, 100, 1)
    with pytest.raises(DomainError):
        PowerReport("sum", 3, False, "monte-carlo", "von-neumann", 1.2, 0.01, 100, 1)
    with pytest.raises(DomainError):
        PowerReport("swap", 2, True, "monte-carlo", "von-neumann", 1.5, 0.01, 100, 1)
