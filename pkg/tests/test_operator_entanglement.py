import math

import numpy as np
import pytest

from gate_library import (
    cphase,
    dsum,
    fourier,
    haar_random_unitary,
    local_product,
    spin_gate,
    sum_gate,
    swap,
    swap_pair,
)
from operator_entanglement import (
    find_maxima,
    linear_op_ent_via_trace,
    linear_operator_entanglement,
    operator_schmidt,
    spin_A_matrix,
    spin_curve,
    spin_label,
    spin_linear_entanglement,
    spin_scan,
    swap_traces,
    theta_grid,
    uniform_spectrum_entanglement,
    von_neumann_operator_entanglement,
)
from tensor_core import Bipartition, MultipartiteOperator, NotUnitaryError, embed

PAIR_SPLIT = Bipartition.from_left((0, 1), 4)


def _random_two_qudit(d, rng):
    u = haar_random_unitary(d * d, rng)
    return MultipartiteOperator(u.data, (d, d))


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_named_gate_entanglement(d):
    assert abs(linear_operator_entanglement(sum_gate(d)) - (1 - 1 / d)) <= 1e-10
    assert abs(linear_operator_entanglement(cphase(d)) - (1 - 1 / d)) <= 1e-10
    assert abs(linear_operator_entanglement(dsum(d)) - (1 - 1 / d**2)) <= 1e-10
    assert abs(linear_operator_entanglement(swap(d)) - (1 - 1 / d**2)) <= 1e-10
    assert linear_operator_entanglement(MultipartiteOperator.identity((d, d))) == 0.0


@pytest.mark.parametrize("d", [2, 3, 4])
def test_schmidt_coefficients_of_sum_and_swap(d):
    s_sum = operator_schmidt(sum_gate(d))
    np.testing.assert_allclose(s_sum.coefficients[:d], np.full(d, np.sqrt(d)), atol=1e-12)
    assert s_sum.schmidt_number() == d
    s_swap = operator_schmidt(swap(d))
    np.testing.assert_allclose(s_swap.coefficients, np.ones(d * d), atol=1e-12)
    assert s_swap.schmidt_number() == d * d
    assert s_swap.norm_squared() == pytest.approx(d * d)


@pytest.mark.parametrize("d", [2, 3, 4])
def test_von_neumann_operator_entanglement(d):
    assert abs(von_neumann_operator_entanglement(swap(d)) - 2 * math.log(d)) <= 1e-10
    assert abs(von_neumann_operator_entanglement(sum_gate(d)) - math.log(d)) <= 1e-10
    assert uniform_spectrum_entanglement(d) == pytest.approx((1 - 1 / d, math.log(d)))


def test_local_gates_have_no_entanglement(rng):
    for d in (2, 3):
        local = local_product(haar_random_unitary(d, rng), haar_random_unitary(d, rng))
        assert linear_operator_entanglement(local) <= 1e-12
        assert von_neumann_operator_entanglement(local) <= 1e-10
        assert operator_schmidt(local).schmidt_number() == 1


def test_trace_route_agrees_with_schmidt_route(rng):
    for k in range(50):
        d = 2 if k % 2 else 3
        u = _random_two_qudit(d, rng)
        assert abs(linear_op_ent_via_trace(u) - linear_operator_entanglement(u)) <= 1e-10


def test_swap_traces_of_named_gates():
    d = 3
    same, cross = swap_traces(MultipartiteOperator.identity((d, d)))
    assert same == pytest.approx(d**4)
    assert cross == pytest.approx(d**2)
    same, cross = swap_traces(swap(d))
    assert same == pytest.approx(d**2)
    assert cross == pytest.approx(d**4)


def test_entanglement_properties_of_random_unitaries(rng):
    d = 3
    for _ in range(10):
        u = _random_two_qudit(d, rng)
        e = linear_operator_entanglement(u)
        assert 0.0 <= e <= 1 - 1 / d**2 + 1e-12
        assert abs(linear_operator_entanglement(u.adjoint()) - e) <= 1e-10
        assert operator_schmidt(u).norm_squared() == pytest.approx(d * d, abs=1e-10)
        local_a = local_product(haar_random_unitary(d, rng), haar_random_unitary(d, rng))
        local_b = local_product(haar_random_unitary(d, rng), haar_random_unitary(d, rng))
        assert abs(linear_operator_entanglement(local_a @ u @ local_b) - e) <= 1e-10


def test_non_unitary_is_rejected():
    with pytest.raises(NotUnitaryError):
        linear_operator_entanglement(MultipartiteOperator(2 * np.eye(4), (2, 2)))
    with pytest.raises(NotUnitaryError):
        von_neumann_operator_entanglement(MultipartiteOperator(np.ones((4, 4)), (2, 2)))


@pytest.mark.parametrize("d", [2, 3, 4])
def test_double_swap_and_dsum_on_pair_split(d):
    p = swap_pair((d,) * 4, (0, 2), (1, 3))
    assert abs(linear_operator_entanglement(p, PAIR_SPLIT) - (1 - 1 / d**4)) <= 1e-10
    w = embed(dsum(d), (d,) * 4, (1, 2))
    assert abs(linear_operator_entanglement(w, PAIR_SPLIT) - (1 - 1 / d**2)) <= 1e-10
    assert abs(linear_operator_entanglement(w @ p, PAIR_SPLIT) - (1 - 1 / d**3)) <= 1e-10


def test_spin_qubit_closed_form():
    for theta in np.linspace(0.0, 2 * np.pi, 37):
        expected = 0.5 * math.sin(theta / 2) ** 2
        assert abs(spin_linear_entanglement(theta, 2) - expected) <= 1e-10
        assert abs(linear_operator_entanglement(spin_gate(theta, 2)) - expected) <= 1e-10


def test_spin_reduced_matrix():
    for d in (2, 3, 5):
        a = spin_A_matrix(1.234, d)
        np.testing.assert_allclose(np.diag(a), np.full(d, 1 / d), atol=1e-14)
        np.testing.assert_allclose(a, a.conj().T, atol=1e-14)


def test_spin_curve_matches_generic_route():
    grid = np.linspace(0.0, 2 * np.pi, 9)
    for d in (2, 3, 4):
        curve = spin_curve(d, grid)
        for theta, value in zip(grid, curve):
            assert abs(value - linear_operator_entanglement(spin_gate(theta, d))) <= 1e-10
        assert abs(curve[0]) <= 1e-12
        assert abs(curve[-1] - curve[0]) <= 1e-12


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_spin_first_maximum(d):
    grid = theta_grid()
    found = find_maxima(d, grid, spin_curve(d, grid), periodic=True)
    assert found
    first = found[0]
    step = grid[1] - grid[0]
    assert abs(first.grid_theta - 2 * np.pi / d) <= step / 2 + 1e-12
    assert abs(first.value - (1 - 1 / d)) <= 1e-8
    assert first.value >= first.grid_value


def test_theta_grid_is_half_open():
    grid = theta_grid(2001)
    assert len(grid) == 2001
    assert grid[0] == 0.0
    assert grid[-1] < 2 * np.pi
    assert grid[-1] + (grid[1] - grid[0]) == pytest.approx(2 * np.pi)


def test_peak_between_two_nodes_is_found_once():
    # pi sits midway between nodes 1000 and 1001 of the default grid
    grid = theta_grid()
    found = find_maxima(2, grid, spin_curve(2, grid), periodic=True)
    assert [m.index for m in found] == [1000]
    assert found[0].theta == pytest.approx(np.pi, abs=1e-6)
    assert abs(found[0].value - 0.5) <= 1e-8


def test_find_maxima_wraps_only_when_periodic():
    grid = np.linspace(0.0, 2 * np.pi, 9)
    values = np.array([1.0, 0.5, 0.0, 0.0, 0.0, 0.0, 0.0, 0.5, 1.0])
    assert [m.index for m in find_maxima(2, grid, values, refine=False, periodic=True)] == [0]
    assert find_maxima(2, grid, values, refine=False) == []


def test_find_maxima_ignores_edge_of_open_interval():
    grid = np.linspace(0.0, np.pi, 101)
    found = find_maxima(2, grid, spin_curve(2, grid))
    assert found == []
    with pytest.raises(ValueError):
        find_maxima(2, grid[:2], spin_curve(2, grid[:2]))


def test_spin_scan_rows_and_labels():
    assert [spin_label(d) for d in (2, 3, 4, 5)] == ["1/2", "1", "3/2", "2"]
    rows = spin_scan([2, 3], theta_grid(5))
    assert len(rows) == 10
    assert [r.d for r in rows[:2]] == [2, 3]
    assert rows[0].theta == 0.0
    assert rows[-1].theta == pytest.approx(2 * np.pi * 4 / 5)
    with pytest.raises(ValueError):
        theta_grid(2)


def test_fourier_conjugation_preserves_entanglement():
    d = 3
    f = local_product(None, fourier(d))
    assert abs(
        linear_operator_entanglement(f.adjoint() @ cphase(d) @ f) - (1 - 1 / d)
    ) <= 1e-10
