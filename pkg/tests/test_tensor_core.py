import numpy as np
import pytest

from gate_library import clock_z, haar_random_unitary, projector, shift_x, swap
from tensor_core import (
    Bipartition,
    DimensionError,
    MultipartiteOperator,
    NonFiniteError,
    NotHermitianError,
    compose_permutations,
    embed,
    hermitian_eigenvalues,
    hs_inner,
    hs_norm,
    inverse_permutation,
    kron,
    kron_all,
    partial_trace,
    permutation_operator,
    permute_systems,
    reshuffle,
    reshuffle_matrix,
    singular_values,
    unreshuffle,
)


def _random_matrix(rng, n):
    return rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))


def _basis(index, d):
    v = np.zeros(d, dtype=complex)
    v[index] = 1.0
    return v


def test_operator_rejects_bad_dims():
    with pytest.raises(DimensionError):
        MultipartiteOperator(np.eye(4), (2, 3))
    with pytest.raises(DimensionError):
        MultipartiteOperator(np.eye(2), (1, 2))


def test_operator_data_is_read_only():
    op = MultipartiteOperator.identity((2, 2))
    with pytest.raises(ValueError):
        op.data[0, 0] = 5.0


def test_kron_identities_and_basis_action():
    i2 = MultipartiteOperator.identity((2,))
    out = kron(i2, i2)
    assert out.dims == (2, 2)
    np.testing.assert_array_equal(out.data, np.eye(4))

    x_i = kron(shift_x(2), i2)
    assert np.array_equal(x_i.data @ _basis(0, 4), _basis(2, 4))  # |00> -> |10>

    mixed = kron(MultipartiteOperator.identity((2,)), MultipartiteOperator.identity((3,)))
    assert mixed.dims == (2, 3)
    assert mixed.dim == 6


def test_permute_systems_identity_and_swap(rng):
    a = MultipartiteOperator(_random_matrix(rng, 2), (2,))
    b = MultipartiteOperator(_random_matrix(rng, 3), (3,))
    ab = kron(a, b)
    assert permute_systems(ab, (0, 1)).allclose(ab, 0.0)
    assert permute_systems(ab, (1, 0)).allclose(kron(b, a), 1e-14)


def test_permutation_inverse_and_group_action(rng):
    dims = (2, 3, 2)
    op = MultipartiteOperator(_random_matrix(rng, 12), dims)
    p1, p2 = (2, 0, 1), (1, 2, 0)

    back = permute_systems(permute_systems(op, p1), inverse_permutation(p1))
    np.testing.assert_array_equal(back.data, op.data)

    sequential = permute_systems(permute_systems(op, p1), p2)
    once = permute_systems(op, compose_permutations(p1, p2))
    assert sequential.dims == once.dims
    np.testing.assert_array_equal(sequential.data, once.data)


def test_permute_rejects_non_bijection():
    with pytest.raises(DimensionError):
        permute_systems(MultipartiteOperator.identity((2, 2)), (0, 0))


def test_permutation_operator_moves_basis_states(rng):
    dims = (2, 2, 2)
    perm = (1, 2, 0)
    p = permutation_operator(dims, perm)
    assert p.is_unitary()
    assert not p.allclose(MultipartiteOperator.identity(dims), 0.5)
    # |x0 x1 x2> -> |x1 x2 x0>
    for x in np.ndindex(*dims):
        source = _basis(int(np.ravel_multi_index(x, dims)), 8)
        target = _basis(int(np.ravel_multi_index(tuple(x[k] for k in perm), dims)), 8)
        np.testing.assert_array_equal(p.data @ source, target)

    op = MultipartiteOperator(_random_matrix(rng, 8), dims)
    conjugated = p @ op @ p.adjoint()
    np.testing.assert_allclose(conjugated.data, permute_systems(op, perm).data, atol=1e-14)

    with pytest.raises(DimensionError):
        permutation_operator((2, 3), (1, 0))


def test_partial_trace_product_rule(rng):
    a = _random_matrix(rng, 2)
    b = _random_matrix(rng, 3)
    reduced = partial_trace(kron(a, MultipartiteOperator(b, (3,))), [0])
    np.testing.assert_allclose(reduced.data, a * np.trace(b), atol=1e-12)


def test_partial_trace_bell_is_maximally_mixed():
    bell = np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2)
    rho = MultipartiteOperator(np.outer(bell, bell.conj()), (2, 2))
    np.testing.assert_allclose(partial_trace(rho, [0]).data, np.eye(2) / 2, atol=1e-12)
    np.testing.assert_allclose(partial_trace(rho, [1]).data, np.eye(2) / 2, atol=1e-12)


def test_partial_trace_keep_all_and_preserves_trace(rng):
    op = MultipartiteOperator(_random_matrix(rng, 12), (2, 3, 2))
    assert partial_trace(op, [0, 1, 2]) is op
    for keep in ([0], [1], [2], [0, 2], [1, 2]):
        out = partial_trace(op, keep)
        assert abs(np.trace(out.data) - np.trace(op.data)) <= 1e-12
    with pytest.raises(DimensionError):
        partial_trace(op, [])


def test_reshuffle_product_is_rank_one(rng):
    a = _random_matrix(rng, 2)
    b = _random_matrix(rng, 3)
    r = reshuffle(kron(a, MultipartiteOperator(b, (3,))))
    np.testing.assert_allclose(r, np.outer(a.reshape(-1), b.reshape(-1)), atol=1e-12)
    s = singular_values(r)
    assert s[0] > 1e-6
    assert np.all(s[1:] <= 1e-10 * s[0])


def test_reshuffle_swap_has_unit_singular_values():
    for d in (2, 3, 4):
        np.testing.assert_allclose(singular_values(reshuffle(swap(d))), np.ones(d * d), atol=1e-12)


def test_reshuffle_is_norm_preserving_involution(rng):
    m = _random_matrix(rng, 6)
    r = reshuffle_matrix(m, 2, 3)
    assert r.shape == (4, 9)
    assert abs(np.linalg.norm(r) - np.linalg.norm(m)) <= 1e-12
    np.testing.assert_array_equal(unreshuffle(r, 2, 3), m)
    sq = _random_matrix(rng, 9)
    np.testing.assert_array_equal(reshuffle_matrix(reshuffle_matrix(sq, 3, 3), 3, 3), sq)


def test_reshuffle_non_contiguous_split(rng):
    a, b, c = (_random_matrix(rng, 2) for _ in range(3))
    op = kron_all(a, b, c)
    s = singular_values(reshuffle(op, Bipartition.from_left((0, 2), 3)))
    assert np.all(s[1:] <= 1e-10 * s[0])


def test_embed_examples():
    d = 3
    u = swap(d)
    assert embed(u, (d, d), (0, 1)).allclose(u, 0.0)

    i = MultipartiteOperator.identity((d,))
    expected = kron_all(i, u, i)
    assert embed(u, (d, d, d, d), (1, 2)).allclose(expected, 0.0)

    x = shift_x(2)
    placed = embed(x, (2, 2), (1,))
    assert np.array_equal(placed.data @ _basis(0, 4), _basis(1, 4))  # |00> -> |01>


def test_embed_reversed_positions_equals_permuted(rng):
    u = haar_random_unitary(6, rng)
    u = MultipartiteOperator(u.data, (2, 3))
    placed = embed(u, (3, 2), (1, 0))
    assert placed.allclose(permute_systems(u, (1, 0)), 0.0)


def test_embed_dimension_mismatch():
    with pytest.raises(DimensionError):
        embed(swap(2), (2, 3), (0, 1))


def test_hs_inner_examples():
    d = 3
    for i, j, k, l in [(0, 1, 0, 1), (0, 1, 1, 0), (2, 2, 2, 2), (1, 2, 0, 2)]:
        value = hs_inner(projector(i, j, d), projector(k, l, d))
        assert value == (1.0 if (i, j) == (k, l) else 0.0)
    assert hs_inner(np.eye(d), np.eye(d)) == d
    assert abs(hs_inner(shift_x(2), clock_z(2))) <= 1e-12
    with pytest.raises(DimensionError):
        hs_inner(np.eye(2), np.eye(3))


def test_hs_inner_conjugate_symmetric(rng):
    x, y = _random_matrix(rng, 4), _random_matrix(rng, 4)
    assert abs(hs_inner(x, y) - np.conj(hs_inner(y, x))) <= 1e-12
    assert hs_norm(x) == pytest.approx(np.linalg.norm(x), abs=1e-12)


def test_singular_values_contract(rng):
    s = singular_values(np.diag([1.0, -3.0, 2.0]))
    np.testing.assert_allclose(s, [3.0, 2.0, 1.0])
    u = haar_random_unitary(5, rng)
    np.testing.assert_allclose(singular_values(u.data), np.ones(5), atol=1e-12)
    a, b = rng.standard_normal(3), rng.standard_normal(4)
    s = singular_values(np.outer(a, b))
    assert len(s) == 3
    assert s[0] == pytest.approx(np.linalg.norm(a) * np.linalg.norm(b))
    assert np.all(s[1:] <= 1e-12)
    with pytest.raises(NonFiniteError):
        singular_values(np.array([[np.nan, 0.0], [0.0, 1.0]]))


def test_hermitian_eigenvalues_contract():
    np.testing.assert_allclose(hermitian_eigenvalues(np.eye(3)), np.ones(3))
    np.testing.assert_allclose(hermitian_eigenvalues(np.diag([1.0, 3.0])), [3.0, 1.0])
    h = np.array([[2.0, 1j], [-1j, 1.0]])
    ev = hermitian_eigenvalues(h)
    assert ev[0] >= ev[1]
    assert abs(ev.sum() - 3.0) <= 1e-10
    with pytest.raises(NotHermitianError):
        hermitian_eigenvalues(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_bipartition_validation():
    split = Bipartition.halves(4)
    assert split.left == frozenset({0, 1})
    assert split.side_dims((2, 3, 2, 3)) == (6, 6)
    assert Bipartition.halves(3).left == frozenset({0, 1})
    with pytest.raises(DimensionError):
        Bipartition(frozenset(), frozenset({0}))
    with pytest.raises(DimensionError):
        Bipartition(frozenset({0, 1}), frozenset({1, 2}))
    with pytest.raises(DimensionError):
        Bipartition(frozenset({0}), frozenset({2}))
