import numpy as np
import pytest

from modwave.hilbert import (annihilation, build_basis, creation, sandwich_superop,
                             trace_functional, unvec, vacuum_projector, vec)


def test_basis_sizes():
    assert build_basis(1, 2).size == 3
    assert build_basis(2, 2).size == 9
    assert build_basis(2, 2, total_cutoff=2).size == 6


def test_basis_states_ordering_and_vacuum():
    basis = build_basis(2, 2, total_cutoff=2)
    assert basis.states[0] == (0, 0)
    assert set(basis.states) == {(0, 0), (0, 1), (1, 0), (1, 1), (0, 2), (2, 0)}
    assert list(basis.states) == sorted(basis.states)
    # deterministic across rebuilds
    assert basis.states == build_basis(2, 2, total_cutoff=2).states


def test_basis_invalid_arguments():
    with pytest.raises(ValueError):
        build_basis(0, 2)
    with pytest.raises(ValueError):
        build_basis(2, 2, total_cutoff=-1)
    with pytest.raises(ValueError):
        build_basis(1, -1)


def test_annihilation_single_mode():
    basis = build_basis(1, 2)
    a = annihilation(basis, 0)
    vac, one, two = np.eye(3)
    assert np.allclose(a @ one, vac)
    assert np.allclose(a @ two, np.sqrt(2) * one)
    assert np.allclose(a @ vac, 0)


def test_commutator_on_vacuum():
    basis = build_basis(1, 2)
    a = annihilation(basis, 0)
    comm = a @ a.conj().T - a.conj().T @ a
    assert abs(comm[0, 0] - 1.0) < 1e-14


def test_annihilation_total_cutoff():
    basis = build_basis(2, 2, total_cutoff=2)
    a1 = annihilation(basis, 0)
    state = np.zeros(basis.size)
    state[basis.index((1, 1))] = 1.0
    out = a1 @ state
    expected = np.zeros(basis.size)
    expected[basis.index((0, 1))] = 1.0
    assert np.allclose(out, expected)


def test_annihilation_mode_out_of_range():
    basis = build_basis(2, 2)
    with pytest.raises(ValueError):
        annihilation(basis, 2)


def test_creation_respects_truncation():
    basis = build_basis(1, 2)
    adag = creation(basis, 0)
    two = np.zeros(3)
    two[2] = 1.0
    assert np.allclose(adag @ two, 0)


def test_mode_operators_commute():
    basis = build_basis(3, 2, total_cutoff=2)
    ops = [annihilation(basis, j) for j in range(3)]
    for j in range(3):
        for k in range(j + 1, 3):
            comm = ops[j] @ ops[k] - ops[k] @ ops[j]
            assert np.abs(comm).max() < 1e-14


def test_sandwich_identity():
    eye = np.eye(4)
    assert np.allclose(sandwich_superop(eye, eye), np.eye(16))


def test_sandwich_matches_direct_product():
    rng = np.random.default_rng(3)
    for _ in range(20):
        a = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
        b = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
        rho = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
        s = sandwich_superop(a, b)
        direct = a @ rho @ b
        assert np.allclose(unvec(s @ vec(rho), 3), direct, atol=1e-13)
        assert abs(np.trace(unvec(s @ vec(rho), 3)) - np.trace(direct)) < 1e-12


def test_sandwich_composition():
    rng = np.random.default_rng(4)
    a = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    b = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    eye = np.eye(3)
    combined = sandwich_superop(a, eye) @ sandwich_superop(eye, b)
    assert np.allclose(combined, sandwich_superop(a, b), atol=1e-13)


def test_sandwich_dimension_mismatch():
    with pytest.raises(ValueError):
        sandwich_superop(np.eye(3), np.eye(4))


def test_vec_unvec_roundtrip():
    rng = np.random.default_rng(5)
    rho = rng.normal(size=(5, 5)) + 1j * rng.normal(size=(5, 5))
    assert np.array_equal(unvec(vec(rho), 5), rho)
    v = rng.normal(size=25) + 1j * rng.normal(size=25)
    assert np.array_equal(vec(unvec(v, 5)), v)


def test_trace_functional_and_vacuum():
    basis = build_basis(2, 1)
    t = trace_functional(basis.size)
    rng = np.random.default_rng(6)
    rho = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    assert abs(t @ vec(rho) - np.trace(rho)) < 1e-14
    p = vacuum_projector(basis)
    assert p[0, 0] == 1.0 and np.abs(p).sum() == 1.0
