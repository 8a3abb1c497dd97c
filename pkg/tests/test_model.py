import json

import numpy as np
import pytest

from modwave.hilbert import build_basis
from modwave.model import (SystemConfig, build_h0, decay_matrix, directional_operator,
                           drive_operator, photon_green, single_excitation_hamiltonian,
                           two_excitation_hamiltonian)


def make_config(**kwargs):
    defaults = dict(n_qubits=2, anharmonicity=10.0, qd=np.pi / 2,
                    drive_amps=(0.01, 0.01), drive_phases=(0.0, 0.0),
                    drive_freq=2010.0, omega0=1000.0)
    defaults.update(kwargs)
    return SystemConfig(**defaults)


def test_config_validation():
    with pytest.raises(ValueError):
        make_config(n_qubits=0, drive_amps=(), drive_phases=())
    with pytest.raises(ValueError):
        make_config(gamma_nr=-0.1)
    with pytest.raises(ValueError):
        make_config(drive_amps=(0.01,))
    with pytest.raises(ValueError):
        make_config(gamma1d=0.0)


def test_config_json_roundtrip(tmp_path):
    cfg = make_config(gamma_nr=0.2, drive_phases=(0.0, 1.25))
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(cfg.to_dict()))
    assert SystemConfig.from_json(path) == cfg


def test_config_rejects_unknown_fields(tmp_path):
    data = make_config().to_dict()
    data["coupling"] = 1.0
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(data))
    with pytest.raises(ValueError, match="unknown config fields"):
        SystemConfig.from_json(path)


def test_config_missing_fields():
    with pytest.raises(ValueError, match="missing config fields"):
        SystemConfig.from_dict({"n_qubits": 1})


def test_photon_green_two_qubits():
    d = photon_green(make_config(qd=np.pi / 2))
    assert np.allclose(d, [[-1j, 1.0], [1.0, -1j]])


def test_photon_green_single():
    cfg = make_config(n_qubits=1, drive_amps=(0.01,), drive_phases=(0.0,))
    assert np.allclose(photon_green(cfg), [[-1j]])


def test_photon_green_three_qubits_pi():
    cfg = make_config(n_qubits=3, qd=np.pi, drive_amps=(0.01,) * 3,
                      drive_phases=(0.0,) * 3)
    d = photon_green(cfg)
    assert np.allclose(d[0, 2], -1j)
    assert np.allclose(d, d.T)


def test_decay_matrix_examples():
    assert np.allclose(decay_matrix(make_config(qd=np.pi / 2)), np.eye(2))
    assert np.allclose(decay_matrix(make_config(qd=0.0)), np.ones((2, 2)))
    cfg = make_config(n_qubits=1, gamma_nr=0.1, drive_amps=(0.01,),
                      drive_phases=(0.0,))
    assert np.allclose(decay_matrix(cfg), [[1.1]])


def test_decay_matrix_positive_semidefinite():
    rng = np.random.default_rng(11)
    for _ in range(25):
        n = int(rng.integers(1, 6))
        cfg = make_config(n_qubits=n, qd=float(rng.uniform(0, np.pi)),
                          gamma_nr=float(rng.uniform(0, 0.5)),
                          drive_amps=(0.01,) * n, drive_phases=(0.0,) * n)
        gamma = decay_matrix(cfg)
        assert np.linalg.eigvalsh(gamma).min() > -1e-12
        assert np.allclose(gamma, -photon_green(cfg).imag + cfg.gamma_nr * np.eye(n))


def test_h0_single_qubit_diagonal():
    cfg = make_config(n_qubits=1, drive_amps=(0.01,), drive_phases=(0.0,))
    h0 = build_h0(cfg, build_basis(1, 2))
    assert np.allclose(h0, np.diag([0.0, 1000.0, 2010.0]))


def test_h0_hopping_element():
    cfg = make_config(qd=np.pi / 2)
    basis = build_basis(2, 2)
    h0 = build_h0(cfg, basis)
    i10 = basis.index((1, 0))
    i01 = basis.index((0, 1))
    assert abs(h0[i10, i01] - 1.0) < 1e-14


def test_h0_hermitian_random():
    rng = np.random.default_rng(12)
    cfg = make_config(n_qubits=3, qd=float(rng.uniform(0, np.pi)),
                      anharmonicity=float(rng.uniform(-5, 20)),
                      drive_amps=(0.01,) * 3, drive_phases=(0.0,) * 3)
    h0 = build_h0(cfg, build_basis(3, 2, total_cutoff=2))
    assert np.abs(h0 - h0.conj().T).max() < 1e-13


def test_h0_single_excitation_block():
    cfg = make_config(qd=0.73)
    basis = build_basis(2, 2)
    h0 = build_h0(cfg, basis)
    idx = [basis.index((1, 0)), basis.index((0, 1))]
    block = h0[np.ix_(idx, idx)]
    expected = cfg.omega0 * np.eye(2) + photon_green(cfg).real
    assert np.allclose(block, expected)


def test_h0_basis_mismatch():
    with pytest.raises(ValueError):
        build_h0(make_config(), build_basis(3, 2))


def test_drive_operator_elements():
    cfg = make_config(n_qubits=1, drive_amps=(0.01,), drive_phases=(0.0,))
    q = drive_operator(cfg, build_basis(1, 2), 0)
    assert abs(q[2, 0] - np.sqrt(2)) < 1e-14
    assert abs(q[0, 0] - 1.0) < 1e-14
    assert abs(q[1, 1] - 3.0) < 1e-14
    with pytest.raises(ValueError):
        drive_operator(cfg, build_basis(1, 2), 1)


def test_directional_operators():
    cfg1 = make_config(n_qubits=1, drive_amps=(0.01,), drive_phases=(0.0,))
    basis1 = build_basis(1, 2)
    from modwave.hilbert import annihilation
    assert np.allclose(directional_operator(cfg1, basis1, "left"),
                       annihilation(basis1, 0))
    assert np.allclose(directional_operator(cfg1, basis1, "left"),
                       directional_operator(cfg1, basis1, "right"))

    basis2 = build_basis(2, 2)
    a1 = annihilation(basis2, 0)
    a2 = annihilation(basis2, 1)
    p_minus_pi = directional_operator(make_config(qd=np.pi), basis2, "left")
    assert np.allclose(p_minus_pi, a1 - a2)
    p_minus = directional_operator(make_config(qd=np.pi / 2), basis2, "left")
    assert np.allclose(p_minus, a1 + 1j * a2)
    with pytest.raises(ValueError):
        directional_operator(cfg1, basis1, "up")


def test_single_excitation_pole():
    cfg = make_config(n_qubits=1, gamma_nr=0.3, drive_amps=(0.01,),
                      drive_phases=(0.0,))
    h = single_excitation_hamiltonian(cfg)
    assert np.allclose(h, [[1000.0 - 1.3j]])


def test_two_excitation_single_qubit():
    cfg = make_config(n_qubits=1, gamma_nr=0.2, drive_amps=(0.01,),
                      drive_phases=(0.0,))
    ham, eig = two_excitation_hamiltonian(cfg)
    assert ham.excitation_sector == 2
    assert np.allclose(eig, [2 * 1000.0 + 10.0 - 2j * 1.2])


def test_two_excitation_band_gap():
    # near-zero spacing with strong anharmonicity: one on-site pair band near
    # 2*omega0 + U and the different-qubit pair states near 2*omega0
    cfg = make_config(qd=0.01, anharmonicity=50.0)
    _, eig = two_excitation_hamiltonian(cfg)
    re = np.sort(eig.real)
    lower = re[re < 2 * 1000.0 + 25.0]
    upper = re[re >= 2 * 1000.0 + 25.0]
    assert lower.size == 2 and upper.size == 2
    assert abs(upper.mean() - lower.mean() - 50.0) < 5.0


def test_two_excitation_eigenvalues_decay():
    rng = np.random.default_rng(13)
    for _ in range(20):
        n = int(rng.integers(1, 5))
        cfg = make_config(n_qubits=n, qd=float(rng.uniform(0, np.pi)),
                          anharmonicity=float(rng.uniform(0, 30)),
                          gamma_nr=float(rng.uniform(0, 0.3)),
                          drive_amps=(0.01,) * n, drive_phases=(0.0,) * n)
        _, eig = two_excitation_hamiltonian(cfg)
        assert eig.imag.max() < 1e-10
        h1 = single_excitation_hamiltonian(cfg)
        assert np.linalg.eigvals(h1).imag.max() < 1e-10
