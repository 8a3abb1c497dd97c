"""Physical model assembly for a waveguide-coupled array of anharmonic qubits.

All rates and frequencies are expressed in units of the single-qubit
radiative decay rate into the waveguide (``gamma1d``), which defaults to 1.
The geometry enters only through the dimensionless optical phase ``qd``
accumulated between neighboring qubits.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, fields

import numpy as np

from .hilbert import FockBasis, annihilation

__all__ = [
    "SystemConfig",
    "EffectiveHamiltonian",
    "photon_green",
    "decay_matrix",
    "build_h0",
    "drive_operator",
    "directional_operator",
    "single_excitation_hamiltonian",
    "two_excitation_hamiltonian",
]

DEFAULT_OMEGA0 = 1000.0


@dataclass(frozen=True)
class SystemConfig:
    """All physical parameters of the modulated qubit array.

    Fields (all frequencies in units of ``gamma1d``):
      n_qubits       number of qubits N
      anharmonicity  U, shift of the double-excited level to 2*omega0 + U
      qd             optical phase per nearest-neighbor spacing
      drive_amps     modulation amplitudes g_j, length N
      drive_phases   modulation phases phi_j (radians), length N
      drive_freq     modulation frequency Omega
      omega0         qubit resonance frequency (default 1000)
      gamma1d        radiative decay rate, the internal unit (default 1)
      gamma_nr       nonradiative decay rate gamma >= 0
    """

    n_qubits: int
    anharmonicity: float
    qd: float
    drive_amps: tuple[float, ...]
    drive_phases: tuple[float, ...]
    drive_freq: float
    omega0: float = DEFAULT_OMEGA0
    gamma1d: float = 1.0
    gamma_nr: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "drive_amps", tuple(float(g) for g in self.drive_amps))
        object.__setattr__(self, "drive_phases", tuple(float(p) for p in self.drive_phases))
        if self.n_qubits < 1:
            raise ValueError(f"n_qubits must be >= 1, got {self.n_qubits}")
        if self.gamma1d <= 0:
            raise ValueError(f"gamma1d must be > 0, got {self.gamma1d}")
        if self.gamma_nr < 0:
            raise ValueError(f"gamma_nr must be >= 0, got {self.gamma_nr}")
        if len(self.drive_amps) != self.n_qubits:
            raise ValueError(f"drive_amps must have length {self.n_qubits}, "
                             f"got {len(self.drive_amps)}")
        if len(self.drive_phases) != self.n_qubits:
            raise ValueError(f"drive_phases must have length {self.n_qubits}, "
                             f"got {len(self.drive_phases)}")
        for name in ("anharmonicity", "qd", "drive_freq", "omega0", "gamma1d", "gamma_nr"):
            if not np.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if not all(np.isfinite(self.drive_amps)) or not all(np.isfinite(self.drive_phases)):
            raise ValueError("drive amplitudes and phases must be finite")

    @property
    def gamma_sigma(self) -> float:
        """Total single-qubit decay rate gamma1d + gamma_nr."""
        return self.gamma1d + self.gamma_nr

    def replace(self, **kwargs) -> "SystemConfig":
        values = {f.name: getattr(self, f.name) for f in fields(self)}
        values.update(kwargs)
        return SystemConfig(**values)

    def to_dict(self) -> dict:
        return {
            "n_qubits": self.n_qubits,
            "omega0": self.omega0,
            "gamma1d": self.gamma1d,
            "gamma_nr": self.gamma_nr,
            "anharmonicity": self.anharmonicity,
            "qd": self.qd,
            "drive_amps": list(self.drive_amps),
            "drive_phases": list(self.drive_phases),
            "drive_freq": self.drive_freq,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SystemConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config fields: {sorted(unknown)}")
        missing = {"n_qubits", "anharmonicity", "qd", "drive_amps", "drive_phases",
                   "drive_freq"} - set(data)
        if missing:
            raise ValueError(f"missing config fields: {sorted(missing)}")
        return cls(**data)

    @classmethod
    def from_json(cls, path) -> "SystemConfig":
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
        if not isinstance(data, dict):
            raise ValueError(f"config file {path} must contain a JSON object")
        return cls.from_dict(data)


@dataclass(frozen=True)
class EffectiveHamiltonian:
    """Non-Hermitian effective Hamiltonian of the one- or two-excitation sector."""

    entries: np.ndarray
    excitation_sector: int

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvals(self.entries)


def photon_green(config: SystemConfig) -> np.ndarray:
    """Waveguide photon Green matrix D_jk = -i*gamma1d*exp(i*qd*|j-k|)."""
    n = config.n_qubits
    sep = np.abs(np.subtract.outer(np.arange(n), np.arange(n)))
    return -1j * config.gamma1d * np.exp(1j * config.qd * sep)


def decay_matrix(config: SystemConfig) -> np.ndarray:
    """Collective decay rates gamma_jk = gamma1d*cos(qd*|j-k|) + delta_jk*gamma_nr.

    Equal to ``-Im(photon_green) + gamma_nr*I``; real symmetric and positive
    semidefinite (up to roundoff) for gamma_nr >= 0.
    """
    n = config.n_qubits
    sep = np.abs(np.subtract.outer(np.arange(n), np.arange(n)))
    gamma = config.gamma1d * np.cos(config.qd * sep) + config.gamma_nr * np.eye(n)
    min_eig = np.linalg.eigvalsh(gamma).min()
    if min_eig < -1e-12 * max(1.0, config.gamma1d + config.gamma_nr):
        raise ValueError(f"decay matrix not positive semidefinite (min eigenvalue {min_eig:g})")
    return gamma


def build_h0(config: SystemConfig, basis: FockBasis) -> np.ndarray:
    """Undriven Hamiltonian: qubit energies, anharmonicity, radiative hopping.

    H0 = sum_j (omega0 n_j + U/2 a_j^+ a_j^+ a_j a_j)
       + sum_{jk} Re(D_jk) a_j^+ a_k,  Hermitian by construction.
    """
    if basis.n_modes != config.n_qubits:
        raise ValueError(f"basis has {basis.n_modes} modes but config has "
                         f"{config.n_qubits} qubits")
    n = config.n_qubits
    a = [annihilation(basis, j) for j in range(n)]
    re_d = photon_green(config).real
    h = np.zeros((basis.size, basis.size), dtype=complex)
    for j in range(n):
        num = a[j].conj().T @ a[j]
        h += config.omega0 * num
        h += 0.5 * config.anharmonicity * (num @ num - num)
    for j in range(n):
        for k in range(n):
            if re_d[j, k] != 0.0:
                h += re_d[j, k] * (a[j].conj().T @ a[k])
    return h


def drive_operator(config: SystemConfig, basis: FockBasis, j: int) -> np.ndarray:
    """Quadrature-squared modulation operator (a_j^+ + a_j)^2 in the truncated basis.

    The scalar amplitude g_j and the time factor cos(Omega t + phi_j) are
    applied downstream.
    """
    if not 0 <= j < config.n_qubits:
        raise ValueError(f"qubit index {j} out of range for N={config.n_qubits}")
    a = annihilation(basis, j)
    x = a + a.conj().T
    return x @ x


def directional_operator(config: SystemConfig, basis: FockBasis, direction: str) -> np.ndarray:
    """Collective lowering operator for left- or right-going emission.

    p_minus = sum_j a_j exp(+i*qd*(j-1)) (left), p_plus with the opposite
    phase (right); reduces to the two-qubit a_1 + a_2 exp(+-i*qd) form.
    """
    if direction not in ("left", "right"):
        raise ValueError(f"direction must be 'left' or 'right', got {direction!r}")
    if basis.n_modes != config.n_qubits:
        raise ValueError("basis/config mode count mismatch")
    sign = 1.0 if direction == "left" else -1.0
    op = np.zeros((basis.size, basis.size), dtype=complex)
    for j in range(config.n_qubits):
        op += np.exp(sign * 1j * config.qd * j) * annihilation(basis, j)
    return op


def single_excitation_hamiltonian(config: SystemConfig) -> np.ndarray:
    """N x N effective Hamiltonian omega0*I + D - i*gamma_nr*I.

    Uses the decaying sign convention: the diagonal is omega0 - i*gamma_sigma,
    so all eigenvalues lie in the lower half plane and the resolvent
    (omega - H)^(-1) has the physically required poles.
    """
    n = config.n_qubits
    return (config.omega0 - 1j * config.gamma_nr) * np.eye(n) + photon_green(config)


def two_excitation_hamiltonian(config: SystemConfig) -> tuple[EffectiveHamiltonian, np.ndarray]:
    """Two-excitation non-Hermitian Hamiltonian H x 1 + 1 x H + V and its eigenvalues.

    V is the diagonal N^2 x N^2 interaction assigning the anharmonicity U to
    doubly-excited same-qubit pairs. The real parts of the eigenvalues are the
    double-excited resonance frequencies seen in the emission maps.
    """
    n = config.n_qubits
    h1 = single_excitation_hamiltonian(config)
    eye = np.eye(n)
    h2 = np.kron(h1, eye) + np.kron(eye, h1)
    v = np.zeros((n * n, n * n), dtype=complex)
    for i in range(n):
        v[i * n + i, i * n + i] = config.anharmonicity
    h2 += v
    eigenvalues = np.linalg.eigvals(h2)
    return EffectiveHamiltonian(entries=h2, excitation_sector=2), eigenvalues
