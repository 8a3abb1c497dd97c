"""Closed-form reference results for one and two driven qubits.

These expressions serve as fast evaluators and as independent oracles for
the master-equation and diagrammatic engines. Every formula carries a
validity note; tests must not compare engines against a formula outside its
regime.

Phase convention: the resonant pair-creation amplitude of qubit j is
``g_j * exp(-i*phi_j)`` (the co-rotating part of the modulation), so all
interference terms below use that complex amplitude.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import SystemConfig

__all__ = [
    "ClosedFormResult",
    "FORMULAS",
    "i1_single",
    "spectrum_single",
    "two_qubit_highU",
    "two_qubit_symmetric",
    "subradiant_energies_n4",
    "TwoQubitHighU",
    "TwoQubitSymmetric",
]

FORMULAS = {
    "single_intensity": "exact second-order intensity of a single three-level qubit",
    "single_spectrum": "exact second-order emission spectrum of a single three-level qubit",
    "pair_intensity_interference": "two-qubit left intensity; U >> gamma1d, "
                                   "Omega = 2*omega0 + U, gamma_nr = 0",
    "pair_g2_interference": "two-qubit G2 of two coherent pair sources; U >> gamma1d, "
                            "Omega = 2*omega0 + U, gamma_nr = 0",
    "pair_g2_high_u": "two-qubit G2 with general amplitudes; U >> gamma1d, "
                      "Omega near 2*omega0 + U, gamma_nr = 0",
    "pair_intensity_high_u": "two-qubit left intensity with general amplitudes; "
                             "U >> gamma1d, Omega near 2*omega0 + U, gamma_nr = 0",
    "pair_g2_symmetric": "two-qubit G2, symmetric modulation g1 = g2, gamma_nr = 0; any U",
    "pair_intensity_symmetric": "two-qubit directional intensity, symmetric modulation, "
                                "gamma_nr = 0; any U",
    "g2_zero_frequency": "modulation frequency where the symmetric two-qubit G2 vanishes",
    "intensity_min_frequency": "modulation frequency of the symmetric two-qubit "
                               "intensity minimum (approximate)",
    "subradiant_n4": "double-excited subradiant energies of four qubits at qd << 1",
}


@dataclass(frozen=True)
class ClosedFormResult:
    value: complex
    formula_id: str
    validity_note: str

    def __post_init__(self):
        if self.formula_id not in FORMULAS:
            raise ValueError(f"unknown formula id {self.formula_id!r}")


def _result(value, formula_id) -> ClosedFormResult:
    return ClosedFormResult(value=value, formula_id=formula_id,
                            validity_note=FORMULAS[formula_id])


def _pair_amplitudes(config: SystemConfig) -> tuple[complex, ...]:
    """Complex pair-creation amplitudes g_j * exp(-i*phi_j)."""
    return tuple(g * np.exp(-1j * phi)
                 for g, phi in zip(config.drive_amps, config.drive_phases))


def i1_single(config: SystemConfig) -> float:
    """Exact emission intensity <a^+ a> of one driven three-level qubit.

    Contains both the co- and counter-rotating Lorentzian factors, so it is
    exact at second order in g for any omega0.
    """
    g = config.drive_amps[0]
    u = config.anharmonicity
    w0 = config.omega0
    om = config.drive_freq
    gs = config.gamma_sigma
    num = 4.0 * g * g * (om * om + (u + 2 * w0) ** 2 + 4 * gs * gs)
    den = ((4 * gs * gs + (om - u - 2 * w0) ** 2)
           * (4 * gs * gs + (om + u + 2 * w0) ** 2))
    return num / den


def spectrum_single(config: SystemConfig, omega) -> np.ndarray | float:
    """Exact second-order emission spectrum of one driven three-level qubit.

    Two resonances: at omega0 (width gamma_sigma) and at omega0 + U (width
    3*gamma_sigma). Integrates to the intensity from :func:`i1_single`.
    """
    omega = np.asarray(omega, dtype=float)
    u = config.anharmonicity
    w0 = config.omega0
    gs = config.gamma_sigma
    i1 = i1_single(config)
    x = omega - w0
    term1 = (8 * gs * gs + u * (u + 2 * x)) / (x * x + gs * gs)
    term2 = u * (3 * u - 2 * (x - u)) / ((x - u) ** 2 + (3 * gs) ** 2)
    out = i1 / (2 * np.pi) * gs / (u * u + 4 * gs * gs) * (term1 + term2)
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class TwoQubitHighU:
    """Strong-anharmonicity two-qubit results near the pair resonance."""

    i_minus: ClosedFormResult
    i_plus: ClosedFormResult
    g2_mm: ClosedFormResult
    i_minus_resonant: ClosedFormResult
    g2_mm_resonant: ClosedFormResult


def two_qubit_highU(config: SystemConfig) -> TwoQubitHighU:
    """Two-qubit closed forms for U >> gamma1d near Omega = 2*omega0 + U.

    ``i_minus``/``i_plus``/``g2_mm`` hold for general amplitudes and detuning
    within the pair-resonance band; the ``*_resonant`` variants are the
    equal-amplitude on-resonance interference forms, with the single-qubit
    intensity prefactor evaluated through the exact formula.
    """
    if config.n_qubits != 2:
        raise ValueError("two-qubit closed forms need n_qubits == 2")
    g1t, g2t = _pair_amplitudes(config)
    g1, g2 = config.drive_amps
    gd = config.gamma1d
    u = config.anharmonicity
    det = config.drive_freq - 2 * config.omega0 - u
    lor = det * det + 4 * gd * gd
    c2 = np.cos(2 * config.qd)
    s2 = np.sin(2 * config.qd)

    g2_general = abs(g1t + g2t * np.exp(2j * config.qd)) ** 2 / lor
    i_minus = ((7 - 3 * c2) * g1 * g1 + (5 - c2) * g2 * g2
               + 2 * s2 * np.imag(g1t * np.conj(g2t))) / ((3 - c2) * lor)
    i_plus = ((7 - 3 * c2) * g1 * g1 + (5 - c2) * g2 * g2
              - 2 * s2 * np.imag(g1t * np.conj(g2t))) / ((3 - c2) * lor)

    phi = config.drive_phases[1] - config.drive_phases[0]
    i1 = i1_single(config.replace(n_qubits=1, drive_amps=(g1,), drive_phases=(0.0,),
                                  gamma_nr=0.0))
    i_minus_res = i1 * (2 + np.sin(phi) * s2 / (3 - c2))
    g2_res = i1 * (1 + np.cos(2 * config.qd - phi))

    return TwoQubitHighU(
        i_minus=_result(i_minus, "pair_intensity_high_u"),
        i_plus=_result(i_plus, "pair_intensity_high_u"),
        g2_mm=_result(g2_general, "pair_g2_high_u"),
        i_minus_resonant=_result(i_minus_res, "pair_intensity_interference"),
        g2_mm_resonant=_result(g2_res, "pair_g2_interference"),
    )


@dataclass(frozen=True)
class TwoQubitSymmetric:
    """Exact symmetric-modulation two-qubit results (any U, gamma_nr = 0)."""

    g2_mm: ClosedFormResult
    i_each: ClosedFormResult
    i_sum: ClosedFormResult
    g2_zero_omega: float | None
    i_min_omega: float


def two_qubit_symmetric(config: SystemConfig) -> TwoQubitSymmetric:
    """Exact two-qubit results for equal modulation amplitudes and phases.

    ``i_sum`` is the total emitted intensity I_minus + I_plus obtained from
    the pump back-action (unitarity) argument; by mirror symmetry each
    direction carries half of it, returned as ``i_each``.

    ``g2_zero_omega`` is the antibunching frequency where the correlation
    function vanishes exactly (None when qd is an odd multiple of pi/2);
    ``i_min_omega`` locates the approximate intensity minimum.
    """
    if config.n_qubits != 2:
        raise ValueError("two-qubit closed forms need n_qubits == 2")
    g1t, g2t = _pair_amplitudes(config)
    if abs(g1t - g2t) > 1e-12 * max(abs(g1t), abs(g2t), 1e-300):
        raise ValueError("symmetric closed forms need equal complex amplitudes")
    g = abs(g1t)
    gd = config.gamma1d
    u = config.anharmonicity
    qd = config.qd
    det = config.drive_freq - 2 * config.omega0

    den = abs((det + 2j * gd) * (det - u + 2j * gd)
              + 4 * gd * gd * np.exp(2j * qd)) ** 2
    g2_val = 4 * g * g * abs(det * np.cos(qd) + 2 * gd * np.sin(qd)) ** 2 / den
    i_sum = 8 * g * g * ((det + gd * np.sin(2 * qd)) ** 2
                         + 2 * gd * gd * (3 - np.cos(2 * qd)) * np.sin(qd) ** 2) / den

    cos_qd = np.cos(qd)
    if abs(cos_qd) < 1e-12:
        g2_zero = None
    else:
        g2_zero = 2 * config.omega0 - 2 * gd * np.tan(qd)
    i_min = 2 * config.omega0 - gd * np.sin(2 * qd)

    return TwoQubitSymmetric(
        g2_mm=_result(g2_val, "pair_g2_symmetric"),
        i_each=_result(0.5 * i_sum, "pair_intensity_symmetric"),
        i_sum=_result(i_sum, "pair_intensity_symmetric"),
        g2_zero_omega=g2_zero,
        i_min_omega=i_min,
    )


def subradiant_energies_n4(config: SystemConfig) -> tuple[float, float]:
    """Double-excited subradiant resonance frequencies for four qubits, qd << 1.

    The two ridges disperse linearly: 2*omega0 - 2*gamma1d*qd and
    2*omega0 - (14/3)*gamma1d*qd.
    """
    base = 2 * config.omega0
    slope = config.gamma1d * config.qd
    return (base - 2.0 * slope, base - (14.0 / 3.0) * slope)
