"""Floquet master-equation engine.

Builds the Liouvillian and modulation superoperators in vectorized form,
solves for the stationary density matrix of the periodically driven array
(three Floquet harmonics, exact to second order in the modulation
amplitudes) and evaluates intensities, photon-photon correlations and the
regression-theorem emission spectrum.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .hilbert import (FockBasis, annihilation, sandwich_superop, trace_functional,
                      unvec, vacuum_projector, vec)
from .model import SystemConfig, build_h0, decay_matrix, drive_operator

__all__ = [
    "DegenerateModelError",
    "ResolventError",
    "FloquetSolution",
    "build_liouvillian",
    "build_drive_superops",
    "stationary_rho",
    "emission_intensity",
    "g2_zero",
    "emission_spectrum",
    "g2_tau",
]

WEAK_DRIVE_LIMIT = 0.3


class DegenerateModelError(np.linalg.LinAlgError):
    """The stationary state is not unique (only possible at gamma1d = gamma_nr = 0)."""


class ResolventError(np.linalg.LinAlgError):
    """A resolvent linear solve failed."""


@dataclass
class FloquetSolution:
    """Stationary density matrix of the driven array plus solve diagnostics.

    ``rho0`` is Hermitized and has unit trace; ``diagnostics`` records the
    relative residual of the stationary linear system, the trace deviation,
    the pre-symmetrization Hermiticity defect and the minimum eigenvalue
    (a second-order perturbative state may dip slightly negative, at
    O((g/gamma1d)^4)).
    """

    rho0: np.ndarray
    config: SystemConfig
    basis: FockBasis
    liouvillian: np.ndarray
    diagnostics: dict = field(default_factory=dict)


def build_liouvillian(config: SystemConfig, basis: FockBasis) -> np.ndarray:
    """Vectorized undriven generator: commutator with H0 plus collective decay.

    L = -i(H0 rho - rho H0)
        + sum_jk gamma_jk (2 a_j rho a_k^+ - a_j^+ a_k rho - rho a_j^+ a_k),
    trace-preserving by construction.
    """
    if basis.n_modes != config.n_qubits:
        raise ValueError("basis/config mode count mismatch")
    d = basis.size
    eye = np.eye(d)
    h0 = build_h0(config, basis)
    gamma = decay_matrix(config)
    a_ops = np.array([annihilation(basis, j) for j in range(config.n_qubits)])

    lio = -1j * (sandwich_superop(h0, eye) - sandwich_superop(eye, h0))
    # 2 sum_jk gamma_jk a_j rho a_k^+ in one pass; a_k is real in the Fock basis.
    lio += 2.0 * np.einsum("jk,kpr,jqs->pqrs", gamma, a_ops, a_ops,
                           optimize=True).reshape(d * d, d * d)
    anticomm = np.einsum("jk,jab,kbc->ac", gamma, a_ops.conj().transpose(0, 2, 1), a_ops,
                         optimize=True)
    lio -= sandwich_superop(anticomm, eye)
    lio -= sandwich_superop(eye, anticomm)
    return lio


def build_drive_superops(config: SystemConfig, basis: FockBasis) -> tuple[np.ndarray, np.ndarray]:
    """Modulation superoperator V and its complex conjugate.

    V = -i sum_j g_j exp(i phi_j) [Q_j, .] with Q_j = (a_j^+ + a_j)^2; both
    are commutators, hence traceless.
    """
    d = basis.size
    eye = np.eye(d)
    v = np.zeros((d * d, d * d), dtype=complex)
    for j in range(config.n_qubits):
        g = config.drive_amps[j]
        if g == 0.0:
            continue
        q = drive_operator(config, basis, j)
        v += (-1j * g * np.exp(1j * config.drive_phases[j])
              * (sandwich_superop(q, eye) - sandwich_superop(eye, q)))
    return v, v.conj()


def stationary_rho(config: SystemConfig, basis: FockBasis,
                   liouvillian: np.ndarray | None = None) -> FloquetSolution:
    """Stationary density matrix of the modulated array, exact at second order.

    Keeps the three Floquet harmonics n = -1, 0, 1. Because the modulation is
    a real cosine, its e^{-i Omega t} Fourier coefficient is -V* (the -i in
    front of the commutator conjugates too), so the zeroth harmonic obeys

        L rho0 = -(1/4) (V (L + i Omega)^(-1) V*
                         + V* (L - i Omega)^(-1) V) rho_vac,

    solved on the trace-zero subspace through a bordered linear system. With
    the opposite overall sign the harmonics would violate rho_{-1} = rho_1^+
    and produce negative intensities. The result is Hermitized; diagnostics
    record what that correction was.
    """
    gmax = max(abs(g) for g in config.drive_amps)
    if gmax > WEAK_DRIVE_LIMIT * config.gamma1d:
        warnings.warn(
            f"max drive amplitude {gmax:g} exceeds {WEAK_DRIVE_LIMIT:g}*gamma1d; "
            "the three-harmonic truncation is only controlled for weak drive",
            stacklevel=2)

    lio = build_liouvillian(config, basis) if liouvillian is None else liouvillian
    v_op, v_conj = build_drive_superops(config, basis)
    d = basis.size
    n2 = d * d
    rho_vac = vec(vacuum_projector(basis))
    omega = config.drive_freq

    eye2 = np.eye(n2)
    try:
        y_plus = np.linalg.solve(lio + 1j * omega * eye2, v_conj @ rho_vac)
        y_minus = np.linalg.solve(lio - 1j * omega * eye2, v_op @ rho_vac)
    except np.linalg.LinAlgError as exc:
        raise ResolventError(
            f"resolvent solve at Omega = {omega:g} failed: {exc}") from exc
    rhs = -0.25 * (v_op @ y_plus + v_conj @ y_minus)

    trace_row = trace_functional(d)
    bordered = np.zeros((n2 + 1, n2 + 1), dtype=complex)
    bordered[:n2, :n2] = lio
    bordered[:n2, n2] = trace_row.conj()
    bordered[n2, :n2] = trace_row
    rhs_b = np.concatenate([rhs, [0.0]])
    try:
        sol = np.linalg.solve(bordered, rhs_b)
    except np.linalg.LinAlgError as exc:
        raise DegenerateModelError(
            "bordered stationary system is singular; the undriven steady state is "
            "not unique (gamma1d = gamma_nr = 0?)") from exc
    x = sol[:n2]

    rhs_norm = np.linalg.norm(rhs)
    residual = (np.linalg.norm(lio @ x - rhs) / rhs_norm) if rhs_norm > 0 else 0.0

    rho0 = unvec(rho_vac + x, d)
    herm_presym = float(np.abs(rho0 - rho0.conj().T).max())
    rho0 = 0.5 * (rho0 + rho0.conj().T)
    trace_dev = abs(np.trace(rho0).real - 1.0) + abs(np.trace(rho0).imag)
    min_eig = float(np.linalg.eigvalsh(rho0).min())

    diagnostics = {
        "residual": float(residual),
        "trace_dev": float(trace_dev),
        "herm_presym": herm_presym,
        "min_eig": min_eig,
        "lagrange_multiplier": abs(sol[n2]),
    }
    return FloquetSolution(rho0=rho0, config=config, basis=basis,
                           liouvillian=lio, diagnostics=diagnostics)


def _real_expectation(value: complex, scale: float, what: str) -> float:
    if abs(value.imag) > 1e-10 * max(1.0, scale):
        raise ArithmeticError(f"{what} has non-negligible imaginary part {value.imag:g}")
    return float(value.real)


def emission_intensity(sol: FloquetSolution, op: np.ndarray) -> float:
    """Photon emission intensity Tr(op^+ op rho0) for a lowering operator op."""
    if op.shape != sol.rho0.shape:
        raise ValueError(f"operator shape {op.shape} does not match basis "
                         f"dimension {sol.rho0.shape[0]}")
    val = np.trace(op.conj().T @ op @ sol.rho0)
    return _real_expectation(val, float(np.abs(sol.rho0).max()), "intensity")


def g2_zero(sol: FloquetSolution, op: np.ndarray) -> float:
    """Equal-time pair correlation Tr(op^+ op^+ op op rho0)."""
    if op.shape != sol.rho0.shape:
        raise ValueError("operator/basis dimension mismatch")
    op2 = op @ op
    val = np.trace(op2.conj().T @ op2 @ sol.rho0)
    out = _real_expectation(val, float(np.abs(sol.rho0).max()), "pair correlation")
    if out < -1e-12:
        raise ArithmeticError(f"pair correlation came out negative: {out:g}")
    return out


def emission_spectrum(sol: FloquetSolution, op: np.ndarray,
                      omega_grid: np.ndarray) -> np.ndarray:
    """Regression-theorem emission spectrum, one resolvent solve per frequency.

    S(omega) = -(1/pi) Re Tr(op^+ unvec((L - i omega)^(-1) vec(op rho0))).
    Returns an array of (omega, S) rows; a frequency where the resolvent is
    singular is reported as NaN and skipped.
    """
    omega_grid = np.atleast_1d(np.asarray(omega_grid, dtype=float))
    lio = sol.liouvillian
    n2 = lio.shape[0]
    b = vec(op @ sol.rho0)
    w = vec(op)
    eye2 = np.eye(n2)
    out = np.empty((omega_grid.size, 2))
    for i, omega in enumerate(omega_grid):
        out[i, 0] = omega
        try:
            y = np.linalg.solve(lio - 1j * omega * eye2, b)
        except np.linalg.LinAlgError:
            warnings.warn(f"resolvent singular at omega = {omega:g}; point skipped",
                          stacklevel=2)
            out[i, 1] = np.nan
            continue
        out[i, 1] = -(1.0 / np.pi) * np.vdot(w, y).real
    return out


def g2_tau(sol: FloquetSolution, op: np.ndarray, tau_grid: np.ndarray) -> np.ndarray:
    """Delayed pair correlation G2(tau) = Tr(op^+ op e^{L tau}[op rho0 op^+]).

    Propagates the conditional state with the eigendecomposition of the
    undriven Liouvillian; at tau = 0 this reduces to :func:`g2_zero`.
    """
    tau_grid = np.atleast_1d(np.asarray(tau_grid, dtype=float))
    if np.any(tau_grid < 0):
        raise ValueError("delays must be nonnegative")
    lio = sol.liouvillian
    x0 = vec(op @ sol.rho0 @ op.conj().T)
    w = vec(op.conj().T @ op)
    lam, modes = scipy.linalg.eig(lio)
    coeff = np.linalg.solve(modes, x0)
    row = w.conj() @ modes
    out = np.empty((tau_grid.size, 2))
    for i, tau in enumerate(tau_grid):
        val = row @ (np.exp(lam * tau) * coeff)
        out[i, 0] = tau
        out[i, 1] = val.real
    return out
