"""Acceptance-criteria runner shared by the CLI and the test suite.

Each criterion is a function returning a CriterionResult with measured
values, tolerances and runtime; the runner prints one pass/fail line per
criterion and assembles a machine-readable report. All random draws are
seeded, so two consecutive runs produce identical reports up to timestamps.
"""

from __future__ import annotations

import dataclasses
import time
import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.optimize

from .hilbert import annihilation, build_basis
from .model import SystemConfig, directional_operator
from . import analytic, diagrams, master, sweep

__all__ = ["CriterionResult", "DiagnosticsLog", "run_validation", "CRITERIA"]

OMEGA0 = 1000.0
SEED = 20260809


@dataclass
class CriterionResult:
    cid: str
    description: str
    passed: bool
    measured: dict
    tolerance: dict
    runtime_s: float
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


@dataclass
class DiagnosticsLog:
    """Worst-case density-matrix diagnostics over every stationary solve."""

    trace_dev: float = 0.0
    herm_presym: float = 0.0
    min_eig_norm: float = 0.0  # min eigenvalue / (max g / gamma1d)^4, most negative
    n_solves: int = 0

    def add(self, sol: master.FloquetSolution) -> None:
        g4 = (max(abs(g) for g in sol.config.drive_amps) / sol.config.gamma1d) ** 4
        self.trace_dev = max(self.trace_dev, sol.diagnostics["trace_dev"])
        self.herm_presym = max(self.herm_presym, sol.diagnostics["herm_presym"])
        if g4 > 0:
            self.min_eig_norm = min(self.min_eig_norm, sol.diagnostics["min_eig"] / g4)
        self.n_solves += 1

    def add_scan(self, result: sweep.ScanResult) -> None:
        worst = result.provenance.get("solver_diagnostics_worst") or {}
        if not worst:
            return
        g4 = (max(abs(g) for g in result.provenance["config"]["drive_amps"])
              / result.provenance["config"]["gamma1d"]) ** 4
        self.trace_dev = max(self.trace_dev, worst.get("trace_dev", 0.0))
        self.herm_presym = max(self.herm_presym, worst.get("herm_presym", 0.0))
        if g4 > 0:
            self.min_eig_norm = min(self.min_eig_norm, worst.get("min_eig", 0.0) / g4)
        self.n_solves += 1


def _solve(cfg: SystemConfig, log: DiagnosticsLog, basis=None, lio=None):
    basis = basis if basis is not None else build_basis(cfg.n_qubits, 2)
    sol = master.stationary_rho(cfg, basis, liouvillian=lio)
    log.add(sol)
    return sol, basis


def criterion_1(log: DiagnosticsLog, n_points: int = 200) -> CriterionResult:
    """Master-engine single-qubit intensity against the exact closed form."""
    t0 = time.time()
    u = 10.0
    omegas = np.linspace(2 * OMEGA0 - 20, 2 * OMEGA0 + u + 20, n_points)
    basis = build_basis(1, 2)
    lio = None
    worst = 0.0
    for om in omegas:
        cfg = SystemConfig(n_qubits=1, anharmonicity=u, qd=0.0, drive_amps=(0.01,),
                           drive_phases=(0.0,), drive_freq=om, omega0=OMEGA0)
        if lio is None:
            lio = master.build_liouvillian(cfg, basis)
        sol, _ = _solve(cfg, log, basis, lio)
        i_m = master.emission_intensity(sol, annihilation(basis, 0))
        worst = max(worst, abs(i_m / analytic.i1_single(cfg) - 1.0))
    runtime = time.time() - t0
    return CriterionResult(
        cid="C1", description="single-qubit intensity vs closed form",
        passed=bool(worst < 1e-8 and runtime < 5.0),
        measured={"max_rel_error": worst, "points": n_points},
        tolerance={"max_rel_error": 1e-8, "runtime_s": 5.0}, runtime_s=runtime)


def _fit_two_resonances(omega: np.ndarray, s: np.ndarray, guesses) -> list[tuple[float, float]]:
    """Simultaneous fit of two skewed resonances A(1+b dx)/(dx^2 + w^2).

    The lines overlap at moderate anharmonicity, so fitting them together is
    the only way to measure the individual half-widths without tail bias.
    Returns [(center, half_width), ...] in the order of the guesses.
    """

    def model(w, a1, b1, x1, hw1, a2, b2, x2, hw2):
        return (a1 * (1 + b1 * (w - x1)) / ((w - x1) ** 2 + hw1 ** 2)
                + a2 * (1 + b2 * (w - x2)) / ((w - x2) ** 2 + hw2 ** 2))

    (c1, w1), (c2, w2) = guesses
    a1 = s[np.argmin(np.abs(omega - c1))] * w1 ** 2
    a2 = s[np.argmin(np.abs(omega - c2))] * w2 ** 2
    p0 = (a1, 0.0, c1, w1, a2, 0.0, c2, w2)
    popt, _ = scipy.optimize.curve_fit(model, omega, s, p0=p0, maxfev=20000)
    return [(popt[2], abs(popt[3])), (popt[6], abs(popt[7]))]


def criterion_2(log: DiagnosticsLog, n_points: int = 200) -> CriterionResult:
    """Single-qubit emission spectrum: lineshape, peaks, widths, integral."""
    t0 = time.time()
    u, g = 10.0, 0.1
    cfg = SystemConfig(n_qubits=1, anharmonicity=u, qd=0.0, drive_amps=(g,),
                       drive_phases=(0.0,), drive_freq=2 * OMEGA0 + u, omega0=OMEGA0)
    sol, basis = _solve(cfg, log)
    a = annihilation(basis, 0)
    omegas = np.linspace(OMEGA0 - 10, OMEGA0 + u + 10, n_points)
    spec = master.emission_spectrum(sol, a, omegas)[:, 1]
    ref = analytic.spectrum_single(cfg, omegas)
    rel = float(np.abs(spec / ref - 1.0).max())

    step = omegas[1] - omegas[0]
    low_half = omegas < OMEGA0 + u / 2
    i_peak1 = int(np.argmax(np.where(low_half, spec, -np.inf)))
    i_peak2 = int(np.argmax(np.where(~low_half, spec, -np.inf)))
    # The skewed lineshape displaces each apex from the nominal transition
    # frequency by an intrinsic amount (order gamma^2/U); measure it from the
    # closed form on a fine grid and allow it on top of the grid resolution.
    fine = np.linspace(OMEGA0 - 3, OMEGA0 + 3, 6001)
    shift1 = abs(fine[np.argmax(analytic.spectrum_single(cfg, fine))] - OMEGA0)
    fine = np.linspace(OMEGA0 + u - 3, OMEGA0 + u + 3, 6001)
    shift2 = abs(fine[np.argmax(analytic.spectrum_single(cfg, fine))] - (OMEGA0 + u))
    peak_err1 = abs(omegas[i_peak1] - OMEGA0)
    peak_err2 = abs(omegas[i_peak2] - (OMEGA0 + u))
    peak_tol1 = step + shift1
    peak_tol2 = step + shift2
    fits = _fit_two_resonances(omegas, spec,
                               [(OMEGA0, cfg.gamma_sigma),
                                (OMEGA0 + u, 3 * cfg.gamma_sigma)])
    w1_err = abs(fits[0][1] / cfg.gamma_sigma - 1.0)
    w2_err = abs(fits[1][1] / (3 * cfg.gamma_sigma) - 1.0)

    # Spectral weight: the Lorentzian wings carry ~4/(pi*W) of the total, so
    # the integration window must extend a few hundred linewidths to make a
    # 0.5 % comparison against the intensity meaningful.
    wide = np.concatenate([
        np.linspace(OMEGA0 - 300, OMEGA0 - 15, 600, endpoint=False),
        np.linspace(OMEGA0 - 15, OMEGA0 + u + 15, 4000, endpoint=False),
        np.linspace(OMEGA0 + u + 15, OMEGA0 + u + 300, 600),
    ])
    s_wide = master.emission_spectrum(sol, a, wide)[:, 1]
    integral = float(np.trapezoid(s_wide, wide))
    i1 = master.emission_intensity(sol, a)
    int_err = abs(integral / i1 - 1.0)

    runtime = time.time() - t0
    passed = (rel < 1e-6 and peak_err1 <= peak_tol1 and peak_err2 <= peak_tol2
              and w1_err < 0.05 and w2_err < 0.05 and int_err < 0.005
              and runtime < 30.0)
    return CriterionResult(
        cid="C2", description="single-qubit spectrum vs closed form",
        passed=bool(passed),
        measured={"max_rel_error": rel, "peak1_offset": peak_err1,
                  "peak2_offset": peak_err2, "halfwidth1_rel_err": w1_err,
                  "halfwidth2_rel_err": w2_err, "integral_rel_err": int_err},
        tolerance={"max_rel_error": 1e-6, "peak1_offset": peak_tol1,
                   "peak2_offset": peak_tol2,
                   "halfwidth_rel_err": 0.05, "integral_rel_err": 0.005,
                   "runtime_s": 30.0},
        runtime_s=runtime,
        notes=["peak tolerances are one grid step plus the intrinsic apex "
               "displacement of the exact lineshape (the skewed second peak "
               "sits ~0.3 gamma_1D below its nominal frequency)",
               "integral window widened to +-300 gamma_1D: the two Lorentzian "
               "wings carry ~2.5% of the weight outside +-50 gamma_1D, which "
               "would dominate a 0.5% comparison"])


def criterion_3(log: DiagnosticsLog) -> CriterionResult:
    """Exact quadratic scaling of every observable in the drive amplitude."""
    t0 = time.time()
    base = SystemConfig(n_qubits=2, anharmonicity=10.0, qd=0.9,
                        drive_amps=(0.02, 0.014), drive_phases=(0.0, 1.1),
                        drive_freq=2 * OMEGA0 + 10.7, omega0=OMEGA0, gamma_nr=0.05)
    ratios = {}
    values = {}
    for scale in (1.0, 0.5):
        cfg = base.replace(drive_amps=tuple(scale * g for g in base.drive_amps))
        sol, basis = _solve(cfg, log)
        p_m = directional_operator(cfg, basis, "left")
        p_p = directional_operator(cfg, basis, "right")
        taus = np.array([0.0, 0.7, 2.1])
        oms = OMEGA0 + np.array([-1.0, 0.3, 10.0])
        values[scale] = {
            "I1": sum(master.emission_intensity(sol, annihilation(basis, j))
                      for j in range(2)),
            "I_minus": master.emission_intensity(sol, p_m),
            "I_plus": master.emission_intensity(sol, p_p),
            "G2mm": master.g2_zero(sol, p_m),
            **{f"S({k})": v for k, v in
               enumerate(master.emission_spectrum(sol, p_m, oms)[:, 1])},
            **{f"G2(tau{k})": v for k, v in
               enumerate(master.g2_tau(sol, p_m, taus)[:, 1])},
        }
    worst = 0.0
    for key in values[1.0]:
        ratio = values[1.0][key] / values[0.5][key]
        ratios[key] = ratio
        worst = max(worst, abs(ratio / 4.0 - 1.0))
    runtime = time.time() - t0
    return CriterionResult(
        cid="C3", description="observables scale exactly as drive amplitude squared",
        passed=bool(worst < 1e-10 and runtime < 10.0),
        measured={"max_ratio_deviation": worst, "ratios": ratios},
        tolerance={"max_ratio_deviation": 1e-10, "runtime_s": 10.0},
        runtime_s=runtime)


def criterion_4(log: DiagnosticsLog, n_points: int = 100) -> CriterionResult:
    """Symmetric two-qubit closed forms: values, antibunching zero, minimum."""
    t0 = time.time()
    u, g = 10.0, 0.01
    basis = build_basis(2, 2)
    worst_i = worst_g2 = 0.0
    g2_at_zero_ok = True
    min_loc_ok = True
    details = {}
    for qd in (0.3, 1.0, 2.0):
        cfg0 = SystemConfig(n_qubits=2, anharmonicity=u, qd=qd,
                            drive_amps=(g, g), drive_phases=(0.0, 0.0),
                            drive_freq=2 * OMEGA0, omega0=OMEGA0)
        lio = master.build_liouvillian(cfg0, basis)
        p_m = directional_operator(cfg0, basis, "left")
        p_p = directional_operator(cfg0, basis, "right")
        omegas = np.linspace(2 * OMEGA0 - 10, 2 * OMEGA0 + u + 10, n_points)
        i_sum_m = np.empty(n_points)
        g2_m = np.empty(n_points)
        i_sum_ref = np.empty(n_points)
        g2_ref = np.empty(n_points)
        for k, om in enumerate(omegas):
            cfg = cfg0.replace(drive_freq=om)
            sol, _ = _solve(cfg, log, basis, lio)
            i_sum_m[k] = (master.emission_intensity(sol, p_m)
                          + master.emission_intensity(sol, p_p))
            g2_m[k] = master.g2_zero(sol, p_m)
            ref = analytic.two_qubit_symmetric(cfg)
            i_sum_ref[k] = ref.i_sum.value.real
            g2_ref[k] = ref.g2_mm.value.real
        # uniform-norm deviation relative to the scan maximum: both maps have
        # exact zeros where a pointwise ratio is undefined
        worst_i = max(worst_i, float(np.abs(i_sum_m - i_sum_ref).max() / i_sum_ref.max()))
        worst_g2 = max(worst_g2, float(np.abs(g2_m - g2_ref).max() / g2_ref.max()))

        special = analytic.two_qubit_symmetric(cfg0)
        cfg_zero = cfg0.replace(drive_freq=special.g2_zero_omega)
        sol, _ = _solve(cfg_zero, log, basis, lio)
        g2_zero_val = master.g2_zero(sol, p_m)
        if g2_zero_val > 1e-6 * g2_m.max():
            g2_at_zero_ok = False
        step = omegas[1] - omegas[0]
        # The antibunching-adjacent intensity dip is an interior local
        # minimum of the single-excitation band, not the global minimum of
        # the scan (the intensity keeps falling toward the window edges).
        band = np.abs(omegas - 2 * OMEGA0) < 5.0
        dips = [j for j in range(1, n_points - 1)
                if band[j] and i_sum_m[j] < i_sum_m[j - 1]
                and i_sum_m[j] <= i_sum_m[j + 1]]
        if dips:
            j_min = min(dips, key=lambda j: i_sum_m[j])
            loc_err = abs(omegas[j_min] - special.i_min_omega)
        else:
            loc_err = np.inf
        if loc_err > 2 * step:
            min_loc_ok = False
        details[f"qd={qd}"] = {"i_dev": float(np.abs(i_sum_m - i_sum_ref).max()
                                              / i_sum_ref.max()),
                               "g2_dev": float(np.abs(g2_m - g2_ref).max()
                                               / g2_ref.max()),
                               "g2_at_zero_over_max": float(g2_zero_val / g2_m.max()),
                               "min_loc_err_steps": float(loc_err / step)}
    runtime = time.time() - t0
    passed = (worst_i < 1e-4 and worst_g2 < 1e-4 and g2_at_zero_ok and min_loc_ok
              and runtime < 120.0)
    return CriterionResult(
        cid="C4", description="two-qubit symmetric closed forms (any U)",
        passed=bool(passed),
        measured={"max_intensity_dev": worst_i, "max_g2_dev": worst_g2,
                  "per_qd": details},
        tolerance={"max_dev_rel_to_scan_max": 1e-4, "g2_at_zero": 1e-6,
                   "min_location_steps": 2, "runtime_s": 120.0},
        runtime_s=runtime,
        notes=["deviations measured relative to the per-scan maximum; both "
               "quantities have exact zeros where pointwise ratios diverge",
               "the closed-form intensity expression equals I_minus + I_plus "
               "(each direction carries half by mirror symmetry)",
               "the intensity-minimum location formula is a small-qd "
               "approximation: at qd = 1.0 the closed form itself has no "
               "interior minimum in the band (the dip floor term fills it "
               "in), so that sub-check cannot pass as stated"])


def criterion_5(log: DiagnosticsLog, n_grid: int = 21) -> CriterionResult:
    """Strong-anharmonicity interference forms and emission directivity."""
    t0 = time.time()
    u, g = 100.0, 0.01
    qds = np.linspace(0.02, np.pi - 0.02, n_grid)
    phis = np.linspace(0.0, 2 * np.pi, n_grid)
    basis = build_basis(2, 2)
    i_m = np.empty((n_grid, n_grid))
    i_p = np.empty((n_grid, n_grid))
    g2 = np.empty((n_grid, n_grid))
    i_ref = np.empty((n_grid, n_grid))
    g2_ref = np.empty((n_grid, n_grid))
    for a, qd in enumerate(qds):
        cfg_row = SystemConfig(n_qubits=2, anharmonicity=u, qd=qd,
                               drive_amps=(g, g), drive_phases=(0.0, 0.0),
                               drive_freq=2 * OMEGA0 + u, omega0=OMEGA0)
        lio = master.build_liouvillian(cfg_row, basis)
        p_minus = directional_operator(cfg_row, basis, "left")
        p_plus = directional_operator(cfg_row, basis, "right")
        for b, phi in enumerate(phis):
            cfg = cfg_row.replace(drive_phases=(0.0, phi))
            sol, _ = _solve(cfg, log, basis, lio)
            i_m[a, b] = master.emission_intensity(sol, p_minus)
            i_p[a, b] = master.emission_intensity(sol, p_plus)
            g2[a, b] = master.g2_zero(sol, p_minus)
            ref = analytic.two_qubit_highU(cfg)
            i_ref[a, b] = ref.i_minus_resonant.value.real
            g2_ref[a, b] = ref.g2_mm_resonant.value.real
    i_dev = float(np.abs(i_m - i_ref).max() / i_ref.max())
    g2_dev = float(np.abs(g2 - g2_ref).max() / g2_ref.max())

    directivity = (i_m - i_p) / (i_m + i_p)
    a_max, b_max = np.unravel_index(int(np.argmax(directivity)), directivity.shape)
    d_max = float(directivity[a_max, b_max])
    d_ref = np.sqrt(2.0) / 8.0
    d_val_err = abs(d_max / d_ref - 1.0)
    qd_step = qds[1] - qds[0]
    phi_step = phis[1] - phis[0]
    pos_ok = (abs(qds[a_max] - np.arctan(2 * np.sqrt(2)) / 2) <= 2 * qd_step
              and min(abs(phis[b_max] - np.pi / 2),
                      abs(phis[b_max] - np.pi / 2 - 2 * np.pi)) <= 2 * phi_step)
    runtime = time.time() - t0
    passed = (i_dev < 0.02 and g2_dev < 0.02 and d_val_err < 0.01 and pos_ok
              and runtime < 300.0)
    return CriterionResult(
        cid="C5", description="strong-anharmonicity interference and directivity",
        passed=bool(passed),
        measured={"i_minus_dev": i_dev, "g2_dev": g2_dev,
                  "directivity_max": d_max, "directivity_rel_err": d_val_err,
                  "directivity_pos": [float(qds[a_max]), float(phis[b_max])],
                  "position_ok": bool(pos_ok)},
        tolerance={"map_dev_rel_to_scan_max": 0.02, "directivity_rel_err": 0.01,
                   "position_steps": 2, "runtime_s": 300.0},
        runtime_s=runtime,
        notes=["the interference forms are strong-anharmonicity asymptotes; "
               "their residual finite-U corrections scale as ~2/U "
               "(measured: 1.8%/0.9%/0.2% at U=100/200/1000 for the "
               "directivity), so the 2%/1% targets are not reachable at the "
               "stated U=100; the failure is expected and documented"])


def _random_configs(rng: np.random.Generator, count: int,
                    g_max: float = 0.02) -> list[SystemConfig]:
    configs = []
    for _ in range(count):
        n = int(rng.integers(1, 4))
        u = float(rng.uniform(3.0, 25.0))
        configs.append(SystemConfig(
            n_qubits=n, anharmonicity=u, qd=float(rng.uniform(0.25, 2.85)),
            drive_amps=tuple(rng.uniform(0.2 * g_max, g_max, n)),
            drive_phases=tuple(rng.uniform(0.0, 2 * np.pi, n)),
            drive_freq=float(2 * OMEGA0 + u + rng.uniform(-0.5, 0.5)),
            omega0=OMEGA0))
    return configs


def criterion_6(log: DiagnosticsLog, n_configs: int = 10) -> CriterionResult:
    """Pump unitarity: quartic residual scaling and intensity-sum proportionality."""
    t0 = time.time()
    rng = np.random.default_rng(SEED)
    configs = _random_configs(rng, n_configs)
    worst_scaling = 0.0
    ratios = []
    for cfg in configs:
        s1, i1 = diagrams.optical_theorem(cfg)
        res1 = 2 - 2 * abs(s1) ** 2 - i1
        half = cfg.replace(drive_amps=tuple(0.5 * g for g in cfg.drive_amps))
        s2, i2 = diagrams.optical_theorem(half)
        res2 = 2 - 2 * abs(s2) ** 2 - i2
        worst_scaling = max(worst_scaling, abs(res1 / res2 / 16.0 - 1.0))
        sol, basis = _solve(cfg, log)
        master_sum = (master.emission_intensity(
            sol, directional_operator(cfg, basis, "left"))
            + master.emission_intensity(
                sol, directional_operator(cfg, basis, "right")))
        ratios.append(master_sum / i1)
    ratios = np.array(ratios)
    constant = float(ratios.mean())
    spread = float(np.abs(ratios - constant).max())
    runtime = time.time() - t0
    passed = worst_scaling < 0.05 and spread < 1e-6 and runtime < 60.0
    return CriterionResult(
        cid="C6", description="pump unitarity and intensity-sum normalization",
        passed=bool(passed),
        measured={"worst_quartic_scaling_dev": worst_scaling,
                  "intensity_sum_constant": constant, "constant_spread": spread},
        tolerance={"quartic_scaling_dev": 0.05, "constant_spread": 1e-6,
                   "runtime_s": 60.0},
        runtime_s=runtime,
        notes=["the unitarity-normalized intensity counts both photons of a "
               "pair, so the master-equation sum is half of it: the constant "
               "is 1/2 up to counter-rotating corrections of order 1e-7"])


def criterion_7(log: DiagnosticsLog, n_configs: int = 20) -> CriterionResult:
    """Equal-time pair correlation: diagrammatic vs master over random configs."""
    t0 = time.time()
    rng = np.random.default_rng(SEED + 1)
    configs = _random_configs(rng, n_configs, g_max=0.02)
    def measure(omega0_scale: float) -> np.ndarray:
        out = []
        for cfg in configs:
            if omega0_scale != 1.0:
                w0 = cfg.omega0 * omega0_scale
                cfg = cfg.replace(omega0=w0,
                                  drive_freq=cfg.drive_freq
                                  + 2 * (w0 - OMEGA0))
            sol, basis = _solve(cfg, log)
            g2_m = master.g2_zero(sol, directional_operator(cfg, basis, "left"))
            out.append(g2_m / diagrams.g2_zero_diagram(cfg))
        return np.array(out)

    ratios = measure(1.0)
    constant = float(ratios.mean())
    spread = float(np.abs(ratios - constant).max())
    # Control measurement: the spread is set by the master engine's
    # counter-rotating terms, which scale as 1/omega0^2; at 10x omega0 the
    # same configs must collapse onto one constant two orders tighter.
    ratios_hi = measure(10.0)
    spread_hi = float(np.abs(ratios_hi - ratios_hi.mean()).max())
    runtime = time.time() - t0
    passed = spread < 1e-6 and runtime < 120.0
    return CriterionResult(
        cid="C7", description="cross-engine pair correlation ratio",
        passed=bool(passed),
        measured={"ratio_constant": constant, "constant_spread": spread,
                  "constant_spread_at_10x_omega0": spread_hi,
                  "n_configs": n_configs},
        tolerance={"constant_spread": 1e-6, "runtime_s": 120.0},
        runtime_s=runtime,
        notes=["the constant is 1 up to the master engine's counter-rotating "
               "contributions; a config landing near an antibunching zero "
               "amplifies them past 1e-6 at the default omega0 = 1000, while "
               "the 10x-omega0 control shows the engines themselves agree"])


def criterion_8(log: DiagnosticsLog, n_draws: int = 5) -> CriterionResult:
    """Pair propagator: closed form against adaptive quadrature."""
    t0 = time.time()
    rng = np.random.default_rng(SEED + 2)
    worst = 0.0
    for _ in range(n_draws):
        cfg = SystemConfig(n_qubits=2, anharmonicity=10.0,
                           qd=float(rng.uniform(0.2, 2.9)),
                           drive_amps=(0.01, 0.01), drive_phases=(0.0, 0.0),
                           drive_freq=float(2 * OMEGA0 + rng.uniform(-6.0, 16.0)),
                           omega0=OMEGA0)
        closed = diagrams.pair_propagator(cfg)
        quad = diagrams.pair_propagator_quadrature(cfg)
        worst = max(worst, float(np.abs(closed - quad).max() / np.abs(closed).max()))
    runtime = time.time() - t0
    return CriterionResult(
        cid="C8", description="pair propagator closed form vs quadrature",
        passed=bool(worst < 1e-6 and runtime < 30.0),
        measured={"max_rel_error": worst, "draws": n_draws},
        tolerance={"max_rel_error": 1e-6, "runtime_s": 30.0}, runtime_s=runtime)


def _ridge_slopes(result: sweep.ScanResult) -> tuple[list[float], dict]:
    """Fit the two sharp ridge lines of the four-qubit correlation map.

    Per qd row, locate interior local maxima of the correlation over Omega,
    refine each by parabolic interpolation, keep the two most prominent below
    the bare pair frequency, then least-squares fit Omega(qd) per branch.
    """
    qds = result.axis_values[0]
    omegas = result.axis_values[1]
    g2 = result.column("G2mm", "master")
    lower, upper = [], []
    for i, qd in enumerate(qds):
        row = g2[i]
        peaks = []
        for j in range(1, len(omegas) - 1):
            if row[j] > row[j - 1] and row[j] >= row[j + 1] and omegas[j] < 2 * OMEGA0 - 1e-9:
                # Sub-step refinement assuming a local Lorentzian: the ridges
                # are narrower than the grid spacing, so the flanking samples
                # lie on the ridge's own tails and fix its center through
                # the inverse-value differences.
                y0, y1, y2 = row[j - 1:j + 2]
                x0, x1, x2 = omegas[j - 1:j + 2]
                d_left = 1.0 / y0 - 1.0 / y1
                d_right = 1.0 / y2 - 1.0 / y1
                if d_right != 0 and np.isfinite(d_left / d_right):
                    ratio = d_left / d_right
                    center = (x0 + x1 * (1 + ratio) + ratio * x2) / (2 * (1 + ratio))
                    center = min(max(center, x0), x2)
                else:
                    center = x1
                peaks.append((row[j], center))
        peaks.sort(reverse=True)
        if len(peaks) >= 2:
            om_pair = sorted([peaks[0][1], peaks[1][1]])
            lower.append((qd, om_pair[0]))
            upper.append((qd, om_pair[1]))
    slopes = []
    for branch in (lower, upper):
        arr = np.array(branch)
        # All collective levels coincide with the bare pair frequency at
        # qd = 0, so the dispersion passes through the origin exactly; fit
        # detuning = b*qd + c*qd^2 with the intercept pinned and read b.
        q = arr[:, 0]
        det = arr[:, 1] - 2 * OMEGA0
        design = np.column_stack([q, q * q])
        coeffs, *_ = np.linalg.lstsq(design, det, rcond=None)
        slopes.append(float(coeffs[0]))
    return slopes, {"rows_with_two_peaks": len(lower), "rows_total": len(qds)}


def criterion_9(log: DiagnosticsLog, grid: tuple[int, int] = (61, 61)) -> CriterionResult:
    """Four-qubit map: subradiant ridge dispersion slopes."""
    t0 = time.time()
    spec = sweep.figure_preset("fig6", grid=grid)
    result = sweep.run_scan(spec)
    log.add_scan(result)
    slopes, info = _ridge_slopes(result)
    expected = sorted([-14.0 / 3.0, -2.0])
    slopes_sorted = sorted(slopes)
    errs = [abs(s / e - 1.0) for s, e in zip(slopes_sorted, expected)]
    runtime = time.time() - t0
    passed = all(e < 0.10 for e in errs) and runtime < 900.0
    return CriterionResult(
        cid="C9", description="four-qubit subradiant ridge slopes",
        passed=bool(passed),
        measured={"fitted_slopes": slopes_sorted, "expected": expected,
                  "rel_errors": errs, **info},
        tolerance={"slope_rel_err": 0.10, "runtime_s": 900.0}, runtime_s=runtime)


def criterion_10(log: DiagnosticsLog) -> CriterionResult:
    """Density-matrix invariants over every solve performed by criteria 1-9."""
    passed = (log.trace_dev < 1e-12 and log.herm_presym < 1e-9
              and log.min_eig_norm >= -10.0)
    return CriterionResult(
        cid="C10", description="density-matrix invariants across all solves",
        passed=bool(passed),
        measured={"max_trace_dev": log.trace_dev,
                  "max_herm_presym": log.herm_presym,
                  "min_eigenvalue_over_g4": log.min_eig_norm,
                  "n_solves": log.n_solves},
        tolerance={"trace_dev": 1e-12, "herm_presym": 1e-9,
                   "min_eigenvalue_over_g4": -10.0},
        runtime_s=0.0)


CRITERIA = {
    "C1": criterion_1, "C2": criterion_2, "C3": criterion_3, "C4": criterion_4,
    "C5": criterion_5, "C6": criterion_6, "C7": criterion_7, "C8": criterion_8,
    "C9": criterion_9, "C10": criterion_10,
}


def run_validation(level: str = "quick", echo=print) -> dict:
    """Run the acceptance suite; 'quick' is a reduced single-qubit + unitarity set."""
    if level not in ("quick", "full"):
        raise ValueError(f"level must be 'quick' or 'full', got {level!r}")
    log = DiagnosticsLog()
    results: list[CriterionResult] = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        if level == "quick":
            results.append(criterion_1(log, n_points=50))
            results.append(criterion_2(log, n_points=120))
            results.append(criterion_6(log, n_configs=3))
            results.append(criterion_10(log))
        else:
            for cid in ("C1", "C2", "C3", "C4", "C5", "C6", "C7", "C8", "C9"):
                results.append(CRITERIA[cid](log))
            results.append(criterion_10(log))
    for res in results:
        status = "PASS" if res.passed else "FAIL"
        echo(f"{status} {res.cid}: {res.description} ({res.runtime_s:.1f}s)")
    report = {
        "level": level,
        "all_passed": all(r.passed for r in results),
        "criteria": [r.to_dict() for r in results],
    }
    return report
