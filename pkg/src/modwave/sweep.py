"""Parameter scans, figure presets and delimited/JSON result emission.

A scan evaluates observables over a rectangular grid of one or two swept
parameters, per engine (master equation, diagrammatic, closed forms). Grid
points are independent; per-point failures are masked, never fatal. Output
is a CSV table with a commented header carrying the full configuration
snapshot (all frequencies in units of gamma_1D) or an equivalent JSON
document; both round-trip losslessly at full float precision.
"""

from __future__ import annotations

import concurrent.futures
import datetime
import json
import time
import warnings
from dataclasses import dataclass

import numpy as np

from . import __version__
from .hilbert import annihilation, build_basis
from .model import SystemConfig, directional_operator, single_excitation_hamiltonian, \
    two_excitation_hamiltonian
from . import analytic, diagrams, master

__all__ = [
    "AXIS_PARAMETERS",
    "OBSERVABLES",
    "ENGINES",
    "FIGURE_IDS",
    "ScanSpec",
    "ScanResult",
    "run_scan",
    "figure_preset",
    "write_csv",
    "read_csv",
    "write_json",
    "read_json",
    "write_result",
]

AXIS_PARAMETERS = ("Omega", "qd", "phi_j", "U", "omega_scan")
OBSERVABLES = ("I1", "I_minus", "I_plus", "G2mm", "spectrum", "directivity")
ENGINES = ("master", "diagrams", "analytic", "all")
FIGURE_IDS = ("fig2", "fig3a", "fig3b", "fig3c", "fig3d",
              "fig4a", "fig4b", "fig4c", "fig4d", "fig5a", "fig5b", "fig6")

_ENGINE_SUPPORT = {
    "master": {"I1", "I_minus", "I_plus", "G2mm", "spectrum", "directivity"},
    "diagrams": {"I_minus", "I_plus", "G2mm", "directivity"},
    "analytic": {"I1", "I_minus", "I_plus", "G2mm", "spectrum", "directivity"},
}

UNITS_NOTE = "all frequencies in units of gamma_1D"


@dataclass(frozen=True)
class ScanSpec:
    """Grid description: base configuration, swept axes, observables, engine.

    ``axis2`` may be None for one-dimensional scans. ``phi_j`` sweeps a
    linear modulation-phase ramp phi_j = (j-1)*value across the array (for
    two qubits: phases (0, value)); ``omega_scan`` is the emission frequency
    of the spectrum observable and does not alter the configuration.
    """

    base: SystemConfig
    axis1: tuple[str, tuple[float, ...]]
    axis2: tuple[str, tuple[float, ...]] | None
    observables: tuple[str, ...]
    engine: str = "master"
    per_mode_cutoff: int = 2
    total_cutoff: int | None = None
    overlays: tuple[str, ...] = ()
    figure_id: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "axis1", (self.axis1[0], tuple(float(v) for v in self.axis1[1])))
        if self.axis2 is not None:
            object.__setattr__(self, "axis2",
                               (self.axis2[0], tuple(float(v) for v in self.axis2[1])))
        object.__setattr__(self, "observables", tuple(self.observables))
        for name, values in self._axes():
            if name not in AXIS_PARAMETERS:
                raise ValueError(f"unknown axis parameter {name!r}; "
                                 f"choose from {AXIS_PARAMETERS}")
            if len(values) < 1:
                raise ValueError(f"axis {name!r} has no values")
            if not all(np.isfinite(values)):
                raise ValueError(f"axis {name!r} has non-finite values")
        names = [name for name, _ in self._axes()]
        if len(set(names)) != len(names):
            raise ValueError("axis parameters must be distinct")
        if not self.observables:
            raise ValueError("no observables requested")
        for obs in self.observables:
            if obs not in OBSERVABLES:
                raise ValueError(f"unknown observable {obs!r}; choose from {OBSERVABLES}")
        if self.engine not in ENGINES:
            raise ValueError(f"unknown engine {self.engine!r}; choose from {ENGINES}")
        for eng in self.engines():
            missing = set(self.observables) - _ENGINE_SUPPORT[eng]
            if self.engine != "all" and missing:
                raise ValueError(f"engine {eng!r} does not support observables "
                                 f"{sorted(missing)}")
        if "spectrum" in self.observables and "omega_scan" not in names:
            raise ValueError("the spectrum observable needs an omega_scan axis")
        if "spectrum" in self.observables and self.engine == "diagrams":
            raise ValueError("the spectrum observable requires the master engine")

    def _axes(self):
        yield self.axis1
        if self.axis2 is not None:
            yield self.axis2

    def engines(self) -> tuple[str, ...]:
        if self.engine == "all":
            return ("master", "diagrams", "analytic")
        return (self.engine,)

    def shape(self) -> tuple[int, int]:
        n1 = len(self.axis1[1])
        n2 = len(self.axis2[1]) if self.axis2 is not None else 1
        return n1, n2


@dataclass
class ScanResult:
    """Rectangular scan output with axis metadata, masks and provenance."""

    axis_names: tuple[str, ...]
    axis_values: tuple[np.ndarray, ...]
    data: dict[str, np.ndarray]
    mask: dict[str, np.ndarray]
    overlays: dict[str, np.ndarray]
    overlay_axis: int
    provenance: dict

    def column(self, observable: str, engine: str) -> np.ndarray:
        return self.data[f"{observable}:{engine}"]


def _config_at(base: SystemConfig, assignments: dict[str, float]) -> SystemConfig:
    cfg = base
    for name, value in assignments.items():
        if name == "Omega":
            cfg = cfg.replace(drive_freq=value)
        elif name == "qd":
            cfg = cfg.replace(qd=value)
        elif name == "U":
            cfg = cfg.replace(anharmonicity=value)
        elif name == "phi_j":
            cfg = cfg.replace(drive_phases=tuple(j * value for j in range(base.n_qubits)))
        elif name == "omega_scan":
            pass
        else:
            raise ValueError(f"unknown axis parameter {name!r}")
    return cfg


class _MasterCache:
    """Per-process cache of bases and Liouvillians keyed by what they depend on."""

    def __init__(self, per_mode_cutoff: int, total_cutoff: int | None):
        self.per_mode_cutoff = per_mode_cutoff
        self.total_cutoff = total_cutoff
        self._bases: dict[int, object] = {}
        self._lious: dict[tuple, np.ndarray] = {}

    def basis(self, n_qubits: int):
        if n_qubits not in self._bases:
            self._bases[n_qubits] = build_basis(n_qubits, self.per_mode_cutoff,
                                                self.total_cutoff)
        return self._bases[n_qubits]

    def liouvillian(self, cfg: SystemConfig) -> np.ndarray:
        key = (cfg.n_qubits, cfg.omega0, cfg.gamma1d, cfg.gamma_nr,
               cfg.anharmonicity, cfg.qd)
        if key not in self._lious:
            if len(self._lious) > 8:
                self._lious.clear()
            self._lious[key] = master.build_liouvillian(cfg, self.basis(cfg.n_qubits))
        return self._lious[key]


def _master_point(cfg: SystemConfig, omega_scan: float | None, observables,
                  cache: _MasterCache) -> tuple[dict[str, float], dict]:
    basis = cache.basis(cfg.n_qubits)
    lio = cache.liouvillian(cfg)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        sol = master.stationary_rho(cfg, basis, liouvillian=lio)
    out: dict[str, float] = {}
    need_pm = {"I_minus", "G2mm", "directivity"} & set(observables)
    need_pp = {"I_plus", "directivity"} & set(observables)
    p_minus = directional_operator(cfg, basis, "left") if need_pm else None
    p_plus = directional_operator(cfg, basis, "right") if need_pp else None
    if "I1" in observables:
        total = sum(emission for emission in (
            master.emission_intensity(sol, annihilation(basis, j))
            for j in range(cfg.n_qubits)))
        out["I1"] = total
    if "I_minus" in observables:
        out["I_minus"] = master.emission_intensity(sol, p_minus)
    if "I_plus" in observables:
        out["I_plus"] = master.emission_intensity(sol, p_plus)
    if "G2mm" in observables:
        out["G2mm"] = master.g2_zero(sol, p_minus)
    if "directivity" in observables:
        i_m = out.get("I_minus", master.emission_intensity(sol, p_minus))
        i_p = out.get("I_plus", master.emission_intensity(sol, p_plus))
        out["directivity"] = (i_m - i_p) / (i_m + i_p) if (i_m + i_p) != 0 else 0.0
    if "spectrum" in observables:
        op = (annihilation(basis, 0) if cfg.n_qubits == 1
              else directional_operator(cfg, basis, "left"))
        out["spectrum"] = float(master.emission_spectrum(sol, op,
                                                         np.array([omega_scan]))[0, 1])
    return out, sol.diagnostics


def _diagrams_point(cfg: SystemConfig, observables) -> dict[str, float]:
    out: dict[str, float] = {}
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        if {"I_minus", "I_plus", "directivity"} & set(observables):
            i_m, i_p = diagrams.emission_intensities_diagram(cfg)
            if "I_minus" in observables:
                out["I_minus"] = i_m
            if "I_plus" in observables:
                out["I_plus"] = i_p
            if "directivity" in observables:
                out["directivity"] = (i_m - i_p) / (i_m + i_p) if (i_m + i_p) != 0 else 0.0
        if "G2mm" in observables:
            out["G2mm"] = diagrams.g2_zero_diagram(cfg)
    return out


def _analytic_point(cfg: SystemConfig, omega_scan: float | None,
                    observables) -> dict[str, float]:
    out: dict[str, float] = {}
    if cfg.n_qubits == 1:
        if "I1" in observables:
            out["I1"] = analytic.i1_single(cfg)
        for key in ("I_minus", "I_plus"):
            if key in observables:
                out[key] = analytic.i1_single(cfg)
        if "directivity" in observables:
            out["directivity"] = 0.0
        if "G2mm" in observables:
            raise ValueError("no single-qubit closed form for G2mm is provided")
        if "spectrum" in observables:
            out["spectrum"] = float(analytic.spectrum_single(cfg, omega_scan))
        return out
    if cfg.n_qubits != 2:
        raise ValueError("closed forms cover one or two qubits only")
    if "spectrum" in observables or "I1" in observables:
        raise ValueError("spectrum/I1 closed forms exist for a single qubit only")
    amps = [g * np.exp(-1j * p) for g, p in zip(cfg.drive_amps, cfg.drive_phases)]
    symmetric = abs(amps[0] - amps[1]) <= 1e-12 * max(abs(amps[0]), abs(amps[1]), 1e-300)
    if symmetric and cfg.gamma_nr == 0.0:
        ref = analytic.two_qubit_symmetric(cfg)
        values = {"I_minus": ref.i_each.value, "I_plus": ref.i_each.value,
                  "G2mm": ref.g2_mm.value, "directivity": 0.0}
    else:
        ref = analytic.two_qubit_highU(cfg)
        i_m, i_p = ref.i_minus.value, ref.i_plus.value
        values = {"I_minus": i_m, "I_plus": i_p, "G2mm": ref.g2_mm.value,
                  "directivity": (i_m - i_p) / (i_m + i_p) if (i_m + i_p) != 0 else 0.0}
    for key in observables:
        out[key] = float(np.real(values[key]))
    return out


def _eval_rows(spec: ScanSpec, rows: list[int]) -> dict:
    """Evaluate all grid points of the given axis1 rows (worker entry point)."""
    n1, n2 = spec.shape()
    engines = spec.engines()
    values = {eng: {obs: np.full((len(rows), n2), np.nan)
                    for obs in spec.observables if obs in _ENGINE_SUPPORT[eng]}
              for eng in engines}
    failed = {eng: np.zeros((len(rows), n2), dtype=bool) for eng in engines}
    errors: list[str] = []
    diag_worst: dict[str, float] = {}
    cache = _MasterCache(spec.per_mode_cutoff, spec.total_cutoff)

    axis2 = spec.axis2 if spec.axis2 is not None else (None, (None,))
    for local_i, i in enumerate(rows):
        v1 = spec.axis1[1][i]
        for j, v2 in enumerate(axis2[1]):
            assignments = {spec.axis1[0]: v1}
            omega_scan = v1 if spec.axis1[0] == "omega_scan" else None
            if axis2[0] is not None:
                assignments[axis2[0]] = v2
                if axis2[0] == "omega_scan":
                    omega_scan = v2
            cfg = _config_at(spec.base, assignments)
            for eng in engines:
                wanted = [obs for obs in spec.observables if obs in _ENGINE_SUPPORT[eng]]
                if not wanted:
                    continue
                try:
                    if eng == "master":
                        out, diag = _master_point(cfg, omega_scan, wanted, cache)
                        for key, val in diag.items():
                            agg = max if key != "min_eig" else min
                            diag_worst[key] = agg(diag_worst.get(key, val), val)
                    elif eng == "diagrams":
                        out = _diagrams_point(cfg, wanted)
                    else:
                        out = _analytic_point(cfg, omega_scan, wanted)
                except Exception as exc:  # per-point failures are masked, not fatal
                    failed[eng][local_i, j] = True
                    if len(errors) < 20:
                        errors.append(f"{eng} at ({spec.axis1[0]}={v1:g}"
                                      + (f", {axis2[0]}={v2:g}" if axis2[0] else "")
                                      + f"): {exc}")
                    continue
                for obs, val in out.items():
                    values[eng][obs][local_i, j] = val
    return {"rows": rows, "values": values, "failed": failed,
            "errors": errors, "diag_worst": diag_worst}


def _compute_overlays(spec: ScanSpec) -> tuple[dict[str, np.ndarray], int]:
    """Auxiliary guide-line columns as functions of the qd axis (or the base qd)."""
    if not spec.overlays:
        return {}, 0
    names = [spec.axis1[0]] + ([spec.axis2[0]] if spec.axis2 else [])
    if "qd" in names:
        overlay_axis = names.index("qd")
        qd_values = (spec.axis1[1] if overlay_axis == 0 else spec.axis2[1])
    else:
        overlay_axis = 0
        qd_values = tuple(spec.base.qd for _ in spec.axis1[1])
    out: dict[str, np.ndarray] = {}
    for kind in spec.overlays:
        if kind == "two_photon_levels":
            levels = []
            for qd in qd_values:
                _, eig = two_excitation_hamiltonian(spec.base.replace(qd=qd))
                levels.append(np.sort(eig.real))
            arr = np.array(levels)
            for k in range(arr.shape[1]):
                out[f"overlay_pair_level_{k + 1}"] = arr[:, k]
        elif kind == "dark_levels":
            levels = []
            for qd in qd_values:
                h1 = single_excitation_hamiltonian(spec.base.replace(qd=qd))
                levels.append(2.0 * np.sort(np.linalg.eigvals(h1).real))
            arr = np.array(levels)
            for k in range(arr.shape[1]):
                out[f"overlay_single_level_doubled_{k + 1}"] = arr[:, k]
        elif kind == "g2_zero_line":
            vals = [2 * spec.base.omega0
                    - 2 * spec.base.gamma1d * np.tan(qd) if abs(np.cos(qd)) > 1e-12
                    else np.nan for qd in qd_values]
            out["overlay_g2_zero"] = np.array(vals, dtype=float)
        else:
            raise ValueError(f"unknown overlay {kind!r}")
    return out, overlay_axis


def run_scan(spec: ScanSpec, threads: int = 1) -> ScanResult:
    """Evaluate a scan grid; deterministic output for any worker count."""
    start = time.time()
    n1, n2 = spec.shape()
    engines = spec.engines()
    rows = list(range(n1))
    if threads > 1 and n1 > 1:
        chunks = [rows[k::threads] for k in range(threads)]
        chunks = [c for c in chunks if c]
        with concurrent.futures.ProcessPoolExecutor(max_workers=len(chunks)) as pool:
            parts = list(pool.map(_eval_rows, [spec] * len(chunks), chunks))
    else:
        parts = [_eval_rows(spec, rows)]

    data = {f"{obs}:{eng}": np.full((n1, n2), np.nan)
            for eng in engines for obs in spec.observables
            if obs in _ENGINE_SUPPORT[eng]}
    mask = {eng: np.zeros((n1, n2), dtype=bool) for eng in engines}
    errors: list[str] = []
    diag_worst: dict[str, float] = {}
    for part in parts:
        for local_i, i in enumerate(part["rows"]):
            for eng in engines:
                mask[eng][i] = part["failed"][eng][local_i]
                for obs, arr in part["values"][eng].items():
                    data[f"{obs}:{eng}"][i] = arr[local_i]
        errors.extend(part["errors"])
        for key, val in part["diag_worst"].items():
            agg = max if key != "min_eig" else min
            diag_worst[key] = agg(diag_worst.get(key, val), val)

    overlays, overlay_axis = _compute_overlays(spec)
    axis_names = tuple(name for name, _ in spec._axes())
    axis_values = tuple(np.array(vals, dtype=float) for _, vals in spec._axes())
    provenance = {
        "version": __version__,
        "created": datetime.datetime.now(datetime.timezone.utc).isoformat(),
        "units": UNITS_NOTE,
        "config": spec.base.to_dict(),
        "engine": spec.engine,
        "observables": list(spec.observables),
        "per_mode_cutoff": spec.per_mode_cutoff,
        "total_cutoff": spec.total_cutoff,
        "figure_id": spec.figure_id,
        "threads": threads,
        "timing_seconds": None,
        "errors": errors[:20],
        "solver_diagnostics_worst": diag_worst,
    }
    provenance["timing_seconds"] = round(time.time() - start, 6)
    return ScanResult(axis_names=axis_names, axis_values=axis_values, data=data,
                      mask=mask, overlays=overlays, overlay_axis=overlay_axis,
                      provenance=provenance)


def _grid(lo: float, hi: float, n: int) -> tuple[float, ...]:
    return tuple(np.linspace(lo, hi, n))


def figure_preset(figure_id: str, grid: tuple[int, int] | None = None,
                  base: SystemConfig | None = None) -> ScanSpec:
    """Scan specification reproducing one of the published maps.

    Axis windows cover the single- and double-excited resonance bands; the
    qd axis avoids the endpoints 0 and pi where, without nonradiative decay,
    perfectly dark collective states make the stationary solve singular.
    Grid resolution defaults to 101 x 101 (61 x 61 for the zoomed four-qubit
    map) and can be overridden.
    """
    if figure_id not in FIGURE_IDS:
        raise ValueError(f"unknown figure id {figure_id!r}; choose from {FIGURE_IDS}")
    w0 = 1000.0
    n1, n2 = grid if grid is not None else ((61, 61) if figure_id == "fig6" else (101, 101))

    def two_qubit(u, gamma, phases=(0.0, 0.0)):
        return SystemConfig(n_qubits=2, anharmonicity=u, qd=0.5,
                            drive_amps=(0.1, 0.1), drive_phases=phases,
                            drive_freq=2 * w0 + u, omega0=w0, gamma_nr=gamma)

    qd_axis = ("qd", _grid(0.02, np.pi - 0.02, n1))
    if figure_id == "fig2":
        cfg = SystemConfig(n_qubits=1, anharmonicity=10.0, qd=0.0, drive_amps=(0.1,),
                           drive_phases=(0.0,), drive_freq=2 * w0 + 10.0, omega0=w0)
        spec = ScanSpec(base=base or cfg,
                        axis1=("Omega", _grid(2 * w0 - 10, 2 * w0 + 20, n1)),
                        axis2=("omega_scan", _grid(w0 - 10, w0 + 20, n2)),
                        observables=("spectrum",), figure_id=figure_id)
    elif figure_id in ("fig3a", "fig3b", "fig3c", "fig3d"):
        u = {"fig3a": 1.0, "fig3b": 4.0, "fig3c": 10.0, "fig3d": 10.0}[figure_id]
        phases = (0.0, np.pi) if figure_id == "fig3d" else (0.0, 0.0)
        cfg = two_qubit(u, gamma=0.1, phases=phases)
        spec = ScanSpec(base=base or cfg, axis1=qd_axis,
                        axis2=("Omega", _grid(2 * w0 - 10, 2 * w0 + u + 10, n2)),
                        observables=("I_minus",),
                        overlays=("two_photon_levels", "dark_levels"),
                        figure_id=figure_id)
    elif figure_id in ("fig4a", "fig4b", "fig4c", "fig4d"):
        u = {"fig4a": 1.0, "fig4b": 4.0, "fig4c": 10.0, "fig4d": 100.0}[figure_id]
        cfg = two_qubit(u, gamma=0.05)
        spec = ScanSpec(base=base or cfg, axis1=qd_axis,
                        axis2=("phi_j", _grid(0.0, 2 * np.pi, n2)),
                        observables=("I_minus", "directivity"), figure_id=figure_id)
    elif figure_id in ("fig5a", "fig5b"):
        phases = (0.0, 0.0) if figure_id == "fig5a" else (0.0, np.pi)
        cfg = two_qubit(10.0, gamma=0.1, phases=phases)
        spec = ScanSpec(base=base or cfg, axis1=qd_axis,
                        axis2=("Omega", _grid(2 * w0 - 10, 2 * w0 + 20, n2)),
                        observables=("G2mm",),
                        overlays=(("g2_zero_line", "two_photon_levels")
                                  if figure_id == "fig5a" else ("two_photon_levels",)),
                        figure_id=figure_id)
    else:  # fig6: four qubits, first one modulated, no nonradiative loss
        cfg = SystemConfig(n_qubits=4, anharmonicity=10.0, qd=0.1,
                           drive_amps=(0.1, 0.0, 0.0, 0.0),
                           drive_phases=(0.0, 0.0, 0.0, 0.0),
                           drive_freq=2 * w0, omega0=w0)
        spec = ScanSpec(base=base or cfg,
                        axis1=("qd", _grid(0.02, 0.2, n1)),
                        axis2=("Omega", _grid(2 * w0 - 1.2, 2 * w0 + 0.2, n2)),
                        observables=("G2mm",), overlays=("two_photon_levels",),
                        total_cutoff=2, figure_id=figure_id)
    return spec


# ---------------------------------------------------------------------------
# Serialization. CSV: '#'-prefixed header lines with the provenance snapshot,
# then one row per grid point with 17-significant-digit scientific notation.
# ---------------------------------------------------------------------------

def _fmt(x: float) -> str:
    return f"{x:.16e}"


def write_csv(result: ScanResult, path) -> None:
    names = result.axis_names
    n1 = result.axis_values[0].size
    n2 = result.axis_values[1].size if len(names) > 1 else 1
    data_cols = sorted(result.data)
    mask_cols = sorted(result.mask)
    overlay_cols = sorted(result.overlays)
    header = list(names) + data_cols + [f"mask:{eng}" for eng in mask_cols] + overlay_cols
    lines = ["# modwave scan result"]
    for key in ("version", "created", "units", "engine", "observables",
                "per_mode_cutoff", "total_cutoff", "figure_id", "threads",
                "timing_seconds"):
        lines.append(f"# {key}: {json.dumps(result.provenance.get(key))}")
    lines.append(f"# config: {json.dumps(result.provenance['config'])}")
    lines.append(f"# solver_diagnostics_worst: "
                 f"{json.dumps(result.provenance.get('solver_diagnostics_worst', {}))}")
    lines.append(f"# overlay_axis: {result.overlay_axis}")
    lines.append(f"# axes: {json.dumps(list(names))}")
    lines.append(",".join(header))
    for i in range(n1):
        for j in range(n2):
            row = [_fmt(result.axis_values[0][i])]
            if len(names) > 1:
                row.append(_fmt(result.axis_values[1][j]))
            for col in data_cols:
                row.append(_fmt(result.data[col][i, j]))
            for eng in mask_cols:
                row.append(str(int(result.mask[eng][i, j])))
            for col in overlay_cols:
                k = i if result.overlay_axis == 0 else j
                row.append(_fmt(result.overlays[col][k]))
            lines.append(",".join(row))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def read_csv(path) -> ScanResult:
    """Parse a scan CSV back into a ScanResult (exact numeric round trip)."""
    meta: dict[str, object] = {}
    header: list[str] | None = None
    rows: list[list[str]] = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if not line:
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                if ":" in body:
                    key, _, value = body.partition(":")
                    try:
                        meta[key.strip()] = json.loads(value.strip())
                    except json.JSONDecodeError:
                        meta[key.strip()] = value.strip()
                continue
            if header is None:
                header = line.split(",")
                continue
            rows.append(line.split(","))
    if header is None or not rows:
        raise ValueError(f"{path}: no data table found")
    axes = meta.get("axes")
    if not isinstance(axes, list) or not axes:
        raise ValueError(f"{path}: missing '# axes:' header line")
    n_axes = len(axes)
    if header[:n_axes] != axes:
        raise ValueError(f"{path}: axis columns {header[:n_axes]} do not match "
                         f"declared axes {axes}")
    table = {name: [row[k] for row in rows] for k, name in enumerate(header)}
    ax1 = np.array([float(v) for v in dict.fromkeys(table[axes[0]])])
    axis_values = [ax1]
    if n_axes > 1:
        ax2 = np.array([float(v) for v in dict.fromkeys(table[axes[1]])])
        axis_values.append(ax2)
    n1 = axis_values[0].size
    n2 = axis_values[1].size if n_axes > 1 else 1
    if n1 * n2 != len(rows):
        raise ValueError(f"{path}: {len(rows)} rows do not fill a {n1}x{n2} grid")

    def grid_of(col: str) -> np.ndarray:
        return np.array([float(v) for v in table[col]]).reshape(n1, n2)

    data = {}
    mask = {}
    overlays = {}
    overlay_axis = int(meta.get("overlay_axis", 0))
    for col in header[n_axes:]:
        if col.startswith("mask:"):
            mask[col[len("mask:"):]] = grid_of(col).astype(bool)
        elif col.startswith("overlay_"):
            full = grid_of(col)
            overlays[col] = full[:, 0] if overlay_axis == 0 else full[0, :]
        else:
            if ":" not in col:
                raise ValueError(f"{path}: data column {col!r} lacks an engine tag")
            data[col] = grid_of(col)
    provenance = {key: meta.get(key) for key in
                  ("version", "created", "units", "engine", "observables",
                   "per_mode_cutoff", "total_cutoff", "figure_id", "threads",
                   "timing_seconds", "config", "solver_diagnostics_worst")}
    return ScanResult(axis_names=tuple(axes), axis_values=tuple(axis_values),
                      data=data, mask=mask, overlays=overlays,
                      overlay_axis=overlay_axis, provenance=provenance)


def write_json(result: ScanResult, path) -> None:
    doc = {
        "format": "modwave-scan",
        "axes": {"names": list(result.axis_names),
                 "values": [v.tolist() for v in result.axis_values]},
        "arrays": {key: arr.tolist() for key, arr in result.data.items()},
        "mask": {eng: arr.astype(int).tolist() for eng, arr in result.mask.items()},
        "overlays": {key: arr.tolist() for key, arr in result.overlays.items()},
        "overlay_axis": result.overlay_axis,
        "provenance": result.provenance,
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")


def read_json(path) -> ScanResult:
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    if doc.get("format") != "modwave-scan":
        raise ValueError(f"{path}: not a modwave scan document")
    return ScanResult(
        axis_names=tuple(doc["axes"]["names"]),
        axis_values=tuple(np.array(v, dtype=float) for v in doc["axes"]["values"]),
        data={key: np.array(arr, dtype=float) for key, arr in doc["arrays"].items()},
        mask={eng: np.array(arr, dtype=bool) for eng, arr in doc["mask"].items()},
        overlays={key: np.array(arr, dtype=float)
                  for key, arr in doc["overlays"].items()},
        overlay_axis=int(doc["overlay_axis"]),
        provenance=doc["provenance"],
    )


def write_result(result: ScanResult, path) -> None:
    """Write CSV or JSON depending on the output extension."""
    if str(path).endswith(".json"):
        write_json(result, path)
    else:
        write_csv(result, path)
