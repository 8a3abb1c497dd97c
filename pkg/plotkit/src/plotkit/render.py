"""Figure rendering for modwave scan files.

Maps and line plots mirroring the published layouts: emission-spectrum
density with a resonant line cut, directional-intensity and correlation maps
over spacing/modulation-frequency or spacing/phase grids, with optional
guide-line overlays (double-excited levels, doubled dark single-excitation
frequencies, the correlation-zero line). Rendering is read-only and computes
no physics; every number comes from the input file.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
from matplotlib.colors import LogNorm  # noqa: E402

from .io import ScanTable, SchemaError, load  # noqa: E402

__all__ = ["FigureJob", "render", "FIGURE_IDS"]

FIGURE_IDS = ("fig2", "fig3a", "fig3b", "fig3c", "fig3d",
              "fig4a", "fig4b", "fig4c", "fig4d", "fig5a", "fig5b", "fig6",
              "auto")

_AXIS_LABELS = {
    "qd": "qd (optical phase per spacing)",
    "phi_j": "modulation phase step [rad]",
    "Omega": "Omega - 2*omega0 [gamma_1D]",
    "omega_scan": "omega - omega0 [gamma_1D]",
}

_OBSERVABLE_LABELS = {
    "I1": "emission intensity",
    "I_minus": "left emission intensity",
    "I_plus": "right emission intensity",
    "G2mm": "left pair correlation",
    "spectrum": "emission spectrum",
    "directivity": "directivity",
}


@dataclass
class FigureJob:
    """One rendering task: input scan file, figure id, output image, style."""

    figure_id: str
    input_path: str
    output_path: str
    colormap: str = "inferno"
    show_overlays: bool = True
    log_scale: bool | None = None
    dpi: int = 150

    def __post_init__(self):
        if self.figure_id not in FIGURE_IDS:
            raise ValueError(f"unknown figure id {self.figure_id!r}; "
                             f"choose from {FIGURE_IDS}")


def _axis_display(table: ScanTable, index: int) -> tuple[np.ndarray, str]:
    name = table.axis_names[index]
    values = table.axis_values[index]
    omega0 = float(table.config["omega0"])
    if name == "Omega":
        return values - 2 * omega0, _AXIS_LABELS[name]
    if name == "omega_scan":
        return values - omega0, _AXIS_LABELS[name]
    return values, _AXIS_LABELS.get(name, name)


def _pick_observable(table: ScanTable, wanted: str) -> tuple[str, np.ndarray]:
    keys = [k for k in table.data if k.split(":")[0] == wanted]
    if not keys:
        raise SchemaError(f"input lacks the {wanted!r} observable; "
                          f"columns: {sorted(table.data)}")
    for key in keys:
        if key.endswith(":master"):
            return key, table.data[key]
    return keys[0], table.data[key]


def _density(ax, table: ScanTable, key: str, grid: np.ndarray, job: FigureJob):
    x, xlabel = _axis_display(table, 0)
    y, ylabel = _axis_display(table, 1)
    values = np.array(grid, dtype=float)
    engine = key.split(":")[1]
    masked = table.mask.get(engine)
    if masked is not None and masked.any():
        values = np.where(masked, np.nan, values)
    finite = values[np.isfinite(values)]
    log_scale = job.log_scale
    if log_scale is None:
        positive = finite[finite > 0]
        log_scale = (positive.size > 0.9 * finite.size and positive.size
                     and positive.max() / positive.min() > 1e3)
    norm = None
    if log_scale:
        positive = finite[finite > 0]
        norm = LogNorm(vmin=positive.min(), vmax=positive.max())
        values = np.where(values > 0, values, np.nan)
    mesh = ax.pcolormesh(x, y, values.T, shading="nearest", cmap=job.colormap,
                         norm=norm)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    return mesh


def _overlay_lines(ax, table: ScanTable, job: FigureJob):
    if not job.show_overlays or not table.overlays:
        return
    x, _ = _axis_display(table, table.overlay_axis)
    omega0 = float(table.config["omega0"])
    vertical = table.overlay_axis == 0  # overlays depend on the x axis
    other_name = table.axis_names[1 - table.overlay_axis]
    shift = 2 * omega0 if other_name == "Omega" else 0.0
    lo, hi = ax.get_ylim() if vertical else ax.get_xlim()
    for name, values in sorted(table.overlays.items()):
        vals = values - shift
        style = {"lw": 0.9}
        if name.startswith("overlay_pair_level"):
            style.update(color="0.55", ls="-")
        elif name.startswith("overlay_single_level"):
            style.update(color="crimson", ls=":")
        elif name.startswith("overlay_g2_zero"):
            style.update(color="crimson", ls=":", lw=1.4)
        else:
            style.update(color="white", ls="--")
        inside = (vals >= min(lo, hi)) & (vals <= max(lo, hi))
        if not inside.any():
            continue
        plot_vals = np.where(inside, vals, np.nan)
        if vertical:
            ax.plot(x, plot_vals, **style)
        else:
            ax.plot(plot_vals, x, **style)


def _render_spectrum_figure(table: ScanTable, job: FigureJob) -> plt.Figure:
    key, grid = _pick_observable(table, "spectrum")
    fig, (ax_map, ax_cut) = plt.subplots(
        2, 1, figsize=(6.0, 7.2), gridspec_kw={"height_ratios": [2.2, 1.0]})
    mesh = _density(ax_map, table, key, grid, job)
    fig.colorbar(mesh, ax=ax_map, label=_OBSERVABLE_LABELS["spectrum"])
    # line cut at the strongest-emission modulation frequency
    idx = int(np.nanargmax(np.nansum(grid, axis=1)))
    x_cut, xlabel = _axis_display(table, 1)
    ax_cut.plot(x_cut, grid[idx], color="navy", lw=1.2)
    omega_disp, _ = _axis_display(table, 0)
    ax_cut.set_xlabel(xlabel)
    ax_cut.set_ylabel(_OBSERVABLE_LABELS["spectrum"])
    ax_cut.set_title(f"cut at Omega - 2*omega0 = {omega_disp[idx]:g}", fontsize=9)
    return fig


def _render_map_figure(table: ScanTable, job: FigureJob, observable: str,
                       second: str | None = None) -> plt.Figure:
    key, grid = _pick_observable(table, observable)
    panels = 1
    if second is not None and any(k.split(":")[0] == second for k in table.data):
        panels = 2
    fig, axes = plt.subplots(1, panels, figsize=(5.6 * panels, 4.4), squeeze=False)
    mesh = _density(axes[0, 0], table, key, grid, job)
    fig.colorbar(mesh, ax=axes[0, 0], label=_OBSERVABLE_LABELS.get(observable,
                                                                   observable))
    _overlay_lines(axes[0, 0], table, job)
    if panels == 2:
        key2, grid2 = _pick_observable(table, second)
        job2 = FigureJob(figure_id=job.figure_id, input_path=job.input_path,
                         output_path=job.output_path, colormap="coolwarm",
                         show_overlays=job.show_overlays, log_scale=False,
                         dpi=job.dpi)
        mesh2 = _density(axes[0, 1], table, key2, grid2, job2)
        fig.colorbar(mesh2, ax=axes[0, 1],
                     label=_OBSERVABLE_LABELS.get(second, second))
    return fig


def _render_auto(table: ScanTable, job: FigureJob) -> plt.Figure:
    key = sorted(table.data)[0]
    observable = key.split(":")[0]
    if len(table.axis_names) == 1 or table.axis_values[1].size == 1:
        fig, ax = plt.subplots(figsize=(6.0, 4.0))
        x, xlabel = _axis_display(table, 0)
        ax.plot(x, table.data[key][:, 0], lw=1.2)
        ax.set_xlabel(xlabel)
        ax.set_ylabel(_OBSERVABLE_LABELS.get(observable, observable))
        return fig
    return _render_map_figure(table, job, observable)


_FIGURE_RENDERERS = {
    "fig2": _render_spectrum_figure,
    **{fid: (lambda t, j, obs="I_minus": _render_map_figure(t, j, obs))
       for fid in ("fig3a", "fig3b", "fig3c", "fig3d")},
    **{fid: (lambda t, j: _render_map_figure(t, j, "I_minus", second="directivity"))
       for fid in ("fig4a", "fig4b", "fig4c", "fig4d")},
    **{fid: (lambda t, j: _render_map_figure(t, j, "G2mm"))
       for fid in ("fig5a", "fig5b", "fig6")},
    "auto": _render_auto,
}


def render(job: FigureJob) -> str:
    """Render one figure job to its output image; returns the output path."""
    table = load(job.input_path)
    if len(table.axis_names) < 2 and job.figure_id != "auto":
        raise SchemaError(f"figure {job.figure_id} needs a two-axis scan; "
                          f"input has axes {table.axis_names}")
    fig = _FIGURE_RENDERERS[job.figure_id](table, job)
    figure_tag = table.provenance.get("figure_id")
    title = f"{job.figure_id}" + (f" ({figure_tag})" if figure_tag else "")
    fig.suptitle(title, fontsize=10)
    out = Path(job.output_path)
    out.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out, dpi=job.dpi, metadata={"Software": None})
    plt.close(fig)
    return str(out)
