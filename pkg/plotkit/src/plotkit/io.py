"""Strict readers for the modwave scan file formats.

This package consumes the CSV/JSON emitted by the simulation CLI and nothing
else; every plotted number comes from the file. The schema is validated
loudly: missing header lines, renamed or untagged columns and ragged grids
are all hard errors naming the offending part.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

__all__ = ["SchemaError", "ScanTable", "load"]


class SchemaError(ValueError):
    """The input file does not match the scan schema."""


@dataclass
class ScanTable:
    """Parsed scan: axes, per-engine observable grids, masks, overlays."""

    axis_names: tuple[str, ...]
    axis_values: tuple[np.ndarray, ...]
    data: dict[str, np.ndarray]
    mask: dict[str, np.ndarray]
    overlays: dict[str, np.ndarray]
    overlay_axis: int
    config: dict
    provenance: dict = field(default_factory=dict)

    def observable(self, name: str, engine: str | None = None) -> np.ndarray:
        """Grid for an observable; engine may be omitted when unambiguous."""
        if engine is not None:
            key = f"{name}:{engine}"
            if key not in self.data:
                raise SchemaError(f"observable column {key!r} not present; "
                                  f"have {sorted(self.data)}")
            return self.data[key]
        matches = [k for k in self.data if k.split(":")[0] == name]
        if not matches:
            raise SchemaError(f"no column for observable {name!r}; "
                              f"have {sorted(self.data)}")
        if len(matches) > 1:
            raise SchemaError(f"observable {name!r} is ambiguous across engines "
                              f"{sorted(matches)}; pass engine=")
        return self.data[matches[0]]


_REQUIRED_META = ("axes", "config", "units")


def _parse_csv(path) -> ScanTable:
    meta: dict[str, object] = {}
    header: list[str] | None = None
    rows: list[list[str]] = []
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, 1):
            line = line.rstrip("\n")
            if not line:
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                key, sep, value = body.partition(":")
                if sep:
                    try:
                        meta[key.strip()] = json.loads(value.strip())
                    except json.JSONDecodeError:
                        meta[key.strip()] = value.strip()
                continue
            if header is None:
                header = line.split(",")
                continue
            cells = line.split(",")
            if len(cells) != len(header):
                raise SchemaError(f"{path}:{line_no}: row has {len(cells)} cells, "
                                  f"header has {len(header)}")
            rows.append(cells)
    if header is None or not rows:
        raise SchemaError(f"{path}: no data table found")
    for key in _REQUIRED_META:
        if key not in meta:
            raise SchemaError(f"{path}: missing '# {key}:' header line")
    axes = meta["axes"]
    if not isinstance(axes, list) or not 1 <= len(axes) <= 2:
        raise SchemaError(f"{path}: '# axes:' must list one or two axis names")
    if header[: len(axes)] != axes:
        raise SchemaError(f"{path}: leading columns {header[:len(axes)]} do not "
                          f"match declared axes {axes}")

    columns = {name: [row[k] for row in rows] for k, name in enumerate(header)}
    axis_values = [np.array([float(v) for v in dict.fromkeys(columns[name])])
                   for name in axes]
    n1 = axis_values[0].size
    n2 = axis_values[1].size if len(axes) > 1 else 1
    if n1 * n2 != len(rows):
        raise SchemaError(f"{path}: {len(rows)} rows do not fill a {n1}x{n2} grid")

    def grid(name: str) -> np.ndarray:
        try:
            return np.array([float(v) for v in columns[name]]).reshape(n1, n2)
        except ValueError as exc:
            raise SchemaError(f"{path}: column {name!r} has a non-numeric cell: "
                              f"{exc}") from exc

    overlay_axis = int(meta.get("overlay_axis", 0))
    data: dict[str, np.ndarray] = {}
    mask: dict[str, np.ndarray] = {}
    overlays: dict[str, np.ndarray] = {}
    for name in header[len(axes):]:
        if name.startswith("mask:"):
            mask[name[len("mask:"):]] = grid(name).astype(bool)
        elif name.startswith("overlay_"):
            full = grid(name)
            overlays[name] = full[:, 0] if overlay_axis == 0 else full[0, :]
        elif ":" in name:
            data[name] = grid(name)
        else:
            raise SchemaError(
                f"{path}: column {name!r} is neither an axis, an engine-tagged "
                f"observable, a mask nor an overlay")
    if not data:
        raise SchemaError(f"{path}: no observable columns found")
    config = meta["config"]
    if not isinstance(config, dict):
        raise SchemaError(f"{path}: '# config:' line is not a JSON object")
    return ScanTable(axis_names=tuple(axes), axis_values=tuple(axis_values),
                     data=data, mask=mask, overlays=overlays,
                     overlay_axis=overlay_axis, config=config, provenance=meta)


def _parse_json(path) -> ScanTable:
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    if doc.get("format") != "modwave-scan":
        raise SchemaError(f"{path}: not a modwave scan document")
    for key in ("axes", "arrays", "provenance"):
        if key not in doc:
            raise SchemaError(f"{path}: missing top-level key {key!r}")
    config = doc["provenance"].get("config")
    if not isinstance(config, dict):
        raise SchemaError(f"{path}: provenance lacks the config snapshot")
    axes = doc["axes"]
    return ScanTable(
        axis_names=tuple(axes["names"]),
        axis_values=tuple(np.array(v, dtype=float) for v in axes["values"]),
        data={k: np.array(v, dtype=float) for k, v in doc["arrays"].items()},
        mask={k: np.array(v, dtype=bool) for k, v in doc.get("mask", {}).items()},
        overlays={k: np.array(v, dtype=float)
                  for k, v in doc.get("overlays", {}).items()},
        overlay_axis=int(doc.get("overlay_axis", 0)),
        config=config, provenance=doc["provenance"])


def load(path) -> ScanTable:
    """Load a scan CSV or JSON file with strict schema validation."""
    if str(path).endswith(".json"):
        return _parse_json(path)
    return _parse_csv(path)
