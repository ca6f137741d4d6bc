"""Directional antenna gain handling.

A pattern is a rectangular gain grid over azimuth (full circle, wrapping)
and elevation. Beamforming arrays are represented as a set of per-beam
patterns; the composite coverage pattern is their pointwise-maximum
envelope, which is how a grid-of-beams antenna behaves when the receiver
always latches onto the strongest beam.
"""

from __future__ import annotations

import csv
import json
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np


@dataclass
class AntennaPattern:
    """Gain grid in dBi over a full azimuth circle and an elevation span.

    azimuth_deg must be uniformly spaced and cover the full circle
    (n * step == 360); elevation_deg is uniformly spaced within [-90, 90].
    gain_dbi has shape (n_azimuth, n_elevation). boresight_azimuth rotates
    the pattern toward its mounting direction; mechanical_tilt is the
    elevation of the pattern's zero-elevation plane (negative = downtilt).
    """

    azimuth_deg: np.ndarray
    elevation_deg: np.ndarray
    gain_dbi: np.ndarray
    boresight_azimuth: float = 0.0
    mechanical_tilt: float = 0.0
    name: str = ""

    def __post_init__(self):
        self.azimuth_deg = np.asarray(self.azimuth_deg, dtype=float)
        self.elevation_deg = np.asarray(self.elevation_deg, dtype=float)
        self.gain_dbi = np.asarray(self.gain_dbi, dtype=float)
        az, el = self.azimuth_deg, self.elevation_deg
        if az.ndim != 1 or az.size < 2 or el.ndim != 1 or el.size < 2:
            raise ValueError("pattern needs at least 2 azimuth and 2 elevation samples")
        daz = np.diff(az)
        if np.any(daz <= 0) or not np.allclose(daz, daz[0]):
            raise ValueError("azimuth samples must be uniformly ascending")
        if abs(az.size * daz[0] - 360.0) > 1e-6:
            raise ValueError("azimuth samples must cover the full circle")
        dele = np.diff(el)
        if np.any(dele <= 0) or not np.allclose(dele, dele[0]):
            raise ValueError("elevation samples must be uniformly ascending")
        if el[0] < -90.0 or el[-1] > 90.0:
            raise ValueError("elevation samples must lie within [-90, 90]")
        if self.gain_dbi.shape != (az.size, el.size):
            raise ValueError(
                f"gain grid shape {self.gain_dbi.shape} does not match "
                f"({az.size}, {el.size}) sample grid"
            )
        if not np.isfinite(self.gain_dbi.max()):
            raise ValueError("gain grid must have a finite maximum")

    @property
    def azimuth_step(self) -> float:
        return float(self.azimuth_deg[1] - self.azimuth_deg[0])

    @property
    def elevation_step(self) -> float:
        return float(self.elevation_deg[1] - self.elevation_deg[0])

    def grids_match(self, other: "AntennaPattern") -> bool:
        return (
            self.azimuth_deg.shape == other.azimuth_deg.shape
            and self.elevation_deg.shape == other.elevation_deg.shape
            and np.array_equal(self.azimuth_deg, other.azimuth_deg)
            and np.array_equal(self.elevation_deg, other.elevation_deg)
        )


@dataclass
class BeamSet:
    """Per-beam patterns of a grid-of-beams array, all on one sample grid."""

    beams: list[AntennaPattern]
    rows: int = 1
    cols: int = 0

    def __post_init__(self):
        if not self.beams:
            raise ValueError("beam set must contain at least one beam")
        ref = self.beams[0]
        for b in self.beams[1:]:
            if not ref.grids_match(b):
                raise ValueError("all beams must share identical sample grids")
        if self.cols == 0:
            self.cols = len(self.beams)


def envelope(beams) -> AntennaPattern:
    """Pointwise-maximum pattern over a BeamSet or iterable of patterns."""
    if isinstance(beams, BeamSet):
        patterns = beams.beams
    else:
        patterns = list(beams)
    if not patterns:
        raise ValueError("envelope of an empty beam set is undefined")
    ref = patterns[0]
    for b in patterns[1:]:
        if not ref.grids_match(b):
            raise ValueError("envelope requires beams on identical sample grids")
        if b.boresight_azimuth != ref.boresight_azimuth or b.mechanical_tilt != ref.mechanical_tilt:
            raise ValueError("envelope requires a common boresight and tilt")
    gain = np.maximum.reduce([b.gain_dbi for b in patterns])
    return AntennaPattern(
        ref.azimuth_deg.copy(),
        ref.elevation_deg.copy(),
        gain,
        boresight_azimuth=ref.boresight_azimuth,
        mechanical_tilt=ref.mechanical_tilt,
        name="envelope",
    )


def gain_at(pattern: AntennaPattern, azimuth_deg: float, elevation_deg: float) -> float:
    """Bilinearly interpolated gain toward an arbitrary direction.

    The query is taken relative to the pattern's boresight azimuth and
    mechanical tilt. Azimuth wraps across 360 -> 0; elevation outside the
    sampled span is clamped to the nearest edge with a warning (steep
    depression angles right under a mast routinely exceed pattern files).
    """
    az_grid = pattern.azimuth_deg
    el_grid = pattern.elevation_deg
    az = azimuth_deg - pattern.boresight_azimuth
    el = elevation_deg - pattern.mechanical_tilt

    if el < el_grid[0] or el > el_grid[-1]:
        warnings.warn(
            f"elevation {el:.2f} deg outside sampled range "
            f"[{el_grid[0]:.1f}, {el_grid[-1]:.1f}]; clamping",
            stacklevel=2,
        )
        el = min(max(el, el_grid[0]), el_grid[-1])

    n_az = az_grid.size
    t = ((az - az_grid[0]) % 360.0) / pattern.azimuth_step
    i0 = min(int(t), n_az - 1)
    fa = t - i0
    i1 = (i0 + 1) % n_az

    n_el = el_grid.size
    u = (el - el_grid[0]) / pattern.elevation_step
    j0 = min(int(u), n_el - 2)
    fe = min(max(u - j0, 0.0), 1.0)
    j1 = j0 + 1

    g = pattern.gain_dbi
    return float(
        (1.0 - fa) * (1.0 - fe) * g[i0, j0]
        + fa * (1.0 - fe) * g[i1, j0]
        + (1.0 - fa) * fe * g[i0, j1]
        + fa * fe * g[i1, j1]
    )


def peak_gain(pattern: AntennaPattern) -> float:
    """Maximum gain over the grid, in dBi."""
    return float(pattern.gain_dbi.max())


def isotropic(gain_dbi: float = 0.0) -> AntennaPattern:
    """Constant-gain pattern, handy for calibration and synthetic data."""
    az = np.arange(0.0, 360.0, 45.0)
    el = np.arange(-90.0, 90.1, 45.0)
    return AntennaPattern(az, el, np.full((az.size, el.size), gain_dbi), name="isotropic")


def synthetic_beam(
    center_azimuth: float,
    center_elevation: float,
    peak_dbi: float = 27.0,
    az_beamwidth: float = 9.0,
    el_beamwidth: float = 11.0,
    floor_dbi: float = -3.0,
    azimuth_step: float = 1.0,
    elevation_range: tuple[float, float] = (-30.0, 30.0),
    elevation_step: float = 1.0,
    name: str = "",
) -> AntennaPattern:
    """Parabolic-in-dB lobe, a stand-in for unpublished per-beam data."""
    az = np.arange(0.0, 360.0, azimuth_step)
    el = np.arange(elevation_range[0], elevation_range[1] + 1e-9, elevation_step)
    daz = (az[:, None] - center_azimuth + 180.0) % 360.0 - 180.0
    dele = el[None, :] - center_elevation
    gain = peak_dbi - 12.0 * ((daz / az_beamwidth) ** 2 + (dele / el_beamwidth) ** 2)
    return AntennaPattern(az, el, np.maximum(gain, floor_dbi), name=name)


def synthetic_aas_beamset(
    peak_dbi: float = 27.0, rows: int = 3, cols: int = 16
) -> BeamSet:
    """Synthetic grid-of-beams array: ``rows`` elevation rows of ``cols``
    azimuth-steered lobes covering roughly a 120 x 30 degree sector."""
    az_centers = np.linspace(-(cols - 1) * 4.0, (cols - 1) * 4.0, cols)
    el_centers = np.linspace((rows - 1) * 5.0, -(rows - 1) * 5.0, rows)
    beams = [
        synthetic_beam(a, e, peak_dbi=peak_dbi, name=f"r{ri}c{ci}")
        for ri, e in enumerate(el_centers)
        for ci, a in enumerate(az_centers)
    ]
    return BeamSet(beams, rows=rows, cols=cols)


PATTERN_FIELDS = ["azimuth_deg", "elevation_deg", "gain_dbi"]


def save_pattern_csv(pattern: AntennaPattern, path) -> None:
    """Write a pattern as one CSV row per (azimuth, elevation) node."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(PATTERN_FIELDS)
        for i, a in enumerate(pattern.azimuth_deg):
            for j, e in enumerate(pattern.elevation_deg):
                writer.writerow([a, e, pattern.gain_dbi[i, j]])


def load_pattern_csv(
    path, boresight_azimuth: float = 0.0, mechanical_tilt: float = 0.0
) -> AntennaPattern:
    """Read a pattern CSV (header azimuth_deg,elevation_deg,gain_dbi)."""
    path = Path(path)
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != PATTERN_FIELDS:
            raise ValueError(f"{path}: expected header {','.join(PATTERN_FIELDS)}")
        rows = []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 3:
                raise ValueError(f"{path}: line {lineno}: expected 3 fields")
            try:
                rows.append((float(row[0]), float(row[1]), float(row[2])))
            except ValueError as exc:
                raise ValueError(f"{path}: line {lineno}: {exc}") from None
    if not rows:
        raise ValueError(f"{path}: empty pattern file")
    az = np.unique([r[0] for r in rows])
    el = np.unique([r[1] for r in rows])
    gain = np.full((az.size, el.size), np.nan)
    ai = {v: i for i, v in enumerate(az)}
    ei = {v: i for i, v in enumerate(el)}
    for a, e, g in rows:
        gain[ai[a], ei[e]] = g
    if np.isnan(gain).any():
        raise ValueError(f"{path}: pattern grid is incomplete")
    return AntennaPattern(
        az, el, gain,
        boresight_azimuth=boresight_azimuth,
        mechanical_tilt=mechanical_tilt,
        name=path.stem,
    )


def save_beamset(beams: BeamSet, directory) -> Path:
    """Write per-beam CSVs plus a manifest; returns the manifest path."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    entries = []
    for i, beam in enumerate(beams.beams):
        name = beam.name or f"beam_{i:02d}"
        fname = f"{name}.csv"
        save_pattern_csv(beam, directory / fname)
        entries.append({"name": name, "file": fname})
    manifest = {"layout": {"rows": beams.rows, "cols": beams.cols}, "beams": entries}
    manifest_path = directory / "beams.json"
    manifest_path.write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")
    return manifest_path


def load_beamset(manifest_path) -> BeamSet:
    """Load a beam set from a JSON manifest naming per-beam CSV files."""
    manifest_path = Path(manifest_path)
    data = json.loads(manifest_path.read_text(encoding="utf-8"))
    layout = data.get("layout", {})
    entries = data.get("beams")
    if not entries:
        raise ValueError(f"{manifest_path}: manifest lists no beams")
    beams = []
    for entry in entries:
        pattern = load_pattern_csv(manifest_path.parent / entry["file"])
        pattern.name = entry.get("name", pattern.name)
        beams.append(pattern)
    return BeamSet(beams, rows=int(layout.get("rows", 1)), cols=int(layout.get("cols", 0)))
