"""Flat-file exporters: PGM images, legacy VTK, convergence CSV, field dumps.

All writers check for non-finite values before touching the disk.
"""
from __future__ import annotations

import numpy as np

from .elasticity import DensityField
from .mesh import Grid
from .optimizer import IterationRecord

CSV_HEADER = "iter,J,compliance,alphaP,volfrac,tau,max_dphi,cg_iters"


def _check_finite(values: np.ndarray, what: str):
    if not np.all(np.isfinite(values)):
        raise ValueError(f"refusing to export non-finite values in {what}")


def export_pgm(field: DensityField, path):
    """Binary P5 image, maxval 255, one pixel per element.

    Image rows run top to bottom: image row j shows grid row ny-1-j, so the
    picture is oriented the way the physical domain is drawn.
    """
    _check_finite(field.values, "PGM field")
    g = field.grid
    img = np.clip(field.values.reshape(g.ny, g.nx), 0.0, 1.0)[::-1, :]
    pixels = np.rint(255.0 * img).astype(np.uint8)
    with open(path, "wb") as fh:
        fh.write(f"P5\n{g.nx} {g.ny}\n255\n".encode("ascii"))
        fh.write(pixels.tobytes())


def export_vtk(grid: Grid, fields: dict[str, np.ndarray], path):
    """Legacy ASCII structured-points file with per-element (cell) scalar data."""
    for name, values in fields.items():
        _check_finite(np.asarray(values), f"VTK field {name!r}")
        if np.asarray(values).size != grid.n_elements:
            raise ValueError(f"VTK field {name!r} must have one value per element")
    with open(path, "w", encoding="ascii") as fh:
        fh.write("# vtk DataFile Version 3.0\n")
        fh.write("topoblend cell fields\n")
        fh.write("ASCII\n")
        fh.write("DATASET STRUCTURED_POINTS\n")
        fh.write(f"DIMENSIONS {grid.nx + 1} {grid.ny + 1} 1\n")
        fh.write("ORIGIN 0 0 0\n")
        fh.write(f"SPACING {grid.hx:.12g} {grid.hy:.12g} 1\n")
        fh.write(f"CELL_DATA {grid.n_elements}\n")
        for name, values in fields.items():
            fh.write(f"SCALARS {name} double 1\n")
            fh.write("LOOKUP_TABLE default\n")
            for v in np.asarray(values, dtype=float).ravel():
                fh.write(f"{v:.12g}\n")


def export_csv(history: list[IterationRecord], path):
    """Convergence history, one row per accepted iteration, locale-free."""
    for rec in history:
        _check_finite(np.array([rec.J, rec.compliance, rec.alphaP, rec.volfrac,
                                rec.tau, rec.max_dphi]), "CSV history")
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(CSV_HEADER + "\n")
        for rec in history:
            fh.write(f"{rec.iteration},{rec.J!r},{rec.compliance!r},{rec.alphaP!r},"
                     f"{rec.volfrac!r},{rec.tau!r},{rec.max_dphi!r},{rec.cg_iters}\n")


def export_field_npy(field: DensityField, path):
    """Binary dump of the field as a (ny, nx) array."""
    _check_finite(field.values, "field dump")
    g = field.grid
    np.save(path, field.values.reshape(g.ny, g.nx))


def load_field_npy(path, grid: Grid) -> DensityField:
    values = np.load(path)
    if values.shape != (grid.ny, grid.nx):
        raise ValueError(f"dump shape {values.shape} does not match grid "
                         f"({grid.ny}, {grid.nx})")
    return DensityField(values.ravel(), grid)


def write_metadata(entries: dict, path):
    """Key = value metadata file in the same dialect as run configs."""
    with open(path, "w", encoding="utf-8") as fh:
        for key, value in entries.items():
            fh.write(f"{key} = {value}\n")
