"""Run, sweep and export drivers shared by the CLI and the demo scripts."""
from __future__ import annotations

import os
import shutil
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from .config import RunConfig, parse_config, serialize_config, with_updates
from .elasticity import DensityField, assemble_and_solve, strain_energy_density
from .exporters import (export_csv, export_field_npy, export_pgm, export_vtk,
                        load_field_npy, write_metadata)
from .optimizer import default_initial_field, run
from .sensitivity import blended_field

GRAY_LOW, GRAY_HIGH = 0.05, 0.95

SWEEP_AXES = ("alpha", "gamma", "r_f", "mesh")

DESIGN_FLAGS = {
    "meta.filter_kernel": "hat",
    "meta.filter_normalization": "row",
    "meta.gray_low": GRAY_LOW,
    "meta.gray_high": GRAY_HIGH,
    "meta.p0_perimeter": "grid_aligned",
    "meta.solver": "jacobi_pcg",
    "meta.optimizer": "projected_gradient_flow",
}


def gray_fraction(m_values: np.ndarray) -> float:
    """Share of elements with intermediate blended density."""
    m = np.asarray(m_values)
    return float(np.mean((m > GRAY_LOW) & (m < GRAY_HIGH)))


def field_l1_distance(a: np.ndarray, b: np.ndarray, cell_area: float) -> float:
    """L1 distance between two element fields on the same grid."""
    return float(np.abs(np.asarray(a) - np.asarray(b)).sum() * cell_area)


def worker_count() -> int:
    return max(1, int(os.environ.get("TOPOBLEND_WORKERS", "1")))


def cmd_run(cfg: RunConfig, output_dir: str | Path | None = None) -> dict:
    """Optimize and write the run artifacts; returns paths and key results."""
    out = Path(output_dir if output_dir is not None else cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    problem = cfg.problem()
    params = cfg.method_parameters()
    phi0 = default_initial_field(problem.grid, params.vbar)
    phi, history = run(phi0, params, problem, cfg.optimizer_config())

    m = blended_field(phi, problem.filt, params)
    m_field = DensityField(m.values, problem.grid)

    paths = {
        "phi_pgm": out / "phi.pgm",
        "m_pgm": out / "m.pgm",
        "history_csv": out / "history.csv",
        "phi_npy": out / "phi.npy",
        "metadata": out / "metadata.txt",
    }
    export_pgm(phi, paths["phi_pgm"])
    export_pgm(m_field, paths["m_pgm"])
    export_csv(history, paths["history_csv"])
    export_field_npy(phi, paths["phi_npy"])

    meta = {}
    for line in serialize_config(cfg).strip().splitlines():
        key, value = (part.strip() for part in line.split("=", 1))
        meta[key] = value
    meta["method.beta"] = params.beta  # resolved value, even when coupled
    meta.update(DESIGN_FLAGS)
    final = history[-1] if history else None
    meta["meta.iterations"] = len(history)
    meta["meta.final_J"] = final.J if final else "nan"
    meta["meta.final_compliance"] = final.compliance if final else "nan"
    meta["meta.final_volfrac"] = phi.volume_fraction()
    meta["meta.final_gray_fraction"] = gray_fraction(m.values)
    write_metadata(meta, paths["metadata"])

    return {"paths": paths, "phi": phi, "m": m_field, "history": history,
            "final_J": final.J if final else None}


def load_run_config(run_dir: str | Path) -> RunConfig:
    """Reconstruct the configuration from a run directory's metadata file."""
    lines = Path(run_dir, "metadata.txt").read_text(encoding="utf-8").splitlines()
    config_lines = [ln for ln in lines if not ln.strip().startswith("meta.")]
    return parse_config("\n".join(config_lines))


def _point_config(cfg: RunConfig, axis: str, value: str) -> RunConfig:
    if axis == "alpha":
        # beta recouples to 1 - alpha unless it was explicitly overridden
        beta = cfg.beta if cfg.beta is not None else None
        return with_updates(cfg, alpha=float(value), beta=beta)
    if axis == "gamma":
        return with_updates(cfg, gamma=float(value))
    if axis == "r_f":
        return with_updates(cfg, r_f=float(value))
    if axis == "mesh":
        nx, ny = (int(part) for part in value.lower().split("x"))
        return with_updates(cfg, nx=nx, ny=ny)
    raise ValueError(f"unknown sweep axis {axis!r}; choose from {SWEEP_AXES}")


def _sweep_point(task):
    cfg, axis, value, outdir = task
    point_cfg = _point_config(cfg, axis, value)
    result = cmd_run(point_cfg, outdir)
    return {
        "value": value,
        "status": "ok",
        "J": result["final_J"],
        "compliance": result["history"][-1].compliance,
        "alphaP": result["history"][-1].alphaP,
        "gray_fraction": gray_fraction(result["m"].values),
    }


def cmd_sweep(cfg: RunConfig, axis: str, values: list[str],
              output_dir: str | Path | None = None,
              workers: int | None = None) -> dict:
    """Run one point per value; partial failures are recorded, not fatal."""
    if axis not in SWEEP_AXES:
        raise ValueError(f"unknown sweep axis {axis!r}; choose from {SWEEP_AXES}")
    if not values:
        raise ValueError("sweep needs a nonempty list of values")
    out = Path(output_dir if output_dir is not None else cfg.output_dir) / f"sweep_{axis}"
    out.mkdir(parents=True, exist_ok=True)
    tasks = [(cfg, axis, v, out / f"{axis}_{v}") for v in values]

    workers = worker_count() if workers is None else workers
    rows = []
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_sweep_point, t) for t in tasks]
            for task, fut in zip(tasks, futures):
                try:
                    rows.append(fut.result())
                except Exception as exc:  # noqa: BLE001 - per-point isolation
                    rows.append({"value": task[2], "status": f"failed: {exc}",
                                 "J": "", "compliance": "", "alphaP": "",
                                 "gray_fraction": ""})
    else:
        for task in tasks:
            try:
                rows.append(_sweep_point(task))
            except Exception as exc:  # noqa: BLE001
                rows.append({"value": task[2], "status": f"failed: {exc}",
                             "J": "", "compliance": "", "alphaP": "",
                             "gray_fraction": ""})

    summary = out / "summary.csv"
    with open(summary, "w", encoding="ascii", newline="\n") as fh:
        fh.write(f"{axis},status,J,compliance,alphaP,gray_fraction\n")
        for row in rows:
            fh.write(f"{row['value']},{row['status']},{row['J']},"
                     f"{row['compliance']},{row['alphaP']},{row['gray_fraction']}\n")
    return {"summary": summary, "rows": rows, "dir": out}


def cmd_export(run_dir: str | Path, fmt: str, out_path: str | Path | None = None):
    """Re-export artifacts of a finished run in the requested format."""
    run_dir = Path(run_dir)
    cfg = load_run_config(run_dir)
    grid = cfg.grid()
    if fmt == "pgm":
        field = load_field_npy(run_dir / "phi.npy", grid)
        target = Path(out_path) if out_path else run_dir / "phi_export.pgm"
        export_pgm(field, target)
    elif fmt == "vtk":
        field = load_field_npy(run_dir / "phi.npy", grid)
        problem = cfg.problem()
        params = cfg.method_parameters()
        m = blended_field(field, problem.filt, params)
        state = assemble_and_solve(problem.grid, problem.bcs, problem.material,
                                   m, problem.solver, phi=field.values)
        sed = strain_energy_density(grid, problem.material, m.values, state.u)
        target = Path(out_path) if out_path else run_dir / "fields.vtk"
        export_vtk(grid, {"phi": field.values, "m": m.values,
                          "strain_energy_density": sed}, target)
    elif fmt == "csv":
        source = run_dir / "history.csv"
        target = Path(out_path) if out_path else run_dir / "history_export.csv"
        shutil.copyfile(source, target)
    else:
        raise ValueError(f"unknown export format {fmt!r}; choose pgm, vtk or csv")
    return target
