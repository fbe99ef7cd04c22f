"""
Cantilever quickstart
=====================

Optimize the material layout of a 2 x 1 m cantilever: clamped on the left,
pulled down by a 1 MPa traction on the rightmost 10% of the bottom edge.
The design field lives on element centroids; the elasticity tensor sees the
blend alpha*phi + beta*K phi of the raw density and its filtered version,
and the objective adds a diffuse-interface perimeter penalty to compliance.

Runs a reduced 60 x 30 mesh so the whole script finishes in about a minute;
switch to 100 x 50 for the full-resolution layout.
"""
from pathlib import Path

from topoblend import OptimizerConfig, benchmark_config, default_initial_field, run
from topoblend.app import gray_fraction
from topoblend.config import with_updates
from topoblend.elasticity import DensityField
from topoblend.exporters import export_csv, export_pgm, export_vtk
from topoblend.sensitivity import blended_field, objective

out = Path(__file__).parent / "out" / "quickstart"
out.mkdir(parents=True, exist_ok=True)

# ----------------------------------------------------------------------------
# Problem setup: geometry, material, filter, and the blending weights.
cfg = with_updates(benchmark_config(), nx=60, ny=30)
problem = cfg.problem()
params = cfg.method_parameters()
print(f"mesh: {cfg.nx} x {cfg.ny} elements of {problem.grid.hx:.3f} m")
print(f"blend: alpha = {params.alpha}, beta = {params.beta}, "
      f"r_f = {params.r_f} m, gamma = {params.gamma} m")

# ----------------------------------------------------------------------------
# Start from a uniform field at the target volume fraction and descend.
phi0 = default_initial_field(problem.grid, params.vbar)
J0, _ = objective(phi0, params, problem)
print(f"objective at the uniform start: {J0:.1f} J")

phi, history = run(phi0, params, problem, OptimizerConfig(max_iters=150))
final = history[-1]
print(f"{len(history)} iterations: J = {final.J:.1f} J "
      f"({1 - final.J / J0:.0%} below the uniform start)")
print(f"volume fraction held at {final.volfrac:.12f}")

# ----------------------------------------------------------------------------
# Export: raw density, blended density, convergence history, cell fields.
m = blended_field(phi, problem.filt, params)
export_pgm(phi, out / "phi.pgm")
export_pgm(DensityField(m.values, problem.grid), out / "m.pgm")
export_csv(history, out / "history.csv")
export_vtk(problem.grid, {"phi": phi.values, "m": m.values}, out / "fields.vtk")
print(f"gray fraction of the blended field: {gray_fraction(m.values):.2f}")
print(f"artifacts written to {out}")

# A coarse look at the layout without leaving the terminal:
img = phi.values.reshape(problem.grid.ny, problem.grid.nx)[::-1]
for row in img[::3, ::2]:
    print("".join(" .:*#@"[min(int(v * 5.999), 5)] for v in row))
