"""Self-contained verification checks behind `topoblend verify`.

Every check pits an implementation path against an independent oracle:
finite differences for the design gradient, inner products for the filter
adjoint, the exact constant-stress solution for the element, the four-field
stationarity identity for the Lagrangian, and 1D quadrature of the interface
profile for the diffuse perimeter.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .config import RunConfig
from .elasticity import DensityField, SolverConfig, assemble_and_solve
from .filtering import build_filter
from .mesh import build_grid, cantilever_benchmark_bcs, uniaxial_patch_bcs
from .phasefield import PhaseFieldParams, eval_P_gamma, vertical_interface_field
from .sensitivity import (MethodParameters, Problem, gradient,
                          lagrangian_residuals, objective)

CHECK_NAMES = ("gradient", "filter", "patch", "lagrangian", "modica")


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str


def _gradient_test_setup(cfg: RunConfig, solver_rtol: float = 1e-12):
    """Small cantilever with an active filter and tightened solver."""
    grid = build_grid(8, 4, 2.0, 1.0)
    bcs = cantilever_benchmark_bcs(grid, cfg.load_traction)
    problem = Problem(grid=grid, bcs=bcs, material=cfg.material_model(),
                      filt=build_filter(grid, 0.6),
                      solver=SolverConfig(rtol=solver_rtol))
    params = MethodParameters(alpha=0.5, beta=0.5, gamma=0.05, eta=cfg.eta,
                              r_f=0.6, vbar=cfg.vbar)
    return grid, problem, params


def finite_difference_gradient(phi: DensityField, params, problem,
                               elements, h: float = 1e-6) -> np.ndarray:
    """Central differences of the objective on selected elements (the oracle)."""
    fd = np.empty(len(elements))
    for k, e in enumerate(elements):
        for sign in (+1.0, -1.0):
            pert = phi.values.copy()
            pert[e] += sign * h
            J, _ = objective(DensityField(pert, problem.grid), params, problem)
            if sign > 0:
                J_plus = J
            else:
                J_minus = J
        fd[k] = (J_plus - J_minus) / (2.0 * h)
    return fd


def check_gradient(cfg: RunConfig, tol: float = 1e-5, n_elements: int = 20) -> CheckResult:
    """Analytic design gradient vs central finite differences of the objective."""
    grid, problem, params = _gradient_test_setup(cfg)
    rng = np.random.default_rng(cfg.seed)
    phi = DensityField(rng.uniform(0.2, 0.8, grid.n_elements), grid)
    _, state = objective(phi, params, problem)
    g = gradient(phi, params, problem, state)
    elements = rng.choice(grid.n_elements, size=n_elements, replace=False)
    fd = finite_difference_gradient(phi, params, problem, elements)
    rel = np.abs(g[elements] - fd) / np.maximum(np.abs(fd), np.abs(g[elements]))
    worst = float(rel.max())
    return CheckResult("gradient", worst <= tol,
                       f"max relative FD mismatch {worst:.3e} over "
                       f"{n_elements} elements (tol {tol:g})")


def check_filter(cfg: RunConfig, tol: float = 1e-12, n_fields: int = 100) -> CheckResult:
    """Row sums, adjoint identity and range preservation of the filter."""
    grid = cfg.grid()
    filt = build_filter(grid, cfg.r_f)
    ones = np.ones(grid.n_elements)
    row_err = float(np.abs(filt.apply(ones) - 1.0).max())

    rng = np.random.default_rng(cfg.seed)
    adj_err = 0.0
    for _ in range(10):
        a = rng.standard_normal(grid.n_elements)
        b = rng.standard_normal(grid.n_elements)
        lhs = filt.apply(a) @ b
        rhs = a @ filt.apply_adjoint(b)
        adj_err = max(adj_err, abs(lhs - rhs) / max(abs(lhs), 1.0))

    range_ok = True
    for _ in range(n_fields):
        v = rng.uniform(0.0, 1.0, grid.n_elements)
        Kv = filt.apply(v)
        if Kv.min() < -tol or Kv.max() > 1.0 + tol:
            range_ok = False
            break

    ok = row_err <= tol and adj_err <= tol and range_ok
    return CheckResult("filter", ok,
                       f"row-sum error {row_err:.3e}, adjoint error {adj_err:.3e}, "
                       f"range preserved on {n_fields} fields: {range_ok} (tol {tol:g})")


def check_patch(cfg: RunConfig, tol: float = 1e-10) -> CheckResult:
    """Uniaxial patch test: constant stress reproduced exactly at full density."""
    grid = build_grid(20, 10, 2.0, 1.0)
    traction = 1.0e6
    bcs = uniaxial_patch_bcs(grid, traction)
    state = assemble_and_solve(grid, bcs, cfg.material_model(),
                               np.ones(grid.n_elements), SolverConfig(rtol=1e-14))
    sxx = state.stress[:, :, 0]
    syy = state.stress[:, :, 1]
    sxy = state.stress[:, :, 2]
    err = max(float(np.abs(sxx - traction).max()),
              float(np.abs(syy).max()), float(np.abs(sxy).max())) / traction
    return CheckResult("patch", err <= tol,
                       f"max relative stress deviation {err:.3e} (tol {tol:g})")


def check_lagrangian(cfg: RunConfig, tol: float = 1e-8) -> CheckResult:
    """At a consistent state the design variation is half the gradient and the
    three state residuals vanish to solver accuracy."""
    grid, problem, params = _gradient_test_setup(cfg)
    rng = np.random.default_rng(cfg.seed + 1)
    phi = DensityField(rng.uniform(0.2, 0.8, grid.n_elements), grid)
    _, state = objective(phi, params, problem)
    res = lagrangian_residuals(phi, state.u, state.strain, state.stress,
                               params, problem)
    g = gradient(phi, params, problem, state)
    identity_err = float(np.linalg.norm(g - 2.0 * res.dphi_L) / np.linalg.norm(g))
    state_ok = res.r_e <= 1e-6 and res.r_sigma <= 1e-12  # Pa / strain units
    equilibrium_ok = res.r_u <= 1e-6  # N, on a 2e5 N load at rtol 1e-12
    ok = identity_err <= tol and state_ok and equilibrium_ok
    return CheckResult("lagrangian", ok,
                       f"|g - 2 dphi_L| / |g| = {identity_err:.3e} (tol {tol:g}); "
                       f"r_u {res.r_u:.3e}, r_e {res.r_e:.3e}, r_sigma {res.r_sigma:.3e}")


def profile_energy_per_length(gamma: float, eta: float = 1.0) -> float:
    """1D quadrature oracle: energy of the equipartition profile per unit
    interface length, integrated far past the transition."""
    span = 40.0 * gamma

    def integrand(x):
        p = 1.0 / (1.0 + np.exp(-np.sqrt(2.0) * x / gamma))
        dp = np.sqrt(2.0) / gamma * p * (1.0 - p)
        return 0.5 * gamma * dp ** 2 + (p * (1.0 - p)) ** 2 / gamma

    value, _ = quad(integrand, -span, span, limit=400)
    return eta * value


def check_modica(cfg: RunConfig, tol: float = 0.02) -> CheckResult:
    """Discrete diffuse energy of the interface profile vs the quadrature oracle."""
    gamma = 0.02
    grid = build_grid(1000, 8, 2.0, 1.0)  # h = 0.002: 10 cells per gamma
    field = vertical_interface_field(grid, 1.0, gamma)
    P = eval_P_gamma(field, PhaseFieldParams(gamma, cfg.eta))
    oracle = profile_energy_per_length(gamma, cfg.eta) * grid.ly
    rel = abs(P - oracle) / oracle
    return CheckResult("modica", rel <= tol,
                       f"discrete {P:.6f} vs quadrature oracle {oracle:.6f} "
                       f"(rel {rel:.2e}, tol {tol:g})")


_CHECKS = {
    "gradient": check_gradient,
    "filter": check_filter,
    "patch": check_patch,
    "lagrangian": check_lagrangian,
    "modica": check_modica,
}


def run_checks(cfg: RunConfig, which=("all",)) -> list[CheckResult]:
    names = CHECK_NAMES if "all" in which else tuple(which)
    results = []
    for name in names:
        if name not in _CHECKS:
            raise ValueError(f"unknown check {name!r}; choose from {CHECK_NAMES}")
        results.append(_CHECKS[name](cfg))
    return results
