"""Objective, exact design gradient, and four-field stationarity residuals.

The objective is compliance plus the weighted diffuse perimeter. Its gradient
needs no adjoint solve: compliance is self-adjoint, so the variation of the
equilibrium constraint folds back onto the displacement itself and leaves

    g_e = 2 (f . u)_e A  -  [(alpha I + beta K^T) w]_e  +  alpha dP_e,
    w_e = d_scale(m_e) * u_e^T K0 u_e,

with m the blended density seen by the elasticity tensor. The same structure
is exposed a second way through the residuals of a four-field Lagrangian in
(phi, u, e, sigma): when the state residuals vanish, the design variation of
the Lagrangian is exactly half the gradient, which gives an independent
consistency check on both code paths.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .elasticity import (BlendedField, DensityField, ElasticState, SolverConfig,
                         assemble_loads, assemble_and_solve, element_energies,
                         field_hash, gauss_b_matrices, reference_element_stiffness)
from .filtering import FilterOperator
from .material import MaterialModel
from .mesh import BoundaryConditions, Grid
from .phasefield import PhaseFieldParams, eval_P_gamma, grad_P_gamma

# Raw blend values outside [0,1] by more than this are treated as genuinely
# clamped (derivative zero); the band keeps float jitter at pure phases from
# flipping element sensitivities on and off.
_CLAMP_TOL = 1e-12


@dataclass(frozen=True)
class MethodParameters:
    """Blending weights, perimeter parameters and the volume target.

    beta defaults to 1 - alpha (the reference coupling); pass beta explicitly
    to decouple the two weights. alpha = 0 drops the perimeter term entirely,
    beta = 0 drops the filter.
    """

    alpha: float
    beta: float | None = None
    gamma: float = 0.01   # interface width, m
    eta: float = 1.0      # perimeter weight, N/m
    r_f: float = 0.1      # filter radius, m
    vbar: float = 0.4     # target volume fraction

    def __post_init__(self):
        if self.beta is None:
            object.__setattr__(self, "beta", 1.0 - self.alpha)
        if self.alpha < 0 or self.beta < 0:
            raise ValueError(f"alpha and beta must be >= 0, got ({self.alpha}, {self.beta})")
        if self.alpha + self.beta <= 0:
            raise ValueError("alpha + beta must be > 0")
        if not (0.0 < self.vbar < 1.0):
            raise ValueError(f"volume fraction must be in (0, 1), got {self.vbar}")
        if self.alpha > 0 and self.gamma <= 0:
            raise ValueError("gamma must be > 0 when the perimeter term is active")

    @property
    def phase(self) -> PhaseFieldParams:
        return PhaseFieldParams(self.gamma, self.eta)


@dataclass(frozen=True)
class Problem:
    """One load case: geometry, constraints, material, filter and solver."""

    grid: Grid
    bcs: BoundaryConditions
    material: MaterialModel
    filt: FilterOperator
    solver: SolverConfig = SolverConfig()


@dataclass
class LagrangianResiduals:
    r_u: float            # equilibrium residual on free dofs
    r_e: float            # constitutive residual |sigma - C(m) e|
    r_sigma: float        # compatibility residual |e - eps(u)|
    dphi_L: np.ndarray    # design variation of the Lagrangian, per element


def _as_field(phi, grid: Grid) -> DensityField:
    if isinstance(phi, DensityField):
        return phi
    return DensityField(np.asarray(phi, dtype=float), grid)


def blended_field(phi: DensityField, filt: FilterOperator, params: MethodParameters) -> BlendedField:
    """m = alpha phi + beta K phi, clamped to [0,1]."""
    raw = params.alpha * phi.values + params.beta * filt.apply(phi.values)
    return BlendedField(raw, params.alpha, params.beta)


def _blend_raw(phi_values: np.ndarray, filt: FilterOperator, params: MethodParameters) -> np.ndarray:
    return params.alpha * phi_values + params.beta * filt.apply(phi_values)


def objective(phi, params: MethodParameters, problem: Problem,
              u0: np.ndarray | None = None) -> tuple[float, ElasticState]:
    """J(phi) = compliance(phi, S(phi)) + alpha * P_gamma(phi); returns the state."""
    phi = _as_field(phi, problem.grid)
    m = blended_field(phi, problem.filt, params)
    state = assemble_and_solve(problem.grid, problem.bcs, problem.material, m,
                               problem.solver, phi=phi.values, u0=u0)
    J = state.compliance
    if params.alpha > 0:
        J += params.alpha * eval_P_gamma(phi, params.phase)
    return float(J), state


def _body_force_term(grid: Grid, bcs: BoundaryConditions, u: np.ndarray) -> np.ndarray:
    """Per-element f . (element mean of u) * cell_area, zero without body force."""
    if bcs.body_force is None:
        return np.zeros(grid.n_elements)
    edofs = grid.element_dof_table()
    ux = u[edofs[:, 0::2]].mean(axis=1)
    uy = u[edofs[:, 1::2]].mean(axis=1)
    fx, fy = bcs.body_force
    return (fx * ux + fy * uy) * grid.cell_area


def _energy_weights(phi: DensityField, params: MethodParameters, problem: Problem,
                    energies: np.ndarray) -> np.ndarray:
    """d_scale(m_e) times the elemental quadratic energy, clamp-aware."""
    raw = _blend_raw(phi.values, problem.filt, params)
    m = np.clip(raw, 0.0, 1.0)
    active = (raw > -_CLAMP_TOL) & (raw < 1.0 + _CLAMP_TOL)
    return problem.material.d_scale(m) * energies * active


def gradient(phi, params: MethodParameters, problem: Problem,
             state: ElasticState) -> np.ndarray:
    """Exact discrete gradient of the objective at phi, given state = S(phi)."""
    phi = _as_field(phi, problem.grid)
    m = blended_field(phi, problem.filt, params)
    if field_hash(m.values) != state.m_hash:
        raise ValueError("stale elastic state: it was solved for a different density")

    K0 = reference_element_stiffness(problem.grid, problem.material.solid_tensor())
    w = _energy_weights(phi, params, problem, element_energies(problem.grid, K0, state.u))
    g = 2.0 * _body_force_term(problem.grid, problem.bcs, state.u)
    g -= params.alpha * w + params.beta * problem.filt.apply_adjoint(w)
    if params.alpha > 0:
        g += params.alpha * grad_P_gamma(phi, params.phase)
    return g


def lagrangian_residuals(phi, u: np.ndarray, e: np.ndarray, sigma: np.ndarray,
                         params: MethodParameters, problem: Problem) -> LagrangianResiduals:
    """Stationarity residuals of the four-field Lagrangian at (phi, u, e, sigma).

    r_e and r_sigma are flat 2-norms over all Gauss-point entries; r_u is the
    2-norm of external-minus-internal forces on the free dofs. The returned
    dphi_L equals half the design gradient whenever the other three vanish.
    """
    grid, bcs = problem.grid, problem.bcs
    phi = _as_field(phi, grid)
    m = blended_field(phi, problem.filt, params)
    scale = problem.material.scale(m.values)
    C1 = problem.material.solid_tensor()

    sigma_of_e = scale[:, None, None] * np.einsum("cd,egd->egc", C1, e)
    r_e = float(np.linalg.norm(sigma - sigma_of_e))

    B = gauss_b_matrices(grid)
    ue = u[grid.element_dof_table()]
    eps_u = np.einsum("gcb,eb->egc", B, ue)
    r_sigma = float(np.linalg.norm(e - eps_u))

    detJ = grid.hx * grid.hy / 4.0
    f_elem = detJ * np.einsum("gcb,egc->eb", B, sigma)  # internal nodal forces
    f_int = np.zeros(grid.n_dofs)
    np.add.at(f_int, grid.element_dof_table(), f_elem)
    F = assemble_loads(grid, bcs, phi.values)
    free = np.setdiff1d(np.arange(grid.n_dofs), bcs.fixed_dofs())
    r_u = float(np.linalg.norm((F - f_int)[free]))

    energies = detJ * np.einsum("egc,cd,egd->e", e, C1, e)
    w = _energy_weights(phi, params, problem, energies)
    dphi_L = _body_force_term(grid, bcs, u)
    dphi_L -= 0.5 * (params.alpha * w + params.beta * problem.filt.apply_adjoint(w))
    if params.alpha > 0:
        dphi_L += 0.5 * params.alpha * grad_P_gamma(phi, params.phase)
    return LagrangianResiduals(r_u=r_u, r_e=r_e, r_sigma=r_sigma, dphi_L=dphi_L)
