"""Projected explicit gradient flow with an exact volume constraint.

Each step moves against the objective gradient (normalized by its max norm so
the pseudo-time step is a density change scale), then projects back onto the
admissible set {0 <= phi <= 1, mean(phi) = vbar} by clamping plus a scalar
shift found by bisection - the Euclidean projection. Steps that fail to
decrease the objective are retried with a halved step; descent is therefore
guaranteed except when the halving cap is exhausted, which is flagged.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .elasticity import DensityField, ElasticState
from .mesh import Grid
from .sensitivity import MethodParameters, Problem, gradient, objective


@dataclass(frozen=True)
class OptimizerConfig:
    tau0: float = 0.2            # initial pseudo-time step (density-change scale)
    max_iters: int = 200
    tol_step: float = 1e-3       # stop when max |phi_new - phi| drops below this
    backtrack_factor: float = 0.5
    max_halvings: int = 30
    volume_tol: float = 1e-12    # on the volume-fraction residual

    def __post_init__(self):
        if self.tau0 <= 0:
            raise ValueError(f"tau0 must be > 0, got {self.tau0}")
        if self.max_iters < 0:
            raise ValueError(f"max_iters must be >= 0, got {self.max_iters}")


@dataclass
class IterationRecord:
    iteration: int
    J: float
    compliance: float
    alphaP: float
    volfrac: float
    tau: float
    max_dphi: float
    cg_iters: int
    descent: bool = True


def project(psi: np.ndarray, vbar: float, grid: Grid,
            tol: float = 1e-12) -> DensityField:
    """Euclidean projection of a raw field onto {phi in [0,1], mean(phi) = vbar}.

    Returns clamp(psi + lam, 0, 1) with the shift lam found by bisection on the
    volume residual. Fields that are already admissible are returned unchanged.
    """
    if not (0.0 < vbar < 1.0):
        raise ValueError(f"target volume fraction must be in (0, 1), got {vbar}")
    psi = np.asarray(psi, dtype=float)
    if psi.min() >= 0.0 and psi.max() <= 1.0 and abs(psi.mean() - vbar) <= tol:
        return DensityField(psi, grid)

    lo = -1.0 - psi.max()
    hi = 1.0 - psi.min()
    # volume(lo) = 0 < vbar < 1 = volume(hi): always a bracket
    for _ in range(1000):
        lam = 0.5 * (lo + hi)
        phi = np.clip(psi + lam, 0.0, 1.0)
        r = phi.mean() - vbar
        if abs(r) <= tol:
            return DensityField(phi, grid)
        if r < 0.0:
            lo = lam
        else:
            hi = lam
    raise AssertionError("volume bisection failed to converge")


def _advance(phi: DensityField, J: float, state: ElasticState, tau: float,
             params: MethodParameters, problem: Problem, cfg: OptimizerConfig):
    """One backtracked descent step from (phi, J, state). Returns the new
    iterate, its (J, state), the accepted tau and the record (without index)."""
    g = gradient(phi, params, problem, state)
    g_inf = float(np.abs(g).max())
    if g_inf == 0.0:
        rec = IterationRecord(-1, J, state.compliance, J - state.compliance,
                              phi.volume_fraction(), tau, 0.0, 0, True)
        return phi, J, state, tau, rec

    direction = g / g_inf
    descent = True
    for halving in range(cfg.max_halvings + 1):
        cand = project(phi.values - tau * direction, params.vbar, problem.grid,
                       cfg.volume_tol)
        J_c, state_c = objective(cand, params, problem, u0=state.u)
        if J_c <= J:
            break
        if halving == cfg.max_halvings:
            descent = False  # cap hit: accept the smallest-step candidate
            break
        tau *= cfg.backtrack_factor

    max_dphi = float(np.abs(cand.values - phi.values).max())
    rec = IterationRecord(-1, J_c, state_c.compliance, J_c - state_c.compliance,
                          cand.volume_fraction(), tau, max_dphi,
                          state_c.cg_iterations, descent)
    return cand, J_c, state_c, tau, rec


def step(phi: DensityField, params: MethodParameters, problem: Problem,
         cfg: OptimizerConfig = OptimizerConfig()) -> tuple[DensityField, IterationRecord]:
    """Single optimization step from phi (solves the state internally)."""
    J, state = objective(phi, params, problem)
    new_phi, _, _, _, rec = _advance(phi, J, state, cfg.tau0, params, problem, cfg)
    rec.iteration = 0
    return new_phi, rec


def run(phi0: DensityField | np.ndarray, params: MethodParameters, problem: Problem,
        cfg: OptimizerConfig = OptimizerConfig(),
        callback=None) -> tuple[DensityField, list[IterationRecord]]:
    """Iterate steps until the field stops moving or max_iters is reached.

    The optional callback(iteration, phi, record) fires after every accepted
    step. The run is deterministic for a given configuration.
    """
    if isinstance(phi0, np.ndarray):
        phi0 = DensityField(phi0, problem.grid)
    phi = project(phi0.values, params.vbar, problem.grid, cfg.volume_tol)
    history: list[IterationRecord] = []
    if cfg.max_iters == 0:
        return phi, history

    J, state = objective(phi, params, problem)
    tau = cfg.tau0
    for it in range(cfg.max_iters):
        phi, J, state, tau_used, rec = _advance(phi, J, state, tau, params, problem, cfg)
        rec.iteration = it
        history.append(rec)
        if callback is not None:
            callback(it, phi, rec)
        if rec.max_dphi < cfg.tol_step:
            break
        # gentle step recovery: try a slightly larger step next time
        tau = min(cfg.tau0, 2.0 * tau_used)
    return phi, history


def default_initial_field(grid: Grid, vbar: float) -> DensityField:
    """Uniform field at the target volume fraction."""
    return DensityField(np.full(grid.n_elements, vbar), grid)
