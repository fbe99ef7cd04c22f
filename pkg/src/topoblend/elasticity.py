"""Q4 plane-stress FEM: assembly, equilibrium solve, energies and compliance.

Displacements are bilinear on the nodes, densities constant per element, and
quadrature is 2x2 Gauss, which is exact for the bilinear element on
rectangles. Because the constitutive tensor is a scalar multiple of the solid
tensor, the global stiffness is one reference 8x8 matrix scattered with a
per-element multiplier. Dirichlet constraints are eliminated (reduced
system), so they are satisfied exactly; the reduced SPD system is solved with
Jacobi-preconditioned conjugate gradients.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import cg

from .material import MaterialModel
from .mesh import BoundaryConditions, Grid

GAUSS_POINTS = [(-1.0 / np.sqrt(3.0), -1.0 / np.sqrt(3.0)),
                (1.0 / np.sqrt(3.0), -1.0 / np.sqrt(3.0)),
                (1.0 / np.sqrt(3.0), 1.0 / np.sqrt(3.0)),
                (-1.0 / np.sqrt(3.0), 1.0 / np.sqrt(3.0))]


class SolverError(RuntimeError):
    """CG failed to reach the requested tolerance within the iteration cap."""

    def __init__(self, message: str, residual: float, iterations: int):
        super().__init__(message)
        self.residual = residual
        self.iterations = iterations


@dataclass(frozen=True)
class SolverConfig:
    rtol: float = 1e-8
    max_iters: int = 100_000


@dataclass
class DensityField:
    """Element-wise design density in [0, 1] on a grid."""

    values: np.ndarray
    grid: Grid

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (self.grid.n_elements,):
            raise ValueError(
                f"density length {self.values.shape} != {self.grid.n_elements} elements"
            )
        if self.values.min() < -1e-12 or self.values.max() > 1 + 1e-12:
            raise ValueError("density values must lie in [0, 1]")

    def volume_fraction(self) -> float:
        return float(self.values.mean())


@dataclass
class BlendedField:
    """The field alpha*phi + beta*K phi actually seen by the elasticity tensor."""

    values: np.ndarray
    alpha: float
    beta: float

    def __post_init__(self):
        self.values = np.clip(np.asarray(self.values, dtype=float), 0.0, 1.0)


@dataclass
class ElasticState:
    """Equilibrium displacement with derived Gauss-point strain and stress."""

    u: np.ndarray            # (n_dofs,) nodal displacements, m
    strain: np.ndarray       # (n_elements, 4, 3) Voigt strain at Gauss points
    stress: np.ndarray       # (n_elements, 4, 3) Voigt stress at Gauss points, Pa
    compliance: float        # external work, J per unit thickness
    cg_iterations: int
    m_hash: str              # fingerprint of the blended field this state solves


def field_hash(values: np.ndarray) -> str:
    return hashlib.sha1(np.ascontiguousarray(values, dtype=float).tobytes()).hexdigest()


def gauss_b_matrices(grid: Grid) -> np.ndarray:
    """(4, 3, 8) strain-displacement matrices at the 2x2 Gauss points.

    Node order is ccw (bl, br, tr, tl); engineering shear in row 2.
    """
    xi_n = np.array([-1.0, 1.0, 1.0, -1.0])
    eta_n = np.array([-1.0, -1.0, 1.0, 1.0])
    B = np.zeros((4, 3, 8))
    for g, (xi, eta) in enumerate(GAUSS_POINTS):
        dN_dxi = 0.25 * xi_n * (1.0 + eta * eta_n)
        dN_deta = 0.25 * eta_n * (1.0 + xi * xi_n)
        dN_dx = dN_dxi * 2.0 / grid.hx
        dN_dy = dN_deta * 2.0 / grid.hy
        B[g, 0, 0::2] = dN_dx
        B[g, 1, 1::2] = dN_dy
        B[g, 2, 0::2] = dN_dy
        B[g, 2, 1::2] = dN_dx
    return B


def reference_element_stiffness(grid: Grid, C1: np.ndarray) -> np.ndarray:
    """8x8 element stiffness for the solid tensor C1 (unit thickness).

    Symmetric positive-semidefinite with a 3-dimensional kernel (two
    translations and one rigid rotation).
    """
    B = gauss_b_matrices(grid)
    detJ = grid.hx * grid.hy / 4.0
    K0 = np.zeros((8, 8))
    for g in range(4):
        K0 += detJ * B[g].T @ C1 @ B[g]
    return 0.5 * (K0 + K0.T)


def assemble_loads(grid: Grid, bcs: BoundaryConditions, phi: np.ndarray | None = None) -> np.ndarray:
    """Consistent global load vector: edge tractions plus phi-weighted body force.

    The body force enters per unit density, so its element contribution scales
    with the raw design density phi, not with the blended field.
    """
    F = np.zeros(grid.n_dofs)
    coords = grid.node_coords()
    for (a, b), g in bcs.neumann_edges:
        length = float(np.hypot(*(coords[b] - coords[a])))
        F[2 * a:2 * a + 2] += 0.5 * length * np.asarray(g, dtype=float)
        F[2 * b:2 * b + 2] += 0.5 * length * np.asarray(g, dtype=float)
    if bcs.body_force is not None:
        if phi is None:
            raise ValueError("body force present: the raw density phi is required")
        share = np.asarray(phi) * (grid.cell_area / 4.0)  # per node, per element
        edofs = grid.element_dof_table()
        fx, fy = bcs.body_force
        np.add.at(F, edofs[:, 0::2], (share * fx)[:, None])
        np.add.at(F, edofs[:, 1::2], (share * fy)[:, None])
    return F


def assemble_stiffness(grid: Grid, scale: np.ndarray, K0: np.ndarray) -> sp.csr_matrix:
    """Global sparse stiffness sum_e scale_e * K0 scattered by connectivity."""
    edofs = grid.element_dof_table()
    rows = np.repeat(edofs, 8, axis=1).ravel()
    cols = np.tile(edofs, (1, 8)).ravel()
    data = (scale[:, None, None] * K0[None, :, :]).ravel()
    K = sp.coo_matrix((data, (rows, cols)), shape=(grid.n_dofs, grid.n_dofs))
    return K.tocsr()


def assemble_and_solve(
    grid: Grid,
    bcs: BoundaryConditions,
    material: MaterialModel,
    m: BlendedField | np.ndarray,
    solver: SolverConfig = SolverConfig(),
    phi: np.ndarray | None = None,
    u0: np.ndarray | None = None,
) -> ElasticState:
    """Solve equilibrium for the blended density m and return the full state.

    phi is only needed when a body force is present (the load scales with the
    raw density). u0 warm-starts CG with a previous displacement.
    """
    m_vals = m.values if isinstance(m, BlendedField) else np.asarray(m, dtype=float)
    scale = material.scale(np.clip(m_vals, 0.0, 1.0))
    C1 = material.solid_tensor()
    K0 = reference_element_stiffness(grid, C1)
    K = assemble_stiffness(grid, scale, K0)
    F = assemble_loads(grid, bcs, phi)

    fixed = bcs.fixed_dofs()
    if fixed.size == 0:
        raise ValueError("no constrained dofs: singular system")
    free = np.setdiff1d(np.arange(grid.n_dofs), fixed)
    Kff = K[free][:, free]
    Ff = F[free]

    u = np.zeros(grid.n_dofs)
    iterations = 0
    if np.linalg.norm(Ff) > 0.0:
        M = sp.diags(1.0 / Kff.diagonal())
        count = [0]

        def tick(_):
            count[0] += 1

        x0 = u0[free] if u0 is not None else None
        x, info = cg(Kff, Ff, x0=x0, rtol=solver.rtol, atol=0.0,
                     maxiter=solver.max_iters, M=M, callback=tick)
        iterations = count[0]
        if info != 0:
            residual = float(np.linalg.norm(Ff - Kff @ x))
            raise SolverError(
                f"CG did not converge in {iterations} iterations "
                f"(residual {residual:.3e})", residual, iterations)
        u[free] = x

    B = gauss_b_matrices(grid)
    ue = u[grid.element_dof_table()]
    strain = np.einsum("gcb,eb->egc", B, ue)
    stress = scale[:, None, None] * np.einsum("cd,egd->egc", C1, strain)
    return ElasticState(
        u=u,
        strain=strain,
        stress=stress,
        compliance=float(F @ u),
        cg_iterations=iterations,
        m_hash=field_hash(m_vals),
    )


def compliance(phi: DensityField, state: ElasticState, bcs: BoundaryConditions) -> float:
    """External work int(phi f . u) + int(g . u) for the given state."""
    F = assemble_loads(phi.grid, bcs, phi.values)
    return float(F @ state.u)


def element_energies(grid: Grid, K0: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Per-element quadratic form u_e^T K0 u_e (twice the elemental strain energy
    at unit stiffness multiplier)."""
    ue = u[grid.element_dof_table()]
    return np.einsum("ei,ij,ej->e", ue, K0, ue)


def strain_energy_density(grid: Grid, material: MaterialModel,
                          m_vals: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Per-element stored energy per unit area, for export."""
    K0 = reference_element_stiffness(grid, material.solid_tensor())
    scale = material.scale(np.clip(m_vals, 0.0, 1.0))
    return 0.5 * scale * element_energies(grid, K0, u) / grid.cell_area
