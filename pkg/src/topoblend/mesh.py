"""Structured quadrilateral meshes of rectangular design domains.

The grid is the single geometric object the whole package works on:
element-wise constant density fields live on cell centroids, bilinear
displacements on the nodes. Indexing is row-major with x fastest, so a
field reshaped to ``(ny, nx)`` is already image-ordered (row 0 = bottom).
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class Grid:
    """Uniform nx-by-ny quad mesh of a rectangular domain lx-by-ly (meters)."""

    nx: int
    ny: int
    lx: float
    ly: float

    def __post_init__(self):
        if self.nx < 1 or self.ny < 1:
            raise ValueError(f"element counts must be >= 1, got {self.nx}x{self.ny}")
        if self.lx <= 0 or self.ly <= 0:
            raise ValueError(f"domain lengths must be > 0, got {self.lx}x{self.ly}")

    @property
    def hx(self) -> float:
        return self.lx / self.nx

    @property
    def hy(self) -> float:
        return self.ly / self.ny

    @property
    def n_elements(self) -> int:
        return self.nx * self.ny

    @property
    def n_nodes(self) -> int:
        return (self.nx + 1) * (self.ny + 1)

    @property
    def n_dofs(self) -> int:
        return 2 * self.n_nodes

    @property
    def area(self) -> float:
        return self.lx * self.ly

    @property
    def cell_area(self) -> float:
        return self.hx * self.hy

    def node_id(self, i, j):
        """Node index for node column i (0..nx), row j (0..ny)."""
        return j * (self.nx + 1) + i

    def element_id(self, i, j):
        """Element index for element column i (0..nx-1), row j (0..ny-1)."""
        return j * self.nx + i

    def element_ij(self, e):
        """Inverse of element_id."""
        return e % self.nx, e // self.nx

    def element_nodes(self, e: int) -> np.ndarray:
        """The 4 node ids of element e in counter-clockwise order (bl, br, tr, tl)."""
        i, j = self.element_ij(e)
        n0 = self.node_id(i, j)
        return np.array([n0, n0 + 1, n0 + self.nx + 2, n0 + self.nx + 1])

    def element_dof_table(self) -> np.ndarray:
        """(n_elements, 8) array of global dof ids, [ux0, uy0, ux1, uy1, ...] ccw."""
        i, j = np.meshgrid(np.arange(self.nx), np.arange(self.ny), indexing="xy")
        n0 = (j * (self.nx + 1) + i).ravel()
        nodes = np.column_stack([n0, n0 + 1, n0 + self.nx + 2, n0 + self.nx + 1])
        dofs = np.empty((self.n_elements, 8), dtype=np.int64)
        dofs[:, 0::2] = 2 * nodes
        dofs[:, 1::2] = 2 * nodes + 1
        return dofs

    def node_coords(self) -> np.ndarray:
        """(n_nodes, 2) coordinates."""
        x = np.arange(self.nx + 1) * self.hx
        y = np.arange(self.ny + 1) * self.hy
        X, Y = np.meshgrid(x, y, indexing="xy")
        return np.column_stack([X.ravel(), Y.ravel()])

    def centroids(self) -> np.ndarray:
        """(n_elements, 2) element centroid coordinates."""
        x = (np.arange(self.nx) + 0.5) * self.hx
        y = (np.arange(self.ny) + 0.5) * self.hy
        X, Y = np.meshgrid(x, y, indexing="xy")
        return np.column_stack([X.ravel(), Y.ravel()])


@dataclass
class BoundaryConditions:
    """Clamped nodes, traction edges and body force for one load case.

    dirichlet_nodes fix both displacement components of a node. Single-dof
    constraints (rollers) go into extra_fixed_dofs as global dof ids.
    neumann_edges are ((node_a, node_b), (gx, gy)) pairs with traction in Pa;
    the edge length comes from the node coordinates. body_force is a constant
    per-unit-density force (N/m^3) applied to every element, or None.
    """

    dirichlet_nodes: np.ndarray
    neumann_edges: list = field(default_factory=list)
    body_force: np.ndarray | None = None
    extra_fixed_dofs: np.ndarray = field(default_factory=lambda: np.array([], dtype=np.int64))

    def __post_init__(self):
        self.dirichlet_nodes = np.asarray(self.dirichlet_nodes, dtype=np.int64)
        self.extra_fixed_dofs = np.asarray(self.extra_fixed_dofs, dtype=np.int64)
        if self.dirichlet_nodes.size == 0:
            raise ValueError("dirichlet_nodes must be nonempty (well-posedness)")
        if self.body_force is not None:
            self.body_force = np.asarray(self.body_force, dtype=float)
            if np.allclose(self.body_force, 0.0):
                self.body_force = None

    def fixed_dofs(self) -> np.ndarray:
        """Sorted unique global dof ids with prescribed zero displacement."""
        both = np.column_stack([2 * self.dirichlet_nodes, 2 * self.dirichlet_nodes + 1]).ravel()
        return np.unique(np.concatenate([both, self.extra_fixed_dofs]))


def build_grid(nx: int, ny: int, lx: float, ly: float) -> Grid:
    """Build a structured grid; rejects non-positive dimensions."""
    return Grid(int(nx), int(ny), float(lx), float(ly))


def cantilever_benchmark_bcs(grid: Grid, traction: float = 1.0e6) -> BoundaryConditions:
    """Left edge clamped; downward traction on the rightmost 10% of the bottom.

    An edge is loaded iff its midpoint x-coordinate is >= 0.9*lx, which
    avoids partially loaded edges when the 90% cut falls inside an element.
    """
    left = np.array([grid.node_id(0, j) for j in range(grid.ny + 1)], dtype=np.int64)
    edges = []
    g = np.array([0.0, -traction])
    for i in range(grid.nx):
        midpoint_x = (i + 0.5) * grid.hx
        if midpoint_x >= 0.9 * grid.lx:
            edges.append(((grid.node_id(i, 0), grid.node_id(i + 1, 0)), g.copy()))
    return BoundaryConditions(dirichlet_nodes=left, neumann_edges=edges)


def uniaxial_patch_bcs(grid: Grid, traction: float = 1.0) -> BoundaryConditions:
    """Uniaxial tension patch: rollers on the left edge, traction t on the right.

    u_x = 0 on the left edge, u_y = 0 only at the bottom-left corner; both are
    satisfied by the exact solution u = (t x / E, -nu t y / E), so a bilinear
    element must reproduce sigma_xx = t exactly.
    """
    corner = grid.node_id(0, 0)
    roller_dofs = np.array(
        [2 * grid.node_id(0, j) for j in range(1, grid.ny + 1)], dtype=np.int64
    )
    g = np.array([traction, 0.0])
    edges = [
        ((grid.node_id(grid.nx, j), grid.node_id(grid.nx, j + 1)), g.copy())
        for j in range(grid.ny)
    ]
    return BoundaryConditions(
        dirichlet_nodes=np.array([corner]),
        neumann_edges=edges,
        extra_fixed_dofs=roller_dofs,
    )
