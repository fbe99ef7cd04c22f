"""topoblend: 2D compliance topology optimization on structured quad grids,
blending a compact density filter with a diffuse-interface perimeter penalty
under an exact volume constraint."""

from .config import RunConfig, benchmark_config, load_config, parse_config, serialize_config
from .elasticity import (BlendedField, DensityField, ElasticState, SolverConfig,
                         SolverError, assemble_and_solve, compliance,
                         reference_element_stiffness)
from .filtering import FilterOperator, build_filter
from .material import MaterialModel, plane_stress_tensor
from .mesh import (BoundaryConditions, Grid, build_grid, cantilever_benchmark_bcs,
                   uniaxial_patch_bcs)
from .optimizer import (IterationRecord, OptimizerConfig, default_initial_field,
                        project, run, step)
from .phasefield import (PhaseFieldParams, SHARP_INTERFACE_CONSTANT, eval_P0,
                         eval_P_gamma, grad_P_gamma, optimal_interface_profile,
                         vertical_interface_field)
from .sensitivity import (LagrangianResiduals, MethodParameters, Problem,
                          blended_field, gradient, lagrangian_residuals, objective)

__version__ = "0.1.0"

__all__ = [
    "BlendedField", "BoundaryConditions", "DensityField", "ElasticState",
    "FilterOperator", "Grid", "IterationRecord", "LagrangianResiduals",
    "MaterialModel", "MethodParameters", "OptimizerConfig", "PhaseFieldParams",
    "Problem", "RunConfig", "SHARP_INTERFACE_CONSTANT", "SolverConfig",
    "SolverError", "assemble_and_solve", "benchmark_config", "blended_field",
    "build_filter", "build_grid", "cantilever_benchmark_bcs", "compliance",
    "default_initial_field", "eval_P0", "eval_P_gamma", "grad_P_gamma",
    "gradient", "lagrangian_residuals", "load_config", "objective",
    "optimal_interface_profile", "parse_config", "plane_stress_tensor",
    "project", "reference_element_stiffness", "run", "serialize_config",
    "step", "uniaxial_patch_bcs", "vertical_interface_field",
]
