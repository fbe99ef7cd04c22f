"""Line-based run configuration: dotted `key = value` pairs, `#` comments.

The format is deliberately flat text so sweep archives diff cleanly. Parsing
and serialization round-trip to semantically identical configurations.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

from .elasticity import SolverConfig
from .filtering import build_filter
from .material import MaterialModel
from .mesh import Grid, build_grid, cantilever_benchmark_bcs, uniaxial_patch_bcs
from .optimizer import OptimizerConfig
from .sensitivity import MethodParameters, Problem

LOAD_PRESETS = ("cantilever", "patch")


@dataclass(frozen=True)
class RunConfig:
    """Everything needed to reproduce one optimization run.

    Units: lengths in m, moduli and tractions in Pa, eta in N/m.
    """

    nx: int = 100
    ny: int = 50
    lx: float = 2.0
    ly: float = 1.0
    alpha: float = 0.5
    beta: float | None = None          # None: coupled as 1 - alpha
    gamma: float = 0.01
    eta: float = 1.0
    r_f: float = 0.1
    vbar: float = 0.4
    E: float = 10e9
    nu: float = 0.25
    q: float = 3.0
    rho0: float = 1e-3
    solver_rtol: float = 1e-8
    solver_max_iters: int = 100_000
    opt_tau0: float = 0.2
    opt_max_iters: int = 200
    opt_tol_step: float = 1e-3
    load_preset: str = "cantilever"
    load_traction: float = 1.0e6
    output_dir: str = "out"
    seed: int = 0

    def __post_init__(self):
        if self.load_preset not in LOAD_PRESETS:
            raise ValueError(f"unknown load preset {self.load_preset!r}; "
                             f"choose one of {LOAD_PRESETS}")
        # delegate range checks to the owning dataclasses
        self.method_parameters()
        self.material_model()

    def method_parameters(self) -> MethodParameters:
        return MethodParameters(alpha=self.alpha, beta=self.beta, gamma=self.gamma,
                                eta=self.eta, r_f=self.r_f, vbar=self.vbar)

    def material_model(self) -> MaterialModel:
        return MaterialModel(E=self.E, nu=self.nu, q=self.q, rho0=self.rho0)

    def solver_config(self) -> SolverConfig:
        return SolverConfig(rtol=self.solver_rtol, max_iters=self.solver_max_iters)

    def optimizer_config(self) -> OptimizerConfig:
        return OptimizerConfig(tau0=self.opt_tau0, max_iters=self.opt_max_iters,
                               tol_step=self.opt_tol_step)

    def grid(self) -> Grid:
        return build_grid(self.nx, self.ny, self.lx, self.ly)

    def problem(self) -> Problem:
        grid = self.grid()
        if self.load_preset == "cantilever":
            bcs = cantilever_benchmark_bcs(grid, self.load_traction)
        else:
            bcs = uniaxial_patch_bcs(grid, self.load_traction)
        return Problem(grid=grid, bcs=bcs, material=self.material_model(),
                       filt=build_filter(grid, self.r_f),
                       solver=self.solver_config())


def benchmark_config() -> RunConfig:
    """The cantilever reference case: 100x50 elements of 0.02 m, alpha = beta = 0.5,
    gamma = 0.01 m, r_f = 0.1 m, eta = 1 N/m, E = 10 GPa, nu = 0.25, q = 3,
    rho0 = 1e-3, vbar = 0.4, 1 MPa downward traction."""
    return RunConfig()


_KEY_MAP = {
    "geometry.nx": ("nx", int),
    "geometry.ny": ("ny", int),
    "geometry.lx": ("lx", float),
    "geometry.ly": ("ly", float),
    "method.alpha": ("alpha", float),
    "method.beta": ("beta", float),
    "method.gamma": ("gamma", float),
    "method.eta": ("eta", float),
    "method.r_f": ("r_f", float),
    "method.vbar": ("vbar", float),
    "material.E": ("E", float),
    "material.nu": ("nu", float),
    "material.q": ("q", float),
    "material.rho0": ("rho0", float),
    "solver.rtol": ("solver_rtol", float),
    "solver.max_iters": ("solver_max_iters", int),
    "optimizer.tau0": ("opt_tau0", float),
    "optimizer.max_iters": ("opt_max_iters", int),
    "optimizer.tol_step": ("opt_tol_step", float),
    "load.preset": ("load_preset", str),
    "load.traction": ("load_traction", float),
    "output.dir": ("output_dir", str),
    "seed": ("seed", int),
}

_FIELD_TO_KEY = {fieldname: key for key, (fieldname, _) in _KEY_MAP.items()}


def parse_config(text: str) -> RunConfig:
    """Parse config text; unknown keys and malformed lines are rejected."""
    overrides = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in _KEY_MAP:
            raise ValueError(f"line {lineno}: unknown key {key!r}")
        fieldname, cast = _KEY_MAP[key]
        try:
            overrides[fieldname] = cast(value)
        except ValueError as exc:
            raise ValueError(f"line {lineno}: cannot parse {value!r} for {key}: {exc}")
    return RunConfig(**overrides)


def load_config(path) -> RunConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config(fh.read())


def serialize_config(cfg: RunConfig) -> str:
    """Canonical text form; parse(serialize(cfg)) == cfg."""
    lines = []
    for key, (fieldname, _) in _KEY_MAP.items():
        value = getattr(cfg, fieldname)
        if value is None:
            continue  # coupled beta stays implicit
        lines.append(f"{key} = {value}")
    return "\n".join(lines) + "\n"


def save_config(cfg: RunConfig, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize_config(cfg))


def with_updates(cfg: RunConfig, **kwargs) -> RunConfig:
    return replace(cfg, **kwargs)
