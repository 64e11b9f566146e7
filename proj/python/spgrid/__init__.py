"""Layer-adapted meshes, Newton and two-grid solvers for singularly perturbed BVPs."""

from ._spgrid import (
    LayerSides,
    Mesh,
    MeshFamily,
    MeshSpec,
    SpgridError,
    bakhvalov_alpha,
    build_mesh,
    choose_r,
    convergence_order,
    export_mesh,
    interpolate,
    layer_fraction,
    run_report,
    shishkin_alpha,
    solve_example,
    solve_linear,
    two_grid,
    vulanovic_alpha,
)

__all__ = [
    "LayerSides",
    "Mesh",
    "MeshFamily",
    "MeshSpec",
    "SpgridError",
    "bakhvalov_alpha",
    "build_mesh",
    "choose_r",
    "convergence_order",
    "export_mesh",
    "interpolate",
    "layer_fraction",
    "run_report",
    "shishkin_alpha",
    "solve_example",
    "solve_linear",
    "two_grid",
    "vulanovic_alpha",
]
