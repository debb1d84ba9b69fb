"""Python bindings for the hasimoto-lab library.

Sphere maps are (n, 3) float arrays and q fields are complex 1-d arrays.
"""

import json as _json

from ._core import (
    BlowUpError,
    ConfigError,
    Grid,
    PreconditionError,
    __version__,
    curvature_torsion,
    experiments,
    fit_order,
    great_circle,
    heat_integrate,
    llg_integrate,
    localized_twist,
    reconstruct_frame,
    run_sllg,
    transform,
    wobbly_loop,
)
from ._core import run_experiment as _run_experiment


def run_experiment(experiment, out_dir, **settings):
    """Runs one CLI experiment in-process; returns (report dict, output file names)."""
    report, outputs = _run_experiment(experiment, {k: str(v) for k, v in settings.items()}, str(out_dir))
    return _json.loads(report), outputs


__all__ = [
    "BlowUpError",
    "ConfigError",
    "Grid",
    "PreconditionError",
    "__version__",
    "curvature_torsion",
    "experiments",
    "fit_order",
    "great_circle",
    "heat_integrate",
    "llg_integrate",
    "localized_twist",
    "reconstruct_frame",
    "run_experiment",
    "run_sllg",
    "transform",
    "wobbly_loop",
]
