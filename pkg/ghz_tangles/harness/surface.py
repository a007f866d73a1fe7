import logging
from typing import Callable

import numpy as np
import pandas as pd

from ..config.models import AxisSpec, GridSpec
from ..constraints.inequalities import (
    Real,
    SteinerMode,
    achievability_lhs_t2,
    assistance_boundary_t2,
    completed_square_margin_t2,
    steiner_margin,
    steiner_null_cone,
)
from ..constraints.marginals import one_tangle_eigenvalue, triangle_margin_min
from ..errors import UsageError
from ..io.formats import SURFACE_COLUMNS

log = logging.getLogger(__name__)

Field = Callable[[Real, Real, Real, Real], Real]


def _one_tangle_field(x: Real, y: Real, z: Real, t2: Real) -> Real:
    # x, y, z are the 1-tangles of A, B and C here
    return triangle_margin_min(one_tangle_eigenvalue(x), one_tangle_eigenvalue(y), one_tangle_eigenvalue(z))


SLICED: dict[str, Field] = {
    "achievability": achievability_lhs_t2,
    "completed-square": completed_square_margin_t2,
    "assistance-boundary": assistance_boundary_t2,
}

UNSLICED: dict[str, Field] = {
    "steiner-null-cone": lambda x, y, z, t2: steiner_null_cone(x, y, z),
    "steiner-convex": lambda x, y, z, t2: steiner_margin(x, y, z, SteinerMode.CONVEX),
    "steiner-concave": lambda x, y, z, t2: steiner_margin(x, y, z, SteinerMode.CONCAVE),
    "one-tangles": _one_tangle_field,
}

CONSTRAINTS = sorted([*SLICED, *UNSLICED])


def _axis(spec: AxisSpec) -> np.ndarray:
    return np.linspace(spec.start, spec.stop, spec.steps)


def surface_frame(grid: GridSpec, constraint: str) -> pd.DataFrame:
    """Sample a constraint margin on a grid."""
    if constraint in SLICED:
        field, slices = SLICED[constraint], list(grid.t2_slices)
    elif constraint in UNSLICED:
        field, slices = UNSLICED[constraint], [0.0]
    else:
        raise UsageError(f"Unknown constraint {constraint!r}, expected one of {', '.join(CONSTRAINTS)}.")

    x, y, z = np.meshgrid(_axis(grid.x), _axis(grid.y), _axis(grid.z), indexing="ij")
    x, y, z = x.ravel(), y.ravel(), z.ravel()
    frames = []
    for t2 in slices:
        margin = np.broadcast_to(np.asarray(field(x, y, z, t2), dtype=np.float64), x.shape)
        frames.append(pd.DataFrame({"x": x, "y": y, "z": z, "t2": np.full(x.shape, float(t2)), "margin": margin}))
    df = pd.concat(frames, ignore_index=True)[SURFACE_COLUMNS]
    log.debug("Sampled %s on %d points in %d slices.", constraint, x.size, len(slices))
    return df
