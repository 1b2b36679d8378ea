"""The compiled kernel must reproduce the NumPy reference path."""

import numpy as np
import pytest

from pampa_swe.mesh import BoundaryCondition
from pampa_swe.models import RotatingShallowWater, SaintVenant
from pampa_swe.scheme import SchemeOptions, evaluate_rhs, evaluate_rhs_fast

from states import random_state

BCS = {
    "periodic": BoundaryCondition.make_periodic(),
    "extrapolation": BoundaryCondition(),
    "dirichlet": BoundaryCondition("dirichlet", "dirichlet", {1: 0.3}, {0: 1.1}),
}


@pytest.mark.parametrize("bc_name", sorted(BCS))
@pytest.mark.parametrize("order", ["high", "low", "unlimited"])
@pytest.mark.parametrize("quad", ["scIII", "IIIA"])
@pytest.mark.parametrize("model", [SaintVenant(9.812, 0.04), RotatingShallowWater(9.812, 2.0, 0.3)],
                         ids=["sv", "rot"])
def test_compiled_matches_numpy(rng, bc_name, order, quad, model):
    bc = BCS[bc_name]
    opts = SchemeOptions(quad, order)
    for dry in (0.0, 0.3):
        s = random_state(rng, n=25, nvars=model.nvars, dry_fraction=dry)
        if bc.periodic:
            s.points[:, -1] = s.points[:, 0]
            s.bathy_points[-1] = s.bathy_points[0]
        ref = evaluate_rhs(s, model, bc, opts, 1e-3)
        dp, da = evaluate_rhs_fast(s, model, bc, opts, 1e-3)[:2]
        scale = max(1.0, np.max(np.abs(ref.d_points)), np.max(np.abs(ref.d_averages)))
        np.testing.assert_allclose(dp, ref.d_points, atol=1e-12 * scale, rtol=0)
        np.testing.assert_allclose(da, ref.d_averages, atol=1e-12 * scale, rtol=0)
