"""
Where the nice properties stop
==============================

Not every member of the unified family behaves well. This script reproduces
three explicit failures: the RT reduced function is not subadditive, and both
product forms break the hierarchy condition on small diagonal states.
"""

import numpy as np

from unient.multipartite import (
    hierarchy_difference,
    hierarchy_state_qs,
    hierarchy_state_rt,
    hierarchy_taylor_qs,
    hierarchy_taylor_rt,
    marginal_power_residual,
    rt_subadditivity_excess,
)
from unient.states import DensityMatrix

sigma = np.diag([0.7, 0.3]).astype(complex)
rho = DensityMatrix(np.kron(sigma, sigma), (2, 2))
print("QS residual on sigma x sigma (never negative):", marginal_power_residual(rho, 2, 1))
print("RT excess on sigma x sigma (positive breaks subadditivity):", rt_subadditivity_excess(rho, 0.5, 1))

# QS product form: the difference should be positive and follow the
# small-x expansion.
for q in (2, 3):
    for x in (1e-2, 1e-3, 1e-4):
        d = hierarchy_difference(hierarchy_state_qs(x), q)
        print(f"q={q} x={x:g}: difference {d:.4e}  leading term {hierarchy_taylor_qs(q, x):.4e}")

# RT product form: the sign flips.
for r in (0.3, 0.5, 0.7):
    d = hierarchy_difference(hierarchy_state_rt(r), r)
    print(f"r={r}: difference {d:.4e}  leading term {hierarchy_taylor_rt(r):.4e}")
