#  Authors: The asianbounds developers
#
#  License: 3-clause BSD, <LICENSE>
"""
VWAP calls
==========

When the average is weighted by traded volume, the same bounds apply once the expected relative volumes
`g_i = E[U_i / Ubar]` are known. They are estimated once per grid and can be saved for later use.
"""
from asianbounds import ConstantCurve, REFERENCE_VOLUME_MODEL, uniform_discrete, estimate_g, vwap_bounds

grid = uniform_discrete(T=1., N=100)
g = estimate_g(REFERENCE_VOLUME_MODEL, grid, paths=20000, seed=0)
print(g)

# %%
# The bounds of the VWAP call:

lower, upper = vwap_bounds(ConstantCurve(0.1), 0.5, 110., 100., grid, g)
print(lower)
print(upper)

# %%
# The Monte Carlo reference simulates prices and volumes together:

from asianbounds import mc_vwap_price

est = mc_vwap_price(ConstantCurve(0.1), 0.5, 110., 100., grid, REFERENCE_VOLUME_MODEL, paths=20000, seed=1)
print(est)
