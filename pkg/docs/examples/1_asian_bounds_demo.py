#  Authors: The asianbounds developers
#
#  License: 3-clause BSD, <LICENSE>
"""
Bounds on an Asian call
=======================

An arithmetic-average call has no closed-form price, but its value is squeezed between two bounds that are
cheap to compute. The midpoint of the two is a good estimate, with a guaranteed relative error.

1. A single request
-------------------

We describe the market with a rate curve and a volatility, and the averaging scheme with a monitoring grid.
"""
from asianbounds import SinusoidalCurve, uniform_discrete, price_bounds

curve = SinusoidalCurve(r0=0.09, amplitude=1.)
grid = uniform_discrete(T=1., N=10)

report = price_bounds(curve, sigma=0.3, S0=100., K=100., grid=grid)
print(report.dumps_yaml())

# %%
# The error bound is given in percent of the midpoint:

print("price = %.3f +/- %.2f%%" % (report.midpoint, report.error_pct))

# %%
# 2. The continuous average
# -------------------------
#
# A continuous average is discretised with Gauss-Legendre dates. The bounds converge as the number of
# monitoring dates grows.

from asianbounds import continuous_uniform_approx

for g in (uniform_discrete(1., 10), uniform_discrete(1., 50), continuous_uniform_approx(1., 200)):
    r = price_bounds(curve, 0.3, 100., 100., g)
    print("%-16s LB1=%.3f UB1=%.3f" % (g.mode if g.mode != 'discrete' else "N=%d" % g.n, r.lb1, r.ub1))

# %%
# 3. Checking against Monte Carlo
# -------------------------------
#
# The Monte Carlo oracle is seeded and reproducible. Its price falls between the bounds.

from asianbounds import mc_asian_price

est = mc_asian_price(curve, 0.3, 100., 100., grid, paths=200000, seed=42)
print("LB1=%.4f  MC=%.4f (stderr %.4f)  UB1=%.4f" % (report.lb1, est.mean, est.stderr, report.ub1))
