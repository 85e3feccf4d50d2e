"""
Fixed points of a constant neural field
=======================================

A field that is constant on its support obeys a scalar ODE,
``tau du/dt = -u + |A| w f(u)``.  With a steep sigmoid there are two stable
states separated by an unstable one.
"""

import numpy as np

from dfautomata.amari import ConstantFieldConfig, SigmoidParams, bistable_config, find_fixed_points, integrate

cfg = bistable_config()
report = find_fixed_points(cfg)
print(report.table())

############################################################
# Starting on either side of the middle point

for u_init in (0.4, 0.6):
    traj = integrate(cfg, u_init, dt=0.1, steps=2000)
    print(f"u(0) = {u_init}  ->  u(200) = {traj[-1]:.10f}")

############################################################
# Lowering the gain leaves only the low state

for gain in (1.0, 0.8, 0.6):
    cfg = ConstantFieldConfig(gain, 1.0, "sigmoid", SigmoidParams(10.0, 0.5))
    pts = find_fixed_points(cfg)
    print(gain, np.round([p.u0 for p in pts], 6), pts.pattern)
