"""
Solving a single problem and measuring the error
================================================

Solve -(eps u')' - b u' + c u = f with a boundary layer at x = 0, compare
against the closed-form exact solution, and look at the solution inside
and outside the layer.
"""

import numpy as np

from layerfem import (
    build_mesh,
    error_report,
    galerkin_solve,
    get_scenario,
    layer_integral,
)

scenario = get_scenario("manufactured", 1e-5)
e = layer_integral(scenario.coeffs, "e")

mesh = build_mesh(scenario.coeffs, e, 1.0 / 64)
sol = galerkin_solve(scenario, mesh)

report = error_report(sol, scenario)
print(f"nodes = {report.node_count}")
print(f"energy error        = {report.energy_error:.4e}")
print(f"L2 error            = {report.l2_error:.4e}")
print(f"weighted grad error = {report.weighted_grad_error:.4e}")

# sample through the layer (geometric points) and beyond it
xs = np.concatenate((np.geomspace(1e-6, 1e-3, 4), [0.1, 0.5, 0.9]))
print(f"\n{'x':>10} {'u_h':>12} {'exact':>12}")
for x in xs:
    print(f"{x:10.2e} {sol(x):12.6f} {scenario.exact(x):12.6f}")
