"""
Building a layer-adapted mesh
=============================

The mesh grades geometrically through the boundary layer at x = 0 and
switches to an equidistant grid once the layer has decayed below h^2.
"""

import numpy as np

from layerfem import build_mesh, get_scenario, layer_integral, predict_cardinality

# a convection-diffusion scenario with diffusion eps(x) = eps0 * (1 + x)
scenario = get_scenario("eps-linear", 1e-4)
coeffs = scenario.coeffs

# the stretched coordinate e(x) = int_0^x 1/eps drives the grading
e = layer_integral(coeffs, "e")

h = 1.0 / 32
mesh = build_mesh(coeffs, e, h)

print(f"h = {h},  nodes = {mesh.node_count}")
print(f"transition point tau* = {mesh.tau_star:.6g}, first node past it "
      f"tau = {mesh.tau:.6g} (index {mesh.tau_index})")
print(f"predicted cardinality = {predict_cardinality(coeffs, h):.1f}")

# the graded region multiplies spacings by exactly (1 + h)
spacings = mesh.spacings
print("\nfirst five graded spacings:", np.array2string(spacings[:5], precision=3))
print("spacing ratio in the layer:",
      f"{spacings[2] / spacings[1]:.6f} (should be 1 + h = {1 + h})")
print("coarse spacing:", f"{spacings[-1]:.6g} (<= h)")

# the layer is resolved: exp(-beta e(tau)) <= h^2
decay_at_tau = np.exp(-coeffs.beta * e(mesh.tau))
print(f"\nexp(-beta e(tau)) = {decay_at_tau:.3e}  vs  h^2 = {h*h:.3e}")
