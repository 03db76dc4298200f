"""Duran-Shishkin mesh: graded layer region, transition point, coarse region.

The transition point tau* solves e(tau*) = -(2/beta) ln h in the stretched
coordinate e(x) = int_0^x 1/eps.  Inside the layer the nodes grow
geometrically, x_{i+1} = x_i (1 + h) starting from x_1 = h * delta * eps_lower;
past the first graded node >= tau* the mesh is equidistant with spacing <= h.
"""

import math

import numpy as np
from dataclasses import dataclass

from .calculus import CumulativeIntegral, invert_monotone
from .errors import DegenerateRegimeError, ParameterError, ResourceError


@dataclass(frozen=True)
class LayerMesh:
    nodes: np.ndarray
    h: float
    delta: float
    n_star: int      # number of multiplicative graded steps
    tau_index: int   # index of the first node >= tau_star
    tau_star: float

    @property
    def tau(self) -> float:
        return float(self.nodes[self.tau_index])

    @property
    def node_count(self) -> int:
        return len(self.nodes)

    @property
    def spacings(self) -> np.ndarray:
        return np.diff(self.nodes)

    def regions(self):
        """Region label per node: 'graded' up to tau, 'coarse' beyond."""
        return ["graded" if i <= self.tau_index else "coarse"
                for i in range(len(self.nodes))]


def compute_tau_star(coeffs, e: CumulativeIntegral, h: float) -> float:
    """Transition point tau* with e(tau*) = -(2/beta) ln h."""
    if not (0.0 < h < 1.0):
        raise ParameterError("mesh parameter h must lie in (0, 1)")
    target = -2.0 * math.log(h) / coeffs.beta
    if target > e(1.0):
        raise DegenerateRegimeError(
            "transition point would exceed x = 1; eps is not small enough "
            "relative to h for a layer-adapted mesh")
    tau_star = invert_monotone(e, target)
    if tau_star > 0.5:
        # No clamped variant: outside the analyzed regime we refuse to build.
        raise DegenerateRegimeError(
            f"transition point tau* = {tau_star:.4g} > 1/2")
    return tau_star


def build_mesh(coeffs, e: CumulativeIntegral, h: float, delta: float = 1.0,
               max_nodes: int = 10**7) -> LayerMesh:
    """Build the graded + equidistant mesh for mesh parameter h."""
    if delta <= 0:
        raise ParameterError("delta must be positive")
    tau_star = compute_tau_star(coeffs, e, h)

    x1 = h * delta * coeffs.eps_lower
    graded = [0.0, x1]
    x = x1
    while x < tau_star:
        x *= 1.0 + h
        graded.append(x)
        if len(graded) > max_nodes:
            raise ResourceError(f"graded node count exceeded cap {max_nodes}")
    tau = graded[-1]
    if tau >= 1.0:
        raise DegenerateRegimeError(
            f"first node past tau* already reaches {tau:.4g} >= 1")
    n_star = len(graded) - 2
    tau_index = len(graded) - 1

    m = math.ceil((1.0 - tau) / h)
    coarse = np.linspace(tau, 1.0, m + 1)[1:]
    nodes = np.concatenate((np.asarray(graded), coarse))
    if len(nodes) > max_nodes:
        raise ResourceError(f"node count exceeded cap {max_nodes}")
    return LayerMesh(nodes=nodes, h=h, delta=delta, n_star=n_star,
                     tau_index=tau_index, tau_star=tau_star)


def predict_cardinality(coeffs, h: float) -> float:
    """Predicted node count (ln(eps_up/eps_low) + ln((-ln h)/h)) / h."""
    if not (0.0 < h < 1.0):
        raise ParameterError("mesh parameter h must lie in (0, 1)")
    log_term = -math.log(h) / h
    if log_term < 1.0:
        raise ParameterError("h too close to 1 for the cardinality estimate")
    return (math.log(coeffs.eps_upper / coeffs.eps_lower) + math.log(log_term)) / h
