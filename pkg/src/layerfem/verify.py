"""Numerical checks of the a priori machinery on [0, 1].

Covered: the exponential-weight integral inequality, positivity of the
barrier-function operator image, and bounded-ratio checks of the pointwise
derivative bounds (both in the original variable, driven by e(x), and in the
transformed variable, driven by etilde(x)).  "The constant is eps-uniform"
is operationalized as: the sup of |w^(k)| / bound varies by at most 4x
across three decades of eps0.
"""

import math

import numpy as np
from dataclasses import dataclass
from typing import Optional

from .calculus import (
    CumulativeIntegral,
    differentiate_grid,
    integrate,
    layer_integral,
)
from .errors import ConfigurationError, ParameterError
from .fem import FemSolution, galerkin_solve
from .mesh import build_mesh


@dataclass(frozen=True)
class BoundCheckReport:
    name: str
    sample_count: int
    worst_margin: float
    worst_point: float
    passed: bool
    sup_ratio: Optional[float] = None


def check_integral_lemma(coeffs, a: float, x: float, ell: int,
                         gamma_param: float,
                         e: Optional[CumulativeIntegral] = None,
                         sample_count: int = 2001) -> BoundCheckReport:
    """Verify  int_a^x eps^l exp(g e_a)  <=  (eps(x)^(l+1) exp(g e_a(x)) - eps(a)^(l+1)) / (g + (l+1) s0).

    s0 is the sampled minimum of eps' on [a, x] and must be nonnegative;
    the inequality requires g > -(l+1) s0.  For positive g both sides are
    rescaled by exp(-g e_a(x)) so that huge layer exponents never overflow.
    """
    if not (0.0 <= a < x <= 1.0):
        raise ParameterError("need 0 <= a < x <= 1")
    if ell < 0:
        raise ParameterError("ell must be a nonnegative integer")
    ts = np.linspace(a, x, sample_count)
    sigma0 = float(np.min(coeffs.eps.d(ts)))
    if sigma0 < 0:
        raise ParameterError("integral inequality requires eps' >= 0 on [a, x]")
    if gamma_param <= -(ell + 1) * sigma0:
        raise ParameterError("gamma must exceed -(ell + 1) * sigma0")
    if e is None:
        e = layer_integral(coeffs, "e")

    eps = coeffs.eps
    e_a, e_x = e(a), e(x)
    denom = gamma_param + (ell + 1) * sigma0
    bp = x - np.geomspace((x - a) * 1e-14, x - a, 200)

    if gamma_param > 0:
        # scaled by exp(-gamma e_a(x)); integrand concentrates at t = x
        lhs = integrate(
            lambda t: eps(t) ** ell * np.exp(-gamma_param * (e_x - e(t))),
            a, x, rel_tol=1e-10, breakpoints=bp)
        with np.errstate(under="ignore"):
            rhs = (eps(x) ** (ell + 1)
                   - eps(a) ** (ell + 1) * math.exp(-gamma_param * (e_x - e_a))
                   ) / denom
    else:
        # gamma <= 0: exp(gamma e_a(t)) <= 1, no scaling needed
        lhs = integrate(
            lambda t: eps(t) ** ell * np.exp(gamma_param * (e(t) - e_a)),
            a, x, rel_tol=1e-10, breakpoints=bp)
        with np.errstate(under="ignore"):
            rhs = (eps(x) ** (ell + 1) * math.exp(gamma_param * (e_x - e_a))
                   - eps(a) ** (ell + 1)) / denom

    margin = (rhs - lhs) / max(abs(rhs), 1e-300)
    passed = lhs <= rhs * (1.0 + 1e-8)
    return BoundCheckReport(
        name=f"integral-lemma(a={a:.3g},x={x:.3g},l={ell},g={gamma_param:.3g})",
        sample_count=sample_count, worst_margin=float(margin),
        worst_point=float(x), passed=bool(passed))


def check_integral_lemma_random(scenario, n_tuples: int, rng,
                                e: Optional[CumulativeIntegral] = None,
                                gamma_max: float = 3.0) -> BoundCheckReport:
    """Aggregate of n_tuples randomized integral-lemma instances."""
    if e is None:
        e = layer_integral(scenario.coeffs, "e")
    worst = math.inf
    worst_pt = math.nan
    passed = True
    for _ in range(n_tuples):
        a, x = np.sort(rng.uniform(0.0, 1.0, size=2))
        if x - a < 1e-3:
            x = min(1.0, a + 1e-3)
        ell = int(rng.integers(0, 2))
        gamma = float(rng.uniform(1e-3, gamma_max))
        rep = check_integral_lemma(scenario.coeffs, float(a), float(x), ell,
                                   gamma, e=e)
        passed &= rep.passed
        if rep.worst_margin < worst:
            worst, worst_pt = rep.worst_margin, rep.worst_point
    return BoundCheckReport(
        name=f"integral-lemma-random[{scenario.name}]",
        sample_count=n_tuples, worst_margin=worst, worst_point=worst_pt,
        passed=bool(passed))


def check_barrier_operator(coeffs, e: CumulativeIntegral, amplitude: float = 1.0,
                           sample_count: int = 10000,
                           label: str = "") -> BoundCheckReport:
    """Operator image of the layer barrier amplitude * exp(-beta e(x)).

    The closed form is amplitude * (beta (b - beta) / eps + c) * exp(-beta e);
    the eps' contributions cancel exactly.  Must be >= 0 everywhere for the
    comparison argument to apply.
    """
    if amplitude <= 0:
        raise ParameterError("amplitude must be positive")
    xs = np.linspace(0.0, 1.0, sample_count)
    beta = coeffs.beta
    with np.errstate(under="ignore"):
        vals = amplitude * (
            beta * (coeffs.b(xs) - beta) / coeffs.eps(xs) + coeffs.c(xs)
        ) * np.exp(-beta * e(xs))
    i = int(np.argmin(vals))
    scale = max(float(np.abs(vals).max()), 1.0)
    name = f"barrier-operator[{label}]" if label else "barrier-operator"
    return BoundCheckReport(
        name=name, sample_count=sample_count,
        worst_margin=float(vals[i]), worst_point=float(xs[i]),
        passed=bool(vals[i] >= -1e-12 * scale))


def solution_bound_values(coeffs, xs, e_vals, k: int,
                          beta_factor: float = 1.0) -> np.ndarray:
    """Right-hand sides of the pointwise derivative bounds with C = 1."""
    beta = beta_factor * coeffs.beta
    eps_v = np.asarray(coeffs.eps(xs), dtype=float)
    with np.errstate(under="ignore"):
        decay = np.exp(-beta * np.asarray(e_vals, dtype=float))
    if k == 0:
        return np.ones_like(eps_v)
    if k == 1:
        return 1.0 + decay / eps_v
    if k == 2:
        epsp = np.asarray(coeffs.eps.d(xs), dtype=float)
        return (1.0 + epsp) / eps_v * (1.0 + decay / eps_v)
    raise ParameterError("k must be 0, 1 or 2")


def transformed_bound_values(coeffs, xs, etilde_vals, k: int,
                             beta_factor: float = 1.0) -> np.ndarray:
    """Bounds in terms of etilde; for constant eps they reduce to the
    classical 1 + eps^-k exp(-beta x / eps) form."""
    beta = beta_factor * coeffs.beta
    kappa = 0.5 * (coeffs.sigma + 2.0 * beta)
    eps_v = np.asarray(coeffs.eps(xs), dtype=float)
    with np.errstate(under="ignore"):
        decay = np.exp(-kappa * np.asarray(etilde_vals, dtype=float))
    if k == 0:
        return 1.0 + decay
    if k == 1:
        return np.sqrt(coeffs.eps_upper / eps_v) * (
            1.0 + decay / coeffs.eps_lower)
    raise ParameterError("k must be 0 or 1 for the transformed bounds")


_WHICH_TO_K = {"U0": 0, "U1": 1, "U2": 2}


def _derivative_samples(reference: FemSolution, k: int):
    """Interior derivative estimates of order k from a reference solve."""
    nodes = reference.mesh.nodes
    vals = reference.coefficients
    if k == 0:
        return nodes, vals
    if k == 1:
        d = differentiate_grid(vals, nodes, "first")
        return nodes[1:-1], d[1:-1]
    d = differentiate_grid(vals, nodes, "second")
    # second differences near the ends are too noisy at small eps0
    return nodes[2:-2], d[2:-2]


def check_solution_bounds(scenario, reference: FemSolution, which: str,
                          beta_factor: float = 1.0,
                          e: Optional[CumulativeIntegral] = None) -> BoundCheckReport:
    """Sup of |w^(k)| / bound_k on a reference solve; passes iff finite.

    eps-uniformity of the hidden constant is the content of the bound and is
    judged across eps0 by check_bound_uniformity.
    """
    if which not in _WHICH_TO_K:
        raise ParameterError("which must be one of U0, U1, U2")
    if reference.mesh.h > 1.0 / 512 + 1e-12:
        raise ConfigurationError("reference solve too coarse (need h <= 1/512)")
    k = _WHICH_TO_K[which]
    if e is None:
        e = layer_integral(scenario.coeffs, "e")
    xs, dk = _derivative_samples(reference, k)
    bound = solution_bound_values(scenario.coeffs, xs, e(xs), k, beta_factor)
    ratios = np.abs(dk) / bound
    i = int(np.argmax(ratios))
    sup = float(ratios[i])
    return BoundCheckReport(
        name=f"solution-bound-{which}[{scenario.name}]",
        sample_count=len(xs), worst_margin=-sup, worst_point=float(xs[i]),
        passed=bool(np.isfinite(sup)), sup_ratio=sup)


def check_transformed_bounds(scenario, reference: FemSolution,
                             which: str = "U0", beta_factor: float = 1.0,
                             etilde: Optional[CumulativeIntegral] = None) -> BoundCheckReport:
    """Same bounded-ratio protocol against the etilde-based bounds (k = 0, 1)."""
    if which not in ("U0", "U1"):
        raise ParameterError("transformed bounds are checked for U0 and U1")
    if reference.mesh.h > 1.0 / 512 + 1e-12:
        raise ConfigurationError("reference solve too coarse (need h <= 1/512)")
    k = _WHICH_TO_K[which]
    if etilde is None:
        etilde = layer_integral(scenario.coeffs, "etilde")
    xs, dk = _derivative_samples(reference, k)
    bound = transformed_bound_values(scenario.coeffs, xs, etilde(xs), k,
                                     beta_factor)
    ratios = np.abs(dk) / bound
    i = int(np.argmax(ratios))
    sup = float(ratios[i])
    return BoundCheckReport(
        name=f"transformed-bound-{which}[{scenario.name}]",
        sample_count=len(xs), worst_margin=-sup, worst_point=float(xs[i]),
        passed=bool(np.isfinite(sup)), sup_ratio=sup)


def reference_solution(scenario, h_ref: float = 1.0 / 512,
                       e: Optional[CumulativeIntegral] = None) -> FemSolution:
    if e is None:
        e = layer_integral(scenario.coeffs, "e")
    msh = build_mesh(scenario.coeffs, e, h_ref)
    return galerkin_solve(scenario, msh)


def check_bound_uniformity(scenario_family, which: str,
                           eps0_list=(1e-3, 1e-5, 1e-7),
                           h_ref: float = 1.0 / 512,
                           beta_factor: float = 1.0,
                           transformed: bool = False,
                           max_variation: float = 4.0) -> BoundCheckReport:
    """Cross-eps0 uniformity of the sup ratio: max/min must stay <= 4.

    A family is a callable eps0 -> Scenario.  This is the falsifiable content
    of "the constant C does not depend on eps".
    """
    sups = []
    name = None
    worst_pt = math.nan
    for eps0 in eps0_list:
        scenario = scenario_family(eps0)
        e = layer_integral(scenario.coeffs, "e")
        ref = reference_solution(scenario, h_ref, e=e)
        if transformed:
            rep = check_transformed_bounds(scenario, ref, which, beta_factor)
        else:
            rep = check_solution_bounds(scenario, ref, which, beta_factor, e=e)
        sups.append(rep.sup_ratio)
        worst_pt = rep.worst_point
        name = rep.name
    sups = np.asarray(sups)
    finite = bool(np.all(np.isfinite(sups)) and np.all(sups > 0))
    variation = float(sups.max() / sups.min()) if finite else math.inf
    return BoundCheckReport(
        name=f"uniformity[{name}]", sample_count=len(sups),
        worst_margin=max_variation - variation, worst_point=worst_pt,
        passed=bool(finite and variation <= max_variation),
        sup_ratio=variation)
