"""Interpolation, energy norms, error reports and convergence tables.

Error measurement against closed-form solutions uses 7-point Gauss per
element (assembly uses 5), so the measurement error sits well below the
discretization error being measured.
"""

import math

import numpy as np
from dataclasses import dataclass
from typing import Callable, Optional

from .calculus import gauss_legendre, integrate, layer_integral
from .errors import ConfigurationError, DegenerateRegimeError
from .fem import FemSolution, galerkin_solve
from .mesh import LayerMesh, build_mesh
from .problem import ScalarFunction

_ERR_QUAD = 7


def interpolate(f, mesh: LayerMesh) -> FemSolution:
    """Nodal interpolant of f; boundary values are f(0), f(1), not forced to 0."""
    values = np.asarray(f(mesh.nodes), dtype=float)
    return FemSolution(mesh=mesh, coefficients=values)


def _gauss_grid(nodes: np.ndarray, n_quad: int):
    rule = gauss_legendre(n_quad)
    xl, xr = nodes[:-1], nodes[1:]
    half = 0.5 * (xr - xl)
    gx = 0.5 * (xl + xr)[:, None] + half[:, None] * rule.points[None, :]
    gw = half[:, None] * rule.weights[None, :]
    return gx, gw


def _norms_on_elements(nodes, diff_val, diff_deriv, eps_fn, n_quad=_ERR_QUAD):
    """Per-element (integral of diff^2, integral of eps * diff'^2)."""
    gx, gw = _gauss_grid(nodes, n_quad)
    d = diff_val(gx)
    dd = diff_deriv(gx)
    l2 = (gw * d * d).sum(axis=1)
    wg = (gw * eps_fn(gx) * dd * dd).sum(axis=1)
    return l2, wg


@dataclass(frozen=True)
class ErrorReport:
    h: float
    node_count: int
    energy_error: float
    l2_error: float
    weighted_grad_error: float
    reference_kind: str  # "closed-form" | "fine-mesh"


def energy_norm(v, coeffs, quad_points: int = _ERR_QUAD) -> float:
    """sqrt( || eps^(1/2) v' ||_0^2 + || v ||_0^2 ).

    FE functions are integrated element by element; closed-form functions by
    adaptive quadrature seeded with breakpoints clustered into the layer.
    """
    if isinstance(v, FemSolution):
        l2, wg = _norms_on_elements(
            v.mesh.nodes, lambda x: v(x), lambda x: v.deriv(x), coeffs.eps,
            quad_points)
        return math.sqrt(l2.sum() + wg.sum())
    bp = np.concatenate(([0.0], np.geomspace(1e-12, 1.0, 257)))
    val = integrate(lambda x: coeffs.eps(x) * v.d(x) ** 2 + v(x) ** 2,
                    0.0, 1.0, rel_tol=1e-10, breakpoints=bp)
    return math.sqrt(val)


def error_report(sol: FemSolution, scenario,
                 reference: Optional[FemSolution] = None,
                 quad_points: int = _ERR_QUAD) -> ErrorReport:
    """Energy/L2 errors of sol against the exact solution or a finer solve."""
    eps_fn = scenario.coeffs.eps
    if scenario.exact is not None and reference is None:
        u = scenario.exact
        l2, wg = _norms_on_elements(
            sol.mesh.nodes,
            lambda x: u(x) - sol(x),
            lambda x: u.d(x) - sol.deriv(x),
            eps_fn, quad_points)
        kind = "closed-form"
    elif reference is not None:
        if len(reference.mesh.nodes) < 8 * len(sol.mesh.nodes):
            raise ConfigurationError(
                "reference mesh must have at least 8x the node density")
        merged = np.union1d(sol.mesh.nodes, reference.mesh.nodes)
        l2, wg = _norms_on_elements(
            merged,
            lambda x: reference(x) - sol(x),
            lambda x: reference.deriv(x) - sol.deriv(x),
            eps_fn, quad_points)
        kind = "fine-mesh"
    else:
        raise ConfigurationError(
            "need a closed-form exact solution or a finer reference solve")
    l2_err = math.sqrt(l2.sum())
    wg_err = math.sqrt(wg.sum())
    return ErrorReport(
        h=sol.mesh.h, node_count=len(sol.mesh.nodes),
        energy_error=math.sqrt(l2.sum() + wg.sum()),
        l2_error=l2_err, weighted_grad_error=wg_err, reference_kind=kind)


@dataclass(frozen=True)
class ConvergenceRow:
    eps0: float
    h: float
    node_count: int
    energy_error: float
    l2_error: float
    rate: Optional[float]          # vs. previous coarser h at the same eps0
    skipped_reason: Optional[str] = None


@dataclass(frozen=True)
class ConvergenceTable:
    rows: tuple

    def rates(self, eps0: float):
        return [r.rate for r in self.rows
                if r.eps0 == eps0 and r.rate is not None]

    def errors(self, eps0: float):
        return [(r.h, r.energy_error) for r in self.rows
                if r.eps0 == eps0 and r.skipped_reason is None]


def observed_rate(err_coarse, err_fine, h_coarse, h_fine) -> float:
    return math.log(err_coarse / err_fine) / math.log(h_coarse / h_fine)


def convergence_study(scenario_family: Callable[[float], "object"],
                      h_list, eps0_list, delta: float = 1.0,
                      reference_refine: int = 16) -> ConvergenceTable:
    """Cartesian (h, eps0) sweep of solve + error measurement.

    Scenarios without a closed-form solution are measured against a solve of
    the same mesh family at h/reference_refine.  Degenerate (h, eps0) cells
    are recorded as skipped, not fatal.
    """
    rows = []
    for eps0 in sorted(eps0_list):
        scenario = scenario_family(eps0)
        e = layer_integral(scenario.coeffs, "e")
        prev = None  # (h, energy_error)
        for h in sorted(h_list, reverse=True):
            try:
                msh = build_mesh(scenario.coeffs, e, h, delta)
                sol = galerkin_solve(scenario, msh)
                if scenario.exact is not None:
                    rep = error_report(sol, scenario)
                else:
                    ref_mesh = build_mesh(scenario.coeffs, e,
                                          h / reference_refine, delta)
                    ref = galerkin_solve(scenario, ref_mesh)
                    rep = error_report(sol, scenario, reference=ref)
            except DegenerateRegimeError as exc:
                rows.append(ConvergenceRow(
                    eps0=eps0, h=h, node_count=0, energy_error=math.nan,
                    l2_error=math.nan, rate=None, skipped_reason=str(exc)))
                continue
            rate = None
            if prev is not None:
                rate = observed_rate(prev[1], rep.energy_error, prev[0], h)
            rows.append(ConvergenceRow(
                eps0=eps0, h=h, node_count=rep.node_count,
                energy_error=rep.energy_error, l2_error=rep.l2_error,
                rate=rate))
            prev = (h, rep.energy_error)
    return ConvergenceTable(rows=tuple(rows))


@dataclass(frozen=True)
class InterpolationRow:
    h: float
    node_count: int
    smooth_l2: float          # || S - S^I ||_0 on [0,1]
    smooth_h1: float          # | S - S^I |_1 on [0,1]
    layer_l2_coarse: float    # || E - E^I ||_0 on [tau,1]
    layer_max_coarse: float   # || E - E^I ||_inf on [tau,1]
    layer_wl2_fine: float     # || eps^(-1/2) (E - E^I) ||_0 on [0,tau]
    layer_wh1_fine: float     # || eps^(1/2) (E - E^I)' ||_0 on [0,tau]


def interpolation_study(scenario, h_list, delta: float = 1.0,
                        quad_points: int = _ERR_QUAD):
    """Interpolation-error table for the smooth and layer exemplars."""
    if scenario.smooth_exemplar is None or scenario.layer_exemplar is None:
        raise ConfigurationError("scenario must supply both exemplars")
    s = scenario.smooth_exemplar
    lay = scenario.layer_exemplar
    coeffs = scenario.coeffs
    e = layer_integral(coeffs, "e")
    one = ScalarFunction.constant(1.0)

    rows = []
    for h in sorted(h_list, reverse=True):
        msh = build_mesh(coeffs, e, h, delta)
        si = interpolate(s, msh)
        li = interpolate(lay, msh)
        k = msh.tau_index

        s_l2, s_h1 = _norms_on_elements(
            msh.nodes, lambda x: s(x) - si(x), lambda x: s.d(x) - si.deriv(x),
            one, quad_points)

        def ediff(x):
            return lay(x) - li(x)

        def ediff_d(x):
            return lay.d(x) - li.deriv(x)

        e_l2, e_wh1 = _norms_on_elements(
            msh.nodes, ediff, ediff_d, coeffs.eps, quad_points)
        gx, gw = _gauss_grid(msh.nodes, quad_points)
        d = ediff(gx)
        e_l2 = (gw * d * d).sum(axis=1)
        e_invl2 = (gw * d * d / coeffs.eps(gx)).sum(axis=1)  # weight 1/eps
        e_max_coarse = float(np.abs(d[k:]).max()) if k < len(d) else 0.0

        rows.append(InterpolationRow(
            h=h, node_count=len(msh.nodes),
            smooth_l2=math.sqrt(s_l2.sum()),
            smooth_h1=math.sqrt(s_h1.sum()),
            layer_l2_coarse=math.sqrt(e_l2[k:].sum()),
            layer_max_coarse=e_max_coarse,
            layer_wl2_fine=math.sqrt(e_invl2[:k].sum()),
            layer_wh1_fine=math.sqrt(e_wh1[:k].sum()),
        ))
    return rows


def rates_of(values, hs):
    """Observed rates between consecutive table entries (h descending)."""
    return [observed_rate(values[i], values[i + 1], hs[i], hs[i + 1])
            for i in range(len(values) - 1)]
