"""Quadrature, cumulative layer integrals, monotone inversion and grid derivatives.

Everything downstream (meshing, assembly, error measurement, bound checks)
is built on the routines in this module.  Integrands are expected to accept
numpy arrays; scalar-only callables are handled through a slow fallback.
"""

import heapq

import numpy as np
from dataclasses import dataclass
from typing import Callable

from scipy.optimize import brentq

from .errors import (
    ConvergenceError,
    EvaluationError,
    OutOfRangeError,
    ParameterError,
    SizeError,
)


@dataclass(frozen=True)
class QuadratureRule:
    """Gauss-Legendre rule on [-1, 1]."""

    points: np.ndarray
    weights: np.ndarray
    order: int  # degree of polynomial exactness


def gauss_legendre(n: int) -> QuadratureRule:
    if n < 1:
        raise ParameterError("need at least one quadrature point")
    pts, wts = np.polynomial.legendre.leggauss(n)
    return QuadratureRule(points=pts, weights=wts, order=2 * n - 1)


_G5 = gauss_legendre(5)
_G10 = gauss_legendre(10)


def _vec_eval(f, x: np.ndarray) -> np.ndarray:
    """Evaluate f on an array, tolerating scalar-only and constant callables."""
    try:
        y = np.asarray(f(x), dtype=float)
    except (TypeError, ValueError):
        y = np.asarray([float(f(t)) for t in x.ravel()]).reshape(x.shape)
    if y.shape != x.shape:
        y = np.broadcast_to(y, x.shape).astype(float)
    return y


def _panel_sums(f, lefts, rights, rule: QuadratureRule) -> np.ndarray:
    """Gauss sums of f over a batch of panels [lefts_i, rights_i]."""
    lefts = np.asarray(lefts, dtype=float)
    rights = np.asarray(rights, dtype=float)
    half = 0.5 * (rights - lefts)
    mid = 0.5 * (rights + lefts)
    x = mid[:, None] + half[:, None] * rule.points[None, :]
    y = _vec_eval(f, x)
    if not np.all(np.isfinite(y)):
        bad = x[~np.isfinite(y)]
        raise EvaluationError(f"non-finite integrand sample at x={bad.ravel()[0]!r}")
    return (y * rule.weights[None, :]).sum(axis=1) * half


def integrate(
    f: Callable,
    a: float,
    b: float,
    rel_tol: float = 1e-10,
    max_depth: int = 24,
    rule: QuadratureRule = _G5,
    breakpoints=None,
) -> float:
    """Adaptive composite Gauss quadrature of f over [a, b].

    Each panel is bisected until the whole-panel estimate and the two
    half-panel estimates agree; the global error proxy (sum of panel
    discrepancies) is driven below rel_tol times the running integral.
    Optional breakpoints seed the initial panelization, which is how
    callers with known layer locations keep the recursion shallow.
    """
    if not (np.isfinite(a) and np.isfinite(b)):
        raise ParameterError("integration limits must be finite")
    if a > b:
        raise ParameterError("integrate requires a <= b")
    if a == b:
        return 0.0
    if rel_tol <= 0:
        raise ParameterError("rel_tol must be positive")

    if breakpoints is None:
        edges = np.array([a, b], dtype=float)
    else:
        inner = np.asarray(breakpoints, dtype=float)
        inner = inner[(inner > a) & (inner < b)]
        edges = np.unique(np.concatenate(([a], inner, [b])))

    lefts, rights = edges[:-1], edges[1:]
    coarse = _panel_sums(f, lefts, rights, rule)
    mids = 0.5 * (lefts + rights)
    fine_l = _panel_sums(f, lefts, mids, rule)
    fine_r = _panel_sums(f, mids, rights, rule)
    fine = fine_l + fine_r

    total = float(fine.sum())
    err_sum = float(np.abs(fine - coarse).sum())
    # heap of (-panel_error, tie_break, left, right, fine_value, depth)
    heap = []
    for k in range(len(lefts)):
        heapq.heappush(
            heap, (-abs(fine[k] - coarse[k]), k, lefts[k], rights[k], fine[k], 0)
        )
    counter = len(lefts)

    while err_sum > rel_tol * max(abs(total), 1e-300):
        neg_err, _, lo, hi, val, depth = heapq.heappop(heap)
        if -neg_err <= 0.0:
            break
        if depth >= max_depth:
            raise ConvergenceError(
                f"quadrature did not converge after {max_depth} bisections "
                f"on [{lo}, {hi}]"
            )
        mid = 0.5 * (lo + hi)
        for child_lo, child_hi in ((lo, mid), (mid, hi)):
            c = _panel_sums(f, [child_lo], [child_hi], rule)[0]
            cm = 0.5 * (child_lo + child_hi)
            fl = _panel_sums(f, [child_lo], [cm], rule)[0]
            fr = _panel_sums(f, [cm], [child_hi], rule)[0]
            child_fine = fl + fr
            child_err = abs(child_fine - c)
            total += child_fine - 0.5 * val
            err_sum += child_err
            counter += 1
            heapq.heappush(
                heap, (-child_err, counter, child_lo, child_hi, child_fine, depth + 1)
            )
        err_sum -= -neg_err
    return total


@dataclass(frozen=True)
class CumulativeIntegral:
    """x -> integral of a positive integrand from 0 to x, on [0, 1].

    Partial sums are precomputed at breakpoints clustered geometrically near
    x = 0; point evaluation adds a single local Gauss panel to the nearest
    stored sum, so repeated evaluation (meshing does thousands) is cheap.
    """

    breakpoints: np.ndarray
    partial_sums: np.ndarray
    integrand: Callable

    @classmethod
    def build(cls, integrand, n_breakpoints: int = 4096, x_min: float = 1e-12):
        bp = np.concatenate(([0.0], np.geomspace(x_min, 1.0, n_breakpoints - 1)))
        seg = _panel_sums(integrand, bp[:-1], bp[1:], _G10)
        sums = np.concatenate(([0.0], np.cumsum(seg)))
        return cls(breakpoints=bp, partial_sums=sums, integrand=integrand)

    def __call__(self, x):
        xq = np.atleast_1d(np.asarray(x, dtype=float))
        if np.any(xq < -1e-12) or np.any(xq > 1.0 + 1e-12):
            raise ParameterError("cumulative integral is only defined on [0, 1]")
        xq = np.clip(xq, 0.0, 1.0)
        idx = np.searchsorted(self.breakpoints, xq, side="right") - 1
        idx = np.clip(idx, 0, len(self.breakpoints) - 2)
        lefts = self.breakpoints[idx]
        local = _panel_sums(self.integrand, lefts, xq, _G10)
        out = self.partial_sums[idx] + local
        return float(out[0]) if np.isscalar(x) or np.ndim(x) == 0 else out

    @property
    def total(self) -> float:
        return float(self.partial_sums[-1])


def layer_integral(coeffs, kind: str, n_breakpoints: int = 4096) -> CumulativeIntegral:
    """Cumulative layer integral for a coefficient set.

    kind "e"      : integral of 1/eps            (stretched layer coordinate)
    kind "etilde" : integral of 1/sqrt(eps_up*eps)
    kind "t"      : integral of sqrt(eps_low/eps) (coordinate transform)
    """
    eps = coeffs.eps
    if kind == "e":
        integrand = lambda t: 1.0 / eps(t)
    elif kind == "etilde":
        eu = coeffs.eps_upper
        integrand = lambda t: 1.0 / np.sqrt(eu * eps(t))
    elif kind == "t":
        el = coeffs.eps_lower
        integrand = lambda t: np.sqrt(el / eps(t))
    else:
        raise ParameterError(f"unknown layer integral kind {kind!r}")
    return CumulativeIntegral.build(integrand, n_breakpoints=n_breakpoints)


def invert_monotone(g: CumulativeIntegral, target: float, tol: float = 1e-12) -> float:
    """Solve g(x) = target on [0, 1] for strictly increasing g."""
    lo, hi = g(0.0), g(1.0)
    if target < lo or target > hi:
        raise OutOfRangeError(
            f"target {target!r} outside cumulative range [{lo!r}, {hi!r}]"
        )
    if target == lo:
        return 0.0
    if target == hi:
        return 1.0
    root = brentq(lambda x: g(x) - target, 0.0, 1.0, xtol=1e-300,
                  rtol=4 * np.finfo(float).eps)
    if abs(g(root) - target) > tol * max(1.0, abs(target)):
        raise ConvergenceError("monotone inversion residual above tolerance")
    return float(root)


def differentiate_grid(values, nodes, order: str = "first") -> np.ndarray:
    """Finite-difference derivatives on a nonuniform grid.

    Interior nodes use the 3-point stencil exact for quadratics; endpoints
    fall back to one-sided stencils and are one order less accurate.
    """
    v = np.asarray(values, dtype=float)
    x = np.asarray(nodes, dtype=float)
    if len(x) < 5:
        raise SizeError("differentiate_grid needs at least 5 nodes")
    if v.shape != x.shape:
        raise ParameterError("values and nodes must have the same length")
    dx = np.diff(x)
    if np.any(dx <= 0):
        raise ParameterError("nodes must be strictly increasing")

    h1 = dx[:-1]  # x_i - x_{i-1}
    h2 = dx[1:]   # x_{i+1} - x_i
    out = np.empty_like(v)
    if order == "first":
        out[1:-1] = (
            -h2 / (h1 * (h1 + h2)) * v[:-2]
            + (h2 - h1) / (h1 * h2) * v[1:-1]
            + h1 / (h2 * (h1 + h2)) * v[2:]
        )
        # one-sided 3-point stencils at the ends
        a, b_, c = x[0], x[1], x[2]
        out[0] = (
            v[0] * (2 * a - b_ - c) / ((a - b_) * (a - c))
            + v[1] * (a - c) / ((b_ - a) * (b_ - c))
            + v[2] * (a - b_) / ((c - a) * (c - b_))
        )
        a, b_, c = x[-3], x[-2], x[-1]
        out[-1] = (
            v[-3] * (c - b_) / ((a - b_) * (a - c))
            + v[-2] * (c - a) / ((b_ - a) * (b_ - c))
            + v[-1] * (2 * c - a - b_) / ((c - a) * (c - b_))
        )
    elif order == "second":
        out[1:-1] = 2.0 * (
            v[:-2] / (h1 * (h1 + h2))
            - v[1:-1] / (h1 * h2)
            + v[2:] / (h2 * (h1 + h2))
        )
        out[0] = out[1]
        out[-1] = out[-2]
    else:
        raise ParameterError(f"unknown derivative order {order!r}")
    return out
