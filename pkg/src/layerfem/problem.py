"""Problem instances: coefficient sets, standing assumptions, built-in scenarios.

The model problem is  -(eps(x) u')' - b(x) u' + c(x) u = f(x)  on (0,1) with
homogeneous Dirichlet data, small variable diffusion eps and a boundary layer
at x = 0.  Assumption checks are sample-based on a dense grid so they work
for arbitrary user-supplied coefficient functions.
"""

import numpy as np
from dataclasses import dataclass, field
from typing import Callable, Optional

from .errors import ConfigurationError, ParameterError


@dataclass(frozen=True)
class ScalarFunction:
    """A function on [0, 1] with optional closed-form derivatives.

    Callables must accept numpy arrays (all built-ins do).
    """

    value: Callable
    deriv: Optional[Callable] = None
    deriv2: Optional[Callable] = None

    def __call__(self, x):
        return self.value(x)

    def d(self, x):
        if self.deriv is None:
            raise ConfigurationError("first derivative not available")
        return self.deriv(x)

    def d2(self, x):
        if self.deriv2 is None:
            raise ConfigurationError("second derivative not available")
        return self.deriv2(x)

    @property
    def has_deriv(self) -> bool:
        return self.deriv is not None

    @property
    def has_deriv2(self) -> bool:
        return self.deriv2 is not None

    @staticmethod
    def constant(c: float) -> "ScalarFunction":
        return ScalarFunction(
            value=lambda x, c=c: np.full_like(np.asarray(x, dtype=float), c),
            deriv=lambda x: np.zeros_like(np.asarray(x, dtype=float)),
            deriv2=lambda x: np.zeros_like(np.asarray(x, dtype=float)),
        )


@dataclass(frozen=True)
class CoefficientSet:
    """Coefficients eps, b, c, f together with the structural constants.

    beta:      lower bound for the convection coefficient, 0 < beta < b(x)
    gamma:     coercivity constant, c + b'/2 >= gamma > 0
    eps_lower: lower bound of the diffusion coefficient
    eps_upper: upper bound of the diffusion coefficient
    sigma:     min of eps' on [0, 1]; must stay above -beta
    """

    eps: ScalarFunction
    b: ScalarFunction
    c: ScalarFunction
    f: ScalarFunction
    beta: float
    gamma: float
    eps_lower: float
    eps_upper: float
    sigma: float


@dataclass(frozen=True)
class AssumptionCheck:
    name: str
    passed: bool
    margin: float
    worst_point: float


@dataclass(frozen=True)
class ValidationReport:
    checks: tuple
    sample_count: int
    decomposition_unproven: bool = False

    @property
    def violations(self):
        return tuple(c for c in self.checks if not c.passed)

    @property
    def is_valid(self) -> bool:
        return not self.violations


def _margin_check(name, values, xs):
    """Pass iff min(values) >= 0; reports the minimum and where it occurs."""
    values = np.asarray(values, dtype=float)
    i = int(np.argmin(values))
    return AssumptionCheck(
        name=name, passed=bool(values[i] >= 0), margin=float(values[i]),
        worst_point=float(xs[i]),
    )


def validate_coefficients(coeffs: CoefficientSet, sample_count: int = 10001) -> ValidationReport:
    """Check the standing assumptions on an equispaced sample grid."""
    if sample_count < 2:
        raise ParameterError("sample_count must be at least 2")
    xs = np.linspace(0.0, 1.0, sample_count)

    samples = {
        "eps": np.asarray(coeffs.eps(xs), dtype=float),
        "b": np.asarray(coeffs.b(xs), dtype=float),
        "c": np.asarray(coeffs.c(xs), dtype=float),
        "f": np.asarray(coeffs.f(xs), dtype=float),
        "eps'": np.asarray(coeffs.eps.d(xs), dtype=float),
        "b'": np.asarray(coeffs.b.d(xs), dtype=float),
    }

    checks = []
    finite = np.ones_like(xs, dtype=bool)
    for label, vals in samples.items():
        finite &= np.isfinite(vals)
    if np.all(finite):
        checks.append(AssumptionCheck("finite values", True, 0.0, 0.0))
    else:
        bad = float(xs[int(np.argmin(finite))])
        checks.append(AssumptionCheck("finite values", False, -np.inf, bad))
        return ValidationReport(checks=tuple(checks), sample_count=sample_count)

    eps_v, b_v, c_v = samples["eps"], samples["b"], samples["c"]
    epsp, bp = samples["eps'"], samples["b'"]

    checks.append(AssumptionCheck(
        "beta > 0", coeffs.beta > 0, coeffs.beta, 0.0))
    checks.append(_margin_check("b > beta", b_v - coeffs.beta, xs))
    checks.append(AssumptionCheck(
        "eps_lower > 0", coeffs.eps_lower > 0, coeffs.eps_lower, 0.0))
    checks.append(_margin_check("eps >= eps_lower", eps_v - coeffs.eps_lower, xs))
    checks.append(_margin_check("eps <= eps_upper", coeffs.eps_upper - eps_v, xs))
    checks.append(_margin_check("c >= 0", c_v, xs))
    checks.append(_margin_check(
        "c + b'/2 >= gamma", c_v + 0.5 * bp - coeffs.gamma, xs))
    checks.append(AssumptionCheck(
        "gamma > 0", coeffs.gamma > 0, coeffs.gamma, 0.0))

    # sigma is author-supplied but enters bound formulas, so cross-check it
    # against the sampled minimum of eps'.
    min_epsp = float(np.min(epsp))
    i = int(np.argmin(epsp))
    checks.append(AssumptionCheck(
        "sigma matches min eps'", abs(coeffs.sigma - min_epsp) <= 1e-8,
        -abs(coeffs.sigma - min_epsp), float(xs[i])))
    checks.append(AssumptionCheck(
        "sigma > -beta", coeffs.sigma > -coeffs.beta,
        coeffs.sigma + coeffs.beta, 0.0))

    return ValidationReport(
        checks=tuple(checks),
        sample_count=sample_count,
        decomposition_unproven=(-coeffs.beta < coeffs.sigma < 0),
    )


def manufactured_rhs(u: ScalarFunction, coeffs: CoefficientSet) -> ScalarFunction:
    """Right-hand side f = -eps u'' - (b + eps') u' + c u, exact pointwise."""
    if not u.has_deriv2:
        raise ConfigurationError("manufactured_rhs needs u with a second derivative")
    if not coeffs.eps.has_deriv:
        raise ConfigurationError("manufactured_rhs needs eps with a first derivative")
    eps, b, c = coeffs.eps, coeffs.b, coeffs.c

    def f(x):
        return -eps(x) * u.d2(x) - (b(x) + eps.d(x)) * u.d(x) + c(x) * u(x)

    return ScalarFunction(value=f)


@dataclass(frozen=True)
class Scenario:
    """A coefficient set plus optional closed-form solution and exemplars.

    smooth_exemplar / layer_exemplar are the closed-form model functions used
    by the interpolation-rate studies; the layer exemplar decays like
    exp(-beta * e(x)) and vanishes at x = 1.
    """

    name: str
    coeffs: CoefficientSet
    exact: Optional[ScalarFunction] = None
    rhs_provenance: str = "given"  # "given" | "manufactured"
    smooth_exemplar: Optional[ScalarFunction] = None
    layer_exemplar: Optional[ScalarFunction] = None
    eps0: float = field(default=np.nan)


def _smooth_exemplar() -> ScalarFunction:
    return ScalarFunction(
        value=lambda x: np.cos(0.5 * np.pi * np.asarray(x, dtype=float)),
        deriv=lambda x: -0.5 * np.pi * np.sin(0.5 * np.pi * np.asarray(x, dtype=float)),
        deriv2=lambda x: -((0.5 * np.pi) ** 2) * np.cos(0.5 * np.pi * np.asarray(x, dtype=float)),
    )


def _layer_exemplar(beta, e_fn, e1, eps_fn, epsp_fn) -> ScalarFunction:
    """Normalized layer profile (exp(-beta e(x)) - q) / (1 - q), q = exp(-beta e(1)).

    Takes the value 1 at x = 0 and 0 at x = 1.  Closed-form derivatives via
    the closed form of e(x) supplied by the scenario family.
    """
    with np.errstate(under="ignore"):
        q = float(np.exp(-beta * e1))
    denom = 1.0 - q

    def val(x):
        with np.errstate(under="ignore"):
            return (np.exp(-beta * e_fn(x)) - q) / denom

    def d1(x):
        with np.errstate(under="ignore"):
            return -(beta / eps_fn(x)) * np.exp(-beta * e_fn(x)) / denom

    def d2(x):
        with np.errstate(under="ignore"):
            return (beta * (beta + epsp_fn(x)) / eps_fn(x) ** 2
                    * np.exp(-beta * e_fn(x)) / denom)

    return ScalarFunction(value=val, deriv=d1, deriv2=d2)


def _eps_family(kind: str, eps0: float):
    """Diffusion coefficient with closed-form layer integral e(x)."""
    if kind == "const":
        eps = ScalarFunction.constant(eps0)
        e_fn = lambda x: np.asarray(x, dtype=float) / eps0
        lower, upper, sigma = eps0, eps0, 0.0
    elif kind == "linear":
        eps = ScalarFunction(
            value=lambda x: eps0 * (1.0 + np.asarray(x, dtype=float)),
            deriv=lambda x: np.full_like(np.asarray(x, dtype=float), eps0),
            deriv2=lambda x: np.zeros_like(np.asarray(x, dtype=float)),
        )
        e_fn = lambda x: np.log1p(np.asarray(x, dtype=float)) / eps0
        lower, upper, sigma = eps0, 2.0 * eps0, eps0
    elif kind == "exp":
        eps = ScalarFunction(
            value=lambda x: eps0 * np.exp(np.asarray(x, dtype=float)),
            deriv=lambda x: eps0 * np.exp(np.asarray(x, dtype=float)),
            deriv2=lambda x: eps0 * np.exp(np.asarray(x, dtype=float)),
        )
        e_fn = lambda x: -np.expm1(-np.asarray(x, dtype=float)) / eps0
        lower, upper, sigma = eps0, eps0 * np.e, eps0
    else:
        raise ParameterError(f"unknown eps family {kind!r}")
    return eps, e_fn, lower, upper, sigma


_BETA = 1.0
_GAMMA = 1.0


def _base_scenario(kind: str, name: str, eps0: float) -> Scenario:
    eps, e_fn, lower, upper, sigma = _eps_family(kind, eps0)
    coeffs = CoefficientSet(
        eps=eps,
        b=ScalarFunction.constant(2.0),
        c=ScalarFunction.constant(1.0),
        f=ScalarFunction.constant(1.0),
        beta=_BETA, gamma=_GAMMA,
        eps_lower=lower, eps_upper=upper, sigma=sigma,
    )
    layer = _layer_exemplar(_BETA, e_fn, e_fn(1.0), eps.value, eps.deriv)
    return Scenario(
        name=name, coeffs=coeffs, exact=None, rhs_provenance="given",
        smooth_exemplar=_smooth_exemplar(), layer_exemplar=layer, eps0=eps0,
    )


def _manufactured_scenario(eps0: float) -> Scenario:
    # exact solution u = cos(pi x / 2) - E(x): both terms are 1 at x = 0 and
    # 0 at x = 1, so no further boundary correction is needed.
    eps, e_fn, lower, upper, sigma = _eps_family("linear", eps0)
    smooth = _smooth_exemplar()
    layer = _layer_exemplar(_BETA, e_fn, e_fn(1.0), eps.value, eps.deriv)
    exact = ScalarFunction(
        value=lambda x: smooth(x) - layer(x),
        deriv=lambda x: smooth.d(x) - layer.d(x),
        deriv2=lambda x: smooth.d2(x) - layer.d2(x),
    )
    partial = CoefficientSet(
        eps=eps,
        b=ScalarFunction.constant(2.0),
        c=ScalarFunction.constant(1.0),
        f=ScalarFunction.constant(0.0),
        beta=_BETA, gamma=_GAMMA,
        eps_lower=lower, eps_upper=upper, sigma=sigma,
    )
    f = manufactured_rhs(exact, partial)
    coeffs = CoefficientSet(
        eps=partial.eps, b=partial.b, c=partial.c, f=f,
        beta=_BETA, gamma=_GAMMA,
        eps_lower=lower, eps_upper=upper, sigma=sigma,
    )
    return Scenario(
        name="manufactured", coeffs=coeffs, exact=exact,
        rhs_provenance="manufactured",
        smooth_exemplar=smooth, layer_exemplar=layer, eps0=eps0,
    )


SCENARIO_NAMES = ("eps-const", "eps-linear", "eps-exp", "manufactured")


def builtin_scenarios(eps0: float):
    """The four built-in scenarios at diffusion scale eps0 (0 < eps0 <= 0.1)."""
    if not (0.0 < eps0 <= 0.1):
        raise ParameterError("eps0 must lie in (0, 0.1]")
    return [
        _base_scenario("const", "eps-const", eps0),
        _base_scenario("linear", "eps-linear", eps0),
        _base_scenario("exp", "eps-exp", eps0),
        _manufactured_scenario(eps0),
    ]


def get_scenario(name: str, eps0: float) -> Scenario:
    for sc in builtin_scenarios(eps0):
        if sc.name == name:
            return sc
    raise ParameterError(f"unknown scenario {name!r}; choose from {SCENARIO_NAMES}")
