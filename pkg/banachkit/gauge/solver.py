"""
Interpolation gauge solver.

For x reduced to a = |x| sorted non-increasing, write u = m*y with 0 <= u <= a.
The optimal u for a prescribed level ||u||_q = T solves the coordinatewise KKT
system
    p * (a_i - u_i)^(p-1) = mu * q * u_i^(q-1),
so the inner minimizers form a one-parameter path. It is indexed by
kappa = log(q*mu/p) for q > 1 and by the water level tau (u_i = (a_i - tau)_+)
for q = 1. Along the path ||u||_q decreases and ||a - u||_p increases, and
both gauges become scalar root-finding problems on that path:

* gauge:  ||u||_q / m = m * ||a - u||_p  (balance point)
* gauge2: d/dT [ (T/m)^2 + m^2 * ||a - u(T)||_p^2 ] = 0

For q > 1 each coordinate is solved in logistic form u_i = a_i * expit(v_i),
a_i - u_i = a_i * expit(-v_i), which keeps both parts strictly positive and
lets every quantity be evaluated in log space.
"""
import logging
import math
from typing import Callable, Optional, Tuple, Union

import numpy as np
from scipy.optimize import brentq
from scipy.special import expit, log_expit, logsumexp

from ..config import config
from ..core import FVec, FlatVec, Vector, as_fvec, array_lp_norm
from ..errors import InvalidParameterError, SolverError
from .oracles import flat_decomposition
from .types import GaugeParams, GaugeResult, GaugeVariant, as_variant, check_tol

logger = logging.getLogger(__name__)

_NEWTON_STEP_TOL = 1e-13
_LOGIT_SPAN = 50.0
_MAX_EXPANSIONS = 60


class KKTPath:
    """
    Inner minimizers of ||a - u||_p over {0 <= u <= a, ||u||_q fixed}.

    `a` must be positive and sorted non-increasing. Larger path parameters give
    smaller u.
    """

    def __init__(self, a: np.ndarray, q: float, p: float, max_newton: int):
        self.a = a
        self.log_a = np.log(a)
        self.q = q
        self.p = p
        self.max_newton = max_newton
        self.evaluations = 0
        self.newton_iterations = 0

    def bracket(self) -> Tuple[float, float]:
        if self.q == 1.0:
            return 0.0, float(self.a[0])
        span = _LOGIT_SPAN * max(1.0, self.p - 1.0)
        shift = (self.q - self.p) * self.log_a
        return float(-span - shift.max()), float(span - shift.min())

    def logs(self, theta: float) -> Tuple[np.ndarray, np.ndarray]:
        """(log u, log(a - u)) at path parameter theta"""
        self.evaluations += 1
        if self.q == 1.0:
            with np.errstate(divide="ignore"):
                return (np.log(np.maximum(self.a - theta, 0.0)),
                        np.log(np.minimum(self.a, max(theta, 0.0))))
        v = self._logit(theta + (self.q - self.p) * self.log_a)
        return self.log_a + log_expit(v), self.log_a + log_expit(-v)

    def _logit(self, c: np.ndarray) -> np.ndarray:
        # Root of h(v) = (q-1)*softplus(-v) - (p-1)*softplus(v) - c, which is
        # decreasing and concave, so Newton is monotone after the first step.
        q1, p1 = self.q - 1.0, self.p - 1.0
        v = np.where(c < 0, -c / p1, -c / q1)
        step = np.zeros_like(v)
        for it in range(1, self.max_newton + 1):
            h = q1 * np.logaddexp(0.0, -v) - p1 * np.logaddexp(0.0, v) - c
            dh = -(p1 * expit(v) + q1 * expit(-v))
            step = h / dh
            v = v - step
            if np.all(np.abs(step) <= _NEWTON_STEP_TOL * (1.0 + np.abs(v))):
                self.newton_iterations += it
                return v
        raise SolverError("Coordinatewise Newton iteration did not converge",
                          {"iterations": self.max_newton, "max_step": float(np.abs(step).max())})

    def norms(self, theta: float) -> Tuple[float, float, np.ndarray, np.ndarray]:
        """(log ||u||_q, log ||a - u||_p^p, log u, log(a - u))"""
        log_u, log_r = self.logs(theta)
        with np.errstate(divide="ignore"):
            log_T = float(logsumexp(self.q * log_u)) / self.q
            log_P = float(logsumexp(self.p * log_r))
        return log_T, log_P, log_u, log_r

    def stationarity(self, theta: float, m: float) -> float:
        """Half the derivative of (T/m)^2 + m^2 * P^(2/p) with respect to T"""
        log_T, log_P, log_u, log_r = self.norms(theta)
        T = math.exp(log_T)
        if self.q == 1.0:
            if theta <= 0.0:
                return T / (m * m)
            log_ratio = (self.p - 1.0) * math.log(theta)
            log_T_term = 0.0
        else:
            # q*mu/p = (a_i - u_i)^(p-1) / u_i^(q-1) for every coordinate i
            log_ratio = (self.p - 1.0) * log_r[0] - (self.q - 1.0) * log_u[0]
            log_T_term = (self.q - 1.0) * log_T
        log_term = 2.0 * math.log(m) + log_ratio + (2.0 / self.p - 1.0) * log_P + log_T_term
        return T / (m * m) - math.exp(log_term)

    def balance(self, theta: float, m: float) -> float:
        """||u||_q / m - m * ||a - u||_p"""
        log_T, log_P, _, _ = self.norms(theta)
        return math.exp(log_T) / m - m * math.exp(log_P / self.p)


def _reduce(x: FVec) -> Tuple[np.ndarray, np.ndarray]:
    """Moduli sorted non-increasing (stable) and the permutation producing them"""
    mods = np.abs(x.values)
    order = np.argsort(-mods, kind="stable")
    return mods[order], order


def _lift(x: FVec, order: np.ndarray, sorted_values: np.ndarray) -> FVec:
    values = np.empty_like(sorted_values)
    values[order] = sorted_values
    return FVec.from_arrays(x.indices, np.sign(x.values) * values)


def _root(f: Callable[[float], float], lo: float, hi: float, fixed: bool,
          max_iter: int, what: str) -> float:
    """brentq on a decreasing function, widening an open bracket until it changes sign"""
    width = hi - lo
    f_lo, f_hi = f(lo), f(hi)
    expansions = 0
    while not fixed and (f_lo <= 0.0 or f_hi >= 0.0):
        if expansions >= _MAX_EXPANSIONS:
            raise SolverError(f"Could not bracket the {what} root",
                              {"bracket": [lo, hi], "f": [f_lo, f_hi]})
        if f_lo <= 0.0:
            lo -= width
            f_lo = f(lo)
        if f_hi >= 0.0:
            hi += width
            f_hi = f(hi)
        width *= 2.0
        expansions += 1

    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    if f_lo < 0.0 or f_hi > 0.0:
        raise SolverError(f"Invalid {what} bracket", {"bracket": [lo, hi], "f": [f_lo, f_hi]})

    scale = max(1.0, abs(lo), abs(hi))
    try:
        root, info = brentq(f, lo, hi, xtol=1e-15 * scale, rtol=4 * np.finfo(float).eps,
                            maxiter=max_iter, full_output=True)
    except RuntimeError as e:
        raise SolverError(f"{what} root search failed: {e}", {"bracket": [lo, hi]})
    logger.debug(f"{what} root {root:.6g} after {info.iterations} iterations")
    return root


def _flat_result(x: Vector, params: GaugeParams, variant: GaugeVariant) -> GaugeResult:
    if isinstance(x, FlatVec):
        n, modulus = x.size, abs(x.value)
        value, alpha, beta = flat_decomposition(n, params, variant)
        y = FlatVec(x.value * alpha, x.start, x.stop)
        z = FlatVec(x.value * beta, x.start, x.stop)
    else:
        n, modulus = len(x), float(abs(x.values[0]))
        value, alpha, beta = flat_decomposition(n, params, variant)
        y, z = x * alpha, x * beta
    residual = modulus * abs(1.0 - (params.m * alpha + beta / params.m))
    return GaugeResult(value=modulus * value, y=y, z=z, variant=variant,
                       residual_certificate=residual, method="closed-form")


def _zero_result(variant: GaugeVariant) -> GaugeResult:
    return GaugeResult(value=0.0, y=FVec(), z=FVec(), variant=variant, method="trivial")


def _solve(x: Vector, params: GaugeParams, variant: GaugeVariant, tol: Optional[float],
           force_generic: Optional[bool]) -> GaugeResult:
    tol = check_tol(config.gauge_tol if tol is None else tol)
    force_generic = config.force_generic if force_generic is None else force_generic

    if isinstance(x, FlatVec) and not force_generic:
        return _flat_result(x, params, variant) if x.value != 0.0 else _zero_result(variant)
    x = as_fvec(x)
    if x.is_zero():
        return _zero_result(variant)
    if x.is_flat() and not force_generic:
        return _flat_result(x, params, variant)

    q, p, m = params.q, params.p, params.m
    a, order = _reduce(x)
    scale = a[0]
    path = KKTPath(a / scale, q, p, config.max_newton)
    lo, hi = path.bracket()

    if variant is GaugeVariant.GAUGE:
        theta = _root(lambda th: path.balance(th, m), lo, hi, q == 1.0,
                      config.max_bisections, "balance")
    else:
        theta = _root(lambda th: path.stationarity(th, m), lo, hi, q == 1.0,
                      config.max_bisections, "stationarity")

    log_u, log_r = path.logs(theta)
    u, r = scale * np.exp(log_u), scale * np.exp(log_r)
    y = _lift(x, order, u / m)
    z = _lift(x, order, m * r)
    t, phi = array_lp_norm(y.values, q), array_lp_norm(z.values, p)

    if variant is GaugeVariant.GAUGE:
        value, gap = max(t, phi), abs(t - phi)
        if gap > tol * value:
            raise SolverError("Balance point not resolved to the requested tolerance",
                              {"t": t, "phi": phi, "theta": theta, "tol": tol})
    else:
        value, gap = math.hypot(t, phi), 0.0

    residual = (x - (y * m + z * (1.0 / m))).sup_norm()
    logger.debug(f"{variant.value} value={value:.10g} evaluations={path.evaluations} "
                 f"newton={path.newton_iterations}")
    return GaugeResult(value=value, y=y, z=z, variant=variant, residual_certificate=residual,
                       gap=gap, method="solver", evaluations=path.evaluations,
                       diagnostics={"theta": theta, "newton_iterations": path.newton_iterations})


def gauge_qpm(x: Vector, params: GaugeParams, tol: Optional[float] = None,
              force_generic: Optional[bool] = None) -> GaugeResult:
    """inf over x = m*y + z/m of max(||y||_q, ||z||_p)"""
    return _solve(x, params, GaugeVariant.GAUGE, tol, force_generic)


def gauge2_qpm(x: Vector, params: GaugeParams, tol: Optional[float] = None,
               force_generic: Optional[bool] = None) -> GaugeResult:
    """inf over x = m*y + z/m of (||y||_q^2 + ||z||_p^2)^(1/2)"""
    return _solve(x, params, GaugeVariant.GAUGE2, tol, force_generic)


def compute_gauge(x: Vector, params: GaugeParams,
                  variant: Union[str, GaugeVariant] = GaugeVariant.GAUGE,
                  tol: Optional[float] = None, force_generic: Optional[bool] = None) -> GaugeResult:
    return _solve(x, params, as_variant(variant), tol, force_generic)


def inner_projection(x: Vector, t: float, params: GaugeParams) -> FVec:
    """
    Minimizer y of ||x - m*y||_p subject to ||y||_q <= t.

    The minimizer is sign-aligned with x and satisfies |m*y_i| <= |x_i|.
    """
    if not t >= 0.0:
        raise InvalidParameterError(f"t must be nonnegative, got {t}")
    x = as_fvec(x)
    if x.is_zero() or t == 0.0:
        return FVec()

    q, p, m = params.q, params.p, params.m
    target = m * t
    if target >= array_lp_norm(x.values, q):
        return x * (1.0 / m)

    a, order = _reduce(x)
    scale = a[0]
    path = KKTPath(a / scale, q, p, config.max_newton)
    lo, hi = path.bracket()
    theta = _root(lambda th: math.exp(path.norms(th)[0]) - target / scale, lo, hi, q == 1.0,
                  config.max_bisections, "projection")
    log_u, _ = path.logs(theta)
    return _lift(x, order, scale * np.exp(log_u) / m)
