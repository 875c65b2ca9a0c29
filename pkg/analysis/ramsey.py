"""Reduced Ramsey growth model in consumption and capital per capita.

    k_dot = A k**gamma - (delta + n + x) k - c
    c_dot = (c / alpha) (gamma A k**(gamma - 1) - delta - rho - alpha x)

with x = g_A / (1 - gamma). Population and productivity growth default to
zero; non-zero values are experimental and only change the stationary terms.
"""
import logging
import math
from typing import Union

import numpy as np

from core.errors import ShootingError, SteadyStateError
from core.schemas import PhasePath, RamseyParams, SaddlePath, SteadyState, TransversalityReport

logger = logging.getLogger(__name__)

DEFAULT_DT = 0.05
SWITCH_RADIUS = 1e-3
MAX_APPROACH_DISTANCE = 0.05
MAX_BISECTION_STEPS = 200


def output(k: float, params: RamseyParams) -> float:
    return params.tfp * k ** params.gamma


def phase_rhs(k: float, c: float, params: RamseyParams) -> tuple[float, float]:
    if not k > 0:
        return math.nan, math.nan
    k_dot = params.tfp * k ** params.gamma - params.effective_depreciation * k - c
    marginal = params.gamma * params.tfp * k ** (params.gamma - 1.0)
    c_dot = (c / params.alpha) * (
        marginal - params.delta - params.rho - params.alpha * params.labour_augmenting_growth
    )
    return k_dot, c_dot


def _required_return(params: RamseyParams) -> float:
    return params.rho + params.delta + params.alpha * params.labour_augmenting_growth


def jacobian(k: float, c: float, params: RamseyParams) -> np.ndarray:
    """Jacobian of (c_dot, k_dot) with respect to (c, k)."""
    g, a = params.gamma, params.tfp
    marginal = g * a * k ** (g - 1.0)
    curvature = g * (g - 1.0) * a * k ** (g - 2.0)
    return np.array([
        [(marginal - _required_return(params)) / params.alpha, c * curvature / params.alpha],
        [-1.0, marginal - params.effective_depreciation],
    ])


def _sorted_eigenvalues(matrix: np.ndarray) -> tuple[complex, complex]:
    values = sorted(np.linalg.eigvals(matrix), key=lambda v: (v.real, v.imag))
    return complex(values[0]), complex(values[1])


def steady_state(params: RamseyParams) -> SteadyState:
    required = _required_return(params)
    if required <= 0:
        raise SteadyStateError(f"rho + delta + alpha x must be positive, got {required}")

    k_star = (params.gamma * params.tfp / required) ** (1.0 / (1.0 - params.gamma))
    c_star = output(k_star, params) - params.effective_depreciation * k_star
    if not (math.isfinite(k_star) and math.isfinite(c_star)) or k_star <= 0 or c_star <= 0:
        raise SteadyStateError(f"no positive steady state (k*={k_star}, c*={c_star})")

    k_dot, c_dot = phase_rhs(k_star, c_star, params)
    if abs(k_dot) > 1e-10 * max(1.0, k_star) or abs(c_dot) > 1e-10 * max(1.0, c_star):
        raise SteadyStateError(f"steady-state residual too large ({k_dot}, {c_dot})")

    eigenvalues = _sorted_eigenvalues(jacobian(k_star, c_star, params))
    return SteadyState(k_star=k_star, c_star=c_star, eigenvalues=eigenvalues)


def jacobian_eigenvalues(state: SteadyState, params: RamseyParams) -> tuple[complex, complex]:
    return _sorted_eigenvalues(jacobian(state.k_star, state.c_star, params))


def steady_state_savings_rate(params: RamseyParams) -> float:
    required = _required_return(params)
    if required <= 0:
        raise SteadyStateError(f"rho + delta + alpha x must be positive, got {required}")
    return params.gamma * params.effective_depreciation / required


def _rk4(k: float, c: float, dt: float, params: RamseyParams) -> tuple[float, float]:
    k1, c1 = phase_rhs(k, c, params)
    k2, c2 = phase_rhs(k + 0.5 * dt * k1, c + 0.5 * dt * c1, params)
    k3, c3 = phase_rhs(k + 0.5 * dt * k2, c + 0.5 * dt * c2, params)
    k4, c4 = phase_rhs(k + dt * k3, c + dt * c3, params)
    return (
        k + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4),
        c + dt / 6.0 * (c1 + 2.0 * c2 + 2.0 * c3 + c4),
    )


def _valid(k: float, c: float) -> bool:
    return math.isfinite(k) and math.isfinite(c) and k > 0 and c > 0


def integrate(
    k0: float,
    c0: float,
    params: RamseyParams,
    horizon: float = 300.0,
    dt: float = DEFAULT_DT,
) -> PhasePath:
    """Forward RK4; stops early when k or c leaves the positive orthant."""
    steps = int(round(horizon / dt))
    times, ks, cs = [0.0], [k0], [c0]
    k, c = k0, c0
    outcome = "open"
    for i in range(1, steps + 1):
        k_next, c_next = _rk4(k, c, dt, params)
        if not _valid(k_next, c_next):
            outcome = "high" if not (math.isfinite(k_next) and k_next > 0) else "low"
            break
        k, c = k_next, c_next
        times.append(i * dt)
        ks.append(k)
        cs.append(c)
    return PhasePath(times=np.array(times), k=np.array(ks), c=np.array(cs), outcome=outcome)


def classify(k0: float, c0: float, params: RamseyParams, k_star: float, horizon: float, dt: float = DEFAULT_DT) -> str:
    """'high' when capital is run down below k*, 'low' when it overshoots k*."""
    k, c = k0, c0
    for _ in range(int(round(horizon / dt))):
        k, c = _rk4(k, c, dt, params)
        if not (math.isfinite(k) and k > 0):
            return "high"
        if not (math.isfinite(c) and c > 0):
            return "low"
        k_dot, _ = phase_rhs(k, c, params)
        if k < k_star and k_dot < 0:
            return "high"
        if k > k_star and k_dot > 0:
            return "low"
    return "open"


def _stable_tail(
    k: float,
    c: float,
    state: SteadyState,
    params: RamseyParams,
    elapsed: np.ndarray,
) -> tuple[np.ndarray, np.ndarray]:
    # Linearization in (k, c) order.
    j = jacobian(state.k_star, state.c_star, params)[::-1, ::-1]
    values, vectors = np.linalg.eig(j)
    stable = int(np.argmin(values.real))
    coefficients = np.linalg.solve(vectors, np.array([k - state.k_star, c - state.c_star]))
    decay = np.exp(values[stable].real * elapsed)
    direction = vectors[:, stable].real * coefficients[stable].real
    return state.k_star + direction[0] * decay, state.c_star + direction[1] * decay


def saddle_path(
    k0: float,
    params: RamseyParams,
    horizon: float = 300.0,
    dt: float = DEFAULT_DT,
    tol: float = 1e-6,
) -> SaddlePath:
    state = steady_state(params)
    k_star, c_star = state.k_star, state.c_star
    steps = int(round(horizon / dt))
    times = dt * np.arange(steps + 1)

    if k0 <= 0 or not math.isfinite(k0):
        raise ShootingError("initial capital must be positive", {"k0": k0})

    if abs(k0 - k_star) <= 1e-12 * k_star:
        path = PhasePath(times=times, k=np.full(steps + 1, k_star), c=np.full(steps + 1, c_star), outcome="open")
        return SaddlePath(c0=c_star, path=path, converged=True, switch_time=0.0)

    lo, hi = 0.0, output(k0, params)
    for _ in range(20):
        if classify(k0, hi, params, k_star, horizon, dt) == "high":
            break
        lo, hi = hi, 2.0 * hi
    else:
        raise ShootingError("could not bracket the saddle-path consumption", {"k0": k0, "hi": hi})

    width = max(tol * 1e-8, 1e-15)
    mid = 0.5 * (lo + hi)
    steps_taken = 0
    for steps_taken in range(1, MAX_BISECTION_STEPS + 1):
        mid = 0.5 * (lo + hi)
        outcome = classify(k0, mid, params, k_star, horizon, dt)
        if outcome == "open":
            break
        if outcome == "high":
            hi = mid
        else:
            lo = mid
        if hi - lo <= width * hi:
            mid = 0.5 * (lo + hi)
            break

    raw = integrate(k0, mid, params, horizon, dt)
    distance = np.abs(raw.k - k_star) / k_star + np.abs(raw.c - c_star) / c_star
    inside = np.flatnonzero(distance < SWITCH_RADIUS)
    switch = int(inside[0]) if inside.size else int(np.argmin(distance))
    if distance[switch] > MAX_APPROACH_DISTANCE:
        raise ShootingError(
            "shooting did not approach the steady state",
            {"k0": k0, "c0": mid, "closest_distance": float(distance[switch]), "bisection_steps": steps_taken},
        )

    tail_k, tail_c = _stable_tail(raw.k[switch], raw.c[switch], state, params, times[switch:] - times[switch])
    k_path = np.concatenate([raw.k[:switch], tail_k])
    c_path = np.concatenate([raw.c[:switch], tail_c])
    final_gap = abs(k_path[-1] - k_star) + abs(c_path[-1] - c_star)
    converged = bool(final_gap < tol)

    logger.debug(f"Saddle path from k0={k0:.4f}: c0={mid:.10f}, switch at t={times[switch]:.2f}, gap={final_gap:.2e}")
    return SaddlePath(
        c0=mid,
        path=PhasePath(times=times, k=k_path, c=c_path, outcome="open"),
        converged=converged,
        switch_time=float(times[switch]),
        bisection_steps=steps_taken,
    )


def transversality_diagnostic(
    path: Union[PhasePath, SaddlePath],
    params: RamseyParams,
    tol: float = 1e-8,
) -> TransversalityReport:
    """Discounted shadow value of capital, U'(c) k exp(-rho t)."""
    phase = path.path if isinstance(path, SaddlePath) else path
    x = params.labour_augmenting_growth
    discount = params.rho - params.population_growth - (1.0 - params.alpha) * x
    with np.errstate(over="ignore", divide="ignore"):
        values = np.power(phase.c, -params.alpha) * phase.k * np.exp(-discount * phase.times)
    last = values[-1]
    vanishing = bool(np.isfinite(last) and last < tol)
    exploding = bool(not np.isfinite(last) or last > values[0])
    return TransversalityReport(times=phase.times, values=values, vanishing=vanishing, exploding=exploding)


def default_params(alpha: float = 1.45, rho: float = 0.03, delta: float = 0.07, gamma: float = 0.3, tfp: float = 1.0) -> RamseyParams:
    return RamseyParams(alpha=alpha, rho=rho, delta=delta, gamma=gamma, tfp=tfp)
