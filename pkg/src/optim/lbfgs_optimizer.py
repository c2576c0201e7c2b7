"""
Limited-memory BFGS with a strong-Wolfe line search.

The direction comes from the two-loop recursion over the stored
(s, y) pairs with initial scaling gamma = s.y / y.y of the newest pair.
Each step first tries the unit quasi-Newton step (unit length on the first
iteration), replaced by the secant step to the line minimum when the line is
quadratic. If neither satisfies the strong Wolfe conditions the search is
handed to ``scipy.optimize.line_search``; when that fails too the step falls
back to a short normalized gradient step.
"""

import warnings
from collections.abc import Callable
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np
from scipy.optimize import line_search

# configuration objects
from core.config import LBFGS_SETTINGS

# logger module
from logger.logger_module import ModuleLoger

logger = ModuleLoger(Path(__file__).stem)

Oracle = Callable[[np.ndarray], tuple[float, np.ndarray]]


@dataclass(frozen=True, eq=False)
class LbfgsState:
    params: np.ndarray
    loss: float | None = None
    gradient: np.ndarray | None = None
    s_history: tuple[np.ndarray, ...] = ()
    y_history: tuple[np.ndarray, ...] = ()
    iteration: int = 0
    evaluations: int = 0
    fallbacks: int = 0
    skipped_pairs: int = 0
    history_size: int = field(default=LBFGS_SETTINGS.history_size)

    def stale(self) -> "LbfgsState":
        """Forget the cached loss and gradient (the objective changed)."""
        return replace(self, loss=None, gradient=None)


def lbfgs_init(params: np.ndarray, history_size: int = LBFGS_SETTINGS.history_size) -> LbfgsState:
    return LbfgsState(np.array(params, dtype=np.float64), history_size=history_size)


def two_loop_direction(
    gradient: np.ndarray,
    s_history: tuple[np.ndarray, ...],
    y_history: tuple[np.ndarray, ...],
) -> np.ndarray:
    """-H g for the inverse-Hessian approximation H built from the pairs."""
    q = gradient.copy()
    alphas = []
    rhos = [1.0 / float(y @ s) for s, y in zip(s_history, y_history)]
    for s, y, rho in reversed(list(zip(s_history, y_history, rhos))):
        alpha = rho * float(s @ q)
        q -= alpha * y
        alphas.append(alpha)
    if s_history:
        s, y = s_history[-1], y_history[-1]
        q *= float(s @ y) / float(y @ y)
    for (s, y, rho), alpha in zip(zip(s_history, y_history, rhos), reversed(alphas)):
        beta = rho * float(y @ q)
        q += (alpha - beta) * s
    return -q


class _CachedOracle:
    """Remembers evaluations so line-search calls for f and g share one pass."""

    def __init__(self, oracle: Oracle):
        self.oracle = oracle
        self.cache: dict[bytes, tuple[float, np.ndarray]] = {}
        self.calls = 0

    def __call__(self, x: np.ndarray) -> tuple[float, np.ndarray]:
        key = np.ascontiguousarray(x, dtype=np.float64).tobytes()
        if key not in self.cache:
            self.calls += 1
            loss, gradient = self.oracle(np.array(x, dtype=np.float64))
            self.cache[key] = (float(loss), np.asarray(gradient, dtype=np.float64))
        return self.cache[key]

    def loss(self, x):
        return self(x)[0]

    def gradient(self, x):
        return self(x)[1]


def _satisfies_wolfe(loss, slope, loss_a, slope_a, alpha, c1, c2) -> bool:
    return loss_a <= loss + c1 * alpha * slope and abs(slope_a) <= c2 * abs(slope)


def _trial_step(
    cached: "_CachedOracle",
    x: np.ndarray,
    direction: np.ndarray,
    loss: float,
    slope: float,
    alpha: float,
    c1: float,
    c2: float,
    quadratic_rtol: float,
) -> float | None:
    """One trial step, refined by a secant step when the line is quadratic.

    On a quadratic the trapezoid rule is exact,
    phi(a) = phi(0) + a (phi'(0) + phi'(a)) / 2, and the secant root of phi'
    is the exact line minimum. Returns None when no tried step satisfies the
    strong Wolfe conditions.
    """
    loss_a, gradient_a = cached(x + alpha * direction)
    slope_a = float(gradient_a @ direction)
    if not np.isfinite(loss_a):
        return None
    trapezoid = loss + 0.5 * alpha * (slope + slope_a)
    scale = abs(loss) + abs(loss_a) + abs(alpha * slope)
    if slope_a > slope and abs(loss_a - trapezoid) <= quadratic_rtol * scale:
        alpha_star = alpha * slope / (slope - slope_a)
        if alpha_star != alpha:
            loss_star, gradient_star = cached(x + alpha_star * direction)
            slope_star = float(gradient_star @ direction)
            if _satisfies_wolfe(loss, slope, loss_star, slope_star, alpha_star, c1, c2):
                return alpha_star
    if _satisfies_wolfe(loss, slope, loss_a, slope_a, alpha, c1, c2):
        return alpha
    return None


def lbfgs_step(
    state: LbfgsState,
    oracle: Oracle,
    c1: float = LBFGS_SETTINGS.c1,
    c2: float = LBFGS_SETTINGS.c2,
    max_line_search_evals: int = LBFGS_SETTINGS.max_line_search_evals,
    curvature_eps: float = LBFGS_SETTINGS.curvature_eps,
    fallback_step: float = LBFGS_SETTINGS.fallback_step,
    quadratic_rtol: float = LBFGS_SETTINGS.quadratic_rtol,
) -> LbfgsState:
    cached = _CachedOracle(oracle)
    x = state.params
    if state.loss is None or state.gradient is None:
        loss, gradient = cached(x)
    else:
        loss, gradient = state.loss, state.gradient
        cached.cache[np.ascontiguousarray(x).tobytes()] = (loss, gradient)

    gnorm = float(np.linalg.norm(gradient))
    if gnorm == 0.0 or not np.isfinite(loss):
        return replace(
            state,
            loss=loss,
            gradient=gradient,
            iteration=state.iteration + 1,
            evaluations=state.evaluations + cached.calls,
        )

    direction = two_loop_direction(gradient, state.s_history, state.y_history)
    if not float(direction @ gradient) < 0.0:
        logger.warning(f"iteration {state.iteration}: not a descent direction, history reset")
        direction = -gradient
        state = replace(state, s_history=(), y_history=())
    slope = float(direction @ gradient)
    # unit quasi-Newton step; a unit-length step while there is no curvature
    trial = 1.0 if state.s_history else min(1.0, 1.0 / gnorm)
    alpha = _trial_step(cached, x, direction, loss, slope, trial, c1, c2, quadratic_rtol)

    if alpha is None:
        # scipy's initial-step heuristic while there is no curvature
        old_old_loss = loss + gnorm / 2.0 if not state.s_history else None
        with warnings.catch_warnings():
            # LineSearchWarning is a RuntimeWarning; failures are handled below
            warnings.simplefilter("ignore", RuntimeWarning)
            alpha, *_ = line_search(
                cached.loss,
                cached.gradient,
                x,
                direction,
                gfk=gradient,
                old_fval=loss,
                old_old_fval=old_old_loss,
                c1=c1,
                c2=c2,
                maxiter=max_line_search_evals,
            )

    fallbacks = state.fallbacks
    if alpha is None:
        fallbacks += 1
        logger.warning(
            f"iteration {state.iteration}: line search failed, gradient step of {fallback_step}"
        )
        x_new = x - fallback_step * gradient / gnorm
    else:
        x_new = x + alpha * direction
    loss_new, gradient_new = cached(x_new)

    s, y = x_new - x, gradient_new - gradient
    s_history, y_history = state.s_history, state.y_history
    skipped = state.skipped_pairs
    if state.history_size > 0 and float(s @ y) > curvature_eps:
        s_history = (s_history + (s,))[-state.history_size :]
        y_history = (y_history + (y,))[-state.history_size :]
    else:
        skipped += 1
        if state.history_size > 0:
            logger.debug(f"iteration {state.iteration}: curvature pair skipped (s.y = {s @ y:.3e})")

    return LbfgsState(
        params=x_new,
        loss=loss_new,
        gradient=gradient_new,
        s_history=s_history,
        y_history=y_history,
        iteration=state.iteration + 1,
        evaluations=state.evaluations + cached.calls,
        fallbacks=fallbacks,
        skipped_pairs=skipped,
        history_size=state.history_size,
    )


def minimize(
    oracle: Oracle,
    x0: np.ndarray,
    max_iter: int = 100,
    gtol: float = 1e-10,
    history_size: int = LBFGS_SETTINGS.history_size,
) -> LbfgsState:
    """Run L-BFGS until the gradient norm drops below ``gtol``."""
    state = lbfgs_init(x0, history_size)
    for _ in range(max_iter):
        if state.gradient is not None and np.linalg.norm(state.gradient) < gtol:
            break
        state = lbfgs_step(state, oracle)
    if state.loss is None:
        loss, gradient = oracle(state.params)
        state = replace(state, loss=float(loss), gradient=np.asarray(gradient))
    return state
