from dataclasses import dataclass, replace

import numpy as np

# configuration objects
from core.config import ADAM_SETTINGS


@dataclass(frozen=True, eq=False)
class AdamState:
    params: np.ndarray
    m: np.ndarray
    v: np.ndarray
    step: int = 0


def adam_init(params: np.ndarray) -> AdamState:
    params = np.array(params, dtype=np.float64)
    return AdamState(params, np.zeros_like(params), np.zeros_like(params))


def adam_step(
    state: AdamState,
    gradient: np.ndarray,
    lr: float = ADAM_SETTINGS.lr,
    beta1: float = ADAM_SETTINGS.beta1,
    beta2: float = ADAM_SETTINGS.beta2,
    eps: float = ADAM_SETTINGS.eps,
) -> AdamState:
    """One bias-corrected Adam update."""
    step = state.step + 1
    m = beta1 * state.m + (1.0 - beta1) * gradient
    v = beta2 * state.v + (1.0 - beta2) * np.square(gradient)
    m_hat = m / (1.0 - beta1**step)
    v_hat = v / (1.0 - beta2**step)
    params = state.params - lr * m_hat / (np.sqrt(v_hat) + eps)
    return replace(state, params=params, m=m, v=v, step=step)
