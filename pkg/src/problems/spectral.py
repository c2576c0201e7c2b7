"""
Fourier pseudo-spectral solver for the periodic Allen-Cahn equation

    u_t = eps * u_xx + a * (u - u^3)   on [-1, 1), periodic

Diffusion is treated exactly (ETDRK4) or implicitly (semi-implicit Euler),
the reaction term explicitly. Coefficients of ETDRK4 are evaluated by a
contour integral to avoid cancellation for small eigenvalues.
"""

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy import fft

# exceptions
from exceptions.ConfigurationException import ConfigurationException, UnknownNameError

# logger module
from logger.logger_module import ModuleLoger

logger = ModuleLoger(Path(__file__).stem)

SCHEMES = ("etdrk4", "imex-euler")
CONTOUR_POINTS = 32


@dataclass(frozen=True, eq=False)
class SpectralGrid:
    """Solution frames ``u[j, i] = u(x[i], t[j])``; x includes the periodic copy x = 1."""

    x: np.ndarray
    t: np.ndarray
    u: np.ndarray
    parameters: dict = field(default_factory=dict)

    @property
    def shape(self) -> tuple[int, int]:
        return self.u.shape


def allen_cahn_initial(x):
    return np.square(x) * np.cos(np.pi * x)


def _wavenumbers(resolution: int, length: float) -> np.ndarray:
    return 2.0 * np.pi * fft.rfftfreq(resolution, d=length / resolution)


def _etdrk4_coefficients(linear: np.ndarray, dt: float):
    roots = np.exp(1j * np.pi * (np.arange(1, CONTOUR_POINTS + 1) - 0.5) / CONTOUR_POINTS)
    lr = dt * linear[:, None] + roots[None, :]
    exp_lr = np.exp(lr)
    q = dt * np.real(np.mean((np.exp(lr / 2.0) - 1.0) / lr, axis=1))
    f1 = dt * np.real(np.mean((-4.0 - lr + exp_lr * (4.0 - 3.0 * lr + lr**2)) / lr**3, axis=1))
    f2 = dt * np.real(np.mean((2.0 + lr + exp_lr * (-2.0 + lr)) / lr**3, axis=1))
    f3 = dt * np.real(np.mean((-4.0 - 3.0 * lr - lr**2 + exp_lr * (4.0 - lr)) / lr**3, axis=1))
    return np.exp(dt * linear), np.exp(dt * linear / 2.0), q, f1, f2, f3


def spectral_reference(
    resolution: int = 512,
    timestep: float = 1e-4,
    n_frames: int = 201,
    t_final: float = 1.0,
    diffusion: float = 1e-4,
    reaction: float = 5.0,
    scheme: str = "etdrk4",
) -> SpectralGrid:
    if scheme not in SCHEMES:
        raise UnknownNameError(f"unknown time integrator '{scheme}', expected one of {SCHEMES}")
    if resolution < 4:
        raise ConfigurationException("spectral resolution must be at least 4")
    if resolution & (resolution - 1):
        logger.warning(f"resolution {resolution} is not a power of two; FFTs will be slower")
    n_steps = int(round(t_final / timestep))
    if n_frames < 2 or n_steps % (n_frames - 1):
        raise ConfigurationException(
            f"{n_steps} time steps cannot be split evenly into {n_frames - 1} frame intervals"
        )
    steps_per_frame = n_steps // (n_frames - 1)
    dt = t_final / n_steps

    length = 2.0
    x = -1.0 + length * np.arange(resolution) / resolution
    k = _wavenumbers(resolution, length)
    linear = -diffusion * k**2

    def nonlinear(v_hat):
        u = fft.irfft(v_hat, n=resolution)
        return fft.rfft(reaction * (u - u**3))

    u0 = allen_cahn_initial(x)
    frames = [u0]
    v = fft.rfft(u0)
    if scheme == "etdrk4":
        e, e2, q, f1, f2, f3 = _etdrk4_coefficients(linear, dt)

        def step(v):
            nv = nonlinear(v)
            a = e2 * v + q * nv
            na = nonlinear(a)
            b = e2 * v + q * na
            nb = nonlinear(b)
            c = e2 * a + q * (2.0 * nb - nv)
            nc = nonlinear(c)
            return e * v + nv * f1 + 2.0 * (na + nb) * f2 + nc * f3

    else:
        implicit = 1.0 / (1.0 - dt * linear)

        def step(v):
            return (v + dt * nonlinear(v)) * implicit

    for _ in range(n_frames - 1):
        for _ in range(steps_per_frame):
            v = step(v)
        frames.append(fft.irfft(v, n=resolution))

    u = np.stack(frames)
    # close the period: x = 1 duplicates x = -1
    u = np.concatenate([u, u[:, :1]], axis=1)
    x = np.append(x, 1.0)
    t = np.linspace(0.0, t_final, n_frames)
    parameters = {
        "resolution": resolution,
        "timestep": dt,
        "n_frames": n_frames,
        "t_final": t_final,
        "diffusion": diffusion,
        "reaction": reaction,
        "scheme": scheme,
    }
    logger.info(
        f"allen-cahn reference: {resolution} modes, {n_steps} {scheme} steps, "
        f"range [{u.min():.4f}, {u.max():.4f}]"
    )
    return SpectralGrid(x, t, u, parameters)


def spectral_second_derivative(u_periodic: np.ndarray, length: float = 2.0) -> np.ndarray:
    """u_xx of periodic samples along the last axis (without the duplicated end point)."""
    n = u_periodic.shape[-1]
    k = _wavenumbers(n, length)
    return fft.irfft(-(k**2) * fft.rfft(u_periodic, axis=-1), n=n, axis=-1)


def grid_residual_rms(grid: SpectralGrid, diffusion: float = 1e-4, reaction: float = 5.0) -> float:
    """RMS of u_t - eps u_xx - a (u - u^3) on interior frames.

    u_t by central differences between frames, u_xx spectrally.
    """
    u = grid.u[:, :-1]
    dt = np.diff(grid.t)
    u_t = (u[2:] - u[:-2]) / (dt[1:] + dt[:-1])[:, None]
    interior = u[1:-1]
    residual = u_t - diffusion * spectral_second_derivative(interior) - reaction * (interior - interior**3)
    return float(np.sqrt(np.mean(np.square(residual))))
