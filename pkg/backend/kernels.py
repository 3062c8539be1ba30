"""
Closed-form reproducing kernels for the two settings.

Shannon (band [-omega, omega]): K(b) = 2 omega sinc(2 omega b) with the normalized
sinc(x) = sin(pi x) / (pi x). `shannon_kernel_derivative` works in the unnormalized
convention sin(x) / x; `shannon_kernel_nth_derivative` does the chain-rule rescaling.

Modulation (box window g = chi_[-1/2, 1/2]): K = U_g g, i.e.
K(x, omega) = exp(-pi i x omega) (1 - |x|) sinc((1 - |x|) omega) on |x| <= 1, zero outside,
with Fourier transform chi_[-1/2, 1/2](eta) sinc(xi) exp(2 pi i eta xi).
"""
import logging
from dataclasses import dataclass
from math import factorial
from typing import Union

import numpy as np

from errors import PreconditionError
from sampling import Grid1D, Grid2D, SampledFunction1D, SampledFunction2D

logger = logging.getLogger(__name__)

TAYLOR_RADIUS = 1e-3

ArrayLike = Union[float, np.ndarray]


@dataclass(frozen=True)
class ShannonSetting:
    """Paley-Wiener space of functions band-limited to [-omega, omega]"""
    omega: float

    def __post_init__(self):
        if not self.omega > 0:
            raise PreconditionError(f"omega must be positive, got {self.omega}")

    @property
    def default_lattice_step(self) -> float:
        return 1.0 / (2.0 * self.omega)


@dataclass(frozen=True)
class ModulationSetting:
    """Box window on the unit lattice Z^2 truncated to |k|, |l| <= radius"""
    radius: int = 4
    q_halfwidth: float = 0.5

    def __post_init__(self):
        if self.radius < 1:
            raise PreconditionError(f"Lattice radius must be >= 1, got {self.radius}")

    def lattice(self) -> np.ndarray:
        """Lattice points (k, l), k outer, as an array of shape (n, 2)"""
        idx = np.arange(-self.radius, self.radius + 1)
        K, L = np.meshgrid(idx, idx, indexing="ij")
        return np.stack([K.ravel(), L.ravel()], axis=1)


def band_indicator(xi: np.ndarray, omega: float) -> np.ndarray:
    """chi_[-omega, omega] with value 1/2 on the band edges"""
    xi = np.abs(np.asarray(xi, dtype=float))
    edge = np.isclose(xi, omega, rtol=1e-12, atol=1e-12)
    return np.where(edge, 0.5, (xi < omega).astype(float))


def shannon_kernel_values(omega: float, x: ArrayLike) -> np.ndarray:
    return 2.0 * omega * np.sinc(2.0 * omega * np.asarray(x, dtype=float))


def shannon_kernel(setting: ShannonSetting, grid: Grid1D) -> SampledFunction1D:
    """Samples of K(b) = 2 omega sinc(2 omega b)"""
    return SampledFunction1D(grid, shannon_kernel_values(setting.omega, grid.points))


def _sin_derivative(k: int, x: np.ndarray) -> np.ndarray:
    return np.sin(x + k * np.pi / 2)


def _taylor_sinc_derivative(n: int, x: np.ndarray) -> np.ndarray:
    # sin(x)/x = sum_j (-1)^j x^(2j) / (2j+1)!, differentiated termwise
    total = np.zeros_like(x)
    for j in range((n + 1) // 2, (n + 8) // 2 + 2):
        power = 2 * j - n
        coeff = (-1) ** j * factorial(2 * j) / (factorial(2 * j + 1) * factorial(power))
        total = total + coeff * x ** power
    return total


def shannon_kernel_derivative(n: int, x: ArrayLike) -> np.ndarray:
    """
    n-th derivative of the unnormalized sinc, sin(x) / x.

    Uses x^(-n) sum_{k=0}^{n} n!/k! (-1)^(n-k) sin^(k)(x) x^(k-1) away from zero and
    the Taylor series to order n + 8 for |x| < TAYLOR_RADIUS.
    """
    if n < 0:
        raise PreconditionError(f"Derivative order must be >= 0, got {n}")
    x = np.asarray(x, dtype=float)
    small = np.abs(x) < TAYLOR_RADIUS
    safe = np.where(small, 1.0, x)

    closed = np.zeros_like(safe)
    for k in range(n + 1):
        closed = closed + (factorial(n) / factorial(k)) * (-1) ** (n - k) * _sin_derivative(k, safe) * safe ** (k - 1)
    closed = closed / safe ** n

    result = np.where(small, _taylor_sinc_derivative(n, np.where(small, x, 0.0)), closed)
    return result if result.ndim else float(result)


def shannon_kernel_nth_derivative(setting: ShannonSetting, n: int, b: ArrayLike) -> np.ndarray:
    """d^n/db^n of K(b) = 2 omega sin(2 pi omega b) / (2 pi omega b)"""
    scale = 2.0 * np.pi * setting.omega
    return 2.0 * setting.omega * scale ** n * shannon_kernel_derivative(n, scale * np.asarray(b, dtype=float))


def sinc_prime(u: ArrayLike) -> np.ndarray:
    """Derivative of the normalized sinc"""
    u = np.asarray(u, dtype=float)
    return np.pi * shannon_kernel_derivative(1, np.pi * u)


def modulation_kernel_values(x: ArrayLike, w: ArrayLike) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    w = np.asarray(w, dtype=float)
    s = np.clip(1.0 - np.abs(x), 0.0, None)
    return np.exp(-1j * np.pi * x * w) * s * np.sinc(s * w)


def modulation_kernel(grid: Grid2D) -> SampledFunction2D:
    """Samples of K = U_g g for the unit box window"""
    X, W = grid.points
    return SampledFunction2D(grid, modulation_kernel_values(X, W))


def twisted_translate_kernel(grid: Grid2D, a: float, b: float) -> SampledFunction2D:
    """Closed-form e^{2 pi i a (b - omega)} K(x - a, omega - b), the voice transform of M_b T_a g"""
    X, W = grid.points
    return SampledFunction2D(grid, np.exp(2j * np.pi * a * (b - W)) * modulation_kernel_values(X - a, W - b))


def modulation_kernel_fourier(xi: ArrayLike, eta: ArrayLike) -> np.ndarray:
    """K^(xi, eta) = chi_[-1/2, 1/2](eta) sinc(xi) e^{2 pi i eta xi}"""
    xi = np.asarray(xi, dtype=float)
    eta = np.asarray(eta, dtype=float)
    return band_indicator(eta, 0.5) * np.sinc(xi) * np.exp(2j * np.pi * eta * xi)


def modulation_kernel_x_derivative_values(x: ArrayLike, w: ArrayLike) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    w = np.asarray(w, dtype=float)
    s = np.clip(1.0 - np.abs(x), 0.0, None)
    phase = np.exp(-1j * np.pi * x * w)
    # s sinc(s w) = sin(pi s w) / (pi w); its x-derivative is -sign(x) cos(pi s w)
    inner = -1j * np.pi * w * s * np.sinc(s * w) - np.sign(x) * np.cos(np.pi * s * w)
    values = np.where(np.abs(x) < 1.0, phase * inner, 0.0)
    # one-sided average on the outer kink lines
    return np.where(np.isclose(np.abs(x), 1.0, rtol=0, atol=1e-12), 0.5 * phase * inner, values)


def modulation_kernel_x_derivative(grid: Grid2D) -> SampledFunction2D:
    """Weak x-derivative of the modulation kernel; kinks at x = -1, 0, 1 take one-sided averages"""
    X, W = grid.points
    return SampledFunction2D(grid, modulation_kernel_x_derivative_values(X, W))


def modulation_kernel_omega_derivative_values(x: ArrayLike, w: ArrayLike) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    w = np.asarray(w, dtype=float)
    s = np.clip(1.0 - np.abs(x), 0.0, None)
    phase = np.exp(-1j * np.pi * x * w)
    return -1j * np.pi * x * modulation_kernel_values(x, w) + phase * s ** 2 * sinc_prime(s * w)


def modulation_kernel_omega_derivative(grid: Grid2D) -> SampledFunction2D:
    X, W = grid.points
    return SampledFunction2D(grid, modulation_kernel_omega_derivative_values(X, W))


def symmetry_defect(grid: Grid2D) -> float:
    """max |conj K(x, omega) - e^{2 pi i x omega} K(-x, -omega)| over the grid"""
    X, W = grid.points
    lhs = np.conj(modulation_kernel_values(X, W))
    rhs = np.exp(2j * np.pi * X * W) * modulation_kernel_values(-X, -W)
    return float(np.max(np.abs(lhs - rhs)))

