"""
Voice transforms: the inclusion of the Paley-Wiener space into L2(R) and the
box-window short-time Fourier transform U_g f(x, w) = int f(t) e^{-2 pi i w t} g(t - x) dt.

The torus variable of the reduced Heisenberg group is dropped; V_g f = j(U_g f)
carries no information beyond U_g f.
"""
import logging
from functools import lru_cache
from typing import Optional, Tuple

import numpy as np
from scipy import fft as sp_fft

from config import config
from convolve import twisted_conv
from discretize import CoefficientSequence, band_energy_ratio, coefficients
from errors import BandLimitError, PreconditionError, ResolutionError
from kernels import ShannonSetting, modulation_kernel, modulation_kernel_fourier
from models import MembershipReport
from pou import PartitionOfUnity, box_profile
from sampling import (
    Grid1D,
    Grid2D,
    SampledFunction1D,
    SampledFunction2D,
    fourier_transform_2d,
    lp_norm,
    translate,
)

logger = logging.getLogger(__name__)

MEMBERSHIP_THRESHOLD = 1e-2
# unit box window g = chi_[-1/2, 1/2]
WINDOW_HALFWIDTH = 0.5


def voice_shannon(f: SampledFunction1D, setting: ShannonSetting, tol: Optional[float] = None) -> SampledFunction1D:
    """
    The canonical inclusion: returns f once its energy beyond the guard band is below tol.

    Raises:
        BandLimitError: f is not band-limited to [-omega, omega]
    """
    threshold = config.BAND_ENERGY_TOL if tol is None else tol
    ratio = band_energy_ratio(f, setting.omega)
    if ratio > threshold:
        raise BandLimitError(ratio, threshold)
    return f


def box_window(grid: Grid1D) -> SampledFunction1D:
    """The unit box g sampled on grid, 1/2 on the edge samples"""
    return SampledFunction1D(grid, box_profile(grid.points, WINDOW_HALFWIDTH))


def _check_resolution(f_grid: Grid1D, grid: Grid2D) -> Tuple[int, int, int]:
    h = f_grid.spacing
    hop = f_grid.steps(grid.x_axis.spacing)
    f_grid.index_of(grid.x_axis.origin)
    if hop < 1:
        raise ResolutionError(f"x spacing {grid.x_axis.spacing} is finer than the signal spacing {h}")
    length = 1.0 / (h * grid.w_axis.spacing)
    n_fft = int(round(length))
    if abs(length - n_fft) > 1e-9 * length:
        raise ResolutionError(f"1 / (h_f h_w) = {length:.6g} is not an integer")
    window = 2 * f_grid.steps(WINDOW_HALFWIDTH)
    if n_fft < window + 1:
        raise ResolutionError(f"Frequency spacing {grid.w_axis.spacing} too coarse for the window")
    nyquist = 0.5 / h
    if grid.w_axis.halfwidth > nyquist * (1.0 + 1e-12):
        raise ResolutionError(f"Frequency range {grid.w_axis.halfwidth} exceeds the Nyquist limit {nyquist}")
    grid.w_axis.index_of(0.0)
    return hop, window, n_fft


def voice_modulation(f: SampledFunction1D, grid: Grid2D) -> SampledFunction2D:
    """
    U_g f on grid.

    For every x the segment f(x + s) g(s), s in [-1/2, 1/2] on f's grid, is transformed with an
    FFT of length N = 1 / (h_f h_w), so the FFT bins are exactly the grid frequencies.

    Raises:
        AlignmentError: x grid or window edges are off f's lattice
        ResolutionError: see _check_resolution
    """
    h = f.grid.spacing
    _, window, n_fft = _check_resolution(f.grid, grid)
    offsets = np.arange(window + 1) - window // 2
    taper = box_profile(offsets * h, WINDOW_HALFWIDTH)

    xs = grid.x_axis.points
    centers = np.array([f.grid.index_of(x) for x in xs])
    idx = centers[:, None] + offsets[None, :]
    valid = (idx >= 0) & (idx < f.grid.count)
    segments = np.where(valid, f.values[np.clip(idx, 0, f.grid.count - 1)], 0.0) * taper[None, :]

    spectrum = sp_fft.fft(segments, n_fft, axis=1)
    ws = grid.w_axis.points
    bins = np.rint(ws / grid.w_axis.spacing).astype(int) % n_fft
    # segment sample j sits at t = x - 1/2 + j h
    phase = np.exp(-2j * np.pi * np.outer(xs - WINDOW_HALFWIDTH, ws))
    return SampledFunction2D(grid, h * phase * spectrum[:, bins])


def reproducing_kernel_for(F: SampledFunction2D) -> SampledFunction2D:
    """K on |x| <= 1 and over twice F's omega range, at F's spacings"""
    return modulation_kernel(Grid2D(
        Grid1D.symmetric(1.0, F.grid.x_axis.spacing),
        Grid1D.symmetric(2.0 * F.grid.w_axis.halfwidth, F.grid.w_axis.spacing),
    ))


def omega_core(grid: Grid2D, fraction: float = 0.5) -> np.ndarray:
    """Mask of the omega samples with |w| <= fraction * W"""
    return np.abs(grid.w_axis.points) <= fraction * grid.w_axis.halfwidth + 1e-12


def relative_on_core(values: np.ndarray, reference: np.ndarray, core: np.ndarray) -> float:
    denom = np.linalg.norm(reference[:, core])
    if denom == 0:
        return 0.0
    return float(np.linalg.norm(values[:, core] - reference[:, core]) / denom)


def reproduction_residual(F: SampledFunction2D, threads: int = 1) -> float:
    """||F (.) K - F|| / ||F|| on |w| <= W/2"""
    reproduced = twisted_conv(F, reproducing_kernel_for(F), threads=threads)
    return relative_on_core(reproduced.values, F.values, omega_core(F.grid))


@lru_cache(maxsize=8)
def truncation_floor(grid: Grid2D) -> float:
    """Residual of K itself on grid: what cutting the omega integral at +-W costs an exact member"""
    return reproduction_residual(modulation_kernel(grid))


def reproducing_membership(F: SampledFunction2D, threshold: float = MEMBERSHIP_THRESHOLD,
                           threads: int = 1) -> MembershipReport:
    """
    Membership in the reproducing subspace: F is a member when its residual exceeds the
    truncation floor of the grid by at most threshold. The zero function is a member.
    """
    if not np.any(F.values):
        return MembershipReport(residual=0.0, threshold=threshold, member=True)
    residual = reproduction_residual(F, threads)
    floor = truncation_floor(F.grid)
    logger.debug("Membership residual %.3e, floor %.3e", residual, floor)
    return MembershipReport(residual=residual, threshold=threshold, floor=floor,
                            member=bool(residual - floor <= threshold))


def _x_transform(F: SampledFunction2D) -> Tuple[np.ndarray, np.ndarray]:
    """Fourier transform in x only, zero padded so the xi spacing equals the omega spacing"""
    gx, gw = F.grid.axes
    length = 1.0 / (gx.spacing * gw.spacing)
    n_fft = int(round(length))
    if abs(length - n_fft) > 1e-9 * length or n_fft < gx.count:
        raise ResolutionError("x and omega spacings must satisfy 1 / (h_x h_w) integer >= x count")
    xi = sp_fft.fftfreq(n_fft, d=gx.spacing)
    values = gx.spacing * np.exp(-2j * np.pi * gx.origin * xi)[:, None] * sp_fft.fft(F.values, n_fft, axis=0)
    return xi, values


def lem1_fourier_identity_check(F: SampledFunction2D, xi_max: float = 8.0, ratio_floor: float = 0.1,
                                check_membership: bool = True, threads: int = 1) -> Tuple[float, float]:
    """
    Factorization of a reproducing-subspace function in the mixed representation.

    F^(xi, eta) = sinc(xi) e^{2 pi i xi eta} G(eta) is equivalent to
    (F_x F)(xi, w) = sinc(xi) h(xi + w). h is fitted by least squares along each
    diagonal xi + w = const; returns (relative misfit, worst ratio error) where the
    ratio test compares (F_x F)(xi, s - xi) / (F_x F)(0, s) with sinc(xi) on
    |sinc(xi)| > ratio_floor and |h(s)| > ratio_floor * max |h|.

    Raises:
        PreconditionError: F is not in the reproducing subspace
    """
    if not np.any(F.values):
        return 0.0, 0.0
    if check_membership:
        report = reproducing_membership(F, threads=threads)
        if not report.member:
            raise PreconditionError(f"Not in the reproducing subspace: residual {report.residual:.3e}")

    xi, values = _x_transform(F)
    hw = F.grid.w_axis.spacing
    keep = np.abs(xi) <= xi_max + 1e-12
    xi, values = xi[keep], values[keep]
    xi_steps = np.rint(xi / hw).astype(int)
    w_steps = np.rint(F.grid.w_axis.points / hw).astype(int)
    diag = xi_steps[:, None] + w_steps[None, :]
    labels = diag - diag.min()

    s = np.broadcast_to(np.sinc(xi)[:, None], values.shape)
    numerator = np.bincount(labels.ravel(), weights=(s * values).real.ravel()) \
        + 1j * np.bincount(labels.ravel(), weights=(s * values).imag.ravel())
    denominator = np.bincount(labels.ravel(), weights=(s ** 2).ravel())
    h = np.where(denominator > 0, numerator / np.where(denominator > 0, denominator, 1.0), 0.0)
    fitted = s * h[labels]
    misfit = float(np.linalg.norm(values - fitted) / np.linalg.norm(values))

    zero_row = int(np.flatnonzero(xi_steps == 0)[0])
    reference = values[zero_row]
    strong = np.abs(reference) > ratio_floor * np.max(np.abs(reference))
    ratio_error = 0.0
    for row, x in enumerate(xi_steps):
        if abs(np.sinc(xi[row])) <= ratio_floor or x == 0:
            continue
        # (xi, s - xi) for the diagonal s of reference column k is column k - x
        cols = np.arange(len(w_steps)) - x
        ok = strong & (cols >= 0) & (cols < len(w_steps))
        if not np.any(ok):
            continue
        ratios = values[row, cols[ok]] / reference[ok]
        ratio_error = max(ratio_error, float(np.max(np.abs(ratios - np.sinc(xi[row])))))
    logger.debug("Factorization misfit %.3e, ratio error %.3e", misfit, ratio_error)
    return misfit, ratio_error


def fourier_oracle_grid() -> Grid2D:
    """x in [-2, 2] at 1/64, omega in [-32, 32] at 1/32"""
    return Grid2D.symmetric(2.0, 32.0, 1 / 64, 1 / 32)


def kernel_fourier_discrepancy(grid: Optional[Grid2D] = None, xi_max: float = 8.0,
                               jump_margin: float = 0.125) -> float:
    """
    max |FFT(K) - K^| over |xi| <= xi_max and ||eta| - 1/2| >= jump_margin.

    K^ jumps across eta = +-1/2, where omega truncation of the samples converges slowly.
    """
    grid = grid or fourier_oracle_grid()
    xi, eta, values = fourier_transform_2d(modulation_kernel(grid))
    XI, ETA = np.meshgrid(xi, eta, indexing="ij")
    region = (np.abs(XI) <= xi_max) & (np.abs(np.abs(ETA) - 0.5) >= jump_margin)
    exact = modulation_kernel_fourier(XI[region], ETA[region])
    return float(np.max(np.abs(values[region] - exact)))


def window_norm(f_grid: Grid1D) -> float:
    """||g||_2 under the same quadrature voice_modulation uses"""
    m = f_grid.steps(2 * WINDOW_HALFWIDTH)
    taper = box_profile((np.arange(m + 1) - m // 2) * f_grid.spacing, WINDOW_HALFWIDTH)
    return float(np.sqrt(np.sum(taper ** 2) * f_grid.spacing))


def full_period_grid(f_grid: Grid1D, x_halfwidth: float, x_spacing: float) -> Grid2D:
    """One whole FFT period of frequencies, -1/(2 h_f) <= w < 1/(2 h_f), so Parseval holds per x"""
    h = f_grid.spacing
    n_fft = 1 << int(np.ceil(np.log2(f_grid.steps(2 * WINDOW_HALFWIDTH) + 1)))
    spacing_w = 1.0 / (h * n_fft)
    w_axis = Grid1D(-(n_fft // 2) * spacing_w, spacing_w, n_fft)
    return Grid2D(Grid1D.symmetric(x_halfwidth, x_spacing), w_axis)


def isometry_defect(f: SampledFunction1D, grid: Grid2D) -> float:
    """| ||U_g f|| - ||f|| ||g|| | / (||f|| ||g||) with both norms by rectangle quadrature"""
    reference = lp_norm(f, 2) * window_norm(f.grid)
    if reference == 0:
        return 0.0
    return abs(lp_norm(voice_modulation(f, grid), 2) - reference) / reference


def covariance_defect(f: SampledFunction1D, grid: Grid2D, a: float) -> float:
    """Relative L2 defect of U_g(T_a f)(x, w) = e^{-2 pi i a w} U_g f(x - a, w)"""
    shifted = voice_modulation(translate(f, a), grid)
    expected = translate(voice_modulation(f, grid), (a, 0.0))
    _, W = grid.points
    expected = expected.values * np.exp(-2j * np.pi * a * W)
    denom = np.linalg.norm(expected)
    if denom == 0:
        return float(np.linalg.norm(shifted.values))
    return float(np.linalg.norm(shifted.values - expected) / denom)


def modulation_coefficients(f: SampledFunction1D, pou: PartitionOfUnity) -> CoefficientSequence:
    """Analysis in the modulation setting: <U_g f, phi_(k,l)> over the box partition's window"""
    return coefficients(voice_modulation(f, pou.window), pou)
