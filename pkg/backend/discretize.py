"""
The discretization operator J_phi F = sum_k <F, phi_k> L_{g_k} K, its coefficient map,
the explicit Shannon left inverse and finite-dimensional injectivity certificates.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy import fft as sp_fft
from scipy.signal import fftconvolve

from config import config
from convolve import conv1d, twisted_conv
from errors import (
    BandLimitError,
    GridMismatchError,
    IndexMismatchError,
    NumericalOverflowError,
    PreconditionError,
    RankDeficiencyError,
)
from kernels import (
    ModulationSetting,
    ShannonSetting,
    band_indicator,
    shannon_kernel,
    sinc_prime,
    twisted_translate_kernel,
)
from models import BoundReport, InjectivityCertificate, RatioReport
from pou import PartitionOfUnity, hat_fourier, hat_profile, make_pou_1d, make_pou_2d
from sampling import (
    Grid1D,
    Grid2D,
    SampledFunction,
    SampledFunction1D,
    SampledFunction2D,
    WeightFunction,
    apply_padded_multiplier,
    embed,
    fourier_transform,
    lp_norm,
    padded_grid,
)

logger = logging.getLogger(__name__)

CONDITION_LIMIT = 1e8
BAND_GUARD = 1.0
WIDE_HALFWIDTH = 4096.0


@dataclass(frozen=True, eq=False)
class CoefficientSequence:
    """Coefficients c_k indexed by lattice points tau * k"""
    indices: np.ndarray
    values: np.ndarray
    tau: float

    def __post_init__(self):
        indices = np.asarray(self.indices, dtype=int)
        if indices.ndim == 1:
            indices = indices[:, None]
        values = np.array(self.values, dtype=complex).ravel()
        if values.shape[0] != indices.shape[0]:
            raise IndexMismatchError(f"{values.shape[0]} values for {indices.shape[0]} lattice indices")
        if not np.all(np.isfinite(values)):
            raise NumericalOverflowError("Coefficient sequence has non-finite values")
        indices.setflags(write=False)
        values.setflags(write=False)
        object.__setattr__(self, "indices", indices)
        object.__setattr__(self, "values", values)

    @classmethod
    def zeros(cls, pou: PartitionOfUnity) -> "CoefficientSequence":
        return cls(pou.indices, np.zeros(len(pou)), pou.tau)

    @classmethod
    def unit(cls, pou: PartitionOfUnity, index: Sequence[int]) -> "CoefficientSequence":
        """e_k for the lattice index k"""
        hits = np.flatnonzero(np.all(pou.indices == np.asarray(index, dtype=int), axis=1))
        if hits.size == 0:
            raise IndexMismatchError(f"Lattice index {tuple(index)} not in the partition")
        values = np.zeros(len(pou))
        values[hits[0]] = 1.0
        return cls(pou.indices, values, pou.tau)

    @property
    def centers(self) -> np.ndarray:
        return self.tau * self.indices.astype(float)

    def __len__(self) -> int:
        return self.values.shape[0]

    def with_values(self, values: np.ndarray) -> "CoefficientSequence":
        return CoefficientSequence(self.indices, values, self.tau)

    def require_same_index(self, other_indices: np.ndarray) -> None:
        if self.indices.shape != np.shape(other_indices) or not np.array_equal(self.indices, other_indices):
            raise IndexMismatchError("Coefficient index set does not match")

    def __add__(self, other: "CoefficientSequence") -> "CoefficientSequence":
        self.require_same_index(other.indices)
        return self.with_values(self.values + other.values)

    def __sub__(self, other: "CoefficientSequence") -> "CoefficientSequence":
        self.require_same_index(other.indices)
        return self.with_values(self.values - other.values)

    def __mul__(self, scalar) -> "CoefficientSequence":
        return self.with_values(self.values * scalar)

    __rmul__ = __mul__

    def norm(self, p: float, m: Optional[WeightFunction] = None) -> float:
        """Weighted l_p norm (sum |c_k m(g_k)|^p)^(1/p)"""
        if not p >= 1:
            raise PreconditionError(f"Exponent must be >= 1, got {p}")
        weights = np.ones(len(self)) if m is None else np.asarray(m(*self.centers.T), dtype=float)
        magnitude = np.abs(self.values) * weights
        scale = float(np.max(magnitude)) if magnitude.size else 0.0
        if scale == 0.0 or np.isinf(p):
            return scale
        return scale * float(np.sum((magnitude / scale) ** p)) ** (1.0 / p)


@dataclass(frozen=True)
class FourierMultiplier:
    """sinc^-2(tau xi) on the closed band [-omega, omega], zero outside"""
    omega: float
    tau: float

    def __call__(self, xi: np.ndarray) -> np.ndarray:
        xi = np.asarray(xi, dtype=float)
        inside = np.abs(xi) <= self.omega * (1.0 + 1e-12)
        return np.where(inside, 1.0 / np.sinc(self.tau * np.where(inside, xi, 0.0)) ** 2, 0.0)


def shannon_multiplier(setting: ShannonSetting, tau: Optional[float] = None) -> FourierMultiplier:
    """
    Multiplier of the left inverse of J_phi for hat partitions of step tau <= 1/(2 omega).

    Raises:
        PreconditionError: tau above the Nyquist step (the coefficient map aliases)
    """
    tau = setting.default_lattice_step if tau is None else tau
    if tau > setting.default_lattice_step * (1.0 + 1e-12):
        raise PreconditionError(f"No left inverse for tau = {tau} > 1/(2 omega) = {setting.default_lattice_step}")
    return FourierMultiplier(omega=setting.omega, tau=tau)


def band_energy_ratio(F: SampledFunction1D, omega: float, guard: float = BAND_GUARD) -> float:
    """Fraction of the L2 energy at |xi| > omega (1 + guard)"""
    xi, spectrum = fourier_transform(F)
    energy = np.abs(spectrum) ** 2
    total = float(np.sum(energy))
    if total == 0.0:
        return 0.0
    return float(np.sum(energy[np.abs(xi) > omega * (1.0 + guard)]) / total)


def project_band(F: SampledFunction1D, omega: float) -> SampledFunction1D:
    """Fourier projection onto [-omega, omega] (edge bins weighted 1/2)"""
    return apply_padded_multiplier(F, lambda xi: band_indicator(xi, omega))


def shannon_left_inverse(G: SampledFunction1D, setting: ShannonSetting, tau: Optional[float] = None,
                         check_band: bool = True, tol: Optional[float] = None) -> SampledFunction1D:
    """
    F = F^-1[sinc^-2(tau xi) chi_[-omega, omega] G^], the left inverse of J_phi.

    Args:
        G: Band-limited input, typically J_phi F evaluated on a wide grid
        setting: Shannon setting
        tau: Lattice step of the hat partition (default 1/(2 omega))
        check_band: Reject inputs with energy above the band guard
        tol: Threshold on the out-of-band energy ratio (default BAND_ENERGY_TOL)

    Raises:
        BandLimitError: out-of-band energy above tol
    """
    multiplier = shannon_multiplier(setting, tau)
    if check_band:
        threshold = config.BAND_ENERGY_TOL if tol is None else tol
        ratio = band_energy_ratio(G, setting.omega)
        if ratio > threshold:
            raise BandLimitError(ratio, threshold)
    return apply_padded_multiplier(G, multiplier)


def _require_window(F: SampledFunction, pou: PartitionOfUnity) -> None:
    if type(F.grid) is not type(pou.window) or not F.grid.same_as(pou.window):
        raise GridMismatchError("Function and partition of unity live on different grids")


def _lattice_positions(grid: Grid1D, centers: np.ndarray) -> np.ndarray:
    return np.array([grid.index_of(float(c)) for c in centers], dtype=int)


def coefficients(F: SampledFunction, pou: PartitionOfUnity, method: str = "quadrature") -> CoefficientSequence:
    """
    c_k = <F, phi_k>.

    `quadrature` uses the rectangle rule on F's grid. `spectral` (1D only) evaluates
    (F * phi_tau)(g_k) with the exact hat transform after zero padding, which is exact
    for band-limited F.
    """
    _require_window(F, pou)
    if pou.dimension == 2:
        if method != "quadrature":
            raise PreconditionError(f"Method '{method}' is only available in 1D")
        values = [np.sum(F.values * pou.bump(i).values) * F.grid.cell for i in range(len(pou))]
        return CoefficientSequence(pou.indices, np.asarray(values), pou.tau)

    grid = F.grid
    positions = _lattice_positions(grid, pou.centers[:, 0])
    m = grid.steps(pou.tau)
    if method == "quadrature":
        hat = hat_profile(pou.tau, grid.spacing * np.arange(-m, m + 1))
        full = fftconvolve(F.values, hat) * grid.spacing
        values = full[positions + m]
    elif method == "spectral":
        smoothed = apply_padded_multiplier(F, lambda xi: hat_fourier(pou.tau, xi), pad_to=grid.count + 4 * m)
        values = smoothed.values[positions]
    else:
        raise PreconditionError(f"Unknown coefficient method '{method}'")
    return CoefficientSequence(pou.indices, values, pou.tau)


def smoothed_lattice_values(F: SampledFunction1D, omega: float, points: np.ndarray) -> np.ndarray:
    """
    F~(g) for F~^ = F^ sinc^2(xi / (2 omega)), by direct Fourier summation at arbitrary points.

    Uses the same zero-padded period as the spectral coefficients, so the sampling
    identity 2 omega <F, phi_k> = F~(g_k) holds to rounding.
    """
    m = F.grid.steps(1.0 / (2.0 * omega))
    padded = embed(F, padded_grid(F.grid, F.grid.count + 4 * m))
    xi, spectrum = fourier_transform(padded)
    weighted = spectrum * np.sinc(xi / (2.0 * omega)) ** 2
    dxi = 1.0 / (padded.grid.count * padded.grid.spacing)
    points = np.asarray(points, dtype=float)
    return np.array([np.sum(weighted * np.exp(2j * np.pi * g * xi)) * dxi for g in points])


def lattice_sum(c: CoefficientSequence, atom: SampledFunction1D, out_grid: Grid1D) -> SampledFunction1D:
    """
    sum_k c_k atom(x - g_k) on out_grid.

    The atom is sampled around its own center (grid containing 0); terms are cut where
    x - g_k leaves the atom's grid.

    Raises:
        AlignmentError: centers or out_grid off the atom's lattice
    """
    h = atom.grid.spacing
    if not np.isclose(out_grid.spacing, h, rtol=1e-12, atol=0):
        raise GridMismatchError("Output grid spacing differs from the atom spacing")
    centers = c.centers[:, 0]
    base = Grid1D(float(centers.min()), h, max(2, int(round((centers.max() - centers.min()) / h)) + 1))
    impulses = np.zeros(base.count, dtype=complex)
    np.add.at(impulses, _lattice_positions(base, centers), c.values)
    full = fftconvolve(impulses, atom.values)
    shift = base.steps(out_grid.origin - base.origin - atom.grid.origin)
    start, stop = shift, shift + out_grid.count
    out = np.zeros(out_grid.count, dtype=complex)
    lo, hi = max(start, 0), min(stop, full.size)
    if hi > lo:
        out[lo - start:hi - start] = full[lo:hi]
    return SampledFunction1D(out_grid, out)


def j_phi_apply(F: SampledFunction, pou: PartitionOfUnity, kernel: SampledFunction,
                out_grid: Optional[Grid1D] = None, method: str = "quadrature", threads: int = 1) -> SampledFunction:
    """
    J_phi F = sum_k <F, phi_k> L_{g_k} K.

    1D: the lattice sum with K sampled on a symmetric grid that must cover the span
    between the output grid and the centers. 2D: the impulse train of coefficients
    twisted-convolved with K, i.e. sum_k c_k e^{2 pi i k (l - w)} K(x - k, w - l).
    """
    c = coefficients(F, pou, method)
    if pou.dimension == 1:
        return lattice_sum(c, kernel, out_grid or F.grid)

    impulses = np.zeros(F.grid.shape, dtype=complex)
    for (gx, gw), value in zip(pou.centers, c.values):
        impulses[F.grid.x_axis.index_of(gx), F.grid.w_axis.index_of(gw)] += value / F.grid.cell
    return twisted_conv(SampledFunction2D(F.grid, impulses), kernel, threads=threads)


def _inverse_multiplier_kernel(setting: ShannonSetting, halfwidth: float, spacing: float) -> SampledFunction1D:
    """k = F^-1[(chi |phi^|)^-2] for the hat of step 1/(2 omega), sampled on [-halfwidth, halfwidth]"""
    grid = Grid1D.symmetric(halfwidth, spacing)
    tau = setting.default_lattice_step
    xi = grid.frequencies()
    inside = np.abs(xi) <= setting.omega * (1.0 + 1e-12)
    values = np.where(inside, 1.0 / hat_fourier(tau, np.where(inside, xi, 0.0)) ** 2, 0.0)
    phase = np.exp(2j * np.pi * grid.origin * xi)
    samples = sp_fft.ifft(values * phase) / spacing
    return SampledFunction1D(grid, samples)


def multiplier_constant(setting: ShannonSetting, points: int = 20001) -> float:
    """C = sup_[-omega, omega] |Re(phi^' conj phi^)| / |phi^|^4 by dense evaluation"""
    tau = setting.default_lattice_step
    xi = np.linspace(-setting.omega, setting.omega, points)
    phi = hat_fourier(tau, xi)
    dphi = 2.0 * tau * tau * np.sinc(tau * xi) * sinc_prime(tau * xi)
    return float(np.max(np.abs(dphi * phi) / phi ** 4))


def _analytic_bound(t: float, eps: np.ndarray, omega: float, constant: float) -> np.ndarray:
    first = 2.0 * eps * (omega ** 3 * np.pi ** 4 / 2.0) ** t
    second = 2.0 * (omega ** 2 * np.pi ** 2 / 2.0 + 2.0 * omega * constant / np.pi) ** t / (t - 1.0) * eps ** (1.0 - t)
    return first + second


def minimize_bound_epsilon(t: float, setting: ShannonSetting,
                           eps_grid: Optional[np.ndarray] = None) -> Tuple[float, float]:
    """Scan the analytic bound over eps in (0, 1) and return (argmin, min)"""
    if not t > 1:
        raise PreconditionError(f"t must exceed 1, got {t}")
    eps_grid = np.linspace(0.01, 0.99, 99) if eps_grid is None else np.asarray(eps_grid, dtype=float)
    values = _analytic_bound(t, eps_grid, setting.omega, multiplier_constant(setting))
    best = int(np.argmin(values))
    return float(eps_grid[best]), float(values[best])


def multiplier_lt_bound(t: float, eps: float, setting: ShannonSetting,
                        halfwidth: float = 1024.0, spacing: float = 1 / 16) -> BoundReport:
    """
    ||F^-1[(chi |phi^|)^-2]||_{L_t}^t by FFT against the split-integral bound
    2 eps (omega^3 pi^4 / 2)^t + 2 (omega^2 pi^2 / 2 + 2 omega C / pi)^t eps^(1-t) / (t - 1).
    """
    if not t > 1:
        raise PreconditionError(f"t must exceed 1, got {t}")
    if not 0 < eps < 1:
        raise PreconditionError(f"eps must lie in (0, 1), got {eps}")
    kernel = _inverse_multiplier_kernel(setting, halfwidth, spacing)
    numeric = lp_norm(kernel, t) ** t
    constant = multiplier_constant(setting)
    analytic = float(_analytic_bound(t, np.array([eps]), setting.omega, constant)[0])
    best_eps, best_value = minimize_bound_epsilon(t, setting)
    logger.info("Multiplier bound t=%s eps=%s: numeric %.6g, analytic %.6g", t, eps, numeric, analytic)
    return BoundReport(
        t=t,
        epsilon=eps,
        omega=setting.omega,
        numeric=numeric,
        analytic=analytic,
        constant_c=constant,
        best_epsilon=best_eps,
        best_analytic=best_value,
        passed=bool(numeric <= analytic),
    )


def left_inverse_lr_bound(eps: float, setting: ShannonSetting, family: Sequence[SampledFunction1D],
                          tol: float = 0.05, halfwidth: float = 1024.0, spacing: float = 1 / 16) -> RatioReport:
    """
    ||J^-1 G||_r <= (1/(2 omega)) ||k||_t ||phi||_1 ||G||_q with t = q = 1 + eps, r = (1 + eps)/(1 - eps).

    Inputs are projected onto the band first; the worst ratio over the family is reported.
    """
    if not 0 < eps < 1:
        raise PreconditionError(f"eps must lie in (0, 1), got {eps}")
    t = q = 1.0 + eps
    r = (1.0 + eps) / (1.0 - eps)
    k_norm = lp_norm(_inverse_multiplier_kernel(setting, halfwidth, spacing), t)
    phi_norm = setting.default_lattice_step  # integral of the hat

    worst, lhs_at, rhs_at = 0.0, 0.0, 0.0
    for G in family:
        band = project_band(G, setting.omega)
        lhs = lp_norm(shannon_left_inverse(band, setting, check_band=False), r)
        rhs = k_norm * phi_norm * lp_norm(band, q) / (2.0 * setting.omega)
        if rhs > 0 and lhs / rhs >= worst:
            worst, lhs_at, rhs_at = lhs / rhs, lhs, rhs
    return RatioReport(
        name="left_inverse_lr",
        lhs=lhs_at,
        rhs=rhs_at,
        ratio=worst,
        bound=1.0 + tol,
        details={"t": t, "q": q, "r": r, "k_norm": k_norm},
        passed=bool(worst <= 1.0 + tol),
    )


def _core_error(values: np.ndarray, reference: np.ndarray, grid: Grid1D, core_fraction: float) -> Tuple[float, float]:
    core = np.abs(grid.points) <= core_fraction * grid.halfwidth + 1e-12
    return float(np.linalg.norm(values[core] - reference[core])), float(np.linalg.norm(reference[core]))


def _family_report(name: str, pairs: Sequence[Tuple[float, float]], bound: float,
                   details: Optional[dict] = None) -> RatioReport:
    """Worst lhs / rhs over the family (a vanishing rhs counts as zero)"""
    worst, lhs_at, rhs_at = 0.0, 0.0, 0.0
    for lhs, rhs in pairs:
        ratio = 0.0 if rhs == 0 else lhs / rhs
        if ratio >= worst:
            worst, lhs_at, rhs_at = ratio, lhs, rhs
    return RatioReport(name=name, lhs=lhs_at, rhs=rhs_at, ratio=worst, bound=bound,
                       details=details or {}, passed=bool(worst < bound))


def j_phi_closed_form_check(family: Sequence[SampledFunction1D], pou: PartitionOfUnity, setting: ShannonSetting,
                            tol: Optional[float] = None, core_fraction: float = 0.5) -> RatioReport:
    """Relative L2 distance between the lattice sum J_phi F and (1/tau)(F * phi_tau) on the interior"""
    shannon_multiplier(setting, pou.tau)
    window = pou.window
    kernel = shannon_kernel(setting, Grid1D.symmetric(2.0 * window.halfwidth, window.spacing))
    hat_grid = Grid1D.symmetric(pou.tau, window.spacing)
    hat = SampledFunction1D(hat_grid, hat_profile(pou.tau, hat_grid.points))
    pairs = []
    for F in family:
        lattice = j_phi_apply(F, pou, kernel)
        closed = conv1d(F, hat) * (1.0 / pou.tau)
        pairs.append(_core_error(lattice.values, closed.values, window, core_fraction))
    return _family_report("j_phi_closed_form", pairs, config.JPHI_TOL if tol is None else tol)


def left_inverse_check(family: Sequence[SampledFunction1D], pou: PartitionOfUnity, setting: ShannonSetting,
                       tol: Optional[float] = None, wide_halfwidth: float = WIDE_HALFWIDTH,
                       core_fraction: float = 0.5) -> RatioReport:
    """
    ||J_phi^-1 J_phi F - F|| / ||F|| on the interior.

    J_phi F is a finite sum of kernel translates with spectral coefficients; it is evaluated
    on a wide grid so the band check sees its full spectrum.
    """
    window = pou.window
    wide = Grid1D.symmetric(max(wide_halfwidth, window.halfwidth), window.spacing)
    kernel = shannon_kernel(setting, Grid1D.symmetric(wide.halfwidth + window.halfwidth, window.spacing))
    pairs = []
    for F in family:
        recovered = shannon_left_inverse(j_phi_apply(F, pou, kernel, out_grid=wide, method="spectral"),
                                         setting, pou.tau)
        pairs.append(_core_error(embed(recovered, window).values, F.values, window, core_fraction))
    return _family_report("left_inverse", pairs, config.JPHI_TOL if tol is None else tol,
                          {"wide_halfwidth": wide.halfwidth})


def sampling_identity_check(family: Sequence[SampledFunction1D], setting: ShannonSetting, window: Grid1D,
                            tol: Optional[float] = None) -> RatioReport:
    """max_k |2 omega <F, phi_k> - F~(k / (2 omega))| against ||F||_2, both sides spectral"""
    pou = make_pou_1d(setting.default_lattice_step, window)
    pairs = []
    for F in family:
        c = coefficients(F, pou, method="spectral")
        smoothed = smoothed_lattice_values(F, setting.omega, pou.centers[:, 0])
        pairs.append((float(np.max(np.abs(2.0 * setting.omega * c.values - smoothed))), lp_norm(F, 2)))
    return _family_report("sampling_identity", pairs, config.SAMPLING_TOL if tol is None else tol)


def _singular_values(M: np.ndarray) -> np.ndarray:
    return np.linalg.svd(M, compute_uv=False)


def shannon_trial_basis(grid: Grid1D, setting: ShannonSetting, band_dim: int) -> List[SampledFunction1D]:
    """Orthonormal sinc translates K(x - j/(2 omega)) / sqrt(2 omega), j = -d/2 .. d/2 - 1"""
    step = setting.default_lattice_step
    scale = 1.0 / np.sqrt(2.0 * setting.omega)
    return [
        SampledFunction1D(grid, scale * 2.0 * setting.omega * np.sinc(2.0 * setting.omega * (grid.points - j * step)))
        for j in range(-band_dim // 2, band_dim - band_dim // 2)
    ]


def injectivity_certificate_shannon(pou: PartitionOfUnity, setting: ShannonSetting, band_dim: int = 64,
                                    tolerance: float = 1e-8, threads: int = 1) -> InjectivityCertificate:
    """
    Smallest singular value of a -> {<sum_j a_j s_j, phi_k>}_k for the orthonormal trial basis s_j.

    Columns are assembled in parallel and stacked in index order.
    """
    if band_dim < 1:
        raise PreconditionError(f"band_dim must be >= 1, got {band_dim}")
    basis = shannon_trial_basis(pou.window, setting, band_dim)

    def column(s: SampledFunction1D) -> np.ndarray:
        return coefficients(s, pou).values

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            columns = list(pool.map(column, basis))
    else:
        columns = [column(s) for s in basis]
    sigma = _singular_values(np.stack(columns, axis=1))
    logger.info("Shannon certificate tau=%s d=%d: sigma_min=%.4g", pou.tau, band_dim, sigma[-1])
    return InjectivityCertificate(
        setting="shannon",
        rows=len(pou),
        cols=band_dim,
        sigma_min=float(sigma[-1]),
        sigma_max=float(sigma[0]),
        tolerance=tolerance,
        spacing=pou.window.spacing,
        halfwidth=pou.window.halfwidth,
        tau=pou.tau,
        passed=bool(sigma[-1] > tolerance),
    )


def modulation_trial_basis(grid: Grid2D, basis_radius: int = 2) -> List[SampledFunction2D]:
    """Twisted translates of K at (a, b) in {-R..R}^2, a outer"""
    span = range(-basis_radius, basis_radius + 1)
    return [twisted_translate_kernel(grid, a, b) for a in span for b in span]


def injectivity_certificate_modulation(setting: ModulationSetting, basis_radius: int = 2,
                                       halfwidth: float = 4.5, spacing: float = 1 / 16,
                                       tolerance: float = 1e-8) -> InjectivityCertificate:
    """
    sigma_min of M[(k, l), j] = <B_j, phi_(k,l)> over the box lattice |k|, |l| <= R.

    The twisted translates are orthonormalized by QR under the quadrature weights.

    Raises:
        RankDeficiencyError: condition number of the basis above CONDITION_LIMIT
    """
    if basis_radius < 0:
        raise PreconditionError(f"basis_radius must be >= 0, got {basis_radius}")
    grid = Grid2D.symmetric(halfwidth, halfwidth, spacing)
    basis = modulation_trial_basis(grid, basis_radius)
    weight = np.sqrt(grid.cell)
    B = np.stack([b.values.ravel() for b in basis], axis=1) * weight
    _, R = np.linalg.qr(B)
    condition = float(np.linalg.cond(R))
    if not np.isfinite(condition) or condition > CONDITION_LIMIT:
        raise RankDeficiencyError(condition, CONDITION_LIMIT)
    orthonormal = np.linalg.solve(R.T, B.T).T / weight

    pou = make_pou_2d(grid, radius=setting.radius)
    bumps = np.stack([pou.bump(i).values.real.ravel() for i in range(len(pou))], axis=0)
    M = bumps @ orthonormal * grid.cell
    sigma = _singular_values(M)
    logger.info("Modulation certificate R=%d, basis %d: sigma_min=%.4g", setting.radius, len(basis), sigma[-1])
    return InjectivityCertificate(
        setting="modulation",
        rows=len(pou),
        cols=len(basis),
        sigma_min=float(sigma[-1]),
        sigma_max=float(sigma[0]),
        tolerance=tolerance,
        spacing=spacing,
        halfwidth=halfwidth,
        radius=setting.radius,
        passed=bool(sigma[-1] > tolerance),
    )
