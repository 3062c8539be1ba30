"""Q-oscillation, window-growth finiteness verdicts and smoothness/derivative checks."""
import logging
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple

import numpy as np

from config import config
from convolve import conv1d, twisted_conv
from discretize import j_phi_apply
from errors import PreconditionError
from kernels import (
    ShannonSetting,
    modulation_kernel,
    modulation_kernel_values,
    modulation_kernel_x_derivative,
    shannon_kernel_nth_derivative,
    sinc_prime,
)
from models import DerivativeReport, MixedSmoothnessReport, OscReport, OscRow, OscVerdict, RatioReport
from pou import PartitionOfUnity
from sampling import (
    Grid1D,
    Grid2D,
    SampledFunction,
    SampledFunction1D,
    SampledFunction2D,
    WeightFunction,
    apply_padded_multiplier,
    embed,
    lp_norm,
    translate,
)
from voice import MEMBERSHIP_THRESHOLD, omega_core, relative_on_core, reproducing_kernel_for, reproducing_membership
from weights import WeightPair

logger = logging.getLogger(__name__)

Box = Sequence[Tuple[float, float]]

# stencil half-width and step of the finite-difference oracle
FD_RADIUS = 4
FD_STEP = 0.02


def _box_offsets(F: SampledFunction, Q: Box) -> List[Tuple[float, ...]]:
    axes = (F.grid,) if isinstance(F.grid, Grid1D) else F.grid.axes
    if len(Q) != len(axes):
        raise PreconditionError(f"Box {Q} does not match the grid dimension")
    per_axis = []
    for (lo, hi), axis in zip(Q, axes):
        if hi < lo:
            raise PreconditionError(f"Empty box side [{lo}, {hi}]")
        a, b = axis.steps(lo), axis.steps(hi)
        per_axis.append([k * axis.spacing for k in range(a, b + 1)])
    mesh = np.meshgrid(*per_axis, indexing="ij")
    return list(zip(*(m.ravel() for m in mesh)))


def osc_q(F: SampledFunction, Q: Box) -> SampledFunction:
    """
    osc_Q(F)(g) = max over grid points q in Q of |F(g + q) - F(g)|, with F = 0 outside the window.

    Raises:
        AlignmentError: box edges are not multiples of the spacing
    """
    result = np.zeros(F.grid.shape)
    for offset in _box_offsets(F, Q):
        shift = -offset[0] if len(offset) == 1 else tuple(-o for o in offset)
        moved = translate(F, shift).values
        np.maximum(result, np.abs(moved - F.values), out=result)
    return F.with_values(result)


def _crop(F: SampledFunction1D, halfwidth: float) -> SampledFunction1D:
    return embed(F, Grid1D.symmetric(halfwidth, F.grid.spacing))


def decay_verdict(norms: Sequence[float], factor: float) -> Tuple[bool, Optional[float]]:
    """
    Finite iff the last two window increments shrink by at least `factor`
    (or the last increment is negligible against the norm).
    """
    if len(norms) < 3:
        raise PreconditionError("Need at least three windows for a decay verdict")
    d_prev = norms[-2] - norms[-3]
    d_last = norms[-1] - norms[-2]
    if abs(d_last) <= 1e-12 * max(abs(norms[-1]), 1e-300):
        return True, None
    ratio = d_prev / d_last
    return bool(ratio >= factor), float(ratio)


def osc_norm_scan(F: SampledFunction1D, Q: Box, exponents: Sequence[float], windows: Sequence[float],
                  weight: Optional[WeightFunction] = None, target: str = "F",
                  decay_factor: Optional[float] = None) -> OscReport:
    """
    ||osc_Q F||_{L_{p,w}[-L, L]} for every (p, L), with a finiteness verdict per p.

    The oscillation is taken once on F's full window; windows must increase and fit in it.
    """
    windows = [float(L) for L in windows]
    if any(b <= a for a, b in zip(windows, windows[1:])):
        raise PreconditionError(f"Windows must increase, got {windows}")
    if windows and windows[-1] > F.grid.halfwidth + 1e-12:
        raise PreconditionError(f"Window {windows[-1]} exceeds the sampled range {F.grid.halfwidth}")
    factor = config.DECAY_FACTOR if decay_factor is None else decay_factor

    oscillation = osc_q(F, Q)
    rows, verdicts = [], []
    for p in exponents:
        norms = [lp_norm(_crop(oscillation, L), p, weight) for L in windows]
        rows.extend(OscRow(p=p, L=L, norm=n) for L, n in zip(windows, norms))
        finite, ratio = decay_verdict(norms, factor)
        verdicts.append(OscVerdict(p=p, finite=finite, expected_finite=bool(p > 1), decay_ratio=ratio))
        logger.debug("osc scan %s p=%s: norms %s, ratio %s", target, p, norms, ratio)

    return OscReport(
        target=target,
        q_box=[float(v) for side in Q for v in side],
        weight=getattr(weight, "name", "const"),
        exponents=[float(p) for p in exponents],
        windows=windows,
        rows=rows,
        verdicts=verdicts,
        passed=all(v.finite == v.expected_finite for v in verdicts),
    )


def spectral_derivative(F: SampledFunction1D, n: int = 1) -> SampledFunction1D:
    """n-th derivative through the multiplier (2 pi i xi)^n after zero padding"""
    return apply_padded_multiplier(F, lambda xi: (2j * np.pi * xi) ** n)


def sobolev_domination_check(F: SampledFunction1D, Q: Box, p: float,
                             weight: Optional[WeightFunction] = None) -> RatioReport:
    """
    LHS = int sup_{u in Q} |F(x + u)|^p w(x)^p dx against
    RHS = (int_Q w(-u)^p du) * sum_{n <= 2} ||F^(n)||_{L_{p,w}}^p; the ratio is the empirical embedding constant.
    """
    if not p >= 1:
        raise PreconditionError(f"Exponent must be >= 1, got {p}")
    local_sup = np.zeros(F.grid.shape)
    for (u,) in _box_offsets(F, Q):
        np.maximum(local_sup, np.abs(translate(F, -u).values), out=local_sup)
    lhs = lp_norm(F.with_values(local_sup), p, weight) ** p

    u = F.grid.spacing * np.arange(F.grid.steps(Q[0][0]), F.grid.steps(Q[0][1]) + 1)
    w_q = np.ones_like(u) if weight is None else np.asarray(weight(-u), dtype=float)
    q_measure = float(np.trapezoid(w_q ** p, u))
    derivatives = [F, spectral_derivative(F, 1), spectral_derivative(F, 2)]
    rhs = q_measure * sum(lp_norm(D, p, weight) ** p for D in derivatives)

    ratio = 0.0 if lhs == 0 else lhs / rhs
    return RatioReport(
        name="sobolev_domination",
        lhs=lhs,
        rhs=rhs,
        ratio=ratio,
        bound=float("inf"),
        details={"p": p, "q_measure": q_measure},
        passed=bool(np.isfinite(ratio)),
    )


def _staggered_x_kernel(F: SampledFunction2D) -> SampledFunction2D:
    """dK/dx on x = +-(j + 1/2) h_x, |x| <= 1 + h_x, and omega over twice F's omega range"""
    hx, hw = F.grid.x_axis.spacing, F.grid.w_axis.spacing
    m = F.grid.x_axis.steps(1.0) + 1
    x_axis = Grid1D(-(m + 0.5) * hx, hx, 2 * m + 2)
    w_axis = Grid1D.symmetric(2.0 * F.grid.w_axis.halfwidth, hw)
    return modulation_kernel_x_derivative(Grid2D(x_axis, w_axis))


def _derivative_discrepancies(F: SampledFunction2D, threads: int = 1) -> Tuple[float, float]:
    """(staggered dF/dx vs F (.) dK/dx, ||(dF/dw) (.) K - dF/dw|| / ||dF/dw||) on the omega core"""
    hx, hw = F.grid.x_axis.spacing, F.grid.w_axis.spacing
    dx = np.diff(F.values, axis=0) / hx
    dw = np.gradient(F.values, hw, axis=1)
    core = omega_core(F.grid)
    via_kernel = twisted_conv(F, _staggered_x_kernel(F), threads=threads).values[:-1]
    reproduced_dw = twisted_conv(F.with_values(dw), reproducing_kernel_for(F), threads=threads).values
    return relative_on_core(via_kernel, dx, core), relative_on_core(reproduced_dw, dw, core)


@lru_cache(maxsize=8)
def _kernel_floors(grid: Grid2D) -> Tuple[float, float]:
    return _derivative_discrepancies(modulation_kernel(grid))


def mixed_smoothness_check(F: SampledFunction2D, exponents: Sequence[float] = (1.5, 2.0, 4.0),
                           tol: Optional[float] = None, threads: int = 1,
                           membership_threshold: float = MEMBERSHIP_THRESHOLD) -> MixedSmoothnessReport:
    """
    dF/dx two ways (staggered differences against F (.) dK/dx at the same midpoints),
    the lemma (dF/dw) (.) K = dF/dw, and the S^1_p W norms on the sampled window.

    Both cross-checks are judged by their excess over the same measures for K on F's grid.

    Raises:
        PreconditionError: F is not in the reproducing subspace
    """
    tol = config.MIXED_SMOOTHNESS_TOL if tol is None else tol
    membership = reproducing_membership(F, membership_threshold, threads=threads)
    if not membership.member:
        raise PreconditionError(f"Not in the reproducing subspace: residual {membership.residual:.3e}")

    hx, hw = F.grid.x_axis.spacing, F.grid.w_axis.spacing
    dx = np.diff(F.values, axis=0) / hx
    dw = np.gradient(F.values, hw, axis=1)
    dxw = np.gradient(dx, hw, axis=1)

    if np.any(F.values):
        dx_discrepancy, domega_residual = _derivative_discrepancies(F, threads)
        dx_floor, domega_floor = _kernel_floors(F.grid)
    else:
        dx_discrepancy = domega_residual = dx_floor = domega_floor = 0.0

    mid_grid = Grid2D(Grid1D(F.grid.x_axis.origin + 0.5 * hx, hx, F.grid.x_axis.count - 1), F.grid.w_axis)
    pieces = {
        "F": F,
        "dx": SampledFunction2D(mid_grid, dx),
        "dw": F.with_values(dw),
        "dxw": SampledFunction2D(mid_grid, dxw),
    }
    norms = {f"{p:g}": {name: lp_norm(G, p) for name, G in pieces.items()} for p in exponents}
    all_finite = all(np.isfinite(v) for row in norms.values() for v in row.values())
    logger.info("Mixed smoothness: dx discrepancy %.3e, d_omega residual %.3e", dx_discrepancy, domega_residual)
    return MixedSmoothnessReport(
        dx_discrepancy=dx_discrepancy,
        domega_residual=domega_residual,
        dx_floor=dx_floor,
        domega_floor=domega_floor,
        norms=norms,
        all_finite=all_finite,
        tolerance=tol,
        passed=bool(dx_discrepancy - dx_floor <= tol
                    and domega_residual - domega_floor <= config.MODULATION_TOL
                    and all_finite),
    )


def continuity_estimate_check(F: SampledFunction1D, pou: PartitionOfUnity, kernel: SampledFunction1D,
                              p: float, q: float, r: float, pair: WeightPair,
                              core_fraction: float = 0.5, tol: float = 0.05) -> RatioReport:
    """
    Pointwise |F - J_phi F| <= |F| * osc_Q(K) + 5e-3 max|F| with Q = [-tau, tau], and
    ||F - J_phi F||_{r,m} <= C ||F||_{p,m} ||osc_Q K||_{q,w}, both on the interior core.
    """
    if abs(1.0 + (0.0 if np.isinf(r) else 1.0 / r) - 1.0 / p - 1.0 / q) > 1e-12:
        raise PreconditionError(f"1/p + 1/q != 1 + 1/r for p={p}, q={q}, r={r}")
    defect = F - j_phi_apply(F, pou, kernel)
    oscillation = osc_q(kernel, ((-pou.tau, pou.tau),))
    majorant = conv1d(F.with_values(np.abs(F.values)), oscillation)

    x = F.grid.points
    core = np.abs(x) <= core_fraction * F.grid.halfwidth + 1e-12
    slack = 5e-3 * float(np.max(np.abs(F.values)))
    excess = float(np.max(np.abs(defect.values[core]) - majorant.values.real[core] - slack))

    masked = defect.with_values(np.where(core, defect.values, 0.0))
    lhs = lp_norm(masked, r, pair.m)
    rhs = pair.moderateness_constant * lp_norm(F, p, pair.m) * lp_norm(oscillation, q, pair.w)
    ratio = 0.0 if lhs == 0 else lhs / rhs
    return RatioReport(
        name="continuity_estimate",
        lhs=lhs,
        rhs=rhs,
        ratio=ratio,
        bound=1.0 + tol,
        details={"pointwise_excess": excess, "slack": slack},
        passed=bool(excess <= 0.0 and ratio <= 1.0 + tol),
    )


def omega_derivative_oracle(halfwidth: float = 256.0, spacing: float = 1 / 32, check_halfwidth: float = 4.0) -> float:
    """max |d/dw K(0, w) - sinc'(w)| on |w| <= check_halfwidth, spectral derivative on a long line"""
    grid = Grid1D.symmetric(halfwidth, spacing)
    line = SampledFunction1D(grid, modulation_kernel_values(0.0, grid.points))
    derivative = spectral_derivative(line, 1)
    inside = np.abs(grid.points) <= check_halfwidth
    return float(np.max(np.abs(derivative.values[inside] - sinc_prime(grid.points[inside]))))


def _finite_difference_weights(n: int, radius: int) -> np.ndarray:
    """Central stencil weights for the n-th derivative on offsets -radius..radius (unit step)"""
    offsets = np.arange(-radius, radius + 1, dtype=float)
    vander = np.vander(offsets, increasing=True).T
    rhs = np.zeros(offsets.size)
    rhs[n] = float(np.prod(np.arange(1, n + 1)))
    return np.linalg.solve(vander, rhs)


def finite_difference(fn, x: np.ndarray, n: int, step: float = FD_STEP, radius: int = FD_RADIUS) -> np.ndarray:
    weights = _finite_difference_weights(n, radius)
    offsets = np.arange(-radius, radius + 1)
    return sum(w * fn(x + k * step) for w, k in zip(weights, offsets)) / step ** n


def derivative_check(setting: ShannonSetting, n_max: int = 3, points: int = 50, tol: float = 1e-6,
                     exponents: Sequence[float] = (1.5, 2.0, 4.0), windows: Sequence[float] = (16.0, 32.0, 64.0),
                     spacing: float = 1 / 64) -> DerivativeReport:
    """
    Closed-form K^(n) against a high-order central difference at `points` points in [0.1, 20]
    (K itself against numpy.sinc),
    and window growth of ||K^(n)||_{L_p[-L, L]}.

    The error is relative to the local amplitude sqrt(K^(n)^2 + (K^(n+1) / (2 pi omega))^2),
    which does not vanish at the zeros of K^(n).
    """
    x = np.linspace(0.1, 20.0, points)
    scale = 2.0 * np.pi * setting.omega
    max_errors, verdicts = {}, {}
    for n in range(n_max + 1):
        closed = shannon_kernel_nth_derivative(setting, n, x)
        amplitude = np.hypot(closed, shannon_kernel_nth_derivative(setting, n + 1, x) / scale)
        if n == 0:
            approx = 2.0 * setting.omega * np.sinc(2.0 * setting.omega * x)
        else:
            approx = finite_difference(lambda b: shannon_kernel_nth_derivative(setting, 0, b), x, n)
        max_errors[str(n)] = float(np.max(np.abs(approx - closed) / amplitude))

        grid = Grid1D.symmetric(windows[-1], spacing)
        sampled = SampledFunction1D(grid, shannon_kernel_nth_derivative(setting, n, grid.points))
        for p in exponents:
            norms = [lp_norm(_crop(sampled, L), p) for L in windows]
            verdicts[f"n={n},p={p:g}"] = decay_verdict(norms, config.DECAY_FACTOR)[0]

    passed = all(e <= tol for e in max_errors.values()) and all(verdicts.values())
    return DerivativeReport(
        omega=setting.omega,
        n_max=n_max,
        points=points,
        tolerance=tol,
        max_errors=max_errors,
        norm_verdicts=verdicts,
        passed=bool(passed),
    )
