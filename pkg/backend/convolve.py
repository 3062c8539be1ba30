"""Group convolution on R, twisted convolution on R^2 and the weighted Young check."""
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Optional, Tuple

import numpy as np
from scipy import fft as sp_fft
from scipy.signal import fftconvolve

from errors import ExponentRelationError, GridMismatchError, PreconditionError
from models import YoungReport
from sampling import (
    Grid1D,
    Grid2D,
    SampledFunction1D,
    SampledFunction2D,
    lp_norm,
    translate,
)
from weights import WeightPair

logger = logging.getLogger(__name__)

DIRECT_LIMIT = 32
EXPONENT_TOL = 1e-12


def _kernel_offset(axis: Grid1D) -> Tuple[int, float]:
    """Index M of the kernel sample nearest 0 (M = -origin/h) and the sub-grid remainder"""
    # ties (half-shifted grids) resolve to an output shift of +h/2
    steps = int(np.floor(-axis.origin / axis.spacing + 0.5 + 1e-9))
    return steps, axis.origin + steps * axis.spacing


def _pick(full: np.ndarray, start: int, count: int) -> np.ndarray:
    """full[start:start+count] along the last axis, zero where out of range"""
    out = np.zeros(full.shape[:-1] + (count,), dtype=complex)
    lo, hi = max(start, 0), min(start + count, full.shape[-1])
    if hi > lo:
        out[..., lo - start:hi - start] = full[..., lo:hi]
    return out


def _check_spacing(a: Grid1D, b: Grid1D) -> None:
    if not np.isclose(a.spacing, b.spacing, rtol=1e-12, atol=0):
        raise GridMismatchError(f"Spacing mismatch: {a.spacing} vs {b.spacing}")


def conv1d(F: SampledFunction1D, G: SampledFunction1D) -> SampledFunction1D:
    """
    Linear convolution (F * G)(x) = int F(y) G(x - y) dy on F's window.

    Zero padding is implicit in scipy.signal.fftconvolve; the sum is scaled by h.
    G may live on any grid with the same spacing; if G's origin is off the lattice
    by a fraction of h the output grid carries the same offset.
    """
    _check_spacing(F.grid, G.grid)
    steps, remainder = _kernel_offset(G.grid)
    full = fftconvolve(F.values, G.values) * F.grid.spacing
    grid = Grid1D(F.grid.origin + remainder, F.grid.spacing, F.grid.count)
    return SampledFunction1D(grid, _pick(full, steps, F.grid.count))


def reproducing_residual(F: SampledFunction1D, K: SampledFunction1D, core_fraction: float = 0.125) -> float:
    """||F*K - F|| / ||F|| on the core |x - center| <= core_fraction * halfwidth"""
    FK = conv1d(F, K)
    x = F.grid.points
    center = 0.5 * (F.grid.origin + F.grid.end)
    core = np.abs(x - center) <= core_fraction * 0.5 * (F.grid.end - F.grid.origin) + 1e-12
    denom = np.linalg.norm(F.values[core])
    if denom == 0:
        return 0.0
    return float(np.linalg.norm(FK.values[core] - F.values[core]) / denom)


def _twisted_block(rows: range, A: np.ndarray, G_hat: np.ndarray, F_grid: Grid2D, out_w: np.ndarray,
                   mx: int, mw: int, length: int) -> np.ndarray:
    nx, nw = A.shape
    gx = G_hat.shape[0]
    hx, hw = F_grid.x_axis.spacing, F_grid.w_axis.spacing
    xs = F_grid.x_axis.points
    partial = np.zeros((nx, nw), dtype=complex)
    out_idx = np.arange(nx)
    for j in rows:
        g_rows = out_idx - j + mx
        valid = (g_rows >= 0) & (g_rows < gx)
        if not np.any(valid):
            continue
        a_hat = sp_fft.fft(A[j], length)
        full = sp_fft.ifft(a_hat[None, :] * G_hat[g_rows[valid]], axis=1)
        slab = _pick(full, mw, nw)
        partial[valid] += np.exp(-2j * np.pi * xs[j] * out_w)[None, :] * slab
    return partial * hx * hw


def twisted_conv(F: SampledFunction2D, G: SampledFunction2D, threads: int = 1) -> SampledFunction2D:
    """
    (F (.) G)(x, w) = int F(x', w') G(x - x', w - w') e^{2 pi i x' (w' - w)} dx' dw'.

    Accumulates over source columns x': with A = F e^{2 pi i x' w'} every column
    contributes a linear convolution along w, followed by the phase e^{-2 pi i x' w}.
    Column blocks run on up to `threads` workers and are summed in block order.
    """
    (fx, fw), (gx, gw) = F.grid.axes, G.grid.axes
    _check_spacing(fx, gx)
    _check_spacing(fw, gw)
    mx, rx = _kernel_offset(gx)
    mw, rw = _kernel_offset(gw)
    out_grid = Grid2D(Grid1D(fx.origin + rx, fx.spacing, fx.count), Grid1D(fw.origin + rw, fw.spacing, fw.count))

    X, W = F.grid.points
    A = F.values * np.exp(2j * np.pi * X * W)
    length = sp_fft.next_fast_len(fw.count + gw.count - 1)
    G_hat = sp_fft.fft(G.values, length, axis=1)
    out_w = out_grid.w_axis.points

    blocks = np.array_split(np.arange(fx.count), max(1, min(threads, fx.count)))
    args = (A, G_hat, F.grid, out_w, mx, mw, length)
    if len(blocks) == 1:
        partials = [_twisted_block(range(fx.count), *args)]
    else:
        with ThreadPoolExecutor(max_workers=len(blocks)) as pool:
            partials = list(pool.map(lambda b: _twisted_block(range(b[0], b[-1] + 1), *args), blocks))

    total = np.zeros((fx.count, fw.count), dtype=complex)
    for part in partials:
        total += part
    return SampledFunction2D(out_grid, total)


def twisted_conv_direct(F: SampledFunction2D, G: SampledFunction2D) -> SampledFunction2D:
    """O(N^4) reference for twisted_conv, for grids with at most DIRECT_LIMIT points per axis"""
    if max(F.grid.shape) > DIRECT_LIMIT:
        raise PreconditionError(f"Direct twisted convolution limited to {DIRECT_LIMIT} points per axis")
    (fx, fw), (gx, gw) = F.grid.axes, G.grid.axes
    _check_spacing(fx, gx)
    _check_spacing(fw, gw)
    mx, rx = _kernel_offset(gx)
    mw, rw = _kernel_offset(gw)
    xs, ws = fx.points, fw.points
    out_x, out_w = xs + rx, ws + rw

    out = np.zeros(F.grid.shape, dtype=complex)
    for i in range(fx.count):
        for k in range(fw.count):
            acc = 0j
            for j in range(fx.count):
                r = i - j + mx
                if not 0 <= r < gx.count:
                    continue
                for kk in range(fw.count):
                    s = k - kk + mw
                    if 0 <= s < gw.count:
                        acc += F.values[j, kk] * G.values[r, s] * np.exp(2j * np.pi * xs[j] * (ws[kk] - out_w[k]))
            out[i, k] = acc * fx.spacing * fw.spacing
    return SampledFunction2D(Grid2D(Grid1D(out_x[0], fx.spacing, fx.count), Grid1D(out_w[0], fw.spacing, fw.count)), out)


def twisted_translate(F: SampledFunction2D, a: float, b: float) -> SampledFunction2D:
    """(L_(a,b) F)(x, w) = e^{2 pi i a (b - w)} F(x - a, w - b) for lattice-aligned (a, b)"""
    shifted = translate(F, (a, b))
    _, W = F.grid.points
    return shifted.with_values(shifted.values * np.exp(2j * np.pi * a * (b - W)))


def _check_exponents_at_least_one(**exponents: float) -> None:
    for name, value in exponents.items():
        if not value >= 1.0:
            raise PreconditionError(f"Exponent {name}={value} must be >= 1")


def exponent_relation(p: float, q: float) -> float:
    """r with 1 + 1/r = 1/p + 1/q (numpy.inf when the right side is 1)"""
    _check_exponents_at_least_one(p=p, q=q)
    inv_r = 1.0 / p + 1.0 / q - 1.0
    if inv_r < -EXPONENT_TOL:
        raise ExponentRelationError(f"1/p + 1/q = {1 / p + 1 / q:.6g} < 1 for p={p}, q={q}")
    return np.inf if inv_r <= EXPONENT_TOL else 1.0 / inv_r


def _check_young_exponents(p: float, q: float, r: float) -> None:
    _check_exponents_at_least_one(p=p, q=q, r=r)
    inv_r = 0.0 if np.isinf(r) else 1.0 / r
    if abs(1.0 + inv_r - 1.0 / p - 1.0 / q) > EXPONENT_TOL:
        raise ExponentRelationError(f"1 + 1/r != 1/p + 1/q for p={p}, q={q}, r={r}")


def weighted_young_check(H: SampledFunction1D, F: SampledFunction1D, p: float, q: float, r: float,
                         pair: WeightPair, tol: float = 0.05, label: Optional[str] = None) -> YoungReport:
    """
    Ratio ||H*F||_{r,m} / (||H||_{p,m} ||F||_{q,w}) against the moderateness constant.

    Args:
        H, F: Sampled functions on grids of equal spacing
        p, q, r: Exponents with 1 + 1/r = 1/p + 1/q
        pair: Validated weight pair (w, m)
        tol: Relative slack on the constant
        label: Optional description stored in the report

    Returns:
        YoungReport with passed = ratio <= constant * (1 + tol)
    """
    _check_young_exponents(p, q, r)
    denominator = lp_norm(H, p, pair.m) * lp_norm(F, q, pair.w)
    if denominator == 0:
        raise PreconditionError("Young check needs nonzero ||H||_{p,m} and ||F||_{q,w}")
    numerator = lp_norm(conv1d(H, F), r, pair.m)
    ratio = numerator / denominator
    constant = pair.moderateness_constant
    logger.debug("Young check p=%s q=%s r=%s ratio=%.6g constant=%.6g", p, q, r, ratio, constant)
    return YoungReport(
        label=label or "",
        p=p,
        q=q,
        r=float(r),
        ratio=ratio,
        constant=constant,
        passed=bool(ratio <= constant * (1.0 + tol)),
    )
