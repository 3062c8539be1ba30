"""
Atomic decomposition in the Shannon setting.

The left inverse of J_phi is a Fourier multiplier, so it commutes with translations and
every atom J_phi^-1 L_{g_k} K is the mother atom a_0 = J_phi^-1 K moved to g_k. Only a_0
is stored.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, Optional, Sequence

import numpy as np

from config import config
from convolve import conv1d
from diagnostics import osc_q
from discretize import CoefficientSequence, coefficients, lattice_sum, shannon_left_inverse
from errors import ExponentRelationError, GridMismatchError
from kernels import ShannonSetting, shannon_kernel
from models import RatioReport, RoundtripReport
from pou import PartitionOfUnity, box_profile
from sampling import Grid1D, SampledFunction1D, WeightFunction, embed, lp_norm
from weights import WeightPair

logger = logging.getLogger(__name__)

WIDE_FACTOR = 32
WIDE_LIMIT = 4096.0


@dataclass(frozen=True, eq=False)
class AtomFamily:
    """Mother atom plus the lattice it is translated to"""
    mother: SampledFunction1D      # a_0 on [-2L, 2L]
    pou: PartitionOfUnity          # Lattice centers and the analysis window
    setting: ShannonSetting

    @property
    def window(self) -> Grid1D:
        return self.pou.window

    def atom(self, i: int) -> SampledFunction1D:
        """a_0(x - g_i) on the window"""
        return lattice_sum(CoefficientSequence.unit(self.pou, self.pou.indices[i]), self.mother, self.window)


def mother_atom(setting: ShannonSetting, window: Grid1D, tau: Optional[float] = None) -> SampledFunction1D:
    """
    a_0 = J_phi^-1 K.

    K is sampled on a wide grid (WIDE_FACTOR times the window, at most WIDE_LIMIT) so its
    truncated tail stays negligible after the multiplier, then a_0 is cropped to [-2L, 2L].
    """
    halfwidth = window.halfwidth
    wide = Grid1D.symmetric(max(min(WIDE_FACTOR * halfwidth, WIDE_LIMIT), 2.0 * halfwidth), window.spacing)
    atom = shannon_left_inverse(shannon_kernel(setting, wide), setting, tau, check_band=False)
    cropped = embed(atom, Grid1D.symmetric(2.0 * halfwidth, window.spacing))
    return cropped.with_values(cropped.values.real.astype(complex))


def build_atoms(setting: ShannonSetting, pou: PartitionOfUnity) -> AtomFamily:
    """
    Raises:
        PreconditionError: the lattice step exceeds 1/(2 omega)
    """
    mother = mother_atom(setting, pou.window, pou.tau)
    peak = mother.values[mother.grid.index_of(0.0)].real
    logger.info("Mother atom: omega=%s tau=%s, a0(0)=%.6f", setting.omega, pou.tau, peak)
    return AtomFamily(mother=mother, pou=pou, setting=setting)


def analyze(F: SampledFunction1D, pou: PartitionOfUnity, method: str = "quadrature") -> CoefficientSequence:
    """A(F) = {<F, phi_k>}; the voice transform is the inclusion here"""
    return coefficients(F, pou, method)


def synthesize(c: CoefficientSequence, atoms: AtomFamily) -> SampledFunction1D:
    """S(c) = sum_k c_k a_0(x - g_k) on the window"""
    c.require_same_index(atoms.pou.indices)
    return lattice_sum(c, atoms.mother, atoms.window)


def _core(grid: Grid1D, fraction: float) -> np.ndarray:
    return np.abs(grid.points) <= fraction * grid.halfwidth + 1e-12


def _masked(F: SampledFunction1D, mask: np.ndarray) -> SampledFunction1D:
    return F.with_values(np.where(mask, F.values, 0.0))


def roundtrip_errors(F: SampledFunction1D, atoms: AtomFamily, exponents: Sequence[float],
                     weight: Optional[WeightFunction] = None, core_fraction: float = 0.5) -> Dict[str, float]:
    """||S(A(F)) - F||_{p,m} / ||F||_{p,m} per exponent on |x| <= core_fraction * L"""
    if not F.grid.same_as(atoms.window):
        raise GridMismatchError("Function and atom family live on different grids")
    core = _core(F.grid, core_fraction)
    difference = _masked(synthesize(analyze(F, atoms.pou), atoms) - F, core)
    reference = _masked(F, core)
    errors = {}
    for p in exponents:
        denom = lp_norm(reference, p, weight)
        errors[f"{p:g}"] = 0.0 if denom == 0 else lp_norm(difference, p, weight) / denom
    return errors


def roundtrip(family: Sequence[SampledFunction1D], atoms: AtomFamily, exponents: Sequence[float],
              seed: int, tol: Optional[float] = None, weight: Optional[WeightFunction] = None,
              threads: int = 1) -> RoundtripReport:
    """Worst relative error per exponent over the family; trials run in order on up to `threads` workers"""
    tol = config.ROUNDTRIP_TOL if tol is None else tol

    def run(F: SampledFunction1D) -> Dict[str, float]:
        return roundtrip_errors(F, atoms, exponents, weight)

    if threads > 1 and len(family) > 1:
        with ThreadPoolExecutor(max_workers=min(threads, len(family))) as pool:
            results = list(pool.map(run, family))
    else:
        results = [run(F) for F in family]

    worst = {f"{p:g}": max((r[f"{p:g}"] for r in results), default=0.0) for p in exponents}
    logger.info("Roundtrip over %d trials: %s", len(family), worst)
    return RoundtripReport(
        omega=atoms.setting.omega,
        tau=atoms.pou.tau,
        h=atoms.window.spacing,
        L=atoms.window.halfwidth,
        seed=seed,
        trials=len(family),
        per_p_errors=worst,
        tolerance=tol,
        passed=all(e < tol for e in worst.values()),
    )


def kernel_exponent(p: float, q: float) -> float:
    """q' with 1/p + 1 = 1/q + 1/q'"""
    inv = 1.0 + 1.0 / p - 1.0 / q
    if not 0 < inv <= 1.0 + 1e-12:
        raise ExponentRelationError(f"No kernel exponent for p={p}, q={q}")
    return 1.0 / min(inv, 1.0)


def synthesis_bound_check(c: CoefficientSequence, atoms: AtomFamily, p: float, q: float, pair: WeightPair,
                          tol: float = 0.05) -> RatioReport:
    """
    ||S(c)||_{p,m} against the majorant (1/|Q|) (sum |c_i| chi_{g_i Q}) * (osc_Q a_0 + |a_0|), Q = [-tau, tau].

    Passes iff direct <= majorant <= C ||sum |c_i| chi_{g_i Q}||_{q,m} (||osc_Q a_0||_{q',w} + ||a_0||_{q',w}).
    """
    q_prime = kernel_exponent(p, q)
    tau = atoms.pou.tau
    direct = lp_norm(synthesize(c, atoms), p, pair.m)

    mother = atoms.mother
    oscillation = osc_q(mother, ((-tau, tau),))
    envelope = oscillation.with_values(oscillation.values + np.abs(mother.values))
    box_grid = Grid1D.symmetric(tau, mother.grid.spacing)
    indicator = SampledFunction1D(box_grid, box_profile(box_grid.points, tau))
    train = lattice_sum(c.with_values(np.abs(c.values)), indicator, atoms.window)
    majorant = conv1d(train, envelope) * (1.0 / (2.0 * tau))
    majorant_norm = lp_norm(majorant, p, pair.m)

    bound = pair.moderateness_constant * lp_norm(train, q, pair.m) * (
        lp_norm(oscillation, q_prime, pair.w)
        + lp_norm(mother, q_prime, pair.w)
    ) / (2.0 * tau)
    ratio = 0.0 if direct == 0 else direct / majorant_norm
    return RatioReport(
        name="synthesis_bound",
        lhs=direct,
        rhs=majorant_norm,
        ratio=ratio,
        bound=1.0 + tol,
        details={"p": p, "q": q, "q_prime": q_prime, "analytic_bound": bound},
        passed=bool(ratio <= 1.0 + tol and majorant_norm <= bound * (1.0 + tol)),
    )


def analysis_constant(family: Sequence[SampledFunction1D], pou: PartitionOfUnity, p: float = 2.0) -> RatioReport:
    """Empirical C in ||A(F)||_{l_p} <= C ||F||_{L_p}, worst case over the family"""
    worst, lhs_at, rhs_at = 0.0, 0.0, 0.0
    for F in family:
        lhs = analyze(F, pou).norm(p)
        rhs = lp_norm(F, p)
        if rhs > 0 and lhs / rhs >= worst:
            worst, lhs_at, rhs_at = lhs / rhs, lhs, rhs
    return RatioReport(
        name="analysis_constant",
        lhs=lhs_at,
        rhs=rhs_at,
        ratio=worst,
        bound=float("inf"),
        details={"p": p},
        passed=bool(np.isfinite(worst)),
    )
