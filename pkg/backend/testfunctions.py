"""Seeded band-limited families and the fixed witnesses used by the experiments."""
from typing import List

import numpy as np

from discretize import CoefficientSequence
from kernels import ShannonSetting, shannon_kernel_values
from pou import PartitionOfUnity, box_profile, hat_profile
from sampling import Grid1D, Grid2D, SampledFunction1D, SampledFunction2D, lp_norm


def _normalized(F: SampledFunction1D) -> SampledFunction1D:
    norm = lp_norm(F, 2)
    return F if norm == 0 else F * (1.0 / norm)


def random_bandlimited(setting: ShannonSetting, grid: Grid1D, rng: np.random.Generator) -> SampledFunction1D:
    """
    sum_j a_j K(x - j / (2 omega)) over |j / (2 omega)| <= L/4 with standard normal a_j,
    normalized in L2 on the grid.
    """
    step = setting.default_lattice_step
    reach = int(np.floor(grid.halfwidth / (4.0 * step) + 1e-9))
    amplitudes = rng.standard_normal(2 * reach + 1)
    values = np.zeros(grid.count)
    for j, a in zip(range(-reach, reach + 1), amplitudes):
        values += a * shannon_kernel_values(setting.omega, grid.points - j * step)
    return _normalized(SampledFunction1D(grid, values))


def random_family(setting: ShannonSetting, grid: Grid1D, seed: int, trials: int) -> List[SampledFunction1D]:
    """One independent stream per trial, spawned from the seed"""
    children = np.random.SeedSequence(seed).spawn(trials)
    return [random_bandlimited(setting, grid, np.random.default_rng(child)) for child in children]


def box(grid: Grid1D, halfwidth: float = 0.5) -> SampledFunction1D:
    return SampledFunction1D(grid, box_profile(grid.points, halfwidth))


def triangle(grid: Grid1D, halfwidth: float = 1.0) -> SampledFunction1D:
    return SampledFunction1D(grid, hat_profile(halfwidth, grid.points))


def gaussian(grid: Grid1D, width: float = 1.0, normalize: bool = False) -> SampledFunction1D:
    """exp(-pi (x / width)^2)"""
    F = SampledFunction1D(grid, np.exp(-np.pi * (grid.points / width) ** 2))
    return _normalized(F) if normalize else F


def gaussian_2d(grid: Grid2D, width: float = 1.0) -> SampledFunction2D:
    """exp(-pi (x^2 + w^2) / width^2), not a voice transform for the box window"""
    X, W = grid.points
    return SampledFunction2D(grid, np.exp(-np.pi * (X ** 2 + W ** 2) / width ** 2))


def sparse_coefficients(pou: PartitionOfUnity, nonzeros: int, seed: int) -> CoefficientSequence:
    """`nonzeros` standard normal entries at distinct random lattice positions"""
    rng = np.random.default_rng(seed)
    values = np.zeros(len(pou))
    positions = rng.choice(len(pou), size=min(nonzeros, len(pou)), replace=False)
    values[np.sort(positions)] = rng.standard_normal(positions.size)
    return CoefficientSequence(pou.indices, values, pou.tau)
