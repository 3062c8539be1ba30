"""
Q-dense lattices and bounded partitions of unity.

1D: scaled hats phi_tau(x) = max(0, 1 - |x|/tau) = (1/tau) chi_tau * chi_tau on the lattice tau*Z.
2D: unit boxes chi_[-1/2,1/2]^2 on Z^2, with weight 1/2 on box edges (1/4 on corners).
"""
import logging
from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

import numpy as np

from errors import PreconditionError, ResolutionError
from sampling import Grid, Grid1D, Grid2D, SampledFunction1D, SampledFunction2D

logger = logging.getLogger(__name__)

_EDGE_TOL = 1e-12

Box = Tuple[Tuple[float, float], ...]


def hat_profile(tau: float, u: np.ndarray) -> np.ndarray:
    return np.clip(1.0 - np.abs(np.asarray(u, dtype=float)) / tau, 0.0, None)


def box_profile(u: np.ndarray, halfwidth: float = 0.5) -> np.ndarray:
    """Indicator of [-halfwidth, halfwidth] with value 1/2 at both ends"""
    a = np.abs(np.asarray(u, dtype=float))
    edge = np.isclose(a, halfwidth, rtol=0, atol=_EDGE_TOL)
    return np.where(edge, 0.5, (a < halfwidth).astype(float))


def hat_fourier(tau: float, xi: np.ndarray) -> np.ndarray:
    """Fourier transform of phi_tau: tau sinc^2(tau xi)"""
    return tau * np.sinc(tau * np.asarray(xi, dtype=float)) ** 2


@dataclass(frozen=True, eq=False)
class PartitionOfUnity:
    """Lattice translates of one profile, truncated to a window"""
    tau: float                     # Lattice step (1 for the unit boxes)
    indices: np.ndarray            # Integer lattice indices, shape (n, d)
    window: Grid                   # Grid the bumps are sampled on
    kind: str = "hat"              # "hat" (1D) or "box" (2D tensor boxes)
    centers: np.ndarray = field(init=False)

    def __post_init__(self):
        indices = np.asarray(self.indices, dtype=int)
        if indices.ndim == 1:
            indices = indices[:, None]
        if indices.shape[0] == 0:
            raise PreconditionError("Partition of unity has no lattice points in the window")
        indices.setflags(write=False)
        object.__setattr__(self, "indices", indices)
        object.__setattr__(self, "centers", self.tau * indices.astype(float))

    @property
    def dimension(self) -> int:
        return self.indices.shape[1]

    def __len__(self) -> int:
        return self.indices.shape[0]

    def profile(self, *offsets: np.ndarray) -> np.ndarray:
        """Profile evaluated at offsets from a center, one array per axis"""
        if self.kind == "hat":
            values = [hat_profile(self.tau, u) for u in offsets]
        else:
            values = [box_profile(u, 0.5 * self.tau) for u in offsets]
        out = values[0]
        for v in values[1:]:
            out = out * v
        return out

    def bump(self, i: int):
        """The i-th partition function phi_i sampled on the window"""
        center = self.centers[i]
        if isinstance(self.window, Grid1D):
            return SampledFunction1D(self.window, self.profile(self.window.points - center[0]))
        X, W = self.window.points
        return SampledFunction2D(self.window, self.profile(X - center[0], W - center[1]))

    def support(self, i: int) -> Box:
        """Closed support box g_i + [-tau, tau] (hats) or g_i + [-1/2, 1/2]^2 (boxes)"""
        half = self.tau if self.kind == "hat" else 0.5 * self.tau
        return tuple((float(c - half), float(c + half)) for c in self.centers[i])

    def partition_sum(self) -> np.ndarray:
        """sum_i phi_i on the window grid"""
        total = np.zeros(self.window.shape)
        for i in range(len(self)):
            total += self.bump(i).values.real
        return total


def _lattice_range(axis: Grid1D, step: float, reach: float) -> np.ndarray:
    lo = int(np.ceil((axis.origin - reach) / step - _EDGE_TOL))
    hi = int(np.floor((axis.end + reach) / step + _EDGE_TOL))
    return np.arange(lo, hi + 1)


def make_pou_1d(tau: float, window: Grid1D) -> PartitionOfUnity:
    """
    Hat partition on tau*Z with centers in the closed window.

    Raises:
        ResolutionError: tau < 2h
        AlignmentError: tau or the lattice points are not on the grid
    """
    if tau < 2.0 * window.spacing * (1.0 - _EDGE_TOL):
        raise ResolutionError(f"tau = {tau} is below two grid spacings ({window.spacing})")
    window.steps(tau)
    ks = _lattice_range(window, tau, 0.0)
    for k in (ks[0], ks[-1]):
        window.index_of(k * tau)
    logger.debug("Hat partition: tau=%s, %d centers", tau, len(ks))
    return PartitionOfUnity(tau=tau, indices=ks, window=window, kind="hat")


def make_pou_2d(window: Grid2D, radius: Optional[int] = None) -> PartitionOfUnity:
    """
    Unit-box partition on Z^2 covering the window (truncated to |k|, |l| <= radius if given).

    Raises:
        AlignmentError: a spacing does not divide 1/2 or box edges miss the grid
    """
    for axis in window.axes:
        axis.steps(0.5)
        axis.index_of(np.round(axis.origin - 0.5) + 0.5)
    ranges = [_lattice_range(axis, 1.0, 0.5) for axis in window.axes]
    if radius is not None:
        ranges = [r[np.abs(r) <= radius] for r in ranges]
    K, L = np.meshgrid(*ranges, indexing="ij")
    indices = np.stack([K.ravel(), L.ravel()], axis=1)
    return PartitionOfUnity(tau=1.0, indices=indices, window=window, kind="box")


def q_density_check(centers: np.ndarray, Q: Sequence[Tuple[float, float]], window: Grid) -> bool:
    """True iff every grid point of the window lies in some closed box g_i + Q"""
    centers = np.asarray(centers, dtype=float)
    if centers.ndim == 1:
        centers = centers[:, None]
    lo = np.array([q[0] for q in Q], dtype=float)
    hi = np.array([q[1] for q in Q], dtype=float)
    if centers.shape[1] != lo.size:
        raise PreconditionError("Box dimension does not match the lattice")

    if isinstance(window, Grid1D):
        points = window.points[:, None]
    else:
        X, W = window.points
        points = np.stack([X.ravel(), W.ravel()], axis=1)

    for start in range(0, len(points), 4096):
        chunk = points[start:start + 4096]
        diff = chunk[:, None, :] - centers[None, :, :]
        inside = np.all((diff >= lo - _EDGE_TOL) & (diff <= hi + _EDGE_TOL), axis=2)
        if not np.all(np.any(inside, axis=1)):
            return False
    return True
