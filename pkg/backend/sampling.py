"""Uniform-grid sampled functions on R and R^2, quadrature and seminorms."""
import csv
import io
import logging
import struct
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Tuple, Union

import numpy as np
from scipy import fft as sp_fft

from errors import AlignmentError, GridMismatchError, NumericalOverflowError, PreconditionError

logger = logging.getLogger(__name__)

WeightFunction = Callable[..., np.ndarray]
Shift = Union[float, Tuple[float, float]]

_ALIGN_TOL = 1e-9
_BINARY_MAGIC = b"CRB1"


@dataclass(frozen=True)
class Grid1D:
    """Uniform grid origin + i*spacing, i = 0..count-1"""
    origin: float
    spacing: float
    count: int

    def __post_init__(self):
        if not self.spacing > 0:
            raise PreconditionError(f"Grid spacing must be positive, got {self.spacing}")
        if self.count < 2:
            raise PreconditionError(f"Grid needs at least 2 points, got {self.count}")

    @classmethod
    def symmetric(cls, halfwidth: float, spacing: float) -> "Grid1D":
        """Grid covering [-halfwidth, halfwidth] with the origin on a grid point"""
        steps = int(round(halfwidth / spacing))
        return cls(origin=-steps * spacing, spacing=spacing, count=2 * steps + 1)

    @property
    def points(self) -> np.ndarray:
        return self.origin + self.spacing * np.arange(self.count)

    @property
    def end(self) -> float:
        return self.origin + (self.count - 1) * self.spacing

    @property
    def halfwidth(self) -> float:
        return max(abs(self.origin), abs(self.end))

    @property
    def cell(self) -> float:
        return self.spacing

    @property
    def shape(self) -> Tuple[int, ...]:
        return (self.count,)

    def steps(self, length: float) -> int:
        """Number of grid steps in `length`; raises if not an integer multiple"""
        ratio = length / self.spacing
        k = int(round(ratio))
        if abs(ratio - k) > _ALIGN_TOL * max(1.0, abs(ratio)):
            raise AlignmentError(f"{length} is not a multiple of spacing {self.spacing}")
        return k

    def index_of(self, x: float) -> int:
        """Index of the grid point at x (x must be a grid point, may lie outside)"""
        return self.steps(x - self.origin)

    def frequencies(self) -> np.ndarray:
        return sp_fft.fftfreq(self.count, d=self.spacing)

    def same_as(self, other: "Grid1D") -> bool:
        return (
            self.count == other.count
            and np.isclose(self.spacing, other.spacing, rtol=1e-12, atol=0)
            and abs(self.origin - other.origin) <= _ALIGN_TOL * self.spacing
        )


@dataclass(frozen=True)
class Grid2D:
    """Product grid; first axis is x, second axis is omega"""
    x_axis: Grid1D
    w_axis: Grid1D

    @classmethod
    def symmetric(cls, halfwidth_x: float, halfwidth_w: float, spacing: float,
                  spacing_w: Optional[float] = None) -> "Grid2D":
        return cls(Grid1D.symmetric(halfwidth_x, spacing),
                   Grid1D.symmetric(halfwidth_w, spacing_w or spacing))

    @property
    def axes(self) -> Tuple[Grid1D, Grid1D]:
        return (self.x_axis, self.w_axis)

    @property
    def points(self) -> Tuple[np.ndarray, np.ndarray]:
        return np.meshgrid(self.x_axis.points, self.w_axis.points, indexing="ij")

    @property
    def cell(self) -> float:
        return self.x_axis.spacing * self.w_axis.spacing

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.x_axis.count, self.w_axis.count)

    def same_as(self, other: "Grid2D") -> bool:
        return self.x_axis.same_as(other.x_axis) and self.w_axis.same_as(other.w_axis)


Grid = Union[Grid1D, Grid2D]


def _coords(grid: Grid) -> Tuple[np.ndarray, ...]:
    if isinstance(grid, Grid1D):
        return (grid.points,)
    return grid.points


@dataclass(frozen=True, eq=False)
class SampledFunction1D:
    """Complex samples of a function on a Grid1D"""
    grid: Grid1D
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        values = np.array(self.values, dtype=complex)
        if values.shape != self.grid.shape:
            raise GridMismatchError(f"Values shape {values.shape} does not match grid {self.grid.shape}")
        if not np.all(np.isfinite(values)):
            raise NumericalOverflowError("Sampled function has non-finite values")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @classmethod
    def zeros(cls, grid: Grid1D):
        return cls(grid, np.zeros(grid.shape))

    def with_values(self, values: np.ndarray):
        return type(self)(self.grid, values)

    def coords(self) -> Tuple[np.ndarray, ...]:
        return _coords(self.grid)

    def __add__(self, other):
        _require_same_grid(self, other)
        return self.with_values(self.values + other.values)

    def __sub__(self, other):
        _require_same_grid(self, other)
        return self.with_values(self.values - other.values)

    def __mul__(self, scalar):
        return self.with_values(self.values * scalar)

    __rmul__ = __mul__


@dataclass(frozen=True, eq=False)
class SampledFunction2D(SampledFunction1D):
    """Complex samples on a Grid2D, values indexed [x, omega]"""
    grid: Grid2D


SampledFunction = Union[SampledFunction1D, SampledFunction2D]


@dataclass(frozen=True)
class SeminormFamily:
    """Finite family of weighted L_p seminorms representing the Frechet scale"""
    exponents: Tuple[float, ...]
    weight: Optional[WeightFunction] = None

    def __post_init__(self):
        exponents = tuple(float(p) for p in self.exponents)
        if not exponents:
            raise PreconditionError("Seminorm family needs at least one exponent")
        if any(p <= 1 for p in exponents):
            raise PreconditionError(f"All exponents must exceed 1, got {exponents}")
        object.__setattr__(self, "exponents", exponents)


def _require_same_grid(F: SampledFunction, G: SampledFunction) -> None:
    if type(F.grid) is not type(G.grid) or not F.grid.same_as(G.grid):
        raise GridMismatchError("Sampled functions live on different grids")


def weight_values(grid: Grid, m: Optional[WeightFunction]) -> np.ndarray:
    """Evaluate a weight on every grid point (ones when m is None)"""
    if m is None:
        return np.ones(grid.shape)
    return np.broadcast_to(np.asarray(m(*_coords(grid)), dtype=float), grid.shape)


def lp_norm(F: SampledFunction, p: float, m: Optional[WeightFunction] = None) -> float:
    """
    Weighted L_p norm by rectangle-rule quadrature.

    Args:
        F: Sampled function
        p: Exponent, p >= 1 or numpy.inf
        m: Optional weight evaluated on grid coordinates

    Returns:
        (sum |m F|^p * cell)^(1/p)
    """
    if not p >= 1:
        raise PreconditionError(f"Exponent must be >= 1, got {p}")
    magnitude = np.abs(F.values) * weight_values(F.grid, m)
    scale = float(np.max(magnitude)) if magnitude.size else 0.0
    if scale == 0.0:
        return 0.0
    if not np.isfinite(scale):
        raise NumericalOverflowError("Weighted samples are not finite")
    if np.isinf(p):
        return scale
    total = float(np.sum((magnitude / scale) ** p)) * F.grid.cell
    result = scale * total ** (1.0 / p)
    if not np.isfinite(result):
        raise NumericalOverflowError(f"L_{p} norm overflowed")
    return result


def seminorm_vector(F: SampledFunction, fam: SeminormFamily) -> List[float]:
    return [lp_norm(F, p, fam.weight) for p in fam.exponents]


def inner_product(F: SampledFunction, G: SampledFunction) -> complex:
    """<F, G> = sum F conj(G) * cell"""
    _require_same_grid(F, G)
    return complex(np.sum(F.values * np.conj(G.values)) * F.grid.cell)


def _shift_axis(values: np.ndarray, k: int, axis: int) -> np.ndarray:
    out = np.zeros_like(values)
    n = values.shape[axis]
    if abs(k) >= n:
        return out
    src = [slice(None)] * values.ndim
    dst = [slice(None)] * values.ndim
    if k >= 0:
        src[axis], dst[axis] = slice(0, n - k), slice(k, n)
    else:
        src[axis], dst[axis] = slice(-k, n), slice(0, n + k)
    out[tuple(dst)] = values[tuple(src)]
    return out


def translate(F: SampledFunction, shift: Shift, fourier: bool = False) -> SampledFunction:
    """
    Translation (lambda(s)F)(x) = F(x - s).

    Lattice-aligned shifts move samples with zero fill; `fourier=True` translates
    the periodized band-limited interpolant by a phase factor instead.
    """
    shifts = (shift,) if isinstance(F.grid, Grid1D) else tuple(shift)
    axes = (F.grid,) if isinstance(F.grid, Grid1D) else F.grid.axes
    if len(shifts) != len(axes):
        raise PreconditionError(f"Shift {shift} does not match grid dimension")

    values = F.values
    for axis, (s, grid) in enumerate(zip(shifts, axes)):
        if s == 0:
            continue
        if fourier:
            phase = np.exp(-2j * np.pi * grid.frequencies() * s)
            phase = phase.reshape([-1 if a == axis else 1 for a in range(values.ndim)])
            values = sp_fft.ifft(sp_fft.fft(values, axis=axis) * phase, axis=axis)
        else:
            values = _shift_axis(values, grid.steps(s), axis)
    return F.with_values(values)


def embed(F: SampledFunction1D, grid: Grid1D) -> SampledFunction1D:
    """Move F onto another grid with the same spacing, zero fill outside F's window (crop or pad)"""
    if not np.isclose(grid.spacing, F.grid.spacing, rtol=1e-12, atol=0):
        raise GridMismatchError("embed needs equal spacings")
    offset = F.grid.steps(F.grid.origin - grid.origin)
    out = np.zeros(grid.count, dtype=complex)
    lo = max(0, offset)
    hi = min(grid.count, offset + F.grid.count)
    if hi > lo:
        out[lo:hi] = F.values[lo - offset:hi - offset]
    return SampledFunction1D(grid, out)


def fourier_transform(F: SampledFunction1D) -> Tuple[np.ndarray, np.ndarray]:
    """
    Discrete approximation of F^(xi) = int F(x) e^{-2 pi i x xi} dx.

    Returns:
        Tuple of (frequencies in fftfreq order, transform values)
    """
    xi = F.grid.frequencies()
    values = F.grid.spacing * np.exp(-2j * np.pi * F.grid.origin * xi) * sp_fft.fft(F.values)
    return xi, values


def fourier_transform_2d(F: SampledFunction2D) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """2D analogue of fourier_transform; returns (xi, eta, values[xi, eta])"""
    gx, gw = F.grid.axes
    xi, eta = gx.frequencies(), gw.frequencies()
    phase = np.outer(np.exp(-2j * np.pi * gx.origin * xi), np.exp(-2j * np.pi * gw.origin * eta))
    return xi, eta, F.grid.cell * phase * sp_fft.fft2(F.values)


def padded_grid(grid: Grid1D, minimum: int) -> Grid1D:
    """Grid with the same origin and spacing and at least `minimum` points (FFT-friendly length)"""
    return Grid1D(grid.origin, grid.spacing, sp_fft.next_fast_len(max(minimum, grid.count)))


def apply_padded_multiplier(F: SampledFunction1D, multiplier: Callable[[np.ndarray], np.ndarray],
                            pad_to: Optional[int] = None) -> SampledFunction1D:
    """Multiplier applied after zero padding (default to twice the length), cropped back to F's grid"""
    padded = embed(F, padded_grid(F.grid, pad_to or 2 * F.grid.count))
    values = sp_fft.ifft(sp_fft.fft(padded.values) * multiplier(padded.grid.frequencies()))
    return SampledFunction1D(F.grid, values[:F.grid.count])


# Serialization

def to_csv(F: SampledFunction) -> str:
    """CSV with coordinate column(s) followed by re, im"""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    if isinstance(F.grid, Grid1D):
        writer.writerow(["x", "re", "im"])
        for x, v in zip(F.grid.points, F.values):
            writer.writerow([repr(float(x)), repr(float(v.real)), repr(float(v.imag))])
    else:
        writer.writerow(["x", "omega", "re", "im"])
        X, W = F.grid.points
        for x, w, v in zip(X.ravel(), W.ravel(), F.values.ravel()):
            writer.writerow([repr(float(x)), repr(float(w)), repr(float(v.real)), repr(float(v.imag))])
    return buffer.getvalue()


def _axis_from_coords(coords: np.ndarray) -> Grid1D:
    unique = np.unique(coords)
    if unique.size < 2:
        raise PreconditionError("CSV axis needs at least two distinct coordinates")
    return Grid1D(float(unique[0]), float((unique[-1] - unique[0]) / (unique.size - 1)), int(unique.size))


def from_csv(text: str) -> SampledFunction:
    rows = list(csv.reader(io.StringIO(text)))
    header, body = rows[0], np.array(rows[1:], dtype=float)
    values = body[:, -2] + 1j * body[:, -1]
    if header[:2] == ["x", "omega"]:
        grid = Grid2D(_axis_from_coords(body[:, 0]), _axis_from_coords(body[:, 1]))
        return SampledFunction2D(grid, values.reshape(grid.shape))
    return SampledFunction1D(_axis_from_coords(body[:, 0]), values)


def to_bytes(F: SampledFunction) -> bytes:
    """Little-endian layout: magic, dimension, (origin, spacing, count) per axis, interleaved re/im float64"""
    axes = (F.grid,) if isinstance(F.grid, Grid1D) else F.grid.axes
    header = _BINARY_MAGIC + struct.pack("<q", len(axes))
    for axis in axes:
        header += struct.pack("<ddq", axis.origin, axis.spacing, axis.count)
    return header + np.ascontiguousarray(F.values, dtype="<c16").tobytes()


def from_bytes(payload: bytes) -> SampledFunction:
    if payload[:4] != _BINARY_MAGIC:
        raise PreconditionError("Not a sampled-function payload")
    (dim,) = struct.unpack_from("<q", payload, 4)
    offset = 12
    axes = []
    for _ in range(dim):
        origin, spacing, count = struct.unpack_from("<ddq", payload, offset)
        axes.append(Grid1D(origin, spacing, count))
        offset += 24
    values = np.frombuffer(payload, dtype="<c16", offset=offset)
    if dim == 1:
        return SampledFunction1D(axes[0], values)
    grid = Grid2D(*axes)
    return SampledFunction2D(grid, values.reshape(grid.shape))

