"""Control weights w and w-moderate weights m, with sampled axiom validation."""
import logging
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.stats import qmc

from errors import WeightAxiomError, PreconditionError

logger = logging.getLogger(__name__)

Point = Union[float, Tuple[float, float]]

_AXIOM_RTOL = 1e-12


class RadialWeight:
    """Weight depending on the Euclidean norm of the carrier point"""

    def __init__(self, name: str, profile: Callable[[np.ndarray], np.ndarray]):
        self.name = name
        self.profile = profile

    def __call__(self, *coords: np.ndarray) -> np.ndarray:
        radius = np.sqrt(sum(np.asarray(c, dtype=float) ** 2 for c in coords))
        return self.profile(radius)

    def __repr__(self) -> str:
        return f"RadialWeight({self.name!r})"


def constant_weight() -> RadialWeight:
    return RadialWeight("const", lambda r: np.ones_like(r))


def polynomial_weight(a: float) -> RadialWeight:
    """w(x) = (1 + |x|)^a"""
    if a < 0:
        raise PreconditionError(f"Polynomial weight exponent must be >= 0, got {a}")
    return RadialWeight(f"poly:{a:g}", lambda r: (1.0 + r) ** a)


def logarithmic_weight() -> RadialWeight:
    """w(x) = 1 + log(1 + |x|)"""
    return RadialWeight("log", lambda r: 1.0 + np.log1p(r))


def exponential_weight(rate: float = 1.0) -> RadialWeight:
    return RadialWeight(f"exp:{rate:g}", lambda r: np.exp(rate * r))


def weight_preset(name: str) -> RadialWeight:
    """
    Resolve a preset name: `const`, `poly:a`, `log` (and `exp:c` for counterexamples).

    Raises:
        PreconditionError: if the name is unknown
    """
    kind, _, arg = name.partition(":")
    try:
        if kind == "const" and not arg:
            return constant_weight()
        if kind == "log" and not arg:
            return logarithmic_weight()
        if kind == "poly":
            return polynomial_weight(float(arg) if arg else 1.0)
        if kind == "exp":
            return exponential_weight(float(arg) if arg else 1.0)
    except ValueError as e:
        raise PreconditionError(f"Invalid weight preset '{name}': {e}") from e
    raise PreconditionError(f"Unknown weight preset '{name}'")


@dataclass(frozen=True)
class WeightPair:
    """Validated pair (w, m) with the empirical moderateness constant"""
    w: Callable[..., np.ndarray]
    m: Callable[..., np.ndarray]
    moderateness_constant: float
    dimension: int = 1


def default_sample_points(halfwidth: float = 8.0, dimension: int = 1,
                          count: int = 256) -> List[Point]:
    """Halton points in [-halfwidth, halfwidth]^d plus the integer lattice points of [-4, 4]^d"""
    sampler = qmc.Halton(d=dimension, scramble=False)
    raw = qmc.scale(sampler.random(count), [-halfwidth] * dimension, [halfwidth] * dimension)
    lattice = np.arange(-4, 5, dtype=float)
    if dimension == 1:
        return [float(x) for x in raw[:, 0]] + [float(k) for k in lattice]
    grid = np.array(np.meshgrid(lattice, lattice, indexing="ij")).reshape(2, -1).T
    return [tuple(map(float, p)) for p in np.vstack([raw, grid])]


def _as_array(sample_points: Sequence[Point]) -> np.ndarray:
    points = np.asarray(sample_points, dtype=float)
    if points.ndim == 1:
        points = points[:, None]
    if points.size == 0:
        raise PreconditionError("Need at least one sample point")
    return points


def _evaluate(fn: Callable[..., np.ndarray], points: np.ndarray) -> np.ndarray:
    return np.broadcast_to(np.asarray(fn(*points.T), dtype=float), points.shape[:1])


def _witness(points: np.ndarray, i: int, j: Optional[int] = None):
    def point(k):
        p = points[k]
        return float(p[0]) if p.size == 1 else tuple(float(v) for v in p)
    return (point(i),) if j is None else (point(i), point(j))


def validate_weight_pair(w: Callable[..., np.ndarray], m: Callable[..., np.ndarray],
                         sample_points: Sequence[Point]) -> WeightPair:
    """
    Check the control/moderate weight axioms on the Cartesian square of sample points.

    Args:
        w: Control weight, evaluated as w(x) or w(x, omega)
        m: Moderate weight with the same calling convention
        sample_points: Carrier points (floats in 1D, pairs in 2D)

    Returns:
        WeightPair with moderateness_constant = max m(x+y) / (w(x) m(y)) over the pairs

    Raises:
        WeightAxiomError: naming the failed axiom and the witness
    """
    points = _as_array(sample_points)
    wx = _evaluate(w, points)
    mx = _evaluate(m, points)
    if not (np.all(np.isfinite(wx)) and np.all(np.isfinite(mx)) and np.all(wx > 0) and np.all(mx > 0)):
        raise PreconditionError("Weights must be strictly positive and finite on the sample points")

    below = np.flatnonzero(wx < 1.0 - _AXIOM_RTOL)
    if below.size:
        i = int(below[0])
        raise WeightAxiomError("bounded_below", _witness(points, i), f"w = {wx[i]:.6g} < 1")

    w_neg = _evaluate(w, -points)
    asym = np.abs(w_neg - wx) > _AXIOM_RTOL * np.maximum(wx, 1.0)
    if np.any(asym):
        i = int(np.flatnonzero(asym)[0])
        raise WeightAxiomError("symmetric", _witness(points, i), f"w(x) = {wx[i]:.6g}, w(-x) = {w_neg[i]:.6g}")

    # pair sums, x outer and y inner
    sums = (points[:, None, :] + points[None, :, :]).reshape(-1, points.shape[1])
    w_sum = _evaluate(w, sums).reshape(len(points), len(points))
    m_sum = _evaluate(m, sums).reshape(len(points), len(points))

    checks = (
        ("submultiplicative", w_sum / np.outer(wx, wx)),
        ("ctrl1", m_sum / np.outer(wx, mx)),
        ("ctrl2", m_sum / np.outer(mx, wx)),
    )
    for axiom, ratio in checks:
        worst = np.unravel_index(int(np.argmax(ratio)), ratio.shape)
        if ratio[worst] > 1.0 + _AXIOM_RTOL:
            raise WeightAxiomError(axiom, _witness(points, *map(int, worst)), f"ratio {ratio[worst]:.6g} > 1")

    # the pair (0, y) always belongs to the group, so 1/w(0) is a lower bound
    origin_ratio = 1.0 / float(_evaluate(w, np.zeros((1, points.shape[1])))[0])
    constant = float(max(np.max(checks[1][1]), np.max(checks[2][1]), origin_ratio))
    logger.debug("Validated weight pair on %d points, moderateness constant %.6g", len(points), constant)
    return WeightPair(w=w, m=m, moderateness_constant=constant, dimension=points.shape[1])
