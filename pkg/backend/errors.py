from typing import Optional, Tuple, Any


class CoorbitError(Exception):
    """Base class for all errors raised by the coorbit backend"""


class WeightAxiomError(CoorbitError, ValueError):
    """A weight pair violates one of the control/moderate weight axioms"""

    def __init__(self, axiom: str, witness: Tuple[Any, ...], detail: str = ""):
        self.axiom = axiom
        self.witness = witness
        message = f"Weight axiom '{axiom}' violated at {witness}"
        if detail:
            message += f": {detail}"
        super().__init__(message)


class GridMismatchError(CoorbitError, ValueError):
    """Two sampled functions do not live on the same grid"""


class AlignmentError(CoorbitError, ValueError):
    """A shift, box or lattice is not aligned with the grid spacing"""


class BandLimitError(CoorbitError, ValueError):
    """Input carries too much energy outside the frequency band"""

    def __init__(self, energy_ratio: float, threshold: float):
        self.energy_ratio = energy_ratio
        self.threshold = threshold
        super().__init__(
            f"Out-of-band energy ratio {energy_ratio:.3e} exceeds {threshold:.1e}"
        )


class ExponentRelationError(CoorbitError, ValueError):
    """Exponents do not satisfy the required Young/Hoelder relation"""


class NumericalOverflowError(CoorbitError, ArithmeticError):
    """A norm or sum evaluated to a non-finite number"""


class ResolutionError(CoorbitError, ValueError):
    """Grid resolution is too coarse for the requested computation"""


class PreconditionError(CoorbitError, ValueError):
    """An operation precondition does not hold for the given input"""


class IndexMismatchError(CoorbitError, ValueError):
    """Coefficient index set does not match the atom family"""


class RankDeficiencyError(CoorbitError, ArithmeticError):
    """Basis became rank deficient during orthonormalization"""

    def __init__(self, condition: float, threshold: Optional[float] = None):
        self.condition = condition
        message = f"Basis condition number {condition:.3e}"
        if threshold is not None:
            message += f" exceeds {threshold:.1e}"
        super().__init__(message)


class ConfigError(CoorbitError, ValueError):
    """Configuration file or value could not be parsed"""
