import os
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Tuple, Union, Dict, Any
from dotenv import load_dotenv

from errors import ConfigError

# Load environment variables from .env file
load_dotenv()


def _env_float(name: str, default: float) -> float:
    return float(os.getenv(name, default))


def _env_int(name: str, default: int) -> int:
    return int(os.getenv(name, default))


def parse_float_list(text: str) -> Tuple[float, ...]:
    """Parse a comma separated list such as '1.5,2,3,4'"""
    try:
        values = tuple(float(part) for part in text.split(",") if part.strip())
    except ValueError as e:
        raise ConfigError(f"Cannot parse number list '{text}': {e}") from e
    if not values:
        raise ConfigError(f"Empty number list '{text}'")
    return values


@dataclass
class Config:
    """Configuration settings for the coorbit experiments"""
    # Shannon setting
    OMEGA: float = _env_float("COORBIT_OMEGA", 1.0)          # Half bandwidth of the band [-omega, omega]
    TAU: float = _env_float("COORBIT_TAU", 0.5)              # Lattice step of the hat partition
    HALFWIDTH: float = _env_float("COORBIT_HALFWIDTH", 64.0)  # Window [-L, L]
    SPACING: float = _env_float("COORBIT_SPACING", 1 / 64)   # Grid spacing h

    # Seminorm family and random trials
    P_LIST: Tuple[float, ...] = field(
        default_factory=lambda: parse_float_list(os.getenv("COORBIT_P_LIST", "1.5,2,3,4"))
    )
    TRIALS: int = _env_int("COORBIT_TRIALS", 20)   # Number of seeded random test functions
    SEED: int = _env_int("COORBIT_SEED", 7)        # Base seed for reproducible runs
    THREADS: int = _env_int("COORBIT_THREADS", 1)  # Cap on worker threads

    # Modulation setting
    MOD_HALFWIDTH_X: float = 2.0       # x-window [-2, 2]
    MOD_HALFWIDTH_OMEGA: float = 8.0   # omega-window [-8, 8]
    MOD_SPACING: float = 1 / 32        # Spacing on both axes
    MOD_RADIUS: int = 4                # Lattice truncation radius R

    # Tolerances
    REPRODUCING_TOL: float = 5e-3
    JPHI_TOL: float = 1e-3
    ROUNDTRIP_TOL: float = 1e-2
    SAMPLING_TOL: float = 1e-6
    YOUNG_TOL: float = 0.05
    MODULATION_TOL: float = 2e-2
    MODULATION_FFT_TOL: float = 0.03
    BAND_ENERGY_TOL: float = 1e-6
    MIXED_SMOOTHNESS_TOL: float = 5e-2
    DECAY_FACTOR: float = 1.25     # Increment decay required for a "finite" oscillation verdict

    # Output location for reports
    OUTPUT_DIR: str = os.getenv("COORBIT_OUTPUT_DIR", "./reports")

    @classmethod
    def from_file(cls, path: Union[str, Path], base: "Config" = None) -> "Config":
        """
        Read a flat key=value file on top of the environment defaults.

        Args:
            path: Path to the configuration file
            base: Optional configuration to override (defaults to a fresh Config)

        Returns:
            New Config with the file values applied
        """
        path = Path(path)
        if not path.is_file():
            raise ConfigError(f"Config file {path} does not exist")

        overrides: Dict[str, str] = {}
        for number, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{number}: expected key=value, got '{raw}'")
            key, value = (part.strip() for part in line.split("=", 1))
            overrides[key.upper()] = value

        return (base or cls()).with_overrides(overrides)

    def with_overrides(self, overrides: Dict[str, Any]) -> "Config":
        """Return a copy with the given fields replaced, coercing strings to field types"""
        known = {f.name: f for f in fields(self)}
        updates = {}
        for key, value in overrides.items():
            if value is None:
                continue
            name = key.upper()
            if name not in known:
                raise ConfigError(f"Unknown configuration key '{key}'")
            updates[name] = self._coerce(name, value)
        return replace(self, **updates)

    def _coerce(self, name: str, value: Any) -> Any:
        current = getattr(self, name)
        try:
            if isinstance(current, tuple):
                return parse_float_list(value) if isinstance(value, str) else tuple(float(v) for v in value)
            if isinstance(current, bool):
                return str(value).lower() in ("1", "true", "yes")
            if isinstance(current, int):
                return int(value)
            if isinstance(current, float):
                return float(value)
        except (TypeError, ValueError) as e:
            raise ConfigError(f"Invalid value for {name}: {value!r}") from e
        return str(value)


config = Config()
