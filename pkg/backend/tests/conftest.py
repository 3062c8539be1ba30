"""Pytest configuration and shared fixtures"""
import sys
from pathlib import Path

import pytest

# Add backend directory to Python path
backend_dir = Path(__file__).parent.parent
sys.path.insert(0, str(backend_dir))

from config import Config  # noqa: E402
from kernels import ShannonSetting  # noqa: E402
from pou import make_pou_1d  # noqa: E402
from sampling import Grid1D, Grid2D  # noqa: E402
from testfunctions import random_family  # noqa: E402


@pytest.fixture
def shannon():
    """Paley-Wiener setting with omega = 1 (Nyquist step 1/2)"""
    return ShannonSetting(1.0)


@pytest.fixture
def window():
    """[-32, 32] at h = 1/64; fine enough for quadrature coefficients"""
    return Grid1D.symmetric(32.0, 1 / 64)


@pytest.fixture
def hat_pou(window):
    return make_pou_1d(0.5, window)


@pytest.fixture
def family(shannon, window):
    """Three seeded band-limited functions, L2-normalized"""
    return random_family(shannon, window, seed=7, trials=3)


@pytest.fixture
def mod_grid():
    """Time-frequency grid [-2, 2] x [-8, 8] at 1/32 on both axes"""
    return Grid2D.symmetric(2.0, 8.0, 1 / 32)


@pytest.fixture
def quick_config(tmp_path):
    """Small configuration for orchestration tests"""
    return Config(HALFWIDTH=16.0, SPACING=1 / 32, TRIALS=2, OUTPUT_DIR=str(tmp_path))
