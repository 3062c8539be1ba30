"""Tests for configuration loading in config.py"""
import pytest

from config import Config, parse_float_list
from errors import ConfigError


class TestParseFloatList:
    """Test suite for parse_float_list()"""

    def test_parses_comma_list(self):
        assert parse_float_list("1.5, 2 ,3") == (1.5, 2.0, 3.0)
        print("✓ Test passed: whitespace tolerated")

    @pytest.mark.parametrize("text", ["", "a,b", ","])
    def test_rejects_bad_lists(self, text):
        with pytest.raises(ConfigError):
            parse_float_list(text)
        print(f"✓ Test passed: '{text}' rejected")


class TestConfigFile:
    """Test suite for Config.from_file()"""

    def test_key_value_file(self, tmp_path):
        path = tmp_path / "run.cfg"
        path.write_text("omega = 2\n# comment line\np_list = 1.5,2  # trailing comment\n\ntrials=3\n")

        cfg = Config.from_file(path, base=Config(OMEGA=1.0, TRIALS=20))
        assert cfg.OMEGA == pytest.approx(2.0)
        assert cfg.P_LIST == (1.5, 2.0)
        assert cfg.TRIALS == 3 and isinstance(cfg.TRIALS, int)
        print("✓ Test passed: file values applied with field types")

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError):
            Config.from_file(tmp_path / "absent.cfg")
        print("✓ Test passed: missing file rejected")

    def test_unknown_key(self, tmp_path):
        path = tmp_path / "run.cfg"
        path.write_text("bandwidth = 2\n")

        with pytest.raises(ConfigError):
            Config.from_file(path)
        print("✓ Test passed: unknown key rejected")

    def test_line_without_equals(self, tmp_path):
        path = tmp_path / "run.cfg"
        path.write_text("omega 2\n")

        with pytest.raises(ConfigError) as excinfo:
            Config.from_file(path)
        assert ":1:" in str(excinfo.value)
        print(f"✓ Test passed: {excinfo.value}")


class TestOverrides:
    """Test suite for Config.with_overrides()"""

    def test_coercion(self):
        base = Config(HALFWIDTH=64.0)

        cfg = base.with_overrides({"tau": "0.25", "seed": 3, "p_list": [2, 4], "halfwidth": None})
        assert cfg.TAU == pytest.approx(0.25)
        assert cfg.SEED == 3
        assert cfg.P_LIST == (2.0, 4.0)
        assert cfg.HALFWIDTH == pytest.approx(64.0)
        assert cfg is not base
        print("✓ Test passed: strings and lists coerced, None skipped")

    def test_invalid_value(self):
        with pytest.raises(ConfigError):
            Config().with_overrides({"trials": "many"})
        print("✓ Test passed: non-numeric trials rejected")
