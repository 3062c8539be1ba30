"""Tests for the CoorbitSystem orchestrator in coorbit_system.py"""
import json
from unittest.mock import patch

import pytest

from coorbit_system import VERSION, CoorbitSystem
from errors import ConfigError
from models import Provenance, RatioReport, RunReport


def _ratio(passed):
    return RatioReport(name="stub", lhs=1.0, rhs=1.0, ratio=1.0, bound=1.0, passed=passed)


class TestCoorbitSystem:
    """Test suite for experiment registration, runs and report files"""

    def test_all_experiments_registered(self, quick_config):
        system = CoorbitSystem(quick_config)

        names = {d["name"] for d in system.get_experiment_definitions()}
        assert names == {
            "shannon-roundtrip", "young-check", "osc-report", "injectivity",
            "multiplier-bound", "modulation-suite", "derivative-check", "synthesis-bound",
        }
        print("✓ Test passed: eight subcommands available")

    @patch('coorbit_system.ShannonRoundtripExperiment')
    def test_run_wraps_reports(self, mock_experiment_class, quick_config):
        # Create a stub experiment with one failing report
        mock_instance = mock_experiment_class.return_value
        mock_instance.get_definition.return_value = {"name": "shannon-roundtrip"}
        mock_instance.execute.return_value = [_ratio(True), _ratio(False)]

        system = CoorbitSystem(quick_config)
        report = system.run("shannon-roundtrip", trials=None, seed=11)

        mock_instance.execute.assert_called_once_with(quick_config, seed=11)
        assert report.passed is False
        assert report.provenance.version == VERSION
        assert report.provenance.parameters["seed"] == 11
        assert "trials" in report.provenance.parameters
        assert "output_dir" not in report.provenance.parameters
        print("✓ Test passed: verdict is the conjunction of all reports")

    def test_provenance_is_sorted(self, quick_config):
        provenance = CoorbitSystem(quick_config).provenance("young-check", {"p": 2.0, "q": None})

        keys = list(provenance.parameters)
        assert keys == sorted(keys)
        assert "q" not in keys
        assert provenance.parameters["p_list"] == list(quick_config.P_LIST)
        assert provenance.seed == quick_config.SEED
        print("✓ Test passed: parameters sorted, tuples as lists")

    def test_unknown_command(self, quick_config):
        with pytest.raises(ConfigError):
            CoorbitSystem(quick_config).run("fourier-check")
        print("✓ Test passed: unknown command rejected")

    def test_young_check_end_to_end(self, quick_config):
        system = CoorbitSystem(quick_config)

        report = system.run("young-check", p=2.0, q=1.0, functions="box,gaussian")
        assert report.passed
        assert report.provenance.parameters["functions"] == "box,gaussian"
        print("✓ Test passed: real young-check run")


class TestWriteReport:
    """Test suite for CoorbitSystem.write_report()"""

    @pytest.fixture
    def report(self, quick_config):
        run = RunReport(
            provenance=Provenance(version=VERSION, command="derivative-check"),
            passed=True,
            reports=[_ratio(True)],
        )
        return CoorbitSystem(quick_config), run

    def test_json_into_directory(self, report, tmp_path):
        system, run = report

        path = system.write_report(run, str(tmp_path))
        assert path == tmp_path / "derivative-check.json"
        data = json.loads(path.read_text())
        assert data["pass"] is True
        assert path.read_text().endswith("\n")
        print("✓ Test passed: default file name <command>.json")

    def test_csv_to_file(self, report, tmp_path):
        system, run = report

        path = system.write_report(run, str(tmp_path / "nested" / "out.csv"), fmt="csv")
        assert path.read_text().splitlines()[0] == "command,derivative-check,pass,True"
        print("✓ Test passed: CSV written, parent created")

    def test_default_output_dir(self, report, quick_config):
        system, run = report

        path = system.write_report(run)
        assert str(path).startswith(quick_config.OUTPUT_DIR)
        print("✓ Test passed: falls back to OUTPUT_DIR")

    def test_unknown_format(self, report):
        system, run = report

        with pytest.raises(ConfigError):
            system.write_report(run, fmt="xml")
        print("✓ Test passed: unknown format rejected")
