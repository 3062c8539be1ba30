import logging
from dataclasses import asdict
from pathlib import Path
from typing import Any, Dict, List, Optional

from config import Config
from errors import ConfigError
from experiments import (
    DerivativeCheckExperiment,
    ExperimentManager,
    InjectivityExperiment,
    ModulationSuiteExperiment,
    MultiplierBoundExperiment,
    OscReportExperiment,
    ShannonRoundtripExperiment,
    SynthesisBoundExperiment,
    YoungCheckExperiment,
)
from models import Provenance, ReportModel, RunReport

logger = logging.getLogger(__name__)

VERSION = "0.1.0"
FORMATS = ("json", "csv")


class CoorbitSystem:
    """Main orchestrator for the coorbit experiments"""

    def __init__(self, config: Config):
        self.config = config

        # Register experiments
        self.experiment_manager = ExperimentManager()
        for experiment in (
            ShannonRoundtripExperiment(),
            YoungCheckExperiment(),
            OscReportExperiment(),
            InjectivityExperiment(),
            MultiplierBoundExperiment(),
            ModulationSuiteExperiment(),
            DerivativeCheckExperiment(),
            SynthesisBoundExperiment(),
        ):
            self.experiment_manager.register_experiment(experiment)

    def provenance(self, command: str, params: Dict[str, Any]) -> Provenance:
        """Configuration and experiment parameters, sorted by key"""
        merged = {key.lower(): value for key, value in asdict(self.config).items() if key != "OUTPUT_DIR"}
        merged.update({key: value for key, value in params.items() if value is not None})
        parameters = {key: list(value) if isinstance(value, tuple) else value
                      for key, value in sorted(merged.items())}
        return Provenance(version=VERSION, command=command, parameters=parameters, seed=self.config.SEED)

    def run(self, command: str, **params) -> RunReport:
        """
        Run one experiment and wrap its reports.

        Args:
            command: Experiment name, e.g. "shannon-roundtrip"
            **params: Experiment specific parameters; None values fall back to defaults

        Returns:
            RunReport whose verdict passes iff every report passes
        """
        kwargs = {key: value for key, value in params.items() if value is not None}
        reports: List[ReportModel] = self.experiment_manager.execute_experiment(command, self.config, **kwargs)
        passed = all(getattr(report, "passed", True) for report in reports)
        logger.info("%s finished: %d reports, pass=%s", command, len(reports), passed)
        return RunReport(provenance=self.provenance(command, params), passed=passed, reports=reports)

    def write_report(self, report: RunReport, out: Optional[str] = None, fmt: str = "json") -> Path:
        """Write the report to `out` (a file, or a directory for the default name)"""
        if fmt not in FORMATS:
            raise ConfigError(f"Unknown report format '{fmt}', choose from {FORMATS}")
        target = Path(out or self.config.OUTPUT_DIR)
        if target.suffix == "":
            target = target / f"{report.provenance.command}.{fmt}"
        target.parent.mkdir(parents=True, exist_ok=True)
        payload = report.to_json() if fmt == "json" else report.to_csv()
        target.write_text(payload + ("" if payload.endswith("\n") else "\n"), encoding="utf-8")
        logger.debug("Report written to %s", target)
        return target

    def get_experiment_definitions(self) -> List[Dict[str, Any]]:
        return self.experiment_manager.get_definitions()
