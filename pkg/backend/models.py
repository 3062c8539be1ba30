import csv
import io
from typing import Any, Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, SerializeAsAny


class ReportModel(BaseModel):
    """Base for report models; `passed` serializes as "pass"."""
    model_config = ConfigDict(populate_by_name=True, ser_json_inf_nan="constants")

    def csv_table(self) -> Tuple[List[str], List[List[Any]]]:
        """Plot-ready rows; defaults to key/value pairs of the scalar fields"""
        rows = [[key, value] for key, value in self.model_dump(by_alias=True).items()
                if isinstance(value, (int, float, str, bool)) or value is None]
        return ["key", "value"], rows


class Provenance(BaseModel):
    """Everything needed to regenerate a report"""
    version: str                      # Package version
    command: str                      # Subcommand name
    parameters: Dict[str, Any] = {}   # All numeric parameters, sorted by key
    seed: Optional[int] = None        # Seed of the random test family


class YoungReport(ReportModel):
    """Weighted Young inequality ratio for one (H, F, p, q, r, weights) case"""
    label: str = ""            # Description of the function pair and weights
    p: float
    q: float
    r: float                   # inf is written as Infinity
    ratio: float               # ||H*F||_{r,m} / (||H||_{p,m} ||F||_{q,w})
    constant: float            # Moderateness constant of the weight pair
    passed: bool = Field(alias="pass")


class OscRow(BaseModel):
    """Oscillation norm on one window"""
    p: float
    L: float      # Window half-width
    norm: float   # ||osc_Q F||_{L_{p,w}[-L, L]}


class OscVerdict(BaseModel):
    """Finiteness verdict for one exponent"""
    p: float
    finite: bool                         # Increments decay by at least the configured factor
    expected_finite: bool                # What the theory predicts for this exponent
    decay_ratio: Optional[float] = None  # Ratio of the last two increments


class OscReport(ReportModel):
    """Oscillation norms over a sequence of growing windows"""
    target: str                 # Name of the scanned function
    q_box: List[float]          # Q = [q_box[0], q_box[1]]
    weight: str                 # Weight preset name
    exponents: List[float]
    windows: List[float]
    rows: List[OscRow] = []
    verdicts: List[OscVerdict] = []
    passed: bool = Field(alias="pass")

    def csv_table(self) -> Tuple[List[str], List[List[Any]]]:
        finite = {v.p: v.finite for v in self.verdicts}
        rows = [[row.p, row.L, row.norm, "finite" if finite.get(row.p) else "not finite"] for row in self.rows]
        return ["p", "L", "norm", "verdict"], rows


class RoundtripReport(ReportModel):
    """Atomic decomposition roundtrip S(A(F)) = F over a seeded family"""
    omega: float
    tau: float
    h: float
    L: float
    seed: int
    trials: int
    per_p_errors: Dict[str, float]  # Worst relative L_p error per exponent
    tolerance: float
    passed: bool = Field(alias="pass")

    def csv_table(self) -> Tuple[List[str], List[List[Any]]]:
        return ["p", "error"], [[p, e] for p, e in self.per_p_errors.items()]


class InjectivityCertificate(ReportModel):
    """Smallest singular value of the truncated coefficient map"""
    setting: str                     # "shannon" or "modulation"
    rows: int                        # Number of coefficient functionals
    cols: int                        # Basis dimension
    sigma_min: float
    sigma_max: float
    tolerance: float                 # sigma_min must exceed this
    spacing: float                   # Quadrature grid spacing
    halfwidth: float                 # Quadrature window half-width
    tau: Optional[float] = None      # Lattice step (Shannon)
    radius: Optional[int] = None     # Lattice radius R (modulation)
    passed: bool = Field(alias="pass")


class BoundReport(ReportModel):
    """Numeric L_t norm of the inverse multiplier against the analytic bound"""
    t: float
    epsilon: float
    omega: float
    numeric: float                  # ||F^-1[(chi |phi^|)^-2]||_t^t
    analytic: float                 # 2 eps A^t + B^t eps^(1-t) / (t-1)
    constant_c: float               # sup |phi^'| / |phi^|^3 on the band
    best_epsilon: float             # Minimizer of the analytic bound over the scan
    best_analytic: float
    passed: bool = Field(alias="pass")


class RatioReport(ReportModel):
    """Generic lhs <= bound check"""
    name: str
    lhs: float
    rhs: float
    ratio: float                     # lhs / rhs (0 when both vanish)
    bound: float                     # Allowed value of the ratio
    details: Dict[str, float] = {}
    passed: bool = Field(alias="pass")


class DerivativeReport(ReportModel):
    """Closed-form kernel derivatives against finite differences"""
    omega: float
    n_max: int
    points: int
    tolerance: float
    max_errors: Dict[str, float]              # Max relative error per order n
    norm_verdicts: Dict[str, bool] = {}       # "n=..,p=.." -> window increments decay
    passed: bool = Field(alias="pass")

    def csv_table(self) -> Tuple[List[str], List[List[Any]]]:
        return ["n", "max_rel_error"], [[n, e] for n, e in self.max_errors.items()]


class MembershipReport(ReportModel):
    """Residual ||F (.) K - F|| / ||F|| on the interior core"""
    residual: float
    threshold: float               # Allowed excess over the truncation floor
    floor: float = 0.0             # Residual of K itself on the same grid
    member: bool


class MixedSmoothnessReport(ReportModel):
    """Derivative cross-checks and S^1_p W norms of a reproducing-subspace function"""
    dx_discrepancy: float          # Staggered differences vs F (.) dK/dx
    domega_residual: float         # ||(dF/dw) (.) K - dF/dw|| / ||dF/dw||
    dx_floor: float = 0.0          # Both measures for K on the same grid
    domega_floor: float = 0.0
    norms: Dict[str, Dict[str, float]] = {}  # p -> {F, dx, dw, dxw}
    all_finite: bool
    tolerance: float
    passed: bool = Field(alias="pass")


class ModulationSuiteReport(ReportModel):
    """All modulation-setting checks on one configuration"""
    fft_error: float               # Max |FFT K - K^| on the comparison region
    voice_error: float             # ||U_g g - K|| / ||K||
    reproducing_residual: float    # ||K (.) K - K|| / ||K|| on the interior
    lem1_discrepancy: float
    lem1_ratio_error: float
    symmetry_defect: float
    omega_oracle_error: float      # Spectral dK/dw(0, .) vs sinc'
    isometry_error: float          # | ||U_g f|| - ||f|| | / ||f||
    witness_residual: float        # Membership residual of a 2D Gaussian
    mixed: MixedSmoothnessReport
    passed: bool = Field(alias="pass")


class RunReport(BaseModel):
    """Envelope written by the CLI"""
    provenance: Provenance
    passed: bool = Field(alias="pass")
    reports: List[SerializeAsAny[ReportModel]] = []

    model_config = ConfigDict(populate_by_name=True, ser_json_inf_nan="constants")

    def to_json(self) -> str:
        return self.model_dump_json(indent=2, by_alias=True)

    def to_csv(self) -> str:
        """One block per report: a kind line, a header and its rows"""
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(["command", self.provenance.command, "pass", self.passed])
        for report in self.reports:
            header, rows = report.csv_table()
            writer.writerow([type(report).__name__])
            writer.writerow(header)
            writer.writerows(rows)
        return buffer.getvalue()
