"""Experiment registry: one Experiment per CLI subcommand, dispatched by name."""
import logging
from abc import ABC, abstractmethod
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from atoms import analysis_constant, build_atoms, roundtrip, synthesis_bound_check
from config import Config, parse_float_list
from convolve import exponent_relation, reproducing_residual, weighted_young_check
from diagnostics import (
    derivative_check,
    mixed_smoothness_check,
    omega_derivative_oracle,
    osc_norm_scan,
    sobolev_domination_check,
)
from discretize import (
    injectivity_certificate_modulation,
    injectivity_certificate_shannon,
    j_phi_closed_form_check,
    left_inverse_check,
    left_inverse_lr_bound,
    multiplier_lt_bound,
    sampling_identity_check,
)
from errors import ConfigError, PreconditionError
from kernels import ModulationSetting, ShannonSetting, modulation_kernel, shannon_kernel, symmetry_defect
from models import ModulationSuiteReport, RatioReport, ReportModel
from pou import make_pou_1d
from sampling import Grid1D, Grid2D, SampledFunction1D, lp_norm, translate
from testfunctions import box, gaussian, gaussian_2d, random_family, sparse_coefficients, triangle
from voice import (
    full_period_grid,
    isometry_defect,
    kernel_fourier_discrepancy,
    lem1_fourier_identity_check,
    omega_core,
    relative_on_core,
    reproducing_membership,
    voice_modulation,
)
from weights import default_sample_points, validate_weight_pair, weight_preset

logger = logging.getLogger(__name__)

Factory = Callable[[Grid1D], SampledFunction1D]

# (label, H, F, p, q, weight preset); H and F are shifted off the origin so weights matter
YOUNG_CASES: List[Tuple[str, Factory, Factory, float, float, str]] = [
    ("gaussian*gaussian", gaussian, gaussian, 1.5, 1.5, "const"),
    ("box*box", box, box, 1.5, 1.5, "const"),
    ("gaussian*box", gaussian, box, 1.0, 2.0, "const"),
    ("triangle*gaussian", triangle, gaussian, 2.0, 2.0, "const"),
    ("box*triangle", box, triangle, 1.0, 1.0, "const"),
    ("gaussian*gaussian", gaussian, gaussian, 1.5, 1.5, "log"),
    ("box*gaussian", box, gaussian, 1.0, 2.0, "log"),
    ("triangle*box", triangle, box, 2.0, 2.0, "log"),
    ("gaussian*triangle", gaussian, triangle, 1.5, 1.5, "poly:1"),
    ("box*box", box, box, 4 / 3, 4 / 3, "poly:0.5"),
]
FUNCTIONS: Dict[str, Factory] = {"gaussian": gaussian, "box": box, "triangle": triangle}


class Experiment(ABC):
    """Abstract base class for all experiments"""

    @abstractmethod
    def get_definition(self) -> Dict[str, Any]:
        """Return name, description and accepted parameters"""
        pass

    @abstractmethod
    def execute(self, cfg: Config, **kwargs) -> List[ReportModel]:
        """Run the experiment and return its reports"""
        pass


def _shannon_grid(cfg: Config) -> Grid1D:
    return Grid1D.symmetric(cfg.HALFWIDTH, cfg.SPACING)


class ShannonRoundtripExperiment(Experiment):
    """Atomic decomposition roundtrip and the Shannon identities it rests on"""

    def get_definition(self) -> Dict[str, Any]:
        return {
            "name": "shannon-roundtrip",
            "description": "S(A(F)) = F over a seeded band-limited family, with K*K = K, "
                           "the J_phi closed form, the left inverse and the sampling identity",
            "parameters": ["omega", "tau", "halfwidth", "spacing", "p_list", "trials", "seed"],
        }

    def execute(self, cfg: Config, **kwargs) -> List[ReportModel]:
        setting = ShannonSetting(cfg.OMEGA)
        window = _shannon_grid(cfg)
        pou = make_pou_1d(cfg.TAU, window)
        family = random_family(setting, window, cfg.SEED, cfg.TRIALS)

        kernel = shannon_kernel(setting, window)
        residual = reproducing_residual(kernel, kernel)
        reproducing = RatioReport(
            name="reproducing_identity",
            lhs=residual,
            rhs=1.0,
            ratio=residual,
            bound=cfg.REPRODUCING_TOL,
            passed=bool(residual < cfg.REPRODUCING_TOL),
        )

        atoms = build_atoms(setting, pou)
        members = [kernel * (1.0 / lp_norm(kernel, 2))] + family
        return [
            roundtrip(members, atoms, cfg.P_LIST, cfg.SEED, cfg.ROUNDTRIP_TOL, threads=cfg.THREADS),
            reproducing,
            j_phi_closed_form_check(members, pou, setting, cfg.JPHI_TOL),
            left_inverse_check(members, pou, setting, cfg.JPHI_TOL),
            sampling_identity_check(members, setting, window, cfg.SAMPLING_TOL),
            analysis_constant(family, pou),
        ]


class YoungCheckExperiment(Experiment):
    """Weighted Young inequality on preset function pairs"""

    def get_definition(self) -> Dict[str, Any]:
        return {
            "name": "young-check",
            "description": "||H*F||_{r,m} <= C ||H||_{p,m} ||F||_{q,w} on preset pairs",
            "parameters": ["p", "q", "r", "weights", "functions"],
        }

    def execute(self, cfg: Config, p: Optional[float] = None, q: Optional[float] = None,
                r: Optional[float] = None, weights: Optional[str] = None,
                functions: Optional[str] = None, **kwargs) -> List[ReportModel]:
        if p is None and q is None:
            cases = YOUNG_CASES
        else:
            if p is None or q is None:
                raise PreconditionError("young-check needs both --p and --q")
            names = (functions or "box,box").split(",")
            if len(names) != 2 or any(n not in FUNCTIONS for n in names):
                raise PreconditionError(f"Unknown function pair '{functions}', choose from {sorted(FUNCTIONS)}")
            cases = [(f"{names[0]}*{names[1]}", FUNCTIONS[names[0]], FUNCTIONS[names[1]], p, q, weights or "const")]

        grid = Grid1D.symmetric(8.0, 1 / 64)
        reports = []
        for label, make_h, make_f, p_i, q_i, preset in cases:
            r_i = exponent_relation(p_i, q_i)
            if r is not None and len(cases) == 1:
                r_i = r
            weight = weight_preset(preset)
            pair = validate_weight_pair(weight, weight, default_sample_points())
            H = translate(make_h(grid), 1.5)
            F = translate(make_f(grid), -1.0)
            reports.append(weighted_young_check(H, F, p_i, q_i, r_i, pair, cfg.YOUNG_TOL, f"{label} [{preset}]"))
        return reports


class OscReportExperiment(Experiment):
    """Oscillation norms of K or the mother atom over growing windows"""

    def get_definition(self) -> Dict[str, Any]:
        return {
            "name": "osc-report",
            "description": "||osc_Q F||_{L_{p,w}[-L, L]} scan with finiteness verdicts",
            "parameters": ["target", "q_box", "p_list", "windows", "weights"],
        }

    def execute(self, cfg: Config, target: str = "K", q_box: str = "-1,1", p_list: Optional[str] = None,
                windows: str = "16,32,64", weights: str = "const", **kwargs) -> List[ReportModel]:
        setting = ShannonSetting(cfg.OMEGA)
        Q = parse_float_list(q_box)
        if len(Q) != 2:
            raise ConfigError(f"Q box needs two numbers, got '{q_box}'")
        exponents = parse_float_list(p_list) if p_list else (1.0,) + tuple(cfg.P_LIST)
        scan_windows = parse_float_list(windows)
        weight = weight_preset(weights)
        margin = max(abs(Q[0]), abs(Q[1]))

        if target == "K":
            grid = Grid1D.symmetric(scan_windows[-1] + 2.0 * margin, cfg.SPACING)
            F = shannon_kernel(setting, grid)
        elif target == "atom":
            window = Grid1D.symmetric(max(cfg.HALFWIDTH, 0.5 * (scan_windows[-1] + 2.0 * margin)), cfg.SPACING)
            F = build_atoms(setting, make_pou_1d(cfg.TAU, window)).mother
        else:
            raise ConfigError(f"Unknown osc-report target '{target}' (use K or atom)")

        report = osc_norm_scan(F, (Q,), exponents, scan_windows, weight=weight, target=target)
        sobolev = sobolev_domination_check(F, (Q,), 2.0, weight)
        return [report, sobolev]


class InjectivityExperiment(Experiment):
    """Smallest singular values of truncated coefficient maps"""

    def get_definition(self) -> Dict[str, Any]:
        return {
            "name": "injectivity",
            "description": "Injectivity certificates for the Shannon hats or the modulation boxes",
            "parameters": ["setting", "tau", "radius", "band_dim", "basis_radius"],
        }

    def execute(self, cfg: Config, setting: str = "shannon", band_dim: int = 64, radius: Optional[int] = None,
                basis_radius: int = 2, **kwargs) -> List[ReportModel]:
        if setting == "modulation":
            modulation = ModulationSetting(radius=radius or cfg.MOD_RADIUS)
            return [injectivity_certificate_modulation(modulation, basis_radius=basis_radius)]
        if setting != "shannon":
            raise ConfigError(f"Unknown setting '{setting}' (use shannon or modulation)")

        shannon = ShannonSetting(cfg.OMEGA)
        window = _shannon_grid(cfg)
        certificate = injectivity_certificate_shannon(make_pou_1d(cfg.TAU, window), shannon, band_dim,
                                                      threads=cfg.THREADS)
        if cfg.TAU <= shannon.default_lattice_step * (1.0 + 1e-12):
            return [certificate]
        # above the Nyquist step the verdict is the degradation against the Nyquist lattice
        reference = injectivity_certificate_shannon(make_pou_1d(shannon.default_lattice_step, window), shannon,
                                                    band_dim, threads=cfg.THREADS)
        degraded = certificate.model_copy(update={"passed": bool(certificate.sigma_min < reference.sigma_min)})
        return [degraded, reference]


class MultiplierBoundExperiment(Experiment):
    """L_t norms of the inverse multiplier and the L_r continuity of the left inverse"""

    def get_definition(self) -> Dict[str, Any]:
        return {
            "name": "multiplier-bound",
            "description": "Numeric ||F^-1[(chi |phi^|)^-2]||_t^t against the analytic bound",
            "parameters": ["t_list", "epsilon"],
        }

    def execute(self, cfg: Config, t_list: str = "1.5,2,3", epsilon: float = 0.1, **kwargs) -> List[ReportModel]:
        setting = ShannonSetting(cfg.OMEGA)
        reports: List[ReportModel] = [multiplier_lt_bound(t, epsilon, setting) for t in parse_float_list(t_list)]
        family = random_family(setting, _shannon_grid(cfg), cfg.SEED, cfg.TRIALS)
        reports.append(left_inverse_lr_bound(epsilon, setting, family))
        return reports


class ModulationSuiteExperiment(Experiment):
    """Kernel, voice transform and reproducing-subspace checks for the box window"""

    def get_definition(self) -> Dict[str, Any]:
        return {
            "name": "modulation-suite",
            "description": "FFT oracle, U_g g = K, K (.) K = K, the Fourier factorization and mixed smoothness",
            "parameters": [],
        }

    def execute(self, cfg: Config, **kwargs) -> List[ReportModel]:
        grid = Grid2D.symmetric(cfg.MOD_HALFWIDTH_X, cfg.MOD_HALFWIDTH_OMEGA, cfg.MOD_SPACING)
        K = modulation_kernel(grid)
        signal_grid = Grid1D.symmetric(cfg.MOD_HALFWIDTH_X + 1.0, cfg.MOD_SPACING)
        voiced = voice_modulation(box(signal_grid), grid)
        voice_error = relative_on_core(voiced.values, K.values, omega_core(grid))

        membership = reproducing_membership(K, threads=cfg.THREADS)
        misfit, ratio_error = lem1_fourier_identity_check(K, check_membership=False)
        witness = reproducing_membership(gaussian_2d(grid), threads=cfg.THREADS)

        isometry_signal = gaussian(Grid1D.symmetric(4.0, 1 / 128), normalize=True)
        isometry = isometry_defect(isometry_signal, full_period_grid(isometry_signal.grid, 3.0, 1 / 8))

        mixed = mixed_smoothness_check(K, threads=cfg.THREADS)
        fft_error = kernel_fourier_discrepancy()
        oracle = omega_derivative_oracle()
        defect = symmetry_defect(grid)

        passed = all([
            fft_error < cfg.MODULATION_FFT_TOL,
            voice_error < cfg.MODULATION_TOL,
            membership.residual < cfg.MODULATION_TOL,
            misfit < cfg.MODULATION_TOL,
            ratio_error < cfg.MODULATION_TOL,
            defect < 1e-12,
            oracle < 1e-4,
            isometry < 1e-3,
            not witness.member,
            mixed.passed,
        ])
        return [ModulationSuiteReport(
            fft_error=fft_error,
            voice_error=voice_error,
            reproducing_residual=membership.residual,
            lem1_discrepancy=misfit,
            lem1_ratio_error=ratio_error,
            symmetry_defect=defect,
            omega_oracle_error=oracle,
            isometry_error=isometry,
            witness_residual=witness.residual,
            mixed=mixed,
            passed=bool(passed),
        )]


class DerivativeCheckExperiment(Experiment):
    """Closed-form Shannon kernel derivatives"""

    def get_definition(self) -> Dict[str, Any]:
        return {
            "name": "derivative-check",
            "description": "K^(n) closed forms against central differences and their L_p window growth",
            "parameters": ["n_max"],
        }

    def execute(self, cfg: Config, n_max: int = 3, **kwargs) -> List[ReportModel]:
        return [derivative_check(ShannonSetting(cfg.OMEGA), n_max=n_max)]


class SynthesisBoundExperiment(Experiment):
    """Synthesis majorant for sparse coefficient sequences"""

    def get_definition(self) -> Dict[str, Any]:
        return {
            "name": "synthesis-bound",
            "description": "||S(c)||_{p,m} against the oscillation majorant for a sparse seeded c",
            "parameters": ["p", "q", "weights", "nonzeros"],
        }

    def execute(self, cfg: Config, p: Optional[float] = None, q: Optional[float] = None,
                weights: Optional[str] = None, nonzeros: int = 10, **kwargs) -> List[ReportModel]:
        setting = ShannonSetting(cfg.OMEGA)
        atoms = build_atoms(setting, make_pou_1d(cfg.TAU, _shannon_grid(cfg)))
        weight = weight_preset(weights or "const")
        pair = validate_weight_pair(weight, weight, default_sample_points())
        c = sparse_coefficients(atoms.pou, nonzeros, cfg.SEED)
        return [synthesis_bound_check(c, atoms, p or 2.0, q or 2.0, pair)]


class ExperimentManager:
    """Manages the available experiments"""

    def __init__(self):
        self.experiments: Dict[str, Experiment] = {}

    def register_experiment(self, experiment: Experiment):
        """Register any experiment that implements the Experiment interface"""
        name = experiment.get_definition().get("name")
        if not name:
            raise ValueError("Experiment must have a 'name' in its definition")
        self.experiments[name] = experiment

    def get_definitions(self) -> list:
        return [experiment.get_definition() for experiment in self.experiments.values()]

    def names(self) -> Sequence[str]:
        return list(self.experiments)

    def execute_experiment(self, name: str, cfg: Config, **kwargs) -> List[ReportModel]:
        """Execute an experiment by name with given parameters"""
        if name not in self.experiments:
            raise ConfigError(f"Experiment '{name}' not found")
        logger.info("Running %s", name)
        return self.experiments[name].execute(cfg, **kwargs)
