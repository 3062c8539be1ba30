"""CLI subcommands: one per experiment, each writing a JSON or CSV report."""
import argparse
import json
import logging
import sys
from typing import Any, Dict, List, Optional

from config import Config, config
from coorbit_system import FORMATS, CoorbitSystem
from errors import CoorbitError

logger = logging.getLogger(__name__)

# Flags that override Config fields
CONFIG_FLAGS = {
    "omega": "OMEGA",
    "tau": "TAU",
    "halfwidth": "HALFWIDTH",
    "spacing": "SPACING",
    "p_list": "P_LIST",
    "trials": "TRIALS",
    "seed": "SEED",
    "threads": "THREADS",
}
# Parsed attributes that are not experiment parameters
GLOBAL_FLAGS = {"command", "config", "verbose", "out", "format"}


def _json_print(payload: Any) -> None:
    print(json.dumps(payload, indent=2, sort_keys=True))


def _add_common(cmd: argparse.ArgumentParser) -> None:
    cmd.add_argument("--config", type=str, default=None, help="Flat key=value configuration file")
    cmd.add_argument("--out", type=str, default=None, help="Report file, or directory for <command>.<format>")
    cmd.add_argument("--format", type=str, choices=FORMATS, default="json")
    cmd.add_argument("--threads", type=int, default=None)
    cmd.add_argument("--verbose", action="store_true")


def _add_shannon(cmd: argparse.ArgumentParser) -> None:
    cmd.add_argument("--omega", type=float, default=None)
    cmd.add_argument("--tau", type=float, default=None)
    cmd.add_argument("--halfwidth", type=float, default=None, help="Window half-width L")
    cmd.add_argument("--spacing", type=float, default=None, help="Grid spacing h")


def register_commands(sub: argparse._SubParsersAction) -> None:
    """Register the experiment subcommands on an existing subparsers group."""
    roundtrip_cmd = sub.add_parser("shannon-roundtrip", help="S(A(F)) = F over a seeded band-limited family")
    _add_shannon(roundtrip_cmd)
    roundtrip_cmd.add_argument("--p-list", type=str, default=None, help="Comma separated exponents")
    roundtrip_cmd.add_argument("--trials", type=int, default=None)
    roundtrip_cmd.add_argument("--seed", type=int, default=None)
    _add_common(roundtrip_cmd)

    young_cmd = sub.add_parser("young-check", help="Weighted Young inequality on preset pairs")
    young_cmd.add_argument("--p", type=float, default=None)
    young_cmd.add_argument("--q", type=float, default=None)
    young_cmd.add_argument("--r", type=float, default=None, help="Defaults to 1/p + 1/q - 1 = 1/r")
    young_cmd.add_argument("--weights", type=str, default=None, help="const, log, poly:a or exp:c")
    young_cmd.add_argument("--functions", type=str, default=None, help="Pair such as box,gaussian")
    _add_common(young_cmd)

    osc_cmd = sub.add_parser("osc-report", help="Oscillation norm scan of K or the mother atom")
    _add_shannon(osc_cmd)
    osc_cmd.add_argument("--target", type=str, choices=["K", "atom"], default="K")
    osc_cmd.add_argument("--Q", dest="q_box", type=str, default=None,
                         help="Box a,b; pass negative ends as --Q=-1,1")
    osc_cmd.add_argument("--p-list", dest="osc_p_list", type=str, default=None)
    osc_cmd.add_argument("--windows", type=str, default=None, help="Increasing half-widths, e.g. 16,32,64")
    osc_cmd.add_argument("--weights", type=str, default=None)
    _add_common(osc_cmd)

    injectivity_cmd = sub.add_parser("injectivity", help="Injectivity certificate of the coefficient map")
    _add_shannon(injectivity_cmd)
    injectivity_cmd.add_argument("--setting", type=str, choices=["shannon", "modulation"], default="shannon")
    injectivity_cmd.add_argument("--R", dest="radius", type=int, default=None, help="Modulation lattice radius")
    injectivity_cmd.add_argument("--band-dim", type=int, default=None)
    _add_common(injectivity_cmd)

    bound_cmd = sub.add_parser("multiplier-bound", help="L_t bounds of the inverse multiplier")
    bound_cmd.add_argument("--omega", type=float, default=None)
    bound_cmd.add_argument("--t-list", type=str, default=None)
    bound_cmd.add_argument("--epsilon", type=float, default=None)
    _add_common(bound_cmd)

    suite_cmd = sub.add_parser("modulation-suite", help="Kernel, voice transform and reproducing checks")
    _add_common(suite_cmd)

    derivative_cmd = sub.add_parser("derivative-check", help="Closed-form kernel derivatives")
    derivative_cmd.add_argument("--omega", type=float, default=None)
    derivative_cmd.add_argument("--n-max", type=int, default=None)
    _add_common(derivative_cmd)

    synthesis_cmd = sub.add_parser("synthesis-bound", help="Synthesis majorant for a sparse sequence")
    _add_shannon(synthesis_cmd)
    synthesis_cmd.add_argument("--p", type=float, default=None)
    synthesis_cmd.add_argument("--q", type=float, default=None)
    synthesis_cmd.add_argument("--weights", type=str, default=None)
    synthesis_cmd.add_argument("--nonzeros", type=int, default=None)
    synthesis_cmd.add_argument("--seed", type=int, default=None)
    _add_common(synthesis_cmd)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="coorbit", description="Coorbit atomic decomposition experiments")
    sub = parser.add_subparsers(dest="command", required=True)
    register_commands(sub)
    return parser


def resolve_config(args: argparse.Namespace, base: Config = config) -> Config:
    """Flags override the --config file, which overrides the environment defaults"""
    cfg = Config.from_file(args.config, base) if args.config else base
    overrides = {field: getattr(args, flag) for flag, field in CONFIG_FLAGS.items() if hasattr(args, flag)}
    return cfg.with_overrides(overrides)


def experiment_params(args: argparse.Namespace) -> Dict[str, Any]:
    """Remaining flags, renamed to the experiment keyword arguments"""
    params = {key: value for key, value in vars(args).items()
              if key not in GLOBAL_FLAGS and key not in CONFIG_FLAGS}
    if "osc_p_list" in params:
        params["p_list"] = params.pop("osc_p_list")
    return params


def handle(args: argparse.Namespace, system: CoorbitSystem) -> int:
    """Run the subcommand, write its report, return the exit code"""
    report = system.run(args.command, **experiment_params(args))
    path = system.write_report(report, args.out, args.format)
    _json_print({"command": args.command, "report": str(path), "pass": report.passed})
    return 0 if report.passed else 1


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    try:
        system = CoorbitSystem(resolve_config(args))
        return handle(args, system)
    except CoorbitError as e:
        logger.error("%s", e)
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
