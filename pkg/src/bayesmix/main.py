import argparse
import logging
import sys
from pathlib import Path
from typing import Any

import structlog

from bayesmix.commands.errors import exit_code_for
from bayesmix.commands.evaluate import cmd_evaluate
from bayesmix.commands.fit import cmd_fit, load_config_file, resolve_config
from bayesmix.commands.identify import cmd_identify
from bayesmix.commands.simulate import cmd_simulate
from bayesmix.config import settings
from bayesmix.errors import BayesmixError, ConfigurationError
from bayesmix.schemas.fit import BnbParams

log = structlog.get_logger()


def configure_logging(level: str | None = None, fmt: str | None = None) -> None:
    level = (level or settings.log_level).upper()
    renderer = (
        structlog.dev.ConsoleRenderer()
        if (fmt or settings.log_format) == "console"
        else structlog.processors.JSONRenderer()
    )
    structlog.configure(
        processors=[
            structlog.processors.add_log_level,
            structlog.processors.TimeStamper(fmt="iso"),
            renderer,
        ],
        wrapper_class=structlog.make_filtering_bound_logger(
            logging.getLevelNamesMapping().get(level, logging.INFO)
        ),
        logger_factory=structlog.PrintLoggerFactory(file=sys.stderr),
        cache_logger_on_first_use=False,
    )


def _csv_list(text: str) -> list[str]:
    return [item.strip() for item in text.split(",") if item.strip()]


def _add_model_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", type=Path, help="TOML file with fit options")
    parser.add_argument("--mode", choices=["fixed-k", "sfm", "mfm"])
    parser.add_argument("--k", type=int, help="components (fixed-k, sfm) or starting K (mfm)")
    parser.add_argument("--gamma", type=float, help="fixed Dirichlet parameter")
    parser.add_argument("--alpha", type=float, help="dynamic MFM: gamma_K = alpha / K")
    parser.add_argument("--bnb", help="BNB prior on K - 1 as 'a_l,a_pi,b_pi' (default 1,4,3)")
    parser.add_argument("--k-max", type=int, dest="k_max", help="truncation of the prior on K")
    parser.add_argument("--c", type=float, help="covariance prior shrinkage (default 2.5)")
    parser.add_argument("--phi", type=float, help="prior covariance scale (default 0.75)")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--columns", type=_csv_list, help="feature columns by name or position")
    parser.add_argument("--label-col", dest="label_col", help="class column excluded from y")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bayesmix", description="Bayesian finite mixture clustering"
    )
    parser.add_argument("--log-level", dest="log_level")
    parser.add_argument("--log-format", dest="log_format", choices=["json", "console"])
    sub = parser.add_subparsers(dest="command", required=True)

    fit = sub.add_parser("fit", help="run the Gibbs or telescoping sampler on a CSV file")
    fit.add_argument("data", type=Path)
    _add_model_flags(fit)
    fit.add_argument("--iters", type=int, help="total sweeps M (default 30000)")
    fit.add_argument("--burnin", type=int, help="discarded sweeps (default 5000)")
    fit.add_argument("--thinning", type=int)
    fit.add_argument(
        "--store-assignments", dest="store_assignments", action=argparse.BooleanOptionalAction
    )
    fit.add_argument(
        "--permutation-step", dest="permutation_step", action=argparse.BooleanOptionalAction
    )
    fit.add_argument("--chains", type=int, help="independent chains with seeds seed..seed+n-1")
    fit.add_argument("--out", type=Path, help="output directory (default BAYESMIX_OUTPUT_DIR)")

    identify = sub.add_parser("identify", help="relabel draws and extract partitions")
    identify.add_argument("draws", type=Path)
    identify.add_argument("--out", type=Path, help="default: directory of the draws file")
    identify.add_argument("--kplus", default="auto", help="'auto' (posterior mode) or an integer")
    identify.add_argument("--functional", default="mu", choices=["mu", "mu1"])
    identify.add_argument("--seed", type=int, default=1)

    evaluate = sub.add_parser("evaluate", help="ARI, MCR and confusion table against truth")
    evaluate.add_argument("partition", type=Path)
    evaluate.add_argument("truth", type=Path)
    evaluate.add_argument("--label-col", dest="label_col", default="class")
    evaluate.add_argument("--partition-col", dest="partition_col")
    evaluate.add_argument("--out", type=Path, help="metrics JSON (default: next to partition)")

    simulate = sub.add_parser("simulate", help="draw synthetic data from the prior")
    simulate.add_argument("reference", type=Path, help="data file the default prior is built on")
    _add_model_flags(simulate)
    simulate.add_argument("--n", type=int, required=True)
    simulate.add_argument("--out", type=Path, required=True)
    return parser


_FIT_KEYS = (
    "mode", "k", "gamma", "alpha", "k_max", "c", "phi", "seed", "columns", "label_col",
    "iters", "burnin", "thinning", "store_assignments", "permutation_step", "chains",
)  # fmt: skip


def _overrides(args: argparse.Namespace) -> dict[str, Any]:
    values = {key: getattr(args, key, None) for key in _FIT_KEYS}
    if args.bnb is not None:
        try:
            values["bnb"] = BnbParams.parse(args.bnb)
        except ValueError as e:
            raise ConfigurationError(f"--bnb: {e}") from e
    return values


def _fmt_distribution(distribution: dict[int, float]) -> str:
    return ", ".join(f"{k}: {f:.4f}" for k, f in distribution.items())


def _run(args: argparse.Namespace) -> None:
    match args.command:
        case "fit":
            config = resolve_config(load_config_file(args.config), _overrides(args))
            for result in cmd_fit(args.data, config, args.out or settings.output_dir):
                print(f"chain {result.manifest.chain_index} (seed {result.manifest.seed})")
                print(f"  K_plus distribution: {_fmt_distribution(result.kplus)}")
                for kind, path in result.manifest.artifact_paths.items():
                    print(f"  {kind}: {path}")
        case "identify":
            kplus = args.kplus if args.kplus == "auto" else int(args.kplus)
            result = cmd_identify(args.draws, args.out, kplus, args.functional, args.seed)
            report = result.report
            print(f"K_plus distribution: {_fmt_distribution(report.K_plus_distribution)}")
            print(f"K_plus: {report.K_plus}")
            print(f"non-permutation rate: {report.non_permutation_rate:.4f}")
            print(result.summary.to_frame(result.feature_names).round(2).to_string())
            if result.map_partition is not None:
                print(f"MAP partition sizes: {report.map_partition_sizes}")
            if result.vi_partition is not None:
                print(f"VI partition sizes: {report.vi_partition_sizes}")
        case "evaluate":
            report, confusion = cmd_evaluate(
                args.partition, args.truth, args.label_col, args.partition_col, args.out
            )
            print(confusion.to_frame().to_string())
            print(f"ARI: {report.ari:.4f}")
            print(f"MCR: {report.mcr:.4f}")
        case "simulate":
            config = resolve_config(load_config_file(args.config), _overrides(args))
            synthetic, state = cmd_simulate(args.reference, config, args.n, args.out)
            print(f"{synthetic.N} observations, K = {state.K}, K_plus = {state.K_plus}")
            print(f"written to {args.out}")


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.log_level, args.log_format)
    if args.command == "identify" and args.kplus != "auto" and not args.kplus.isdigit():
        parser.error(f"--kplus must be 'auto' or a positive integer, got '{args.kplus}'")
    try:
        _run(args)
    except BayesmixError as e:
        code = exit_code_for(e)
        log.error("command_failed", command=args.command, error=str(e), exit_code=code)
        print(f"error: {e}", file=sys.stderr)
        return code
    return 0


if __name__ == "__main__":
    sys.exit(main())
