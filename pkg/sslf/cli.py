#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""Command line driver: sslf train | compare | grid"""
import argparse
import configparser
import dataclasses
import io
import logging
import os
import sys
from typing import Tuple

from . import baselines, dataset, grid, metrics, sam, trainer, writer
from .errors import ConfigError, SplitMismatchError, SslfError
from .model import SAM_MODES, Hyperparams

logger = logging.getLogger(__name__)

MODELS = ("sslf", "sgd", "adam")
MICRO_DATASET = os.path.join(os.path.dirname(os.path.abspath(__file__)), "data", "micro.tsv")
BUNDLED = {"@micro": MICRO_DATASET}
COMPARISON_FILE = "comparison.csv"
GRID_FILE = "grid.csv"
BEST_RUN = "sslf-best"
RUN_ERRORS = (SslfError, ValueError, ArithmeticError, MemoryError, OSError)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2

# option name -> (converter, RunConfig field, Hyperparams field, FirstOrderConfig field)
OPTIONS = {
    "data": (str, "data", None, None),
    "format": (str, "fmt", None, None),
    "header": ("bool", "header", None, None),
    "model": (str, "model", None, None),
    "split": ("ratios", "ratios", None, None),
    "seed": (int, "seed", "seed", "seed"),
    "out": (str, "out", None, None),
    "name": (str, "name", None, None),
    "workers": (int, "workers", "workers", None),
    "clamp-predictions": ("bool", "clamp", None, None),
    "f": (int, None, "f", "f"),
    "lambda": (float, None, "lam", "lam"),
    "gamma": (float, None, "gamma", None),
    "rho": (float, None, "rho", None),
    "cg-tol": (float, None, "cg_rel_tol", None),
    "cg-max-iters": (int, None, "cg_max_iters", None),
    "max-epochs": (int, None, "max_epochs", "max_epochs"),
    "patience": (int, None, "patience", "patience"),
    "init-low": (float, None, "init_low", "init_low"),
    "init-high": (float, None, "init_high", "init_high"),
    "sam-mode": (str, None, "sam_mode", None),
    "fixed-gamma": ("bool", None, None, None),
    "warm-start": ("bool", None, "warm_start", None),
    "lr": (float, None, None, "learning_rate"),
    "beta1": (float, None, None, "adam_beta1"),
    "beta2": (float, None, None, "adam_beta2"),
    "eps": (float, None, None, "adam_eps"),
}
_TRUE = ("1", "true", "yes", "on")
_FALSE = ("0", "false", "no", "off")


@dataclasses.dataclass(frozen=True)
class RunConfig(object):

    """Everything one training run consumes"""

    data: str = MICRO_DATASET
    fmt: str = "auto"
    header: bool = False
    ratios: Tuple[float, float, float] = dataset.DEFAULT_RATIOS
    seed: int = 42
    model: str = "sslf"
    hp: Hyperparams = Hyperparams()
    first_order: baselines.FirstOrderConfig = baselines.FirstOrderConfig()
    out: str = "runs"
    workers: int = 1
    clamp: bool = False
    name: str = ""

    @property
    def run_directory(self):
        """<out>/<name>, the name defaulting to the model"""
        return os.path.join(self.out, self.name or self.model)

    def split_key(self):
        """Runs with equal keys see the same split"""
        return (os.path.abspath(self.data), self.fmt, self.header, tuple(self.ratios), self.seed)

    def validate(self):
        if not os.path.isfile(self.data):
            raise ConfigError("data file {!r} does not exist".format(self.data))
        if self.model not in MODELS:
            raise ConfigError(
                "unknown model {!r}, expected one of {:s}".format(self.model, ", ".join(MODELS))
            )
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        dataset.validate_ratios(self.ratios)
        self.hp.validate()
        self.first_order.validate()
        return self


def _convert(kind, name, value):
    if not isinstance(value, str):
        return value
    try:
        if kind == "bool":
            if value.strip().lower() in _TRUE:
                return True
            if value.strip().lower() in _FALSE:
                return False
            raise ValueError(value)
        if kind == "ratios":
            return tuple(float(v) for v in value.replace(":", ",").split(","))
        return kind(value)
    except ValueError:
        raise ConfigError("bad value {!r} for {:s}".format(value, name))


def read_config_file(filename):
    """key = value lines (an implicit section is added), keys use flag names"""
    parser = configparser.ConfigParser(interpolation=None)
    try:
        with io.open(filename, encoding="utf-8") as f:
            parser.read_string("[run]\n" + f.read(), source=filename)
    except (OSError, IOError):
        raise ConfigError("cannot read config file {!r}".format(filename))
    except configparser.Error as error:
        raise ConfigError("bad config file {!r}: {}".format(filename, error))
    values = {}
    for key, value in parser.items("run"):
        name = key.strip().replace("_", "-")
        if name not in OPTIONS:
            raise ConfigError("unknown key {!r} in {:s}".format(key, filename))
        values[name] = value
    return values


def build_config(flags, file_values=None):
    """Defaults, overridden by the config file, overridden by flags"""
    merged = dict(file_values or {})
    merged.update((k, v) for k, v in flags.items() if v is not None)
    if merged.get("data") is None:
        logger.warning("no data file given, using the bundled micro-dataset %s", MICRO_DATASET)

    run, hp, first_order = {}, {}, {}
    for name, value in merged.items():
        kind, run_field, hp_field, fo_field = OPTIONS[name]
        value = _convert(kind, name, value)
        if run_field:
            run[run_field] = BUNDLED.get(value, value) if run_field == "data" else value
        if hp_field:
            hp[hp_field] = value
        if fo_field:
            first_order[fo_field] = value
    if merged.get("fixed-gamma") is not None:
        hp["adapt_gamma"] = not _convert("bool", "fixed-gamma", merged["fixed-gamma"])
    run["hp"] = dataclasses.replace(Hyperparams(), **hp)
    run["first_order"] = dataclasses.replace(baselines.FirstOrderConfig(), **first_order)
    return RunConfig(**run)


def load_split(config, verbose=False):
    split, _ = dataset.load_dataset(
        config.data, config.fmt, config.ratios, config.seed, header=config.header,
        verbose=verbose,
    )
    return split


def describe_run(config, split, params, report):
    """Fill in the test RMSE and echo the data settings into the report"""
    if split.test.n_observed:
        clamp = metrics.rating_range(split.train) if config.clamp else None
        report.test_rmse = metrics.rmse(params, split.test, clamp).rmse
    report.hyperparams.update(
        data=config.data, format=config.fmt, split=",".join(repr(r) for r in config.ratios),
        clamp_predictions=config.clamp, run=os.path.basename(config.run_directory),
    )
    return params, report


def run_model(config, split, callback=None):
    """Train the configured model and fill in its test RMSE"""
    if config.model == "sslf":
        params, report = trainer.train_sslf(split, config.hp, callback)
    elif config.model == "sgd":
        params, report = baselines.train_sgd(split, config.first_order, callback)
    else:
        params, report = baselines.train_adam(split, config.first_order, callback)
    return describe_run(config, split, params, report)


def _run_and_save(config, run):
    """Call `run` for (params, report) and save it, or leave a failure marker"""
    try:
        params, report = run()
        writer.Writer(report, params).save(config.run_directory)
    except RUN_ERRORS as error:
        logger.error("%s run failed: %s", config.model, error)
        writer.write_failure(config.run_directory, "{}: {}".format(type(error).__name__, error))
        return None
    return report


def _train_and_save(config, split):
    return _run_and_save(config, lambda: run_model(config, split))


def unique_run_names(configs):
    """Number the runs ('01-sslf', '02-sslf', ...) when their directories collide"""
    directories = [config.run_directory for config in configs]
    if len(set(directories)) == len(directories):
        return list(configs)
    return [
        dataclasses.replace(config, name="{:02d}-{:s}".format(n, config.name or config.model))
        for n, config in enumerate(configs, 1)
    ]


def cmd_train(config, verbose=False):
    """Train one model, write its run directory, return an exit status"""
    try:
        config.validate()
        split = load_split(config, verbose)
    except (SslfError, ValueError, OSError, IOError) as error:
        sys.stderr.write("sslf: {}\n".format(error))
        return EXIT_USAGE
    report = _train_and_save(config, split)
    if report is None:
        return EXIT_FAILURE
    sys.stdout.write(writer.render_table([report]) + "\n")
    return EXIT_OK


def cmd_compare(configs, verbose=False):
    """Train every config on one shared split and print a comparison table

    Every run gets its own directory under `out`.
    """
    if not configs:
        raise ConfigError("nothing to compare")
    keys = set(config.split_key() for config in configs)
    if len(keys) > 1:
        raise SplitMismatchError("compared runs must share data, format, split and seed")
    for config in configs:
        config.validate()
    configs = unique_run_names(configs)
    split = load_split(configs[0], verbose)

    reports = []
    for config in configs:
        report = _train_and_save(config, split)
        if report is None:
            return EXIT_FAILURE
        reports.append(report)
    sys.stdout.write(writer.render_table(reports) + "\n")
    writer.save_table(reports, os.path.join(configs[0].out, COMPARISON_FILE))
    return EXIT_OK


def cmd_grid(config, axes, verbose=False):
    """Grid search over SSLF hyperparameters on the validation partition

    The best point is saved to <out>/sslf-best like any other run.
    """
    config = dataclasses.replace(config, model="sslf", name=BEST_RUN).validate()
    split = load_split(config, verbose)
    rows = [list(axes) + ["val_rmse", "epochs"]]

    def search():
        results = grid.grid_search(split, config.hp, axes)
        for result in results:
            rows.append(
                [repr(result.values[name]) for name in axes]
                + [repr(result.report.best_validation_rmse), result.report.best_epoch]
            )
        best = results[0]
        logger.info("best grid point %r", best.values)
        return describe_run(config, split, best.params, best.report)

    if _run_and_save(config, search) is None:
        return EXIT_FAILURE
    writer.write_csv(os.path.join(config.out, GRID_FILE), rows)
    width = max(len(str(cell)) for row in rows for cell in row)
    for row in rows:
        sys.stdout.write("  ".join(str(cell).rjust(width) for cell in row) + "\n")
    return EXIT_OK


def _add_run_options(parser, model_choices=True):
    group = parser.add_argument_group("data")
    group.add_argument("--data", help="rating file, or @micro for the bundled dataset")
    group.add_argument("--format", choices=("auto", "::", "tab", "comma"))
    group.add_argument("--header", action="store_const", const=True,
                       help="first data line holds column names")
    group.add_argument("--split", help="train,validation,test ratios (default 0.8,0.1,0.1)")
    group.add_argument("--seed", type=int)
    if model_choices:
        parser.add_argument("--model", choices=MODELS)
    parser.add_argument("--config", action="append", default=[], metavar="FILE",
                        help="key = value file, flags override it")
    parser.add_argument("--out", help="output directory (default runs)")
    parser.add_argument("--name", help="run directory under --out (default: the model)")
    parser.add_argument("--workers", type=int)
    parser.add_argument("--clamp-predictions", action="store_const", const=True,
                        dest="clamp_predictions")

    group = parser.add_argument_group("model")
    group.add_argument("--f", type=int, help="latent dimension (default 20)")
    group.add_argument("--lambda", type=float, dest="lambda_", help="L2 coefficient")
    group.add_argument("--init-low", type=float, dest="init_low")
    group.add_argument("--init-high", type=float, dest="init_high")
    group.add_argument("--max-epochs", type=int, dest="max_epochs")
    group.add_argument("--patience", type=int)

    group = parser.add_argument_group("sslf")
    group.add_argument("--gamma", type=float, help="initial damping")
    group.add_argument("--rho", type=float, help="SAM radius, 0 disables SAM")
    group.add_argument("--cg-tol", type=float, dest="cg_tol")
    group.add_argument("--cg-max-iters", type=int, dest="cg_max_iters")
    group.add_argument("--sam-mode", choices=SAM_MODES, dest="sam_mode")
    group.add_argument("--fixed-gamma", action="store_const", const=True, dest="fixed_gamma")
    group.add_argument("--warm-start", action="store_const", const=True, dest="warm_start")

    group = parser.add_argument_group("baselines")
    group.add_argument("--lr", type=float, help="learning rate")
    group.add_argument("--beta1", type=float)
    group.add_argument("--beta2", type=float)
    group.add_argument("--eps", type=float)


def make_parser():
    parser = argparse.ArgumentParser(
        prog="sslf", description="Sharpness-aware second-order latent factor models"
    )
    parser.add_argument("-v", "--verbose", action="count", default=0)
    parser.add_argument("-q", "--quiet", action="store_true")
    commands = parser.add_subparsers(dest="command")
    commands.required = True

    _add_run_options(commands.add_parser("train", help="train one model"))
    compare = commands.add_parser("compare", help="train several models on one split")
    _add_run_options(compare, model_choices=False)
    compare.add_argument("--model", help="comma separated models, e.g. sslf,sgd,adam")
    search = commands.add_parser("grid", help="grid search SSLF hyperparameters")
    _add_run_options(search, model_choices=False)
    search.add_argument("--rho-grid", dest="rho_grid",
                        default=",".join(repr(r) for r in sam.DEFAULT_RHO_GRID),
                        help="'a,b,c' or 'start:end:steps'")
    search.add_argument("--lambda-grid", dest="lambda_grid")
    search.add_argument("--gamma-grid", dest="gamma_grid")
    return parser


def _flags(args):
    flags = {}
    for name in OPTIONS:
        attr = "lambda_" if name == "lambda" else name.replace("-", "_")
        flags[name] = getattr(args, attr, None)
    if flags["split"] is not None:
        flags["split"] = _convert("ratios", "split", flags["split"])
    return flags


def _configs(args):
    flags = _flags(args)
    files = [read_config_file(filename) for filename in args.config] or [{}]
    if args.command == "compare" and flags.get("model"):
        models = [m.strip() for m in flags.pop("model").split(",") if m.strip()]
        return [
            build_config(dict(flags, model=model), values)
            for values in files
            for model in models
        ]
    return [build_config(flags, values) for values in files]


def main(argv=None):
    parser = make_parser()
    args = parser.parse_args(argv)
    level = logging.WARNING if args.quiet else (logging.DEBUG if args.verbose > 1 else logging.INFO)
    logging.basicConfig(level=level, format="%(asctime)s %(name)s %(levelname)s %(message)s")
    verbose = args.verbose > 0 and not args.quiet

    try:
        configs = _configs(args)
        if args.command == "train":
            if len(configs) != 1:
                raise ConfigError("train takes at most one --config file")
            return cmd_train(configs[0], verbose)
        if args.command == "compare":
            return cmd_compare(configs, verbose)
        axes = {"rho": grid.parse_grid(args.rho_grid)}
        if args.lambda_grid:
            axes["lam"] = grid.parse_grid(args.lambda_grid)
        if args.gamma_grid:
            axes["gamma"] = grid.parse_grid(args.gamma_grid)
        return cmd_grid(configs[0], axes, verbose)
    except (SslfError, ValueError, OSError) as error:
        parser.print_usage(sys.stderr)
        sys.stderr.write("sslf: {}\n".format(error))
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
