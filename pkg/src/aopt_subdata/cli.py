"""
Command-line entry point.

    aopt-subdata generate --case 1 --n 1000 --seed 7 --output-dir out/
    aopt-subdata select --input out/dataset.csv --response y --algorithm alg2 --k 100
    aopt-subdata sweep --case 1 --k 300 --k 500 --replicates 20 --output-dir runs/
    aopt-subdata bench --k 300 --k 1000 --output-dir runs/
    aopt-subdata report --input runs/sweep_summary.csv --output-dir runs/

Every subcommand accepts ``--config FILE``, an INI file whose keys match the
long flag names (``t-rounds = 10``); flags given on the command line win.
Exit status is 0 on success, 2 on invalid input, 1 on a runtime failure.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import logging
import math
import sys
from pathlib import Path

from . import __version__
from .errors import MissingColumn, ParseError, SubdataError
from .evalkit import SweepConfig, SweepSummary, bench_timing, plot_summary, run_sweep, write_metadata
from .modelsel import all_subset_bic, forward_bic
from .preprocess import DataMatrix, centralize, load_csv, scale_to_unit_interval, write_csv
from .simgen import CASES, CaseSpec, gen_covariates, gen_response, gen_true_model
from .simgen import write_metadata as write_sim_metadata
from .subselect import ALGORITHMS, select_subdata

log = logging.getLogger("aopt_subdata")

DEFAULTS = {
    "generate": {"case": 1, "n": 10_000, "p": 7, "seed": 0, "output_dir": ".", "name": "dataset"},
    "select": {"input": None, "response": None, "algorithm": "alg1", "k": None, "t_rounds": 10,
               "pool_multiplier": 2.0, "search": "all-subset", "seed": 0, "output_dir": "."},
    "sweep": {"case": [1], "algorithm": ["levss", "alg1", "alg2"], "k": [300, 500, 700, 1000],
              "n": 10_000, "replicates": 100, "seed": 0, "t_rounds": 10, "pool_multiplier": 2.0,
              "search": "all-subset", "input": None, "response": None, "output_dir": "."},
    "bench": {"n": 10_000, "k": [300, 500, 700, 1000], "algorithm": ["levss", "alg1", "alg2"],
              "runs": 5, "seed": 0, "t_rounds": 10, "output_dir": "."},
    "report": {"input": None, "output_dir": "."},
}

CASTS = {"case": int, "n": int, "p": int, "seed": int, "k": int, "t_rounds": int, "runs": int,
         "replicates": int, "pool_multiplier": float}


class UsageError(Exception):
    """Invalid user input; maps to exit status 2."""


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="aopt-subdata", description=__doc__.split("\n")[1])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="INI file with default values for the flags")
        p.add_argument("--output-dir", dest="output_dir")
        p.add_argument("--seed", type=int)
        return p

    g = common(sub.add_parser("generate", help="write a simulated dataset"))
    g.add_argument("--case", type=int, choices=CASES)
    g.add_argument("--n", type=int)
    g.add_argument("--p", type=int)
    g.add_argument("--name")

    s = common(sub.add_parser("select", help="select subdata from a CSV file"))
    s.add_argument("--input")
    s.add_argument("--response")
    s.add_argument("--algorithm", choices=ALGORITHMS)
    s.add_argument("--k", type=int)
    s.add_argument("--t-rounds", dest="t_rounds", type=int)
    s.add_argument("--pool-multiplier", dest="pool_multiplier", type=float)
    s.add_argument("--search", choices=("all-subset", "forward"),
                   help="BIC search run on the subdata when --response is given")

    w = common(sub.add_parser("sweep", help="replicated accuracy/MSPE sweep"))
    w.add_argument("--case", type=int, choices=CASES, action="append")
    w.add_argument("--algorithm", choices=ALGORITHMS, action="append")
    w.add_argument("--k", type=int, action="append")
    w.add_argument("--n", type=int)
    w.add_argument("--replicates", type=int)
    w.add_argument("--t-rounds", dest="t_rounds", type=int)
    w.add_argument("--pool-multiplier", dest="pool_multiplier", type=float)
    w.add_argument("--search", choices=("all-subset", "forward"))
    w.add_argument("--input", help="real-data CSV; replaces the simulated cases")
    w.add_argument("--response")

    b = common(sub.add_parser("bench", help="time the selectors"))
    b.add_argument("--n", type=int)
    b.add_argument("--k", type=int, action="append")
    b.add_argument("--algorithm", choices=ALGORITHMS, action="append")
    b.add_argument("--runs", type=int)
    b.add_argument("--t-rounds", dest="t_rounds", type=int)

    r = common(sub.add_parser("report", help="render SVG plots from a sweep summary"))
    r.add_argument("--input")
    return ap


def _read_config(path) -> dict:
    path = Path(path)
    if not path.is_file():
        raise UsageError(f"config file not found: {path}")
    cp = configparser.ConfigParser()
    cp.read_string("[__top__]\n" + path.read_text())
    return {key.replace("-", "_"): value
            for section in cp.sections() for key, value in cp.items(section)}


def _cast(key: str, value: str, default):
    cast = CASTS.get(key, str)
    try:
        if isinstance(default, list):
            return [cast(v) for v in value.replace(",", " ").split()]
        return cast(value)
    except ValueError:
        raise UsageError(f"bad value for {key!r} in config file: {value!r}") from None


def resolve(args: argparse.Namespace) -> dict:
    """Merge defaults, config file values and explicit flags (in that order)."""
    cfg = dict(DEFAULTS[args.command])
    if getattr(args, "config", None):
        for key, value in _read_config(args.config).items():
            if key in cfg:
                cfg[key] = _cast(key, value, cfg[key])
    for key in cfg:
        value = getattr(args, key, None)
        if value is not None:
            cfg[key] = value
    return cfg


def _require_file(path, what="input") -> Path:
    if path is None:
        raise UsageError(f"--{what} is required")
    p = Path(path)
    if not p.is_file():
        raise UsageError(f"{what} file not found: {p}")
    return p


def cmd_generate(cfg: dict) -> None:
    if cfg["case"] not in CASES:
        raise UsageError(f"case must be one of {list(CASES)}")
    out = Path(cfg["output_dir"])
    out.mkdir(parents=True, exist_ok=True)
    spec = CaseSpec(cfg["case"], cfg["n"], cfg["p"], cfg["seed"])
    X = gen_covariates(spec)
    model = gen_true_model(cfg["seed"], cfg["p"])
    y, _ = gen_response(X, model, cfg["seed"])
    write_csv(out / f"{cfg['name']}.csv", DataMatrix(X, y))
    write_sim_metadata(out / f"{cfg['name']}.json", spec, model, config=cfg,
                       generator="numpy PCG64 via SeedSequence")


def cmd_select(cfg: dict) -> None:
    path = _require_file(cfg["input"])
    if cfg["k"] is None:
        raise UsageError("--k is required")
    d = load_csv(path, cfg["response"])
    if cfg["k"] <= d.p:
        raise UsageError(f"k must exceed the number of covariates ({d.p}), got {cfg['k']}")
    if cfg["k"] > d.n:
        raise UsageError(f"k={cfg['k']} exceeds the {d.n} rows of {path}")
    res = select_subdata(d, cfg["k"], cfg["algorithm"], T=cfg["t_rounds"],
                         pool_multiplier=cfg["pool_multiplier"], rng_seed=cfg["seed"])
    out = Path(cfg["output_dir"])
    out.mkdir(parents=True, exist_ok=True)
    res.write_indices(out / "indices.csv")
    extra = {}
    if d.y is not None:
        extra["model"] = _subdata_model(d, res.indices, cfg["search"])
    res.write_report(out / "selection.json", config=cfg, seed=cfg["seed"],
                     input=str(path), n=d.n, p=d.p, **extra)


def _subdata_model(d: DataMatrix, rows, search: str) -> dict:
    """BIC-selected model on the subdata, coefficients on both covariate scales.

    The selectors see covariates scaled to [-1, 1], so slopes are reported for
    that scale as well as for the original units.
    """
    dc, cmap = centralize(d)
    sub = (dc.X[rows], dc.y[rows])
    fn = all_subset_bic if search == "all-subset" else forward_bic
    report = fn(sub, x_means=cmap.x_means, y_mean=cmap.y_mean)
    best = report.best
    if best is None:  # forward search kept the empty model
        return {"search": search, "columns": [], "column_names": [], "bic": report.path_bic[-1],
                "intercept": cmap.y_mean, "beta_original": [], "beta_scaled": []}
    _, smap = scale_to_unit_interval(d)
    half_span = 0.5 * (smap.maxs - smap.mins)[list(best.model)]
    names = [d.column_names[j] for j in best.model] if d.column_names else None
    return {
        "search": search,
        "columns": list(best.model),
        "column_names": names,
        "bic": best.bic if math.isfinite(best.bic) else None,  # -inf marks an exact fit
        "exact_fit": best.bic == -math.inf,
        "intercept": best.intercept,
        "beta_original": best.beta.tolist(),
        "beta_scaled": (best.beta * half_span).tolist(),
    }


def _sweep_config(cfg: dict) -> SweepConfig:
    for k in cfg["k"]:
        if k <= 7 and cfg["input"] is None:
            raise UsageError(f"every k must exceed the number of covariates (7), got {k}")
    try:
        return SweepConfig(
            cases=tuple(cfg["case"]), algorithms=tuple(cfg["algorithm"]), ks=tuple(cfg["k"]),
            replicates=cfg["replicates"], n=cfg["n"], T=cfg["t_rounds"],
            pool_multiplier=cfg["pool_multiplier"], search=cfg["search"], master_seed=cfg["seed"],
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_sweep(cfg: dict) -> None:
    config = _sweep_config(cfg)
    data = None
    if cfg["input"] is not None:
        data = load_csv(_require_file(cfg["input"]), cfg["response"])
        if data.y is None:
            raise UsageError("real-data sweeps need --response")
        bad = [k for k in config.ks if k <= data.p]
        if bad:
            raise UsageError(f"every k must exceed the number of covariates ({data.p}), got {bad}")

    def progress(i, total):
        print(f"\rreplicate {i}/{total}", end="", file=sys.stderr, flush=True)

    summary = run_sweep(config, data=data, progress=progress)
    print(file=sys.stderr)
    out = Path(cfg["output_dir"])
    out.mkdir(parents=True, exist_ok=True)
    summary.to_csv(out / "sweep_summary.csv")
    with (out / "sweep_outcomes.csv").open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["case", "replicate", "algorithm", "k", "selected_model", "true_model", "mspe", "seconds"])
        for o in summary.outcomes:
            w.writerow([o.case, o.replicate, o.algorithm, o.k, " ".join(map(str, o.selected_model)),
                        " ".join(map(str, o.true_model)), repr(o.mspe), repr(o.seconds)])
    meta = dict(config=cfg, seed=cfg["seed"], failures=[vars(f) for f in summary.failures])
    if data is not None:
        meta["mspe_target"] = "observed test response (conditional mean unavailable)"
    write_metadata(out / "sweep_meta.json", **meta)


def cmd_bench(cfg: dict) -> None:
    bad = [k for k in cfg["k"] if k <= 7]
    if bad:
        raise UsageError(f"every k must exceed the number of covariates (7), got {bad}")
    if cfg["runs"] < 5:
        raise UsageError("--runs must be at least 5")
    table = bench_timing(cfg["n"], 7, cfg["k"], cfg["algorithm"], runs=cfg["runs"],
                         seed=cfg["seed"], T=cfg["t_rounds"])
    out = Path(cfg["output_dir"])
    out.mkdir(parents=True, exist_ok=True)
    table.to_csv(out / "bench.csv")
    write_metadata(out / "bench_meta.json", config=cfg, seed=cfg["seed"])


def cmd_report(cfg: dict) -> None:
    path = _require_file(cfg["input"])
    try:
        summary = SweepSummary.from_csv(path)
    except (KeyError, ValueError) as exc:
        raise UsageError(f"{path} is not a sweep summary: {exc}") from None
    plot_summary(summary, cfg["output_dir"])


COMMANDS = {
    "generate": cmd_generate,
    "select": cmd_select,
    "sweep": cmd_sweep,
    "bench": cmd_bench,
    "report": cmd_report,
}


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    args = _parser().parse_args(argv)
    try:
        cfg = resolve(args)
        COMMANDS[args.command](cfg)
    except (UsageError, ParseError, MissingColumn) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (SubdataError, ValueError, OSError) as exc:
        print(f"failed: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
