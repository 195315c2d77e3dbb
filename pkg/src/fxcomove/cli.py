"""Batch command-line interface.

Every subcommand reads a CSV price panel (``--input``), writes its reports to
the ``--out`` directory together with a ``manifest.json`` listing each
artifact and its SHA-256, and exits 0 on success, 1 on a computation error
(the failing stage is named) and 2 on an input or configuration error.

Options can also come from a ``--config`` file of ``key = value`` lines,
keys being the long option names; flags given on the command line win.
"""

from __future__ import annotations

import argparse
import configparser
import sys
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .cointegration import VecmSpec, estimate_vecm, hansen_lc, johansen_rrr
from .errors import ComputationError, ConfigError, DomainError, FxComoveError, IngestionError, InputError
from .panel import Panel, describe, first_difference, load_panel_csv, log_transform
from .report import ArtifactWriter, comovement_payload, comovement_rows, sha256_file, stage_payload
from .simulate import AlphaSchedule, default_spec, simulate_vecm, true_zeta_path
from .stability import QuConfig, qu_scan
from .tvvecm import MIN_REPLICATIONS, TvVecmConfig, bootstrap_bands, build_stacked_system, comovement_degree, solve_smoothing
from .unitroot import AdfGlsConfig, adf_gls_test

STAGES = ("describe", "unitroot", "johansen", "vecm", "stability", "tvvecm")
STAGE_DEPENDENCIES = {
    "describe": (),
    "unitroot": (),
    "johansen": (),
    "vecm": ("johansen",),
    "stability": (),
    "tvvecm": ("johansen",),
}
EXIT_OK, EXIT_COMPUTATION, EXIT_INPUT = 0, 1, 2


class StageError(Exception):
    def __init__(self, stage: str, error: FxComoveError):
        super().__init__(f"{stage}: {error}")
        self.stage = stage
        self.error = error


@dataclass(frozen=True)
class PipelineConfig:
    """Resolved parameters for every stage; validated before any data is read."""

    input: str | None
    out: str
    seed: int = 0
    threads: int = 1
    format: str = "json"
    transform: str = "log"
    ur_deterministic: str = "trend"
    max_lag: int | None = None
    lags: int = 1
    deterministic: str = "intercept"
    rank: int = 1
    trim: float = 0.15
    null_rank: int | None = None
    max_breaks: int = 2
    smoothness_lambda: float = 1.0
    intercept_mode: str = "constant"
    vecm_form: str = "unrestricted"
    bootstrap: int = 0
    full_paths: bool = False
    smooth_window: int | None = None

    def __post_init__(self):
        if self.format not in ("json", "csv", "both"):
            raise ConfigError(f"unknown format {self.format!r}")
        if self.transform not in ("log", "none"):
            raise ConfigError(f"unknown transform {self.transform!r}")
        if self.threads < 1:
            raise ConfigError("threads must be >= 1")
        if self.rank < 1:
            raise ConfigError("rank must be >= 1 for the error-correction stages")
        if self.bootstrap and self.bootstrap < MIN_REPLICATIONS:
            raise ConfigError(f"bootstrap needs 0 or at least {MIN_REPLICATIONS} replications")
        if self.smooth_window is not None and (self.smooth_window < 1 or self.smooth_window % 2 == 0):
            raise ConfigError("smooth-window must be a positive odd integer")
        if not self.smoothness_lambda > 0:
            raise ConfigError("lambda must be positive")
        if self.vecm_form not in ("unrestricted", "restricted"):
            raise ConfigError(f"unknown vecm form {self.vecm_form!r}")
        if self.intercept_mode not in ("constant", "time-varying"):
            raise ConfigError(f"unknown intercept mode {self.intercept_mode!r}")
        # module configs check their own invariants
        self.adf_config()
        self.vecm_spec()
        self.qu_config()

    def adf_config(self) -> AdfGlsConfig:
        return AdfGlsConfig(deterministic=self.ur_deterministic, max_lag=self.max_lag)

    def vecm_spec(self) -> VecmSpec:
        return VecmSpec(lag_k=self.lags, deterministic=self.deterministic, rank_r=self.rank)

    def qu_config(self) -> QuConfig:
        nr = self.rank if self.null_rank is None else self.null_rank
        return QuConfig(trimming=self.trim, max_breaks=self.max_breaks, null_rank=nr, lag_k=self.lags)

    def manifest_view(self) -> dict:
        """Parameters that determine the results: no paths, no thread count."""
        d = asdict(self)
        for k in ("input", "out", "threads"):
            d.pop(k)
        return d


class Runner:
    def __init__(self, cfg: PipelineConfig, writer: ArtifactWriter):
        self.cfg = cfg
        self.writer = writer
        self.done: list[str] = []
        self.cache: dict = {}
        self.levels: Panel | None = None

    def load(self):
        path = Path(self.cfg.input)
        if not path.is_file():
            raise InputError(f"input file not found: {path}")
        raw = load_panel_csv(path)
        try:
            self.levels = log_transform(raw) if self.cfg.transform == "log" else raw
        except DomainError as exc:
            raise IngestionError(f"{path.name}: {exc}") from None
        self.input_sha = sha256_file(path)

    def run(self, stage: str, write: bool = True):
        if stage in self.cache:
            return self.cache[stage]
        for dep in STAGE_DEPENDENCIES[stage]:
            self.run(dep, write=False)
        try:
            result = getattr(self, f"_{stage}")(write)
        except FxComoveError as exc:
            raise StageError(stage, exc) from exc
        self.cache[stage] = result
        if write:
            self.done.append(stage)
        return result

    def _describe(self, write):
        lv = describe(self.levels)
        rt = describe(first_difference(self.levels))
        if write:
            body = {"levels": lv.to_dict(), "returns": rt.to_dict()}
            self.writer.write_json("describe.json", stage_payload("describe", body), "describe")
        return lv, rt

    def _unitroot(self, write):
        cfg = self.cfg.adf_config()
        diffs = first_difference(self.levels)
        out = {"deterministic": cfg.deterministic, "cv_1pct": cfg.cv_1pct, "levels": [], "returns": []}
        for group, panel in (("levels", self.levels), ("returns", diffs)):
            for j, name in enumerate(panel.names):
                out[group].append(adf_gls_test(panel.values[:, j], cfg).to_dict(name))
        if write:
            self.writer.write_json("unitroot.json", stage_payload("unitroot", out), "unitroot")
        return out

    def _johansen(self, write):
        res = johansen_rrr(self.levels, self.cfg.vecm_spec())
        if write:
            self.writer.write_json("johansen.json", stage_payload("johansen", res.to_dict()), "johansen")
        return res

    def _beta(self) -> np.ndarray:
        return self.cache["johansen"].beta(self.cfg.rank)

    def _vecm(self, write):
        beta = self._beta() if self.cfg.vecm_form == "restricted" else None
        fit = estimate_vecm(self.levels, self.cfg.vecm_spec(), beta=beta)
        lc = hansen_lc(fit)
        if write:
            body = {**fit.to_dict(), "beta": None if beta is None else beta.tolist(), "hansen_lc": lc.to_dict()}
            self.writer.write_json("vecm.json", stage_payload("vecm", body), "vecm")
        return fit, lc

    def _stability(self, write):
        res = qu_scan(self.levels, self.cfg.qu_config(), threads=self.cfg.threads)
        if write:
            self.writer.write_json("stability.json", stage_payload("stability", res.to_dict()), "stability")
        return res

    def _tvvecm(self, write):
        cfg = self.cfg
        tv = TvVecmConfig(beta=self._beta(), lag_k=cfg.lags, smoothness_lambda=cfg.smoothness_lambda,
                          intercept_mode=cfg.intercept_mode)
        fit = solve_smoothing(build_stacked_system(self.levels, tv))
        path = comovement_degree(fit, cfg.smooth_window)
        bands = None
        if cfg.bootstrap:
            bands = bootstrap_bands(self.levels, tv, cfg.bootstrap, cfg.seed, threads=cfg.threads, fit=fit)
        if write:
            body = {
                "beta": tv.beta.tolist(),
                "lambda": cfg.smoothness_lambda,
                "lag_k": cfg.lags,
                "intercept_mode": cfg.intercept_mode,
                "intercept": None if fit.intercept is None else fit.intercept.tolist(),
                "dates": list(fit.dates),
                "alpha_path": fit.alpha_path.tolist(),
            }
            if cfg.full_paths:
                body["full_paths"] = fit.to_dict()
            self.writer.write_json("tvvecm.json", stage_payload("tvvecm", body), "tvvecm")
            if cfg.format in ("json", "both"):
                self.writer.write_json("comovement.json", comovement_payload(path, bands), "tvvecm")
            if cfg.format in ("csv", "both"):
                cols, rows = comovement_rows(path, bands)
                self.writer.write_csv("comovement.csv", cols, rows, "tvvecm")
        return fit, path, bands

    def manifest_config(self) -> dict:
        d = self.cfg.manifest_view()
        d["input_name"] = None if self.cfg.input is None else Path(self.cfg.input).name
        d["input_sha256"] = getattr(self, "input_sha", None)
        return d


# ---------------------------------------------------------------- argument parsing

def _common(parser: argparse.ArgumentParser):
    g = parser.add_argument_group("common")
    g.add_argument("--input", help="CSV panel: a date column then one column per series")
    g.add_argument("--out", required=False, default=None, help="output directory")
    g.add_argument("--config", help="key = value file; command-line flags take precedence")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--threads", type=int, default=1)
    g.add_argument("--format", choices=("json", "csv", "both"), default="json")
    g.add_argument("--transform", choices=("log", "none"), default="log", help="applied to the input before analysis")


def _analysis(parser: argparse.ArgumentParser):
    g = parser.add_argument_group("analysis")
    g.add_argument("--spec", "--ur-deterministic", dest="ur_deterministic", choices=("trend", "constant"), default="trend",
                   help="deterministics for the unit-root tests")
    g.add_argument("--max-lag", type=int, default=None)
    g.add_argument("--lags", type=int, default=1, help="lagged differences in the error-correction form")
    g.add_argument("--det", "--deterministic", dest="deterministic", choices=("intercept", "none"), default="intercept")
    g.add_argument("--vecm-form", choices=("unrestricted", "restricted"), default="unrestricted",
                   help="levels enter one by one, or through beta'X with the Johansen beta at --rank")
    g.add_argument("--rank", type=int, default=1, help="cointegration rank used for beta")
    g.add_argument("--trim", type=float, default=0.15)
    g.add_argument("--null-rank", type=int, default=None, help="rank under the null in the stability scan (default: --rank)")
    g.add_argument("--max-breaks", type=int, choices=(1, 2), default=2)
    g.add_argument("--lambda", dest="smoothness_lambda", type=float, default=1.0)
    g.add_argument("--intercept-mode", choices=("constant", "time-varying"), default="constant")
    g.add_argument("--bootstrap", type=int, default=0, help="bootstrap replications for zeta bands (0 = off)")
    g.add_argument("--full-paths", action="store_true", help="also dump every coefficient path")
    g.add_argument("--smooth-window", type=int, default=None, help="centred moving average of delta zeta")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fxcomove", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in STAGES + ("pipeline",):
        sp = sub.add_parser(name, help=f"run the {name} stage" if name != "pipeline" else "run every stage in order")
        _common(sp)
        _analysis(sp)
    sp = sub.add_parser("simulate", help="write a simulated cointegrated price panel")
    _common(sp)
    sp.add_argument("--T", dest="T", type=int, default=300)
    sp.add_argument("--noise", type=float, default=0.02)
    sp.add_argument("--burn-in", type=int, default=100)
    sp.add_argument("--scenario", choices=("constant", "step"), default="constant")
    return parser


def _config_defaults(path: str, parser: argparse.ArgumentParser) -> dict:
    cp = configparser.ConfigParser(interpolation=None)
    try:
        with open(path, encoding="utf-8") as fh:
            cp.read_string("[main]\n" + fh.read())
    except OSError as exc:
        raise InputError(f"cannot read config file {path}: {exc.strerror}") from None
    except configparser.Error as exc:
        raise ConfigError(f"malformed config file {path}: {exc}") from None
    known = {}
    for action in parser._actions:
        for opt in action.option_strings:
            if opt.startswith("--"):
                known[opt[2:]] = action
                known[opt[2:].replace("-", "_")] = action
    out = {}
    for key, value in cp["main"].items():
        action = known.get(key)
        if action is None or action.dest in ("config", "help", "version"):
            raise ConfigError(f"unknown config key {key!r}")
        if isinstance(action, argparse._StoreTrueAction):
            out[action.dest] = value.strip().lower() in ("1", "true", "yes", "on")
        else:
            out[action.dest] = value.strip()
    return out


def parse_args(argv=None) -> argparse.Namespace:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        sub = parser._subparsers._group_actions[0].choices[args.command]
        sub.set_defaults(**_config_defaults(args.config, sub))
        args = parser.parse_args(argv)
    return args


def _pipeline_config(args) -> PipelineConfig:
    keys = PipelineConfig.__dataclass_fields__
    return PipelineConfig(**{k: getattr(args, k) for k in keys if hasattr(args, k)})


def _prepare_out(out: str | None) -> Path:
    if not out:
        raise ConfigError("--out is required")
    path = Path(out)
    try:
        path.mkdir(parents=True, exist_ok=True)
        probe = path / ".write-test"
        probe.write_text("")
        probe.unlink()
    except OSError as exc:
        raise InputError(f"output directory {path} is not writable: {exc.strerror}") from None
    return path


def _simulate(args) -> int:
    out = _prepare_out(args.out)
    spec = default_spec(seed=args.seed, T=args.T, noise_scale=args.noise).replace(burn_in=args.burn_in)
    if args.scenario == "step":
        spec = spec.replace(alpha_path_true=AlphaSchedule.step([[-0.05], [0.02], [0.02]], [[-0.3], [0.1], [0.1]]))
    panel = simulate_vecm(spec)
    values = np.exp(panel.values) if args.transform == "log" else panel.values
    writer = ArtifactWriter(out)
    rows = [[d, *row] for d, row in zip(panel.dates, values.tolist())]
    writer.write_csv("panel.csv", ("date",) + panel.names, rows, "simulate")
    body = {
        "spec": spec.to_dict(),
        "written_as": "prices" if args.transform == "log" else "log levels",
        "dates": list(panel.dates),
        "true_zeta": true_zeta_path(spec).tolist(),
    }
    writer.write_json("simulate.json", stage_payload("simulate", body), "simulate")
    cfg = {"seed": args.seed, "T": args.T, "noise": args.noise, "burn_in": args.burn_in,
           "scenario": args.scenario, "transform": args.transform}
    writer.write_manifest(writer.manifest("ok", ["simulate"], cfg))
    return EXIT_OK


def run(argv=None) -> int:
    args = parse_args(argv)
    if args.command == "simulate":
        return _simulate(args)
    cfg = _pipeline_config(args)
    out = _prepare_out(cfg.out)
    if not cfg.input:
        raise ConfigError("--input is required")
    writer = ArtifactWriter(out)
    runner = Runner(cfg, writer)
    stages = STAGES if args.command == "pipeline" else (args.command,)
    try:
        runner.load()
    except InputError as exc:
        writer.write_manifest(writer.manifest("failed", [], runner.manifest_config(), "input", str(exc)))
        raise
    try:
        for stage in stages:
            runner.run(stage)
    except StageError as exc:
        writer.write_manifest(writer.manifest("failed", runner.done, runner.manifest_config(), exc.stage, str(exc.error)))
        raise
    writer.write_manifest(writer.manifest("ok", runner.done, runner.manifest_config()))
    return EXIT_OK


def main(argv=None) -> int:
    try:
        return run(argv)
    except StageError as exc:
        code = EXIT_INPUT if isinstance(exc.error, InputError) else EXIT_COMPUTATION
        print(f"fxcomove: error in stage {exc.stage}: {exc.error}", file=sys.stderr)
        return code
    except InputError as exc:
        print(f"fxcomove: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ComputationError as exc:
        print(f"fxcomove: computation error: {exc}", file=sys.stderr)
        return EXIT_COMPUTATION


if __name__ == "__main__":
    sys.exit(main())
