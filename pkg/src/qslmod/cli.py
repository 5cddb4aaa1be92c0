"""Command-line front end emitting plot-ready CSV.

Subcommands: ``trajectory``, ``bounds``, ``tau-cri`` and ``sweep``. Settings
come from command-line flags, then an optional flat ``key = value`` config
file, then built-in defaults, in that order of precedence.

Time columns are dimensionless: ``lambda * t`` for amplitude damping and
``omega_c * t`` for phase damping.
"""

import argparse
import io
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields, replace

import numpy as np

from . import bounds, channels, metrics, qmat

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NOT_REACHED = 3

BOUND_NAMES = ("av", "op", "hs", "tr", "min", "quant")

DEFAULTS = {
    "ad": {"gamma0_over_lambda": 0.4, "t_max": 60.0, "dt": 0.01},
    "pd": {"s": 1.0, "t_max": 1e6, "dt": 50.0},
}


class UsageError(ValueError):
    pass


@dataclass(frozen=True)
class ExperimentConfig:
    channel: str = "ad"
    gamma0_over_lambda: float | None = None
    s: float | None = None
    initial: str = "plus"
    epsilon: float = 1e-6
    t_max: float | None = None
    dt: float | None = None
    bounds: tuple = ("av", "op", "quant")
    modified: bool = False
    witness: str = "trace-distance"
    output: str | None = None
    command: str = "bounds"

    def resolved(self):
        """Fill channel-dependent defaults and validate every field."""
        if self.channel not in DEFAULTS:
            raise UsageError(f"channel: expected 'ad' or 'pd', got {self.channel!r}")
        filled = {k: v for k, v in DEFAULTS[self.channel].items() if getattr(self, k) is None}
        cfg = replace(self, **filled)
        cfg.model()
        cfg.initial_state()
        for name in cfg.bounds:
            if name not in BOUND_NAMES:
                raise UsageError(f"bounds: unknown bound {name!r}")
        if cfg.witness not in ("trace-distance", "decoherence"):
            raise UsageError(f"witness: expected trace-distance or decoherence, got {cfg.witness!r}")
        if cfg.command not in ("trajectory", "bounds", "tau-cri"):
            raise UsageError(f"command: unknown command {cfg.command!r}")
        try:
            cfg.resolution()
        except ValueError as exc:
            raise UsageError(f"epsilon/t_max/dt: {exc}") from exc
        return cfg

    def model(self):
        try:
            if self.channel == "ad":
                return channels.AmplitudeDamping(gamma0=float(self.gamma0_over_lambda), lam=1.0)
            return channels.PhaseDamping(s=float(self.s), omega_c=1.0)
        except (TypeError, ValueError) as exc:
            field_name = "gamma0_over_lambda" if self.channel == "ad" else "s"
            raise UsageError(f"{field_name}: {exc}") from exc

    def initial_state(self):
        named = {"plus": qmat.PLUS, "ground": qmat.GROUND, "excited": qmat.EXCITED}
        if self.initial in named:
            return named[self.initial]
        if self.initial.startswith("bloch:"):
            try:
                x, y, z = (float(v) for v in self.initial[len("bloch:"):].split(","))
                return qmat.bloch_state(x, y, z)
            except ValueError as exc:
                raise UsageError(f"initial: bad Bloch vector {self.initial!r} ({exc})") from exc
        raise UsageError(f"initial: expected plus, ground, excited or bloch:x,y,z, got {self.initial!r}")

    def resolution(self):
        return bounds.ResolutionConfig(
            t_max=float(self.t_max), dt=float(self.dt), epsilon=float(self.epsilon), witness=self.witness
        )


_FLOAT_KEYS = {"gamma0_over_lambda", "s", "epsilon", "t_max", "dt"}


def _coerce(key, value):
    if key not in {f.name for f in fields(ExperimentConfig)}:
        raise UsageError(f"{key}: unknown configuration key")
    if value is None:
        return None
    if key in _FLOAT_KEYS:
        try:
            return float(value)
        except ValueError as exc:
            raise UsageError(f"{key}: not a number: {value!r}") from exc
    if key == "bounds":
        if isinstance(value, str):
            value = [v.strip() for v in value.split(",") if v.strip()]
        return tuple(value)
    if key == "modified" and isinstance(value, str):
        lowered = value.strip().lower()
        if lowered not in ("true", "false", "1", "0", "yes", "no"):
            raise UsageError(f"modified: expected a boolean, got {value!r}")
        return lowered in ("true", "1", "yes")
    return value


def read_config_file(path):
    """Parse a flat ``key = value`` file; ``#`` starts a comment."""
    values = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise UsageError(f"config: cannot read {path}: {exc.strerror}") from exc
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"config: {path}:{lineno}: expected key = value")
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.replace("-", "_")
        values[key] = _coerce(key, value)
    return values


def build_config(file_values, flag_values):
    merged = dict(file_values)
    merged.update({k: _coerce(k, v) for k, v in flag_values.items() if v is not None})
    return ExperimentConfig(**merged).resolved()


def _fmt(x):
    return format(float(x), ".12g")


def _write_csv(out, header, columns):
    out.write(",".join(header) + "\n")
    for row in zip(*columns):
        out.write(",".join(_fmt(v) for v in row) + "\n")


def _describe(cfg):
    if cfg.channel == "ad":
        return f"# channel=ad gamma0_over_lambda={_fmt(cfg.gamma0_over_lambda)} initial={cfg.initial}\n"
    return f"# channel=pd s={_fmt(cfg.s)} initial={cfg.initial}\n"


def run_trajectory(cfg, out):
    model = cfg.model()
    rho0 = cfg.initial_state()
    t = cfg.resolution().grid
    rho_t = channels.evolve(rho0, t, model)
    distance = metrics.trace_distance(rho_t, model.stationary_state(rho0))
    out.write(_describe(cfg))
    out.write("# time unit: 1/lambda (ad) or 1/omega_c (pd)\n")
    _write_csv(out, ["t", "decoherence_function", "trace_distance_to_stationary"], [t, model.decoherence(t), distance])
    return EXIT_OK


def run_bounds(cfg, out):
    model = cfg.model()
    rho0 = cfg.initial_state()
    res = cfg.resolution()
    series = [bounds.qsl_series(name, rho0, model, res, modified=cfg.modified) for name in cfg.bounds]
    out.write(_describe(cfg))
    out.write(f"# modified={str(cfg.modified).lower()} epsilon={_fmt(cfg.epsilon)} witness={cfg.witness}\n")
    tau_cri = series[0].tau_cri if series else bounds.find_tau_cri(rho0, model, res)
    out.write(f"# tau_cri={'not-reached' if tau_cri is None else _fmt(tau_cri)}\n")
    if cfg.modified:
        for name, s in zip(cfg.bounds, series):
            out.write(f"# frozen_{name}={_fmt(s.frozen_value)}\n")
    header = ["t"]
    columns = [res.grid]
    for name, s in zip(cfg.bounds, series):
        header += [f"tau_{name}", f"tightness_{name}"]
        columns += [s.tau_qsl, s.tightness]
    _write_csv(out, header, columns)
    return EXIT_OK


def run_tau_cri(cfg, out):
    model = cfg.model()
    rho0 = cfg.initial_state()
    res = cfg.resolution()
    tau_cri = bounds.find_tau_cri(rho0, model, res)
    out.write(f"witness: {cfg.witness}\n")
    out.write(f"epsilon: {_fmt(cfg.epsilon)}\n")
    if tau_cri is None:
        out.write(f"tau_cri: not reached within t_max={_fmt(res.t_max)}\n")
        return EXIT_NOT_REACHED
    value = bounds.witness_values(rho0, model, tau_cri, res.witness)
    out.write(f"tau_cri: {_fmt(tau_cri)}\n")
    out.write(f"witness_value: {_fmt(value)}\n")
    return EXIT_OK


COMMANDS = {"trajectory": run_trajectory, "bounds": run_bounds, "tau-cri": run_tau_cri}


def execute(cfg, stdout=None):
    """Run ``cfg.command`` and write to ``cfg.output`` (or ``stdout``); return the exit code."""
    buf = io.StringIO()
    try:
        code = COMMANDS[cfg.command](cfg, buf)
    except bounds.NoTauCriError as exc:
        sys.stderr.write(f"error: tau_cri not reached: {exc}\n")
        return EXIT_NOT_REACHED
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(buf.getvalue())
    else:
        (stdout or sys.stdout).write(buf.getvalue())
    return code


def _sweep_one(path):
    try:
        cfg = build_config(read_config_file(path), {})
    except UsageError as exc:
        sys.stderr.write(f"error: {path}: {exc}\n")
        return EXIT_USAGE
    if not cfg.output:
        sys.stderr.write(f"error: {path}: output: sweep entries need their own output file\n")
        return EXIT_USAGE
    return execute(cfg)


def _add_common(p):
    p.add_argument("--config", help="flat key = value file")
    p.add_argument("--channel", choices=["ad", "pd"])
    p.add_argument("--gamma0-over-lambda", dest="gamma0_over_lambda")
    p.add_argument("--s")
    p.add_argument("--initial", help="plus, ground, excited or bloch:x,y,z")
    p.add_argument("--epsilon")
    p.add_argument("--t-max", dest="t_max")
    p.add_argument("--dt")
    p.add_argument("--bounds", help="comma-separated subset of av,op,hs,tr,min,quant")
    p.add_argument("--modified", action="store_true", default=None)
    p.add_argument("--witness", choices=["trace-distance", "decoherence"])
    p.add_argument("--output", help="output path (default: standard output)")


def make_parser():
    parser = argparse.ArgumentParser(prog="qslmod", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, text in [
        ("trajectory", "decoherence function and trace distance to the stationary state"),
        ("bounds", "QSL bound series and tightness"),
        ("tau-cri", "numerical resolution time"),
    ]:
        _add_common(sub.add_parser(name, help=text))
    sweep = sub.add_parser("sweep", help="run several config files concurrently")
    sweep.add_argument("configs", nargs="+")
    sweep.add_argument("--jobs", type=int, default=None)
    return parser


def main(argv=None):
    parser = make_parser()
    args = parser.parse_args(argv)
    if args.command == "sweep":
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            codes = list(pool.map(_sweep_one, args.configs))
        return max(codes, default=EXIT_OK)
    flags = {k: v for k, v in vars(args).items() if k not in ("config", "command")}
    try:
        file_values = read_config_file(args.config) if args.config else {}
        file_values.pop("command", None)
        cfg = build_config(file_values, {**flags, "command": args.command})
    except UsageError as exc:
        parser.error(str(exc))
    return execute(cfg)


if __name__ == "__main__":
    sys.exit(main())
