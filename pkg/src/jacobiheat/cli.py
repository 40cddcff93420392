"""Command-line front end.

Every subcommand shares the order flags (``--alpha``, ``--beta``), the grid
flags, the quadrature flags and the output flags.  A JSON file given with
``--config`` supplies the same settings in the layout

    {"alpha": 0.5, "beta": -0.5,
     "grid": {"x_min": 0.001, "x_max": 20, "n": 512, "spacing": "geometric"},
     "quad": {"lambda_max": "auto", "panels": 32, "points_per_panel": 16, "tol": 1e-8},
     "output": {"format": "json", "path": null}}

plus any subcommand option under its flag name (``"t": 1.0``); flags given
on the command line win.  Exit status: 0 on success, 1 for domain,
accuracy or configuration errors, 2 for usage errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from contextlib import nullcontext
from dataclasses import dataclass

import numpy as np

from . import dynamics as dyn
from .errors import JacobiError, PoleError
from .grid import SPACINGS, RadialFunction, SpectralFunction, make_grid
from .heat import HeatQuery, heat_evolve, heat_grid_extent, heat_kernel, heat_quadrature
from .measure import LorentzIndex, lorentz_norm
from .special import JacobiParams, c_function, jacobi_phi, plancherel_density
from .transform import (QuadratureConfig, forward_transform, heat_lambda_max, invert_on,
                        lambda_rule, transform)
from .verify import SUITES, Check, run_suite

GRID_DEFAULTS = {"x_min": 1e-3, "x_max": 20.0, "n": 512, "spacing": "geometric"}
QUAD_DEFAULTS = {"lambda_max": "auto", "panels": 32, "points_per_panel": 16, "tol": 1e-8}
OUTPUT_DEFAULTS = {"format": "json", "path": None}
ORDER_DEFAULTS = {"alpha": 0.5, "beta": -0.5}
SAMPLES = ("gaussian", "bump", "heat1")


class ConfigError(JacobiError, ValueError):
    """Invalid run configuration (file contents or resolved values)."""


@dataclass(frozen=True)
class RunConfig:
    alpha: float
    beta: float
    grid: dict
    quad: dict
    output: dict

    def __post_init__(self):
        g = self.grid
        if int(g["n"]) < 16:
            raise ConfigError(f"grid.n must be >= 16, got {g['n']}")
        if g["spacing"] not in SPACINGS:
            raise ConfigError(f"grid.spacing must be one of {SPACINGS}")
        if self.output["format"] not in ("json", "csv"):
            raise ConfigError("output.format must be json or csv")
        lm = self.quad["lambda_max"]
        if lm != "auto" and not float(lm) > 0:
            raise ConfigError("quad.lambda_max must be positive or 'auto'")

    @property
    def params(self) -> JacobiParams:
        return JacobiParams(self.alpha, self.beta)

    def nodes(self) -> np.ndarray:
        g = self.grid
        return make_grid(float(g["x_min"]), float(g["x_max"]), int(g["n"]), g["spacing"])

    def quadrature(self, auto_lambda_max: float = 40.0) -> QuadratureConfig:
        q = self.quad
        lm = auto_lambda_max if q["lambda_max"] == "auto" else float(q["lambda_max"])
        return QuadratureConfig(lm, int(q["panels"]), int(q["points_per_panel"]), float(q["tol"]))

    def as_dict(self) -> dict:
        return {"alpha": self.alpha, "beta": self.beta, "grid": dict(self.grid),
                "quad": dict(self.quad), "output": dict(self.output)}


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _float_or_inf(text: str) -> float:
    return math.inf if text.strip().lower() in ("inf", "infinity") else float(text)


def _lambda_max(text: str):
    return "auto" if text == "auto" else float(text)


def _common_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("order and configuration")
    g.add_argument("--alpha", type=float, help=f"alpha > -1/2 (default {ORDER_DEFAULTS['alpha']})")
    g.add_argument("--beta", type=float, help=f"-1/2 <= beta <= alpha (default {ORDER_DEFAULTS['beta']})")
    g.add_argument("--config", metavar="PATH", help="JSON run configuration; flags override it")
    g = p.add_argument_group("grid")
    g.add_argument("--x-min", type=float, help=f"smallest node (default {GRID_DEFAULTS['x_min']})")
    g.add_argument("--x-max", type=float, help=f"largest node (default {GRID_DEFAULTS['x_max']})")
    g.add_argument("--n", type=int, help=f"number of nodes, >= 16 (default {GRID_DEFAULTS['n']})")
    g.add_argument("--spacing", choices=SPACINGS,
                   help=f"node spacing (default {GRID_DEFAULTS['spacing']})")
    g = p.add_argument_group("inversion quadrature")
    g.add_argument("--lambda-max", type=_lambda_max,
                   help="lambda cut-off or 'auto' (default auto: heat cut-off for heat data, 40 otherwise)")
    g.add_argument("--panels", type=int, help=f"minimum panels (default {QUAD_DEFAULTS['panels']})")
    g.add_argument("--points-per-panel", type=int,
                   help=f"Gauss points per panel (default {QUAD_DEFAULTS['points_per_panel']})")
    g.add_argument("--tol", type=float, help=f"tail tolerance (default {QUAD_DEFAULTS['tol']})")
    g = p.add_argument_group("output")
    g.add_argument("--format", choices=("json", "csv"), help="output format (default json)")
    g.add_argument("--output", metavar="PATH", help="write here instead of stdout")
    return p


def _input_options(p: argparse.ArgumentParser) -> None:
    src = p.add_mutually_exclusive_group()
    src.add_argument("--input", metavar="CSV", help="radial samples with columns x,re,im")
    src.add_argument("--sample", choices=SAMPLES,
                     help="built-in test function on the configured grid (default gaussian)")


def build_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    parser = argparse.ArgumentParser(
        prog="jacobiheat",
        description="Jacobi functions, transforms, heat kernels, Lorentz norms and "
                    "semigroup dynamics on the weighted half-line.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("phi", parents=[common], help="evaluate phi_lambda(x)")
    p.add_argument("--lambda", dest="lam", type=complex, help="spectral parameter, e.g. 1 or 0.3+0.3j")
    p.add_argument("--x", type=float, nargs="+", help="abscissae (default: the configured grid)")

    p = sub.add_parser("cfun", parents=[common], help="c-function and Plancherel density")
    p.add_argument("--lambda", dest="lam", type=complex, nargs="+")

    p = sub.add_parser("transform", parents=[common], help="forward Jacobi transform")
    _input_options(p)
    p.add_argument("--lambda", dest="lam", type=complex, nargs="+",
                   help="evaluation points (default: the inversion quadrature nodes)")

    p = sub.add_parser("invert", parents=[common], help="inverse Jacobi transform onto the grid")
    src = p.add_mutually_exclusive_group()
    src.add_argument("--input", metavar="CSV",
                     help="spectral samples lambda,re,im on the quadrature nodes (see transform)")
    src.add_argument("--heat-t", type=float, help="invert exp(-t(lambda^2 + rho^2))")

    p = sub.add_parser("heat-kernel", parents=[common], help="sample h_t on the grid")
    p.add_argument("--t", type=float, help="time (default 1)")

    p = sub.add_parser("evolve", parents=[common], help="apply exp(-t(Delta - theta))")
    _input_options(p)
    p.add_argument("--t", type=float, help="time (default 1)")
    p.add_argument("--theta", type=float, help="shift (default 0)")

    p = sub.add_parser("lorentz-norm", parents=[common], help="L^{p,q}(mu) norm of samples")
    _input_options(p)
    p.add_argument("--p", type=float, help="1 <= p < inf (default 2)")
    p.add_argument("--q", type=_float_or_inf, help="1 <= q <= inf (default p)")

    p = sub.add_parser("classify", parents=[common], help="chaos classification")
    p.add_argument("--p", type=float, help="exponent p (default 4)")
    p.add_argument("--theta", type=float, help="shift theta (default 1)")

    p = sub.add_parser("periodic", parents=[common], help="periodic eigenvalues 2 pi i k / T")
    p.add_argument("--p", type=float, help="exponent p > 2 (default 4)")
    p.add_argument("--theta", type=float, help="shift theta (default 1)")
    p.add_argument("--period", type=float, help="period T (default 100)")

    p = sub.add_parser("verify", parents=[common], help="run a self-check suite")
    p.add_argument("suite", choices=SUITES + ("all",))
    p.add_argument("--t", type=float, help="time used by the heat suite (default 1)")
    return parser


def _load_config(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError("config file must hold a JSON object")
    return data


def resolve_config(args: argparse.Namespace) -> tuple[RunConfig, dict]:
    """Merge defaults, the config file and flags (flags win)."""
    data = _load_config(args.config)

    def pick(flag, section, key, default):
        if flag is not None:
            return flag
        if section is None:
            return data.get(key, default)
        return data.get(section, {}).get(key, default)

    grid = {k: pick(getattr(args, k), "grid", k, v) for k, v in GRID_DEFAULTS.items()}
    quad = {k: pick(getattr(args, k), "quad", k, v) for k, v in QUAD_DEFAULTS.items()}
    output = {"format": pick(args.format, "output", "format", "json"),
              "path": pick(args.output, "output", "path", None)}
    cfg = RunConfig(float(pick(args.alpha, None, "alpha", ORDER_DEFAULTS["alpha"])),
                    float(pick(args.beta, None, "beta", ORDER_DEFAULTS["beta"])),
                    grid, quad, output)
    extra = {}
    for key in ("lam", "x", "t", "theta", "p", "q", "period", "input", "sample", "heat_t"):
        if hasattr(args, key):
            val = getattr(args, key)
            extra[key] = val if val is not None else data.get(key)
    return cfg, extra


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def _clean(obj):
    """JSON-safe copy: complex -> (re, im) pairs, non-finite floats -> {"pole": true}."""
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        f = float(obj)
        return f if math.isfinite(f) else {"pole": True}
    if isinstance(obj, complex):
        return {"re": _clean(obj.real), "im": _clean(obj.imag)}
    return obj


def _dump_json(obj) -> str:
    return json.dumps(_clean(obj), indent=2, allow_nan=False) + "\n"


def _table_csv(header, first, values) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(header)
    for a, v in zip(first, values):
        w.writerow([repr(float(a)), repr(float(v.real)), repr(float(v.imag))])
    return buf.getvalue()


def radial_payload(f: RadialFunction, fmt: str, meta: dict):
    if fmt == "csv":
        return _table_csv(("x", "re", "im"), f.nodes, f.values)
    return _dump_json({**meta, "x": f.nodes.tolist(), "re": f.values.real.tolist(),
                       "im": f.values.imag.tolist()})


def spectral_payload(g: SpectralFunction, fmt: str, meta: dict):
    if fmt == "csv":
        return _table_csv(("lambda", "re", "im"), g.lambda_nodes, g.values)
    return _dump_json({**meta, "lambda": g.lambda_nodes.tolist(), "re": g.values.real.tolist(),
                       "im": g.values.imag.tolist()})


def read_table(path: str, first: str):
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    if not rows or first not in rows[0]:
        raise ConfigError(f"{path}: expected CSV columns {first},re,im")
    a = np.array([float(r[first]) for r in rows])
    v = np.array([float(r["re"]) + 1j * float(r.get("im", 0.0) or 0.0) for r in rows])
    return a, v


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def _sample_function(cfg: RunConfig, extra: dict) -> RadialFunction:
    if extra.get("input"):
        x, v = read_table(extra["input"], "x")
        return RadialFunction(x, v)
    nodes = cfg.nodes()
    name = extra.get("sample") or "gaussian"
    if name == "gaussian":
        return RadialFunction.from_callable(lambda x: np.exp(-x * x), nodes)
    if name == "bump":
        def bump(x):
            u = np.clip(1.0 - (x / 4.0) ** 2, 1e-300, None)
            return np.where(x < 4.0, np.exp(-1.0 / u), 0.0)
        return RadialFunction.from_callable(bump, nodes)
    return heat_kernel(HeatQuery(1.0, cfg.params), nodes)


def _cmd_phi(cfg, extra):
    lam = extra.get("lam")
    if lam is None:
        raise ConfigError("phi needs --lambda")
    lam = complex(lam)
    xs = extra.get("x")
    if xs is None:
        nodes = cfg.nodes()
        vals = np.array([jacobi_phi(cfg.params, lam, float(x)) for x in nodes])
        return radial_payload(RadialFunction(nodes, vals), cfg.output["format"],
                              {"config": cfg.as_dict(), "lambda": lam})
    rows = []
    for x in xs:
        v, rep = jacobi_phi(cfg.params, lam, float(x), report=True)
        rows.append({"x": float(x), "value_re": v.real, "value_im": v.imag,
                     "regime": rep.regime, "terms_used": rep.terms_used})
    if cfg.output["format"] == "csv":
        return _table_csv(("x", "re", "im"), xs, [complex(r["value_re"], r["value_im"]) for r in rows])
    if len(rows) == 1:
        out = dict(rows[0])
        out.pop("x")
        return _dump_json({**out, "config": cfg.as_dict()})
    return _dump_json({"values": rows, "config": cfg.as_dict()})


def _cmd_cfun(cfg, extra):
    lams = extra.get("lam")
    if not lams:
        raise ConfigError("cfun needs --lambda")
    rows = []
    for lam in lams:
        lam = complex(lam)
        row = {"lambda": lam}
        try:
            c = c_function(cfg.params, lam)
            row["c"] = c
        except PoleError:
            row["c"] = {"pole": True}
        if lam.imag == 0:
            row["plancherel_density"] = plancherel_density(cfg.params, lam.real)
        rows.append(row)
    return _dump_json({"values": rows, "config": cfg.as_dict()})


def _cmd_transform(cfg, extra):
    f = _sample_function(cfg, extra)
    lams = extra.get("lam")
    if lams:
        vals = forward_transform(cfg.params, f, np.array([complex(v) for v in lams]))
        return _dump_json({"values": [{"lambda": complex(l), "value": complex(v)}
                                      for l, v in zip(lams, vals)], "config": cfg.as_dict()})
    g = transform(cfg.params, f, cfg.quadrature(), float(cfg.nodes().max()))
    return spectral_payload(g, cfg.output["format"], {"config": cfg.as_dict()})


def _cmd_invert(cfg, extra):
    nodes = cfg.nodes()
    if extra.get("heat_t") is not None:
        t = float(extra["heat_t"])
        quad = cfg.quadrature(heat_lambda_max(t, float(cfg.quad["tol"])))
        rule = lambda_rule(cfg.params, quad, float(nodes.max()))
        g = SpectralFunction(rule.nodes, np.exp(-t * (rule.nodes ** 2 + cfg.params.rho ** 2)))
    elif extra.get("input"):
        lam, v = read_table(extra["input"], "lambda")
        g = SpectralFunction(lam, v)
        quad = cfg.quadrature()
    else:
        raise ConfigError("invert needs --input or --heat-t")
    f = invert_on(cfg.params, g, nodes, quad)
    return radial_payload(f, cfg.output["format"], {"config": cfg.as_dict()})


def _time(extra) -> float:
    t = extra.get("t")
    return 1.0 if t is None else float(t)


def _cmd_heat_kernel(cfg, extra):
    t = _time(extra)
    quad = heat_quadrature(t, float(cfg.quad["tol"])) if cfg.quad["lambda_max"] == "auto" \
        else cfg.quadrature()
    h = heat_kernel(HeatQuery(t, cfg.params), cfg.nodes(), quad)
    return radial_payload(h, cfg.output["format"],
                          {"config": cfg.as_dict(), "t": t,
                           "mass_radius": heat_grid_extent(cfg.params, t)})


def _cmd_evolve(cfg, extra):
    t = _time(extra)
    theta = float(extra.get("theta") or 0.0)
    f = _sample_function(cfg, extra)
    quad = heat_quadrature(t, float(cfg.quad["tol"])) if cfg.quad["lambda_max"] == "auto" \
        else cfg.quadrature()
    u = heat_evolve(HeatQuery(t, cfg.params, theta), f, quad)
    return radial_payload(u, cfg.output["format"], {"config": cfg.as_dict(), "t": t, "theta": theta})


def _cmd_lorentz(cfg, extra):
    f = _sample_function(cfg, extra)
    p = float(extra.get("p") or 2.0)
    q = extra.get("q")
    q = p if q is None else float(q)
    value = lorentz_norm(cfg.params, f, LorentzIndex(p, q), check_tail=True)
    return _dump_json({"p": p, "q": q, "value": value, "config": cfg.as_dict()})


def _p_theta(extra):
    p = extra.get("p")
    theta = extra.get("theta")
    return (4.0 if p is None else float(p)), (1.0 if theta is None else float(theta))


_VERDICT_NAMES = {
    dyn.Verdict.CHAOTIC: "chaotic",
    dyn.Verdict.NO_PERIODIC_POINTS: "no_periodic_points",
    dyn.Verdict.NO_PERIODIC_POINTS_NOT_HYPERCYCLIC: "no_periodic_points_not_hypercyclic",
    dyn.Verdict.UNCLASSIFIED: "unclassified",
}


def _cmd_classify(cfg, extra):
    p, theta = _p_theta(extra)
    v = dyn.classify(cfg.params, p, theta)
    return _dump_json({"verdict": _VERDICT_NAMES[v.verdict], "theta_p": v.theta_p,
                       "margin": v.margin, "reason": v.reason, "p": p, "theta": theta,
                       "config": cfg.as_dict()})


def _cmd_periodic(cfg, extra):
    p, theta = _p_theta(extra)
    period = extra.get("period")
    period = 100.0 if period is None else float(period)
    zs = dyn.periodic_eigenvalues(cfg.params, p, theta, period)
    return _dump_json({"p": p, "theta": theta, "period": period, "count": len(zs),
                       "eigenvalues": [complex(z) for z in zs], "config": cfg.as_dict()})


def _cmd_verify(cfg, extra, suite):
    t = _time(extra)
    checks = []
    for name in (SUITES if suite == "all" else (suite,)):
        try:
            checks.extend(run_suite(name, cfg.params, t=t))
        except JacobiError as exc:
            # keep what was measured so far and record the abort as a failed check
            checks.append(Check(f"{name}_suite_aborted: {exc}", None, None, False))
    report = {"suite": suite, "t": t, "config": cfg.as_dict(),
              "checks": [c.as_dict() for c in checks],
              "pass": all(c.passed for c in checks)}
    return _dump_json(report), report["pass"]


_COMMANDS = {
    "phi": _cmd_phi,
    "cfun": _cmd_cfun,
    "transform": _cmd_transform,
    "invert": _cmd_invert,
    "heat-kernel": _cmd_heat_kernel,
    "evolve": _cmd_evolve,
    "lorentz-norm": _cmd_lorentz,
    "classify": _cmd_classify,
    "periodic": _cmd_periodic,
}


def _thread_limit():
    raw = os.environ.get("JACOBI_HEAT_THREADS")
    if not raw:
        return nullcontext()
    from threadpoolctl import threadpool_limits
    return threadpool_limits(limits=max(1, int(raw)))


def run_command(argv: list[str] | None = None, stdout=None, stderr=None) -> int:
    """Parse ``argv``, run the command and return the exit status."""
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    ok = True
    try:
        cfg, extra = resolve_config(args)
        with _thread_limit():
            if args.command == "verify":
                text, ok = _cmd_verify(cfg, extra, args.suite)
            else:
                text = _COMMANDS[args.command](cfg, extra)
    except (JacobiError, ValueError, OverflowError, ArithmeticError, OSError) as exc:
        print(f"error: {exc}", file=stderr)
        return 1
    path = cfg.output["path"]
    if path:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    return 0 if ok else 1


def main() -> None:
    sys.exit(run_command())


if __name__ == "__main__":
    main()
