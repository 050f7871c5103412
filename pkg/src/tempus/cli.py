"""Command-line front end.

Subcommands: ``temporal``, ``dispersion``, ``multiphoton``, ``critical``,
``tunnel`` and ``coupling``. Data goes to stdout (CSV or JSON); failures go
to stderr as a one-line JSON object, with exit code 2 for usage errors,
3 for malformed input and 4 for numerical-domain errors.

Any option may also come from ``--config file.json`` (keys are option names,
with dashes or underscores); options given on the command line win.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass

import numpy as np

from . import __version__
from . import critical_phenomena as cp
from . import dispersion_kinetics as dk
from . import io as tio
from . import multiphoton as mp
from . import response_models as rm
from . import running_coupling as rc
from . import temporal_core as tc
from . import tunneling as tn
from .errors import InputFormatError, TempusError

C_CGS = 2.99792458e10          # cm/s
HBAR_SI = 1.054571817e-34      # J s


class UsageError(Exception):
    exit_code = 2


@dataclass(frozen=True)
class RunConfig:
    units: str = "natural"
    cspeed: float = 1.0
    hbar: float = 1.0
    output_format: str = "csv"
    seed: int = 0
    precision: int = 17

    def __post_init__(self):
        if self.units not in ("natural", "si"):
            raise UsageError(f"units must be natural or si, got {self.units!r}")
        if self.output_format not in ("csv", "json"):
            raise UsageError(f"format must be csv or json, got {self.output_format!r}")
        if not 6 <= self.precision <= 17:
            raise UsageError("precision must be in [6, 17]")
        if not self.cspeed > 0:
            raise UsageError("cspeed must be > 0")

    @classmethod
    def from_args(cls, ns):
        si = ns.units == "si"
        c = ns.cspeed if ns.cspeed is not None else (C_CGS if si else 1.0)
        hbar = ns.hbar if ns.hbar is not None else (HBAR_SI if si else 1.0)
        return cls(ns.units, c, hbar, ns.format, ns.seed, ns.precision)


def parse_range(text):
    """``"lo:hi:n"`` -> ``numpy.linspace(lo, hi, n)``."""
    try:
        lo, hi, n = text.split(":")
        lo, hi, n = float(lo), float(hi), int(n)
    except (ValueError, AttributeError):
        raise argparse.ArgumentTypeError(f"expected lo:hi:n, got {text!r}") from None
    if n < 1 or (n > 1 and not hi > lo):
        raise argparse.ArgumentTypeError(f"bad range {text!r}")
    return np.linspace(lo, hi, n)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _emit(cfg, out, payload=None, header=None, rows=None, meta=None):
    if cfg.output_format == "json" or rows is None:
        doc = dict(meta or {})
        if rows is not None:
            doc["columns"] = header
            doc["rows"] = [list(r) for r in rows]
        if payload is not None:
            doc.update(payload)
        out.write(tio.json_text(doc, cfg.precision))
    else:
        out.write(tio.csv_text(header, rows, cfg.precision, meta))


# --------------------------------------------------------------------------
# subcommands
# --------------------------------------------------------------------------

def _build_model(ns):
    name = ns.model
    need = {
        "lorentzian": ("omega0", "gamma"),
        "two-level": ("omega0", "gamma"),
        "free-photon": ("kmag",),
        "pauli-jordan": ("r",),
        "near-field": ("r",),
        "pure-delay": ("tdelay",),
        "pauli-villars": ("m", "bigM"),
    }[name]
    missing = [k for k in need if getattr(ns, k) is None]
    if missing:
        raise UsageError(f"model {name} needs --{' --'.join(missing)}")
    if name in ("lorentzian", "two-level"):
        form = "resonant" if name == "lorentzian" else "two_level"
        return rm.Lorentzian(ns.omega0, ns.gamma, ns.strength, form)
    if name == "free-photon":
        return rm.FreePhoton(ns.kmag, ns.cspeed_model)
    if name == "pauli-jordan":
        return rm.PauliJordan(ns.r)
    if name == "near-field":
        return rm.NearField(ns.r)
    if name == "pure-delay":
        return rm.PureDelay(ns.tdelay)
    return rm.PauliVillars(ns.m, ns.bigM, ns.p0 if ns.p0 is not None else 0.0, ns.pmag)


def cmd_temporal(ns, cfg, out):
    if ns.input is not None:
        data = tio.load_sampled_response(ns.input)
        tf = tc.numeric_tau(data, order=ns.order)
        meta = {"source": "sampled", "order": ns.order,
                "max_phase_step": tio.fmt(tf.max_phase_step, cfg.precision)}
    else:
        if ns.model is None:
            raise UsageError("temporal needs --input or --model")
        if ns.omega_range is None:
            raise UsageError("temporal --model needs --omega-range")
        model = _build_model(ns)
        tf = tc.model_tau_grid(model, ns.omega_range, ns.pole_window)
        meta = {"source": "model", "model": ns.model}
    rows = zip(tf.omega, tf.tau1, tf.tau2, tf.masked)
    if cfg.output_format == "csv":
        out.write(tio.temporal_csv(tf, cfg.precision, meta))
    else:
        _emit(cfg, out, header=tio.TEMPORAL_HEADER, rows=rows, meta=meta)


def _medium(ns, cfg):
    vals = {k: getattr(ns, k) for k in ("density", "sigma", "omega0", "gamma", "length")}
    missing = [k for k, v in vals.items() if v is None]
    if missing:
        raise UsageError(f"dispersion needs --{' --'.join(missing)}")
    return dk.MediumSpec(ns.density, ns.sigma, ns.omega0, ns.gamma, ns.length,
                         ns.mass, cfg.cspeed)


def cmd_dispersion(ns, cfg, out):
    if ns.forerunner:
        if ns.lambda_w is None or ns.v_sound is None:
            raise UsageError("--forerunner needs --lambda-w and --v-sound")
        omega = 2.0 * math.pi * cfg.cspeed / ns.lambda_w
        fr = dk.forerunner_threshold(ns.lambda_w, ns.v_sound, omega, cfg.hbar)
        unit = "W/cm^2" if cfg.units == "si" else "natural"
        _emit(cfg, out, payload={"j_min": fr.j_min, "J_min": fr.J_min, "J_unit": unit,
                                 "omega": omega})
        return
    medium = _medium(ns, cfg)
    if ns.omega_range is None:
        raise UsageError("dispersion needs --omega-range")
    header = ["omega", "tau1", "tau2", "ell", "n_group", "n_group_mc", "stderr_n_group",
              "mean_transit", "stderr_transit", "transit_closed", "n_events", "n_phase",
              "momentum_fraction", "displacement"]
    rows = []
    ng_closed = []
    for w in ns.omega_range:
        t1, t2 = medium.taus(w)
        ell = medium.mean_free_path(w)
        ng = dk.group_index(ell, t1, t2, cfg.cspeed).n_g
        T, _ = dk.transit_time(medium.length_L, ell, t1, t2, cfg.cspeed)
        res = dk.simulate_transport(medium, w, ns.photons, cfg.seed, ns.workers)
        ng_closed.append(ng)
        rows.append([w, t1, t2, ell, ng, res.n_group, res.stderr_n_group, res.mean_transit,
                     res.stderr_transit, T, res.n_events_mean, None, res.momentum_fraction,
                     res.displacement])
    if len(rows) >= 2:
        n_phase = dk.phase_index_curve(ns.omega_range, np.array(ng_closed))
    else:
        n_phase = np.array(ng_closed)
    for row, n in zip(rows, n_phase):
        row[11] = n
    meta = {"photons": ns.photons, "seed": cfg.seed, "surface_effects_included": False}
    _emit(cfg, out, header=header, rows=rows, meta=meta)


def cmd_multiphoton(ns, cfg, out):
    if ns.x is None:
        raise UsageError("multiphoton needs --x")
    rows = []
    for n in range(0, ns.n_max + 1):
        lr = mp.log_hhg_high_order(ns.x, n)
        rate = math.exp(lr) if lr > -math.inf else 0.0
        ratio = "" if n == 0 else ns.x / (n * n)
        rows.append([n, rate, ratio])
    n_star = mp.channel_threshold(ns.x)
    meta = {"n_star": n_star, "units": "relative"}
    _emit(cfg, out, header=["n", "rate", "ratio"], rows=rows, meta=meta)


def cmd_critical(ns, cfg, out):
    ex = cp.exponent_set(ns.dimension)
    table = {k: str(v) for k, v in ex.as_dict().items()}
    table["dimension_d"] = ex.dimension_d
    table["reference_dimension"] = ex.reference_dimension
    if ns.theta_range is None:
        _emit(cfg, out, payload={"exponents": table})
        return
    thetas = ns.theta_range
    if np.any(thetas <= 0):
        raise UsageError("--theta-range must be positive")
    sign = -1.0 if ns.ordered else 1.0
    rows = []
    for th in thetas:
        g = cp.gl_coefficients(sign * th, ns.a_coeff, ns.b_coeff, ns.R0)
        rows.append([th, cp.thermal_correlation_radius(th, ns.R0), g.A, g.B, g.eta_eq])
    header = ["theta", "R_c", "A", "B", "eta_eq"]
    if cfg.output_format == "json":
        _emit(cfg, out, payload={"exponents": table}, header=header, rows=rows)
    else:
        meta = {"exponents": json.dumps(table, sort_keys=True)}
        _emit(cfg, out, header=header, rows=rows, meta=meta)


def cmd_tunnel(ns, cfg, out):
    if ns.experiment == "hartman":
        r = tn.hartman_experiment(U0=ns.u0, a=ns.a, k0=ns.k0, width=ns.width, m=ns.m)
        meta = {
            "peak_shift": tio.fmt(r.peak_shift, cfg.precision),
            "barrier_width": tio.fmt(r.barrier_width, cfg.precision),
            "effective_delay": tio.fmt(r.effective_delay, cfg.precision),
            "traversal_time": tio.fmt(r.traversal_time, cfg.precision),
            "transmission": tio.fmt(r.transmission, cfg.precision),
            "grid_cell": tio.fmt(r.grid_cell, cfg.precision),
        }
        f = r.fields
        sl = slice(None, None, ns.stride)
        norm = math.sqrt(float(np.sum(np.abs(f.transmitted) ** 2)) * r.grid_cell)
        rows = zip(f.x[sl], (np.abs(f.transmitted[sl]) / norm) ** 2, np.abs(f.reference[sl]) ** 2,
                   np.abs(f.reflected[sl]) ** 2)
        header = ["x", "transmitted_density_normalized", "reference_density", "reflected_density"]
        if cfg.output_format == "json":
            _emit(cfg, out, payload={k: float(v) for k, v in meta.items()})
        else:
            _emit(cfg, out, header=header, rows=rows, meta=meta)
        return
    if ns.e is None:
        raise UsageError("tunnel needs --e (or --experiment hartman)")
    shape = tn.Square(ns.u0, ns.a) if ns.barrier == "square" else tn.Parabolic(ns.u0, ns.a)
    spec = tn.BarrierSpec(shape, ns.m, ns.e)
    xl, xr = tn.turning_points(spec)
    w = tn.wkb_tau(spec)
    _emit(cfg, out, payload={"tau1": w.tau1, "tau2": w.tau2, "x_left": xl, "x_right": xr,
                             "error_estimate": w.error_estimate})


def cmd_coupling(ns, cfg, out):
    if ns.action == "census":
        entries = rc.PRESETS[ns.preset]
        census = rc.fermion_census(entries)
        verdicts = [v._asdict() for v in census.verdicts]
        _emit(cfg, out, payload={"preset": ns.preset, "summary": census.summary,
                                 "all_pass": census.summary == "conforms",
                                 "verdicts": verdicts})
        return
    if ns.alpha is None or ns.beta is None:
        raise UsageError("coupling needs --alpha and --beta")
    v = rc.causality_verdict(ns.alpha, ns.beta, ns.label, ns.abelian)
    doc = {"verdict": v._asdict()}
    if ns.beta < 0:
        doc["weak_scale"] = rc.weak_scale(ns.alpha, ns.beta, ns.mass, ns.compton)._asdict()
    if ns.cutoff is not None:
        spec = rc.CouplingSpec(ns.alpha, ns.beta, ns.nu, ns.mass, ns.cutoff, ns.k)
        doc["bare"] = rc.bare_coupling(spec)._asdict()
    _emit(cfg, out, payload=doc)


# --------------------------------------------------------------------------
# parser
# --------------------------------------------------------------------------

def _add_common(p, defaults):
    def opt(name, **kw):
        if not defaults:
            kw["default"] = argparse.SUPPRESS
        p.add_argument(name, **kw)

    opt("--config", help="JSON file supplying any option", default=None)
    opt("--units", choices=["natural", "si"], default="natural")
    opt("--cspeed", type=float, default=None)
    opt("--hbar", type=float, default=None)
    opt("--format", choices=["csv", "json"], default="csv")
    opt("--seed", type=int, default=0)
    opt("--precision", type=int, default=17)


def build_parser():
    p = _Parser(prog="tempus", description="Temporal functions of quantum responses.")
    p.add_argument("--version", action="version", version=f"tempus {__version__}")
    _add_common(p, defaults=True)
    # the same options are accepted after the subcommand name
    common = _Parser(add_help=False)
    _add_common(common, defaults=False)
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub_add = sub.add_parser

    def add_parser(name, **kw):
        return sub_add(name, parents=[common], **kw)

    sub.add_parser = add_parser

    t = sub.add_parser("temporal", help="delay and formation times of a response")
    t.add_argument("--input", help="CSV with columns omega,re,im")
    t.add_argument("--order", type=int, choices=[2, 4], default=4)
    t.add_argument("--model", choices=["lorentzian", "two-level", "free-photon", "pauli-jordan",
                                       "near-field", "pure-delay", "pauli-villars"])
    t.add_argument("--omega-range", type=parse_range)
    t.add_argument("--pole-window", type=float, default=0.0)
    for name in ("omega0", "gamma", "kmag", "r", "tdelay", "m", "bigM", "p0"):
        t.add_argument(f"--{name}", type=float)
    t.add_argument("--strength", type=float, default=1.0)
    t.add_argument("--pmag", type=float, default=0.0)
    t.add_argument("--model-cspeed", dest="cspeed_model", type=float, default=1.0)
    t.set_defaults(func=cmd_temporal)

    d = sub.add_parser("dispersion", help="saltatory transport through a medium")
    for name in ("density", "sigma", "omega0", "gamma", "length"):
        d.add_argument(f"--{name}", type=float)
    d.add_argument("--mass", type=float, default=1.0)
    d.add_argument("--omega-range", type=parse_range)
    d.add_argument("--photons", type=int, default=20000)
    d.add_argument("--workers", type=int, default=1)
    d.add_argument("--forerunner", action="store_true")
    d.add_argument("--lambda-w", type=float)
    d.add_argument("--v-sound", type=float)
    d.set_defaults(func=cmd_dispersion)

    m = sub.add_parser("multiphoton", help="harmonic rates and channel threshold")
    m.add_argument("--x", type=float)
    m.add_argument("--n-max", type=int, default=10)
    m.set_defaults(func=cmd_multiphoton)

    c = sub.add_parser("critical", help="correlation radii, GL coefficients, exponents")
    c.add_argument("--theta-range", type=parse_range)
    c.add_argument("--a-coeff", type=float, default=1.0)
    c.add_argument("--b-coeff", type=float, default=1.0)
    c.add_argument("--R0", type=float, default=1.0)
    c.add_argument("--ordered", action="store_true", help="evaluate on the ordered side")
    c.add_argument("--dimension", type=int, default=3)
    c.set_defaults(func=cmd_critical)

    u = sub.add_parser("tunnel", help="WKB durations and the packet experiment")
    u.add_argument("--barrier", choices=["square", "parabolic"], default="square")
    u.add_argument("--u0", type=float, default=2.0)
    u.add_argument("--a", type=float, default=1.0)
    u.add_argument("--m", type=float, default=1.0)
    u.add_argument("--e", type=float)
    u.add_argument("--experiment", choices=["hartman"])
    u.add_argument("--k0", type=float, default=5.0)
    u.add_argument("--width", type=float, default=40.0)
    u.add_argument("--stride", type=int, default=8)
    u.set_defaults(func=cmd_tunnel)

    g = sub.add_parser("coupling", help="causality bound on running couplings")
    g.add_argument("action", nargs="?", choices=["verdict", "census"], default="verdict")
    g.add_argument("--preset", choices=sorted(rc.PRESETS), default="three-family")
    g.add_argument("--alpha", type=float)
    g.add_argument("--beta", type=float)
    g.add_argument("--label", default="")
    g.add_argument("--abelian", action="store_true")
    g.add_argument("--nu", type=float, default=1.0)
    g.add_argument("--mass", type=float, default=1.0)
    g.add_argument("--compton", type=float, default=1.0)
    g.add_argument("--lambda", dest="cutoff", type=float)
    g.add_argument("--k", type=float, default=1.0)
    g.set_defaults(func=cmd_coupling)
    return p


def _load_config(path):
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise InputFormatError(f"cannot read config {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputFormatError(f"config {path}: {exc.msg}", row=exc.lineno) from None
    if not isinstance(data, dict):
        raise InputFormatError("config must be a JSON object")
    return {k.replace("-", "_"): v for k, v in data.items()}


def _apply_config(parser, ns_sub, config):
    """Set option defaults from ``config`` so explicit flags still win."""
    actions = {a.dest: a for a in parser._actions}
    sub_action = next(a for a in parser._actions if isinstance(a, argparse._SubParsersAction))
    subp = sub_action.choices.get(ns_sub) if ns_sub else None
    sub_actions = {a.dest: a for a in subp._actions} if subp else {}
    for key, value in config.items():
        if key in ("config", "command"):
            continue
        target = subp if key in sub_actions else (parser if key in actions else None)
        if target is None:
            raise UsageError(f"unknown config key {key!r}")
        act = sub_actions.get(key) or actions[key]
        if isinstance(value, str) and act.type is not None:
            try:
                value = act.type(value)
            except (argparse.ArgumentTypeError, ValueError) as exc:
                raise UsageError(f"config {key}: {exc}") from None
        target.set_defaults(**{key: value})


def _fail(err, code, kind):
    payload = {"error": kind, "exit_code": code, "message": str(err)}
    row = getattr(err, "row", None)
    if row is not None:
        payload["row"] = row
    sys.stderr.write(json.dumps(payload, sort_keys=True) + "\n")
    return code


def main(argv=None, stdout=None):
    """Parse ``argv`` and dispatch; returns the process exit code."""
    argv = list(sys.argv[1:] if argv is None else argv)
    out = stdout or sys.stdout
    parser = build_parser()
    try:
        if not argv:
            parser.print_usage(sys.stderr)
            raise UsageError("no command given")
        ns = parser.parse_args(argv)
        if ns.config:
            _apply_config(parser, ns.command, _load_config(ns.config))
            ns = parser.parse_args(argv)
        if ns.command is None:
            parser.print_usage(sys.stderr)
            raise UsageError("no command given")
        cfg = RunConfig.from_args(ns)
        ns.func(ns, cfg, out)
    except UsageError as exc:
        return _fail(exc, 2, "usage")
    except TempusError as exc:
        return _fail(exc, exc.exit_code, type(exc).__name__)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
