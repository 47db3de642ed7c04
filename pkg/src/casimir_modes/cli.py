"""Command-line front end.

A run is described by one YAML document, optionally overridden by flags::

    casimir-modes lifshitz --config run.yaml --out energies.csv
    casimir-modes identity-check --sweep 50 --seed 7
    casimir-modes verify --only 1 2 5

Exit status is 0 on success, 1 on an engine error (a JSON error record is
written to stderr) and 2 when the configuration cannot be parsed.
"""
import argparse
import csv
from concurrent.futures import ThreadPoolExecutor
import io
import json
import os
import sys

import numpy as np
import yaml

from . import acceptance
from .dielectric import (DiscreteBathModel, DrudeLorentzModel, PerfectMirror, Vacuum,
                         make_ohmic_bath)
from .errors import CasimirError
from .lifshitz import energy_zero_T, free_energy_matsubara, free_energy_real_frequency
from .modes import find_resonances, identity_check, real_mode_spectrum, sum_over_modes_energy
from .numerics import Rectangle
from .planar import BULK, PlanarCavity, TransverseChannel
from .polder import (GaussianDipole, HalfSpaceGeometry, cp_energy_exact,
                     cp_energy_perturbative, cp_force)

COMMANDS = ("lifshitz", "modes", "complex-modes", "casimir-polder", "identity-check", "verify")

COLUMNS = {
    "lifshitz": ["route", "L", "temperature", "value", "abs_error"],
    "modes": ["route", "polarization", "k", "L", "index", "value", "abs_error"],
    "complex-modes": ["route", "polarization", "k", "L", "branch", "re", "im"],
    "casimir-polder": ["route", "z0", "value", "abs_error"],
    "identity-check": ["route", "index", "f_spec", "re_omega0", "im_omega0", "lhs", "rhs", "gap"],
    "verify": ["route", "criterion", "name", "passed", "seconds", "detail"],
}

DEFAULTS = {
    "lifshitz": {"material": {"model": "perfect"}, "geometry": {"gaps": [1.0, 2.0, 4.0]}},
    "modes": {"material": {"model": "ohmic_bath", "omega_p": 10.0, "gamma": 1.0,
                           "omega_c": 50.0, "N": 8},
              "geometry": {"gaps": [1.0], "slab_thickness": 1.0},
              "channels": [{"polarization": "TE", "k": 0.5}], "omega_max": 10.0},
    "complex-modes": {"material": {"model": "drude", "omega_p": 3.0},
                      "geometry": {"gaps": [1.0]},
                      "channels": [{"polarization": "TM", "k": 0.8}],
                      "region": [0.0, 10.0, -10.0, 0.0]},
    "casimir-polder": {"material": {"model": "perfect"},
                       "dipole": {"m0": 1.0, "K0": 1.0, "q": 0.1, "a": 0.01},
                       "distances": [1.0, 10.0, 100.0]},
    "identity-check": {"sweep": 50},
    "verify": {},
}


KNOWN_KEYS = {"command", "material", "geometry", "channels", "routes", "omega_max", "L_ref",
              "verify_counts", "region", "quasistatic", "dipole", "distances", "quantities",
              "sweep", "only", "tol", "seed", "threads", "output", "reference_wavenumber"}


class ConfigError(Exception):
    pass


# ------------------------------------------------------------------ config

def _load_yaml(path):
    try:
        with open(path) as fh:
            doc = yaml.safe_load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from exc
    except yaml.YAMLError as exc:
        raise ConfigError(f"invalid YAML in {path}: {exc}") from exc
    if doc is None:
        return {}
    if not isinstance(doc, dict):
        raise ConfigError(f"{path} must hold a mapping")
    return doc


def _merge(base, over):
    out = dict(base)
    for key, val in over.items():
        if isinstance(val, dict) and isinstance(out.get(key), dict):
            out[key] = _merge(out[key], val)
        else:
            out[key] = val
    return out


def _number(block, key, default=None):
    val = block.get(key, default)
    if val is None:
        raise ConfigError(f"missing '{key}'")
    try:
        return float(val)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"'{key}' must be a number, got {val!r}") from exc


def build_material(block, base_dir="."):
    """Dielectric model from a config block; ``file`` points to a YAML material file."""
    if "file" in block:
        path = os.path.join(base_dir, block["file"])
        if not os.path.exists(path):
            raise ConfigError(f"material file {path} does not exist")
        block = _merge(_load_yaml(path), {k: v for k, v in block.items() if k != "file"})
    model = block.get("model", block.get("type"))
    model = {"drude_lorentz": "drude", "discrete_bath": "bath"}.get(model, model)
    try:
        if model == "perfect":
            return PerfectMirror()
        if model == "vacuum":
            return Vacuum()
        if model == "drude":
            return DrudeLorentzModel(_number(block, "omega_p"), _number(block, "omega_0", 0.0),
                                     _number(block, "gamma", 0.0))
        if model == "ohmic_bath":
            return make_ohmic_bath(_number(block, "gamma"), _number(block, "omega_c"),
                                   int(_number(block, "N")), _number(block, "omega_p", 1.0),
                                   _number(block, "omega_0", 0.0), block.get("grid", "linear"))
        if model == "bath":
            return DiscreteBathModel(_number(block, "omega_p"), _number(block, "omega_0", 0.0),
                                     tuple(tuple(c) for c in block.get("couplings", ())))
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid material: {exc}") from exc
    raise ConfigError(f"unknown material model {model!r}")


def _cavities(cfg, mirror):
    geo = cfg.get("geometry", {})
    gaps = geo.get("gaps", [geo.get("gap", 1.0)])
    d = geo.get("slab_thickness", BULK)
    d = BULK if d in (None, "inf", "bulk") else float(d)
    tau = float(geo.get("temperature", 0.0))
    try:
        return [PlanarCavity(float(L), mirror, d, tau) for L in gaps]
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid geometry: {exc}") from exc


def _channels(cfg):
    try:
        return [TransverseChannel(c["polarization"], float(c["k"])) for c in cfg["channels"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"invalid channel list: {exc}") from exc


# ------------------------------------------------------------------ commands

def _map(fn, items, threads):
    if threads > 1:
        with ThreadPoolExecutor(threads) as ex:
            return list(ex.map(fn, items))
    return [fn(x) for x in items]


def run_lifshitz(cfg, mirror, tol, threads):
    routes = cfg.get("routes")
    cavs = _cavities(cfg, mirror)
    area = float(cfg.get("geometry", {}).get("area", 1.0))
    if not area > 0:
        raise ConfigError("area must be positive")

    def one(c):
        rows = []
        names = routes or (["matsubara"] if c.temperature_wavenumber > 0 else ["zero_T"])
        for name in names:
            if name == "zero_T":
                r = energy_zero_T(c)
            elif name == "matsubara":
                r = free_energy_matsubara(c, tol=tol)
            elif name == "real_frequency":
                r = free_energy_real_frequency(c)
            else:
                raise ConfigError(f"unknown route {name!r}")
            rows.append([r.route.value, c.gap, c.temperature_wavenumber, area * r.value,
                         area * r.abs_error])
        return rows

    return [row for rows in _map(one, cavs, threads) for row in rows]


def run_modes(cfg, mirror, tol, threads):
    omega_max = _number(cfg, "omega_max")
    L_ref = cfg.get("L_ref")
    rows = []
    for c in _cavities(cfg, mirror):
        for ch in _channels(cfg):
            s = real_mode_spectrum(c, ch, omega_max, verify=bool(cfg.get("verify_counts")))
            for i, w in enumerate(s.frequencies):
                rows.append(["mode_spectrum", ch.polarization, ch.k, c.gap, i, float(w), 0.0])
            if L_ref is not None:
                e = sum_over_modes_energy(c, ch, float(L_ref))
                rows.append([e.route.value, ch.polarization, ch.k, c.gap, -1, e.value,
                             e.abs_error])
    return rows


def run_complex_modes(cfg, mirror, tol, threads):
    try:
        region = Rectangle(*[float(v) for v in cfg["region"]])
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"invalid region: {exc}") from exc
    quasi = bool(cfg.get("quasistatic", True))
    rows = []
    for c in _cavities(cfg, mirror):
        for ch in _channels(cfg):
            s = find_resonances(c, ch, region, quasistatic=quasi)
            for z in s.complex_pairs:
                rows.append(["resonance", ch.polarization, ch.k, c.gap, "complex", z.real, z.imag])
            for x in s.imaginary_modes:
                rows.append(["resonance", ch.polarization, ch.k, c.gap, "imaginary", 0.0, -x])
    return rows


def run_casimir_polder(cfg, mirror, tol, threads):
    try:
        dip = GaussianDipole(**{k: float(v) for k, v in cfg["dipole"].items()})
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"invalid dipole: {exc}") from exc
    quantities = cfg.get("quantities", ["energy_exact", "energy_perturbative", "force_exact"])
    engines = {
        "energy_exact": lambda h: cp_energy_exact(dip, h),
        "energy_perturbative": lambda h: cp_energy_perturbative(dip, h),
        "force_exact": lambda h: cp_force(dip, h, "exact"),
        "force_perturbative": lambda h: cp_force(dip, h, "perturbative"),
    }
    unknown = set(quantities) - set(engines)
    if unknown:
        raise ConfigError(f"unknown quantities {sorted(unknown)}")
    rows = []
    for z0 in cfg.get("distances", []):
        h = HalfSpaceGeometry(mirror, float(z0))
        for q in quantities:
            rows.append([q, float(z0), engines[q](h), 0.0])
    return rows


def run_identity_check(cfg, mirror, tol, threads):
    cases = acceptance.identity_sweep(int(cfg.get("sweep", 50)), cfg.get("seed", 0))
    recs = _map(identity_check, cases, threads)
    return [["identity", i, c.f_spec, c.omega_0.real, c.omega_0.imag, r.lhs, r.rhs, r.gap]
            for i, (c, r) in enumerate(zip(cases, recs))]


def run_verify(cfg, mirror, tol, threads):
    only = cfg.get("only") or list(acceptance.CRITERIA)
    rows = []
    for n in only:
        res = acceptance.run(int(n))
        print(res.line(), file=sys.stderr)
        rows.append(["verify", res.number, res.name, res.passed, round(res.seconds, 3),
                     res.detail])
    return rows


RUNNERS = {
    "lifshitz": run_lifshitz,
    "modes": run_modes,
    "complex-modes": run_complex_modes,
    "casimir-polder": run_casimir_polder,
    "identity-check": run_identity_check,
    "verify": run_verify,
}


# ------------------------------------------------------------------ output

def _cell(v):
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return repr(float(v))  # shortest round-trip representation
    return str(v)


def format_rows(command, rows, fmt, header):
    cols = COLUMNS[command]
    buf = io.StringIO()
    if fmt == "csv":
        buf.write("# " + " ".join(f"{k}={_cell(v)}" for k, v in header.items()) + "\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(cols)
        w.writerows([[_cell(v) for v in r] for r in rows])
    else:
        buf.write(json.dumps({"header": header}, sort_keys=True) + "\n")
        for r in rows:
            rec = {c: (float(v) if isinstance(v, np.floating) else v) for c, v in zip(cols, r)}
            buf.write(json.dumps(rec, allow_nan=True) + "\n")
    return buf.getvalue()


# ------------------------------------------------------------------ entry

def _parser():
    p = argparse.ArgumentParser(prog="casimir-modes", description=__doc__.split("\n")[0])
    p.add_argument("command", nargs="?", choices=COMMANDS)
    p.add_argument("--config", help="YAML run description")
    p.add_argument("--out", help="output file (default: stdout)")
    p.add_argument("--format", choices=("csv", "jsonl"), help="output format")
    p.add_argument("--tol", type=float, help="engine tolerance")
    p.add_argument("--seed", type=int, help="seed for random sweeps")
    p.add_argument("--threads", type=int, help="worker threads (default 1)")
    p.add_argument("--sweep", type=int, help="identity-check: number of random cases")
    p.add_argument("--quasistatic", action="store_true", default=None,
                   help="complex-modes: quasistatic TM family")
    p.add_argument("--only", type=int, nargs="+", help="verify: criterion numbers")
    return p


def load_config(args):
    """Merge command defaults, the config file and command-line flags."""
    cfg = {}
    base_dir = "."
    if args.config:
        cfg = _load_yaml(args.config)
        base_dir = os.path.dirname(os.path.abspath(args.config))
    command = args.command or cfg.get("command")
    if command not in COMMANDS:
        raise ConfigError(f"command must be one of {', '.join(COMMANDS)}")
    unknown = set(cfg) - KNOWN_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
    cfg = _merge(DEFAULTS[command], cfg)
    cfg["command"] = command
    for key in ("tol", "seed", "threads", "sweep", "quasistatic", "only"):
        val = getattr(args, key)
        if val is not None:
            cfg[key] = val
    out = cfg.get("output", {})
    if args.out:
        out["path"] = args.out
    if args.format:
        out["format"] = args.format
    out.setdefault("format", "csv")
    if out["format"] not in ("csv", "jsonl"):
        raise ConfigError("output format must be csv or jsonl")
    cfg["output"] = out
    cfg.setdefault("tol", 1e-10)
    cfg.setdefault("seed", 0)
    cfg.setdefault("threads", 1)
    if not float(cfg["tol"]) > 0:
        raise ConfigError("tol must be positive")
    if int(cfg["threads"]) < 1:
        raise ConfigError("threads must be at least 1")
    cfg["_base_dir"] = base_dir
    return cfg


def run(cfg):
    """Execute a merged config; returns the formatted output text."""
    command = cfg["command"]
    mirror = None
    if "material" in cfg:
        mirror = build_material(cfg["material"], cfg.get("_base_dir", "."))
    rows = RUNNERS[command](cfg, mirror, float(cfg["tol"]), int(cfg["threads"]))
    header = {"command": command, "units": "hbar=c=1",
              "reference_wavenumber": float(cfg.get("reference_wavenumber", 1.0)),
              "seed": cfg["seed"], "tol": float(cfg["tol"])}
    return format_rows(command, rows, cfg["output"]["format"], header)


def main(argv=None):
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = load_config(args)
        text = run(cfg)
    except ConfigError as exc:
        print(json.dumps({"error": "config", "message": str(exc)}), file=sys.stderr)
        return 2
    except CasimirError as exc:
        print(json.dumps({"error": exc.code, "type": type(exc).__name__,
                          "message": str(exc)}), file=sys.stderr)
        return 1
    path = cfg["output"].get("path")
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
