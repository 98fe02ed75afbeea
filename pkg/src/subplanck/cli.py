"""Command-line entry point.

Subcommands reproduce the standard outputs: `static` and `evolve` write
Wigner fields, `decay-curve` samples the central-structure decay, `table1`
computes the temporal-threshold table with its relative changes, and
`validate` runs the cross-checking suites (closed forms against the
number-basis oracle and the reference quadrature).

Exit codes: 0 success, 2 usage error, 3 numerical-validation failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import analysis, channel, fields, fock, wigner
from .errors import ParameterError, SubplanckError
from .specialfn import hermite
from .states import CompassStateSpec, ReservoirSpec

_DEFAULTS = {"state": "pa", "m": 12, "r": 0.8, "nbar": 0.0}


def _load_params(path: str | None) -> dict:
    if path is None:
        return {}
    data = json.loads(Path(path).read_text())
    if not isinstance(data, dict):
        raise SubplanckError("--params file must hold a JSON object")
    out = {}
    if "variant" in data:
        out["state"] = str(data["variant"]).lower()
    for key in ("m", "r", "nbar", "tau"):
        if key in data:
            out[key] = data[key]
    return out


def _resolve(args, params: dict, key: str, default=None):
    val = getattr(args, key.replace("-", "_"), None)
    if val is not None:
        return val
    if key in params:
        return params[key]
    return _DEFAULTS.get(key, default)


def _spec_from(args, params) -> CompassStateSpec:
    return CompassStateSpec(
        variant=str(_resolve(args, params, "state")),
        m=int(_resolve(args, params, "m")),
        r=float(_resolve(args, params, "r")),
    )


def _write(path: str, payload: bytes) -> None:
    Path(path).write_bytes(payload)


def _add_state_flags(sub, with_grid=True):
    sub.add_argument("--state", choices=("pa", "ps"), default=None,
                     help="variant: photon-added or photon-subtracted (default pa)")
    sub.add_argument("--m", type=int, default=None, help="photons added/subtracted (default 12)")
    sub.add_argument("--r", type=float, default=None, help="squeezing parameter (default 0.8)")
    sub.add_argument("--params", default=None,
                     help="JSON file with {variant, m, r, nbar, tau}; flags override")
    if with_grid:
        sub.add_argument("--grid", default="-4:4:401",
                         help="grid spec xmin:xmax:nx[,pmin:pmax:np] (default -4:4:401)")
        sub.add_argument("--out", required=True, help="output file")
        sub.add_argument("--format", choices=("csv", "json", "pgm"), default="csv")


def _cmd_static(args) -> int:
    params = _load_params(args.params)
    spec = _spec_from(args, params)
    grid = fields.parse_grid(args.grid)
    field = fields.evaluate_field(
        lambda z: wigner.wigner_total(z, spec), grid,
        meta={"evaluator": "wigner_total", "variant": spec.variant, "m": spec.m, "r": spec.r},
    )
    _write(args.out, fields.export_field(field, args.format))
    return 0


def _cmd_evolve(args) -> int:
    params = _load_params(args.params)
    spec = _spec_from(args, params)
    res = ReservoirSpec(
        nbar=float(_resolve(args, params, "nbar")), tau=float(_resolve(args, params, "tau", 0.0))
    )
    grid = fields.parse_grid(args.grid)
    field = fields.evaluate_field(
        lambda z: channel.evolved_total(z, spec, res), grid,
        meta={
            "evaluator": "evolved_total", "variant": spec.variant,
            "m": spec.m, "r": spec.r, "nbar": res.nbar, "tau": res.tau,
        },
    )
    _write(args.out, fields.export_field(field, args.format))
    return 0


def _cmd_decay_curve(args) -> int:
    params = _load_params(args.params)
    spec = _spec_from(args, params)
    nbar = float(_resolve(args, params, "nbar"))
    curve = analysis.decay_curve(spec, nbar, tau_max=args.tau_max, steps=args.steps)
    lines = ["tau,f,ln_abs_f"]
    for tau, f in curve.samples:
        ln_abs = math.log(abs(f)) if f != 0.0 else float("-inf")
        lines.append(f"{tau:.17g},{f:.17g},{ln_abs:.17g}")
    _write(args.out, ("\n".join(lines) + "\n").encode())
    return 0


def _cmd_table1(args) -> int:
    records = analysis.table1()
    print("row  m   r    nbar   tau_d_pa     tau_d_ps")
    for rec in records:
        print(f"{rec.row_id:>3}  {rec.m:<3} {rec.r:<4} {rec.nbar:<5}"
              f"  {rec.tau_d_pa:.5f}      {rec.tau_d_ps:.5f}")
    print("relative changes between successive rows (percent):")
    for chg in analysis.relative_changes(records):
        print(f"  rows {chg.reference_row}->{chg.next_row}: "
              f"pa {100.0 * chg.delta_pa:+.5f}%  ps {100.0 * chg.delta_ps:+.5f}%")
    if args.out:
        _write(args.out, analysis.thresholds_to_csv(records).encode())
    if args.json:
        _write(args.json, analysis.thresholds_to_json(records).encode())
    return 0


def _suite_static_oracle(max_dev: dict) -> None:
    rng = np.random.default_rng(20240601)
    for variant in ("pa", "ps"):
        for m in (1, 3, 6):
            spec = CompassStateSpec(variant, m, 0.8)
            state = fock.build_compass_state(spec, dim=144)
            dev = 0.0
            for _ in range(12):
                z = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
                dev = max(dev, abs(wigner.wigner_total(z, spec) - fock.wigner_from_state(state, z)))
            max_dev[f"static_oracle[{variant},m={m}]"] = (dev, 1e-8)


def _suite_invariants(max_dev: dict) -> None:
    rng = np.random.default_rng(7)
    # parity and bound
    dev_parity, dev_bound = 0.0, 0.0
    for variant in ("pa", "ps"):
        spec = CompassStateSpec(variant, 12, 0.8)
        pts = rng.uniform(-2.5, 2.5, size=(40, 2))
        zs = (pts[:, 0] + 1j * pts[:, 1]) / math.sqrt(2.0)
        w_plus = wigner.wigner_total(zs, spec)
        w_minus = wigner.wigner_total(-zs, spec)
        dev_parity = max(dev_parity, float(np.max(np.abs(w_plus - w_minus))))
        dev_bound = max(dev_bound, float(np.max(np.abs(w_plus))) - 2.0 / math.pi)
    max_dev["parity_symmetry"] = (dev_parity, 1e-9)
    max_dev["wigner_bound_excess"] = (max(dev_bound, 0.0), 1e-9)
    # hermite derivative identity by central differences
    dev_h = 0.0
    h = 1e-5
    for _ in range(20):
        n = int(rng.integers(1, 12))
        z = complex(rng.uniform(-3, 3), rng.uniform(-3, 3))
        num = (hermite(n, z + h) - hermite(n, z - h)) / (2 * h)
        exact = 2 * n * hermite(n - 1, z)
        dev_h = max(dev_h, abs(num - exact) / max(1.0, abs(exact)))
    max_dev["hermite_derivative"] = (dev_h, 1e-6)


def _suite_temporal(max_dev: dict) -> None:
    rng = np.random.default_rng(99)
    for variant in ("pa", "ps"):
        spec = CompassStateSpec(variant, 2, 0.8)
        state = fock.build_compass_state(spec, dim=144)
        rho = fock.density_from_state(state)
        for tau, nbar in ((0.01, 0.0), (0.1, 0.5)):
            res = ReservoirSpec(nbar=nbar, tau=tau)
            evolved = fock.evolve_density(rho, res)
            dev_o, dev_q = 0.0, 0.0
            for _ in range(6):
                z = complex(rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5))
                w_closed = channel.evolved_total(z, spec, res)
                dev_o = max(dev_o, abs(w_closed - fock.wigner_from_density(evolved, z)))
                w_quad = channel.convolve_reference(
                    lambda a: wigner.wigner_total(a, spec), z, res, tol=1e-9
                )
                dev_q = max(dev_q, abs(w_closed - w_quad))
            max_dev[f"temporal_oracle[{variant},tau={tau},nbar={nbar}]"] = (dev_o, 1e-6)
            max_dev[f"temporal_quadrature[{variant},tau={tau},nbar={nbar}]"] = (dev_q, 1e-6)
    # semigroup property of the oracle channel
    spec = CompassStateSpec("pa", 2, 0.8)
    rho = fock.density_from_state(fock.build_compass_state(spec, dim=128))
    one = fock.evolve_density(
        fock.evolve_density(rho, ReservoirSpec(nbar=0.5, tau=0.04)), ReservoirSpec(nbar=0.5, tau=0.06)
    )
    two = fock.evolve_density(rho, ReservoirSpec(nbar=0.5, tau=0.10))
    max_dev["oracle_semigroup"] = (float(np.max(np.abs(one.elements - two.elements))), 1e-9)
    # fixed point of the closed form
    zs = (rng.uniform(-2, 2, size=24) + 1j * rng.uniform(-2, 2, size=24))
    spec = CompassStateSpec("pa", 12, 0.8)
    res = ReservoirSpec(nbar=1.0, tau=8.0)
    dev_fp = float(np.max(np.abs(
        channel.evolved_total(zs, spec, res) - channel.thermal_wigner(zs, 1.0)
    )))
    max_dev["thermal_fixed_point[nbar=1]"] = (dev_fp, 1e-6)


def _cmd_validate(args) -> int:
    max_dev: dict[str, tuple[float, float]] = {}
    _suite_static_oracle(max_dev)
    _suite_invariants(max_dev)
    if args.level == "full":
        _suite_temporal(max_dev)
    failed = False
    for name, (dev, tol) in max_dev.items():
        status = "ok" if dev <= tol else "FAIL"
        failed = failed or dev > tol
        print(f"{status:4s} {name:45s} max deviation {dev:.3e} (tolerance {tol:.1e})")
    return 3 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="subplanck",
        description="Wigner functions of compasslike states and their thermal-channel decay",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    p_static = subs.add_parser("static", help="write a zero-time Wigner field")
    _add_state_flags(p_static)
    p_static.set_defaults(func=_cmd_static)

    p_evolve = subs.add_parser("evolve", help="write an evolved Wigner field")
    _add_state_flags(p_evolve)
    p_evolve.add_argument("--nbar", type=float, default=None, help="mean thermal photons (default 0)")
    p_evolve.add_argument("--tau", type=float, default=None, required=False,
                          help="dimensionless time kappa t (default 0)")
    p_evolve.set_defaults(func=_cmd_evolve)

    p_curve = subs.add_parser("decay-curve", help="sample the central-structure decay f(tau)")
    _add_state_flags(p_curve, with_grid=False)
    p_curve.add_argument("--nbar", type=float, default=None)
    p_curve.add_argument("--tau-max", type=float, default=0.5)
    p_curve.add_argument("--steps", type=int, default=500)
    p_curve.add_argument("--out", required=True)
    p_curve.set_defaults(func=_cmd_decay_curve)

    p_table = subs.add_parser("table1", help="temporal-threshold table and relative changes")
    p_table.add_argument("--out", default=None, help="CSV output path")
    p_table.add_argument("--json", default=None, help="JSON output path")
    p_table.set_defaults(func=_cmd_table1)

    p_val = subs.add_parser("validate", help="run the oracle cross-check suites")
    p_val.add_argument("--level", choices=("quick", "full"), default="quick")
    p_val.set_defaults(func=_cmd_validate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ParameterError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SubplanckError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
