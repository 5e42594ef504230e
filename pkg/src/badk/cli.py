"""Command-line harness: field setup, trajectories, bad-checks, games, sweeps.

Subcommands read a JSON experiment config (schema-validated), run
deterministically for a fixed seed, and write JSON reports or CSV time
series.  Floats serialize through Python's shortest round-trip repr (17
significant digits) and certified quantities carry explicit radius fields.
Exit codes: 0 success, 2 config/validation error, 3 precision exhaustion.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from fractions import Fraction

import jsonschema
import numpy as np

from . import _kernels
from .balls import Ball
from .diophantine import bad_constant_estimate, dani_check
from .game import (CenterHuggingA, GameParams, HeedlessB, PaperStrategyB,
                   RandomA, ShortVectorSeekerA, check_transcript_legality,
                   counterexample_demo, linear_curve, play_game, poly_curve,
                   verify_outcome)
from .game.curves import check_equal_weight_hypothesis, weighted_hypothesis_ok
from .latticeflow import (FlowSpec, GroupElement, flow_element, point_ks,
                          restriction_matrix, systole, unipotent)
from .numberfield import FieldError, NumberField, field_from_config
from .precision import (MAX_PRECISION, PrecisionError, get_precision,
                        working_precision)

FIELD_SCHEMA = {
    "type": "object",
    "required": ["minpoly"],
    "properties": {
        "label": {"type": "string"},
        "minpoly": {"type": "array", "items": {"type": "integer"}, "minItems": 1},
        "units": {"type": "array",
                  "items": {"type": "array", "items": {"type": "integer"}}},
    },
}

CONFIG_SCHEMA = {
    "type": "object",
    "properties": {
        "field": FIELD_SCHEMA,
        "field_path": {"type": "string"},
        "precision": {"type": "integer", "minimum": 53, "maximum": MAX_PRECISION},
        "seed": {"type": "integer"},
        "weights": {"type": "array", "items": {"type": ["string", "number"]}},
        "x": {"type": "array"},
        "x_element": {"type": "array", "items": {"type": "integer"}},
        "t_max": {"type": "number", "minimum": 0},
        "step": {"type": "number", "exclusiveMinimum": 0},
        "coeff_box": {"type": "integer", "minimum": 1},
        "q_bound": {"type": "number", "minimum": 1},
        "floor_threshold": {"type": "number"},
        "curve": {"type": "object"},
        "game": {"type": "object"},
        "adversary": {"type": ["string", "object"]},
        "strategy": {"type": "string"},
        "weight_list": {"type": "array"},
        "verify": {"type": "object"},
        "tree_depth": {"type": "integer", "minimum": 1, "maximum": 6},
        "x_step": {"type": "number", "exclusiveMinimum": 0},
    },
}


class ConfigError(ValueError):
    pass


def _load_config(path: str) -> dict:
    with open(path) as fh:
        cfg = json.load(fh)
    try:
        jsonschema.validate(cfg, CONFIG_SCHEMA)
    except jsonschema.ValidationError as e:
        raise ConfigError(f"config does not match schema: {e.message}") from e
    return cfg


def _load_field(cfg: dict, prec: int) -> NumberField:
    if "field" in cfg:
        fc = cfg["field"]
    elif "field_path" in cfg:
        with open(cfg["field_path"]) as fh:
            fc = json.load(fh)
    elif "minpoly" in cfg:
        fc = cfg  # bare field config
    else:
        raise ConfigError("config needs 'field', 'field_path' or a bare 'minpoly'")
    jsonschema.validate(fc, FIELD_SCHEMA)
    return field_from_config(fc, prec)


def _parse_weight(w) -> Fraction:
    return Fraction(w) if isinstance(w, str) else Fraction(w)


def _flow_spec(field: NumberField, cfg: dict) -> FlowSpec:
    if "weights" not in cfg:
        return FlowSpec.equal(field)
    return FlowSpec.weighted(field, [_parse_weight(w) for w in cfg["weights"]])


def _point_from_config(field: NumberField, cfg: dict):
    if "x_element" in cfg:
        return field.tau(field.element(cfg["x_element"]))
    if "x" not in cfg:
        raise ConfigError("config needs 'x' (per-place values) or 'x_element'")
    vals = []
    for v in cfg["x"]:
        if isinstance(v, str):
            vals.append(Ball.of(Fraction(v)))
        elif isinstance(v, list):
            vals.append(complex(v[0], v[1]))
        else:
            vals.append(float(v))
    return point_ks(field, vals)


def _curve_from_config(field: NumberField, cfg: dict):
    c = cfg.get("curve", {"type": "linear", "slopes": [1] * len(field.places)})
    kind = c.get("type", "linear")
    active = c.get("active")
    if kind == "linear":
        return linear_curve(field, [Fraction(str(s)) for s in c["slopes"]],
                            active, c.get("label", "linear"))
    if kind == "poly":
        coeffs = [[Fraction(str(x)) for x in place] for place in c["coeffs"]]
        return poly_curve(field, coeffs, active, c.get("label", "poly"))
    raise ConfigError(f"unknown curve type {kind!r}")


def _adversary(cfg: dict, coeff_box: int):
    a = cfg.get("adversary", "random")
    if isinstance(a, dict):
        name, opts = a.get("name", "random"), a
    else:
        name, opts = a, {}
    if name == "random":
        return RandomA()
    if name == "center_hugging":
        return CenterHuggingA(initial=float(opts.get("initial", 0.5)))
    if name == "short_vector_seeker":
        return ShortVectorSeekerA(coeff_box=int(opts.get("coeff_box", coeff_box)),
                                  candidates=int(opts.get("candidates", 9)),
                                  initial=float(opts.get("initial", 0.5)))
    raise ConfigError(f"unknown adversary {name!r}")


def _emit(data, out_path: str | None, quiet: bool) -> None:
    text = json.dumps(data, indent=2, sort_keys=True)
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text + "\n")
    if not quiet:
        print(text)


def _ball_fields(name: str, b: Ball) -> dict:
    return {name: b.mid(), f"{name}_radius": b.rad()}


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_field_info(cfg, field, args) -> dict:
    places = []
    for p in field.places:
        if p.kind == "real":
            places.append({"kind": "real", "root": p.root.mid(),
                           "root_radius": p.root.rad(), "exponent": 1})
        else:
            z = p.root.mid()
            places.append({"kind": "complex", "root": [z.real, z.imag],
                           "root_radius": max(p.root.re.rad(), p.root.im.rad()),
                           "exponent": 2})
    units = []
    for u in field.units:
        prod = Ball.of(1)
        for p in field.places:
            prod = prod * field.embed(u, p).abs().powi(p.exponent)
        logs = [b.mid() for b in field.unit_log_embedding(u)]
        units.append({
            "coeffs": list(u.coeffs),
            "norm": field.field_norm(u),
            "log_embedding": logs,
            "product_formula_residual": abs(prod.mid() - 1.0) + prod.rad(),
        })
    xi = field.xi()
    t_xi = field.multiplication_matrix(xi)
    v = field.vandermonde()
    t_arr = np.array(t_xi, dtype=np.complex128)
    resid = np.abs(np.linalg.inv(v) @ t_arr @ v
                   - np.diag(field.all_embeddings_mid())).max()
    rest = restriction_matrix(field, GroupElement.identity(field))
    return {
        "label": field.label,
        "degree": field.d,
        "signature": [field.r, field.s],
        "minpoly": list(field.minpoly.coeffs),
        "places": places,
        "units": units,
        "companion_matrix": t_xi,
        "vandermonde_residual": float(resid),
        "renormalization_constant": field.renormalization_constant(),
        "restriction_covolume": abs(float(np.linalg.det(rest))),
        "precision_bits": get_precision(),
    }


def cmd_trajectory(cfg, field, args) -> dict:
    spec = _flow_spec(field, cfg)
    x = _point_from_config(field, cfg)
    t_max = float(cfg.get("t_max", 8.0))
    step = float(cfg.get("step", 0.25))
    box = int(cfg.get("coeff_box", 4))
    u = unipotent(field, x)
    rows = []
    t = 0.0
    while t <= t_max + 1e-12:
        res = systole(field, u.compose(flow_element(field, spec, t)), box)
        rows.append({
            "t": t,
            "systole": res.value.mid(),
            "achieving_a": ";".join(str(c) for c in res.vector.a.coeffs),
            "achieving_b": ";".join(str(c) for c in res.vector.b.coeffs),
        })
        t += step
    out_path = args.out or "trajectory.csv"
    with open(out_path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=["t", "systole", "achieving_a", "achieving_b"])
        w.writeheader()
        for row in rows:
            w.writerow(row)
    floor = min(r["systole"] for r in rows)
    if not args.quiet:
        print(f"wrote {out_path}: {len(rows)} grid points, floor {floor!r}")
    return {"rows": len(rows), "floor": floor, "out": out_path}


def cmd_bad_check(cfg, field, args) -> dict:
    x = _point_from_config(field, cfg)
    q_bound = float(cfg.get("q_bound", 50.0))
    report = bad_constant_estimate(field, x, q_bound,
                                   coeff_box=cfg.get("coeff_box"))
    if cfg.get("t_max") is not None:
        spec = FlowSpec.equal(field)
        dani = dani_check(field, x, spec, float(cfg["t_max"]),
                          float(cfg.get("step", 0.25)),
                          int(cfg.get("coeff_box", 4)),
                          float(cfg.get("floor_threshold", 1e-4)))
        report.trajectory_floor = dani.trajectory_floor
        report.t_max = dani.t_max
        report.bounded_proxy = dani.bounded_proxy
        report.bridge = dani.bridge
    data = report.to_json_dict()
    _emit(data, args.out, args.quiet)
    return data


def _run_one_game(cfg, field, spec, curve, params, box):
    player_a = _adversary(cfg, box)
    strategy = cfg.get("strategy", "paper")
    if strategy == "paper":
        player_b = PaperStrategyB(coeff_box=box)
    elif strategy == "heedless":
        player_b = HeedlessB()
    else:
        raise ConfigError(f"unknown strategy {strategy!r}")
    transcript = play_game(params, curve, spec, player_a, player_b, field)
    problems = check_transcript_legality(transcript, params)
    vcfg = cfg.get("verify", {})
    verify_outcome(transcript, field, curve, spec,
                   q_bound=float(vcfg.get("q_bound", 20.0)),
                   t_max=float(vcfg.get("t_max", 12.0)),
                   step=float(vcfg.get("step", 0.25)),
                   coeff_box=int(vcfg.get("coeff_box", box)),
                   floor_threshold=float(vcfg.get("floor_threshold", 1e-4)))
    data = transcript.to_json_dict()
    data["legality_problems"] = problems
    return data


def cmd_play(cfg, field, args) -> dict:
    spec = _flow_spec(field, cfg)
    curve = _curve_from_config(field, cfg)
    if spec.kind == "equal":
        check_equal_weight_hypothesis(field, curve)
    hypothesis_violated = (spec.kind == "weighted"
                           and not weighted_hypothesis_ok(field, curve, spec))
    g = cfg.get("game", {})
    params = GameParams(alpha=float(g.get("alpha", 0.25)),
                        beta=float(g.get("beta", 0.5)),
                        rho=float(g.get("rho", 1.0)),
                        rounds=int(g.get("rounds", 30)),
                        seed=int(cfg.get("seed", args.seed or 0)))
    box = int(cfg.get("coeff_box", 4))
    data = _run_one_game(cfg, field, spec, curve, params, box)
    if hypothesis_violated:
        data["hypothesis_violated"] = True
    _emit(data, args.out, args.quiet)
    return data


def cmd_counterexample(cfg, field, args) -> dict:
    report = counterexample_demo(field,
                                 t_max=float(cfg.get("t_max", 8.0)),
                                 x_step=float(cfg.get("x_step", 0.01)),
                                 tree_depth=int(cfg.get("tree_depth", 4)),
                                 coeff_box=int(cfg.get("coeff_box", 2)))
    data = {
        "slope": report.slope,
        "t_max": report.t_max,
        "grid_points": len(report.rows),
        "max_height_at_t_max": report.max_h_at_tmax,
        "max_closed_form_gap": report.max_closed_form_gap,
        "all_below_1e-3": report.all_below(1e-3),
        "tree": report.tree,
    }
    out_path = args.out or "counterexample.csv"
    with open(out_path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["x", "height", "closed_form"])
        for x, h, c in report.rows:
            w.writerow([x, h, c])
    data["csv"] = out_path
    _emit(data, None, args.quiet)
    return data


def cmd_weight_sweep(cfg, field, args) -> dict:
    curve = _curve_from_config(field, cfg)
    weight_list = cfg.get("weight_list")
    if not weight_list:
        raise ConfigError("weight-sweep needs 'weight_list'")
    g = cfg.get("game", {})
    box = int(cfg.get("coeff_box", 4))
    results = []
    for ws in weight_list:
        weights = [_parse_weight(w) for w in ws]
        spec = FlowSpec.weighted(field, weights)
        entry = {"weights": [str(w) for w in spec.weights]}
        if not weighted_hypothesis_ok(field, curve, spec):
            entry["hypothesis_violated"] = True
        if curve.slope(spec.max_place()) == 0 or spec.max_place() not in curve.active:
            entry["hypothesis_violated"] = True
        params = GameParams(alpha=float(g.get("alpha", 0.25)),
                            beta=float(g.get("beta", 0.5)),
                            rho=float(g.get("rho", 1.0)),
                            rounds=int(g.get("rounds", 30)),
                            seed=int(cfg.get("seed", args.seed or 0)))
        entry.update(_run_one_game(cfg, field, spec, curve, params, box))
        results.append(entry)
    data = {"sweep": results, "curve": curve.label}
    _emit(data, args.out, args.quiet)
    return data


COMMANDS = {
    "field-info": cmd_field_info,
    "trajectory": cmd_trajectory,
    "bad-check": cmd_bad_check,
    "play": cmd_play,
    "counterexample": cmd_counterexample,
    "weight-sweep": cmd_weight_sweep,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="badk",
        description="Heights, flows and Schmidt games over number fields "
                    f"(kernel backend: {_kernels.backend()})")
    parser.add_argument("--precision", type=int, default=None,
                        help="working precision in bits (or env BADK_PRECISION)")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="experiment config JSON")
        p.add_argument("--out", default=None, help="output path")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--quiet", action="store_true")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _load_config(args.config)
    except (ConfigError, OSError, json.JSONDecodeError) as e:
        print(f"config error: {e}", file=sys.stderr)
        return 2
    # precedence: flag, config, env (already folded into the default precision)
    bits = args.precision or cfg.get("precision") or get_precision()
    while True:
        try:
            with working_precision(bits):
                field = _load_field(cfg, bits)
                result = COMMANDS[args.command](cfg, field, args)
                if args.command == "field-info":
                    _emit(result, args.out, args.quiet)
            return 0
        except PrecisionError as e:
            if bits >= MAX_PRECISION:
                print(f"precision exhausted at {bits} bits: {e}", file=sys.stderr)
                return 3
            bits = min(2 * bits, MAX_PRECISION)
            if not args.quiet:
                print(f"escalating precision to {bits} bits", file=sys.stderr)
        except (ConfigError, FieldError, ValueError, jsonschema.ValidationError) as e:
            print(f"validation error: {e}", file=sys.stderr)
            return 2


if __name__ == "__main__":
    sys.exit(main())
