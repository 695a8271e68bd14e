"""Command-line driver: config ingestion, dispatch, and reporting.

Configs are JSON with every rational encoded losslessly as a [numerator,
denominator] pair.  Reports are emitted as fixed-width text or as canonical
JSON; identical config and seed produce byte-identical JSON output.
"""

from __future__ import annotations

import argparse
import cmath
import hashlib
import json
import math
import sys
from fractions import Fraction

from . import __version__
from .gitfan import (
    EmptyQuotient,
    NotAdjacent,
    NotCrepant,
    NotDeligneMumford,
    box_elements,
    fixed_point_labels,
    make_git,
    next_to_pairs,
    wall_crossing,
    wall_frame,
)
from .hypergeom import (
    PoleCollision,
    conifold_point,
    generic_lambdas,
    gkz_ode_residual,
    inner_series,
    make_inner_spec,
    w_constant,
)
from .ktheory import (
    ResonantSample,
    fm_transform,
    minus_basis,
    uhfm_sensitivity,
    verify_pairing_preserved,
    verify_uhfm,
)
from .localization import normal_weights
from .mellinbarnes import (
    ContourSpec,
    ContourTooClose,
    NonConvergent,
    continuation_matrix,
    lift_invariance_check,
    verify_residue_identity,
)

SCHEMA = "wallcross-config/1"

DEFAULT_TOLERANCES = {
    "residual": 1e-9,
    "pairing": 1e-8,
    "mb": 1e-7,
    "ode": 1e-12,
    "lifts": 1e-12,
    "sensitivity_floor": 1e-4,
    "quadrature": 1e-11,
    "pole_clearance": 1e-3,
}


class ConfigError(ValueError):
    pass


# ---------------------------------------------------------------------------
# config parsing


def _parse_rational(node, where):
    if isinstance(node, list) and len(node) == 2 and all(isinstance(x, int) for x in node):
        if node[1] == 0:
            raise ConfigError("%s: zero denominator" % where)
        return Fraction(node[0], node[1])
    if isinstance(node, int):
        return Fraction(node)
    raise ConfigError("%s: expected [num, den] pair, got %r" % (where, node))


def _parse_rational_vector(node, where, dim=None):
    if not isinstance(node, list):
        raise ConfigError("%s: expected a list" % where)
    if dim is not None and len(node) != dim:
        raise ConfigError("%s has length %d, expected %d" % (where, len(node), dim))
    return tuple(_parse_rational(x, "%s[%d]" % (where, i)) for i, x in enumerate(node))


def load_config(path):
    with open(path) as fh:
        raw = json.load(fh)
    if raw.get("schema") != SCHEMA:
        raise ConfigError("config schema must be %r" % SCHEMA)
    gitnode = raw.get("git")
    if not isinstance(gitnode, dict):
        raise ConfigError("config needs a 'git' object")
    r = gitnode.get("r")
    m = gitnode.get("m")
    D = gitnode.get("D")
    if not isinstance(D, list) or len(D) != m:
        raise ConfigError("git.D must be a list of %s rows" % m)
    rows = []
    for i, row in enumerate(D):
        if not isinstance(row, list) or len(row) != r:
            raise ConfigError("git.D row %d has length %s, expected %d" % (i, len(row) if isinstance(row, list) else "?", r))
        if not all(isinstance(x, int) for x in row):
            raise ConfigError("git.D row %d must be integers" % i)
        rows.append(tuple(row))
    git = make_git(rows, labels=gitnode.get("labels"))
    omega_plus = _parse_rational_vector(raw.get("omega_plus"), "omega_plus", dim=r)
    omega_minus = _parse_rational_vector(raw.get("omega_minus"), "omega_minus", dim=r)

    trunc = raw.get("truncation", {})
    tols = dict(DEFAULT_TOLERANCES)
    tols.update(raw.get("tolerances", {}))
    contour_node = raw.get("contour", {})
    znode = raw.get("z")
    if znode is None:
        z = complex(1.0, 0.0)
    else:
        z = complex(
            float(_parse_rational(znode.get("re", 1), "z.re")),
            float(_parse_rational(znode.get("im", 0), "z.im")),
        )
    return {
        "raw": raw,
        "git": git,
        "omega_plus": omega_plus,
        "omega_minus": omega_minus,
        "seed": raw.get("seed", 7),
        "samples": raw.get("samples", 20),
        "series_order": trunc.get("series_order", 40),
        "base_exponent_bound": trunc.get("base_exponent_bound", 10),
        "z": z,
        "tolerances": tols,
        "contour": ContourSpec(
            abscissa=contour_node.get("abscissa"),
            t_max=contour_node.get("t_max", 40.0),
            quad_tol=tols["quadrature"],
            clearance=tols["pole_clearance"],
        ),
    }


def config_hash(raw):
    return hashlib.sha256(
        json.dumps(raw, sort_keys=True, separators=(",", ":")).encode()
    ).hexdigest()[:16]


# ---------------------------------------------------------------------------
# report assembly


def _jsonify(x):
    if isinstance(x, Fraction):
        return [x.numerator, x.denominator]
    if isinstance(x, complex):
        return [x.real, x.imag]
    if isinstance(x, dict):
        return {str(k): _jsonify(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonify(v) for v in x]
    return x


def make_report(command, cfg, results, ok):
    return {
        "tool": "wallcross",
        "version": __version__,
        "command": command,
        "config_hash": config_hash(cfg["raw"]),
        "seed": cfg["seed"],
        "results": _jsonify(results),
        "pass": bool(ok),
    }


def emit(report, as_json, stream=sys.stdout):
    if as_json:
        stream.write(json.dumps(report, sort_keys=True, separators=(",", ":")) + "\n")
        return
    stream.write("wallcross %s | %s | config %s | seed %s\n" % (
        report["version"], report["command"], report["config_hash"], report["seed"]))
    _emit_tree(report["results"], stream, indent=2)
    stream.write("result: %s\n" % ("PASS" if report["pass"] else "FAIL"))


def _emit_tree(node, stream, indent):
    pad = " " * indent
    if isinstance(node, dict):
        for k in node:
            v = node[k]
            if isinstance(v, (dict, list)) and v and not _is_flat(v):
                stream.write("%s%s:\n" % (pad, k))
                _emit_tree(v, stream, indent + 2)
            else:
                stream.write("%s%-28s %s\n" % (pad, k + ":", _fmt_flat(v)))
    elif isinstance(node, list):
        for v in node:
            if isinstance(v, (dict, list)) and v and not _is_flat(v):
                _emit_tree(v, stream, indent)
                stream.write("%s--\n" % pad)
            else:
                stream.write("%s- %s\n" % (pad, _fmt_flat(v)))


def _is_flat(v):
    if isinstance(v, list):
        return all(not isinstance(x, (dict, list)) for x in v) and len(v) <= 8
    return False


def _fmt_flat(v):
    if isinstance(v, float):
        return "%.6g" % v
    if isinstance(v, list):
        return "[" + ", ".join(_fmt_flat(x) for x in v) + "]"
    return str(v)


def _sector_dict(sec):
    return {"f": list(sec.f), "isotropy": list(sec.I_f), "age": sec.age}


def _label_name(label):
    return "delta=%s f=%s" % (list(label.delta), [str(x) for x in label.f])


# ---------------------------------------------------------------------------
# commands


def cmd_analyze(cfg):
    wc = wall_crossing(cfg["git"], cfg["omega_plus"], cfg["omega_minus"])
    frame = wall_frame(wc)
    labels_plus = fixed_point_labels(wc.git, wc.A_plus, side="plus")
    labels_minus = fixed_point_labels(wc.git, wc.A_minus, side="minus")
    results = {
        "case": wc.case,
        "wall_normal": list(wc.e),
        "M_plus": list(wc.M_plus),
        "M_minus": list(wc.M_minus),
        "M_zero": list(wc.M_zero),
        "S_plus": list(wc.S_plus),
        "S_minus": list(wc.S_minus),
        "minimal_anticones_plus": [list(d) for d in wc.A_plus.minimal],
        "minimal_anticones_minus": [list(d) for d in wc.A_minus.minimal],
        "box_plus": [_sector_dict(s) for s in box_elements(wc.git, wc.A_plus)],
        "box_minus": [_sector_dict(s) for s in box_elements(wc.git, wc.A_minus)],
        "fixed_points": {"plus": len(labels_plus), "minus": len(labels_minus)},
        "next_to_pairs": len(next_to_pairs(wc)),
        "conifold_point": conifold_point(wc),
        "w": w_constant(wc),
        "coordinate_change": {
            "c": frame.change.c,
            "c_i": list(frame.change.c_i),
            "A": frame.change.A,
            "B": frame.change.B,
        },
        "crepant": True,
    }
    return results, True


def cmd_boxes(cfg):
    wc = wall_crossing(cfg["git"], cfg["omega_plus"], cfg["omega_minus"])
    return {
        "plus": [_sector_dict(s) for s in box_elements(wc.git, wc.A_plus)],
        "minus": [_sector_dict(s) for s in box_elements(wc.git, wc.A_minus)],
    }, True


def cmd_fixed_points(cfg):
    wc = wall_crossing(cfg["git"], cfg["omega_plus"], cfg["omega_minus"])
    out = {}
    for side, A in (("plus", wc.A_plus), ("minus", wc.A_minus)):
        rows = []
        for label in fixed_point_labels(wc.git, A, side=side):
            nw = normal_weights(wc.git, label)
            rows.append({
                "label": _label_name(label),
                "age": label.sector.age,
                "tangent_weights": [str(form) for _j, form in nw.fixed],
                "moving_weights": ["%s (age %s)" % (form, fj) for _j, form, fj in nw.moving],
            })
        out[side] = rows
    return out, True


def cmd_continuation(cfg):
    wc = wall_crossing(cfg["git"], cfg["omega_plus"], cfg["omega_minus"])
    lams = generic_lambdas(wc, min(cfg["samples"], 3), cfg["seed"],
                           clearance=cfg["tolerances"]["pole_clearance"])
    matrix = continuation_matrix(wc)
    entries = []
    for i, lp in enumerate(matrix.rows):
        for j, lm in enumerate(matrix.cols):
            kind = matrix.kinds[(i, j)]
            entry = {
                "row": _label_name(lp),
                "col": _label_name(lm),
                "kind": kind,
            }
            if kind == "coefficient":
                coeff = matrix.coefficients[(i, j)]
                entry["closed_form"] = coeff.describe()
                entry["values"] = [coeff.value(wc, lam) for lam in lams]
            entries.append(entry)
    return {"rows": len(matrix.rows), "cols": len(matrix.cols), "entries": entries}, True


def cmd_fm(cfg):
    wc = wall_crossing(cfg["git"], cfg["omega_plus"], cfg["omega_minus"])
    rows = []
    for delta, rho in minus_basis(wc):
        image = fm_transform(wc, delta, rho)
        rows.append({
            "basis": "e(delta=%s, rho=%s)" % (list(delta), list(rho)),
            "image": image.describe(),
            "terms": len(image.terms),
        })
    return {"basis_size": len(rows), "images": rows}, True


def cmd_series(cfg):
    wc = wall_crossing(cfg["git"], cfg["omega_plus"], cfg["omega_minus"])
    lam = generic_lambdas(wc, 1, cfg["seed"], clearance=cfg["tolerances"]["pole_clearance"])[0]
    out = []
    for label in fixed_point_labels(wc.git, wc.A_plus, side="plus"):
        if label.delta in wc.A_minus.minimal:
            continue
        spec = make_inner_spec(wc, label)
        ser = inner_series(spec, min(cfg["series_order"], 8), lam)
        out.append({
            "label": _label_name(label),
            "base_exponent": [str(x) for x in spec.d_plus],
            "coefficients": [c for c in ser.coeffs],
        })
    return {"lambda": list(lam), "series": out}, True


# ---------------------------------------------------------------------------
# verification suites


def _suite_uhfm(cfg, wc):
    tol = cfg["tolerances"]["residual"]
    floor = cfg["tolerances"]["sensitivity_floor"]
    lams = generic_lambdas(wc, cfg["samples"], cfg["seed"],
                           clearance=cfg["tolerances"]["pole_clearance"])
    rep = verify_uhfm(wc, lams)
    sens = uhfm_sensitivity(wc, lams, epsilon=1e-3)
    ok = rep.max_residual < tol and sens > floor
    return {
        "max_residual": rep.max_residual,
        "tolerance": tol,
        "checked": rep.n_checked,
        "worst": str(rep.worst),
        "sensitivity_residual": sens,
        "sensitivity_floor": floor,
    }, ok


def _suite_pairing(cfg, wc):
    tol = cfg["tolerances"]["pairing"]
    lams = generic_lambdas(wc, cfg["samples"], cfg["seed"],
                           clearance=cfg["tolerances"]["pole_clearance"])
    worst = 0.0
    worst_sample = None
    used = 0
    for i, lam in enumerate(lams):
        z = cfg["z"] * (1.0 + 0.07 * (i % 5))
        try:
            resid = verify_pairing_preserved(wc, lam, z)
            used += 1
        except ResonantSample:
            continue
        if resid > worst:
            worst, worst_sample = resid, i
    ok = worst < tol and used >= max(1, cfg["samples"] // 2)
    return {
        "max_residual": worst,
        "tolerance": tol,
        "samples_used": used,
        "worst_sample": worst_sample,
    }, ok


def _suite_mb(cfg, wc):
    tol = cfg["tolerances"]["mb"]
    c = abs(float(conifold_point(wc)))
    w = w_constant(wc)
    x_in = 0.3 * c * cmath.exp(1j * math.pi * w)
    x_out = 3.0 * c * cmath.exp(1j * math.pi * w)
    lams = generic_lambdas(wc, min(cfg["samples"], 5), cfg["seed"],
                           clearance=cfg["tolerances"]["pole_clearance"])
    rows = []
    worst = 0.0
    for label in fixed_point_labels(wc.git, wc.A_plus, side="plus"):
        if label.delta in wc.A_minus.minimal:
            continue
        for lam in lams:
            rep = verify_residue_identity(wc, label, x_in, x_out, lam, cfg["contour"])
            worst = max(worst, rep.residual_inside, rep.residual_outside)
            rows.append({
                "label": _label_name(label),
                "inside": rep.residual_inside,
                "outside": rep.residual_outside,
            })
    return {"max_residual": worst, "tolerance": tol, "checks": rows}, worst < tol


def _suite_ode(cfg, wc):
    tol = cfg["tolerances"]["ode"]
    order = cfg["series_order"]
    worst = 0.0
    rows = []
    swapped = wall_crossing(cfg["git"], cfg["omega_minus"], cfg["omega_plus"])
    for side, crossing in (("plus", wc), ("minus", swapped)):
        lams = generic_lambdas(crossing, 2, cfg["seed"],
                               clearance=cfg["tolerances"]["pole_clearance"])
        for label in fixed_point_labels(crossing.git, crossing.A_plus, side=side):
            if label.delta in crossing.A_minus.minimal:
                continue
            for lam in lams:
                spec = make_inner_spec(crossing, label)
                ser = inner_series(spec, order, lam)
                resid = gkz_ode_residual(ser, spec, lam)
                worst = max(worst, resid)
                rows.append({"side": side, "label": _label_name(label), "residual": resid})
    return {"max_residual": worst, "tolerance": tol, "checks": rows}, worst < tol


def _suite_lifts(cfg, wc):
    tol = cfg["tolerances"]["lifts"]
    lams = generic_lambdas(wc, min(cfg["samples"], 5), cfg["seed"],
                           clearance=cfg["tolerances"]["pole_clearance"])
    rows = []
    ok = True
    for pair in next_to_pairs(wc):
        for lam in lams:
            good = lift_invariance_check(wc, pair, lam, tol=tol)
            ok = ok and good
            rows.append({
                "pair": "%s | %s" % (_label_name(pair[0]), _label_name(pair[1])),
                "invariant": good,
            })
    return {"tolerance": tol, "checks": rows}, ok


SUITES = {
    "uhfm": _suite_uhfm,
    "pairing": _suite_pairing,
    "mb": _suite_mb,
    "ode": _suite_ode,
    "lifts": _suite_lifts,
}


def cmd_verify(cfg, suite):
    wc = wall_crossing(cfg["git"], cfg["omega_plus"], cfg["omega_minus"])
    results, ok = SUITES[suite](cfg, wc)
    results["suite"] = suite
    return results, ok


# ---------------------------------------------------------------------------
# entry point


def build_parser():
    parser = argparse.ArgumentParser(
        prog="wallcross",
        description="Wall-crossing calculator for toric GIT data: chamber "
        "combinatorics, localization data, analytic continuation, and the "
        "pull-push transform on localized K-theory.",
    )
    parser.add_argument("command", choices=[
        "analyze", "boxes", "fixed-points", "continuation", "fm", "series", "verify"])
    parser.add_argument("suite", nargs="?", choices=sorted(SUITES), default=None,
                        help="verification suite (for the verify command)")
    parser.add_argument("--config", required=True, help="path to a JSON config")
    parser.add_argument("--seed", type=int, default=None, help="override the sample seed")
    parser.add_argument("--samples", type=int, default=None, help="override the sample count")
    parser.add_argument("--trunc", type=int, default=None, help="override the series order")
    parser.add_argument("--tol", type=float, default=None,
                        help="override the residual tolerance of the invoked suite")
    parser.add_argument("--json", action="store_true", help="emit the JSON report")
    return parser


_SUITE_TOL_KEY = {"uhfm": "residual", "pairing": "pairing", "mb": "mb", "ode": "ode", "lifts": "lifts"}


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
    except (OSError, json.JSONDecodeError, ConfigError) as err:
        sys.stderr.write("config error: %s\n" % err)
        return 2
    if args.seed is not None:
        cfg["seed"] = args.seed
        cfg["raw"] = dict(cfg["raw"], seed=args.seed)
    if args.samples is not None:
        cfg["samples"] = args.samples
        cfg["raw"] = dict(cfg["raw"], samples=args.samples)
    if args.trunc is not None:
        cfg["series_order"] = args.trunc
        cfg["raw"] = dict(cfg["raw"], truncation=dict(
            cfg["raw"].get("truncation", {}), series_order=args.trunc))
    if args.tol is not None and args.command == "verify" and args.suite:
        key = _SUITE_TOL_KEY[args.suite]
        cfg["tolerances"][key] = args.tol
        cfg["raw"] = dict(cfg["raw"], tolerances=dict(
            cfg["raw"].get("tolerances", {}), **{key: args.tol}))

    try:
        if args.command == "verify":
            if not args.suite:
                sys.stderr.write("error: verify requires a suite name\n")
                return 2
            results, ok = cmd_verify(cfg, args.suite)
            command = "verify %s" % args.suite
        else:
            fn = {
                "analyze": cmd_analyze,
                "boxes": cmd_boxes,
                "fixed-points": cmd_fixed_points,
                "continuation": cmd_continuation,
                "fm": cmd_fm,
                "series": cmd_series,
            }[args.command]
            results, ok = fn(cfg)
            command = args.command
    except (EmptyQuotient, NotDeligneMumford, NotAdjacent, NotCrepant,
            PoleCollision, ContourTooClose, NonConvergent, ResonantSample) as err:
        sys.stderr.write("error: %s: %s\n" % (type(err).__name__, err))
        return 1

    report = make_report(command, cfg, results, ok)
    emit(report, args.json)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
