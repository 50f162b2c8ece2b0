"""Command-line front end.

Exit codes: 0 ok, 1 inequality violated (``wirtinger check``), 2 usage or
input error, 3 theorem mismatch, 4 I/O error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import circle, cone, polytope, spectral
from .angles import CLOSED, DIRICHLET, AngleVector, parse_angle_token, parse_angles
from .errors import DomainError, InputError, PreconditionError
from .sampling import random_angles
from .serialize import angles_to_dict, dumps, to_jsonable

EXIT_OK, EXIT_VIOLATED, EXIT_USAGE, EXIT_MISMATCH, EXIT_IO = 0, 1, 2, 3, 4

SWEEP_FORMAT_VERSION = 1
SWEEP_HEADER = [
    "version", "family", "mode", "trial", "n", "omega_over_pi", "omega",
    "p", "q", "r", "pred_p", "pred_q", "pred_r", "match", "near_resonance",
    "closed_form_error", "eigenvalues",
]


class IOFailure(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    seed: int = 0
    tol: float | None = None
    out: str | None = None
    format: str = "json"
    trials: int = 1000


def _config(args) -> RunConfig:
    return RunConfig(
        seed=getattr(args, "seed", 0),
        tol=getattr(args, "tol", None),
        out=getattr(args, "out", None),
        format=getattr(args, "format", "json"),
        trials=getattr(args, "trials", 1000),
    )


def _emit(text: str, cfg: RunConfig) -> None:
    if cfg.out is None:
        sys.stdout.write(text)
        return
    try:
        with open(cfg.out, "w", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise IOFailure(f"cannot write {cfg.out}: {exc}") from None


def _warn(msg: str) -> None:
    print(f"warning: {msg}", file=sys.stderr)


def _omega_over_pi(a: AngleVector):
    q = a.total_over_pi()
    return str(q) if isinstance(q, Fraction) else q


def _parse_vector(text: str) -> np.ndarray:
    text = text.strip()
    try:
        if text.startswith("["):
            return np.array(json.loads(text), dtype=float)
        return np.array([float(t) for t in text.replace(",", " ").split()], dtype=float)
    except (ValueError, TypeError, json.JSONDecodeError):
        raise InputError(f"cannot parse vector {text!r}") from None


# ---------------------------------------------------------------- matrix

def matrix_report(angles: AngleVector, tol: float | None = None) -> dict:
    wm = circle.build(angles)
    sig = spectral.signature(wm.matrix, tol)
    pred = circle.predicted_signature(angles)
    return {
        "angles": angles_to_dict(angles),
        "omega": wm.omega,
        "omega_over_pi": _omega_over_pi(angles),
        "matrix": wm.matrix,
        "weights": wm.weights,
        "signature": sig,
        "predicted": pred,
        "match": sig.as_tuple() == pred.as_tuple(),
        "near_resonance": angles.near_resonance(),
    }


def _matrix_csv(report: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    for i, row in enumerate(report["matrix"]):
        w.writerow([f"row{i + 1}", *map(repr, map(float, row))])
    w.writerow(["omega", repr(report["omega"])])
    w.writerow(["weights", *map(repr, map(float, report["weights"]))])
    w.writerow(["signature", *report["signature"].as_tuple()])
    w.writerow(["predicted", *report["predicted"].as_tuple()])
    w.writerow(["match", str(report["match"]).lower()])
    return buf.getvalue()


def cmd_matrix(args) -> int:
    cfg = _config(args)
    angles = parse_angles(args.angles, args.mode)
    if angles.near_resonance():
        _warn("total angle is within 1e-9 of a resonance; the numeric signature is ill-conditioned")
    report = matrix_report(angles, cfg.tol)
    _emit(_matrix_csv(report) if cfg.format == "csv" else dumps(report), cfg)
    if not report["match"]:
        print(f"theorem mismatch: numeric {report['signature']} vs predicted "
              f"{report['predicted']}", file=sys.stderr)
        return EXIT_MISMATCH
    return EXIT_OK


# ---------------------------------------------------------------- wirtinger

def cmd_wirtinger(args) -> int:
    cfg = _config(args)
    angles = parse_angles(args.angles, getattr(args, "mode", CLOSED))
    if args.action == "check":
        x = _parse_vector(args.x)
        verdict = circle.check_wirtinger(angles, x)
        report = {"angles": angles_to_dict(angles), "omega": angles.total(),
                  "x": x, "verdict": verdict}
        _emit(dumps(report), cfg)
        return EXIT_OK if verdict.holds else EXIT_VIOLATED
    if args.action == "violate":
        x = circle.find_violation(angles)
        report = {"angles": angles_to_dict(angles), "omega": angles.total(), "x": x}
        if x is not None:
            m = circle.build_closed(angles).matrix
            report["quadratic_value"] = float(x @ m @ x)
            report["verdict"] = circle.check_wirtinger(angles, x)
        _emit(dumps(report), cfg)
        return EXIT_OK
    gap = circle.spectral_gap(angles)
    _emit(dumps({"angles": angles_to_dict(angles), "omega": angles.total(), "gap": gap}), cfg)
    return EXIT_OK


# ---------------------------------------------------------------- cone

def isoperimetric_suite(wedges: cone.ConeWedges, trials: int, seed: int,
                        scale: float = 0.1) -> dict:
    """Random convex perturbations of 1, rescaled to the perimeter of 1."""
    m = circle.build_closed(wedges.angles).matrix
    one = np.ones(wedges.n)
    l_one = float(np.sum(m @ one))
    a_one = 0.5 * l_one
    deficits = []
    for i in range(trials):
        rng = np.random.default_rng(seed + i)
        f = scale * rng.standard_normal(wedges.n)
        h = one + f
        while np.min(cone.edge_lengths(wedges, h)) <= 0:
            f *= 0.5
            h = one + f
        h *= l_one / float(np.sum(m @ h))
        deficits.append(a_one - 0.5 * float(h @ m @ h))
    d = np.array(deficits)
    return {
        "trials": trials,
        "seed": seed,
        "circumscribed_area": a_one,
        "min_deficit": float(d.min()),
        "mean_deficit": float(d.mean()),
        "negative_deficits": int(np.count_nonzero(d < -1e-10 * a_one)),
    }


def cmd_cone(args) -> int:
    cfg = _config(args)
    wedges = cone.ConeWedges(parse_angles(args.angles, CLOSED))
    if args.action == "polygon":
        h = _parse_vector(args.support) if args.support else np.ones(wedges.n)
        _emit(dumps(cone.polygon_to_json(wedges, cone.build_polygon(wedges, h))), cfg)
        return EXIT_OK
    if args.action == "isoper":
        report = isoperimetric_suite(wedges, cfg.trials, cfg.seed, args.scale)
        report["angles"] = angles_to_dict(wedges.angles)
        report["omega"] = wedges.omega
        _emit(dumps(report), cfg)
        return EXIT_OK
    h = cone.improve_polygon(wedges)
    report = {"angles": angles_to_dict(wedges.angles), "omega": wedges.omega, "support": h}
    if h is not None:
        better = cone.build_polygon(wedges, h)
        base = cone.build_polygon(wedges, np.ones(wedges.n))
        report.update(
            perimeter=better.perimeter,
            circumscribed_perimeter=base.perimeter,
            area=better.area,
            circumscribed_area=base.area,
            area_gain=better.area - base.area,
            geometric_area=better.geometric_area,
            circumscribed_geometric_area=base.geometric_area,
            convex=better.convex,
        )
    _emit(dumps(report), cfg)
    return EXIT_OK


# ---------------------------------------------------------------- polytope

def load_normals(path: str) -> np.ndarray:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise IOFailure(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"bad JSON in {path}: {exc}") from None
    if not isinstance(data, dict) or "normals" not in data:
        raise InputError('normals file must be an object {"normals": [[x, y, z], ...]}')
    try:
        arr = np.array(data["normals"], dtype=float)
    except (ValueError, TypeError):
        raise InputError("normals must be a list of numeric triples") from None
    if arr.ndim != 2 or arr.shape[1] != 3:
        raise InputError("normals must be a list of numeric triples")
    return arr


def hessian_report(form: polytope.QuermassForm) -> dict:
    fan = form.fan
    facets, edges, vertices = fan.counts()
    one = np.ones(fan.n)
    return {
        "normals": fan.normals,
        "M": form.M,
        "valid_radius": form.valid_radius,
        "step": form.step,
        "w1_of_one": float(one @ form.M @ one),
        "facets": facets,
        "edges": edges,
        "vertices": vertices,
        "facet_adjacency": [list(e) for e in fan.facet_adjacency],
        "vertex_triples": fan.vertex_triples,
    }


def cmd_polytope(args) -> int:
    cfg = _config(args)
    fan = polytope.build_fan(load_normals(args.normals_file))
    form = polytope.quermass_matrix(fan)
    if args.action == "hessian":
        _emit(dumps(hessian_report(form)), cfg)
        return EXIT_OK
    report = polytope.verify_hyperplane_form(form, samples=args.samples, seed=cfg.seed)
    out = to_jsonable(report)
    out["holds"] = report.holds
    out["valid_radius"] = form.valid_radius
    _emit(dumps(out), cfg)
    if not report.signature_matches:
        _warn(f"signature {report.signature} differs from expected {report.expected_signature}")
    return EXIT_OK if report.holds else EXIT_MISMATCH


# ---------------------------------------------------------------- sweep

def _parse_int_range(text: str) -> range:
    try:
        if ":" in text:
            lo, hi = text.split(":")
            r = range(int(lo), int(hi) + 1)
        else:
            r = range(int(text), int(text) + 1)
    except ValueError:
        raise InputError(f"bad integer range {text!r}") from None
    if len(r) == 0 or r.start < 1:
        raise InputError(f"bad size range {text!r}")
    return r


def _parse_omega_range(text: str):
    parts = text.split(":")
    if len(parts) not in (1, 2):
        raise InputError(f"bad omega range {text!r}")
    vals = [parse_angle_token(p) for p in parts]
    if len(vals) == 1:
        vals = vals * 2
    (lo, flo), (hi, fhi) = vals
    if not 0 < lo <= hi:
        raise InputError(f"bad omega range {text!r}")
    return lo, hi, flo, fhi


def _sweep_row(family, mode, trial, angles: AngleVector, closed_form_error) -> list:
    wm = circle.build(angles)
    w = np.linalg.eigvalsh(wm.matrix)
    sig = spectral.signature(wm.matrix)
    pred = circle.predicted_signature(angles)
    return [
        SWEEP_FORMAT_VERSION, family, mode, trial, angles.size,
        _omega_over_pi(angles), repr(angles.total()),
        *sig.as_tuple(), *pred.as_tuple(),
        str(sig.as_tuple() == pred.as_tuple()).lower(),
        str(angles.near_resonance()).lower(),
        "" if closed_form_error is None else repr(float(closed_form_error)),
        ";".join(repr(float(v)) for v in w),
    ]


def sweep_rows(family: str, mode: str, sizes: range, omega_range, steps: int,
               trials: int, seed: int) -> list[list]:
    """Rows of the sweep CSV (without header).

    ``equal-angle`` walks every size against ``steps`` evenly spaced totals
    (exact multiples of pi when the range ends are given that way), skipping
    combinations whose common angle is not in (0, pi). ``random`` draws
    ``trials`` angle vectors with per-trial seed ``seed + index``.
    """
    lo, hi, flo, fhi = omega_range
    rows = []
    if family == "equal-angle":
        count_steps = 1 if lo == hi else steps
        if flo is not None and fhi is not None:
            omegas = [flo + (fhi - flo) * Fraction(k, max(1, count_steps - 1))
                      for k in range(count_steps)]
        else:
            omegas = list(np.linspace(lo, hi, count_steps))
        trial = 0
        for n in sizes:
            count = n if mode == CLOSED else n + 1
            if mode == CLOSED and n < 3:
                continue
            for om in omegas:
                if isinstance(om, Fraction):
                    each = om / count
                    if not 0 < each < 1:
                        continue
                    angles = AngleVector.from_pi_fractions([each] * count, mode)
                else:
                    if not 0 < float(om) / count < math.pi:
                        continue
                    angles = AngleVector.equal(count, float(om), mode)
                spec = circle.equal_angle_spectrum(n, angles.total(), mode)
                numeric = np.sort(np.linalg.eigvalsh(circle.build(angles).matrix) * spec.scale)
                err = float(np.max(np.abs(np.sort(spec.eigenvalues) - numeric)))
                rows.append(_sweep_row(family, mode, trial, angles, err))
                trial += 1
        return rows
    if family != "random":
        raise InputError(f"unknown family {family!r}")
    lo_size = max(sizes.start, 3 if mode == CLOSED else 1)
    if lo_size >= sizes.stop:
        raise InputError("size range too small for this mode")
    for i in range(trials):
        rng = np.random.default_rng(seed + i)
        for _ in range(1000):
            n = int(rng.integers(lo_size, sizes.stop))
            count = n if mode == CLOSED else n + 1
            bottom, top = max(lo, 0.075 * count), min(hi, 0.85 * math.pi * count)
            if bottom <= top:
                break
        else:
            raise InputError("omega range incompatible with the size range")
        omega = float(rng.uniform(bottom, top)) if bottom < top else bottom
        angles = random_angles(rng, count, omega, mode)
        rows.append(_sweep_row(family, mode, i, angles, None))
    return rows


def cmd_sweep(args) -> int:
    cfg = _config(args)
    sizes = _parse_int_range(args.n_range)
    omega_range = _parse_omega_range(args.omega_range)
    rows = sweep_rows(args.family, args.mode, sizes, omega_range, args.steps,
                      cfg.trials, cfg.seed)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SWEEP_HEADER)
    w.writerows(rows)
    _emit(buf.getvalue(), cfg)
    mismatches = sum(1 for r in rows if r[13] == "false" and r[14] == "false")
    if mismatches:
        print(f"theorem mismatch in {mismatches} rows", file=sys.stderr)
        return EXIT_MISMATCH
    return EXIT_OK


# ---------------------------------------------------------------- parser

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="wirtinger", description=(
        "Discrete Wirtinger matrices, cone isoperimetry and polytope quermassintegrals."))
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, seed=False):
        sp.add_argument("--out", help="write output to this path instead of stdout")
        if seed:
            sp.add_argument("--seed", type=int, default=0)
        return sp

    angle_help = "angles: api/b tokens, radians, 'xK' repeats, or a JSON array"

    sp = common(sub.add_parser("matrix", help="build a Wirtinger matrix and its signature"))
    sp.add_argument("--mode", choices=[CLOSED, DIRICHLET], default=CLOSED)
    sp.add_argument("--angles", nargs="+", required=True, help=angle_help)
    sp.add_argument("--format", choices=["json", "csv"], default="json")
    sp.add_argument("--tol", type=float, default=None, help="zero tolerance override")
    sp.set_defaults(func=cmd_matrix)

    sp = sub.add_parser("wirtinger", help="check / violate / gap")
    wsub = sp.add_subparsers(dest="action", required=True, parser_class=_Parser)
    s = common(wsub.add_parser("check", help="evaluate both sides of the inequality"))
    s.add_argument("--mode", choices=[CLOSED, DIRICHLET], default=CLOSED)
    s.add_argument("--angles", nargs="+", required=True, help=angle_help)
    s.add_argument("--x", required=True, help="vector, comma separated or JSON")
    for name, text in (("violate", "find x breaking the inequality (omega > 2pi)"),
                       ("gap", "weighted Laplacian spectral gap (omega <= 2pi)")):
        s = common(wsub.add_parser(name, help=text))
        s.add_argument("--angles", nargs="+", required=True, help=angle_help)
    sp.set_defaults(func=cmd_wirtinger)

    sp = sub.add_parser("cone", help="polygons on a euclidean cone")
    csub = sp.add_subparsers(dest="action", required=True, parser_class=_Parser)
    s = common(csub.add_parser("polygon", help="polygon from support numbers"))
    s.add_argument("--angles", nargs="+", required=True, help=angle_help)
    s.add_argument("--support", help="support numbers (default all ones)")
    s = common(csub.add_parser("isoper", help="Monte-Carlo isoperimetric deficits"), seed=True)
    s.add_argument("--angles", nargs="+", required=True, help=angle_help)
    s.add_argument("--trials", type=int, default=1000)
    s.add_argument("--scale", type=float, default=0.1, help="perturbation size")
    s = common(csub.add_parser("improve", help="beat the circumscribed polygon (omega > 2pi)"))
    s.add_argument("--angles", nargs="+", required=True, help=angle_help)
    sp.set_defaults(func=cmd_cone)

    sp = sub.add_parser("polytope", help="3D surface-area quadratic form")
    psub = sp.add_subparsers(dest="action", required=True, parser_class=_Parser)
    s = common(psub.add_parser("hessian", help="dump the matrix M"))
    s.add_argument("normals_file")
    s = common(psub.add_parser("verify", help="hyperplane semidefiniteness report"), seed=True)
    s.add_argument("normals_file")
    s.add_argument("--samples", type=int, default=1000)
    sp.set_defaults(func=cmd_polytope)

    sp = common(sub.add_parser("sweep", help="CSV of spectra and signatures"), seed=True)
    sp.add_argument("--family", choices=["equal-angle", "random"], required=True)
    sp.add_argument("--mode", choices=[CLOSED, DIRICHLET], default=CLOSED)
    sp.add_argument("--n-range", default="3:20", help="matrix sizes, e.g. 4:64")
    sp.add_argument("--omega-range", default="2pi", help="e.g. 2pi or pi:3pi")
    sp.add_argument("--steps", type=int, default=41, help="omega samples (equal-angle)")
    sp.add_argument("--trials", type=int, default=500, help="rows (random family)")
    sp.set_defaults(func=cmd_sweep)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except IOFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (InputError, PreconditionError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
