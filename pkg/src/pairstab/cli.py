"""Command line front end.

Every subcommand prints one canonical JSON document (sorted keys, rationals
as strings). Exit status: 0 for any computed verdict, 2 for malformed input,
3 when a mathematical precondition fails, 1 when a replayed certificate does
not verify.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Any

from . import binary as bf
from .curves import PlaneCurve, degrees_and_mu, mabuchi_bound_check, replay_curve_certificate, stability_data
from .forms import FormError
from .geometry import Containment, GeometryError, contains_polytope, convex_hull
from .kempf_ness import STANDARD, UNITARY_INVARIANT, energy, energy_along_psg, energy_scan
from .pairs import (
    DEFAULT_SEED,
    DEFAULT_SHEARS,
    Pair,
    check_pair_numerical,
    default_frames,
    replay_certificate,
    trivial_form,
)
from .serialize import (
    SchemaError,
    form_from_json,
    form_to_json,
    frame_from_json,
    frame_to_json,
    matrix_from_json,
    matrix_to_json,
    polytope_to_json,
    q,
    vector_from_json,
    verdict_from_json,
    verdict_to_json,
)
from .torus import OnePSG, TorusFrame

EXIT_OK = 0
EXIT_REPLAY_FAILED = 1
EXIT_BAD_INPUT = 2
EXIT_PRECONDITION = 3


class InputError(Exception):
    pass


def _load(source: str | None) -> Any:
    if source is None:
        raise InputError("an input document is required")
    text = source
    if source == "-":
        text = sys.stdin.read()
    elif not source.lstrip().startswith(("{", "[")):
        try:
            text = Path(source).read_text(encoding="utf-8")
        except OSError as exc:
            raise InputError(f"cannot read {source}: {exc}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON: {exc}") from None


def _hermitian(name: str):
    return UNITARY_INVARIANT if name == "invariant" else STANDARD


def _frames(args, doc: dict, n: int) -> tuple[list[TorusFrame], dict]:
    if getattr(args, "frames", None):
        raw = _load(args.frames)
        frames = [frame_from_json(f) for f in raw]
        return frames, {"frames_source": "file"}
    if isinstance(doc, dict) and doc.get("frames"):
        return [frame_from_json(f) for f in doc["frames"]], {"frames_source": "input"}
    frames = default_frames(n, seed=args.seed, count=args.shears)
    return frames, {"frames_source": "default", "seed": args.seed, "shears": args.shears}


# subcommands ----------------------------------------------------------------


def cmd_hull(args) -> dict:
    doc = _load(args.input)
    if "points" in doc:
        P = convex_hull(vector_from_json(p) for p in doc["points"])
        return {"command": "hull", "polytope": polytope_to_json(P)}
    try:
        P = convex_hull(vector_from_json(p) for p in doc["inner"])
        Q = convex_hull(vector_from_json(p) for p in doc["outer"])
    except KeyError as exc:
        raise SchemaError(f"hull input needs 'points' or 'inner'/'outer' (missing {exc})") from None
    res = contains_polytope(P, Q)
    out = {"command": "hull", "inner": polytope_to_json(P), "outer": polytope_to_json(Q), "verdict": res.verdict.value}
    if not res.contained:
        out["certificate"] = list(res.certificate)
        out["min_inner"] = q(res.min_inner)
        out["min_outer"] = q(res.min_outer)
    return out


def _pair_doc(command: str, pair: Pair, args, doc) -> dict:
    frames, meta = _frames(args, doc, pair.group_size)
    verdict = check_pair_numerical(pair, frames)
    return {
        "command": command,
        "pair": {"v": form_to_json(pair.v), "w": form_to_json(pair.w)},
        "verdict": verdict_to_json(verdict),
        **meta,
    }


def cmd_pair_check(args) -> dict:
    if args.replay:
        return replay(_load(args.replay))
    doc = _load(args.input)
    try:
        pair = Pair(form_from_json(doc["v"]), form_from_json(doc["w"]))
    except KeyError as exc:
        raise SchemaError(f"pair input is missing {exc}") from None
    return _pair_doc("pair-check", pair, args, doc)


def cmd_hm_check(args) -> dict:
    if args.replay:
        return replay(_load(args.replay))
    doc = _load(args.input)
    w = form_from_json(doc["w"] if "w" in doc else doc)
    return _pair_doc("hm-check", Pair(trivial_form(w.blocks[0]), w), args, doc)


def cmd_slope(args) -> dict:
    doc = _load(args.input)
    try:
        v, w = form_from_json(doc["v"]), form_from_json(doc["w"])
        u = OnePSG(tuple(int(c) for c in doc["u"]))
    except KeyError as exc:
        raise SchemaError(f"slope input is missing {exc}") from None
    frame = frame_from_json(doc["frame"]) if doc.get("frame") else TorusFrame.identity(v.blocks[0])
    alphas = vector_from_json(args.alphas.split(",")) if args.alphas else None
    kwargs = {"alphas": alphas} if alphas else {}
    rep = energy_along_psg(v, w, u, frame, h=_hermitian(args.hermitian), **kwargs)
    return {
        "command": "slope",
        "u": list(u.u),
        "frame": frame_to_json(frame),
        "hermitian": args.hermitian,
        "exact_slope": q(rep.exact_slope),
        "fitted_slope": rep.fitted_slope,
        "finest_slope": rep.finest_slope,
        "rounded_slope": rep.rounded_slope,
        "drift": rep.drift,
        "rows": [
            {
                "alpha": q(r["alpha"]),
                "log_alpha_sq": r["log_alpha_sq"],
                "p": r["p"],
                "norm_v_sq": q(r["norm_v_sq"]),
                "norm_w_sq": q(r["norm_w_sq"]),
            }
            for r in rep.rows
        ],
    }


def cmd_energy(args) -> dict:
    doc = _load(args.input)
    try:
        v, w = form_from_json(doc["v"]), form_from_json(doc["w"])
    except KeyError as exc:
        raise SchemaError(f"energy input is missing {exc}") from None
    h = _hermitian(args.hermitian)
    if args.scan:
        rep = energy_scan(v, w, h, seed=args.seed, samples=args.samples, diag_range=args.diag_range)
        return {
            "command": "energy",
            "mode": "scan",
            "hermitian": args.hermitian,
            "seed": rep.seed,
            "samples": rep.samples,
            "diag_range": rep.diag_range,
            "min_p": rep.min_p,
            "argmin": matrix_to_json(rep.argmin),
            "rows": [{"sample": k, "p": p} for k, p in rep.rows],
        }
    n = v.blocks[0]
    sigma = matrix_from_json(doc["sigma"]) if doc.get("sigma") else TorusFrame.identity(n).conjugator
    s = energy(v, w, sigma, h)
    return {
        "command": "energy",
        "mode": "point",
        "hermitian": args.hermitian,
        "sigma": matrix_to_json(s.sigma),
        "norm_v_sq": q(s.norm_v_sq),
        "norm_w_sq": q(s.norm_w_sq),
        "p": s.p,
    }


def _parse_enumerate(tokens: list[str]) -> tuple[int, int]:
    vals = {}
    for tok in tokens:
        key, _, val = tok.partition("=")
        if key not in ("e", "d") or not val.isdigit():
            raise InputError(f"--enumerate expects e=<int> d=<int>, got {tok!r}")
        vals[key] = int(val)
    if set(vals) != {"e", "d"}:
        raise InputError("--enumerate needs both e=<int> and d=<int>")
    return vals["e"], vals["d"]


def _binary_row(rep: bf.OracleReport) -> dict:
    return {
        "f": str(rep.f),
        "g": str(rep.g),
        "closed_form": rep.closed_form,
        "polytope": rep.polytope,
        "agree": rep.agree,
        "verdict": verdict_to_json(rep.verdict),
    }


def _oracle_row(fg) -> dict:
    return _binary_row(bf.oracle_equivalence(*fg))


def cmd_binary(args) -> dict:
    if args.replay:
        return replay(_load(args.replay))
    try:
        if args.enumerate:
            e, d = _parse_enumerate(args.enumerate)
            if args.upto:
                pairs = [(f, g) for f in bf.enumerate_forms(e) for g in bf.enumerate_forms(d)]
            else:
                pairs = [
                    (f, g)
                    for f in bf.enumerate_forms(e)
                    if f.degree == e
                    for g in bf.enumerate_forms(d)
                    if g.degree == d
                ]
        elif args.f is not None and args.g is not None:
            pairs = [(bf.FactoredBinaryForm.parse(args.f), bf.FactoredBinaryForm.parse(args.g))]
        else:
            raise InputError("binary needs --f/--g or --enumerate e=.. d=..")
    except ValueError as exc:
        raise InputError(str(exc)) from None
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(_oracle_row, pairs, chunksize=64))
    else:
        rows = [_oracle_row(fg) for fg in pairs]
    return {
        "command": "binary",
        "points": [str(p) for p in bf.ENUMERATION_POINTS] if args.enumerate else None,
        "count": len(rows),
        "mismatches": sum(not r["agree"] for r in rows),
        "semistable": sum(r["closed_form"] for r in rows),
        "results": rows,
    }


def cmd_curve(args) -> dict:
    if args.replay:
        return replay(_load(args.replay))
    doc = _load(args.input)
    form_doc = doc["curve"] if "curve" in doc else doc
    C = PlaneCurve(form_from_json(form_doc))
    frames, meta = _frames(args, doc, 3)
    data = stability_data(C)
    deg = data.degrees
    per_frame = []
    for fr in frames:
        v = mabuchi_bound_check(C, [fr], scale=args.scale)
        per_frame.append({"frame": frame_to_json(fr), "containment": _containment(v), "verdict": verdict_to_json(v)})
    overall = mabuchi_bound_check(C, frames, scale=args.scale)
    return {
        "command": "curve",
        "curve": form_to_json(C.F),
        "smooth": C.smooth,
        "scale": args.scale,
        "degrees": {"d": deg.d, "deg_R": deg.deg_R, "deg_Delta": deg.deg_Delta, "mu": deg.mu, "r": deg.r},
        "R_X": form_to_json(data.R_X),
        "Delta_X": form_to_json(data.Delta_X),
        "per_frame": per_frame,
        "containment": _containment(overall),
        "verdict": verdict_to_json(overall),
        **meta,
    }


def _containment(v) -> str:
    return (Containment.CONTAINED if v.semistable else Containment.SEPARATED).value


# replay ---------------------------------------------------------------------


def replay(doc: dict) -> dict:
    """Re-verify every certificate in a previously emitted document."""
    kind = doc.get("command") if isinstance(doc, dict) else None
    checked = verified = 0
    if kind in ("pair-check", "hm-check"):
        pair = Pair(form_from_json(doc["pair"]["v"]), form_from_json(doc["pair"]["w"]))
        verdict = verdict_from_json(doc["verdict"])
        if verdict.certificate is not None:
            checked += 1
            verified += replay_certificate(pair, verdict.certificate)
    elif kind == "binary":
        for row in doc["results"]:
            verdict = verdict_from_json(row["verdict"])
            if verdict.certificate is None:
                continue
            f = bf.FactoredBinaryForm.parse(row["f"])
            g = bf.FactoredBinaryForm.parse(row["g"])
            checked += 1
            verified += replay_certificate(Pair(bf.expand(f), bf.expand(g)), verdict.certificate)
    elif kind == "curve":
        C = PlaneCurve(form_from_json(doc["curve"]))
        scale = int(doc.get("scale", 1))
        verdicts = [verdict_from_json(doc["verdict"])]
        verdicts += [verdict_from_json(r["verdict"]) for r in doc.get("per_frame", [])]
        for v in verdicts:
            if v.certificate is not None:
                checked += 1
                verified += replay_curve_certificate(C, v.certificate, scale)
    else:
        raise SchemaError(f"cannot replay a document of kind {kind!r}")
    return {"command": "replay", "of": kind, "certificates": checked, "verified": verified, "ok": checked == verified}


# entry point ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pairstab", description=__doc__.splitlines()[0])
    parser.add_argument("-o", "--output", help="write JSON here instead of stdout")
    sub = parser.add_subparsers(dest="command", required=True)

    def frame_opts(p):
        p.add_argument("--frames", help="JSON file (or inline JSON) with a list of torus frames")
        p.add_argument("--seed", type=int, default=DEFAULT_SEED, help=f"seed for default shear frames ({DEFAULT_SEED})")
        p.add_argument("--shears", type=int, default=DEFAULT_SHEARS, help="number of default shear frames")

    p = sub.add_parser("hull", help="convex hull or containment of point sets")
    p.add_argument("input", help="path, inline JSON, or - for stdin")
    p.set_defaults(func=cmd_hull)

    p = sub.add_parser("pair-check", help="numerical semistability of a pair (v, w)")
    p.add_argument("input", nargs="?")
    p.add_argument("--replay", help="re-verify certificates in an earlier output")
    frame_opts(p)
    p.set_defaults(func=cmd_pair_check)

    p = sub.add_parser("hm-check", help="Hilbert-Mumford semistability of w, i.e. the pair (1, w)")
    p.add_argument("input", nargs="?")
    p.add_argument("--replay")
    frame_opts(p)
    p.set_defaults(func=cmd_hm_check)

    p = sub.add_parser("slope", help="energy along a one-parameter subgroup")
    p.add_argument("input")
    p.add_argument("--alphas", help="comma separated rationals, e.g. 1/10,1/100")
    p.add_argument("--hermitian", choices=["standard", "invariant"], default="standard")
    p.set_defaults(func=cmd_slope)

    p = sub.add_parser("energy", help="energy at a group element, or a seeded scan")
    p.add_argument("input")
    p.add_argument("--scan", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=64)
    p.add_argument("--diag-range", type=int, default=4)
    p.add_argument("--hermitian", choices=["standard", "invariant"], default="standard")
    p.set_defaults(func=cmd_energy)

    p = sub.add_parser("binary", help="binary forms: closed form vs polytope test")
    p.add_argument("--f", help='factored form, e.g. "[0:1]^2 * [1:1]"')
    p.add_argument("--g")
    p.add_argument("--enumerate", nargs=2, metavar=("e=E", "d=D"))
    p.add_argument("--upto", action="store_true", help="enumerate degrees <= e, d instead of exactly e, d")
    p.add_argument("--jobs", type=int, default=1, help="worker processes; output order does not depend on it")
    p.add_argument("--replay")
    p.set_defaults(func=cmd_binary)

    p = sub.add_parser("curve", help="plane curve K-energy polytope test")
    p.add_argument("input", nargs="?")
    p.add_argument("--scale", type=int, default=1, help="common multiplier of the normalization exponents")
    p.add_argument("--replay")
    frame_opts(p)
    p.set_defaults(func=cmd_curve)
    return parser


def dumps(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        doc = args.func(args)
    except (InputError, SchemaError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except (FormError, GeometryError, ValueError, ZeroDivisionError) as exc:
        print(f"error: precondition violated: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    text = dumps(doc)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    if doc.get("command") == "replay" and not doc["ok"]:
        return EXIT_REPLAY_FAILED
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
