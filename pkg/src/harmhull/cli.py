"""Command-line front end.  Every command prints one JSON object.

Complex numbers travel as ``[re, im]``; vectors as arrays of those (plain
reals are accepted on input).  Floats are written with 17 significant
digits.  Exit codes: 0 ok, 1 domain error, 2 usage error.

Examples::

    harmhull incidence --z "[[0,0],[0,0],[0,0],[0,0]]" --zp "[[1,0],[0,1],[0,0],[0,0]]"
    harmhull bateman eval --f st_over_zeta --contour "0,0,1,64" --point "[1,0,0,0]"
    harmhull pqp rank --m 2 --trials 10 --seed 3
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field

import numpy as np

from . import bateman, hull, lie, odd_dim, twistor
from .core import HarmHullError, complex_to_json, cvec_from_json, cvec_to_json
from .integrands import integrand_from_string
from .regions import UnsupportedRegion, region_from_json


class UsageError(Exception):
    pass


@dataclass
class CommandResult:
    status: str
    payload: object = field(default_factory=dict)
    message: str = ""
    exit_code: int = 0

    def to_json(self) -> str:
        return dumps({"status": self.status, "payload": self.payload, "message": self.message})


# -- JSON output -------------------------------------------------------------------

def _encode(obj) -> str:
    if obj is None or isinstance(obj, (bool, np.bool_)):
        return json.dumps(None if obj is None else bool(obj))
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not math.isfinite(x):
            return "null"
        text = format(x, ".17g")
        return text if any(c in text for c in ".en") else text + ".0"
    if isinstance(obj, (complex, np.complexfloating)):
        return _encode(complex_to_json(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {_encode(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, np.ndarray):
        return _encode(obj.tolist())
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(_encode(v) for v in obj) + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def dumps(obj) -> str:
    """JSON text with floats at 17 significant digits (lossless for doubles)."""
    return _encode(obj)


# -- argument parsing helpers ------------------------------------------------------------

def _json_arg(text: str, what: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{what}: malformed JSON ({exc.msg})") from None


def _cvec_arg(text: str, what: str, dim: int | None = None) -> np.ndarray:
    try:
        v = cvec_from_json(_json_arg(text, what))
    except ValueError as exc:
        raise UsageError(f"{what}: {exc}") from None
    if dim is not None and v.size != dim:
        raise UsageError(f"{what}: expected {dim} components, got {v.size}")
    return v


def _rvec_arg(text: str, what: str, dim: int | None = None) -> np.ndarray:
    obj = _json_arg(text, what)
    try:
        v = np.asarray(obj, dtype=float)
    except (TypeError, ValueError):
        raise UsageError(f"{what}: expected an array of reals") from None
    if v.ndim != 1 or (dim is not None and v.size != dim):
        raise UsageError(f"{what}: expected a real vector" + (f" of length {dim}" if dim else ""))
    return v


def _floats(text: str, count: int, what: str) -> list[float]:
    try:
        vals = [float(t) for t in text.split(",")]
    except ValueError:
        raise UsageError(f"{what}: expected {count} comma-separated numbers") from None
    if len(vals) != count:
        raise UsageError(f"{what}: expected {count} comma-separated numbers")
    return vals


def _load_region(path: str):
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read region file: {exc}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"region file: malformed JSON ({exc.msg})") from None
    try:
        return region_from_json(obj)
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"region file: {exc}") from None


def _rng(args):
    return np.random.default_rng(args.seed)


def _contour(text: str) -> bateman.Contour:
    c_re, c_im, rho, n = _floats(text, 4, "--contour")
    if n != int(n):
        raise UsageError("--contour: node count must be an integer")
    try:
        return bateman.Contour(complex(c_re, c_im), rho, int(n))
    except ValueError as exc:
        raise UsageError(f"--contour: {exc}") from None


def _integrand(text: str):
    try:
        return integrand_from_string(text)
    except ValueError as exc:
        raise UsageError(f"--f: {exc}") from None


# -- commands -------------------------------------------------------------------------------

def cmd_hull_check(args):
    U = _load_region(args.domain)
    z = _cvec_arg(args.point, "--point", U.dimension)
    x0 = _rvec_arg(args.basepoint, "--basepoint", U.dimension)
    v = hull.hull_membership(z, U, x0, samples=args.samples,
                             fallback_samples=args.fallback_samples, rng=_rng(args))
    return v.to_json()


def cmd_hull_slice(args):
    U = _load_region(args.domain)
    n = U.dimension
    z0 = _cvec_arg(args.origin, "--origin", n)
    d1 = _cvec_arg(args.dir1, "--dir1", n)
    d2 = _cvec_arg(args.dir2, "--dir2", n)
    x0 = _rvec_arg(args.basepoint, "--basepoint", n)
    lo, hi = _floats(args.extent, 2, "--extent")
    if args.grid < 2:
        raise UsageError("--grid must be at least 2")
    s = np.linspace(lo, hi, args.grid)
    S1, S2 = np.meshgrid(s, s, indexing="ij")
    Z = z0 + S1.reshape(-1, 1) * d1 + S2.reshape(-1, 1) * d2
    codes = hull.hull_codes(Z, U, x0, samples=args.samples).reshape(args.grid, args.grid)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["s1", "s2", "code"])
    for i in range(args.grid):
        for j in range(args.grid):
            w.writerow([format(s[i], ".17g"), format(s[j], ".17g"), int(codes[i, j])])
    try:
        with open(args.out, "w") as fh:
            fh.write(buf.getvalue())
    except OSError as exc:
        raise UsageError(f"cannot write {args.out}: {exc}") from None
    counts = {str(c): int(np.sum(codes == c)) for c in (0, 1, 2)}
    return {"out": args.out, "shape": [args.grid, args.grid], "counts": counts,
            "legend": {"0": "MemberCertified", "1": "ConeFailsObstacle",
                       "2": "ConeOkConnectivityUnverified"}}


def cmd_bateman_eval(args):
    f = _integrand(args.f)
    z = _cvec_arg(args.point, "--point", 4)
    gamma = _contour(args.contour)
    out = {"value": bateman.bateman_eval(f, gamma, z)}
    if args.oracle:
        out["residue_oracle"] = bateman.residue_oracle(f, gamma, z)
    return out


def cmd_bateman_certify(args):
    f = _integrand(args.f)
    lo, hi = _floats(args.box, 2, "--box")
    r = bateman.harmonicity_certificate(f, _contour(args.contour), (lo, hi), args.count,
                                        rng=_rng(args), h=args.step)
    return {"max_abs_laplacian": r}


def cmd_monodromy(args):
    c_re, c_im, rho, steps = _floats(args.loop, 4, "--loop")
    if steps != int(steps):
        raise UsageError("--loop: step count must be an integer")
    if args.kind == "log":
        return {"kind": "log", "shift": odd_dim.log_demo(complex(c_re, c_im), rho, int(steps))}
    loop = odd_dim.sample_loop(complex(c_re, c_im), rho, int(steps))
    return {"kind": "sqrt", "multiplier": odd_dim.newtonian_monodromy(loop)}


def cmd_oddhull_check(args):
    z = _cvec_arg(args.point, "--point", 3)
    if args.epsilon is not None:
        A = np.eye(3)
        if args.rotation is not None:
            vals = _floats(args.rotation, 9, "--rotation")
            A = np.array(vals).reshape(3, 3)
        if args.epsilon == 0:
            return {"member": odd_dim.reduced_hull_member_3d(z), "chart": "reduced"}
        return {"member": odd_dim.curved_extension_member(z, args.epsilon, A),
                "chart": "curved", "epsilon": args.epsilon, "rotation": A}
    reduced = odd_dim.reduced_hull_member_3d(z)
    sq = complex(np.sum(z * z))
    if abs(sq) <= 1e-10:
        return {"reduced_member": reduced, "member": False, "witness": None}
    w = odd_dim.cover_witness(z)
    return {"reduced_member": reduced, "member": True,
            "witness": {"rotation": w.rotation, "epsilon": w.epsilon, "reduced": w.reduced}}


def cmd_incidence(args):
    z = _cvec_arg(args.z, "--z", 4)
    zp = _cvec_arg(args.zp, "--zp", 4)
    r = twistor.lines_intersect(z, zp)
    point = None
    if r.point is not None:
        P = r.point.coords
        point = cvec_to_json(P / P[np.argmax(np.abs(P))])
    return {"intersect": r.intersect, "point": point, "determinant": r.determinant}


def cmd_tau(args):
    if args.twistor is not None:
        Z = _cvec_arg(args.twistor, "--twistor", 4)
    elif args.x is not None:
        zeta = _cvec_arg(args.zeta, "--zeta", 2) if args.zeta else np.array([1.0, 0.0])
        Z = twistor.embed_line(_rvec_arg(args.x, "--x", 4), zeta).coords
    else:
        raise UsageError("give --twistor or --x")
    return {"tau": twistor.tau(Z)}


def cmd_pluecker(args):
    if args.x is not None:
        phi = twistor.pluecker_of_real(_rvec_arg(args.x, "--x", 4))
    elif args.Z is not None and args.W is not None:
        phi = twistor.pluecker_of_plane(_cvec_arg(args.Z, "--Z", 4), _cvec_arg(args.W, "--W", 4))
    else:
        raise UsageError("give --x, or both --Z and --W")
    return {"pluecker": cvec_to_json(phi.coords), "quadric_residual": twistor.quadric_residual(phi)}


def cmd_pqp_sample(args):
    if args.m < 2 or args.count < 1:
        raise UsageError("need --m >= 2 and --count >= 1")
    rng = _rng(args)
    worst = 0.0
    for _ in range(args.count):
        g = lie.sample_P(args.m, rng) @ lie.sample_Q(args.m, rng) @ lie.sample_P(args.m, rng)
        worst = max(worst, abs(lie.pqp_member(g).c11))
    return {"max_abs_c11": worst, "count": args.count, "m": args.m}


def cmd_pqp_rank(args):
    r = lie.pqp_rank_estimate(args.m, args.trials, _rng(args))
    return {"rank": r.rank, "expected": r.expected, "observed": list(r.observed)}


# -- parser ------------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="harmhull", description="Harmonic hull toolkit (JSON in, JSON out).")
    p.add_argument("--seed", type=int, default=0, help="seed for all randomness (default 0)")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def seeded(sp):
        sp.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="random seed")
        return sp

    h = sub.add_parser("hull", help="harmonic hull queries (even n >= 4)")
    hs = h.add_subparsers(dest="action", required=True, parser_class=_Parser)
    c = seeded(hs.add_parser("check", help="classify one point of C^n"))
    c.add_argument("--domain", required=True, help="region JSON file")
    c.add_argument("--point", required=True, help="complex point, JSON")
    c.add_argument("--basepoint", required=True, help="real point of U, JSON")
    c.add_argument("--samples", type=int, default=64, help="segment samples K")
    c.add_argument("--fallback-samples", type=int, default=None,
                   help="sample the cone slice for unsupported regions (never certified)")
    c.set_defaults(func=cmd_hull_check)
    s = seeded(hs.add_parser("slice", help="rasterise a 2-parameter real slice to CSV"))
    s.add_argument("--domain", required=True)
    s.add_argument("--origin", required=True, help="complex point z0, JSON")
    s.add_argument("--dir1", required=True, help="complex direction, JSON")
    s.add_argument("--dir2", required=True, help="complex direction, JSON")
    s.add_argument("--basepoint", required=True, help="real point of U, JSON")
    s.add_argument("--extent", default="-2,2", help="parameter range 'lo,hi'")
    s.add_argument("--grid", type=int, default=201, help="points per axis")
    s.add_argument("--samples", type=int, default=16, help="segment samples per pixel")
    s.add_argument("--out", required=True, help="output CSV (s1, s2, code)")
    s.set_defaults(func=cmd_hull_slice)

    b = sub.add_parser("bateman", help="Bateman contour integral")
    bs = b.add_subparsers(dest="action", required=True, parser_class=_Parser)
    e = bs.add_parser("eval", help="evaluate at a point of C^4")
    e.add_argument("--f", required=True, help="built-in name or expression in s, t, zeta")
    e.add_argument("--contour", default="0,0,1,64", help="'c_re,c_im,rho,N'")
    e.add_argument("--point", required=True)
    e.add_argument("--oracle", action="store_true", help="also report the residue oracle")
    e.set_defaults(func=cmd_bateman_eval)
    ce = seeded(bs.add_parser("certify", help="max finite-difference Laplacian over a box"))
    ce.add_argument("--f", required=True)
    ce.add_argument("--contour", default="0,0,1,64")
    ce.add_argument("--box", default="0,1", help="'lo,hi' per coordinate")
    ce.add_argument("--count", type=int, default=20)
    ce.add_argument("--step", type=float, default=None, help="finite-difference step")
    ce.set_defaults(func=cmd_bateman_certify)

    mo = sub.add_parser("monodromy", help="branch tracking around a zeta-plane loop")
    mo.add_argument("--loop", default="0,1,0.1,400", help="'center_re,center_im,radius,steps'")
    mo.add_argument("--kind", choices=("sqrt", "log"), default="sqrt",
                    help="sqrt: 1/sqrt(z.z) on (zeta, zeta^2, 0); log: log(z.z)/2 on (1, zeta)")
    mo.set_defaults(func=cmd_monodromy)

    o = sub.add_parser("oddhull", help="reduced hull and its cover in C^3")
    os_ = o.add_subparsers(dest="action", required=True, parser_class=_Parser)
    oc = os_.add_parser("check")
    oc.add_argument("--point", required=True)
    oc.add_argument("--epsilon", type=float, default=None)
    oc.add_argument("--rotation", default=None, help="9 comma-separated reals, row major")
    oc.set_defaults(func=cmd_oddhull_check)

    i = sub.add_parser("incidence", help="do the lines of z and z' meet?")
    i.add_argument("--z", required=True)
    i.add_argument("--zp", required=True)
    i.set_defaults(func=cmd_incidence)

    t = sub.add_parser("tau", help="point of S^4 under a twistor")
    t.add_argument("--twistor", default=None, help="homogeneous coordinates, JSON")
    t.add_argument("--x", default=None, help="real point of R^4 (with --zeta)")
    t.add_argument("--zeta", default=None, help="line parameter [zeta1, zeta2]")
    t.set_defaults(func=cmd_tau)

    pl = sub.add_parser("pluecker", help="Pluecker coordinates of a line")
    pl.add_argument("--x", default=None, help="real point of R^4")
    pl.add_argument("--Z", default=None)
    pl.add_argument("--W", default=None)
    pl.set_defaults(func=cmd_pluecker)

    q = sub.add_parser("pqp", help="PQP subset of SO(2m+2, C)")
    qs = q.add_subparsers(dest="action", required=True, parser_class=_Parser)
    qa = seeded(qs.add_parser("sample", help="max |C11| over random p q p' products"))
    qa.add_argument("--m", type=int, default=2)
    qa.add_argument("--count", type=int, default=1000)
    qa.set_defaults(func=cmd_pqp_sample)
    qr = seeded(qs.add_parser("rank", help="numerical dimension of PQP"))
    qr.add_argument("--m", type=int, default=2)
    qr.add_argument("--trials", type=int, default=10)
    qr.set_defaults(func=cmd_pqp_rank)
    return p


def run(argv) -> CommandResult:
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv))
        payload = args.func(args)
    except UsageError as exc:
        return CommandResult("error", {"error": "usage"}, str(exc), 2)
    except SystemExit as exc:  # --help
        code = 0 if exc.code in (0, None) else 2
        return CommandResult("ok" if code == 0 else "error", {}, "", code)
    except (HarmHullError, UnsupportedRegion, ValueError, np.linalg.LinAlgError) as exc:
        return CommandResult("error", {"error": type(exc).__name__}, str(exc), 1)
    return CommandResult("ok", payload, "", 0)


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    res = run(argv)
    if res.status == "ok" and res.payload == {} and ("-h" in argv or "--help" in argv):
        return 0
    print(res.to_json())
    if res.exit_code:
        print(res.message, file=sys.stderr)
    return res.exit_code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
