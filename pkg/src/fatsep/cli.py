"""Command-line driver.

    fatsep COMMAND SCHEME_FILE [--point I] [--rect D1 D2] [--field F]
                               [--seed S] [--format text|json]

Exit codes: 0 ok, 1 a mathematical check failed, 2 usage or input error,
3 a requested theorem check whose hypotheses do not hold.
"""
from __future__ import annotations

import argparse
import json
import sys

from .biring import Bidegree, dim_bigraded_piece
from .coeff import Field
from .scheme import (SchemeFormatError, check_index, ideal_piece_dim_oracle,
                     load_scheme, reduce_multiplicity, scheme_degree,
                     scheme_ideal, scheme_to_dict)
from .gbasis import minimal_generators
from .separator import (HypothesisError, acm_check, good_set_verdict,
                        hilbert_function, hilbert_relation_check,
                        minimal_separators, normalized, not_acm_from_degree,
                        separator_colon_check, separator_count_check,
                        stabilization_corner)
from .resol import (hilbert_from_betti, last_syzygy_separator_check,
                    minimal_free_resolution, rank_bound_check,
                    separator_chain_pdims)

COMMANDS = ("ideal", "degree", "hilbert", "separators", "good-check", "acm",
            "resolution", "verify")
NEEDS_POINT = ("degree", "separators", "good-check")

PASS, FAIL, SKIPPED = "PASS", "FAIL", "SKIPPED"


class UsageError(Exception):
    pass


def parse_scheme_file(path, field: Field | None = None):
    return load_scheme(path, field)


def _field_arg(text):
    if text.lower() in ("q", "qq", "rational", "rationals"):
        return Field.rationals()
    try:
        return Field.prime(int(text))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser():
    p = argparse.ArgumentParser(prog="fatsep", description="Separators of fat points in P^n x P^m.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("scheme", help="scheme file (YAML or JSON)")
    p.add_argument("--point", type=int, help="1-based index of the point P_i")
    p.add_argument("--rect", type=int, nargs=2, metavar=("D1", "D2"),
                   help="work on bidegrees (a, b) with a <= D1, b <= D2")
    p.add_argument("--field", type=_field_arg, metavar="F",
                   help="override the scheme's field: a prime, or 'rational'")
    p.add_argument("--seed", type=int, default=0, help="seed for all random choices")
    p.add_argument("--trials", type=int, default=3, help="random attempts in the ACM test")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--last-syzygy", action="store_true",
                   help="resolution: check separator degrees among the last shifts (needs --point)")
    p.add_argument("--rank-bound", action="store_true",
                   help="resolution: check the lower bound on the last rank")
    return p


# helpers -------------------------------------------------------------------------

def _field_name(F: Field) -> str:
    return f"GF({F.modulus})" if F.modulus else "QQ"


def _pairs(degs):
    return [list(d) for d in degs]


def _betti(res):
    out = []
    for k, mod in enumerate(res.modules):
        counts = {}
        for s in mod:
            counts[s] = counts.get(s, 0) + 1
        out.append({"degree": k, "rank": len(mod),
                    "shifts": [[s[0], s[1], c] for s, c in sorted(counts.items())]})
    return out


def default_rect(Z, points=None) -> Bidegree:
    """max(max separator degree + (2,2), stabilization corner)."""
    points = points or range(1, len(Z) + 1)
    a = b = 0
    for i in points:
        for d in minimal_separators(Z, i).degrees:
            a, b = max(a, d[0] + 2), max(b, d[1] + 2)
    k = stabilization_corner(Z)
    return Bidegree(max(a, k[0]), max(b, k[1]))


def _points(Z, args):
    if args.point is not None:
        return [check_index(Z, args.point)]
    return list(range(1, len(Z) + 1))


class _Acm:
    """Memoized ACM verdicts for Z and its reductions."""

    def __init__(self, seed, trials):
        self.seed, self.trials, self.cache = seed, trials, {}

    def __call__(self, Z):
        if Z not in self.cache:
            self.cache[Z] = acm_check(Z, self.trials, self.seed) if Z.items else None
        return self.cache[Z]

    def certified(self, Z):
        rep = self(Z)
        return rep is not None and rep.is_acm


# commands ------------------------------------------------------------------------

def cmd_ideal(Z, args, out):
    I = scheme_ideal(Z)
    out["degree"] = scheme_degree(Z)
    out["groebner_basis_size"] = len(I.groebner())
    out["generators"] = [str(g) for g in minimal_generators(I)]
    return 0


def cmd_degree(Z, args, out):
    S = minimal_separators(Z, args.point)
    out["point"] = args.point
    out["degrees"] = _pairs(S.degrees)
    return 0


def cmd_separators(Z, args, out):
    S = minimal_separators(Z, args.point)
    out["point"] = args.point
    out["separators"] = [str(f) for f in S.polys]
    out["degrees"] = _pairs(S.degrees)
    return 0


def cmd_hilbert(Z, args, out):
    rect = Bidegree(*args.rect) if args.rect else default_rect(Z)
    out["rect"] = list(rect)
    out["values"] = hilbert_function(Z, rect).values
    return 0


def _witness(w):
    return {"bidegree": list(w.t),
            "coeffs": {str(k + 1): str(c) for k, c in sorted(w.coeffs.items())},
            "combination": str(w.combination)}


def cmd_good_check(Z, args, out):
    out["point"] = args.point
    S = minimal_separators(Z, args.point)
    out["separators"] = [str(f) for f in S.polys]
    _, _, change = normalized(Z, S, args.seed)
    out["coordinates_changed"] = change is not None
    good, w = good_set_verdict(Z, args.point, S, args.seed)
    out["good"] = good
    out["witness"] = _witness(w) if w else None
    return 0


def _acm_dict(rep):
    return {"acm": rep.is_acm, "depth_lower_bound": rep.depth_lower_bound,
            "trials": rep.trials,
            "witness": [str(f) for f in rep.witness] if rep.witness else None}


def cmd_acm(Z, args, out):
    out.update(_acm_dict(acm_check(Z, args.trials, args.seed)))
    return 0


def cmd_resolution(Z, args, out):
    res = minimal_free_resolution(scheme_ideal(Z))
    out["pdim"] = res.length
    out["betti"] = _betti(res)
    checks = out["checks"] = []
    if args.last_syzygy:
        if args.point is None:
            raise UsageError("--last-syzygy needs --point")
        checks.append(_run("last-syzygy", args.point, last_syzygy_separator_check,
                           Z, args.point, seed=args.seed))
    if args.rank_bound:
        checks.append(_run("rank-bound", None, rank_bound_check, Z, seed=args.seed))
    statuses = [c["status"] for c in checks]
    if FAIL in statuses:
        return 1
    if SKIPPED in statuses:
        return 3
    return 0


def _check(name, point, ok, detail=None):
    return {"name": name, "point": point, "status": PASS if ok else FAIL, "detail": detail}


def _skip(name, point, why):
    return {"name": name, "point": point, "status": SKIPPED, "detail": f"hypothesis: {why}"}


def _run(name, point, fn, *a, **kw):
    try:
        return _check(name, point, fn(*a, **kw))
    except HypothesisError as exc:
        return _skip(name, point, str(exc))


def cmd_verify(Z, args, out):
    ring = Z.ring
    N = ring.n + ring.m
    points = _points(Z, args)
    acm = _Acm(args.seed, args.trials)
    rep = acm(Z)
    out["acm"] = _acm_dict(rep)
    rect = Bidegree(*args.rect) if args.rect else default_rect(Z, points)
    out["rect"] = list(rect)
    HZ = hilbert_function(Z, rect)
    out["hilbert"] = HZ.values
    checks = out["checks"] = []

    res = minimal_free_resolution(scheme_ideal(Z))
    out["pdim"] = res.length
    out["betti"] = _betti(res)
    checks.append(_check("pdim-vs-acm", None,
                         res.length in (N, N + 1) and (res.length == N) == rep.is_acm,
                         f"pdim {res.length}, N {N}"))
    grid = [(a, b) for a in range(rect[0] + 1) for b in range(rect[1] + 1)]
    checks.append(_check("hilbert-from-betti", None,
                         all(hilbert_from_betti(res, t) == HZ[t] for t in grid)))
    p = ring.field.characteristic
    if p and p <= max(Z.mults):
        checks.append(_skip("oracle", None, "characteristic not above the multiplicities"))
    else:
        checks.append(_check("oracle", None, all(
            dim_bigraded_piece(t, ring) - HZ[t] == ideal_piece_dim_oracle(Z, t) for t in grid)))

    per_point = out["points"] = []
    for i in points:
        Zp = reduce_multiplicity(Z, i)
        S = minimal_separators(Z, i)
        per_point.append({"point": i, "separators": [str(f) for f in S.polys],
                          "degrees": _pairs(S.degrees)})
        drop = scheme_degree(Z) - scheme_degree(Zp)
        detail = f"{len(S.polys)} separators, deg Z - deg Z' = {drop}"
        checks.append(_check("degree-count-consistency", i,
                             not (rep.is_acm and not_acm_from_degree(Z, i)), detail))
        good, w = good_set_verdict(Z, i, S, args.seed)
        gdetail = {"good": good, "witness": _witness(w) if w else None}
        if rep.is_acm:
            checks.append(_check("good-set", i, good, gdetail))
        else:
            entry = _skip("good-set", i, "Z is not certified ACM")
            entry["verdict"] = gdetail
            checks.append(entry)
        checks.append(_run("separator-count", i, separator_count_check, Z, i, seed=args.seed))
        checks.append(_run("hilbert-relation", i, hilbert_relation_check, Z, i, rect,
                           seed=args.seed))
        if rep.is_acm and good:
            checks.append(_check("colon", i, separator_colon_check(Z, i, S)))
        else:
            checks.append(_skip("colon", i, "needs Z ACM and a good separator set"))
        both = rep.is_acm and (not Zp.items or acm.certified(Zp))
        if both:
            checks.append(_run("intermediate-pdim", i,
                               lambda: all(d == N for d in separator_chain_pdims(Z, i, args.seed))))
            checks.append(_run("last-syzygy", i, last_syzygy_separator_check, Z, i,
                               seed=args.seed))
        else:
            why = "Z and Z' must both be certified ACM"
            checks.append(_skip("intermediate-pdim", i, why))
            checks.append(_skip("last-syzygy", i, why))
    M = max(Z.mults)
    Zm = reduce_multiplicity(Z, Z.mults.index(M) + 1)
    if rep.is_acm and (not Zm.items or acm.certified(Zm)):
        checks.append(_run("rank-bound", None, rank_bound_check, Z, seed=args.seed))
    else:
        checks.append(_skip("rank-bound", None, "Z and Z' must both be certified ACM"))
    return 1 if any(c["status"] == FAIL for c in checks) else 0


HANDLERS = {
    "ideal": cmd_ideal, "degree": cmd_degree, "hilbert": cmd_hilbert,
    "separators": cmd_separators, "good-check": cmd_good_check, "acm": cmd_acm,
    "resolution": cmd_resolution, "verify": cmd_verify,
}


# output ----------------------------------------------------------------------------

def _text(out) -> str:
    lines = [f"scheme: {out['scheme_text']}  over {out['field']}  (seed {out['seed']})"]
    cmd = out["command"]
    if cmd == "ideal":
        lines.append(f"deg Z = {out['degree']}, Groebner basis of size {out['groebner_basis_size']}")
        lines += ["  " + g for g in out["generators"]]
    if cmd in ("degree", "separators"):
        lines.append(f"deg_Z(P_{out['point']}) = "
                     + "(" + ",".join(f"({a},{b})" for a, b in out["degrees"]) + ")")
    if cmd == "separators":
        lines += [f"  {f}" for f in out["separators"]]
    if cmd == "hilbert" or (cmd == "verify" and "hilbert" in out):
        vals = out["values"] if cmd == "hilbert" else out["hilbert"]
        width = max(len(str(v)) for row in vals for v in row)
        lines.append(f"Hilbert function on [0..{out['rect'][0]}] x [0..{out['rect'][1]}]:")
        lines += [" ".join(str(v).rjust(width) for v in row) for row in vals]
    if cmd == "good-check":
        lines.append(f"P_{out['point']} separators: " + ", ".join(out["separators"]))
        lines.append("good set" if out["good"] else "not a good set")
        if out["witness"]:
            w = out["witness"]
            lines.append(f"dependence at ({w['bidegree'][0]},{w['bidegree'][1]}): {w['combination']}")
        if out["coordinates_changed"]:
            lines.append("(checked after a random linear change of coordinates)")
    if cmd in ("acm", "verify"):
        a = out if cmd == "acm" else out["acm"]
        lines.append("ACM: " + ("yes, regular sequence " + ", ".join(a["witness"])
                                if a["acm"] else f"not certified in {a['trials']} trials"))
    if cmd in ("resolution", "verify"):
        lines.append(f"pdim = {out['pdim']}")
        for row in out["betti"]:
            shifts = ", ".join(f"({a},{b})" + (f"^{c}" if c > 1 else "")
                               for a, b, c in row["shifts"])
            lines.append(f"  F_{row['degree']}: rank {row['rank']}: {shifts}")
    if cmd == "verify":
        for pt in out["points"]:
            lines.append(f"P_{pt['point']}: " + ", ".join(pt["separators"]))
    for c in out.get("checks", []):
        where = f" P_{c['point']}" if c["point"] else ""
        detail = c["detail"]
        if isinstance(detail, dict):
            detail = "good" if detail["good"] else "not good"
        lines.append(f"{c['status']:8} {c['name']}{where}" + (f"  [{detail}]" if detail else ""))
    return "\n".join(lines)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        Z = parse_scheme_file(args.scheme, args.field)
        if args.command in NEEDS_POINT and args.point is None:
            raise UsageError(f"{args.command} needs --point")
        if args.point is not None:
            check_index(Z, args.point)
        if args.rect and min(args.rect) < 0:
            raise UsageError("--rect needs nonnegative entries")
        out = {"command": args.command, "scheme": scheme_to_dict(Z),
               "scheme_text": str(Z), "field": _field_name(Z.ring.field), "seed": args.seed}
        code = HANDLERS[args.command](Z, args, out)
    except (SchemeFormatError, UsageError, IndexError, OSError) as exc:
        print(f"fatsep: error: {exc}", file=sys.stderr)
        return 2
    except HypothesisError as exc:
        print(f"fatsep: hypothesis not met: {exc}", file=sys.stderr)
        return 3
    if args.format == "json":
        print(json.dumps(out, indent=2, sort_keys=True))
    else:
        print(_text(out))
    return code


if __name__ == "__main__":
    sys.exit(main())
