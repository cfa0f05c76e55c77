"""Command-line interface.

Subcommands: levels, eval, verify, expansion, sumrule, figure, report.
Space descriptors use the family:dim grammar (sphere:3, hemisphere-d:2,
rp:3, cp:4, hp:8, cayley:16, circle).  Exit codes: 0 on success, 1 when a
verification produced an unexpected result, 2 on usage errors.  All files
are written atomically; numbers print with 17 significant digits.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional

from . import bounds, report, scan, sumrules
from .riesz import (SpectrumQuery, counting, counting_closed_hemisphere_dirichlet,
                    counting_closed_hemisphere_neumann, counting_closed_sphere,
                    riesz1_closed_sphere, riesz_mean)
from .output import (dumps_json, fmt_number, table_csv, atomic_write,
                     write_json, write_series_csv, write_series_svg)
from .scan import GridPolicy, Series
from .spaces import Family, Space, energy_level, eigenvalue, \
    is_space_descriptor, max_level_index, parse_space
from .weyl import expansion


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    """Resolved run configuration shared by the space-and-grid commands.

    Descriptors map bijectively onto Space values; tolerances are positive.
    """

    space: Space
    power: int = 1
    gamma: Optional[int] = None
    zmin: float = 0.0
    zmax: Optional[float] = None
    points: int = 200
    grid: GridPolicy = GridPolicy.UNIFORM_IN_Z
    tol: float = 1e-9

    def __post_init__(self):
        if self.tol <= 0:
            raise UsageError("tolerance must be positive")
        if self.power < 1:
            raise UsageError("power must be >= 1")


def _shift_nonspace_positional(args, *targets: str):
    """Move a greedy positional along when the space came via --space.

    `targets` are the following positional attributes in order; the first
    empty one receives the token (list-valued targets are prepended to).
    """
    token = getattr(args, "space", None)
    # Colon-bearing tokens are space-descriptor attempts even when the
    # family is unknown; only clearly non-space tokens move along.
    if token is None or ":" in token or is_space_descriptor(token):
        return
    for name in targets:
        current = getattr(args, name, None)
        if isinstance(current, list):
            setattr(args, name, [token] + current)
            args.space = None
            return
        if current is None:
            setattr(args, name, token)
            args.space = None
            return
    raise UsageError(f"unexpected argument {token!r}")


def _resolve_space(args, required: bool = True) -> Optional[Space]:
    """Positional descriptor and --space flag are interchangeable."""
    positional = getattr(args, "space", None)
    flag = getattr(args, "space_flag", None)
    if positional and flag and positional != flag:
        raise UsageError("conflicting space given positionally and via --space")
    descriptor = positional or flag
    if descriptor is None:
        if required:
            raise UsageError("a space descriptor is required "
                             "(positionally or via --space)")
        return None
    return _parse_space_arg(descriptor)


def _config(args, space: Space) -> RunConfig:
    return RunConfig(space=space,
                     power=getattr(args, "power", 1) or 1,
                     gamma=getattr(args, "gamma", None),
                     zmin=getattr(args, "zmin", 0.0),
                     zmax=getattr(args, "zmax", None),
                     points=getattr(args, "points", 200),
                     grid=GridPolicy(getattr(args, "grid",
                                             GridPolicy.UNIFORM_IN_Z.value)),
                     tol=getattr(args, "tol", 1e-9))


def _parse_space_arg(descriptor: str) -> Space:
    try:
        return parse_space(descriptor)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _write_output(path: Optional[str], text: str):
    if path:
        atomic_write(path, text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# levels


def cmd_levels(args) -> int:
    space = _resolve_space(args)
    rows = []
    for l in range(space.min_level, args.lmax + 1):
        lev = energy_level(space, l)
        rows.append((lev.l, lev.lam, lev.mult))
    if args.format == "json":
        obj = [{"l": r[0], "lambda": r[1], "mult": str(r[2])} for r in rows]
        text = dumps_json(obj) + "\n"
    else:
        text = table_csv(("l", "lambda", "mult"), rows)
    _write_output(args.out, text)
    return 0


# ---------------------------------------------------------------------------
# eval


def _closed_form(space: Space, power: int, quantity: str, z: float):
    if power != 1:
        return None
    fam = space.family
    if quantity == "N":
        L = max_level_index(space, z)
        if fam is Family.SPHERE:
            return counting_closed_sphere(space.dim, L)
        if fam is Family.HEMISPHERE_DIRICHLET:
            return counting_closed_hemisphere_dirichlet(space.dim, L)
        if fam is Family.HEMISPHERE_NEUMANN:
            return counting_closed_hemisphere_neumann(space.dim, L)
    if quantity == "R1" and fam is Family.SPHERE:
        return riesz1_closed_sphere(space.dim, z)
    return None


def _grid_from_args(space: Space, args) -> List[float]:
    if getattr(args, "z", None):
        try:
            return [float(Fraction(t)) for t in args.z.split(",")]
        except ValueError:
            raise UsageError(f"bad z list {args.z!r}") from None
    cfg = _config(args, space)
    zmin, zmax, n = cfg.zmin, cfg.zmax, cfg.points
    if zmax is None:
        zmax = float(eigenvalue(space, space.min_level + 39))
    if zmin < 0 or zmax <= zmin or n < 2:
        raise UsageError("need 0 <= zmin < zmax and points >= 2")
    policy = cfg.grid
    if policy is GridPolicy.UNIFORM_IN_Z:
        return [zmin + (zmax - zmin) * i / (n - 1) for i in range(n)]
    if policy is GridPolicy.UNIFORM_IN_W:
        from .spaces import invert_w
        wlo, whi = invert_w(space.dim, zmin), invert_w(space.dim, zmax)
        ws = [wlo + (whi - wlo) * i / (n - 1) for i in range(n)]
        return [w * (w + space.dim - 1) for w in ws]
    pts = []
    l = space.min_level
    while eigenvalue(space, l) <= zmax:
        lam, nxt = eigenvalue(space, l), eigenvalue(space, l + 1)
        if lam >= zmin:
            pts.append(float(lam))
        mid = (lam + nxt) / 2
        if zmin <= mid <= zmax:
            pts.append(mid)
        l += 1
    return pts


def cmd_eval(args) -> int:
    _shift_nonspace_positional(args, "quantity")
    space = _resolve_space(args)
    if args.quantity is None and args.gamma is None:
        raise UsageError("give a quantity (N, R1, R2) or --gamma {0,1,2}")
    if args.quantity is not None:
        quantity = args.quantity.upper()
    else:
        quantity = {0: "N", 1: "R1", 2: "R2"}.get(args.gamma)
    if quantity not in ("N", "R1", "R2"):
        raise UsageError("quantity must be N, R1 or R2 (gamma 0, 1 or 2)")
    cfg = _config(args, space)
    q = SpectrumQuery(space, power=cfg.power)
    rows = []
    for z in _grid_from_args(space, args):
        if quantity == "N":
            brute = counting(q, z)
        else:
            brute = riesz_mean(q, 1 if quantity == "R1" else 2, z)
        closed = _closed_form(space, args.power, quantity, z)
        rows.append((z, brute, "" if closed is None else closed))
    if args.format == "json":
        obj = [{"z": r[0], "brute_force": fmt_number(r[1]),
                "closed_form": fmt_number(r[2]) if r[2] != "" else None}
               for r in rows]
        text = dumps_json(obj) + "\n"
    else:
        text = table_csv(("z", "brute_force", "closed_form"), rows)
    _write_output(args.out, text)
    return 0


# ---------------------------------------------------------------------------
# verify


def _entry_params(spec, space: Optional[Space], args) -> Optional[dict]:
    """Parameter dicts an entry might accept, derived from CLI arguments."""
    opts = []
    extra = {}
    if getattr(args, "area", None) is not None:
        extra["area"] = args.area
    d = {"d": space.dim} if space else {}
    p = {"p": args.power} if getattr(args, "power", None) else {}
    sp = {"space": space} if space else {}
    for cand in ({**d, **p, **extra}, {**d, **extra}, {**p, **extra},
                 {**sp}, {**extra}, {}):
        if cand not in opts:
            opts.append(cand)
    for cand in opts:
        try:
            spec.validate(dict(cand))
            return cand
        except (ValueError, KeyError):
            continue
    return None


def _query_matches(spec, params, space: Optional[Space]) -> bool:
    if space is None:
        return True
    try:
        q = spec.query(spec.validate(dict(params)))
    except Exception:
        return False
    return q.space.family is space.family and q.space.dim == space.dim


def cmd_verify(args) -> int:
    _shift_nonspace_positional(args, "ids")
    space = _resolve_space(args, required=False)
    ids = list(args.ids)
    if not ids:
        raise UsageError("give bound ids or 'all'")
    if ids == ["all"]:
        ids = sorted(bounds.catalog())
        selected = []
        for bid in ids:
            spec = bounds.get(bid)
            prm = _entry_params(spec, space, args)
            if prm is not None and _query_matches(spec, prm, space):
                selected.append((bid, prm))
        if not selected:
            raise UsageError("no catalog entries match the given space")
    else:
        selected = []
        for bid in ids:
            try:
                spec = bounds.get(bid)
            except KeyError as exc:
                raise UsageError(str(exc)) from None
            prm = _entry_params(spec, space, args)
            if prm is None:
                raise UsageError(f"cannot assemble parameters for {bid} "
                                 f"from the command line")
            selected.append((bid, prm))

    all_ok = True
    for bid, prm in selected:
        rep = bounds.verify(bid, prm, zmax=args.zmax, points=args.points,
                            tol=args.tol)
        all_ok &= rep.passed
        status = "ok" if rep.passed else "UNEXPECTED"
        summary = "; ".join(
            f"{s.side}: min slack {fmt_number(s.min_slack)} at "
            f"z={fmt_number(s.argmin_z)}"
            + (f", first witness z={fmt_number(s.first_witness.z)}"
               if s.first_witness else "")
            for s in rep.sides)
        print(f"{rep.bound_id} [{status}] expected_valid="
              f"{rep.expected_valid} {summary}")
        if args.out:
            safe = rep.bound_id.replace("/", "_").replace("≥", ">=")
            write_json(os.path.join(args.out, f"verify-{safe}.json"),
                       rep.to_dict())
    return 0 if all_ok else 1


# ---------------------------------------------------------------------------
# expansion


def cmd_expansion(args) -> int:
    _shift_nonspace_positional(args, "quantity")
    space = _resolve_space(args)
    if args.quantity is None:
        raise UsageError("a quantity (N or R1) is required")
    quantity = args.quantity.upper()
    zs = [z for z in _grid_from_args(space, args) if z > 0]
    pts = []
    for z in zs:
        ev = expansion(space, quantity, z, args.terms)
        pts.append((z, ev.value))
    series = Series(f"{quantity}:{space.describe()}:{args.terms}-term",
                    tuple(pts), GridPolicy(args.grid))
    _emit_series([series], args)
    return 0


def _emit_series(series_list, args):
    if args.out:
        base, fmt = args.out, args.format
        if fmt in ("csv", "both") or fmt is None:
            write_series_csv(base if base.endswith(".csv")
                             else base + ".csv", series_list)
        if fmt in ("svg", "both"):
            write_series_svg(base if base.endswith(".svg")
                             else base + ".svg", series_list)
    else:
        from .output import series_csv
        sys.stdout.write(series_csv(series_list))


# ---------------------------------------------------------------------------
# sumrule


def cmd_sumrule(args) -> int:
    _shift_nonspace_positional(args, "kind")
    space = _resolve_space(args)
    kind = args.kind
    if kind is None:
        raise UsageError("a sum-rule kind is required: pq, trace or r2")
    if kind == "pq":
        rep = sumrules.check_pq_identity(space, args.lmax or 30)
        print(f"pq {space.describe()}: {len(rep.gap_indices)} gap indices, "
              f"{'exact equality' if rep.passed else 'MISMATCH'}")
        return 0 if rep.passed else 1
    if kind == "trace":
        rep = sumrules.trace_identity_partial(space, args.lmax or 1000)
        print(f"trace {space.describe()}: partial sum "
              f"{fmt_number(rep.partial_sum)} -> target "
              f"{fmt_number(rep.target)}; tail estimate "
              f"{fmt_number(rep.tail_estimate)}; "
              f"{'within tail' if rep.within_tail else 'OUTSIDE TAIL'}")
        return 0 if rep.within_tail else 1
    if kind == "r2":
        lmax = args.lmax or 40
        zmax = float(eigenvalue(space, lmax))
        grid = [zmax * i / 2000 for i in range(2001)]
        rep = sumrules.r2_bounds_check(space, grid)
        print(f"r2 {space.describe()}: min lower slack "
              f"{fmt_number(rep.min_lower_slack)}, min upper slack "
              f"{fmt_number(rep.min_upper_slack)}, "
              f"{'ok' if rep.passed else 'VIOLATION'}")
        return 0 if rep.passed else 1
    raise UsageError(f"unknown sumrule kind {kind!r}")


# ---------------------------------------------------------------------------
# figure and report


def cmd_figure(args) -> int:
    series = scan.figure(args.fig_id, resolution=args.resolution,
                         l_max=args.lmax or scan.DEFAULT_LEVEL_RANGE)
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        base = os.path.join(args.out, args.fig_id)
        write_series_csv(base + ".csv", series)
        if args.format in ("svg", "both"):
            write_series_svg(base + ".svg", series)
        print(f"wrote {base}.csv"
              + (f" and {base}.svg" if args.format in ("svg", "both") else ""))
    else:
        _emit_series(series, args)
    return 0


def cmd_report(args) -> int:
    rep = report.run_acceptance()
    for line in rep.lines():
        print(line)
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        atomic_write(os.path.join(args.out, "acceptance.md"),
                     rep.to_markdown())
        write_json(os.path.join(args.out, "acceptance.json"), rep.to_dict())
    return 0 if rep.passed else 1


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="spectral-riesz",
        description="Exact eigenvalue counting functions, Riesz-means and "
                    "sharp spectral bounds on spheres, hemispheres and "
                    "projective spaces.")
    sub = ap.add_subparsers(dest="command", required=True)

    def add_grid_flags(p):
        p.add_argument("--z", help="comma-separated z values")
        p.add_argument("--zmin", type=float, default=0.0)
        p.add_argument("--zmax", type=float, default=None)
        p.add_argument("--points", type=int, default=200)
        p.add_argument("--grid", default="uniform-in-z",
                       choices=[g.value for g in GridPolicy])

    p = sub.add_parser("levels", help="tabulate (l, lambda, multiplicity)")
    p.add_argument("space", nargs="?")
    p.add_argument("--space", dest="space_flag")
    p.add_argument("--lmax", type=int, default=20)
    p.add_argument("--format", default="csv", choices=("csv", "json"))
    p.add_argument("--out")
    p.set_defaults(func=cmd_levels)

    p = sub.add_parser("eval", help="evaluate N/R1/R2, brute force vs closed")
    p.add_argument("space", nargs="?")
    p.add_argument("quantity", nargs="?", help="N, R1 or R2")
    p.add_argument("--space", dest="space_flag")
    p.add_argument("--gamma", type=int, choices=(0, 1, 2),
                   help="Riesz order (alternative to the quantity name)")
    p.add_argument("--power", type=int, default=1)
    add_grid_flags(p)
    p.add_argument("--format", default="csv", choices=("csv", "json"))
    p.add_argument("--out")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("verify", help="verify catalog bounds on a grid")
    p.add_argument("space", nargs="?", default=None)
    p.add_argument("ids", nargs="*", default=[], help="bound ids, or 'all'")
    p.add_argument("--space", dest="space_flag")
    p.add_argument("--power", type=int, default=None)
    p.add_argument("--area", type=float, default=None)
    p.add_argument("--zmax", type=float, default=None)
    p.add_argument("--points", type=int, default=2000)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--out", help="directory for JSON reports")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("expansion", help="truncated semiclassical expansion")
    p.add_argument("space", nargs="?")
    p.add_argument("quantity", nargs="?", help="N or R1")
    p.add_argument("--space", dest="space_flag")
    p.add_argument("--terms", type=int, default=3)
    add_grid_flags(p)
    p.add_argument("--format", default="csv", choices=("csv", "svg", "both"))
    p.add_argument("--out")
    p.set_defaults(func=cmd_expansion)

    p = sub.add_parser("sumrule", help="P/Q identity, trace series, R2 bounds")
    p.add_argument("space", nargs="?")
    p.add_argument("kind", nargs="?", help="pq, trace or r2")
    p.add_argument("--space", dest="space_flag")
    p.add_argument("--lmax", type=int, default=None)
    p.set_defaults(func=cmd_sumrule)

    p = sub.add_parser("figure", help="emit the data behind figures f1..f10")
    p.add_argument("fig_id")
    p.add_argument("--resolution", type=int,
                   default=scan.DEFAULT_POINTS_PER_INTERVAL)
    p.add_argument("--lmax", type=int, default=None)
    p.add_argument("--format", default="both", choices=("csv", "svg", "both"))
    p.add_argument("--out")
    p.set_defaults(func=cmd_figure)

    p = sub.add_parser("report", help="run the full acceptance suite")
    p.add_argument("--out", help="directory for acceptance.md/.json")
    p.set_defaults(func=cmd_report)
    return ap


def main(argv: Optional[List[str]] = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
