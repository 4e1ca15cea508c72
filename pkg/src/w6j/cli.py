"""Command-line front end.

Usage:
    w6j exact 1 1 1 1 1 1            # exact {1 1 1; 1 1 1}
    w6j compare 9/2 3 11/2 6 9/2     # exact vs Ponzano-Regge over j23
    w6j region 9/2 3 11/2 6          # region grid over the (J12, J23) square
    w6j caustic 9/2 3 11/2 6         # flat-tetrahedron polyline
    w6j sphere 9/2 3 11/2 6          # level curves on the reduced sphere
    w6j network tetra.json           # evaluate a closed spin network
    w6j selftest                     # quick property checks
"""

from __future__ import annotations

import csv
import io
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor

import click

from . import __version__
from .errors import DomainError, EmptyLevelSet, NotAllowed, ParseError, ResourceLimit, ValidationError
from .exact import HalfInt, to_decimal, to_float
from .geometry import (
    classical_j12_range,
    classical_j23_range,
    classify_region,
    polygon_inequality,
)
from .kmsphere import KMPoint, caustic_curve, level_curve, observable_range, sphere_xyz
from .network import evaluate_closed, parse, serialize, to_standard_form
from .semiclassical import QuantizedLengths, ponzano_regge
from .symbols import JQuad, SixJArgs, j12_bounds, j23_bounds, six_j

EXIT_USAGE = 2
EXIT_DOMAIN = 3
EXIT_RESOURCE = 4

COMPARE_COLUMNS = ["j23", "exact", "pr", "abs_err", "rel_err", "region"]


class SpinParam(click.ParamType):
    """Accepts ``3``, ``3/2`` or ``1.5``."""

    name = "spin"

    def convert(self, value, param, ctx):
        if isinstance(value, HalfInt):
            return value
        try:
            h = HalfInt.parse(str(value))
        except (ValueError, ZeroDivisionError, DomainError) as exc:
            self.fail(f"{value!r} is not a half-integer ({exc})", param, ctx)
        if h.twice < 0:
            self.fail(f"{value!r} is negative", param, ctx)
        return h


class LengthParam(click.ParamType):
    name = "length"

    def convert(self, value, param, ctx):
        try:
            x = float(value) if "/" not in str(value) else float(HalfInt.parse(value).value)
        except ValueError:
            self.fail(f"{value!r} is not a number", param, ctx)
        if not math.isfinite(x) or x < 0:
            self.fail(f"{value!r} must be a nonnegative finite number", param, ctx)
        return x


SPIN = SpinParam()
LENGTH = LengthParam()

format_option = click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv",
                             show_default=True, help="Output format.")
grid_option = click.option("--grid", type=click.IntRange(min=8), default=64, show_default=True,
                           help="Grid resolution (at least 8).")
parallel_option = click.option("--parallel", type=click.IntRange(min=1), default=1, show_default=True,
                               help="Worker processes; row order never changes.")
classical_option = click.option("--classical", is_flag=True,
                                help="Read the four arguments as lengths J instead of spins j.")


def _num(x) -> str:
    # repr of a float is the shortest string that round-trips
    return repr(float(x))


def _emit_csv(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow(r)
    click.echo(buf.getvalue(), nl=False)


def _emit_json(doc):
    click.echo(json.dumps(doc, indent=2, ensure_ascii=False))


def _pmap(fn, items, workers):
    if workers <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items, chunksize=max(1, len(items) // (4 * workers))))


def _lengths(args, classical):
    if classical:
        return tuple(LENGTH.convert(a, None, None) for a in args)
    return tuple(float(SPIN.convert(a, None, None).value) + 0.5 for a in args)


def _fail(code, msg):
    click.echo(f"error: {msg}", err=True)
    sys.exit(code)


@click.group()
@click.version_option(__version__, prog_name="w6j")
def main():
    """Exact 6j symbols, spin networks and their semiclassical geometry."""


@main.command()
@click.argument("j", nargs=6, type=SPIN)
@click.option("--oracle", is_flag=True, help="Use the explicit m-sum instead of the Racah sum.")
@click.option("--precision", type=click.IntRange(min=53), default=53, show_default=True,
              help="Bits of precision for the decimal expansion.")
@click.option("--pr", "with_pr", is_flag=True, help="Also print the Ponzano-Regge estimate.")
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text", show_default=True)
def exact(j, oracle, precision, with_pr, fmt):
    """Exact value of {j1 j2 j12; j3 j4 j23}."""
    args = SixJArgs(*j)
    try:
        val = six_j(args, oracle=oracle)
    except ResourceLimit as exc:
        _fail(EXIT_RESOURCE, str(exc))
    pr = None
    if with_pr:
        q = QuantizedLengths(args.j1, args.j2, args.j3, args.j4, args.j12, args.j23)
        try:
            pr = ponzano_regge(q)
        except NotAllowed as exc:
            _fail(EXIT_DOMAIN, f"no Ponzano-Regge value: {exc}")
    digits = max(17, int(precision * math.log10(2)) + 1)
    if fmt == "json":
        doc = {
            "args": [str(x) for x in args],
            "value": str(val),
            "coef": str(val.coef),
            "radicand": str(val.radicand),
            "float": to_float(val),
            "decimal": to_decimal(val, digits),
            "method": "msum" if oracle else "racah",
        }
        if pr is not None:
            doc["pr"] = {"value": pr.value, "volume": pr.volume, "psi": float(pr.psi),
                         "unreliable": pr.unreliable}
        _emit_json(doc)
        return
    if val.is_zero():
        click.echo("0")
    else:
        f = to_float(val)
        click.echo(f"{val} ≈ {f:.6g}")
        if precision > 53:
            click.echo(to_decimal(val, digits))
    if pr is not None:
        click.echo(f"ponzano-regge ≈ {pr.value:.6g}" + ("  (near caustic)" if pr.unreliable else ""))


def _compare_row(item):
    j1, j2, j3, j4, j12, j23, oracle = item
    args = SixJArgs(j1, j2, j12, j3, j4, j23)
    val = six_j(args, oracle=oracle)
    ex = to_float(val)
    Ls = [float(x.value) + 0.5 for x in (j1, j2, j3, j4, j12, j23)]
    region = classify_region(*Ls)
    pr = abs_err = rel_err = None
    if region == "A":
        try:
            pr = ponzano_regge(QuantizedLengths(j1, j2, j3, j4, j12, j23)).value
        except NotAllowed:
            pr = None
    if pr is not None:
        abs_err = abs(pr - ex)
        rel_err = abs_err / abs(ex) if ex else None
    return {"j23": str(j23), "exact": ex, "exact_str": str(val), "pr": pr,
            "abs_err": abs_err, "rel_err": rel_err, "region": region}


def compare_rows(quad: JQuad, j12: HalfInt, oracle=False, parallel=1) -> list:
    lo, hi = j23_bounds(quad)
    items = []
    t = lo.twice
    while t <= hi.twice:
        items.append((quad.j1, quad.j2, quad.j3, quad.j4, j12, HalfInt(t), oracle))
        t += 2
    return _pmap(_compare_row, items, parallel)


@main.command()
@click.argument("quad", nargs=4, type=SPIN)
@click.argument("j12", type=SPIN)
@click.option("--oracle", is_flag=True, help="Exact values from the m-sum.")
@format_option
@parallel_option
def compare(quad, j12, oracle, fmt, parallel):
    """Exact vs Ponzano-Regge for every j23 at fixed (j1 j2 j3 j4) and j12."""
    q = JQuad(*quad)
    lo, hi = j12_bounds(q)
    if lo > hi or not (lo <= j12 <= hi) or (j12.twice - lo.twice) % 2:
        _fail(EXIT_DOMAIN, f"j12 = {j12} is not an allowed coupling of this quad")
    try:
        rows = compare_rows(q, j12, oracle, parallel)
    except ResourceLimit as exc:
        _fail(EXIT_RESOURCE, str(exc))
    if fmt == "json":
        _emit_json({"quad": [str(x) for x in q], "j12": str(j12), "columns": COMPARE_COLUMNS,
                    "rows": [{k: r[k] for k in COMPARE_COLUMNS} for r in rows]})
        return

    def cell(x):
        return "" if x is None else (x if isinstance(x, str) else _num(x))

    _emit_csv(COMPARE_COLUMNS, [[cell(r[k]) for k in COMPARE_COLUMNS] for r in rows])


def _quantized_spots(Ls):
    """Quantized (J12, J23) pairs when the lengths are all half-odd-integers."""
    js = []
    for L in Ls:
        t = 2 * L - 1
        if abs(t - round(t)) > 1e-12 or round(t) < 0:
            return []
        js.append(HalfInt(int(round(t))))
    q = JQuad(*js)
    out = []
    lo12, hi12 = j12_bounds(q)
    lo23, hi23 = j23_bounds(q)
    for a in range(lo12.twice, hi12.twice + 1, 2):
        for b in range(lo23.twice, hi23.twice + 1, 2):
            out.append((a / 2 + 0.5, b / 2 + 0.5))
    return out


def _region_row(item):
    Ls, J12, J23 = item
    return classify_region(*Ls, J12, J23)


@main.command()
@click.argument("quad", nargs=4)
@classical_option
@grid_option
@format_option
@parallel_option
def region(quad, classical, grid, fmt, parallel):
    """Classify a grid over the (J12, J23) square, plus the quantized spots."""
    Ls = _lengths(quad, classical)
    if not polygon_inequality(*Ls):
        _fail(EXIT_DOMAIN, "the four lengths violate the polygon inequality")
    lo12, hi12 = classical_j12_range(*Ls)
    lo23, hi23 = classical_j23_range(*Ls)
    pts = []
    for a in range(grid):
        for b in range(grid):
            pts.append((lo12 + (hi12 - lo12) * a / (grid - 1), lo23 + (hi23 - lo23) * b / (grid - 1), "grid"))
    pts += [(x, y, "spot") for x, y in _quantized_spots(Ls)]
    regions = _pmap(_region_row, [(Ls, x, y) for x, y, _ in pts], parallel)
    rows = [(x, y, r, kind) for (x, y, kind), r in zip(pts, regions)]
    if fmt == "json":
        _emit_json({"lengths": list(Ls), "j12_range": [lo12, hi12], "j23_range": [lo23, hi23], "grid": grid,
                    "points": [{"J12": x, "J23": y, "region": r, "kind": k} for x, y, r, k in rows]})
        return
    _emit_csv(["J12", "J23", "region", "kind"], [[_num(x), _num(y), r, k] for x, y, r, k in rows])


@main.command()
@click.argument("quad", nargs=4)
@classical_option
@grid_option
@format_option
def caustic(quad, classical, grid, fmt):
    """The caustic oval (flat tetrahedra) in the (J12, J23) plane."""
    Ls = _lengths(quad, classical)
    if not polygon_inequality(*Ls):
        _fail(EXIT_DOMAIN, "the four lengths violate the polygon inequality")
    pts = caustic_curve(Ls, 2 * grid)
    if fmt == "json":
        _emit_json({"lengths": list(Ls), "points": [[x, y] for x, y in pts]})
        return
    _emit_csv(["J12", "J23"], [[_num(x), _num(y)] for x, y in pts])


def _levels(Ls, obs, count):
    lo, hi = observable_range(Ls, obs)
    spots = _quantized_spots(Ls)
    if spots and obs in ("J12", "J23"):
        k = 0 if obs == "J12" else 1
        return sorted({s[k] for s in spots})
    if obs == "V":
        hi = max(abs(lo), abs(hi))
        lo = -hi
    return [lo + (hi - lo) * (i + 0.5) / count for i in range(count)]


@main.command()
@click.argument("quad", nargs=4)
@classical_option
@grid_option
@click.option("--observable", type=click.Choice(["all", "J12", "J23", "J13", "V"]), default="all",
              show_default=True)
@click.option("--levels", type=click.IntRange(min=1), default=7, show_default=True,
              help="Level count for observables without quantized values.")
@format_option
def sphere(quad, classical, grid, observable, levels, fmt):
    """Level curves of J12, J23, J13 and V as polylines on the unit sphere."""
    Ls = _lengths(quad, classical)
    if not polygon_inequality(*Ls):
        _fail(EXIT_DOMAIN, "the four lengths violate the polygon inequality")
    obs_list = ["J12", "J23", "J13", "V"] if observable == "all" else [observable]
    curves = []
    for obs in obs_list:
        for lev in _levels(Ls, obs, levels):
            try:
                pts = level_curve(Ls, obs, lev, grid)
            except EmptyLevelSet:
                continue
            curves.append((obs, lev, [sphere_xyz(Ls, KMPoint(*p)) for p in pts]))
    if fmt == "json":
        _emit_json({"lengths": list(Ls), "curves": [
            {"observable": o, "level": lev, "points": [list(p) for p in pts]} for o, lev, pts in curves]})
        return
    rows = []
    for o, lev, pts in curves:
        for i, (x, y, z) in enumerate(pts):
            rows.append([o, _num(lev), str(i), _num(x), _num(y), _num(z)])
    _emit_csv(["observable", "level", "index", "x", "y", "z"], rows)


@main.command()
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.option("--standardize", is_flag=True, help="Print the standard-form network instead.")
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text", show_default=True)
def network(path, standardize, fmt):
    """Evaluate a closed spin network stored as JSON."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        net = parse(text)
    except ParseError as exc:
        _fail(EXIT_USAGE, f"{path}:{exc.line}:{exc.column}: {exc}")
    except ValidationError as exc:
        _fail(EXIT_USAGE, f"{path}: invalid network: {exc}")
    if standardize:
        click.echo(serialize(to_standard_form(net)), nl=False)
        return
    try:
        val = evaluate_closed(net)
    except ValidationError as exc:
        _fail(EXIT_USAGE, f"{path}: {exc}")
    except ResourceLimit as exc:
        _fail(EXIT_RESOURCE, str(exc))
    if fmt == "json":
        _emit_json({"value": str(val), "float": to_float(val)})
    elif val.is_zero():
        click.echo("0")
    else:
        click.echo(f"{val} ≈ {to_float(val):.6g}")


@main.command()
def selftest():
    """Run a handful of fast consistency checks and report each one."""
    from .selfcheck import run_checks

    results = run_checks()
    for name, ok, detail in results:
        click.echo(f"{'PASS' if ok else 'FAIL'}  {name}" + (f"  ({detail})" if detail else ""))
    if not all(ok for _, ok, _ in results):
        sys.exit(1)


if __name__ == "__main__":
    main()
