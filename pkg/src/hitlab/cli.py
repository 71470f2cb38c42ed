"""Command line front end: ``hitlab <command> ...``.

Exit codes: 0 success or verified, 1 a verification mismatch, 2 usage or
resource errors.
"""

from __future__ import annotations

import csv
import io
import json
import os
import sys
import time

import click

from . import cache as _cache
from .arith import alpha, mu, t_threshold, zeta
from .monomial import (
    count_monomials,
    format_monomial,
    format_polynomial,
    parse_polynomial,
    weight_vector,
)

# work above this many monomials needs --extended
EXTENDED_LIMIT = 50000


class Ctx:
    def __init__(self, fmt: str, extended: bool):
        self.fmt = fmt
        self.extended = extended


def _emit(obj, fmt: str, text: str | None = None, rows: list[list] | None = None) -> None:
    if fmt == "json":
        click.echo(json.dumps(obj, sort_keys=True))
    elif fmt == "csv" and rows is not None:
        buf = io.StringIO()
        csv.writer(buf, lineterminator="\n").writerows(rows)
        click.echo(buf.getvalue(), nl=False)
    else:
        click.echo(text if text is not None else json.dumps(obj, sort_keys=True, indent=2))


def _weight(text: str | None) -> tuple[int, ...] | None:
    if text is None:
        return None
    try:
        return tuple(int(t) for t in text.strip("()").split(",") if t.strip())
    except ValueError:
        raise click.BadParameter(f"expected comma separated integers, got {text!r}")


def _degrees(text: str) -> list[int]:
    out: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if "-" in part:
            a, b = part.split("-", 1)
            out.extend(range(int(a), int(b) + 1))
        elif part:
            out.append(int(part))
    if not out or min(out) < 0:
        raise click.BadParameter(f"bad degree list {text!r}")
    return out


def _guard(ctx: Ctx, k: int, n: int) -> None:
    if count_monomials(k, n) > EXTENDED_LIMIT and not ctx.extended:
        raise click.UsageError(
            f"P_{k} has {count_monomials(k, n)} monomials in degree {n}; rerun with --extended")


def _select(k: int, n: int | None, weight, part: str):
    from .hit import admissible_basis

    if n is None:
        if weight is None:
            raise click.UsageError("give --degree or --weight")
        n = sum(c << i for i, c in enumerate(weight))
    elif weight is not None and sum(c << i for i, c in enumerate(weight)) != n:
        raise click.UsageError(f"weight {weight} does not have degree {n}")
    basis = admissible_basis(k, n)
    mons = [m for m in basis
            if (weight is None or weight_vector(m) == tuple(weight))
            and (part == "all" or (part == "zero") == (0 in m))]
    return n, mons


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.option("--cache-dir", type=click.Path(file_okay=False), default=None,
              help="Echelon cache directory (HITLAB_CACHE takes precedence).")
@click.option("--threads", type=int, default=None,
              help="Thread count for numba; the kernels themselves are serial.")
@click.option("--format", "fmt", type=click.Choice(["text", "json", "csv"]), default="text")
@click.option("--extended", is_flag=True, help="Allow degree-35-scale computations.")
@click.pass_context
def main(ctx, cache_dir, threads, fmt, extended):
    """Admissible monomials, hit spaces and invariants of F_2[x1..xk] over the Steenrod algebra."""
    env = os.environ.get("HITLAB_CACHE")
    if env or cache_dir:
        _cache.set_cache(env or cache_dir)
    if threads is not None:
        if threads < 1:
            raise click.BadParameter("--threads must be positive")
        os.environ["NUMBA_NUM_THREADS"] = str(threads)
    ctx.obj = Ctx(fmt, extended)


@main.command()
@click.option("--k", "k", type=click.IntRange(1), required=True)
@click.option("--degree", type=click.IntRange(0), default=None)
@click.option("--weight", default=None, help="Weight vector, e.g. 4,2,2.")
@click.option("--part", type=click.Choice(["all", "zero", "positive"]), default="all")
@click.pass_obj
def basis(obj: Ctx, k, degree, weight, part):
    """List admissible monomials in ascending order."""
    w = _weight(weight)
    if degree is not None:
        _guard(obj, k, degree)
    n, mons = _select(k, degree, w, part)
    _guard(obj, k, n)
    doc = {"k": k, "degree": n, "count": len(mons), "monomials": [list(m) for m in mons]}
    if w is not None:
        doc["weight"] = list(w)
    text = "\n".join(f"{i}. {format_monomial(m)}" for i, m in enumerate(mons, 1))
    rows = [["index"] + [f"x{j}" for j in range(1, k + 1)]]
    rows += [[i] + list(m) for i, m in enumerate(mons, 1)]
    _emit(doc, obj.fmt, text or "(empty)", rows)


@main.command()
@click.option("--k", "k", type=click.IntRange(1), required=True)
@click.option("--degree", default=None, help="A degree, a list 5,15,16 or a range 1-15.")
@click.option("--weight", default=None)
@click.option("--part", type=click.Choice(["all", "zero", "positive"]), default="all")
@click.pass_obj
def dim(obj: Ctx, k, degree, weight, part):
    """Dimension of QP_k in the given degrees, with its splittings."""
    from .report import report_dimensions, rows_to_csv

    w = _weight(weight)
    if w is not None or part != "all":
        n = int(degree) if degree is not None else None
        if n is not None:
            _guard(obj, k, n)
        n, mons = _select(k, n, w, part)
        doc = {"k": k, "degree": n, "part": part, "dim": len(mons)}
        if w is not None:
            doc["weight"] = list(w)
        _emit(doc, obj.fmt, str(len(mons)), [["k", "degree", "part", "dim"], [k, n, part, len(mons)]])
        return
    if degree is None:
        raise click.UsageError("give --degree")
    degrees = _degrees(degree)
    for n in degrees:
        _guard(obj, k, n)
    table = report_dimensions(k, degrees)
    if obj.fmt == "csv":
        click.echo(rows_to_csv(table), nl=False)
        return
    lines = [f"{'degree':>6} {'monomials':>9} {'rank':>8} {'dim':>6} {'zero':>6} {'positive':>8}"]
    for r in table:
        lines.append(f"{r.degree:>6} {r.monomials:>9} {r.rank:>8} {r.dim:>6} {r.dim_zero:>6} {r.dim_positive:>8}")
    _emit([r.to_json() for r in table], obj.fmt, "\n".join(lines))


@main.command()
@click.option("--k", "k", type=click.IntRange(1), required=True)
@click.option("--degree", type=click.IntRange(0), required=True)
@click.option("--group", type=click.Choice(["sigma", "gl"]), default="gl")
@click.option("--weight", default=None, help="Work in QP_k(weight) modulo lower weights.")
@click.pass_obj
def invariants(obj: Ctx, k, degree, group, weight):
    """Invariant classes under the symmetric or general linear group."""
    from .group import invariants as solve

    _guard(obj, k, degree)
    rep = solve(k, degree, group, _weight(weight))
    lines = [f"dimension {rep.dimension} (over {rep.domain_size} admissible monomials)"]
    for i, f in enumerate(rep.basis, 1):
        lines.append(f"[{i}] {format_polynomial(f)}")
    _emit(rep.to_json(), obj.fmt, "\n".join(lines))


@main.command()
@click.option("--k", "k", type=click.IntRange(1), required=True)
@click.option("--d", "d", type=click.IntRange(0), required=True)
@click.option("--matrix", "matrix_out", type=click.Path(dir_okay=False), default=None,
              help="Write the matrix and both bases as JSON.")
@click.option("--check-iso", is_flag=True, help="Run the stabilization check.")
@click.option("--smax", type=click.IntRange(1), default=4)
@click.pass_obj
def kameko(obj: Ctx, k, d, matrix_out, check_iso, smax):
    """Kameko's map from degree 2d+k to degree d."""
    from .kameko import check_stabilization, kameko_matrix

    _guard(obj, k, 2 * d + k)
    km = kameko_matrix(k, d)
    doc = {"k": k, "d": d, "domain_dim": len(km.domain), "codomain_dim": len(km.codomain),
           "rank": km.rank, "kernel_dim": km.kernel_dim, "surjective": km.surjective,
           "injective": km.injective, "bijective": km.bijective}
    if matrix_out:
        with open(matrix_out, "w") as fh:
            json.dump({"domain": [list(m) for m in km.domain], "codomain": [list(m) for m in km.codomain],
                       "rows": [list(map(int, r.nonzero()[0])) for r in km.matrix]}, fh)
    if check_iso:
        top = k * ((1 << smax) - 1) + (d << smax)
        _guard(obj, k, top)
        rep = check_stabilization(k, d, smax)
        doc["stabilization"] = {"degrees": rep.degrees, "dims": rep.dims, "bijective_steps": rep.bijective_steps,
                                "least_t": rep.least_t, "t_threshold": rep.expected_t, "agrees": rep.agrees}
    text = "\n".join(f"{key}: {doc[key]}" for key in doc if key != "stabilization")
    if check_iso:
        s = doc["stabilization"]
        text += f"\nleast stable step {s['least_t']}, t(k,d) = {s['t_threshold']}, dims {s['dims']}"
    _emit(doc, obj.fmt, text)


@main.command(name="mu")
@click.argument("n", type=click.IntRange(0))
@click.pass_obj
def mu_cmd(obj: Ctx, n):
    """Least number of 2^u - 1 summands adding up to n."""
    _emit({"n": n, "mu": mu(n)}, obj.fmt, str(mu(n)), [["n", "mu"], [n, mu(n)]])


@main.command(name="alpha")
@click.argument("n", type=click.IntRange(0))
@click.pass_obj
def alpha_cmd(obj: Ctx, n):
    """Number of ones in the binary expansion of n."""
    _emit({"n": n, "alpha": alpha(n)}, obj.fmt, str(alpha(n)), [["n", "alpha"], [n, alpha(n)]])


@main.command(name="zeta")
@click.argument("n", type=click.IntRange(1))
@click.pass_obj
def zeta_cmd(obj: Ctx, n):
    """Largest j with 2^j dividing n."""
    _emit({"n": n, "zeta": zeta(n)}, obj.fmt, str(zeta(n)), [["n", "zeta"], [n, zeta(n)]])


@main.command()
@click.option("--k", "k", type=click.IntRange(1), required=True)
@click.option("--d", "d", type=click.IntRange(0), required=True)
@click.pass_obj
def tkd(obj: Ctx, k, d):
    """Number of Kameko steps after which iterates stabilize."""
    t = t_threshold(k, d)
    _emit({"k": k, "d": d, "t": t}, obj.fmt, str(t), [["k", "d", "t"], [k, d, t]])


@main.command()
@click.option("--i", "i", type=click.IntRange(0), required=True)
@click.option("--poly", "text", required=True, help='e.g. "x1^3 x2 + x2^4"')
@click.option("--k", "k", type=click.IntRange(1), default=None)
@click.pass_obj
def steenrod(obj: Ctx, i, text, k):
    """Apply Sq^i to a polynomial."""
    from .steenrod import sq

    p = _parse(text, k)
    img = sq(i, p)
    _emit({"i": i, "input": sorted(list(m) for m in p), "image": sorted(list(m) for m in img)},
          obj.fmt, format_polynomial(img))


@main.command(name="check-hit")
@click.option("--poly", "text", required=True)
@click.option("--k", "k", type=click.IntRange(1), default=None)
@click.pass_obj
def check_hit(obj: Ctx, text, k):
    """Decide whether a homogeneous polynomial is hit; print its normal form."""
    from .hit import normal_form

    p = _parse(text, k)
    if p:
        _guard(obj, len(next(iter(p))), sum(next(iter(p))))
    nf = normal_form(p) if p else frozenset()
    doc = {"hit": not nf, "normal_form": sorted(list(m) for m in nf)}
    _emit(doc, obj.fmt, ("hit" if not nf else "not hit") + f"\nnormal form: {format_polynomial(nf)}")


def _parse(text: str, k: int | None):
    try:
        p = parse_polynomial(text, k)
    except ValueError as exc:
        raise click.BadParameter(str(exc))
    if len({sum(m) for m in p}) > 1:
        raise click.BadParameter("polynomial is not homogeneous")
    return p


@main.command()
@click.option("--entry", "pattern", default=None, help="Glob over entry ids, e.g. 'B5*deg16'.")
@click.option("--list", "list_only", is_flag=True, help="List corpus entries and exit.")
@click.pass_obj
def verify(obj: Ctx, pattern, list_only):
    """Diff computed bases against the transcribed tables (exit 1 on any mismatch)."""
    from .corpus import CorpusError, bundled_corpus, verify_corpus

    try:
        corpus = bundled_corpus()
    except CorpusError as exc:
        raise click.UsageError(str(exc))
    if list_only:
        entries = corpus.select(pattern)
        _emit([{"id": e.id, "k": e.k, "degree": e.degree, "count": e.expected_count} for e in entries],
              obj.fmt, "\n".join(f"{e.id}  k={e.k} degree={e.degree} count={e.expected_count}" for e in entries))
        return
    if not corpus.select(pattern):
        raise click.UsageError(f"no corpus entry matches {pattern!r}")
    t0 = time.perf_counter()
    rep = verify_corpus(pattern, obj.extended, corpus)
    lines = []
    for d in rep.diffs:
        status = "match" if d.ok else "MISMATCH"
        order = {True: "same order", False: "order differs", None: "set only"}[d.order_agrees]
        lines.append(f"{d.id:28s} {status:8s} {d.computed}/{d.expected}  {order}")
        for m in d.missing:
            lines.append(f"    computed, not printed: {format_monomial(m)}")
        for m in d.extra:
            lines.append(f"    printed, not computed: {format_monomial(m)}")
        for wmsg in d.warnings:
            lines.append(f"    warning: {wmsg}")
    for s in rep.skipped:
        lines.append(f"{s:28s} skipped (needs --extended)")
    lines.append(f"{'verified' if rep.ok else 'FAILED'} in {time.perf_counter() - t0:.1f}s")
    doc = rep.to_json()
    if obj.fmt == "json":
        _emit(doc, "json")
    else:
        click.echo("\n".join(lines))
    sys.exit(rep.exit_code)


@main.group(name="cache")
def cache_group():
    """Manage the on-disk echelon cache."""


def _need_cache() -> _cache.Cache:
    c = _cache.active_cache()
    if c is None:
        c = _cache.set_cache(_cache.default_cache_dir())
    return c


@cache_group.command(name="inspect")
@click.pass_obj
def cache_inspect(obj: Ctx):
    c = _need_cache()
    ents = c.entries()
    lines = [f"cache at {c.root}: {len(ents)} entries"]
    for e in ents:
        lines.append(f"  {e['file']}  {e['bytes']} bytes")
    _emit({"root": str(c.root), "entries": ents}, obj.fmt, "\n".join(lines))


@cache_group.command(name="warm")
@click.option("--k", "k", type=click.IntRange(1), required=True)
@click.option("--degree", type=click.IntRange(0), required=True)
@click.pass_obj
def cache_warm(obj: Ctx, k, degree):
    from .hit import hit_space_of

    _guard(obj, k, degree)
    c = _need_cache()
    hit_space_of(k, degree)
    _emit({"root": str(c.root), "k": k, "degree": degree}, obj.fmt, f"warmed k={k} degree={degree} in {c.root}")


@cache_group.command(name="evict")
@click.option("--k", "k", type=int, default=None)
@click.option("--degree", type=int, default=None)
@click.pass_obj
def cache_evict(obj: Ctx, k, degree):
    c = _need_cache()
    n = c.evict(k, degree)
    _emit({"removed": n}, obj.fmt, f"removed {n} entries")


def run() -> None:
    try:
        main(standalone_mode=False)
    except click.exceptions.Exit as exc:
        sys.exit(exc.exit_code)
    except click.ClickException as exc:
        exc.show()
        sys.exit(2)
    except click.Abort:
        sys.exit(2)
    except MemoryError:
        click.echo("error: out of memory; try a smaller instance", err=True)
        sys.exit(2)
    except ValueError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)
