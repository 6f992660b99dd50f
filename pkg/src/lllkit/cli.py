"""Command-line front end.

Exit codes: 0 verdict delivered, 2 input error, 3 negative outcome (no
witness found, hypothesis violated), 4 resource cap exceeded.
"""

from __future__ import annotations

import functools
import sys
from fractions import Fraction
from math import comb, factorial
from pathlib import Path

import click

from lllkit import __version__, kernels
from lllkit._accel import set_threads
from lllkit.config import limits
from lllkit.errors import DomainError, ParseError, SizeLimitError
from lllkit.finite_prob import enumerate_injections
from lllkit.hypergraph import (
    Hypergraph,
    build_packing_instance,
    corollary_conditions,
    is_perfect_packing,
    packing_events,
    packing_lhs,
    parse_hypergraph,
    partition_from_packing,
    perfect_packing_reduction,
    theorem41_condition,
    theorem42_condition,
    verify_packing,
)
from lllkit.injection import canonical_event, conflict_degrees, conflict_graph, parse_event_spec
from lllkit.latin import build_latin_events, is_latin_transversal, max_multiplicity, parse_matrix, theorem51_condition
from lllkit.lll import (
    Graph,
    Verdict,
    check_lll_condition,
    check_symmetric_condition,
    find_weights,
    parse_lll_input,
    verify_negative_dependency_graph,
)
from lllkit.report import Report
from lllkit.solver import AvoidanceProblem, Mode, SearchResult, solve_exhaustive, solve_randomized
from lllkit.textio import read_text

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NEGATIVE = 3
EXIT_CAP = 4

# conflict degrees are measured only for families up to this size
DEGREE_FAMILY_CAP = 20000


class Negative(Exception):
    """Raised after a report is emitted to request exit code 3."""


def _emit(ctx: click.Context, report: Report) -> None:
    opts = ctx.find_root().obj
    if not opts["timing"]:
        report.stats.pop("elapsed", None)
    text = report.to_json()
    click.echo(text, nl=False)
    if opts["output"] is not None:
        Path(opts["output"]).write_text(text)


def _guarded(func):
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except ParseError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(EXIT_INPUT)
        except DomainError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(EXIT_INPUT)
        except SizeLimitError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(EXIT_CAP)
        except Negative:
            sys.exit(EXIT_NEGATIVE)

    return wrapper


def _report(ctx: click.Context, command: str) -> Report:
    return Report(command, with_float=ctx.find_root().obj["float"])


def _load(path: str, parser):
    text, name = read_text(path)
    return parser(text, name), name


def _stats(result: SearchResult) -> dict:
    s = result.stats
    out = {"mode": s.mode}
    if s.mode == Mode.RANDOMIZED.value:
        out.update(restarts=s.restarts, steps=s.steps, final_restart_steps=s.final_restart_steps)
    else:
        out.update(outcomes_scanned=s.outcomes_scanned)
    out["elapsed"] = round(s.elapsed, 6)
    return out


def _search(problem: AvoidanceProblem, mode: str, seed: int, max_restarts: int | None, max_steps: int | None, random_select: bool) -> SearchResult:
    if mode == "exhaustive":
        return solve_exhaustive(problem)
    return solve_randomized(problem, seed, max_restarts, max_steps, random_select)


def _search_options(func):
    func = click.option("--random-select", is_flag=True, help="Resample a random violated event instead of the first.")(func)
    func = click.option("--max-steps", type=int, default=None, help=f"Resamples per restart (default {limits.max_steps}).")(func)
    func = click.option("--max-restarts", type=int, default=None, help=f"Restarts (default {limits.max_restarts}).")(func)
    func = click.option("--seed", type=int, default=0, show_default=True, help="Seed for the randomized solver.")(func)
    func = click.option("--exhaustive", "mode", flag_value="exhaustive", help="Exact search over the whole space.")(func)
    func = click.option("--solve", "mode", flag_value="solve", help="Randomized resampling search.")(func)
    func = click.option("--check-only", "mode", flag_value="check", default=True, help="Report verdicts only (default).")(func)
    return func


@click.group()
@click.version_option(__version__, prog_name="lllkit")
@click.option("--float", "with_float", is_flag=True, help="Add approximate decimals next to rationals.")
@click.option("--threads", type=int, default=0, help="Cap worker threads of parallel kernels.")
@click.option("--timing", is_flag=True, help="Include wall-clock time in stats.")
@click.option("--output", type=click.Path(dir_okay=False), default=None, help="Also write the report to this file.")
@click.pass_context
def cli(ctx: click.Context, with_float: bool, threads: int, timing: bool, output: str | None) -> None:
    """Local lemma checks and constructive search for packings and Latin transversals."""
    ctx.obj = {"float": with_float, "timing": timing, "output": output}
    if threads:
        set_threads(threads)


@cli.command("latin")
@click.argument("matrix_path", type=click.Path())
@_search_options
@click.pass_context
@_guarded
def cmd_latin(ctx, matrix_path, mode, seed, max_restarts, max_steps, random_select):
    """Latin transversal condition and search for MATRIX_PATH."""
    A, name = _load(matrix_path, parse_matrix)
    n = A.n
    k = max_multiplicity(A)
    fam = build_latin_events(A)
    rep = _report(ctx, "latin")
    rep.inputs = {"source": name, "n": n, "mode": mode}
    if mode == "solve":
        rep.inputs["seed"] = seed
    rep.add("k", k)
    rep.add("theorem51", theorem51_condition(n, k))
    rep.add("family_size", len(fam))
    rep.add("degree_bound", 4 * n * k - 1)
    if n >= 2:
        rep.add("event_probability", Fraction(1, n * (n - 1)))
    if len(fam) <= DEGREE_FAMILY_CAP:
        d = int(conflict_degrees(fam.matchings).max()) if len(fam) else 0
        rep.add("conflict_degree", d)
        rep.add("degree_within_bound", d <= 4 * n * k - 1)
        if n >= 2:
            rep.add("symmetric_condition", check_symmetric_condition(Fraction(1, n * (n - 1)), d))
    else:
        rep.add("conflict_degree", "skipped")
    if mode == "check":
        _emit(ctx, rep)
        return
    problem = AvoidanceProblem(n, n, fam.matchings)
    result = _search(problem, mode, seed, max_restarts, max_steps, random_select)
    rep.stats = _stats(result)
    if result.found:
        rep.certificate = list(result.certificate.witness)
        rep.add("transversal_verified", is_latin_transversal(A, result.certificate.witness))
    else:
        rep.add("search", "no transversal exists" if mode == "exhaustive" else "budget exhausted")
    _emit(ctx, rep)
    if not result.found:
        raise Negative


def _pack_search(H1: Hypergraph, H2: Hypergraph, n: int, mode, seed, max_restarts, max_steps, random_select):
    if H1.vertex_count == 0:
        return None
    problem = AvoidanceProblem(H1.vertex_count, n, tuple(packing_events(H1, H2, n)))
    return _search(problem, mode, seed, max_restarts, max_steps, random_select)


@cli.command("pack")
@click.argument("h1_path", type=click.Path())
@click.argument("h2_path", type=click.Path())
@click.option("--n", "n", type=int, required=True, help="Vertex count of the host complete hypergraph.")
@_search_options
@click.pass_context
@_guarded
def cmd_pack(ctx, h1_path, h2_path, n, mode, seed, max_restarts, max_steps, random_select):
    """Packing of H1 and H2 into the complete r-uniform hypergraph on N vertices."""
    H1, name1 = _load(h1_path, parse_hypergraph)
    H2, name2 = _load(h2_path, parse_hypergraph)
    verdict = theorem41_condition(H1, H2, n)
    rep = _report(ctx, "pack")
    rep.inputs = {"h1": name1, "h2": name2, "n": n, "mode": mode}
    if mode == "solve":
        rep.inputs["seed"] = seed
    r = H1.r
    m1, m2, d1, d2 = H1.edge_count, H2.edge_count, H1.intersection_degree, H2.intersection_degree
    size = m1 * m2 * factorial(r)
    bound = factorial(r) * packing_lhs(H1, H2) - 1
    for key, val in (("r", r), ("m1", m1), ("m2", m2), ("d1", d1), ("d2", d2)):
        rep.add(key, val)
    rep.add("lhs", packing_lhs(H1, H2))
    rep.add("binom_n_r", comb(n, r))
    rep.add("theorem41", verdict)
    rep.add("instance_size", size)
    rep.add("degree_bound", bound)
    if n >= r:
        rep.add("event_probability", Fraction(1, factorial(r) * comb(n, r)))
    if size <= DEGREE_FAMILY_CAP:
        inst = build_packing_instance(H1, H2, n)
        d = int(conflict_degrees(inst.event_matchings).max()) if size else 0
        rep.add("conflict_degree", d)
        rep.add("degree_within_bound", d <= bound)
    else:
        rep.add("conflict_degree", "skipped")
    if mode == "check":
        _emit(ctx, rep)
        return
    result = _pack_search(H1, H2, n, mode, seed, max_restarts, max_steps, random_select)
    if result is None:
        rep.certificate = []
        rep.add("packing_verified", True)
        _emit(ctx, rep)
        return
    rep.stats = _stats(result)
    if result.found:
        rep.certificate = list(result.certificate.witness)
        rep.add("packing_verified", verify_packing(H1, H2, result.certificate.witness, n))
    else:
        rep.add("search", "no packing exists" if mode == "exhaustive" else "budget exhausted")
    _emit(ctx, rep)
    if not result.found:
        raise Negative


@cli.command("perfect-packing")
@click.argument("g_path", type=click.Path())
@click.argument("h_path", type=click.Path())
@_search_options
@click.pass_context
@_guarded
def cmd_perfect_packing(ctx, g_path, h_path, mode, seed, max_restarts, max_steps, random_select):
    """Perfect G-packing of H via the two-hypergraph packing reduction."""
    G, gname = _load(g_path, parse_hypergraph)
    H, hname = _load(h_path, parse_hypergraph)
    res = theorem42_condition(G, H)
    lo, hi = res.threshold()
    cors = corollary_conditions(H)
    rep = _report(ctx, "perfect-packing")
    rep.inputs = {"g": gname, "h": hname, "mode": mode}
    if mode == "solve":
        rep.inputs["seed"] = seed
    for key, val in (("r", G.r), ("s", G.vertex_count), ("n", H.vertex_count), ("m", G.edge_count), ("d", G.intersection_degree)):
        rep.add(key, val)
    rep.add("min_degree", H.min_degree)
    rep.add("x", res.x)
    rep.add("density", res.density)
    rep.add("threshold_lower", lo)
    rep.add("threshold_upper", hi)
    rep.add("theorem42", res.verdict)
    na = "not-applicable"
    rep.add("corollary_hypergraph_matching", na if cors.perfect_matching_hypergraph is None else cors.perfect_matching_hypergraph)
    rep.add("corollary_graph_matching", na if cors.perfect_matching_graph is None else cors.perfect_matching_graph)
    if mode == "check":
        _emit(ctx, rep)
        return
    H1, H2, n = perfect_packing_reduction(G, H)
    result = _pack_search(H1, H2, n, mode, seed, max_restarts, max_steps, random_select)
    rep.stats = _stats(result)
    if result.found:
        sigma = result.certificate.witness
        pieces = partition_from_packing(G, H, sigma)
        rep.certificate = list(sigma)
        rep.add("packing_verified", verify_packing(H1, H2, sigma, n))
        rep.add("partition", [list(p) for p in pieces])
        rep.add("partition_verified", is_perfect_packing(G, H, pieces))
    else:
        rep.add("search", "no perfect packing exists" if mode == "exhaustive" else "budget exhausted")
    _emit(ctx, rep)
    if not result.found:
        raise Negative


@cli.command("verify-ndg")
@click.argument("events_path", type=click.Path())
@click.pass_context
@_guarded
def cmd_verify_ndg(ctx, events_path):
    """Exhaustive negative-dependency-graph check for a family of canonical events."""
    spec, name = _load(events_path, parse_event_spec)
    space = enumerate_injections(spec.m, spec.n)
    events = [canonical_event(space, mt).realized for mt in spec.matchings]
    if spec.edges is None:
        g = conflict_graph(spec.matchings)
        source = "conflict"
    else:
        g = Graph(len(events), spec.edges)
        source = "explicit"
    verdict = verify_negative_dependency_graph(space, events, g)
    rep = _report(ctx, "verify-ndg")
    rep.inputs = {"source": name, "m": spec.m, "n": spec.n, "events": len(events), "graph": source}
    rep.add("space_size", space.size)
    rep.add("edges", [list(e) for e in g.edges])
    rep.add("probabilities", [Fraction(ev.count, space.size) for ev in events])
    rep.add("negative_dependency_graph", Verdict.HOLDS if verdict else Verdict.FAILS)
    if not verdict:
        rep.add("violation_i", verdict.i)
        rep.add("violation_S", list(verdict.S))
        rep.add("conditional", verdict.lhs)
        rep.add("unconditional", verdict.rhs)
    _emit(ctx, rep)
    if not verdict:
        raise Negative


@cli.command("lll-check")
@click.argument("input_path", type=click.Path())
@click.option("--weights", default=None, help="Comma-separated weights x_i, overriding any 'x' line.")
@click.pass_context
@_guarded
def cmd_lll_check(ctx, input_path, weights):
    """Local lemma condition for probabilities and a dependency graph."""
    data, name = _load(input_path, parse_lll_input)
    g = data.graph
    x = data.x
    if weights is not None:
        try:
            x = tuple(Fraction(w.strip()) for w in weights.split(","))
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"cannot parse --weights {weights!r}", 0, 0, "--weights") from None
    rep = _report(ctx, "lll-check")
    rep.inputs = {"source": name, "events": g.n, "edges": [list(e) for e in g.edges]}
    d = g.max_degree
    p_max = max(data.p, default=Fraction(0))
    rep.add("max_degree", d)
    rep.add("p_max", p_max)
    rep.add("symmetric_condition", check_symmetric_condition(p_max, d) if p_max < 1 else Verdict.FAILS)
    if x is None:
        found = find_weights(data.p, g) if p_max < 1 else None
        rep.add("weights_source", "found" if found is not None else "none")
        x = tuple(found) if found is not None else None
    else:
        rep.add("weights_source", "given")
    if x is None:
        rep.add("lll_condition", Verdict.INDETERMINATE)
        _emit(ctx, rep)
        raise Negative
    check = check_lll_condition(data.p, g, x)
    rep.add("weights", list(x))
    rep.add("lll_condition", Verdict.HOLDS if check else Verdict.FAILS)
    if check:
        rep.add("bound", check.bound)
    else:
        rep.add("violation", check.violation)
    _emit(ctx, rep)
    if not check:
        raise Negative


@cli.command("info", hidden=True)
def cmd_info():
    click.echo(f"lllkit {__version__} kernels={kernels.BACKEND}")


def main() -> None:  # pragma: no cover
    cli(prog_name="lllkit")
