"""Command-line entry point: ``directed-ramsey <subcommand> ...``."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import artifacts, catalog, driver, encoder, solver
from .tournament import Tournament, h_complement, h_tournament, parse_matrix_text, to_matrix_text

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_UNKNOWN = 3


class Report:
    """Ordered key/value output, rendered as ``key=value`` or aligned text."""

    def __init__(self, mode: str):
        self.mode = mode
        self.rows: list[tuple[str, object]] = []

    def add(self, key: str, value) -> None:
        self.rows.append((key, value))

    def emit(self, stream=None) -> None:
        stream = stream or sys.stdout
        if self.mode == "kv":
            for key, value in self.rows:
                stream.write(f"{key}={value}\n")
            return
        width = max((len(k) for k, _ in self.rows), default=0)
        for key, value in self.rows:
            stream.write(f"{key.ljust(width)}  {value}\n")


def _solver_cfg(args) -> solver.SolverConfig:
    kwargs = {"timeout": args.timeout, "workers": args.workers}
    if args.solver:
        kwargs["command"] = args.solver
    return solver.SolverConfig(**kwargs)


def _read_tournament(spec: str) -> Tournament:
    """``artifact:NAME``, ``h:N``, ``hc:N``, ``FILE`` (matrix text) or ``FILE@INDEX`` (hex entry)."""
    if spec.startswith("artifact:"):
        return artifacts.load_artifact(spec.split(":", 1)[1]).tournament
    if spec.startswith("h:"):
        return h_tournament(int(spec[2:]))
    if spec.startswith("hc:"):
        return h_complement(int(spec[3:]))
    if "@" in spec:
        path, idx = spec.rsplit("@", 1)
        return catalog.Catalog.read(path).entries[int(idx)]
    text = Path(spec).read_text()
    if text.startswith("tournament-catalog"):
        entries = catalog.Catalog.from_text(text).entries
        if len(entries) != 1:
            raise ValueError(f"{spec} holds {len(entries)} tournaments; pick one with {spec}@INDEX")
        return entries[0]
    return parse_matrix_text(text)


def _write_tournaments(path: str | None, items: list[Tournament], fmt: str, k: int, complete: bool) -> None:
    if not path:
        return
    if fmt in (None, "hex"):
        n = items[0].n if items else 0
        catalog.Catalog(k, n, items, complete).write(path)
    else:
        Path(path).write_text("\n".join(to_matrix_text(t) for t in items))


# -- subcommands ------------------------------------------------------------------

def cmd_verify(args, rep: Report) -> int:
    ok = True
    if args.infile:
        db = artifacts.parse_external_db(args.infile, args.format or "matrix", args.expect_count)
        rep.add("file", args.infile)
        for key, value in artifacts.doubly_regular_summary(db, args.k or 6).items():
            rep.add(key, value)
        return EXIT_OK
    names = args.names or list(artifacts.ARTIFACT_NAMES)
    for name in names:
        r = artifacts.verify_artifact(artifacts.load_artifact(name))
        for res in r.results:
            tag = "PASS" if res.passed else "FAIL"
            rep.add(f"{r.name}.{res.label}", f"{tag} [{res.source}]")
        for i, note in enumerate(r.notes):
            rep.add(f"{r.name}.embedding{i}", note)
        ok &= r.passed
    rep.add("result", "PASS" if ok else "FAIL")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_encode(args, rep: Report) -> int:
    fixed = None
    if args.fixed:
        t = _read_tournament(args.fixed)
        if t.n > args.n:
            raise ValueError(f"fixed tournament has {t.n} vertices but --n is {args.n}")
        fixed = encoder.PartialTournament(args.n)
        for a, b in t.edges():
            fixed.orient(a, b)
    f = encoder.encode(args.n, args.k, fixed, args.encoding)
    if not args.out:
        sys.stdout.write(encoder.emit_dimacs(f))
        return EXIT_OK
    encoder.write_instance(f, args.out)
    rep.add("vars", f.var_count)
    rep.add("clauses", len(f.clauses))
    rep.add("literals", f.literal_count())
    rep.add("written", args.out)
    return EXIT_OK


def _expect_code(status: solver.Status, expect: str | None) -> int:
    if status is solver.Status.UNKNOWN:
        return EXIT_UNKNOWN
    if expect and status.value != expect.upper():
        return EXIT_FAIL
    return EXIT_OK


def cmd_solve(args, rep: Report) -> int:
    cfg = _solver_cfg(args)
    outcome = solver.solve_file(args.infile, cfg)
    rep.add("status", outcome.status.value)
    rep.add("wall_time", f"{outcome.wall_time:.3f}")
    if outcome.reason:
        rep.add("reason", outcome.reason)
    if outcome.is_sat:
        map_path = Path(args.map or args.infile + ".map")
        if map_path.exists():
            vm = encoder.VarMap.from_text(map_path.read_text())
            n = 1 + max(max(p) for p in vm.edge_var)
            t = solver.decode_model(outcome, vm, n, args.k)
            rep.add("n", n)
            if args.k:
                rep.add("tt_free_check", "PASS")
            if args.out:
                _write_tournaments(args.out, [t], args.format, args.k or 0, False)
    return _expect_code(outcome.status, args.expect)


def cmd_enumerate(args, rep: Report) -> int:
    f = encoder.encode(args.n, args.k, None, args.encoding)
    classes, labeled = solver.enumerate_models(f, _solver_cfg(args), args.limit)
    exhausted = args.limit is None or labeled < args.limit
    rep.add("labeled_models", labeled)
    rep.add("classes", len(classes))
    rep.add("exhaustive", int(exhausted))
    _write_tournaments(args.out, classes, args.format, args.k, exhausted)
    return EXIT_OK


def cmd_catalog(args, rep: Report) -> int:
    if args.pattern:
        pattern = _read_tournament(args.pattern)
        per_order = catalog.tt_and_pattern_free_search(args.k, pattern, args.n)
        for order, cat in sorted(per_order.items()):
            rep.add(f"order{order}", len(cat))
        best = catalog.largest_nonempty(per_order)
        rep.add("largest_order", best.n if best else 0)
        rep.add("largest_count", len(best) if best else 0)
        if best:
            _write_tournaments(args.out, best.entries, args.format, args.k, True)
        return EXIT_OK
    if args.extend:
        base = catalog.Catalog.read(args.extend)
        cat = catalog.extend_catalog(base)
    elif args.method == "extend":
        cat = catalog.catalog_by_extension(args.n, args.k)
    else:
        cat = catalog.build_catalog(args.n, args.k, workers=args.workers)
    cat.check()
    rep.add("n", cat.n)
    rep.add("k", cat.k)
    rep.add("classes", len(cat))
    rep.add("complete", int(cat.complete))
    _write_tournaments(args.out, cat.entries, args.format, cat.k, cat.complete)
    return EXIT_OK


def _side(spec: str | None):
    """Pivot side: ``generic:N``, empty, or a tournament spec."""
    if not spec:
        return None, 0
    if spec.startswith("generic:"):
        return None, int(spec.split(":", 1)[1])
    return _read_tournament(spec), 0


def cmd_pivot(args, rep: Report) -> int:
    inn, inn_g = _side(args.inn)
    out, out_g = _side(args.outside)
    if args.dump:
        x = driver.load_side(inn, inn_g)
        y = driver.load_side(out, out_g)
        f = encoder.pivot_instance(x, y, args.k, args.encoding)
        encoder.write_instance(f, args.dump)
        rep.add("vars", f.var_count)
        rep.add("clauses", len(f.clauses))
        rep.add("written", args.dump)
        return EXIT_OK
    f, outcome, t = driver.pivot_check(inn, out, args.k, inn_g, out_g, args.encoding, _solver_cfg(args))
    rep.add("order", f.order)
    rep.add("status", outcome.status.value)
    rep.add("wall_time", f"{outcome.wall_time:.3f}")
    if t is not None:
        rep.add("tt_free_check", "PASS")
        _write_tournaments(args.out, [t], args.format, args.k, False)
    return _expect_code(outcome.status, args.expect)


def cmd_ramsey(args, rep: Report) -> int:
    r = driver.ramsey(args.k, args.n, args.encoding, _solver_cfg(args), symmetry=not args.no_symmetry)
    for step in r.steps:
        rep.add(f"n{step.n}", f"{step.status.value} clauses={step.clauses} time={step.wall_time:.2f}s")
    rep.add("k", r.k)
    rep.add("encoding", r.encoding)
    rep.add("R", r.value if r.resolved else "UNKNOWN")
    return EXIT_OK if r.resolved else EXIT_UNKNOWN


def cmd_bounds(args, rep: Report) -> int:
    b = driver.bounds(args.n)
    rep.add("n", b.n)
    rep.add("min_tt3", b.min_tt3)
    rep.add("max_3cycles", b.max_cycles)
    rep.add("avg_cycles_per_edge", b.avg_unreduced())
    rep.add("avg_cycles_per_edge_reduced", b.avg_cycles_per_edge)
    rep.add("avg_is_integer", int(b.avg_cycles_per_edge.denominator == 1))
    rep.add("d_cap", b.d_cap)
    for i, note in enumerate(b.notes()):
        rep.add(f"note{i}", note)
    return EXIT_OK


# -- parser -------------------------------------------------------------------------

def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return value


def _positive_float(text: str) -> float:
    value = float(text)
    if value <= 0:
        raise argparse.ArgumentTypeError("must be > 0")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--report", choices=("human", "kv"), default="human")
    common.add_argument("--solver", help=f"solver command (default: ${solver.SOLVER_ENV}, cadical, kissat, pysat shim)")
    common.add_argument("--timeout", type=_positive_float, help="per-instance solver timeout in seconds")
    common.add_argument("--workers", type=_positive_int, default=1)
    # default depends on the command (matrix for verify --in, hex for output)
    common.add_argument("--format", choices=("matrix", "hex"))
    common.add_argument("--out", help="output file")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="directed-ramsey", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("verify", parents=[common], help="check embedded artifacts or an external file")
    s.add_argument("names", nargs="*", metavar="NAME", help=", ".join(artifacts.ARTIFACT_NAMES))
    s.add_argument("--in", dest="infile")
    s.add_argument("--k", type=int)
    s.add_argument("--expect-count", type=int)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("encode", parents=[common], help="emit a DIMACS formula")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--encoding", choices=sorted(encoder.ENCODERS), default="reduced")
    s.add_argument("--fixed", help="tournament whose edges are fixed on vertices 0..m-1")
    s.set_defaults(func=cmd_encode)

    s = sub.add_parser("solve", parents=[common], help="run the solver on a DIMACS file")
    s.add_argument("--in", dest="infile", required=True)
    s.add_argument("--map", help="varmap sidecar (default <in>.map)")
    s.add_argument("--k", type=int)
    s.add_argument("--expect", choices=("sat", "unsat"))
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("enumerate", parents=[common], help="list solutions up to isomorphism")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--encoding", choices=sorted(encoder.ENCODERS), default="reduced")
    s.add_argument("--limit", type=_positive_int)
    s.set_defaults(func=cmd_enumerate)

    s = sub.add_parser("catalog", parents=[common], help="build a TT_k-free catalog")
    s.add_argument("--n", type=int, required=True, help="order (max order with --pattern)")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--method", choices=("block", "extend"), default="block")
    s.add_argument("--extend", metavar="CATALOG", help="extend an existing catalog file by one vertex")
    s.add_argument("--pattern", help="also forbid this tournament (artifact:NAME or file)")
    s.set_defaults(func=cmd_catalog)

    s = sub.add_parser("pivot", parents=[common], help="solve or dump an X -> 1 -> Y instance")
    s.add_argument("--in", dest="inn", help="in-side: file, FILE@INDEX, artifact:NAME or generic:N")
    s.add_argument("--out-side", dest="outside", help="out-side, same forms as --in")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--encoding", choices=sorted(encoder.ENCODERS), default="reduced")
    s.add_argument("--dump", help="write DIMACS + map here instead of solving")
    s.add_argument("--expect", choices=("sat", "unsat"))
    s.set_defaults(func=cmd_pivot)

    s = sub.add_parser("ramsey", parents=[common], help="compute R(k) by SAT")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--n", type=int, help="largest order to try")
    s.add_argument("--encoding", choices=sorted(encoder.ENCODERS), default="reduced")
    s.add_argument("--no-symmetry", action="store_true", help="do not fix the pivot edges 0 -> 1..n/2")
    s.set_defaults(func=cmd_ramsey)

    s = sub.add_parser("bounds", parents=[common], help="3-cycle counting bounds for order n")
    s.add_argument("--n", type=int, required=True)
    s.set_defaults(func=cmd_bounds)
    return p


def _validate(args, parser) -> None:
    k = getattr(args, "k", None)
    n = getattr(args, "n", None)
    if args.command in ("encode", "enumerate", "catalog", "pivot", "ramsey") and k is not None and k < 3:
        parser.error("--k must be at least 3")
    if args.command == "bounds" and n < 3:
        parser.error("--n must be at least 3")
    if args.command in ("encode", "enumerate", "catalog") and n is not None and not 2 <= n <= 64:
        parser.error("--n must be between 2 and 64")
    if args.command in ("encode", "enumerate") and k is not None and n is not None and k > n:
        parser.error("--k must not exceed --n")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _validate(args, parser)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    rep = Report(args.report)
    try:
        code = args.func(args, rep)
    except (
        artifacts.UnknownName,
        artifacts.ParseError,
        artifacts.InvariantViolation,
        catalog.CatalogError,
        encoder.EncodingError,
        solver.SolverError,
        OSError,
        ValueError,
    ) as exc:
        rep.emit()
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    rep.emit()
    return code


if __name__ == "__main__":
    sys.exit(main())
