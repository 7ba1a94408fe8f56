#!/usr/bin/env python3
"""
quiverhall: bar-involution coefficients of Dynkin Hall algebras by exact counting.

    quiverhall <command> --quiver FILE [--dim d1,d2,...] [--primes 2,3,5,7]
               [--seed N] [--format text|json|tsv] [--max-total-dim B]
               [--cache DIR] [--workers K] [-v | -q]

Without a command it opens an interactive menu of the verification suites.
Exit status: 0 success, 1 verification failure or failed computation, 2 configuration or input error.
"""

import argparse
import logging
import sys

from modules import __version__
from modules.config import DEFAULT_CONFIG, FORMATS, RunConfig, from_namespace
from modules.errors import EXIT_OK, EXIT_VERIFICATION_FAILED, ConfigError, QuiverHallError, TransversalityError
from modules.hall_algebra import HallAlgebra
from modules.hall_numbers import HallCounter
from modules.orbits import OrbitCatalog
from modules.quiver import check_dim_vector, load_quiver, positive_roots
from modules.results import HallCache, ResultTable
from modules.slice_geometry import preprojective_census, slice_census
from modules.verification import SUITES, SuiteReport, Verifier

logger = logging.getLogger("quiverhall")


class Session:
    """
    Quiver, orbit catalog, counter and algebra for one configuration.

    Usage:
        with Session(config) as session:
            table = session.algebra.bar_matrix(config.dim)
    """

    def __init__(self, config: RunConfig) -> None:
        if config.quiver_path is None:
            raise ConfigError("--quiver is required")
        try:
            self.quiver = load_quiver(config.quiver_path)
        except OSError as exc:
            raise ConfigError(f"cannot read quiver file {config.quiver_path}: {exc.strerror}") from exc
        self.config = config
        self.catalog = OrbitCatalog(self.quiver, seed=config.seed)
        self.cache = HallCache(config.cache_dir, self.quiver, config.primes)
        self.counter = HallCounter(self.catalog, config.primes, self.cache)
        self.algebra = HallAlgebra(self.counter)

    def __enter__(self) -> "Session":
        self.cache.__enter__()
        return self

    def __exit__(self, exc_type, exc_value, traceback) -> None:
        self.cache.__exit__(exc_type, exc_value, traceback)

    def dim(self):
        return check_dim_vector(self.quiver, self.config.require_dim())

    def table(self, kind: str, labels, entries, **provenance) -> ResultTable:
        provenance.setdefault("primes", list(self.config.primes))
        provenance.setdefault("seed", self.config.seed)
        if self.config.dim is not None:
            provenance.setdefault("dim", list(self.config.dim))
        return ResultTable(kind, self.quiver.digest(), labels, entries, provenance)


def cmd_roots(session: Session) -> ResultTable:
    cat = session.catalog
    roots = positive_roots(session.quiver)
    names = [cat.indec_name(cat.roots.index(r)) for r in roots]
    return session.table("roots", names, {n: list(r) for n, r in zip(names, roots)})


def cmd_indecs(session: Session) -> ResultTable:
    """Directed order and the hom-matrix; keys 'A,B' hold dim Hom(A, B)."""
    cat = session.catalog
    names = [cat.indec_name(s) for s in range(cat.size)]
    entries = {}
    for s, a in enumerate(names):
        for t, b in enumerate(names):
            entries[f"{a},{b}"] = cat.hom[s][t]
    return session.table("indecs", names, entries)


def cmd_labels(session: Session) -> ResultTable:
    cat = session.catalog
    labels = cat.labels(session.dim())
    entries = {cat.name(L): list(L.multiplicities) for L in labels}
    return session.table("labels", [cat.name(L) for L in labels], entries)


def cmd_hall_poly(session: Session) -> ResultTable:
    """Every nonzero F^X_{A,B} with dim X = d, keyed 'X|A|B'."""
    cat, counter = session.catalog, session.counter
    d = session.dim()
    labels = cat.labels(d)
    entries = {}
    subdims = [()]
    for x in d:
        subdims = [prefix + (k,) for prefix in subdims for k in range(x + 1)]
    for X in labels:
        for e in subdims:
            for (A, B), poly in counter.hall_polynomials_into(X, e).items():
                entries[f"{cat.name(X)}|{cat.name(A)}|{cat.name(B)}"] = list(poly.coeffs)
    return session.table("hall-poly", [cat.name(L) for L in labels], entries,
                         degree_bounds=dict(sorted(counter.degree_bounds.items())))


def cmd_bar_matrix(session: Session) -> ResultTable:
    cat = session.catalog
    matrix = session.algebra.bar_matrix(session.dim())
    names = [cat.name(L) for L in matrix.labels]
    entries = {}
    for i, m in enumerate(names):
        for j, n in enumerate(names):
            entries[f"{m},{n}"] = list(matrix.entries[i][j].coeffs)
    return session.table("bar-matrix", names, entries,
                         degree_bounds=dict(sorted(session.counter.degree_bounds.items())))


def _census_table(session: Session, census) -> ResultTable:
    """
    Keys 'N|M|p' hold the number of points of orbit M over F_p in the space through N.
    A preprojective fiber that is not transversal over F_2 is left out with a warning.
    """
    cat, config = session.catalog, session.config
    labels = cat.labels(session.dim())
    entries = {}
    for N in labels:
        for p in config.primes:
            try:
                tally = census(cat, N, p, workers=config.workers, progress=config.progress)
            except TransversalityError as exc:
                if p != 2:
                    raise
                logger.warning("skipping %s over F_2: %s", cat.name(N), exc)
                continue
            for M, count in tally.items():
                entries[f"{cat.name(N)}|{cat.name(M)}|{p}"] = count
    return session.table("census", [cat.name(L) for L in labels], entries)


def cmd_slice_census(session: Session) -> ResultTable:
    return _census_table(session, slice_census)


def cmd_preproj_census(session: Session) -> ResultTable:
    return _census_table(session, preprojective_census)


def run_suite(session: Session, suite: str) -> SuiteReport:
    config = session.config
    verifier = Verifier(session.algebra, config.max_total_dim, dims=[config.dim] if config.dim else None,
                        workers=config.workers, progress=config.progress, seed=config.seed)
    return verifier.run(suite)


def _verdict(case) -> str:
    word = "pass" if case.passed else "FAIL"
    return f"{word} {case.detail}" if case.detail else word


def cmd_verify(session: Session, suite: str):
    report = run_suite(session, suite)
    entries = {c.case: _verdict(c) for c in report.cases}
    return session.table("verify", [c.case for c in report.cases], entries, suite=suite), report


COMMANDS = {
    "roots": cmd_roots,
    "indecs": cmd_indecs,
    "labels": cmd_labels,
    "hall-poly": cmd_hall_poly,
    "bar-matrix": cmd_bar_matrix,
    "slice-census": cmd_slice_census,
    "preproj-census": cmd_preproj_census,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="quiverhall", description=__doc__.strip().splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("command", nargs="?", choices=list(COMMANDS) + ["verify"],
                        help="what to compute; omit for the interactive menu")
    parser.add_argument("suite", nargs="?", help="suite for 'verify': " + ", ".join(SUITES))
    parser.add_argument("--quiver", help="quiver file")
    parser.add_argument("--dim", help="dimension vector, comma separated")
    parser.add_argument("--primes", help="working primes, comma separated (default %s)"
                        % ",".join(map(str, DEFAULT_CONFIG["primes"])))
    parser.add_argument("--seed", type=int, default=DEFAULT_CONFIG["seed"])
    parser.add_argument("--format", choices=FORMATS, default=DEFAULT_CONFIG["output_format"])
    parser.add_argument("--max-total-dim", type=int, default=DEFAULT_CONFIG["max_total_dim"],
                        help="verification budget on |d|")
    parser.add_argument("--cache", help="Hall polynomial cache directory (default $QUIVERHALL_CACHE)")
    parser.add_argument("--workers", type=int, default=DEFAULT_CONFIG["workers"],
                        help="processes for point censuses")
    parser.add_argument("--progress", action="store_true", help="show progress bars")
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="store_true")
    verbosity.add_argument("-q", "--quiet", action="store_true")
    return parser


def interactive_menu(config: RunConfig) -> int:
    """Numbered suite menu on the configured quiver; 0 exits."""
    menu = {str(k): name for k, name in enumerate(SUITES, start=1)}
    menu["0"] = "Exit"
    status = EXIT_OK
    with Session(config) as session:
        while True:
            print("\nSelect a verification suite to run:")
            for key, desc in menu.items():
                print(f"{key}. {desc}")
            choice = input("Enter choice: ").strip()
            if choice == "0":
                print("Exiting interactive menu.")
                return status
            if choice not in menu:
                print("Invalid choice. Please try again.")
                continue
            try:
                report = run_suite(session, menu[choice])
            except QuiverHallError as exc:
                print(f"error: {exc}")
                status = exc.exit_status
                continue
            print(report.summary())
            for failure in report.failures:
                print(f"  FAIL {failure.case}: {failure.detail}")
            if not report.ok:
                status = EXIT_VERIFICATION_FAILED


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    level = logging.DEBUG if args.verbose else logging.WARNING if args.quiet else logging.INFO
    logging.basicConfig(level=level, stream=sys.stderr, format="%(asctime)s %(levelname)s %(name)s: %(message)s")
    try:
        config = from_namespace(args)
        if args.command is None:
            return interactive_menu(config)
        with Session(config) as session:
            if args.command == "verify":
                if args.suite not in SUITES:
                    raise ConfigError(f"verify needs a suite: {', '.join(SUITES)}")
                table, report = cmd_verify(session, args.suite)
                sys.stdout.write(table.render(config.output_format))
                logger.info("%s", report.summary())
                return EXIT_OK if report.ok else EXIT_VERIFICATION_FAILED
            if args.suite is not None:
                raise ConfigError(f"unexpected argument {args.suite!r} for {args.command}")
            table = COMMANDS[args.command](session)
            sys.stdout.write(table.render(config.output_format))
            return EXIT_OK
    except QuiverHallError as exc:
        logger.error("%s", exc)
        return exc.exit_status


if __name__ == "__main__":
    sys.exit(main())
