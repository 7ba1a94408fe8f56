"""
Named suites that check the bar matrices and the three
counting routes against each other, case by case.

A suite never raises for a failing case: errors from the library are caught
per case and reported with the failing object named.
"""

import logging
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple

import attrs
import numpy as np
from tqdm import tqdm

from .errors import QuiverHallError, TransversalityError
from .hall_algebra import HallAlgebra
from .polynomials import IntPolyQ
from .quiver import DimVector, euler_form
from .slice_geometry import (
    BlockDecomposition,
    block_fiber_census,
    orthogonality_check,
    preprojective_census,
    slice_census,
)

__all__ = ["CaseResult", "SuiteReport", "Verifier", "SUITES", "dims_up_to"]

logger = logging.getLogger(__name__)

ASSOCIATIVITY_TRIPLES = 50


@attrs.frozen
class CaseResult:
    case: str
    passed: bool
    detail: str = ""


@attrs.frozen
class SuiteReport:
    suite: str
    cases: Tuple[CaseResult, ...] = attrs.field(converter=tuple)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.cases)

    @property
    def failures(self) -> List[CaseResult]:
        return [c for c in self.cases if not c.passed]

    def summary(self) -> str:
        return f"{self.suite}: {len(self.cases) - len(self.failures)}/{len(self.cases)} passed"


def dims_up_to(size: int, budget: int) -> List[DimVector]:
    """Nonzero dimension vectors with total dimension at most ``budget``, lexicographic."""
    out: List[DimVector] = [()]
    for _ in range(size):
        out = [prefix + (k,) for prefix in out for k in range(budget + 1) if sum(prefix) + k <= budget]
    return sorted(d for d in out if any(d))


class Verifier:
    """
    Runs suites over every dimension type within ``max_total_dim``, or over
    ``dims`` when given.

    :param algebra: Hall algebra whose counter supplies counts and polynomials.
    :param census_primes: primes used by point-count suites (default: the
                          counter's primes, at most four).
    """

    def __init__(self, algebra: HallAlgebra, max_total_dim: int = 4, dims: Optional[Sequence[DimVector]] = None,
                 census_primes: Optional[Sequence[int]] = None, workers: int = 1, progress: bool = False,
                 seed: int = 0):
        self.algebra = algebra
        self.counter = algebra.counter
        self.catalog = algebra.catalog
        self.max_total_dim = max_total_dim
        self.dims = [tuple(d) for d in dims] if dims else dims_up_to(self.catalog.quiver.size, max_total_dim)
        self.census_primes = tuple(census_primes or self.counter.primes[:4])
        self.workers = workers
        self.progress = progress
        self.seed = seed

    def run(self, suite: str) -> SuiteReport:
        if suite not in SUITES:
            raise ValueError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
        cases = list(getattr(self, SUITES[suite])())
        report = SuiteReport(suite, cases)
        logger.info("%s", report.summary())
        for failure in report.failures:
            logger.warning("%s failed: %s %s", suite, failure.case, failure.detail)
        return report

    def _iter(self, items, desc: str):
        return tqdm(items, desc=desc, disable=not self.progress, leave=False)

    def _guard(self, case: str, check: Callable[[], Tuple[bool, str]]) -> CaseResult:
        try:
            passed, detail = check()
        except QuiverHallError as exc:
            return CaseResult(case, False, str(exc))
        return CaseResult(case, passed, detail)

    def _d(self, d: DimVector) -> str:
        return "d=(" + ",".join(map(str, d)) + ")"

    def _named(self, tally) -> dict:
        return {self.catalog.name(M): n for M, n in tally.items()}

    # -- suites ----------------------------------------------------------------

    def row_sum(self) -> Iterator[CaseResult]:
        """sum_M Omega-bar_{M,N}(q) = q^(dim Ext^1(N,N))."""
        cat = self.catalog
        for d in self._iter(self.dims, "row-sum"):
            def check(d=d):
                matrix = self.algebra.bar_matrix(d)
                bad = []
                for j, N in enumerate(matrix.labels):
                    total = IntPolyQ()
                    for i in range(len(matrix.labels)):
                        total = total + matrix.entries[i][j]
                    if total != IntPolyQ.monomial(cat.ext_dim(N)):
                        bad.append(f"{cat.name(N)}: {total}")
                return not bad, "; ".join(bad)
            yield self._guard(self._d(d), check)

    def triangular(self) -> Iterator[CaseResult]:
        """Diagonal 1 and Omega-bar_{M,N} != 0 only when M degenerates to N."""
        cat = self.catalog
        for d in self._iter(self.dims, "triangular"):
            def check(d=d):
                matrix = self.algebra.bar_matrix(d)
                bad = []
                for i, M in enumerate(matrix.labels):
                    for j, N in enumerate(matrix.labels):
                        entry = matrix.entries[i][j]
                        if M == N and entry != IntPolyQ.constant(1):
                            bad.append(f"diagonal {cat.name(M)} is {entry}")
                        elif not entry.is_zero() and not cat.degenerates(M, N):
                            bad.append(f"({cat.name(M)}, {cat.name(N)}) is {entry} without degeneration")
                return not bad, "; ".join(bad)
            yield self._guard(self._d(d), check)

    def involution(self) -> Iterator[CaseResult]:
        for d in self._iter(self.dims, "involution"):
            def check(d=d):
                report = self.algebra.verify_involution(d)
                return report.ok, "; ".join(report.failures)
            yield self._guard(self._d(d), check)

    def three_route(self) -> Iterator[CaseResult]:
        """
        slice census = preprojective census = Omega-bar(p), orbit by orbit.

        Over F_2 the preprojective fiber may meet the tangent space of the
        orbit; such a case is decided by the slice alone and says so in its
        detail.  At odd primes a non-transversal fiber fails the case.
        """
        cat = self.catalog
        for d in self._iter(self.dims, "three-route"):
            for N in cat.labels(d):
                for p in self.census_primes:
                    def check(d=d, N=N, p=p):
                        matrix = self.algebra.bar_matrix(d)
                        j = matrix.index(N)
                        formula = {M: matrix.entries[i][j](p) for i, M in enumerate(matrix.labels)}
                        formula = {M: v for M, v in formula.items() if v}
                        sliced = slice_census(cat, N, p, self.workers)
                        try:
                            fibered = preprojective_census(cat, N, p, self.workers)
                        except TransversalityError as exc:
                            if p != 2:
                                raise
                            agree = sliced == formula
                            return agree, (f"preprojective route not transversal in characteristic 2 ({exc}); "
                                           f"formula {self._named(formula)}, slice {self._named(sliced)}")
                        if sliced == fibered == formula:
                            return True, ""
                        return False, (f"formula {self._named(formula)}, slice {self._named(sliced)}, "
                                       f"preprojective {self._named(fibered)}")
                    yield self._guard(f"{cat.name(N)} p={p}", check)

    def riedtmann(self) -> Iterator[CaseResult]:
        """
        Two-layer chains enumerated directly equal Hall numbers, and
        |F^M_{N_nu..N_1}| prod_s a_{N_s} = a_M |E_N cap O_M|.
        """
        cat = self.catalog
        primes = self.census_primes[:2]
        for d in self._iter([d for d in self.dims if sum(d) <= 4], "riedtmann"):
            labels = cat.labels(d)
            for e in _proper_sub_dims(d):
                f = tuple(a - b for a, b in zip(d, e))
                for X in labels:
                    for A in cat.labels(f):
                        for B in cat.labels(e):
                            def check(X=X, A=A, B=B):
                                bad = [p for p in primes
                                       if self.counter.count_filtrations_directly(X, (A, B), p)
                                       != self.counter.hall_number(X, A, B, p)]
                                return not bad, f"disagree at p={bad}" if bad else ""
                            yield self._guard(f"F^{cat.name(X)}_({cat.name(A)}, {cat.name(B)})", check)
            for N in labels:
                for p in primes:
                    def check(N=N, p=p):
                        sliced = slice_census(cat, N, p, self.workers)
                        chain = self.counter.canonical_chain(N)
                        aut_layers = 1
                        for layer in N.layers():
                            aut_layers *= cat.aut_order_poly(layer)(p)
                        bad = []
                        for M in labels:
                            lhs = self.counter.filtration_count(M, chain, p) * aut_layers
                            rhs = cat.aut_order_poly(M)(p) * sliced.get(M, 0)
                            if lhs != rhs:
                                bad.append(f"{cat.name(M)}: {lhs} != {rhs}")
                        return not bad, "; ".join(bad)
                    yield self._guard(f"filtrations of type {cat.name(N)} p={p}", check)

    def hall_assoc(self) -> Iterator[CaseResult]:
        """(e_A e_B) e_C = e_A (e_B e_C) on seeded random triples."""
        cat = self.catalog
        pool = [L for d in dims_up_to(cat.quiver.size, max(1, self.max_total_dim - 2)) for L in cat.labels(d)]
        rng = np.random.default_rng(self.seed)
        triples = []
        for _ in range(10_000):
            if len(triples) == ASSOCIATIVITY_TRIPLES:
                break
            a, b, c = (pool[int(k)] for k in rng.integers(0, len(pool), size=3))
            if sum(map(sum, (cat.dim_vector(a), cat.dim_vector(b), cat.dim_vector(c)))) <= self.max_total_dim:
                triples.append((a, b, c))
        for a, b, c in self._iter(triples, "hall-assoc"):
            def check(a=a, b=b, c=c):
                ea, eb, ec = (self.algebra.basis_element(x) for x in (a, b, c))
                left = self.algebra.pbw_product(self.algebra.pbw_product(ea, eb), ec)
                right = self.algebra.pbw_product(ea, self.algebra.pbw_product(eb, ec))
                return left == right, "" if left == right else "products differ"
            yield self._guard(f"({cat.name(a)}, {cat.name(b)}, {cat.name(c)})", check)

    def monic(self) -> Iterator[CaseResult]:
        """
        Nonzero generalized Hall polynomials are monic; a nonzero Omega-bar_{M,N}
        is monic of degree dim End N - dim End M.
        """
        cat = self.catalog
        for d in self._iter(self.dims, "monic"):
            def check(d=d):
                matrix = self.algebra.bar_matrix(d)
                bad = []
                for i, M in enumerate(matrix.labels):
                    for j, N in enumerate(matrix.labels):
                        poly = self.counter.generalized_hall_polynomial(M, N)
                        if M == N and poly.is_zero():
                            bad.append(f"F^{cat.name(M)}_{cat.name(N)} vanishes")
                        if not poly.is_zero() and poly.leading_coefficient != 1:
                            bad.append(f"F^{cat.name(M)}_{cat.name(N)} = {poly}")
                        entry = matrix.entries[i][j]
                        expected = matrix.end_dims[j] - matrix.end_dims[i]
                        if not entry.is_zero() and (entry.leading_coefficient != 1 or entry.degree != expected):
                            bad.append(f"Omega-bar({cat.name(M)}, {cat.name(N)}) = {entry}, degree {expected} expected")
                return not bad, "; ".join(bad)
            yield self._guard(self._d(d), check)

    def decomposition(self) -> Iterator[CaseResult]:
        """
        e_N = e_{N_1} ... e_{N_nu}, the same for the dual basis, and the
        e_M-coefficient of e_{N_nu} ... e_{N_1} is v^(S - end M) F^M_{N_nu..N_1}(v^2)
        with S = sum_s end N_s + sum_{s>t} <dim N_s, dim N_t>.
        """
        cat, alg = self.catalog, self.algebra
        for d in self._iter(self.dims, "decomposition"):
            for N in cat.labels(d):
                def check(d=d, N=N):
                    layers = [L for L in N.layers() if not L.is_zero()]
                    bad = []
                    if alg.product(alg.basis_element(L) for L in layers) != alg.basis_element(N):
                        bad.append("PBW factorization")
                    if alg.product(alg.dual_basis_element(L) for L in layers) != alg.dual_basis_element(N):
                        bad.append("dual PBW factorization")
                    top_down = alg.product(alg.basis_element(L) for L in reversed(layers))
                    s = sum(cat.end_dim(L) for L in layers)
                    for a in range(len(layers)):
                        for b in range(a):
                            s += euler_form(cat.quiver, cat.dim_vector(layers[a]), cat.dim_vector(layers[b]))
                    for M in cat.labels(d):
                        poly = self.counter.generalized_hall_polynomial(M, N)
                        expected = poly.to_laurent().shift(s - cat.end_dim(M))
                        if top_down.coefficient(M) != expected:
                            bad.append(f"coefficient of e_{cat.name(M)} is {top_down.coefficient(M)}, "
                                       f"expected {expected}")
                    return not bad, "; ".join(bad)
                yield self._guard(cat.name(N), check)

    def orthogonality(self) -> Iterator[CaseResult]:
        """
        Preprojective fiber over N* is the trace-orthogonal complement of
        T_N(O_N), and meets it only in 0 away from characteristic 2.
        """
        cat = self.catalog
        for d in self._iter(self.dims, "orthogonality"):
            for N in cat.labels(d):
                for p in self.census_primes[:3]:
                    def check(N=N, p=p):
                        report = orthogonality_check(cat.rep_of(N, p))
                        ok = report.ok and report.fiber_dim == cat.ext_dim(N) and (report.transversal or p == 2)
                        return ok, "" if ok and report.transversal else str(report)
                    yield self._guard(f"{cat.name(N)} p={p}", check)

    def fiber(self) -> Iterator[CaseResult]:
        """|Y_N cap O_M| = p^(dim u_d) |E_N cap O_M|."""
        cat = self.catalog
        for d in self._iter(self.dims, "fiber"):
            for N in cat.labels(d):
                for p in self.census_primes[:2]:
                    def check(N=N, p=p):
                        scale = p ** BlockDecomposition.of(cat, N).u_dim
                        whole = block_fiber_census(cat, N, p, self.workers)
                        sliced = {M: scale * n for M, n in slice_census(cat, N, p, self.workers).items()}
                        if whole == sliced:
                            return True, ""
                        return False, f"fiber {self._named(whole)}, scaled slice {self._named(sliced)}"
                    yield self._guard(f"{cat.name(N)} p={p}", check)


def _proper_sub_dims(d: DimVector) -> List[DimVector]:
    out: List[DimVector] = [()]
    for x in d:
        out = [prefix + (k,) for prefix in out for k in range(x + 1)]
    return [e for e in out if any(e) and e != tuple(d)]


SUITES: Dict[str, str] = {
    "row-sum": "row_sum",
    "triangular": "triangular",
    "involution": "involution",
    "three-route": "three_route",
    "riedtmann": "riedtmann",
    "hall-assoc": "hall_assoc",
    "monic": "monic",
    "decomposition": "decomposition",
    "orthogonality": "orthogonality",
    "fiber": "fiber",
}
