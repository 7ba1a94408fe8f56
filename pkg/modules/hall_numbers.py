"""
Subrepresentation and filtration counts over F_p, and their
interpolation to exact (generalized) Hall polynomials.

Conventions: F^X_{A,B} counts subrepresentations U of X with U ~ B and
X/U ~ A.  A chain (C_nu, ..., C_1) is read with C_1 as the deepest
subobject and C_nu as the top quotient.
"""

import logging
from collections import Counter
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import attrs
import numpy as np
from sympy import nextprime

from .errors import DimensionMismatchError, InterpolationError, InvariantViolation
from .gf_linalg import FpMatrix, SubspaceBasis, complement_in, enumerate_subspaces, inverse, kernel_basis
from .indecomposables import Rep
from .orbits import OrbitCatalog, OrbitLabel
from .polynomials import IntPolyQ, interpolate_exact
from .quiver import DimVector, euler_form

__all__ = [
    "CountSample",
    "HallCounter",
    "heads_first",
    "stable_subspaces",
    "subquotient",
    "interpolate",
    "DEFAULT_PRIMES",
    "HOLDOUT",
]

logger = logging.getLogger(__name__)

DEFAULT_PRIMES = (2, 3, 5, 7, 11, 13)
HOLDOUT = 2


@attrs.frozen
class CountSample:
    """A count over F_p for a key of label names."""

    p: int
    key: Tuple[str, ...]
    count: int = attrs.field(validator=attrs.validators.ge(0))


def heads_first(q) -> List[int]:
    """Vertex order in which every arrow i -> j has j before i."""
    order: List[int] = []
    remaining = set(range(q.size))
    while remaining:
        ready = [v for v in sorted(remaining) if all(j not in remaining for i, j in q.arrow_indices if i == v)]
        if not ready:
            raise InvariantViolation(f"quiver {q.vertices} has an oriented cycle")
        order.extend(ready)
        remaining.difference_update(ready)
    return order


def stable_subspaces(X: Rep, e: Sequence[int]) -> Iterator[Tuple[SubspaceBasis, ...]]:
    """
    Every graded subspace U = (U_i), dim U_i = e_i, with X_a(U_i) in U_j for
    all arrows a: i -> j, exactly once.

    U_j is fixed at arrow heads first; U_i then ranges over the e_i-dimensional
    subspaces of the preimage of all its heads, so no candidate is rejected.
    """
    q, p, d = X.quiver, X.p, X.dim
    e = tuple(e)
    if len(e) != len(d) or any(x < 0 or x > y for x, y in zip(e, d)):
        raise DimensionMismatchError(f"cannot take a {e}-dimensional subspace of a {d}-dimensional representation")
    order = heads_first(q)
    outgoing: Dict[int, List[Tuple[int, FpMatrix]]] = {k: [] for k in range(q.size)}
    for (i, j), xa in zip(q.arrow_indices, X.matrices):
        outgoing[i].append((j, xa))

    chosen: List[Optional[SubspaceBasis]] = [None] * q.size
    annihilators: List[Optional[np.ndarray]] = [None] * q.size

    def preimage(i: int) -> SubspaceBasis:
        rows = [(annihilators[j] @ xa.data) % p for j, xa in outgoing[i]]
        equations = np.vstack(rows) if rows else np.zeros((0, d[i]), dtype=np.int64)
        return kernel_basis(FpMatrix(p, equations))

    def rec(pos: int) -> Iterator[Tuple[SubspaceBasis, ...]]:
        if pos == q.size:
            yield tuple(chosen)
            return
        i = order[pos]
        room = preimage(i)
        if room.dim < e[i]:
            return
        for coords in enumerate_subspaces(room.dim, e[i], p):
            chosen[i] = SubspaceBasis.span(p, d[i], (coords.basis.data @ room.basis.data) % p)
            annihilators[i] = kernel_basis(chosen[i].basis).basis.data
            yield from rec(pos + 1)
        chosen[i] = annihilators[i] = None

    yield from rec(0)


def subquotient(X: Rep, U: Sequence[SubspaceBasis]) -> Tuple[Rep, Rep]:
    """
    The subrepresentation on U and the quotient X/U, both in the basis
    (U_i basis, complement_in basis) at every vertex.
    """
    q, p = X.quiver, X.p
    bases, inverses = [], []
    for i in range(q.size):
        full = SubspaceBasis.full(p, X.dim[i])
        comp = complement_in(U[i], full)
        g = FpMatrix(p, np.vstack([U[i].basis.data, comp.basis.data]).reshape(X.dim[i], X.dim[i]).T)
        bases.append(g)
        inverses.append(inverse(g))
    moved = X.change_basis(bases, inverses)
    e = tuple(u.dim for u in U)
    sub_mats, quot_mats = [], []
    for (i, j), m in zip(q.arrow_indices, moved.matrices):
        sub_mats.append(FpMatrix(p, m.data[: e[j], : e[i]]))
        quot_mats.append(FpMatrix(p, m.data[e[j]:, e[i]:]))
    quotient_dim = tuple(x - y for x, y in zip(X.dim, e))
    return Rep(q, p, e, sub_mats), Rep(q, p, quotient_dim, quot_mats)


def interpolate(samples: Sequence[CountSample], degree_bound: int, holdout: int = HOLDOUT) -> IntPolyQ:
    """
    Fit the first ``degree_bound + 1`` samples (by prime) exactly and check the rest.

    :raises InterpolationError: too few samples, non-integer coefficients or a
                                holdout mismatch.
    """
    ordered = sorted(samples, key=lambda s: s.p)
    primes = [s.p for s in ordered]
    if len(set(primes)) != len(primes):
        raise InterpolationError(f"repeated prime among samples {primes}")
    needed = degree_bound + 1 + holdout
    if len(ordered) < needed:
        raise InterpolationError(f"degree bound {degree_bound} needs {needed} samples, got {len(ordered)}")
    fit = ordered[: degree_bound + 1]
    poly = interpolate_exact([(s.p, s.count) for s in fit])
    for s in ordered[degree_bound + 1:]:
        if poly(s.p) != s.count:
            raise InterpolationError(
                f"{'|'.join(s.key)}: fitted {poly} predicts {poly(s.p)} at p={s.p}, counted {s.count} "
                f"(degree bound {degree_bound})"
            )
    return poly


class HallCounter:
    """
    Counts and polynomials for one quiver.

    :param catalog: orbit catalog supplying indecomposables at every prime.
    :param primes: working primes; extended with further primes when a degree
                   bound needs more interpolation nodes.
    :param cache: optional object with ``get(key)`` / ``put(key, poly)``.
    """

    def __init__(self, catalog: OrbitCatalog, primes: Sequence[int] = DEFAULT_PRIMES, cache=None):
        self.catalog = catalog
        self.primes = tuple(sorted(primes))
        self.cache = cache
        self._census: Dict[Tuple[OrbitLabel, DimVector, int], Counter] = {}
        self._classified: Dict[tuple, OrbitLabel] = {}
        self._only_label: Dict[DimVector, Optional[OrbitLabel]] = {}
        self._hall: Dict[Tuple[OrbitLabel, OrbitLabel, OrbitLabel], IntPolyQ] = {}
        self._chains: Dict[tuple, int] = {}
        self._chain_polys: Dict[tuple, IntPolyQ] = {}
        self.degree_bounds: Dict[str, int] = {}

    # -- counting over F_p -------------------------------------------------

    def _classify(self, rep: Rep) -> OrbitLabel:
        dim = tuple(rep.dim)
        if dim not in self._only_label:
            labels = self.catalog.labels(dim)
            self._only_label[dim] = labels[0] if len(labels) == 1 else None
        if self._only_label[dim] is not None:
            return self._only_label[dim]
        key = rep.key()
        if key not in self._classified:
            self._classified[key] = self.catalog.classify(rep)
        return self._classified[key]

    def subquotient_counts(self, X: OrbitLabel, e: Sequence[int], p: int) -> Counter:
        """Counter over (quotient label, sub label) of the e-dimensional subrepresentations of X."""
        key = (X, tuple(e), p)
        if key not in self._census:
            rep = self.catalog.rep_of(X, p)
            counts: Counter = Counter()
            for U in stable_subspaces(rep, e):
                sub, quot = subquotient(rep, U)
                counts[(self._classify(quot), self._classify(sub))] += 1
            logger.debug("F_%d: %s has %d subrepresentations of dimension %s",
                         p, self.catalog.name(X), sum(counts.values()), tuple(e))
            self._census[key] = counts
        return self._census[key]

    def hall_number(self, X: OrbitLabel, A: OrbitLabel, B: OrbitLabel, p: int) -> int:
        """F^X_{A,B}(p): subobjects U ~ B with quotient X/U ~ A."""
        dx, da, db = (self.catalog.dim_vector(L) for L in (X, A, B))
        if tuple(a + b for a, b in zip(da, db)) != dx:
            raise DimensionMismatchError(
                f"dim {self.catalog.name(A)} + dim {self.catalog.name(B)} != dim {self.catalog.name(X)}"
            )
        return self.subquotient_counts(X, db, p)[(A, B)]

    def _check_chain(self, M: OrbitLabel, chain: Sequence[OrbitLabel]) -> Tuple[OrbitLabel, ...]:
        total = [0] * self.catalog.quiver.size
        for C in chain:
            total = [a + b for a, b in zip(total, self.catalog.dim_vector(C))]
        if tuple(total) != self.catalog.dim_vector(M):
            raise DimensionMismatchError(
                f"chain ({', '.join(self.catalog.name(C) for C in chain)}) does not add up to "
                f"dim {self.catalog.name(M)}"
            )
        return tuple(C for C in chain if not C.is_zero())

    def filtration_count(self, M: OrbitLabel, chain: Sequence[OrbitLabel], p: int) -> int:
        """
        Number of filtrations of M with subquotients (C_nu, ..., C_1), C_1 deepest:
        count(M; C_nu..C_1) = sum_Y F^M_{C_nu,Y}(p) count(Y; C_nu-1..C_1).
        """
        return self._filtrations(M, self._check_chain(M, chain), p)

    def _filtrations(self, M: OrbitLabel, chain: Tuple[OrbitLabel, ...], p: int) -> int:
        if not chain:
            return int(M.is_zero())
        if len(chain) == 1:
            return int(M == chain[0])
        key = (M, chain, p)
        if key not in self._chains:
            top, rest = chain[0], chain[1:]
            e = tuple(a - b for a, b in zip(self.catalog.dim_vector(M), self.catalog.dim_vector(top)))
            total = 0
            for (A, B), n in self.subquotient_counts(M, e, p).items():
                if A == top:
                    total += n * self._filtrations(B, rest, p)
            self._chains[key] = total
        return self._chains[key]

    def count_filtrations_directly(self, M: OrbitLabel, chain: Sequence[OrbitLabel], p: int) -> int:
        """Enumerate whole chains of subrepresentations; slow, used as a cross-check."""
        chain = self._check_chain(M, chain)

        def rec(rep: Rep, layers: Tuple[OrbitLabel, ...]) -> int:
            if not layers:
                return int(not any(rep.dim))
            top = layers[0]
            e = tuple(a - b for a, b in zip(rep.dim, self.catalog.dim_vector(top)))
            if any(x < 0 for x in e):
                return 0
            total = 0
            for U in stable_subspaces(rep, e):
                sub, quot = subquotient(rep, U)
                if self._classify(quot) == top:
                    total += rec(sub, layers[1:])
            return total

        return rec(self.catalog.rep_of(M, p), chain)

    # -- polynomials ---------------------------------------------------------

    def canonical_chain(self, N: OrbitLabel) -> Tuple[OrbitLabel, ...]:
        """(N_nu, ..., N_1) for the decomposition N = sum_s N_s."""
        return tuple(reversed(N.layers()))

    def degree_bound(self, X: OrbitLabel, A: OrbitLabel, B: OrbitLabel) -> int:
        """
        min of the graded Grassmannian dimension sum_i e_i (d_i - e_i) and
        -<dim A, dim B> + dim End X - dim End A - dim End B, at least 0.
        """
        cat = self.catalog
        d, a, e = cat.dim_vector(X), cat.dim_vector(A), cat.dim_vector(B)
        grassmannian = sum(x * (y - x) for x, y in zip(e, d))
        riedtmann = -euler_form(cat.quiver, a, e) + cat.end_dim(X) - cat.end_dim(A) - cat.end_dim(B)
        return max(0, min(grassmannian, riedtmann))

    def primes_for(self, degree_bound: int) -> Tuple[int, ...]:
        needed = degree_bound + 1 + HOLDOUT
        primes = list(self.primes)
        while len(primes) < needed:
            primes.append(int(nextprime(primes[-1])))
        if len(primes) > len(self.primes):
            logger.warning("degree bound %d: extending primes to %s", degree_bound, primes)
        return tuple(primes)

    def _key(self, *labels: OrbitLabel) -> Tuple[str, ...]:
        return tuple(self.catalog.name(L) for L in labels)

    def hall_polynomial(self, X: OrbitLabel, A: OrbitLabel, B: OrbitLabel) -> IntPolyQ:
        """F^X_{A,B}(q) by multi-prime counting and :func:`interpolate`."""
        memo = (X, A, B)
        if memo in self._hall:
            return self._hall[memo]
        key = self._key(X, A, B)
        bound = self.degree_bound(X, A, B)
        # recorded on cache hits too, so provenance does not depend on the cache
        self.degree_bounds["|".join(key)] = bound
        cached = self.cache.get("|".join(key)) if self.cache is not None else None
        if cached is not None:
            poly = cached
        else:
            samples = [CountSample(p, key, self.hall_number(X, A, B, p)) for p in self.primes_for(bound)]
            poly = interpolate(samples, bound)
            if self.cache is not None:
                self.cache.put("|".join(key), poly)
        self._hall[memo] = poly
        return poly

    def hall_polynomials_into(self, X: OrbitLabel, e: Sequence[int]) -> Dict[Tuple[OrbitLabel, OrbitLabel], IntPolyQ]:
        """All nonzero F^X_{A,B} with dim B = e."""
        cat = self.catalog
        f = tuple(a - b for a, b in zip(cat.dim_vector(X), e))
        out = {}
        for A in cat.labels(f):
            for B in cat.labels(e):
                poly = self.hall_polynomial(X, A, B)
                if not poly.is_zero():
                    out[(A, B)] = poly
        return out

    def chain_polynomial(self, M: OrbitLabel, chain: Sequence[OrbitLabel]) -> IntPolyQ:
        """F^M_{C_nu..C_1}(q) composed exactly from two-step Hall polynomials."""
        return self._chain_poly(M, self._check_chain(M, chain))

    def _chain_poly(self, M: OrbitLabel, chain: Tuple[OrbitLabel, ...]) -> IntPolyQ:
        if len(chain) <= 1:
            return IntPolyQ.constant(self._filtrations(M, chain, self.primes[0]))
        key = (M, chain)
        if key not in self._chain_polys:
            top, rest = chain[0], chain[1:]
            e = tuple(a - b for a, b in zip(self.catalog.dim_vector(M), self.catalog.dim_vector(top)))
            total = IntPolyQ()
            for Y in self.catalog.labels(e):
                step = self.hall_polynomial(M, top, Y)
                if not step.is_zero():
                    total = total + step * self._chain_poly(Y, rest)
            self._chain_polys[key] = total
        return self._chain_polys[key]

    def generalized_hall_polynomial(self, M: OrbitLabel, N: OrbitLabel) -> IntPolyQ:
        """
        F^M_{N_nu..N_1}(q) for the canonical decomposition of N, checked
        against the filtration counts at every working prime.
        """
        chain = self.canonical_chain(N)
        poly = self.chain_polynomial(M, chain)
        for p in self.primes:
            count = self.filtration_count(M, chain, p)
            if poly(p) != count:
                raise InterpolationError(
                    f"generalized F^{self.catalog.name(M)}_{self.catalog.name(N)}: "
                    f"polynomial {poly} gives {poly(p)} at p={p}, filtrations counted {count}"
                )
        return poly
