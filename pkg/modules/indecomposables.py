"""
Representations over F_p, Hom/Ext dimensions, and one
representative indecomposable per positive root in a directed order.
"""

import heapq
import itertools
import logging
from typing import Dict, List, Sequence, Tuple

import attrs
import numpy as np

from .errors import DimensionMismatchError, InvariantViolation, NotARootError, SearchExhaustedError
from .gf_linalg import FpMatrix, rank
from .quiver import DimVector, QuiverSpec, check_dim_vector, positive_roots

__all__ = [
    "Rep",
    "IndecTable",
    "hom_dim",
    "ext_dim",
    "commutation_matrix",
    "build_indecomposable",
    "directed_order",
    "build_indec_table",
    "EXHAUSTIVE_LIMIT",
    "MAX_ATTEMPTS",
]

logger = logging.getLogger(__name__)

# R_root is scanned point by point when it has at most this many points.
EXHAUSTIVE_LIMIT = 2 ** 16
MAX_ATTEMPTS = 10 ** 6


@attrs.frozen(eq=False)
class Rep:
    """
    A point of R_d over F_p: one d_j x d_i matrix per arrow i -> j, in the
    quiver's arrow order.
    """

    quiver: QuiverSpec
    p: int
    dim: DimVector = attrs.field(converter=tuple)
    matrices: Tuple[FpMatrix, ...] = attrs.field(converter=tuple)

    def __attrs_post_init__(self) -> None:
        check_dim_vector(self.quiver, self.dim)
        if len(self.matrices) != len(self.quiver.arrows):
            raise DimensionMismatchError(
                f"{len(self.matrices)} matrices for {len(self.quiver.arrows)} arrows"
            )
        for (i, j), m in zip(self.quiver.arrow_indices, self.matrices):
            if m.p != self.p:
                raise DimensionMismatchError(f"matrix over F_{m.p} in a representation over F_{self.p}")
            if m.shape != (self.dim[j], self.dim[i]):
                raise DimensionMismatchError(
                    f"arrow {self.quiver.vertices[i]}->{self.quiver.vertices[j]} needs shape "
                    f"{(self.dim[j], self.dim[i])}, got {m.shape}"
                )

    @staticmethod
    def coordinate_count(q: QuiverSpec, d: Sequence[int]) -> int:
        """dim R_d."""
        return sum(d[i] * d[j] for i, j in q.arrow_indices)

    @classmethod
    def zero(cls, q: QuiverSpec, p: int, d: Sequence[int]) -> "Rep":
        d = check_dim_vector(q, d)
        return cls(q, p, d, [FpMatrix.zeros(p, d[j], d[i]) for i, j in q.arrow_indices])

    @classmethod
    def from_coordinates(cls, q: QuiverSpec, p: int, d: Sequence[int], coords: Sequence[int]) -> "Rep":
        """Inverse of :meth:`coordinates` (row-major matrices, arrow order)."""
        coords = np.asarray(coords, dtype=np.int64)
        if coords.size != cls.coordinate_count(q, d):
            raise DimensionMismatchError(f"{coords.size} coordinates for dim R_d = {cls.coordinate_count(q, d)}")
        matrices, start = [], 0
        for i, j in q.arrow_indices:
            size = d[i] * d[j]
            matrices.append(FpMatrix(p, coords[start:start + size].reshape(d[j], d[i])))
            start += size
        return cls(q, p, d, matrices)

    def coordinates(self) -> np.ndarray:
        if not self.matrices:
            return np.zeros(0, dtype=np.int64)
        return np.concatenate([m.data.reshape(-1) for m in self.matrices])

    def direct_sum(self, other: "Rep") -> "Rep":
        """Block-diagonal sum, ``self`` occupying the leading coordinates at each vertex."""
        if other.quiver != self.quiver or other.p != self.p:
            raise DimensionMismatchError("direct sum of representations of different quivers or fields")
        d = tuple(a + b for a, b in zip(self.dim, other.dim))
        matrices = []
        for (i, j), a, b in zip(self.quiver.arrow_indices, self.matrices, other.matrices):
            block = np.zeros((d[j], d[i]), dtype=np.int64)
            block[: a.rows, : a.cols] = a.data
            block[a.rows:, a.cols:] = b.data
            matrices.append(FpMatrix(self.p, block))
        return Rep(self.quiver, self.p, d, matrices)

    def change_basis(self, bases: Sequence[FpMatrix], inverses: Sequence[FpMatrix]) -> "Rep":
        """
        The representation g^-1 . M . g: arrow i -> j becomes inv_j @ M @ g_i, where
        ``bases[i]`` holds the new basis of V_i as columns.
        """
        matrices = [inverses[j] @ m @ bases[i] for (i, j), m in zip(self.quiver.arrow_indices, self.matrices)]
        return Rep(self.quiver, self.p, self.dim, matrices)

    def key(self):
        return self.p, self.dim, tuple(m.key() for m in self.matrices)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Rep):
            return NotImplemented
        return self.quiver == other.quiver and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())


def commutation_matrix(X: Rep, Y: Rep) -> np.ndarray:
    """
    Matrix of f -> (f_j X_a - Y_a f_i)_a on the space of vertexwise linear
    maps f_i : X_i -> Y_i (row-major, vertex order).  Its kernel is Hom(X, Y)
    and its cokernel is Ext^1(X, Y).
    """
    if X.quiver != Y.quiver or X.p != Y.p:
        raise DimensionMismatchError("Hom between representations of different quivers or fields")
    q = X.quiver
    var_offsets, start = [], 0
    for i in range(q.size):
        var_offsets.append(start)
        start += Y.dim[i] * X.dim[i]
    n_vars = start
    blocks = []
    for (i, j), xa, ya in zip(q.arrow_indices, X.matrices, Y.matrices):
        n_eq = Y.dim[j] * X.dim[i]
        block = np.zeros((n_eq, n_vars), dtype=np.int64)
        if n_eq:
            left = np.kron(np.eye(Y.dim[j], dtype=np.int64), xa.data.T)
            right = np.kron(ya.data, np.eye(X.dim[i], dtype=np.int64))
            block[:, var_offsets[j]:var_offsets[j] + Y.dim[j] * X.dim[j]] += left
            block[:, var_offsets[i]:var_offsets[i] + Y.dim[i] * X.dim[i]] -= right
        blocks.append(block)
    if not blocks:
        return np.zeros((0, n_vars), dtype=np.int64)
    return np.vstack(blocks) % X.p


def hom_dim(X: Rep, Y: Rep) -> int:
    """dim_k Hom_Q(X, Y)."""
    m = commutation_matrix(X, Y)
    return m.shape[1] - rank(FpMatrix(X.p, m))


def ext_dim(X: Rep, Y: Rep) -> int:
    """dim_k Ext^1_Q(X, Y), the cokernel dimension of the commutation map."""
    m = commutation_matrix(X, Y)
    return m.shape[0] - rank(FpMatrix(X.p, m))


def build_indecomposable(q: QuiverSpec, root: Sequence[int], p: int, seed: int = 0) -> Rep:
    """
    Find a point of R_root(F_p) with one-dimensional endomorphism ring.

    Small spaces are scanned in lexicographic coordinate order; larger ones are
    sampled with a generator seeded by (seed, p, root).

    :raises NotARootError: if ``root`` is not a positive root of ``q``.
    :raises SearchExhaustedError: after :data:`MAX_ATTEMPTS` rejected points.
    """
    root = check_dim_vector(q, root)
    if root not in positive_roots(q):
        raise NotARootError(f"{root} is not a positive root of {q.components}")
    n = Rep.coordinate_count(q, root)
    if p ** n <= EXHAUSTIVE_LIMIT:
        candidates = itertools.product(range(p), repeat=n)
    else:
        rng = np.random.default_rng([seed, p, *root])
        candidates = (rng.integers(0, p, size=n) for _ in range(MAX_ATTEMPTS))
    for attempt, coords in enumerate(candidates):
        if attempt >= MAX_ATTEMPTS:
            break
        rep = Rep.from_coordinates(q, p, root, coords)
        if hom_dim(rep, rep) == 1:
            logger.debug("root %s over F_%d: accepted after %d candidates", root, p, attempt + 1)
            return rep
    raise SearchExhaustedError(
        f"no point with one-dimensional End found for root {root} over F_{p}; "
        "raise the attempt bound or change the prime"
    )


def directed_order(indecs: Sequence[Rep], reverse_ties: bool = False) -> List[int]:
    """
    Topological order of the digraph s -> t iff Hom(I_s, I_t) != 0 (s != t).

    Ties go to the smallest dimension vector, or the largest when
    ``reverse_ties`` is set.
    """
    n = len(indecs)
    succ: Dict[int, List[int]] = {s: [] for s in range(n)}
    indegree = [0] * n
    for s, t in itertools.permutations(range(n), 2):
        if hom_dim(indecs[s], indecs[t]):
            succ[s].append(t)
            indegree[t] += 1

    def tie_key(s: int):
        d = indecs[s].dim
        return (tuple(-x for x in d) if reverse_ties else d), s

    ready = [tie_key(s) for s in range(n) if indegree[s] == 0]
    heapq.heapify(ready)
    order = []
    while ready:
        _, s = heapq.heappop(ready)
        order.append(s)
        for t in succ[s]:
            indegree[t] -= 1
            if indegree[t] == 0:
                heapq.heappush(ready, tie_key(t))
    if len(order) != n:
        raise InvariantViolation("Hom digraph of the indecomposables has a cycle")
    return order


@attrs.frozen(eq=False)
class IndecTable:
    """
    Indecomposables I_1..I_nu over F_p in directed order with h[s][t] = dim Hom(I_s, I_t).
    """

    quiver: QuiverSpec
    p: int
    indecs: Tuple[Rep, ...] = attrs.field(converter=tuple)
    hom: Tuple[Tuple[int, ...], ...] = attrs.field(converter=lambda rows: tuple(tuple(r) for r in rows))

    @property
    def roots(self) -> List[DimVector]:
        return [r.dim for r in self.indecs]

    @property
    def size(self) -> int:
        return len(self.indecs)

    def hom_vector(self, rep: Rep) -> List[int]:
        """(dim Hom(I_t, rep))_t."""
        return [hom_dim(indec, rep) for indec in self.indecs]


def build_indec_table(q: QuiverSpec, p: int, seed: int = 0, reverse_ties: bool = False) -> IndecTable:
    """Build, order and check the indecomposables of ``q`` over F_p."""
    found = [build_indecomposable(q, root, p, seed) for root in positive_roots(q)]
    order = directed_order(found, reverse_ties=reverse_ties)
    indecs = [found[s] for s in order]
    hom = [[hom_dim(a, b) for b in indecs] for a in indecs]
    for s in range(len(indecs)):
        if hom[s][s] != 1:
            raise InvariantViolation(f"dim End of {indecs[s].dim} is {hom[s][s]}, expected 1")
        for t in range(s + 1, len(indecs)):
            if hom[t][s]:
                raise InvariantViolation(f"Hom(I_{t + 1}, I_{s + 1}) != 0 against the directed order")
    logger.info("built %d indecomposables over F_%d", len(indecs), p)
    return IndecTable(q, p, indecs, hom)
