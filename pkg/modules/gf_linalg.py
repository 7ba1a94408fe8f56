"""
Exact linear algebra over prime fields F_p.

Matrices are numpy int64 arrays reduced mod p and frozen after construction.
Subspaces are stored by their reduced row echelon basis, which is the
canonical representative used for enumeration and hashing.
"""

import itertools
import logging
from typing import Iterable, Iterator, List, Sequence, Tuple

import attrs
import numpy as np
from sympy import isprime

from .errors import ContainmentError, DimensionMismatchError, SingularMatrixError

__all__ = [
    "FpMatrix",
    "SubspaceBasis",
    "rank",
    "rref",
    "kernel_basis",
    "inverse",
    "complement_in",
    "intersection_dim",
    "enumerate_subspaces",
    "pivot_patterns",
    "subspaces_with_pivots",
    "gaussian_binomial",
]

logger = logging.getLogger(__name__)


def _check_prime(instance, attribute, value) -> None:
    if not isprime(int(value)):
        raise ValueError(f"{attribute.name}={value} is not a prime")


@attrs.frozen(eq=False)
class FpMatrix:
    """
    Dense matrix over F_p.

    :param p: prime modulus.
    :param data: anything numpy can turn into a 2-d integer array; it is
                 copied, reduced mod p and made read-only.
    """

    p: int = attrs.field(validator=_check_prime)
    data: np.ndarray = attrs.field(repr=False)

    def __attrs_post_init__(self) -> None:
        arr = np.array(self.data, dtype=np.int64, copy=True)
        if arr.ndim != 2:
            raise DimensionMismatchError(f"FpMatrix needs a 2-d array, got shape {arr.shape}")
        arr %= self.p
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)

    @classmethod
    def zeros(cls, p: int, rows: int, cols: int) -> "FpMatrix":
        return cls(p, np.zeros((rows, cols), dtype=np.int64))

    @classmethod
    def identity(cls, p: int, n: int) -> "FpMatrix":
        return cls(p, np.eye(n, dtype=np.int64))

    @classmethod
    def from_rows(cls, p: int, rows: Sequence[Sequence[int]], cols: int = None) -> "FpMatrix":
        """Build from a list of rows; ``cols`` is needed only when ``rows`` is empty."""
        if len(rows) == 0:
            return cls.zeros(p, 0, cols or 0)
        return cls(p, np.asarray(rows, dtype=np.int64))

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @property
    def shape(self) -> Tuple[int, int]:
        return self.data.shape

    @property
    def T(self) -> "FpMatrix":
        return FpMatrix(self.p, self.data.T)

    def _same_field(self, other: "FpMatrix") -> None:
        if other.p != self.p:
            raise DimensionMismatchError(f"mixing F_{self.p} and F_{other.p}")

    def __matmul__(self, other: "FpMatrix") -> "FpMatrix":
        self._same_field(other)
        if self.cols != other.rows:
            raise DimensionMismatchError(f"cannot multiply {self.shape} by {other.shape}")
        return FpMatrix(self.p, self.data @ other.data)

    def __add__(self, other: "FpMatrix") -> "FpMatrix":
        self._same_field(other)
        if self.shape != other.shape:
            raise DimensionMismatchError(f"cannot add {self.shape} and {other.shape}")
        return FpMatrix(self.p, self.data + other.data)

    def __sub__(self, other: "FpMatrix") -> "FpMatrix":
        return self + (-other)

    def __neg__(self) -> "FpMatrix":
        return FpMatrix(self.p, -self.data)

    def scale(self, c: int) -> "FpMatrix":
        return FpMatrix(self.p, self.data * int(c))

    def is_zero(self) -> bool:
        return not self.data.any()

    def key(self) -> Tuple[int, Tuple[int, int], bytes]:
        return self.p, self.shape, self.data.tobytes()

    def tolist(self) -> List[List[int]]:
        return self.data.tolist()

    def __eq__(self, other) -> bool:
        if not isinstance(other, FpMatrix):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())


def _row_reduce(arr: np.ndarray, p: int) -> Tuple[np.ndarray, List[int]]:
    """
    Gauss-Jordan elimination mod p.

    :return: (RREF with zero rows removed, pivot column list)
    """
    work = np.array(arr, dtype=np.int64, copy=True) % p
    n_rows, n_cols = work.shape
    pivots: List[int] = []
    row = 0
    for col in range(n_cols):
        if row == n_rows:
            break
        nonzero = np.nonzero(work[row:, col])[0]
        if nonzero.size == 0:
            continue
        pivot = row + int(nonzero[0])
        if pivot != row:
            work[[row, pivot]] = work[[pivot, row]]
        work[row] = (work[row] * pow(int(work[row, col]), -1, p)) % p
        factors = work[:, col].copy()
        factors[row] = 0
        work = (work - np.outer(factors, work[row])) % p
        pivots.append(col)
        row += 1
    return work[:row], pivots


def rank(m: FpMatrix) -> int:
    """Row rank of ``m`` over F_p."""
    return len(_row_reduce(m.data, m.p)[1])


def rref(m: FpMatrix) -> FpMatrix:
    """Reduced row echelon form of ``m`` with zero rows dropped."""
    reduced, _ = _row_reduce(m.data, m.p)
    return FpMatrix(m.p, reduced.reshape(len(reduced), m.cols))


def inverse(m: FpMatrix) -> FpMatrix:
    """
    Inverse of a square matrix over F_p.

    :raises SingularMatrixError: if ``m`` is singular.
    """
    n = m.rows
    if m.cols != n:
        raise DimensionMismatchError(f"cannot invert a {m.shape} matrix")
    augmented = np.hstack([m.data, np.eye(n, dtype=np.int64)])
    reduced, pivots = _row_reduce(augmented, m.p)
    if pivots[:n] != list(range(n)):
        raise SingularMatrixError("matrix is singular over F_%d" % m.p)
    return FpMatrix(m.p, reduced[:n, n:])


@attrs.frozen(eq=False)
class SubspaceBasis:
    """
    A subspace of F_p^ambient_dim, stored by its RREF basis (rows are vectors).
    """

    ambient_dim: int
    basis: FpMatrix

    def __attrs_post_init__(self) -> None:
        if self.basis.cols != self.ambient_dim:
            raise DimensionMismatchError(
                f"basis has {self.basis.cols} columns, ambient dimension is {self.ambient_dim}"
            )
        if not _is_rref(self.basis.data):
            raise ValueError("SubspaceBasis rows must be in reduced row echelon form")

    @classmethod
    def span(cls, p: int, ambient_dim: int, vectors: Iterable[Sequence[int]]) -> "SubspaceBasis":
        """Subspace spanned by arbitrary vectors."""
        rows = [list(v) for v in vectors]
        if not rows:
            return cls.zero(p, ambient_dim)
        reduced, _ = _row_reduce(np.asarray(rows, dtype=np.int64), p)
        return cls(ambient_dim, FpMatrix(p, reduced.reshape(len(reduced), ambient_dim)))

    @classmethod
    def zero(cls, p: int, ambient_dim: int) -> "SubspaceBasis":
        return cls(ambient_dim, FpMatrix.zeros(p, 0, ambient_dim))

    @classmethod
    def full(cls, p: int, ambient_dim: int) -> "SubspaceBasis":
        return cls(ambient_dim, FpMatrix.identity(p, ambient_dim))

    @property
    def p(self) -> int:
        return self.basis.p

    @property
    def dim(self) -> int:
        return self.basis.rows

    @property
    def pivots(self) -> List[int]:
        return [int(np.nonzero(row)[0][0]) for row in self.basis.data]

    def contains_rows(self, vectors: np.ndarray) -> bool:
        """True iff every row of ``vectors`` lies in the subspace."""
        if self.ambient_dim == 0:
            return True
        vectors = np.asarray(vectors, dtype=np.int64).reshape(-1, self.ambient_dim) % self.p
        if not vectors.any():
            return True
        if self.dim == self.ambient_dim:
            return True
        if self.dim == 0:
            return False
        residual = (vectors - vectors[:, self.pivots] @ self.basis.data) % self.p
        return not residual.any()

    def contains(self, other: "SubspaceBasis") -> bool:
        return self.contains_rows(other.basis.data)

    def contains_vector(self, vector: Sequence[int]) -> bool:
        return self.contains_rows(np.asarray(vector, dtype=np.int64))

    def vectors(self) -> List[Tuple[int, ...]]:
        return [tuple(int(x) for x in row) for row in self.basis.data]

    def key(self):
        return self.ambient_dim, self.basis.key()

    def __eq__(self, other) -> bool:
        if not isinstance(other, SubspaceBasis):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())


def _is_rref(arr: np.ndarray) -> bool:
    last = -1
    for row in arr:
        nonzero = np.nonzero(row)[0]
        if nonzero.size == 0:
            return False
        lead = int(nonzero[0])
        if lead <= last or row[lead] != 1 or np.count_nonzero(arr[:, lead]) != 1:
            return False
        last = lead
    return True


def kernel_basis(m: FpMatrix) -> SubspaceBasis:
    """Right kernel {x : m x = 0} as an RREF basis; its dimension is cols - rank."""
    reduced, pivots = _row_reduce(m.data, m.p)
    free = [c for c in range(m.cols) if c not in pivots]
    vectors = []
    for f in free:
        v = np.zeros(m.cols, dtype=np.int64)
        v[f] = 1
        for r, c in enumerate(pivots):
            v[c] = -reduced[r, f]
        vectors.append(v % m.p)
    return SubspaceBasis.span(m.p, m.cols, vectors)


def intersection_dim(a: SubspaceBasis, b: SubspaceBasis) -> int:
    """dim (a cap b) = dim a + dim b - dim (a + b)."""
    if a.ambient_dim != b.ambient_dim or a.p != b.p:
        raise DimensionMismatchError("subspaces live in different spaces")
    total = SubspaceBasis.span(a.p, a.ambient_dim, list(a.basis.data) + list(b.basis.data))
    return a.dim + b.dim - total.dim


def complement_in(sub: SubspaceBasis, ambient: SubspaceBasis) -> SubspaceBasis:
    """
    Deterministic complement of ``sub`` inside ``ambient``.

    Ambient basis rows are taken in order and kept whenever their pivot column
    is not yet a pivot of ``sub``; the kept rows are again in RREF.

    :raises ContainmentError: if ``sub`` is not contained in ``ambient``.
    """
    if sub.ambient_dim != ambient.ambient_dim or sub.p != ambient.p:
        raise DimensionMismatchError("subspaces live in different spaces")
    if not ambient.contains(sub):
        raise ContainmentError("complement_in: sub is not contained in ambient")
    taken = set(sub.pivots)
    chosen = []
    for row, pivot in zip(ambient.basis.data, ambient.pivots):
        if pivot not in taken:
            taken.add(pivot)
            chosen.append(row)
    if not chosen:
        return SubspaceBasis.zero(sub.p, sub.ambient_dim)
    return SubspaceBasis(sub.ambient_dim, FpMatrix(sub.p, np.vstack(chosen)))


def pivot_patterns(n: int, k: int) -> Iterator[Tuple[int, ...]]:
    return itertools.combinations(range(n), k)


def subspaces_with_pivots(n: int, pivots: Tuple[int, ...], p: int) -> Iterator[SubspaceBasis]:
    """All k-dimensional subspaces of F_p^n whose RREF has the given pivot columns."""
    k = len(pivots)
    pivot_set = set(pivots)
    free = [(i, j) for i, c in enumerate(pivots) for j in range(c + 1, n) if j not in pivot_set]
    template = np.zeros((k, n), dtype=np.int64)
    for i, c in enumerate(pivots):
        template[i, c] = 1
    for values in itertools.product(range(p), repeat=len(free)):
        arr = template.copy()
        for (i, j), value in zip(free, values):
            arr[i, j] = value
        yield SubspaceBasis(n, FpMatrix(p, arr))


def enumerate_subspaces(ambient_dim: int, sub_dim: int, p: int) -> Iterator[SubspaceBasis]:
    """
    Every ``sub_dim``-dimensional subspace of F_p^ambient_dim exactly once,
    pivot pattern by pivot pattern.
    """
    if sub_dim > ambient_dim:
        raise DimensionMismatchError(f"no {sub_dim}-dimensional subspaces in dimension {ambient_dim}")
    for pivots in pivot_patterns(ambient_dim, sub_dim):
        yield from subspaces_with_pivots(ambient_dim, pivots, p)


def gaussian_binomial(n: int, k: int, q: int) -> int:
    """Number of k-dimensional subspaces of F_q^n."""
    if k < 0 or k > n:
        return 0
    num, den = 1, 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den
