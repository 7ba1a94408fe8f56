"""
The transversal slice E_N, the preprojective fiber over
N*, and point censuses over F_p.

Layout: the block-diagonal N = N_1 + ... + N_nu puts layer 1 (the deepest
subobject) in the leading coordinates of every V_i.  For an arrow i -> j the
block R^{s,t} holds the rows of layer s in V_j against the columns of layer t
in V_i.  Strictly upper blocks (s < t) keep the layer flag stable, so

    Y_N = N + sum_{s<t} R^{s,t},   u_d = strictly upper same-vertex blocks,

and E_N = N + C with C a block-by-block complement of phi(u_d) in Y_N - N.
"""

import itertools
import logging
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from typing import Dict, List, Sequence, Tuple

import attrs
import numpy as np
from tqdm import tqdm

from .errors import DimensionMismatchError, InvariantViolation, TransversalityError
from .gf_linalg import FpMatrix, SubspaceBasis, complement_in, intersection_dim, kernel_basis
from .indecomposables import Rep
from .orbits import OrbitCatalog, OrbitLabel
from .quiver import DimVector, QuiverSpec

__all__ = [
    "BlockDecomposition",
    "AffineSlice",
    "phi_image",
    "build_slice",
    "full_fiber",
    "census",
    "slice_census",
    "preprojective_fiber",
    "preprojective_census",
    "tangent_overlap",
    "orthogonality_check",
    "OrthogonalityReport",
    "block_fiber_census",
]

logger = logging.getLogger(__name__)


@attrs.frozen
class BlockDecomposition:
    """Per-layer dimension vectors and the coordinate blocks they induce in R_d."""

    quiver: QuiverSpec
    layer_dims: Tuple[DimVector, ...] = attrs.field(converter=lambda xs: tuple(tuple(x) for x in xs))
    dim: DimVector = attrs.field(init=False)

    @dim.default
    def _total(self) -> DimVector:
        return tuple(sum(col) for col in zip(*self.layer_dims)) if self.layer_dims else (0,) * self.quiver.size

    @classmethod
    def of(cls, catalog: OrbitCatalog, label: OrbitLabel) -> "BlockDecomposition":
        return cls(catalog.quiver, [catalog.dim_vector(layer) for layer in label.layers()])

    @property
    def size(self) -> int:
        return len(self.layer_dims)

    def layer_range(self, s: int, i: int) -> range:
        """Coordinates of layer s inside V_i."""
        start = sum(self.layer_dims[t][i] for t in range(s))
        return range(start, start + self.layer_dims[s][i])

    def arrow_offsets(self) -> List[int]:
        offsets, start = [], 0
        for i, j in self.quiver.arrow_indices:
            offsets.append(start)
            start += self.dim[i] * self.dim[j]
        return offsets

    @property
    def coordinate_count(self) -> int:
        return Rep.coordinate_count(self.quiver, self.dim)

    def block(self, s: int, t: int) -> List[int]:
        """R^{s,t} as positions in the coordinate vector of R_d."""
        out = []
        for (i, j), offset in zip(self.quiver.arrow_indices, self.arrow_offsets()):
            for r in self.layer_range(s, j):
                for c in self.layer_range(t, i):
                    out.append(offset + r * self.dim[i] + c)
        return out

    def upper_pairs(self) -> List[Tuple[int, int]]:
        return [(s, t) for s, t in itertools.combinations(range(self.size), 2)]

    def u_basis(self, s: int, t: int) -> List[Tuple[int, int, int]]:
        """Elementary matrices (vertex, row, col) of u_d mapping layer t into layer s."""
        return [(i, r, c) for i in range(self.quiver.size)
                for r in self.layer_range(s, i) for c in self.layer_range(t, i)]

    @property
    def free_dim(self) -> int:
        return sum(len(self.block(s, t)) for s, t in self.upper_pairs())

    @property
    def u_dim(self) -> int:
        return sum(len(self.u_basis(s, t)) for s, t in self.upper_pairs())


@attrs.frozen
class AffineSlice:
    """base + span(directions); rows of ``directions`` are coordinate vectors of R_d."""

    base: Rep
    directions: FpMatrix

    @property
    def dim(self) -> int:
        return self.directions.rows

    def point(self, coefficients: Sequence[int]) -> Rep:
        coords = self.base.coordinates()
        if self.dim:
            coords = coords + np.asarray(coefficients, dtype=np.int64) @ self.directions.data
        return Rep.from_coordinates(self.base.quiver, self.base.p, self.base.dim, coords % self.base.p)


def _phi(N: Rep, vertex: int, row: int, col: int) -> np.ndarray:
    """phi(xi) for the elementary xi = E_{row,col} at ``vertex``: xi_j N_a - N_a xi_i."""
    q, p = N.quiver, N.p
    parts = []
    for (i, j), na in zip(q.arrow_indices, N.matrices):
        out = np.zeros((N.dim[j], N.dim[i]), dtype=np.int64)
        if j == vertex:
            out[row, :] += na.data[col, :]
        if i == vertex:
            out[:, col] -= na.data[:, row]
        parts.append(out.reshape(-1))
    if not parts:
        return np.zeros(0, dtype=np.int64)
    return np.concatenate(parts) % p


def phi_image(N: Rep, blocks: BlockDecomposition = None, domain: str = "g") -> SubspaceBasis:
    """
    Image of phi on g_d (``domain="g"``, the tangent space to the orbit) or
    on u_d (``domain="u"``, requires ``blocks``).

    :raises InvariantViolation: if phi is not injective on u_d.
    """
    n = Rep.coordinate_count(N.quiver, N.dim)
    if domain == "g":
        units = [(i, r, c) for i in range(N.quiver.size) for r in range(N.dim[i]) for c in range(N.dim[i])]
    elif domain == "u":
        if blocks is None:
            raise ValueError("the u_d domain needs a block decomposition")
        units = [u for s, t in blocks.upper_pairs() for u in blocks.u_basis(s, t)]
    else:
        raise ValueError(f"unknown domain {domain!r}; use 'g' or 'u'")
    images = [_phi(N, *u) for u in units]
    image = SubspaceBasis.span(N.p, n, images)
    if domain == "u" and image.dim != len(units):
        raise InvariantViolation(f"phi restricted to u_d has rank {image.dim} < dim u_d = {len(units)}")
    return image


def build_slice(catalog: OrbitCatalog, N: OrbitLabel, p: int) -> AffineSlice:
    """
    E_N over F_p: within each block R^{s,t} (s < t) the complement of
    phi(u^{s,t}), chosen by :func:`complement_in`.

    :raises DimensionMismatchError: if dim E_N != dim Ext^1(N, N).
    """
    rep = catalog.rep_of(N, p)
    blocks = BlockDecomposition.of(catalog, N)
    n = blocks.coordinate_count
    directions = []
    for s, t in blocks.upper_pairs():
        coords = blocks.block(s, t)
        if not coords:
            continue
        images = [_phi(rep, *u)[coords] for u in blocks.u_basis(s, t)]
        sub = SubspaceBasis.span(p, len(coords), images)
        if sub.dim != len(images):
            raise InvariantViolation(f"phi is not injective on u^{{{s + 1},{t + 1}}} for {catalog.name(N)}")
        comp = complement_in(sub, SubspaceBasis.full(p, len(coords)))
        for vec in comp.basis.data:
            full = np.zeros(n, dtype=np.int64)
            full[coords] = vec
            directions.append(full)
    expected = catalog.ext_dim(N)
    if len(directions) != expected:
        raise DimensionMismatchError(
            f"slice through {catalog.name(N)} over F_{p} has dimension {len(directions)}, "
            f"dim Ext^1 is {expected}"
        )
    matrix = np.vstack(directions) if directions else np.zeros((0, n), dtype=np.int64)
    return AffineSlice(rep, FpMatrix(p, matrix))


def full_fiber(catalog: OrbitCatalog, N: OrbitLabel, p: int) -> AffineSlice:
    """Y_N = N + sum_{s<t} R^{s,t}."""
    rep = catalog.rep_of(N, p)
    blocks = BlockDecomposition.of(catalog, N)
    n = blocks.coordinate_count
    coords = [c for s, t in blocks.upper_pairs() for c in blocks.block(s, t)]
    matrix = np.zeros((len(coords), n), dtype=np.int64)
    for row, c in enumerate(coords):
        matrix[row, c] = 1
    return AffineSlice(rep, FpMatrix(p, matrix))


def _digits(index: int, p: int, k: int) -> List[int]:
    out = [0] * k
    for pos in range(k - 1, -1, -1):
        index, out[pos] = divmod(index, p)
    return out


def _census_range(catalog: OrbitCatalog, space: AffineSlice, start: int, stop: int) -> Counter:
    p, k = space.base.p, space.dim
    tally: Counter = Counter()
    for index in range(start, stop):
        tally[catalog.classify(space.point(_digits(index, p, k)))] += 1
    return tally


def census(catalog: OrbitCatalog, space: AffineSlice, workers: int = 1, progress: bool = False,
           desc: str = "census") -> Dict[OrbitLabel, int]:
    """
    Classify every F_p-point of ``space`` in lexicographic coefficient order
    and tally by orbit.  With ``workers > 1`` contiguous index ranges go to a
    process pool; the tally does not depend on the split.
    """
    p = space.base.p
    total = p ** space.dim
    catalog.table(p)
    tally: Counter = Counter()
    if workers <= 1 or total < 2 * workers:
        step = max(1, total // 100)
        with tqdm(total=total, desc=desc, disable=not progress, leave=False) as bar:
            for start in range(0, total, step):
                stop = min(total, start + step)
                tally.update(_census_range(catalog, space, start, stop))
                bar.update(stop - start)
    else:
        chunk = -(-total // workers)
        ranges = [(start, min(total, start + chunk)) for start in range(0, total, chunk)]
        with ProcessPoolExecutor(max_workers=workers) as executor:
            futures = [executor.submit(_census_range, catalog, space, a, b) for a, b in ranges]
            for future in tqdm(futures, desc=desc, disable=not progress, leave=False):
                tally.update(future.result())
    if sum(tally.values()) != total:
        raise InvariantViolation(f"{desc}: tallied {sum(tally.values())} points, expected {total}")
    logger.debug("%s over F_%d: %d points, %d orbits", desc, p, total, len(tally))
    return dict(sorted(tally.items()))


def slice_census(catalog: OrbitCatalog, N: OrbitLabel, p: int, workers: int = 1,
                 progress: bool = False) -> Dict[OrbitLabel, int]:
    """M -> |E_N cap O_M| over F_p."""
    space = build_slice(catalog, N, p)
    return census(catalog, space, workers, progress, desc=f"slice {catalog.name(N)} F_{p}")


def preprojective_fiber(N: Rep) -> SubspaceBasis:
    """
    {A in R_d : (A, N*) in Pi_d}, N* the transposed representation of the
    opposite quiver.  At each vertex i:

        sum_{a: i -> .} N_a^T A_a  =  sum_{a: . -> i} A_a N_a^T
    """
    q, p, d = N.quiver, N.p, N.dim
    offsets, start = [], 0
    for i, j in q.arrow_indices:
        offsets.append(start)
        start += d[i] * d[j]
    n = start
    rows = []
    for v in range(q.size):
        block = np.zeros((d[v] * d[v], n), dtype=np.int64)
        for (i, j), na, offset in zip(q.arrow_indices, N.matrices, offsets):
            size = d[i] * d[j]
            if i == v:
                block[:, offset:offset + size] += np.kron(na.data.T, np.eye(d[i], dtype=np.int64))
            if j == v:
                block[:, offset:offset + size] -= np.kron(np.eye(d[j], dtype=np.int64), na.data)
        rows.append(block)
    equations = np.vstack(rows) if rows else np.zeros((0, n), dtype=np.int64)
    return kernel_basis(FpMatrix(p, equations))


def tangent_overlap(N: Rep) -> int:
    """dim (T_N(O_N) cap fiber over N*); N + fiber is transversal to O_N exactly when this is 0."""
    return intersection_dim(phi_image(N, domain="g"), preprojective_fiber(N))


def preprojective_census(catalog: OrbitCatalog, N: OrbitLabel, p: int, workers: int = 1,
                         progress: bool = False) -> Dict[OrbitLabel, int]:
    """
    M -> number of fiber points A with N + A in O_M.

    :raises TransversalityError: if the fiber meets T_N(O_N).  The trace pairing
        can be isotropic on the tangent space over F_2, e.g. over P12+P23 on A3.
    """
    rep = catalog.rep_of(N, p)
    fiber = preprojective_fiber(rep)
    if fiber.dim != catalog.ext_dim(N):
        raise DimensionMismatchError(
            f"preprojective fiber over {catalog.name(N)}* has dimension {fiber.dim}, "
            f"dim Ext^1 is {catalog.ext_dim(N)}"
        )
    overlap = intersection_dim(phi_image(rep, domain="g"), fiber)
    if overlap:
        raise TransversalityError(
            f"preprojective fiber over {catalog.name(N)}* meets the tangent space of its orbit "
            f"in dimension {overlap} over F_{p}"
        )
    space = AffineSlice(rep, fiber.basis)
    return census(catalog, space, workers, progress, desc=f"preprojective {catalog.name(N)} F_{p}")


def block_fiber_census(catalog: OrbitCatalog, N: OrbitLabel, p: int, workers: int = 1,
                       progress: bool = False) -> Dict[OrbitLabel, int]:
    """M -> |Y_N cap O_M|; equals p^(dim u_d) |E_N cap O_M|."""
    space = full_fiber(catalog, N, p)
    return census(catalog, space, workers, progress, desc=f"fiber {catalog.name(N)} F_{p}")


@attrs.frozen
class OrthogonalityReport:
    tangent_dim: int
    fiber_dim: int
    ambient_dim: int
    pairing_zero: bool
    overlap_dim: int = 0

    @property
    def ok(self) -> bool:
        return self.pairing_zero and self.tangent_dim + self.fiber_dim == self.ambient_dim

    @property
    def transversal(self) -> bool:
        return self.overlap_dim == 0


def orthogonality_check(N: Rep) -> OrthogonalityReport:
    """
    The fiber over N* against T_N(O_N) under the trace pairing sum_a Tr(A_a B_a^T).
    ``overlap_dim`` records dim (T_N(O_N) cap fiber), which ``ok`` does not test.
    """
    tangent = phi_image(N, domain="g")
    fiber = preprojective_fiber(N)
    pairing = (fiber.basis.data @ tangent.basis.data.T) % N.p
    report = OrthogonalityReport(tangent.dim, fiber.dim, tangent.ambient_dim, not pairing.any(),
                                 intersection_dim(tangent, fiber))
    if not report.ok:
        logger.warning("orthogonality fails at %s over F_%d: %s", N.dim, N.p, report)
    elif not report.transversal:
        logger.info("fiber over %s meets the tangent space over F_%d: %s", N.dim, N.p, report)
    return report
