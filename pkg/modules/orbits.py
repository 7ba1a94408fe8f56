"""
Field-independent orbit labels and their invariants.

An orbit of G_d on R_d is named by the multiplicity vector of its
indecomposable summands in the directed order I_1..I_nu.  The
:class:`OrbitCatalog` ties labels to the per-prime indecomposable tables.
"""

import logging
from typing import Dict, List, Sequence, Tuple

import attrs

from .errors import DimensionMismatchError, InvariantViolation, LabelError
from .indecomposables import IndecTable, Rep, build_indec_table
from .polynomials import IntPolyQ
from .quiver import DimVector, QuiverSpec, check_dim_vector, euler_form

__all__ = [
    "OrbitLabel",
    "OrbitCatalog",
    "classify",
    "label_from_hom_vector",
    "enumerate_labels",
    "aut_order_poly",
    "degenerates",
]

logger = logging.getLogger(__name__)


@attrs.frozen(order=True)
class OrbitLabel:
    """Multiplicity vector m: m_s copies of I_s."""

    multiplicities: Tuple[int, ...] = attrs.field(converter=tuple)

    @classmethod
    def zero(cls, size: int) -> "OrbitLabel":
        return cls((0,) * size)

    @classmethod
    def unit(cls, size: int, s: int, m: int = 1) -> "OrbitLabel":
        return cls(m if k == s else 0 for k in range(size))

    def is_zero(self) -> bool:
        return not any(self.multiplicities)

    def __add__(self, other: "OrbitLabel") -> "OrbitLabel":
        return OrbitLabel(a + b for a, b in zip(self.multiplicities, other.multiplicities))

    def layer(self, s: int) -> "OrbitLabel":
        """N_s: the isotypic part of the s-th indecomposable."""
        return OrbitLabel.unit(len(self.multiplicities), s, self.multiplicities[s])

    def layers(self) -> List["OrbitLabel"]:
        """[N_1, ..., N_nu] including zero layers."""
        return [self.layer(s) for s in range(len(self.multiplicities))]


def dimension_of(m: Sequence[int], roots: Sequence[DimVector]) -> DimVector:
    n = len(roots[0]) if roots else 0
    return tuple(sum(ms * r[i] for ms, r in zip(m, roots)) for i in range(n))


def label_from_hom_vector(hv: Sequence[int], dim: Sequence[int], table: IndecTable) -> OrbitLabel:
    """
    Multiplicity vector with the given hom vector: solves dim Hom(I_t, rep) =
    sum_s m_s h[t][s] from t = nu downwards, using h[t][s] = 0 for s < t.
    """
    nu = table.size
    m = [0] * nu
    for t in range(nu - 1, -1, -1):
        value = hv[t] - sum(m[s] * table.hom[t][s] for s in range(t + 1, nu))
        if value < 0:
            raise InvariantViolation(f"negative multiplicity for I_{t + 1} while classifying {tuple(dim)}")
        m[t] = value
    if dimension_of(m, table.roots) != tuple(dim):
        raise InvariantViolation(f"classification {m} does not add up to dimension {tuple(dim)}")
    return OrbitLabel(m)


def classify(rep: Rep, table: IndecTable) -> OrbitLabel:
    """Orbit label of ``rep`` read off its hom vector against ``table``."""
    if rep.p != table.p:
        raise DimensionMismatchError(f"representation over F_{rep.p}, table over F_{table.p}")
    return label_from_hom_vector(table.hom_vector(rep), rep.dim, table)


def enumerate_labels(roots: Sequence[DimVector], d: Sequence[int]) -> List[OrbitLabel]:
    """All multiplicity vectors with sum_s m_s root_s = d, lexicographically sorted."""
    d = tuple(d)
    nu = len(roots)
    out = []

    def rec(s: int, remaining: Tuple[int, ...], acc: List[int]) -> None:
        if s == nu:
            if not any(remaining):
                out.append(OrbitLabel(acc))
            return
        root = roots[s]
        bound = min(remaining[i] // root[i] for i in range(len(root)) if root[i])
        for m in range(bound + 1):
            rec(s + 1, tuple(x - m * r for x, r in zip(remaining, root)), acc + [m])

    rec(0, d, [])
    return sorted(out)


def end_dim_of(label: OrbitLabel, hom: Sequence[Sequence[int]]) -> int:
    m = label.multiplicities
    return sum(m[s] * m[t] * hom[s][t] for s in range(len(m)) for t in range(len(m)))


def aut_order_poly(label: OrbitLabel, hom: Sequence[Sequence[int]]) -> IntPolyQ:
    """
    |Aut(M)| as a polynomial in q: End(M) is triangular in the directed order
    with diagonal prod_s Mat_{m_s}(k), so
    a_M = q^(dim End - sum m_s^2) prod_s |GL_{m_s}(q)|.
    """
    m = label.multiplicities
    poly = IntPolyQ.monomial(end_dim_of(label, hom) - sum(x * x for x in m))
    for ms in m:
        for j in range(1, ms + 1):
            poly = poly * (IntPolyQ.monomial(ms) - IntPolyQ.monomial(j - 1))
    return poly


def hom_vector_of(label: OrbitLabel, hom: Sequence[Sequence[int]]) -> Tuple[int, ...]:
    m = label.multiplicities
    return tuple(sum(m[s] * hom[t][s] for s in range(len(m))) for t in range(len(m)))


def degenerates(m1: OrbitLabel, m2: OrbitLabel, hom: Sequence[Sequence[int]], roots: Sequence[DimVector]) -> bool:
    """True iff O_m2 lies in the closure of O_m1 (hom order)."""
    if dimension_of(m1.multiplicities, roots) != dimension_of(m2.multiplicities, roots):
        return False
    return all(a <= b for a, b in zip(hom_vector_of(m1, hom), hom_vector_of(m2, hom)))


class OrbitCatalog:
    """
    Indecomposable tables for every working prime plus label bookkeeping.

    The hom-matrix and the directed order are field independent; every table
    built later is checked against the first one.
    """

    def __init__(self, quiver: QuiverSpec, seed: int = 0, reverse_ties: bool = False, base_prime: int = 2):
        self.quiver = quiver
        self.seed = seed
        self.reverse_ties = reverse_ties
        self._tables: Dict[int, IndecTable] = {}
        base = self.table(base_prime)
        self.roots: List[DimVector] = base.roots
        self.hom: Tuple[Tuple[int, ...], ...] = base.hom
        self._names = [self._indec_name(r) for r in self.roots]
        self._by_name = {name: s for s, name in enumerate(self._names)}
        self._by_hom: Dict[Tuple[int, ...], OrbitLabel] = {}

    def table(self, p: int) -> IndecTable:
        if p not in self._tables:
            table = build_indec_table(self.quiver, p, self.seed, self.reverse_ties)
            if self._tables:
                if table.roots != self.roots or table.hom != self.hom:
                    raise InvariantViolation(f"indecomposable table over F_{p} disagrees with the base table")
            self._tables[p] = table
        return self._tables[p]

    @property
    def size(self) -> int:
        return len(self.roots)

    def _indec_name(self, root: DimVector) -> str:
        ids = [v for v, k in zip(self.quiver.vertices, root) for _ in range(k)]
        if len(ids) == 1:
            return f"S{ids[0]}"
        if all(len(v) == 1 for v in ids):
            return "P" + "".join(ids)
        return "P[" + ".".join(ids) + "]"

    def indec_name(self, s: int) -> str:
        return self._names[s]

    def name(self, label: OrbitLabel) -> str:
        """'+'-joined summands, quotient-most first, e.g. 'S1^2+P12'."""
        parts = []
        for s in range(self.size - 1, -1, -1):
            m = label.multiplicities[s]
            if m:
                parts.append(self._names[s] + (f"^{m}" if m > 1 else ""))
        return "+".join(parts) or "0"

    def parse(self, text: str) -> OrbitLabel:
        m = [0] * self.size
        if text.strip() == "0":
            return OrbitLabel(m)
        for part in text.split("+"):
            base, _, power = part.strip().partition("^")
            if base not in self._by_name:
                raise LabelError(f"unknown indecomposable {base!r}; known: {', '.join(self._names)}")
            if power and not power.isdigit():
                raise LabelError(f"bad multiplicity {power!r} in {text!r}")
            m[self._by_name[base]] += int(power) if power else 1
        return OrbitLabel(m)

    def zero(self) -> OrbitLabel:
        return OrbitLabel.zero(self.size)

    def simple(self, vertex: str) -> OrbitLabel:
        root = tuple(1 if v == vertex else 0 for v in self.quiver.vertices)
        return OrbitLabel.unit(self.size, self.roots.index(root))

    def summands(self, label: OrbitLabel) -> Tuple[Tuple[DimVector, int], ...]:
        """Order-independent description: sorted (root, multiplicity) pairs."""
        return tuple(sorted((self.roots[s], m) for s, m in enumerate(label.multiplicities) if m))

    def from_summands(self, summands) -> OrbitLabel:
        m = [0] * self.size
        for root, mult in summands:
            m[self.roots.index(tuple(root))] = mult
        return OrbitLabel(m)

    def dim_vector(self, label: OrbitLabel) -> DimVector:
        return dimension_of(label.multiplicities, self.roots)

    def end_dim(self, label: OrbitLabel) -> int:
        return end_dim_of(label, self.hom)

    def ext_dim(self, label: OrbitLabel) -> int:
        d = self.dim_vector(label)
        return self.end_dim(label) - euler_form(self.quiver, d, d)

    def hom_vector(self, label: OrbitLabel) -> Tuple[int, ...]:
        return hom_vector_of(label, self.hom)

    def labels(self, d: Sequence[int]) -> List[OrbitLabel]:
        return enumerate_labels(self.roots, check_dim_vector(self.quiver, d))

    def generic_label(self, d: Sequence[int]) -> OrbitLabel:
        return next(label for label in self.labels(d) if self.ext_dim(label) == 0)

    def aut_order_poly(self, label: OrbitLabel) -> IntPolyQ:
        return aut_order_poly(label, self.hom)

    def degenerates(self, m1: OrbitLabel, m2: OrbitLabel) -> bool:
        return degenerates(m1, m2, self.hom, self.roots)

    def rep_of(self, label: OrbitLabel, p: int) -> Rep:
        """Block-diagonal direct sum of the indecomposables, I_1 copies first."""
        table = self.table(p)
        rep = Rep.zero(self.quiver, p, (0,) * self.quiver.size)
        for s, m in enumerate(label.multiplicities):
            for _ in range(m):
                rep = rep.direct_sum(table.indecs[s])
        return rep

    def classify(self, rep: Rep) -> OrbitLabel:
        """Orbit of ``rep``; labels are memoized on the field-independent hom vector."""
        table = self.table(rep.p)
        hv = tuple(table.hom_vector(rep))
        if hv not in self._by_hom:
            self._by_hom[hv] = label_from_hom_vector(hv, rep.dim, table)
        return self._by_hom[hv]
