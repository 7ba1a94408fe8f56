"""
Dynkin quiver description, file parsing, Euler form and positive roots.

Quiver file format (UTF-8)::

    # comment
    vertices: 1 2 3
    arrows: 1->2 3->2

Vertex order in every output is the declaration order in the file.
"""

import hashlib
import logging
import re
from collections import deque
from pathlib import Path
from typing import Dict, List, Sequence, Tuple

import attrs
from sympy import Matrix

from .errors import DimensionMismatchError, NotDynkinError, QuiverSyntaxError, UnknownVertexError

__all__ = [
    "QuiverSpec",
    "DimVector",
    "parse_quiver",
    "load_quiver",
    "check_dim_vector",
    "euler_form",
    "symmetric_form",
    "positive_roots",
    "expected_root_count",
]

logger = logging.getLogger(__name__)

DimVector = Tuple[int, ...]

_VERTEX_RE = re.compile(r"^[A-Za-z0-9]+$")
_ARROW_RE = re.compile(r"^([A-Za-z0-9]+)->([A-Za-z0-9]+)$")


def _component_type(nodes: List[int], adjacency: Dict[int, List[int]]) -> str:
    """Name the ADE type of a connected tree already known to be Dynkin."""
    n = len(nodes)
    branch = [v for v in nodes if len(adjacency[v]) == 3]
    if not branch:
        return f"A{n}"
    centre = branch[0]
    arms = []
    for start in adjacency[centre]:
        length, prev, cur = 1, centre, start
        while True:
            nxt = [w for w in adjacency[cur] if w != prev]
            if not nxt:
                break
            prev, cur = cur, nxt[0]
            length += 1
        arms.append(length)
    arms.sort()
    if arms[0] == 1 and arms[1] == 1:
        return f"D{n}"
    return f"E{n}"


@attrs.frozen
class QuiverSpec:
    """
    A validated Dynkin quiver.

    :param vertices: vertex identifiers in declaration order.
    :param arrows: (source, target) pairs.
    """

    vertices: Tuple[str, ...] = attrs.field(converter=tuple)
    arrows: Tuple[Tuple[str, str], ...] = attrs.field(converter=lambda xs: tuple(tuple(a) for a in xs))
    components: Tuple[str, ...] = attrs.field(init=False, eq=False, repr=False)

    def __attrs_post_init__(self) -> None:
        if len(set(self.vertices)) != len(self.vertices):
            raise QuiverSyntaxError(f"duplicate vertex in {self.vertices}")
        known = set(self.vertices)
        for src, dst in self.arrows:
            for v in (src, dst):
                if v not in known:
                    raise UnknownVertexError(f"arrow {src}->{dst} uses undeclared vertex {v!r}")
            if src == dst:
                raise NotDynkinError(f"loop at vertex {src!r}")
        edges = set()
        for src, dst in self.arrows:
            edge = frozenset((src, dst))
            if edge in edges:
                raise NotDynkinError(f"multiple edges between {src!r} and {dst!r}")
            edges.add(edge)

        n = len(self.vertices)
        cartan = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
        for a, b in self.arrow_indices:
            cartan[a][b] -= 1
            cartan[b][a] -= 1
        if n and not Matrix(cartan).is_positive_definite:
            raise NotDynkinError(f"underlying graph of {self.arrows} is not a union of ADE diagrams")

        adjacency: Dict[int, List[int]] = {i: [] for i in range(n)}
        for a, b in self.arrow_indices:
            adjacency[a].append(b)
            adjacency[b].append(a)
        seen = set()
        types = []
        for v in range(n):
            if v in seen:
                continue
            nodes, queue = [], deque([v])
            seen.add(v)
            while queue:
                cur = queue.popleft()
                nodes.append(cur)
                for w in adjacency[cur]:
                    if w not in seen:
                        seen.add(w)
                        queue.append(w)
            types.append(_component_type(nodes, adjacency))
        object.__setattr__(self, "components", tuple(types))

    @property
    def size(self) -> int:
        return len(self.vertices)

    def index(self, vertex: str) -> int:
        return self.vertices.index(vertex)

    @property
    def arrow_indices(self) -> List[Tuple[int, int]]:
        return [(self.vertices.index(s), self.vertices.index(t)) for s, t in self.arrows]

    def to_text(self) -> str:
        arrows = " ".join(f"{s}->{t}" for s, t in self.arrows)
        return f"vertices: {' '.join(self.vertices)}\narrows: {arrows}\n"

    def digest(self) -> str:
        """Short stable hash of the canonical text, used as a cache key."""
        return hashlib.sha256(self.to_text().encode("utf-8")).hexdigest()[:16]


def parse_quiver(text: str) -> QuiverSpec:
    """
    Parse the quiver file format.

    :raises QuiverSyntaxError, UnknownVertexError, NotDynkinError:
    """
    vertices = None
    arrows = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, rest = line.partition(":")
        if not sep:
            raise QuiverSyntaxError(f"line {lineno}: expected 'vertices:' or 'arrows:'")
        key = key.strip()
        tokens = rest.split()
        if key == "vertices":
            if vertices is not None:
                raise QuiverSyntaxError(f"line {lineno}: vertices declared twice")
            for tok in tokens:
                if not _VERTEX_RE.match(tok):
                    raise QuiverSyntaxError(f"line {lineno}: bad vertex id {tok!r}")
            vertices = tokens
        elif key == "arrows":
            if arrows is not None:
                raise QuiverSyntaxError(f"line {lineno}: arrows declared twice")
            arrows = []
            for tok in tokens:
                match = _ARROW_RE.match(tok)
                if not match:
                    raise QuiverSyntaxError(f"line {lineno}: bad arrow {tok!r}")
                arrows.append((match.group(1), match.group(2)))
        else:
            raise QuiverSyntaxError(f"line {lineno}: unknown key {key!r}")
    if not vertices:
        raise QuiverSyntaxError("no vertices declared")
    return QuiverSpec(vertices, arrows or [])


def load_quiver(path) -> QuiverSpec:
    return parse_quiver(Path(path).read_text(encoding="utf-8"))


def check_dim_vector(q: QuiverSpec, d: Sequence[int]) -> DimVector:
    d = tuple(int(x) for x in d)
    if len(d) != q.size:
        raise DimensionMismatchError(f"dimension vector {d} has length {len(d)}, quiver has {q.size} vertices")
    if any(x < 0 for x in d):
        raise DimensionMismatchError(f"negative entry in dimension vector {d}")
    return d


def euler_form(q: QuiverSpec, d: Sequence[int], e: Sequence[int]) -> int:
    """<d, e> = sum_i d_i e_i - sum_{a: i->j} d_i e_j."""
    if len(d) != q.size or len(e) != q.size:
        raise DimensionMismatchError(f"euler_form: lengths {len(d)}, {len(e)} vs {q.size} vertices")
    value = sum(x * y for x, y in zip(d, e))
    for i, j in q.arrow_indices:
        value -= d[i] * e[j]
    return value


def symmetric_form(q: QuiverSpec, d: Sequence[int], e: Sequence[int]) -> int:
    return euler_form(q, d, e) + euler_form(q, e, d)


def positive_roots(q: QuiverSpec) -> List[DimVector]:
    """
    Positive roots, generated from the simple roots by simple reflections,
    in lexicographic order.
    """
    n = q.size
    simples = [tuple(1 if k == i else 0 for k in range(n)) for i in range(n)]
    found = set(simples)
    queue = deque(simples)
    while queue:
        root = queue.popleft()
        for i, alpha in enumerate(simples):
            c = symmetric_form(q, root, alpha)
            image = tuple(r - c * a for r, a in zip(root, alpha))
            if all(x >= 0 for x in image) and any(image) and image not in found:
                found.add(image)
                queue.append(image)
    roots = sorted(found)
    logger.debug("quiver %s: %d positive roots", q.components, len(roots))
    return roots


def expected_root_count(type_name: str) -> int:
    """Number of positive roots of an ADE type such as 'A3' or 'E6'."""
    family, rank_ = type_name[0], int(type_name[1:])
    if family == "A":
        return rank_ * (rank_ + 1) // 2
    if family == "D":
        return rank_ * (rank_ - 1)
    return {6: 36, 7: 63, 8: 120}[rank_]
