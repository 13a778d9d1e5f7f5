"""Dart-based rotation systems for orientable 2-cell embeddings.

Every edge ``e`` owns two darts, ``2*e`` (the end at its first endpoint,
tag ``a``) and ``2*e + 1`` (the end at its second endpoint, tag ``b``), so
the twin of a dart is ``d ^ 1``.  A rotation lists, for every vertex, the
darts leaving it in counterclockwise order.  Faces are traced with the
successor ``phi(d) = sigma(twin(d))``; the face walk that contains ``d`` also
owns the *corner* immediately before ``d`` in the rotation at ``d``'s tail,
which is how corners are addressed throughout the package.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Sequence

__all__ = [
    "CombEmbedding",
    "EmbeddingSearch",
    "FaceWalk",
    "InvalidEmbeddingError",
    "Multigraph",
    "SurfaceStats",
    "ValidationReport",
    "edge_of",
    "find_embedding_with_genus",
    "stats",
    "trace_faces",
    "twin",
    "validate",
]


class InvalidEmbeddingError(ValueError):
    """Raised when an operation needs a valid rotation system and gets a broken one."""


def twin(d: int) -> int:
    return d ^ 1


def edge_of(d: int) -> int:
    return d >> 1


@dataclass(frozen=True)
class Multigraph:
    """An abstract multigraph: loops and parallel edges allowed, edges keyed by id."""

    vertices: tuple[int, ...]
    edges: Mapping[int, tuple[int, int]]

    def __post_init__(self) -> None:
        object.__setattr__(self, "vertices", tuple(sorted(set(self.vertices))))
        object.__setattr__(self, "edges", {e: (int(a), int(b)) for e, (a, b) in sorted(self.edges.items())})

    @classmethod
    def from_edge_list(cls, pairs: Iterable[tuple[int, int]], vertices: Iterable[int] = ()) -> "Multigraph":
        pairs = list(pairs)
        verts = set(vertices)
        for a, b in pairs:
            verts.update((a, b))
        return cls(tuple(verts), dict(enumerate(pairs)))

    @property
    def p(self) -> int:
        return len(self.vertices)

    @property
    def q(self) -> int:
        return len(self.edges)

    def neighbors(self, v: int) -> set[int]:
        out = set()
        for a, b in self.edges.values():
            if a == v:
                out.add(b)
            if b == v:
                out.add(a)
        return out

    def is_connected(self) -> bool:
        if not self.vertices:
            return False
        adj: dict[int, set[int]] = {v: set() for v in self.vertices}
        for a, b in self.edges.values():
            adj[a].add(b)
            adj[b].add(a)
        seen = {self.vertices[0]}
        stack = [self.vertices[0]]
        while stack:
            v = stack.pop()
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(self.vertices)


@dataclass(frozen=True)
class FaceWalk:
    """One region: the cyclic dart sequence around it, starting at its least dart.

    ``vertices[i]`` is the tail of ``darts[i]``; position ``i`` is the corner
    just before ``darts[i]`` in that vertex's rotation.
    """

    face_id: int
    darts: tuple[int, ...]
    vertices: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.darts)


@dataclass(frozen=True)
class SurfaceStats:
    p: int
    q: int
    r: int
    euler_characteristic: int
    genus: int


@dataclass
class ValidationReport:
    ok: bool
    problems: list[str] = field(default_factory=list)
    p: int = 0
    q: int = 0

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True, eq=False)
class CombEmbedding:
    """A rotation system on a connected multigraph (an orientable 2-cell embedding).

    Instances are immutable; all edits return new embeddings.  Equality and
    hashing compare edges and rotations up to cyclic shift of each rotation.
    """

    edges: Mapping[int, tuple[int, int]]
    rotation: Mapping[int, tuple[int, ...]]

    def __post_init__(self) -> None:
        edges = sorted(self.edges.items())
        rotation = sorted(self.rotation.items())
        # edits pass plain int tuples already; only other inputs need coercing
        if all(type(ab) is tuple for _, ab in edges) and all(type(r) is tuple for _, r in rotation):
            object.__setattr__(self, "edges", dict(edges))
            object.__setattr__(self, "rotation", dict(rotation))
        else:
            object.__setattr__(self, "edges", {int(e): (int(a), int(b)) for e, (a, b) in edges})
            object.__setattr__(self, "rotation", {int(v): tuple(int(d) for d in r) for v, r in rotation})

    # construction helpers

    @classmethod
    def from_neighbor_orders(cls, orders: Mapping[int, Sequence[int]]) -> "CombEmbedding":
        """Build an embedding of a simple graph from ccw neighbour lists.

        Edge ids are assigned to the sorted vertex pairs ``(u, v)``, ``u < v``.
        """
        pairs = sorted({(min(u, v), max(u, v)) for u, nbrs in orders.items() for v in nbrs})
        index = {pair: e for e, pair in enumerate(pairs)}
        rotation = {}
        for u, nbrs in orders.items():
            darts = []
            for v in nbrs:
                e = index[(min(u, v), max(u, v))]
                darts.append(2 * e if u < v else 2 * e + 1)
            rotation[u] = tuple(darts)
        return cls(dict(enumerate(pairs)), rotation)

    # basic accessors

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(self.rotation)

    @property
    def p(self) -> int:
        return len(self.rotation)

    @property
    def q(self) -> int:
        return len(self.edges)

    @cached_property
    def darts(self) -> tuple[int, ...]:
        return tuple(d for e in self.edges for d in (2 * e, 2 * e + 1))

    def vertex_of(self, d: int) -> int:
        return self.edges[d >> 1][d & 1]

    def head_of(self, d: int) -> int:
        return self.edges[d >> 1][(d & 1) ^ 1]

    def degree(self, v: int) -> int:
        return len(self.rotation[v])

    def next_edge_id(self) -> int:
        return max(self.edges, default=-1) + 1

    def next_vertex_id(self) -> int:
        return max(self.rotation, default=-1) + 1

    def graph(self) -> Multigraph:
        return Multigraph(self.vertices, self.edges)

    @cached_property
    def sigma(self) -> dict[int, int]:
        """Rotation successor: the next dart counterclockwise at the same vertex."""
        succ = {}
        for darts in self.rotation.values():
            for i, d in enumerate(darts):
                succ[d] = darts[(i + 1) % len(darts)]
        return succ

    @cached_property
    def sigma_inv(self) -> dict[int, int]:
        return {b: a for a, b in self.sigma.items()}

    @cached_property
    def faces(self) -> tuple[FaceWalk, ...]:
        """Face walks ordered by least dart; assumes the rotation is structurally sound."""
        if not self.edges:
            # a lone vertex on the sphere: one region with an empty boundary walk
            return (FaceWalk(0, (), ()),)
        sigma = self.sigma
        seen: set[int] = set()
        walks = []
        for start in sorted(self.darts):
            if start in seen:
                continue
            walk = []
            d = start
            while d not in seen:
                seen.add(d)
                walk.append(d)
                d = sigma[d ^ 1]
            walks.append(tuple(walk))
        return tuple(
            FaceWalk(i, w, tuple(self.vertex_of(d) for d in w)) for i, w in enumerate(walks)
        )

    @cached_property
    def face_of(self) -> dict[int, tuple[int, int]]:
        """Map dart -> (face id, position in that face's walk)."""
        return {d: (f.face_id, i) for f in self.faces for i, d in enumerate(f.darts)}

    @property
    def r(self) -> int:
        return len(self.faces)

    def corner_face(self, d: int) -> int:
        """Face containing the corner just before dart ``d``."""
        return self.face_of[d][0]

    def same_face(self, a: int, b: int) -> bool:
        """Whether the corners before darts ``a`` and ``b`` lie on one face walk."""
        if "face_of" in self.__dict__:
            return self.face_of[a][0] == self.face_of[b][0]
        # walk one face instead of tracing them all
        sigma = self.sigma
        d = a
        while d != b:
            d = sigma[d ^ 1]
            if d == a:
                return False
        return True

    def rotation_from(self, v: int, d: int) -> tuple[int, ...]:
        rot = self.rotation[v]
        i = rot.index(d)
        return rot[i:] + rot[:i]

    # canonical form / equality

    @cached_property
    def canonical_rotation(self) -> dict[int, tuple[int, ...]]:
        return {v: self.rotation_from(v, min(r)) if r else () for v, r in self.rotation.items()}

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CombEmbedding):
            return NotImplemented
        return self.edges == other.edges and self.canonical_rotation == other.canonical_rotation

    def __hash__(self) -> int:
        return hash((tuple(self.edges.items()), tuple(self.canonical_rotation.items())))

    def __repr__(self) -> str:
        return f"CombEmbedding(p={self.p}, q={self.q})"

    @cached_property
    def validation(self) -> ValidationReport:
        return _validate(self)


def _validate(emb: CombEmbedding) -> ValidationReport:
    problems: list[str] = []
    vertices = set(emb.rotation)
    for e, (a, b) in emb.edges.items():
        for end in (a, b):
            if end not in vertices:
                problems.append(f"edge {e}: endpoint {end} is not a vertex")
    if not vertices:
        problems.append("no vertices")
    seen: dict[int, list[int]] = {}
    for v, darts in emb.rotation.items():
        for d in darts:
            seen.setdefault(d, []).append(v)
    for d in sorted(seen):
        where = seen[d]
        if (d >> 1) not in emb.edges:
            problems.append(f"dart {d}: no such edge {d >> 1}")
        elif len(where) > 1:
            problems.append(f"dart multiplicity: dart {d} listed {len(where)} times (vertices {sorted(where)})")
        elif where[0] != emb.vertex_of(d):
            problems.append(f"dart placement: dart {d} listed at vertex {where[0]}, belongs to {emb.vertex_of(d)}")
    for d in emb.darts:
        if d not in seen:
            problems.append(f"dart multiplicity: dart {d} of edge {d >> 1} missing from rotations")
    if not problems:
        if not emb.graph().is_connected():
            problems.append("connectivity: underlying graph is disconnected")
    if not problems:
        chi = emb.p - emb.q + emb.r
        if chi % 2 or chi > 2:
            problems.append(f"euler characteristic {chi} is odd or exceeds 2")
    return ValidationReport(not problems, problems, emb.p, emb.q)


def validate(emb: CombEmbedding) -> ValidationReport:
    """Check every structural invariant of a rotation system; never raises."""
    return emb.validation


def require_valid(emb: CombEmbedding) -> None:
    report = emb.validation
    if not report.ok:
        raise InvalidEmbeddingError("; ".join(report.problems))


def trace_faces(emb: CombEmbedding) -> list[FaceWalk]:
    require_valid(emb)
    return list(emb.faces)


def stats(emb: CombEmbedding) -> SurfaceStats:
    require_valid(emb)
    chi = emb.p - emb.q + emb.r
    if chi % 2:
        raise InvalidEmbeddingError(f"odd euler characteristic {chi}")
    return SurfaceStats(emb.p, emb.q, emb.r, chi, (2 - chi) // 2)


# exhaustive embedding search


@dataclass(frozen=True)
class EmbeddingSearch:
    """Outcome of a budgeted search: ``found``, ``none`` (space exhausted) or ``unknown``."""

    status: str
    embedding: CombEmbedding | None
    examined: int
    space_size: int

    @property
    def found(self) -> bool:
        return self.status == "found"


def _darts_at(graph: Multigraph) -> dict[int, list[int]]:
    at: dict[int, list[int]] = {v: [] for v in graph.vertices}
    for e, (a, b) in graph.edges.items():
        at[a].append(2 * e)
        at[b].append(2 * e + 1)
    return {v: sorted(ds) for v, ds in at.items()}


def rotation_options(darts: Sequence[int]) -> Iterator[tuple[int, ...]]:
    """All cyclic orders of ``darts`` (first dart fixed), in lexicographic order."""
    if not darts:
        yield ()
        return
    first, rest = darts[0], darts[1:]
    for perm in itertools.permutations(rest):
        yield (first,) + perm


def _count_faces(succ: dict[int, int], darts: Sequence[int]) -> int:
    seen = set()
    count = 0
    for d in darts:
        if d in seen:
            continue
        count += 1
        while d not in seen:
            seen.add(d)
            d = succ[d ^ 1]
    return count


def find_embedding_with_genus(graph: Multigraph, target_genus: int, budget: int = 10**6) -> EmbeddingSearch:
    """Search rotation systems of ``graph`` for one of the requested genus.

    Vertices vary in ascending order with the last vertex varying fastest;
    each vertex's rotations are enumerated lexicographically with its least
    dart first.  Mirror symmetry is removed at the lowest-numbered vertex of
    degree >= 3, which keeps only rotations lexicographically below their
    reversal; reflecting a whole embedding preserves genus, so nothing is lost.
    ``budget`` caps the number of complete rotation systems examined.
    """
    if not graph.is_connected():
        raise ValueError("graph must be connected")
    p, q = graph.p, graph.q
    wanted_r = 2 - 2 * target_genus - p + q
    at = _darts_at(graph)
    pinned = next((v for v in graph.vertices if len(at[v]) >= 3), None)
    options = []
    for v in graph.vertices:
        opts = list(rotation_options(at[v]))
        if v == pinned:
            opts = [o for o in opts if o[1:] <= tuple(reversed(o[1:]))]
        options.append(opts)
    space = math.prod(len(o) for o in options)
    if target_genus < 0 or wanted_r < 1:
        return EmbeddingSearch("none", None, 0, space)
    darts = sorted(d for ds in at.values() for d in ds)
    examined = 0
    for combo in itertools.product(*options):
        if examined >= budget:
            return EmbeddingSearch("unknown", None, examined, space)
        examined += 1
        succ = {}
        for rot in combo:
            for i, d in enumerate(rot):
                succ[d] = rot[(i + 1) % len(rot)]
        if q == 0:
            r = 1
        else:
            r = _count_faces(succ, darts)
        if r == wanted_r:
            emb = CombEmbedding(graph.edges, dict(zip(graph.vertices, combo)))
            return EmbeddingSearch("found", emb, examined, space)
    return EmbeddingSearch("none", None, examined, space)
