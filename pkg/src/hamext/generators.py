"""Fixture embeddings and random corpora.

Documented counts are ``(p, q, r)``.
"""

from __future__ import annotations

import itertools
import random

import networkx as nx

from .edit import ExtensionMap, is_extension, stellate_faces
from .embedding import CombEmbedding, Multigraph, find_embedding_with_genus, rotation_options
from .klee import KleeCertificate

__all__ = [
    "HOST_CYCLE",
    "cycle_on_sphere",
    "fully_stellated_certificate",
    "fully_stellated_host",
    "grid_on_torus",
    "host_inner_darts",
    "hypercube_graph",
    "icosahedron",
    "k4_planar",
    "petersen_graph",
    "petersen_torus",
    "planar_embedding",
    "random_connected_multigraph",
    "random_embedding",
    "random_rotation_system",
    "theta_graph",
    "triangle_host_with_stellations",
]

#: Edge ids of the separating triangle ``C`` in :func:`triangle_host_with_stellations`.
HOST_CYCLE = (0, 1, 2)


def cycle_on_sphere(n: int) -> CombEmbedding:
    """The n-cycle in the sphere: ``(n, n, 2)``.  ``n = 1`` is a loop, ``n = 2`` a digon."""
    if n < 1:
        raise ValueError("n must be >= 1")
    edges = {i: (i, (i + 1) % n) for i in range(n)}
    rotation = {i: (2 * i, 2 * ((i - 1) % n) + 1) for i in range(n)}
    return CombEmbedding(edges, rotation)


def grid_on_torus(m: int, n: int) -> CombEmbedding:
    """The m x n toroidal grid, every region a square: ``(mn, 2mn, mn)``, genus 1.

    Horizontal edge ``(i, j)-(i, j+1)`` has id ``2*(i*n+j)``, vertical edge
    ``(i, j)-(i+1, j)`` has id ``2*(i*n+j)+1``; vertex ``(i, j)`` is ``i*n+j``.
    """
    if m < 3 or n < 3:
        raise ValueError("need m, n >= 3 for a simple grid")
    vid = lambda i, j: (i % m) * n + (j % n)  # noqa: E731
    edges = {}
    for i in range(m):
        for j in range(n):
            edges[2 * vid(i, j)] = (vid(i, j), vid(i, j + 1))
            edges[2 * vid(i, j) + 1] = (vid(i, j), vid(i + 1, j))
    rotation = {}
    for i in range(m):
        for j in range(n):
            right = 2 * (2 * vid(i, j))
            up = 2 * (2 * vid(i, j) + 1)
            left = 2 * (2 * vid(i, j - 1)) + 1
            down = 2 * (2 * vid(i - 1, j) + 1) + 1
            rotation[vid(i, j)] = (right, up, left, down)
    return CombEmbedding(edges, rotation)


def theta_graph() -> CombEmbedding:
    """Poles 0 and 1 joined by three paths through 2, 3, 4, in the sphere: ``(5, 6, 3)``."""
    return CombEmbedding.from_neighbor_orders({0: [2, 3, 4], 1: [4, 3, 2], 2: [0, 1], 3: [0, 1], 4: [0, 1]})


def k4_planar() -> CombEmbedding:
    """K4 drawn as a triangle 0,1,2 with 3 in the middle: ``(4, 6, 4)``."""
    return CombEmbedding.from_neighbor_orders({0: [1, 3, 2], 1: [2, 3, 0], 2: [0, 3, 1], 3: [0, 1, 2]})


def planar_embedding(graph: Multigraph) -> CombEmbedding:
    """A genus-0 rotation system for a simple planar graph."""
    g = nx.Graph()
    g.add_nodes_from(graph.vertices)
    g.add_edges_from(graph.edges.values())
    planar, emb = nx.check_planarity(g)
    if not planar:
        raise ValueError("graph is not planar")
    # networkx lists clockwise; reverse for counterclockwise
    orders = {v: list(reversed(list(emb.neighbors_cw_order(v)))) for v in g.nodes}
    return CombEmbedding.from_neighbor_orders(orders)


def icosahedron() -> CombEmbedding:
    """The icosahedron in the sphere: ``(12, 30, 20)``."""
    g = nx.icosahedral_graph()
    return planar_embedding(Multigraph.from_edge_list(sorted(g.edges), g.nodes))


def hypercube_graph(d: int) -> Multigraph:
    """The abstract d-cube: vertices are bit strings, edges flip one bit."""
    if d < 0:
        raise ValueError("d must be >= 0")
    pairs = [(v, v | (1 << k)) for v in range(2**d) for k in range(d) if not v & (1 << k)]
    return Multigraph.from_edge_list(sorted(pairs), range(2**d))


def petersen_graph() -> Multigraph:
    """Outer 5-cycle 0..4, inner pentagram 5..9, spokes i -- i+5."""
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Multigraph.from_edge_list(outer + spokes + inner)


def petersen_torus(budget: int = 2**9) -> CombEmbedding:
    """The first genus-1 Petersen embedding in the deterministic search order."""
    res = find_embedding_with_genus(petersen_graph(), 1, budget)
    if not res.found:
        raise RuntimeError(f"no torus embedding found ({res.status})")
    return res.embedding


def _host(levels: int) -> tuple[CombEmbedding, list[int]]:
    tri = cycle_on_sphere(3)
    # region containing dart 0 (walk 0 -> 1 -> 2) is the inside of C; host vertex 3 goes outside
    emb = stellate_faces(tri, [1])
    reps = [0]
    for _ in range(levels):
        nxt = []
        for d in reps:
            walk = emb.faces[emb.corner_face(d)].darts
            emb = stellate_faces(emb, [d])
            nxt.extend(walk)
        reps = nxt
    return emb, reps


def triangle_host_with_stellations(levels: int) -> CombEmbedding:
    """A triangle ``C`` (edges :data:`HOST_CYCLE`) with a host vertex outside and
    ``levels`` rounds of stellation inside.

    Inside ``C`` there are ``3**levels`` regions and ``3 + (3**levels - 1)/2``
    vertices on or inside it; ``levels=2`` gives ``(8, 18, 12)`` with
    ``r_C = 9`` and ``p_C = 7``.
    """
    if levels < 0:
        raise ValueError("levels must be >= 0")
    return _host(levels)[0]


def host_inner_darts(levels: int) -> list[int]:
    """One dart per innermost region of :func:`triangle_host_with_stellations`."""
    return _host(levels)[1]


def fully_stellated_host(levels: int = 2, count: int | None = None) -> CombEmbedding:
    """The host with the first ``count`` (default: all) innermost regions stellated once more."""
    emb, reps = _host(levels)
    if count is not None:
        reps = reps[:count]
    return stellate_faces(emb, reps)


def fully_stellated_certificate(levels: int = 2) -> KleeCertificate:
    """Local certificate: the fully stellated host extends the host, one new vertex per inner region."""
    base = triangle_host_with_stellations(levels)
    ext = ExtensionMap.identity(base, fully_stellated_host(levels))
    rep = is_extension(base, ext)
    return KleeCertificate("local", ext, tuple(sorted(rep.region_of_vertex.items())), HOST_CYCLE)


# random corpora


def random_connected_multigraph(rng: random.Random, p: int, q: int, multi: bool = False) -> Multigraph:
    """A random recursive spanning tree plus ``q - p + 1`` extra edges.

    Extra edges are distinct non-adjacent pairs unless ``multi`` allows loops
    and parallel edges.  Raises if a simple graph cannot hold ``q`` edges.
    """
    if p < 1 or q < p - 1:
        raise ValueError("need p >= 1 and q >= p - 1")
    order = list(range(p))
    rng.shuffle(order)
    pairs = []
    for k in range(1, p):
        pairs.append((order[rng.randrange(k)], order[k]))
    present = {frozenset(pr) for pr in pairs}
    candidates = [(a, b) for a in range(p) for b in range(a + 1, p) if frozenset((a, b)) not in present]
    extra = q - (p - 1)
    if multi:
        for _ in range(extra):
            a, b = rng.randrange(p), rng.randrange(p)
            pairs.append((min(a, b), max(a, b)))
    else:
        if extra > len(candidates):
            raise ValueError(f"a simple graph on {p} vertices cannot have {q} edges")
        pairs.extend(rng.sample(candidates, extra))
    return Multigraph.from_edge_list([(min(a, b), max(a, b)) for a, b in pairs], range(p))


def random_rotation_system(rng: random.Random, graph: Multigraph) -> CombEmbedding:
    at: dict[int, list[int]] = {v: [] for v in graph.vertices}
    for e, (a, b) in graph.edges.items():
        at[a].append(2 * e)
        at[b].append(2 * e + 1)
    rotation = {}
    for v, darts in at.items():
        darts = sorted(darts)
        rest = darts[1:]
        rng.shuffle(rest)
        rotation[v] = tuple(darts[:1] + rest)
    return CombEmbedding(graph.edges, rotation)


def random_embedding(
    rng: random.Random,
    max_p: int = 8,
    max_q: int = 14,
    min_p: int = 1,
    multi: bool = False,
) -> CombEmbedding:
    """A random rotation system on a random connected graph with ``p <= max_p``, ``q <= max_q``."""
    p = rng.randint(min_p, max_p)
    simple_max = p * (p - 1) // 2
    hi = max_q if multi else min(max_q, simple_max)
    q = rng.randint(p - 1, max(p - 1, hi))
    return random_rotation_system(rng, random_connected_multigraph(rng, p, q, multi))


def all_rotation_systems(graph: Multigraph) -> list[CombEmbedding]:
    """Every rotation system of a small graph (no symmetry reduction)."""
    at: dict[int, list[int]] = {v: [] for v in graph.vertices}
    for e, (a, b) in graph.edges.items():
        at[a].append(2 * e)
        at[b].append(2 * e + 1)
    options = [list(rotation_options(sorted(at[v]))) for v in graph.vertices]
    return [CombEmbedding(graph.edges, dict(zip(graph.vertices, combo))) for combo in itertools.product(*options)]


def corpus(seed: int = 0, count: int = 200, max_p: int = 8, max_q: int = 14) -> list[CombEmbedding]:
    """Named fixtures followed by random embeddings, ``count`` in total."""
    fixtures: list[CombEmbedding] = [
        cycle_on_sphere(1),
        cycle_on_sphere(2),
        cycle_on_sphere(3),
        cycle_on_sphere(6),
        theta_graph(),
        k4_planar(),
        grid_on_torus(3, 3),
        grid_on_torus(3, 4),
        triangle_host_with_stellations(0),
        triangle_host_with_stellations(1),
        triangle_host_with_stellations(2),
        fully_stellated_host(2),
        icosahedron(),
        petersen_torus(),
    ]
    rng = random.Random(seed)
    out = list(fixtures)
    while len(out) < count:
        out.append(random_embedding(rng, max_p, max_q, multi=rng.random() < 0.25))
    return out
