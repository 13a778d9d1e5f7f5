"""Hamiltonian topological extensions: thread a closed curve through every vertex.

Routes run from corner to corner through regions and cross original edges
transversally.  Each crossing subdivides the edge at a new degree-4 vertex,
and each curve segment becomes an edge drawn inside one region.  The
complement of a partial curve stays connected, so every route exists.
"""

from __future__ import annotations

import itertools
import random
from collections import deque
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .edit import ExtensionMap, add_corner_edge, is_topological_extension, restrict, split_dart
from .embedding import CombEmbedding, require_valid, stats, twin, validate
from .ham import HamCycle

__all__ = [
    "CrossingSearch",
    "CurvePlan",
    "Route",
    "RoutingError",
    "TopoExtensionResult",
    "all_shortest_routes",
    "build_extension",
    "min_crossings_search",
    "plan_route",
    "verify_result",
]


class RoutingError(RuntimeError):
    """No route exists; on a valid working embedding this is a bug."""


@dataclass(frozen=True)
class Route:
    """One curve segment, as darts of the embedding it was planned on.

    The segment leaves the corner before ``start`` and passes through
    ``faces``, crossing the edge of each dart in ``crossings`` (a walk dart of
    the face it leaves).  It ends at the corner before ``end``.
    """

    start: int
    crossings: tuple[int, ...]
    end: int
    faces: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.crossings)


@dataclass(frozen=True)
class CurvePlan:
    order: tuple[int, ...]
    routes: tuple[Route, ...]


@dataclass(frozen=True)
class TopoExtensionResult:
    gamma_prime: CombEmbedding
    extended: CombEmbedding
    extension_map: ExtensionMap
    hamiltonian_cycle: HamCycle
    crossing_count: int
    plan: CurvePlan
    crossings: tuple[int, ...] = ()


def _lowest_corner(emb: CombEmbedding, face: int, v: int) -> int | None:
    walk = emb.faces[face]
    for d, x in zip(walk.darts, walk.vertices):
        if x == v:
            return d
    return None


def _faces_at(emb: CombEmbedding, v: int) -> list[int]:
    return sorted({emb.corner_face(d) for d in emb.rotation[v]})


def _crossing_arcs(emb: CombEmbedding, face: int, crossable: set[int]) -> Iterator[tuple[int, int]]:
    for d in emb.faces[face].darts:
        if d >> 1 in crossable:
            g = emb.corner_face(twin(d))
            if g != face:
                yield d, g


def _bfs(emb: CombEmbedding, sources: Sequence[int], crossable: set[int]) -> dict[int, int]:
    dist = {f: 0 for f in sources}
    queue = deque(sources)
    while queue:
        f = queue.popleft()
        for _, g in _crossing_arcs(emb, f, crossable):
            if g not in dist:
                dist[g] = dist[f] + 1
                queue.append(g)
    return dist


def all_shortest_routes(
    emb: CombEmbedding, from_vertex: int, to_vertex: int, crossable: set[int], limit: int | None = None
) -> Iterator[Route]:
    """Every minimum-crossing route in lexicographic order of (start face, crossing occurrences)."""
    if from_vertex == to_vertex:
        raise ValueError("route endpoints must differ")
    starts = _faces_at(emb, from_vertex)
    ends = _faces_at(emb, to_vertex)
    fwd = _bfs(emb, starts, crossable)
    reachable = [f for f in ends if f in fwd]
    if not reachable:
        raise RoutingError(f"no route from {from_vertex} to {to_vertex}")
    total = min(fwd[f] for f in reachable)
    back = _bfs(emb, ends, crossable)
    count = 0

    def walk(face: int, faces: list[int], darts: list[int]) -> Iterator[Route]:
        if back[face] == 0 and len(darts) == total:
            yield Route(_lowest_corner(emb, faces[0], from_vertex), tuple(darts), _lowest_corner(emb, face, to_vertex), tuple(faces))
            return
        for d, g in _crossing_arcs(emb, face, crossable):
            if back.get(g) == back[face] - 1:
                yield from walk(g, faces + [g], darts + [d])

    for f in starts:
        if fwd[f] == 0 and back.get(f) == total:
            for route in walk(f, [f], []):
                yield route
                count += 1
                if limit is not None and count >= limit:
                    return


def plan_route(emb: CombEmbedding, from_vertex: int, to_vertex: int, crossable: set[int]) -> Route:
    """The first minimum-crossing route between two vertices, through regions only."""
    return next(all_shortest_routes(emb, from_vertex, to_vertex, crossable))


@dataclass
class _State:
    emb: CombEmbedding
    crossable: set[int]
    paths: dict[int, list[int]]
    owner: dict[int, int]  # current edge -> original edge
    cycle_vertices: list[int] = field(default_factory=list)
    cycle_edges: list[int] = field(default_factory=list)
    crossings: list[int] = field(default_factory=list)
    routes: list[Route] = field(default_factory=list)

    def copy(self) -> "_State":
        return _State(
            self.emb,
            set(self.crossable),
            {e: list(p) for e, p in self.paths.items()},
            dict(self.owner),
            list(self.cycle_vertices),
            list(self.cycle_edges),
            list(self.crossings),
            list(self.routes),
        )


def _split(state: _State, d: int) -> tuple[int, int]:
    emb, x, cont = split_dart(state.emb, d)
    state.emb = emb
    e, new = d >> 1, cont >> 1
    orig = state.owner[e]
    state.owner[new] = orig
    state.crossable.add(new)
    path = state.paths[orig]
    if d in path:
        i = path.index(d)
        path[i : i + 1] = [d, cont]
    else:
        i = path.index(twin(d))
        path[i : i + 1] = [twin(cont), twin(d)]
    return x, cont


def _realize(state: _State, u: int, route: Route) -> None:
    """Draw ``route`` into the working embedding, updating bookkeeping in place."""
    state.routes.append(route)
    state.cycle_vertices.append(u)
    corner = route.start
    pending = list(route.crossings)
    end = route.end
    for k in range(len(pending)):
        d = pending[k]
        x, cont = _split(state, d)
        # the far end of the split edge now carries dart twin(cont)
        old = twin(d)
        remap = lambda y: twin(cont) if y == old else y  # noqa: E731
        corner = remap(corner)
        end = remap(end)
        pending[k + 1 :] = [remap(y) for y in pending[k + 1 :]]
        state.emb, e = add_corner_edge(state.emb, corner, cont)
        state.cycle_edges.append(e)
        state.cycle_vertices.append(x)
        state.crossings.append(x)
        corner = twin(d)
    state.emb, e = add_corner_edge(state.emb, corner, end)
    state.cycle_edges.append(e)


def _loop_route(emb: CombEmbedding, v: int) -> Route:
    # prefer two distinct corners of one region; a bare vertex only has one corner
    for f in emb.faces:
        occ = [d for d, x in zip(f.darts, f.vertices) if x == v]
        if len(occ) >= 2:
            return Route(occ[0], (), occ[1], (f.face_id,))
    anchor = emb.faces[0].darts[0] if emb.q else -1
    return Route(anchor, (), anchor, (0,))


def _loop_on_bare_vertex(state: _State, v: int) -> None:
    edges = {0: (v, v)}
    state.emb = CombEmbedding(edges, {v: (0, 1)})
    state.cycle_vertices.append(v)
    state.cycle_edges.append(0)


def _initial_state(emb: CombEmbedding) -> _State:
    return _State(
        emb,
        set(emb.edges),
        {e: [2 * e] for e in emb.edges},
        {e: e for e in emb.edges},
    )


def _check_order(emb: CombEmbedding, order: Sequence[int] | None) -> tuple[int, ...]:
    if order is None:
        return emb.vertices
    order = tuple(order)
    if sorted(order) != sorted(emb.vertices):
        raise ValueError("order must be a permutation of the vertices")
    return order


def _assemble(base: CombEmbedding, order: tuple[int, ...], state: _State) -> TopoExtensionResult:
    g = state.emb
    keep = set(state.owner)
    gamma_prime = restrict(g, keep, list(base.vertices) + state.crossings)
    ext = ExtensionMap(
        base,
        g,
        {v: v for v in base.vertices},
        {e: tuple(state.paths[e]) for e in base.edges},
    )
    cycle = HamCycle(tuple(state.cycle_vertices), tuple(state.cycle_edges))
    return TopoExtensionResult(
        gamma_prime, g, ext, cycle, len(state.crossings), CurvePlan(order, tuple(state.routes)), tuple(state.crossings)
    )


def build_extension(emb: CombEmbedding, order: Sequence[int] | None = None, seed: int | None = None) -> TopoExtensionResult:
    """Build a Hamiltonian topological extension along ``order``.

    Default order is ascending vertex id; with ``seed`` and no order, a
    random order drawn from ``random.Random(seed)`` is used.
    """
    require_valid(emb)
    if order is None and seed is not None:
        order = list(emb.vertices)
        random.Random(seed).shuffle(order)
    order = _check_order(emb, order)
    state = _initial_state(emb)
    p = len(order)
    if p == 1:
        v = order[0]
        if emb.q == 0:
            _loop_on_bare_vertex(state, v)
        else:
            _realize(state, v, _loop_route(emb, v))
        return _assemble(emb, order, state)
    _route_all(state, order)
    return _assemble(emb, order, state)


def _route_all(state: _State, order: tuple[int, ...], limit: int | None = None) -> bool:
    """Route the curve along ``order``; False once more than ``limit`` crossings are used."""
    p = len(order)
    for k in range(p):
        u, v = order[k], order[(k + 1) % p]
        route = plan_route(state.emb, u, v, state.crossable)
        if limit is not None and len(state.crossings) + len(route) > limit:
            return False
        _realize(state, u, route)
    return True


@dataclass
class VerifyReport:
    ok: bool
    problems: list[str] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok


def _cycle_problems(g: CombEmbedding, cycle: HamCycle) -> list[str]:
    out = []
    vs, es = list(cycle.vertices), list(cycle.edges)
    if sorted(vs) != sorted(g.vertices):
        out.append("curve does not visit every vertex exactly once")
    if len(vs) != len(es):
        out.append("curve has mismatched vertex and edge counts")
        return out
    if len(set(es)) != len(es):
        out.append("curve reuses an edge")
    for k, e in enumerate(es):
        u, v = vs[k], vs[(k + 1) % len(vs)]
        if e not in g.edges:
            out.append(f"curve edge {e} missing")
        elif sorted(g.edges[e]) != sorted((u, v)):
            out.append(f"curve edge {e} does not join {u} and {v}")
    return out


def verify_result(base_emb: CombEmbedding, result: TopoExtensionResult) -> VerifyReport:
    """Independently re-check a :class:`TopoExtensionResult`."""
    g = result.extended
    rep = validate(g)
    if not rep.ok:
        return VerifyReport(False, [f"extended embedding invalid: {p}" for p in rep.problems])
    problems = []
    if stats(g).genus != stats(base_emb).genus:
        problems.append("genus changed")
    problems.extend(_cycle_problems(g, result.hamiltonian_cycle))
    curve = set(result.hamiltonian_cycle.edges)
    try:
        path_edges = {d >> 1 for path in result.extension_map.edge_map.values() for d in path}
    except TypeError:
        path_edges = set()
        problems.append("malformed edge map")
    if curve & path_edges:
        problems.append("an edge is both curve and original")
    if set(g.edges) != curve | path_edges:
        problems.append("extended graph has edges that are neither curve nor original")
    new_vertices = [v for v in g.vertices if v not in base_emb.rotation]
    if len(new_vertices) != result.crossing_count:
        problems.append(f"{len(new_vertices)} new vertices but crossing_count {result.crossing_count}")
    for x in new_vertices:
        rot = g.rotation[x]
        kinds = [(d >> 1) in curve for d in rot]
        if len(rot) != 4 or kinds not in ([False, True, False, True], [True, False, True, False]):
            problems.append(f"crossing {x} is not a transversal degree-4 crossing")
    if result.gamma_prime.edges != {e: g.edges[e] for e in path_edges if e in g.edges}:
        problems.append("gamma_prime differs from the original-edge part of the extension")
    try:
        topo = is_topological_extension(base_emb, result.extension_map)
    except ValueError as exc:
        problems.append(f"extension map rejected: {exc}")
    else:
        if not topo.ok:
            problems.extend(topo.problems)
    return VerifyReport(not problems, problems)


@dataclass
class CrossingSearch:
    best: TopoExtensionResult
    crossing_count: int
    proven_minimal: bool
    searched_all: bool
    orders_tried: int
    builds: int
    mode: str
    note: str = ""


def _exhaust_ties(emb: CombEmbedding, order: tuple[int, ...], budget: list[int], bound: int | None):
    """Best result for one order over all shortest-route tie choices, within the shared budget."""
    best: list[_State | None] = [None]
    complete = [True]
    p = len(order)

    def rec(state: _State, k: int) -> None:
        if k == p:
            if best[0] is None or len(state.crossings) < len(best[0].crossings):
                best[0] = state
            return
        u, v = order[k], order[(k + 1) % p]
        for route in all_shortest_routes(state.emb, u, v, state.crossable):
            if budget[0] <= 0:
                complete[0] = False
                return
            budget[0] -= 1
            limit = best[0] and len(best[0].crossings)
            if bound is not None and (limit is None or bound < limit):
                limit = bound
            if limit is not None and len(state.crossings) + len(route) >= limit:
                continue
            nxt = state.copy()
            _realize(nxt, u, route)
            rec(nxt, k + 1)

    rec(_initial_state(emb), 0)
    return best[0], complete[0]


def min_crossings_search(
    emb: CombEmbedding,
    mode: str = "exact",
    budget: int = 100_000,
    samples: int = 100,
    seed: int = 0,
) -> CrossingSearch:
    """Search vertex orders (and, in exact mode, route tie choices) for few crossings.

    ``proven_minimal`` is set only when the count is 0, the one universal
    lower bound.  ``searched_all`` says the whole strategy space (every order
    and every shortest-route choice) was covered, which still leaves routes
    that are not shortest per step unexplored.
    """
    require_valid(emb)
    if mode not in ("exact", "heuristic"):
        raise ValueError("mode must be 'exact' or 'heuristic'")
    verts = emb.vertices
    if len(verts) == 1:
        res = build_extension(emb)
        return CrossingSearch(res, res.crossing_count, res.crossing_count == 0, True, 1, 1, mode, "single vertex")
    if mode == "heuristic":
        rng = random.Random(seed)
        orders = [tuple(verts)]
        for _ in range(max(samples - 1, 0)):
            o = list(verts)
            rng.shuffle(o)
            orders.append(tuple(o))
        best = None
        builds = 0
        for o in orders:
            if builds >= budget:
                break
            builds += 1
            if best is None:
                best = build_extension(emb, o)
                continue
            # abandon an order as soon as it is worse than the best so far
            state = _initial_state(emb)
            if not _route_all(state, o, best.crossing_count):
                continue
            if (len(state.crossings), o) < (best.crossing_count, best.plan.order):
                best = _assemble(emb, o, state)
        return CrossingSearch(
            best, best.crossing_count, best.crossing_count == 0, False, builds, builds, "heuristic",
            "orders sampled at random; routes shortest-first",
        )
    if len(verts) > 8:
        raise ValueError("exact mode needs at most 8 vertices")
    remaining = [budget]
    best_state, best_order = None, None
    searched_all = True
    tried = 0
    for order in itertools.permutations(verts):
        if best_state is not None and not best_state.crossings:
            break  # zero cannot be beaten
        if remaining[0] <= 0:
            searched_all = False
            break
        tried += 1
        bound = len(best_state.crossings) if best_state is not None else None
        state, complete = _exhaust_ties(emb, order, remaining, bound)
        searched_all &= complete
        if state is not None and (best_state is None or len(state.crossings) < len(best_state.crossings)):
            best_state, best_order = state, order
    if best_state is None:
        res = build_extension(emb)
    else:
        res = _assemble(emb, best_order, best_state)
    if res.crossing_count == 0:
        note = "zero crossings"
    elif searched_all:
        note = "minimal over all orders and shortest-route choices"
    else:
        note = "budget ran out before the search space was covered"
    return CrossingSearch(
        res, res.crossing_count, res.crossing_count == 0, searched_all, tried, budget - remaining[0], "exact", note
    )
