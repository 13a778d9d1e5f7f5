"""Exact search for Hamiltonian extensions inside regions.

An embedding is Hamiltonian-extendable iff some per-region non-crossing set of
chords makes the graph Hamiltonian: a Hamiltonian cycle of any extension
enters each region along vertex-disjoint paths between boundary corners, and
each such path can be shortened to a chord.  :func:`oracle_decide_with_added_vertices`
checks that reduction by brute force over extensions with new vertices.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

from .edit import (
    Chord,
    ChordCrossingError,
    ExtensionMap,
    add_face_vertex,
    chords_cross,
    is_extension,
    realize_chords,
)
from .embedding import CombEmbedding, Multigraph, require_valid, stats

__all__ = [
    "BudgetExceeded",
    "Chord",
    "DeciderOutcome",
    "ExtensionCertificate",
    "HamCycle",
    "OracleWitness",
    "crossing",
    "decide_ham_extendable",
    "hamiltonian_cycle",
    "min_added_edges",
    "oracle_decide_with_added_vertices",
    "verify_certificate",
]

YES, NO, UNKNOWN = "YES", "NO", "UNKNOWN"


class BudgetExceeded(Exception):
    pass


def crossing(chord1: Chord, chord2: Chord) -> bool:
    """Chords cross iff they share a face and their four endpoints strictly interleave."""
    return chords_cross(chord1, chord2)


@dataclass(frozen=True)
class HamCycle:
    """A Hamiltonian cycle: ``edges[k]`` joins ``vertices[k]`` and ``vertices[k+1]`` (cyclically)."""

    vertices: tuple[int, ...]
    edges: tuple[int, ...]


def hamiltonian_cycle(graph: Multigraph, budget: int | None = None) -> HamCycle | None:
    """Plain exhaustive Hamiltonian cycle search on an abstract multigraph.

    One vertex needs a loop and two vertices need two parallel edges;
    otherwise loops and parallel copies are ignored.
    """
    verts = graph.vertices
    n = len(verts)
    if n == 0:
        return None
    if n == 1:
        loops = sorted(e for e, (a, b) in graph.edges.items() if a == b)
        return HamCycle(verts, (loops[0],)) if loops else None
    if n == 2:
        par = sorted(e for e, (a, b) in graph.edges.items() if a != b)
        return HamCycle(verts, (par[0], par[1])) if len(par) >= 2 else None
    index = {v: i for i, v in enumerate(verts)}
    adj = [0] * n
    link: dict[tuple[int, int], int] = {}
    for e, (a, b) in sorted(graph.edges.items(), reverse=True):
        if a == b:
            continue
        i, j = index[a], index[b]
        adj[i] |= 1 << j
        adj[j] |= 1 << i
        link[(i, j)] = link[(j, i)] = e
    full = (1 << n) - 1
    if any(bin(m).count("1") < 2 for m in adj):
        return None
    path = [0]
    nodes = 0

    def feasible(visited: int, cur: int) -> bool:
        free = full & ~visited
        ends = (1 << cur) | 1
        pool = free | ends
        m = free
        while m:
            low = m & -m
            u = low.bit_length() - 1
            if bin(adj[u] & pool & ~low).count("1") < 2:
                return False
            m ^= low
        return True

    def dfs(cur: int, visited: int) -> bool:
        nonlocal nodes
        nodes += 1
        if budget is not None and nodes > budget:
            raise BudgetExceeded
        if visited == full:
            return bool(adj[cur] & 1)
        if not feasible(visited, cur):
            return False
        m = adj[cur] & ~visited
        while m:
            low = m & -m
            w = low.bit_length() - 1
            path.append(w)
            if dfs(w, visited | low):
                return True
            path.pop()
            m ^= low
        return False

    if not dfs(0, 1):
        return None
    cyc = tuple(verts[i] for i in path)
    edges = tuple(link[(path[k], path[(k + 1) % n])] for k in range(n))
    return HamCycle(cyc, edges)


# chord certificates


@dataclass(frozen=True)
class ExtensionCertificate:
    """Chords plus a Hamiltonian cycle of the chord-augmented graph.

    ``links[k]`` joins ``cycle[k]`` to ``cycle[k+1]`` and is either
    ``("edge", base_edge_id)`` or ``("chord", index_into_chords)``.
    """

    chords: tuple[Chord, ...]
    cycle: tuple[int, ...]
    links: tuple[tuple[str, int], ...]


@dataclass(frozen=True)
class OracleWitness:
    """A Hamiltonian extension found by adding vertices: the extension and its cycle."""

    extension: ExtensionMap
    cycle: HamCycle


@dataclass
class DeciderOutcome:
    status: str
    certificate: ExtensionCertificate | OracleWitness | None = None
    nodes: int = 0
    min_chords: int | None = None
    note: str = ""

    @property
    def exhaustive(self) -> bool:
        return self.status != UNKNOWN


class _ChordSearch:
    """Backtracking over partial cycles; moves are unused edges, then non-crossing chords."""

    def __init__(self, emb: CombEmbedding, budget: int):
        self.emb = emb
        self.budget = budget
        self.nodes = 0
        self.verts = emb.vertices
        self.n = len(self.verts)
        self.index = {v: i for i, v in enumerate(self.verts)}
        n = self.n
        # edge moves: neighbour -> edge ids (lowest first)
        self.edge_moves: list[list[tuple[int, int]]] = [[] for _ in range(n)]
        pair_edges: dict[tuple[int, int], list[int]] = {}
        for e, (a, b) in emb.edges.items():
            if a == b:
                continue
            i, j = self.index[a], self.index[b]
            pair_edges.setdefault((i, j), []).append(e)
            pair_edges.setdefault((j, i), []).append(e)
        keep = 2 if n == 2 else 1
        for (i, j), es in sorted(pair_edges.items()):
            for e in sorted(es)[:keep]:
                self.edge_moves[i].append((j, e))
        self.gamma_mask = [0] * n
        for (i, j) in pair_edges:
            self.gamma_mask[i] |= 1 << j
        # chord moves per vertex, lexicographic by (face, i, j)
        self.chord_moves: list[list[tuple[Chord, int]]] = [[] for _ in range(n)]
        self.chord_mask = [0] * n
        for f in emb.faces:
            for i, j in itertools.combinations(range(len(f)), 2):
                u, w = self.index[f.vertices[i]], self.index[f.vertices[j]]
                if u == w:
                    continue
                if n >= 3 and self.gamma_mask[u] >> w & 1:
                    continue  # an existing edge serves any cycle of length >= 3 just as well
                c = Chord(f.face_id, i, j)
                self.chord_moves[u].append((c, w))
                self.chord_moves[w].append((c, u))
                self.chord_mask[u] |= 1 << w
                self.chord_mask[w] |= 1 << u
        for moves in self.chord_moves:
            moves.sort(key=lambda m: (m[0].face_id, m[0].i, m[0].j))

    def run(self, max_chords: int) -> ExtensionCertificate | None:
        n = self.n
        self.max_chords = max_chords
        self.path = [0]
        self.links: list[tuple[str, int]] = []
        self.chosen: list[Chord] = []
        self.used_edges: set[int] = set()
        if n == 1:
            v = self.verts[0]
            loops = sorted(e for e, (a, b) in self.emb.edges.items() if a == b)
            self.nodes += 1
            return ExtensionCertificate((), (v,), (("edge", loops[0]),)) if loops else None
        if self._dfs(0, 1):
            return ExtensionCertificate(
                tuple(self.chosen), tuple(self.verts[i] for i in self.path), tuple(self.links)
            )
        return None

    def _chord_ok(self, c: Chord) -> bool:
        for other in self.chosen:
            if other == c or chords_cross(other, c):
                return False
        return True

    def _feasible(self, cur: int, visited: int) -> bool:
        if self.n == 2:
            return True  # parallel links, not distinct neighbours
        full = (1 << self.n) - 1
        free = full & ~visited
        pool = free | (1 << cur) | 1
        chords_left = len(self.chosen) < self.max_chords
        m = free
        while m:
            low = m & -m
            u = low.bit_length() - 1
            avail = self.gamma_mask[u]
            if chords_left:
                avail |= self.chord_mask[u]
            if bin(avail & pool & ~low).count("1") < 2:
                return False
            m ^= low
        return True

    def _moves(self, cur: int, targets: int):
        for w, e in self.edge_moves[cur]:
            if targets >> w & 1 and e not in self.used_edges:
                yield w, ("edge", e), None
        if len(self.chosen) < self.max_chords:
            for c, w in self.chord_moves[cur]:
                if targets >> w & 1 and self._chord_ok(c):
                    yield w, ("chord", len(self.chosen)), c

    def _dfs(self, cur: int, visited: int) -> bool:
        self.nodes += 1
        if self.nodes > self.budget:
            raise BudgetExceeded
        full = (1 << self.n) - 1
        if visited == full:
            for w, link, c in self._moves(cur, 1):
                self.links.append(link)
                if c is not None:
                    self.chosen.append(c)
                return True
            return False
        if not self._feasible(cur, visited):
            return False
        for w, link, c in list(self._moves(cur, full & ~visited)):
            if c is not None and not self._chord_ok(c):
                continue
            self.path.append(w)
            self.links.append(link)
            if c is None:
                self.used_edges.add(link[1])
            else:
                self.chosen.append(c)
            if self._dfs(w, visited | 1 << w):
                return True
            self.path.pop()
            self.links.pop()
            if c is None:
                self.used_edges.discard(link[1])
            else:
                self.chosen.pop()
        return False


BARE_VERTEX_NOTE = "lone vertex: adding one loop closes the cycle (no chord certificate)"


def _bare_vertex(emb: CombEmbedding) -> bool:
    # chords join distinct vertices, so this case sits outside the chord search
    return emb.p == 1 and emb.q == 0


def decide_ham_extendable(emb: CombEmbedding, budget: int = 10**7, max_chords: int | None = None) -> DeciderOutcome:
    """YES with the first certificate in branch order, NO after full exhaustion, else UNKNOWN.

    ``budget`` counts backtrack nodes; ``max_chords`` optionally caps the
    number of chords a certificate may use.
    """
    require_valid(emb)
    if _bare_vertex(emb):
        return DeciderOutcome(YES, None, 0, note=BARE_VERTEX_NOTE)
    search = _ChordSearch(emb, budget)
    limit = emb.p if max_chords is None else max_chords
    try:
        cert = search.run(limit)
    except BudgetExceeded:
        return DeciderOutcome(UNKNOWN, None, search.nodes, note="budget exhausted")
    if cert is None:
        return DeciderOutcome(NO, None, search.nodes)
    return DeciderOutcome(YES, cert, search.nodes, min_chords=None)


def min_added_edges(emb: CombEmbedding, budget: int = 10**7) -> DeciderOutcome:
    """Fewest chords admitting a Hamiltonian cycle, by iterative deepening on the chord count."""
    require_valid(emb)
    if _bare_vertex(emb):
        return DeciderOutcome(YES, None, 0, min_chords=1, note=BARE_VERTEX_NOTE)
    spent = 0
    for k in range(emb.p + 1):
        out = decide_ham_extendable(emb, budget - spent, max_chords=k)
        spent += out.nodes
        if out.status == YES:
            return DeciderOutcome(YES, out.certificate, spent, min_chords=k)
        if out.status == UNKNOWN:
            return DeciderOutcome(UNKNOWN, None, spent, note=f"budget exhausted while trying {k} chords")
    return DeciderOutcome(NO, None, spent)


@dataclass
class VerifyReport:
    ok: bool
    problems: list[str] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok


def verify_certificate(emb: CombEmbedding, cert: ExtensionCertificate) -> VerifyReport:
    """Re-check a certificate by realizing its chords and walking the cycle edge by edge."""
    require_valid(emb)
    problems = []
    chords = list(cert.chords)
    for a, b in itertools.combinations(chords, 2):
        if chords_cross(a, b):
            problems.append(f"chords {a} and {b} cross")
    if problems:
        return VerifyReport(False, problems)
    try:
        big = realize_chords(emb, chords)
    except (ValueError, ChordCrossingError) as exc:
        return VerifyReport(False, [f"chords not realizable: {exc}"])
    ext = is_extension(emb, ExtensionMap.identity(emb, big))
    if not ext.ok:
        problems.extend(ext.problems)
    if stats(big).genus != stats(emb).genus:
        problems.append("realizing the chords changed the genus")
    cyc = list(cert.cycle)
    if sorted(cyc) != sorted(emb.vertices):
        problems.append("cycle does not visit every vertex exactly once")
    if len(cert.links) != len(cyc):
        problems.append("cycle and link counts differ")
    first_new = emb.next_edge_id()
    used = set()
    for k, (kind, ident) in enumerate(cert.links[: len(cyc)]):
        u, v = cyc[k], cyc[(k + 1) % len(cyc)]
        if kind == "edge":
            e = ident
            if e not in emb.edges:
                problems.append(f"link {k}: no edge {e}")
                continue
        elif kind == "chord":
            if not 0 <= ident < len(chords):
                problems.append(f"link {k}: no chord {ident}")
                continue
            e = first_new + ident
        else:
            problems.append(f"link {k}: unknown kind {kind!r}")
            continue
        if e in used:
            problems.append(f"link {k}: edge {e} used twice")
        used.add(e)
        if sorted(big.edges[e]) != sorted((u, v)):
            problems.append(f"link {k}: edge {e} does not join {u} and {v}")
    return VerifyReport(not problems, problems)


# brute-force oracle over extensions with added vertices


def _face_need(emb: CombEmbedding, walk_vertices: Sequence[int]) -> int:
    """Most interior cycle segments a Hamiltonian extension ever needs in one region."""
    p = emb.p
    distinct = sorted(set(walk_vertices))
    if p == 1:
        return 1
    if p == 2:
        return 2 if len(distinct) == 2 else 0
    adjacent = {frozenset(ab) for ab in emb.edges.values()}
    pairs = [(u, v) for u, v in itertools.combinations(distinct, 2) if frozenset((u, v)) not in adjacent]
    if not pairs:
        return 0
    touched = {x for pr in pairs for x in pr}
    forest = len(touched) if len(touched) == p else len(touched) - 1
    return min(len(pairs), forest)


def _face_configs(emb: CombEmbedding, face: int, cap: int) -> list[tuple]:
    """Maximal placements of up to ``cap`` (<= 2) new vertices in one region.

    Returns ``(key, neighbour lists, recipe)`` triples; neighbour lists name
    base vertices, with ``-1`` standing for the other new vertex.  Adding
    edges never hurts Hamiltonicity, so only maximal placements are listed.
    """
    walk = emb.faces[face]
    L = len(walk)
    out: dict[tuple, tuple] = {}
    out[()] = ((), ("none",))
    if cap >= 1 and L:
        nbrs = (tuple(sorted(walk.vertices)),)
        out.setdefault(nbrs, (nbrs, ("one",)))
    if cap >= 2 and L:
        for a in range(L):
            for ell in range(1, L + 1):
                recipe = ("two", a, ell)
                one = add_face_vertex(emb, face, [(a + k) % L for k in range(ell)])
                w1 = emb.next_vertex_id()
                f2 = one.corner_face(walk.darts[(a + ell - 1) % L])
                w2_walk = one.faces[f2]
                n1 = tuple(sorted(walk.vertices[(a + k) % L] for k in range(ell)))
                n2 = tuple(sorted(-1 if x == w1 else x for x in w2_walk.vertices))
                key = tuple(sorted((n1 + (-1,), n2)))
                out.setdefault(key, ((n1 + (-1,), n2), recipe))
    return [(key, nb, recipe) for key, (nb, recipe) in out.items()]


def _apply_recipe(emb: CombEmbedding, anchor: int, recipe: tuple) -> CombEmbedding:
    face = emb.corner_face(anchor)
    walk = emb.faces[face]
    if recipe[0] == "none":
        return emb
    if recipe[0] == "one":
        return add_face_vertex(emb, face, list(range(len(walk))))
    _, a, ell = recipe
    L = len(walk)
    one = add_face_vertex(emb, face, [(a + k) % L for k in range(ell)])
    f2 = one.corner_face(walk.darts[(a + ell - 1) % L])
    return add_face_vertex(one, f2, list(range(len(one.faces[f2]))))


def oracle_decide_with_added_vertices(
    emb: CombEmbedding, max_new_vertices_per_face: int = 2, budget: int = 10**6
) -> DeciderOutcome:
    """Brute force: try extensions with new vertices inside regions, test each for a Hamiltonian cycle.

    Per region, at most ``max_new_vertices_per_face`` (0, 1 or 2) vertices are
    placed, and never more than the region can usefully hold (interior cycle
    segments join distinct, non-adjacent boundary vertices and form a linear
    forest).  NO is reported only when that cap covers every region's need;
    otherwise an exhausted search is UNKNOWN.  ``budget`` counts extension
    graphs tested.
    """
    require_valid(emb)
    if not 0 <= max_new_vertices_per_face <= 2:
        raise ValueError("max_new_vertices_per_face must be 0, 1 or 2")
    if _bare_vertex(emb):
        (v,) = emb.vertices
        looped = CombEmbedding({0: (v, v)}, {v: (0, 1)})
        return DeciderOutcome(YES, OracleWitness(ExtensionMap.identity(emb, looped), hamiltonian_cycle(looped.graph())), 1)
    needs = [_face_need(emb, f.vertices) for f in emb.faces]
    caps = [min(max_new_vertices_per_face, need) for need in needs]
    per_face = [_face_configs(emb, f.face_id, cap) for f, cap in zip(emb.faces, caps)]
    base_edges = list(emb.edges.values())
    tested = 0
    seen: set[tuple] = set()
    for combo in itertools.product(*per_face):
        key = tuple(sorted(c[0] for c in combo))
        if key in seen:
            continue
        seen.add(key)
        if tested >= budget:
            return DeciderOutcome(UNKNOWN, None, tested, note="budget exhausted")
        tested += 1
        pairs = list(base_edges)
        nxt = emb.next_vertex_id()
        for _, nbr_lists, _ in combo:
            ids = list(range(nxt, nxt + len(nbr_lists)))
            nxt += len(nbr_lists)
            for k, nbrs in enumerate(nbr_lists):
                for x in nbrs:
                    if x == -1:
                        if k == 1:
                            pairs.append((ids[0], ids[1]))
                    else:
                        pairs.append((x, ids[k]))
        graph = Multigraph.from_edge_list(pairs, list(emb.vertices) + list(range(emb.next_vertex_id(), nxt)))
        cyc = hamiltonian_cycle(graph)
        if cyc is not None:
            big = emb
            for f, (_, _, recipe) in zip(emb.faces, combo):
                if f.darts:
                    big = _apply_recipe(big, f.darts[0], recipe)
                elif recipe[0] != "none":
                    raise AssertionError("cannot place a vertex in an empty region")
            witness_cycle = hamiltonian_cycle(big.graph())
            return DeciderOutcome(YES, OracleWitness(ExtensionMap.identity(emb, big), witness_cycle), tested)
    if all(need <= max_new_vertices_per_face for need in needs):
        return DeciderOutcome(NO, None, tested)
    return DeciderOutcome(UNKNOWN, None, tested, note="per-region cap below what some region may need")
