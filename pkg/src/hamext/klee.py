"""Klee-type obstructions: region/vertex counts, separating cycles, certificates."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Sequence

from networkx.utils import UnionFind

from .edit import ExtensionMap, is_extension
from .embedding import CombEmbedding, require_valid

__all__ = [
    "CertificateCheck",
    "CertificateError",
    "KleeCertificate",
    "KleeType",
    "LocalKlee",
    "ScanResult",
    "SideDecomposition",
    "Witness",
    "check_theorem1_certificate",
    "cycle_from_vertices",
    "cycle_side_decomposition",
    "is_klee_type",
    "is_local_klee",
    "scan_local_klee",
    "simple_cycles",
]


@dataclass(frozen=True)
class KleeType:
    holds: bool
    r: int
    p: int

    def __bool__(self) -> bool:
        return self.holds


def is_klee_type(emb: CombEmbedding) -> KleeType:
    """More regions than vertices."""
    require_valid(emb)
    return KleeType(emb.r > emb.p, emb.r, emb.p)


@dataclass(frozen=True)
class SideDecomposition:
    """How a simple cycle cuts the surface.

    ``p_side`` counts the vertices strictly on a side plus every vertex of the
    cycle; ``side_of_face``, ``r_side`` and ``p_side`` are empty unless the
    cycle separates.
    """

    cycle_edges: tuple[int, ...]
    cycle_vertices: tuple[int, ...]
    separates: bool
    side_of_face: dict[int, str] = field(default_factory=dict)
    strict_vertices: dict[str, tuple[int, ...]] = field(default_factory=dict)
    r_side: dict[str, int] = field(default_factory=dict)
    p_side: dict[str, int] = field(default_factory=dict)


def _cycle_darts(emb: CombEmbedding, cycle: Sequence[int]) -> tuple[list[int], list[int]]:
    """Orient a simple cycle given by edge ids; returns (vertex sequence, dart sequence)."""
    edges = list(cycle)
    if not edges:
        raise ValueError("empty cycle")
    if len(set(edges)) != len(edges):
        raise ValueError("cycle repeats an edge")
    for e in edges:
        if e not in emb.edges:
            raise ValueError(f"cycle edge {e} is not in the embedding")
    incidence: dict[int, int] = {}
    for e in edges:
        for v in emb.edges[e]:
            incidence[v] = incidence.get(v, 0) + 1
    if any(k != 2 for k in incidence.values()):
        raise ValueError("edges do not form a simple cycle")
    a, _ = emb.edges[edges[0]]
    darts = [2 * edges[0]]
    verts = [a]
    remaining = set(edges[1:])
    v = emb.head_of(darts[0])
    while remaining:
        nxt = next((e for e in sorted(remaining) if v in emb.edges[e]), None)
        if nxt is None:
            raise ValueError("edges do not form a single cycle")
        remaining.discard(nxt)
        d = 2 * nxt if emb.edges[nxt][0] == v else 2 * nxt + 1
        verts.append(v)
        darts.append(d)
        v = emb.head_of(d)
    if v != a:
        raise ValueError("edges do not form a closed cycle")
    return verts, darts


def cycle_from_vertices(emb: CombEmbedding, vertices: Sequence[int]) -> tuple[int, ...]:
    """Edge ids of the cycle through ``vertices`` (lowest edge id between each pair)."""
    out = []
    n = len(vertices)
    for k in range(n):
        u, v = vertices[k], vertices[(k + 1) % n]
        cands = [e for e, (a, b) in emb.edges.items() if {a, b} == {u, v} and e not in out]
        if not cands:
            raise ValueError(f"no edge between {u} and {v}")
        out.append(min(cands))
    return tuple(out)


def cycle_side_decomposition(emb: CombEmbedding, cycle: Sequence[int]) -> SideDecomposition:
    """Decide whether the cycle (edge ids) separates the surface, and count each side.

    Regions are merged across every edge off the cycle, and around every cycle
    vertex within each of the two arcs its cycle darts cut the rotation into.
    Side ``A`` is the class of the lowest-numbered region.
    """
    require_valid(emb)
    verts, darts = _cycle_darts(emb, cycle)
    on_cycle = set(cycle)
    uf = UnionFind(range(emb.r))
    for e in emb.edges:
        if e not in on_cycle:
            uf.union(emb.corner_face(2 * e), emb.corner_face(2 * e + 1))
    n = len(darts)
    for k, v in enumerate(verts):
        c_out, c_in = darts[k], darts[(k - 1) % n] ^ 1
        rot = emb.rotation_from(v, c_out)
        split = rot.index(c_in)
        for arc in (rot[1:split + 1], rot[split + 1:] + rot[:1]):
            faces = [emb.corner_face(d) for d in arc]
            for f in faces[1:]:
                uf.union(faces[0], f)
    classes = sorted({uf[f] for f in range(emb.r)}, key=lambda root: min(f for f in range(emb.r) if uf[f] == root))
    edges_t, verts_t = tuple(cycle), tuple(verts)
    if len(classes) == 1:
        return SideDecomposition(edges_t, verts_t, False)
    if len(classes) != 2:
        raise AssertionError(f"a simple cycle left {len(classes)} pieces")
    label = {classes[0]: "A", classes[1]: "B"}
    side_of_face = {f: label[uf[f]] for f in range(emb.r)}
    cyc = set(verts)
    strict: dict[str, list[int]] = {"A": [], "B": []}
    for v in emb.vertices:
        if v not in cyc:
            strict[side_of_face[emb.corner_face(emb.rotation[v][0])]].append(v)
    r_side = {s: sum(1 for f in side_of_face.values() if f == s) for s in "AB"}
    p_side = {s: len(strict[s]) + len(cyc) for s in "AB"}
    return SideDecomposition(
        edges_t, verts_t, True, side_of_face, {s: tuple(vs) for s, vs in strict.items()}, r_side, p_side
    )


@dataclass(frozen=True)
class LocalKlee:
    holds: bool
    decomposition: SideDecomposition
    inside: tuple[str, ...] = ()

    def __bool__(self) -> bool:
        return self.holds


def is_local_klee(emb: CombEmbedding, cycle: Sequence[int]) -> LocalKlee:
    """Local Klee test for one cycle.

    Requires a vertex strictly on each side, a separating cycle, and a side
    with at least as many regions as vertices inside or on the cycle; every
    such side is reported in ``inside``.
    """
    dec = cycle_side_decomposition(emb, cycle)
    if not dec.separates:
        return LocalKlee(False, dec)
    if not all(dec.strict_vertices[s] for s in "AB"):
        return LocalKlee(False, dec)
    inside = tuple(s for s in "AB" if dec.r_side[s] >= dec.p_side[s])
    return LocalKlee(bool(inside), dec, inside)


def simple_cycles(emb: CombEmbedding, max_length: int) -> Iterator[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Simple cycles as ``(vertex sequence, edge sequence)``, by length then lexicographically.

    The vertex sequence starts at the cycle's least vertex and, for length
    three or more, runs towards the smaller of its two neighbours.
    """
    adj: dict[int, list[tuple[int, int]]] = {v: [] for v in emb.vertices}
    for e, (a, b) in emb.edges.items():
        if a != b:
            adj[a].append((b, e))
            adj[b].append((a, e))
    for v in adj:
        adj[v].sort()
    for length in range(1, max_length + 1):
        found: list[tuple[tuple[int, ...], tuple[int, ...]]] = []
        if length == 1:
            found = [((a,), (e,)) for e, (a, b) in emb.edges.items() if a == b]
        elif length == 2:
            for v in emb.vertices:
                for w in {w for w, _ in adj[v] if w > v}:
                    par = sorted(e for x, e in adj[v] if x == w)
                    found.extend(((v, w), (e, f)) for i, e in enumerate(par) for f in par[i + 1:])
        else:
            for s in emb.vertices:
                stack = [(s, (s,), ())]
                while stack:
                    v, path, used = stack.pop()
                    if len(path) == length:
                        if path[1] < path[-1]:
                            for w, e in adj[v]:
                                if w == s:
                                    found.append((path, used + (e,)))
                        continue
                    for w, e in adj[v]:
                        if w > s and w not in path:
                            stack.append((w, path + (w,), used + (e,)))
        yield from sorted(found)


@dataclass(frozen=True)
class Witness:
    cycle_edges: tuple[int, ...]
    cycle_vertices: tuple[int, ...]
    side: str
    r_side: int
    p_side: int


@dataclass
class ScanResult:
    witnesses: list[Witness]
    exhaustive: bool
    examined: int


def scan_local_klee(emb: CombEmbedding, max_cycle_length: int, budget: int = 10**6) -> ScanResult:
    """Every local-Klee witness among cycles up to ``max_cycle_length`` edges.

    ``budget`` caps how many cycles are tested; ``exhaustive`` says whether
    enumeration finished.
    """
    require_valid(emb)
    witnesses = []
    examined = 0
    for verts, edges in simple_cycles(emb, max_cycle_length):
        if examined >= budget:
            return ScanResult(witnesses, False, examined)
        examined += 1
        res = is_local_klee(emb, edges)
        for side in res.inside:
            dec = res.decomposition
            witnesses.append(Witness(edges, verts, side, dec.r_side[side], dec.p_side[side]))
    return ScanResult(witnesses, True, examined)


# certificates


class CertificateError(ValueError):
    """The certificate is malformed (not merely failing its hypotheses)."""


@dataclass(frozen=True)
class KleeCertificate:
    """Witness that an extension graph cannot be Hamiltonian.

    ``added`` pairs each new vertex of the extended embedding with the
    base region it lies in.  The local kind also names the base cycle
    (edge ids) and optionally which side (``"A"``/``"B"``) is the inside.
    """

    kind: str
    extension: ExtensionMap
    added: tuple[tuple[int, int], ...]
    cycle: tuple[int, ...] | None = None
    inside: str | None = None

    @property
    def base(self) -> CombEmbedding:
        return self.extension.base


@dataclass
class CertificateCheck:
    valid: bool
    reasons: list[str]
    s: int
    conclusion: str | None = None

    def __bool__(self) -> bool:
        return self.valid


def check_theorem1_certificate(cert: KleeCertificate) -> CertificateCheck:
    base = cert.base
    require_valid(base)
    if cert.kind not in ("global", "local"):
        raise CertificateError(f"unknown certificate kind {cert.kind!r}")
    ws = [w for w, _ in cert.added]
    regions = [f for _, f in cert.added]
    s = len(cert.added)
    if len(set(regions)) != s:
        raise CertificateError("assigned regions overlap")
    if len(set(ws)) != s:
        raise CertificateError("added vertices repeat")
    if any(not 0 <= f < base.r for f in regions):
        raise CertificateError("region id out of range")
    images = set(cert.extension.vertex_map.values())
    for w in ws:
        if w in images:
            raise CertificateError(f"w = {w} is a vertex of the base graph, not an interior point")
        if w not in cert.extension.extended.rotation:
            raise CertificateError(f"w = {w} is not a vertex of the extended embedding")
    if cert.kind == "local" and not cert.cycle:
        raise CertificateError("local certificate needs a cycle")

    reasons: list[str] = []
    ext = is_extension(base, cert.extension)
    if not ext.ok:
        return CertificateCheck(False, ["not an extension: " + "; ".join(ext.problems)], s)
    for w, f in cert.added:
        if ext.region_of_vertex.get(w) != f:
            reasons.append(f"w = {w} lies in region {ext.region_of_vertex.get(w)}, not {f}")
    if reasons:
        return CertificateCheck(False, reasons, s)

    if cert.kind == "global":
        p, r = base.p, base.r
        if not r > p:
            reasons.append(f"base is not of Klee type (r={r}, p={p})")
        if not s >= p + 1:
            reasons.append(f"s={s} < p+1={p + 1}")
    else:
        lk = is_local_klee(base, cert.cycle)
        dec = lk.decomposition
        if not lk.holds:
            reasons.append("cycle is not a local Klee witness")
        else:
            sides = [cert.inside] if cert.inside else list(lk.inside)
            sides = [sd for sd in sides if sd in lk.inside and all(dec.side_of_face[f] == sd for f in regions)]
            if not sides:
                reasons.append("assigned regions are not all inside a qualifying side of the cycle")
            else:
                sd = sides[0]
                r_c, p_c = dec.r_side[sd], dec.p_side[sd]
                if not r_c >= s >= p_c:
                    reasons.append(f"need r_C={r_c} >= s={s} >= p_C={p_c}")
    if reasons:
        return CertificateCheck(False, reasons, s)
    return CertificateCheck(
        True,
        [],
        s,
        "the extended graph, and every extension of its embedding keeping these added vertices, is non-Hamiltonian",
    )
