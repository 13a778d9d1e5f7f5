"""Plain-text rotation-system files and JSON certificates.

A file looks like::

    rotsys 1
    vertices 0 1 2
    edge 0 0 1
    edge 1 1 2
    edge 2 2 0
    rot 0 : 0a 2b
    rot 1 : 0b 1a
    rot 2 : 1b 2a
    cycle C : 0 1 2

A dart is written as its edge id followed by ``a`` (the end at the edge's
first endpoint) or ``b``.  Rotations are counterclockwise.  Besides
``cycle`` lines (edge ids), a file may carry ``vmap NAME : v=w ...`` and
``emap NAME : e=DART,DART,...`` lines describing an extension map into the
embedding, and ``meta KEY VALUE`` lines.  ``#`` starts a comment.
Serialization is canonical, so ``serialize(parse(text)) == text`` for any
file that serialize produced.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Any

from .edit import Chord, ExtensionMap
from .embedding import CombEmbedding, validate
from .ham import ExtensionCertificate
from .klee import KleeCertificate

__all__ = [
    "EmbeddingFile",
    "ParseError",
    "certificate_from_json",
    "certificate_to_json",
    "dart_ref",
    "embedding_from_dict",
    "embedding_to_dict",
    "parse",
    "parse_dart",
    "read_file",
    "serialize",
]

VERSION = "1"
_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_.-]*$")
_DART = re.compile(r"(\d+)([ab])$")


class ParseError(ValueError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"line {line}, column {col}: {message}")
        self.message = message
        self.line = line
        self.col = col


@dataclass
class EmbeddingFile:
    embedding: CombEmbedding
    cycles: dict[str, tuple[int, ...]] = field(default_factory=dict)
    vmaps: dict[str, dict[int, int]] = field(default_factory=dict)
    emaps: dict[str, dict[int, tuple[int, ...]]] = field(default_factory=dict)
    meta: dict[str, str] = field(default_factory=dict)

    def extension_map(self, name: str, base: CombEmbedding) -> ExtensionMap:
        """The named map, read as going from ``base`` into this file's embedding."""
        return ExtensionMap(base, self.embedding, dict(self.vmaps.get(name, {})), dict(self.emaps[name]))


def dart_ref(d: int) -> str:
    return f"{d >> 1}{'ab'[d & 1]}"


def parse_dart(token: str) -> int:
    m = _DART.match(token)
    if not m:
        raise ValueError(f"bad dart {token!r}")
    return 2 * int(m.group(1)) + (m.group(2) == "b")


def serialize(doc: EmbeddingFile | CombEmbedding) -> str:
    if isinstance(doc, CombEmbedding):
        doc = EmbeddingFile(doc)
    emb = doc.embedding
    rot = emb.canonical_rotation
    lines = [f"rotsys {VERSION}", "vertices " + " ".join(map(str, emb.vertices))]
    lines += [f"edge {e} {a} {b}" for e, (a, b) in sorted(emb.edges.items())]
    for v in emb.vertices:
        darts = " ".join(dart_ref(d) for d in rot[v])
        lines.append(f"rot {v} :" + (f" {darts}" if darts else ""))
    for name in sorted(doc.cycles):
        lines.append(f"cycle {name} : " + " ".join(map(str, doc.cycles[name])))
    for name in sorted(doc.vmaps):
        lines.append(f"vmap {name} : " + " ".join(f"{v}={w}" for v, w in sorted(doc.vmaps[name].items())))
    for name in sorted(doc.emaps):
        items = sorted(doc.emaps[name].items())
        lines.append(f"emap {name} : " + " ".join(f"{e}=" + ",".join(map(dart_ref, path)) for e, path in items))
    for key in sorted(doc.meta):
        lines.append(f"meta {key} {doc.meta[key]}")
    return "\n".join(lines) + "\n"


class _Line:
    def __init__(self, number: int, text: str):
        self.number = number
        self.text = text
        self.tokens = [(m.group(), m.start() + 1) for m in re.finditer(r"\S+", text)]

    def fail(self, message: str, k: int | None = None) -> ParseError:
        col = self.tokens[k][1] if k is not None and k < len(self.tokens) else len(self.text) + 1
        return ParseError(message, self.number, col)

    def int_at(self, k: int, what: str) -> int:
        if k >= len(self.tokens):
            raise self.fail(f"missing {what}")
        tok = self.tokens[k][0]
        if not re.fullmatch(r"-?\d+", tok):
            raise self.fail(f"expected integer {what}, got {tok!r}", k)
        return int(tok)

    def name_colon(self) -> str:
        if len(self.tokens) < 3:
            raise self.fail("expected NAME :")
        name = self.tokens[1][0]
        if not _NAME.match(name):
            raise self.fail(f"bad name {name!r}", 1)
        if self.tokens[2][0] != ":":
            raise self.fail("expected ':'", 2)
        return name


def parse(text: str) -> EmbeddingFile:
    """Parse a rotation-system file; errors carry line and column."""
    lines = []
    for i, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0]
        ln = _Line(i, body)
        if ln.tokens:
            lines.append(ln)
    if not lines:
        raise ParseError("empty file", 1, 1)
    head = lines[0]
    if head.tokens[0][0] != "rotsys":
        raise head.fail("expected 'rotsys' header", 0)
    if len(head.tokens) != 2 or head.tokens[1][0] != VERSION:
        raise head.fail(f"unsupported version, expected {VERSION}", 1)
    vertices: list[int] | None = None
    edges: dict[int, tuple[int, int]] = {}
    rotation: dict[int, tuple[int, ...]] = {}
    doc = EmbeddingFile(CombEmbedding({}, {}))
    first_rot = head
    for ln in lines[1:]:
        kw = ln.tokens[0][0]
        if kw == "vertices":
            if vertices is not None:
                raise ln.fail("duplicate vertices line", 0)
            vertices = [ln.int_at(k, "vertex") for k in range(1, len(ln.tokens))]
            if len(set(vertices)) != len(vertices):
                raise ln.fail("repeated vertex")
        elif kw == "edge":
            if len(ln.tokens) != 4:
                raise ln.fail("expected: edge ID A B", min(len(ln.tokens), 4) if len(ln.tokens) > 4 else None)
            e = ln.int_at(1, "edge id")
            if e in edges:
                raise ln.fail(f"duplicate edge {e}", 1)
            edges[e] = (ln.int_at(2, "endpoint"), ln.int_at(3, "endpoint"))
        elif kw == "rot":
            v = ln.int_at(1, "vertex")
            if len(ln.tokens) < 3 or ln.tokens[2][0] != ":":
                raise ln.fail("expected ':'", 2)
            if v in rotation:
                raise ln.fail(f"duplicate rotation for {v}", 1)
            darts = []
            for k in range(3, len(ln.tokens)):
                try:
                    darts.append(parse_dart(ln.tokens[k][0]))
                except ValueError as exc:
                    raise ln.fail(str(exc), k) from None
            rotation[v] = tuple(darts)
            if first_rot is head:
                first_rot = ln
        elif kw == "cycle":
            name = ln.name_colon()
            doc.cycles[name] = tuple(ln.int_at(k, "edge id") for k in range(3, len(ln.tokens)))
        elif kw == "vmap":
            name = ln.name_colon()
            mapping = {}
            for k in range(3, len(ln.tokens)):
                m = re.fullmatch(r"(\d+)=(\d+)", ln.tokens[k][0])
                if not m:
                    raise ln.fail("expected V=W", k)
                mapping[int(m.group(1))] = int(m.group(2))
            doc.vmaps[name] = mapping
        elif kw == "emap":
            name = ln.name_colon()
            mapping = {}
            for k in range(3, len(ln.tokens)):
                m = re.fullmatch(r"(\d+)=(\S+)", ln.tokens[k][0])
                if not m:
                    raise ln.fail("expected E=DART,DART,...", k)
                try:
                    mapping[int(m.group(1))] = tuple(parse_dart(t) for t in m.group(2).split(","))
                except ValueError as exc:
                    raise ln.fail(str(exc), k) from None
            doc.emaps[name] = mapping
        elif kw == "meta":
            if len(ln.tokens) < 3:
                raise ln.fail("expected: meta KEY VALUE")
            doc.meta[ln.tokens[1][0]] = ln.text[ln.tokens[2][1] - 1 :].rstrip()
        else:
            raise ln.fail(f"unknown keyword {kw!r}", 0)
    if vertices is None:
        raise ParseError("missing vertices line", head.number, 1)
    if set(rotation) != set(vertices):
        missing = sorted(set(vertices) ^ set(rotation))
        raise ParseError(f"rotation lines do not match the vertex list (vertex {missing[0]})", first_rot.number, 1)
    emb = CombEmbedding(edges, rotation)
    rep = validate(emb)
    if not rep.ok:
        raise ParseError("invalid embedding: " + "; ".join(rep.problems), first_rot.number, 1)
    doc.embedding = emb
    for name, cyc in doc.cycles.items():
        bad = [e for e in cyc if e not in edges]
        if bad:
            raise ParseError(f"cycle {name} names unknown edge {bad[0]}", head.number, 1)
    return doc


def read_file(path: str) -> EmbeddingFile:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())


# JSON certificates


def embedding_to_dict(emb: CombEmbedding) -> dict[str, Any]:
    return {
        "edges": {str(e): list(ab) for e, ab in sorted(emb.edges.items())},
        "rotation": {str(v): list(r) for v, r in sorted(emb.canonical_rotation.items())},
    }


def embedding_from_dict(data: dict[str, Any]) -> CombEmbedding:
    return CombEmbedding(
        {int(e): (int(ab[0]), int(ab[1])) for e, ab in data["edges"].items()},
        {int(v): tuple(int(d) for d in r) for v, r in data["rotation"].items()},
    )


def certificate_to_json(cert: ExtensionCertificate | KleeCertificate) -> str:
    if isinstance(cert, ExtensionCertificate):
        data: dict[str, Any] = {
            "type": "extension",
            "chords": [[c.face_id, c.i, c.j] for c in cert.chords],
            "cycle": list(cert.cycle),
            "links": [list(link) for link in cert.links],
        }
    else:
        ext = cert.extension
        data = {
            "type": "klee",
            "kind": cert.kind,
            "extended": embedding_to_dict(ext.extended),
            "vertex_map": {str(v): w for v, w in sorted(ext.vertex_map.items())},
            "edge_map": {str(e): list(p) for e, p in sorted(ext.edge_map.items())},
            "added": [list(a) for a in cert.added],
            "cycle": list(cert.cycle) if cert.cycle else None,
            "inside": cert.inside,
        }
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def certificate_from_json(text: str, base: CombEmbedding) -> ExtensionCertificate | KleeCertificate:
    """Read a certificate about ``base``; raises ValueError on malformed input."""
    try:
        data = json.loads(text)
        kind = data["type"]
        if kind == "extension":
            return ExtensionCertificate(
                tuple(Chord(int(f), int(i), int(j)) for f, i, j in data["chords"]),
                tuple(int(v) for v in data["cycle"]),
                tuple((str(k), int(x)) for k, x in data["links"]),
            )
        if kind == "klee":
            ext = ExtensionMap(
                base,
                embedding_from_dict(data["extended"]),
                {int(v): int(w) for v, w in data["vertex_map"].items()},
                {int(e): tuple(int(d) for d in p) for e, p in data["edge_map"].items()},
            )
            cyc = data.get("cycle")
            return KleeCertificate(
                str(data["kind"]),
                ext,
                tuple((int(w), int(f)) for w, f in data["added"]),
                tuple(int(e) for e in cyc) if cyc else None,
                data.get("inside"),
            )
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed certificate: {exc}") from None
    raise ValueError(f"unknown certificate type {kind!r}")
