"""Command-line interface: ``hamext <command> ...``.

``ham-ext`` exits 0 for YES, 1 for NO and 2 for UNKNOWN; ``cert-check``
exits 0 when the certificate is valid and 1 otherwise.  Bad input of any kind
exits 3.  ``HAMEXT_BUDGET`` sets the default search budget.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from typing import Any, Sequence

from . import cube, generators
from .embedding import CombEmbedding, InvalidEmbeddingError, stats
from .fileformat import (
    EmbeddingFile,
    ParseError,
    certificate_from_json,
    certificate_to_json,
    dart_ref,
    read_file,
    serialize,
)
from .ham import ExtensionCertificate, decide_ham_extendable, min_added_edges, verify_certificate
from .klee import (
    CertificateError,
    check_theorem1_certificate,
    is_klee_type,
    is_local_klee,
    scan_local_klee,
)
from .topo import build_extension, min_crossings_search, verify_result

EXIT_INPUT = 3
DEFAULT_BUDGET = 10**7


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # keep exit code 2 free for UNKNOWN
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _budget(value: int | None) -> int:
    if value is not None:
        return value
    env = os.environ.get("HAMEXT_BUDGET")
    if env is None:
        return DEFAULT_BUDGET
    try:
        return int(env)
    except ValueError:
        raise InputError(f"HAMEXT_BUDGET must be an integer, got {env!r}") from None


def _load(path: str) -> EmbeddingFile:
    try:
        return read_file(path)
    except ParseError as exc:
        raise InputError(f"{path}:{exc.line}:{exc.col}: {exc.message}") from None
    except OSError as exc:
        raise InputError(str(exc)) from None


def _emit(args: argparse.Namespace, data: dict[str, Any], text: str) -> None:
    if args.json:
        print(json.dumps(data, indent=2, sort_keys=True))
    else:
        print(text.rstrip("\n"))


def _walk_text(emb: CombEmbedding) -> list[str]:
    return [
        f"  face {f.face_id} (length {len(f)}): " + " ".join(dart_ref(d) for d in f.darts) for f in emb.faces
    ]


def cmd_stats(args: argparse.Namespace) -> int:
    emb = _load(args.file).embedding
    s = stats(emb)
    faces = [{"id": f.face_id, "darts": [dart_ref(d) for d in f.darts], "vertices": list(f.vertices)} for f in emb.faces]
    data = {"p": s.p, "q": s.q, "r": s.r, "euler_characteristic": s.euler_characteristic, "genus": s.genus, "faces": faces}
    text = "\n".join(
        [f"p {s.p}", f"q {s.q}", f"r {s.r}", f"euler_characteristic {s.euler_characteristic}", f"genus {s.genus}", "faces:"]
        + _walk_text(emb)
    )
    _emit(args, data, text)
    return 0


def cmd_klee(args: argparse.Namespace) -> int:
    doc = _load(args.file)
    emb = doc.embedding
    kt = is_klee_type(emb)
    data: dict[str, Any] = {"klee_type": kt.holds, "r": kt.r, "p": kt.p}
    lines = [f"klee_type {str(kt.holds).lower()} (r={kt.r}, p={kt.p})"]
    if args.cycle:
        if args.cycle not in doc.cycles:
            raise InputError(f"no cycle named {args.cycle!r} in {args.file}")
        try:
            lk = is_local_klee(emb, doc.cycles[args.cycle])
        except ValueError as exc:
            raise InputError(str(exc)) from None
        dec = lk.decomposition
        data["local"] = {
            "cycle": list(dec.cycle_edges),
            "separates": dec.separates,
            "holds": lk.holds,
            "inside": list(lk.inside),
            "r_side": dec.r_side,
            "p_side": dec.p_side,
        }
        lines.append(f"cycle {args.cycle} separates {str(dec.separates).lower()}")
        for side in sorted(dec.r_side):
            lines.append(f"  side {side}: r_C={dec.r_side[side]} p_C={dec.p_side[side]}")
        lines.append(f"local_klee {str(lk.holds).lower()}")
    if args.scan:
        res = scan_local_klee(emb, args.max_len, _budget(args.budget))
        data["scan"] = {
            "exhaustive": res.exhaustive,
            "examined": res.examined,
            "witnesses": [
                {"cycle": list(w.cycle_edges), "vertices": list(w.cycle_vertices), "side": w.side, "r_C": w.r_side, "p_C": w.p_side}
                for w in res.witnesses
            ],
        }
        lines.append(f"scan max-len {args.max_len}: {len(res.witnesses)} witnesses, exhaustive {str(res.exhaustive).lower()}")
        for w in res.witnesses:
            lines.append(f"  cycle edges {list(w.cycle_edges)} vertices {list(w.cycle_vertices)} side {w.side}: r_C={w.r_side} p_C={w.p_side}")
    _emit(args, data, "\n".join(lines))
    return 0


def _cert_data(cert: ExtensionCertificate) -> dict[str, Any]:
    return {
        "chords": [[c.face_id, c.i, c.j] for c in cert.chords],
        "cycle": list(cert.cycle),
        "links": [list(link) for link in cert.links],
    }


def cmd_ham_ext(args: argparse.Namespace) -> int:
    emb = _load(args.file).embedding
    budget = _budget(args.budget)
    try:
        out = min_added_edges(emb, budget) if args.min_edges else decide_ham_extendable(emb, budget)
    except KeyboardInterrupt:
        print(json.dumps({"status": "UNKNOWN", "note": "interrupted"}) if args.json else "UNKNOWN (interrupted)")
        return 2
    data: dict[str, Any] = {"status": out.status, "nodes": out.nodes}
    lines = [out.status, f"nodes {out.nodes}"]
    if out.note:
        data["note"] = out.note
        lines.append(out.note)
    if out.min_chords is not None:
        data["min_chords"] = out.min_chords
        lines.append(f"min_chords {out.min_chords}")
    if out.certificate is not None:
        cert = out.certificate
        data["certificate"] = _cert_data(cert)
        data["verified"] = verify_certificate(emb, cert).ok
        lines.append("chords " + " ".join(f"{c.face_id}:{c.i}-{c.j}" for c in cert.chords))
        lines.append("cycle " + " ".join(map(str, cert.cycle)))
        lines.append("links " + " ".join(f"{k}:{x}" for k, x in cert.links))
        if args.certificate_out:
            with open(args.certificate_out, "w", encoding="utf-8") as fh:
                fh.write(certificate_to_json(cert))
    _emit(args, data, "\n".join(lines))
    return {"YES": 0, "NO": 1}.get(out.status, 2)


def _parse_order(text: str | None) -> list[int] | None:
    if text is None:
        return None
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise InputError(f"bad --order {text!r}") from None


def cmd_topo_ext(args: argparse.Namespace) -> int:
    emb = _load(args.file).embedding
    order = _parse_order(args.order)
    extra: dict[str, Any] = {}
    if args.minimize:
        if order is not None:
            raise InputError("--order and --minimize are exclusive")
        try:
            found = min_crossings_search(emb, args.minimize, budget=_budget(args.budget), seed=args.seed or 0)
        except ValueError as exc:
            raise InputError(str(exc)) from None
        res = found.best
        extra = {"proven_minimal": found.proven_minimal, "searched_all": found.searched_all, "note": found.note}
    else:
        try:
            res = build_extension(emb, order, args.seed)
        except ValueError as exc:
            raise InputError(str(exc)) from None
    ok = verify_result(emb, res).ok
    doc = EmbeddingFile(
        res.extended,
        cycles={"H": res.hamiltonian_cycle.edges},
        vmaps={"base": dict(res.extension_map.vertex_map)},
        emaps={"base": dict(res.extension_map.edge_map)},
        meta={"crossings": str(res.crossing_count), "order": ",".join(map(str, res.plan.order))},
    )
    text = serialize(doc)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    data = {
        "crossing_count": res.crossing_count,
        "order": list(res.plan.order),
        "cycle_vertices": list(res.hamiltonian_cycle.vertices),
        "cycle_edges": list(res.hamiltonian_cycle.edges),
        "verified": ok,
        "file": text,
        **extra,
    }
    summary = f"# crossings {res.crossing_count} verified {str(ok).lower()}"
    for k, v in extra.items():
        summary += f"\n# {k} {v}"
    _emit(args, data, text if args.output is None else summary)
    if args.output is None and not args.json:
        print(summary)
    return 0 if ok else 1


def cmd_cert_check(args: argparse.Namespace) -> int:
    emb = _load(args.file).embedding
    try:
        with open(args.certificate, encoding="utf-8") as fh:
            cert = certificate_from_json(fh.read(), emb)
    except (OSError, ValueError) as exc:
        raise InputError(str(exc)) from None
    if isinstance(cert, ExtensionCertificate):
        rep = verify_certificate(emb, cert)
        data = {"type": "extension", "valid": rep.ok, "problems": rep.problems}
        text = "valid" if rep.ok else "invalid\n" + "\n".join("  " + p for p in rep.problems)
        valid = rep.ok
    else:
        try:
            chk = check_theorem1_certificate(cert)
        except (CertificateError, InvalidEmbeddingError, ValueError) as exc:
            raise InputError(f"malformed certificate: {exc}") from None
        data = {"type": "klee", "valid": chk.valid, "s": chk.s, "reasons": chk.reasons, "conclusion": chk.conclusion}
        text = f"valid (s={chk.s}): {chk.conclusion}" if chk.valid else "invalid\n" + "\n".join("  " + r for r in chk.reasons)
        valid = chk.valid
    _emit(args, data, text)
    return 0 if valid else 1


GENERATORS = ("cycle", "grid-torus", "theta", "k4", "icosahedron", "stellated-host", "fully-stellated-host", "petersen-torus", "random")


def _generate(args: argparse.Namespace) -> EmbeddingFile:
    name = args.name
    if name == "cycle":
        return EmbeddingFile(generators.cycle_on_sphere(args.n), cycles={"C": tuple(range(args.n))})
    if name == "grid-torus":
        m = args.m if args.m is not None else args.n
        emb = generators.grid_on_torus(m, args.n)
        return EmbeddingFile(emb, cycles={"row": tuple(2 * j for j in range(args.n))})
    if name == "theta":
        return EmbeddingFile(generators.theta_graph())
    if name == "k4":
        return EmbeddingFile(generators.k4_planar())
    if name == "icosahedron":
        return EmbeddingFile(generators.icosahedron())
    if name == "stellated-host":
        return EmbeddingFile(generators.triangle_host_with_stellations(args.levels), cycles={"C": generators.HOST_CYCLE})
    if name == "fully-stellated-host":
        return EmbeddingFile(generators.fully_stellated_host(args.levels), cycles={"C": generators.HOST_CYCLE})
    if name == "petersen-torus":
        return EmbeddingFile(generators.petersen_torus())
    if name == "random":
        rng = random.Random(args.seed or 0)
        return EmbeddingFile(generators.random_embedding(rng, args.max_p, args.max_q, multi=args.multi))
    raise InputError(f"unknown generator {name!r}")


def cmd_gen(args: argparse.Namespace) -> int:
    try:
        doc = _generate(args)
    except (ValueError, RuntimeError) as exc:
        raise InputError(str(exc)) from None
    if args.certificate_out:
        if args.name != "fully-stellated-host":
            raise InputError("--certificate-out is only available for fully-stellated-host")
        with open(args.certificate_out, "w", encoding="utf-8") as fh:
            fh.write(certificate_to_json(generators.fully_stellated_certificate(args.levels)))
    text = serialize(doc)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_cube(args: argparse.Namespace) -> int:
    try:
        rep = cube.cube_report(args.d)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    data = {"d": rep.d, "p": rep.p, "q": rep.q, "genus": rep.genus, "r": rep.r, "klee": rep.klee}
    _emit(args, data, "\n".join(f"{k} {str(v).lower() if isinstance(v, bool) else v}" for k, v in data.items()))
    return 0


def cmd_cube_count(args: argparse.Namespace) -> int:
    try:
        n = cube.klee_count(args.r, args.smin, args.smax, args.patterns)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    data = {"count": str(n), "approx": cube.sci3(n) if n > 0 else "0"}
    _emit(args, data, f"{n}\napprox {data['approx']}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hamext", description="Hamiltonian extensions of graph embeddings.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name: str, func, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(func=func)
        p.add_argument("--json", action="store_true", help="structured JSON output")
        return p

    p = add("stats", cmd_stats, "counts, genus and face walks")
    p.add_argument("file")

    p = add("klee", cmd_klee, "Klee type and local Klee cycles")
    p.add_argument("file")
    p.add_argument("--cycle", help="name of a cycle stored in the file")
    p.add_argument("--scan", action="store_true", help="search short cycles for local Klee witnesses")
    p.add_argument("--max-len", type=int, default=3)
    p.add_argument("--budget", type=int)

    p = add("ham-ext", cmd_ham_ext, "decide Hamiltonian extendability")
    p.add_argument("file")
    p.add_argument("--min-edges", action="store_true", help="fewest added edges")
    p.add_argument("--budget", type=int, help="backtrack node budget (default $HAMEXT_BUDGET or 10^7)")
    p.add_argument("--certificate-out", help="write the certificate as JSON")

    p = add("topo-ext", cmd_topo_ext, "build a Hamiltonian topological extension")
    p.add_argument("file")
    p.add_argument("--order", help="comma-separated vertex order")
    p.add_argument("--minimize", choices=["exact", "heuristic"])
    p.add_argument("--seed", type=int)
    p.add_argument("--budget", type=int)
    p.add_argument("-o", "--output")

    p = add("cert-check", cmd_cert_check, "verify a certificate against an embedding")
    p.add_argument("file")
    p.add_argument("--certificate", required=True)

    p = add("gen", cmd_gen, "write a fixture embedding")
    p.add_argument("name", choices=GENERATORS)
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--m", type=int)
    p.add_argument("--levels", type=int, default=2)
    p.add_argument("--seed", type=int)
    p.add_argument("--max-p", type=int, default=8)
    p.add_argument("--max-q", type=int, default=14)
    p.add_argument("--multi", action="store_true")
    p.add_argument("--certificate-out", help="fully-stellated-host only: write its Klee certificate as JSON")
    p.add_argument("-o", "--output")

    p = add("cube", cmd_cube, "hypercube genus numerics")
    p.add_argument("d", type=int)

    p = add("cube-count", cmd_cube_count, "exact sum of C(r,k) * patterns^k")
    for name in ("r", "smin", "smax", "patterns"):
        p.add_argument(name, type=int)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"hamext: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
