"""Command-line interface: ``triflip <command> ...``.

Exit status is 0 on success, 1 on domain errors (invalid flip, failed
validation, failed verification) and 2 on usage errors.
"""

from __future__ import annotations

import argparse
import itertools
import json
import sys
import time
from dataclasses import dataclass, field

from . import bounds, constructions, covers, flipgraph, kernel

COMMANDS = (
    "gen", "validate", "flip", "apply", "canon", "enumerate", "distance", "diameter",
    "maxcommon", "bound", "pathcover", "matching", "verify",
)


class DomainError(Exception):
    pass


@dataclass
class CommandResult:
    """Text block plus machine record; every number in the text is in ``values``."""

    command: str
    n: int | None = None
    values: dict = field(default_factory=dict)
    witnesses: dict = field(default_factory=dict)
    timings: dict = field(default_factory=dict)
    modes: dict = field(default_factory=dict)
    text: str = ""
    payload: str | bytes | None = None  # file content for --out / stdout

    def record(self) -> dict:
        return {
            "command": self.command,
            "n": self.n,
            "values": self.values,
            "witnesses": self.witnesses,
            "timings": self.timings,
            "modes": self.modes,
        }

    def render(self) -> str:
        lines = [f"{k}: {_fmt(v)}" for k, v in self.values.items()]
        if self.text:
            lines.append(self.text.rstrip("\n"))
        return "\n".join(lines) + "\n"


def _fmt(v):
    if isinstance(v, bool):
        return "yes" if v else "no"
    if isinstance(v, list):
        return " ".join(map(str, v))
    return str(v)


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path) as f:
        return f.read()


def _load_tri(path: str) -> kernel.Triangulation:
    return kernel.parse(_read(path))


def _mirror(args) -> bool:
    return args.mirror == "on"


def _catalog(args, n: int | None) -> flipgraph.FlipGraphCatalog:
    if args.catalog:
        return flipgraph.load(args.catalog, _mirror(args))
    if n is None:
        raise DomainError("need --catalog or --n")
    return flipgraph.enumerate_flip_graph(n, _mirror(args), workers=args.workers)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_gen(args) -> CommandResult:
    n = args.n
    if n is None:
        raise DomainError("gen needs --n")
    comments = []
    if args.family == "g1":
        if n < 6:
            raise DomainError("G1 is only defined for n >= 6 (its host needs n//3 + 2 >= 4 vertices)")
        g1 = constructions.build_g1(n)
        t, comments = g1.base, g1.comments()
    elif args.family == "g2":
        if n < 4:
            raise DomainError("G2 needs n >= 4")
        t = constructions.build_g2(n)
    else:
        if n < 4:
            raise DomainError("host needs n >= 4")
        t = constructions.host_max_deg6(n)
    res = CommandResult("gen", n, modes={"family": args.family})
    res.payload = kernel.format_rotation(t, comments)
    return res


def cmd_validate(args) -> CommandResult:
    t = _load_tri(args.file)
    return CommandResult(
        "validate", t.n,
        values={"vertices": t.n, "edges": len(t.edge_set), "faces": len(kernel.faces(t)),
                "max_degree": kernel.max_degree(t), "valid": True},
    )


def cmd_flip(args) -> CommandResult:
    t = _load_tri(args.file)
    c, d = kernel.flip_partner(t, args.u, args.v)
    t2 = kernel.flip(t, args.u, args.v)
    res = CommandResult("flip", t.n, values={"removed": [args.u, args.v], "inserted": sorted([c, d])})
    res.payload = kernel.format_rotation(t2)
    return res


def _pair(text: str) -> tuple[int, int]:
    try:
        u, v = text.split(",")
        return int(u), int(v)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected U,V, got {text!r}") from None


def cmd_apply(args) -> CommandResult:
    t = _load_tri(args.file)
    t2 = kernel.apply_sequence(t, args.flips)
    res = CommandResult("apply", t.n, values={"flips": len(args.flips)})
    res.payload = kernel.format_rotation(t2)
    return res


def cmd_canon(args) -> CommandResult:
    t = _load_tri(args.file)
    code = kernel.canonical_code(t, _mirror(args))
    return CommandResult(
        "canon", t.n, values={"code": list(code.code)}, modes={"mirror": args.mirror}
    )


def cmd_enumerate(args) -> CommandResult:
    if args.n is None:
        raise DomainError("enumerate needs --n")
    t0 = time.perf_counter()
    try:
        cat = flipgraph.enumerate_flip_graph(
            args.n, _mirror(args), workers=args.workers, max_nodes=args.max_nodes
        )
    except flipgraph.ResourceLimitError as exc:
        cat = exc.partial
    res = CommandResult(
        "enumerate", args.n,
        values={"nodes": cat.num_nodes, "edges": cat.num_edges, "complete": cat.complete},
        modes={"mirror": args.mirror},
    )
    res.timings["enumerate_s"] = time.perf_counter() - t0
    res.payload = flipgraph.dumps(cat)
    return res


def cmd_distance(args) -> CommandResult:
    t1, t2 = _load_tri(args.file1), _load_tri(args.file2)
    cat = _catalog(args, t1.n)
    d = flipgraph.distance(cat, t1, t2)
    return CommandResult("distance", t1.n, values={"distance": d}, modes={"mirror": args.mirror})


def cmd_diameter(args) -> CommandResult:
    cat = _catalog(args, args.n)
    d, (x, y) = flipgraph.diameter(cat)
    return CommandResult(
        "diameter", cat.n,
        values={"nodes": cat.num_nodes, "diameter": d},
        witnesses={"from": list(x.code), "to": list(y.code)},
        modes={"mirror": "on" if cat.mirror_mode else "off"},
    )


def cmd_maxcommon(args) -> CommandResult:
    g1, g2 = _load_tri(args.file1), _load_tri(args.file2)
    if args.exact:
        mc = bounds.exhaustive_max_common_edges(g1, g2)
    else:
        mc = bounds.max_common_edges(g1, g2, budget_ms=args.budget_ms, workers=args.workers)
    lb = bounds.lemma1_bound(g1, g2, mc)
    res = CommandResult(
        "maxcommon", g1.n,
        values={"lower": mc.lower, "upper": mc.upper, "exact": mc.exact, "flip_lower_bound": lb.value},
        witnesses={"gamma": list(mc.witness.forward)},
        modes={"exhaustive": bool(args.exact)},
    )
    res.text = mc.witness.format()
    return res


def cmd_bound(args) -> CommandResult:
    if args.n is None:
        raise DomainError("bound needs --n")
    if args.n < 3:
        raise DomainError("bound needs n >= 3")
    tb = bounds.theorem_bound(args.n)
    return CommandResult(
        "bound", args.n,
        values={
            "common_edge_bound": constructions.lemma2_bound(args.n),
            "flip_lower_bound": tb.value,
            "relaxed_bound": str(tb.relaxed),
            "holds": tb.holds,
        },
    )


def cmd_pathcover(args) -> CommandResult:
    t = _load_tri(args.file)
    pc = covers.min_path_cover(t) if args.exact else covers.path_cover(t)
    g2 = constructions.build_g2(t.n)
    pm = covers.path_cover_mapping(t, pc, g2)
    res = CommandResult(
        "pathcover", t.n,
        values={"paths": pc.p, "common_edges_with_g2": pm.gamma.c, "guarantee": pm.guarantee},
        witnesses={"paths": [list(p) for p in pc.paths], "gamma": list(pm.gamma.forward)},
        modes={"exact": bool(args.exact)},
    )
    return res


def cmd_matching(args) -> CommandResult:
    t = _load_tri(args.file)
    m = covers.max_matching(t)
    return CommandResult(
        "matching", t.n,
        values={"size": len(m), "cited_bound": (t.n + 4) // 3},
        witnesses={"edges": [list(e) for e in m.edges]},
    )


def cmd_verify(args) -> CommandResult:
    """Small-n soundness chain plus the G1/G2 structural checks."""
    top = args.n or 8
    rows = []
    failures = 0

    def row(name, ok, detail=""):
        nonlocal failures
        failures += not ok
        rows.append((name, ok, detail))

    for n in range(max(4, 4), top + 1):
        cat = flipgraph.enumerate_flip_graph(n, True, workers=args.workers)
        tris = [cat.triangulation(i) for i in range(cat.num_nodes)]
        dist = [flipgraph.distances_from(cat, i) for i in range(cat.num_nodes)]
        bad = inexact = 0
        for i, j in itertools.combinations_with_replacement(range(len(tris)), 2):
            mc = bounds.max_common_edges(tris[i], tris[j], budget_ms=args.budget_ms)
            inexact += not mc.exact
            if bounds.lemma1_bound(tris[i], tris[j], mc).value > dist[i][j]:
                bad += 1
        pairs = len(tris) * (len(tris) + 1) // 2
        row(f"lemma1<=distance n={n}", bad == 0, f"{pairs} pairs, {bad} violations, {inexact} inexact")
        if n >= 6:
            g1 = constructions.build_g1(n)
            try:
                rep = constructions.check_lemma2_structure(g1)
                row(f"g1 structure n={n}", rep.ok, f"max degree {rep.max_degree}")
            except constructions.Lemma2Violation as exc:
                row(f"g1 structure n={n}", False, str(exc))
            g2 = constructions.build_g2(n)
            d = flipgraph.distance(cat, g1.base, g2)
            mc = bounds.max_common_edges(g1.base, g2, budget_ms=args.budget_ms)
            lb = bounds.lemma1_bound(g1.base, g2, mc).value
            row(f"g1 vs g2 n={n}", lb <= d and mc.upper <= constructions.lemma2_bound(n),
                f"max common {mc.upper}, bound {lb}, distance {d}")
    text = "\n".join(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}" for name, ok, detail in rows)
    res = CommandResult(
        "verify", top,
        values={"checks": len(rows), "failures": failures},
        witnesses={"rows": [[name, ok, detail] for name, ok, detail in rows]},
    )
    res.text = text
    if failures:
        res.values["failed"] = True
    return res


HANDLERS = {name: globals()[f"cmd_{name}"] for name in COMMANDS}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int)
    common.add_argument("--mirror", choices=("on", "off"), default="on")
    common.add_argument("--workers", type=int, default=1)
    common.add_argument("--budget-ms", type=int, default=None)
    common.add_argument("--json", action="store_true", help="print the machine record")
    common.add_argument("--timings", action="store_true", help="include wall-clock timings in the record")
    common.add_argument("--out", help="write the produced file here instead of stdout")
    common.add_argument("--catalog", help="catalog file from 'enumerate'")

    p = argparse.ArgumentParser(prog="triflip", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    s = sub.add_parser("gen", parents=[common])
    s.add_argument("--family", choices=("g1", "g2", "host"), default="g2")
    for name in ("validate", "canon", "pathcover", "matching"):
        s = sub.add_parser(name, parents=[common])
        s.add_argument("file")
        if name == "pathcover":
            s.add_argument("--exact", action="store_true")
    s = sub.add_parser("flip", parents=[common])
    s.add_argument("file")
    s.add_argument("u", type=int)
    s.add_argument("v", type=int)
    s = sub.add_parser("apply", parents=[common])
    s.add_argument("file")
    s.add_argument("flips", nargs="*", type=_pair, metavar="U,V")
    s = sub.add_parser("enumerate", parents=[common])
    s.add_argument("--max-nodes", type=int)
    for name in ("distance", "maxcommon"):
        s = sub.add_parser(name, parents=[common])
        s.add_argument("file1")
        s.add_argument("file2")
        if name == "maxcommon":
            s.add_argument("--exact", action="store_true", help="exhaustive n! search")
    sub.add_parser("diameter", parents=[common])
    sub.add_parser("bound", parents=[common])
    sub.add_parser("verify", parents=[common])
    return p


def run(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    t0 = time.perf_counter()
    try:
        res = HANDLERS[args.command](args)
    except (DomainError, kernel.TriangulationError, flipgraph.CatalogError,
            flipgraph.DisconnectedCatalogError, KeyError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if args.timings:
        res.timings["total_s"] = time.perf_counter() - t0
    else:
        res.timings = {}
    if res.payload is not None:
        if args.out:
            mode = "wb" if isinstance(res.payload, bytes) else "w"
            with open(args.out, mode) as f:
                f.write(res.payload)
        elif isinstance(res.payload, bytes):
            stdout.flush()
            getattr(stdout, "buffer", stdout).write(res.payload)
        elif not args.json:
            stdout.write(res.payload)
    if args.json:
        stdout.write(json.dumps(res.record(), sort_keys=True) + "\n")
    elif res.payload is None or args.out:
        if res.values or res.text:
            stdout.write(res.render())
    return 1 if res.values.get("failed") else 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
