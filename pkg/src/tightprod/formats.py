"""Text formats for graphs, presentations, colorings, families, and maps.

tpg1   graph: `tpg 1`, `<n> <m>`, then m lines `<u> <v>` (loops as `v v`,
       repeated lines mean multiplicity).
tpp1   permutation graph: `tpp 1`, `<n> <d> <p>`, d lines of n images,
       one pairing line when p = 1.
tpm1   covering map: `tpm 1`, `<n_src> <num_darts_src>`, one line of
       vertex images, one line of dart images.
Edge colorings are `<edge-id> <color>` lines; semi-colorings are
`<edge-id> solid <i>` or `<edge-id> bright <i> <j>` lines; families carry
one `<v1> <v2> : <images>` line per dart of the first factor, in dart
order.  Parsers fail with line-numbered diagnostics.
"""

from __future__ import annotations

from typing import Callable

from .factorization import EdgeColoring, TwoFactorization
from .graph import MultiGraph, Permutation, PermutationGraph
from .products import CoveringMap, NeighborlyFamily
from .semicoloring import SemiColor, SemiColoring


class FormatError(ValueError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


def _ints(lineno: int, line: str, expected: int | None = None) -> list[int]:
    parts = line.split()
    try:
        values = [int(p) for p in parts]
    except ValueError:
        raise FormatError(lineno, f"expected integers, got {line!r}")
    if expected is not None and len(values) != expected:
        raise FormatError(lineno, f"expected {expected} integers, got {len(values)}")
    return values


class _Lines:
    def __init__(self, text: str):
        self.lines = text.splitlines()
        self.pos = 0

    def next(self, what: str) -> tuple[int, str]:
        while self.pos < len(self.lines):
            self.pos += 1
            line = self.lines[self.pos - 1].strip()
            if line:
                return self.pos, line
        raise FormatError(self.pos + 1, f"unexpected end of file, expected {what}")

    def rest_empty(self) -> bool:
        return all(not l.strip() for l in self.lines[self.pos :])


def write_graph(g: MultiGraph) -> str:
    lines = ["tpg 1", f"{g.n} {g.num_edges}"]
    lines += [f"{u} {v}" for u, v in g.edges]
    return "\n".join(lines) + "\n"


def parse_graph(text: str) -> MultiGraph:
    src = _Lines(text)
    lineno, header = src.next("tpg header")
    if header != "tpg 1":
        raise FormatError(lineno, f"expected 'tpg 1', got {header!r}")
    lineno, counts = src.next("vertex and edge counts")
    n, m = _ints(lineno, counts, 2)
    edges = []
    for _ in range(m):
        lineno, line = src.next("an edge")
        u, v = _ints(lineno, line, 2)
        if not (0 <= u < n and 0 <= v < n):
            raise FormatError(lineno, f"edge ({u},{v}) out of range for n={n}")
        edges.append((u, v))
    if not src.rest_empty():
        raise FormatError(src.pos + 1, "trailing content after the edge list")
    return MultiGraph(n, edges)


def write_permutation_graph(pg: PermutationGraph) -> str:
    p = 1 if pg.pairing is not None else 0
    lines = ["tpp 1", f"{pg.n} {pg.d} {p}"]
    for gen in pg.generators:
        lines.append(" ".join(str(x) for x in gen.images))
    if pg.pairing is not None:
        lines.append(" ".join(str(x) for x in pg.pairing.images))
    return "\n".join(lines) + "\n"


def parse_permutation_graph(text: str) -> PermutationGraph:
    src = _Lines(text)
    lineno, header = src.next("tpp header")
    if header != "tpp 1":
        raise FormatError(lineno, f"expected 'tpp 1', got {header!r}")
    lineno, counts = src.next("n, d, pairing flag")
    n, d, p = _ints(lineno, counts, 3)
    if p not in (0, 1):
        raise FormatError(lineno, "pairing flag must be 0 or 1")
    gens = []
    for _ in range(d):
        lineno, line = src.next("a generator")
        try:
            gens.append(Permutation(_ints(lineno, line, n)))
        except ValueError as exc:
            raise FormatError(lineno, str(exc))
    pairing = None
    if p == 1:
        lineno, line = src.next("the pairing")
        try:
            pairing = Permutation(_ints(lineno, line, n))
        except ValueError as exc:
            raise FormatError(lineno, str(exc))
    if not src.rest_empty():
        raise FormatError(src.pos + 1, "trailing content after the permutations")
    try:
        return PermutationGraph(n, tuple(gens), pairing)
    except ValueError as exc:
        raise FormatError(lineno, str(exc))


def write_two_factorization(tf: TwoFactorization) -> str:
    return write_permutation_graph(tf.permutation_graph())


def write_covering_map(cm: CoveringMap) -> str:
    lines = ["tpm 1", f"{cm.source.n} {cm.source.num_darts}"]
    lines.append(" ".join(str(x) for x in cm.vertex_map))
    lines.append(" ".join(str(x) for x in cm.dart_map))
    return "\n".join(lines) + "\n"


def parse_covering_map(text: str, source: MultiGraph, target: MultiGraph) -> CoveringMap:
    src = _Lines(text)
    lineno, header = src.next("tpm header")
    if header != "tpm 1":
        raise FormatError(lineno, f"expected 'tpm 1', got {header!r}")
    lineno, counts = src.next("source sizes")
    n, darts = _ints(lineno, counts, 2)
    if n != source.n or darts != source.num_darts:
        raise FormatError(lineno, "map sizes disagree with the source graph")
    lineno, line = src.next("vertex images")
    vmap = _ints(lineno, line, n)
    lineno, line = src.next("dart images")
    dmap = _ints(lineno, line, darts)
    if not src.rest_empty():
        raise FormatError(src.pos + 1, "trailing content after the dart images")
    for lineno_guard, (vals, bound, what) in enumerate(
        [(vmap, target.n, "vertex image"), (dmap, target.num_darts, "dart image")]
    ):
        for x in vals:
            if not 0 <= x < bound:
                raise FormatError(lineno, f"{what} {x} out of range")
    return CoveringMap(source, target, tuple(vmap), tuple(dmap))


def write_edge_coloring(ec: EdgeColoring) -> str:
    lines = [f"{e} {ec.color_of[e]}" for e in sorted(ec.color_of)]
    return "\n".join(lines) + "\n" if lines else ""


def parse_edge_coloring(text: str, g: MultiGraph) -> EdgeColoring:
    color_of: dict[int, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        e, c = _ints(lineno, line, 2)
        if not 0 <= e < g.num_edges:
            raise FormatError(lineno, f"edge id {e} out of range")
        if c < 0:
            raise FormatError(lineno, "colors are non-negative")
        if e in color_of:
            raise FormatError(lineno, f"edge {e} colored twice")
        color_of[e] = c
    num = max(color_of.values()) + 1 if color_of else 0
    return EdgeColoring(color_of, num)


def write_semi_coloring(sc: SemiColoring) -> str:
    lines = []
    for e in sorted(sc.color_of):
        col = sc.color_of[e]
        if col.is_bright:
            lines.append(f"{e} bright {col.members[0]} {col.members[1]}")
        else:
            lines.append(f"{e} solid {col.members[0]}")
    return "\n".join(lines) + "\n" if lines else ""


def parse_semi_coloring(text: str, g: MultiGraph, delta: int | None = None) -> SemiColoring:
    if delta is None:
        delta = g.max_degree()
    color_of: dict[int, SemiColor] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) < 3:
            raise FormatError(lineno, "expected `<edge> solid <i>` or `<edge> bright <i> <j>`")
        try:
            e = int(parts[0])
        except ValueError:
            raise FormatError(lineno, f"bad edge id {parts[0]!r}")
        if not 0 <= e < g.num_edges:
            raise FormatError(lineno, f"edge id {e} out of range")
        if e in color_of:
            raise FormatError(lineno, f"edge {e} colored twice")
        kind = parts[1]
        try:
            if kind == "solid" and len(parts) == 3:
                color_of[e] = SemiColor.solid(int(parts[2]))
            elif kind == "bright" and len(parts) == 4:
                color_of[e] = SemiColor.bright(int(parts[2]), int(parts[3]))
            else:
                raise FormatError(lineno, f"unknown color form {line!r}")
        except ValueError as exc:
            raise FormatError(lineno, str(exc))
    return SemiColoring(g, delta, color_of)


def write_family(nf: NeighborlyFamily) -> str:
    g1 = nf.g1
    lines = []
    for d in range(g1.num_darts):
        images = " ".join(str(x) for x in nf.sigma[d].images)
        lines.append(f"{g1.dart_vertex[d]} {g1.head(d)} : {images}")
    return "\n".join(lines) + "\n" if lines else ""


def parse_family(text: str, g1: MultiGraph, g2: MultiGraph) -> NeighborlyFamily:
    sigma = []
    lineno_used = 0
    entries = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        entries.append((lineno, line))
    if len(entries) != g1.num_darts:
        raise FormatError(
            lineno_used + 1, f"expected {g1.num_darts} dart lines, got {len(entries)}"
        )
    for d, (lineno, line) in enumerate(entries):
        head, _, perm_part = line.partition(":")
        ends = _ints(lineno, head, 2)
        if ends != [g1.dart_vertex[d], g1.head(d)]:
            raise FormatError(
                lineno, f"dart {d} endpoints {ends} do not match the graph"
            )
        try:
            sigma.append(Permutation(_ints(lineno, perm_part, g2.n)))
        except ValueError as exc:
            raise FormatError(lineno, str(exc))
    return NeighborlyFamily(g1, g2, tuple(sigma))


def load(path: str, parser: Callable, *args):
    with open(path, "r", encoding="utf-8") as fh:
        return parser(fh.read(), *args)


def dump(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
