#  SPDX-FileCopyrightText: 2026 endslab contributors
#  SPDX-License-Identifier: GPL-3.0-or-later

"""
Finite balls of rooted graphs, Stallings automata and coset graphs
"""

import collections
import dataclasses
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Dict, Hashable, Iterable, List, Optional, Sequence, Tuple

from networkx.utils import UnionFind

from endslab.common import ArgumentError, BallOverflowError, GroupValidationError, generator_name, worker_count
from endslab.words import (
    GeneratorSymbol,
    NormalForm,
    RootedGraph,
    Word,
    check_word,
    format_word,
    free_reduce,
    symbols_for,
)

logger = logging.getLogger(__name__)

DEFAULT_VERTEX_BUDGET = 5_000_000
# frontiers below this size are expanded inline
PARALLEL_THRESHOLD = 4096

Neighbors = List[Tuple[GeneratorSymbol, NormalForm]]


@dataclasses.dataclass
class BallGraph:
    """
    The induced graph on {v : |v| <= R}; vertices are grouped by radius and
    sorted by payload inside each sphere
    """

    R: int
    vertices: List[NormalForm]
    index: Dict[NormalForm, int]
    radius: List[int]
    adjacency: List[Tuple[Tuple[GeneratorSymbol, int], ...]]
    parent: List[Optional[Tuple[int, GeneratorSymbol]]]
    sphere_starts: List[int]

    def __len__(self) -> int:
        return len(self.vertices)

    def sphere(self, r: int) -> range:
        if r < 0 or r > self.R:
            return range(0)
        end = self.sphere_starts[r + 1] if r + 1 < len(self.sphere_starts) else len(self.vertices)
        return range(self.sphere_starts[r], end)

    def sphere_sizes(self) -> List[int]:
        return [len(self.sphere(r)) for r in range(self.R + 1)]

    def within(self, r: int) -> range:
        """
        Indices of the vertices with |v| <= r
        """
        return range(0, self.sphere(min(r, self.R)).stop)

    def norm(self, v: NormalForm) -> Optional[int]:
        i = self.index.get(v)
        return None if i is None else self.radius[i]

    def neighbor_indices(self, i: int) -> List[int]:
        return sorted({j for _, j in self.adjacency[i]})

    def geodesic_word(self, i: int) -> Word:
        word: List[GeneratorSymbol] = []
        while self.parent[i] is not None:
            i, s = self.parent[i]  # type: ignore[misc]
            word.append(s)
        return tuple(reversed(word))


def _expand(graph: RootedGraph, payloads: Sequence[NormalForm], executor: Optional[ThreadPoolExecutor], workers: int):
    if executor is None or len(payloads) < PARALLEL_THRESHOLD:
        return [graph.neighbors(v) for v in payloads]
    size = -(-len(payloads) // workers)
    chunks = [payloads[i : i + size] for i in range(0, len(payloads), size)]
    results: List[Neighbors] = []
    for part in executor.map(lambda chunk: [graph.neighbors(v) for v in chunk], chunks):
        results.extend(part)
    return results


def build_ball(
    graph: RootedGraph, R: int, budget: int = DEFAULT_VERTEX_BUDGET, workers: Optional[int] = None
) -> BallGraph:
    """
    Breadth-first ball of radius R around the root. Each sphere is expanded
    as one frontier; results are merged in frontier order so the numbering
    does not depend on the worker count.
    """
    if R < 0:
        raise ArgumentError(f"radius must be nonnegative, got {R}")
    workers = worker_count() if workers is None else max(1, workers)
    root = graph.root
    vertices: List[NormalForm] = [root]
    index: Dict[NormalForm, int] = {root: 0}
    radius = [0]
    parent: List[Optional[Tuple[int, GeneratorSymbol]]] = [None]
    adjacency: List[Tuple[Tuple[GeneratorSymbol, int], ...]] = [()]
    sphere_starts = [0]
    frontier = [0]

    executor = ThreadPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        for level in range(R + 1):
            expansions = _expand(graph, [vertices[i] for i in frontier], executor, workers)
            found: Dict[NormalForm, Tuple[int, GeneratorSymbol]] = {}
            if level < R:
                for i, nbrs in zip(frontier, expansions):
                    for s, w in nbrs:
                        if w not in index and w not in found:
                            found[w] = (i, s)
                if len(vertices) + len(found) > budget:
                    raise BallOverflowError(level + 1, len(vertices) + len(found), budget)
                start = len(vertices)
                sphere_starts.append(start)
                for w in sorted(found):
                    index[w] = len(vertices)
                    vertices.append(w)
                    radius.append(level + 1)
                    parent.append(found[w])
                    adjacency.append(())
            for i, nbrs in zip(frontier, expansions):
                adjacency[i] = tuple((s, index[w]) for s, w in nbrs if w in index)
            logger.debug(f"{graph.name}: sphere {level} has {len(frontier)} vertices")
            if level < R:
                frontier = list(range(sphere_starts[-1], len(vertices)))
                if not frontier:
                    # finite graph: the remaining spheres are empty
                    sphere_starts.extend([len(vertices)] * (R - level - 1))
                    break
    finally:
        if executor is not None:
            executor.shutdown()

    logger.info(f"Built ball of radius {R} for {graph.name}: {len(vertices)} vertices")
    return BallGraph(
        R=R,
        vertices=vertices,
        index=index,
        radius=radius,
        adjacency=adjacency,
        parent=parent,
        sphere_starts=sphere_starts,
    )


@dataclasses.dataclass(frozen=True)
class StallingsAutomaton:
    """
    Folded, inverse-closed automaton; state 0 is the base
    """

    states: int
    generator_count: int
    transitions: Dict[Tuple[int, GeneratorSymbol], int]
    base: int = 0

    def target(self, q: int, s: GeneratorSymbol) -> Optional[int]:
        return self.transitions.get((q, s))

    def edges(self) -> List[Tuple[int, GeneratorSymbol, int]]:
        return sorted((q, s, t) for (q, s), t in self.transitions.items() if s.sign > 0)


def fold(edges: Iterable[Tuple[Hashable, GeneratorSymbol, Hashable]], base: Hashable, generator_count: int):
    """
    Identify equally labelled edges leaving the same vertex until the graph
    is deterministic, then number the states breadth-first from the base
    """
    arcs = set()
    for u, s, v in edges:
        s = GeneratorSymbol(*s)
        arcs.add((u, s, v))
        arcs.add((v, s.inverse(), u))
    uf = UnionFind([base] + [u for u, _, _ in arcs])
    changed = True
    while changed:
        changed = False
        seen: Dict[Tuple[Hashable, GeneratorSymbol], Hashable] = {}
        for u, s, v in sorted(arcs, key=repr):
            key = (uf[u], s)
            if key in seen and uf[seen[key]] != uf[v]:
                uf.union(seen[key], v)
                changed = True
            else:
                seen.setdefault(key, v)

    moves: Dict[Hashable, Dict[GeneratorSymbol, Hashable]] = collections.defaultdict(dict)
    for u, s, v in arcs:
        moves[uf[u]][s] = uf[v]
    numbering = {uf[base]: 0}
    queue = collections.deque([uf[base]])
    while queue:
        q = queue.popleft()
        for s in symbols_for(generator_count):
            t = moves[q].get(s)
            if t is not None and t not in numbering:
                numbering[t] = len(numbering)
                queue.append(t)
    transitions = {
        (numbering[q], s): numbering[t] for q, out in moves.items() if q in numbering for s, t in out.items()
    }
    return StallingsAutomaton(states=len(numbering), generator_count=generator_count, transitions=transitions)


def subgroup_automaton(generators: Iterable[Sequence[GeneratorSymbol]], generator_count: int) -> StallingsAutomaton:
    """
    Folded automaton of the subgroup of free(generator_count) generated by
    the given words
    """
    edges = []
    for k, word in enumerate(generators):
        check_word(word, generator_count)
        word = free_reduce(word)
        if not word:
            continue
        path: List[Hashable] = ["base"] + [(k, i) for i in range(1, len(word))] + ["base"]
        edges.extend((path[i], word[i], path[i + 1]) for i in range(len(word)))
    return fold(edges, "base", generator_count)


def automaton_edges(aut: StallingsAutomaton) -> List[Tuple[int, GeneratorSymbol, int]]:
    return aut.edges()


def membership(aut: StallingsAutomaton, w: Sequence[GeneratorSymbol]) -> bool:
    q: Optional[int] = aut.base
    for s in free_reduce(w):
        q = aut.target(q, GeneratorSymbol(*s))  # type: ignore[arg-type]
        if q is None:
            return False
    return q == aut.base


class FreeCosetOracle(RootedGraph):
    """
    Schreier graph of a finitely generated subgroup K of a free group.
    Vertices are (state, residual): the state reached by reading as much of
    the reduced word as the automaton allows, and the unread reduced suffix,
    whose first letter has no transition at the state.
    """

    def __init__(self, aut: StallingsAutomaton, name: str = "rel(free)"):
        self.aut = aut
        self.generator_count = aut.generator_count
        self.name = name

    @property
    def root(self) -> Tuple[int, Word]:
        return (self.aut.base, ())

    def step(self, v: Tuple[int, Word], s: GeneratorSymbol) -> Tuple[int, Word]:
        q, residual = v
        if residual:
            if residual[-1] == s.inverse():
                return (q, residual[:-1])
            return (q, residual + (s,))
        t = self.aut.target(q, s)
        if t is not None:
            return (t, ())
        return (q, (s,))

    def coset_id(self, w: Sequence[GeneratorSymbol]) -> Tuple[int, Word]:
        return self.read(w)

    def format_vertex(self, v: Tuple[int, Word]) -> str:
        return f"K{v[0]}.{format_word(v[1])}"


def free_coset_oracle(aut: StallingsAutomaton) -> FreeCosetOracle:
    return FreeCosetOracle(aut)


def hermite_rows(basis: Iterable[Sequence[int]], n: int) -> List[Tuple[int, List[int]]]:
    """
    Row-style Hermite normal form: (pivot column, row) pairs with positive
    pivots and the entries above each pivot reduced into [0, pivot)
    """
    rows = [list(b) for b in basis if any(b)]
    pivot_columns: List[int] = []
    top = 0
    for col in range(n):
        while True:
            live = [i for i in range(top, len(rows)) if rows[i][col] != 0]
            if len(live) <= 1:
                break
            best = min(live, key=lambda i: abs(rows[i][col]))
            rows[top], rows[best] = rows[best], rows[top]
            for i in range(top + 1, len(rows)):
                if rows[i][col]:
                    q = rows[i][col] // rows[top][col]
                    rows[i] = [a - q * b for a, b in zip(rows[i], rows[top])]
        live = [i for i in range(top, len(rows)) if rows[i][col] != 0]
        if not live:
            continue
        rows[top], rows[live[0]] = rows[live[0]], rows[top]
        if rows[top][col] < 0:
            rows[top] = [-a for a in rows[top]]
        pivot = rows[top][col]
        for i in range(top):
            q = rows[i][col] // pivot
            rows[i] = [a - q * b for a, b in zip(rows[i], rows[top])]
        pivot_columns.append(col)
        top += 1
    return [(col, rows[i]) for i, col in enumerate(pivot_columns)]


class LatticeCosetOracle(RootedGraph):
    """
    Schreier graph of a subgroup K of Z^n; vertices are the reduced residues
    of vectors modulo K
    """

    def __init__(self, n: int, basis: Iterable[Sequence[int]], name: Optional[str] = None):
        basis = [tuple(b) for b in basis]
        for b in basis:
            if len(b) != n or any(not isinstance(x, int) for x in b):
                raise GroupValidationError(f"subgroup generator {b} is not an integer vector of length {n}")
        self.n = n
        self.basis = basis
        self.pivots = hermite_rows(basis, n)
        self.generator_count = n
        self.name = name or f"rel(Z^{n})"

    def residue(self, v: Sequence[int]) -> Tuple[int, ...]:
        v = list(v)
        for col, row in self.pivots:
            q = v[col] // row[col]
            if q:
                v = [a - q * b for a, b in zip(v, row)]
        return tuple(v)

    @property
    def root(self) -> Tuple[int, ...]:
        return (0,) * self.n

    def step(self, v: Tuple[int, ...], s: GeneratorSymbol) -> Tuple[int, ...]:
        w = list(v)
        w[s.index] += s.sign
        return self.residue(w)

    def coset_id(self, w: Sequence[GeneratorSymbol]) -> Tuple[int, ...]:
        return self.read(w)

    def index(self) -> Optional[int]:
        """
        Index of K in Z^n, None when infinite
        """
        if len(self.pivots) < self.n:
            return None
        result = 1
        for col, row in self.pivots:
            result *= row[col]
        return result


def lattice_coset_oracle(n: int, basis: Iterable[Sequence[int]]) -> LatticeCosetOracle:
    return LatticeCosetOracle(n, basis)


def _dot_escape(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"')


def ball_to_dot(ball: BallGraph, graph: RootedGraph) -> str:
    """
    DOT digraph: one arc v -> vs per vertex and positive generator s
    """
    lines = [f'digraph "{_dot_escape(graph.name)}" {{']
    for i, v in enumerate(ball.vertices):
        lines.append(f'  {i} [label="{_dot_escape(graph.format_vertex(v))}", radius={ball.radius[i]}];')
    for i, adj in enumerate(ball.adjacency):
        for s, j in adj:
            if s.sign > 0:
                lines.append(f'  {i} -> {j} [label="{generator_name(s.index)}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def ball_adjacency(ball: BallGraph, graph: RootedGraph) -> Dict[str, Any]:
    return {
        "graph": graph.name,
        "R": ball.R,
        "generators": [generator_name(i) for i in range(graph.generator_count)],
        "vertices": [
            {"id": i, "label": graph.format_vertex(v), "payload": str(v), "radius": ball.radius[i]}
            for i, v in enumerate(ball.vertices)
        ],
        "edges": [
            [i, generator_name(s.index), j] for i, adj in enumerate(ball.adjacency) for s, j in adj if s.sign > 0
        ],
    }
