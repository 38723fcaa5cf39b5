"""
Graph Core - Simple Graphs, I/O, Blocks and Ears
================================================

The substrate every other module works on.

Features:
- Immutable simple graphs on vertices 0..n-1 with canonical (sorted) edge order
- graph6 and edge-list text formats
- BFS bipartition with an odd-cycle witness on failure
- Distances, connected components, blocks and cut vertices
- Open ears and ear decompositions of nonseparable graphs
"""

from collections import deque
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

import networkx as nx

from escrit_errors import GraphFormatError, InvalidGraphError, PreconditionError

Edge = Tuple[int, int]

GRAPH6_HEADER = '>>graph6<<'
GRAPH6_MIN_CHAR = 63
GRAPH6_MAX_CHAR = 126


def norm_edge(u: int, v: int) -> Edge:
    """Unordered pair as (smaller, larger)"""
    return (u, v) if u < v else (v, u)


def edge_index(u: int, v: int) -> int:
    """Position of the pair {u, v} in graph6 upper-triangle order"""
    i, j = norm_edge(u, v)
    return j * (j - 1) // 2 + i


def pair_count(n: int) -> int:
    return n * (n - 1) // 2


@lru_cache(maxsize=None)
def pairs_in_index_order(n: int) -> Tuple[Edge, ...]:
    """All pairs (i, j), i < j, ordered by edge_index: (0,1), (0,2), (1,2), (0,3), ..."""
    return tuple((i, j) for j in range(1, n) for i in range(j))


# =============================================================================
# Graph
# =============================================================================

@dataclass(frozen=True)
class Graph:
    """Simple undirected graph; build with from_edge_list unless edges are canonical"""
    n: int
    edges: Tuple[Edge, ...]

    def __post_init__(self):
        if self.n < 0:
            raise InvalidGraphError(f"vertex count must be non-negative, got {self.n}")
        previous = None
        for u, v in self.edges:
            if not 0 <= u < v < self.n:
                raise InvalidGraphError(f"edge ({u}, {v}) is not a canonical pair on {self.n} vertices")
            if previous is not None and (u, v) <= previous:
                raise InvalidGraphError("edges must be sorted and distinct")
            previous = (u, v)

    @classmethod
    def from_edge_list(cls, n: int, pairs: Iterable[Sequence[int]]) -> 'Graph':
        if n < 0:
            raise InvalidGraphError(f"vertex count must be non-negative, got {n}")
        edges = set()
        for pair in pairs:
            u, v = pair
            if not (0 <= u < n and 0 <= v < n):
                raise InvalidGraphError(f"vertex out of range in edge ({u}, {v}) for n={n}")
            if u == v:
                raise InvalidGraphError(f"self-loop at vertex {u}")
            edges.add(norm_edge(u, v))
        return cls(n, tuple(sorted(edges)))

    @classmethod
    def from_mask(cls, n: int, mask: int) -> 'Graph':
        """Graph whose edge set is the bits of mask in edge_index order"""
        pairs = pairs_in_index_order(n)
        if mask >> len(pairs):
            raise InvalidGraphError(f"edge mask has bits beyond the {len(pairs)} pairs of n={n}")
        return cls(n, tuple(sorted(pairs[t] for t in range(len(pairs)) if mask >> t & 1)))

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def edge_set(self) -> FrozenSet[Edge]:
        return frozenset(self.edges)

    @cached_property
    def adjacency(self) -> Tuple[Tuple[int, ...], ...]:
        neighbors: List[List[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges:
            neighbors[u].append(v)
            neighbors[v].append(u)
        return tuple(tuple(sorted(nbrs)) for nbrs in neighbors)

    @cached_property
    def degrees(self) -> Tuple[int, ...]:
        return tuple(len(nbrs) for nbrs in self.adjacency)

    @cached_property
    def mask(self) -> int:
        bits = 0
        for u, v in self.edges:
            bits |= 1 << edge_index(u, v)
        return bits

    def has_edge(self, u: int, v: int) -> bool:
        return norm_edge(u, v) in self.edge_set

    def without_edges(self, removed: Iterable[Edge]) -> 'Graph':
        drop = {norm_edge(u, v) for u, v in removed}
        return Graph(self.n, tuple(e for e in self.edges if e not in drop))

    def with_edges(self, added: Iterable[Edge]) -> 'Graph':
        return Graph.from_edge_list(self.n, list(self.edges) + list(added))

    def relabel(self, perm: Sequence[int]) -> 'Graph':
        """Image of the graph under vertex v -> perm[v]"""
        return Graph.from_edge_list(self.n, [(perm[u], perm[v]) for u, v in self.edges])

    def components(self) -> List[Tuple[int, ...]]:
        """Connected components as sorted vertex tuples, smallest vertex first"""
        seen = [False] * self.n
        result = []
        for root in range(self.n):
            if seen[root]:
                continue
            seen[root] = True
            queue = deque([root])
            members = [root]
            while queue:
                u = queue.popleft()
                for w in self.adjacency[u]:
                    if not seen[w]:
                        seen[w] = True
                        members.append(w)
                        queue.append(w)
            result.append(tuple(sorted(members)))
        return result

    def is_connected(self) -> bool:
        return len(self.components()) <= 1

    def isolated_vertices(self) -> Tuple[int, ...]:
        return tuple(v for v, d in enumerate(self.degrees) if d == 0)

    def without_isolated_vertices(self) -> 'Graph':
        """Graph on the non-isolated vertices, relabeled 0..k-1 in order"""
        kept = {v: i for i, v in enumerate(v for v, d in enumerate(self.degrees) if d)}
        return Graph.from_edge_list(len(kept), [(kept[u], kept[v]) for u, v in self.edges])


def from_edge_list(n: int, pairs: Iterable[Sequence[int]]) -> Graph:
    return Graph.from_edge_list(n, pairs)


# =============================================================================
# Cycles, bipartitions, subgraphs and ears
# =============================================================================

@dataclass(frozen=True)
class Cycle:
    """Simple cycle stored in canonical rotation/reflection"""
    vertices: Tuple[int, ...]

    @classmethod
    def from_sequence(cls, sequence: Sequence[int]) -> 'Cycle':
        seq = list(sequence)
        if len(seq) < 3:
            raise InvalidGraphError(f"a cycle needs at least 3 vertices, got {len(seq)}")
        if len(set(seq)) != len(seq):
            raise InvalidGraphError(f"cycle vertices repeat: {seq}")
        start = seq.index(min(seq))
        seq = seq[start:] + seq[:start]
        if seq[-1] < seq[1]:
            seq = [seq[0]] + seq[:0:-1]
        return cls(tuple(seq))

    @property
    def length(self) -> int:
        return len(self.vertices)

    @property
    def parity(self) -> int:
        return self.length % 2

    @property
    def is_odd(self) -> bool:
        return self.parity == 1

    @cached_property
    def edges(self) -> Tuple[Edge, ...]:
        vs = self.vertices
        return tuple(sorted(norm_edge(vs[i], vs[(i + 1) % len(vs)]) for i in range(len(vs))))

    @cached_property
    def edge_set(self) -> FrozenSet[Edge]:
        return frozenset(self.edges)

    @cached_property
    def vertex_set(self) -> FrozenSet[int]:
        return frozenset(self.vertices)

    def lies_in(self, g: Graph) -> bool:
        return self.edge_set <= g.edge_set


@dataclass(frozen=True)
class Bipartition:
    """Proper 2-coloring: side[v] in {0, 1}"""
    side: Tuple[int, ...]

    def is_proper(self, g: Graph) -> bool:
        return len(self.side) == g.n and all(self.side[u] != self.side[v] for u, v in g.edges)


@dataclass(frozen=True)
class Subgraph:
    """Vertex and edge subsets of a host graph (ear hosts and seeds)"""
    vertices: FrozenSet[int]
    edges: FrozenSet[Edge]

    @classmethod
    def from_edges(cls, edges: Iterable[Edge]) -> 'Subgraph':
        normalized = frozenset(norm_edge(u, v) for u, v in edges)
        return cls(frozenset(v for e in normalized for v in e), normalized)

    @classmethod
    def from_cycle(cls, cycle: Cycle) -> 'Subgraph':
        return cls(cycle.vertex_set, cycle.edge_set)

    def extended(self, ear: 'Ear') -> 'Subgraph':
        return Subgraph(self.vertices | set(ear.path), self.edges | set(ear.edges))


@dataclass(frozen=True)
class Ear:
    """Open ear p0..pm: distinct endpoints in the host, interior outside it"""
    path: Tuple[int, ...]

    def __post_init__(self):
        if len(self.path) < 2:
            raise InvalidGraphError("an ear has at least one edge")
        if len(set(self.path)) != len(self.path):
            raise InvalidGraphError(f"ear {self.path} is not a simple open path")

    @property
    def endpoints(self) -> Edge:
        return (self.path[0], self.path[-1])

    @property
    def internal(self) -> Tuple[int, ...]:
        return self.path[1:-1]

    @cached_property
    def edges(self) -> Tuple[Edge, ...]:
        return tuple(norm_edge(a, b) for a, b in zip(self.path, self.path[1:]))


@dataclass(frozen=True)
class BlockDecomposition:
    blocks: Tuple[Tuple[Edge, ...], ...]
    cut_vertices: FrozenSet[int]


# =============================================================================
# graph6 and edge-list formats
# =============================================================================

def to_networkx(g: Graph) -> nx.Graph:
    """networkx copy of g with nodes inserted as 0..n-1"""
    G = nx.Graph()
    G.add_nodes_from(range(g.n))
    G.add_edges_from(g.edges)
    return G


def to_graph6(g: Graph) -> str:
    return nx.to_graph6_bytes(to_networkx(g), header=False).decode('ascii').strip()


def parse_graph6(text: str) -> Graph:
    line = text.strip()
    if line.startswith(GRAPH6_HEADER):
        line = line[len(GRAPH6_HEADER):]
    if not line:
        raise GraphFormatError("empty graph6 string")
    for ch in line:
        if not GRAPH6_MIN_CHAR <= ord(ch) <= GRAPH6_MAX_CHAR:
            raise GraphFormatError(f"character {ch!r} out of range 63..126")
    try:
        G = nx.from_graph6_bytes(line.encode('ascii'))
    except IndexError as e:
        raise GraphFormatError("malformed graph6: truncated length prefix") from e
    except (nx.NetworkXError, ValueError) as e:
        raise GraphFormatError(f"malformed graph6: {e}") from e

    # networkx ignores the padding of the last adjacency byte
    pad = (-pair_count(G.number_of_nodes())) % 6
    if pad and (ord(line[-1]) - GRAPH6_MIN_CHAR) & ((1 << pad) - 1):
        raise GraphFormatError("nonzero padding bits after the adjacency data")
    return Graph.from_edge_list(G.number_of_nodes(), G.edges())


def read_graph6_lines(lines: Iterable[str]) -> Iterator[Graph]:
    """Graphs of a graph6 stream, one per line; blank and header-only lines skipped"""
    for line in lines:
        stripped = line.strip()
        if not stripped or stripped == GRAPH6_HEADER:
            continue
        yield parse_graph6(stripped)


def parse_edge_list(text: str) -> Graph:
    """Edge-list text: 'n m' on the first line, then m lines 'u v' (0-based)"""
    rows = [line.split() for line in text.splitlines()
            if line.strip() and not line.lstrip().startswith('#')]
    if not rows:
        raise GraphFormatError("empty edge list")
    try:
        header = [int(tok) for tok in rows[0]]
        pairs = [tuple(int(tok) for tok in row) for row in rows[1:]]
    except ValueError as e:
        raise GraphFormatError(f"edge list must contain integers only: {e}") from e
    if len(header) != 2:
        raise GraphFormatError(f"edge list header must be 'n m', got {' '.join(rows[0])!r}")
    n, m = header
    if any(len(pair) != 2 for pair in pairs):
        raise GraphFormatError("every edge line must hold exactly two vertices")
    if len(pairs) != m:
        raise GraphFormatError(f"edge list header announces {m} edges, found {len(pairs)}")
    return Graph.from_edge_list(n, pairs)


def format_edge_list(g: Graph) -> str:
    lines = [f"{g.n} {g.m}"] + [f"{u} {v}" for u, v in g.edges]
    return '\n'.join(lines) + '\n'


# =============================================================================
# Bipartiteness, distances, blocks
# =============================================================================

def bipartition_or_odd_cycle(g: Graph) -> Union[Bipartition, Cycle]:
    """Proper 2-coloring, or an odd cycle proving none exists"""
    side = [-1] * g.n
    parent = [-1] * g.n
    adj = g.adjacency
    for root in range(g.n):
        if side[root] != -1:
            continue
        side[root] = 0
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for w in adj[u]:
                if side[w] == -1:
                    side[w] = 1 - side[u]
                    parent[w] = u
                    queue.append(w)
                elif side[w] == side[u]:
                    return _odd_cycle_from_conflict(u, w, parent)
    return Bipartition(tuple(side))


def _odd_cycle_from_conflict(u: int, w: int, parent: List[int]) -> Cycle:
    # u and w sit on the same BFS layer; their tree paths meet at the lowest common ancestor
    left, right = [u], [w]
    while left[-1] != right[-1]:
        left.append(parent[left[-1]])
        right.append(parent[right[-1]])
    return Cycle.from_sequence(left + right[-2::-1])


def is_bipartite(g: Graph) -> bool:
    return isinstance(bipartition_or_odd_cycle(g), Bipartition)


def shortest_distance(g: Graph, u: int, v: int) -> Optional[int]:
    """Number of edges on a shortest u-v path, None when unreachable"""
    if not (0 <= u < g.n and 0 <= v < g.n):
        raise InvalidGraphError(f"vertices ({u}, {v}) out of range for n={g.n}")
    if u == v:
        return 0
    dist = {u: 0}
    queue = deque([u])
    while queue:
        a = queue.popleft()
        for b in g.adjacency[a]:
            if b not in dist:
                dist[b] = dist[a] + 1
                if b == v:
                    return dist[b]
                queue.append(b)
    return None


def blocks_and_cut_vertices(g: Graph) -> BlockDecomposition:
    """Blocks (as sorted edge tuples) and cut vertices from one lowpoint DFS"""
    adj = g.adjacency
    disc = [-1] * g.n
    low = [0] * g.n
    timer = 0
    blocks: List[Tuple[Edge, ...]] = []
    cuts = set()
    edge_stack: List[Edge] = []

    for root in range(g.n):
        if disc[root] != -1:
            continue
        disc[root] = low[root] = timer
        timer += 1
        root_children = 0
        stack = [(root, -1, iter(adj[root]))]
        while stack:
            u, parent, neighbors = stack[-1]
            descended = False
            for w in neighbors:
                if disc[w] == -1:
                    edge_stack.append(norm_edge(u, w))
                    disc[w] = low[w] = timer
                    timer += 1
                    stack.append((w, u, iter(adj[w])))
                    descended = True
                    break
                if w != parent and disc[w] < disc[u]:
                    edge_stack.append(norm_edge(u, w))
                    low[u] = min(low[u], disc[w])
            if descended:
                continue
            stack.pop()
            if parent == -1:
                continue
            low[parent] = min(low[parent], low[u])
            if low[u] >= disc[parent]:
                tree_edge = norm_edge(parent, u)
                block = []
                while True:
                    e = edge_stack.pop()
                    block.append(e)
                    if e == tree_edge:
                        break
                blocks.append(tuple(sorted(block)))
                if parent == root:
                    root_children += 1
                else:
                    cuts.add(parent)
        if root_children >= 2:
            cuts.add(root)

    blocks.sort()
    return BlockDecomposition(tuple(blocks), frozenset(cuts))


def is_nonseparable(g: Graph) -> bool:
    return g.n >= 1 and g.is_connected() and not blocks_and_cut_vertices(g).cut_vertices


# =============================================================================
# Ears
# =============================================================================

def _subgraph_is_nonseparable(n: int, sub: Subgraph) -> bool:
    if not sub.edges:
        return False
    touched = {v for e in sub.edges for v in e}
    if touched != set(sub.vertices):
        return False
    decomposition = blocks_and_cut_vertices(Graph(n, tuple(sorted(sub.edges))))
    return len(decomposition.blocks) == 1


def _check_host(g: Graph, host: Subgraph) -> None:
    if not host.edges:
        raise PreconditionError("host subgraph must have at least one edge")
    if not host.edges <= g.edge_set:
        raise PreconditionError("host edges are not all edges of the graph")
    if any(not 0 <= v < g.n for v in host.vertices):
        raise PreconditionError("host vertices out of range")
    if any(v not in host.vertices for e in host.edges for v in e):
        raise PreconditionError("host vertex set misses endpoints of host edges")
    if host.edges == g.edge_set and len(host.vertices) == g.n:
        raise PreconditionError("host must be a proper subgraph")


def _path_back_to_host(g: Graph, host: Subgraph, x: int, y: int) -> Tuple[int, ...]:
    """BFS path from y (outside host) to a host vertex other than x, avoiding x"""
    parent = {y: None}
    queue = deque([y])
    while queue:
        a = queue.popleft()
        for b in g.adjacency[a]:
            if b == x or b in parent:
                continue
            if b in host.vertices:
                path = [b]
                step = a
                while step is not None:
                    path.append(step)
                    step = parent[step]
                return tuple(reversed(path))
            parent[b] = a
            queue.append(b)
    raise PreconditionError(f"no path from {y} back to the host avoiding {x}; graph is separable")


def _next_ear(g: Graph, host: Subgraph) -> Ear:
    for u, v in g.edges:
        if (u, v) not in host.edges and u in host.vertices and v in host.vertices:
            return Ear((u, v))
    for x in sorted(host.vertices):
        for y in g.adjacency[x]:
            if y not in host.vertices:
                return Ear((x,) + _path_back_to_host(g, host, x, y))
    raise PreconditionError("host has no ear: graph is disconnected")


def find_open_ear(g: Graph, host: Subgraph) -> Ear:
    """An open ear of a nontrivial proper subgraph of a nonseparable graph"""
    _check_host(g, host)
    if not is_nonseparable(g):
        raise PreconditionError("graph is separable; open ears are only guaranteed in nonseparable graphs")
    return _next_ear(g, host)


def ear_decomposition(g: Graph, seed: Subgraph) -> List[Ear]:
    """Ears Q1..Ql, each open for seed plus the previous ears, together covering g"""
    if not seed.edges <= g.edge_set:
        raise PreconditionError("seed edges are not all edges of the graph")
    if not _subgraph_is_nonseparable(g.n, seed):
        raise PreconditionError("seed must be a nonseparable subgraph with at least one edge")
    if not is_nonseparable(g):
        raise PreconditionError("graph is separable; it has no ear decomposition")
    ears: List[Ear] = []
    current = seed
    while current.edges != g.edge_set:
        ear = _next_ear(g, current)
        ears.append(ear)
        current = current.extended(ear)
    return ears
