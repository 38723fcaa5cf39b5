"""
Cycle Analysis - Simple Cycle Enumeration and Odd-Cycle Predicates

Every simple cycle is produced exactly once by rooted backtracking: the root is
the smallest vertex of the cycle, the walk only visits larger vertices, and of
the two traversal directions only the one whose second vertex is smaller than
its last is kept. Cycles therefore come out in canonical form and in a fixed
order.
"""

from dataclasses import dataclass
from itertools import combinations
from typing import Iterator, List, Optional, Tuple

from escrit_config import get_config, get_logger
from escrit_errors import CycleLimitExceeded, PreconditionError
from graph_core import (
    Cycle, Edge, Graph, bipartition_or_odd_cycle, blocks_and_cut_vertices,
    is_bipartite, norm_edge,
)

logger = get_logger('cycles')


@dataclass(frozen=True)
class CycleEnumeration:
    cycles: Tuple[Cycle, ...]
    truncated: bool
    limit: int


@dataclass(frozen=True)
class OddCycleCensus:
    """Odd-cycle count, exact below the cap; saturated means at least cap"""
    count: int
    cap: int
    saturated: bool

    def to_dict(self):
        return {'count': self.count, 'cap': self.cap, 'saturated': self.saturated}


def iter_cycles(g: Graph) -> Iterator[Cycle]:
    adj = g.adjacency
    for root in range(g.n):
        path = [root]
        on_path = {root}
        stack = [iter(w for w in adj[root] if w > root)]
        while stack:
            advanced = False
            for w in stack[-1]:
                if w in on_path:
                    continue
                path.append(w)
                on_path.add(w)
                stack.append(iter([x for x in adj[w] if x > root]))
                advanced = True
                break
            if advanced:
                u = path[-1]
                # closing edge back to the root, kept in one direction only
                if len(path) >= 3 and path[1] < u and root in adj[u]:
                    yield Cycle(tuple(path))
                continue
            stack.pop()
            on_path.discard(path.pop())


def enumerate_cycles(g: Graph, limit: Optional[int] = None) -> CycleEnumeration:
    """All simple cycles up to limit; truncated is set when more exist"""
    limit = get_config().max_cycles if limit is None else limit
    found: List[Cycle] = []
    truncated = False
    for cycle in iter_cycles(g):
        if len(found) == limit:
            truncated = True
            logger.debug(f"Cycle enumeration truncated at {limit} cycles (n={g.n}, m={g.m})")
            break
        found.append(cycle)
    return CycleEnumeration(tuple(found), truncated, limit)


def count_odd_cycles(g: Graph, cap: Optional[int] = None, limit: Optional[int] = None) -> OddCycleCensus:
    cap = get_config().odd_cycle_cap if cap is None else cap
    limit = get_config().max_cycles if limit is None else limit
    if cap < 1:
        raise PreconditionError(f"odd-cycle cap must be positive, got {cap}")
    if is_bipartite(g):
        return OddCycleCensus(0, cap, False)

    seen = 0
    odd = 0
    for cycle in iter_cycles(g):
        if seen == limit:
            raise CycleLimitExceeded(
                f"odd-cycle census undecided after {limit} cycles ({odd} odd so far, cap {cap})")
        seen += 1
        if cycle.is_odd:
            odd += 1
            if odd == cap:
                return OddCycleCensus(odd, cap, True)
    return OddCycleCensus(odd, cap, False)


def odd_cycles(g: Graph, limit: Optional[int] = None) -> List[Cycle]:
    """Every odd cycle of g; raises CycleLimitExceeded instead of returning a partial list"""
    enumeration = enumerate_cycles(g, limit)
    if enumeration.truncated:
        raise CycleLimitExceeded(f"more than {enumeration.limit} cycles; odd-cycle set is incomplete")
    return [c for c in enumeration.cycles if c.is_odd]


def pairwise_intersection_property(g: Graph, limit: Optional[int] = None) -> bool:
    """True when every two distinct odd cycles share at least two vertices"""
    cycles = odd_cycles(g, limit)
    return all(len(a.vertex_set & b.vertex_set) >= 2 for a, b in combinations(cycles, 2))


def all_odd_cycles_share_edge(g: Graph, limit: Optional[int] = None) -> bool:
    cycles = odd_cycles(g, limit)
    if not cycles:
        return True
    common = set(cycles[0].edge_set)
    for cycle in cycles[1:]:
        common &= cycle.edge_set
        if not common:
            return False
    return True


def edge_on_odd_cycle(g: Graph, e: Edge) -> bool:
    """Whether some odd cycle passes through e, decided from the block containing e"""
    e = norm_edge(*e)
    if not g.has_edge(*e):
        raise PreconditionError(f"{e} is not an edge of the graph")
    for block in blocks_and_cut_vertices(g).blocks:
        if e in block:
            if len(block) == 1:
                return False
            return not is_bipartite(Graph(g.n, block))
    raise PreconditionError(f"edge {e} missing from the block decomposition")


def some_odd_cycle(g: Graph) -> Optional[Cycle]:
    witness = bipartition_or_odd_cycle(g)
    return witness if isinstance(witness, Cycle) else None
