"""
Chromatic Stability - Chromatic Number and Edge-Stability Number
================================================================

es(G) is the least number of edges whose removal lowers the chromatic number.

Three ways of computing it, one per chromatic class:
- chi = 2: every edge has to go, es = m
- chi = 3: es is the bipartite edge frustration, found by branching on the
  edges of one odd cycle at a time (any bipartizing set must hit every odd cycle)
- chi >= 4: subset search by increasing size

CutTable gives a fourth, independent route to the frustration for small n by
scoring every vertex bipartition against an edge bitmask.
"""

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import FrozenSet, List, Optional, Sequence, Set, Tuple

from escrit_config import get_config, get_logger
from escrit_errors import BoundExceededError, PreconditionError
from graph_core import Cycle, Edge, Graph, bipartition_or_odd_cycle, edge_index, norm_edge

logger = get_logger('stability')

METHOD_CLOSED_FORM = 'closed-form'
METHOD_ODD_CYCLE_BRANCHING = 'odd-cycle-branching'
METHOD_SUBSET_SEARCH = 'subset-search'


@dataclass(frozen=True)
class ColoringResult:
    colorable: bool
    coloring: Optional[Tuple[int, ...]] = None

    def __bool__(self):
        return self.colorable


@dataclass(frozen=True)
class StabilityReport:
    chi: int
    es: int
    witness: Tuple[Edge, ...]
    method: str

    def to_dict(self):
        return {
            'chi': self.chi,
            'es': self.es,
            'witness': [list(e) for e in self.witness],
            'method': self.method,
        }


@dataclass(frozen=True)
class CoRemovalSet:
    """Edges f whose removal together with anchor lowers the chromatic number"""
    anchor: Edge
    partners: Tuple[Edge, ...]

    def to_dict(self):
        return {'anchor': list(self.anchor), 'partners': [list(f) for f in self.partners]}


# =============================================================================
# Coloring
# =============================================================================

def is_k_colorable(g: Graph, k: int) -> ColoringResult:
    if k < 0:
        raise PreconditionError(f"number of colors must be non-negative, got {k}")
    if g.n == 0:
        return ColoringResult(True, ())
    if k == 0:
        return ColoringResult(False)
    if g.m == 0:
        return ColoringResult(True, (0,) * g.n)
    if k == 1:
        return ColoringResult(False)
    if k == 2:
        witness = bipartition_or_odd_cycle(g)
        if isinstance(witness, Cycle):
            return ColoringResult(False)
        return ColoringResult(True, witness.side)
    if k >= g.n:
        return ColoringResult(True, tuple(range(g.n)))

    order = sorted(range(g.n), key=lambda v: (-g.degrees[v], v))
    coloring = [-1] * g.n
    if _extend_coloring(g, k, order, 0, 0, coloring):
        return ColoringResult(True, tuple(coloring))
    return ColoringResult(False)


def _extend_coloring(g: Graph, k: int, order: Sequence[int], position: int,
                     used: int, coloring: List[int]) -> bool:
    if position == len(order):
        return True
    v = order[position]
    forbidden = {coloring[w] for w in g.adjacency[v]}
    # a fresh color is only tried as the next unused one
    for color in range(min(used + 1, k)):
        if color in forbidden:
            continue
        coloring[v] = color
        if _extend_coloring(g, k, order, position + 1, max(used, color + 1), coloring):
            return True
    coloring[v] = -1
    return False


def chromatic_number(g: Graph, bound: Optional[int] = None) -> int:
    bound = get_config().exact_chi_bound if bound is None else bound
    if g.n == 0:
        return 0
    if g.m == 0:
        return 1
    if is_k_colorable(g, 2):
        return 2
    if g.n > bound:
        raise BoundExceededError(f"exact chromatic number limited to {bound} vertices, graph has {g.n}")
    k = 3
    while not is_k_colorable(g, k):
        k += 1
    return k


# =============================================================================
# Bipartite edge frustration
# =============================================================================

def _bipartizing_sets(g: Graph, removed: FrozenSet[Edge], budget: int,
                      found: Set[FrozenSet[Edge]], stop_at_first: bool) -> None:
    witness = bipartition_or_odd_cycle(g.without_edges(removed))
    if not isinstance(witness, Cycle):
        found.add(removed)
        return
    if budget == 0:
        return
    for e in witness.edges:
        _bipartizing_sets(g, removed | {e}, budget - 1, found, stop_at_first)
        if stop_at_first and found:
            return


def bipartite_edge_frustration(g: Graph, budget: int) -> Optional[int]:
    """Least number of edges whose removal leaves g bipartite, or None if above budget"""
    for size in range(budget + 1):
        found: Set[FrozenSet[Edge]] = set()
        _bipartizing_sets(g, frozenset(), size, found, stop_at_first=True)
        if found:
            return size
    return None


def minimum_frustration_sets(g: Graph, max_es: Optional[int] = None) -> List[Tuple[Edge, ...]]:
    """Every minimum odd-cycle edge transversal, sorted; empty if none within max_es"""
    max_es = get_config().max_es_search if max_es is None else max_es
    for size in range(max_es + 1):
        found: Set[FrozenSet[Edge]] = set()
        _bipartizing_sets(g, frozenset(), size, found, stop_at_first=False)
        if found:
            # at the minimum size every branch that succeeds uses exactly `size` edges
            return sorted(tuple(sorted(s)) for s in found)
    return []


def single_edge_bipartizers(g: Graph) -> Tuple[Edge, ...]:
    """Edges e with g - e bipartite"""
    return tuple(e for e in g.edges if not isinstance(bipartition_or_odd_cycle(g.without_edges([e])), Cycle))


class CutTable:
    """Non-cut edge masks of all 2^(n-1) vertex bipartitions (vertex 0 fixed on side 0)"""

    def __init__(self, n: int):
        self.n = n
        masks = []
        for sides in range(1 << max(n - 1, 0)):
            side = [0] + [(sides >> (v - 1)) & 1 for v in range(1, n)]
            noncut = 0
            for j in range(1, n):
                for i in range(j):
                    if side[i] == side[j]:
                        noncut |= 1 << edge_index(i, j)
            masks.append(noncut)
        self.noncut_masks: Tuple[int, ...] = tuple(masks)

    def frustration(self, mask: int) -> int:
        """Fewest edges of mask inside one side of a bipartition"""
        best = mask.bit_count()
        for noncut in self.noncut_masks:
            inside = (mask & noncut).bit_count()
            if inside < best:
                best = inside
                if best == 0:
                    break
        return best


@lru_cache(maxsize=None)
def cut_table(n: int) -> CutTable:
    return CutTable(n)


def cut_frustration(g: Graph, bound: Optional[int] = None) -> int:
    bound = get_config().exact_chi_bound if bound is None else bound
    if g.n > bound:
        raise BoundExceededError(f"cut enumeration limited to {bound} vertices, graph has {g.n}")
    return cut_table(g.n).frustration(g.mask)


# =============================================================================
# Edge-stability number
# =============================================================================

def _lowers_chromatic_number(g: Graph, removed: Sequence[Edge], chi: int) -> bool:
    return is_k_colorable(g.without_edges(removed), chi - 1).colorable


def exhaustive_edge_stability(g: Graph, max_es: Optional[int] = None) -> StabilityReport:
    """Subset search oracle: the lexicographically first smallest edge set lowering chi"""
    max_es = get_config().max_es_search if max_es is None else max_es
    if g.m == 0:
        raise PreconditionError("graph has no edges; its chromatic number cannot be lowered")
    chi = chromatic_number(g)
    for size in range(1, min(max_es, g.m) + 1):
        for subset in combinations(g.edges, size):
            if _lowers_chromatic_number(g, subset, chi):
                return StabilityReport(chi, size, subset, METHOD_SUBSET_SEARCH)
    raise BoundExceededError(f"no edge set of size <= {max_es} lowers chi={chi}")


def edge_stability_number(g: Graph, max_es: Optional[int] = None) -> StabilityReport:
    max_es = get_config().max_es_search if max_es is None else max_es
    if g.m == 0:
        raise PreconditionError("graph has no edges; its chromatic number cannot be lowered")
    chi = chromatic_number(g)

    if chi == 2:
        return StabilityReport(chi, g.m, g.edges, METHOD_CLOSED_FORM)

    if chi == 3:
        transversals = minimum_frustration_sets(g, max_es)
        if not transversals:
            raise BoundExceededError(f"bipartite edge frustration exceeds {max_es}")
        witness = transversals[0]
        logger.debug(f"es={len(witness)} by odd-cycle branching, {len(transversals)} minimum sets")
        return StabilityReport(chi, len(witness), witness, METHOD_ODD_CYCLE_BRANCHING)

    for size in range(1, min(max_es, g.m) + 1):
        for subset in combinations(g.edges, size):
            if _lowers_chromatic_number(g, subset, chi):
                return StabilityReport(chi, size, subset, METHOD_SUBSET_SEARCH)
    raise BoundExceededError(f"no edge set of size <= {max_es} lowers chi={chi}")


def co_removal_set(g: Graph, e: Edge) -> CoRemovalSet:
    e = norm_edge(*e)
    if not g.has_edge(*e):
        raise PreconditionError(f"{e} is not an edge of the graph")
    chi = chromatic_number(g)
    partners = tuple(
        f for f in g.edges
        if f != e and chromatic_number(g.without_edges([e, f])) == chi - 1
    )
    return CoRemovalSet(e, partners)
