"""
Criticality - Edge-Stability Critical and (k, l)-Critical Graphs

A graph is edge-stability critical when deleting any edge strictly lowers its
edge-stability number, each G - e being measured against its own chromatic
number. It is (k, l)-critical when in addition chi = k and es = l.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

from chromatic_stability import (
    chromatic_number, co_removal_set, edge_stability_number, is_k_colorable,
)
from cycle_analysis import (
    OddCycleCensus, all_odd_cycles_share_edge, count_odd_cycles, pairwise_intersection_property,
)
from escrit_config import get_logger
from escrit_errors import PreconditionError
from families import recognize_family
from graph_core import Cycle, Edge, Graph, bipartition_or_odd_cycle, is_nonseparable, norm_edge, to_graph6

logger = get_logger('criticality')


@dataclass(frozen=True)
class EdgeReport:
    edge: Edge
    es: int
    chi: int
    partner: Optional[Edge]

    def to_dict(self) -> Dict[str, Any]:
        return {
            'edge': list(self.edge),
            'es': self.es,
            'chi': self.chi,
            'partner': list(self.partner) if self.partner else None,
        }


@dataclass
class CriticalityReport:
    graph6: str
    n: int
    m: int
    chi: int
    es: int
    critical: bool
    k_l: Optional[Tuple[int, int]]
    census: OddCycleCensus
    nonseparable: bool
    pairwise_intersection: Optional[bool]
    family: Optional[str]
    edges: List[EdgeReport] = field(default_factory=list)
    internal_errors: List[str] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'graph6': self.graph6,
            'n': self.n,
            'm': self.m,
            'chi': self.chi,
            'es': self.es,
            'critical': self.critical,
            'k_l': list(self.k_l) if self.k_l else None,
            'census': self.census.to_dict(),
            'nonseparable': self.nonseparable,
            'pairwise_intersection': self.pairwise_intersection,
            'family': self.family,
            'edges': [r.to_dict() for r in self.edges],
            'internal_errors': list(self.internal_errors),
        }


def _require_edges(g: Graph) -> None:
    if g.m == 0:
        raise PreconditionError("graph has no edges; criticality is undefined")


def _es_after_removal(g: Graph, e: Edge) -> Tuple[int, int]:
    """(es, chi) of g - e; an edgeless remainder counts as es 0"""
    h = g.without_edges([e])
    if h.m == 0:
        return 0, chromatic_number(h)
    report = edge_stability_number(h)
    return report.es, report.chi


def is_edge_stability_critical(g: Graph) -> bool:
    _require_edges(g)
    es = edge_stability_number(g).es
    return all(_es_after_removal(g, e)[0] < es for e in g.edges)


def k_l_critical_by_definition(g: Graph, k: int, l: int) -> bool:
    _require_edges(g)
    report = edge_stability_number(g)
    if report.chi != k or report.es != l:
        return False
    return all(_es_after_removal(g, e)[0] < l for e in g.edges)


def _has_lowering_partner(h: Graph, k: int) -> bool:
    """Some edge f of h (chi(h) = k) with chi(h - f) = k - 1"""
    if k == 3:
        # h is not bipartite; a bipartizing edge must lie on this odd cycle
        witness = bipartition_or_odd_cycle(h)
        if not isinstance(witness, Cycle):
            return False
        return any(not isinstance(bipartition_or_odd_cycle(h.without_edges([f])), Cycle)
                   for f in witness.edges)
    return any(is_k_colorable(h.without_edges([f]), k - 1).colorable for f in h.edges)


def is_k_l_critical(g: Graph, k: int, l: int) -> bool:
    _require_edges(g)
    if chromatic_number(g) != k:
        return False
    if l != 2:
        return k_l_critical_by_definition(g, k, l)
    for e in g.edges:
        h = g.without_edges([e])
        if is_k_colorable(h, k - 1).colorable:
            return False
        if not _has_lowering_partner(h, k):
            return False
    return True


def critical_partner(g: Graph, e: Edge) -> Optional[Edge]:
    """Lexicographically least f with chi(g - {e, f}) = chi(g) - 1"""
    partners = co_removal_set(g, e).partners
    return partners[0] if partners else None


def criticality_report(g: Graph, cap: Optional[int] = None) -> CriticalityReport:
    _require_edges(g)
    stability = edge_stability_number(g)
    census = count_odd_cycles(g, cap)

    edge_reports = []
    for e in g.edges:
        es_e, chi_e = _es_after_removal(g, e)
        edge_reports.append(EdgeReport(e, es_e, chi_e, critical_partner(g, e)))
    critical = all(r.es < stability.es for r in edge_reports)

    spec = recognize_family(g)
    report = CriticalityReport(
        graph6=to_graph6(g),
        n=g.n,
        m=g.m,
        chi=stability.chi,
        es=stability.es,
        critical=critical,
        k_l=(stability.chi, stability.es) if critical else None,
        census=census,
        nonseparable=is_nonseparable(g),
        pairwise_intersection=None,
        family=spec.to_compact() if spec else None,
        edges=edge_reports,
    )

    # the census cap is for display; three or more odd cycles is decided separately
    many_odd_cycles = census.count >= 3 or (census.saturated and count_odd_cycles(g, 3).saturated)
    if many_odd_cycles:
        report.pairwise_intersection = pairwise_intersection_property(g)
        if critical and (stability.chi, stability.es) == (3, 2):
            _check_many_odd_cycles(g, report)
    return report


def _check_many_odd_cycles(g: Graph, report: CriticalityReport) -> None:
    """Structure every (3,2)-critical graph with three or more odd cycles must have"""
    if not report.pairwise_intersection:
        report.internal_errors.append("two odd cycles share fewer than two vertices")
    if not is_nonseparable(g.without_isolated_vertices()):
        report.internal_errors.append("graph has a cut vertex")
    for e in g.edges:
        if not all_odd_cycles_share_edge(g.without_edges([e])):
            report.internal_errors.append(f"odd cycles of G - {list(norm_edge(*e))} share no edge")
    for message in report.internal_errors:
        logger.error(f"{report.graph6}: {message}")
