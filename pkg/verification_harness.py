"""
Verification Harness - Exhaustive Small-Graph Scan
==================================================

Checks "a graph without isolated vertices is (3,2)-critical iff it belongs to
A, B, C, D or E" on every labeled graph of a size range, or on a graph6 stream.

Per graph:
    isolated vertex      -> skipped
    frustration 0        -> bipartite, skipped
    frustration == 2     -> chi and (3,2)-criticality by oracle
    admissible degrees   -> structural classification
    oracle != classifier -> violation

Labeled hits are deduplicated by canonical form. Each critical class is then
checked against the five-odd-cycle threshold for family E, family overlaps
(only C and two-cycle E may coincide) and the structure every critical graph
with three or more odd cycles must have.

Chunks of edge masks fan out over a multiprocessing pool; the merged report is
order-normalized so it does not depend on the worker count.
"""

import sys
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import permutations
from multiprocessing import Pool
from typing import Any, Dict, FrozenSet, Iterable, Iterator, List, Optional, Set, Tuple

import pandas as pd
import psutil
from tqdm import tqdm

from chromatic_stability import chromatic_number, cut_table
from criticality import is_k_l_critical
from cycle_analysis import (
    all_odd_cycles_share_edge, count_odd_cycles, pairwise_intersection_property,
)
from escrit_config import DEFAULT_ODD_CYCLE_CAP, EscritConfig, get_config, get_logger, set_config
from escrit_errors import BoundExceededError, EscritError, PreconditionError
from families import (
    FAMILY_ORDER, TAG_C, TAG_E, classify, degree_profile_admissible, matching_families,
    recognize_family,
)
from graph_core import (
    GRAPH6_HEADER, Graph, edge_index, is_nonseparable, pair_count,
    parse_graph6, to_graph6,
)

logger = get_logger('scan')

SOURCE_INTERNAL = 'internal'
SOURCE_GRAPH6 = 'graph6'

COUNT_KEYS = (
    'graphs',
    'isolated_skipped',
    'bipartite_skipped',
    'nonbipartite_examined',
    'frustration_two',
    'chi3_candidates',
    'critical_labeled',
    'classified_labeled',
)

# classes allowed to carry more than one family tag
ALLOWED_OVERLAP = frozenset({TAG_C, TAG_E})
ODD_CYCLE_FAMILIES = frozenset(FAMILY_ORDER) - {TAG_E}


# =============================================================================
# Enumeration and canonical forms
# =============================================================================

def enumerate_labeled_graphs(n: int, bound: Optional[int] = None) -> Iterator[Graph]:
    """All labeled graphs on n vertices in edge-bitmask order"""
    bound = get_config().max_exhaustive_n if bound is None else bound
    if n < 0:
        raise PreconditionError(f"vertex count must be non-negative, got {n}")
    if n > bound:
        raise BoundExceededError(f"exhaustive enumeration limited to n <= {bound}, got {n}")
    for mask in range(1 << pair_count(n)):
        yield Graph.from_mask(n, mask)


def canonical_orbit(g: Graph, bound: Optional[int] = None) -> Tuple[str, FrozenSet[int]]:
    """Least graph6 string over all relabelings, plus the edge masks of every relabeling"""
    bound = get_config().canonical_form_bound if bound is None else bound
    if g.n > bound:
        raise BoundExceededError(f"canonical form limited to n <= {bound}, got {g.n}")
    count = pair_count(g.n)
    best = None
    best_mask = 0
    masks: Set[int] = set()
    for perm in permutations(range(g.n)):
        key = 0
        mask = 0
        for u, v in g.edges:
            t = edge_index(perm[u], perm[v])
            mask |= 1 << t
            key |= 1 << (count - 1 - t)
        masks.add(mask)
        # larger first graph6 bits sort later, so the least key is the least string
        if best is None or key < best:
            best, best_mask = key, mask
    return to_graph6(Graph.from_mask(g.n, best_mask)), frozenset(masks)


def canonical_form(g: Graph, bound: Optional[int] = None) -> str:
    return canonical_orbit(g, bound)[0]


# =============================================================================
# Report types
# =============================================================================

@dataclass(frozen=True)
class ScanSource:
    kind: str
    n_min: int = 1
    n_max: int = 0
    lines: Tuple[str, ...] = ()

    @classmethod
    def internal(cls, n_max: int, n_min: int = 1) -> 'ScanSource':
        return cls(SOURCE_INTERNAL, n_min, n_max)

    @classmethod
    def graph6(cls, lines: Iterable[str]) -> 'ScanSource':
        return cls(SOURCE_GRAPH6, lines=tuple(lines))

    def describe(self) -> str:
        if self.kind == SOURCE_INTERNAL:
            return f"n={self.n_min}..{self.n_max}"
        return f"graph6 stream ({len(self.lines)} lines)"


@dataclass(frozen=True)
class ScanOptions:
    cap: Optional[int] = None
    workers: Optional[int] = None
    chunk_size: Optional[int] = None
    check_structure: bool = True
    progress: bool = False


@dataclass(frozen=True)
class CriticalRecord:
    n: int
    graph6: str
    tag: Optional[str]
    spec: Optional[str]
    labeled: int
    odd_cycles: int
    saturated: bool
    families: Tuple[str, ...]

    def to_dict(self) -> Dict[str, Any]:
        return {
            'n': self.n,
            'graph6': self.graph6,
            'tag': self.tag,
            'spec': self.spec,
            'labeled': self.labeled,
            'odd_cycles': self.odd_cycles,
            'saturated': self.saturated,
            'families': list(self.families),
        }


@dataclass(frozen=True)
class Violation:
    kind: str
    n: int
    graph6: str
    detail: str

    def to_dict(self) -> Dict[str, Any]:
        return {'kind': self.kind, 'n': self.n, 'graph6': self.graph6, 'detail': self.detail}


@dataclass(frozen=True)
class ScanError:
    graph: str
    message: str

    def to_dict(self) -> Dict[str, Any]:
        return {'graph': self.graph, 'message': self.message}


@dataclass
class ScanReport:
    source: str
    cap: int
    counts: Dict[int, Dict[str, int]] = field(default_factory=dict)
    critical: List[CriticalRecord] = field(default_factory=list)
    violations: List[Violation] = field(default_factory=list)
    errors: List[ScanError] = field(default_factory=list)

    @property
    def n_range(self) -> Tuple[Optional[int], Optional[int]]:
        if not self.counts:
            return None, None
        return min(self.counts), max(self.counts)

    @property
    def ok(self) -> bool:
        return not self.violations

    def totals(self) -> Dict[str, int]:
        return {key: sum(c[key] for c in self.counts.values()) for key in COUNT_KEYS}

    def critical_counts(self) -> Dict[int, int]:
        """Nonisomorphic (3,2)-critical graphs per vertex count"""
        result = {n: 0 for n in sorted(self.counts)}
        for record in self.critical:
            result[record.n] = result.get(record.n, 0) + 1
        return result

    def to_dict(self) -> Dict[str, Any]:
        n_min, n_max = self.n_range
        return {
            'source': self.source,
            'n_min': n_min,
            'n_max': n_max,
            'cap': self.cap,
            'ok': self.ok,
            'totals': self.totals(),
            'counts': {str(n): dict(c) for n, c in sorted(self.counts.items())},
            'critical_counts': {str(n): c for n, c in self.critical_counts().items()},
            'critical': [r.to_dict() for r in self.critical],
            'violations': [v.to_dict() for v in self.violations],
            'errors': [e.to_dict() for e in self.errors],
        }

    def summary_table(self) -> pd.DataFrame:
        """One row per vertex count: scan counters and critical classes per family"""
        rows = []
        for n in sorted(self.counts):
            row = {'n': n}
            row.update(self.counts[n])
            for tag in FAMILY_ORDER:
                row[tag] = sum(1 for r in self.critical if r.n == n and r.tag == tag)
            row['critical'] = sum(1 for r in self.critical if r.n == n)
            rows.append(row)
        columns = ['n', *COUNT_KEYS, *FAMILY_ORDER, 'critical']
        return pd.DataFrame(rows, columns=columns).set_index('n')


# =============================================================================
# Worker side
# =============================================================================

@dataclass(frozen=True)
class _Task:
    kind: str
    config: EscritConfig
    n: int = 0
    start: int = 0
    stop: int = 0
    lines: Tuple[str, ...] = ()


@dataclass
class _ChunkResult:
    counts: Dict[int, Dict[str, int]] = field(default_factory=dict)
    hits: List[Tuple[int, int, bool, Optional[str]]] = field(default_factory=list)
    errors: List[ScanError] = field(default_factory=list)


@lru_cache(maxsize=None)
def _incidence_masks(n: int) -> Tuple[int, ...]:
    """Per vertex, the edge-mask bits of the pairs containing it"""
    masks = [0] * n
    for j in range(1, n):
        for i in range(j):
            bit = 1 << edge_index(i, j)
            masks[i] |= bit
            masks[j] |= bit
    return tuple(masks)


def _examine(n: int, mask: int, result: _ChunkResult) -> None:
    counts = result.counts.setdefault(n, dict.fromkeys(COUNT_KEYS, 0))
    counts['graphs'] += 1
    degrees = tuple((mask & incident).bit_count() for incident in _incidence_masks(n))
    if 0 in degrees:
        counts['isolated_skipped'] += 1
        return
    frustration = cut_table(n).frustration(mask)
    if frustration == 0:
        counts['bipartite_skipped'] += 1
        return
    counts['nonbipartite_examined'] += 1

    g = Graph.from_mask(n, mask)
    try:
        critical = False
        # (3,2)-critical graphs have chi 3, so es equals the frustration and must be 2
        if frustration == 2:
            counts['frustration_two'] += 1
            if chromatic_number(g) == 3:
                counts['chi3_candidates'] += 1
                critical = is_k_l_critical(g, 3, 2)
        tag = classify(g) if degree_profile_admissible(degrees) else None
    except EscritError as e:
        result.errors.append(ScanError(to_graph6(g), str(e)))
        return
    if critical:
        counts['critical_labeled'] += 1
    if tag:
        counts['classified_labeled'] += 1
    if critical or tag:
        result.hits.append((n, mask, critical, tag))


def _scan_task(task: _Task) -> _ChunkResult:
    set_config(task.config)
    result = _ChunkResult()
    if task.kind == SOURCE_INTERNAL:
        for mask in range(task.start, task.stop):
            _examine(task.n, mask, result)
        return result

    for line in task.lines:
        text = line.strip()
        if not text or text == GRAPH6_HEADER:
            continue
        try:
            g = parse_graph6(text)
            if g.n > task.config.max_scan_n:
                raise BoundExceededError(f"scan limited to n <= {task.config.max_scan_n}, got {g.n}")
        except EscritError as e:
            result.errors.append(ScanError(text, str(e)))
            continue
        _examine(g.n, g.mask, result)
    return result


# =============================================================================
# Driver
# =============================================================================

def _plan_tasks(source: ScanSource, options: ScanOptions, config: EscritConfig) -> List[_Task]:
    chunk = options.chunk_size or config.scan_chunk_size
    if chunk < 1:
        raise PreconditionError(f"chunk size must be positive, got {chunk}")
    if source.kind == SOURCE_GRAPH6:
        lines = source.lines
        return [_Task(SOURCE_GRAPH6, config, lines=lines[i:i + chunk]) for i in range(0, len(lines), chunk)]

    if source.n_min < 0 or source.n_max < source.n_min:
        raise PreconditionError(f"invalid vertex range {source.n_min}..{source.n_max}")
    if source.n_max > config.max_exhaustive_n:
        raise BoundExceededError(
            f"exhaustive scan limited to n <= {config.max_exhaustive_n}, got {source.n_max}")
    tasks = []
    for n in range(source.n_min, source.n_max + 1):
        total = 1 << pair_count(n)
        for start in range(0, total, chunk):
            tasks.append(_Task(SOURCE_INTERNAL, config, n=n, start=start, stop=min(start + chunk, total)))
    return tasks


def _worker_count(options: ScanOptions, config: EscritConfig) -> int:
    return options.workers or config.scan_workers or psutil.cpu_count(logical=False) or 1


def _run_tasks(tasks: List[_Task], workers: int, progress: bool) -> List[_ChunkResult]:
    results = []
    with tqdm(total=len(tasks), desc='scan', unit='chunk', disable=not progress, file=sys.stderr) as bar:
        if workers > 1 and len(tasks) > 1:
            with Pool(processes=min(workers, len(tasks))) as pool:
                for result in pool.imap_unordered(_scan_task, tasks):
                    results.append(result)
                    bar.update(1)
        else:
            for task in tasks:
                results.append(_scan_task(task))
                bar.update(1)
    return results


@dataclass
class _ClassAccumulator:
    n: int
    mask: int
    labeled: int = 0
    critical: Set[bool] = field(default_factory=set)
    tags: Set[Optional[str]] = field(default_factory=set)


def _merge(results: List[_ChunkResult], report: ScanReport) -> Dict[str, _ClassAccumulator]:
    hits = []
    for result in results:
        for n, counts in result.counts.items():
            merged = report.counts.setdefault(n, dict.fromkeys(COUNT_KEYS, 0))
            for key, value in counts.items():
                merged[key] += value
        hits.extend(result.hits)
        report.errors.extend(result.errors)
    report.errors.sort(key=lambda e: (e.graph, e.message))

    canonical_of: Dict[Tuple[int, int], str] = {}
    classes: Dict[str, _ClassAccumulator] = {}
    for n, mask, critical, tag in sorted(hits, key=lambda h: (h[0], h[1])):
        if (n, mask) not in canonical_of:
            try:
                canonical, orbit = canonical_orbit(Graph.from_mask(n, mask))
            except EscritError as e:
                report.errors.append(ScanError(to_graph6(Graph.from_mask(n, mask)), str(e)))
                continue
            for relabeled in orbit:
                canonical_of[(n, relabeled)] = canonical
        canonical = canonical_of[(n, mask)]
        entry = classes.setdefault(canonical, _ClassAccumulator(n, mask))
        entry.labeled += 1
        entry.critical.add(critical)
        entry.tags.add(tag)
    return classes


def _check_class(canonical: str, entry: _ClassAccumulator, report: ScanReport,
                 check_structure: bool) -> Optional[CriticalRecord]:
    n = entry.n

    def violation(kind: str, detail: str) -> None:
        report.violations.append(Violation(kind, n, canonical, detail))

    if len(entry.critical) > 1 or len(entry.tags) > 1:
        violation('inconsistent-labelings', "isomorphic labelings got different verdicts")
    critical = True in entry.critical
    tag = min((t for t in entry.tags if t), default=None)
    if critical and tag is None:
        violation('critical-unclassified', "(3,2)-critical but in no family")
    if not critical and tag is not None:
        violation('classified-not-critical', f"classified {tag} but not (3,2)-critical")
    if not critical:
        return None

    g = parse_graph6(canonical)
    try:
        census = count_odd_cycles(g, report.cap)
        threshold = count_odd_cycles(g, DEFAULT_ODD_CYCLE_CAP)
        spec = recognize_family(g)
        families = tuple(matching_families(g))
        if threshold.saturated and tag not in (None, TAG_E):
            violation('odd-cycle-threshold', f"{DEFAULT_ODD_CYCLE_CAP}+ odd cycles but classified {tag}")
        if not threshold.saturated and tag is not None and tag not in ODD_CYCLE_FAMILIES:
            violation('odd-cycle-threshold', f"{threshold.count} odd cycles but classified {tag}")
        if len(families) > 1 and not set(families) <= ALLOWED_OVERLAP:
            violation('family-overlap', f"recognized as {', '.join(families)}")
        if check_structure and threshold.count >= 3:
            if not pairwise_intersection_property(g):
                violation('pairwise-intersection', "two odd cycles share fewer than two vertices")
            if not is_nonseparable(g.without_isolated_vertices()):
                violation('separable', "critical graph with three or more odd cycles has a cut vertex")
            for e in g.edges:
                if not all_odd_cycles_share_edge(g.without_edges([e])):
                    violation('no-shared-edge', f"odd cycles of G - {list(e)} share no edge")
    except EscritError as e:
        report.errors.append(ScanError(canonical, str(e)))
        return None
    return CriticalRecord(
        n=n,
        graph6=canonical,
        tag=tag,
        spec=spec.to_compact() if spec else None,
        labeled=entry.labeled,
        odd_cycles=census.count,
        saturated=census.saturated,
        families=families,
    )


def theorem_scan(source: ScanSource, options: Optional[ScanOptions] = None) -> ScanReport:
    config = get_config()
    options = options or ScanOptions()
    report = ScanReport(source=source.kind, cap=options.cap or config.odd_cycle_cap)

    tasks = _plan_tasks(source, options, config)
    workers = _worker_count(options, config)
    logger.info(f"Scanning {source.describe()}: {len(tasks)} chunks on {workers} worker(s)")

    classes = _merge(_run_tasks(tasks, workers, options.progress), report)
    for canonical, entry in sorted(classes.items(), key=lambda item: (item[1].n, item[0])):
        record = _check_class(canonical, entry, report, options.check_structure)
        if record is not None:
            report.critical.append(record)

    report.violations.sort(key=lambda v: (v.n, v.graph6, v.kind, v.detail))
    report.errors.sort(key=lambda e: (e.graph, e.message))
    for n, count in report.critical_counts().items():
        logger.info(f"n={n}: {report.counts[n]['graphs']} graphs, {count} critical up to isomorphism")
    for v in report.violations:
        logger.error(f"{v.kind} n={v.n} {v.graph6}: {v.detail}")
    if report.errors:
        logger.warning(f"{len(report.errors)} graph(s) could not be decided; see 'errors'")
    return report
