"""
Families - Constructors and Recognizers for the (3,2)-Critical Families
=======================================================================

A  two disjoint odd cycles
B  two odd cycles sharing one vertex
C  theta graph: four internally disjoint hub-to-hub paths, exactly two odd,
   at most one of length one
D  subdivided K4 in which all four subdivided triangles are odd
E  ring of k >= 2 even cycles, consecutive cycles glued at one hub vertex,
   with odd total hub distance
E' ring of k >= 3 parts, each an even cycle or a path, at least two cycles and
   one path, no two paths adjacent, odd total hub distance

Specs have a compact text form used by the CLI:

    A:3,5   B:3,3   C:1,2,2,3   D:i:1,1,1,1,1,3   E:4,1;4,1;4,1   E':4,1;p1;4,1

Recognition is purely structural: degree profile, then the decomposition of
the edge set into arcs between branch vertices (vertices of degree != 2).
"""

from dataclasses import dataclass
from itertools import combinations_with_replacement, permutations
from typing import Any, Callable, Dict, Iterator, List, Optional, Sequence, Tuple

from escrit_config import get_logger
from escrit_errors import InvalidSpecError
from graph_core import Graph, norm_edge

logger = get_logger('families')

TAG_A = 'A'
TAG_B = 'B'
TAG_C = 'C'
TAG_D = 'D'
TAG_E = 'E'
TAG_E_PRIME = "E'"
FAMILY_ORDER = (TAG_A, TAG_B, TAG_C, TAG_D, TAG_E)
ALL_TAGS = FAMILY_ORDER + (TAG_E_PRIME,)

PART_CYCLE = 'cycle'
PART_PATH = 'path'

# K4 on branch vertices 0..3; lengths of D specs follow this branch order
K4_BRANCHES = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))
K4_BRANCH_INDEX = {pair: i for i, pair in enumerate(K4_BRANCHES)}
K4_TRIANGLES = ((0, 1, 3), (0, 2, 4), (1, 2, 5), (3, 4, 5))
D_CASES = ('i', 'ii', 'iii')


@dataclass(frozen=True)
class RingPart:
    """One constituent of an E/E' ring: an even cycle with hub distance, or a path"""
    kind: str
    length: int
    distance: int

    @classmethod
    def cycle(cls, length: int, distance: int) -> 'RingPart':
        return cls(PART_CYCLE, length, distance)

    @classmethod
    def path(cls, length: int) -> 'RingPart':
        return cls(PART_PATH, length, length)

    @property
    def arcs(self) -> Tuple[int, ...]:
        if self.kind == PART_PATH:
            return (self.length,)
        return (self.distance, self.length - self.distance)

    def to_compact(self) -> str:
        if self.kind == PART_PATH:
            return f"p{self.length}"
        return f"{self.length},{self.distance}"

    def to_dict(self) -> Dict[str, Any]:
        return {'kind': self.kind, 'length': self.length, 'distance': self.distance}


@dataclass(frozen=True)
class FamilySpec:
    tag: str
    lengths: Tuple[int, ...] = ()
    case: Optional[str] = None
    parts: Tuple[RingPart, ...] = ()

    @classmethod
    def parse(cls, text: str) -> 'FamilySpec':
        """Read the compact form, e.g. 'C:1,2,2,3' or 'E:4,1;6,2'"""
        raw = text.strip()
        tag, sep, rest = raw.partition(':')
        tag = tag.strip().replace('′', "'")
        if not sep or tag not in ALL_TAGS:
            raise InvalidSpecError([f"unknown family spec {raw!r}; expected one of {', '.join(ALL_TAGS)} followed by ':'"])
        try:
            if tag in (TAG_E, TAG_E_PRIME):
                return cls(tag, parts=tuple(_parse_part(item) for item in rest.split(';')))
            case = None
            if tag == TAG_D and ':' in rest:
                case, rest = rest.split(':', 1)
                case = case.strip()
            return cls(tag, lengths=tuple(int(tok) for tok in rest.split(',')), case=case)
        except ValueError as e:
            raise InvalidSpecError([f"malformed {tag} spec {raw!r}: {e}"]) from e

    def to_compact(self) -> str:
        if self.tag in (TAG_E, TAG_E_PRIME):
            return f"{self.tag}:" + ';'.join(p.to_compact() for p in self.parts)
        body = ','.join(str(x) for x in self.lengths)
        if self.case:
            return f"{self.tag}:{self.case}:{body}"
        return f"{self.tag}:{body}"

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {'tag': self.tag, 'compact': self.to_compact()}
        if self.tag in (TAG_E, TAG_E_PRIME):
            data['parts'] = [p.to_dict() for p in self.parts]
        else:
            data['lengths'] = list(self.lengths)
        if self.tag == TAG_D:
            data['case'] = self.case
        return data

    @property
    def vertex_count(self) -> int:
        if self.tag == TAG_A:
            return sum(self.lengths)
        if self.tag == TAG_B:
            return sum(self.lengths) - 1
        if self.tag == TAG_C:
            return 2 + sum(q - 1 for q in self.lengths)
        if self.tag == TAG_D:
            return 4 + sum(q - 1 for q in self.lengths)
        # each hub is shared by two consecutive parts
        return sum(p.length - 1 if p.kind == PART_CYCLE else p.length for p in self.parts)


def _parse_part(item: str) -> RingPart:
    item = item.strip()
    if item.startswith('p'):
        return RingPart.path(int(item[1:]))
    length, distance = item.split(',')
    return RingPart.cycle(int(length), int(distance))


# =============================================================================
# Validation
# =============================================================================

def d_branch_case(lengths: Sequence[int]) -> Optional[str]:
    """'i', 'ii' or 'iii' when every subdivided triangle of the K4 is odd, else None"""
    if len(lengths) != len(K4_BRANCHES):
        return None
    odd = [q % 2 for q in lengths]
    if any(sum(odd[i] for i in triangle) % 2 == 0 for triangle in K4_TRIANGLES):
        return None
    return {6: 'i', 3: 'ii', 2: 'iii'}[sum(odd)]


def _validate_odd_cycle_pair(s: FamilySpec) -> List[str]:
    if len(s.lengths) != 2:
        return [f"{s.tag} needs exactly two cycle lengths, got {len(s.lengths)}"]
    problems = []
    for q in s.lengths:
        if q < 3 or q % 2 == 0:
            problems.append(f"{s.tag} cycle length {q} is not an odd length >= 3")
    return problems


def _validate_theta(s: FamilySpec) -> List[str]:
    if len(s.lengths) != 4:
        return [f"C needs exactly four path lengths, got {len(s.lengths)}"]
    problems = [f"C path length {q} is below 1" for q in s.lengths if q < 1]
    odd = sum(1 for q in s.lengths if q % 2 == 1)
    if odd != 2:
        problems.append(f"C needs exactly two odd paths, got {odd}")
    ones = sum(1 for q in s.lengths if q == 1)
    if ones > 1:
        problems.append(f"C allows at most one path of length one, got {ones}")
    return problems


def _validate_k4_subdivision(s: FamilySpec) -> List[str]:
    if len(s.lengths) != 6:
        return [f"D needs exactly six branch lengths, got {len(s.lengths)}"]
    problems = [f"D branch length {q} is below 1" for q in s.lengths if q < 1]
    if all(q == 1 for q in s.lengths):
        problems.append("D excludes the unsubdivided K4")
    case = d_branch_case(s.lengths)
    if case is None:
        problems.append("D branch parities leave an even subdivided triangle")
    elif s.case is not None and s.case != case:
        problems.append(f"D case marker {s.case!r} does not match branch parities (case {case!r})")
    if s.case is not None and s.case not in D_CASES:
        problems.append(f"D case marker must be one of {', '.join(D_CASES)}, got {s.case!r}")
    return problems


def _validate_part(part: RingPart, position: int) -> List[str]:
    where = f"part {position + 1}"
    if part.kind == PART_PATH:
        return [f"{where}: path length {part.length} is below 1"] if part.length < 1 else []
    problems = []
    if part.length < 4 or part.length % 2:
        problems.append(f"{where}: cycle length {part.length} is not an even length >= 4")
    if not 1 <= part.distance <= part.length // 2:
        problems.append(f"{where}: hub distance {part.distance} outside 1..{part.length // 2}")
    return problems


def _validate_ring(s: FamilySpec) -> List[str]:
    problems = []
    k = len(s.parts)
    for i, part in enumerate(s.parts):
        problems.extend(_validate_part(part, i))
    paths = [i for i, p in enumerate(s.parts) if p.kind == PART_PATH]
    if s.tag == TAG_E:
        if k < 2:
            problems.append(f"E needs at least two cycles, got {k}")
        if paths:
            problems.append("E parts must all be even cycles")
    else:
        if k < 3:
            problems.append(f"E' needs at least three parts, got {k}")
        if k - len(paths) < 2:
            problems.append("E' needs at least two even cycles")
        if not paths:
            problems.append("E' needs at least one path")
        for i in paths:
            if k > 1 and (i + 1) % k in paths:
                problems.append(f"E' parts {i + 1} and {(i + 1) % k + 1} are adjacent paths")
    if sum(p.distance for p in s.parts) % 2 == 0:
        problems.append("sum of hub distances must be odd")
    return problems


_VALIDATORS: Dict[str, Callable[[FamilySpec], List[str]]] = {
    TAG_A: _validate_odd_cycle_pair,
    TAG_B: _validate_odd_cycle_pair,
    TAG_C: _validate_theta,
    TAG_D: _validate_k4_subdivision,
    TAG_E: _validate_ring,
    TAG_E_PRIME: _validate_ring,
}


def validate_spec(s: FamilySpec) -> List[str]:
    """Every violated constraint of s; empty when s is valid"""
    if s.tag not in _VALIDATORS:
        return [f"unknown family tag {s.tag!r}"]
    return _VALIDATORS[s.tag](s)


# =============================================================================
# Construction
# =============================================================================

class _Builder:
    """Hands out fresh vertex labels and collects path edges"""

    def __init__(self, first_free: int):
        self.next_label = first_free
        self.edges: List[Tuple[int, int]] = []

    def fresh(self, count: int) -> List[int]:
        labels = list(range(self.next_label, self.next_label + count))
        self.next_label += count
        return labels

    def path(self, start: int, length: int, end: Optional[int] = None) -> int:
        """Add a path of the given length from start; returns its end vertex"""
        inner = self.fresh(length - 1)
        if end is None:
            end = self.fresh(1)[0]
        walk = [start] + inner + [end]
        self.edges.extend(zip(walk, walk[1:]))
        return end

    def graph(self) -> Graph:
        return Graph.from_edge_list(self.next_label, self.edges)


def _build_a(s: FamilySpec) -> Graph:
    b = _Builder(0)
    for q in s.lengths:
        start = b.fresh(1)[0]
        b.path(start, q, start)
    return b.graph()


def _build_b(s: FamilySpec) -> Graph:
    b = _Builder(1)
    for q in s.lengths:
        b.path(0, q, 0)
    return b.graph()


def _build_c(s: FamilySpec) -> Graph:
    b = _Builder(2)
    for q in s.lengths:
        b.path(0, q, 1)
    return b.graph()


def _build_d(s: FamilySpec) -> Graph:
    b = _Builder(4)
    for (u, v), q in zip(K4_BRANCHES, s.lengths):
        b.path(u, q, v)
    return b.graph()


def _build_ring(s: FamilySpec) -> Graph:
    # x_1 = 0; y_i is numbered after the first arc of part i; y_k is identified with x_1
    b = _Builder(1)
    x = 0
    for i, part in enumerate(s.parts):
        last = i == len(s.parts) - 1
        first_arc, *other = part.arcs
        y = b.path(x, first_arc, 0 if last else None)
        for arc in other:
            b.path(y, arc, x)
        x = y
    return b.graph()


_BUILDERS: Dict[str, Callable[[FamilySpec], Graph]] = {
    TAG_A: _build_a,
    TAG_B: _build_b,
    TAG_C: _build_c,
    TAG_D: _build_d,
    TAG_E: _build_ring,
    TAG_E_PRIME: _build_ring,
}


def build_family(s: FamilySpec) -> Graph:
    violations = validate_spec(s)
    if violations:
        raise InvalidSpecError(violations)
    return _BUILDERS[s.tag](s)


# =============================================================================
# Normalization
# =============================================================================

def normalize_d_lengths(lengths: Sequence[int]) -> Tuple[int, ...]:
    """Lexicographically least branch-length tuple over the 24 relabelings of K4"""
    best = None
    for perm in permutations(range(4)):
        relabeled = [0] * 6
        for (u, v), q in zip(K4_BRANCHES, lengths):
            relabeled[K4_BRANCH_INDEX[norm_edge(perm[u], perm[v])]] = q
        candidate = tuple(relabeled)
        if best is None or candidate < best:
            best = candidate
    return best


def normalize_ring(parts: Sequence[RingPart]) -> Tuple[RingPart, ...]:
    """Lexicographically least rotation or reflection of the ring"""
    keys = [(p.kind, p.length, p.distance) for p in parts]
    candidates = []
    for sequence in (keys, keys[::-1]):
        for shift in range(len(sequence)):
            candidates.append(tuple(sequence[shift:] + sequence[:shift]))
    return tuple(RingPart(*key) for key in min(candidates))


def normalize_spec(s: FamilySpec) -> FamilySpec:
    if s.tag in (TAG_A, TAG_B, TAG_C):
        return FamilySpec(s.tag, tuple(sorted(s.lengths)))
    if s.tag == TAG_D:
        lengths = normalize_d_lengths(s.lengths)
        return FamilySpec(TAG_D, lengths, case=d_branch_case(lengths))
    return FamilySpec(s.tag, parts=normalize_ring(s.parts))


# =============================================================================
# Recognition
# =============================================================================

@dataclass(frozen=True)
class _Arc:
    ends: Tuple[int, int]
    length: int

    @property
    def is_loop(self) -> bool:
        return self.ends[0] == self.ends[1]


def degree_profile_admissible(degrees: Sequence[int]) -> bool:
    """Degree sequences some family member can have: 2..4, and four 3's only without 4's"""
    if not degrees or min(degrees) < 2 or max(degrees) > 4:
        return False
    threes = sum(1 for d in degrees if d == 3)
    if threes:
        return threes == 4 and 4 not in degrees
    return True


def _trace_arcs(g: Graph, branch: Sequence[int]) -> Optional[List[_Arc]]:
    """Maximal branch-to-branch paths through degree-2 vertices; None if they miss an edge"""
    branch_set = set(branch)
    used = set()
    arcs = []
    for start in sorted(branch_set):
        for w in g.adjacency[start]:
            edge = norm_edge(start, w)
            if edge in used:
                continue
            used.add(edge)
            previous, current, length = start, w, 1
            while current not in branch_set:
                onward = [x for x in g.adjacency[current] if norm_edge(current, x) not in used]
                if len(onward) != 1:
                    return None
                used.add(norm_edge(current, onward[0]))
                previous, current = current, onward[0]
                length += 1
            arcs.append(_Arc(norm_edge(start, current), length))
    if len(used) != g.m:
        return None
    return arcs


def _vertices_with_degree(g: Graph, degree: int) -> List[int]:
    return [v for v, d in enumerate(g.degrees) if d == degree]


def _only_degrees(g: Graph, allowed: Sequence[int]) -> bool:
    return g.n > 0 and all(d in allowed for d in g.degrees)


def recognize_a(g: Graph) -> Optional[FamilySpec]:
    if not _only_degrees(g, (2,)):
        return None
    sizes = [len(c) for c in g.components()]
    if len(sizes) != 2 or any(q % 2 == 0 for q in sizes):
        return None
    return FamilySpec(TAG_A, tuple(sorted(sizes)))


def recognize_b(g: Graph) -> Optional[FamilySpec]:
    hubs = _vertices_with_degree(g, 4)
    if len(hubs) != 1 or not _only_degrees(g, (2, 4)) or not g.is_connected():
        return None
    arcs = _trace_arcs(g, hubs)
    if arcs is None or len(arcs) != 2 or any(arc.length % 2 == 0 for arc in arcs):
        return None
    return FamilySpec(TAG_B, tuple(sorted(arc.length for arc in arcs)))


def recognize_c(g: Graph) -> Optional[FamilySpec]:
    hubs = _vertices_with_degree(g, 4)
    if len(hubs) != 2 or not _only_degrees(g, (2, 4)) or not g.is_connected():
        return None
    arcs = _trace_arcs(g, hubs)
    if arcs is None or len(arcs) != 4 or any(arc.is_loop for arc in arcs):
        return None
    spec = FamilySpec(TAG_C, tuple(sorted(arc.length for arc in arcs)))
    return None if validate_spec(spec) else spec


def recognize_d(g: Graph) -> Optional[FamilySpec]:
    branch = _vertices_with_degree(g, 3)
    if len(branch) != 4 or not _only_degrees(g, (2, 3)) or not g.is_connected():
        return None
    arcs = _trace_arcs(g, branch)
    if arcs is None or len(arcs) != 6:
        return None
    position = {v: i for i, v in enumerate(sorted(branch))}
    lengths = [0] * 6
    for arc in arcs:
        if arc.is_loop:
            return None
        index = K4_BRANCH_INDEX[norm_edge(position[arc.ends[0]], position[arc.ends[1]])]
        if lengths[index]:
            return None
        lengths[index] = arc.length
    spec = normalize_spec(FamilySpec(TAG_D, tuple(lengths)))
    return None if validate_spec(spec) else spec


def _ring_order(hubs: Sequence[int], links: Dict[Tuple[int, int], List[int]]) -> Optional[List[int]]:
    """Hubs in ring order when the hub link graph is one cycle through all of them"""
    neighbors: Dict[int, List[int]] = {h: [] for h in hubs}
    for a, b in links:
        neighbors[a].append(b)
        neighbors[b].append(a)
    if any(len(nbrs) != 2 for nbrs in neighbors.values()):
        return None
    order = [min(hubs)]
    previous = None
    while len(order) <= len(hubs):
        current = order[-1]
        step = min(w for w in neighbors[current] if w != previous)
        if step == order[0]:
            break
        previous = current
        order.append(step)
    return order if len(order) == len(hubs) else None


def _ring_part(arc_lengths: Sequence[int]) -> Optional[RingPart]:
    if len(arc_lengths) == 1:
        return RingPart.path(arc_lengths[0])
    a, b = arc_lengths
    if (a + b) % 2:
        return None
    return RingPart.cycle(a + b, min(a, b))


def _recognize_ring(g: Graph, tag: str) -> Optional[FamilySpec]:
    degrees = (2, 4) if tag == TAG_E else (2, 3, 4)
    if not _only_degrees(g, degrees) or not g.is_connected():
        return None
    hubs = [v for v, d in enumerate(g.degrees) if d != 2]
    if len(hubs) < 2:
        return None
    arcs = _trace_arcs(g, hubs)
    if arcs is None or any(arc.is_loop for arc in arcs):
        return None
    links: Dict[Tuple[int, int], List[int]] = {}
    for arc in arcs:
        links.setdefault(arc.ends, []).append(arc.length)

    if len(hubs) == 2:
        if tag != TAG_E or len(arcs) != 4:
            return None
        return _recognize_two_hub_ring(arcs)

    order = _ring_order(hubs, links)
    if order is None:
        return None
    parts = []
    for i, hub in enumerate(order):
        lengths = links[norm_edge(hub, order[(i + 1) % len(order)])]
        if len(lengths) > 2:
            return None
        part = _ring_part(lengths)
        if part is None:
            return None
        parts.append(part)
    spec = FamilySpec(tag, parts=normalize_ring(parts))
    return None if validate_spec(spec) else spec


def _recognize_two_hub_ring(arcs: Sequence[_Arc]) -> Optional[FamilySpec]:
    lengths = [arc.length for arc in arcs]
    best = None
    # the three ways of pairing four arcs into two cycles
    for partner in (1, 2, 3):
        rest = [i for i in (1, 2, 3) if i != partner]
        parts = [_ring_part([lengths[0], lengths[partner]]), _ring_part([lengths[i] for i in rest])]
        if None in parts:
            continue
        spec = FamilySpec(TAG_E, parts=normalize_ring(parts))
        if validate_spec(spec):
            continue
        if best is None or spec.to_compact() < best.to_compact():
            best = spec
    return best


def recognize_e(g: Graph) -> Optional[FamilySpec]:
    return _recognize_ring(g, TAG_E)


def recognize_e_prime(g: Graph) -> Optional[FamilySpec]:
    return _recognize_ring(g, TAG_E_PRIME)


RECOGNIZERS: Tuple[Tuple[str, Callable[[Graph], Optional[FamilySpec]]], ...] = (
    (TAG_A, recognize_a),
    (TAG_B, recognize_b),
    (TAG_C, recognize_c),
    (TAG_D, recognize_d),
    (TAG_E, recognize_e),
)


def recognize_family(g: Graph) -> Optional[FamilySpec]:
    """Normalized spec of the first family (A, B, C, D, E) that g belongs to"""
    if not degree_profile_admissible(g.degrees):
        return None
    for _, recognizer in RECOGNIZERS:
        spec = recognizer(g)
        if spec is not None:
            return spec
    return None


def classify(g: Graph) -> Optional[str]:
    spec = recognize_family(g)
    return spec.tag if spec else None


def matching_families(g: Graph) -> List[str]:
    """Every tag whose recognizer accepts g"""
    if not degree_profile_admissible(g.degrees):
        return []
    return [tag for tag, recognizer in RECOGNIZERS if recognizer(g) is not None]


# =============================================================================
# Parameter grid
# =============================================================================

def _lengths_with_extra(count: int, extra: int, low: int = 1) -> Iterator[Tuple[int, ...]]:
    """Tuples of `count` integers >= low whose excess over low sums to at most extra"""
    if count == 0:
        yield ()
        return
    for first in range(low, low + extra + 1):
        for rest in _lengths_with_extra(count - 1, extra - (first - low), low):
            yield (first,) + rest


def _ring_sequences(budget: int, k: int) -> Iterator[Tuple[RingPart, ...]]:
    if k == 0:
        yield ()
        return
    # a cycle of length 2n adds 2n - 1 vertices; leave room for the remaining k - 1 parts
    for length in range(4, budget - 3 * (k - 1) + 2, 2):
        for distance in range(1, length // 2 + 1):
            for rest in _ring_sequences(budget - (length - 1), k - 1):
                yield (RingPart.cycle(length, distance),) + rest


def family_grid(max_vertices: int) -> List[FamilySpec]:
    """Every valid A-E spec with at most max_vertices vertices, one per normalized form"""
    specs: List[FamilySpec] = []
    odd_lengths = range(3, max_vertices + 1, 2)
    for a in odd_lengths:
        for b in odd_lengths:
            if a <= b and a + b <= max_vertices:
                specs.append(FamilySpec(TAG_A, (a, b)))
            if a <= b and a + b - 1 <= max_vertices:
                specs.append(FamilySpec(TAG_B, (a, b)))

    for lengths in combinations_with_replacement(range(1, max_vertices), 4):
        spec = FamilySpec(TAG_C, lengths)
        if spec.vertex_count <= max_vertices and not validate_spec(spec):
            specs.append(spec)

    for lengths in _lengths_with_extra(6, max_vertices - 4):
        spec = FamilySpec(TAG_D, lengths, case=d_branch_case(lengths))
        if lengths == normalize_d_lengths(lengths) and not validate_spec(spec):
            specs.append(spec)

    k = 2
    while 3 * k <= max_vertices:
        for parts in _ring_sequences(max_vertices, k):
            spec = FamilySpec(TAG_E, parts=parts)
            if parts == normalize_ring(parts) and not validate_spec(spec):
                specs.append(spec)
        k += 1

    logger.debug(f"Family grid up to {max_vertices} vertices: {len(specs)} specs")
    return specs
