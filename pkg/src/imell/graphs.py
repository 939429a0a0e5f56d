"""Reduction graphs over alpha-classes, with bounded exhaustive search.

Nodes are alpha-canonical keys, so a loop like omega's shows up as an
actual cycle instead of an infinite unfolding.  Searches carry explicit
bounds; hitting one marks the graph truncated and every downstream
judgement (normality, acyclicity, path lengths) reports that honestly
instead of passing by accident.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional, Sequence

from . import rules
from . import terms as tm

__all__ = [
    "Bounds",
    "ReductionGraph",
    "build_graph",
    "normal_forms",
    "SNStatus",
    "SNResult",
    "check_sn",
]


@dataclass(frozen=True)
class Bounds:
    max_nodes: int = 50_000
    max_depth: int = 200


Enumerator = Callable[[tm.Term], Sequence[rules.Redex]]


@dataclass
class ReductionGraph:
    root: str
    nodes: dict[str, tm.Term]
    edges: dict[str, tuple[tuple[rules.Redex, str], ...]]
    unexpanded: frozenset[str]
    bounds: Bounds

    @property
    def truncated(self) -> bool:
        return bool(self.unexpanded)

    def __len__(self) -> int:
        return len(self.nodes)


def _mode_enum(mode: rules.Mode) -> Enumerator:
    return lambda t: rules.redexes(t, mode)


def build_graph(
    t: tm.Term,
    mode: rules.Mode = rules.Mode.MICRO,
    bounds: Bounds = Bounds(),
    enumerate_redexes: Optional[Enumerator] = None,
) -> ReductionGraph:
    """Breadth-first closure of t under the given redex enumerator."""
    enum = enumerate_redexes or _mode_enum(mode)
    root = tm.alpha_key(t)
    nodes: dict[str, tm.Term] = {root: t}
    edges: dict[str, tuple[tuple[rules.Redex, str], ...]] = {}
    unexpanded: set[str] = set()
    queue: deque[tuple[str, int]] = deque([(root, 0)])
    while queue:
        key, depth = queue.popleft()
        if key in edges or key in unexpanded:
            continue
        if depth >= bounds.max_depth:
            unexpanded.add(key)
            continue
        here = nodes[key]
        out = []
        for r in enum(here):
            succ = rules.apply(here, r)
            skey = tm.alpha_key(succ)
            if skey not in nodes:
                if len(nodes) >= bounds.max_nodes:
                    unexpanded.add(key)
                    out = None
                    break
                nodes[skey] = succ
                queue.append((skey, depth + 1))
            out.append((r, skey))
        if out is not None:
            edges[key] = tuple(out)
    # anything still queued when the node budget ran out is unexpanded
    for key, _ in queue:
        if key not in edges:
            unexpanded.add(key)
    return ReductionGraph(root, nodes, edges, frozenset(unexpanded), bounds)


def normal_forms(g: ReductionGraph) -> list[str]:
    """Keys of nodes known to have no redex; frontier nodes do not count."""
    return [k for k, out in g.edges.items() if not out]


class SNStatus(Enum):
    SN = "sn"
    CYCLE = "cycle"
    TRUNCATED = "truncated"


@dataclass(frozen=True)
class SNResult:
    status: SNStatus
    longest_path: Optional[int] = None
    witness: tuple[str, ...] = ()

    @property
    def is_sn(self) -> bool:
        return self.status is SNStatus.SN


def _find_cycle(g: ReductionGraph) -> Optional[tuple[str, ...]]:
    """Kinds along some cycle among fully expanded edges, or None."""
    WHITE, GRAY, BLACK = 0, 1, 2
    color = {k: WHITE for k in g.nodes}
    parent_edge: dict[str, tuple[str, rules.Redex]] = {}
    for start in g.nodes:
        if color[start] != WHITE:
            continue
        stack: list[tuple[str, int]] = [(start, 0)]
        color[start] = GRAY
        while stack:
            key, i = stack[-1]
            out = g.edges.get(key, ())
            if i < len(out):
                stack[-1] = (key, i + 1)
                r, succ = out[i]
                if color[succ] == GRAY:
                    # unwind the stack back to succ to read off the loop
                    kinds = [r.kind.value]
                    for k2, _ in reversed(stack):
                        if k2 == succ:
                            break
                        src, r2 = parent_edge[k2]
                        kinds.append(r2.kind.value)
                    return tuple(reversed(kinds))
                if color[succ] == WHITE:
                    color[succ] = GRAY
                    parent_edge[succ] = (key, r)
                    stack.append((succ, 0))
            else:
                color[key] = BLACK
                stack.pop()
    return None


def _longest_path(g: ReductionGraph) -> int:
    """Longest path from the root of an acyclic, fully expanded graph."""
    order: list[str] = []
    indeg = {k: 0 for k in g.nodes}
    for out in g.edges.values():
        for _, succ in out:
            indeg[succ] += 1
    ready = deque(k for k, d in indeg.items() if d == 0)
    while ready:
        k = ready.popleft()
        order.append(k)
        for _, succ in g.edges.get(k, ()):
            indeg[succ] -= 1
            if indeg[succ] == 0:
                ready.append(succ)
    dist = {k: 0 for k in g.nodes}
    best = 0
    for k in order:
        for _, succ in g.edges.get(k, ()):
            if dist[k] + 1 > dist[succ]:
                dist[succ] = dist[k] + 1
                best = max(best, dist[succ])
    return best


def check_sn(
    t: tm.Term,
    mode: rules.Mode = rules.Mode.MICRO,
    bounds: Bounds = Bounds(),
    enumerate_redexes: Optional[Enumerator] = None,
) -> SNResult:
    """Strong normalization by exhaustive graph search.

    A cycle among explored edges refutes SN even in a truncated graph; a
    truncated graph without one proves nothing and says so.
    """
    g = build_graph(t, mode, bounds, enumerate_redexes)
    cyc = _find_cycle(g)
    if cyc is not None:
        return SNResult(SNStatus.CYCLE, witness=cyc)
    if g.truncated:
        return SNResult(SNStatus.TRUNCATED)
    return SNResult(SNStatus.SN, longest_path=_longest_path(g))
