"""On-the-fly emptiness check of the product of a Kripke structure and a
simple LWAA's configuration graph.

The search is a depth-first Tarjan variant over pairs (state, configuration)
that never builds the underlying generalized Buechi automaton. Each open
SCC root accumulates, over the edges processed inside its component, the
co-final locations found absent from some member configuration; the moment
a root's set covers every co-final location, the component is accepting and
the search stops. Recursion is replaced by an explicit frame stack so that
product graphs with millions of nodes do not overflow the call stack.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable, Optional

from .kripke import KripkeStructure
from .lwaa import Lwaa, successor_configs
from .scc import strongly_connected_components

Node = tuple[int, int]  # (kripke state id, configuration mask)


class ResourceLimitError(RuntimeError):
    """Node budget exhausted; distinct from either verdict."""


class SearchInconsistencyError(RuntimeError):
    """The accepting-cycle snapshot does not contain the promised cycle.

    This cannot happen on a weak, simple automaton; it indicates a bug in
    the search itself and must never be swallowed.
    """


@dataclass
class SearchStats:
    nodes_seen: int = 0
    scc_count: int = 0
    max_dfs_depth: int = 0
    max_scc_stack: int = 0
    elapsed_ms: float = 0.0

    def as_report(self) -> dict[str, float | int]:
        return {
            "nodes_seen": self.nodes_seen,
            "scc_count": self.scc_count,
            "max_dfs_depth": self.max_dfs_depth,
            "max_scc_stack": self.max_scc_stack,
            "elapsed_ms": round(self.elapsed_ms, 3),
        }


@dataclass(frozen=True)
class Lasso:
    """Ultimately periodic path of the model: prefix then repeated loop."""

    prefix: tuple[int, ...]
    loop: tuple[int, ...]

    def __post_init__(self):
        if not self.loop:
            raise ValueError("lasso needs a nonempty loop")


@dataclass
class Verdict:
    holds: bool
    lasso: Optional[Lasso]
    stats: SearchStats

    def __post_init__(self):
        if not self.holds and self.lasso is None:
            raise ValueError("a violation verdict must carry a lasso")


class SearchRecord:
    """Per-node bookkeeping: discovery index, root candidate, accumulated
    absence labels (meaningful on roots), and completed-SCC flag."""

    __slots__ = ("cnt", "root", "labels", "in_comp")

    def __init__(self, cnt: int, node: Node):
        self.cnt = cnt
        self.root: Node = node
        self.labels: int = 0
        self.in_comp = False


class _GoodCycle(Exception):
    def __init__(self, node: Node):
        self.node = node


class _Frame:
    __slots__ = ("node", "succ", "i", "pending")

    def __init__(self, node: Node, succ: list[Node]):
        self.node = node
        self.succ = succ
        self.i = 0
        self.pending: Optional[Node] = None


class ProductSearch:
    """Single-use search object; run() may be called once.

    `label_hook`, when given, is called as hook(root_node, old_mask,
    new_mask) on every label update, which lets tests assert that a root's
    label set only grows.
    """

    def __init__(
        self,
        model: KripkeStructure,
        automaton: Lwaa,
        *,
        max_nodes: int = 10_000_000,
        label_hook: Optional[Callable[[Node, int, int], None]] = None,
    ):
        self.model = model
        self.automaton = automaton
        self.max_nodes = max_nodes
        self.label_hook = label_hook
        self.records: dict[Node, SearchRecord] = {}
        self.scc_stack: list[Node] = []
        self.frames: list[_Frame] = []
        self.stats = SearchStats()
        self._cnt = 0
        self._succ_cache: dict[tuple[int, int], tuple[int, ...]] = {}
        # project model valuations onto the automaton's proposition universe
        self._val_masks = []
        for valuation, _ in model.states:
            mask = 0
            for p in valuation:
                i = automaton.prop_index.get(p)
                if i is not None:
                    mask |= 1 << i
            self._val_masks.append(mask)

    # -- successor generation -------------------------------------------

    def _successors(self, node: Node) -> list[Node]:
        state, config = node
        key = (self._val_masks[state], config)
        configs = self._succ_cache.get(key)
        if configs is None:
            configs = successor_configs(self.automaton, key[0], config)
            self._succ_cache[key] = configs
        return [(t, c) for t in self.model.states[state][1] for c in configs]

    # -- Tarjan steps ----------------------------------------------------

    def _discover(self, node: Node) -> None:
        if len(self.records) >= self.max_nodes:
            raise ResourceLimitError(f"node budget of {self.max_nodes} exhausted")
        self.records[node] = SearchRecord(self._cnt, node)
        self._cnt += 1
        self.scc_stack.append(node)
        if len(self.scc_stack) > self.stats.max_scc_stack:
            self.stats.max_scc_stack = len(self.scc_stack)

    def _process_edge(self, node: Node, succ: Node) -> None:
        records = self.records
        rec_succ = records[succ]
        if rec_succ.in_comp:
            return
        rec = records[node]
        root = rec.root
        other_root = rec_succ.root
        if records[other_root].cnt < records[root].cnt:
            merged = records[other_root].labels | records[root].labels
            if self.label_hook and merged != records[other_root].labels:
                self.label_hook(other_root, records[other_root].labels, merged)
            records[other_root].labels = merged
            rec.root = other_root
            root = other_root
        root_rec = records[root]
        absent = self.automaton.cofinal_mask & ~node[1]
        updated = root_rec.labels | absent
        if updated != root_rec.labels:
            if self.label_hook:
                self.label_hook(root, root_rec.labels, updated)
            root_rec.labels = updated
        if root_rec.labels == self.automaton.cofinal_mask:
            raise _GoodCycle(node)

    def _pop_component(self, root: Node) -> None:
        records = self.records
        while True:
            member = self.scc_stack.pop()
            records[member].in_comp = True
            if member == root:
                break
        self.stats.scc_count += 1

    def run(self) -> Verdict:
        start = time.perf_counter()
        initial: Node = (self.model.initial, 1 << self.automaton.initial)
        frames = self.frames
        try:
            self._discover(initial)
            frames.append(_Frame(initial, self._successors(initial)))
            self.stats.max_dfs_depth = 1
            while frames:
                frame = frames[-1]
                if frame.pending is not None:
                    succ, frame.pending = frame.pending, None
                    self._process_edge(frame.node, succ)
                if frame.i < len(frame.succ):
                    succ = frame.succ[frame.i]
                    frame.i += 1
                    if succ not in self.records:
                        self._discover(succ)
                        frame.pending = succ
                        frames.append(_Frame(succ, self._successors(succ)))
                        if len(frames) > self.stats.max_dfs_depth:
                            self.stats.max_dfs_depth = len(frames)
                    else:
                        self._process_edge(frame.node, succ)
                else:
                    if self.records[frame.node].root == frame.node:
                        self._pop_component(frame.node)
                    frames.pop()
            lasso = None
        except _GoodCycle as good:
            lasso = self._extract_counterexample(good.node)
        finally:
            self.stats.nodes_seen = len(self.records)
            self.stats.max_dfs_depth = max(self.stats.max_dfs_depth, len(frames))
            self.stats.elapsed_ms = (time.perf_counter() - start) * 1000.0
        if lasso is None:
            return Verdict(holds=True, lasso=None, stats=self.stats)
        return Verdict(holds=False, lasso=lasso, stats=self.stats)

    # -- counterexample extraction ---------------------------------------

    def _extract_counterexample(self, current: Node) -> Lasso:
        """Rebuild an accepting cycle from the nodes still on the SCC stack.

        The open nodes are re-expanded with successors restricted to the
        open set; the strongly connected component of the current node must
        contain, for every co-final location, a member whose configuration
        omits it. The loop starts at the current node, greedily detours to
        one witness per co-final location, and closes by shortest path.
        """
        open_nodes = set(self.scc_stack)
        restricted: dict[Node, list[Node]] = {
            node: [s for s in self._successors(node) if s in open_nodes]
            for node in self.scc_stack
        }
        components = strongly_connected_components(
            self.scc_stack, restricted.__getitem__
        )
        component = next(c for c in components if current in c)
        members = set(component)
        if len(component) == 1 and current not in restricted[current]:
            raise SearchInconsistencyError(
                "accepting component has no internal edge"
            )
        for q in sorted(self.automaton.cofinal):
            if not any(not (config >> q) & 1 for _, config in members):
                raise SearchInconsistencyError(
                    f"no on-stack node omits co-final location {q}"
                )

        def shortest_path(source: Node, goal) -> list[Node]:
            """BFS inside the component; `goal` is a predicate over nodes.
            The path starts at source and has at least one edge, so the
            source itself is a legal goal (cycle closing)."""
            parents: dict[Node, Node] = {}
            frontier = [source]
            found = None
            while frontier and found is None:
                next_frontier = []
                for node in frontier:
                    for succ in restricted[node]:
                        if succ not in members or succ in parents:
                            continue
                        parents[succ] = node
                        if goal(succ):
                            found = succ
                            break
                        next_frontier.append(succ)
                    if found is not None:
                        break
                frontier = next_frontier
            if found is None:
                raise SearchInconsistencyError(
                    "required node unreachable inside accepting component"
                )
            path = [found]
            while True:
                parent = parents[path[-1]]
                path.append(parent)
                if parent == source:
                    break
            path.reverse()
            return path

        loop: list[Node] = [current]
        position = current
        for q in sorted(self.automaton.cofinal):
            if any(not (config >> q) & 1 for _, config in loop):
                continue
            path = shortest_path(position, lambda n: not (n[1] >> q) & 1)
            loop.extend(path[1:])
            position = path[-1]
        if position != current or len(loop) == 1:
            path = shortest_path(position, lambda n: n == current)
            loop.extend(path[1:-1])
        prefix_nodes = [f.node for f in self.frames[:-1]]
        return Lasso(
            prefix=tuple(s for s, _ in prefix_nodes),
            loop=tuple(s for s, _ in loop),
        )


def check_product(
    model: KripkeStructure,
    automaton: Lwaa,
    *,
    max_nodes: int = 10_000_000,
    label_hook: Optional[Callable[[Node, int, int], None]] = None,
) -> Verdict:
    """Run the product emptiness search once and return its verdict.

    Preconditions (caller's responsibility, normally met by construction):
    the automaton is weak and simple, and the model's transition relation
    is total.
    """
    return ProductSearch(
        model, automaton, max_nodes=max_nodes, label_hook=label_hook
    ).run()
