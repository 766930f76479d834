"""Independent ground truth for the product search engine.

Three pieces: direct LTL evaluation on ultimately periodic words, a
brute-force emptiness check that materializes the whole reachable product
and enumerates all its SCCs (no labels, no early exit), and a validator
for returned counterexample lassos.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Collection

from .kripke import KripkeStructure
from .ltl import (
    And,
    FalseConst,
    Finally,
    Formula,
    Globally,
    Implies,
    Lit,
    Next,
    Not,
    Or,
    Prop,
    Release,
    TrueConst,
    Until,
    props_of,
    subformulas,
)
from .lwaa import Lwaa, successor_configs
from .scc import strongly_connected_components


class ProductLimitError(RuntimeError):
    """Reachable product grew past the node budget."""


@dataclass(frozen=True)
class LassoWord:
    """The infinite word prefix . loop^omega; the loop must be nonempty."""

    prefix: tuple[frozenset[str], ...]
    loop: tuple[frozenset[str], ...]

    def __post_init__(self):
        if not self.loop:
            raise ValueError("lasso word needs a nonempty loop")


def _fixpoint_row(a_row, b_row, nxt, op_until: bool) -> list[bool]:
    """Solve r[i] = b[i] op (a[i] and/or r[nxt[i]]) over the lasso shape.

    Until is the least fixpoint (start all-false), Release the greatest
    (start all-true). Backward sweeps stabilize within two passes on an
    ultimately periodic word; a third confirms, and anything more is a bug.
    """
    n = len(a_row)
    row = [not op_until] * n
    for sweep in range(3):
        changed = False
        for i in range(n - 1, -1, -1):
            if op_until:
                v = b_row[i] or (a_row[i] and row[nxt[i]])
            else:
                v = b_row[i] and (a_row[i] or row[nxt[i]])
            if v != row[i]:
                row[i] = v
                changed = True
        if not changed:
            return row
        if sweep == 2:
            raise RuntimeError("fixpoint failed to converge in two sweeps")
    return row


def eval_lasso(
    formula: Formula, word: LassoWord, props: Collection[str] | None = None
) -> bool:
    """Does prefix . loop^omega satisfy the formula?

    Truth-tables every subformula over the positions of prefix and loop
    with wrap-around; U and V rows are solved by fixpoint sweeps. Accepts
    surface sugar (F, G, ->, !) as well as NNF literals. When `props` is
    given, formula propositions outside it raise ValueError.
    """
    if props is not None:
        unknown = props_of(formula) - set(props)
        if unknown:
            raise ValueError(f"unknown propositions: {sorted(unknown)}")
    positions = list(word.prefix) + list(word.loop)
    n = len(positions)
    loop_start = len(word.prefix)
    nxt = [i + 1 for i in range(n)]
    nxt[n - 1] = loop_start

    rows: dict[Formula, list[bool]] = {}
    for f in subformulas(formula):
        match f:
            case TrueConst():
                row = [True] * n
            case FalseConst():
                row = [False] * n
            case Prop(name):
                row = [name in s for s in positions]
            case Lit(name, positive):
                row = [(name in s) == positive for s in positions]
            case Not(c):
                row = [not v for v in rows[c]]
            case And(a, b):
                row = [x and y for x, y in zip(rows[a], rows[b])]
            case Or(a, b):
                row = [x or y for x, y in zip(rows[a], rows[b])]
            case Implies(a, b):
                row = [(not x) or y for x, y in zip(rows[a], rows[b])]
            case Next(c):
                child = rows[c]
                row = [child[nxt[i]] for i in range(n)]
            case Until(a, b):
                row = _fixpoint_row(rows[a], rows[b], nxt, op_until=True)
            case Release(a, b):
                row = _fixpoint_row(rows[a], rows[b], nxt, op_until=False)
            case Finally(c):
                row = _fixpoint_row([True] * n, rows[c], nxt, op_until=True)
            case Globally(c):
                row = _fixpoint_row([False] * n, rows[c], nxt, op_until=False)
            case _:
                raise TypeError(f"not a formula: {f!r}")
        rows[f] = row
    return rows[formula][0]


def build_product(
    model: KripkeStructure, automaton: Lwaa, *, max_nodes: int = 2_000_000
) -> dict[tuple[int, int], list[tuple[int, int]]]:
    """Materialize the full reachable product graph as an adjacency map.

    Nodes are (state id, configuration mask) pairs; the adjacency order is
    deterministic (model successor order, then configuration order).
    """
    val_masks = []
    for valuation, _ in model.states:
        mask = 0
        for p in valuation:
            i = automaton.prop_index.get(p)
            if i is not None:
                mask |= 1 << i
        val_masks.append(mask)

    start = (model.initial, 1 << automaton.initial)
    adjacency: dict[tuple[int, int], list[tuple[int, int]]] = {}
    queue = [start]
    adjacency[start] = []
    head = 0
    while head < len(queue):
        node = queue[head]
        head += 1
        state, config = node
        configs = successor_configs(automaton, val_masks[state], config)
        succs = [
            (t, c) for t in model.states[state][1] for c in configs
        ]
        adjacency[node] = succs
        for nxt_node in succs:
            if nxt_node not in adjacency:
                if len(adjacency) >= max_nodes:
                    raise ProductLimitError(
                        f"product exceeded {max_nodes} nodes"
                    )
                adjacency[nxt_node] = []
                queue.append(nxt_node)
    return adjacency


def scc_oracle(
    model: KripkeStructure, automaton: Lwaa, *, max_nodes: int = 2_000_000
) -> bool:
    """Is the product language nonempty? Brute force, by definition.

    Enumerates every SCC of the full reachable product and looks for one
    that contains at least one edge and, for every co-final location, some
    node whose configuration omits it. Shares only the successor
    computation with the search engine; traversal and the acceptance test
    are independent code paths.
    """
    adjacency = build_product(model, automaton, max_nodes=max_nodes)
    components = strongly_connected_components(adjacency, adjacency.__getitem__)
    cofinal = sorted(automaton.cofinal)
    for component in components:
        if len(component) == 1:
            node = component[0]
            if node not in adjacency[node]:
                continue
        members = component
        if all(
            any(not (config >> q) & 1 for _, config in members) for q in cofinal
        ):
            return True
    return False


def validate_counterexample(formula: Formula, model: KripkeStructure, lasso) -> bool:
    """Accept a lasso iff it is a real initial path-plus-cycle of the model
    whose word satisfies the negation of the (un-negated) property."""
    prefix = tuple(lasso.prefix)
    loop = tuple(lasso.loop)
    if not loop:
        return False
    path = prefix + loop
    for s in path:
        if not (0 <= s < model.n_states):
            return False
    if path[0] != model.initial:
        return False
    for a, b in zip(path, path[1:]):
        if b not in model.successors(a):
            return False
    if loop[0] not in model.successors(loop[-1]):
        return False
    word = LassoWord(
        prefix=tuple(model.valuation(s) for s in prefix),
        loop=tuple(model.valuation(s) for s in loop),
    )
    return eval_lasso(Not(formula), word, props=model.props)
