"""Finite Kripke structures: .kts text format plus benchmark generators.

A structure is a total transition system over dense state ids with one
initial state; each state carries the set of propositions true in it.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass, field


class KtsFormatError(ValueError):
    """Malformed or inconsistent .kts input."""


@dataclass
class KripkeStructure:
    props: tuple[str, ...]
    # per state: (valuation, successor ids); the relation must be total
    states: list[tuple[frozenset[str], tuple[int, ...]]]
    initial: int
    # diagnostic only: ids of states completed with a stutter self-loop
    completed: frozenset[int] = field(default_factory=frozenset, compare=False)

    @property
    def n_states(self) -> int:
        return len(self.states)

    def valuation(self, state: int) -> frozenset[str]:
        return self.states[state][0]

    def successors(self, state: int) -> tuple[int, ...]:
        return self.states[state][1]

    def check(self) -> None:
        """Raise KtsFormatError if any structural invariant is broken."""
        known = set(self.props)
        if len(known) != len(self.props):
            raise KtsFormatError("duplicate proposition names")
        if not (0 <= self.initial < self.n_states):
            raise KtsFormatError(f"initial state {self.initial} out of range")
        for i, (valuation, succs) in enumerate(self.states):
            extra = valuation - known
            if extra:
                raise KtsFormatError(
                    f"state {i} uses undeclared propositions: {sorted(extra)}"
                )
            if not succs:
                raise KtsFormatError(f"state {i} has no successor")
            for t in succs:
                if not (0 <= t < self.n_states):
                    raise KtsFormatError(f"state {i} has dangling successor {t}")


# --- .kts text format --------------------------------------------------------

_STATE_RE = re.compile(
    r"state\s+(?P<id>\d+)\s*\{(?P<props>[^}]*)\}\s*(?:->\s*(?P<succ>.*))?$"
)


def parse_kts(text: str, complete_deadlocks: bool = False) -> KripkeStructure:
    """Parse the line-oriented .kts format.

    Layout: a `props` line, an `init` line, then one `state` line per state.
    `#` starts a comment. State ids may be sparse; they are renumbered
    densely in ascending order. States without successors are an error
    unless `complete_deadlocks` is set, in which case they get a self-loop.
    """
    props: tuple[str, ...] | None = None
    init_id: int | None = None
    raw: dict[int, tuple[frozenset[str], list[int]]] = {}

    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("props"):
            if props is not None:
                raise KtsFormatError(f"line {lineno}: duplicate props line")
            props = tuple(line.split()[1:])
        elif line.startswith("init"):
            if init_id is not None:
                raise KtsFormatError(f"line {lineno}: duplicate init line")
            parts = line.split()
            if len(parts) != 2 or not parts[1].isdigit():
                raise KtsFormatError(f"line {lineno}: malformed init line")
            init_id = int(parts[1])
        elif line.startswith("state"):
            if props is None:
                raise KtsFormatError(f"line {lineno}: state before props line")
            m = _STATE_RE.match(line)
            if m is None:
                raise KtsFormatError(f"line {lineno}: malformed state line")
            sid = int(m.group("id"))
            if sid in raw:
                raise KtsFormatError(f"line {lineno}: duplicate state id {sid}")
            valuation = frozenset(m.group("props").split())
            unknown = valuation - set(props)
            if unknown:
                raise KtsFormatError(
                    f"line {lineno}: unknown propositions {sorted(unknown)}"
                )
            succ_text = m.group("succ") or ""
            succs = []
            for tok in succ_text.split():
                if not tok.isdigit():
                    raise KtsFormatError(
                        f"line {lineno}: bad successor id {tok!r}"
                    )
                succs.append(int(tok))
            raw[sid] = (valuation, succs)
        else:
            raise KtsFormatError(f"line {lineno}: unrecognized line {line!r}")

    if props is None:
        raise KtsFormatError("missing props line")
    if init_id is None:
        raise KtsFormatError("missing init line")
    if not raw:
        raise KtsFormatError("no states declared")
    if init_id not in raw:
        raise KtsFormatError(f"init references undeclared state {init_id}")

    order = sorted(raw)
    remap = {sid: i for i, sid in enumerate(order)}
    states: list[tuple[frozenset[str], tuple[int, ...]]] = []
    completed = set()
    for sid in order:
        valuation, succs = raw[sid]
        for t in succs:
            if t not in remap:
                raise KtsFormatError(
                    f"state {sid} has dangling successor {t}"
                )
        if not succs:
            if not complete_deadlocks:
                raise KtsFormatError(
                    f"state {sid} deadlocks (use deadlock completion to add a self-loop)"
                )
            states.append((valuation, (remap[sid],)))
            completed.add(remap[sid])
        else:
            states.append((valuation, tuple(remap[t] for t in succs)))
    k = KripkeStructure(
        props=props,
        states=states,
        initial=remap[init_id],
        completed=frozenset(completed),
    )
    k.check()
    return k


def serialize_kts(k: KripkeStructure) -> str:
    """Inverse of parse_kts up to dense renumbering: parse(serialize(k))
    reproduces k."""
    order = {p: i for i, p in enumerate(k.props)}
    lines = ["props " + " ".join(k.props), f"init {k.initial}"]
    for i, (valuation, succs) in enumerate(k.states):
        names = " ".join(sorted(valuation, key=order.__getitem__))
        arrow = " ".join(str(t) for t in succs)
        lines.append(f"state {i} {{{names}}} -> {arrow}")
    return "\n".join(lines) + "\n"


# --- benchmark generators ----------------------------------------------------

def _explore(initial, moves, valuation_of):
    """BFS a transition relation given as a successor function; returns
    (states, id_of_initial_is_0, completed_ids). Successor order follows the
    order `moves` yields them; deadlocked states are reported, not fixed."""
    ids = {initial: 0}
    queue = [initial]
    adjacency: list[list[int]] = []
    head = 0
    while head < len(queue):
        state = queue[head]
        head += 1
        succs = []
        for nxt in moves(state):
            if nxt not in ids:
                ids[nxt] = len(queue)
                queue.append(nxt)
            succs.append(ids[nxt])
        adjacency.append(succs)
    states = []
    for i, state in enumerate(queue):
        states.append((valuation_of(state), adjacency[i]))
    return states


_THINK, _HAS_FIRST, _EAT = 0, 1, 2


def gen_dining(n: int, variant: str = "deadlock") -> KripkeStructure:
    """Interleaved dining philosophers around a ring of n forks.

    Each philosopher thinks, picks up a first fork when free, picks up the
    second when free, eats, then releases both. In the `deadlock` variant
    every philosopher grabs the right-hand fork first, so the all-hold-one
    state is reachable and gets a stutter self-loop. In the `fair` variant
    the last philosopher grabs the left-hand fork first, which breaks the
    circular wait. Propositions: hasFork_i (philosopher i holds at least
    one fork) and eat_1.
    """
    if n < 2:
        raise ValueError("need at least 2 philosophers")
    if variant not in ("deadlock", "fair"):
        raise ValueError(f"unknown variant {variant!r}")

    def forks(i: int) -> tuple[int, int]:
        right, left = i, (i + 1) % n
        if variant == "fair" and i == n - 1:
            return left, right
        return right, left

    def held(state: tuple[int, ...]) -> set[int]:
        taken = set()
        for i, local in enumerate(state):
            first, second = forks(i)
            if local >= _HAS_FIRST:
                taken.add(first)
            if local == _EAT:
                taken.add(second)
        return taken

    def moves(state: tuple[int, ...]):
        taken = held(state)
        for i, local in enumerate(state):
            first, second = forks(i)
            if local == _THINK and first not in taken:
                yield state[:i] + (_HAS_FIRST,) + state[i + 1 :]
            elif local == _HAS_FIRST and second not in taken:
                yield state[:i] + (_EAT,) + state[i + 1 :]
            elif local == _EAT:
                yield state[:i] + (_THINK,) + state[i + 1 :]

    def valuation_of(state: tuple[int, ...]) -> frozenset[str]:
        names = {
            f"hasFork_{i + 1}" for i, local in enumerate(state) if local != _THINK
        }
        if state[0] == _EAT:
            names.add("eat_1")
        return frozenset(names)

    states = _explore((_THINK,) * n, moves, valuation_of)
    completed = set()
    fixed = []
    for i, (valuation, succs) in enumerate(states):
        if not succs:
            if variant == "fair":
                raise AssertionError("fair variant reached a deadlock state")
            succs = [i]
            completed.add(i)
        fixed.append((valuation, tuple(succs)))
    props = tuple(f"hasFork_{i + 1}" for i in range(n)) + ("eat_1",)
    k = KripkeStructure(
        props=props, states=fixed, initial=0, completed=frozenset(completed)
    )
    k.check()
    return k


_NONCRIT, _WAIT, _CRIT = 0, 1, 2


def gen_semaphore(n: int) -> KripkeStructure:
    """n processes competing for one binary semaphore, interleaved.

    A process cycles noncritical -> waiting -> critical -> noncritical and
    enters only while the token is free; a sticky per-process bit records
    that it has been critical at least once. Propositions: canenter_i
    (waiting while the token is free), enter_i (critical), allcrit (every
    history bit set). The scheduler is plain nondeterministic interleaving;
    fairness, when wanted, belongs in the checked formula.
    """
    if n < 1:
        raise ValueError("need at least 1 process")

    def token_free(locals_: tuple[int, ...]) -> bool:
        return all(l != _CRIT for l in locals_)

    def moves(state):
        locals_, bits = state
        free = token_free(locals_)
        for i, local in enumerate(locals_):
            if local == _NONCRIT:
                yield locals_[:i] + (_WAIT,) + locals_[i + 1 :], bits
            elif local == _WAIT and free:
                new_bits = bits[:i] + (True,) + bits[i + 1 :]
                yield locals_[:i] + (_CRIT,) + locals_[i + 1 :], new_bits
            elif local == _CRIT:
                yield locals_[:i] + (_NONCRIT,) + locals_[i + 1 :], bits

    def valuation_of(state) -> frozenset[str]:
        locals_, bits = state
        free = token_free(locals_)
        names = set()
        for i, local in enumerate(locals_):
            if local == _WAIT and free:
                names.add(f"canenter_{i + 1}")
            if local == _CRIT:
                names.add(f"enter_{i + 1}")
        if all(bits):
            names.add("allcrit")
        return frozenset(names)

    initial = ((_NONCRIT,) * n, (False,) * n)
    states = [
        (valuation, tuple(succs))
        for valuation, succs in _explore(initial, moves, valuation_of)
    ]
    props = (
        tuple(f"canenter_{i + 1}" for i in range(n))
        + tuple(f"enter_{i + 1}" for i in range(n))
        + ("allcrit",)
    )
    k = KripkeStructure(props=props, states=states, initial=0)
    k.check()
    return k


_PROP_LETTERS = "pqrstuvwxyz"


def random_prop_names(n: int) -> tuple[str, ...]:
    names = list(_PROP_LETTERS[:n])
    names += [f"p{i}" for i in range(len(names), n)]
    return tuple(names)


def gen_random(
    seed: int, n_states: int, n_props: int, branching: int
) -> KripkeStructure:
    """Seed-deterministic random structure: valuations uniform over prop
    subsets, each state with between 1 and `branching` successors."""
    if n_states < 1:
        raise ValueError("need at least 1 state")
    if branching < 1:
        raise ValueError("branching must be at least 1")
    rng = random.Random(seed)
    props = random_prop_names(n_props)
    states = []
    for _ in range(n_states):
        bits = rng.getrandbits(n_props) if n_props else 0
        valuation = frozenset(p for i, p in enumerate(props) if (bits >> i) & 1)
        fanout = rng.randint(1, branching)
        succs = tuple(sorted({rng.randrange(n_states) for _ in range(fanout)}))
        states.append((valuation, succs))
    k = KripkeStructure(props=props, states=states, initial=0)
    k.check()
    return k
