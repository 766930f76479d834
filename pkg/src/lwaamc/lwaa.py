"""Linear weak alternating automata built from X-normalized NNF formulas.

Each location carries its transition relation as a list of DNF clauses; a
clause is a guard over propositions plus the set of locations it activates.
Configurations (sets of simultaneously active locations) are represented as
int bitmasks over the dense location indices, so membership, union and
subset tests are single machine operations.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Collection, Iterable

from .ltl import (
    And,
    FalseConst,
    Formula,
    Lit,
    Next,
    Or,
    Release,
    TrueConst,
    Until,
    display_name,
    is_nnf,
    is_x_normalized,
    props_of,
    subformulas,
)
from .scc import strongly_connected_components


class ClauseLimitError(RuntimeError):
    """DNF expansion of the transition formulas exceeded the clause budget."""


class AutomatonTooLarge(ValueError):
    """Automaton exceeds the size bound of an exhaustive check."""


@dataclass(frozen=True)
class Clause:
    """One DNF clause of a transition formula.

    A state s enables the clause iff pos is a subset of s and neg is
    disjoint from s; the clause then activates exactly `targets`.
    """

    pos: frozenset[str]
    neg: frozenset[str]
    targets: frozenset[int]


# type alias for readability; a configuration is a bitmask over location ids
Configuration = int


def config_of(ids: Iterable[int]) -> Configuration:
    mask = 0
    for i in ids:
        mask |= 1 << i
    return mask


def config_ids(mask: Configuration) -> tuple[int, ...]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return tuple(out)


class Lwaa:
    """Immutable automaton: locations with DNF clause lists, one initial
    location, and a co-final set subject to co-Buechi acceptance."""

    def __init__(
        self,
        props: Iterable[str],
        names: Iterable[str],
        clauses: Iterable[Iterable[Clause]],
        initial: int,
        cofinal: Iterable[int],
        formulas: Iterable[Formula] | None = None,
    ):
        self.props: tuple[str, ...] = tuple(props)
        self.names: tuple[str, ...] = tuple(names)
        self.clauses: tuple[tuple[Clause, ...], ...] = tuple(
            tuple(cs) for cs in clauses
        )
        self.initial = initial
        self.cofinal: frozenset[int] = frozenset(cofinal)
        self.formulas: tuple[Formula, ...] | None = (
            tuple(formulas) if formulas is not None else None
        )
        n = len(self.names)
        if len(self.clauses) != n:
            raise ValueError("names and clause lists disagree in length")
        if not (0 <= initial < n):
            raise ValueError(f"initial location {initial} out of range")
        bad = [q for q in self.cofinal if not (0 <= q < n)]
        if bad:
            raise ValueError(f"co-final locations out of range: {bad}")
        self.prop_index: dict[str, int] = {p: i for i, p in enumerate(self.props)}
        if len(self.prop_index) != len(self.props):
            raise ValueError("duplicate proposition names")
        self.cofinal_mask: int = config_of(self.cofinal)
        # per-location (pos_mask, neg_mask, target_mask) triples for fast eval
        self._tables: list[list[tuple[int, int, int]]] = []
        for q, cs in enumerate(self.clauses):
            table = []
            for c in cs:
                for t in c.targets:
                    if not (0 <= t < n):
                        raise ValueError(f"clause of location {q} targets {t}")
                table.append(
                    (
                        self._mask_of(c.pos),
                        self._mask_of(c.neg),
                        config_of(c.targets),
                    )
                )
            self._tables.append(table)

    def _mask_of(self, names: Collection[str]) -> int:
        mask = 0
        for p in names:
            i = self.prop_index.get(p)
            if i is None:
                raise ValueError(f"unknown proposition {p!r}")
            mask |= 1 << i
        return mask

    @property
    def n_locations(self) -> int:
        return len(self.names)

    def valuation_mask(self, valuation: Collection[str]) -> int:
        """Bitmask over the proposition universe for a set of true props."""
        return self._mask_of(valuation)

    def location_edges(self, q: int) -> tuple[int, ...]:
        """Locations activated by some clause of q, ascending."""
        mask = 0
        for _, _, tgt in self._tables[q]:
            mask |= tgt
        return config_ids(mask)

    def occurring_props(self) -> tuple[str, ...]:
        """Propositions actually read by some guard, in universe order."""
        mask = 0
        for table in self._tables:
            for pos, neg, _ in table:
                mask |= pos | neg
        return tuple(p for i, p in enumerate(self.props) if (mask >> i) & 1)

    def dump(self) -> str:
        """Stable textual export, one line per clause."""
        lines = []
        for q, name in enumerate(self.names):
            tag = " [cofinal]" if q in self.cofinal else ""
            head = f'loc {q} "{name}"{tag}:'
            if not self.clauses[q]:
                lines.append(f"{head} blocked")
                continue
            for c in self.clauses[q]:
                lits = [f"+{p}" for p in sorted(c.pos)]
                lits += [f"-{p}" for p in sorted(c.neg)]
                guard = " ".join(lits) if lits else "true"
                tgts = "{" + ",".join(str(t) for t in sorted(c.targets)) + "}"
                lines.append(f"{head} {guard} -> {tgts}")
        return "\n".join(lines) + "\n"


# --- construction ----------------------------------------------------------

_TmpClause = tuple[frozenset[str], frozenset[str], frozenset[Formula]]


def build_lwaa(
    formula: Formula,
    props: Iterable[str],
    *,
    enforce_x_normalized: bool = True,
    clause_limit: int = 10**6,
) -> Lwaa:
    """Translate an X-normalized NNF formula into its LWAA.

    Locations materialize for the formula itself and for every X/U/V
    subformula (plus literals reached through X); And/Or subformulas are
    inlined into their parents' clause lists. Co-final locations are
    exactly the Until locations. Unreachable locations never materialize.
    """
    if not is_nnf(formula):
        raise ValueError("build_lwaa requires an NNF formula")
    if enforce_x_normalized and not is_x_normalized(formula):
        raise ValueError("build_lwaa requires an X-normalized formula")
    universe = tuple(props)
    known = set(universe)
    missing = props_of(formula) - known
    if missing:
        raise ValueError(f"formula uses propositions outside the universe: {sorted(missing)}")

    budget = [clause_limit]
    cache: dict[Formula, list[_TmpClause]] = {}

    def spend(n: int) -> None:
        budget[0] -= n
        if budget[0] < 0:
            raise ClauseLimitError(
                f"transition DNF exceeded {clause_limit} clauses"
            )

    def dedup(cs: list[_TmpClause]) -> list[_TmpClause]:
        seen: set[_TmpClause] = set()
        out = []
        for c in cs:
            if c not in seen:
                seen.add(c)
                out.append(c)
        return out

    def conj(left: list[_TmpClause], right: list[_TmpClause]) -> list[_TmpClause]:
        spend(len(left) * len(right))  # cap the work, not just surviving clauses
        out = []
        for p1, n1, t1 in left:
            for p2, n2, t2 in right:
                pos = p1 | p2
                neg = n1 | n2
                if pos & neg:
                    continue  # contradictory guard, drop
                out.append((pos, neg, t1 | t2))
        return dedup(out)

    def dnf(f: Formula) -> list[_TmpClause]:
        hit = cache.get(f)
        if hit is not None:
            return hit
        none: frozenset = frozenset()
        match f:
            case TrueConst():
                result = [(none, none, none)]
            case FalseConst():
                result = []
            case Lit(name, positive):
                if positive:
                    result = [(frozenset([name]), none, none)]
                else:
                    result = [(none, frozenset([name]), none)]
            case Next(child):
                result = [(none, none, frozenset([child]))]
            case And(a, b):
                result = conj(dnf(a), dnf(b))
            case Or(a, b):
                result = dedup(dnf(a) + dnf(b))
            case Until(a, b):
                self_clause = [(none, none, frozenset([f]))]
                result = dedup(dnf(b) + conj(dnf(a), self_clause))
            case Release(a, b):
                self_clause = [(none, none, frozenset([f]))]
                result = conj(dnf(b), dedup(dnf(a) + self_clause))
            case _:
                raise ValueError(f"not an NNF formula: {f!r}")
        spend(len(result))
        cache[f] = result
        return result

    # discover reachable locations from the initial formula
    location_set: set[Formula] = set()
    worklist = [formula]
    while worklist:
        f = worklist.pop()
        if f in location_set:
            continue
        location_set.add(f)
        for _, _, targets in dnf(f):
            worklist.extend(targets)

    ordered = [g for g in subformulas(formula) if g in location_set]
    assert len(ordered) == len(location_set)
    index = {g: i for i, g in enumerate(ordered)}

    clause_lists = []
    for g in ordered:
        clause_lists.append(
            [
                Clause(pos, neg, frozenset(index[t] for t in targets))
                for pos, neg, targets in dnf(g)
            ]
        )
    cofinal = [i for i, g in enumerate(ordered) if isinstance(g, Until)]
    return Lwaa(
        props=universe,
        names=[display_name(g) for g in ordered],
        clauses=clause_lists,
        initial=index[formula],
        cofinal=cofinal,
        formulas=ordered,
    )


# --- structural checks -----------------------------------------------------

def check_weak(a: Lwaa) -> bool:
    """True iff the location graph has no cycle besides self-loops, i.e.
    reachability between locations is a partial order."""
    comps = strongly_connected_components(
        range(a.n_locations), a.location_edges
    )
    return all(len(c) == 1 for c in comps)


@dataclass(frozen=True)
class SimplicityWitness:
    """A concrete violation of the simplicity condition.

    Activating co-final location q from q_prime under state s (alongside x)
    while q itself can be exited to y leaves no clause of q_prime satisfied
    by s with targets inside x | y.
    """

    q: int
    q_prime: int
    state: frozenset[str]
    x: frozenset[int]
    y: frozenset[int]


def find_simplicity_witness(
    a: Lwaa,
    *,
    max_locations: int = 12,
    max_props: int = 6,
) -> SimplicityWitness | None:
    """Exhaustive simplicity check; None means the automaton is simple.

    Only propositions read by some guard are enumerated. Candidate sets X
    and Y range over clause target sets, which is equivalent to quantifying
    over all subsets of Q \\ {q}: locations occur positively in transition
    formulas, so a violation for arbitrary X, Y implies one for the minimal
    clause-derived pair, and conversely.
    """
    occ = a.occurring_props()
    if a.n_locations > max_locations:
        raise AutomatonTooLarge(
            f"{a.n_locations} locations exceeds bound {max_locations}"
        )
    if len(occ) > max_props:
        raise AutomatonTooLarge(
            f"{len(occ)} occurring propositions exceeds bound {max_props}"
        )
    occ_bits = [1 << a.prop_index[p] for p in occ]

    def enabled(table, s_mask):
        return [
            (pos, neg, tgt)
            for pos, neg, tgt in table
            if not (pos & ~s_mask) and not (neg & s_mask)
        ]

    for q in sorted(a.cofinal):
        q_bit = 1 << q
        table_q = a._tables[q]
        for q_prime in range(a.n_locations):
            table_qp = a._tables[q_prime]
            for choice in range(1 << len(occ)):
                s_mask = 0
                for i, bit in enumerate(occ_bits):
                    if (choice >> i) & 1:
                        s_mask |= bit
                en_qp = enabled(table_qp, s_mask)
                premise1 = [t for t in en_qp if t[2] & q_bit]
                if not premise1:
                    continue
                premise2 = [
                    t for t in enabled(table_q, s_mask) if not (t[2] & q_bit)
                ]
                if not premise2:
                    continue
                for _, _, tgt_qp in premise1:
                    x_mask = tgt_qp & ~q_bit
                    for _, _, tgt_q in premise2:
                        union = x_mask | tgt_q
                        if not any(
                            not (tgt & ~union) for _, _, tgt in en_qp
                        ):
                            state = frozenset(
                                p for p, bit in zip(occ, occ_bits) if s_mask & bit
                            )
                            return SimplicityWitness(
                                q=q,
                                q_prime=q_prime,
                                state=state,
                                x=frozenset(config_ids(x_mask)),
                                y=frozenset(config_ids(tgt_q)),
                            )
    return None


def check_simple(a: Lwaa, **bounds) -> bool:
    """True iff exiting a co-final location never forces re-activating it
    (the condition that lets acceptance be judged on configurations alone)."""
    return find_simplicity_witness(a, **bounds) is None


# --- runtime transition evaluation ------------------------------------------

def enabled_clauses(a: Lwaa, s: Collection[str] | int, q: int) -> list[Clause]:
    """Clauses of location q whose guard passes under state s, stored order."""
    s_mask = s if isinstance(s, int) else a.valuation_mask(s)
    out = []
    for clause, (pos, neg, _) in zip(a.clauses[q], a._tables[q]):
        if not (pos & ~s_mask) and not (neg & s_mask):
            out.append(clause)
    return out


def _min_antichain(masks: list[int]) -> list[int]:
    """Subset-minimal elements, ascending by mask value."""
    kept: list[int] = []
    for m in sorted(set(masks), key=lambda v: (v.bit_count(), v)):
        if not any(k & ~m == 0 for k in kept):
            kept.append(m)
    kept.sort()
    return kept


def successor_configs(
    a: Lwaa, s: Collection[str] | int, config: Configuration
) -> tuple[Configuration, ...]:
    """Minimal successor configurations of `config` under state s.

    Every activation choice is a union, over the active locations, of the
    target set of one enabled clause; only subset-minimal unions are kept.
    Returns () iff some active location has no enabled clause (the
    automaton blocks); succ(s, empty) = (empty,).
    """
    s_mask = s if isinstance(s, int) else a.valuation_mask(s)
    per_location: list[list[int]] = []
    remaining = config
    while remaining:
        low = remaining & -remaining
        q = low.bit_length() - 1
        remaining ^= low
        options = [
            tgt
            for pos, neg, tgt in a._tables[q]
            if not (pos & ~s_mask) and not (neg & s_mask)
        ]
        if not options:
            return ()
        # a per-location superset can never contribute a minimal union
        per_location.append(_min_antichain(options))
    combos = {0}
    for options in per_location:
        combos = {c | t for c in combos for t in options}
    return tuple(_min_antichain(list(combos)))
