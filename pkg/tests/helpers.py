"""Shared test utilities: random generators and independent oracles.

The evaluators and enumerations here deliberately re-derive results from
first principles (bounded quantifiers, exhaustive subset scans, raw clause
combinations) so that library code is checked against a second route, not
against itself.
"""

from __future__ import annotations

import itertools
import random

from lwaamc import ltl
from lwaamc.kripke import KripkeStructure, gen_random
from lwaamc.lwaa import Lwaa, build_lwaa, config_ids, enabled_clauses
from lwaamc.oracle import LassoWord


def random_formula(rng: random.Random, max_size: int, props) -> ltl.Formula:
    """Random surface formula with at most max_size nodes."""

    def gen(budget: int) -> ltl.Formula:
        if budget <= 1:
            leaf = rng.randrange(4)
            if leaf == 0:
                return ltl.TRUE
            if leaf == 1:
                return ltl.FALSE
            return ltl.Prop(rng.choice(props))
        kind = rng.randrange(10)
        if kind == 0:
            return ltl.Not(gen(budget - 1))
        if kind == 1:
            return ltl.Next(gen(budget - 1))
        if kind == 2:
            return ltl.Finally(gen(budget - 1))
        if kind == 3:
            return ltl.Globally(gen(budget - 1))
        left = rng.randint(1, budget - 2) if budget > 2 else 1
        a, b = gen(left), gen(budget - 1 - left)
        if kind == 4:
            return ltl.And(a, b)
        if kind == 5:
            return ltl.Or(a, b)
        if kind == 6:
            return ltl.Implies(a, b)
        if kind in (7, 8):
            return ltl.Until(a, b)
        return ltl.Release(a, b)

    return gen(rng.randint(1, max_size))


def random_word(
    rng: random.Random, props, max_prefix: int = 3, max_loop: int = 4
) -> LassoWord:
    def stretch(k: int):
        return tuple(
            frozenset(p for p in props if rng.random() < 0.5) for _ in range(k)
        )

    return LassoWord(
        prefix=stretch(rng.randint(0, max_prefix)),
        loop=stretch(rng.randint(1, max_loop)),
    )


def random_structure(rng: random.Random, max_states: int = 6) -> KripkeStructure:
    return gen_random(
        seed=rng.randrange(1 << 30),
        n_states=rng.randint(1, max_states),
        n_props=3,
        branching=rng.randint(1, 3),
    )


def negated_automaton(formula: ltl.Formula, props) -> Lwaa:
    return build_lwaa(ltl.x_normalize(ltl.to_nnf(formula, negate=True)), props)


def positive_automaton(formula: ltl.Formula, props) -> Lwaa:
    return build_lwaa(ltl.x_normalize(ltl.to_nnf(formula)), props)


def single_state_structure(valuation, props) -> KripkeStructure:
    return KripkeStructure(
        props=tuple(props), states=[(frozenset(valuation), (0,))], initial=0
    )


# --- independent oracles -----------------------------------------------------

def naive_eval(formula: ltl.Formula, word: LassoWord) -> bool:
    """Evaluate by expanding temporal operators as bounded quantifiers.

    On an ultimately periodic word every U/V settles within
    |prefix| + 2 * |loop| * size(formula) steps, so scanning that horizon
    from any position within the first period is exact.
    """
    n_pre, n_loop = len(word.prefix), len(word.loop)
    horizon = n_pre + 2 * n_loop * ltl.size(formula)

    def val_at(i: int):
        if i < n_pre:
            return word.prefix[i]
        return word.loop[(i - n_pre) % n_loop]

    def ev(g: ltl.Formula, i: int) -> bool:
        match g:
            case ltl.TrueConst():
                return True
            case ltl.FalseConst():
                return False
            case ltl.Prop(name):
                return name in val_at(i)
            case ltl.Lit(name, positive):
                return (name in val_at(i)) == positive
            case ltl.Not(c):
                return not ev(c, i)
            case ltl.And(a, b):
                return ev(a, i) and ev(b, i)
            case ltl.Or(a, b):
                return ev(a, i) or ev(b, i)
            case ltl.Implies(a, b):
                return (not ev(a, i)) or ev(b, i)
            case ltl.Next(c):
                return ev(c, i + 1)
            case ltl.Until(a, b):
                for k in range(i, i + horizon):
                    if ev(b, k):
                        return True
                    if not ev(a, k):
                        return False
                return False
            case ltl.Release(a, b):
                for k in range(i, i + horizon):
                    if not ev(b, k):
                        return False
                    if ev(a, k):
                        return True
                return True
            case ltl.Finally(c):
                return any(ev(c, k) for k in range(i, i + horizon))
            case ltl.Globally(c):
                return all(ev(c, k) for k in range(i, i + horizon))
        raise TypeError(f"not a formula: {g!r}")

    return ev(formula, 0)


def clause_models(a: Lwaa, s: frozenset, active: frozenset, q: int) -> bool:
    """Does valuation s together with active locations satisfy some clause
    of location q? Evaluated from the public clause view, not the masks."""
    for cl in a.clauses[q]:
        if cl.pos <= s and not (cl.neg & s) and cl.targets <= active:
            return True
    return False


def naive_simplicity(a: Lwaa) -> bool:
    """Literal subset enumeration of the simplicity condition."""
    occ = a.occurring_props()
    locations = range(a.n_locations)
    for q in sorted(a.cofinal):
        others = [x for x in locations if x != q]
        subsets = [
            frozenset(c)
            for r in range(len(others) + 1)
            for c in itertools.combinations(others, r)
        ]
        for q_prime in locations:
            for r in range(len(occ) + 1):
                for chosen in itertools.combinations(occ, r):
                    s = frozenset(chosen)
                    for x in subsets:
                        if not clause_models(a, s, x | {q}, q_prime):
                            continue
                        for y in subsets:
                            if not clause_models(a, s, y, q):
                                continue
                            if not clause_models(a, s, x | y, q_prime):
                                return False
    return True


def raw_successor_unions(a: Lwaa, s, config: int):
    """All clause-combination target unions, unpruned; None if blocked."""
    per_location = []
    for q in config_ids(config):
        options = [cl.targets for cl in enabled_clauses(a, s, q)]
        if not options:
            return None
        per_location.append(options)
    unions = {frozenset()}
    for options in per_location:
        unions = {u | t for u in unions for t in options}
    return unions
