import random

import pytest

from lwaamc.emptiness import (
    Lasso,
    ProductSearch,
    ResourceLimitError,
    Verdict,
    check_product,
)
from lwaamc.kripke import KripkeStructure, gen_dining, gen_semaphore
from lwaamc.ltl import parse_ltl
from lwaamc.oracle import scc_oracle, validate_counterexample

from helpers import (
    negated_automaton,
    positive_automaton,
    random_formula,
    random_structure,
    single_state_structure,
)

PQR = ("p", "q", "r")


def dining_property(n: int):
    conjuncts = " && ".join(f"G F hasFork_{i + 1}" for i in range(n))
    return parse_ltl(f"({conjuncts}) -> G F eat_1")


class TestVerdicts:
    def test_liveness_holds_on_satisfying_loop(self):
        t = single_state_structure({"p"}, ("p",))
        a = negated_automaton(parse_ltl("G F p"), ("p",))
        verdict = check_product(t, a)
        assert verdict.holds and verdict.lasso is None
        assert not scc_oracle(t, a)

    def test_liveness_fails_on_empty_loop(self):
        t = single_state_structure(set(), ("p",))
        a = negated_automaton(parse_ltl("G F p"), ("p",))
        verdict = check_product(t, a)
        assert not verdict.holds
        assert scc_oracle(t, a)
        assert validate_counterexample(parse_ltl("G F p"), t, verdict.lasso)
        assert verdict.lasso.loop == (0,)

    def test_liveness_holds_on_alternating_cycle(self):
        t = KripkeStructure(
            props=("p",),
            states=[(frozenset({"p"}), (1,)), (frozenset(), (0,))],
            initial=0,
        )
        a = negated_automaton(parse_ltl("G F p"), ("p",))
        assert check_product(t, a).holds
        assert not scc_oracle(t, a)

    def test_empty_cofinal_set_accepts_any_cycle(self):
        t = single_state_structure({"p"}, ("p",))
        a = positive_automaton(parse_ltl("G p"), ("p",))
        verdict = check_product(t, a)
        assert not verdict.holds
        assert verdict.lasso.loop == (0,)

    def test_verdict_invariant(self):
        with pytest.raises(ValueError):
            Verdict(holds=False, lasso=None, stats=None)
        with pytest.raises(ValueError):
            Lasso(prefix=(), loop=())


class TestCounterexamples:
    def test_deadlocked_dining_lasso_is_the_stutter_state(self):
        k = gen_dining(2, "deadlock")
        prop = dining_property(2)
        a = negated_automaton(prop, k.props)
        verdict = check_product(k, a)
        assert not verdict.holds
        assert validate_counterexample(prop, k, verdict.lasso)
        (stutter,) = sorted(k.completed)
        assert set(verdict.lasso.loop) == {stutter}

    def test_lasso_adjacency_invariant_on_corpus(self):
        rng = random.Random(2024)
        found = 0
        for _ in range(150):
            f = random_formula(rng, 7, PQR)
            t = random_structure(rng)
            a = negated_automaton(f, t.props)
            verdict = check_product(t, a)
            if verdict.holds:
                continue
            found += 1
            lasso = verdict.lasso
            path = lasso.prefix + lasso.loop
            assert path[0] == t.initial
            for a_state, b_state in zip(path, path[1:]):
                assert b_state in t.successors(a_state)
            assert lasso.loop[0] in t.successors(lasso.loop[-1])
            assert validate_counterexample(f, t, lasso)
        assert found >= 30


class TestSearchInternals:
    def test_exhaustion_completes_every_component(self):
        # every run returns to the p-state, so the property holds and the
        # search must exhaust the product
        t = KripkeStructure(
            props=("p",),
            states=[
                (frozenset({"p"}), (1, 2)),
                (frozenset(), (0,)),
                (frozenset({"p"}), (0,)),
            ],
            initial=0,
        )
        a = negated_automaton(parse_ltl("G F p"), ("p",))
        search = ProductSearch(t, a)
        verdict = search.run()
        assert verdict.holds
        records = search.records
        assert all(rec.in_comp for rec in records.values())
        counts = sorted(rec.cnt for rec in records.values())
        assert counts == list(range(len(records)))
        assert verdict.stats.nodes_seen == len(records)
        assert verdict.stats.scc_count >= 1

    def test_label_sets_only_grow(self):
        events = []

        def hook(root, old, new):
            events.append((root, old, new))
            assert old & ~new == 0 and old != new

        rng = random.Random(31)
        for _ in range(40):
            f = random_formula(rng, 7, PQR)
            t = random_structure(rng)
            a = negated_automaton(f, t.props)
            check_product(t, a, label_hook=hook)
        assert events

    def test_node_budget(self):
        k = gen_semaphore(2)
        a = negated_automaton(parse_ltl("F allcrit"), k.props)
        with pytest.raises(ResourceLimitError):
            check_product(k, a, max_nodes=3)

    def test_deterministic_reruns(self):
        rng = random.Random(818)
        for _ in range(25):
            f = random_formula(rng, 7, PQR)
            t = random_structure(rng)
            a = negated_automaton(f, t.props)
            first = check_product(t, a)
            second = check_product(t, a)
            assert first.holds == second.holds
            assert first.lasso == second.lasso
            assert first.stats.nodes_seen == second.stats.nodes_seen

    def test_deep_product_does_not_hit_recursion_limits(self):
        # a chain far longer than the interpreter recursion limit, ending
        # in a p-loop: the property holds and the whole chain is explored
        n = 25_000
        states = [(frozenset(), (i + 1,)) for i in range(n - 1)]
        states.append((frozenset({"p"}), (n - 1,)))
        t = KripkeStructure(props=("p",), states=states, initial=0)
        a = negated_automaton(parse_ltl("F G p"), ("p",))
        verdict = check_product(t, a)
        assert verdict.holds
        assert verdict.stats.max_dfs_depth >= n

    def test_stats_report_schema(self):
        t = single_state_structure({"p"}, ("p",))
        a = negated_automaton(parse_ltl("G F p"), ("p",))
        report = check_product(t, a).stats.as_report()
        assert list(report) == [
            "nodes_seen",
            "scc_count",
            "max_dfs_depth",
            "max_scc_stack",
            "elapsed_ms",
        ]


def test_engine_agrees_with_oracle_on_mixed_corpus():
    rng = random.Random(616)
    for _ in range(150):
        f = random_formula(rng, 8, PQR)
        t = random_structure(rng)
        a = negated_automaton(f, t.props)
        assert check_product(t, a).holds == (not scc_oracle(t, a))
