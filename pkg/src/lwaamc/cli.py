"""Command-line front end.

Pipeline: parse the formula, negate it, convert to X-normalized NNF, build
the alternating automaton, then run the product search against the model.
Exit codes: 0 property holds, 1 counterexample found, 2 usage or input
error, 3 resource cap hit.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import emptiness, kripke, lwaa, ltl, oracle


def build_arg_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="lwaamc",
        description="LTL model checker over .kts Kripke structures",
    )
    p.add_argument("--formula", required=True, help="LTL property to check")
    src = p.add_mutually_exclusive_group()
    src.add_argument("--model", help="path to a .kts file")
    src.add_argument(
        "--gen",
        help="generator spec, e.g. dining:n=2,variant=deadlock | "
        "semaphore:n=2 | random:seed=1,states=4,props=1,branch=2",
    )
    p.add_argument(
        "--complete-deadlocks",
        action="store_true",
        help="give deadlocked .kts states a stutter self-loop instead of rejecting",
    )
    p.add_argument(
        "--validate-ce",
        action="store_true",
        help="re-check any counterexample against the lasso evaluator",
    )
    p.add_argument(
        "--oracle",
        action="store_true",
        help="decide with the brute-force SCC oracle instead of the search engine",
    )
    p.add_argument(
        "--max-nodes",
        type=int,
        default=10_000_000,
        help="product node budget (default %(default)s)",
    )
    p.add_argument(
        "--stats",
        choices=("kv", "json", "none"),
        default="kv",
        help="statistics output format",
    )
    p.add_argument(
        "--dump-automaton",
        action="store_true",
        help="print the constructed automaton before checking",
    )
    p.add_argument(
        "--check-satisfiability",
        action="store_true",
        help="check the raw formula for satisfiability over --props "
        "instead of model checking",
    )
    p.add_argument(
        "--props",
        help="comma-separated proposition universe for --check-satisfiability "
        "(default: the formula's propositions)",
    )
    return p


class UsageError(Exception):
    pass


def _parse_generator_spec(spec: str) -> kripke.KripkeStructure:
    name, _, arg_text = spec.partition(":")
    kwargs: dict[str, str] = {}
    if arg_text:
        for item in arg_text.split(","):
            key, eq, value = item.partition("=")
            if not eq or not key or not value:
                raise UsageError(f"malformed generator argument {item!r}")
            kwargs[key.strip()] = value.strip()

    def want_int(key: str, default: int | None = None) -> int:
        if key not in kwargs:
            if default is None:
                raise UsageError(f"generator {name!r} needs {key}=<int>")
            return default
        try:
            return int(kwargs.pop(key))
        except ValueError:
            raise UsageError(f"generator argument {key} must be an integer")

    try:
        if name == "dining":
            n = want_int("n")
            variant = kwargs.pop("variant", "deadlock")
            _reject_extra(name, kwargs)
            return kripke.gen_dining(n, variant)
        if name == "semaphore":
            n = want_int("n")
            _reject_extra(name, kwargs)
            return kripke.gen_semaphore(n)
        if name == "random":
            seed = want_int("seed", 0)
            states = want_int("states")
            props = want_int("props")
            branch = want_int("branch", 2)
            _reject_extra(name, kwargs)
            return kripke.gen_random(seed, states, props, branch)
    except ValueError as exc:
        raise UsageError(str(exc))
    raise UsageError(f"unknown generator {name!r}")


def _reject_extra(name: str, kwargs: dict) -> None:
    if kwargs:
        raise UsageError(
            f"unknown arguments for generator {name!r}: {sorted(kwargs)}"
        )


def _load_model(args) -> kripke.KripkeStructure:
    if args.model:
        try:
            with open(args.model, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise UsageError(f"cannot read model: {exc}")
        return kripke.parse_kts(text, complete_deadlocks=args.complete_deadlocks)
    if args.gen:
        return _parse_generator_spec(args.gen)
    raise UsageError("one of --model or --gen is required")


def _print_stats(stats: emptiness.SearchStats, fmt: str) -> None:
    report = stats.as_report()
    if fmt == "kv":
        for key, value in report.items():
            print(f"{key}={value}")
    elif fmt == "json":
        print(json.dumps(report))


def _print_lasso(model: kripke.KripkeStructure, lasso: emptiness.Lasso) -> None:
    order = {p: i for i, p in enumerate(model.props)}

    def line(state: int) -> str:
        names = " ".join(sorted(model.valuation(state), key=order.__getitem__))
        return f"state {state} {{{names}}}"

    for s in lasso.prefix:
        print(line(s))
    print("loop:")
    for s in lasso.loop:
        print(line(s))


def _universal_models(props: tuple[str, ...]):
    """All-words models over the given propositions: a complete structure
    over every valuation, instantiated once per choice of initial state."""
    n = len(props)
    if n > 10:
        raise UsageError("satisfiability universe is limited to 10 propositions")
    valuations = [
        frozenset(p for i, p in enumerate(props) if (bits >> i) & 1)
        for bits in range(1 << n)
    ]
    everyone = tuple(range(len(valuations)))
    for initial in range(len(valuations)):
        yield kripke.KripkeStructure(
            props=props,
            states=[(v, everyone) for v in valuations],
            initial=initial,
        )


def _run_satisfiability(args) -> int:
    formula = ltl.parse_ltl(args.formula)
    if args.props:
        props = tuple(name.strip() for name in args.props.split(",") if name.strip())
    else:
        props = tuple(sorted(ltl.props_of(formula)))
    missing = ltl.props_of(formula) - set(props)
    if missing:
        raise UsageError(f"formula propositions not in --props: {sorted(missing)}")
    normalized = ltl.x_normalize(ltl.to_nnf(formula))
    automaton = lwaa.build_lwaa(normalized, props)
    if args.dump_automaton:
        print(automaton.dump(), end="")
    for model in _universal_models(props):
        verdict = emptiness.check_product(model, automaton, max_nodes=args.max_nodes)
        if not verdict.holds:
            print("satisfiable")
            _print_lasso(model, verdict.lasso)
            _print_stats(verdict.stats, args.stats)
            return 1
    print("unsatisfiable")
    return 0


def run_cli(argv: list[str]) -> int:
    parser = build_arg_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0

    try:
        if args.check_satisfiability:
            if args.model or args.gen:
                raise UsageError(
                    "--check-satisfiability does not take a model source"
                )
            return _run_satisfiability(args)

        formula = ltl.parse_ltl(args.formula)
        model = _load_model(args)
        unknown = ltl.props_of(formula) - set(model.props)
        if unknown:
            raise UsageError(
                f"formula propositions not in the model: {sorted(unknown)}"
            )
        negated = ltl.x_normalize(ltl.to_nnf(formula, negate=True))
        automaton = lwaa.build_lwaa(negated, model.props)
        if args.dump_automaton:
            print(automaton.dump(), end="")

        if args.oracle:
            nonempty = oracle.scc_oracle(
                model, automaton, max_nodes=args.max_nodes
            )
            print(f"verdict={'violated' if nonempty else 'holds'}")
            print("source=oracle")
            return 1 if nonempty else 0

        verdict = emptiness.check_product(model, automaton, max_nodes=args.max_nodes)
        print(f"verdict={'holds' if verdict.holds else 'violated'}")
        _print_stats(verdict.stats, args.stats)
        if verdict.holds:
            return 0
        _print_lasso(model, verdict.lasso)
        if args.validate_ce:
            ok = oracle.validate_counterexample(formula, model, verdict.lasso)
            print(f"counterexample_valid={'true' if ok else 'false'}")
            if not ok:
                print(
                    "error: counterexample failed validation", file=sys.stderr
                )
        return 1
    except (
        UsageError,
        ltl.LtlSyntaxError,
        kripke.KtsFormatError,
        ValueError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (
        emptiness.ResourceLimitError,
        oracle.ProductLimitError,
        lwaa.ClauseLimitError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


def main() -> None:
    sys.exit(run_cli(sys.argv[1:]))
