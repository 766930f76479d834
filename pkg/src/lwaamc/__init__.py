"""On-the-fly LTL model checking via linear weak alternating automata."""

from .emptiness import (
    Lasso,
    ProductSearch,
    ResourceLimitError,
    SearchStats,
    Verdict,
    check_product,
)
from .kripke import (
    KripkeStructure,
    KtsFormatError,
    gen_dining,
    gen_random,
    gen_semaphore,
    parse_kts,
    serialize_kts,
)
from .ltl import (
    Formula,
    LtlSyntaxError,
    parse_ltl,
    pretty,
    subformulas,
    to_nnf,
    x_normalize,
)
from .lwaa import (
    Clause,
    Lwaa,
    build_lwaa,
    check_simple,
    check_weak,
    config_ids,
    config_of,
    enabled_clauses,
    find_simplicity_witness,
    successor_configs,
)
from .oracle import LassoWord, eval_lasso, scc_oracle, validate_counterexample

__version__ = "0.1.0"

__all__ = [
    "Clause",
    "Formula",
    "KripkeStructure",
    "KtsFormatError",
    "Lasso",
    "LassoWord",
    "LtlSyntaxError",
    "Lwaa",
    "ProductSearch",
    "ResourceLimitError",
    "SearchStats",
    "Verdict",
    "build_lwaa",
    "check_product",
    "check_simple",
    "check_weak",
    "config_ids",
    "config_of",
    "enabled_clauses",
    "eval_lasso",
    "find_simplicity_witness",
    "gen_dining",
    "gen_random",
    "gen_semaphore",
    "parse_kts",
    "parse_ltl",
    "pretty",
    "scc_oracle",
    "serialize_kts",
    "subformulas",
    "successor_configs",
    "to_nnf",
    "validate_counterexample",
    "x_normalize",
]
