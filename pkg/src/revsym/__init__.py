"""Reversal-symmetric counterparts of facts about lists."""
from .engine import (
    ReversalReport, canon_assoc, instantiate_list_vars, normalize, reverse_fact,
    transport_binders,
)
from .errors import (
    AdmissionError, CycleDetected, FuelExhausted, ParseError, RevsymError, SortError,
    UnboundVariable,
)
from .oracle import Verdict, check_closure, check_transport, enumerate_valuations, gen_formula
from .rules import Rule, RuleSet, admit_rule, default_ruleset, load_ruleset
from .semantics import DomainParams, builtin_signature, eval_formula, eval_term, rev_value
from .syntax import format_formula, format_term, parse_formula, parse_term
from .terms import Signature, Sort, alpha_equal, free_vars, substitute

__version__ = "0.1.0"
