"""Ethical planning over LTLf values with lexicographic priorities."""

from .conflict import (
    MoralProblem,
    contraction_of_plan,
    enumerate_minimal_contractions,
    is_conflict,
    is_contraction,
    is_lex_minimal,
    is_physical_conflict,
    is_qual_minimal,
    is_quant_minimal,
    satisfying_plan,
)
from .domain import NOOP, ActionTheory, History, generate_history, is_compatible, make_plan, sat_set, successor
from .evaluation import (
    ComparisonResult,
    EthicalPlanningDomain,
    MixedMotiveDomain,
    Relation,
    ValueBase,
    explain,
    induce,
    qual_compare,
    quant_compare,
)
from .fileformat import DomainFile, load_bundled, load_domain_file, parse_domain_file, render_domain_file
from .ltlf import Formula, TraceSet, desugar, evaluate, parse_formula, pretty_print
from .search import PlanQuery, enumerate_plans, is_dominated, non_dominated_set

__version__ = "0.1.0"
