"""catbench: a workbench for a language with exact step-counting semantics.

Three layers: a small-step evaluator with sequential cost and parallel span,
a bounded semantic oracle for type membership over partial equivalence
relations, and a checker for derivations in the accompanying proof rules.
"""

from .evaluation import (
    BoundCheck, EvalResult, FuelError, StuckError, check_bound, eval_par,
    eval_seq, eval_symbolic, step_par, step_seq, step_symbolic,
)
from .harness import BoundReport, bundled_path, check_bound_over_domain
from .judgments import (
    CostMemberEqJ, Judgment, MemberEqJ, TypeEqJ, ValueMemberEqJ,
)
from .derivations import (
    Derivation, SchemaError, check_derivation, check_script,
    derivation_from_json, derivation_to_json, load_script, soundness_probe,
)
from .registry import EvalConfig, FFIRegistry, RegistryError, \
    default_registry, register
from .semantics import (
    TestBudget, TypeDen, Verdict, check_open, inhabited, measure,
    member_cost, member_eq, sample_instances, type_denote, type_eq,
)
from .syntax import (
    Expr, ParseError, Telescope, alpha_eq, as_numeral, free_vars, is_value,
    parin, parse, print_expr, subst, suc,
)

__version__ = "0.1.0"
