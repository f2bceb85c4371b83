"""Situated transition systems: open transition systems whose states and
transitions carry resources and resource transformations, composed so that the
history of a composite is the composite of its components' histories."""
from .accounts_z import Ledger, LedgerRow, ledger_of_run, mk_account, trial_balance
from .cornering import (
    Exchange,
    cell_equal,
    eval_flow,
    format_cell,
    hcomp,
    parse_cell,
    vcomp,
    yank_normalize,
)
from .resource_theory import FreeTheory, TheorySignature, Verdict, Z, builtin_theory
from .rgraph_span import RGraph, Span, span_compose, span_iso, span_tensor
from .situated import (
    SituatedBoundary,
    SituatedSystem,
    compositionality_check,
    run,
    s_compose,
    s_equiv,
    s_identity,
    s_tensor,
    validate_situated,
)

__version__ = "0.1.0"
