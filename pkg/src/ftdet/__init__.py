"""Generalised determinisation of automata whose transitions carry a computational effect."""

from __future__ import annotations

from types import ModuleType

from .core import (
    DEFAULT_CAP,
    BehaviourTable,
    DetMachine,
    FTCoalgebra,
    as_word,
    behaviour_table,
    determinize,
    extend,
    unit,
    words_up_to,
)
from .equivalence import (
    EquivResult,
    Verdict,
    absorbed_equivalent,
    ft_bisimilar,
    refine,
    theorem1_check,
)
from .errors import (
    CapExceeded,
    FtdetError,
    InvariantViolation,
    NotGreibach,
    ParseError,
    UnknownState,
    ValidationError,
)
from .laws import check_monad_laws, default_monads
from .machines import (
    MooreVariant,
    Nda,
    PartialAutomaton,
    PartialMealy,
    mealy_output,
    moore_behaviour,
    nda_determinize,
    nda_language,
    pa_totalize,
    pa_vw_semantics,
)
from .monads import (
    BOTTOM,
    ConvexAlgebra,
    Distribution,
    Exceptions,
    FreeAlgebra,
    Monad,
    OrAlgebra,
    Partiality,
    PointedAlgebra,
    Powerset,
    Raise,
    SideEffect,
    StackAcceptAlgebra,
    StackState,
    TState,
    UnionAlgebra,
    Val,
    Writer,
    monad_from_spec,
)
from .pda import (
    AcceptMode,
    Configuration,
    Grammar,
    MooreState,
    Pda,
    grammar_to_pda,
    pda_accepts,
    pda_language,
    pda_coalgebra,
    pda_moore_states,
    pda_semantics,
    pda_step,
)
from .stack import StackPredicate, StackTable
from .traces import Decoration, Lts, decorate, decorated_semantics, enabled, fail_sets, spectrum_compare

__all__ = sorted(
    name
    for name, value in globals().items()
    if not name.startswith("_") and name not in ("annotations", "ModuleType") and not isinstance(value, ModuleType)
)
