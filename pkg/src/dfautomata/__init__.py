"""Universal computation in dynamic fields.

Turing machines and context-free grammars are compiled into generalized
shifts, then into piecewise affine maps on the unit square (nonlinear
dynamical automata), whose Frobenius-Perron operator evolves uniform
rectangular densities (dynamic field automata).
"""

from importlib.resources import files

from .amari import (
    ConstantFieldConfig,
    FixedPointReport,
    SigmoidParams,
    activation,
    find_fixed_points,
    integrate,
)
from .dfa import (
    GridDensity,
    RectMacrostate,
    TransferOperator,
    amari_discretization_check,
    build_transfer_operator,
    dfa_orbit,
    dfa_step,
    fp_apply,
    rasterize,
)
from .errors import (
    AmbiguousMatch,
    DimensionMismatch,
    InexpressibleRule,
    MalformedDescription,
    ResolutionMismatch,
    StraddlesPartition,
    UncodedSymbol,
)
from .goedel import (
    AffineBranch,
    GoedelCoding,
    NdaMachine,
    Rect,
    compile_nda,
    cylinder_rect,
    dod_doe_report,
    encode,
    nda_step,
)
from .symbolic import (
    HALTED,
    NO_RULE,
    WILDCARD,
    Alphabet,
    ContextFreeGrammar,
    DottedSequence,
    GeneralizedShift,
    GsRule,
    TuringMachine,
    cfg_to_gs,
    cylinder,
    gs_run,
    gs_step,
    tm_step,
    tm_to_gs,
)

__version__ = "0.1.0"


def data_path(name: str):
    """Path of a bundled definition file, e.g. ``data_path("grammar_np_v_np.json")``."""
    return files(__name__) / "data" / name
