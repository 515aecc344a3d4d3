"""Depth-limited evaluation of bar-recursive functionals.

The package turns the self-referential equation

    value(s) = Y(s * 0 * (n -> value(s * (n+1))))

into something computable: two families of depth-limited approximations,
a stabilization search that finds where they settle jointly, a checked
evaluator for the settled value, fan-style uniform bounds, associate and
unbounded-search round trips, and replayable evaluation traces.
"""

from .errors import (
    ArityError,
    BoundExceeded,
    DepthExceeded,
    FuelExhausted,
    GandyHylandError,
    GhEquationViolated,
    IndexOutOfRange,
    InvariantViolation,
    IoError,
    OutOfTableQuery,
    ParseError,
    StabilizationFailed,
)
from .sequences import (
    EMPTY,
    FinSeq,
    Point,
    code,
    concat,
    constant_point,
    decode,
    extend,
    is_prefix,
    pad,
    take,
)
from .functionals import (
    Associate,
    DEFAULT_FUEL,
    Fuel,
    Functional,
    associate_apply,
    associate_from_functional,
    check_neighbourhood,
    enumerate_sequences,
    epsilon_flag,
    functional_from_associate,
    gamma_flag,
    indexed_value,
    modulus_from_associate,
    mu,
)
from .fan import (
    BinTree,
    ThetaResult,
    enumerate_trees,
    fan_modulus,
    full_fan_modulus,
    pwc_bound,
    scf_check,
    special_fan,
)
from .evaluator import (
    EvalSession,
    HerbrandWitness,
    certified_depth_bounded,
    ext_witness,
    g_eval,
    gamma_eval,
    gh_check,
    ghs_witness,
    h_eval,
    h_hat_eval,
    herbrand_trace,
    make_session,
    modulus_from_ghs,
    modulus_from_mu,
    mu_from_gh_ext,
    mu_from_modulus,
    replay_check,
    stabilize,
)

__version__ = "0.1.0"

__all__ = [
    "ArityError",
    "Associate",
    "BinTree",
    "BoundExceeded",
    "DEFAULT_FUEL",
    "DepthExceeded",
    "EMPTY",
    "EvalSession",
    "FinSeq",
    "Fuel",
    "FuelExhausted",
    "Functional",
    "GandyHylandError",
    "GhEquationViolated",
    "HerbrandWitness",
    "IndexOutOfRange",
    "InvariantViolation",
    "IoError",
    "OutOfTableQuery",
    "ParseError",
    "Point",
    "StabilizationFailed",
    "ThetaResult",
    "associate_apply",
    "associate_from_functional",
    "certified_depth_bounded",
    "check_neighbourhood",
    "code",
    "concat",
    "constant_point",
    "decode",
    "enumerate_sequences",
    "enumerate_trees",
    "epsilon_flag",
    "ext_witness",
    "extend",
    "fan_modulus",
    "full_fan_modulus",
    "functional_from_associate",
    "g_eval",
    "gamma_eval",
    "gamma_flag",
    "gh_check",
    "ghs_witness",
    "h_eval",
    "h_hat_eval",
    "herbrand_trace",
    "indexed_value",
    "is_prefix",
    "make_session",
    "modulus_from_associate",
    "modulus_from_ghs",
    "modulus_from_mu",
    "mu",
    "mu_from_gh_ext",
    "mu_from_modulus",
    "pad",
    "pwc_bound",
    "replay_check",
    "scf_check",
    "special_fan",
    "stabilize",
    "take",
    "__version__",
]
