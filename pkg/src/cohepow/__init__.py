"""Computable linear orders, cohesive windows and their finite-window powers."""

from .clocked import (
    NUMBERING_VERSION,
    PENDING,
    ClockedFunction,
    Halted,
    Program,
    RuleFunction,
    halting_set,
    pair,
    program,
    unpair,
)
from .cohesive import (
    CohesiveApprox,
    FamilyCohesive,
    MaximalSetCohesive,
    build_maximal,
    default_cohesive,
    family_cohesive,
    injected,
)
from .constructions import (
    ColoredDense,
    DenseBlocks,
    SuccessorBreaker,
    build_colored_dense,
    build_successor_breaker,
    default_noncomputable_successor,
    dense_blocks_theta,
)
from .errors import (
    CohepowError,
    ConfigError,
    EmptyWindow,
    IncompatibleContexts,
    LadderExhausted,
    PreconditionFailed,
    Undetermined,
    UnsupportedBase,
    WitnessNotFound,
)
from .orders import ComputableOrder, Integers, Naturals, Product, Rationals, Reverse, Sum
from .power import PowerElement, Verdict, canonical_embed, power_compare
from .recipes import Recipe, Report, load_recipe, run_recipe
from .shuffles import pull_back, shuffle_all, shuffle_finite, shuffle_pi2, shuffle_sigma2
from .staged import StagedOrder, replay_trace

__version__ = "0.1.0"
