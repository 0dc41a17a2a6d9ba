"""Multi-layer cops-and-robbers: exact solving, bounds, generators, simulation."""

from .core import (
    AllocationPlan,
    MlgError,
    MlgParseError,
    MultiLayerGraph,
    RobberSpec,
    flatten,
    ml_min_degree,
    parse_mlg,
    serialize_mlg,
)
from .solver import (
    CopWinTable,
    GameVerdict,
    StateBudgetExceeded,
    Winner,
    build_copwin,
    decide_allocated,
    decide_choose_allocation,
    decide_free_layer_choice,
    multilayer_cop_number,
    single_layer_cop_number,
)

__all__ = [
    "AllocationPlan",
    "CopWinTable",
    "GameVerdict",
    "MlgError",
    "MlgParseError",
    "MultiLayerGraph",
    "RobberSpec",
    "StateBudgetExceeded",
    "Winner",
    "build_copwin",
    "decide_allocated",
    "decide_choose_allocation",
    "decide_free_layer_choice",
    "flatten",
    "ml_min_degree",
    "multilayer_cop_number",
    "parse_mlg",
    "serialize_mlg",
    "single_layer_cop_number",
]

__version__ = "0.1.0"
