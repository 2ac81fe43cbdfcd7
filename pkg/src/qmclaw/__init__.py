"""Query-model simulation of quantum claw and multicollision finders."""
from .algorithms import (
    AlgoResult,
    ClawTuple,
    CollisionTuple,
    MclawParams,
    ParameterError,
    bht_claw,
    build_params,
    collision_from_claw,
    hsx_collision,
    hsx_exponent,
    mclaw,
    mclaw_exponent,
    sha3_bound_table,
    verify_claw,
    verify_collision,
)
from .grover import (
    BbhtSchedule,
    GroverOutcome,
    SearchSpace,
    bbht_search,
    grover_success_prob,
    statevector_grover,
)
from .ledger import QueryLedger
from .oracle import (
    FunctionTable,
    ImageList,
    make_rng,
    mix_seed,
    mtps,
    partition_domain,
    restrict_domain,
    sample_random_function,
    sample_values,
)

__version__ = "0.1.0"
