"""FrBD viscoelastic friction models (GM/GKV rheologies).

Thin Python surface over the C++ core: friction laws, parameter-set
interconversion, steady states, storage/dissipation evaluation, time
integration and passivity audits.
"""

from ._core import (
    FrBDModel,
    FrictionLaw,
    GKVParams,
    GMParams,
    InputSignal,
    PassivityAudit,
    Regularization,
    SlsCanonical,
    SolverConfig,
    Trajectory,
    __version__,
    bristle_force,
    dissipation_rate,
    friction_force,
    gkv_from_canonical,
    gkv_to_canonical,
    gm_from_canonical,
    gm_to_canonical,
    loop_area,
    passivity_audit,
    rhs,
    simulate,
    steady_state,
    storage,
    supplied_power,
)

__all__ = [
    "FrBDModel",
    "FrictionLaw",
    "GKVParams",
    "GMParams",
    "InputSignal",
    "PassivityAudit",
    "Regularization",
    "SlsCanonical",
    "SolverConfig",
    "Trajectory",
    "__version__",
    "bristle_force",
    "dissipation_rate",
    "friction_force",
    "gkv_from_canonical",
    "gkv_to_canonical",
    "gm_from_canonical",
    "gm_to_canonical",
    "loop_area",
    "passivity_audit",
    "rhs",
    "simulate",
    "steady_state",
    "storage",
    "supplied_power",
]
