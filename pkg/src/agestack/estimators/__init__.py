"""Base-estimator adapters: replay, simulator, and remote clients."""

from agestack.estimators.base import EstimatorAdapter
from agestack.estimators.harvest import HarvestResult, harvest
from agestack.estimators.remote import (
    RemoteAdapter,
    RemoteClient,
    RemoteConfig,
    remote_predict,
)
from agestack.estimators.replay import ReplayAdapter, replay
from agestack.estimators.simulator import (
    BiasProfile,
    SimulatorAdapter,
    default_profiles,
    load_profiles,
    parse_profiles,
    piecewise,
    simulate,
)

__all__ = [
    "BiasProfile",
    "EstimatorAdapter",
    "HarvestResult",
    "RemoteAdapter",
    "RemoteClient",
    "RemoteConfig",
    "ReplayAdapter",
    "SimulatorAdapter",
    "default_profiles",
    "harvest",
    "load_profiles",
    "parse_profiles",
    "piecewise",
    "remote_predict",
    "replay",
    "simulate",
]
