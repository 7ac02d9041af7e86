from .export import write_trajectories_csv
from .rng import CounterRNG
from .statistics import record_statistics
from .trajectories import ConfigMap, Trajectory, sample_exact, sample_independent, to_configuration

__all__ = [
    "ConfigMap",
    "CounterRNG",
    "Trajectory",
    "record_statistics",
    "sample_exact",
    "sample_independent",
    "to_configuration",
    "write_trajectories_csv",
]
