"""Node repair in distributed storage over AWGN and Rayleigh fading links."""
__version__ = "0.1.0"

from .analysis import bounds, exact_psub_uniform
from .channel import ChannelConfig, ChannelKind
from .constellation import Constellation, build_qam
from .gf import FieldElement, FieldParams
from .kernels import BACKEND
from .rotation_opt import optimize_rotation
from .simulator import SimulationPlan, SweepResult, run_sweep
from .storage_code import RepairScenario

__all__ = [
    "BACKEND",
    "ChannelConfig",
    "ChannelKind",
    "Constellation",
    "FieldElement",
    "FieldParams",
    "RepairScenario",
    "SimulationPlan",
    "SweepResult",
    "bounds",
    "build_qam",
    "exact_psub_uniform",
    "optimize_rotation",
    "run_sweep",
]
