"""Exact kinetic alpha complexes.

Points move on piecewise-linear trajectories; the engine maintains
their Delaunay triangulation and fixed-radius alpha complex through
every combinatorial change and records each cell's lifetime as a
four-dimensional space-time solid, the medusa.
"""

from .alpha import AlphaFlags, alpha_members, classify
from .dataset import (
    ProbeMismatch,
    RunResult,
    TrajectoryFile,
    format_medusa,
    format_stats,
    format_time,
    generate,
    load_trajectory_file,
    parse_trajectory_file,
    run_simulation,
    save_trajectory_file,
)
from .engine import EngineConfig, EventCounters, EventRecord, KineticEngine
from .errors import (
    AlphaMedusaError,
    CoincidentTrajectories,
    DegeneracyError,
    DegenerateInput,
    FormatError,
    MedusaInvariantError,
    SimultaneousEvents,
)
from .medusa import MedusaBuilder, MedusaCell
from .motion import LinearMotion, Trajectory
from .roots import AlgebraicReal, compare, isolate_roots
from .triangulation import Triangulation

__version__ = "0.1.0"

__all__ = [
    "AlgebraicReal",
    "AlphaFlags",
    "AlphaMedusaError",
    "CoincidentTrajectories",
    "DegeneracyError",
    "DegenerateInput",
    "EngineConfig",
    "EventCounters",
    "EventRecord",
    "FormatError",
    "KineticEngine",
    "LinearMotion",
    "MedusaBuilder",
    "MedusaCell",
    "MedusaInvariantError",
    "ProbeMismatch",
    "RunResult",
    "SimultaneousEvents",
    "Trajectory",
    "TrajectoryFile",
    "Triangulation",
    "alpha_members",
    "classify",
    "compare",
    "format_medusa",
    "format_stats",
    "format_time",
    "generate",
    "isolate_roots",
    "load_trajectory_file",
    "parse_trajectory_file",
    "run_simulation",
    "save_trajectory_file",
    "__version__",
]
