"""Self-contained pixel-control environment and a tiny from-scratch trainer.

Stream assignments (the second argument of :class:`rlaug.rng.Rng`) used by a
training run; every consumer of randomness has its own fixed stream so runs
replay identically:

    1  environment resets
    2  parameter init
    3  exploration noise and warmup actions
    4  replay sampling
    5  augmentation of sampled observation batches
    6  augmentation of sampled next-observation batches (decoupled mode)
    7  evaluation environment resets
    8  evaluation-time observation augmentation
"""

STREAM_ENV = 1
STREAM_INIT = 2
STREAM_EXPLORE = 3
STREAM_REPLAY = 4
STREAM_AUG = 5
STREAM_AUG_NEXT = 6
STREAM_EVAL_ENV = 7
STREAM_EVAL_AUG = 8

from .env import DotReacherConfig, DotReacherEnv  # noqa: E402
from .policy import TinyPolicy, grad_check  # noqa: E402
from .replay import ReplayBuffer  # noqa: E402
from .train import TrainRun, TrainResult, evaluate, train, worst_case_return  # noqa: E402

__all__ = [
    "DotReacherConfig",
    "DotReacherEnv",
    "TinyPolicy",
    "grad_check",
    "ReplayBuffer",
    "TrainRun",
    "TrainResult",
    "evaluate",
    "train",
    "worst_case_return",
    "STREAM_ENV",
    "STREAM_INIT",
    "STREAM_EXPLORE",
    "STREAM_REPLAY",
    "STREAM_AUG",
    "STREAM_AUG_NEXT",
    "STREAM_EVAL_ENV",
    "STREAM_EVAL_AUG",
]
