"""Arena HTTP service: event-sourced state, generation, battles, votes."""

from .app import create_app
from .config import ArenaConfig, ModelConfig
from .core import ArenaService, BattleView, SubmissionResult
from .events import EventLog
from .generators import (
    DEFAULT_SYSTEM_PROMPT,
    GenerationFailure,
    GeneratorClient,
    HttpGeneratorClient,
    ReplayGeneratorClient,
    StaticGeneratorClient,
)
from .state import ArenaState

__all__ = [
    "create_app",
    "ArenaConfig",
    "ModelConfig",
    "ArenaService",
    "BattleView",
    "SubmissionResult",
    "EventLog",
    "DEFAULT_SYSTEM_PROMPT",
    "GenerationFailure",
    "GeneratorClient",
    "HttpGeneratorClient",
    "ReplayGeneratorClient",
    "StaticGeneratorClient",
    "ArenaState",
]
