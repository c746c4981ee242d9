from .settings import (
    DECISION_BASE_SCORE,
    ENV_PREFIX,
    SCORE_TOLERANCE,
    TABLE_TOLERANCE,
    Settings,
    load_settings,
)

__all__ = [
    "DECISION_BASE_SCORE",
    "ENV_PREFIX",
    "SCORE_TOLERANCE",
    "TABLE_TOLERANCE",
    "Settings",
    "load_settings",
]
