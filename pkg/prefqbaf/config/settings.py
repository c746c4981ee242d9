from __future__ import annotations

import os
from typing import Any, Literal, Mapping, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator
from pydantic import ValidationError as PydanticValidationError

from ..exceptions import ConfigError

ENV_PREFIX = "PREFQBAF_"

# Fixed by the framework model; not a setting.
DECISION_BASE_SCORE = 0.5
# Score equality in binary64.
SCORE_TOLERANCE = 1e-9
# Published strengths are rounded to two decimals.
TABLE_TOLERANCE = 0.02

LogLevel = Literal["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]


class Settings(BaseModel):
    """Run defaults, overridable through PREFQBAF_* environment variables."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    top_range: Tuple[float, float] = (0.55, 1.0)
    bot_range: Tuple[float, float] = (0.0, 0.45)
    ratio_choices: Tuple[float, ...] = (2.0, 3.0, 4.0, 5.0, 6.0)
    delta: float = Field(default=1.0, gt=0.0)
    workers: int = Field(default=1, ge=1)
    float_precision: int = Field(default=12, ge=1, le=17)
    log_level: LogLevel = "WARNING"

    @field_validator("log_level", mode="before")
    @classmethod
    def _upper_level(cls, value: Any) -> Any:
        return value.upper() if isinstance(value, str) else value


_SEQUENCE_SETTINGS = frozenset({"top_range", "bot_range", "ratio_choices"})


def load_settings(environ: Optional[Mapping[str, str]] = None) -> Settings:
    """Build Settings from PREFQBAF_* variables; tuples are comma-separated."""
    environ = os.environ if environ is None else environ
    overrides = {}
    for key, raw in environ.items():
        if not key.startswith(ENV_PREFIX):
            continue
        name = key[len(ENV_PREFIX):].lower()
        if name not in Settings.model_fields:
            raise ConfigError(f"unknown setting {key}")
        overrides[name] = raw.split(",") if name in _SEQUENCE_SETTINGS else raw
    try:
        return Settings.model_validate(overrides)
    except PydanticValidationError as e:
        raise ConfigError(f"invalid settings: {e}") from e
