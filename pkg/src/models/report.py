"""
Report model for dipcheck
Versioned, deterministically serialized command results
"""

import json
import math
from typing import Any, Dict, Optional

from pydantic import BaseModel, Field

from src.config.settings import SCHEMA_VERSION


def _jsonable(value: Any) -> Any:
    """Replace non-finite floats, which JSON cannot carry, by strings"""
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return value
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


class Report(BaseModel):
    """Result of one CLI command"""

    schema_version: str = SCHEMA_VERSION
    command: str
    tool_version: str
    status: str
    automaton: Optional[str] = None
    automaton_sha256: Optional[str] = None
    seed: Optional[int] = None
    result: Dict[str, Any] = Field(default_factory=dict)
    error: Optional[Dict[str, Any]] = None

    def to_json(self) -> str:
        return json.dumps(_jsonable(self.model_dump()), sort_keys=True, indent=2,
                          ensure_ascii=False, allow_nan=False)
