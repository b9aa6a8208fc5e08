"""
YAML loader for dipcheck
Loads the built-in automaton catalog from YAML
"""

from functools import lru_cache
from pathlib import Path
from typing import Any, Dict, List, Optional

import yaml
from pydantic import ValidationError

from src.config.logging_config import LoggerMixin
from src.models.documents import AutomatonDocument, schema_error_from

BUILTINS_FILE = "builtins.yaml"


class BuiltinCatalog(LoggerMixin):
    """Built-in automaton documents, schema-checked on load"""

    def __init__(self, config_dir: Optional[Path] = None):
        self.config_dir = config_dir or Path(__file__).parent
        self.documents: Dict[str, AutomatonDocument] = {}

        self.load()

    def load(self):
        """Load and schema-check every catalog entry"""
        data = self.load_yaml_file(BUILTINS_FILE)
        for name, raw in (data.get("automata") or {}).items():
            try:
                self.documents[name] = AutomatonDocument.model_validate(raw)
            except ValidationError as e:
                self.log_error(f"Built-in automaton {name} does not match the schema: {e}", automaton=name)
                raise schema_error_from(e, f"builtin {name}") from e
        self.log_debug(f"Loaded {len(self.documents)} built-in automata")

    def load_yaml_file(self, filename: str) -> Dict[str, Any]:
        """Load a YAML file"""
        file_path = self.config_dir / filename

        if not file_path.exists():
            raise FileNotFoundError(f"Configuration file not found: {file_path}")

        try:
            with open(file_path, "r", encoding="utf-8") as f:
                return yaml.safe_load(f) or {}
        except yaml.YAMLError as e:
            self.logger.error(f"Failed to parse YAML file {filename}: {e}")
            raise

    def get(self, name: str) -> Optional[AutomatonDocument]:
        return self.documents.get(name)

    def names(self) -> List[str]:
        return list(self.documents)


@lru_cache(maxsize=None)
def get_catalog() -> BuiltinCatalog:
    return BuiltinCatalog()
