"""
Run configuration for InterpIQ commands
"""

import json
import os
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path
from typing import Any, Dict, List, Optional

from dotenv import load_dotenv

from .utils.validators import ConfigError, validate_known_fields, validate_run_config

# Load environment variables
load_dotenv()

SCHEMA_VERSION = 1
DEFAULT_OUTPUT_DIR = "results"


def default_output_dir() -> str:
    """Output directory from INTERPIQ_OUTPUT_DIR, the only environment input"""
    return os.getenv("INTERPIQ_OUTPUT_DIR", DEFAULT_OUTPUT_DIR)


@dataclass
class RunConfig:
    """Everything a command run depends on; recorded verbatim in every manifest"""

    schema_version: int = SCHEMA_VERSION
    command: Optional[str] = None
    gen: Optional[str] = None
    shape: Optional[str] = None
    weight: Optional[str] = None
    measure: Optional[str] = None
    epsilon: Optional[float] = None
    n_range: Optional[List[int]] = None
    n_max: Optional[int] = None
    j_offset: Optional[int] = None
    rtol: float = 1e-10
    max_iter: int = 200
    grid_base: int = 4096
    grid_density: float = 1.0
    parallelism: int = 1
    output_dir: str = field(default_factory=default_output_dir)
    strict: bool = False
    seed: int = 0

    def __post_init__(self):
        if self.schema_version != SCHEMA_VERSION:
            raise ConfigError("schema_version", f"unsupported version {self.schema_version}, expected {SCHEMA_VERSION}")
        validate_run_config(self.to_dict())

    @classmethod
    def field_names(cls) -> List[str]:
        return [f.name for f in fields(cls)]

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "RunConfig":
        """Build from a mapping, rejecting unknown fields"""
        if not isinstance(data, dict):
            raise ConfigError("config", "expected a JSON object")
        validate_known_fields(data, cls.field_names())
        return cls(**data)

    @classmethod
    def from_json(cls, path) -> "RunConfig":
        try:
            with open(Path(path), encoding="utf-8") as fh:
                data = json.load(fh)
        except OSError as exc:
            raise ConfigError("config", f"cannot read {path}: {exc.strerror}")
        except json.JSONDecodeError as exc:
            raise ConfigError("config", f"invalid JSON in {path}: {exc.msg}")
        return cls.from_dict(data)

    def merged(self, **overrides) -> "RunConfig":
        """Copy with every non-None override applied (command-line flags win over the file)"""
        changes = {k: v for k, v in overrides.items() if v is not None}
        validate_known_fields(changes, self.field_names())
        return replace(self, **changes)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)
