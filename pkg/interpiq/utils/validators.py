"""
Configuration validation for InterpIQ runs
"""

from typing import Any, Dict, Iterable

MAX_N_MAX = 40
MAX_J_OFFSET = 32
MAX_PARALLELISM = 64
MAX_GRID_BASE = 1 << 20


class ConfigError(ValueError):
    """Invalid run configuration; carries a machine-readable field and reason"""

    def __init__(self, field: str, reason: str):
        self.field = field
        self.reason = reason
        super().__init__(f"{field}: {reason}")

    def to_dict(self) -> Dict[str, str]:
        return {"error": "config", "field": self.field, "reason": self.reason}


def validate_positive(value: Any, field: str) -> float:
    try:
        number = float(value)
    except (TypeError, ValueError):
        raise ConfigError(field, f"expected a number, got {value!r}")
    if not number > 0.0:
        raise ConfigError(field, f"must be > 0, got {number}")
    return number


def validate_int_range(value: Any, field: str, low: int, high: int) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(field, f"expected an integer, got {value!r}")
    if value < low or value > high:
        raise ConfigError(field, f"must lie in {low}..{high}, got {value}")
    return value


def validate_known_fields(data: Dict[str, Any], known: Iterable[str]) -> None:
    unknown = sorted(set(data) - set(known))
    if unknown:
        raise ConfigError(unknown[0], "unknown field")


def validate_run_config(fields: Dict[str, Any]) -> None:
    """
    Validate the fields of a run configuration

    Args:
        fields: RunConfig fields as a plain dictionary

    Raises:
        ConfigError: on the first invalid field
    """
    for name in ("rtol", "epsilon", "grid_density"):
        if fields.get(name) is not None:
            validate_positive(fields[name], name)

    if fields.get("rtol") is not None and fields["rtol"] >= 1e-2:
        raise ConfigError("rtol", "tolerance too loose (must be < 1e-2)")

    if fields.get("max_iter") is not None:
        validate_int_range(fields["max_iter"], "max_iter", 10, 10000)
    if fields.get("n_max") is not None:
        validate_int_range(fields["n_max"], "n_max", 2, MAX_N_MAX)
    if fields.get("j_offset") is not None:
        validate_int_range(fields["j_offset"], "j_offset", 1, MAX_J_OFFSET)
    if fields.get("parallelism") is not None:
        validate_int_range(fields["parallelism"], "parallelism", 1, MAX_PARALLELISM)
    if fields.get("grid_base") is not None:
        validate_int_range(fields["grid_base"], "grid_base", 16, MAX_GRID_BASE)

    n_range = fields.get("n_range")
    if n_range:
        if min(n_range) < 2 or max(n_range) > MAX_N_MAX:
            raise ConfigError("n_range", f"stages must lie in 2..{MAX_N_MAX}")
