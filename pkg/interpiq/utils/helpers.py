"""
Parsing and formatting helpers shared by the CLI and the reporter
"""

import hashlib
import json
import re
from pathlib import Path
from typing import Any, Dict, List, Tuple

from .validators import ConfigError

_SPEC_PATTERN = re.compile(r"^\s*([A-Za-z][\w\-]*)\s*(?::\s*(.*))?$")
_RANGE_PATTERN = re.compile(r"^\s*(-?\d+)\s*(?:\.\.\s*(-?\d+))?\s*$")


def parse_spec(text: str, field: str = "spec") -> Tuple[str, List[str]]:
    """
    Split a ``family:arg1,arg2`` spec string.

    Args:
        text: spec such as ``radial:0.5,30`` or ``psi:1``
        field: config field name used in error reports

    Returns:
        (family, raw argument strings)
    """
    if text is None:
        raise ConfigError(field, "missing value")
    match = _SPEC_PATTERN.match(text)
    if not match:
        raise ConfigError(field, f"cannot parse '{text}'")
    family = match.group(1).lower()
    raw = match.group(2)
    args = [part.strip() for part in raw.split(",")] if raw else []
    return family, [a for a in args if a]


def parse_floats(args: List[str], field: str, count: int = None) -> List[float]:
    """Convert spec arguments to floats, optionally enforcing their number"""
    if count is not None and len(args) != count:
        raise ConfigError(field, f"expected {count} argument(s), got {len(args)}")
    try:
        return [float(a) for a in args]
    except ValueError:
        raise ConfigError(field, f"non-numeric argument in {args}")


def parse_range(text: str, field: str = "n_range") -> List[int]:
    """Parse ``8..14`` (inclusive) or a single integer"""
    match = _RANGE_PATTERN.match(str(text))
    if not match:
        raise ConfigError(field, f"expected 'a..b', got '{text}'")
    start = int(match.group(1))
    stop = int(match.group(2)) if match.group(2) is not None else start
    if stop < start:
        raise ConfigError(field, f"empty range {start}..{stop}")
    return list(range(start, stop + 1))


def sha256_file(path: Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            digest.update(chunk)
    return digest.hexdigest()


def write_json(data: Dict[str, Any], path: Path) -> Path:
    """Write JSON with sorted keys and a trailing newline (byte-stable)"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(data, fh, indent=2, sort_keys=True, allow_nan=True)
        fh.write("\n")
    return path
