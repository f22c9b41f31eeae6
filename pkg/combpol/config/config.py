import sys
from pathlib import Path
from typing import Any, Dict

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from ..errors import ParseError

CONFIG_PATH = Path(__file__).parent / "config.toml"
DEFAULT_PROFILE = "default"

DEFAULTS: Dict[str, int] = {
    "table_budget": 2 ** 20,
    "homogeneity_budget": 2 ** 16,
    "linearity_budget": 2 ** 20,
    "sample_count": 1000,
    "seed": 20240601,
    "expansion_budget": 2_000_000,
    "chain_limit": 10_000,
    "field_table_limit": 256,
}


def read_profiles(path: Path = CONFIG_PATH) -> Dict[str, Dict[str, Any]]:
    """All profile tables of the TOML file ({} when the file is missing)"""
    if not path.exists():
        return {}
    try:
        with open(path, "rb") as f:
            data = tomllib.load(f)
    except tomllib.TOMLDecodeError as e:
        raise ParseError(f"Invalid TOML in {path}: {e}")
    return {name: table for name, table in data.items() if isinstance(table, dict)}


def load_config(profile: str = DEFAULT_PROFILE, path: Path = CONFIG_PATH) -> Dict[str, int]:
    """Built-in defaults, overlaid by [default], overlaid by the named profile.

    An unknown profile yields the [default] values.
    """
    profiles = read_profiles(path)
    conf = dict(DEFAULTS)
    for name in (DEFAULT_PROFILE, profile):
        for key, value in profiles.get(name, {}).items():
            if key not in DEFAULTS:
                continue
            try:
                conf[key] = int(value)
            except (TypeError, ValueError):
                raise ParseError(f"config key {key!r} in profile [{name}] must be an integer, got {value!r}")
    return conf


def list_profiles(path: Path = CONFIG_PATH) -> list:
    return sorted(read_profiles(path))
