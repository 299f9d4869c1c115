"""Configuration loading for subreg.

Settings live in ``.subreg/config.toml``, found in the working directory or one
of its parents. Every key is optional; a missing file means the defaults.
"""

import os
import tomllib
from collections.abc import Callable
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Any

from .logging import warning
from .resources import expand_path

CONFIG_DIR = ".subreg"
CACHE_DIR_ENV = "SUBREG_CACHE_DIR"
OUTPUT_FORMATS = ("text", "json", "csv")

# A rule checks one raw TOML value and returns the value to store. Its error
# messages omit the location, which _load_section prepends.
Rule = Callable[[object], object]


def _similarity(a: str, b: str) -> float:
    """1 - (Levenshtein distance / longer length)."""
    if not a or not b:
        return 0.0
    previous = list(range(len(b) + 1))
    for i, ca in enumerate(a, 1):
        current = [i]
        for j, cb in enumerate(b, 1):
            current.append(
                min(previous[j] + 1, current[j - 1] + 1, previous[j - 1] + (ca != cb))
            )
        previous = current
    return 1.0 - previous[-1] / max(len(a), len(b))


def _find_similar(key: str, valid_keys: set[str], threshold: float = 0.6) -> str | None:
    scored = [(_similarity(key.lower(), k.lower()), k) for k in sorted(valid_keys)]
    score, best = max(scored, default=(0.0, ""))
    return best if score >= threshold else None


def _warn_unknown_keys(
    data: dict[str, Any], valid_keys: set[str], section: str, config_path: Path
) -> None:
    for key in sorted(set(data) - valid_keys):
        msg = f"Unknown config key '{key}' in [{section}] in {config_path}"
        similar = _find_similar(key, valid_keys)
        if similar:
            msg += f". Did you mean '{similar}'?"
        warning(msg)


def _of_type(expected: type, label: str) -> Rule:
    def check(value: object) -> object:
        # exact type: TOML true is not an integer
        if type(value) is not expected:
            raise TypeError(f"must be {label}, got {type(value).__name__}")
        return value

    return check


def _at_least(minimum: int) -> Rule:
    is_int = _of_type(int, "an integer")

    def check(value: object) -> object:
        number = is_int(value)
        assert isinstance(number, int)
        if number < minimum:
            raise ValueError(f"must be >= {minimum}, got {number}")
        return number

    return check


def _one_of(choices: tuple[str, ...]) -> Rule:
    is_str = _of_type(str, "a string")

    def check(value: object) -> object:
        text = is_str(value)
        if text not in choices:
            raise ValueError(f"must be one of {', '.join(choices)}, got {text!r}")
        return text

    return check


def _path_string(value: object) -> object:
    return expand_path(str(_of_type(str, "a string")(value)))


@dataclass
class ComputeConfig:
    """Defaults for computations."""

    default_order: int = 8
    parallelism: int = 1


@dataclass
class OutputConfig:
    format: str = "text"


@dataclass
class CacheConfig:
    """Character result cache."""

    dir: str = f"{CONFIG_DIR}/cache"
    enabled: bool = True


SECTIONS: dict[str, tuple[type[Any], dict[str, Rule]]] = {
    "compute": (
        ComputeConfig,
        {"default_order": _at_least(0), "parallelism": _at_least(1)},
    ),
    "output": (OutputConfig, {"format": _one_of(OUTPUT_FORMATS)}),
    "cache": (
        CacheConfig,
        {"dir": _path_string, "enabled": _of_type(bool, "a boolean")},
    ),
}


def _load_section(data: dict[str, Any], section: str, defaults: Any, path: Path) -> Any:
    """Merge the ``[section]`` table of ``data`` over ``defaults``."""
    table = data.get(section)
    if table is None:
        return defaults
    if not isinstance(table, dict):
        raise TypeError(
            f"Config section [{section}] in {path} must be a table, "
            f"got {type(table).__name__}"
        )
    cls, rules = SECTIONS[section]
    _warn_unknown_keys(table, {f.name for f in fields(cls)}, section, path)
    values = {}
    for key, rule in rules.items():
        if key not in table:
            continue
        try:
            values[key] = rule(table[key])
        except (TypeError, ValueError) as e:
            raise type(e)(f"Config [{section}].{key} in {path} {e}") from None
    return replace(defaults, **values)


@dataclass
class Config:
    """Loaded settings plus where they came from."""

    compute: ComputeConfig = field(default_factory=ComputeConfig)
    output: OutputConfig = field(default_factory=OutputConfig)
    cache: CacheConfig = field(default_factory=CacheConfig)

    project_path: Path | None = None
    config_path: Path | None = None

    @classmethod
    def load(cls, config_path: Path) -> "Config":
        """Load ``config_path`` over the defaults.

        The project directory is the parent of ``.subreg``. A missing file
        yields the defaults.

        Raises:
            IsADirectoryError: ``config_path`` is a directory.
            TypeError: A section or value has the wrong type.
            ValueError: A value is out of range.
            tomllib.TOMLDecodeError: The file is not valid TOML.
        """
        config = cls(project_path=config_path.parent.parent, config_path=config_path)
        if not config_path.exists():
            return config
        if not config_path.is_file():
            raise IsADirectoryError(f"{config_path} is not a file")

        with config_path.open("rb") as f:
            data = tomllib.load(f)

        _warn_unknown_keys(data, set(SECTIONS), "top-level", config_path)
        config.compute = _load_section(data, "compute", config.compute, config_path)
        config.output = _load_section(data, "output", config.output, config_path)
        config.cache = _load_section(data, "cache", config.cache, config_path)
        return config

    @classmethod
    def find_and_load(cls, start_path: Path | None = None) -> "Config":
        """Load the nearest config file, or defaults rooted at ``start_path``."""
        start_path = (start_path or Path.cwd()).resolve()
        config_path = cls.find_config(start_path)
        if config_path is None:
            return cls(project_path=start_path)
        return cls.load(config_path)

    @staticmethod
    def find_config(start_path: Path) -> Path | None:
        """Search ``start_path`` and its parents for .subreg/config.toml."""
        for directory in (start_path.resolve(), *start_path.resolve().parents):
            candidate = directory / CONFIG_DIR / "config.toml"
            if candidate.exists():
                return candidate
        return None

    def get_subreg_dir(self) -> Path:
        return (self.project_path or Path.cwd()) / CONFIG_DIR

    def get_cache_dir(self) -> Path:
        """The cache directory; SUBREG_CACHE_DIR wins over the config file."""
        raw = os.environ.get(CACHE_DIR_ENV) or self.cache.dir
        path = Path(expand_path(raw))
        if not path.is_absolute():
            path = (self.project_path or Path.cwd()) / path
        return path
