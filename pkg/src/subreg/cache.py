"""On-disk cache of computed characters."""

import json
import os
import shutil
from pathlib import Path

from .classifier import Level, ModuleLabel
from .qzseries import QZSeries

# Bump when the stored series or the way characters are computed changes.
CACHE_FORMAT_VERSION = 1


def cache_path(cache_dir: Path, level: Level, label: ModuleLabel, order: int) -> Path:
    """``<cache_dir>/<class>-p<p>/<s>-<i>-<j>-N<order>.json``."""
    folder = cache_dir / f"{level.kind.value}-p{level.p}"
    return folder / f"{label.s.slug}-{label.i}-{label.j}-N{order}.json"


def load_entry(path: Path) -> dict:
    """Read a cache file, returning {} when it is missing or unreadable."""
    if path.exists():
        try:
            with open(path, encoding="utf-8") as f:
                data = json.load(f)
        except (json.JSONDecodeError, UnicodeDecodeError, OSError):
            return {}
        return data if isinstance(data, dict) else {}
    return {}


def load_character(path: Path) -> QZSeries | None:
    from .logging import debug

    entry = load_entry(path)
    if not entry:
        debug(f"cache miss: {path}")
        return None
    if entry.get("format_version") != CACHE_FORMAT_VERSION:
        debug(f"cache entry {path} has another format version; recomputing")
        return None
    try:
        series = QZSeries.from_json_dict(entry["series"])
    except (KeyError, TypeError, ValueError):
        debug(f"cache entry {path} is malformed; recomputing")
        return None
    debug(f"cache hit: {path}")
    return series


def save_character(path: Path, series: QZSeries) -> None:
    """Write an entry through an exclusively created temporary file."""
    path.parent.mkdir(parents=True, exist_ok=True)
    entry = {"format_version": CACHE_FORMAT_VERSION, "series": series.to_json_dict()}
    temporary = path.with_name(f".{path.name}.{os.getpid()}.tmp")
    try:
        f = open(temporary, "x", encoding="utf-8")
    except FileExistsError:
        return
    try:
        with f:
            json.dump(entry, f, sort_keys=True)
        os.replace(temporary, path)
    except BaseException:
        temporary.unlink(missing_ok=True)
        raise


def cached_character(
    label: ModuleLabel, level: Level, order: int, cache_dir: Path | None
) -> QZSeries:
    """The character of ``label``, read from or written to ``cache_dir`` if given."""
    from .characters import character

    if cache_dir is None:
        return character(label, level, order)
    path = cache_path(cache_dir, level, label, order)
    series = load_character(path)
    if series is None:
        series = character(label, level, order)
        save_character(path, series)
    return series


def clear_cache(cache_dir: Path) -> bool:
    """Remove the cache directory; False when there was nothing to remove."""
    if not cache_dir.exists():
        return False
    shutil.rmtree(cache_dir)
    return True
