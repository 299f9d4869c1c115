"""Access to files bundled with the package, and path helpers."""

import importlib.resources
import os

_PACKAGE_RESOURCE_ERRORS = (
    FileNotFoundError,
    ImportError,
    ModuleNotFoundError,
    TypeError,
)


def expand_path(path: str) -> str:
    """Expand a leading ~ in ``path``."""
    return os.path.expanduser(path) if path else path


def read_package_text(package: str, filename: str) -> str | None:
    """Read a text resource such as ``("subreg.defaults", "config.toml")``.

    Returns:
        The file contents, or None when the package or file is missing.
    """
    try:
        resource = importlib.resources.files(package).joinpath(filename)
        if not resource.is_file():
            return None
        return resource.read_text(encoding="utf-8")
    except _PACKAGE_RESOURCE_ERRORS:
        return None
