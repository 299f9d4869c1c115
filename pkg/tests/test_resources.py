"""Tests for the resources module."""

from subreg.resources import expand_path, read_package_text


class TestExpandPath:
    """Tests for expand_path."""

    def test_expands_tilde(self, monkeypatch, tmp_path):
        monkeypatch.setenv("HOME", str(tmp_path))
        assert expand_path("~/cache") == f"{tmp_path}/cache"

    def test_empty_string(self):
        assert expand_path("") == ""

    def test_leaves_other_paths(self):
        assert expand_path("/abs/cache") == "/abs/cache"
        assert expand_path(".subreg/cache") == ".subreg/cache"


class TestReadPackageText:
    """Tests for read_package_text."""

    def test_reads_bundled_config(self):
        text = read_package_text("subreg.defaults", "config.toml")
        assert text is not None
        assert "[compute]" in text
        assert "default_order" in text

    def test_missing_file(self):
        assert read_package_text("subreg.defaults", "nope.toml") is None

    def test_missing_package(self):
        assert read_package_text("subreg.no_such_package", "config.toml") is None
