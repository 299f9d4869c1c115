"""Tests for the on-disk character cache."""

import json
from fractions import Fraction

import pytest

from subreg import cache as character_cache
from subreg.classifier import Form, classify_level, make_label
from subreg.qzseries import QZSeries

LEVEL = classify_level(Fraction(-5, 3))
LABEL = make_label(Form.ONE, 1, 2, LEVEL)


def _series() -> QZSeries:
    return QZSeries.from_terms(
        LABEL.chi, LABEL.xi, 1, (0, 1), [((0, 0), 1), ((1, 0), 2), ((1, 1), 1)]
    )


class TestCachePath:
    """Tests for cache_path()."""

    def test_layout(self, tmp_path):
        path = character_cache.cache_path(tmp_path, LEVEL, LABEL, 6)
        assert path == tmp_path / "principal-p4" / "1-1-2-N6.json"

    def test_primed_forms_use_slug(self, tmp_path):
        level = classify_level(Fraction(-7, 4))
        label = make_label(Form.TWO_PRIME, 1, 1, level)
        path = character_cache.cache_path(tmp_path, level, label, 3)
        assert path.name == "2p-1-1-N3.json"
        assert path.parent.name == "coprincipal-p5"


class TestLoadAndSave:
    """Tests for load_character() and save_character()."""

    def test_missing_entry(self, tmp_path):
        assert character_cache.load_character(tmp_path / "missing.json") is None

    def test_save_then_load(self, tmp_path):
        path = tmp_path / "principal-p4" / "entry.json"
        character_cache.save_character(path, _series())
        assert path.exists()
        assert character_cache.load_character(path) == _series()

    def test_no_temporary_files_left(self, tmp_path):
        path = tmp_path / "entry.json"
        character_cache.save_character(path, _series())
        assert [p.name for p in tmp_path.iterdir()] == ["entry.json"]

    def test_failed_write_removes_temporary_file(self, tmp_path, monkeypatch):
        def broken_dump(*args, **kwargs):
            raise TypeError("not serializable")

        monkeypatch.setattr(character_cache.json, "dump", broken_dump)
        with pytest.raises(TypeError):
            character_cache.save_character(tmp_path / "entry.json", _series())
        assert list(tmp_path.iterdir()) == []

    def test_corrupt_entry_is_ignored(self, tmp_path):
        path = tmp_path / "entry.json"
        path.write_text("{not json")
        assert character_cache.load_entry(path) == {}
        assert character_cache.load_character(path) is None

    def test_non_object_entry_is_ignored(self, tmp_path):
        path = tmp_path / "entry.json"
        path.write_text("[1, 2]")
        assert character_cache.load_entry(path) == {}

    def test_other_format_version_is_ignored(self, tmp_path):
        path = tmp_path / "entry.json"
        character_cache.save_character(path, _series())
        entry = json.loads(path.read_text())
        entry["format_version"] = character_cache.CACHE_FORMAT_VERSION + 1
        path.write_text(json.dumps(entry))
        assert character_cache.load_character(path) is None

    def test_malformed_series_is_ignored(self, tmp_path):
        path = tmp_path / "entry.json"
        entry = {"format_version": character_cache.CACHE_FORMAT_VERSION, "series": {}}
        path.write_text(json.dumps(entry))
        assert character_cache.load_character(path) is None


class TestCachedCharacter:
    """Tests for cached_character() and clear_cache()."""

    def test_without_cache_dir(self, tmp_path, monkeypatch):
        calls = []

        def fake_character(label, level, order):
            calls.append((label, order))
            return _series()

        monkeypatch.setattr("subreg.characters.character", fake_character)
        result = character_cache.cached_character(LABEL, LEVEL, 1, None)
        assert result == _series()
        assert calls == [(LABEL, 1)]
        assert list(tmp_path.iterdir()) == []

    def test_computes_once(self, tmp_path, monkeypatch):
        calls = []

        def fake_character(label, level, order):
            calls.append(order)
            return _series()

        monkeypatch.setattr("subreg.characters.character", fake_character)
        first = character_cache.cached_character(LABEL, LEVEL, 1, tmp_path)
        second = character_cache.cached_character(LABEL, LEVEL, 1, tmp_path)
        assert first == second == _series()
        assert calls == [1]
        assert character_cache.cache_path(tmp_path, LEVEL, LABEL, 1).exists()

    def test_real_character_is_cached(self, tmp_path):
        vacuum = make_label(Form.ONE, 1, 1, LEVEL)
        computed = character_cache.cached_character(vacuum, LEVEL, 1, tmp_path)
        path = character_cache.cache_path(tmp_path, LEVEL, vacuum, 1)
        assert character_cache.load_character(path) == computed

    def test_clear_cache(self, tmp_path):
        cache_dir = tmp_path / "cache"
        character_cache.save_character(cache_dir / "a" / "b.json", _series())
        assert character_cache.clear_cache(cache_dir) is True
        assert not cache_dir.exists()

    def test_clear_missing_cache(self, tmp_path):
        assert character_cache.clear_cache(tmp_path / "cache") is False
