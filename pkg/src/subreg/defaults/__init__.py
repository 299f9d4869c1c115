"""Bundled default resources for subreg."""
