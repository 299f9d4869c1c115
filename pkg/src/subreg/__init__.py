"""subreg - exact characters and simple modules of the subregular W-algebra of sp4."""

__version__ = "0.1.0"
