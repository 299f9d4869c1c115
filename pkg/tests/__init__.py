# Tests for subreg
