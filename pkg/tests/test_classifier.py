"""Tests for admissible levels and the classification of simple modules."""

from fractions import Fraction

import pytest

from subreg.cartan import ZERO
from subreg.classifier import (
    Form,
    LevelKind,
    OutOfRangeError,
    UnsupportedLevelError,
    admissible_levels,
    classify_level,
    conformal_dimension_and_charge,
    enumerate_modules,
    eqweight_congruences,
    hw_weight,
    is_admissible_at,
    label_count,
    make_label,
    module_table,
    phi_eigenvalues,
    phi_label,
    phi_orbits,
    psi_eigenvalues,
    psi_label,
    psi_orbits,
    psi_power,
    psi_squared_label,
    require_supported,
    search_weights,
    vacuum_relation,
)
from subreg.qzseries import format_rational

F = Fraction

PRINCIPAL = classify_level(F(-5, 3))
COPRINCIPAL = classify_level(F(-7, 4))

# (xi, chi) of the nine simple modules at k = -5/3
MINUS_FIVE_THIRDS = {
    (F(0), F(0)),
    (F(-1, 3), F(1, 6)),
    (F(-2, 3), F(2, 3)),
    (F(0), F(1, 2)),
    (F(-1, 3), F(2, 3)),
    (F(1, 3), F(1, 6)),
    (F(-1, 2), F(7, 16)),
    (F(1, 6), F(5, 48)),
    (F(-1, 6), F(5, 48)),
}

# psi cycles at k = -5/3, as (s, i, j)
SIX_CYCLE = [
    ("1", 1, 1),
    ("3", 1, 2),
    ("2", 2, 1),
    ("1", 1, 2),
    ("3", 2, 1),
    ("2", 1, 1),
]
THREE_CYCLE = [("1", 2, 1), ("3", 1, 1), ("2", 1, 2)]


def _by_weights(level, xi, chi):
    return next(
        label
        for label in enumerate_modules(level)
        if (label.xi, label.chi) == (xi, chi)
    )


def _levels():
    return admissible_levels(3, 8, 4) + admissible_levels(4, 8, 4)


class TestClassifyLevel:
    """Tests for classify_level and admissible_levels."""

    def test_principal(self):
        assert PRINCIPAL.kind is LevelKind.PRINCIPAL
        assert (PRINCIPAL.p, PRINCIPAL.q) == (4, 3)
        assert PRINCIPAL.t == F(4, 3)

    def test_coprincipal(self):
        assert COPRINCIPAL.kind is LevelKind.COPRINCIPAL
        assert (COPRINCIPAL.p, COPRINCIPAL.q) == (5, 4)

    def test_critical(self):
        assert classify_level(-3).kind is LevelKind.CRITICAL

    @pytest.mark.parametrize("k", [F(-2), F(-13, 5), F(-7)])
    def test_non_admissible(self, k):
        assert classify_level(k).kind is LevelKind.NON_ADMISSIBLE

    @pytest.mark.parametrize("k", [F(0), F(1, 2)])
    def test_other_admissible(self, k):
        level = classify_level(k)
        assert level.kind is LevelKind.OTHER_ADMISSIBLE
        assert not level.is_supported
        with pytest.raises(UnsupportedLevelError):
            require_supported(level)

    def test_parses_strings(self):
        assert classify_level("-5/3") == PRINCIPAL

    def test_admissible_levels_skip_shared_factors(self):
        assert [level.p for level in admissible_levels(3, 8)] == [4, 5, 7, 8]
        assert [level.p for level in admissible_levels(4, 8)] == [5, 7]

    def test_admissible_levels_reject_other_denominators(self):
        with pytest.raises(UnsupportedLevelError):
            admissible_levels(5, 10)


class TestLabels:
    """Tests for labels and their (xi, chi)."""

    def test_nine_modules_at_minus_five_thirds(self):
        labels = enumerate_modules(PRINCIPAL)
        assert len(labels) == 9
        assert {(label.xi, label.chi) for label in labels} == MINUS_FIVE_THIRDS

    def test_eighteen_modules_at_p_five(self):
        assert len(enumerate_modules(classify_level(F(-4, 3)))) == 18

    def test_four_modules_at_minus_seven_quarters(self):
        labels = enumerate_modules(COPRINCIPAL)
        assert len(labels) == 4
        assert {label.s for label in labels} == {Form.ONE_PRIME, Form.TWO_PRIME}

    def test_count_matches_enumeration(self):
        for level in _levels():
            assert label_count(level) == len(enumerate_modules(level))

    def test_known_values(self):
        label = make_label(Form.ONE, 1, 2, PRINCIPAL)
        assert (label.xi, label.chi) == (0, F(1, 2))
        label = make_label(Form.THREE, 1, 1, PRINCIPAL)
        assert (label.xi, label.chi) == (F(1, 6), F(5, 48))

    def test_vacuum(self):
        for level in (PRINCIPAL, COPRINCIPAL):
            vacuum = make_label(level.forms[0], 1, 1, level)
            assert (vacuum.xi, vacuum.chi) == (0, 0)
            assert vacuum.top_dim == 1

    def test_out_of_range(self):
        with pytest.raises(OutOfRangeError, match="out of range"):
            make_label(Form.ONE, 3, 1, PRINCIPAL)

    def test_wrong_form_for_level(self):
        with pytest.raises(OutOfRangeError, match="does not occur"):
            make_label(Form.ONE_PRIME, 1, 1, PRINCIPAL)

    def test_unsupported_level(self):
        with pytest.raises(UnsupportedLevelError):
            make_label(Form.ONE, 1, 1, classify_level(F(1, 2)))

    def test_form_parse(self):
        assert Form.parse("2p") is Form.TWO_PRIME
        assert Form.parse("1′") is Form.ONE_PRIME
        assert Form.parse(" 3 ") is Form.THREE
        assert Form.TWO_PRIME.slug == "2p"
        with pytest.raises(OutOfRangeError):
            Form.parse("4")


class TestTwist:
    """Tests for psi on labels."""

    def test_vacuum_image(self):
        vacuum = make_label(Form.ONE, 1, 1, PRINCIPAL)
        image = psi_label(vacuum, PRINCIPAL)
        assert (image.xi, image.chi) == (F(-1, 3), F(1, 6))

    def test_orbits_at_minus_five_thirds(self):
        """One orbit of length six and one of length three."""
        orbits = psi_orbits(PRINCIPAL)
        assert sorted(len(orbit) for orbit in orbits) == [3, 6]

    @pytest.mark.parametrize("cycle", [SIX_CYCLE, THREE_CYCLE])
    def test_cycles_at_minus_five_thirds(self, cycle):
        label = make_label(*cycle[0], PRINCIPAL)
        for expected in cycle[1:] + cycle[:1]:
            label = psi_label(label, PRINCIPAL)
            assert label.key == expected

    def test_orbits_partition_minus_five_thirds(self):
        orbits = psi_orbits(PRINCIPAL)
        keys = {frozenset(label.key for label in orbit) for orbit in orbits}
        assert keys == {frozenset(SIX_CYCLE), frozenset(THREE_CYCLE)}

    def test_period_returns_every_label(self):
        """psi^6 at principal levels and psi^4 at coprincipal levels."""
        for level in _levels():
            period = 6 if level.kind is LevelKind.PRINCIPAL else 4
            for label in enumerate_modules(level):
                image = label
                for _ in range(period):
                    image = psi_label(image, level)
                assert image == label

    def test_coprincipal_period_four(self):
        for label in enumerate_modules(COPRINCIPAL):
            assert psi_power(label, COPRINCIPAL, 4) == label

    def test_orbit_sizes_divide_period(self):
        for level in _levels():
            period = 6 if level.kind is LevelKind.PRINCIPAL else 4
            assert all(period % len(orbit) == 0 for orbit in psi_orbits(level))

    def test_squared_matches_composition(self):
        for level in _levels():
            for label in enumerate_modules(level):
                twice = psi_label(psi_label(label, level), level)
                assert twice == psi_squared_label(label, level)

    def test_image_weights_follow_top(self):
        """The image of L(xi, chi) has the weights shifted by the top dimension."""
        k = PRINCIPAL.k
        for label in enumerate_modules(PRINCIPAL):
            image = psi_label(label, PRINCIPAL)
            expected = psi_eigenvalues(label.xi, label.chi, label.top_dim, k)
            assert (image.xi, image.chi) == expected

    def test_vacuum_relation_vanishes(self):
        assert vacuum_relation(PRINCIPAL) == 0
        assert vacuum_relation(COPRINCIPAL) == 0


class TestComponentGroup:
    """Tests for phi on labels."""

    def test_swaps_pair(self):
        left = _by_weights(PRINCIPAL, F(-1, 3), F(1, 6))
        right = phi_label(left, PRINCIPAL)
        assert (right.xi, right.chi) == (F(1, 3), F(1, 6))

    @pytest.mark.parametrize(
        "xi,chi", [(F(0), F(0)), (F(0), F(1, 2)), (F(-1, 2), F(7, 16))]
    )
    def test_fixed_modules(self, xi, chi):
        label = _by_weights(PRINCIPAL, xi, chi)
        assert phi_label(label, PRINCIPAL) == label

    def test_involution(self):
        for level in _levels():
            for label in enumerate_modules(level):
                assert phi_label(phi_label(label, level), level) == label

    def test_orbit_count(self):
        """Three fixed modules and three swapped pairs."""
        assert len(phi_orbits(PRINCIPAL)) == 6

    @pytest.mark.parametrize(
        "left,right",
        [
            (("2", 1, 1), ("3", 1, 2)),
            (("2", 1, 2), ("3", 1, 1)),
            (("2", 2, 1), ("3", 2, 1)),
        ],
    )
    def test_swapped_pairs_at_minus_five_thirds(self, left, right):
        assert phi_label(make_label(*left, PRINCIPAL), PRINCIPAL).key == right
        assert phi_label(make_label(*right, PRINCIPAL), PRINCIPAL).key == left

    def test_form_one_is_fixed_at_minus_five_thirds(self):
        fixed = [
            label
            for label in enumerate_modules(PRINCIPAL)
            if phi_label(label, PRINCIPAL) == label
        ]
        assert sorted(label.key for label in fixed) == [
            ("1", 1, 1),
            ("1", 1, 2),
            ("1", 2, 1),
        ]

    def test_image_weights(self):
        for level in _levels():
            for label in enumerate_modules(level):
                image = phi_label(label, level)
                expected = phi_eigenvalues(label.xi, label.chi, label.top_dim)
                assert (image.xi, image.chi) == expected

    def test_eigenvalues_flip_charge(self):
        assert phi_eigenvalues(F(-1, 3), F(1, 6), 1) == (F(1, 3), F(1, 6))
        assert phi_eigenvalues(F(-1, 2), F(7, 16), 2) == (F(-1, 2), F(7, 16))


class TestHighestWeights:
    """Tests for the highest weights behind each label."""

    def test_zero_weight(self):
        assert conformal_dimension_and_charge(ZERO, PRINCIPAL) == (0, 0)

    def test_untwisted_weights_are_exact(self):
        for level in (PRINCIPAL, COPRINCIPAL):
            for label in enumerate_modules(level):
                if label.s in (Form.ONE, Form.ONE_PRIME):
                    lam = hw_weight(label, level)
                    found = conformal_dimension_and_charge(lam, level)
                    assert found == (label.chi, label.xi)

    def test_weights_are_admissible_and_congruent(self):
        for level in (PRINCIPAL, COPRINCIPAL):
            for label in enumerate_modules(level):
                lam = hw_weight(label, level)
                assert is_admissible_at(lam, level)
                assert eqweight_congruences(lam, label, level)

    def test_search_finds_selected_weight(self):
        for label in enumerate_modules(PRINCIPAL):
            assert hw_weight(label, PRINCIPAL) in search_weights(label, PRINCIPAL)


class TestModuleTable:
    """Tests for module_table rows."""

    def test_rows_cover_all_labels(self):
        table = module_table(PRINCIPAL)
        assert [row.label for row in table] == enumerate_modules(PRINCIPAL)

    def test_json_row(self):
        row = module_table(PRINCIPAL)[0]
        data = row.to_json_dict()
        assert data["s"] == "1"
        assert (data["i"], data["j"]) == (1, 1)
        assert data["xi"] == "0/1"
        assert data["psi_image"] == {"s": "3", "i": 1, "j": 2}

    def test_json_row_rationals(self):
        row = next(r for r in module_table(PRINCIPAL) if r.label.key == ("3", 1, 1))
        data = row.to_json_dict()
        assert (data["xi"], data["chi"]) == ("1/6", "5/48")
        assert data["xi"] == format_rational(row.label.xi)
