"""Tests for the mode algebra and the highest-weight module oracle."""

from fractions import Fraction

import pytest

from subreg.cartan import central_charge
from subreg.modes import (
    GMINUS,
    GPLUS,
    INTEGRAL_LEVELS,
    ActionTable,
    CompositeMode,
    CompositeTag,
    DepthOverflowError,
    Generator,
    J,
    L,
    ModeExpression,
    TruncatedHWModule,
    _apply_mode,
    act,
    antisymmetry_check,
    basis,
    bracket_terms,
    clear_caches,
    commutator,
    depth,
    expand_composite,
    g_eigenvalue,
    g_oracle_check,
    h_closed_form,
    h_poly,
    jacobi_check,
    phi_bracket_check,
    phi_expression,
    psi_bracket_check,
    psi_mode,
    random_integral_module,
    top_relation_check,
)

K = Fraction(-5, 3)


@pytest.fixture
def module():
    return TruncatedHWModule(Fraction(1, 3), Fraction(2, 5), K, 3)


class TestCommutators:
    """Tests for brackets between modes."""

    def test_heisenberg(self):
        assert commutator(J(2), J(-2), K, 2) == ModeExpression.scalar(2 * (2 + K))
        assert commutator(J(1), J(1), K, 2).is_zero()

    def test_j_charges_g(self):
        assert commutator(J(0), GPLUS(-1), K, 2) == ModeExpression.of(GPLUS(-1))
        assert commutator(J(1), GMINUS(-2), K, 2) == ModeExpression.of(
            GMINUS(-1), coeff=-1
        )

    def test_l_is_virasoro(self):
        bracket = commutator(L(1), L(-1), K, 2)
        assert bracket == ModeExpression.of(L(0), coeff=2)

    def test_g_plus_anticommute_trivially(self):
        assert commutator(GPLUS(0), GPLUS(-1), K, 2).is_zero()

    def test_reversed_order_negates(self):
        forward = commutator(GPLUS(1), GMINUS(-1), K, 3)
        backward = commutator(GMINUS(-1), GPLUS(1), K, 3)
        assert (forward + backward).is_zero()

    @pytest.mark.parametrize("m", [2, 3])
    def test_g_central_term(self, m):
        """The scalar part of [G+_m, G-_-m] is -(1+k)(2+k)^2 (m^3 - m) / 2."""
        bracket = commutator(GPLUS(m), GMINUS(-m), K, 0)
        expected = -(1 + K) * (2 + K) ** 2 * (m**3 - m) / 2
        assert bracket.terms.get((), 0) == expected

    def test_antisymmetry_check_passes(self):
        report = antisymmetry_check(1, K)
        assert report.passed, report.violations
        assert report.checked == 144

    def test_composite_square_at_zero(self):
        expanded = expand_composite(CompositeMode(CompositeTag.J2, 0), 0)
        assert expanded == ModeExpression.of(J(0), J(0))

    def test_composite_beyond_cutoff_vanishes(self):
        assert expand_composite(CompositeMode(CompositeTag.LJ, 3), 1).is_zero()


class TestModuleAction:
    """Tests for the action on a truncated highest-weight module."""

    def test_zero_modes_are_diagonal(self, module):
        v = module.vacuum()
        assert act(ModeExpression.of(J(0)), v, module) == {(): module.xi}
        assert act(ModeExpression.of(L(0)), v, module) == {(): module.chi}

    def test_annihilators_kill_vacuum(self, module):
        v = module.vacuum()
        assert act(ModeExpression.of(GPLUS(1)), v, module) == {}
        assert act(ModeExpression.of(GMINUS(0)), v, module) == {}
        assert act(ModeExpression.of(L(1)), v, module) == {}

    def test_creation_is_normal_ordered(self, module):
        state = act(ModeExpression.of(J(-1), GPLUS(0)), module.vacuum(), module)
        assert state == {(J(-1), GPLUS(0)): Fraction(1)}

    def test_g_plus_raises_charge(self, module):
        state = act(ModeExpression.of(GPLUS(0)), module.vacuum(), module)
        result = act(ModeExpression.of(J(0)), state, module)
        assert result == {(GPLUS(0),): module.xi + 1}

    def test_depth_overflow(self):
        shallow = TruncatedHWModule(0, 0, K, 1)
        with pytest.raises(DepthOverflowError):
            act(ModeExpression.of(L(-2)), shallow.vacuum(), shallow)

    def test_basis_at_depth_one(self):
        """The vacuum, four depth-one modes, G+_0, and G+_0 after each of them."""
        assert len(basis(TruncatedHWModule(0, 0, K, 1))) == 10


class TestClosedForms:
    """Tests for g and h_i."""

    def test_g_vanishes_on_one_dimensional_top(self):
        assert g_eigenvalue(Fraction(-1, 3), Fraction(1, 6), K) == 0

    def test_h1_is_g(self):
        xi, chi = Fraction(2, 7), Fraction(-1, 4)
        assert h_poly(1, xi, chi, K) == g_eigenvalue(xi, chi, K)

    def test_h_sum_matches_closed_form(self):
        xi, chi = Fraction(1, 6), Fraction(5, 48)
        for i in range(1, 6):
            assert h_poly(i, xi, chi, K) == h_closed_form(i, xi, chi, K)

    def test_h_needs_positive_index(self):
        with pytest.raises(ValueError):
            h_poly(0, Fraction(0), Fraction(0), K)

    def test_g_oracle(self):
        report = g_oracle_check(samples=5)
        assert report.passed, report.violations

    def test_top_relation(self):
        report = top_relation_check(Fraction(1, 6), Fraction(5, 48), K, max_power=3)
        assert report.passed, report.violations


class TestAutomorphisms:
    """Tests for the twist psi and the involution phi."""

    def test_psi_shifts_zero_modes(self):
        assert psi_mode(J(0), K) == ModeExpression.of(J(0)) - ModeExpression.scalar(
            2 + K
        )
        assert psi_mode(GPLUS(0), K) == ModeExpression.of(GPLUS(-1))
        assert psi_mode(GMINUS(0), K) == ModeExpression.of(GMINUS(1))

    def test_phi_is_involution(self):
        expr = ModeExpression.of(J(1), GPLUS(-1), coeff=3) + ModeExpression.of(L(-2))
        assert phi_expression(phi_expression(expr)) == expr

    def test_phi_swaps_g(self):
        assert phi_expression(ModeExpression.of(GPLUS(2))) == ModeExpression.of(
            GMINUS(2)
        )

    def test_psi_preserves_brackets(self):
        report = psi_bracket_check(1, 1)
        assert report.passed, report.violations

    def test_phi_preserves_brackets(self):
        report = phi_bracket_check(1, 1)
        assert report.passed, report.violations


class TestJacobi:
    """Tests for the Jacobi identity through the module action."""

    @pytest.mark.parametrize(
        ("bound", "max_depth", "checked"), [(1, 1, 1824), (2, 1, 8008)]
    )
    def test_jacobi_passes(self, bound, max_depth, checked):
        report = jacobi_check(bound, max_depth)
        assert report.passed, report.violations[:3]
        assert report.checked == checked

    def test_jacobi_at_depth_two(self):
        report = jacobi_check(1, 2, seed=3)
        assert report.passed, report.violations[:3]

    def test_jacobi_on_rational_module(self, module):
        """Non-integral weights take the Fraction path."""
        report = jacobi_check(1, 1, module=module)
        assert report.passed, report.violations[:3]
        assert report.checked == 1824

    def test_jacobi_on_g_modes_at_larger_bound(self):
        report = jacobi_check(3, 2, generators=(Generator.GPLUS, Generator.GMINUS))
        assert report.passed, report.violations[:3]
        assert report.checked > 0

    def test_workers_split_the_same_checks(self):
        serial = jacobi_check(1, 1, seed=5)
        parallel = jacobi_check(1, 1, seed=5, parallelism=2)
        assert parallel.passed, parallel.violations[:3]
        assert parallel.checked == serial.checked

    def test_jacobiator_on_vacuum(self):
        table = ActionTable(random_integral_module(8))
        assert table.jacobiator(GPLUS(1), GMINUS(-1), L(-1), ()) == {}
        assert table.jacobiator(J(-1), GPLUS(0), GMINUS(1), ()) == {}

    def test_bracket_column_matches_expanded_commutator(self):
        target = random_integral_module(6, seed=2)
        table = ActionTable(target)
        monomial = (J(-1), GMINUS(-1))
        expanded = act(
            commutator(GPLUS(1), GMINUS(-1), target.k, depth(monomial)),
            {monomial: Fraction(1)},
            target,
        )
        assert table.bracket(GPLUS(1), GMINUS(-1), monomial) == expanded


class TestIntegralModules:
    """Tests for the random modules with integral structure constants."""

    @pytest.mark.parametrize("k", INTEGRAL_LEVELS)
    def test_structure_constants_are_integers(self, k):
        assert central_charge(Fraction(k)) % 2 == 0
        for m, n in [(2, -2), (1, 0), (0, -3), (3, -1)]:
            for _, c in bracket_terms(GPLUS(m), GMINUS(n), Fraction(k)):
                assert c.denominator == 1

    def test_seeded(self):
        assert random_integral_module(4, 7) == random_integral_module(4, 7)
        assert random_integral_module(4, 7).k in INTEGRAL_LEVELS


class TestCaches:
    """Tests for the memoised mode action."""

    def test_clear_caches(self, module):
        act(ModeExpression.of(GMINUS(0), GPLUS(0)), module.vacuum(), module)
        assert _apply_mode.cache_info().currsize > 0
        clear_caches()
        assert _apply_mode.cache_info().currsize == 0
        assert bracket_terms.cache_info().currsize == 0
