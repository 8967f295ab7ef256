from fractions import Fraction
from itertools import combinations

import pytest

from infoineq.cone import (
    ArityOutOfRange,
    Certificate,
    ConeDescription,
    SeparatingPoint,
    conditional_implied_by,
    elemental_count,
    elemental_inequalities,
    five_variable_nonshannon,
    four_variable_nonshannon,
    is_polymatroid,
    is_shannon_type,
    known_nonshannon_registry,
    series_inequality,
)
from infoineq.constructions import aep_point
from infoineq.distribution import entropy_profile
from infoineq.expressions import InfoExpression, box_expression, mutual_information, parse
from infoineq.families import generate
from infoineq.subsets import full_mask

from conftest import random_distribution

A, B, C, D, E = 1, 2, 4, 8, 16


def oracle_elementals(n: int) -> set:
    """Independent enumeration of the elemental forms, as coefficient dicts."""
    out = set()
    everything = full_mask(n)
    for i in range(n):
        coeffs = {everything: Fraction(1)}
        if everything ^ (1 << i):
            coeffs[everything ^ (1 << i)] = Fraction(-1)
        out.add(tuple(sorted(coeffs.items())))
    for i, j in combinations(range(n), 2):
        others = [k for k in range(n) if k not in (i, j)]
        for pick in range(1 << len(others)):
            k_mask = 0
            for t, var in enumerate(others):
                if pick >> t & 1:
                    k_mask |= 1 << var
            expr = mutual_information(n, 1 << i, 1 << j, k_mask)
            out.add(expr.items)
    return out


class TestElemental:
    @pytest.mark.parametrize("n,count", [(2, 3), (3, 9), (4, 28)])
    def test_counts_match_enumeration_oracle(self, n, count):
        gens = elemental_inequalities(n)
        assert len(gens) == count == elemental_count(n)
        assert {g.items for g in gens} == oracle_elementals(n)

    def test_arity_bounds(self):
        with pytest.raises(ArityOutOfRange):
            elemental_inequalities(7)
        with pytest.raises(ArityOutOfRange):
            elemental_inequalities(0)

    def test_duplicate_generators_collapse(self):
        e = parse("I(A;B)", "AB")
        cone = ConeDescription.from_generators(2, [e, e, parse("H(A|B)", "AB")])
        assert len(cone.generators) == 2


class TestShannonType:
    def test_example_two_term_inequality(self):
        # H(A)+H(B)+H(C) <= H(A,C)+H(B,C)+I(A;B), i.e. the sum of the two
        # basic forms H(C|A,B) >= 0 and I(A;B|C) >= 0.
        target = parse("H(A,C) + H(B,C) + I(A;B) - H(A) - H(B) - H(C)", "ABC")
        result = is_shannon_type(target)
        assert isinstance(result, Certificate)
        assert result.verify()
        # the known decomposition is itself a valid certificate
        known = parse("H(C|A,B)", "ABC") + parse("I(A;B|C)", "ABC")
        assert known == target

    def test_box_not_shannon_type(self):
        result = is_shannon_type(box_expression(4, A, B, C, D))
        assert isinstance(result, SeparatingPoint)
        gens = elemental_inequalities(4)
        assert all(g.evaluate_exact(result.coords) >= 0 for g in gens)
        assert box_expression(4, A, B, C, D).evaluate_exact(result.coords) < 0

    def test_claim1_profile_also_violates_box(self):
        # the family profile witnesses the same separation numerically
        prof = entropy_profile(generate("claim1", Fraction(1, 4)))
        assert box_expression(4, A, B, C, D).evaluate(prof) < 0

    def test_generator_implied_form(self):
        assert isinstance(is_shannon_type(parse("H(A)", "AB")), Certificate)

    def test_deterministic_decision(self):
        box = box_expression(4, A, B, C, D)
        first = is_shannon_type(box)
        second = is_shannon_type(box)
        assert isinstance(first, SeparatingPoint)
        assert first.coords == second.coords

    def test_zero_target(self):
        result = is_shannon_type(InfoExpression(3, ()))
        assert isinstance(result, Certificate) and not any(result.kappas)

    def test_catalog_inequalities_are_genuinely_non_shannon(self):
        # the unconditional 5-variable forms hold for all distributions yet
        # are not nonnegative combinations of elemental inequalities
        for expr in (five_variable_nonshannon(), series_inequality("i", 1)):
            result = is_shannon_type(expr)
            assert isinstance(result, SeparatingPoint)
            assert expr.evaluate_exact(result.coords) < 0

    def test_arity_six_boundary(self):
        result = is_shannon_type(parse("I(A;B|C,D,E,F)", "ABCDEF"))
        assert isinstance(result, Certificate)


class TestConditionalImpliedBy:
    def test_zhang_yeung_not_shannon_derivable(self):
        cone = ConeDescription.shannon(4)
        constraints = [parse("I(A;B)", "ABCD"), parse("I(A;B|C)", "ABCD")]
        assert conditional_implied_by(cone, constraints, box_expression(4, A, B, C, D)) is None

    def test_target_equal_to_constraint(self):
        cone = ConeDescription.shannon(3)
        got = conditional_implied_by(
            cone, [parse("I(A;B)", "ABC")], parse("H(A) + H(B) - H(A,B)", "ABC")
        )
        assert got is not None and got.verify()

    def test_toy_polyhedral_cone(self):
        # Generators -x+y >= 0, x >= 0 (plus the unused third axis); the
        # conditional inequality "y = 0 implies -x >= 0" follows with
        # kappa = 1 on -x+y and lambda = -1 on y.
        minus_x_plus_y = InfoExpression.from_coeffs(2, {A: Fraction(-1), B: Fraction(1)})
        x_axis = InfoExpression.from_coeffs(2, {A: Fraction(1)})
        third = InfoExpression.from_coeffs(2, {A | B: Fraction(1)})
        toy = ConeDescription.from_generators(2, [minus_x_plus_y, x_axis, third])
        target = InfoExpression.from_coeffs(2, {A: Fraction(-1)})
        constraint = InfoExpression.from_coeffs(2, {B: Fraction(1)})
        got = conditional_implied_by(toy, [constraint], target)
        assert got is not None
        assert got.kappas == (Fraction(1), Fraction(0), Fraction(0))
        assert got.lambdas == (Fraction(-1),)

    def test_certificate_serialization_round_trip_text(self):
        cone = ConeDescription.shannon(3)
        got = conditional_implied_by(
            cone, [parse("I(A;B)", "ABC")], parse("H(A) + H(B) - H(A,B)", "ABC")
        )
        text = got.serialize("ABC")
        assert text.splitlines()[-1].startswith("==> ")
        assert "kappa" in text or "lambda" in text


class TestCertificateSoundness:
    def test_tampered_certificate_rejected(self):
        target = parse("I(A;B)", "AB")
        gens = tuple(elemental_inequalities(2))
        result = is_shannon_type(target)
        assert isinstance(result, Certificate)
        with pytest.raises(ValueError):
            Certificate(parse("H(A)", "AB"), gens, result.kappas)

    def test_negative_kappa_rejected(self):
        gens = tuple(elemental_inequalities(2))
        bad = tuple(Fraction(-1) if i == 0 else Fraction(0) for i in range(len(gens)))
        with pytest.raises(ValueError):
            Certificate(-1 * gens[0], gens, bad)


class TestPolymatroid:
    def test_profile_is_polymatroid(self, rng):
        prof = entropy_profile(random_distribution(rng, 3, 8, max_alphabet=3))
        assert is_polymatroid(prof).ok

    def test_aep_midpoint_q31(self):
        report = aep_point("I1", 31)
        assert is_polymatroid(report.midpoint).ok


class TestNonShannonRegistry:
    def test_series_k1_drops_half_term(self):
        got = series_inequality("i", 1)
        expected = (
            box_expression(5, A, B, C, D)
            + mutual_information(5, A, C, E)
            + mutual_information(5, A, E, C)
            + mutual_information(5, C, E, A)
        )
        assert got == expected

    def test_series_k3_half_coefficient_is_one(self):
        got = series_inequality("i", 3)
        expected = (
            box_expression(5, A, B, C, D)
            + mutual_information(5, A, C, E)
            + mutual_information(5, A, E, C)
            + Fraction(1, 3) * mutual_information(5, C, E, A)
            + mutual_information(5, A, D, C)
            + mutual_information(5, A, C, D)
        )
        assert got == expected

    def test_k_below_one_rejected(self):
        with pytest.raises(ValueError):
            series_inequality("ii", 0)

    def test_five_variable_inequality_zero_on_independent_tuple(self, rng):
        d = random_distribution(rng, 1, 2)
        # all-independent uniform 5-tuple: every mutual information vanishes
        from itertools import product
        atoms = {key: Fraction(1, 32) for key in product(range(2), repeat=5)}
        from infoineq.distribution import JointDistribution
        dist = JointDistribution("ABCDE", [2] * 5, atoms)
        prof = entropy_profile(dist)
        assert five_variable_nonshannon().evaluate(prof) == pytest.approx(0.0, abs=1e-12)

    def test_registry_contents(self):
        four = known_nonshannon_registry(4)
        assert four == [four_variable_nonshannon()]
        five = known_nonshannon_registry(5, k_max=2)
        assert len(five) == 1 + 2 * 3

    def test_series_valid_on_random_distributions(self, rng):
        exprs = [series_inequality(kind, k) for kind in ("i", "ii", "iii") for k in (1, 3)]
        for _ in range(40):
            prof = entropy_profile(random_distribution(rng, 5, 8, max_alphabet=2))
            for expr in exprs:
                assert expr.evaluate(prof) >= -1e-9

    def test_four_variable_form_valid_on_random_distributions(self, rng):
        expr = four_variable_nonshannon()
        for _ in range(60):
            prof = entropy_profile(random_distribution(rng, 4, 10, max_alphabet=2))
            assert expr.evaluate(prof) >= -1e-9
