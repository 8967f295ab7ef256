import math
from fractions import Fraction

import pytest

from infoineq.cone import POLYMATROID_TOLERANCE, is_polymatroid
from infoineq.distribution import (
    EntropyVector,
    InvalidDistribution,
    JointDistribution,
    MaskError,
    entropy_profile,
    format_distribution,
    is_cond_independent,
    is_functional,
    marginal,
    parse_distribution,
    subset_entropies_decimal,
)
from infoineq.expressions import mutual_information
from infoineq.families import generate, geometric
from infoineq.subsets import iter_nonempty

from conftest import oracle_subset_entropy, random_distribution

A, B, C, D = 1, 2, 4, 8


def fair_bit():
    return JointDistribution(("X",), (2,), {(0,): Fraction(1, 2), (1,): Fraction(1, 2)})


def independent_bits(k):
    atoms = {}
    for key in range(1 << k):
        atoms[tuple((key >> i) & 1 for i in range(k))] = Fraction(1, 1 << k)
    return JointDistribution([f"X{i}" for i in range(k)], [2] * k, atoms)


class TestValidation:
    def test_sum_must_be_exactly_one(self):
        with pytest.raises(InvalidDistribution):
            JointDistribution(("X",), (2,), {(0,): Fraction(1, 2), (1,): Fraction(1, 3)})

    def test_zero_probability_rejected(self):
        with pytest.raises(InvalidDistribution):
            JointDistribution(("X",), (2,), {(0,): Fraction(1), (1,): Fraction(0)})

    def test_value_out_of_alphabet(self):
        with pytest.raises(InvalidDistribution):
            JointDistribution(("X",), (2,), {(2,): Fraction(1)})

    def test_wrong_arity_atom(self):
        with pytest.raises(InvalidDistribution):
            JointDistribution(("X", "Y"), (2, 2), {(0,): Fraction(1)})

    def test_immutable(self):
        d = fair_bit()
        with pytest.raises(AttributeError):
            d.var_names = ("Y",)


class TestEntropyProfile:
    def test_uniform_bit_is_exactly_one(self):
        assert entropy_profile(fair_bit()).value(1) == 1.0

    def test_geometric_q5_line_entropy(self):
        # H(C) for the q=5 family is exactly 2 log2 5.
        prof = entropy_profile(geometric(5))
        assert prof.value(C) == pytest.approx(2 * math.log2(5), abs=1e-12)

    def test_claim3_profile_against_bruteforce_oracle(self):
        d = generate("claim3", Fraction(1, 8))
        prof = entropy_profile(d)
        for mask in iter_nonempty(4):
            assert prof.value(mask) == pytest.approx(
                oracle_subset_entropy(d, mask), abs=1e-12
            )

    def test_random_profiles_against_oracle(self, rng):
        for _ in range(25):
            d = random_distribution(rng, rng.randint(1, 4), 16, max_alphabet=3)
            prof = entropy_profile(d)
            for mask in iter_nonempty(d.n):
                assert prof.value(mask) == pytest.approx(
                    oracle_subset_entropy(d, mask), abs=1e-12
                )

    def test_decimal_profile_agrees_with_float(self):
        d = generate("claim1", Fraction(1, 8))
        coords = subset_entropies_decimal(d, 30)
        prof = entropy_profile(d)
        for mask in iter_nonempty(4):
            assert float(coords[mask]) == pytest.approx(prof.value(mask), abs=1e-13)

    def test_entropy_vector_rejects_negative(self):
        with pytest.raises(ValueError):
            EntropyVector(1, (-0.5,))


class TestMarginal:
    def test_independent_pair_marginal_recovers_factor(self):
        d = independent_bits(2)
        m = marginal(d, 1)
        assert m == JointDistribution(("X0",), (2,), {(0,): Fraction(1, 2), (1,): Fraction(1, 2)})

    def test_claim1_marginal_onto_c(self):
        d = generate("claim1", Fraction(1, 4))
        m = marginal(d, C)
        assert m.atoms[(1,)] == Fraction(1, 4)

    def test_geometric_q3_marginal_onto_a_uniform(self):
        d = geometric(3)
        counts = {}
        for key in d.atoms:  # independent count over the 162 atoms
            counts[key[0]] = counts.get(key[0], 0) + 1
        assert len(counts) == 9 and set(counts.values()) == {162 // 9}
        m = marginal(d, A)
        assert all(p == Fraction(1, 9) for p in m.atoms.values())

    def test_marginal_commutes_with_entropy(self, rng):
        for _ in range(30):
            d = random_distribution(rng, rng.randint(2, 4), 16, max_alphabet=3)
            prof = entropy_profile(d)
            for mask in iter_nonempty(d.n):
                m = marginal(d, mask)
                full = entropy_profile(m).value((1 << m.n) - 1)
                assert prof.value(mask) == pytest.approx(full, abs=1e-12)

    def test_empty_mask_rejected(self):
        with pytest.raises(MaskError):
            marginal(fair_bit(), 0)


class TestStructuralChecks:
    def test_two_independent_bits(self):
        assert is_cond_independent(independent_bits(2), 1, 2)

    def test_claim1_conditional_independence_for_any_eps(self):
        for eps in (Fraction(1, 8), Fraction(1, 3), Fraction(7, 9)):
            assert is_cond_independent(generate("claim1", eps), A, B, C)

    def test_claim5_bc_given_d_not_independent(self):
        assert not is_cond_independent(generate("claim5", Fraction(1, 8)), B, C, D)

    def test_xor_is_functional(self):
        atoms = {}
        for x in range(2):
            for y in range(2):
                atoms[(x, y, x ^ y)] = Fraction(1, 4)
        d = JointDistribution(("X", "Y", "W"), (2, 2, 2), atoms)
        assert is_functional(d, 4, 3)
        assert not is_functional(d, 1, 4)  # X is not a function of W alone

    def test_claim3_c_functional_on_ab(self):
        assert is_functional(generate("claim3", Fraction(1, 8)), C, A | B)

    def test_geometric_c_not_functional_on_ab(self):
        assert not is_functional(geometric(3), C, A | B)

    def test_overlapping_masks_rejected(self):
        with pytest.raises(MaskError):
            is_cond_independent(independent_bits(2), 1, 1)

    def test_structural_matches_numeric_view(self, rng):
        # Exact decision agrees with |I(a;b|c)| <= 1e-9 on the float profile.
        checked = 0
        for _ in range(200):
            d = random_distribution(rng, rng.randint(2, 4), 16, max_alphabet=2)
            prof = entropy_profile(d)
            masks = [1 << i for i in range(d.n)]
            a, b = rng.sample(masks, 2)
            rest = [m for m in masks if m not in (a, b)]
            c = 0
            for m in rest:
                if rng.random() < 0.5:
                    c |= m
            numeric = mutual_information(d.n, a, b, c).evaluate(prof)
            assert is_cond_independent(d, a, b, c) == (abs(numeric) <= 1e-9)
            checked += 1
        assert checked == 200


class TestPolymatroidInvariant:
    def test_profiles_are_polymatroids(self, rng):
        for _ in range(200):
            d = random_distribution(rng, rng.randint(1, 4), 16, max_alphabet=3)
            check = is_polymatroid(entropy_profile(d))
            assert check.ok, check

    def test_non_polymatroid_detected(self):
        bad = EntropyVector(2, (2.0, 2.0, 1.0))  # violates monotonicity
        check = is_polymatroid(bad)
        assert not check.ok and check.worst_slack < -POLYMATROID_TOLERANCE


class TestTextFormat:
    def test_round_trip(self):
        d = generate("claim2", Fraction(1, 12))
        again = parse_distribution(format_distribution(d))
        assert again.atoms == d.atoms and again.var_names == d.var_names

    def test_comments_and_validation(self):
        text = "# a fair bit\nvars: X\n0 : 1/2  # first\n1 : 1/2\n"
        d = parse_distribution(text)
        assert d.atoms[(0,)] == Fraction(1, 2)

    def test_bad_sum_rejected(self):
        with pytest.raises(InvalidDistribution):
            parse_distribution("vars: X\n0 : 1/2\n1 : 1/3\n")

    def test_malformed_line_rejected(self):
        with pytest.raises(InvalidDistribution):
            parse_distribution("vars: X\n0 0 : 1/2\n1 : 1/2\n")
