import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from buckdens import generators as gen
from buckdens import periodic as per


class TestBAlpha:
    def test_odds(self):
        b = gen.gen_b_alpha("1")
        assert b.members(9) == [1, 3, 5, 7, 9]
        assert b.periodic_form.natural_density() == Fraction(1, 2)

    def test_one_quarter(self):
        b = gen.gen_b_alpha("01")
        assert b.periodic_form == per.from_progressions([(2, 4)])

    def test_one_quarter_doubled(self):
        b = gen.gen_b_alpha("01")
        doubled = per.add(b.periodic_form, b.periodic_form)
        for n in range(4, 200, 4):
            assert n in doubled  # contains 4 + 4N
        assert doubled.natural_density() == Fraction(1, 4)
        assert 0 not in doubled  # equality with 4N only up to a finite set

    def test_three_quarters_profile(self):
        b = gen.gen_b_alpha("11")
        assert b.profile(4).attained.members == (1, 2, 3)
        assert b.periodic_form.natural_density() == Fraction(3, 4)

    def test_density_equals_dyadic_value(self):
        for bits in ("1", "01", "101", "0011", "111111"):
            assert gen.gen_b_alpha(bits).periodic_form.natural_density() == gen.b_alpha_value(bits)

    def test_rejects_empty_and_zero(self):
        with pytest.raises(ValueError):
            gen.gen_b_alpha("")
        with pytest.raises(ValueError):
            gen.gen_b_alpha("000")
        with pytest.raises(ValueError):
            gen.gen_b_alpha("102")

    @given(st.integers(1, 255))
    def test_membership_matches_valuation_rule(self, value):
        bits = format(value, "08b")
        b = gen.gen_b_alpha(bits)
        for n in range(1, 300):
            j = (n & -n).bit_length()
            assert b.contains(n) == (j <= 8 and bits[j - 1] == "1")
        assert not b.contains(0)


class TestDK:
    def test_all_positions_forbidden(self):
        d = gen.gen_d_k((0,), rule="arithmetic", step=1)
        assert d.members(100) == [0]

    def test_structure_values(self):
        d = gen.gen_d_k((1, 3))
        assert d.members(15) == [0, 1, 4, 5]
        assert (d.m_t(0), d.m_t(1)) == (3, 12)
        assert d.xi(0) == Fraction(1, 4)
        assert d.xi(1) == Fraction(7, 16)
        assert d.z_t(1) == [3, 7, 11, 12, 13, 14, 15]
        assert d.delta_partial(1) == Fraction(9, 16)

    def test_rule_extension(self):
        d = gen.gen_d_k((1, 3), rule="double_gap")
        assert [d.k(i) for i in range(5)] == [1, 3, 7, 15, 31]
        p = gen.gen_d_k((1, 2), rule="powers_of_two")
        assert [p.k(i) for i in range(5)] == [1, 2, 4, 8, 16]

    def test_validation(self):
        with pytest.raises(ValueError):
            gen.gen_d_k(())
        with pytest.raises(ValueError):
            gen.gen_d_k((3, 1))
        with pytest.raises(ValueError):
            gen.gen_d_k((2, 2))
        with pytest.raises(ValueError):
            gen.gen_d_k((1,), rule="nope")

    def test_profile_matches_members(self):
        d = gen.gen_d_k((1, 3), rule="double_gap")
        for e in (1, 2, 4, 6):
            m = 1 << e
            attained = d.profile(m).attained
            seen = {n % m for n in d.members(1 << 10)}
            assert seen == set(attained.members)
            assert d.profile(m).infinitely_attained == attained
            assert d.profile(m).cofinitely_attained.is_empty()

    def test_finite_k_is_periodic(self):
        d = gen.gen_d_k((1, 3))
        eps = d.as_periodic()
        assert eps.natural_density() == Fraction(1, 4)
        prof = d.profile(16)
        assert prof.cofinitely_attained == prof.attained

    def test_unsupported_modulus(self):
        d = gen.gen_d_k((1,), rule="double_gap")
        with pytest.raises(gen.UnsupportedModulusError):
            d.profile(6)

    def test_delta_lower_bound(self):
        d = gen.gen_d_k((1, 3, 7, 15), rule="double_gap")
        bound = d.delta_lower_bound(3)
        assert bound is not None
        assert Fraction(1, 2) < bound < d.delta_partial(3)
        assert gen.gen_d_k((1, 3)).delta_lower_bound(0) is None


class TestX0:
    def test_members(self):
        assert gen.gen_x0().members(21) == [0, 1, 4, 5, 16, 17, 20, 21]

    def test_profiles(self):
        x0 = gen.gen_x0()
        assert x0.profile(16).attained.members == (0, 1, 4, 5)
        for m in range(1, 5):
            assert x0.profile(4**m).attained.cardinality == 2**m

    def test_doubled_profile(self):
        doubled = gen.sumset_description([gen.gen_x0(), gen.gen_x0()])
        assert doubled.profile(16).attained.cardinality == 9
        members = doubled.members(80)
        assert {2, 5, 6, 8}.issubset(members)
        assert all(n % 4 != 3 for n in members)


class TestWeyl:
    def test_sqrt2_membership(self):
        w = gen.gen_weyl("sqrt2", Fraction(1, 2))
        assert w.contains(1)  # frac(sqrt 2) ~ 0.414
        assert not w.contains(2)  # ~ 0.828
        assert w.contains(0)

    def test_alpha_range(self):
        with pytest.raises(ValueError):
            gen.gen_weyl("sqrt2", Fraction(0))
        with pytest.raises(ValueError):
            gen.gen_weyl("sqrt2", Fraction(3, 2))

    def test_precision_cap(self):
        w = gen.gen_weyl("sqrt2", Fraction(1, 2))
        with pytest.raises(ValueError):
            w.contains((1 << 32) + 1)

    def test_margin_and_boundary(self):
        w = gen.gen_weyl("sqrt2", Fraction(1, 2))
        assert w.margin(1) < 0 < w.margin(2)
        assert not w.near_boundary(1)

    def test_decimal_theta(self):
        w = gen.gen_weyl("0.25", Fraction(1, 2))
        assert w.contains(1) and not w.contains(2)

    def test_unknown_constant(self):
        with pytest.raises(ValueError):
            gen.gen_weyl("tau", Fraction(1, 2))


class TestPrimeFactorCounts:
    def test_phi_t_examples(self):
        assert gen.phi_t(6, 0) == 2
        assert gen.phi_t(6, 1) == 5
        assert gen.phi_t(6, 2) == 6

    def test_phi_0_is_totient(self):
        for k in range(1, 50):
            assert gen.phi_t(k, 0) == gen.euler_phi(k)

    def test_counting_cross_check(self):
        for k in range(1, 61):
            for t in range(0, 3):
                direct = sum(1 for a in range(1, k + 1) if gen.omega(math.gcd(a, k)) <= t)
                assert gen.phi_t(k, t) == direct, (k, t)

    def test_p1_members(self):
        assert gen.gen_p_t(1).members(10) == [2, 3, 4, 5, 7, 8, 9]

    def test_p0_empty(self):
        assert gen.gen_p_t(0).members(50) == []

    def test_residue_classes_with_rich_gcd_are_empty(self):
        # classes a + kN with omega(gcd(a, k)) > t contain no member at all,
        # so phi_t(k)/k bounds the attained-residue ratio
        for t in (1, 2):
            members = gen.gen_p_t(t).members(3000)
            for k in (6, 30, 60):
                allowed = {
                    a % k for a in range(1, k + 1) if gen.omega(math.gcd(a, k)) <= t
                }
                assert len(allowed) == gen.phi_t(k, t)
                assert {n % k for n in members} <= allowed


class TestThinBasis:
    def test_examples(self):
        assert gen.thin_basis(4) == (0, 1, 3)
        assert gen.thin_basis(10) == (0, 1, 2, 5, 8)
        assert gen.thin_basis(12) == (0, 1, 2, 3, 7, 11)

    def test_m_too_small(self):
        with pytest.raises(ValueError):
            gen.thin_basis(1)

    def test_refined_bound_discrepancy_at_10(self):
        assert len(gen.thin_basis(10)) == 5
        assert gen.thin_basis_refined_bound(10) == 4

    def test_coverage_sampled(self):
        for m in (2, 3, 17, 100, 101, 9999):
            members = gen.thin_basis(m)
            sums = {a + b for a in members for b in members}
            assert set(range(m)).issubset(sums)
            assert len(members) < 2 * math.sqrt(m)


class TestBasisChain:
    def test_two_three(self):
        assert gen.basis_chain([2, 3]) == (0, 1, 2, 3)

    def test_single_is_base(self):
        assert gen.basis_chain([10]) == gen.thin_basis(10)

    def test_sparsify_preserves_residues(self):
        for moduli in ([2, 3], [4, 5, 6], [3, 5, 7]):
            total = math.prod(moduli)
            plain = gen.basis_chain(moduli)
            sparse = gen.basis_chain(moduli, sparsify=True)
            assert {x % total for x in plain} == {x % total for x in sparse}
            assert max(sparse) > max(plain)

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            gen.basis_chain([])


class TestHook:
    def test_members(self):
        assert gen.gen_hook().members(130) == [2, 4, 9, 28, 125]

    def test_membership(self):
        h = gen.gen_hook()
        assert h.contains(28) and not h.contains(27)

    def test_residue_coverage_mod3(self):
        first_six = gen.gen_hook().members(10**6)[:6]
        assert {n % 3 for n in first_six} >= {0, 1, 2}

    def test_unknown_rule(self):
        with pytest.raises(ValueError):
            gen.gen_hook("primorial")


class TestThreeDensity:
    def test_half_chain(self):
        td = gen.gen_three_density(Fraction(1, 2), Fraction(1, 2), Fraction(1, 2))
        assert td.r_value(1) == 1
        assert td.residues(1) == {0}
        assert td.r_value(3) == 4 and len(td.residues(3)) == 4

    def test_nesting(self):
        td = gen.gen_three_density(Fraction(3, 10), Fraction(1, 2), Fraction(1, 2))
        for k in range(1, 10):
            lifted = set(td.residues(k)) | {r + (1 << k) for r in td.residues(k)}
            assert lifted.issubset(td.residues(k + 1))

    def test_r_growth(self):
        td = gen.gen_three_density(Fraction(3, 10), Fraction(1, 2), Fraction(1, 2))
        for k in range(1, 11):
            assert td.r_value(k + 1) in (2 * td.r_value(k), 2 * td.r_value(k) + 1)

    def test_membership_respects_windows(self):
        td = gen.gen_three_density(Fraction(1, 2), Fraction(1, 2), Fraction(1, 2))
        low, high = td.window(2)
        assert low == 100 and high == 200
        for n in td.members(250):
            assert (10 <= n <= 20) or (100 <= n <= 200)

    def test_parameter_range(self):
        with pytest.raises(ValueError):
            gen.gen_three_density(Fraction(1, 2), Fraction(1, 2), Fraction(1))


class TestCombinators:
    def test_union_membership_and_members(self):
        u = gen.union_description([gen.gen_b_alpha("01"), gen.gen_x0()])
        assert u.contains(2) and u.contains(5) and not u.contains(3)
        assert u.members(6) == [0, 1, 2, 4, 5, 6]

    def test_union_of_periodic_parts_is_periodic(self):
        u = gen.union_description([gen.gen_b_alpha("1"), gen.gen_b_alpha("01")])
        assert u.periodic_form is not None
        assert u.periodic_form.natural_density() == Fraction(3, 4)

    def test_union_profile_is_union(self):
        u = gen.union_description([gen.gen_b_alpha("001"), gen.gen_d_k((1,), rule="double_gap")])
        prof = u.profile(8)
        expect = set(gen.gen_b_alpha("001").profile(8).attained.members) | set(
            gen.gen_d_k((1,), rule="double_gap").profile(8).attained.members
        )
        assert set(prof.attained.members) == expect

    def test_sumset_members_match_enumeration(self):
        s = gen.sumset_description([gen.gen_x0(), gen.gen_b_alpha("1")])
        x0m = gen.gen_x0().members(60)
        odds = gen.gen_b_alpha("1").members(60)
        expect = sorted({a + b for a in x0m for b in odds if a + b <= 60})
        assert s.members(60) == expect
        assert s.contains(expect[3])

    def test_enumerated_residues_within_oracle_profile(self):
        for desc in (gen.gen_b_alpha("1011"), gen.gen_d_k((0, 2), rule="double_gap"), gen.gen_x0()):
            for m in (2, 8, 64):
                seen = {n % m for n in desc.members(1 << 12)}
                oracle = set(desc.profile(m).attained.members)
                assert seen <= oracle
                assert seen == oracle  # horizon covers a full period of evidence

    def test_sumset_profile_matches_enumeration(self):
        pairs = (
            (gen.gen_x0(), gen.gen_b_alpha("101")),
            (gen.gen_d_k((1, 3), rule="double_gap"), gen.gen_x0()),
        )
        for a, b in pairs:
            total = gen.sumset_description([a, b])
            members = total.members(1 << 12)
            for m in (4, 16, 64):
                seen = {n % m for n in members}
                assert seen == set(total.profile(m).attained.members), (a.family, b.family, m)

    def test_sumset_profile_with_finite_component(self):
        singleton = gen.gen_d_k((0,), rule="arithmetic", step=1)  # just {0}
        total = gen.sumset_description([singleton, gen.gen_b_alpha("1")])
        prof = total.profile(4)
        assert prof.attained.members == (1, 3)
        assert prof.infinitely_attained.members == (1, 3)

    def test_enumerated_residues_match_profiles_at_depth(self):
        # deep version: supported moduli up to 2^12, members to 2^16
        descriptions = (
            gen.gen_b_alpha("1011"),
            gen.gen_d_k((1, 3), rule="double_gap"),
            gen.gen_x0(),
        )
        for desc in descriptions:
            members = desc.members(1 << 16)
            for m in (1 << 6, 1 << 10, 1 << 12):
                seen = {n % m for n in members}
                oracle = set(desc.profile(m).attained.members)
                assert seen == oracle, (desc.family, m)


class TestParseDescription:
    CASES = (
        {"family": "b_alpha", "bits": "101"},
        {"family": "d_k", "k_prefix": [1, 3], "rule": "double_gap"},
        {"family": "x0"},
        {"family": "weyl", "theta": "sqrt2", "alpha": "3/10"},
        {"family": "p_t", "t": 1},
        {"family": "thin_basis", "m": 10},
        {"family": "basis_chain", "moduli": [2, 3, 4], "sparsify": True},
        {"family": "hook", "rule": "factorial"},
        {
            "family": "three_density",
            "alpha": "3/10",
            "beta": "1/2",
            "gamma": "1/2",
        },
        {"family": "union", "of": [{"family": "b_alpha", "bits": "001"}, {"family": "x0"}]},
        {"progressions": [[1, 3], [2, 6]]},
        {"q": 2, "T": 0, "prefix": [], "tail": [1]},
    )

    def test_all_family_schemas(self):
        for obj in self.CASES:
            desc = gen.parse_description(obj)
            assert desc.members(40) is not None

    def test_thin_basis_round_trip(self):
        desc = gen.parse_description({"family": "thin_basis", "m": 10})
        assert desc.members(10) == [0, 1, 2, 5, 8]

    def test_unknown_family(self):
        with pytest.raises(ValueError, match="unknown family"):
            gen.parse_description({"family": "mystery"})

    def test_missing_field_is_named(self):
        with pytest.raises(ValueError, match="bits"):
            gen.parse_description({"family": "b_alpha"})

    def test_non_object(self):
        with pytest.raises(ValueError):
            gen.parse_description([1, 2])
