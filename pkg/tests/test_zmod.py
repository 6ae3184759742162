import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from buckdens.zmod import (
    APWitness,
    LimitExceededError,
    ResidueSet,
    Subgroup,
    classify_structure,
    detect_arithmetic_progression,
    detect_quasi_periodic,
    is_periodic,
    kemperman_classify,
    kneser_deficiency,
    project,
    stabilizer,
    sumset,
)


def rs(m, members):
    return ResidueSet.of(m, members)


@st.composite
def residue_sets(draw, max_modulus=10, nonempty=True):
    m = draw(st.integers(1, max_modulus))
    low = 1 if nonempty else 0
    bits = draw(st.integers(low, (1 << m) - 1))
    return ResidueSet(m, bits)


def brute_sum(*sets):
    m = sets[0].modulus
    out = set()
    for combo in itertools.product(*[s.members for s in sets]):
        out.add(sum(combo) % m)
    return out


class TestResidueSet:
    def test_members_and_cardinality(self):
        s = rs(6, [4, 0, 2])
        assert s.members == (0, 2, 4)
        assert s.cardinality == 3
        assert 2 in s and 3 not in s

    def test_member_out_of_range(self):
        with pytest.raises(ValueError):
            rs(4, [4])

    def test_modulus_cap(self):
        with pytest.raises(LimitExceededError):
            ResidueSet((1 << 20) + 1, 0)

    def test_full(self):
        assert ResidueSet.full(5).is_full()


class TestSumset:
    def test_interval_plus_interval(self):
        assert sumset([rs(5, [0, 1]), rs(5, [0, 1])]).members == (0, 1, 2)

    def test_wraparound(self):
        # enumerating all four pairwise sums of {1,3} mod 4 gives {0, 2}
        assert sumset([rs(4, [1, 3]), rs(4, [1, 3])]).members == (0, 2)

    def test_identity_element(self):
        s = rs(7, [1, 2, 5])
        assert sumset([s, rs(7, [0])]) == s

    def test_modulus_mismatch(self):
        with pytest.raises(ValueError, match="mismatch"):
            sumset([rs(4, [1]), rs(5, [1])])

    def test_empty_operand(self):
        with pytest.raises(ValueError):
            sumset([rs(4, [1]), ResidueSet(4, 0)])

    @given(residue_sets(), residue_sets())
    def test_matches_brute_enumeration(self, a, b):
        if a.modulus != b.modulus:
            b = ResidueSet(a.modulus, b.bits & ((1 << a.modulus) - 1) or 1)
        got = sumset([a, b])
        assert set(got.members) == brute_sum(a, b)

    @given(residue_sets(max_modulus=8), residue_sets(max_modulus=8), residue_sets(max_modulus=8))
    def test_commutative_associative(self, a, b, c):
        m = a.modulus
        b = ResidueSet(m, b.bits & ((1 << m) - 1) or 1)
        c = ResidueSet(m, c.bits & ((1 << m) - 1) or 1)
        assert sumset([a, b]) == sumset([b, a])
        assert sumset([sumset([a, b]), c]) == sumset([a, sumset([b, c])])


class TestStabilizer:
    def test_examples(self):
        assert stabilizer(rs(4, [0, 2])) == Subgroup(4, 2)
        assert stabilizer(rs(4, [0, 2])).order == 2
        assert stabilizer(rs(6, [0, 2, 4])) == Subgroup(6, 2)
        assert stabilizer(rs(6, [0, 1])) == Subgroup(6, 6)
        assert stabilizer(rs(6, [0, 1])).is_trivial()

    def test_empty(self):
        with pytest.raises(ValueError):
            stabilizer(ResidueSet(5, 0))

    @given(residue_sets())
    def test_fixes_and_is_maximal(self, s):
        h = stabilizer(s)
        assert s.shift(h.generator) == s
        for d in range(1, h.generator):
            if s.modulus % d == 0:
                assert s.shift(d) != s


class TestPeriodicity:
    def test_examples(self):
        assert is_periodic(rs(6, [0, 3]))
        assert not is_periodic(rs(6, [0, 1]))
        assert is_periodic(ResidueSet.full(7))

    def test_mod_one_has_no_proper_divisor(self):
        assert not is_periodic(rs(1, [0]))


class TestArithmeticProgression:
    def test_examples(self):
        assert detect_arithmetic_progression(rs(7, [1, 3, 5])) == APWitness(1, 2, 3)
        assert detect_arithmetic_progression(rs(5, [2])) == APWitness(2, 1, 1)
        assert detect_arithmetic_progression(rs(8, [0, 1, 4])) is None

    def test_full_group(self):
        assert detect_arithmetic_progression(ResidueSet.full(6)) == APWitness(0, 1, 6)

    @given(residue_sets(max_modulus=9))
    @settings(max_examples=200)
    def test_matches_brute_search(self, s):
        from buckdens.oracle import brute_arithmetic_progression

        witness = detect_arithmetic_progression(s)
        assert (witness is not None) == brute_arithmetic_progression(s)
        if witness is not None:
            assert set(witness.elements(s.modulus)) == set(s.members)
            assert witness.length == s.cardinality

    @given(residue_sets(max_modulus=10))
    @settings(max_examples=200)
    def test_doubling_an_ap(self, s):
        witness = detect_arithmetic_progression(s)
        if witness is None:
            return
        m = s.modulus
        a, d, length = witness.start, witness.difference, witness.length
        import math

        if 2 * length - 1 > m // math.gcd(d, m):
            return
        doubled = sumset([s, s])
        expected = {(2 * a + i * d) % m for i in range(2 * length - 1)}
        assert set(doubled.members) == expected


class TestQuasiPeriodicity:
    def test_witness_example(self):
        w = detect_quasi_periodic(rs(4, [0, 1, 2]))
        assert w is not None
        assert w.subgroup == Subgroup(4, 2)
        assert w.shift == 1
        assert w.trace == {0}
        assert w.periodic_part == {0, 2}

    def test_strict_convention_blocks_short_sets(self):
        assert detect_quasi_periodic(rs(4, [0, 1]), True) is None
        assert detect_quasi_periodic(rs(4, [0, 1]), False) is None

    def test_periodic_input_returns_none(self):
        assert detect_quasi_periodic(rs(6, [0, 3])) is None

    def test_prime_modulus_has_no_witness(self):
        assert detect_quasi_periodic(rs(7, [0, 1, 3])) is None

    def test_empty_remainder_is_convention_dependent(self):
        # {0, 2} mod 8 sits inside the even subgroup: stripping the whole
        # trace leaves nothing, which only the lax convention accepts
        s = rs(8, [0, 2])
        assert detect_quasi_periodic(s, require_nonempty_periodic_part=False) is not None
        assert detect_quasi_periodic(s, require_nonempty_periodic_part=True) is None

    def test_removed_part_makes_remainder_periodic(self):
        for enc in range(1, 1 << 8):
            s = ResidueSet(8, enc)
            if is_periodic(s):
                continue
            w = detect_quasi_periodic(s)
            if w is None:
                continue
            m = s.modulus
            removed = {(w.shift + x) % m for x in w.trace}
            remainder = set(s.members) - removed
            assert remainder == w.periodic_part
            assert {(x + w.subgroup.generator) % m for x in remainder} == remainder
            assert w.trace and w.trace != set(w.subgroup.members)


class TestKneserDeficiency:
    def test_deficient_pair(self):
        report = kneser_deficiency([rs(6, [0, 3]), rs(6, [0, 3])])
        assert report.stabilizer == Subgroup(6, 3)
        assert report.multiplicities == (1, 1)
        assert report.sum_size == 2
        assert report.bound == 2
        assert report.deficient

    def test_interval_pair_not_deficient(self):
        report = kneser_deficiency([rs(6, [0, 1]), rs(6, [0, 1])])
        assert report.stabilizer.is_trivial()
        assert report.multiplicities == (2, 2)
        assert report.sum_size == 3
        assert report.bound == 3
        assert not report.deficient

    def test_full_sumset_not_deficient(self):
        report = kneser_deficiency([rs(5, [0, 1, 2]), rs(5, [0, 1, 2])])
        assert report.sum_size == 5
        assert report.stabilizer.order == 5
        assert not report.deficient


class TestKempermanClassify:
    def test_prime_modulus_progression(self):
        result = kemperman_classify(rs(7, [0, 1]))
        assert result.doubled.members == (0, 1, 2)
        assert result.sumset_class.tag == "arithmetic-progression"
        assert result.base_ap == APWitness(0, 1, 2)

    def test_complement_of_singleton_is_both(self):
        result = kemperman_classify(rs(4, [0, 1]))
        assert result.doubled.members == (0, 1, 2)
        assert result.sumset_class.tag == "ap-and-quasi-periodic"
        assert result.sumset_class.qp_witness.shift == 1

    def test_singleton(self):
        result = kemperman_classify(rs(2, [0]))
        assert result.doubled.members == (0,)
        assert result.sumset_class.tag == "arithmetic-progression"

    def test_hypothesis_violation_reports_sizes(self):
        with pytest.raises(ValueError, match=r"\|S\+S\| = 4.*2\|S\|-1 = 5"):
            kemperman_classify(rs(8, [0, 2, 4]))


class TestProject:
    def test_examples(self):
        assert project(rs(6, [1, 4]), 3).members == (1,)
        assert project(rs(6, [0, 1]), 6).members == (0, 1)
        assert project(rs(8, [3, 7]), 4).members == (3,)

    def test_non_divisor(self):
        with pytest.raises(ValueError):
            project(rs(6, [1]), 4)

    @given(residue_sets(max_modulus=12), residue_sets(max_modulus=12))
    def test_commutes_with_sumset(self, a, b):
        m = a.modulus
        b = ResidueSet(m, b.bits & ((1 << m) - 1) or 1)
        for d in range(1, m + 1):
            if m % d:
                continue
            assert project(sumset([a, b]), d) == sumset([project(a, d), project(b, d)])


class TestClassifyStructure:
    def test_periodic_tag_wins(self):
        cls = classify_structure(rs(6, [0, 3]))
        assert cls.tag == "periodic"
        assert cls.ap_witness is not None  # {0,3} is also a progression

    def test_none_tag(self):
        cls = classify_structure(rs(8, [0, 1, 4]))
        assert cls.tag in ("none", "quasi-periodic")
        assert cls.ap_witness is None
