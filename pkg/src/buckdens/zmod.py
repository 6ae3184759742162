"""Exact subsets of Z/mZ: sumsets, stabilizers, and structure detection.

Residue sets are immutable, bitmask-backed values so that the exhaustive
sweeps in :mod:`buckdens.oracle` can walk millions of subsets cheaply.
Bit i of ``bits`` is set iff residue i belongs to the set.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Iterator, Optional

#: Dense membership vectors are capped at this modulus.
MAX_MODULUS = 1 << 20


class LimitExceededError(ValueError):
    """Raised when a modulus exceeds the dense-representation cap."""


def divisors(m: int) -> list[int]:
    """All positive divisors of m, ascending."""
    small, large = [], []
    d = 1
    while d * d <= m:
        if m % d == 0:
            small.append(d)
            if d != m // d:
                large.append(m // d)
        d += 1
    return small + large[::-1]


def _check_modulus(m: int) -> None:
    if m < 1:
        raise ValueError(f"modulus must be positive, got {m}")
    if m > MAX_MODULUS:
        raise LimitExceededError(f"modulus {m} exceeds cap {MAX_MODULUS}")


def rotate_bits(bits: int, t: int, m: int) -> int:
    """Cyclic shift of an m-bit membership vector: x -> x + t in Z/mZ."""
    t %= m
    if t == 0:
        return bits
    mask = (1 << m) - 1
    return ((bits << t) | (bits >> (m - t))) & mask


@dataclass(frozen=True)
class ResidueSet:
    """A subset of Z/mZ with dense membership-vector semantics."""

    modulus: int
    bits: int

    def __post_init__(self) -> None:
        _check_modulus(self.modulus)
        if not 0 <= self.bits < (1 << self.modulus):
            raise ValueError("membership vector out of range for modulus")

    @classmethod
    def of(cls, modulus: int, members: Iterable[int]) -> "ResidueSet":
        _check_modulus(modulus)
        bits = 0
        for x in members:
            if not 0 <= x < modulus:
                raise ValueError(f"member {x} not in [0, {modulus})")
            bits |= 1 << x
        return cls(modulus, bits)

    @classmethod
    def full(cls, modulus: int) -> "ResidueSet":
        _check_modulus(modulus)
        return cls(modulus, (1 << modulus) - 1)

    @property
    def members(self) -> tuple[int, ...]:
        return tuple(self)

    @property
    def cardinality(self) -> int:
        return self.bits.bit_count()

    def __iter__(self) -> Iterator[int]:
        bits = self.bits
        while bits:
            low = bits & -bits
            yield low.bit_length() - 1
            bits ^= low

    def __contains__(self, x: int) -> bool:
        return 0 <= x < self.modulus and (self.bits >> x) & 1 == 1

    def __len__(self) -> int:
        return self.cardinality

    def is_empty(self) -> bool:
        return self.bits == 0

    def is_full(self) -> bool:
        return self.bits == (1 << self.modulus) - 1

    def shift(self, t: int) -> "ResidueSet":
        return ResidueSet(self.modulus, rotate_bits(self.bits, t, self.modulus))

    def union(self, other: "ResidueSet") -> "ResidueSet":
        _require_same_modulus([self, other])
        return ResidueSet(self.modulus, self.bits | other.bits)

    def complement(self) -> "ResidueSet":
        return ResidueSet(self.modulus, self.bits ^ ((1 << self.modulus) - 1))

    def issubset(self, other: "ResidueSet") -> bool:
        _require_same_modulus([self, other])
        return self.bits & ~other.bits == 0

    def __repr__(self) -> str:
        return f"ResidueSet({self.modulus}, {{{', '.join(map(str, self))}}})"


@dataclass(frozen=True)
class Subgroup:
    """The subgroup {0, d, 2d, ...} of Z/mZ; d = m encodes the trivial one."""

    modulus: int
    generator: int

    def __post_init__(self) -> None:
        if self.generator < 1 or self.modulus % self.generator != 0:
            raise ValueError("generator must be a positive divisor of the modulus")

    @property
    def order(self) -> int:
        return self.modulus // self.generator

    def is_trivial(self) -> bool:
        return self.generator == self.modulus

    def is_full(self) -> bool:
        return self.order == self.modulus

    @property
    def members(self) -> tuple[int, ...]:
        return tuple(range(0, self.modulus, self.generator)) if not self.is_trivial() else (0,)

    def as_residue_set(self) -> ResidueSet:
        return ResidueSet.of(self.modulus, self.members)


@dataclass(frozen=True)
class APWitness:
    start: int
    difference: int
    length: int

    def elements(self, modulus: int) -> tuple[int, ...]:
        return tuple((self.start + i * self.difference) % modulus for i in range(self.length))


@dataclass(frozen=True)
class QuasiPeriodicWitness:
    """Witness (K, s, S'') with S \\ (s + S'') being K-periodic."""

    subgroup: Subgroup
    shift: int
    trace: frozenset[int]
    periodic_part: frozenset[int]


@dataclass(frozen=True)
class StructureClass:
    """Classification of a residue set per the small-doubling dichotomy."""

    tag: str  # periodic | quasi-periodic | arithmetic-progression | ap-and-quasi-periodic | none
    qp_witness: Optional[QuasiPeriodicWitness] = None
    ap_witness: Optional[APWitness] = None


def _require_same_modulus(sets: Iterable[ResidueSet]) -> int:
    it = iter(sets)
    first = next(it)
    for s in it:
        if s.modulus != first.modulus:
            raise ValueError(f"modulus mismatch: {s.modulus} != {first.modulus}")
    return first.modulus


def sumset_bits(bit_sets: list[int], m: int) -> int:
    """Minkowski sum of membership vectors in Z/mZ (raw-int fast path)."""
    acc = bit_sets[0]
    for other in bit_sets[1:]:
        out = 0
        rest = other
        while rest:
            low = rest & -rest
            out |= rotate_bits(acc, low.bit_length() - 1, m)
            rest ^= low
        acc = out
    return acc


def sumset(sets: list[ResidueSet]) -> ResidueSet:
    """Pointwise sumset {x_1 + ... + x_k mod m} of nonempty sets mod m."""
    if not sets:
        raise ValueError("sumset of an empty list of sets")
    m = _require_same_modulus(sets)
    for s in sets:
        if s.is_empty():
            raise ValueError("sumset of an empty residue set")
    return ResidueSet(m, sumset_bits([s.bits for s in sets], m))


def stabilizer_generator_bits(bits: int, m: int) -> int:
    """Smallest divisor d of m with S + d = S (d = m when only trivial)."""
    for d in divisors(m):
        if rotate_bits(bits, d, m) == bits:
            return d
    return m  # unreachable: d = m always stabilizes


def stabilizer(s: ResidueSet) -> Subgroup:
    """Largest subgroup H with S + H = S, encoded by its smallest generator."""
    if s.is_empty():
        raise ValueError("stabilizer of the empty set")
    return Subgroup(s.modulus, stabilizer_generator_bits(s.bits, s.modulus))


def is_periodic(s: ResidueSet) -> bool:
    """True iff some proper divisor d of m satisfies S + d = S."""
    # Z/1Z has no proper divisor, so nothing mod 1 is periodic; the
    # generator-equals-modulus encoding gets that right for free.
    return not stabilizer(s).is_trivial()


def saturate_bits(bits: int, d: int, m: int) -> int:
    """S + H for the subgroup generated by divisor d of m."""
    out = bits
    for t in range(d, m, d):
        out |= rotate_bits(bits, t, m)
    return out


def detect_arithmetic_progression(s: ResidueSet) -> Optional[APWitness]:
    """AP witness (a, d, l) with S = {a, a+d, ..., a+(l-1)d}, all distinct.

    Returns the witness with smallest difference d, ties broken by
    smallest start; singletons are canonicalized to d = 1.
    """
    if s.is_empty():
        raise ValueError("cannot classify the empty set")
    m = s.modulus
    length = s.cardinality
    if length == 1:
        return APWitness(next(iter(s)), 1, 1)
    members = s.bits
    for d in range(1, m):
        # l distinct terms require l <= ord(d) in Z/mZ
        if length > m // gcd(d, m):
            continue
        for a in s:
            bits = 0
            x = a
            for _ in range(length):
                bits |= 1 << x
                x = (x + d) % m
            if bits == members:
                return APWitness(a, d, length)
    return None


def _subgroup_candidates(m: int) -> list[int]:
    # Nontrivial proper subgroups, largest order first (generator ascending).
    return [d for d in divisors(m) if 1 < d < m]


def detect_quasi_periodic(
    s: ResidueSet, require_nonempty_periodic_part: bool = False
) -> Optional[QuasiPeriodicWitness]:
    """Quasi-periodicity witness for a non-periodic set, or None.

    Searches nontrivial proper subgroups K by decreasing order, then
    shifts s ascending; the removed trace is forced to S'' = (S - s) & K,
    i.e. S' = S minus its part on the coset s + K.  A witness requires
    S'' to be a proper subset of K and S' to be K-periodic; with
    ``require_nonempty_periodic_part`` the remainder S' must be nonempty.
    Periodic inputs return None (the notion applies to non-periodic sets).
    """
    if s.is_empty():
        raise ValueError("cannot classify the empty set")
    m = s.modulus
    if m > 1 and is_periodic(s):
        return None
    for d in _subgroup_candidates(m):
        k_bits = 0
        for t in range(0, m, d):
            k_bits |= 1 << t
        for shift in s:
            trace_bits = rotate_bits(s.bits, -shift, m) & k_bits
            if trace_bits == k_bits:
                continue  # trace must be a proper subset of K
            remainder = s.bits & ~rotate_bits(trace_bits, shift, m)
            if require_nonempty_periodic_part and remainder == 0:
                continue
            if rotate_bits(remainder, d, m) == remainder:
                trace = frozenset(i for i in range(m) if (trace_bits >> i) & 1)
                periodic_part = frozenset(i for i in range(m) if (remainder >> i) & 1)
                return QuasiPeriodicWitness(Subgroup(m, d), shift, trace, periodic_part)
    return None


def classify_structure(
    s: ResidueSet, require_nonempty_periodic_part: bool = False
) -> StructureClass:
    """Tag a residue set as periodic / quasi-periodic / AP / both / none."""
    if s.is_empty():
        raise ValueError("cannot classify the empty set")
    ap = detect_arithmetic_progression(s)
    if s.modulus > 1 and is_periodic(s):
        return StructureClass("periodic", None, ap)
    qp = detect_quasi_periodic(s, require_nonempty_periodic_part)
    if qp is not None and ap is not None:
        return StructureClass("ap-and-quasi-periodic", qp, ap)
    if qp is not None:
        return StructureClass("quasi-periodic", qp, None)
    if ap is not None:
        return StructureClass("arithmetic-progression", None, ap)
    return StructureClass("none", None, None)


@dataclass(frozen=True)
class KneserDeficiency:
    """Stabilizer data for a k-fold sumset and its Kneser bound."""

    stabilizer: Subgroup
    multiplicities: tuple[int, ...]  # r_i = |S_i + H| / |H|
    sum_size: int
    bound: int  # (sum(r_i - 1) + 1) * |H|
    deficient: bool  # |sum| < sum|S_i| - (k - 1)


def kneser_deficiency(sets: list[ResidueSet]) -> KneserDeficiency:
    """Kneser stabilizer report for S_1 + ... + S_k.

    When the sumset is deficient the equality case of Kneser's theorem
    and the multiplicity bound sum(r_i) <= (k-1)/eta' are re-checked and
    an AssertionError signals any violation (none is expected).
    """
    if not sets:
        raise ValueError("need at least one set")
    m = _require_same_modulus(sets)
    total = sumset(sets)
    h = stabilizer(total)
    d = h.generator
    h_size = h.order
    mult = tuple(saturate_bits(s.bits, d, m).bit_count() // h_size for s in sets)
    bound = (sum(r - 1 for r in mult) + 1) * h_size
    k = len(sets)
    card_sum = sum(s.cardinality for s in sets)
    deficient = total.cardinality < card_sum - (k - 1)
    if deficient:
        assert total.cardinality == bound, "Kneser equality case violated"
        eta = 1 - Fraction(total.cardinality, card_sum)
        assert sum(mult) <= Fraction(k - 1, 1) / eta, "multiplicity bound violated"
    return KneserDeficiency(h, mult, total.cardinality, bound, deficient)


@dataclass(frozen=True)
class KempermanClassification:
    doubled: ResidueSet
    sumset_class: StructureClass
    base_ap: Optional[APWitness]


def kemperman_classify(
    s: ResidueSet, require_nonempty_periodic_part: bool = False
) -> KempermanClassification:
    """Classify S + S under the critical-pair hypothesis |S+S| = 2|S| - 1.

    Also reports whether S itself is an arithmetic progression, which is
    forced whenever S + S is neither periodic nor quasi-periodic.
    """
    if s.is_empty():
        raise ValueError("cannot classify the empty set")
    doubled = sumset([s, s])
    expected = 2 * s.cardinality - 1
    if doubled.cardinality != expected:
        raise ValueError(
            f"critical-pair hypothesis violated: |S+S| = {doubled.cardinality}, "
            f"2|S|-1 = {expected}"
        )
    cls = classify_structure(doubled, require_nonempty_periodic_part)
    return KempermanClassification(doubled, cls, detect_arithmetic_progression(s))


def project(s: ResidueSet, d: int) -> ResidueSet:
    """Image of S under reduction mod d, for d | m."""
    if d < 1 or s.modulus % d != 0:
        raise ValueError(f"{d} does not divide modulus {s.modulus}")
    bits = 0
    for x in s:
        bits |= 1 << (x % d)
    return ResidueSet(d, bits)
