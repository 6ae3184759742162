"""Window densities and modular (Buck-type) density bounds.

Exact rationals are produced for eventually periodic sets; set
descriptions get chain-indexed certificates where an exact profile
oracle exists and clearly labeled sampled intervals otherwise.  The
chain moduli must divide each other so that attained-residue ratios are
nonincreasing and cofinite-residue ratios nondecreasing along the
chain; an exhaustive chain (every integer divides some element) makes
the limits the true modular densities.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Optional, Union

from .generators import SetDescription, from_periodic
from .periodic import EventuallyPeriodicSet
from .zmod import ResidueSet

SetLike = Union[SetDescription, EventuallyPeriodicSet]

CHAIN_KINDS = ("factorial", "primorial", "powers_of_two", "powers_of_four")

DEFAULT_HORIZON = 1 << 16


@dataclass(frozen=True)
class ModulusChain:
    """Divisibility chain of moduli m_1 | m_2 | ... used as sampling grid."""

    kind: str
    values: tuple[int, ...]
    exhaustive: bool

    def __post_init__(self) -> None:
        for a, b in zip(self.values, self.values[1:]):
            if b % a != 0:
                raise ValueError("chain moduli must divide their successors")


def _primes(count: int) -> list[int]:
    out = []
    n = 2
    while len(out) < count:
        if all(n % p for p in out):
            out.append(n)
        n += 1
    return out


def modulus_chain(kind: str, depth: int) -> ModulusChain:
    """Build a named chain; factorial and primorial chains are exhaustive.

    Plain primorials are not exhaustive (4 divides none), so the
    primorial chain uses (p_1 ... p_n)^n, the minimal natural fix.
    """
    if depth < 1:
        raise ValueError("depth must be at least 1")
    if kind == "factorial":
        values = []
        acc = 1
        for n in range(1, depth + 1):
            acc *= n
            values.append(acc)
        return ModulusChain(kind, tuple(values), True)
    if kind == "primorial":
        primes = _primes(depth)
        values = []
        prod = 1
        for n in range(1, depth + 1):
            prod *= primes[n - 1]
            values.append(prod**n)
        return ModulusChain(kind, tuple(values), True)
    if kind == "powers_of_two":
        return ModulusChain(kind, tuple(1 << n for n in range(1, depth + 1)), False)
    if kind == "powers_of_four":
        return ModulusChain(kind, tuple(1 << (2 * n) for n in range(1, depth + 1)), False)
    raise ValueError(f"unknown chain kind {kind!r}")


@dataclass(frozen=True)
class DensityEstimate:
    """A density value with provenance.

    kind "exact" carries a rational with no horizon dependence;
    "upper_bound_sequence" / "lower_bound_sequence" carry the min / max
    of certified chain ratios (true bounds whenever the profile oracle
    is exact); "sampled" carries an interval whose certified side, if
    any, is named in ``certified``.
    """

    value: Union[Fraction, tuple[Fraction, Fraction]]
    kind: str
    chain_kind: Optional[str] = None
    horizon: Optional[int] = None
    sequence: tuple[tuple[int, Fraction], ...] = ()
    certified: Optional[str] = None
    warnings: tuple[str, ...] = ()

    def midpoint(self) -> Fraction:
        if isinstance(self.value, tuple):
            return (self.value[0] + self.value[1]) / 2
        return self.value

    def to_json_dict(self) -> dict:
        def frac(x: Fraction) -> dict:
            return {"num": x.numerator, "den": x.denominator}

        if isinstance(self.value, tuple):
            value = {"lo": frac(self.value[0]), "hi": frac(self.value[1])}
        else:
            value = frac(self.value)
        out = {
            "value": value,
            "kind": self.kind,
            "sequence": [[m, frac(r)] for m, r in self.sequence],
        }
        if self.chain_kind is not None:
            out["chain"] = self.chain_kind
        if self.horizon is not None:
            out["horizon"] = self.horizon
        if self.certified is not None:
            out["certified"] = self.certified
        if self.warnings:
            out["warnings"] = list(self.warnings)
        return out


def as_description(x: SetLike) -> SetDescription:
    if isinstance(x, EventuallyPeriodicSet):
        return from_periodic(x)
    return x


def attained_residues(x: SetLike, m: int, horizon: int = DEFAULT_HORIZON) -> tuple[ResidueSet, bool]:
    """Residues mod m hit by x: (set, certified-exact flag)."""
    desc = as_description(x)
    if desc.has_profile(m):
        return desc.profile(m).attained, True
    bits = 0
    for n in desc.members(horizon):
        bits |= 1 << (n % m)
    return ResidueSet(m, bits), False


def buck_upper(
    x: SetLike, chain: Optional[ModulusChain] = None, horizon: int = DEFAULT_HORIZON
) -> DensityEstimate:
    """Upper modular density along a chain.

    Exact for eventually periodic sets.  With an exact profile oracle
    the chain ratios |X^(m)| / m are true upper bounds for the limit and
    the minimum is reported; otherwise sampled ratios certify only
    lower bounds on each |X^(m)| / m, so the estimate is the interval
    [best observed ratio, 1].
    """
    desc = as_description(x)
    if desc.periodic_form is not None:
        return DensityEstimate(desc.periodic_form.natural_density(), "exact")
    if chain is None:
        chain = modulus_chain("powers_of_two", 10)
    if all(desc.has_profile(m) for m in chain.values):
        seq = tuple(
            (m, Fraction(desc.profile(m).attained.cardinality, m)) for m in chain.values
        )
        return DensityEstimate(
            min(r for _, r in seq),
            "upper_bound_sequence",
            chain_kind=chain.kind,
            sequence=seq,
            certified="upper",
        )
    members = desc.members(horizon)
    seq = []
    for m in chain.values:
        bits = 0
        for n in members:
            bits |= 1 << (n % m)
        seq.append((m, Fraction(bits.bit_count(), m)))
    best = max(r for _, r in seq)
    return DensityEstimate(
        (best, Fraction(1)),
        "sampled",
        chain_kind=chain.kind,
        horizon=horizon,
        sequence=tuple(seq),
        certified="lower",
        warnings=("no exact profile oracle on this chain",),
    )


def buck_lower(
    x: SetLike, chain: Optional[ModulusChain] = None, horizon: int = DEFAULT_HORIZON
) -> DensityEstimate:
    """Lower modular density along a chain.

    Exact for eventually periodic sets.  When the profile oracle pins
    down cofinitely attained residues, each ratio |X_*^(m)| / m is a
    certified lower bound (the union of those classes sits inside X up
    to a finite set) and the maximum is reported.  Cofiniteness is not
    decidable from samples, so otherwise the result is the interval
    [0, sampled counting ratio].
    """
    desc = as_description(x)
    if desc.periodic_form is not None:
        return DensityEstimate(desc.periodic_form.natural_density(), "exact")
    if chain is None:
        chain = modulus_chain("powers_of_two", 10)
    if desc.cofinite_exact and all(desc.has_profile(m) for m in chain.values):
        seq = tuple(
            (m, Fraction(desc.profile(m).cofinitely_attained.cardinality, m))
            for m in chain.values
        )
        return DensityEstimate(
            max(r for _, r in seq),
            "lower_bound_sequence",
            chain_kind=chain.kind,
            sequence=seq,
            certified="lower",
        )
    members = desc.members(horizon)
    count = len([n for n in members if n >= 1])
    upper = Fraction(count, max(horizon, 1))
    return DensityEstimate(
        (Fraction(0), upper),
        "sampled",
        chain_kind=chain.kind,
        horizon=horizon,
        certified="lower",
        warnings=("cofiniteness not decidable from samples",),
    )


@dataclass(frozen=True)
class WindowDensities:
    d_lower: DensityEstimate
    d_upper: DensityEstimate
    banach_lower: DensityEstimate
    banach_upper: DensityEstimate
    window_length: int

    def to_json_dict(self) -> dict:
        return {
            "d_lower": self.d_lower.to_json_dict(),
            "d_upper": self.d_upper.to_json_dict(),
            "banach_lower": self.banach_lower.to_json_dict(),
            "banach_upper": self.banach_upper.to_json_dict(),
            "window_length": self.window_length,
        }


def window_densities(x: SetLike, horizon: int) -> WindowDensities:
    """Asymptotic-density estimates from tail counting ratios and
    uniform-density estimates from extremal sliding windows of length
    floor(sqrt(horizon))."""
    if horizon < 16:
        raise ValueError("horizon must be at least 16")
    desc = as_description(x)
    members = desc.members(horizon)
    present = bytearray(horizon + 1)
    for n in members:
        present[n] = 1
    counts = [0] * (horizon + 1)  # counts[n] = |X cap [1, n]|
    acc = 0
    for n in range(1, horizon + 1):
        acc += present[n]
        counts[n] = acc
    checkpoints = [max(1, (horizon * j) // 16) for j in range(8, 17)]
    ratios = [Fraction(counts[n], n) for n in checkpoints]
    window = isqrt(horizon)
    wmax, wmin = 0, window + 1
    for k in range(horizon - window + 1):
        c = counts[k + window] - counts[k]
        if c > wmax:
            wmax = c
        if c < wmin:
            wmin = c
    sampled = lambda v: DensityEstimate(v, "sampled", horizon=horizon)
    return WindowDensities(
        d_lower=sampled(min(ratios)),
        d_upper=sampled(max(ratios)),
        banach_lower=sampled(Fraction(wmin, window)),
        banach_upper=sampled(Fraction(wmax, window)),
        window_length=window,
    )


@dataclass(frozen=True)
class ChainReportRow:
    modulus: int
    count: int
    ratio: Fraction
    kind: str  # "exact-profile" | "sampled"


def density_chain_report(
    x: SetLike, chain: ModulusChain, horizon: int = DEFAULT_HORIZON
) -> list[ChainReportRow]:
    """One row per chain modulus: attained-residue count and ratio."""
    rows = []
    for m in chain.values:
        attained, exact = attained_residues(x, m, horizon)
        rows.append(
            ChainReportRow(
                m,
                attained.cardinality,
                Fraction(attained.cardinality, m),
                "exact-profile" if exact else "sampled",
            )
        )
    return rows
