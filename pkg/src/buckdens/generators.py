"""Explicit set families: lazy membership oracles over N.

Each family is wrapped in a :class:`SetDescription` carrying a
membership test, an optional exact modular-profile oracle for the
moduli the construction supports, and (for families that are honestly
eventually periodic) an exact periodic form.  Infinite parameter
sequences are presented finitely: a prefix plus a closed-form rule.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt
from typing import Callable, Iterable, Optional

from . import periodic as zper
from .periodic import EventuallyPeriodicSet, ModularProfile
from .zmod import ResidueSet, sumset as residue_sumset


class UnsupportedModulusError(ValueError):
    """The family has no exact profile oracle at this modulus."""


@dataclass(frozen=True, eq=False)
class SetDescription:
    """A lazily evaluated subset of N.

    ``membership`` decides n in X; ``profile_fn``/``supports`` give the
    exact modular profile where the family supports one;
    ``periodic_form`` is set when X is exactly eventually periodic, in
    which case profiles exist for every modulus.
    """

    family: str
    params: dict
    membership: Callable[[int], bool]
    profile_fn: Optional[Callable[[int], ModularProfile]] = None
    supports: Optional[Callable[[int], bool]] = None
    all_attained_are_infinite: bool = False
    cofinite_exact: bool = False
    member_iter: Optional[Callable[[int], list[int]]] = None
    periodic_form: Optional[EventuallyPeriodicSet] = None

    def contains(self, n: int) -> bool:
        return self.membership(n)

    def has_profile(self, m: int) -> bool:
        if self.periodic_form is not None:
            return True
        return self.supports is not None and self.supports(m)

    def profile(self, m: int) -> ModularProfile:
        if self.periodic_form is not None:
            return self.periodic_form.modular_profile(m)
        if not self.has_profile(m):
            raise UnsupportedModulusError(f"family {self.family!r} has no exact profile mod {m}")
        return self.profile_fn(m)

    def members(self, horizon: int) -> list[int]:
        """All members n <= horizon, ascending."""
        if horizon < 0:
            return []
        if self.periodic_form is not None:
            return self.periodic_form.members(horizon)
        if self.member_iter is not None:
            return self.member_iter(horizon)
        return [n for n in range(horizon + 1) if self.membership(n)]

    def as_periodic(self) -> EventuallyPeriodicSet:
        if self.periodic_form is None:
            raise ValueError(f"family {self.family!r} is not eventually periodic")
        return self.periodic_form

    def __repr__(self) -> str:
        return f"SetDescription({self.family!r}, {self.params!r})"


def from_periodic(eps: EventuallyPeriodicSet, family: str = "periodic") -> SetDescription:
    return SetDescription(
        family=family,
        params=eps.to_json_dict(),
        membership=lambda n: n in eps,
        all_attained_are_infinite=not eps.tail.is_empty(),
        cofinite_exact=True,
        periodic_form=eps,
    )


# ---------------------------------------------------------------------------
# dyadic unions  B = union over bits a_j = 1 of (2^(j-1) + 2^j N)
# ---------------------------------------------------------------------------


def gen_b_alpha(bits: str) -> SetDescription:
    """Union of dyadic progressions selected by a binary expansion.

    ``bits`` lists a_1 a_2 ... a_L; position j contributes the class
    2^(j-1) + 2^j N.  The classes are disjoint (membership is decided
    by the 2-adic valuation), the union is exactly periodic with period
    2^L, and its density is the dyadic rational 0.a_1...a_L.
    """
    if not bits or any(c not in "01" for c in bits):
        raise ValueError("bits must be a nonempty binary string")
    if "1" not in bits:
        raise ValueError("at least one bit must be set")
    progressions = [
        (1 << (j - 1), 1 << j) for j, c in enumerate(bits, start=1) if c == "1"
    ]
    eps = zper.from_progressions(progressions)
    length = len(bits)

    def member(n: int) -> bool:
        if n <= 0:
            return False
        j = (n & -n).bit_length()  # 2-adic valuation + 1
        return j <= length and bits[j - 1] == "1"

    return SetDescription(
        family="b_alpha",
        params={"bits": bits},
        membership=member,
        all_attained_are_infinite=True,
        cofinite_exact=True,
        periodic_form=eps,
    )


def b_alpha_value(bits: str) -> Fraction:
    """The dyadic rational 0.a_1 a_2 ... a_L encoded by the bit string."""
    return Fraction(int(bits, 2), 1 << len(bits))


# ---------------------------------------------------------------------------
# binary-digit sets  D_K = { n : all binary digits at positions in K vanish }
# ---------------------------------------------------------------------------

_DK_RULES = ("double_gap", "powers_of_two", "arithmetic")


@dataclass(frozen=True, eq=False)
class DKDescription(SetDescription):
    """D_K plus exact accessors for the complement structure of D_K + D_K.

    With k_(-1) = -1, block t of the complement of D_K + D_K starts at
    M_t = 2^(k_t + 1) - 2^(k_(t-1) + 1) and repeats with period
    2^(k_t + 1); Z_T collects the complement's residues below
    2^(k_T + 1) and has exact size xi_T * 2^(k_T + 1).
    """

    k_prefix: tuple[int, ...] = ()
    rule: Optional[str] = None
    step: int = 1
    _cache: list[int] = field(default_factory=list, compare=False)

    def k(self, t: int) -> int:
        """The t-th forbidden position (0-indexed)."""
        if not self._cache:
            self._cache.extend(self.k_prefix)
        while t >= len(self._cache):
            if self.rule is None:
                raise IndexError(f"finite position sequence has no index {t}")
            last = self._cache[-1]
            if self.rule == "double_gap":
                self._cache.append(2 * last + 1)
            elif self.rule == "powers_of_two":
                self._cache.append(2 * last)
            else:  # arithmetic
                self._cache.append(last + self.step)
        return self._cache[t]

    def positions_below(self, bound: int) -> list[int]:
        out = []
        t = 0
        while True:
            try:
                v = self.k(t)
            except IndexError:
                break
            if v >= bound:
                break
            out.append(v)
            t += 1
        return out

    def is_finite_rule(self) -> bool:
        return self.rule is None

    def free_positions_are_infinite(self) -> bool:
        # Only a step-1 arithmetic tail eventually forbids every position.
        return not (self.rule == "arithmetic" and self.step == 1)

    # -- complement structure of D_K + D_K -------------------------------

    def m_t(self, t: int) -> int:
        prev = -1 if t == 0 else self.k(t - 1)
        return (1 << (self.k(t) + 1)) - (1 << (prev + 1))

    def xi(self, t_max: int) -> Fraction:
        prod = Fraction(1)
        prev = -1
        for t in range(t_max + 1):
            kt = self.k(t)
            prod *= 1 - Fraction(1 << (prev + 1), 1 << (kt + 1))
            prev = kt
        return 1 - prod

    def delta_partial(self, t_max: int) -> Fraction:
        return 1 - self.xi(t_max)

    def z_t(self, t_max: int) -> list[int]:
        """Complement residues below 2^(k_T + 1), by the block recurrence."""
        block = 1 << (self.k(0) + 1)
        z = list(range(self.m_t(0), block))
        for t in range(1, t_max + 1):
            prev_block = block
            block = 1 << (self.k(t) + 1)
            m = self.m_t(t)
            top = list(range(m, block))
            z = top + [x + j * prev_block for j in range(m // prev_block) for x in z]
        return sorted(z)

    def delta_lower_bound(self, t_max: int) -> Optional[Fraction]:
        """Certified lower bound for the infinite product delta_K.

        Valid for rules whose gaps k_t - k_(t-1) never decrease and grow
        past t_max, so the tail sum of 2^(k_(t-1) - k_t) is dominated by
        a geometric series; returns None when no certificate applies.
        """
        if self.rule not in ("double_gap", "powers_of_two"):
            return None
        first_tail_gap = self.k(t_max + 1) - self.k(t_max)
        if first_tail_gap < 1:
            return None
        tail_sum_bound = Fraction(2, 1 << first_tail_gap)
        if tail_sum_bound >= 1:
            return None
        return self.delta_partial(t_max) * (1 - tail_sum_bound)


def gen_d_k(
    k_prefix: Iterable[int], rule: Optional[str] = None, step: int = 1
) -> DKDescription:
    """The set of n whose binary digits vanish at every position of K.

    K is a strictly increasing sequence given by a finite prefix plus an
    optional extension rule (``double_gap``: k -> 2k + 1,
    ``powers_of_two``: k -> 2k, or ``arithmetic`` with ``step``).
    Exact profiles exist for power-of-two moduli; a finite K (no rule)
    makes the set exactly periodic.
    """
    prefix = tuple(k_prefix)
    if not prefix:
        raise ValueError("position sequence must be nonempty")
    if any(b < 0 for b in prefix):
        raise ValueError("positions must be nonnegative")
    if any(b >= c for b, c in zip(prefix, prefix[1:])):
        raise ValueError("positions must be strictly increasing")
    if rule is not None:
        if rule not in _DK_RULES:
            raise ValueError(f"unknown rule {rule!r}")
        if rule == "powers_of_two" and prefix[-1] < 1:
            raise ValueError("powers_of_two rule needs a positive last position")
        if rule == "arithmetic" and step < 1:
            raise ValueError("arithmetic rule needs step >= 1")

    desc = DKDescription(
        family="d_k",
        params={"k_prefix": list(prefix), "rule": rule, **({"step": step} if rule == "arithmetic" else {})},
        membership=lambda n: _dk_member(desc, n),
        supports=lambda m: m >= 1 and m & (m - 1) == 0,
        profile_fn=lambda m: _dk_profile(desc, m),
        all_attained_are_infinite=False,
        cofinite_exact=True,
        member_iter=lambda horizon: _dk_members(desc, horizon),
        periodic_form=_dk_periodic_form(prefix) if rule is None else None,
        k_prefix=prefix,
        rule=rule,
        step=step,
    )
    object.__setattr__(
        desc, "all_attained_are_infinite", desc.free_positions_are_infinite()
    )
    return desc


def _dk_member(desc: DKDescription, n: int) -> bool:
    if n < 0:
        return False
    for p in desc.positions_below(n.bit_length()):
        if (n >> p) & 1:
            return False
    return True


def _dk_members(desc: DKDescription, horizon: int) -> list[int]:
    if horizon < 0:
        return []
    width = horizon.bit_length() if horizon else 1
    forbidden = set(desc.positions_below(width))
    free = [p for p in range(width) if p not in forbidden]
    members = [0]
    for p in free:
        step = 1 << p
        members.extend([x + step for x in members if x + step <= horizon])
    return sorted(members)


def _dk_periodic_form(prefix: tuple[int, ...]) -> Optional[EventuallyPeriodicSet]:
    period = 1 << (prefix[-1] + 1)
    if period > (1 << 20):
        return None
    mask = 0
    for p in prefix:
        mask |= 1 << p
    return zper.from_residues(period, (r for r in range(period) if r & mask == 0))


def _dk_profile(desc: DKDescription, m: int) -> ModularProfile:
    if m < 1 or m & (m - 1):
        raise UnsupportedModulusError(f"D_K profiles exist for powers of two, not {m}")
    e = m.bit_length() - 1
    mask = 0
    for p in desc.positions_below(e):
        mask |= 1 << p
    att_bits = 0
    for r in range(m):
        if r & mask == 0:
            att_bits |= 1 << r
    attained = ResidueSet(m, att_bits)
    empty = ResidueSet(m, 0)
    high_positions_free = desc.free_positions_are_infinite()
    infinite = attained if high_positions_free else empty
    no_high_forbidden = desc.is_finite_rule() and all(p < e for p in desc.k_prefix)
    cofinite = attained if no_high_forbidden else empty
    return ModularProfile(m, attained, infinite, cofinite)


def gen_x0() -> DKDescription:
    """Numbers whose base-4 digits are all 0 or 1.

    Equivalently the binary digits at odd positions vanish, so this is
    the K = (1, 3, 5, ...) instance of the digit construction; profiles
    mod 4^m have exactly 2^m attained residues.
    """
    desc = gen_d_k((1,), rule="arithmetic", step=2)
    object.__setattr__(desc, "family", "x0")
    object.__setattr__(desc, "params", {})
    return desc


# ---------------------------------------------------------------------------
# fractional-part (three-distance) sets  A = { n : {theta n} < alpha }
# ---------------------------------------------------------------------------

#: fractional bits carried by the fixed-point evaluation of theta
WEYL_PRECISION = 64
#: membership is only trusted for n below this (error < 2^-32 of a unit)
WEYL_MAX_N = 1 << 32
#: |{theta n} - alpha| below this is flagged as boundary-ambiguous
WEYL_BOUNDARY = Fraction(1, 1 << 30)


def _theta_fixed_point(theta: str) -> int:
    """floor(theta * 2^64) for a named constant or a decimal/rational string."""
    double = 2 * WEYL_PRECISION
    if theta == "sqrt2":
        return isqrt(2 << double)
    if theta == "sqrt3":
        return isqrt(3 << double)
    if theta == "sqrt5":
        return isqrt(5 << double)
    if theta == "golden":
        return ((1 << WEYL_PRECISION) + isqrt(5 << double)) // 2
    try:
        frac = Fraction(theta)
    except ValueError as exc:
        raise ValueError(f"unknown theta constant {theta!r}") from exc
    if frac <= 0:
        raise ValueError("theta must be positive")
    return (frac.numerator << WEYL_PRECISION) // frac.denominator


@dataclass(frozen=True, eq=False)
class WeylDescription(SetDescription):
    theta_scaled: int = 0  # floor(theta * 2^64)
    alpha: Fraction = Fraction(1, 2)

    def frac_scaled(self, n: int) -> int:
        """(theta n mod 1) * 2^64, up to an error below n * 2^-64."""
        if not 0 <= n <= WEYL_MAX_N:
            raise ValueError(f"n = {n} beyond trusted precision range")
        return (self.theta_scaled * n) & ((1 << WEYL_PRECISION) - 1)

    def margin(self, n: int) -> Fraction:
        return Fraction(self.frac_scaled(n), 1 << WEYL_PRECISION) - self.alpha

    def near_boundary(self, n: int) -> bool:
        return abs(self.margin(n)) < WEYL_BOUNDARY


def gen_weyl(theta: str, alpha) -> WeylDescription:
    """Integers whose fractional part {theta n} falls below alpha.

    theta is a named irrational ("sqrt2", "sqrt3", "sqrt5", "golden") or
    a decimal/rational string, evaluated to 64 fractional bits; alpha is
    a rational in (0, 1).  Membership near the boundary can be audited
    with :meth:`WeylDescription.near_boundary`.
    """
    alpha = Fraction(alpha)
    if not 0 < alpha < 1:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    scaled = _theta_fixed_point(theta)
    bound_num = alpha.numerator << WEYL_PRECISION
    den = alpha.denominator
    mask = (1 << WEYL_PRECISION) - 1

    def member(n: int) -> bool:
        if n < 0 or n > WEYL_MAX_N:
            raise ValueError(f"n = {n} beyond trusted precision range")
        return ((scaled * n) & mask) * den < bound_num

    return WeylDescription(
        family="weyl",
        params={"theta": theta, "alpha": str(alpha)},
        membership=member,
        theta_scaled=scaled,
        alpha=alpha,
    )


# ---------------------------------------------------------------------------
# few-prime-factor sets  P_t = { n >= 2 : omega(n) <= t }
# ---------------------------------------------------------------------------


def omega(n: int) -> int:
    """Number of distinct prime divisors, by trial division."""
    if n < 2:
        return 0
    count = 0
    d = 2
    while d * d <= n:
        if n % d == 0:
            count += 1
            while n % d == 0:
                n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        count += 1
    return count


def euler_phi(n: int) -> int:
    if n < 1:
        raise ValueError("phi is defined for positive integers")
    result = n
    d = 2
    m = n
    while d * d <= m:
        if m % d == 0:
            result -= result // d
            while m % d == 0:
                m //= d
        d += 1 if d == 2 else 2
    if m > 1:
        result -= result // m
    return result


def phi_t(k: int, t: int) -> int:
    """Count of 1 <= a <= k whose gcd with k has at most t prime factors.

    Computed by the exact divisor sum of euler_phi(k/d) over divisors d
    of k with omega(d) <= t; t = 0 recovers the totient.
    """
    if k < 1:
        raise ValueError("k must be positive")
    if t < 0:
        raise ValueError("t must be nonnegative")
    total = 0
    d = 1
    while d * d <= k:
        if k % d == 0:
            if omega(d) <= t:
                total += euler_phi(k // d)
            other = k // d
            if other != d and omega(other) <= t:
                total += euler_phi(k // other)
        d += 1
    return total


def gen_p_t(t: int) -> SetDescription:
    """Integers at least 2 with at most t distinct prime factors."""
    if t < 0:
        raise ValueError("t must be nonnegative")
    return SetDescription(
        family="p_t",
        params={"t": t},
        membership=lambda n: n >= 2 and omega(n) <= t,
    )


# ---------------------------------------------------------------------------
# thin additive bases of {0..m-1} and their chained products
# ---------------------------------------------------------------------------


def thin_basis(m: int) -> tuple[int, ...]:
    """A set A of size below 2*sqrt(m) with A + A covering {0..m-1}.

    With q = floor(sqrt(m)), the set is {0..s} plus the q - 1 anchors
    j*s + (j-1); the anchor blocks tile [2s+1, (q+1)s + q - 1] which
    reaches m - 1 in both branches of s.
    """
    if m < 2:
        raise ValueError("m must be at least 2")
    q = isqrt(m)
    s = q - 1 if q * q <= m < q * (q + 1) else q
    members = sorted(set(range(s + 1)) | {j * s + (j - 1) for j in range(2, q + 1)})
    assert members[-1] < m
    bits = 0
    for a in members:
        bits |= 1 << a
    cover = 0
    for a in members:
        cover |= bits << a
    assert cover & ((1 << m) - 1) == (1 << m) - 1, "basis fails to cover {0..m-1}"
    assert len(members) ** 2 < 4 * m, "basis size bound violated"
    return tuple(members)


def thin_basis_refined_bound(m: int) -> int:
    """The stricter floor bound 2*floor(sqrt(m + 1/4) - 1/2), exactly."""
    return 2 * ((isqrt(4 * m + 1) - 1) // 2)


def basis_chain(moduli: list[int], sparsify: bool = False) -> tuple[int, ...]:
    """Chained thin basis B = A(m1) + m1 A(m2) + m1 m2 A(m3) + ...

    B + B covers every residue mod the product of the moduli and has at
    most prod |A(m_i)| < 2^k sqrt(prod m_i) elements.  With ``sparsify``
    each nonzero element a of the i-th component is displaced by
    2^a * (product of the later moduli) * m_i, which spreads the set out
    while leaving every element's residue mod the full product intact.
    """
    if not moduli:
        raise ValueError("at least one modulus is required")
    if any(m < 2 for m in moduli):
        raise ValueError("moduli must be at least 2")
    total = 1
    for m in moduli:
        total *= m
    components = []
    scale = 1
    for i, m in enumerate(moduli):
        base = thin_basis(m)
        if sparsify:
            cofactor = total // (scale * m)
            base = tuple(a + (1 << a) * cofactor * m if a else 0 for a in base)
        components.append([scale * a for a in base])
        scale *= m
    members = {0}
    expected = 1
    for comp in components:
        expected *= len(comp)
        members = {x + c for x in members for c in comp}
    result = tuple(sorted(members))
    assert len(result) <= expected
    assert len(result) ** 2 < (4 ** len(moduli)) * total, "size bound violated"
    residues = ResidueSet.of(total, {x % total for x in result})
    doubled = residue_sumset([residues, residues])
    assert doubled.is_full(), "doubled chain does not cover the ring"
    return result


# ---------------------------------------------------------------------------
# hook sets  X = { r + k_1 k_2 ... k_r : r >= 1 }
# ---------------------------------------------------------------------------


def gen_hook(rule: str = "factorial") -> SetDescription:
    """The sparse set {r + K_r} with K_r the running product of a rule.

    The factorial rule (k_r = r) makes every modulus divide some K_r,
    which forces every residue class to be hit: m consecutive indices
    past the point where m | K_r land in m distinct classes.
    """
    if rule != "factorial":
        raise ValueError(f"unknown hook rule {rule!r}")

    def generate(horizon: int) -> list[int]:
        out = []
        product = 1
        r = 1
        while True:
            product *= r
            value = r + product
            if value > horizon:
                break
            out.append(value)
            r += 1
        return out

    def member(n: int) -> bool:
        product = 1
        r = 1
        while True:
            product *= r
            value = r + product
            if value == n:
                return True
            if value > n:
                return False
            r += 1

    return SetDescription(
        family="hook",
        params={"rule": rule},
        membership=member,
        member_iter=generate,
    )


# ---------------------------------------------------------------------------
# three-density windows construction
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ThreeDensityDescription(SetDescription):
    alpha: Fraction = Fraction(1, 2)
    beta: Fraction = Fraction(1, 2)
    gamma: Fraction = Fraction(1, 2)
    n_base: int = 10
    weyl: Optional[WeylDescription] = None
    _residue_chain: list[frozenset[int]] = field(default_factory=list, compare=False)

    def window(self, k: int) -> tuple[int, int]:
        """Inclusive block bounds [N_k, N_k / (1 - gamma)]."""
        n_k = self.n_base**k
        upper = (n_k * (1 - self.gamma).denominator) // (1 - self.gamma).numerator
        return n_k, upper

    def r_value(self, k: int) -> int:
        return int(self.alpha * (1 << k))

    def residues(self, k: int) -> frozenset[int]:
        """R_k: the lexicographically smallest nested residue chain."""
        if not self._residue_chain:
            self._residue_chain.append(frozenset())  # placeholder for k = 0
        while len(self._residue_chain) <= k:
            j = len(self._residue_chain)
            prev = self._residue_chain[j - 1]
            lifted = set(prev) | {r + (1 << (j - 1)) for r in prev}
            want = self.r_value(j)
            extra = 0
            while len(lifted) < want:
                if extra not in lifted:
                    lifted.add(extra)
                extra += 1
            self._residue_chain.append(frozenset(lifted))
        return self._residue_chain[k]


def gen_three_density(
    alpha, beta, gamma, theta: str = "sqrt2", n_base: int = 10
) -> ThreeDensityDescription:
    """Blocks [N_k, N_k/(1-gamma)] filtered by {theta n} < beta and a
    nested residue chain of relative size ~alpha mod 2^k.

    The block anchors N_k = n_base^k need n_base >= 10 to satisfy the
    growth requirements N_{k+1} >= 10 N_k >= 10 * 4^k.  The three window
    densities of the result separate: asymptotic ~ alpha*beta*gamma,
    uniform ~ alpha*beta, modular ~ alpha.
    """
    alpha, beta, gamma = Fraction(alpha), Fraction(beta), Fraction(gamma)
    for name, value in (("alpha", alpha), ("beta", beta), ("gamma", gamma)):
        if not 0 < value < 1:
            raise ValueError(f"{name} must lie in (0, 1), got {value}")
    if n_base < 10:
        raise ValueError("block base must be at least 10")
    weyl = gen_weyl(theta, beta)

    desc = ThreeDensityDescription(
        family="three_density",
        params={
            "alpha": str(alpha),
            "beta": str(beta),
            "gamma": str(gamma),
            "theta": theta,
            "n_base": n_base,
        },
        membership=lambda n: _three_density_member(desc, n),
        alpha=alpha,
        beta=beta,
        gamma=gamma,
        n_base=n_base,
        weyl=weyl,
    )
    return desc


def _three_density_member(desc: ThreeDensityDescription, n: int) -> bool:
    if n < desc.n_base:
        return False
    k = 1
    while desc.n_base**k <= n:
        low, high = desc.window(k)
        if low <= n <= high:
            if n % (1 << k) in desc.residues(k) and desc.weyl.membership(n):
                return True
        k += 1
    return False


# ---------------------------------------------------------------------------
# unions and sumsets of descriptions
# ---------------------------------------------------------------------------


def union_description(parts: list[SetDescription]) -> SetDescription:
    """Pointwise union; profiles combine exactly for attained and
    infinitely-attained residues, and fully when every part is periodic."""
    if not parts:
        raise ValueError("union of no descriptions")
    if len(parts) == 1:
        return parts[0]
    if all(p.periodic_form is not None for p in parts):
        eps = parts[0].periodic_form
        for p in parts[1:]:
            eps = zper.union(eps, p.periodic_form)
        out = from_periodic(eps, family="union")
        object.__setattr__(out, "params", {"of": [p.params | {"family": p.family} for p in parts]})
        return out

    def member(n: int) -> bool:
        return any(p.membership(n) for p in parts)

    def supports(m: int) -> bool:
        return all(p.has_profile(m) for p in parts)

    def profile(m: int) -> ModularProfile:
        profs = [p.profile(m) for p in parts]
        att = 0
        inf = 0
        cof = 0
        for pr in profs:
            att |= pr.attained.bits
            inf |= pr.infinitely_attained.bits
            cof |= pr.cofinitely_attained.bits
        return ModularProfile(
            m, ResidueSet(m, att), ResidueSet(m, inf), ResidueSet(m, cof)
        )

    def members(horizon: int) -> list[int]:
        out = set()
        for p in parts:
            out.update(p.members(horizon))
        return sorted(out)

    return SetDescription(
        family="union",
        params={"of": [p.params | {"family": p.family} for p in parts]},
        membership=member,
        profile_fn=profile,
        supports=supports,
        all_attained_are_infinite=all(p.all_attained_are_infinite for p in parts),
        cofinite_exact=False,  # a class may be covered only jointly
        member_iter=members,
    )


def sumset_description(parts: list[SetDescription]) -> SetDescription:
    """The k-fold sumset X_1 + ... + X_k as a description.

    Attained and infinitely-attained residues follow exactly from the
    component profiles ((X+Y)^(m) is the residue sumset; a residue is
    hit infinitely often iff some split has an infinite factor); the
    cofinite field is only a certified lower bound unless every part is
    eventually periodic, in which case the sumset is computed exactly.
    """
    if not parts:
        raise ValueError("sumset of no descriptions")
    if len(parts) == 1:
        return parts[0]
    if all(p.periodic_form is not None for p in parts):
        eps = zper.sumset([p.periodic_form for p in parts])
        out = from_periodic(eps, family="sumset")
        object.__setattr__(out, "params", {"of": [p.params | {"family": p.family} for p in parts]})
        return out

    from .oracle import brute_sumset_members

    def members(horizon: int) -> list[int]:
        lists = [p.members(horizon) for p in parts]
        acc = lists[0]
        for other in lists[1:]:
            acc = brute_sumset_members(acc, other, horizon)
        return acc

    first = parts[0]
    rest = parts[1] if len(parts) == 2 else sumset_description(parts[1:])

    def member(n: int) -> bool:
        return any(rest.membership(n - x) for x in first.members(n))

    def supports(m: int) -> bool:
        return all(p.has_profile(m) for p in parts)

    def profile(m: int) -> ModularProfile:
        profs = [p.profile(m) for p in parts]
        att = residue_sumset([pr.attained for pr in profs])
        inf_bits = 0
        for i, pr in enumerate(profs):
            if pr.infinitely_attained.is_empty():
                continue
            others = [p2.attained for j, p2 in enumerate(profs) if j != i]
            if any(o.is_empty() for o in others):
                continue
            inf_bits |= residue_sumset([pr.infinitely_attained] + others).bits
        cofs = [pr.cofinitely_attained for pr in profs]
        if any(c.is_empty() for c in cofs):
            cof = ResidueSet(m, 0)
        else:
            cof = residue_sumset(cofs)
        return ModularProfile(m, att, ResidueSet(m, inf_bits), cof)

    return SetDescription(
        family="sumset",
        params={"of": [p.params | {"family": p.family} for p in parts]},
        membership=member,
        profile_fn=profile,
        supports=supports,
        all_attained_are_infinite=all(p.all_attained_are_infinite for p in parts),
        cofinite_exact=False,
        member_iter=members,
    )


# ---------------------------------------------------------------------------
# JSON family schema
# ---------------------------------------------------------------------------


def parse_description(obj: dict) -> SetDescription:
    """Build a description from the JSON family schema.

    Accepts {"family": ...} records, the raw eventually-periodic form
    {"q", "T", "prefix", "tail"}, and the {"progressions": [[a, k], ...]}
    shorthand.
    """
    if not isinstance(obj, dict):
        raise ValueError("set description must be a JSON object")
    if "family" not in obj:
        return from_periodic(zper.from_json_dict(obj))
    family = obj["family"]
    try:
        if family == "b_alpha":
            return gen_b_alpha(obj["bits"])
        if family == "d_k":
            return gen_d_k(obj["k_prefix"], obj.get("rule"), obj.get("step", 1))
        if family == "x0":
            return gen_x0()
        if family == "weyl":
            return gen_weyl(obj.get("theta", "sqrt2"), Fraction(obj["alpha"]))
        if family == "p_t":
            return gen_p_t(obj["t"])
        if family == "thin_basis":
            return from_periodic(zper.from_finite(thin_basis(obj["m"])), family="thin_basis")
        if family == "basis_chain":
            members = basis_chain(obj["moduli"], obj.get("sparsify", False))
            return from_periodic(zper.from_finite(members), family="basis_chain")
        if family == "hook":
            return gen_hook(obj.get("rule", "factorial"))
        if family == "three_density":
            return gen_three_density(
                obj["alpha"],
                obj["beta"],
                obj["gamma"],
                obj.get("theta", "sqrt2"),
                obj.get("n_base", 10),
            )
        if family == "union":
            return union_description([parse_description(part) for part in obj["of"]])
        if family == "periodic":
            return from_periodic(zper.from_json_dict(obj))
    except KeyError as exc:
        raise ValueError(f"family {family!r} is missing field {exc.args[0]!r}") from exc
    raise ValueError(f"unknown family {family!r}")
