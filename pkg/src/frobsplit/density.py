"""Exact density computations and their statistical consistency checks.

The central quantity is the fraction of elements of a similitude group (or
of its derived subgroup) whose m-th power fails to be regular with maximally
anisotropic centralizer.  Products of these fractions over a set of primes
bound the density of primes where every residual Frobenius image fails the
regularity test; the complement is the lower bound for the density of primes
certified by at least one good prime.

Everything exact is a Fraction.  The Chebotarev side is simulated at the
level of independent per-prime Bernoulli indicators with the exact
fractions as probabilities (the product hypothesis makes the indicators
independent), so the simulation is a pure statistical consistency check of
the product formula, reproducible from its seed.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import sqrt

from .groups import (
    BudgetExceeded,
    GroupDescriptor,
    GroupElement,
    _packed_group,
    enumerate_group_packed,
    group_order,
    normalizer_census,
    pack_matrix,
    regular_torus_count,
)

MAX_CLOSURE = 10**7
MAX_FACTOR_ORDER = 10**5

_SQUEEZE_PARTS = {"der": "derived", "full": "full"}


class GoursatContradiction(AssertionError):
    """Surjective projections generated a proper subgroup in-hypothesis;
    that contradicts distinctness of the simple quotients and means the
    implementation (not the input) is wrong."""


def regular_fraction(desc: GroupDescriptor, m: int = 1, squeeze: str = "full") -> Fraction:
    """|J_{l,m}(H)| / |H| via the count identity (|G|/|N|) * |T*_m ∩ H|."""
    if squeeze not in _SQUEEZE_PARTS:
        raise ValueError(f"squeeze must be 'der' or 'full', got {squeeze!r}")
    part = _SQUEEZE_PARTS[squeeze]
    nc = normalizer_census(desc)
    tori = group_order(desc) // nc.normalizer_order
    j_count = tori * regular_torus_count(desc, m, part)
    return Fraction(j_count, group_order(desc, part))


def irregular_fraction(desc: GroupDescriptor, m: int = 1, squeeze: str = "full") -> Fraction:
    """|I_{l,m}(H)| / |H|, the complement of the regular fraction."""
    return 1 - regular_fraction(desc, m, squeeze)


@dataclass(frozen=True)
class ModelEntry:
    desc: GroupDescriptor
    squeeze: str = "full"

    def __post_init__(self):
        if self.squeeze not in _SQUEEZE_PARTS:
            raise ValueError(f"squeeze must be 'der' or 'full', got {self.squeeze!r}")


@dataclass(frozen=True)
class GaloisModel:
    """A finite set of primes with one group model per prime, plus the
    power level m (the degree of the auxiliary extension)."""

    entries: tuple
    m: int = 1

    def __post_init__(self):
        ells = [e.desc.ell for e in self.entries]
        if len(set(ells)) != len(ells):
            raise ValueError("primes in a model must be distinct")
        if self.m < 1:
            raise ValueError("m must be at least 1")

    @staticmethod
    def uniform(family: str, r: int, primes, m: int = 1, squeeze: str = "full") -> "GaloisModel":
        return GaloisModel(
            tuple(ModelEntry(GroupDescriptor(family, r, ell), squeeze) for ell in primes),
            m,
        )


@dataclass(frozen=True)
class DensityReport:
    """Exact per-prime fractions and their product, with the C^|A| bound."""

    per_ell: tuple  # (ell, irregular Fraction, exceptional flag)
    product: Fraction
    bound: Fraction  # C^|A| with C the worst per-prime fraction
    complement: Fraction  # lower bound for the certified density
    residue_degree_one_bound: Fraction  # complement scaled by 1/m (model convention)
    m: int


def density_product(model: GaloisModel) -> DensityReport:
    """Exact product of the per-prime irregular fractions.

    The residue_degree_one_bound field carries the conventional 1/m scaling
    of the complement used when only residue-degree-one primes are counted;
    it is a reporting convention, not a computed density.
    """
    per = []
    for entry in model.entries:
        frac = irregular_fraction(entry.desc, model.m, entry.squeeze)
        per.append((entry.desc.ell, frac, entry.desc.exceptional_field))
    prod = Fraction(1)
    for _, frac, _ in per:
        prod *= frac
    worst = max((frac for _, frac, _ in per), default=Fraction(1))
    bound = worst ** len(per)
    complement = 1 - prod
    return DensityReport(
        per_ell=tuple(per),
        product=prod,
        bound=bound,
        complement=complement,
        residue_degree_one_bound=complement / model.m,
        m=model.m,
    )


def cm_subfield_fraction(two_g: int, ell: int) -> Fraction:
    """Fraction of units of GF(ell^2g) lying in a proper subfield.

    Inclusion-exclusion over the maximal proper subfields GF(ell^(2g/p)).
    """
    if two_g < 2 or two_g % 2 != 0:
        raise ValueError("the extension degree must be an even number >= 2")
    primes = _prime_divisors(two_g)
    count = 0
    for mask in range(1, 1 << len(primes)):
        d = two_g
        bits = 0
        for i, p in enumerate(primes):
            if mask >> i & 1:
                d //= p
                bits += 1
        count += (-1) ** (bits + 1) * (ell**d - 1)
    return Fraction(count, ell**two_g - 1)


def _prime_divisors(n: int):
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def cm_subfield_fraction_exhaustive(two_g: int, ell: int) -> Fraction:
    """The same fraction by per-element subfield-degree counting."""
    from .finfield import make_field, subfield_degree

    if ell**two_g > 10**6:
        raise BudgetExceeded("field too large for exhaustive subfield counting")
    field = make_field(ell, two_g)
    hits = sum(
        1 for x in field.elements() if not x.is_zero() and subfield_degree(x) < two_g
    )
    return Fraction(hits, field.q - 1)


# ---------------------------------------------------------------------------
# simulation


@dataclass(frozen=True)
class SimulationResult:
    samples: int
    hits: int  # samples landing in the irregular class at every prime
    empirical: Fraction
    expected: Fraction
    z_score: float | None
    seed: int
    streams: int
    stream_layout: tuple  # (stream_seed, samples, hits) per stream, for replay


def _stream_seed(seed: int, index: int) -> int:
    return (seed ^ ((index + 1) * 0x9E3779B97F4A7C15)) % 2**63


def chebotarev_simulate(
    model: GaloisModel, samples: int, seed: int, streams: int = 1
) -> SimulationResult:
    """Seeded Bernoulli simulation of the product density.

    Each sample draws one exact Bernoulli indicator per prime (probability =
    the exact irregular fraction) and scores a hit when every indicator
    fires.  Streams split the sample count and merge hit counts by addition;
    fixed (seed, samples, streams) reproduces the result bit for bit.
    """
    if samples < 1:
        raise ValueError("need at least one sample")
    if streams < 1 or streams > samples:
        raise ValueError("stream count must be in [1, samples]")
    probs = [
        irregular_fraction(e.desc, model.m, e.squeeze) for e in model.entries
    ]
    pairs = [(p.numerator, p.denominator) for p in probs]
    layout = []
    total_hits = 0
    base, extra = divmod(samples, streams)
    for i in range(streams):
        n_i = base + (1 if i < extra else 0)
        s_i = _stream_seed(seed, i)
        rng = random.Random(s_i)
        hits = 0
        for _ in range(n_i):
            ok = True
            for num, den in pairs:
                if rng.randrange(den) >= num:
                    ok = False
            if ok:
                hits += 1
        layout.append((s_i, n_i, hits))
        total_hits += hits
    expected = Fraction(1)
    for p in probs:
        expected *= p
    z = None
    if 0 < expected < 1:
        mean = float(expected)
        z = (total_hits - samples * mean) / sqrt(samples * mean * (1 - mean))
    return SimulationResult(
        samples=samples,
        hits=total_hits,
        empirical=Fraction(total_hits, samples),
        expected=expected,
        z_score=z,
        seed=seed,
        streams=streams,
        stream_layout=tuple(layout),
    )


# ---------------------------------------------------------------------------
# product surjectivity


@dataclass(frozen=True)
class GoursatReport:
    factor_orders: tuple
    projections_surjective: tuple
    closure_order: int
    product_order: int
    full_product: bool
    in_hypothesis: bool
    note: str


def _mulclose(generators, multiply, cap: int):
    els = set(generators)
    frontier = list(els)
    while frontier:
        new = []
        for g in generators:
            for b in frontier:
                c = multiply(g, b)
                if c not in els:
                    els.add(c)
                    new.append(c)
                    if len(els) > cap:
                        raise BudgetExceeded("closure exceeded the enumeration cap")
        frontier = new
    return els


def _hypothesis_note(factors) -> str:
    ells = [d.ell for d in factors]
    if len(set(ells)) != len(ells):
        return "repeated primes: adjoint quotients are not distinct"
    for d in factors:
        if d.exceptional_field:
            return f"{d} lies over an exceptional small field"
        if d.family == "A" and d.r < 2:
            return f"{d} has rank < 2 and no nonabelian simple quotient"
    return ""


def goursat_verify(factors, generators) -> GoursatReport:
    """Check whether generator tuples span the full product of derived groups.

    factors: GroupDescriptors (their derived subgroups are the factor
    groups); generators: tuples of GroupElements, one per factor.  Reports
    per-factor surjectivity of the projections and whether the generated
    subgroup is the whole product.  When the distinct-simple-quotient
    hypothesis holds, surjective projections with a proper closure are an
    implementation contradiction and raise.
    """
    factors = list(factors)
    if not factors:
        raise ValueError("need at least one factor")
    orders = [group_order(d, "derived") for d in factors]
    for d, o in zip(factors, orders):
        if o > MAX_FACTOR_ORDER:
            raise BudgetExceeded(f"factor {d} has derived order {o} over the cap")
    product_order = 1
    for o in orders:
        product_order *= o
    if product_order > MAX_CLOSURE:
        raise BudgetExceeded(f"product of order {product_order} exceeds the closure cap")
    if not generators:
        raise ValueError("need at least one generator tuple")

    groups_packed = [frozenset(enumerate_group_packed(d, "derived")) for d in factors]
    pgs = [_packed_group(d) for d in factors]
    tuples = []
    for gen in generators:
        if len(gen) != len(factors):
            raise ValueError("generator tuple length must match the factor count")
        packed = tuple(pack_matrix(g.matrix) for g in gen)
        for comp, grp in zip(packed, groups_packed):
            if comp not in grp:
                raise ValueError("generator component outside its derived group")
        tuples.append(packed)

    surjective = []
    for i, (grp, pg) in enumerate(zip(groups_packed, pgs)):
        comps = [t[i] for t in tuples]
        closure_i = _mulclose(comps, pg.mm, len(grp))
        surjective.append(len(closure_i) == len(grp))

    def multiply(a, b):
        return tuple(pg.mm(x, y) for pg, x, y in zip(pgs, a, b))

    closure = _mulclose(tuples, multiply, product_order)
    full = len(closure) == product_order
    note = _hypothesis_note(factors)
    in_hyp = note == ""
    if in_hyp and all(surjective) and not full:
        raise GoursatContradiction(
            f"projections surject but the closure has order {len(closure)} < {product_order}"
        )
    return GoursatReport(
        factor_orders=tuple(orders),
        projections_surjective=tuple(surjective),
        closure_order=len(closure),
        product_order=product_order,
        full_product=full,
        in_hypothesis=in_hyp,
        note=note or "distinct nonabelian simple quotients",
    )


def random_generator_tuples(factors, rng: random.Random, count: int = 2, max_tries: int = 200):
    """Draw `count` random generator tuples, retrying until every projection
    is surjective; returns GroupElement tuples."""
    from .groups import GroupElement, unpack_matrix

    factors = list(factors)
    groups_packed = [enumerate_group_packed(d, "derived") for d in factors]
    pgs = [_packed_group(d) for d in factors]
    for _ in range(max_tries):
        tuples = [
            tuple(rng.choice(grp) for grp in groups_packed) for _ in range(count)
        ]
        ok = True
        for i, (grp, pg) in enumerate(zip(groups_packed, pgs)):
            comps = [t[i] for t in tuples]
            if len(_mulclose(comps, pg.mm, len(grp))) != len(grp):
                ok = False
                break
        if ok:
            out = []
            for t in tuples:
                elems = []
                for d, comp, pg in zip(factors, t, pgs):
                    elems.append(GroupElement(d, unpack_matrix(d, comp), pg.similitude(comp)))
                out.append(tuple(elems))
            return out
    raise RuntimeError("could not find surjective generators within the retry cap")
