"""Analysis of the biased-power tensor family.

For K >= 2 factors, build the pair of joint unitaries

    D_1 = a_1 (x) ... (x) a_K     with  phi_k(a_k^n) = alpha iff n = k,
    D_2 = u_1 (x) ... (x) u_K     with every u_k Haar unitary,

where (a_k, u_k) is *-free inside factor k.  Every nonzero power of D_1
and D_2 then has vanishing moment even though each a_k keeps a biased
power moment, so none of the necessary-condition machinery applies to
the pair.  The operations here scan alternating power words in (D_1,
D_2) for freeness violations and measure how the cumulant support of
such a word shrinks under the parity and singleton filters.  The filter
analysis yields a lower bound on the block pair count, and hence on the
length, of any word that could witness non-freeness.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import PreconditionError, ScenarioError
from .freeness import JointOracle, Verdict, alternating_power_words
from .ncpartitions import MomentSequence, catalan, iter_pure_parity_blocks
from .scalars import ZERO, ExactComplex, as_scalar
from .spaces import SpectralModel
from .starwords import power_word_to_star_word
from .tensor import TensorScenario, joint_oracle


def biased_power_scenario(K: int, alpha) -> TensorScenario:
    """Tensor scenario pairing one biased power unitary per factor with
    a Haar unitary.

    Joint variable 1 collects the biased components a_k, joint variable
    2 the Haar ones.  With a single factor, D_1 = a_1 would keep the
    nonvanishing first moment alpha, so K >= 2 is required for the
    vanishing-power profile the analysis is about.
    """
    if K < 2:
        raise ScenarioError(
            "the biased power family needs at least two factors; with one "
            "factor the joint variable keeps a nonvanishing power moment"
        )
    value = as_scalar(alpha)
    if value.is_zero():
        raise ScenarioError("alpha must be nonzero")
    factors = []
    for k in range(1, K + 1):
        biased = MomentSequence({k: value}, unitary=True)
        haar = MomentSequence({}, unitary=True)
        factors.append(SpectralModel({1: biased, 2: haar}, assume_free=True))
    return TensorScenario(
        factors=tuple(factors),
        assignments={1: (1,) * K, 2: (2,) * K},
        free_flags=(True,) * K,
        name=f"biased_power_k{K}",
    )


# -- power word scan ------------------------------------------------------


@dataclass(frozen=True)
class PowerScanLine:
    """Scan totals for one block pair count."""

    block_pairs: int
    words: int
    violations: int


def scan_alternating_powers(
    joint: JointOracle, variables: Sequence[int], max_len: int = 8
) -> tuple[Verdict, tuple[PowerScanLine, ...]]:
    """Exhaustive freeness scan over reduced alternating power words.

    Requires every single power up to the bound to have vanishing
    moment, which makes each word's plain moment equal to its centered
    alternating product.  Unlike the early-stopping freeness tests this
    evaluates every word of total exponent size 2..max_len and tallies
    words and nonzero values per block pair count; the verdict carries
    the first violation in (length, text) order if any exists.
    """
    for v in variables:
        for e in range(1, max_len):
            for sign in (e, -e):
                letters = power_word_to_star_word(((v, sign),)).letters
                if not joint(letters).is_zero():
                    raise PreconditionError(
                        f"marginal of x{v} is not Haar-type: power {sign} "
                        "has nonzero moment"
                    )
    tallies: dict[int, list[int]] = {}
    first_witness = None
    first_value = None
    checked = 0
    for total in range(2, max_len + 1):
        words = [
            (power_word_to_star_word(pw), pw)
            for pw in alternating_power_words(variables, total)
        ]
        words.sort(key=lambda pair: pair[0].text())
        for star_word, pw in words:
            checked += 1
            pairs = (len(pw) + 1) // 2
            line = tallies.setdefault(pairs, [0, 0])
            line[0] += 1
            value = joint(star_word.letters)
            if not value.is_zero():
                line[1] += 1
                if first_witness is None:
                    first_witness = star_word
                    first_value = value
    scan = tuple(
        PowerScanLine(pairs, words, bad)
        for pairs, (words, bad) in sorted(tallies.items())
    )
    if first_witness is not None:
        verdict = Verdict(False, first_witness, first_value, ZERO, max_len, checked)
    else:
        verdict = Verdict(True, None, None, None, max_len, checked)
    return verdict, scan


# -- cumulant support filters ---------------------------------------------


@dataclass(frozen=True)
class FilterCounts:
    """Partition counts surviving each cumulant support filter at one t.

    An alternating word of block pair count t expands over the
    noncrossing partitions of its 2t blocks.  Freeness of the factor
    pairs kills mixed-parity blocks, Haar components kill even
    singletons, and the biased marginals force every singleton of a
    surviving partition to carry one designated exponent per factor.
    disjoint_singleton_capacity is the largest number of factors those
    singleton constraints can serve simultaneously: partitions with
    pairwise disjoint singleton sets, one per factor.  The supports are
    the distinct singleton position sets of the surviving partitions;
    a factor's partition set is nonempty exactly when some support is
    labeled entirely with that factor's exponent.
    """

    block_pairs: int
    noncrossing: int
    pure_parity: int
    no_even_singletons: int
    disjoint_singleton_capacity: int
    singleton_supports: tuple[tuple[int, ...], ...]


def _max_disjoint(sets: Iterable[frozenset[int]]) -> int:
    """Size of the largest pairwise disjoint subfamily."""
    family = sorted(set(sets), key=lambda s: (len(s), sorted(s)))
    best = 0

    def extend(i: int, used: frozenset[int], count: int) -> None:
        nonlocal best
        if count > best:
            best = count
        if count + (len(family) - i) <= best:
            return
        for j in range(i, len(family)):
            if used & family[j]:
                continue
            extend(j + 1, used | family[j], count + 1)

    extend(0, frozenset(), 0)
    return best


def filter_counts(t: int) -> FilterCounts:
    """Count the partitions of {1..2t} surviving each filter stage."""
    two_t = 2 * t
    pure = 0
    no_even = 0
    sets: set[frozenset[int]] = set()
    for blocks in iter_pure_parity_blocks(two_t):
        pure += 1
        singles = frozenset(b[0] for b in blocks if len(b) == 1)
        # pure-parity noncrossing partitions always own a singleton, so
        # each surviving partition really does constrain an exponent
        assert singles
        if all(p % 2 == 1 for p in singles):
            no_even += 1
            sets.add(singles)
    supports = tuple(sorted(tuple(sorted(s)) for s in sets))
    return FilterCounts(
        t, catalan(two_t), pure, no_even, _max_disjoint(sets), supports
    )


def singleton_capacity(two_t: int) -> int:
    """Largest number of pairwise disjoint singleton sets among the
    partitions of {1..two_t} with pure-parity blocks and odd singletons."""
    sets = set()
    for blocks in iter_pure_parity_blocks(two_t, forbid_even_singletons=True):
        sets.add(frozenset(b[0] for b in blocks if len(b) == 1))
    return _max_disjoint(sets)


def minimal_block_pairs(K: int, cap: int = 7) -> int | None:
    """Smallest t whose filtered partitions can serve K factors at once.

    A violating word must keep, for every factor k, some partition all
    of whose singletons carry exponent +-k; distinct factors therefore
    need partitions with pairwise disjoint singleton sets.  The returned
    t is the smallest with that capacity, a necessary size bound only:
    nothing here says a violation of that size exists.  None means the
    capacity stays below K through the cap.
    """
    if K < 1:
        raise ValueError("K must be positive")
    for t in range(1, cap + 1):
        if singleton_capacity(2 * t) >= K:
            return t
    return None


# -- full analysis ---------------------------------------------------------


@dataclass(frozen=True)
class BiasedPowerReport:
    factors: int
    alpha: ExactComplex
    bound: int
    verdict: Verdict
    scan: tuple[PowerScanLine, ...]
    filters: tuple[FilterCounts, ...]
    minimal_block_pairs: int | None
    block_pair_cap: int


def analyze_biased_power(
    K: int, alpha, max_len: int = 8, pair_cap: int = 7
) -> BiasedPowerReport:
    """Scan the biased-power pair for freeness violations and locate the
    smallest block pair count the filters leave open.

    The filter table grows until the disjoint singleton capacity first
    reaches K (the minimal t) or the pair cap is hit.
    """
    scenario = biased_power_scenario(K, alpha)
    verdict, scan = scan_alternating_powers(joint_oracle(scenario), (1, 2), max_len)
    filters: list[FilterCounts] = []
    minimal = None
    for t in range(1, pair_cap + 1):
        counts = filter_counts(t)
        filters.append(counts)
        if counts.disjoint_singleton_capacity >= K:
            minimal = t
            break
    return BiasedPowerReport(
        factors=K,
        alpha=as_scalar(alpha),
        bound=max_len,
        verdict=verdict,
        scan=scan,
        filters=tuple(filters),
        minimal_block_pairs=minimal,
        block_pair_cap=pair_cap,
    )
