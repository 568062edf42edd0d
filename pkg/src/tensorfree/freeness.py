"""Mixed moments of free families and bounded star-freeness testing.

The engine computes joint moments from marginal data alone using the
defining rule of freeness: alternating products of centered elements
have vanishing expectation.  Writing each block of a word as its
centered part plus a scalar and expanding gives the moment as a signed
sum of strictly shorter moments, which terminates and is exact.

The same moments are reachable through noncrossing cumulants, where
mixed-block terms vanish; both routes are implemented so they can
check each other.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Iterable, Mapping, Sequence

from .errors import DepthLimitError, PreconditionError
from .ncpartitions import cumulant_from_moments, enumerate_nc
from .scalars import ONE, ZERO, ExactComplex
from .starwords import (
    Letter,
    LetterTuple,
    PowerWord,
    StarWord,
    class_blocks,
    iter_words,
    power_word_to_star_word,
)

MIXED_MOMENT_LENGTH_CAP = 16

MarginalOracle = Callable[[tuple[bool, ...]], ExactComplex]
ClassOracle = Callable[[LetterTuple], ExactComplex]
JointOracle = Callable[[LetterTuple], ExactComplex]


class FreeFamilySpec:
    """A family of mutually free grouping classes with marginal data.

    The default constructor takes one marginal oracle per variable (a
    callable on star patterns) and puts every variable in its own class.
    Classes with several variables carry a joint oracle on words over
    the class; distinct classes are the free coordinates.
    """

    def __init__(self, marginals: Mapping[int, MarginalOracle]) -> None:
        self.class_of: dict[int, int] = {v: v for v in marginals}
        self._oracles: dict[int, ClassOracle] = {
            v: _single_variable_oracle(m) for v, m in marginals.items()
        }
        self._memo: dict[LetterTuple, ExactComplex] = {}
        self._cumulant_memos: dict[int, dict] = {c: {} for c in self._oracles}

    @classmethod
    def from_classes(
        cls,
        classes: Mapping[int, Sequence[int]],
        oracles: Mapping[int, ClassOracle],
    ) -> "FreeFamilySpec":
        spec = cls.__new__(cls)
        spec.class_of = {}
        for cid, variables in classes.items():
            for v in variables:
                if v in spec.class_of:
                    raise ValueError(f"variable x{v} assigned to two classes")
                spec.class_of[v] = cid
        spec._oracles = dict(oracles)
        for cid in classes:
            if cid not in spec._oracles:
                raise ValueError(f"class {cid} has no oracle")
        spec._memo = {}
        spec._cumulant_memos = {c: {} for c in spec._oracles}
        return spec

    @property
    def variables(self) -> tuple[int, ...]:
        return tuple(sorted(self.class_of))

    def class_moment(self, cid: int, letters: LetterTuple) -> ExactComplex:
        if not letters:
            return ONE
        return self._oracles[cid](letters)

    def class_cumulant(self, cid: int, letters: LetterTuple) -> ExactComplex:
        return cumulant_from_moments(
            lambda ls: self.class_moment(cid, ls), letters, self._cumulant_memos[cid]
        )

    def mixed_moment_letters(
        self, letters: LetterTuple, max_len: int = MIXED_MOMENT_LENGTH_CAP
    ) -> ExactComplex:
        """Joint moment of a word across the free family."""
        letters = tuple(letters)
        if len(letters) > max_len:
            raise DepthLimitError("mixed moment word", len(letters), max_len)
        for l in letters:
            if l.index not in self.class_of:
                raise ValueError(f"unknown variable x{l.index}")
        return self._eval(letters)

    def _eval(self, letters: LetterTuple) -> ExactComplex:
        if not letters:
            return ONE
        cached = self._memo.get(letters)
        if cached is not None:
            return cached
        blocks = class_blocks(StarWord(letters), self.class_of)
        if len(blocks) == 1:
            value = self.class_moment(blocks[0][0], letters)
            self._memo[letters] = value
            return value
        # phi(w) = sum over nonempty dropped subsets S of
        #          (-1)^{|S|+1} prod_k beta_k phi(w with S removed),
        # because the fully centered alternating product vanishes
        betas = [self.class_moment(cid, ls) for cid, ls in blocks]
        nonzero = [s for s, beta in enumerate(betas) if not beta.is_zero()]
        total = ZERO
        for size in range(1, len(nonzero) + 1):
            for dropped in combinations(nonzero, size):
                coeff = ONE if size % 2 == 1 else -ONE
                for s in dropped:
                    coeff = coeff * betas[s]
                kept: list[Letter] = []
                for s, (_, ls) in enumerate(blocks):
                    if s not in dropped:
                        kept.extend(ls)
                total = total + coeff * self._eval(tuple(kept))
        self._memo[letters] = total
        return total


def _single_variable_oracle(marginal: MarginalOracle) -> ClassOracle:
    def oracle(letters: LetterTuple) -> ExactComplex:
        return marginal(tuple(l.star for l in letters))

    return oracle


def free_mixed_moment(
    spec: FreeFamilySpec, word: StarWord, max_len: int = MIXED_MOMENT_LENGTH_CAP
) -> ExactComplex:
    return spec.mixed_moment_letters(word.letters, max_len)


def mixed_moment_by_cumulants(spec: FreeFamilySpec, word: StarWord) -> ExactComplex:
    """The same mixed moment as a sum over noncrossing partitions.

    Cumulants mixing distinct classes vanish for free families, so each
    partition contributes the product of per-class block cumulants.
    """
    letters = word.letters
    n = len(letters)
    total = ZERO
    for part in enumerate_nc(n):
        term = ONE
        for block in part.blocks:
            cids = {spec.class_of[letters[p - 1].index] for p in block}
            if len(cids) > 1:
                term = ZERO
                break
            cid = cids.pop()
            term = term * spec.class_cumulant(cid, tuple(letters[p - 1] for p in block))
            if term.is_zero():
                break
        total = total + term
    return total


# -- closed forms for short alternating words ---------------------------


def alternating_pair_moment(
    mean1: ExactComplex,
    square1: ExactComplex,
    mean2: ExactComplex,
    square2: ExactComplex,
) -> ExactComplex:
    """Moment of b1 b2 b1* b2* for a star-free pair, from four marginals.

    square_i is the moment of b_i b_i*.
    """
    m1, m2 = mean1.abs2(), mean2.abs2()
    return m1 * square2 + m2 * square1 - ExactComplex(m1 * m2)


def conjugated_pair_moment(
    c1_mean: ExactComplex,
    c1_square: ExactComplex,
    c2_mean: ExactComplex,
    c2_square: ExactComplex,
    b_marginal: MarginalOracle | None = None,
) -> ExactComplex:
    """Moment of b c1 b* c2 b c1* b* c2* when b is a centered unitary
    free from the pair (c1, c2).

    The value coincides with the plain alternating form in the c data.
    When the marginal of b is supplied, the centering and unitarity
    preconditions are verified first.
    """
    if b_marginal is not None:
        if b_marginal((False,)) != ZERO:
            raise PreconditionError("b must be centered: psi(b) != 0")
        unitary = (
            b_marginal((False, True)) == ONE
            and b_marginal((True, False)) == ONE
            and b_marginal((False, True, False, True)) == ONE
        )
        if not unitary:
            raise PreconditionError("b must be unitary")
    return alternating_pair_moment(c1_mean, c1_square, c2_mean, c2_square)


# -- bounded star-freeness testing ---------------------------------------


@dataclass(frozen=True)
class Verdict:
    """Outcome of a bounded freeness test.

    A failure carries the first violating word in (length, text) order;
    lhs is the centered alternating product's value and rhs the zero it
    should have been.
    """

    free: bool
    witness: StarWord | None
    lhs: ExactComplex | None
    rhs: ExactComplex | None
    bound: int
    words_checked: int = 0


def _normalize_grouping(grouping) -> dict[int, int]:
    """Accept {class: vars} mappings or iterables of variable groups."""
    class_of: dict[int, int] = {}
    if isinstance(grouping, Mapping):
        items = grouping.items()
    else:
        items = enumerate(grouping, start=1)
    for cid, variables in items:
        if isinstance(variables, int):
            variables = (variables,)
        for v in variables:
            if v in class_of:
                raise ValueError(f"variable x{v} in two grouping classes")
            class_of[v] = cid
    return class_of


def centered_product_value(
    oracle: JointOracle, letters: LetterTuple, class_of: dict[int, int]
) -> ExactComplex | None:
    """Value of the centered alternating product along the class blocks.

    Returns None for single-class words, which are trivially centered
    to zero and witness nothing.
    """
    blocks = class_blocks(StarWord(letters), class_of)
    if len(blocks) < 2:
        return None
    betas = [oracle(ls) for _, ls in blocks]
    nonzero = [s for s, beta in enumerate(betas) if not beta.is_zero()]
    total = oracle(letters)
    for size in range(1, len(nonzero) + 1):
        for dropped in combinations(nonzero, size):
            coeff = ONE if size % 2 == 0 else -ONE
            for s in dropped:
                coeff = coeff * betas[s]
            kept: list[Letter] = []
            for s, (_, ls) in enumerate(blocks):
                if s not in dropped:
                    kept.extend(ls)
            total = total + coeff * oracle(tuple(kept))
    return total


def _memoized(oracle: JointOracle) -> JointOracle:
    memo: dict[LetterTuple, ExactComplex] = {}

    def wrapped(letters: LetterTuple) -> ExactComplex:
        letters = tuple(letters)
        if not letters:
            return ONE
        value = memo.get(letters)
        if value is None:
            value = oracle(letters)
            memo[letters] = value
        return value

    return wrapped


def test_freeness(joint: JointOracle, grouping, max_len: int = 8) -> Verdict:
    """Bounded star-freeness of grouping classes under a joint functional.

    Enumerates every word up to max_len letters whose class blocks
    alternate at least once, computes the centered alternating product
    by inclusion-exclusion through the joint oracle, and reports the
    first nonzero value in (length, canonical text) order.
    """
    class_of = _normalize_grouping(grouping)
    oracle = _memoized(joint)
    checked = 0
    for length in range(2, max_len + 1):
        for word in iter_words(class_of.keys(), length):
            value = centered_product_value(oracle, word.letters, class_of)
            if value is None:
                continue
            checked += 1
            if not value.is_zero():
                return Verdict(False, word, value, ZERO, max_len, checked)
    return Verdict(True, None, None, None, max_len, checked)


# -- fast path for families of Haar-type unitaries -----------------------


def alternating_power_words(
    variables: Sequence[int], total: int
) -> list[PowerWord]:
    """Reduced alternating power words with |exponent| sum equal to total."""
    out: list[PowerWord] = []

    def gen(prefix: PowerWord, remaining: int) -> None:
        if remaining == 0:
            if len(prefix) >= 2:
                out.append(prefix)
            return
        for v in variables:
            if prefix and prefix[-1][0] == v:
                continue
            for mag in range(1, remaining + 1):
                for e in (mag, -mag):
                    gen(prefix + ((v, e),), remaining - mag)

    gen((), total)
    return out


def test_freeness_haar_powers(
    joint: JointOracle, variables: Sequence[int], max_len: int = 8
) -> Verdict:
    """Star-freeness test specialized to families whose members all have
    vanishing nonzero-power moments (Haar-type unitaries).

    For such marginals every centered alternating product either dies
    with a unit block or equals a plain reduced alternating power word,
    so it suffices to scan those words for a nonzero moment.
    """
    oracle = _memoized(joint)
    for v in variables:
        for e in range(1, max_len):
            for sign in (e, -e):
                letters = power_word_to_star_word(((v, sign),)).letters
                if not oracle(letters).is_zero():
                    raise PreconditionError(
                        f"marginal of x{v} is not Haar-type: power {sign} has "
                        "nonzero moment"
                    )
    checked = 0
    for total in range(2, max_len + 1):
        words = [
            (power_word_to_star_word(pw), pw)
            for pw in alternating_power_words(variables, total)
        ]
        words.sort(key=lambda pair: pair[0].text())
        for star_word, _ in words:
            checked += 1
            value = oracle(star_word.letters)
            if not value.is_zero():
                return Verdict(False, star_word, value, ZERO, max_len, checked)
    return Verdict(True, None, None, None, max_len, checked)


def block_pair_count(word: StarWord) -> int:
    """Half the number of maximal single-variable runs, rounded up.

    An alternating word x^n1 y^n2 ... x^n(2t-1) y^n(2t) (or the odd-length
    variant ending at n(2t-1)) has block pair count t.
    """
    blocks = class_blocks(word, {i: i for i in word.indices()})
    return (len(blocks) + 1) // 2
