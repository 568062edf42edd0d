"""Star-words: finite words in noncommuting indeterminates x_i and their adjoints.

The canonical text form is space-separated tokens like ``x1 x2* x1``.
A letter is a pair (index, star); a word is a nonempty tuple of letters.
Power words are the unitary reductions: adjacent letters with equal index
merge into signed exponents and zero exponents cancel.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, NamedTuple


class WordSyntaxError(ValueError):
    """Raised on malformed word text; carries the byte offset of the fault."""

    def __init__(self, message: str, offset: int) -> None:
        super().__init__(f"{message} (at byte {offset})")
        self.offset = offset


class EmptyWordError(WordSyntaxError):
    def __init__(self) -> None:
        super().__init__("empty word", 0)


class Letter(NamedTuple):
    index: int
    star: bool

    def adjoint(self) -> "Letter":
        return Letter(self.index, not self.star)

    def text(self) -> str:
        return f"x{self.index}*" if self.star else f"x{self.index}"


LetterTuple = tuple[Letter, ...]
PowerFactor = tuple[int, int]  # (index, signed exponent), exponent != 0
PowerWord = tuple[PowerFactor, ...]


@dataclass(frozen=True)
class StarWord:
    """A nonempty word over the letters x_i, x_i*."""

    letters: LetterTuple

    def __post_init__(self) -> None:
        if not self.letters:
            raise EmptyWordError()

    def __len__(self) -> int:
        return len(self.letters)

    def __mul__(self, other: "StarWord") -> "StarWord":
        return StarWord(self.letters + other.letters)

    def adjoint(self) -> "StarWord":
        return StarWord(tuple(l.adjoint() for l in reversed(self.letters)))

    def text(self) -> str:
        return " ".join(l.text() for l in self.letters)

    def indices(self) -> set[int]:
        return {l.index for l in self.letters}

    def substitute(self, mapping: dict[int, int]) -> "StarWord":
        """Relabel variable indices; unmapped indices are kept."""
        return StarWord(
            tuple(Letter(mapping.get(l.index, l.index), l.star) for l in self.letters)
        )

    def __str__(self) -> str:
        return self.text()


def word(text: str) -> StarWord:
    return parse_word(text)


def parse_word(text: str) -> StarWord:
    """Parse canonical word text; rejects empty and malformed input."""
    stripped = text.strip()
    if not stripped:
        raise EmptyWordError()
    letters: list[Letter] = []
    pos = 0
    raw = text
    for token in stripped.split():
        offset = raw.index(token, pos)
        pos = offset + len(token)
        body = token
        star = body.endswith("*")
        if star:
            body = body[:-1]
        if not body.startswith("x"):
            raise WordSyntaxError(f"expected 'x<INT>', got {token!r}", offset)
        digits = body[1:]
        if not digits.isdigit():
            raise WordSyntaxError(f"bad variable index in {token!r}", offset)
        letters.append(Letter(int(digits), star))
    return StarWord(tuple(letters))


def single_variable_word(stars: Iterable[bool], index: int = 1) -> StarWord:
    """Build the word x_index^(pattern) from a star pattern."""
    pattern = tuple(bool(s) for s in stars)
    return StarWord(tuple(Letter(index, s) for s in pattern))


def reduce_unitary(w: StarWord | LetterTuple) -> PowerWord:
    """Reduce a word of unitaries: x* becomes x^-1 and adjacent powers merge.

    The result may be empty (the unit).
    """
    letters = w.letters if isinstance(w, StarWord) else w
    stack: list[list[int]] = []
    for letter in letters:
        exp = -1 if letter.star else 1
        if stack and stack[-1][0] == letter.index:
            stack[-1][1] += exp
            if stack[-1][1] == 0:
                stack.pop()
        else:
            stack.append([letter.index, exp])
    return tuple((i, e) for i, e in stack)


def reduce_power_word(factors: Iterable[PowerFactor]) -> PowerWord:
    """Merge adjacent equal-index powers and drop zero exponents."""
    stack: list[list[int]] = []
    for index, exp in factors:
        if exp == 0:
            continue
        if stack and stack[-1][0] == index:
            stack[-1][1] += exp
            if stack[-1][1] == 0:
                stack.pop()
        else:
            stack.append([index, exp])
    return tuple((i, e) for i, e in stack)


def power_word_text(pw: PowerWord) -> str:
    if not pw:
        return "1"
    return " ".join(f"x{i}^{e}" for i, e in pw)


def power_word_to_star_word(pw: PowerWord) -> StarWord:
    letters: list[Letter] = []
    for index, exp in pw:
        letters.extend([Letter(index, exp < 0)] * abs(exp))
    return StarWord(tuple(letters))


def alternating_blocks(w: StarWord) -> list[tuple[int, StarWord]]:
    """Split into maximal runs of a single variable index, in order."""
    blocks: list[tuple[int, StarWord]] = []
    run: list[Letter] = []
    for letter in w.letters:
        if run and run[-1].index != letter.index:
            blocks.append((run[0].index, StarWord(tuple(run))))
            run = []
        run.append(letter)
    blocks.append((run[0].index, StarWord(tuple(run))))
    return blocks


def class_blocks(w: StarWord, class_of: dict[int, int]) -> list[tuple[int, LetterTuple]]:
    """Split into maximal runs belonging to one grouping class."""
    blocks: list[tuple[int, LetterTuple]] = []
    run: list[Letter] = []
    for letter in w.letters:
        cls = class_of[letter.index]
        if run and class_of[run[-1].index] != cls:
            blocks.append((class_of[run[0].index], tuple(run)))
            run = []
        run.append(letter)
    blocks.append((class_of[run[0].index], tuple(run)))
    return blocks


def iter_letters(indices: Iterable[int]) -> list[Letter]:
    """All letters over the given variable indices, in canonical order."""
    out: list[Letter] = []
    for i in sorted(indices):
        out.append(Letter(i, False))
        out.append(Letter(i, True))
    return out


def iter_words(indices: Iterable[int], length: int) -> Iterator[StarWord]:
    """All words of exactly the given length, sorted by canonical text."""
    alphabet = iter_letters(indices)
    if length <= 0:
        return iter(())

    def gen(prefix: LetterTuple, remaining: int) -> Iterator[LetterTuple]:
        if remaining == 0:
            yield prefix
            return
        for letter in alphabet:
            yield from gen(prefix + (letter,), remaining - 1)

    words = [StarWord(ls) for ls in gen((), length)]
    words.sort(key=lambda w: w.text())
    return iter(words)


def iter_star_patterns(length: int) -> Iterator[tuple[bool, ...]]:
    """All star patterns of one variable with the given length, text order."""
    for w in iter_words([1], length):
        yield tuple(l.star for l in w.letters)
