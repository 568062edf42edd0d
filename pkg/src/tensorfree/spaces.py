"""Moment functionals on concretely presented noncommutative probability spaces.

Three interchangeable models:

* group algebras with the canonical trace (1 at the identity, 0 elsewhere),
* group algebras with a finite table of exceptional values on normal forms,
* spectral models whose variables carry explicit moment sequences, with
  mixed words synthesized by freeness when the family is flagged free.

All moments are exact.  The axiom checker builds the Gram matrix of all
reduced words up to a length bound and decides positivity exactly by a
Hermitian LDL elimination; an optional floating mode cross-checks with
eigenvalues.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from . import freeness
from .errors import (
    DimensionLimitError,
    FaithfulnessWarning,
    NotDirectlyEvaluable,
    ScenarioError,
)
from .groups import (
    GroupElement,
    GroupPresentation,
    identity,
    inverse,
    multiply,
    reduce,
)
from .ncpartitions import MomentSequence
from .scalars import ONE, ZERO, ExactComplex, as_scalar
from .starwords import Letter, LetterTuple, StarWord, iter_letters

GRAM_BASIS_CAP = 320


def _adjoint_letters(letters: LetterTuple) -> LetterTuple:
    return tuple(Letter(l.index, not l.star) for l in reversed(letters))


class MomentFunctional:
    """Common surface of the three models: exact moments of star-words."""

    variables: tuple[int, ...]

    def __init__(self) -> None:
        self.faithfulness_verified = False

    def moment(self, word: StarWord) -> ExactComplex:
        return self.moment_letters(word.letters)

    def moment_letters(self, letters: LetterTuple) -> ExactComplex:
        raise NotImplementedError

    def reduced_key(self, letters: LetterTuple):
        """Normal form key used to deduplicate basis words."""
        raise NotImplementedError

    def _check_vars(self, letters: LetterTuple) -> None:
        for l in letters:
            if l.index not in self.variables:
                raise ScenarioError(f"unknown variable x{l.index}")


class GroupBackedModel(MomentFunctional):
    """Base for models whose variables are elements of a presented group."""

    def __init__(
        self, presentation: GroupPresentation, generators: dict[int, GroupElement]
    ) -> None:
        super().__init__()
        self.presentation = presentation
        self.generators = dict(generators)
        self.variables = tuple(sorted(self.generators))
        self._inverses = {
            v: inverse(presentation, g) for v, g in self.generators.items()
        }

    def element_of(self, letters: LetterTuple) -> GroupElement:
        self._check_vars(letters)
        acc = identity(self.presentation)
        for l in letters:
            g = self._inverses[l.index] if l.star else self.generators[l.index]
            acc = multiply(self.presentation, acc, g)
        return acc

    def reduced_key(self, letters: LetterTuple) -> GroupElement:
        return self.element_of(letters)


class GroupAlgebraModel(GroupBackedModel):
    """Group algebra with the canonical trace."""

    def moment_letters(self, letters: LetterTuple) -> ExactComplex:
        return ONE if self.element_of(letters).is_identity() else ZERO


class TableFunctional(GroupBackedModel):
    """Group algebra with finitely many exceptional values on normal forms.

    The table maps reduced group elements to scalars; everything else is 0
    except the identity, which is 1.  Hermitian consistency (the value at
    an inverse is the conjugate) is enforced, filling missing inverses.
    """

    def __init__(
        self,
        presentation: GroupPresentation,
        generators: dict[int, GroupElement],
        table: dict[GroupElement, ExactComplex],
    ) -> None:
        super().__init__(presentation, generators)
        self.table: dict[GroupElement, ExactComplex] = {}
        for element, raw in table.items():
            value = as_scalar(raw)
            if element.is_identity():
                if value != ONE:
                    raise ScenarioError("the identity must have value 1")
                continue
            inv = inverse(presentation, element)
            for key, val in ((element, value), (inv, value.conjugate())):
                if key in self.table and self.table[key] != val:
                    raise ScenarioError(
                        f"Hermitian symmetry violated at table entry {key.text()!r}"
                    )
                self.table[key] = val

    def moment_letters(self, letters: LetterTuple) -> ExactComplex:
        element = self.element_of(letters)
        if element.is_identity():
            return ONE
        return self.table.get(element, ZERO)


class SpectralModel(MomentFunctional):
    """Variables given by explicit single-variable moment sequences.

    Words in one variable are read off the sequence; genuinely mixed words
    are synthesized by the freeness engine when assume_free is set and are
    otherwise not directly evaluable.
    """

    def __init__(
        self, variables: dict[int, MomentSequence], assume_free: bool = False
    ) -> None:
        super().__init__()
        self.sequences = dict(variables)
        self.variables = tuple(sorted(self.sequences))
        self.assume_free = assume_free
        self._family = freeness.FreeFamilySpec(
            {v: _sequence_marginal(seq) for v, seq in self.sequences.items()}
        )

    def is_unitary_variable(self, var: int) -> bool:
        return self.sequences[var].unitary

    def marginal_moment(self, var: int, stars: Sequence[bool]) -> ExactComplex:
        seq = self.sequences[var]
        if seq.unitary:
            return seq.moment(tuple(-1 if s else 1 for s in stars))
        return seq.moment(tuple(stars))

    def moment_letters(self, letters: LetterTuple) -> ExactComplex:
        self._check_vars(letters)
        if not letters:
            return ONE
        indices = {l.index for l in letters}
        if len(indices) == 1:
            var = indices.pop()
            return self.marginal_moment(var, tuple(l.star for l in letters))
        if not self.assume_free:
            raise NotDirectlyEvaluable(
                "mixed word in a spectral model without a freeness flag"
            )
        return self._family.mixed_moment_letters(letters)

    def reduced_key(self, letters: LetterTuple):
        # unitary runs cancel, and a period p identifies u^p with the unit;
        # star-table variables admit no relations
        stack: list[list] = []
        for l in letters:
            seq = self.sequences[l.index]
            if seq.unitary:
                exp = -1 if l.star else 1
                if stack and stack[-1][0] == "u" and stack[-1][1] == l.index:
                    stack[-1][2] += exp
                else:
                    stack.append(["u", l.index, exp])
                if seq.period is not None:
                    stack[-1][2] %= seq.period
                if stack[-1][2] == 0:
                    stack.pop()
            else:
                stack.append(["s", l.index, l.star])
        return tuple(tuple(item) for item in stack)


def _sequence_marginal(seq: MomentSequence):
    if seq.unitary:
        return lambda stars: seq.moment(tuple(-1 if s else 1 for s in stars))
    return lambda stars: seq.moment(tuple(stars))


# -- derived quantities -------------------------------------------------


def _as_letters(functional: MomentFunctional, word) -> LetterTuple:
    if isinstance(word, StarWord):
        return word.letters
    if isinstance(word, int):
        return (Letter(word, False),)
    return tuple(word)


def variance(functional: MomentFunctional, word) -> Fraction:
    """Exact variance psi(b b*) - |psi(b)|^2 of a word or variable."""
    letters = _as_letters(functional, word)
    mean = functional.moment_letters(letters)
    second = functional.moment_letters(letters + _adjoint_letters(letters))
    if second.im != 0:
        raise ScenarioError("psi(b b*) is not real; Hermitian symmetry is broken")
    return second.re - mean.abs2()


def is_deterministic(
    functional: MomentFunctional, word, faithfulness_checked: bool | None = None
) -> bool:
    """Whether the word is a scalar multiple of the unit, via zero variance.

    Zero variance only pins the element down when the functional is
    faithful, so a warning is attached unless a positive-definiteness
    check is known to have passed.
    """
    checked = (
        functional.faithfulness_verified
        if faithfulness_checked is None
        else faithfulness_checked
    )
    if not checked:
        warnings.warn(
            "determinism asserted without a faithfulness check at this level",
            FaithfulnessWarning,
            stacklevel=2,
        )
    return variance(functional, word) == 0


# -- axioms at a word-length level ---------------------------------------


@dataclass(frozen=True)
class AxiomReport:
    unital: bool
    hermitian: bool
    tracial: bool
    positive_semidefinite: bool
    positive_definite: bool
    basis_size: int
    gram_len: int
    mode: str
    notes: tuple[str, ...] = ()

    @property
    def all_passed(self) -> bool:
        return (
            self.unital
            and self.hermitian
            and self.tracial
            and self.positive_semidefinite
            and self.positive_definite
        )


def gram_basis(
    functional: MomentFunctional, gram_len: int, cap: int = GRAM_BASIS_CAP
) -> list[LetterTuple]:
    """First word per normal form, over all words of length <= gram_len."""
    basis: list[LetterTuple] = [()]
    seen = {functional.reduced_key(())}
    alphabet = iter_letters(functional.variables)

    # walk the quotient: extending a redundant word cannot reach a normal
    # form its shorter representative does not reach with budget to spare
    frontier: list[LetterTuple] = [()]
    for _ in range(gram_len):
        next_frontier: list[LetterTuple] = []
        for prefix in frontier:
            for letter in alphabet:
                word = prefix + (letter,)
                key = functional.reduced_key(word)
                if key not in seen:
                    seen.add(key)
                    basis.append(word)
                    next_frontier.append(word)
                    if len(basis) > cap:
                        raise DimensionLimitError("Gram basis", len(basis), cap)
        frontier = next_frontier
    return basis


def gram_matrix(
    functional: MomentFunctional, basis: Sequence[LetterTuple]
) -> list[list[ExactComplex]]:
    adjoints = [_adjoint_letters(w) for w in basis]
    return [
        [functional.moment_letters(w + adj) for adj in adjoints] for w in basis
    ]


def hermitian_ldl_signature(matrix: list[list[ExactComplex]]) -> tuple[bool, bool]:
    """(psd, pd) for a Hermitian matrix, by exact elimination.

    A zero pivot with a nonzero remaining row defeats semidefiniteness;
    a zero pivot alone only defeats definiteness.
    """
    d = len(matrix)
    a = [row[:] for row in matrix]
    pd = True
    for r in range(d):
        pivot = a[r][r]
        if pivot.im != 0:
            raise ScenarioError("Gram matrix is not Hermitian")
        if pivot.re < 0:
            return (False, False)
        if pivot.re == 0:
            pd = False
            if any(not a[r][c].is_zero() for c in range(r + 1, d)):
                return (False, False)
            continue
        for i in range(r + 1, d):
            if a[i][r].is_zero():
                continue
            f = a[i][r] / pivot
            row_r = a[r]
            row_i = a[i]
            for j in range(r + 1, d):
                row_i[j] = row_i[j] - f * row_r[j]
    return (True, pd)


def float_eigenvalue_signature(
    matrix: list[list[ExactComplex]], tolerance: float = 1e-9
) -> tuple[bool, bool]:
    import numpy as np

    arr = np.array([[complex(z) for z in row] for row in matrix], dtype=complex)
    eigenvalues = np.linalg.eigvalsh(arr)
    smallest = float(eigenvalues.min()) if len(eigenvalues) else 1.0
    return (smallest >= -tolerance, smallest > tolerance)


def check_axioms(
    functional: MomentFunctional,
    gram_len: int = 3,
    mode: str = "exact",
    tolerance: float = 1e-9,
    basis_cap: int = GRAM_BASIS_CAP,
) -> AxiomReport:
    """Verify unitality, Hermitian symmetry, traciality, and positivity
    on the span of all reduced words of length <= gram_len."""
    if mode not in ("exact", "float"):
        raise ValueError("mode must be 'exact' or 'float'")
    basis = gram_basis(functional, gram_len, basis_cap)
    notes: list[str] = []

    unital = functional.moment_letters(()) == ONE

    hermitian = True
    for w in basis:
        lhs = functional.moment_letters(_adjoint_letters(w))
        rhs = functional.moment_letters(w).conjugate()
        if lhs != rhs:
            hermitian = False
            notes.append(f"hermitian symmetry fails at {_text_of(w)}")
            break

    tracial = True
    for b in basis:
        for c in basis:
            if functional.moment_letters(b + c) != functional.moment_letters(c + b):
                tracial = False
                notes.append(
                    f"trace property fails at b={_text_of(b)} c={_text_of(c)}"
                )
                break
        if not tracial:
            break

    gram = gram_matrix(functional, basis)
    if mode == "exact":
        psd, pd = hermitian_ldl_signature(gram)
    else:
        psd, pd = float_eigenvalue_signature(gram, tolerance)

    if pd:
        functional.faithfulness_verified = True
    return AxiomReport(
        unital, hermitian, tracial, psd, pd, len(basis), gram_len, mode, tuple(notes)
    )


def _text_of(letters: LetterTuple) -> str:
    return " ".join(l.text() for l in letters) if letters else "1"
