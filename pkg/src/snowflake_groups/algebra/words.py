"""
Free-group word algebra.

A word is an immutable tuple of ``(generator id, sign)`` letters. Reduction
and substitution always return new words; nothing here mutates its input.
"""

import logging
import re
from dataclasses import dataclass, field
from itertools import groupby
from typing import Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

from ..exceptions import MapDomainError, ParameterError, WordParseError

logger = logging.getLogger(__name__)

Letter = Tuple[int, int]

_TOKEN = re.compile(r"\s*([A-Za-z][A-Za-z0-9_]*)(?:\s*\^\s*([+-]?\d+))?\s*\*?")
_IDENTITY_TOKENS = {"", "1", "e"}


@dataclass(frozen=True)
class Generator:
    id: int
    name: str


@dataclass(frozen=True)
class Alphabet:
    """Ordered generator list; generator ids are their positions."""

    generators: Tuple[Generator, ...]

    def __post_init__(self) -> None:
        names = [g.name for g in self.generators]
        if any(not name for name in names):
            raise ParameterError("generator names must be nonempty")
        if len(set(names)) != len(names):
            raise ParameterError(f"duplicate generator names in {names}")
        for position, gen in enumerate(self.generators):
            if gen.id != position:
                raise ParameterError(
                    f"generator '{gen.name}' has id {gen.id}, expected {position}"
                )

    @classmethod
    def from_names(cls, names: Union[str, Iterable[str]]) -> "Alphabet":
        if isinstance(names, str):
            names = names.split()
        return cls(tuple(Generator(i, name) for i, name in enumerate(names)))

    def __len__(self) -> int:
        return len(self.generators)

    def __iter__(self) -> Iterator[Generator]:
        return iter(self.generators)

    @property
    def names(self) -> Tuple[str, ...]:
        return tuple(g.name for g in self.generators)

    def by_name(self, name: str) -> Generator:
        for gen in self.generators:
            if gen.name == name:
                return gen
        raise WordParseError(f"unknown generator '{name}' (alphabet: {' '.join(self.names)})")

    def name_of(self, gen_id: int) -> str:
        return self.generators[gen_id].name

    def letter(self, name: str, exponent: int = 1) -> "Word":
        return Word.letter(self.by_name(name).id) ** exponent


@dataclass(frozen=True)
class Word:
    """Sequence of signed generator letters (not reduced unless produced by a reducer)."""

    letters: Tuple[Letter, ...] = ()

    @classmethod
    def letter(cls, gen_id: int, sign: int = 1) -> "Word":
        return cls(((gen_id, sign),))

    @classmethod
    def from_signed(cls, values: Iterable[int]) -> "Word":
        """Build from signed ints ``±(id + 1)``."""
        return cls(tuple((abs(v) - 1, 1 if v > 0 else -1) for v in values))

    def to_signed(self) -> Tuple[int, ...]:
        return tuple((gid + 1) * sign for gid, sign in self.letters)

    def __len__(self) -> int:
        return len(self.letters)

    def __bool__(self) -> bool:
        return bool(self.letters)

    def __iter__(self) -> Iterator[Letter]:
        return iter(self.letters)

    def __getitem__(self, index):
        if isinstance(index, slice):
            return Word(self.letters[index])
        return self.letters[index]

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def __pow__(self, exponent: int) -> "Word":
        base = self if exponent >= 0 else self.inverse()
        return Word(base.letters * abs(exponent))

    def inverse(self) -> "Word":
        return Word(tuple((gid, -sign) for gid, sign in reversed(self.letters)))


@dataclass(frozen=True)
class GeneratorMap:
    """Images of source generators as words over a target alphabet."""

    images: Mapping[int, Word]
    source: Optional[Alphabet] = field(default=None, compare=False)

    @classmethod
    def from_text(
        cls, source: Alphabet, target: Alphabet, images: Mapping[str, str]
    ) -> "GeneratorMap":
        return cls(
            {source.by_name(name).id: parse_word(text, target) for name, text in images.items()},
            source=source,
        )

    @classmethod
    def identity(cls, alphabet: Alphabet) -> "GeneratorMap":
        return cls({g.id: Word.letter(g.id) for g in alphabet}, source=alphabet)

    def image(self, gen_id: int) -> Word:
        try:
            return self.images[gen_id]
        except KeyError:
            name = self.source.name_of(gen_id) if self.source is not None else str(gen_id)
            raise MapDomainError(name) from None


def free_reduce(w: Word) -> Word:
    """Cancel adjacent inverse pairs until none remain."""
    stack: List[Letter] = []
    for gid, sign in w.letters:
        if stack and stack[-1][0] == gid and stack[-1][1] == -sign:
            stack.pop()
        else:
            stack.append((gid, sign))
    return Word(tuple(stack))


def cyclic_reduce(w: Word) -> Tuple[Word, Word]:
    """Return ``(core, conjugator)`` with ``w == conjugator * core * conjugator^-1`` freely."""
    letters = free_reduce(w).letters
    start, end = 0, len(letters)
    while end - start >= 2:
        first, last = letters[start], letters[end - 1]
        if first[0] != last[0] or first[1] != -last[1]:
            break
        start += 1
        end -= 1
    return Word(letters[start:end]), Word(letters[:start])


def substitute(w: Word, m: GeneratorMap) -> Word:
    """Replace every letter by its image (inverted for negative letters) and reduce."""
    out: List[Letter] = []
    for gid, sign in w.letters:
        image = m.image(gid)
        out.extend(image.letters if sign > 0 else image.inverse().letters)
    return free_reduce(Word(tuple(out)))


def commutator(u: Word, v: Word) -> Word:
    """``[u, v] = u^-1 v^-1 u v``."""
    return u.inverse() * v.inverse() * u * v


def exponent_sum(w: Word, gen_id: int) -> int:
    return sum(sign for gid, sign in w.letters if gid == gen_id)


def rotations(w: Word) -> List[Word]:
    letters = w.letters
    return [Word(letters[i:] + letters[:i]) for i in range(len(letters))] or [w]


def cyclic_key(w: Word) -> Tuple[int, ...]:
    """Least rotation of ``w`` or ``w^-1`` as signed ints; equal keys mean equal relators."""
    core, _ = cyclic_reduce(w)
    return min_rotation_key(core.to_signed())


def min_rotation_key(signed: Sequence[int]) -> Tuple[int, ...]:
    if not signed:
        return ()
    forward = tuple(signed)
    backward = tuple(-v for v in reversed(forward))
    n = len(forward)
    return min(
        min(forward[i:] + forward[:i] for i in range(n)),
        min(backward[i:] + backward[:i] for i in range(n)),
    )


def syllables(w: Word) -> List[Tuple[int, int]]:
    """Runs of a single generator as ``(generator id, exponent)`` pairs, zero runs dropped."""
    out: List[Tuple[int, int]] = []
    for gid, run in groupby(w.letters, key=lambda letter: letter[0]):
        exponent = sum(sign for _, sign in run)
        if exponent:
            out.append((gid, exponent))
    return out


def parse_word(text: str, alphabet: Alphabet) -> Word:
    """
    Parse word text such as ``"a^-1 b a b"`` or ``"x^2 y^-2"``.

    Args:
        text: generator names with optional integer exponents, separated by
            whitespace or ``*``; ``""``, ``"1"`` and ``"e"`` denote the empty word
        alphabet: alphabet supplying the generator names

    Returns:
        The parsed word, not reduced
    """
    stripped = text.strip()
    if stripped in _IDENTITY_TOKENS:
        return Word()
    letters: List[Letter] = []
    pos = 0
    while pos < len(stripped):
        match = _TOKEN.match(stripped, pos)
        if not match or match.end() == pos:
            raise WordParseError(f"cannot parse word at position {pos}: {stripped[pos:]!r}")
        name, exponent = match.group(1), match.group(2)
        gen = alphabet.by_name(name)
        power = int(exponent) if exponent is not None else 1
        letters.extend([(gen.id, 1 if power > 0 else -1)] * abs(power))
        pos = match.end()
    return Word(tuple(letters))


def format_word(w: Word, alphabet: Alphabet) -> str:
    """Render ``w`` in the parser's syntax, compressing runs into exponents."""
    if not w:
        return "1"
    parts = []
    for (gid, sign), run in groupby(w.letters):
        exponent = sign * len(list(run))
        name = alphabet.name_of(gid)
        parts.append(name if exponent == 1 else f"{name}^{exponent}")
    return " ".join(parts)

