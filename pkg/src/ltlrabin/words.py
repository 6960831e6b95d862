"""Powerset alphabets and ultimately periodic (lasso) words."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import AlphabetMismatch


@dataclass(frozen=True)
class Alphabet:
    """The alphabet ``2^props``.

    A letter is an int whose bit ``i`` is set iff ``props[i]`` holds.
    """

    props: tuple[str, ...]

    def __post_init__(self):
        props = tuple(self.props)
        if len(set(props)) != len(props) or list(props) != sorted(props):
            raise ValueError(f"propositions must be distinct and sorted: {props!r}")
        object.__setattr__(self, "props", props)

    @classmethod
    def of(cls, props: Iterable[str]) -> "Alphabet":
        return cls(tuple(sorted(set(props))))

    @property
    def size(self) -> int:
        return 1 << len(self.props)

    def letters(self) -> range:
        return range(self.size)

    def index(self, prop: str) -> int:
        return self.props.index(prop)

    def letter(self, true_props: Iterable[str]) -> int:
        bits = 0
        for p in true_props:
            try:
                bits |= 1 << self.props.index(p)
            except ValueError:
                raise AlphabetMismatch(f"{p!r} is not in {self.props!r}") from None
        return bits

    def holds(self, letter: int) -> tuple[str, ...]:
        return tuple(p for i, p in enumerate(self.props) if letter >> i & 1)

    def show(self, letter: int) -> str:
        return "{" + ",".join(self.holds(letter)) + "}"


@dataclass(frozen=True)
class LassoWord:
    """The omega-word ``prefix . period^omega``."""

    alphabet: Alphabet
    prefix: tuple[int, ...]
    period: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple(self.prefix))
        object.__setattr__(self, "period", tuple(self.period))
        if not self.period:
            raise ValueError("lasso period must be nonempty")
        n = self.alphabet.size
        for a in self.prefix + self.period:
            if not 0 <= a < n:
                raise AlphabetMismatch(f"letter {a} outside alphabet of size {n}")

    @classmethod
    def from_sets(
        cls,
        alphabet: Alphabet,
        prefix: Sequence[Iterable[str]],
        period: Sequence[Iterable[str]],
    ) -> "LassoWord":
        return cls(
            alphabet,
            tuple(alphabet.letter(s) for s in prefix),
            tuple(alphabet.letter(s) for s in period),
        )

    def __len__(self):
        return len(self.prefix) + len(self.period)

    def letter_at(self, i: int) -> int:
        p = len(self.prefix)
        if i < p:
            return self.prefix[i]
        return self.period[(i - p) % len(self.period)]

    def successor(self, i: int) -> int:
        """Position following ``i`` within ``0 .. len(self)-1``."""
        return len(self.prefix) if i + 1 == len(self) else i + 1

    def show(self) -> str:
        pre = "".join(self.alphabet.show(a) for a in self.prefix)
        per = "".join(self.alphabet.show(a) for a in self.period)
        return f"{pre}({per})^w"
