#  SPDX-FileCopyrightText: 2026 endslab contributors
#  SPDX-License-Identifier: GPL-3.0-or-later

"""
Words over a finite generator alphabet and the rooted graph interface
shared by Cayley graphs and coset graphs
"""

import abc
from typing import Hashable, List, NamedTuple, Sequence, Tuple

from endslab.common import MalformedWordError, generator_name


class GeneratorSymbol(NamedTuple):
    index: int
    sign: int

    def inverse(self) -> "GeneratorSymbol":
        return GeneratorSymbol(self.index, -self.sign)


Word = Tuple[GeneratorSymbol, ...]
# canonical, hashable and (within one family) totally ordered element identifier
NormalForm = Hashable


def symbols_for(count: int) -> List[GeneratorSymbol]:
    """
    All symbols of an alphabet with count generators, in symbol order
    """
    return [GeneratorSymbol(i, s) for i in range(count) for s in (1, -1)]


def symbol_key(s: GeneratorSymbol) -> Tuple[int, int]:
    return (s.index, 0 if s.sign > 0 else 1)


def word_key(word: Sequence[GeneratorSymbol]) -> Tuple[int, Tuple[Tuple[int, int], ...]]:
    """
    Shortlex sort key
    """
    return (len(word), tuple(symbol_key(s) for s in word))


def inverse_word(word: Sequence[GeneratorSymbol]) -> Word:
    return tuple(s.inverse() for s in reversed(word))


def free_reduce(word: Sequence[GeneratorSymbol]) -> Word:
    out: List[GeneratorSymbol] = []
    for s in word:
        if out and out[-1] == s.inverse():
            out.pop()
        else:
            out.append(s)
    return tuple(out)


def check_word(word: Sequence[GeneratorSymbol], generator_count: int) -> None:
    for s in word:
        if not isinstance(s, tuple) or len(s) != 2:
            raise MalformedWordError(f"not a generator symbol: {s!r}")
        index, sign = s
        if not isinstance(index, int) or not 0 <= index < generator_count:
            raise MalformedWordError(f"generator index {index!r} out of range for {generator_count} generators")
        if sign not in (1, -1):
            raise MalformedWordError(f"generator sign must be +1 or -1, got {sign!r}")


def format_symbol(s: GeneratorSymbol) -> str:
    name = generator_name(s.index)
    if s.sign > 0:
        return name
    if len(name) == 1:
        return name.upper()
    return f"{name}'"


def format_word(word: Sequence[GeneratorSymbol]) -> str:
    if not word:
        return "1"
    return "".join(format_symbol(s) for s in word)


def parse_word(text: str, generator_count: int) -> Word:
    """
    Parse a word like "abA" or "ab'a"; "1" is the empty word
    """
    text = text.strip()
    if text == "1":
        return ()
    letters: List[GeneratorSymbol] = []
    pos = 0
    while pos < len(text):
        ch = text[pos]
        if not ch.isalpha() or not ch.isascii():
            raise MalformedWordError(f"unexpected character {ch!r} in word {text!r}")
        sign = -1 if ch.isupper() else 1
        pos += 1
        if pos < len(text) and text[pos] == "'":
            sign = -sign
            pos += 1
        letters.append(GeneratorSymbol(ord(ch.lower()) - ord("a"), sign))
    check_word(letters, generator_count)
    return tuple(letters)


class RootedGraph(abc.ABC):
    """
    A rooted, locally finite graph whose edges are labelled by generator
    symbols: v -- s --> step(v, s) and step(step(v, s), s^-1) == v
    """

    name: str = "graph"
    generator_count: int = 0

    @property
    @abc.abstractmethod
    def root(self) -> NormalForm:
        pass

    @abc.abstractmethod
    def step(self, v: NormalForm, s: GeneratorSymbol) -> NormalForm:
        pass

    def symbols(self) -> List[GeneratorSymbol]:
        return symbols_for(self.generator_count)

    def neighbors(self, v: NormalForm) -> List[Tuple[GeneratorSymbol, NormalForm]]:
        return [(s, self.step(v, s)) for s in self.symbols()]

    def read(self, word: Sequence[GeneratorSymbol]) -> NormalForm:
        """
        The vertex reached from the root along word
        """
        check_word(word, self.generator_count)
        v = self.root
        for s in word:
            v = self.step(v, GeneratorSymbol(*s))
        return v

    def format_vertex(self, v: NormalForm) -> str:
        return str(v)

    def __repr__(self) -> str:
        return self.name
