#  SPDX-FileCopyrightText: 2026 endslab contributors
#  SPDX-License-Identifier: GPL-3.0-or-later

"""
Group oracles: canonical forms, multiplication by generators and inversion
for the built-in group families
"""

import abc
import collections
import itertools
import logging
import pathlib
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

from endslab.common import GroupValidationError, MalformedWordError
from endslab.words import (
    GeneratorSymbol,
    NormalForm,
    RootedGraph,
    Word,
    check_word,
    format_word,
    inverse_word,
    symbols_for,
)

logger = logging.getLogger(__name__)


class FiniteTable:
    """
    A finite group given by its multiplication table; index 0 is the identity
    """

    def __init__(self, rows: Sequence[Sequence[int]], name: str = "table", validate: bool = True):
        self.rows: Tuple[Tuple[int, ...], ...] = tuple(tuple(int(x) for x in row) for row in rows)
        self.order = len(self.rows)
        self.name = name
        if validate:
            self.validate()
        self._inverses = tuple(self._find_inverse(g) for g in range(self.order))

    @classmethod
    def cyclic(cls, n: int) -> "FiniteTable":
        if n < 1:
            raise GroupValidationError(f"cyclic group order must be positive, got {n}")
        return cls([[(i + j) % n for j in range(n)] for i in range(n)], name=f"cyclic({n})", validate=False)

    @classmethod
    def from_text(cls, text: str, name: str = "table") -> "FiniteTable":
        lines = [line.split() for line in text.splitlines() if line.strip()]
        if not lines:
            raise GroupValidationError("empty table")
        try:
            n = int(lines[0][0])
            rows = [[int(x) for x in line] for line in lines[1:]]
        except ValueError as e:
            raise GroupValidationError(f"table entries must be integers: {e}") from e
        if len(lines[0]) != 1 or len(rows) != n or any(len(row) != n for row in rows):
            raise GroupValidationError(f"table header says order {n} but the rows do not form a {n}x{n} table")
        return cls(rows, name=name)

    @classmethod
    def from_file(cls, path: Union[str, pathlib.Path]) -> "FiniteTable":
        path = pathlib.Path(path)
        logger.debug(f"loading finite group table from {path}")
        return cls.from_text(path.read_text(), name=f"table({path})")

    def validate(self) -> None:
        n = self.order
        if n == 0:
            raise GroupValidationError("a group has at least one element")
        for row in self.rows:
            if len(row) != n or any(not 0 <= x < n for x in row):
                raise GroupValidationError(f"table rows must hold {n} indices in range 0..{n - 1}")
            if len(set(row)) != n:
                raise GroupValidationError("table rows must be permutations (Latin square)")
        for g in range(n):
            if self.rows[0][g] != g or self.rows[g][0] != g:
                raise GroupValidationError("index 0 must be the identity")
        for a, b, c in itertools.product(range(n), repeat=3):
            if self.rows[self.rows[a][b]][c] != self.rows[a][self.rows[b][c]]:
                raise GroupValidationError(f"multiplication is not associative at ({a}, {b}, {c})")

    def _find_inverse(self, g: int) -> int:
        for h in range(self.order):
            if self.rows[g][h] == 0:
                return h
        raise GroupValidationError(f"element {g} has no inverse")

    def mul(self, g: int, h: int) -> int:
        return self.rows[g][h]

    def inv(self, g: int) -> int:
        return self._inverses[g]

    def power(self, g: int, k: int) -> int:
        if k < 0:
            g, k = self.inv(g), -k
        x = 0
        for _ in range(k):
            x = self.rows[x][g]
        return x

    def element_order(self, g: int) -> int:
        k, x = 1, g
        while x != 0:
            x = self.rows[x][g]
            k += 1
        return k

    def generated(self, gens: Iterable[int]) -> FrozenSet[int]:
        gens = list(gens)
        seen = {0}
        queue = collections.deque([0])
        while queue:
            x = queue.popleft()
            for g in gens:
                y = self.rows[x][g]
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        return frozenset(seen)

    def greedy_generators(self) -> List[int]:
        gens: List[int] = []
        span = frozenset([0])
        for g in range(1, self.order):
            if g not in span:
                gens.append(g)
                span = self.generated(gens)
        return gens

    def is_subgroup(self, elements: Iterable[int]) -> bool:
        elements = set(elements)
        if 0 not in elements:
            return False
        return all(self.rows[a][self.inv(b)] in elements for a in elements for b in elements)

    def is_homomorphism(self, domain: "FiniteTable", mapping: Sequence[int]) -> bool:
        """
        Whether mapping (indexed by domain elements) is a homomorphism domain -> self
        """
        return all(
            mapping[domain.mul(a, b)] == self.mul(mapping[a], mapping[b])
            for a in range(domain.order)
            for b in range(domain.order)
        )

    def first_element_of_order(self, d: int) -> Optional[int]:
        for g in range(self.order):
            if self.element_order(g) == d:
                return g
        return None

    def __repr__(self) -> str:
        return self.name


class GroupOracle(RootedGraph):
    """
    Word-problem engine of one group with a fixed finite generating set;
    its rooted graph is the Cayley graph with root the identity
    """

    is_finite = False

    @property
    @abc.abstractmethod
    def identity(self) -> NormalForm:
        pass

    @abc.abstractmethod
    def multiply(self, g: NormalForm, s: GeneratorSymbol) -> NormalForm:
        pass

    @abc.abstractmethod
    def word_of(self, g: NormalForm) -> Word:
        pass

    @property
    def root(self) -> NormalForm:
        return self.identity

    def step(self, v: NormalForm, s: GeneratorSymbol) -> NormalForm:
        return self.multiply(v, s)

    def canonical(self, word: Sequence[GeneratorSymbol]) -> NormalForm:
        return self.read(word)

    def inverse(self, g: NormalForm) -> NormalForm:
        return self.canonical(inverse_word(self.word_of(g)))

    def product(self, g: NormalForm, h: NormalForm) -> NormalForm:
        for s in self.word_of(h):
            g = self.multiply(g, s)
        return g

    def generator(self, index: int) -> NormalForm:
        return self.multiply(self.identity, GeneratorSymbol(index, 1))

    def generators(self) -> List[NormalForm]:
        return [self.generator(i) for i in range(self.generator_count)]

    def format_vertex(self, g: NormalForm) -> str:
        return format_word(self.word_of(g))


def canonical(oracle: GroupOracle, w: Sequence[GeneratorSymbol]) -> NormalForm:
    return oracle.canonical(w)


def multiply(oracle: GroupOracle, g: NormalForm, s: GeneratorSymbol) -> NormalForm:
    check_word([s], oracle.generator_count)
    return oracle.multiply(g, GeneratorSymbol(*s))


def inverse(oracle: GroupOracle, g: NormalForm) -> NormalForm:
    return oracle.inverse(g)


def element_order(oracle: GroupOracle, g: NormalForm, limit: int = 1000) -> Optional[int]:
    """
    Order of g, or None if it exceeds limit
    """
    x, k = g, 1
    while x != oracle.identity:
        if k >= limit:
            return None
        x = oracle.product(x, g)
        k += 1
    return k


def finite_subgroup(oracle: GroupOracle, elements: Iterable[NormalForm], limit: int = 10000) -> List[NormalForm]:
    """
    The subgroup generated by finitely many elements, which must be finite
    """
    gens = list(elements)
    seen = {oracle.identity}
    queue = collections.deque([oracle.identity])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = oracle.product(x, g)
            if y not in seen:
                if len(seen) >= limit:
                    raise GroupValidationError(f"subgroup generated by {len(gens)} elements exceeds {limit} elements")
                seen.add(y)
                queue.append(y)
    return sorted(seen)


def load_table(path: Union[str, pathlib.Path]) -> FiniteTable:
    return FiniteTable.from_file(path)


class FreeGroup(GroupOracle):
    """
    Free group; payloads are freely reduced words
    """

    def __init__(self, rank: int):
        if rank < 0:
            raise GroupValidationError(f"rank must be nonnegative, got {rank}")
        self.generator_count = rank
        self.name = f"free({rank})"

    @property
    def identity(self) -> Word:
        return ()

    def multiply(self, g: Word, s: GeneratorSymbol) -> Word:
        if g and g[-1] == s.inverse():
            return g[:-1]
        return g + (s,)

    def word_of(self, g: Word) -> Word:
        return g

    def inverse(self, g: Word) -> Word:
        return inverse_word(g)


class FreeAbelianGroup(GroupOracle):
    """
    Z^n with the standard basis; payloads are integer vectors
    """

    def __init__(self, rank: int):
        if rank < 1:
            raise GroupValidationError(f"rank must be positive, got {rank}")
        self.generator_count = rank
        self.name = "Z" if rank == 1 else f"Z^{rank}"

    @property
    def identity(self) -> Tuple[int, ...]:
        return (0,) * self.generator_count

    def multiply(self, g: Tuple[int, ...], s: GeneratorSymbol) -> Tuple[int, ...]:
        v = list(g)
        v[s.index] += s.sign
        return tuple(v)

    def word_of(self, g: Tuple[int, ...]) -> Word:
        word: List[GeneratorSymbol] = []
        for i, x in enumerate(g):
            word.extend([GeneratorSymbol(i, 1 if x > 0 else -1)] * abs(x))
        return tuple(word)

    def inverse(self, g: Tuple[int, ...]) -> Tuple[int, ...]:
        return tuple(-x for x in g)


class FiniteGroup(GroupOracle):
    """
    A finite group given by a table, with generators picked from its elements
    """

    is_finite = True

    def __init__(self, table: FiniteTable, generators: Optional[Sequence[int]] = None):
        self.table = table
        self.gens: Tuple[int, ...] = tuple(table.greedy_generators() if generators is None else generators)
        if table.generated(self.gens) != frozenset(range(table.order)):
            raise GroupValidationError(f"{list(self.gens)} does not generate {table}")
        self.generator_count = len(self.gens)
        self.name = table.name
        self._words = self._shortest_words()

    def _shortest_words(self) -> Dict[int, Word]:
        words: Dict[int, Word] = {0: ()}
        queue = collections.deque([0])
        while queue:
            x = queue.popleft()
            for s in symbols_for(self.generator_count):
                y = self.multiply(x, s)
                if y not in words:
                    words[y] = words[x] + (s,)
                    queue.append(y)
        return words

    @property
    def identity(self) -> int:
        return 0

    def letter(self, s: GeneratorSymbol) -> int:
        g = self.gens[s.index]
        return g if s.sign > 0 else self.table.inv(g)

    def multiply(self, g: int, s: GeneratorSymbol) -> int:
        return self.table.mul(g, self.letter(s))

    def word_of(self, g: int) -> Word:
        return self._words[g]

    def inverse(self, g: int) -> int:
        return self.table.inv(g)

    def elements(self) -> List[int]:
        return list(range(self.table.order))


def cyclic(n: int) -> FiniteGroup:
    return FiniteGroup(FiniteTable.cyclic(n))


class ProductGroup(GroupOracle):
    """
    Direct product; generators of the left factor come first
    """

    def __init__(self, left: GroupOracle, right: GroupOracle):
        self.left = left
        self.right = right
        self._split = left.generator_count
        self.generator_count = left.generator_count + right.generator_count
        self.is_finite = left.is_finite and right.is_finite
        self.name = f"product({left.name}, {right.name})"

    @property
    def identity(self) -> Tuple[NormalForm, NormalForm]:
        return (self.left.identity, self.right.identity)

    def multiply(self, g: Tuple[NormalForm, NormalForm], s: GeneratorSymbol) -> Tuple[NormalForm, NormalForm]:
        if s.index < self._split:
            return (self.left.multiply(g[0], s), g[1])
        return (g[0], self.right.multiply(g[1], GeneratorSymbol(s.index - self._split, s.sign)))

    def word_of(self, g: Tuple[NormalForm, NormalForm]) -> Word:
        shifted = tuple(GeneratorSymbol(s.index + self._split, s.sign) for s in self.right.word_of(g[1]))
        return self.left.word_of(g[0]) + shifted

    def inverse(self, g: Tuple[NormalForm, NormalForm]) -> Tuple[NormalForm, NormalForm]:
        return (self.left.inverse(g[0]), self.right.inverse(g[1]))


def build_product(left: GroupOracle, right: GroupOracle) -> ProductGroup:
    return ProductGroup(left, right)


def _automorphism_powers(table: FiniteTable, action: Sequence[int]) -> List[Tuple[int, ...]]:
    identity_map = tuple(range(table.order))
    powers = [identity_map]
    current = tuple(action)
    while current != identity_map:
        powers.append(current)
        current = tuple(action[x] for x in current)
    return powers


class SemidirectFiniteByZ(GroupOracle):
    """
    K x| Z with t k t^-1 = action(k); payloads (k, n) stand for k t^n and
    (k, n)(k', n') = (k action^n(k'), n + n')
    """

    def __init__(self, K: FiniteGroup, action: Sequence[int]):
        table = K.table
        action = tuple(action)
        if sorted(action) != list(range(table.order)):
            raise GroupValidationError("action is not a bijection of the finite group")
        if not table.is_homomorphism(table, action):
            raise GroupValidationError("action is not a homomorphism of the finite group")
        self.K = K
        self.action = action
        self._powers = _automorphism_powers(table, action)
        self._t = K.generator_count
        self.generator_count = K.generator_count + 1
        self.name = f"semidirect_fz({K.name})"

    def twist(self, k: int, n: int) -> int:
        return self._powers[n % len(self._powers)][k]

    @property
    def identity(self) -> Tuple[int, int]:
        return (0, 0)

    def multiply(self, g: Tuple[int, int], s: GeneratorSymbol) -> Tuple[int, int]:
        k, n = g
        if s.index == self._t:
            return (k, n + s.sign)
        return (self.K.table.mul(k, self.twist(self.K.letter(s), n)), n)

    def word_of(self, g: Tuple[int, int]) -> Word:
        k, n = g
        return self.K.word_of(k) + (GeneratorSymbol(self._t, 1 if n > 0 else -1),) * abs(n)

    def inverse(self, g: Tuple[int, int]) -> Tuple[int, int]:
        k, n = g
        return (self.twist(self.K.table.inv(k), -n), -n)


def build_semidirect_finite_by_Z(K: FiniteGroup, action: Sequence[int]) -> SemidirectFiniteByZ:
    return SemidirectFiniteByZ(K, action)


def power_map(table: FiniteTable, k: int) -> List[int]:
    return [table.power(g, k) for g in range(table.order)]


class SemidirectZByFinite(GroupOracle):
    """
    Z x| K where k acts on Z by the sign signs[k]; payloads (n, k) stand for
    t^n k and (n, k)(m, k') = (n + signs[k] m, k k')
    """

    def __init__(self, K: FiniteGroup, signs: Sequence[int]):
        table = K.table
        signs = tuple(signs)
        if len(signs) != table.order or any(x not in (1, -1) for x in signs):
            raise GroupValidationError("action must send every element to +1 or -1")
        if any(signs[table.mul(a, b)] != signs[a] * signs[b] for a in range(table.order) for b in range(table.order)):
            raise GroupValidationError("action is not a homomorphism to {+1, -1}")
        self.K = K
        self.signs = signs
        self._t = K.generator_count
        self.generator_count = K.generator_count + 1
        self.name = f"semidirect_zf({K.name})"

    @property
    def identity(self) -> Tuple[int, int]:
        return (0, 0)

    def multiply(self, g: Tuple[int, int], s: GeneratorSymbol) -> Tuple[int, int]:
        n, k = g
        if s.index == self._t:
            return (n + self.signs[k] * s.sign, k)
        return (n, self.K.table.mul(k, self.K.letter(s)))

    def word_of(self, g: Tuple[int, int]) -> Word:
        n, k = g
        return (GeneratorSymbol(self._t, 1 if n > 0 else -1),) * abs(n) + self.K.word_of(k)

    def inverse(self, g: Tuple[int, int]) -> Tuple[int, int]:
        n, k = g
        return (-self.signs[k] * n, self.K.table.inv(k))


def sign_action(K: FiniteGroup, generator_signs: Sequence[int]) -> List[int]:
    """
    Extend signs given on the generators of K to all of K along shortest words
    """
    signs = []
    for k in K.elements():
        sign = 1
        for s in K.word_of(k):
            sign *= generator_signs[s.index]
        signs.append(sign)
    return signs


def build_semidirect_Z_by_finite(K: FiniteGroup, signs: Sequence[int]) -> SemidirectZByFinite:
    return SemidirectZByFinite(K, signs)


class QuotientGroup(GroupOracle):
    """
    G/N for a finite normal subgroup N; payload of Ng is its minimal element
    """

    def __init__(self, G: GroupOracle, N: Iterable[NormalForm]):
        self.G = G
        self.N: FrozenSet[NormalForm] = frozenset(N)
        self._validate()
        self._n_words = [G.word_of(n) for n in sorted(self.N)]
        self.generator_count = G.generator_count
        self.name = f"quotient({G.name})"

    def _validate(self) -> None:
        G, N = self.G, self.N
        if G.identity not in N:
            raise GroupValidationError("N does not contain the identity")
        for x in N:
            if G.inverse(x) not in N:
                raise GroupValidationError(f"N is not closed under inverses: {G.format_vertex(x)}")
            for y in N:
                if G.product(x, y) not in N:
                    raise GroupValidationError(
                        f"N is not closed under multiplication: {G.format_vertex(x)} * {G.format_vertex(y)}"
                    )
        for s in symbols_for(G.generator_count):
            for n in N:
                conj = G.canonical((s.inverse(),) + G.word_of(n) + (s,))
                if conj not in N:
                    raise GroupValidationError(f"N is not normal: conjugating {G.format_vertex(n)} leaves N")

    def representative(self, g: NormalForm) -> NormalForm:
        candidates = []
        for word in self._n_words:
            x = g
            for s in word:
                x = self.G.multiply(x, s)
            candidates.append(x)
        return min(candidates)

    @property
    def identity(self) -> NormalForm:
        return self.representative(self.G.identity)

    def multiply(self, g: NormalForm, s: GeneratorSymbol) -> NormalForm:
        return self.representative(self.G.multiply(g, s))

    def word_of(self, g: NormalForm) -> Word:
        return self.G.word_of(g)

    def inverse(self, g: NormalForm) -> NormalForm:
        return self.representative(self.G.inverse(g))


def build_quotient_by_finite_normal(G: GroupOracle, N: Iterable[NormalForm]) -> QuotientGroup:
    N = list(N)
    for n in N:
        try:
            G.word_of(n)
        except (KeyError, TypeError, ValueError, IndexError) as e:
            raise MalformedWordError(f"{n!r} is not a normal form of {G.name}") from e
    return QuotientGroup(G, N)
