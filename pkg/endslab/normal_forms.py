#  SPDX-FileCopyrightText: 2026 endslab contributors
#  SPDX-License-Identifier: GPL-3.0-or-later

"""
Reduced forms for amalgamated free products of finite groups over a common
subgroup and for HNN extensions of a finite group.

Both engines keep elements normalized from right to left: every letter is a
fixed representative of its coset D*y (D the relevant edge subgroup,
representative = smallest table index) and the D-parts are pushed to the
left, ending up in the head.
"""

import dataclasses
import logging
from typing import Dict, List, NamedTuple, Sequence, Tuple

from endslab.common import GroupValidationError
from endslab.groups import FiniteTable, GroupOracle
from endslab.words import GeneratorSymbol, Word

logger = logging.getLogger(__name__)


class ReducedForm(NamedTuple):
    """
    Amalgams: head c in C and letters (factor, rep) alternating between factors.
    HNN: head g_0 in A and letters (epsilon, rep) for t^epsilon rep.
    """

    head: int
    letters: Tuple[Tuple[int, int], ...]


def length(rf: ReducedForm) -> int:
    return len(rf.letters)


class _Transversal:
    """
    Decomposition y = d * rep of the elements of a finite group relative to
    a subgroup D (given as a sorted tuple of element indices)
    """

    def __init__(self, table: FiniteTable, subgroup: Sequence[int]):
        self.table = table
        self.subgroup = frozenset(subgroup)
        self.split: List[Tuple[int, int]] = []
        for y in range(table.order):
            rep = min(table.mul(d, y) for d in self.subgroup)
            self.split.append((table.mul(y, table.inv(rep)), rep))


@dataclasses.dataclass(frozen=True)
class AmalgamSpec:
    """
    A *_C B for finite A, B, C with injective homomorphisms C -> A, C -> B
    """

    A: FiniteTable
    B: FiniteTable
    C: FiniteTable
    c_in_a: Tuple[int, ...]
    c_in_b: Tuple[int, ...]

    def __post_init__(self):
        for factor, emb, label in ((self.A, self.c_in_a, "A"), (self.B, self.c_in_b, "B")):
            if len(emb) != self.C.order or len(set(emb)) != self.C.order:
                raise GroupValidationError(f"embedding of C into {label} is not injective")
            if any(not 0 <= x < factor.order for x in emb):
                raise GroupValidationError(f"embedding of C into {label} leaves the factor")
            if not factor.is_homomorphism(self.C, emb):
                raise GroupValidationError(f"embedding of C into {label} is not a homomorphism")


@dataclasses.dataclass(frozen=True)
class HnnSpec:
    """
    A*_phi with stable letter t and t c t^-1 = phi(c) for c in C1
    """

    A: FiniteTable
    C1: Tuple[int, ...]
    C2: Tuple[int, ...]
    phi: Tuple[Tuple[int, int], ...]

    def __post_init__(self):
        for sub, label in ((self.C1, "C1"), (self.C2, "C2")):
            if not self.A.is_subgroup(sub):
                raise GroupValidationError(f"{label} is not a subgroup of {self.A}")
        mapping = dict(self.phi)
        if set(mapping) != set(self.C1) or sorted(mapping.values()) != sorted(self.C2):
            raise GroupValidationError("phi is not a bijection C1 -> C2")
        for a in self.C1:
            for b in self.C1:
                if mapping[self.A.mul(a, b)] != self.A.mul(mapping[a], mapping[b]):
                    raise GroupValidationError("phi is not a homomorphism")

    def phi_map(self) -> Dict[int, int]:
        return dict(self.phi)


def _cyclic_embedding(table: FiniteTable, d: int) -> Tuple[int, ...]:
    g = table.first_element_of_order(d)
    if g is None:
        raise GroupValidationError(f"{table} has no element of order {d}")
    return tuple(table.power(g, j) for j in range(d))


def amalgam_over_cyclic(A: FiniteTable, B: FiniteTable, d: int) -> AmalgamSpec:
    """
    Amalgamate A and B over a cyclic group of order d, identifying the first
    elements of order d of both factors
    """
    return AmalgamSpec(A, B, FiniteTable.cyclic(d), _cyclic_embedding(A, d), _cyclic_embedding(B, d))


def hnn_over_cyclic(A: FiniteTable, d: int, exponent: int = 1) -> HnnSpec:
    """
    HNN extension of A along the cyclic subgroup <g> of order d, phi(g^j) = g^(j*exponent)
    """
    powers = _cyclic_embedding(A, d)
    phi = tuple((powers[j], powers[(j * exponent) % d]) for j in range(d))
    return HnnSpec(A, tuple(sorted(powers)), tuple(sorted(powers)), phi)


class AmalgamGroup(GroupOracle):
    """
    Generators are the non-identity elements of A followed by those of B
    """

    def __init__(self, spec: AmalgamSpec, name: str = "amalgam"):
        self.spec = spec
        self.factors = (spec.A, spec.B)
        self.embeddings = (spec.c_in_a, spec.c_in_b)
        self.in_c = tuple({x: c for c, x in enumerate(emb)} for emb in self.embeddings)
        self.transversals = tuple(_Transversal(f, emb) for f, emb in zip(self.factors, self.embeddings))
        self.letters = [(0, x) for x in range(1, spec.A.order)] + [(1, x) for x in range(1, spec.B.order)]
        self.generator_count = len(self.letters)
        self.name = name

    @property
    def identity(self) -> ReducedForm:
        return ReducedForm(0, ())

    def _push_left(self, head: int, seq: List[Tuple[int, int]], c: int) -> int:
        """
        Move c (in C) from the right end of seq to the head
        """
        C = self.spec.C
        for j in range(len(seq) - 1, -1, -1):
            if c == 0:
                return head
            f, rep = seq[j]
            y = self.factors[f].mul(rep, self.embeddings[f][c])
            d, rep = self.transversals[f].split[y]
            seq[j] = (f, rep)
            c = self.in_c[f][d]
        return C.mul(head, c)

    def multiply(self, g: ReducedForm, s: GeneratorSymbol) -> ReducedForm:
        f, x = self.letters[s.index]
        factor = self.factors[f]
        if s.sign < 0:
            x = factor.inv(x)
        seq = list(g.letters)
        head = g.head
        if seq and seq[-1][0] == f:
            x = factor.mul(seq.pop()[1], x)
        elif not seq:
            x = factor.mul(self.embeddings[f][head], x)
            head = 0
        if x in self.in_c[f]:
            head = self._push_left(head, seq, self.in_c[f][x])
        else:
            d, rep = self.transversals[f].split[x]
            head = self._push_left(head, seq, self.in_c[f][d])
            seq.append((f, rep))
        return ReducedForm(head, tuple(seq))

    def _letter_symbol(self, f: int, x: int) -> GeneratorSymbol:
        offset = 0 if f == 0 else self.spec.A.order - 1
        return GeneratorSymbol(offset + x - 1, 1)

    def word_of(self, g: ReducedForm) -> Word:
        word = []
        if g.head:
            word.append(self._letter_symbol(0, self.spec.c_in_a[g.head]))
        for f, rep in g.letters:
            word.append(self._letter_symbol(f, rep))
        return tuple(word)


class HnnGroup(GroupOracle):
    """
    Generators are the non-identity elements of A followed by t
    """

    def __init__(self, spec: HnnSpec, name: str = "hnn"):
        self.spec = spec
        A = spec.A
        phi = spec.phi_map()
        self.cross = {1: phi, -1: {v: k for k, v in phi.items()}}
        # letters t^eps rep: rep is reduced modulo C1 after t, modulo C2 after t^-1
        self.transversals = {1: _Transversal(A, spec.C1), -1: _Transversal(A, spec.C2)}
        self._t = A.order - 1
        self.generator_count = A.order
        self.name = name

    @property
    def identity(self) -> ReducedForm:
        return ReducedForm(0, ())

    def multiply(self, g: ReducedForm, s: GeneratorSymbol) -> ReducedForm:
        A = self.spec.A
        seq = list(g.letters)
        head = g.head
        if s.index == self._t:
            if seq and seq[-1] == (-s.sign, 0):
                seq.pop()
            else:
                seq.append((s.sign, 0))
            return ReducedForm(head, tuple(seq))
        x = s.index + 1
        if s.sign < 0:
            x = A.inv(x)
        for j in range(len(seq) - 1, -1, -1):
            eps, rep = seq[j]
            d, rep = self.transversals[eps].split[A.mul(rep, x)]
            seq[j] = (eps, rep)
            x = self.cross[eps][d]
            if x == 0:
                return ReducedForm(head, tuple(seq))
        return ReducedForm(A.mul(head, x), tuple(seq))

    def word_of(self, g: ReducedForm) -> Word:
        word = []
        if g.head:
            word.append(GeneratorSymbol(g.head - 1, 1))
        for eps, rep in g.letters:
            word.append(GeneratorSymbol(self._t, eps))
            if rep:
                word.append(GeneratorSymbol(rep - 1, 1))
        return tuple(word)


def amalgam_reduce(spec: AmalgamSpec, w: Sequence[GeneratorSymbol]) -> ReducedForm:
    return AmalgamGroup(spec).canonical(w)


def britton_reduce(spec: HnnSpec, w: Sequence[GeneratorSymbol]) -> ReducedForm:
    return HnnGroup(spec).canonical(w)
