#  SPDX-FileCopyrightText: 2026 endslab contributors
#  SPDX-License-Identifier: GPL-3.0-or-later

"""
Changing the generating set of a group and comparing what the ends
analysis sees under both word metrics
"""

import collections
import dataclasses
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, List, Optional, Sequence

from endslab.common import GroupValidationError, generator_name
from endslab.ends import INCONCLUSIVE, EndsProfile, annulus_components, ends_profile
from endslab.graphs import DEFAULT_VERTEX_BUDGET, build_ball
from endslab.groups import GroupOracle
from endslab.words import GeneratorSymbol, NormalForm, RootedGraph, Word, format_word, inverse_word

logger = logging.getLogger(__name__)

DEFAULT_SEARCH_LENGTH = 8


class ChangedGenerators(GroupOracle):
    """
    The group of base with a new generating set given as words over the old
    one. Payloads are those of base.
    """

    def __init__(self, base: GroupOracle, new_in_old: Sequence[Word], old_in_new: Optional[Sequence[Word]] = None):
        self.base = base
        self.new_in_old = [tuple(w) for w in new_in_old]
        self.old_in_new = [tuple(w) for w in old_in_new] if old_in_new is not None else None
        self.elements = [base.canonical(w) for w in self.new_in_old]
        self.inverses = [base.inverse(e) for e in self.elements]
        self.generator_count = len(self.new_in_old)
        self.is_finite = base.is_finite
        self.name = f"{base.name}[{','.join(format_word(w) for w in self.new_in_old)}]"

    @property
    def identity(self) -> NormalForm:
        return self.base.identity

    def multiply(self, g: NormalForm, s: GeneratorSymbol) -> NormalForm:
        element = self.elements[s.index] if s.sign > 0 else self.inverses[s.index]
        return self.base.product(g, element)

    def inverse(self, g: NormalForm) -> NormalForm:
        return self.base.inverse(g)

    def word_of(self, g: NormalForm) -> Word:
        if self.old_in_new is None:
            raise GroupValidationError(f"{self.name}: translation table not computed yet")
        return _translate(self, self.base.word_of(g))


# the data of a generating set change lives on the oracle itself
GeneratingSetChange = ChangedGenerators


def _find_in_new(change: ChangedGenerators, search_length: int) -> List[Word]:
    wanted: Dict[NormalForm, List[int]] = collections.defaultdict(list)
    for i in range(change.base.generator_count):
        wanted[change.base.generator(i)].append(i)
    found: Dict[int, Word] = {}
    words: Dict[NormalForm, Word] = {change.identity: ()}
    frontier = [change.identity]
    for _ in range(search_length + 1):
        for g in frontier:
            for i in wanted.pop(g, []):
                found[i] = words[g]
        if not wanted:
            break
        following = []
        for g in frontier:
            for s in change.symbols():
                h = change.multiply(g, s)
                if h not in words:
                    words[h] = words[g] + (s,)
                    following.append(h)
        frontier = following
    if wanted:
        missing = sorted(i for ids in wanted.values() for i in ids)
        raise GroupValidationError(
            f"new generators do not reach old generator(s) {missing} within {search_length} letters"
        )
    return [found[i] for i in range(change.base.generator_count)]


def change_generators(
    oracle: GroupOracle, new_gens: Sequence[Word], search_length: int = DEFAULT_SEARCH_LENGTH
) -> ChangedGenerators:
    if not new_gens:
        raise GroupValidationError("need at least one new generator")
    change = ChangedGenerators(oracle, new_gens)
    change.old_in_new = _find_in_new(change, search_length)
    logger.debug(f"{change.name}: old generators are {[format_word(w) for w in change.old_in_new]}")
    return change


@dataclasses.dataclass
class QiConstants:
    lambda_: float
    epsilon: float = 0.0
    checked: int = 0
    violations: List[str] = dataclasses.field(default_factory=list)

    @property
    def certified(self) -> bool:
        return not self.violations


def _translate(change: ChangedGenerators, word: Sequence[GeneratorSymbol]) -> Word:
    """
    An old-generator word rewritten over the new generators
    """
    assert change.old_in_new is not None
    out: List[GeneratorSymbol] = []
    for s in word:
        piece = change.old_in_new[s.index]
        out.extend(piece if s.sign > 0 else inverse_word(piece))
    return tuple(out)


def _expand(change: ChangedGenerators, word: Sequence[GeneratorSymbol]) -> Word:
    """
    A new-generator word written out over the old generators
    """
    out: List[GeneratorSymbol] = []
    for s in word:
        piece = change.new_in_old[s.index]
        out.extend(piece if s.sign > 0 else inverse_word(piece))
    return tuple(out)


def qi_constants(
    change: ChangedGenerators, sample_radius: int = 4, budget: int = DEFAULT_VERTEX_BUDGET
) -> QiConstants:
    """
    The identity map between the two word metrics is lambda-bi-Lipschitz
    with lambda the longest translation. Word metrics are left invariant,
    so d(x, y) = |x^-1 y| and every pair inside a ball of radius
    sample_radius is covered by the elements of norm <= 2*sample_radius in
    either metric. Elements in both balls are compared exactly. An element
    in only one ball is farther than 2*sample_radius in the other metric,
    so one bound holds; the other needs a translated word of length within
    lambda times the known norm that evaluates to the element.
    """
    assert change.old_in_new is not None
    lam = float(max([1] + [len(w) for w in change.new_in_old] + [len(w) for w in change.old_in_new]))
    constants = QiConstants(lambda_=lam)
    base = change.base
    for i, w in enumerate(change.old_in_new):
        if change.read(w) != base.generator(i):
            constants.violations.append(f"{generator_name(i)} is not {format_word(w)} over the new generators")
    diameter = 2 * sample_radius
    old = build_ball(base, diameter, budget=budget)
    new = build_ball(change, diameter, budget=budget)
    for i, g in enumerate(old.vertices):
        d_old = old.radius[i]
        constants.checked += 1
        d_new = new.norm(g)
        if d_new is None:
            witness = _translate(change, old.geodesic_word(i))
            if len(witness) > lam * d_old or change.read(witness) != g:
                constants.violations.append(f"{base.format_vertex(g)}: d={d_old}, d'>{diameter}")
        elif not (d_new / lam - constants.epsilon <= d_old <= lam * d_new + constants.epsilon):
            constants.violations.append(f"{base.format_vertex(g)}: d={d_old}, d'={d_new}")
    for j, g in enumerate(new.vertices):
        if old.norm(g) is not None:
            continue
        d_new = new.radius[j]
        constants.checked += 1
        witness = _expand(change, new.geodesic_word(j))
        if len(witness) > lam * d_new or base.canonical(witness) != g:
            constants.violations.append(f"{base.format_vertex(g)}: d>{diameter}, d'={d_new}")
    if constants.violations:
        logger.warning(f"{change.name}: {len(constants.violations)} pairs violate lambda={lam}")
    return constants


@dataclasses.dataclass
class ClassificationComparison:
    agree: Optional[bool]
    first: EndsProfile
    second: EndsProfile


def compare_end_classification(
    o1: RootedGraph,
    o2: RootedGraph,
    r_max: int,
    R_max: int,
    budget: int = DEFAULT_VERTEX_BUDGET,
    workers: Optional[int] = None,
) -> ClassificationComparison:
    """
    Both profiles are computed concurrently; agree is None when either side
    is inconclusive
    """
    with ThreadPoolExecutor(max_workers=2) as executor:
        futures = [executor.submit(ends_profile, o, r_max, R_max, budget, workers) for o in (o1, o2)]
        first, second = (f.result() for f in futures)
    agree: Optional[bool]
    if INCONCLUSIVE in (first.classification, second.classification):
        agree = None
    else:
        agree = first.classification == second.classification and first.stable_e == second.stable_e
    logger.info(f"{o1.name} vs {o2.name}: {first.classification} / {second.classification}")
    return ClassificationComparison(agree=agree, first=first, second=second)


def observed_modulus(
    o1: RootedGraph, o2: RootedGraph, n: int, R: int, limit: int = 8, budget: int = DEFAULT_VERTEX_BUDGET
) -> Optional[int]:
    """
    The least m <= limit such that every touching component of the o1
    annulus at (m, R) falls inside one touching component of the o2 annulus
    at (n, R). Both graphs must share payloads. Observed on the balls only.
    """
    first = build_ball(o1, R, budget=budget)
    second = build_ball(o2, R, budget=budget)
    target = annulus_components(second, n)
    touching = set(target.touching)
    for m in range(min(limit, R - 1) + 1):
        partition = annulus_components(first, m)
        ok = True
        for cid in partition.touching:
            images = set()
            for i in partition.members[cid]:
                j = second.index.get(first.vertices[i])
                if j is None:
                    continue
                c = target.assignment.get(j)
                if c in touching:
                    images.add(c)
            if len(images) > 1:
                ok = False
                break
        if ok:
            return m
    return None
