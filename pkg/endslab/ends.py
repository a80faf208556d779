#  SPDX-FileCopyrightText: 2026 endslab contributors
#  SPDX-License-Identifier: GPL-3.0-or-later

"""
Ends of rooted graphs at finite radius.

Two vertices of the annulus {v : r < |v| <= R} are equivalent when an edge
path inside the annulus joins them. A component counts as a candidate end
when it touches the outer sphere |v| = R; e(r, R) is the number of those.
"""

import collections
import dataclasses
import logging
import random
from typing import Dict, List, Optional, Sequence, Set, Tuple

from networkx.utils import UnionFind
from sympy.combinatorics import Permutation, PermutationGroup

from endslab.common import ArgumentError, ConsistencyError, generator_name
from endslab.graphs import DEFAULT_VERTEX_BUDGET, BallGraph, build_ball
from endslab.groups import GroupOracle
from endslab.words import NormalForm, RootedGraph, word_key

logger = logging.getLogger(__name__)

ZERO = "zero"
ONE = "one"
TWO = "two"
INFINITE = "infinite"
INCONCLUSIVE = "inconclusive"

_STABLE_NAMES = {0: ZERO, 1: ONE, 2: TWO}
IMAGE_ORDER_LIMIT = 5040


@dataclasses.dataclass
class ComponentPartition:
    """
    Components of the annulus r < |v| <= R; ids follow the order of the
    smallest payload in each component
    """

    r: int
    R: int
    assignment: Dict[int, int]
    members: Dict[int, List[int]]
    touching: List[int]

    @property
    def e(self) -> int:
        return len(self.touching)

    def component_of(self, i: int) -> Optional[int]:
        return self.assignment.get(i)


def _annulus_range(ball: BallGraph, r: int, R: int) -> range:
    return range(ball.sphere(r + 1).start, ball.within(R).stop)


def annulus_components(ball: BallGraph, r: int, R: Optional[int] = None) -> ComponentPartition:
    R = ball.R if R is None else R
    if R > ball.R:
        raise ArgumentError(f"outer radius {R} exceeds the ball radius {ball.R}")
    if not 0 <= r < R:
        raise ArgumentError(f"need 0 <= r < R, got r={r}, R={R}")
    annulus = _annulus_range(ball, r, R)
    uf = UnionFind(annulus)
    for i in annulus:
        for _, j in ball.adjacency[i]:
            if j > i and j < annulus.stop:
                uf.union(i, j)
    groups = [sorted(c) for c in uf.to_sets()]
    groups.sort(key=lambda c: min(ball.vertices[i] for i in c))
    assignment: Dict[int, int] = {}
    members: Dict[int, List[int]] = {}
    outer = ball.sphere(R)
    touching = []
    for cid, comp in enumerate(groups):
        members[cid] = comp
        for i in comp:
            assignment[i] = cid
        if comp[-1] >= outer.start:
            touching.append(cid)
    return ComponentPartition(r=r, R=R, assignment=assignment, members=members, touching=touching)


def touching_counts(ball: BallGraph, r: int, outer_radii: Sequence[int]) -> Dict[int, int]:
    """
    e(r, R) for every R in outer_radii, growing a single union-find outward
    """
    wanted = set(outer_radii)
    lo = ball.sphere(r + 1).start
    uf = UnionFind()
    counts: Dict[int, int] = {}
    for rho in range(r + 1, max(wanted) + 1):
        sphere = ball.sphere(rho)
        for i in sphere:
            uf[i]
            for _, j in ball.adjacency[i]:
                if lo <= j < sphere.stop and j != i:
                    uf.union(i, j)
        if rho in wanted:
            counts[rho] = len({uf[i] for i in sphere})
    return counts


@dataclasses.dataclass
class EndsProfile:
    table: Dict[Tuple[int, int], int]
    classification: str
    stable_e: Optional[int]
    witness_radii: Tuple[int, Tuple[int, int]]
    r_max: int
    R_max: int
    sphere_sizes: List[int]

    def cells(self) -> List[Tuple[int, int, int]]:
        return [(r, R, e) for (r, R), e in sorted(self.table.items())]

    def row(self, r: int) -> List[int]:
        return [e for (rr, _), e in sorted(self.table.items()) if rr == r]


def check_monotone(table: Dict[Tuple[int, int], int]) -> None:
    """
    e(r, R) is nondecreasing in r and nonincreasing in R
    """
    for (r, R), e in table.items():
        if (r + 1, R) in table and table[(r + 1, R)] < e:
            raise ConsistencyError(f"e({r + 1},{R})={table[(r + 1, R)]} < e({r},{R})={e}")
        if (r, R + 1) in table and table[(r, R + 1)] > e:
            raise ConsistencyError(f"e({r},{R + 1})={table[(r, R + 1)]} > e({r},{R})={e}")


def classify(table: Dict[Tuple[int, int], int], r_max: int, R_max: int, outer_empty: bool):
    if outer_empty:
        return ZERO, 0
    top_r = list(range(max(1, r_max - 2), r_max + 1))
    top_R = [R_max - 1, R_max]
    window = {table[(r, R)] for r in top_r for R in top_R}
    if len(window) == 1:
        value = window.pop()
        if value not in _STABLE_NAMES:
            logger.warning(f"profile converged to e={value}, which no finitely generated group has")
        return _STABLE_NAMES.get(value, INCONCLUSIVE), value
    tail = [table[(r, R_max)] for r in top_r]
    if len(tail) == 3 and tail[0] < tail[1] < tail[2]:
        return INFINITE, None
    return INCONCLUSIVE, None


def ends_profile(
    graph: RootedGraph,
    r_max: int,
    R_max: int,
    budget: int = DEFAULT_VERTEX_BUDGET,
    workers: Optional[int] = None,
    ball: Optional[BallGraph] = None,
) -> EndsProfile:
    if r_max < 1:
        raise ArgumentError(f"r_max must be at least 1, got {r_max}")
    if R_max < 2 * r_max + 4:
        raise ArgumentError(f"R_max must be at least 2*r_max+4={2 * r_max + 4}, got {R_max}")
    if ball is None or ball.R < R_max:
        ball = build_ball(graph, R_max, budget=budget, workers=workers)
    outer_radii = list(range(r_max + 2, R_max + 1))
    table: Dict[Tuple[int, int], int] = {}
    for r in range(1, r_max + 1):
        for R, e in touching_counts(ball, r, outer_radii).items():
            table[(r, R)] = e
        logger.debug(f"{graph.name}: e({r}, R) = {[table[(r, R)] for R in outer_radii]}")
    check_monotone(table)
    classification, stable_e = classify(table, r_max, R_max, not ball.sphere(R_max))
    logger.info(f"{graph.name}: classified as {classification} (stable_e={stable_e})")
    return EndsProfile(
        table=table,
        classification=classification,
        stable_e=stable_e,
        witness_radii=(r_max, (R_max - 1, R_max)),
        r_max=r_max,
        R_max=R_max,
        sphere_sizes=ball.sphere_sizes()[: R_max + 1],
    )


@dataclasses.dataclass
class RefinementTree:
    """
    parents[r] maps each touching component at r+1 to the touching
    component at r that contains it
    """

    R: int
    radii: List[int]
    parents: Dict[int, Dict[int, int]]

    def children(self, r: int) -> Dict[int, List[int]]:
        out: Dict[int, List[int]] = collections.defaultdict(list)
        for child, parent in sorted(self.parents[r].items()):
            out[parent].append(child)
        return dict(out)

    def branching(self, r: int) -> List[int]:
        return sorted(len(c) for c in self.children(r).values())


def refinement_tree(partitions: Sequence[ComponentPartition]) -> RefinementTree:
    if not partitions:
        raise ArgumentError("need at least one partition")
    R = partitions[0].R
    for a, b in zip(partitions, partitions[1:]):
        if b.R != R or a.R != R:
            raise ArgumentError("partitions must share the outer radius")
        if b.r != a.r + 1:
            raise ArgumentError(f"radii must be consecutive, got {a.r} then {b.r}")
    parents: Dict[int, Dict[int, int]] = {}
    for outer, inner in zip(partitions, partitions[1:]):
        surviving = set(outer.touching)
        mapping = {}
        for cid in inner.touching:
            parent = outer.assignment[inner.members[cid][0]]
            if parent not in surviving:
                raise ConsistencyError(f"component {cid} at r={inner.r} lies in a capped component at r={outer.r}")
            mapping[cid] = parent
        parents[outer.r] = mapping
    return RefinementTree(R=R, radii=[p.r for p in partitions], parents=parents)


@dataclasses.dataclass
class EndActionReport:
    g: NormalForm
    g_text: str
    r: int
    R: int
    permutation: List[int]
    defined: bool
    fixes_all: bool


def _norm_in_ball(ball: BallGraph, g: NormalForm) -> int:
    norm = ball.norm(g)
    if norm is None:
        raise ArgumentError(f"{g!r} is not inside the ball of radius {ball.R}")
    return norm


def _probe(ball: BallGraph, partition: ComponentPartition, cid: int, norm: int) -> int:
    at_norm = [i for i in partition.members[cid] if ball.radius[i] == norm]
    if not at_norm:
        raise ConsistencyError(f"component {cid} has no vertex of norm {norm}")
    # spheres are payload-sorted, so the smallest index is the smallest payload
    return at_norm[0]


def end_action(
    ball: BallGraph,
    oracle: GroupOracle,
    r: int,
    g: NormalForm,
    partition: Optional[ComponentPartition] = None,
) -> EndActionReport:
    """
    How left multiplication by g permutes the touching components at (r, ball.R)
    """
    gnorm = _norm_in_ball(ball, g)
    if gnorm + r + 1 > ball.R:
        raise ArgumentError(f"|g|+r+1={gnorm + r + 1} exceeds the ball radius {ball.R}")
    if partition is None:
        partition = annulus_components(ball, r)
    position = {cid: k for k, cid in enumerate(partition.touching)}
    permutation = []
    for cid in partition.touching:
        probe = _probe(ball, partition, cid, ball.R - gnorm)
        image = ball.index.get(oracle.product(g, ball.vertices[probe]))
        if image is None:
            raise ConsistencyError("translated probe left the ball")
        target = partition.assignment.get(image)
        if target is None:
            raise ConsistencyError(f"translated probe of component {cid} left the annulus")
        permutation.append(position.get(target, -1))
    defined = sorted(permutation) == list(range(len(permutation)))
    if not defined:
        logger.warning(f"{oracle.format_vertex(g)} does not permute the touching components at r={r}")
    return EndActionReport(
        g=g,
        g_text=oracle.format_vertex(g),
        r=r,
        R=ball.R,
        permutation=permutation,
        defined=defined,
        fixes_all=defined and permutation == list(range(len(permutation))),
    )


def image_group(perms: Sequence[Sequence[int]], size: int) -> PermutationGroup:
    """
    The permutation group on range(size) generated by perms
    """
    if size == 0 or not perms:
        return PermutationGroup([Permutation([], size=max(size, 1))])
    return PermutationGroup([Permutation(list(p), size=size) for p in perms])


@dataclasses.dataclass
class StabilizerReport:
    r: int
    R: int
    components: int
    actions: List[EndActionReport]
    image_order: Optional[int]
    stabilizer_index: Optional[int]
    fixing_generators: List[str]


def end_stabilizer_report(
    oracle: GroupOracle, ball: BallGraph, r: int, image_limit: int = IMAGE_ORDER_LIMIT
) -> StabilizerReport:
    """
    Image of the group in the permutations of the touching components; the
    stabilizer at (r, R) is the kernel, its index the order of the image.
    image_order is None when an action is undefined or the image exceeds image_limit.
    """
    partition = annulus_components(ball, r)
    actions = [end_action(ball, oracle, r, oracle.generator(i), partition) for i in range(oracle.generator_count)]
    order = None
    if all(a.defined for a in actions):
        image = image_group([a.permutation for a in actions], partition.e)
        order = int(image.order())
        if order > image_limit:
            logger.warning(f"image of order {order} exceeds {image_limit} at r={r}")
            order = None
    return StabilizerReport(
        r=r,
        R=ball.R,
        components=partition.e,
        actions=actions,
        image_order=order,
        stabilizer_index=order,
        fixing_generators=[generator_name(i) for i, a in enumerate(actions) if a.fixes_all],
    )


def two_ended_type(report: StabilizerReport) -> Optional[str]:
    """
    "cyclic" for finite-by-Z, "dihedral" for finite-by-(Z2*Z2)
    """
    if report.components != 2:
        return None
    return {1: "cyclic", 2: "dihedral"}.get(report.stabilizer_index or 0)


@dataclasses.dataclass
class AlmostInvarianceReport:
    component: int
    g: NormalForm
    g_text: str
    difference: List[NormalForm]
    max_norm: int
    bound: int
    checked_radius: int
    verdict: str


def almost_invariant_check(
    oracle: GroupOracle, ball: BallGraph, partition: ComponentPartition, V: int, g: NormalForm
) -> AlmostInvarianceReport:
    """
    Elements of (V g) symmetric-difference V among the products that stay in the ball
    """
    gnorm = _norm_in_ball(ball, g)
    if gnorm + partition.r >= ball.R:
        raise ArgumentError(f"|g|+r={gnorm + partition.r} must stay below the ball radius {ball.R}")
    members = set(partition.members[V])
    difference = set()
    checked = ball.R - gnorm
    for i in ball.within(checked):
        j = ball.index[oracle.product(ball.vertices[i], g)]
        if (i in members) != (j in members):
            difference.add(j)
    max_norm = max((ball.radius[j] for j in difference), default=0)
    bound = partition.r + gnorm
    return AlmostInvarianceReport(
        component=V,
        g=g,
        g_text=oracle.format_vertex(g),
        difference=[ball.vertices[j] for j in sorted(difference)],
        max_norm=max_norm,
        bound=bound,
        checked_radius=checked,
        verdict="bounded" if max_norm <= bound else "unbounded-evidence",
    )


@dataclasses.dataclass
class NestingReport:
    component: int
    nested_in: int
    nested_out: int
    exceptional: List[str]
    max_exceptional_norm: int


def nesting_dichotomy_check(
    oracle: GroupOracle, ball: BallGraph, partition: ComponentPartition, V: int, max_candidates: int = 200
) -> NestingReport:
    """
    For g in V: is g V inside V, or is the complement of V inside g V?
    Checked on the vertices that stay inside the ball after translation.
    """
    members = set(partition.members[V])
    candidates = [i for i in partition.members[V] if ball.radius[i] <= ball.R // 2][:max_candidates]
    nested_in = nested_out = 0
    exceptional = []
    max_norm = 0
    for i in candidates:
        g = ball.vertices[i]
        g_inv = oracle.inverse(g)
        reach = ball.within(ball.R - ball.radius[i])
        inside = all(ball.index[oracle.product(g, ball.vertices[v])] in members for v in reach if v in members)
        outside = all(ball.index[oracle.product(g_inv, ball.vertices[u])] in members for u in reach if u not in members)
        nested_in += inside
        nested_out += outside
        if not (inside or outside):
            exceptional.append(oracle.format_vertex(g))
            max_norm = max(max_norm, ball.radius[i])
    return NestingReport(
        component=V,
        nested_in=nested_in,
        nested_out=nested_out,
        exceptional=exceptional,
        max_exceptional_norm=max_norm,
    )


@dataclasses.dataclass
class MultiplicativeEndsReport:
    r: int
    R: int
    verdict: str
    witness: Optional[str] = None
    witness_order: Optional[int] = None
    product_violations: List[str] = dataclasses.field(default_factory=list)
    checked_vertices: int = 0
    checked_pairs: int = 0


def _order_upto(oracle: GroupOracle, g: NormalForm, limit: int) -> Optional[int]:
    x, k = g, 1
    while x != oracle.identity:
        if k >= limit:
            return None
        x = oracle.product(x, g)
        k += 1
    return k


def multiplicative_ends_test(
    oracle: GroupOracle,
    r: int,
    R: int,
    ball: Optional[BallGraph] = None,
    samples: int = 200,
    seed: int = 0,
    budget: int = DEFAULT_VERTEX_BUDGET,
) -> MultiplicativeEndsReport:
    """
    PASS when no annulus vertex shares its touching component with its
    inverse and sampled products of equivalent vertices stay in their component
    """
    if R < 2 * r + 4:
        raise ArgumentError(f"R must be at least 2*r+4={2 * r + 4}, got {R}")
    if ball is None or ball.R != R:
        ball = build_ball(oracle, R, budget=budget)
    partition = annulus_components(ball, r)
    report = MultiplicativeEndsReport(r=r, R=R, verdict="PASS")
    touching = set(partition.touching)
    for i in _annulus_range(ball, r, R):
        cid = partition.assignment[i]
        if cid not in touching:
            continue
        report.checked_vertices += 1
        j = ball.index.get(oracle.inverse(ball.vertices[i]))
        if j is not None and partition.assignment.get(j) == cid:
            report.verdict = "FAIL"
            report.witness = oracle.format_vertex(ball.vertices[i])
            report.witness_order = _order_upto(oracle, ball.vertices[i], 64)
            break

    rng = random.Random(seed)
    for cid in partition.touching:
        comp = partition.members[cid]
        for _ in range(samples):
            v, w = rng.choice(comp), rng.choice(comp)
            k = ball.index.get(oracle.product(ball.vertices[v], ball.vertices[w]))
            if k is None:
                continue
            report.checked_pairs += 1
            if partition.assignment.get(k) != cid:
                report.product_violations.append(
                    f"{oracle.format_vertex(ball.vertices[v])}*{oracle.format_vertex(ball.vertices[w])}"
                )
    if report.product_violations:
        report.verdict = "FAIL"
    logger.info(f"{oracle.name}: multiplicative ends {report.verdict}")
    return report


def _candidates(ball: BallGraph, lo: int, hi: int) -> List[int]:
    """
    Vertex indices with lo <= |v| <= hi, ordered by norm then geodesic word
    """
    start = ball.sphere(max(lo, 0)).start
    stop = ball.within(hi).stop
    return sorted(range(start, stop), key=lambda i: (ball.radius[i], word_key(ball.geodesic_word(i))))


def _has_infinite_order(oracle: GroupOracle, g: NormalForm, powers: int) -> bool:
    seen = {oracle.identity}
    x = g
    for _ in range(max(powers, 2)):
        if x in seen:
            return False
        seen.add(x)
        x = oracle.product(x, g)
    return True


@dataclasses.dataclass
class VirtuallyZWitness:
    g: NormalForm
    g_text: str
    component: int
    index_estimate: int
    coset_representatives: List[str]
    radii: Tuple[int, int]


def _translates_into(oracle: GroupOracle, ball: BallGraph, members: Set[int], g: NormalForm, gnorm: int) -> bool:
    for v in sorted(members):
        if ball.radius[v] > ball.R - gnorm:
            continue
        if ball.index[oracle.product(g, ball.vertices[v])] not in members:
            return False
    return True


def _coset_counts(oracle: GroupOracle, ball: BallGraph, g: NormalForm, gnorm: int):
    """
    Right cosets <g>x met inside growing balls: x ~ g x
    """
    uf = UnionFind(range(len(ball)))
    for x in ball.within(ball.R - gnorm):
        uf.union(x, ball.index[oracle.product(g, ball.vertices[x])])
    counts = []
    for rho in range(ball.R // 2 + 1):
        classes: Dict[int, int] = {}
        for x in ball.within(rho):
            classes.setdefault(uf[x], x)
        counts.append(classes)
    return counts


def virtually_z_witness(
    oracle: GroupOracle,
    r: int,
    R: int,
    ball: Optional[BallGraph] = None,
    search_bound: Optional[int] = None,
    max_candidates: int = 500,
    budget: int = DEFAULT_VERTEX_BUDGET,
) -> Optional[VirtuallyZWitness]:
    """
    Look for g of infinite order fixing both ends with g V inside V for one
    of the two components V, then count right cosets of <g> in the ball
    """
    if ball is None or ball.R != R:
        ball = build_ball(oracle, R, budget=budget)
    partition = annulus_components(ball, r)
    if partition.e != 2:
        logger.warning(f"{oracle.name}: {partition.e} touching components at ({r}, {R}), expected 2")
        return None
    # g moves the sphere of norm R - |g| to norm >= R - 2|g|, which has to stay outside B(r)
    bound = min(search_bound or R, (R - r - 1) // 2)
    for i in _candidates(ball, 1, bound)[:max_candidates]:
        g = ball.vertices[i]
        gnorm = ball.radius[i]
        try:
            action = end_action(ball, oracle, r, g, partition)
        except ConsistencyError as e:
            logger.debug(f"{oracle.name}: skipping {oracle.format_vertex(g)}: {e}")
            continue
        if not action.fixes_all:
            continue
        if not _has_infinite_order(oracle, g, R // gnorm):
            continue
        for cid in partition.touching:
            if not _translates_into(oracle, ball, set(partition.members[cid]), g, gnorm):
                continue
            counts = _coset_counts(oracle, ball, g, gnorm)
            for rho in range(gnorm, len(counts) - 1):
                if len(counts[rho]) == len(counts[rho + 1]):
                    reps = sorted(counts[rho].values())
                    witness = VirtuallyZWitness(
                        g=g,
                        g_text=oracle.format_vertex(g),
                        component=cid,
                        index_estimate=len(reps),
                        coset_representatives=[oracle.format_vertex(ball.vertices[x]) for x in reps],
                        radii=(rho, rho + 1),
                    )
                    logger.info(f"{oracle.name}: <{witness.g_text}> has index {witness.index_estimate}")
                    return witness
            logger.debug(f"{oracle.name}: coset count for {oracle.format_vertex(g)} did not stabilize")
    logger.warning(f"{oracle.name}: no virtually-Z witness among {max_candidates} candidates of norm <= {bound}")
    return None


def central_infinite_order_search(
    oracle: GroupOracle, R: int, ball: Optional[BallGraph] = None, budget: int = DEFAULT_VERTEX_BUDGET
) -> Optional[NormalForm]:
    """
    Element of minimal norm commuting with every generator whose powers up
    to R/|g| are pairwise distinct
    """
    if R < 4:
        raise ArgumentError(f"R must be at least 4, got {R}")
    if ball is None or ball.R != R:
        ball = build_ball(oracle, R, budget=budget)
    gens = oracle.generators()
    for i in _candidates(ball, 1, R // 2):
        g = ball.vertices[i]
        if any(oracle.product(g, s) != oracle.product(s, g) for s in gens):
            continue
        if _has_infinite_order(oracle, g, R // ball.radius[i]):
            logger.info(f"{oracle.name}: central element {oracle.format_vertex(g)} of infinite order")
            return g
    return None


@dataclasses.dataclass
class EquivalenceReport:
    r: int
    R: int
    two_ends_and_stabilizer: bool
    inverse_separation: bool
    central_cyclic: bool

    @property
    def agree(self) -> bool:
        return self.two_ends_and_stabilizer == self.inverse_separation == self.central_cyclic


def multiplicative_ends_equivalence(
    oracle: GroupOracle,
    r: int,
    R: int,
    ball: Optional[BallGraph] = None,
    budget: int = DEFAULT_VERTEX_BUDGET,
) -> EquivalenceReport:
    """
    Evaluate three equivalent conditions for multiplicative ends on one ball
    """
    if ball is None or ball.R != R:
        ball = build_ball(oracle, R, budget=budget)
    stabilizer = end_stabilizer_report(oracle, ball, r)
    two_fixed = stabilizer.components == 2 and stabilizer.stabilizer_index == 1
    separated = multiplicative_ends_test(oracle, r, R, ball=ball).verdict == "PASS"
    central = stabilizer.components == 2 and central_infinite_order_search(oracle, R, ball=ball) is not None
    return EquivalenceReport(
        r=r, R=R, two_ends_and_stabilizer=two_fixed, inverse_separation=separated, central_cyclic=central
    )
