#  SPDX-FileCopyrightText: 2026 endslab contributors
#  SPDX-License-Identifier: GPL-3.0-or-later

import logging
import pathlib
from typing import Any, Dict, Optional

import endslab
from endslab.common import BallOverflowError, generator_name, generator_names
from endslab.config import GROUP_ONLY_ANALYSES, AnalysisRequest
from endslab.context import Context
from endslab.dsl import format_spec
from endslab.ends import (
    EndsProfile,
    almost_invariant_check,
    annulus_components,
    central_infinite_order_search,
    end_action,
    end_stabilizer_report,
    ends_profile,
    multiplicative_ends_equivalence,
    multiplicative_ends_test,
    nesting_dichotomy_check,
    two_ended_type,
    virtually_z_witness,
)
from endslab.graphs import BallGraph, LatticeCosetOracle, build_ball
from endslab.groups import GroupOracle
from endslab.report import ActionEntry, BudgetUsage, ProfileCell, ReportDocument

logger = logging.getLogger(__name__)

# almost invariance is checked on this many touching components
ALMOST_INVARIANCE_COMPONENTS = 4
# violations listed in the report
LISTED_VIOLATIONS = 10


class Analysis:
    """
    Runs the analyses of a request on one ball and assembles the report
    """

    def __init__(self, ctx: Context):
        self.ctx = ctx
        self.request = ctx.request
        self.profile: Optional[EndsProfile] = None

    @property
    def oracle(self) -> GroupOracle:
        graph = self.ctx.graph
        assert isinstance(graph, GroupOracle)
        return graph

    def run(self) -> ReportDocument:
        req = self.request
        graph = self.ctx.graph
        report = ReportDocument(
            group=format_spec(self.ctx.ast),
            generators=list(generator_names(graph.generator_count)),
            budget=BudgetUsage(vertices=req.budget.vertices),
            version=endslab.__version__,
        )
        try:
            ball = build_ball(graph, req.R_max, budget=req.budget.vertices, workers=req.workers)
        except BallOverflowError as e:
            logger.warning(f"{graph.name}: {e}")
            report.budget.complete = False
            report.budget.overflow_radius = e.radius
            self._partial_profile(report, e.radius - 1)
            return report
        report.budget.used = len(ball)

        skipped: Dict[str, str] = {}
        for name in req.ordered_analyses():
            if name in GROUP_ONLY_ANALYSES and self.ctx.is_relative:
                skipped[name] = "needs a group, rel(...) describes a coset graph"
                continue
            if name == "relative" and not self.ctx.is_relative:
                skipped[name] = "needs a rel(...) spec"
                continue
            logger.info(f"running {name} on {report.group}")
            getattr(self, f"_{name}")(report, ball)
        if skipped:
            report.witnesses["skipped"] = skipped
        return report

    def _fill_profile(self, report: ReportDocument, profile: EndsProfile) -> None:
        self.profile = profile
        report.profile = [ProfileCell(r=r, R=R, e=e) for r, R, e in profile.cells()]
        report.classification = profile.classification
        report.stable_e = profile.stable_e
        r, (lo, hi) = profile.witness_radii
        report.witnesses["profile"] = {
            "witness_radii": {"r": r, "R": [lo, hi]},
            "sphere_sizes": profile.sphere_sizes,
        }

    def _partial_profile(self, report: ReportDocument, radius: int) -> None:
        """
        Profile on the largest ball that fit into the budget
        """
        req = self.request
        if "profile" not in req.analyses and "relative" not in req.analyses:
            return
        r_max = min(req.r_max, (radius - 4) // 2)
        if r_max < 1:
            return
        ball = build_ball(self.ctx.graph, radius, budget=req.budget.vertices, workers=req.workers)
        report.budget.used = len(ball)
        self._fill_profile(report, ends_profile(self.ctx.graph, r_max, radius, ball=ball))
        report.witnesses["partial_profile"] = {"r_max": r_max, "R_max": radius}

    def _profile(self, report: ReportDocument, ball: BallGraph) -> None:
        self._fill_profile(report, ends_profile(self.ctx.graph, self.request.r_max, self.request.R_max, ball=ball))

    def _action(self, report: ReportDocument, ball: BallGraph) -> None:
        oracle = self.oracle
        r = self.request.r_max
        partition = annulus_components(ball, r)
        for i in range(oracle.generator_count):
            action = end_action(ball, oracle, r, oracle.generator(i), partition)
            report.actions.append(
                ActionEntry(g=generator_name(i), perm=action.permutation, fixes_all=action.fixes_all)
            )

    def _stabilizer(self, report: ReportDocument, ball: BallGraph) -> None:
        stabilizer = end_stabilizer_report(self.oracle, ball, self.request.r_max)
        report.witnesses["stabilizer"] = {
            "r": stabilizer.r,
            "R": stabilizer.R,
            "components": stabilizer.components,
            "image_order": stabilizer.image_order,
            "stabilizer_index": stabilizer.stabilizer_index,
            "fixing_generators": stabilizer.fixing_generators,
            "two_ended_type": two_ended_type(stabilizer),
        }

    def _multiplicative(self, report: ReportDocument, ball: BallGraph) -> None:
        req = self.request
        test = multiplicative_ends_test(self.oracle, req.r_max, req.R_max, ball=ball, seed=req.seed)
        equivalence = multiplicative_ends_equivalence(self.oracle, req.r_max, req.R_max, ball=ball)
        report.witnesses["multiplicative"] = {
            "verdict": test.verdict,
            "witness": test.witness,
            "witness_order": test.witness_order,
            "product_violations": test.product_violations[:LISTED_VIOLATIONS],
            "checked_vertices": test.checked_vertices,
            "checked_pairs": test.checked_pairs,
            "equivalence": {
                "two_ends_and_stabilizer": equivalence.two_ends_and_stabilizer,
                "inverse_separation": equivalence.inverse_separation,
                "central_cyclic": equivalence.central_cyclic,
                "agree": equivalence.agree,
            },
        }

    def _vz_witness(self, report: ReportDocument, ball: BallGraph) -> None:
        req = self.request
        oracle = self.oracle
        witness = virtually_z_witness(
            oracle, req.r_max, req.R_max, ball=ball, max_candidates=req.budget.witness_candidates
        )
        entry: Dict[str, Any] = {"found": witness is not None}
        if witness is not None:
            entry.update(
                {
                    "g": witness.g_text,
                    "component": witness.component,
                    "index_estimate": witness.index_estimate,
                    "coset_representatives": witness.coset_representatives,
                    "radii": list(witness.radii),
                }
            )
        central = central_infinite_order_search(oracle, req.R_max, ball=ball)
        entry["central"] = None if central is None else oracle.format_vertex(central)
        report.witnesses["vz_witness"] = entry

    def _almost_invariance(self, report: ReportDocument, ball: BallGraph) -> None:
        oracle = self.oracle
        partition = annulus_components(ball, self.request.r_max)
        checks = []
        for cid in partition.touching[:ALMOST_INVARIANCE_COMPONENTS]:
            for i in range(oracle.generator_count):
                check = almost_invariant_check(oracle, ball, partition, cid, oracle.generator(i))
                checks.append(
                    {
                        "component": cid,
                        "g": generator_name(i),
                        "verdict": check.verdict,
                        "difference": len(check.difference),
                        "max_norm": check.max_norm,
                        "bound": check.bound,
                    }
                )
            nesting = nesting_dichotomy_check(oracle, ball, partition, cid)
            checks.append(
                {
                    "component": cid,
                    "nested_in": nesting.nested_in,
                    "nested_out": nesting.nested_out,
                    "exceptional": nesting.exceptional[:LISTED_VIOLATIONS],
                    "max_exceptional_norm": nesting.max_exceptional_norm,
                }
            )
        report.witnesses["almost_invariance"] = checks

    def _relative(self, report: ReportDocument, ball: BallGraph) -> None:
        if self.profile is None:
            self._profile(report, ball)
        graph = self.ctx.graph
        assert self.profile is not None
        report.witnesses["relative"] = {
            "classification": self.profile.classification,
            "index": graph.index() if isinstance(graph, LatticeCosetOracle) else None,
        }


def run(request: AnalysisRequest, base_dir: Optional[pathlib.Path] = None) -> ReportDocument:
    """
    Run the analyses selected in request in dependency order
    """
    return Analysis(Context(request, base_dir)).run()
