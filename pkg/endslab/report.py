#  SPDX-FileCopyrightText: 2026 endslab contributors
#  SPDX-License-Identifier: GPL-3.0-or-later

"""
The report document written by analyze, and its plain table rendering
"""

import json
from typing import Any, Dict, List, Optional
from pydantic import BaseModel, Field


class ProfileCell(BaseModel):
    r: int
    R: int
    e: int


class ActionEntry(BaseModel):
    """
    Permutation of the touching components induced by left multiplication with g
    """

    g: str
    perm: List[int]
    fixes_all: bool


class BudgetUsage(BaseModel):
    vertices: int = Field(description="The vertex budget of the run")
    used: int = Field(description="Vertices of the largest ball built", default=0)
    complete: bool = Field(description="False when the budget stopped the run", default=True)
    overflow_radius: Optional[int] = Field(description="Radius at which the budget overflowed", default=None)


class ReportDocument(BaseModel):
    group: str
    generators: List[str]
    profile: List[ProfileCell] = []
    classification: Optional[str] = None
    stable_e: Optional[int] = None
    actions: List[ActionEntry] = []
    witnesses: Dict[str, Any] = {}
    budget: BudgetUsage
    version: str

    def to_json(self) -> str:
        return self.model_dump_json(indent=2) + "\n"


def render_table(report: ReportDocument) -> str:
    """
    e(r, R) as a grid with one row per r, followed by the other findings
    """
    lines = [f"group: {report.group}", f"generators: {', '.join(report.generators)}"]
    if report.profile:
        rs = sorted({c.r for c in report.profile})
        Rs = sorted({c.R for c in report.profile})
        cells = {(c.r, c.R): c.e for c in report.profile}
        width = max(len(str(x)) for x in list(cells.values()) + Rs) + 1
        lines.append("r\\R " + "".join(f"{R:>{width}}" for R in Rs))
        for r in rs:
            lines.append(f"{r:<3} " + "".join(f"{cells[(r, R)]:>{width}}" for R in Rs))
    lines.append(f"classification: {report.classification}")
    lines.append(f"stable_e: {report.stable_e}")
    for a in report.actions:
        lines.append(f"action {a.g}: {a.perm}{' (fixes all)' if a.fixes_all else ''}")
    for key, value in report.witnesses.items():
        lines.append(f"{key}: {json.dumps(value, sort_keys=True)}")
    if not report.budget.complete:
        lines.append(f"incomplete: vertex budget {report.budget.vertices} hit at radius {report.budget.overflow_radius}")
    return "\n".join(lines) + "\n"
