#  SPDX-FileCopyrightText: 2026 endslab contributors
#  SPDX-License-Identifier: GPL-3.0-or-later

from typing import List, Literal, Optional
from pydantic import BaseModel, Field, model_validator

from endslab.graphs import DEFAULT_VERTEX_BUDGET

# dependency order; analyze runs the selected ones in this order
ANALYSES = ("profile", "action", "stabilizer", "multiplicative", "vz_witness", "almost_invariance", "relative")
GROUP_ONLY_ANALYSES = ("action", "stabilizer", "multiplicative", "vz_witness", "almost_invariance")

AnalysisName = Literal["profile", "action", "stabilizer", "multiplicative", "vz_witness", "almost_invariance", "relative"]
OutputFormat = Literal["json", "table", "dot"]


class Budget(BaseModel):
    """
    Resource limits of one analysis run
    """

    vertices: int = Field(description="Maximal number of ball vertices", default=DEFAULT_VERTEX_BUDGET, gt=0)
    search_length: int = Field(
        description="Maximal word length when translating between generating sets", default=8, gt=0
    )
    witness_candidates: int = Field(description="Maximal number of candidates for witness searches", default=500, gt=0)


class AnalysisRequest(BaseModel):
    """
    The base request: a group spec and the analyses to run on it
    """

    spec: str = Field(description="Group spec, e.g. product(free(2), Z)")
    r_max: int = Field(description="Largest inner radius", default=3, ge=1)
    R_max: int = Field(description="Largest outer radius, at least 2*r_max+4", default=10)
    analyses: List[AnalysisName] = Field(description="Analyses to run", default=["profile"])
    output: OutputFormat = Field(description="Output format", default="json")
    budget: Budget = Field(description="Optional resource limits", default_factory=Budget)
    seed: int = Field(description="Seed for sampled checks", default=0)
    workers: Optional[int] = Field(description="Optional worker count, overrides ENDS_LAB_THREADS", default=None, gt=0)

    @model_validator(mode="after")
    def _check_margin(self) -> "AnalysisRequest":
        if self.R_max < 2 * self.r_max + 4:
            raise ValueError(f"R_max must be at least 2*r_max+4={2 * self.r_max + 4}, got {self.R_max}")
        return self

    def ordered_analyses(self) -> List[str]:
        selected = set(self.analyses)
        return [a for a in ANALYSES if a in selected]
