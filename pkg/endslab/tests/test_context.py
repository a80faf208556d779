#  SPDX-FileCopyrightText: 2026 endslab contributors
#  SPDX-License-Identifier: GPL-3.0-or-later

import pathlib
import pytest
from pydantic import ValidationError

from endslab import config
from endslab import context
from endslab.common import SpecSyntaxError
from endslab.groups import SemidirectFiniteByZ


curdir = pathlib.Path(__file__).parent.resolve()


@pytest.mark.parametrize(
    "request_path",
    [
        "fixtures/request1.yaml",
    ],
)
def test_context_from_file(request_path):
    """
    Create a Context object from a given request file
    """
    ctx = context.Context.from_file(curdir / request_path)
    assert ctx.base_dir == (curdir / request_path).parent
    assert ctx.request.r_max == 4
    assert ctx.request.R_max == 12
    assert ctx.request.analyses == ["profile", "stabilizer"]
    assert ctx.request.output == "table"
    assert not ctx.is_relative
    # table(s3.table) is found next to the request file
    assert isinstance(ctx.graph, SemidirectFiniteByZ)
    assert ctx.graph is ctx.graph


def test_context_from_file_invalid():
    with pytest.raises(ValidationError):
        context.Context.from_file(curdir / "fixtures/request-invalid.yaml")


def test_context_bad_spec():
    with pytest.raises(SpecSyntaxError):
        context.Context(config.AnalysisRequest(spec="product(Z"))


def test_context_relative():
    ctx = context.Context(config.AnalysisRequest(spec="rel(free(2), [a])"))
    assert ctx.is_relative


def test_request_defaults():
    req = config.AnalysisRequest(spec="Z")
    assert (req.r_max, req.R_max) == (3, 10)
    assert req.analyses == ["profile"]
    assert req.output == "json"
    assert req.budget.vertices == 5_000_000
    assert req.workers is None


@pytest.mark.parametrize(
    "fields",
    [
        {"r_max": 3, "R_max": 9},
        {"r_max": 0},
        {"analyses": ["ends"]},
        {"output": "yaml"},
        {"budget": {"vertices": 0}},
        {"workers": 0},
    ],
)
def test_request_invalid(fields):
    with pytest.raises(ValidationError):
        config.AnalysisRequest(spec="Z", **fields)


def test_request_orders_analyses():
    req = config.AnalysisRequest(spec="Z", analyses=["vz_witness", "profile", "action"])
    assert req.ordered_analyses() == ["profile", "action", "vz_witness"]
