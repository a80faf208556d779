#  SPDX-FileCopyrightText: 2026 endslab contributors
#  SPDX-License-Identifier: GPL-3.0-or-later

import logging
import pathlib
from typing import Optional, Union

import yaml
from pydantic import ValidationError

from endslab.config import AnalysisRequest
from endslab.dsl import GroupSpecAst, Rel, build_graph, parse_spec
from endslab.words import RootedGraph

logger = logging.getLogger(__name__)


class Context:
    """
    Context holds the request, its parsed group spec and the graph built
    from it
    """

    def __init__(self, request: AnalysisRequest, base_dir: Optional[pathlib.Path] = None):
        self._request = request
        # relative table(...) paths are resolved against this directory
        self._base_dir = base_dir
        self._ast = parse_spec(request.spec)
        self._graph: Optional[RootedGraph] = None
        logger.debug(f"request loaded as: {request.model_dump()}")

    @classmethod
    def from_file(cls, path: Union[str, pathlib.Path]) -> "Context":
        path = pathlib.Path(path).resolve()
        with open(path, "r") as f:
            y = yaml.safe_load(f.read())
        try:
            request = AnalysisRequest(**(y or {}))
        except ValidationError as e:
            logger.error(f"invalid request file {path}: {e.errors()}")
            raise
        return cls(request, path.parent)

    @property
    def request(self) -> AnalysisRequest:
        return self._request

    @property
    def base_dir(self) -> Optional[pathlib.Path]:
        return self._base_dir

    @property
    def ast(self) -> GroupSpecAst:
        return self._ast

    @property
    def is_relative(self) -> bool:
        return isinstance(self._ast, Rel)

    @property
    def graph(self) -> RootedGraph:
        if self._graph is None:
            self._graph = build_graph(self._ast, self._base_dir)
        return self._graph
