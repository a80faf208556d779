#  SPDX-FileCopyrightText: 2026 endslab contributors
#  SPDX-License-Identifier: GPL-3.0-or-later

import logging
import multiprocessing
import os
import string
from typing import Iterable, Optional, Tuple


logger = logging.getLogger(__name__)

THREADS_ENV = "ENDS_LAB_THREADS"


class EndsLabError(Exception):
    """
    Base class for all endslab errors
    """


class MalformedWordError(EndsLabError, ValueError):
    """
    A word or symbol does not fit the generator alphabet of an oracle
    """


class GroupValidationError(EndsLabError, ValueError):
    """
    Input data does not describe the group (or map) it claims to describe
    """


class ArgumentError(EndsLabError, ValueError):
    """
    Radius or margin preconditions of an analysis are violated
    """


class ConsistencyError(EndsLabError, RuntimeError):
    """
    An internal invariant failed; this is a bug, not bad input
    """


class BallOverflowError(EndsLabError):
    """
    Ball construction exceeded the vertex budget
    """

    def __init__(self, radius: int, vertices: int, budget: int):
        super().__init__(f"vertex budget {budget} exceeded at radius {radius} ({vertices} vertices)")
        self.radius = radius
        self.vertices = vertices
        self.budget = budget


class SpecError(EndsLabError):
    """
    Base for group-spec DSL errors; carries a source position
    """

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{line}:{column}: {message}")
        self.message = message
        self.line = line
        self.column = column


class SpecSyntaxError(SpecError):
    def __init__(self, message: str, line: int, column: int, expected: Iterable[str] = ()):
        self.expected: Tuple[str, ...] = tuple(sorted(set(expected)))
        if self.expected:
            message = f"{message} (expected one of: {', '.join(self.expected)})"
        super().__init__(message, line, column)


class SpecConstraintError(SpecError):
    pass


def worker_count(env: Optional[dict] = None) -> int:
    """
    Number of workers to use, bounded by ENDS_LAB_THREADS if set
    """
    env = os.environ if env is None else env
    value = env.get(THREADS_ENV)
    if value is None:
        return multiprocessing.cpu_count()
    try:
        count = int(value)
    except ValueError:
        logger.warning(f"{THREADS_ENV}={value!r} is not an integer, using a single worker")
        return 1
    if count < 1:
        logger.warning(f"{THREADS_ENV}={value!r} is not positive, using a single worker")
        return 1
    return count


def generator_name(index: int) -> str:
    if index < len(string.ascii_lowercase):
        return string.ascii_lowercase[index]
    return f"g{index}"


def generator_names(count: int) -> Tuple[str, ...]:
    return tuple(generator_name(i) for i in range(count))
