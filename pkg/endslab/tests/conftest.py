#  SPDX-FileCopyrightText: 2026 endslab contributors
#  SPDX-License-Identifier: GPL-3.0-or-later

import pathlib
import pytest

from endslab import groups
from endslab.words import parse_word


curdir = pathlib.Path(__file__).parent.resolve()


@pytest.fixture
def fixtures_dir():
    return curdir / "fixtures"


@pytest.fixture
def s3_table(fixtures_dir):
    """
    The symmetric group on three letters as r^i s^j, index i + 3j
    """
    return groups.load_table(fixtures_dir / "s3.table")


@pytest.fixture
def s3(s3_table):
    return groups.FiniteGroup(s3_table)


@pytest.fixture
def word():
    """
    Parse a word over a 26 letter alphabet
    """
    return lambda text: parse_word(text, 26)
