#  SPDX-FileCopyrightText: 2026 endslab contributors
#  SPDX-License-Identifier: GPL-3.0-or-later

"""
The group spec language: a small LL(1) grammar of group constructors

    term := "Z" | "Z^" INT | "free(" INT ")" | "cyclic(" INT ")" | "table(" PATH ")"
          | "product(" term "," term ")" | "semidirect_fz(" term "," INT ")"
          | "semidirect_zf(" term ")" | "amalgam(" term "," term "," INT ")"
          | "hnn(" term "," INT ["," INT] ")" | "quotient(" term "," "[" words "]" ")"
          | "rel(" term "," "[" items "]" ")" | "gens(" term "," "[" words "]" ")"
"""

import dataclasses
import json
import logging
import math
import pathlib
import re
from typing import Iterator, List, Optional, Tuple, Union

from endslab.common import EndsLabError, SpecConstraintError, SpecSyntaxError
from endslab.graphs import LatticeCosetOracle, FreeCosetOracle, subgroup_automaton
from endslab.groups import (
    FiniteGroup,
    FreeAbelianGroup,
    FreeGroup,
    GroupOracle,
    build_product,
    build_quotient_by_finite_normal,
    build_semidirect_Z_by_finite,
    build_semidirect_finite_by_Z,
    cyclic,
    finite_subgroup,
    load_table,
    power_map,
    sign_action,
)
from endslab.normal_forms import AmalgamGroup, HnnGroup, amalgam_over_cyclic, hnn_over_cyclic
from endslab.qi import change_generators
from endslab.words import RootedGraph, Word, check_word, format_word, parse_word

logger = logging.getLogger(__name__)

# words are parsed against the full letter alphabet and checked against the
# group once it is built
_LETTERS = 26

Position = Tuple[int, int]
_NOWHERE: Position = (0, 0)


@dataclasses.dataclass(frozen=True)
class FreeAbelian:
    rank: int
    pos: Position = dataclasses.field(default=_NOWHERE, compare=False, repr=False)


@dataclasses.dataclass(frozen=True)
class Free:
    rank: int
    pos: Position = dataclasses.field(default=_NOWHERE, compare=False, repr=False)


@dataclasses.dataclass(frozen=True)
class Cyclic:
    order: int
    pos: Position = dataclasses.field(default=_NOWHERE, compare=False, repr=False)


@dataclasses.dataclass(frozen=True)
class Table:
    path: str
    pos: Position = dataclasses.field(default=_NOWHERE, compare=False, repr=False)


@dataclasses.dataclass(frozen=True)
class Product:
    left: "GroupSpecAst"
    right: "GroupSpecAst"
    pos: Position = dataclasses.field(default=_NOWHERE, compare=False, repr=False)


@dataclasses.dataclass(frozen=True)
class SemidirectFZ:
    finite: "GroupSpecAst"
    k: int
    pos: Position = dataclasses.field(default=_NOWHERE, compare=False, repr=False)


@dataclasses.dataclass(frozen=True)
class SemidirectZF:
    finite: "GroupSpecAst"
    pos: Position = dataclasses.field(default=_NOWHERE, compare=False, repr=False)


@dataclasses.dataclass(frozen=True)
class Amalgam:
    left: "GroupSpecAst"
    right: "GroupSpecAst"
    d: int
    pos: Position = dataclasses.field(default=_NOWHERE, compare=False, repr=False)


@dataclasses.dataclass(frozen=True)
class Hnn:
    base: "GroupSpecAst"
    d: int
    exponent: int = 1
    pos: Position = dataclasses.field(default=_NOWHERE, compare=False, repr=False)


@dataclasses.dataclass(frozen=True)
class Quotient:
    group: "GroupSpecAst"
    words: Tuple[Word, ...]
    pos: Position = dataclasses.field(default=_NOWHERE, compare=False, repr=False)


@dataclasses.dataclass(frozen=True)
class Rel:
    group: "GroupSpecAst"
    items: Tuple[Union[Word, Tuple[int, ...]], ...]
    vectors: bool = False
    pos: Position = dataclasses.field(default=_NOWHERE, compare=False, repr=False)


@dataclasses.dataclass(frozen=True)
class Gens:
    group: "GroupSpecAst"
    words: Tuple[Word, ...]
    pos: Position = dataclasses.field(default=_NOWHERE, compare=False, repr=False)


GroupSpecAst = Union[
    FreeAbelian, Free, Cyclic, Table, Product, SemidirectFZ, SemidirectZF, Amalgam, Hnn, Quotient, Rel, Gens
]

CONSTRUCTORS = (
    "Z",
    "amalgam",
    "cyclic",
    "free",
    "gens",
    "hnn",
    "product",
    "quotient",
    "rel",
    "semidirect_fz",
    "semidirect_zf",
    "table",
)

_TOKEN_RE = re.compile(
    r"""
    (?P<space>[ \t\r\n]+)
  | (?P<int>-?\d+)
  | (?P<name>[A-Za-z_./~][\w./~'\-]*)
  | (?P<string>"(?:[^"\\]|\\.)*")
  | (?P<punct>[()\[\],^])
    """,
    re.VERBOSE,
)
_BARE_PATH_RE = re.compile(r"[A-Za-z_./~][\w./~'\-]*\Z")


@dataclasses.dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int


def tokenize(text: str) -> Iterator[Token]:
    line, column, pos = 1, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise SpecSyntaxError(f"unexpected character {text[pos]!r}", line, column)
        kind = m.lastgroup
        value = m.group()
        if kind == "punct":
            yield Token(value, value, line, column)
        elif kind != "space":
            yield Token(kind, value, line, column)  # type: ignore[arg-type]
        newlines = value.count("\n")
        if newlines:
            line += newlines
            column = len(value) - value.rfind("\n")
        else:
            column += len(value)
        pos = m.end()
    yield Token("end", "", line, column)


class _Parser:
    def __init__(self, text: str):
        self.tokens = list(tokenize(text))
        self.at = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.at]

    def _fail(self, expected: Tuple[str, ...]):
        tok = self.tok
        shown = "end of input" if tok.kind == "end" else repr(tok.text)
        raise SpecSyntaxError(f"unexpected {shown}", tok.line, tok.column, expected)

    def expect(self, kind: str) -> Token:
        if self.tok.kind != kind:
            self._fail((kind if kind in ("int", "name") else f"'{kind}'",))
        tok = self.tok
        self.at += 1
        return tok

    def close(self, constructor: str, arity: str) -> None:
        if self.tok.kind == ",":
            raise SpecConstraintError(f"{constructor} takes {arity}", self.tok.line, self.tok.column)
        self.expect(")")

    def integer(self, minimum: Optional[int] = None) -> int:
        tok = self.expect("int")
        value = int(tok.text)
        if minimum is not None and value < minimum:
            raise SpecConstraintError(f"expected an integer >= {minimum}, got {value}", tok.line, tok.column)
        return value

    def word(self) -> Word:
        tok = self.tok
        if tok.kind == "int" and tok.text == "1":
            self.at += 1
            return ()
        tok = self.expect("name")
        try:
            return parse_word(tok.text, _LETTERS)
        except EndsLabError as e:
            raise SpecSyntaxError(f"malformed word {tok.text!r}: {e}", tok.line, tok.column) from e

    def vector(self) -> Tuple[int, ...]:
        self.expect("(")
        entries = [self.integer()]
        while self.tok.kind == ",":
            self.at += 1
            entries.append(self.integer())
        self.expect(")")
        return tuple(entries)

    def bracketed(self, allow_vectors: bool) -> List[Union[Word, Tuple[int, ...]]]:
        self.expect("[")
        items: List[Union[Word, Tuple[int, ...]]] = []
        if self.tok.kind != "]":
            while True:
                if allow_vectors and self.tok.kind == "(":
                    items.append(self.vector())
                elif self.tok.kind in ("name", "int"):
                    items.append(self.word())
                else:
                    self._fail(("'('", "word") if allow_vectors else ("word",))
                if self.tok.kind != ",":
                    break
                self.at += 1
        self.expect("]")
        return items

    def finite_term(self) -> GroupSpecAst:
        tok = self.tok
        node = self.term()
        if not isinstance(node, (Cyclic, Table)):
            raise SpecConstraintError("expected a finite group: cyclic(n) or table(path)", tok.line, tok.column)
        return node

    def term(self) -> GroupSpecAst:
        tok = self.tok
        if tok.kind != "name" or tok.text not in CONSTRUCTORS:
            self._fail(CONSTRUCTORS)
        self.at += 1
        pos = (tok.line, tok.column)
        name = tok.text
        if name == "Z":
            if self.tok.kind == "^":
                self.at += 1
                return FreeAbelian(self.integer(1), pos=pos)
            return FreeAbelian(1, pos=pos)
        self.expect("(")
        node: GroupSpecAst
        if name == "free":
            node = Free(self.integer(0), pos=pos)
            self.close(name, "1 argument")
        elif name == "cyclic":
            node = Cyclic(self.integer(1), pos=pos)
            self.close(name, "1 argument")
        elif name == "table":
            if self.tok.kind == "string":
                path = json.loads(self.tok.text)
                self.at += 1
            else:
                path = self.expect("name").text
            node = Table(path, pos=pos)
            self.close(name, "1 argument")
        elif name == "product":
            left = self.term()
            self.expect(",")
            node = Product(left, self.term(), pos=pos)
            self.close(name, "2 arguments")
        elif name == "semidirect_fz":
            finite = self.finite_term()
            self.expect(",")
            node = SemidirectFZ(finite, self.integer(), pos=pos)
            self.close(name, "2 arguments")
        elif name == "semidirect_zf":
            node = SemidirectZF(self.finite_term(), pos=pos)
            self.close(name, "1 argument")
        elif name == "amalgam":
            left = self.finite_term()
            self.expect(",")
            right = self.finite_term()
            self.expect(",")
            node = Amalgam(left, right, self.integer(1), pos=pos)
            self.close(name, "3 arguments")
        elif name == "hnn":
            base = self.finite_term()
            self.expect(",")
            d = self.integer(1)
            exponent = 1
            if self.tok.kind == ",":
                self.at += 1
                exponent = self.integer()
            node = Hnn(base, d, exponent, pos=pos)
            self.close(name, "2 or 3 arguments")
        elif name == "rel":
            group = self.term()
            self.expect(",")
            items = self.bracketed(allow_vectors=True)
            node = Rel(group, tuple(items), vectors=any(_is_vector(i) for i in items), pos=pos)
            self.close(name, "2 arguments")
        else:
            group = self.term()
            self.expect(",")
            words = tuple(self.bracketed(allow_vectors=False))
            node = (Quotient if name == "quotient" else Gens)(group, words, pos=pos)  # type: ignore[arg-type]
            self.close(name, "2 arguments")
        check_constraints(node)
        return node


def _is_vector(item) -> bool:
    return bool(item) and isinstance(item[0], int)


def _fail_at(node: GroupSpecAst, message: str):
    raise SpecConstraintError(message, *node.pos)


def check_constraints(node: GroupSpecAst) -> None:
    """
    Parameter constraints that do not need the group to be built
    """
    if isinstance(node, Amalgam):
        if isinstance(node.left, Cyclic) and isinstance(node.right, Cyclic):
            g = math.gcd(node.left.order, node.right.order)
            if g % node.d:
                _fail_at(node, f"{node.d} does not divide gcd({node.left.order}, {node.right.order}) = {g}")
    elif isinstance(node, Hnn):
        if isinstance(node.base, Cyclic) and node.base.order % node.d:
            _fail_at(node, f"{node.d} does not divide {node.base.order}")
        if math.gcd(node.exponent, node.d) != 1:
            _fail_at(node, f"exponent {node.exponent} is not a unit modulo {node.d}")
    elif isinstance(node, SemidirectFZ):
        if isinstance(node.finite, Cyclic) and math.gcd(node.k, node.finite.order) != 1:
            _fail_at(node, f"{node.k} is not a unit modulo {node.finite.order}")
    elif isinstance(node, Rel):
        if not isinstance(node.group, (Free, FreeAbelian)):
            _fail_at(node, "rel needs free(n) or Z^n as its group")
        if node.vectors:
            if not isinstance(node.group, FreeAbelian):
                _fail_at(node, "integer vectors are only allowed for Z^n")
            if any(not _is_vector(i) or len(i) != node.group.rank for i in node.items if i):
                _fail_at(node, f"subgroup vectors must have length {node.group.rank}")
    elif isinstance(node, Gens) and not node.words:
        _fail_at(node, "gens needs at least one generator")


def _children(node: GroupSpecAst) -> List[GroupSpecAst]:
    return [
        getattr(node, f.name)
        for f in dataclasses.fields(node)
        if f.name in ("left", "right", "finite", "base", "group")
    ]


def _walk(node: GroupSpecAst) -> Iterator[GroupSpecAst]:
    yield node
    for child in _children(node):
        yield from _walk(child)


def parse_spec(text: str) -> GroupSpecAst:
    parser = _Parser(text)
    node = parser.term()
    parser.expect("end")
    for inner in list(_walk(node))[1:]:
        if isinstance(inner, Rel):
            _fail_at(inner, "rel is only allowed as the outermost constructor")
    return node


def _format_item(item) -> str:
    if _is_vector(item):
        return "(" + ", ".join(str(x) for x in item) + ")"
    return format_word(item)


def _format_list(items) -> str:
    return "[" + ", ".join(_format_item(i) for i in items) + "]"


def format_spec(node: GroupSpecAst) -> str:
    if isinstance(node, FreeAbelian):
        return "Z" if node.rank == 1 else f"Z^{node.rank}"
    if isinstance(node, Free):
        return f"free({node.rank})"
    if isinstance(node, Cyclic):
        return f"cyclic({node.order})"
    if isinstance(node, Table):
        path = node.path if _BARE_PATH_RE.match(node.path) else json.dumps(node.path)
        return f"table({path})"
    if isinstance(node, Product):
        return f"product({format_spec(node.left)}, {format_spec(node.right)})"
    if isinstance(node, SemidirectFZ):
        return f"semidirect_fz({format_spec(node.finite)}, {node.k})"
    if isinstance(node, SemidirectZF):
        return f"semidirect_zf({format_spec(node.finite)})"
    if isinstance(node, Amalgam):
        return f"amalgam({format_spec(node.left)}, {format_spec(node.right)}, {node.d})"
    if isinstance(node, Hnn):
        tail = "" if node.exponent == 1 else f", {node.exponent}"
        return f"hnn({format_spec(node.base)}, {node.d}{tail})"
    if isinstance(node, Quotient):
        return f"quotient({format_spec(node.group)}, {_format_list(node.words)})"
    if isinstance(node, Rel):
        return f"rel({format_spec(node.group)}, {_format_list(node.items)})"
    return f"gens({format_spec(node.group)}, {_format_list(node.words)})"


def _resolve(path: str, base_dir: Optional[pathlib.Path]) -> pathlib.Path:
    p = pathlib.Path(path).expanduser()
    if not p.is_absolute() and base_dir is not None:
        p = base_dir / p
    return p


def _finite(node: GroupSpecAst, base_dir: Optional[pathlib.Path]) -> FiniteGroup:
    if isinstance(node, Cyclic):
        return cyclic(node.order)
    assert isinstance(node, Table)
    path = _resolve(node.path, base_dir)
    try:
        return FiniteGroup(load_table(path))
    except OSError as e:
        raise SpecConstraintError(f"cannot read table {path}: {e.strerror}", *node.pos) from e


def _words(node: GroupSpecAst, words, oracle: RootedGraph) -> List[Word]:
    for w in words:
        try:
            check_word(w, oracle.generator_count)
        except EndsLabError as e:
            raise SpecConstraintError(f"{format_word(w)}: {e}", *node.pos) from e
    return list(words)


def _build(node: GroupSpecAst, base_dir: Optional[pathlib.Path]) -> RootedGraph:
    graph: RootedGraph
    if isinstance(node, FreeAbelian):
        graph = FreeAbelianGroup(node.rank)
    elif isinstance(node, Free):
        graph = FreeGroup(node.rank)
    elif isinstance(node, (Cyclic, Table)):
        graph = _finite(node, base_dir)
    elif isinstance(node, Product):
        graph = build_product(_group(node.left, base_dir), _group(node.right, base_dir))
    elif isinstance(node, SemidirectFZ):
        K = _finite(node.finite, base_dir)
        graph = build_semidirect_finite_by_Z(K, power_map(K.table, node.k))
    elif isinstance(node, SemidirectZF):
        K = _finite(node.finite, base_dir)
        graph = build_semidirect_Z_by_finite(K, sign_action(K, [-1] * K.generator_count))
    elif isinstance(node, Amalgam):
        A, B = _finite(node.left, base_dir), _finite(node.right, base_dir)
        graph = AmalgamGroup(amalgam_over_cyclic(A.table, B.table, node.d))
    elif isinstance(node, Hnn):
        graph = HnnGroup(hnn_over_cyclic(_finite(node.base, base_dir).table, node.d, node.exponent))
    elif isinstance(node, Quotient):
        G = _group(node.group, base_dir)
        N = finite_subgroup(G, [G.canonical(w) for w in _words(node, node.words, G)])
        graph = build_quotient_by_finite_normal(G, N)
    elif isinstance(node, Gens):
        G = _group(node.group, base_dir)
        graph = change_generators(G, _words(node, node.words, G))
    else:
        base = _group(node.group, base_dir)
        if isinstance(node.group, Free):
            graph = FreeCosetOracle(subgroup_automaton(_words(node, node.items, base), base.generator_count))
        else:
            ambient = FreeAbelianGroup(base.generator_count)
            basis = [
                tuple(i) if node.vectors else ambient.canonical(_words(node, [i], base)[0])  # type: ignore[arg-type]
                for i in node.items
            ]
            graph = LatticeCosetOracle(base.generator_count, basis)
    graph.name = format_spec(node)
    return graph


def _group(node: GroupSpecAst, base_dir: Optional[pathlib.Path]) -> GroupOracle:
    graph = _build(node, base_dir)
    assert isinstance(graph, GroupOracle)
    return graph


def build_graph(node: GroupSpecAst, base_dir: Optional[Union[str, pathlib.Path]] = None) -> RootedGraph:
    """
    Turn a parsed spec into a group oracle, or a coset graph for rel(...).
    Relative table paths are resolved against base_dir.
    """
    base = pathlib.Path(base_dir) if base_dir is not None else None
    try:
        graph = _build(node, base)
    except SpecConstraintError:
        raise
    except EndsLabError as e:
        raise SpecConstraintError(str(e), *node.pos) from e
    logger.debug(f"built {graph.name} with {graph.generator_count} generators")
    return graph
