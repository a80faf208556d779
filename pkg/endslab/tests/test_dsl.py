#  SPDX-FileCopyrightText: 2026 endslab contributors
#  SPDX-License-Identifier: GPL-3.0-or-later

import pytest

from endslab import dsl
from endslab import graphs
from endslab import groups
from endslab import normal_forms
from endslab import qi
from endslab.common import SpecConstraintError, SpecSyntaxError


def test_tokenize():
    tokens = list(dsl.tokenize("Z^2"))
    assert [t.kind for t in tokens] == ["name", "^", "int", "end"]
    assert [t.column for t in tokens] == [1, 2, 3, 4]


def test_tokenize_positions_span_lines():
    tokens = list(dsl.tokenize("product(\n  Z,\n  Z)"))
    z = [t for t in tokens if t.text == "Z"]
    assert [(t.line, t.column) for t in z] == [(2, 3), (3, 3)]


@pytest.mark.parametrize(
    "text,node",
    [
        ("Z", dsl.FreeAbelian(1)),
        ("Z^3", dsl.FreeAbelian(3)),
        ("free(2)", dsl.Free(2)),
        ("product(free(2), Z)", dsl.Product(dsl.Free(2), dsl.FreeAbelian(1))),
        ("semidirect_fz(cyclic(3), 2)", dsl.SemidirectFZ(dsl.Cyclic(3), 2)),
        ("semidirect_zf(cyclic(2))", dsl.SemidirectZF(dsl.Cyclic(2))),
        ("amalgam(cyclic(4), cyclic(6), 2)", dsl.Amalgam(dsl.Cyclic(4), dsl.Cyclic(6), 2)),
        ("hnn(cyclic(4), 4, 3)", dsl.Hnn(dsl.Cyclic(4), 4, 3)),
        ("table(s3.table)", dsl.Table("s3.table")),
        ('table("my tables/s3.table")', dsl.Table("my tables/s3.table")),
    ],
)
def test_parse_spec(text, node):
    assert dsl.parse_spec(text) == node


def test_parse_spec_word_lists():
    node = dsl.parse_spec("rel(free(2), [a, bAB, 1])")
    assert isinstance(node, dsl.Rel)
    assert not node.vectors
    assert len(node.items) == 3
    assert node.items[2] == ()
    node = dsl.parse_spec("rel(Z^2, [(1, 0), (0, -2)])")
    assert node.vectors
    assert node.items == ((1, 0), (0, -2))


@pytest.mark.parametrize(
    "text",
    [
        "product( free(2),Z )",
        "semidirect_fz(table(s3.table), 1)",
        "hnn(cyclic(4), 2)",
        "quotient(product(Z, cyclic(2)), [b])",
        "gens(Z, [aa, aaa])",
        "rel(Z^2, [(1, 0)])",
        'table("my tables/s3.table")',
    ],
)
def test_format_spec_is_canonical(text):
    node = dsl.parse_spec(text)
    formatted = dsl.format_spec(node)
    assert dsl.parse_spec(formatted) == node
    assert dsl.format_spec(dsl.parse_spec(formatted)) == formatted


def test_format_spec_spelling():
    assert dsl.format_spec(dsl.parse_spec("product( free(2),Z^1 )")) == "product(free(2), Z)"
    assert dsl.format_spec(dsl.parse_spec("hnn(cyclic(4),2,1)")) == "hnn(cyclic(4), 2)"
    assert dsl.format_spec(dsl.parse_spec("rel(free(2),[a,1])")) == "rel(free(2), [a, 1])"


def test_syntax_error_position():
    with pytest.raises(SpecSyntaxError) as e:
        dsl.parse_spec("product(free(2) Z)")
    assert (e.value.line, e.value.column) == (1, 17)
    assert e.value.expected == ("','",)
    assert str(e.value).startswith("1:17: unexpected 'Z'")


@pytest.mark.parametrize(
    "text,line,column",
    [
        ("free(2", 1, 7),
        ("foo(1)", 1, 1),
        ("Z @", 1, 3),
        ("product(Z, Z) Z", 1, 15),
        ("rel(free(2), [a b])", 1, 17),
    ],
)
def test_syntax_errors(text, line, column):
    with pytest.raises(SpecSyntaxError) as e:
        dsl.parse_spec(text)
    assert (e.value.line, e.value.column) == (line, column)


def test_syntax_error_lists_constructors():
    with pytest.raises(SpecSyntaxError) as e:
        dsl.parse_spec("foo(1)")
    assert "free" in e.value.expected
    assert "semidirect_fz" in e.value.expected


@pytest.mark.parametrize(
    "text",
    [
        "cyclic(4, 5)",
        "cyclic(0)",
        "Z^0",
        "amalgam(cyclic(4), cyclic(6), 4)",
        "hnn(cyclic(4), 3)",
        "hnn(cyclic(4), 4, 2)",
        "semidirect_fz(cyclic(4), 2)",
        "semidirect_fz(Z, 1)",
        "rel(cyclic(3), [a])",
        "rel(free(2), [(1, 0)])",
        "rel(Z^2, [(1, 0, 0)])",
        "product(rel(free(2), [a]), Z)",
        "gens(Z, [])",
    ],
)
def test_constraint_errors(text):
    with pytest.raises(SpecConstraintError):
        dsl.parse_spec(text)


def test_constraint_error_position():
    with pytest.raises(SpecConstraintError) as e:
        dsl.parse_spec("product(\n  Z,\n  cyclic(0))")
    assert (e.value.line, e.value.column) == (3, 10)


@pytest.mark.parametrize(
    "text,cls,generators",
    [
        ("Z^2", groups.FreeAbelianGroup, 2),
        ("free(3)", groups.FreeGroup, 3),
        ("cyclic(5)", groups.FiniteGroup, 1),
        ("product(free(2), Z)", groups.ProductGroup, 3),
        ("semidirect_fz(cyclic(3), 2)", groups.SemidirectFiniteByZ, 2),
        ("semidirect_zf(cyclic(2))", groups.SemidirectZByFinite, 2),
        ("amalgam(cyclic(4), cyclic(6), 2)", normal_forms.AmalgamGroup, 8),
        ("hnn(cyclic(4), 2)", normal_forms.HnnGroup, 4),
        ("quotient(product(Z, cyclic(2)), [b])", groups.QuotientGroup, 2),
        ("gens(Z, [aa, aaa])", qi.ChangedGenerators, 2),
        ("rel(free(2), [a])", graphs.FreeCosetOracle, 2),
        ("rel(Z^2, [(1, 0)])", graphs.LatticeCosetOracle, 2),
        ("rel(Z^2, [ab])", graphs.LatticeCosetOracle, 2),
    ],
)
def test_build_graph(text, cls, generators):
    graph = dsl.build_graph(dsl.parse_spec(text))
    assert isinstance(graph, cls)
    assert graph.generator_count == generators
    assert graph.name == dsl.format_spec(dsl.parse_spec(text))


def test_build_graph_table(fixtures_dir):
    graph = dsl.build_graph(dsl.parse_spec("table(s3.table)"), fixtures_dir)
    assert isinstance(graph, groups.FiniteGroup)
    assert graph.table.order == 6
    assert graph.name == "table(s3.table)"


def test_build_graph_lattice_words():
    graph = dsl.build_graph(dsl.parse_spec("rel(Z^2, [ab])"))
    assert graph.index() is None
    assert graph.residue((1, 1)) == graph.root


@pytest.mark.parametrize(
    "text",
    [
        "table(missing.table)",
        "quotient(Z, [b])",
        "quotient(free(2), [a])",
        "gens(Z, [aa])",
        "rel(free(2), [c])",
    ],
)
def test_build_graph_errors(text, fixtures_dir):
    with pytest.raises(SpecConstraintError):
        dsl.build_graph(dsl.parse_spec(text), fixtures_dir)
