import pytest

from slt.latex import latex_tokens, parse_latex, slt_to_latex, tokenize
from slt.tree import Relation, build_tree
from slt.tuples import dump_tuples
from utils.exceptions import (DanglingScript, DoubleScript, EmptyGroup, InvalidTree,
                              UnbalancedBraces, UnknownCommand)


def test_parse_superscript_chain():
    tree = parse_latex("x ^ { 2 } + 1")
    assert dump_tuples(tree).split("\n") == ["x\t-1\tStart", "2\t0\tSup", "+\t0\tForward", "1\t2\tForward"]


def test_parse_fraction():
    tree = parse_latex(r"\frac{a+b}{c}")
    root = tree.nodes[tree.root]
    assert root.symbol == r"\frac"
    assert tree.nodes[root.child(Relation.ABOVE)].symbol == 'a'
    assert tree.nodes[root.child(Relation.BELOW)].symbol == 'c'


def test_parse_sqrt_and_subscript():
    tree = parse_latex(r"\sqrt{x_{1}}")
    root = tree.nodes[tree.root]
    inside = tree.nodes[root.child(Relation.INSIDE)]
    assert inside.symbol == 'x'
    assert tree.nodes[inside.child(Relation.SUB)].symbol == '1'


def test_bare_script_argument():
    assert parse_latex("x^2") == parse_latex("x^{2}")


def test_outer_group_is_transparent():
    assert parse_latex("{a+b}c") == parse_latex("a+bc")


@pytest.mark.parametrize("text,error", [
    ("x^{2", UnbalancedBraces),
    ("x}", UnbalancedBraces),
    (r"\alpha", UnknownCommand),
    ("x^{}", EmptyGroup),
    ("", EmptyGroup),
    ("^2", DanglingScript),
    ("x^2^3", DoubleScript),
    (r"\frac{a}", EmptyGroup),
])
def test_parse_errors(text, error):
    with pytest.raises(error):
        parse_latex(text)


def test_error_reports_byte_offset():
    with pytest.raises(DanglingScript) as info:
        parse_latex("a + {^2}")
    assert info.value.offset == 5


def test_canonical_rendering():
    assert slt_to_latex(parse_latex("x^{2}+1")) == "x ^ { 2 } + 1"
    assert slt_to_latex(parse_latex(r"\frac{a}{b}")) == r"\frac { a } { b }"


@pytest.mark.parametrize("text", [
    "x ^ { 2 } + 1",
    r"\frac { a + b } { c } x",
    r"\sqrt { x ^ { 2 } _ { 1 } } = y",
    r"a ^ { b ^ { c } } - \frac { \sqrt { 9 } } { 3 }",
])
def test_parse_render_roundtrip(text):
    tree = parse_latex(text)
    assert slt_to_latex(tree) == text
    assert parse_latex(slt_to_latex(tree)) == tree


def test_render_rejects_inexpressible_tree():
    tree = build_tree(['x', 'y'], [(0, Relation.ABOVE, 1)])
    with pytest.raises(InvalidTree):
        slt_to_latex(tree)


def test_tokenize_offsets():
    tokens, end = tokenize(r"\frac{a}")
    assert tokens == [(r"\frac", 0), ("{", 5), ("a", 6), ("}", 7)]
    assert end == 8
    assert latex_tokens("x ^ 2") == ["x", "^", "2"]
