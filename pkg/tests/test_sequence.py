import numpy as np
import pytest

from config.grammar_params import GrammarConfig
from config.settings import Config
from data.grammar import ExpressionSampler
from slt.latex import parse_latex, slt_to_latex
from slt.mirror import mirror_flip
from slt.sequence import BRACKETED_SLT, LATEX_SEQ, TokenSequence, delinearize, linearize
from slt.tree import R2L
from slt.vocabulary import Vocabulary
from utils.exceptions import MalformedSequence

SOS, EOS, PAD = Config.SOS, Config.EOS, Config.PAD

EXPRESSIONS = [
    "x",
    "x ^ { 2 } + 1",
    r"\frac { a + b } { c } x",
    r"\sqrt { x ^ { 2 } _ { 1 } } = y",
]


def test_linearize_superscript():
    sequence = linearize(parse_latex("x^{2}+1"))
    assert sequence.tokens == (SOS, 'x', '<sup>', '{', '2', '}', '+', '1', EOS)
    assert sequence.is_well_formed()
    assert sequence.symbols() == ['x', '2', '+', '1']


@pytest.mark.parametrize("text", EXPRESSIONS)
def test_delinearize_inverts_linearize(text):
    tree = parse_latex(text)
    assert delinearize(linearize(tree)) == tree
    flipped = mirror_flip(tree)
    assert delinearize(linearize(flipped), direction_tag=R2L) == flipped


def test_eos_inside_subtree():
    sequence = TokenSequence((SOS, 'x', '<sup>', '{', '2', EOS))
    with pytest.raises(MalformedSequence) as info:
        delinearize(sequence)
    assert info.value.index == 5
    partial = delinearize(sequence, best_effort=True)
    assert partial == parse_latex("x^{2}")


def test_missing_eos():
    with pytest.raises(MalformedSequence):
        delinearize(TokenSequence((SOS, 'x', '+')))
    assert delinearize(TokenSequence((SOS, 'x', '+')), best_effort=True) == parse_latex("x+")


def test_repeated_relation_is_malformed():
    sequence = TokenSequence((SOS, 'x', '<sup>', '{', '2', '}', '<sup>', '{', '3', '}', EOS))
    with pytest.raises(MalformedSequence) as info:
        delinearize(sequence)
    assert info.value.index == 6


def test_empty_sequence_best_effort():
    tree = delinearize(TokenSequence((SOS, EOS)), best_effort=True)
    assert tree.is_empty
    with pytest.raises(MalformedSequence):
        delinearize(TokenSequence((SOS, EOS)))


def test_trailing_padding_is_ignored():
    tokens = linearize(parse_latex("a+b")).tokens + (PAD, PAD)
    assert delinearize(TokenSequence(tokens)) == parse_latex("a+b")


def test_latex_sequence():
    sequence = linearize(parse_latex(r"\frac{a}{b}"), LATEX_SEQ)
    assert sequence.tokens == (SOS, r"\frac", '{', 'a', '}', '{', 'b', '}', EOS)
    assert sequence.reversed().tokens == (SOS, '}', 'b', '{', '}', 'a', '{', r"\frac", EOS)
    assert delinearize(sequence) == parse_latex(r"\frac{a}{b}")


def test_vocabulary_specials_first():
    vocabulary = Vocabulary.build()
    assert vocabulary.tokens[:4] == list(Config.SPECIAL_TOKENS)
    assert (vocabulary.pad_id, vocabulary.sos_id, vocabulary.eos_id) == (0, 1, 2)


def test_vocabulary_encode_decode():
    vocabulary = Vocabulary.build()
    sequence = linearize(parse_latex("x^{2}+1"))
    ids = vocabulary.encode(sequence)
    assert ids.dtype == np.int64
    assert vocabulary.decode(ids) == sequence
    assert all(vocabulary.is_symbol_id(i) for i in vocabulary.symbol_ids())
    assert not any(vocabulary.is_symbol_id(i) for i in vocabulary.structural_ids())


def test_vocabulary_rejects_unknown_token():
    vocabulary = Vocabulary.build(['x'])
    with pytest.raises(MalformedSequence) as info:
        vocabulary.encode(TokenSequence((SOS, 'x', 'q', EOS), BRACKETED_SLT))
    assert info.value.index == 2


@pytest.mark.parametrize("count", [1000, pytest.param(10000, marks=pytest.mark.slow)])
def test_roundtrips_on_generated_trees(count):
    sampler = ExpressionSampler(GrammarConfig(seed=11), np.random.default_rng(11))
    for _ in range(count):
        tree = sampler.sample()
        assert parse_latex(slt_to_latex(tree)) == tree
        assert delinearize(linearize(tree)) == tree
        assert delinearize(linearize(tree, LATEX_SEQ)) == tree
        flipped = mirror_flip(tree)
        assert delinearize(linearize(flipped), direction_tag=R2L) == flipped
