import numpy as np
import pandas as pd
import pytest
from numpy.testing import assert_array_equal

from config.grammar_params import AtlasConfig, GrammarConfig, NoiseConfig
from config.settings import Config
from data.data_processor import DataProcessor, pad_batch
from data.dataset import load_dataset, read_pgm, save_dataset, write_pgm
from data.glyphs import GLYPH_SIZE, GlyphAtlas, apply_salt_pepper, collision_rate, morph_toward
from data.grammar import gen_corpus
from data.rasterizer import layout, rasterize
from models.recognizer import BatRecognizer
from slt.latex import parse_latex
from slt.mirror import mirror_flip
from slt.tree import Relation, parent_map
from utils.exceptions import (DataError, DatasetIoError, GrammarExhausted, ManifestCorrupt,
                              MissingGlyph)


@pytest.fixture(scope="module")
def atlas():
    return GlyphAtlas.build()


def _chain_lengths(tree):
    parents = parent_map(tree)
    heads = [n.id for n in tree.nodes
             if n.id not in parents or parents[n.id][1] is not Relation.FORWARD]
    lengths = []
    for head in heads:
        length, node = 1, tree.nodes[head].forward()
        while node is not None:
            length, node = length + 1, tree.nodes[node].forward()
        lengths.append(length)
    return lengths


def _depth(tree, node_id=None):
    node_id = tree.root if node_id is None else node_id
    depth = 1
    for relation, child in tree.nodes[node_id].children:
        extra = 0 if relation is Relation.FORWARD else 1
        depth = max(depth, _depth(tree, child) + extra)
    return depth


# --- glyph atlas ---

def test_atlas_bitmaps_are_binary_cells(atlas):
    for symbol in Config.DEFAULT_SYMBOLS:
        bitmap = atlas.glyph(symbol)
        assert bitmap.shape == (GLYPH_SIZE, GLYPH_SIZE)
        assert set(np.unique(bitmap)) <= {0, 1}
        assert bitmap.sum() > 0


def test_atlas_missing_glyph():
    with pytest.raises(MissingGlyph):
        GlyphAtlas.build(['x', 'q'])


def test_ambiguous_pairs_move_closer():
    plain = GlyphAtlas.build(config=AtlasConfig(ambiguity_k=None))
    morphed = GlyphAtlas.build(config=AtlasConfig(ambiguity_k=2))
    for first, second in Config.AMBIGUOUS_PAIRS:
        before = plain.pixel_distance(first, second)
        assert morphed.pixel_distance(first, second) == min(2, before)
    assert_array_equal(morphed.glyph('x'), plain.glyph('x'))


def test_pairs_outside_symbol_set_are_skipped():
    atlas = GlyphAtlas.build(['x', '1'])
    assert atlas.ambiguous_pairs == []


def test_morph_toward_limits_changes():
    source = np.zeros((4, 4), dtype=np.uint8)
    target = np.ones((4, 4), dtype=np.uint8)
    assert morph_toward(source, target, 3).sum() == 3
    assert_array_equal(morph_toward(source, target, 100), target)


def test_salt_pepper_probability_bounds():
    image = np.zeros((20, 20))
    rng = np.random.default_rng(0)
    assert apply_salt_pepper(image, 0.0, rng) is image
    noisy = apply_salt_pepper(image, 1.0, rng)
    assert set(np.unique(noisy)) <= {0.0, 1.0}
    assert 0 < noisy.sum() < 400


def test_collision_rate(atlas):
    assert collision_rate(atlas, ('x', 'x'), 0.1, trials=50) == 1.0
    assert collision_rate(atlas, ('x', 'o'), 0.0, trials=50) == 0.0
    assert collision_rate(atlas, ('x', 'o'), 1.0, trials=50) == 1.0


# --- rasterizer ---

def test_single_glyph_canvas(atlas):
    image = rasterize(parse_latex("x"), atlas)
    assert image.shape == (24, 24)
    assert_array_equal(image[2:18, 2:18], atlas.glyph('x'))
    assert image.sum() == atlas.glyph('x').sum()


def test_chain_layout_spacing(atlas):
    placements = layout(parse_latex("a+b"), atlas)
    assert [p.left for p in placements] == [2, 20, 38]
    assert len({p.top for p in placements}) == 1
    image = rasterize(parse_latex("a+b"), atlas)
    assert image.shape[0] % 8 == 0 and image.shape[1] % 8 == 0


def test_fraction_layout(atlas):
    placements = {p.symbol: p for p in layout(parse_latex(r"\frac{a}{b}"), atlas)}
    bar = placements[Config.FRAC]
    assert bar.bitmap.shape[0] == 1
    assert placements['a'].bottom < bar.top
    assert placements['b'].top > bar.bottom


def test_scripts_are_smaller_and_offset(atlas):
    sup = {p.symbol: p for p in layout(parse_latex("x^{2}"), atlas)}
    sub = {p.symbol: p for p in layout(parse_latex("x_{2}"), atlas)}
    assert sup['2'].bitmap.shape[0] < GLYPH_SIZE
    assert sup['2'].left == sup['x'].right + 1
    assert sup['2'].center[0] < sup['x'].center[0]
    assert sub['2'].center[0] > sub['x'].center[0]


def test_radical_encloses_argument(atlas):
    placements = {p.symbol: p for p in layout(parse_latex(r"\sqrt{x}"), atlas)}
    radical, inside = placements[Config.SQRT], placements['x']
    assert radical.left < inside.left and inside.right <= radical.right
    assert radical.top < inside.top


def test_rasterize_missing_glyph():
    with pytest.raises(MissingGlyph):
        rasterize(parse_latex("x+y"), GlyphAtlas.build(['x', '+']))


def test_noise_is_seeded(atlas):
    tree = parse_latex("x^{2}")
    noise = NoiseConfig(salt_pepper_p=0.05, jitter_px=1)
    first = rasterize(tree, atlas, noise, np.random.default_rng(5))
    second = rasterize(tree, atlas, noise, np.random.default_rng(5))
    assert_array_equal(first, second)


# --- grammar ---

def test_corpus_is_deterministic():
    config = GrammarConfig(seed=11)
    assert gen_corpus(config, 12) == gen_corpus(config, 12)
    assert gen_corpus(config, 12).latex() != gen_corpus(GrammarConfig(seed=12), 12).latex()


def test_corpus_samples_are_consistent():
    config = GrammarConfig(seed=4, max_depth=3, max_chain=4)
    manifest = gen_corpus(config, 40)
    assert [s.id for s in manifest][:2] == ["000000", "000001"]
    assert len(set(manifest.latex())) == 40
    for sample in manifest:
        assert parse_latex(sample.latex) == sample.slt
        assert sample.mfslt == mirror_flip(sample.slt)
        assert max(_chain_lengths(sample.slt)) <= 4
        assert _depth(sample.slt) <= 3
        assert sample.image.min() >= 0.0 and sample.image.max() <= 1.0


def test_corpus_errors():
    with pytest.raises(DataError):
        gen_corpus(GrammarConfig(), 0)
    tiny = GrammarConfig(symbols=['x'], max_depth=1, max_chain=1)
    with pytest.raises(GrammarExhausted):
        gen_corpus(tiny, 2)


# --- dataset io ---

def test_pgm_roundtrip(tmp_path):
    image = np.array([[0.0, 1.0], [0.2, 0.6]])
    path = tmp_path / "x.pgm"
    write_pgm(path, image)
    assert_array_equal(read_pgm(path), np.round(image * 255) / 255.0)
    path.write_bytes(b"P2\n2 2\n255\n0 0 0 0")
    with pytest.raises(DatasetIoError):
        read_pgm(path)


def test_dataset_roundtrip(tmp_path):
    manifest = gen_corpus(GrammarConfig(seed=2), 6, noise=NoiseConfig(salt_pepper_p=0.02, jitter_px=1))
    save_dataset(manifest, str(tmp_path))
    frame = pd.read_csv(tmp_path / Config.MANIFEST_NAME, sep='\t', dtype=str, keep_default_na=False)
    assert list(frame.columns) == ['id', 'image', 'latex', 'slt', 'mfslt']
    assert load_dataset(str(tmp_path)) == manifest


def test_missing_manifest(tmp_path):
    with pytest.raises(ManifestCorrupt):
        load_dataset(str(tmp_path))


def test_corrupt_manifest_reports_line(tmp_path):
    manifest = gen_corpus(GrammarConfig(seed=2), 3)
    save_dataset(manifest, str(tmp_path))
    path = tmp_path / Config.MANIFEST_NAME
    lines = path.read_text(encoding='utf-8').split('\n')
    lines[2] = "\t".join(lines[2].split('\t')[:4])
    path.write_text('\n'.join(lines), encoding='utf-8')
    with pytest.raises(ManifestCorrupt) as info:
        load_dataset(str(tmp_path))
    assert info.value.line == 3


def test_inconsistent_mfslt(tmp_path):
    manifest = gen_corpus(GrammarConfig(seed=2), 2)
    save_dataset(manifest, str(tmp_path))
    path = tmp_path / Config.MANIFEST_NAME
    frame = pd.read_csv(path, sep='\t', dtype=str, keep_default_na=False)
    frame.loc[1, 'mfslt'] = "q -1 Start"
    frame.to_csv(path, sep='\t', index=False, lineterminator='\n')
    with pytest.raises(ManifestCorrupt) as info:
        load_dataset(str(tmp_path))
    assert info.value.line == 3


# --- batching ---

def test_pad_batch():
    batch = pad_batch([np.array([1, 5, 2]), np.array([1, 2])], pad_id=0)
    assert_array_equal(batch, [[1, 5, 2], [1, 2, 0]])
    with pytest.raises(DataError):
        pad_batch([], 0)


def test_batches_cover_every_sample(tiny_config, vocabulary):
    model = BatRecognizer(tiny_config, vocabulary)
    processor = DataProcessor(model)
    prepared = processor.prepare(gen_corpus(GrammarConfig(seed=3, max_chain=3), 7))
    epoch_one = [[item.id for item in batch] for batch in processor.batches(prepared, 3, seed=0, epoch=1)]
    again = [[item.id for item in batch] for batch in processor.batches(prepared, 3, seed=0, epoch=1)]
    assert epoch_one == again
    assert [len(b) for b in epoch_one] == [3, 3, 1]
    assert sorted(sum(epoch_one, [])) == sorted(item.id for item in prepared)

    batch = next(processor.batches(prepared, 3, seed=0, epoch=2))
    for direction in batch[0].targets:
        assert len({len(item.targets[direction]) for item in batch}) == 1
