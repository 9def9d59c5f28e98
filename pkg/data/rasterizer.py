from dataclasses import dataclass

import numpy as np

from config.grammar_params import NoiseConfig
from config.settings import Config
from data.glyphs import GLYPH_SIZE, apply_salt_pepper
from slt.tree import Relation, ensure_valid
from utils.exceptions import MissingGlyph

CHAIN_GAP = 2
SCRIPT_SCALE = 0.6
SCRIPT_SHIFT = 0.4
MARGIN = 2
CANVAS_MULTIPLE = 8


@dataclass
class Placement:
    symbol: str
    bitmap: np.ndarray
    top: int
    left: int

    @property
    def bottom(self):
        return self.top + self.bitmap.shape[0]

    @property
    def right(self):
        return self.left + self.bitmap.shape[1]

    @property
    def center(self):
        return (self.top + self.bottom) / 2.0, (self.left + self.right) / 2.0


class _Group:
    """Yerleşimler + eksen (yatay hizalama satırı)"""

    def __init__(self, placements, axis):
        self.placements = placements
        self.axis = axis

    @property
    def top(self):
        return min(p.top for p in self.placements)

    @property
    def bottom(self):
        return max(p.bottom for p in self.placements)

    @property
    def left(self):
        return min(p.left for p in self.placements)

    @property
    def right(self):
        return max(p.right for p in self.placements)

    @property
    def height(self):
        return self.bottom - self.top

    @property
    def width(self):
        return self.right - self.left

    def shifted(self, dx, dy):
        moved = [Placement(p.symbol, p.bitmap, p.top + dy, p.left + dx) for p in self.placements]
        return _Group(moved, self.axis + dy)


def scale_bitmap(bitmap, scale):
    """En yakın komşu ölçekleme"""
    height = max(1, int(round(bitmap.shape[0] * scale)))
    width = max(1, int(round(bitmap.shape[1] * scale)))
    rows = (np.arange(height) * bitmap.shape[0]) // height
    cols = (np.arange(width) * bitmap.shape[1]) // width
    return bitmap[rows][:, cols]


class _Layout:
    def __init__(self, tree, atlas):
        self.tree = tree
        self.atlas = atlas

    def glyph(self, symbol, scale):
        if symbol not in self.atlas:
            raise MissingGlyph(f"atlas'ta glyph yok: {symbol!r}")
        bitmap = scale_bitmap(self.atlas.glyph(symbol), scale)
        return _Group([Placement(symbol, bitmap, 0, 0)], bitmap.shape[0] // 2)

    def chain(self, head, scale):
        placements = []
        cursor = 0
        node_id = head
        while node_id is not None:
            group = self.element(node_id, scale)
            group = group.shifted(cursor - group.left, -group.axis)
            placements.extend(group.placements)
            cursor = group.right + CHAIN_GAP
            node_id = self.tree.nodes[node_id].forward()
        return _Group(placements, 0)

    def fraction(self, node, scale):
        above = self.chain(node.child(Relation.ABOVE), scale)
        below = self.chain(node.child(Relation.BELOW), scale)
        width = max(above.width, below.width)
        bar = Placement(node.symbol, np.ones((1, width), dtype=np.uint8), 0, 0)
        above = above.shifted((width - above.width) // 2 - above.left, -1 - above.bottom)
        below = below.shifted((width - below.width) // 2 - below.left, 2 - below.top)
        return _Group([bar] + above.placements + below.placements, 0)

    def radical(self, node, scale):
        inside = self.chain(node.child(Relation.INSIDE), scale)
        hook = max(3, int(round(6 * scale)))
        height = inside.height + 3
        width = hook + inside.width + 2
        stroke = np.zeros((height, width), dtype=np.uint8)
        stroke[0, hook - 1:] = 1
        stroke[:, hook - 1] = 1
        for step in range(min(hook - 1, height // 2)):
            stroke[height - 1 - step, hook - 2 - step] = 1
        inside = inside.shifted(hook + 1 - inside.left, 2 - inside.top)
        return _Group([Placement(node.symbol, stroke, 0, 0)] + inside.placements, inside.axis)

    def element(self, node_id, scale):
        node = self.tree.nodes[node_id]
        if node.symbol == Config.FRAC and node.child(Relation.ABOVE) is not None:
            if node.symbol not in self.atlas:
                raise MissingGlyph(f"atlas'ta glyph yok: {node.symbol!r}")
            base = self.fraction(node, scale)
        elif node.symbol == Config.SQRT and node.child(Relation.INSIDE) is not None:
            if node.symbol not in self.atlas:
                raise MissingGlyph(f"atlas'ta glyph yok: {node.symbol!r}")
            base = self.radical(node, scale)
        else:
            base = self.glyph(node.symbol, scale)

        placements = list(base.placements)
        x = base.right + 1
        lift = int(round(SCRIPT_SHIFT * base.height))
        for relation, direction in ((Relation.SUP, -1), (Relation.SUB, 1)):
            child = node.child(relation)
            if child is None:
                continue
            script = self.chain(child, scale * SCRIPT_SCALE)
            script = script.shifted(x - script.left, base.axis + direction * lift - script.axis)
            placements.extend(script.placements)
        return _Group(placements, base.axis)


def layout(slt, atlas):
    """Gürültüsüz glyph yerleşimleri (tuval koordinatlarında)"""
    ensure_valid(slt)
    group = _Layout(slt, atlas).chain(slt.root, 1.0)
    return group.shifted(MARGIN - group.left, MARGIN - group.top).placements


def _canvas_size(extent):
    size = max(extent + MARGIN, GLYPH_SIZE)
    return -(-size // CANVAS_MULTIPLE) * CANVAS_MULTIPLE


def rasterize(slt, atlas, noise=None, rng=None):
    """SLT'yi gri tonlu [H, W] görüntüye çiz (mürekkep=1, zemin=0)"""
    noise = noise or NoiseConfig()
    rng = rng if rng is not None else np.random.default_rng(0)
    placements = layout(slt, atlas)

    if noise.jitter_px > 0:
        jittered = []
        for p in placements:
            dx, dy = rng.integers(-noise.jitter_px, noise.jitter_px + 1, size=2)
            jittered.append(Placement(p.symbol, p.bitmap, max(0, p.top + int(dy)), max(0, p.left + int(dx))))
        placements = jittered

    height = _canvas_size(max(p.bottom for p in placements))
    width = _canvas_size(max(p.right for p in placements))
    image = np.zeros((height, width), dtype=np.float64)
    for p in placements:
        region = image[p.top:p.bottom, p.left:p.right]
        np.maximum(region, p.bitmap, out=region)
    return apply_salt_pepper(image, noise.salt_pepper_p, rng)
