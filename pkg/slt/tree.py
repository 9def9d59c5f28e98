from dataclasses import dataclass, field
from enum import Enum
from typing import Tuple

from utils.exceptions import InvalidTree


class Relation(Enum):
    ABOVE = "Above"
    BELOW = "Below"
    SUP = "Sup"
    SUB = "Sub"
    INSIDE = "Inside"
    FORWARD = "Forward"
    START = "Start"

    @classmethod
    def parse(cls, text):
        for relation in cls:
            if relation.value == text:
                return relation
        raise ValueError(f"bilinmeyen ilişki: {text!r}")


# Pre-order çocuk sırası: Forward her zaman en sonda
CHILD_ORDER = (Relation.ABOVE, Relation.BELOW, Relation.SUP, Relation.SUB,
               Relation.INSIDE, Relation.FORWARD)
NON_FORWARD = CHILD_ORDER[:-1]
_ORDER_INDEX = {relation: i for i, relation in enumerate(CHILD_ORDER)}

L2R = "L2R"
R2L = "R2L"


@dataclass(frozen=True)
class SltNode:
    id: int
    symbol: str
    children: Tuple[Tuple[Relation, int], ...] = ()

    def child(self, relation):
        for rel, child_id in self.children:
            if rel is relation:
                return child_id
        return None

    def forward(self):
        return self.child(Relation.FORWARD)


@dataclass(frozen=True)
class SymbolLayoutTree:
    nodes: Tuple[SltNode, ...]
    root: int
    direction_tag: str = L2R

    @classmethod
    def empty(cls, direction_tag=L2R):
        return cls(nodes=(), root=-1, direction_tag=direction_tag)

    @property
    def is_empty(self):
        return len(self.nodes) == 0

    def __len__(self):
        return len(self.nodes)

    def node(self, node_id):
        return self.nodes[node_id]

    def symbols(self):
        return [node.symbol for node in self.nodes]


@dataclass(frozen=True)
class SltTuple:
    child_symbol: str
    parent_id: int
    relation: Relation


@dataclass(frozen=True)
class Violation:
    rule: str
    node_id: int = field(default=-1)

    def __str__(self):
        return f"{self.rule}({self.node_id})"


def build_tree(symbols, edges, root=0, direction_tag=L2R):
    """(parent, relation, child) kenarlarından ağaç kur (doğrulama yapmaz)"""
    children = {i: [] for i in range(len(symbols))}
    for parent, relation, child in edges:
        children[parent].append((relation, child))
    nodes = tuple(
        SltNode(i, symbol, tuple(sorted(children[i], key=lambda rc: _ORDER_INDEX.get(rc[0], -1))))
        for i, symbol in enumerate(symbols)
    )
    return SymbolLayoutTree(nodes, root, direction_tag)


def validate(tree):
    """Tip değişmezlerini kontrol et; ihlaller veri olarak döner"""
    violations = []
    if tree.is_empty:
        return [Violation("EmptyTree")]

    n = len(tree.nodes)
    for index, node in enumerate(tree.nodes):
        if node.id != index:
            violations.append(Violation("DenseIds", index))
    if not 0 <= tree.root < n:
        violations.append(Violation("DanglingChild", tree.root))
        return violations

    for node in tree.nodes:
        seen = set()
        duplicate = False
        for relation, child_id in node.children:
            if relation is Relation.START:
                violations.append(Violation("StartRelation", node.id))
            if not 0 <= child_id < n:
                violations.append(Violation("DanglingChild", node.id))
            if relation in seen:
                duplicate = True
            seen.add(relation)
        if duplicate:
            violations.append(Violation("OneChildPerRelation", node.id))

    # Kökten DFS; yol üzerindeki düğüme dönen kenar döngüyü kapatır
    visited = {tree.root}
    on_path = {tree.root}
    stack = [(tree.root, iter(tree.nodes[tree.root].children))]
    while stack:
        node_id, it = stack[-1]
        step = next(it, None)
        if step is None:
            on_path.discard(node_id)
            stack.pop()
            continue
        _, child_id = step
        if not 0 <= child_id < n:
            continue
        if child_id in on_path:
            violations.append(Violation("Acyclicity", node_id))
        elif child_id in visited:
            violations.append(Violation("MultipleParents", child_id))
        else:
            visited.add(child_id)
            on_path.add(child_id)
            stack.append((child_id, iter(tree.nodes[child_id].children)))

    for node in tree.nodes:
        if node.id not in visited and 0 <= node.id < n:
            violations.append(Violation("Unreachable", node.id))
    return violations


def ensure_valid(tree):
    violations = validate(tree)
    if violations:
        raise InvalidTree("geçersiz ağaç: " + ", ".join(str(v) for v in violations), violations)
    return tree


def preorder(tree):
    """Kanonik pre-order düğüm sırası (Forward en son)"""
    order = []
    stack = [tree.root]
    while stack:
        node_id = stack.pop()
        order.append(node_id)
        node = tree.nodes[node_id]
        ordered = sorted(node.children, key=lambda rc: _ORDER_INDEX[rc[0]])
        for _, child_id in reversed(ordered):
            stack.append(child_id)
    return order


def canonicalize(tree):
    """Düğüm id'lerini kanonik pre-order indeksine göre yeniden numarala"""
    if tree.is_empty:
        return tree
    order = preorder(tree)
    remap = {old: new for new, old in enumerate(order)}
    nodes = []
    for old in order:
        node = tree.nodes[old]
        children = tuple(sorted(((rel, remap[child]) for rel, child in node.children),
                                key=lambda rc: _ORDER_INDEX[rc[0]]))
        nodes.append(SltNode(remap[old], node.symbol, children))
    return SymbolLayoutTree(tuple(nodes), 0, tree.direction_tag)


def parent_map(tree):
    """child -> (parent, relation)"""
    parents = {}
    for node in tree.nodes:
        for relation, child_id in node.children:
            parents[child_id] = (node.id, relation)
    return parents


def to_tuples(tree):
    """Pre-order tuple temsili; kök parent_id=-1, relation=Start"""
    tree = canonicalize(ensure_valid(tree))
    parents = parent_map(tree)
    result = []
    for node in tree.nodes:
        parent_id, relation = parents.get(node.id, (-1, Relation.START))
        result.append(SltTuple(node.symbol, parent_id, relation))
    return result


def from_tuples(tuples, direction_tag=L2R):
    """Tuple listesinden ağaç kur"""
    if not tuples:
        raise InvalidTree("boş tuple listesi", [Violation("EmptyTree")])
    symbols = [t.child_symbol for t in tuples]
    edges = []
    for index, item in enumerate(tuples):
        if index == 0:
            if item.parent_id != -1 or item.relation is not Relation.START:
                raise InvalidTree("ilk tuple kök olmalı", [Violation("StartRelation", 0)])
            continue
        if not 0 <= item.parent_id < index or item.relation is Relation.START:
            raise InvalidTree(f"tuple {index}: geçersiz ebeveyn", [Violation("DanglingChild", index)])
        edges.append((item.parent_id, item.relation, index))
    tree = build_tree(symbols, edges, 0, direction_tag)
    return canonicalize(ensure_valid(tree))


def relation_counts(tree):
    counts = {relation: 0 for relation in Relation}
    for node in tree.nodes:
        for relation, _ in node.children:
            counts[relation] += 1
    return counts
