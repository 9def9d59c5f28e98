from slt.tree import (L2R, R2L, NON_FORWARD, Relation, SltNode, SymbolLayoutTree,
                      canonicalize, ensure_valid)


def main_path(tree):
    """Kökten başlayıp Forward ilişkisi boyunca ilerleyen maksimal zincir"""
    ensure_valid(tree)
    path = [tree.root]
    nxt = tree.nodes[tree.root].forward()
    while nxt is not None:
        path.append(nxt)
        nxt = tree.nodes[nxt].forward()
    return path


def _chain(tree, head):
    chain = [head]
    nxt = tree.nodes[head].forward()
    while nxt is not None:
        chain.append(nxt)
        nxt = tree.nodes[nxt].forward()
    return chain


def mirror_flip(tree):
    """Her Forward zincirini her derinlikte ters çevir; kökü ana yolun sonuna taşı.

    Forward dışındaki ilişkiler ebeveynlerinde kalır, fakat zincir başını
    gösteren kenar artık ters çevrilmiş zincirin yeni başını (eski sonunu) gösterir.
    """
    ensure_valid(tree)
    new_children = {}

    def flip_chain(head):
        chain = _chain(tree, head)
        for index, node_id in enumerate(chain):
            node = tree.nodes[node_id]
            children = [(relation, flip_chain(child_id))
                        for relation, child_id in node.children if relation in NON_FORWARD]
            if index > 0:
                children.append((Relation.FORWARD, chain[index - 1]))
            new_children[node_id] = tuple(children)
        return chain[-1]

    new_root = flip_chain(tree.root)
    nodes = tuple(SltNode(node.id, node.symbol, new_children[node.id]) for node in tree.nodes)
    direction = R2L if tree.direction_tag == L2R else L2R
    return canonicalize(SymbolLayoutTree(nodes, new_root, direction))
