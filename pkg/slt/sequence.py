from dataclasses import dataclass
from typing import Tuple

from config.settings import Config
from slt.latex import latex_tokens, parse_latex, slt_to_latex
from slt.tree import L2R, NON_FORWARD, Relation, build_tree, canonicalize, ensure_valid, SymbolLayoutTree
from utils.exceptions import LatexParseError, MalformedSequence

BRACKETED_SLT = "BracketedSlt"
LATEX_SEQ = "LatexSeq"

RELATION_TOKENS = {
    Relation.ABOVE: "<above>",
    Relation.BELOW: "<below>",
    Relation.SUP: "<sup>",
    Relation.SUB: "<sub>",
    Relation.INSIDE: "<inside>",
}
TOKEN_RELATIONS = {token: relation for relation, token in RELATION_TOKENS.items()}
STRUCTURAL_TOKENS = frozenset(
    list(Config.SPECIAL_TOKENS) + [Config.OPEN, Config.CLOSE, Config.SUP_MARK, Config.SUB_MARK]
    + list(RELATION_TOKENS.values())
)


def is_symbol_token(token):
    return token not in STRUCTURAL_TOKENS


@dataclass(frozen=True)
class TokenSequence:
    tokens: Tuple[str, ...]
    kind: str = BRACKETED_SLT

    def __len__(self):
        return len(self.tokens)

    def body(self):
        """SOS/EOS ve dolgu olmadan iç token'lar"""
        tokens = [t for t in self.tokens if t != Config.PAD]
        if tokens and tokens[0] == Config.SOS:
            tokens = tokens[1:]
        if tokens and tokens[-1] == Config.EOS:
            tokens = tokens[:-1]
        return tokens

    def symbols(self):
        """Yalnızca sembol token'ları (yapısal token'lar atılır)"""
        return [t for t in self.body() if is_symbol_token(t)]

    def is_well_formed(self):
        tokens = self.tokens
        if len(tokens) < 2 or tokens[0] != Config.SOS or tokens[-1] != Config.EOS:
            return False
        if any(t in (Config.SOS, Config.EOS) for t in tokens[1:-1]):
            return False
        depth = 0
        for token in tokens:
            if token == Config.OPEN:
                depth += 1
            elif token == Config.CLOSE:
                depth -= 1
                if depth < 0:
                    return False
        return depth == 0

    def reversed(self):
        """İç token'ları ters çevir (LatexSeq R2L hedefi)"""
        return TokenSequence((Config.SOS,) + tuple(reversed(self.body())) + (Config.EOS,), self.kind)


def linearize(tree, kind=BRACKETED_SLT):
    """Ağacı decoder hedef dizisine çevir"""
    ensure_valid(tree)
    if kind == LATEX_SEQ:
        return TokenSequence((Config.SOS,) + tuple(latex_tokens(slt_to_latex(tree))) + (Config.EOS,), kind)

    out = [Config.SOS]

    def emit_chain(node_id):
        while node_id is not None:
            node = tree.nodes[node_id]
            out.append(node.symbol)
            for relation in NON_FORWARD:
                child = node.child(relation)
                if child is not None:
                    out.append(RELATION_TOKENS[relation])
                    out.append(Config.OPEN)
                    emit_chain(child)
                    out.append(Config.CLOSE)
            node_id = node.forward()

    emit_chain(tree.root)
    out.append(Config.EOS)
    return TokenSequence(tuple(out), BRACKETED_SLT)


def _strip_padding(tokens):
    tokens = list(tokens)
    while tokens and tokens[-1] == Config.PAD:
        tokens.pop()
    return tokens


def delinearize(sequence, best_effort=False, direction_tag=L2R):
    """linearize'ın tersi; best_effort ilk ihlalde keser ve açık grupları kapatır"""
    if sequence.kind == LATEX_SEQ:
        return latex_tokens_to_tree(sequence, best_effort, direction_tag)

    tokens = _strip_padding(sequence.tokens)
    symbols = []
    edges = []
    relations = []
    root = None
    # frame: [parent, relation, last]
    frames = [[None, None, None]]
    pending = None
    violation = None

    if not tokens or tokens[0] != Config.SOS:
        violation = ("dizi SOS ile başlamalı", 0)
    i = 1
    while violation is None:
        if i >= len(tokens):
            violation = ("EOS eksik", i)
            break
        token = tokens[i]
        frame = frames[-1]
        if pending is not None and token != Config.OPEN:
            violation = ("ilişki token'ı alt ağaçsız", i)
            break
        if token == Config.OPEN:
            if pending is None:
                violation = ("beklenmeyen '{'", i)
                break
            frames.append([frame[2], pending, None])
            pending = None
        elif token == Config.CLOSE:
            if len(frames) == 1:
                violation = ("eşleşmeyen '}'", i)
                break
            if frame[2] is None:
                violation = ("boş alt ağaç", i)
                break
            frames.pop()
        elif token in TOKEN_RELATIONS:
            relation = TOKEN_RELATIONS[token]
            if frame[2] is None:
                violation = ("ilişki için taban sembol yok", i)
                break
            if relation in relations[frame[2]]:
                violation = ("aynı ilişki iki kez", i)
                break
            pending = relation
        elif token == Config.EOS:
            if len(frames) > 1:
                violation = ("EOS alt ağaç içinde", i)
            elif frame[2] is None:
                violation = ("sembolsüz dizi", i)
            elif i != len(tokens) - 1:
                violation = ("EOS sonrası token", i + 1)
            break
        elif token in STRUCTURAL_TOKENS:
            violation = (f"beklenmeyen token {token!r}", i)
            break
        else:
            node = len(symbols)
            symbols.append(token)
            relations.append(set())
            if frame[2] is None:
                if frame[0] is None:
                    root = node
                else:
                    edges.append((frame[0], frame[1], node))
                    relations[frame[0]].add(frame[1])
            else:
                edges.append((frame[2], Relation.FORWARD, node))
            frame[2] = node
        i += 1

    if violation is not None and not best_effort:
        raise MalformedSequence(violation[0], violation[1])
    if root is None:
        return SymbolLayoutTree.empty(direction_tag)
    tree = build_tree(symbols, edges, root, direction_tag)
    return canonicalize(ensure_valid(tree))


def latex_tokens_to_tree(sequence, best_effort, direction_tag):
    tokens = _strip_padding(sequence.tokens)
    if not tokens or tokens[0] != Config.SOS or Config.EOS not in tokens:
        if best_effort:
            return SymbolLayoutTree.empty(direction_tag)
        raise MalformedSequence("LatexSeq SOS/EOS ile çevrili olmalı", 0)
    end = tokens.index(Config.EOS)
    try:
        tree = parse_latex(" ".join(tokens[1:end]))
    except LatexParseError as e:
        if best_effort:
            return SymbolLayoutTree.empty(direction_tag)
        raise MalformedSequence(f"LatexSeq ayrıştırılamadı: {e}", end) from e
    if direction_tag != L2R:
        return SymbolLayoutTree(tree.nodes, tree.root, direction_tag)
    return tree
