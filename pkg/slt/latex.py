from config.settings import Config
from slt.tree import L2R, Relation, build_tree, canonicalize, ensure_valid
from utils.exceptions import (DanglingScript, DoubleScript, EmptyGroup, InvalidTree,
                              UnbalancedBraces, UnknownCommand)

KNOWN_COMMANDS = (Config.FRAC, Config.SQRT)
RESERVED = (Config.OPEN, Config.CLOSE, Config.SUP_MARK, Config.SUB_MARK)


def tokenize(text):
    """LaTeX alt kümesini (token, byte_offset) listesine ayır"""
    tokens = []
    offset = 0
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            offset += len(ch.encode('utf-8'))
            i += 1
            continue
        if ch == '\\':
            j = i + 1
            while j < len(text) and text[j].isascii() and text[j].isalpha():
                j += 1
            if j == i + 1 and j < len(text):
                j += 1
            command = text[i:j]
            if command not in KNOWN_COMMANDS:
                raise UnknownCommand(f"bilinmeyen komut {command!r}", offset)
            tokens.append((command, offset))
            offset += len(command.encode('utf-8'))
            i = j
            continue
        tokens.append((ch, offset))
        offset += len(ch.encode('utf-8'))
        i += 1
    return tokens, offset


def latex_tokens(text):
    """LatexSeq hedefi için token dizisi"""
    tokens, _ = tokenize(text)
    return [token for token, _ in tokens]


class _LatexParser:
    def __init__(self, text):
        self.tokens, self.end_offset = tokenize(text)
        self.pos = 0
        self.symbols = []
        self.edges = []
        self.relations = {}

    def peek(self):
        if self.pos < len(self.tokens):
            return self.tokens[self.pos]
        return None, self.end_offset

    def advance(self):
        token = self.tokens[self.pos]
        self.pos += 1
        return token

    def new_node(self, symbol):
        self.symbols.append(symbol)
        self.relations[len(self.symbols) - 1] = set()
        return len(self.symbols) - 1

    def attach(self, parent, relation, child):
        self.edges.append((parent, relation, child))
        self.relations[parent].add(relation)

    def parse(self):
        head, _ = self.parse_chain(closing=False, open_offset=0)
        if head is None:
            raise EmptyGroup("boş ifade", 0)
        tree = build_tree(self.symbols, self.edges, head, L2R)
        return canonicalize(ensure_valid(tree))

    def parse_group(self, what):
        token, offset = self.peek()
        if token != Config.OPEN:
            raise EmptyGroup(f"{what} için '{{' bekleniyordu", offset)
        self.advance()
        head, _ = self.parse_chain(closing=True, open_offset=offset)
        return head

    def parse_chain(self, closing, open_offset):
        head = last = base = None
        while True:
            token, offset = self.peek()
            if token is None:
                if closing:
                    raise UnbalancedBraces("kapanmamış '{'", open_offset)
                break
            if token == Config.CLOSE:
                if not closing:
                    raise UnbalancedBraces("eşleşmeyen '}'", offset)
                self.advance()
                if head is None:
                    raise EmptyGroup("boş grup", open_offset)
                break
            if token in (Config.SUP_MARK, Config.SUB_MARK):
                relation = Relation.SUP if token == Config.SUP_MARK else Relation.SUB
                if base is None:
                    raise DanglingScript(f"'{token}' öncesinde atom yok", offset)
                if relation in self.relations[base]:
                    raise DoubleScript(f"ikinci '{token}' aynı tabana bağlanamaz", offset)
                self.advance()
                child = self.parse_script_argument(offset)
                self.attach(base, relation, child)
                continue

            if token == Config.OPEN:
                self.advance()
                first, final = self.parse_chain(closing=True, open_offset=offset)
            else:
                first = final = self.parse_element()
            if last is None:
                head = first
            else:
                self.attach(last, Relation.FORWARD, first)
            last = base = final
        return head, last

    def parse_script_argument(self, script_offset):
        token, offset = self.peek()
        if token == Config.OPEN:
            return self.parse_group("betik")
        if token is None or token in RESERVED:
            raise EmptyGroup("betik argümanı eksik", offset if token is not None else script_offset)
        return self.parse_element()

    def parse_element(self):
        token, _ = self.advance()
        node = self.new_node(token)
        if token == Config.FRAC:
            self.attach(node, Relation.ABOVE, self.parse_group("\\frac pay"))
            self.attach(node, Relation.BELOW, self.parse_group("\\frac payda"))
        elif token == Config.SQRT:
            self.attach(node, Relation.INSIDE, self.parse_group("\\sqrt"))
        return node


def parse_latex(text):
    """LaTeX alt kümesini Symbol Layout Tree'ye çevir"""
    return _LatexParser(text).parse()


def _check_expressible(node):
    relations = {relation for relation, _ in node.children}
    if node.symbol == Config.FRAC:
        if not {Relation.ABOVE, Relation.BELOW} <= relations or Relation.INSIDE in relations:
            raise InvalidTree(f"düğüm {node.id}: \\frac pay ve payda gerektirir")
    elif node.symbol == Config.SQRT:
        if Relation.INSIDE not in relations or relations & {Relation.ABOVE, Relation.BELOW}:
            raise InvalidTree(f"düğüm {node.id}: \\sqrt yalnızca Inside taşır")
    else:
        if relations & {Relation.ABOVE, Relation.BELOW, Relation.INSIDE}:
            raise InvalidTree(f"düğüm {node.id}: {node.symbol!r} Above/Below/Inside taşıyamaz")
        if node.symbol in RESERVED or node.symbol.startswith('\\') or not node.symbol \
                or any(ch.isspace() for ch in node.symbol):
            raise InvalidTree(f"düğüm {node.id}: LaTeX ile yazılamayan sembol {node.symbol!r}")


def slt_to_latex(tree):
    """Kanonik LaTeX üret (token'lar arasında tek boşluk)"""
    ensure_valid(tree)
    if tree.direction_tag != L2R:
        raise InvalidTree("slt_to_latex yalnızca L2R ağaçları yazar")
    out = []

    def emit_group(node_id):
        out.append(Config.OPEN)
        emit_chain(node_id)
        out.append(Config.CLOSE)

    def emit_chain(node_id):
        while node_id is not None:
            node = tree.nodes[node_id]
            _check_expressible(node)
            out.append(node.symbol)
            if node.symbol == Config.FRAC:
                emit_group(node.child(Relation.ABOVE))
                emit_group(node.child(Relation.BELOW))
            elif node.symbol == Config.SQRT:
                emit_group(node.child(Relation.INSIDE))
            sup = node.child(Relation.SUP)
            if sup is not None:
                out.append(Config.SUP_MARK)
                emit_group(sup)
            sub = node.child(Relation.SUB)
            if sub is not None:
                out.append(Config.SUB_MARK)
                emit_group(sub)
            node_id = node.forward()

    emit_chain(tree.root)
    return " ".join(out)
