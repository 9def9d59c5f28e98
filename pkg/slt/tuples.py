from slt.tree import L2R, Relation, SltTuple, from_tuples, to_tuples
from utils.exceptions import InvalidTree


def dump_tuples(tree, separator='\t'):
    """Ağacı satır tabanlı tuple metnine çevir (pre-order, kök ilk)"""
    lines = [f"{t.child_symbol}{separator}{t.parent_id}{separator}{t.relation.value}"
             for t in to_tuples(tree)]
    return "\n".join(lines)


def parse_tuple_lines(lines, separator='\t'):
    tuples = []
    for number, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        fields = line.split(separator)
        if len(fields) != 3:
            raise InvalidTree(f"tuple satırı {number}: 3 alan bekleniyordu, {len(fields)} bulundu")
        symbol, parent, relation = fields
        try:
            tuples.append(SltTuple(symbol, int(parent), Relation.parse(relation.strip())))
        except ValueError as e:
            raise InvalidTree(f"tuple satırı {number}: {e}") from e
    return tuples


def load_tuples(text, direction_tag=L2R, separator='\t'):
    """Tuple metninden ağaç oku"""
    return from_tuples(parse_tuple_lines(text.splitlines(), separator), direction_tag)


def encode_tuple_field(tree):
    """Manifest sütunu: tuple'lar ';' ile, alanlar boşlukla ayrılır"""
    return ";".join(dump_tuples(tree, separator=' ').split("\n"))


def decode_tuple_field(text, direction_tag=L2R):
    return load_tuples(text.replace(";", "\n"), direction_tag, separator=' ')
