from slt.sequence import BRACKETED_SLT, TokenSequence, is_symbol_token, linearize
from utils.exceptions import LengthMismatch


def exprate(predictions, golds):
    """Gold ile düğüm düğüm özdeş tahmin oranı"""
    if len(predictions) != len(golds):
        raise LengthMismatch(f"tahmin sayısı {len(predictions)} != gold sayısı {len(golds)}")
    if not golds:
        return 0.0
    correct = sum(1 for pred, gold in zip(predictions, golds) if not pred.is_empty and pred == gold)
    return correct / len(golds)


def symbol_sequence(item):
    """Ağaç / TokenSequence / token listesinden yalnızca sembol token'ları"""
    if isinstance(item, TokenSequence):
        return item.symbols()
    if hasattr(item, 'nodes'):
        return [] if item.is_empty else linearize(item, BRACKETED_SLT).symbols()
    return [token for token in item if is_symbol_token(token)]


def prefix_suffix_accuracy(pred_tokens, gold_tokens, n):
    """(prefix_n, suffix_n); gold'u n'den kısa örnekler sayılmaz"""
    if len(pred_tokens) != len(gold_tokens):
        raise LengthMismatch(f"tahmin sayısı {len(pred_tokens)} != gold sayısı {len(gold_tokens)}")
    prefix_hits = suffix_hits = counted = 0
    for pred, gold in zip(pred_tokens, gold_tokens):
        pred, gold = symbol_sequence(pred), symbol_sequence(gold)
        if len(gold) < n:
            continue
        counted += 1
        if pred[:n] == gold[:n]:
            prefix_hits += 1
        if len(pred) >= n and pred[-n:] == gold[-n:]:
            suffix_hits += 1
    if counted == 0:
        return 0.0, 0.0
    return prefix_hits / counted, suffix_hits / counted


def short_gold_count(gold_tokens, n):
    return sum(1 for gold in gold_tokens if len(symbol_sequence(gold)) < n)
