class RecognitionError(Exception):
    """Tüm domain hatalarının kökü"""


# --- expr-core ---

class LatexParseError(RecognitionError):
    def __init__(self, message, offset):
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset


class UnbalancedBraces(LatexParseError):
    pass


class UnknownCommand(LatexParseError):
    pass


class EmptyGroup(LatexParseError):
    pass


class DanglingScript(LatexParseError):
    pass


class DoubleScript(LatexParseError):
    pass


class InvalidTree(RecognitionError):
    def __init__(self, message, violations=()):
        super().__init__(message)
        self.violations = list(violations)


class MalformedSequence(RecognitionError):
    def __init__(self, message, index):
        super().__init__(f"{message} (token index {index})")
        self.index = index


# --- numerics ---

class NumericsError(RecognitionError):
    pass


class ShapeMismatch(NumericsError):
    def __init__(self, op_name, shapes):
        super().__init__(f"{op_name}: uyumsuz şekiller {shapes}")
        self.op_name = op_name
        self.shapes = shapes


class NonFiniteResult(NumericsError):
    def __init__(self, op_name):
        super().__init__(f"{op_name}: NaN/Inf sonuç üretildi")
        self.op_name = op_name


class DetachedLoss(NumericsError):
    pass


class CheckpointCorrupt(NumericsError):
    pass


# --- model ---

class ModelError(RecognitionError):
    pass


class ConfigError(ModelError):
    pass


class ImageTooSmall(ModelError):
    pass


class SlmDisabled(ModelError):
    pass


class EmptyContext(ModelError):
    pass


class ContextMissing(ModelError):
    pass


class DecodeFailed(ModelError):
    pass


# --- data ---

class DataError(RecognitionError):
    pass


class GrammarExhausted(DataError):
    pass


class MissingGlyph(DataError):
    pass


class DatasetIoError(DataError):
    pass


class ManifestCorrupt(DataError):
    def __init__(self, message, line=None):
        super().__init__(f"{message} (line {line})" if line is not None else message)
        self.line = line


# --- train / eval ---

class TrainingError(RecognitionError):
    pass


class NonFiniteGradient(TrainingError):
    pass


class TrainingAborted(TrainingError):
    def __init__(self, message, batch_ids=()):
        super().__init__(f"{message} (batch ids {list(batch_ids)})")
        self.batch_ids = list(batch_ids)


class EvaluationError(RecognitionError):
    pass


class LengthMismatch(EvaluationError):
    pass


class EvaluationInvariantError(EvaluationError):
    pass


class TrendGateFailed(EvaluationError):
    pass
