class Config:
    # Dosya Adları
    MANIFEST_NAME = "manifest.tsv"
    CHECKPOINT_NAME = "model.mtck"
    SIDECAR_NAME = "model.cfg"
    TRAIN_LOG_NAME = "train_log.csv"
    LOG_DIR = "logs"

    # Özel token'lar (id sırası sabit)
    PAD = "<pad>"
    SOS = "<sos>"
    EOS = "<eos>"
    CONST = "<const>"
    SPECIAL_TOKENS = [PAD, SOS, EOS, CONST]

    # Yapısal token'lar
    OPEN = "{"
    CLOSE = "}"
    SUP_MARK = "^"
    SUB_MARK = "_"
    FRAC = "\\frac"
    SQRT = "\\sqrt"

    # Varsayılan sembol alfabesi (~30 sınıf)
    DEFAULT_SYMBOLS = [
        '0', '1', '2', '3', '4', '5', '6', '7', '8', '9',
        'a', 'b', 'c', 'l', 'n', 'o', 'x', 'y', 'z',
        '+', '-', '=',
        FRAC, SQRT,
    ]
    AMBIGUOUS_PAIRS = [('x', 'n'), ('0', 'o'), ('1', 'l')]

    # Checkpoint formatı
    CHECKPOINT_MAGIC = b"MTCK"
    CHECKPOINT_VERSION = 1

    # Logging
    LOG_LEVEL = "INFO"
    LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
