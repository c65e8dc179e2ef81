"""Sleep stage vocabulary and annotation-schema alignment."""

from enum import IntEnum

from .errors import LabelError


class SleepStage(IntEnum):
    """The five scoring classes. Integer order is fixed and used everywhere
    a class index is needed (confusion matrices, model outputs)."""

    W = 0
    N1 = 1
    N2 = 2
    N3 = 3
    REM = 4


N_STAGES = 5
STAGE_NAMES = [s.name for s in SleepStage]

# Marker for epochs that carry an annotation but must not be scored.
EXCLUDED = None

_AASM_MAP = {
    "W": SleepStage.W,
    "WAKE": SleepStage.W,
    "N1": SleepStage.N1,
    "N2": SleepStage.N2,
    "N3": SleepStage.N3,
    "R": SleepStage.REM,
    "REM": SleepStage.REM,
}

# Older scoring vocabulary: stage 4 folds into N3, movement/unknown epochs
# are flagged for exclusion rather than guessed.
_RK_MAP = {
    "SLEEP STAGE W": SleepStage.W,
    "SLEEP STAGE 1": SleepStage.N1,
    "SLEEP STAGE 2": SleepStage.N2,
    "SLEEP STAGE 3": SleepStage.N3,
    "SLEEP STAGE 4": SleepStage.N3,
    "SLEEP STAGE R": SleepStage.REM,
    "SLEEP STAGE ?": EXCLUDED,
    "MOVEMENT TIME": EXCLUDED,
    "W": SleepStage.W,
    "1": SleepStage.N1,
    "2": SleepStage.N2,
    "3": SleepStage.N3,
    "4": SleepStage.N3,
    "R": SleepStage.REM,
    "?": EXCLUDED,
    "M": EXCLUDED,
    "MOVEMENT": EXCLUDED,
    "UNKNOWN": EXCLUDED,
}

SCHEMAS = {"AASM": _AASM_MAP, "RK": _RK_MAP}


def align_stages(raw_labels, schema):
    """Map raw annotation strings onto the five-class vocabulary.

    Returns a list whose entries are SleepStage values, or EXCLUDED (None)
    for movement/unknown epochs that must be dropped before scoring.
    Raises LabelError naming the offending token and its index.
    """
    schema = schema.upper()
    if schema not in SCHEMAS:
        raise LabelError(f"unknown annotation schema {schema!r}; expected AASM or RK")
    table = SCHEMAS[schema]
    out = []
    for i, raw in enumerate(raw_labels):
        key = str(raw).strip().upper()
        if key not in table:
            raise LabelError(f"unknown {schema} label {raw!r} at epoch {i}")
        out.append(table[key])
    return out
