"""Subject-level train/test partitioning."""

from __future__ import annotations

import numpy as np

from .errors import SplitError


def round_half_away(x: float) -> int:
    """round() with halves away from zero, the rule the retention and
    split counts are defined with (banker's rounding would break them)."""
    return int(np.floor(x + 0.5)) if x >= 0 else -int(np.floor(-x + 0.5))


def split_by_subject(records, train_fraction: float, seed: int):
    """Partition records into train/test at subject granularity.

    test count = max(1, round((1 - train_fraction) * n_subjects)),
    deterministic for a fixed seed. No subject ever spans both sides.
    """
    if not 0.0 < train_fraction < 1.0:
        raise SplitError(f"train_fraction must be in (0, 1), got {train_fraction}")
    subjects = [r.subject_id for r in records]
    if len(set(subjects)) != len(subjects):
        raise SplitError("subject ids must be unique")
    if len(subjects) < 2:
        raise SplitError("need at least 2 subjects to split")

    n = len(subjects)
    n_test = max(1, round_half_away((1.0 - train_fraction) * n))
    n_test = min(n_test, n - 1)

    rng = np.random.default_rng(seed)
    order = rng.permutation(sorted(subjects))
    test_ids = set(order[:n_test])

    train = [r for r in records if r.subject_id not in test_ids]
    test = [r for r in records if r.subject_id in test_ids]
    return train, test
