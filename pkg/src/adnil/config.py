"""Evaluation budgets.  ADNIL_BUDGET overrides the default."""

import os

DEFAULT_BUDGET = 10**7
DEFAULT_GRASSMANN_BUDGET = 8
MAX_GRASSMANN_BUDGET = 64
MAX_AMBIENT_DIM = 1024


def evaluation_budget() -> int:
    raw = os.environ.get("ADNIL_BUDGET")
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            pass
    return DEFAULT_BUDGET
