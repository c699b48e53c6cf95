"""Convergence trace export."""

from collections.abc import Sequence

import pandas as pd

TRACE_COLUMNS = ("iteration", "global_best_fitness")


def export_trace_csv(trace: Sequence[float]) -> str:
    """``iteration,global_best_fitness`` rows, iterations counted from 1, floats at full precision."""
    frame = pd.DataFrame(
        {
            "iteration": range(1, len(trace) + 1),
            "global_best_fitness": [repr(float(value)) for value in trace],
        },
        columns=list(TRACE_COLUMNS),
    )
    return frame.to_csv(index=False, lineterminator="\n")
