"""
Per-iteration decay rates from recorded curves.
"""

import math
from typing import Sequence, Union

import numpy as np

from private_gossip.harness.schemas import FitResult, Trace
from private_gossip.utils.errors import InvalidParameterError


def fit_curve(t: Sequence[float], values: Sequence[float], window: float = 0.5) -> FitResult:
    """
    Least-squares slope of log(values) against t, exponentiated.

    Only the positive prefix of the curve is considered: points up to the last
    positive value. Floored zeros after it carry no rate information, so a
    curve that decays below the floor is fitted on its prefix and is not
    flagged. The fit uses the trailing ``window`` fraction of that prefix and
    skips any zero inside it. Rate 0 with ``degenerate`` set is returned only
    when fewer than two usable points remain.
    """
    if not 0.0 < window <= 1.0:
        raise InvalidParameterError(f"window must lie in (0, 1], got {window}")
    ts = np.asarray(t, dtype=float)
    ys = np.asarray(values, dtype=float)
    if ts.shape != ys.shape:
        raise InvalidParameterError("t and values must have the same length")

    positive = np.flatnonzero(ys > 0.0)
    if positive.size < 2:
        return FitResult(rate=0.0, degenerate=True, points=int(positive.size))

    prefix = positive[-1] + 1
    start = int(math.floor((1.0 - window) * prefix))
    tail_t = ts[start:prefix]
    tail_y = ys[start:prefix]
    keep = tail_y > 0.0
    if keep.sum() < 2:
        return FitResult(rate=0.0, degenerate=True, points=int(keep.sum()))

    slope = np.polyfit(tail_t[keep], np.log(tail_y[keep]), 1)[0]
    return FitResult(rate=float(min(1.0, math.exp(slope))), points=int(keep.sum()))


def fit_rate(trace: Union[Trace, Sequence[float]], window: float = 0.5, column: str = "relative_error") -> FitResult:
    """
    Fitted tail rate of a Trace column, or of a bare curve recorded at t = 0, 1, 2, ...
    """
    if isinstance(trace, Trace):
        return fit_curve(trace.t, getattr(trace, column), window)
    return fit_curve(range(len(trace)), trace, window)
