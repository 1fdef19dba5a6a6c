"""Recovery and ranking metrics."""

import numpy as np
from scipy.stats import rankdata

from .errors import DegenerateInputError, DimensionError, InputError

__all__ = ["auc", "rse"]


def rse(x, reference):
    """Relative square error ``||x - reference||_F / ||reference||_F``.

    A zero reference is only accepted when ``x`` equals it exactly, in which
    case the error is 0.
    """
    x = np.asarray(x, dtype=np.float64)
    reference = np.asarray(reference, dtype=np.float64)
    if x.shape != reference.shape:
        raise DimensionError(f"shapes differ: {x.shape} vs {reference.shape}")
    num = float(np.linalg.norm(np.ravel(x - reference)))
    den = float(np.linalg.norm(np.ravel(reference)))
    if den == 0.0:
        if num == 0.0:
            return 0.0
        raise DegenerateInputError("reference tensor has zero norm")
    return num / den


def auc(scores, labels):
    """Area under the ROC curve as the Mann-Whitney statistic.

    Equals ``P(score+ > score-) + 0.5 * P(score+ == score-)`` over all
    positive/negative pairs, so ties are handled exactly.
    """
    scores = np.asarray(scores, dtype=np.float64).ravel()
    labels = np.asarray(labels).ravel()
    if scores.shape != labels.shape:
        raise DimensionError(f"{scores.size} scores but {labels.size} labels")
    if not np.all(np.isfinite(scores)):
        raise InputError("scores contain NaN or Inf")
    if not np.all((labels == 0) | (labels == 1)):
        raise InputError("labels must be 0 or 1")
    pos = labels == 1
    n_pos = int(pos.sum())
    n_neg = labels.size - n_pos
    if n_pos == 0 or n_neg == 0:
        raise InputError("AUC needs at least one positive and one negative label")
    ranks = rankdata(scores)  # average ranks for ties
    u = ranks[pos].sum() - n_pos * (n_pos + 1) / 2.0
    return float(u / (n_pos * n_neg))
