"""Classical likelihood-ratio estimators.

Four estimators with increasing awareness of feature co-dependence:

- ``bayes_posterior``: single-feature conditioning, prior * likelihood.
- ``naive_posterior``: multiplies marginals as if features were independent.
- ``mean_frequency_posterior``: mean of the feasible joint-count range per
  hypothesis, treated as a frequency.
- ``mean_range_posterior``: midpoint of the extreme posterior probabilities
  implied by the joint-count ranges (binary hypotheses only).

The two mean-based estimators consume integer :class:`~qlr.tables.CountTable`
data because the feasible ranges only exist for counts.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import BadIndex, DegenerateRange, InvalidPriors, Unsupported
from .tables import ContingencyTable, CountTable, PRIOR_SUM_TOL, intersection_range

METHODS = frozenset(
    {"bayes", "naive", "mean_frequency", "mean_range", "quantum", "wavefunction", "oracle_mean"}
)

_SUM_TOL = 1e-12


@dataclass(frozen=True)
class PosteriorDistribution:
    """Per-hypothesis probabilities summing to 1, tagged with the producing
    method.

    ``argmax_index`` is always the smallest index attaining the maximum, so
    ties resolve deterministically.
    """

    probabilities: tuple[float, ...]
    method: str
    argmax_index: int

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method tag {self.method!r}")
        p = self.probabilities
        if any(not (0.0 <= v <= 1.0) for v in p):
            raise ValueError(f"probabilities must lie in [0, 1], got {p}")
        if abs(sum(p) - 1.0) > _SUM_TOL:
            raise ValueError(f"probabilities must sum to 1 within {_SUM_TOL}, got {sum(p)!r}")
        if self.argmax_index != _argmax(p):
            raise ValueError("argmax_index must be the smallest index attaining the maximum")

    @property
    def n(self) -> int:
        return len(self.probabilities)


def _argmax(values: Sequence[float]) -> int:
    return max(range(len(values)), key=lambda k: (values[k], -k))


def _from_weights(weights: Sequence[float], method: str) -> PosteriorDistribution:
    """Normalize nonnegative weights into a posterior."""
    total = sum(weights)
    if not total > 0.0:
        raise DegenerateRange(f"cannot normalize weights with total {total!r}")
    probs = tuple(w / total for w in weights)
    return PosteriorDistribution(probs, method, _argmax(probs))


def _resolved_priors(counts: CountTable, priors: Sequence[float] | None) -> np.ndarray:
    """Explicit priors, or population shares when omitted."""
    if priors is None:
        return counts.populations / counts.populations.sum()
    arr = np.asarray(priors, dtype=float)
    if arr.shape != (counts.n,):
        raise InvalidPriors(f"priors must have length {counts.n}, got shape {arr.shape}")
    if np.any(arr < 0.0) or not np.all(np.isfinite(arr)):
        raise InvalidPriors(f"priors must be finite and nonnegative, got {arr.tolist()}")
    if abs(float(arr.sum()) - 1.0) > PRIOR_SUM_TOL:
        raise InvalidPriors(f"priors must sum to 1 within {PRIOR_SUM_TOL}")
    return arr


def bayes_posterior(table: ContingencyTable, feature: int) -> PosteriorDistribution:
    """Posterior from a single observed feature:
    ``P(H_a | D_i) = prior_a * x[i, a] / sum_b prior_b * x[i, b]``.

    Raises:
        BadIndex: feature index out of range.
    """
    if not 0 <= feature < table.m:
        raise BadIndex(f"feature index {feature} out of range for m={table.m}")
    weights = [float(table.priors[a]) * float(table.x[feature, a]) for a in range(table.n)]
    return _from_weights(weights, "bayes")


def naive_posterior(table: ContingencyTable) -> PosteriorDistribution:
    """Posterior that ignores feature co-dependence:
    ``P(H_a | all D) ∝ prior_a * prod_i x[i, a]``.
    """
    weights = []
    for a in range(table.n):
        w = float(table.priors[a])
        for i in range(table.m):
            w *= float(table.x[i, a])
        weights.append(w)
    return _from_weights(weights, "naive")


def mean_frequency_posterior(
    counts: CountTable, priors: Sequence[float] | None = None
) -> PosteriorDistribution:
    """Posterior from the mean of each hypothesis's feasible joint-count range.

    For each hypothesis the mean of all feasible joint counts of the two
    features, divided by the population, plays the role of a likelihood;
    priors (population shares by default) multiply in as usual.

    Raises:
        Unsupported: the table does not have exactly 2 features.
        DegenerateRange: every hypothesis has mean frequency 0.
    """
    if counts.m != 2:
        raise Unsupported(f"mean-frequency estimator needs exactly 2 features, got {counts.m}")
    if counts.n < 2:
        raise Unsupported(f"need at least 2 hypotheses, got {counts.n}")
    w = _resolved_priors(counts, priors)
    weights = []
    for a in range(counts.n):
        r = intersection_range(counts, a, 0, 1)
        mu = (r.lo + r.hi) / 2 / int(counts.populations[a])
        weights.append(float(w[a]) * mu)
    return _from_weights(weights, "mean_frequency")


def mean_range_posterior(
    counts: CountTable, priors: Sequence[float] | None = None
) -> PosteriorDistribution:
    """Posterior from the midpoint of the extreme joint-count probabilities
    (binary hypotheses only).

    The smallest defensible value of P(H_1) pairs hypothesis 1's lower joint
    count with hypothesis 2's upper one, and vice versa for the largest;
    the estimate is the midpoint of those two extremes.

    Raises:
        Unsupported: shape is not 2 features x 2 hypotheses.
        DegenerateRange: an extreme pairing has a zero denominator.
    """
    if counts.m != 2 or counts.n != 2:
        raise Unsupported(
            f"mean-range estimator needs 2 features x 2 hypotheses, got {counts.m}x{counts.n}"
        )
    w = _resolved_priors(counts, priors)
    r1 = intersection_range(counts, 0, 0, 1)
    r2 = intersection_range(counts, 1, 0, 1)
    p1, p2 = (int(v) for v in counts.populations)
    low = _weighted_count_ratio(r1.lo, r2.hi, p1, p2, float(w[0]), float(w[1]))
    high = _weighted_count_ratio(r1.hi, r2.lo, p1, p2, float(w[0]), float(w[1]))
    prob1 = (low + high) / 2
    probs = (prob1, 1.0 - prob1)
    return PosteriorDistribution(probs, "mean_range", _argmax(probs))


def _weighted_count_ratio(k1: int, k2: int, pop1: int, pop2: int, w1: float, w2: float) -> float:
    """P(H_1) from one joint-count pairing: prior-weighted frequency ratio.

    With population-share priors this reduces to the raw count ratio
    ``k1 / (k1 + k2)``.
    """
    a = w1 * (k1 / pop1)
    b = w2 * (k2 / pop2)
    if a + b <= 0.0:
        raise DegenerateRange(
            f"joint-count pairing ({k1}, {k2}) leaves nothing to normalize"
        )
    return a / (a + b)
