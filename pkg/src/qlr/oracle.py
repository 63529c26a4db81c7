"""Brute-force enumeration ground truth for ranges and mean estimators.

Everything here is deliberately unsophisticated: joint-count feasibility is
decided by writing out the four cells of the 2x2 joint table and checking
signs, and the mean estimators are recomputed by explicit enumeration over
those feasible counts.  The point is to cross-validate the closed forms in
:mod:`qlr.tables` and :mod:`qlr.classical` against something too simple to
share their bugs.
"""

from __future__ import annotations

from dataclasses import dataclass

from .classical import PosteriorDistribution, _argmax, _from_weights, _resolved_priors
from .errors import DegenerateRange, Unsupported
from .tables import CountTable, _check_pair


@dataclass(frozen=True)
class HypothesisEnumeration:
    """Feasible joint counts for one hypothesis, with frequency summaries.

    ``endpoint_probabilities`` are the smallest and largest feasible counts
    divided by the hypothesis population; ``mean_frequency`` is the average
    feasible count divided by the population.
    """

    feasible: tuple[int, ...]
    endpoint_probabilities: tuple[float, float]
    mean_frequency: float


@dataclass(frozen=True)
class EnumerationResult:
    """Per-hypothesis enumeration of feasible joint counts for one
    feature pair."""

    per_hypothesis: tuple[HypothesisEnumeration, ...]


def enumerate_joint_counts(
    counts: CountTable, hypothesis: int, i: int, j: int
) -> list[int]:
    """Every joint count k for which the 2x2 joint table has no negative cell.

    The four cells are k (both features), c_i - k, c_j - k (one feature
    only), and pop - c_i - c_j + k (neither).  No interval arithmetic: each
    candidate k from 0 to the population is tested directly.

    Raises:
        BadIndex: invalid hypothesis or feature indices, or i == j.
    """
    _check_pair(counts, hypothesis, i, j)
    c_i = int(counts.counts[i, hypothesis])
    c_j = int(counts.counts[j, hypothesis])
    pop = int(counts.populations[hypothesis])
    feasible = []
    for k in range(pop + 1):
        if k <= c_i and k <= c_j and pop - c_i - c_j + k >= 0:
            feasible.append(k)
    return feasible


def enumerate_table(counts: CountTable, i: int = 0, j: int = 1) -> EnumerationResult:
    """Enumerate the feature pair (i, j) for every hypothesis."""
    rows = []
    for a in range(counts.n):
        feasible = enumerate_joint_counts(counts, a, i, j)
        pop = int(counts.populations[a])
        endpoints = (feasible[0] / pop, feasible[-1] / pop)
        mean = sum(feasible) / len(feasible) / pop
        rows.append(HypothesisEnumeration(tuple(feasible), endpoints, mean))
    return EnumerationResult(tuple(rows))


@dataclass(frozen=True)
class OracleEstimates:
    """Mean estimators recomputed by enumeration.

    ``mean_range`` and ``enumeration_mean`` exist only for binary
    hypotheses; ``skipped_pairs`` counts joint-count pairs dropped from the
    enumeration mean because both counts were zero.
    """

    mean_frequency: PosteriorDistribution
    mean_range: PosteriorDistribution | None
    enumeration_mean: PosteriorDistribution | None
    skipped_pairs: int


def oracle_mean_estimators(counts, priors=None) -> OracleEstimates:
    """Recompute the mean estimators by explicit enumeration.

    The mean-frequency estimator averages each hypothesis's feasible joint
    counts directly; the mean-range estimator scans every feasible
    joint-count pair for the extreme prior-weighted ratios; the enumeration
    mean averages P(H_1) = k1 / (k1 + k2) uniformly over all pairs.

    Raises:
        Unsupported: not 2 features, or fewer than 2 hypotheses.
        DegenerateRange: nothing to normalize (all feasible counts zero, or
            an extreme pairing with a zero denominator).
    """
    if counts.m != 2:
        raise Unsupported(f"enumeration needs exactly 2 features, got {counts.m}")
    if counts.n < 2:
        raise Unsupported(f"enumeration needs at least 2 hypotheses, got {counts.n}")
    w = _resolved_priors(counts, priors)
    enum = enumerate_table(counts, 0, 1)

    weights = [
        float(w[a]) * enum.per_hypothesis[a].mean_frequency for a in range(counts.n)
    ]
    total = sum(weights)
    if not total > 0.0:
        raise DegenerateRange("every hypothesis has mean joint frequency zero")
    probs = tuple(v / total for v in weights)
    mean_frequency = PosteriorDistribution(probs, "mean_frequency", _argmax(probs))

    if counts.n != 2:
        return OracleEstimates(mean_frequency, None, None, 0)

    f1 = enum.per_hypothesis[0].feasible
    f2 = enum.per_hypothesis[1].feasible
    p1, p2 = (int(v) for v in counts.populations)
    w1, w2 = float(w[0]), float(w[1])

    def weighted_ratio(k1: int, k2: int) -> float | None:
        a = w1 * (k1 / p1)
        b = w2 * (k2 / p2)
        if a + b <= 0.0:
            return None
        return a / (a + b)

    # The extreme pairings define the range; if either is degenerate the
    # range itself is, matching the closed-form estimator's contract.
    if weighted_ratio(min(f1), max(f2)) is None or weighted_ratio(max(f1), min(f2)) is None:
        raise DegenerateRange(
            "an extreme joint-count pairing leaves nothing to normalize"
        )
    ratios = [
        r for k1 in f1 for k2 in f2 if (r := weighted_ratio(k1, k2)) is not None
    ]
    prob1 = (min(ratios) + max(ratios)) / 2
    range_probs = (prob1, 1.0 - prob1)
    mean_range = PosteriorDistribution(range_probs, "mean_range", _argmax(range_probs))

    plain = []
    skipped = 0
    for k1 in f1:
        for k2 in f2:
            if k1 + k2 == 0:
                skipped += 1
                continue
            plain.append(k1 / (k1 + k2))
    if not plain:
        raise DegenerateRange("every feasible joint-count pair sums to zero")
    mean1 = sum(plain) / len(plain)
    enum_probs = (mean1, 1.0 - mean1)
    enumeration_mean = PosteriorDistribution(
        enum_probs, "oracle_mean", _argmax(enum_probs)
    )

    return OracleEstimates(mean_frequency, mean_range, enumeration_mean, skipped)
