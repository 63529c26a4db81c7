"""State-vector verification path for the overlap posterior.

This module reconstructs the block-sum posterior of :mod:`qlr.quantum`
through explicit mechanics instead of the closed-form ratio: orthonormalize
each hypothesis's feature states against its overlap metric (Gram-Schmidt),
solve for the amplitudes ``b`` the contingency table demands, and read
posteriors off squared amplitudes.  Agreement between the two paths is the
package's core correctness check, exercised by :func:`cross_path_suite`.

Per hypothesis ``a`` the basis rows ``A[a]`` satisfy

    A[a] @ c[a] @ A[a].T = I          (orthonormality)

and the amplitudes ``b[a] = A[a] @ c[a] @ sqrt(x[:, a])`` satisfy the
back-substitution identity ``A[a].T @ b[a] = sqrt(x[:, a])``.  The sum of
squares of ``b[a]`` then equals the direct double sum
``sum_{i,j} sqrt(x[i,a] x[j,a]) c[a][i][j]``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .classical import PosteriorDistribution, _from_weights
from .errors import BadIndex, InvalidBasis, NotPositiveDefinite, ShapeMismatch
from .quantum import (
    CheckResult,
    ConstraintReport,
    OverlapMatrix,
    PD_EIGENVALUE_TOL,
    _CheckAccumulator,
    posterior_general,
)
from .tables import ContingencyTable, new_table

# Residual ceiling for the orthonormality and back-substitution identities.
RESIDUAL_TOL = 1e-10


@dataclass(frozen=True)
class OrthonormalBasis:
    """Per-hypothesis change-of-basis matrices orthonormalizing an overlap.

    ``matrices[a]`` holds basis row vectors for hypothesis ``a`` expressed in
    the original (overlapping) feature states.
    """

    matrices: np.ndarray
    source_overlap: OverlapMatrix

    def __post_init__(self):
        a = np.asarray(self.matrices, dtype=float)
        c = self.source_overlap.c
        if a.shape != c.shape:
            raise InvalidBasis(
                f"basis shape {a.shape} does not match overlap shape {c.shape}"
            )
        a = a.copy()
        a.setflags(write=False)
        object.__setattr__(self, "matrices", a)
        residual = self.residual()
        if not residual <= RESIDUAL_TOL:
            raise InvalidBasis(
                f"orthonormality residual {residual!r} exceeds {RESIDUAL_TOL}"
            )

    @property
    def n(self) -> int:
        return self.matrices.shape[0]

    @property
    def m(self) -> int:
        return self.matrices.shape[1]

    def residual(self) -> float:
        """Largest absolute entry of ``A c A^T - I`` over all hypotheses."""
        eye = np.eye(self.m)
        worst = 0.0
        for a in range(self.n):
            mat = self.matrices[a]
            deviation = np.abs(mat @ self.source_overlap.c[a] @ mat.T - eye)
            worst = max(worst, float(deviation.max()))
        return worst


@dataclass(frozen=True)
class StateVector:
    """Amplitudes of the table's state in an orthonormalized basis.

    ``b[a][i]`` is the amplitude of hypothesis ``a``'s i-th orthonormal
    vector; ``normalization`` caches the total sum of squares.
    """

    b: np.ndarray
    normalization: float

    def __post_init__(self):
        b = np.asarray(self.b, dtype=float)
        if b.ndim != 2:
            raise ShapeMismatch(f"amplitudes must be a 2-D family, got shape {b.shape}")
        b = b.copy()
        b.setflags(write=False)
        object.__setattr__(self, "b", b)
        total = float(np.sum(b * b))
        if abs(self.normalization - total) > RESIDUAL_TOL * max(1.0, abs(total)):
            raise ShapeMismatch(
                f"normalization {self.normalization!r} does not equal the "
                f"sum of squared amplitudes {total!r}"
            )

    def hypothesis_norms(self) -> tuple[float, ...]:
        """Per-hypothesis sums of squared amplitudes."""
        return tuple(float(v) for v in np.sum(self.b * self.b, axis=1))


def gram_schmidt_basis(overlap: OverlapMatrix) -> OrthonormalBasis:
    """Orthonormalize each hypothesis's feature states against its metric.

    Uses modified Gram-Schmidt in the ``c[a]`` inner product, processing
    features in index order, with one re-orthogonalization pass per vector
    for stability.

    Raises:
        NotPositiveDefinite: some hypothesis's Gram matrix has an eigenvalue
            at or below ``PD_EIGENVALUE_TOL``, so no real orthonormal basis
            exists.  The block-sum posterior remains available.
    """
    c = overlap.c
    n, m = overlap.n, overlap.m
    basis = np.zeros((n, m, m))
    for a in range(n):
        gram = c[a]
        eigenvalues = np.linalg.eigvalsh(gram)
        if not np.all(eigenvalues > PD_EIGENVALUE_TOL):
            raise NotPositiveDefinite(a)
        rows = basis[a]
        for i in range(m):
            v = np.zeros(m)
            v[i] = 1.0
            for _ in range(2):
                for k in range(i):
                    v = v - (v @ gram @ rows[k]) * rows[k]
            norm_sq = float(v @ gram @ v)
            if not norm_sq > PD_EIGENVALUE_TOL:
                raise NotPositiveDefinite(a)
            rows[i] = v / math.sqrt(norm_sq)
    return OrthonormalBasis(basis, overlap)


def solve_b_coefficients(table: ContingencyTable, basis: OrthonormalBasis) -> StateVector:
    """Amplitudes the contingency table requires in the orthonormal basis.

    ``b[a] = A[a] @ c[a] @ sqrt(x[:, a])``, which back-substitutes to the
    original feature amplitudes: ``A[a].T @ b[a] = sqrt(x[:, a])``.

    Raises:
        ShapeMismatch: basis dimensions disagree with the table.
    """
    if (basis.n, basis.m) != (table.n, table.m):
        raise ShapeMismatch(
            f"basis covers {basis.m} features x {basis.n} hypotheses, "
            f"table is {table.m}x{table.n}"
        )
    b = np.zeros((table.n, table.m))
    for a in range(table.n):
        s = np.sqrt(table.x[:, a])
        b[a] = basis.matrices[a] @ basis.source_overlap.c[a] @ s
    return StateVector(b, float(np.sum(b * b)))


def posterior_via_wavefunction(
    table: ContingencyTable, overlap: OverlapMatrix
) -> PosteriorDistribution:
    """Posterior from squared amplitudes, prior-weighted per hypothesis.

    ``P(H_a) ∝ w_a * sum_i b[a][i]**2`` with ``w_a = priors[a] * n``, the
    same weighting as :func:`qlr.quantum.posterior_general`; the two must
    agree within ``RESIDUAL_TOL`` whenever the overlap is positive definite.

    Raises:
        ShapeMismatch: overlap dimensions disagree with the table.
        NotPositiveDefinite: no orthonormal basis exists for some hypothesis.
    """
    if overlap.c.shape != (table.n, table.m, table.m):
        raise ShapeMismatch(
            f"overlap shape {overlap.c.shape} does not match "
            f"{(table.n, table.m, table.m)} for a {table.m}x{table.n} table"
        )
    basis = gram_schmidt_basis(overlap)
    state = solve_b_coefficients(table, basis)
    w = table.priors * table.n
    norms = state.hypothesis_norms()
    return _from_weights(
        [float(w[a]) * norms[a] for a in range(table.n)], "wavefunction"
    )


def posterior_independent(table: ContingencyTable, feature: int) -> PosteriorDistribution:
    """Single-feature posterior via explicit projection and collapse.

    Builds the joint state with amplitudes ``sqrt(priors[a]) * sqrt(x[i, a])``
    over orthogonal hypothesis-feature states, projects onto the observed
    feature's subspace, and renormalizes the squared amplitudes.  Agrees with
    the direct single-feature update to rounding error; realizing that
    agreement is this function's purpose.

    Raises:
        BadIndex: feature index out of range.
    """
    if not 0 <= feature < table.m:
        raise BadIndex(f"feature index {feature} out of range for {table.m} features")
    amplitudes = [
        math.sqrt(float(table.priors[a])) * math.sqrt(float(table.x[feature, a]))
        for a in range(table.n)
    ]
    return _from_weights([amp * amp for amp in amplitudes], "wavefunction")


def _random_positive_definite_overlap(
    rng: np.random.Generator, n: int, m: int
) -> OverlapMatrix:
    """Random per-hypothesis overlaps with eigenvalues at least 1/2.

    Averaging a unit-diagonal Gram matrix of unit rows with the identity
    keeps every eigenvalue in [1/2, 3/2] and every off-diagonal inside
    (-1/2, 1/2).
    """
    c = np.zeros((n, m, m))
    for a in range(n):
        g = rng.standard_normal((m, m + 1))
        g /= np.linalg.norm(g, axis=1, keepdims=True)
        gram = (g @ g.T + np.eye(m)) / 2.0
        gram = (gram + gram.T) / 2.0
        np.fill_diagonal(gram, 1.0)
        c[a] = gram
    return OverlapMatrix(c)


def _random_table(rng: np.random.Generator, m: int, n: int) -> ContingencyTable:
    x = 1.0 - rng.random((m, n))
    raw = 1.0 - rng.random(n)
    return new_table(x, raw / raw.sum())


def cross_path_suite(sample_count: int, seed: int) -> ConstraintReport:
    """Randomized agreement checks between the two posterior paths.

    Per sample, draws a random table (2-3 features, 2-4 hypotheses), random
    positive-definite overlaps, and random priors, then checks:

    - the state-vector posterior matches the block-sum posterior (1e-10);
    - orthonormality residual of the constructed basis (1e-10);
    - back-substitution residual ``A^T b - sqrt(x)`` (1e-10);
    - the cached normalization matches the explicit double sum
      ``sum sqrt(x_i x_j) c_ij`` (1e-10);
    - the single-feature projection path matches the direct single-feature
      update (1e-14);
    - complementarity of the state-vector posterior (1e-12).
    """
    if sample_count < 1:
        raise ValueError(f"sample_count must be >= 1, got {sample_count}")
    rng = np.random.default_rng(seed)
    checks = {
        "paths_agree": _CheckAccumulator(
            "paths_agree",
            "state-vector posterior equals block-sum posterior",
            RESIDUAL_TOL,
        ),
        "orthonormality": _CheckAccumulator(
            "orthonormality", "A c A^T = I for every hypothesis", RESIDUAL_TOL
        ),
        "back_substitution": _CheckAccumulator(
            "back_substitution", "A^T b recovers sqrt(x)", RESIDUAL_TOL
        ),
        "normalization": _CheckAccumulator(
            "normalization",
            "sum of squared amplitudes equals the explicit double sum",
            RESIDUAL_TOL,
        ),
        "projection_single_feature": _CheckAccumulator(
            "projection_single_feature",
            "projection-collapse posterior equals the direct single-feature update",
            1e-14,
        ),
        "complementarity": _CheckAccumulator(
            "complementarity", "state-vector posterior sums to 1", 1e-12
        ),
    }
    for _ in range(sample_count):
        m = int(rng.integers(2, 4))
        n = int(rng.integers(2, 5))
        table = _random_table(rng, m, n)
        overlap = _random_positive_definite_overlap(rng, n, m)

        basis = gram_schmidt_basis(overlap)
        checks["orthonormality"].record(basis.residual())
        state = solve_b_coefficients(table, basis)
        back = 0.0
        double_sum = 0.0
        for a in range(n):
            s = np.sqrt(table.x[:, a])
            back = max(
                back, float(np.abs(basis.matrices[a].T @ state.b[a] - s).max())
            )
            double_sum += float(s @ overlap.c[a] @ s)
        checks["back_substitution"].record(back)
        checks["normalization"].record(abs(state.normalization - double_sum))

        wf = posterior_via_wavefunction(table, overlap)
        general = posterior_general(table, overlap)
        checks["paths_agree"].record(
            max(
                abs(p - q)
                for p, q in zip(wf.probabilities, general.probabilities)
            )
        )
        checks["complementarity"].record(abs(sum(wf.probabilities) - 1.0))

        feature = int(rng.integers(0, m))
        projected = posterior_independent(table, feature)
        direct = np.array(
            [float(table.priors[a]) * float(table.x[feature, a]) for a in range(n)]
        )
        direct /= direct.sum()
        checks["projection_single_feature"].record(
            max(abs(p - q) for p, q in zip(projected.probabilities, direct))
        )

    return ConstraintReport(
        checks=tuple(acc.result() for acc in checks.values()),
        sample_count=sample_count,
        seed=seed,
    )
