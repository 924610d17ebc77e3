"""Statistical kernels shared by the metric modules.

Everything here works on plain numpy arrays. Categorical variables arrive
as integer level codes; discretization of numericals into histogram bins
(Scott's rule over the pooled sample) happens here too so that the metric
modules agree on one binning.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import stats as sps

from .data import ColumnKind, NormalizationSpec, Table
from .errors import ValidationError


def ks_statistic(x, y) -> tuple[float, float]:
    """Two-sample Kolmogorov-Smirnov test.

    Returns (D, p) where D is the supremum of |ecdf_x - ecdf_y| and p comes
    from the asymptotic two-sample KS distribution.
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.size == 0 or y.size == 0:
        raise ValidationError("ks_statistic needs non-empty samples")
    res = sps.ks_2samp(x, y, alternative="two-sided", method="asymp")
    return float(res.statistic), float(min(res.pvalue, 1.0))


def tvd(x_codes, y_codes) -> float:
    """Total variation distance between two empirical level distributions.

    0.5 * sum over levels of |P(level) - Q(level)|, levels taken as the
    union of codes seen in either sample.
    """
    x = np.asarray(x_codes, dtype=np.int64)
    y = np.asarray(y_codes, dtype=np.int64)
    if x.size == 0 or y.size == 0:
        raise ValidationError("tvd needs non-empty samples")
    width = int(max(x.max(), y.max())) + 1
    p = np.bincount(x, minlength=width) / x.size
    q = np.bincount(y, minlength=width) / y.size
    return 0.5 * float(np.abs(p - q).sum())


def permutation_pvalue(x, y, statistic, n_perms: int = 1000, seed: int = 0) -> float:
    """One-sided permutation p-value for a two-sample statistic.

    p = (1 + #{permuted statistic >= observed}) / (n_perms + 1), the
    add-one form that can never return 0. The pooled sample is reshuffled
    with a generator seeded by ``seed``, so the value is reproducible.
    """
    x = np.asarray(x)
    y = np.asarray(y)
    observed = statistic(x, y)
    pool = np.concatenate([x, y])
    n = x.size
    rng = np.random.default_rng(seed)
    count = 0
    for _ in range(n_perms):
        perm = rng.permutation(pool)
        if statistic(perm[:n], perm[n:]) >= observed:
            count += 1
    return (1 + count) / (n_perms + 1)


def scott_bin_width(values) -> float:
    """Scott's normal reference bin width, 3.49 * s / cbrt(n)."""
    v = np.asarray(values, dtype=np.float64)
    if v.size < 2:
        return 0.0
    return 3.49 * float(np.std(v, ddof=1)) / float(np.cbrt(v.size))


def scott_bin_edges(values) -> np.ndarray:
    """Histogram edges spanning the sample, bin count from Scott's rule.

    Degenerate samples (constant, or fewer than two points) get a single
    bin. Edges always cover min..max so no observation falls outside.
    """
    v = np.asarray(values, dtype=np.float64)
    lo, hi = float(v.min()), float(v.max())
    width = scott_bin_width(v)
    if width <= 0.0 or hi <= lo:
        if hi <= lo:  # constant sample: any enclosing interval works
            return np.array([lo - 0.5, lo + 0.5])
        return np.array([lo, hi])
    n_bins = max(1, int(np.ceil((hi - lo) / width)))
    return np.linspace(lo, hi, n_bins + 1)


def binned_probabilities(x, y, edges) -> tuple[np.ndarray, np.ndarray]:
    """Normalized histogram mass of two samples over shared edges."""
    px, _ = np.histogram(np.asarray(x, dtype=np.float64), bins=edges)
    py, _ = np.histogram(np.asarray(y, dtype=np.float64), bins=edges)
    return px / max(px.sum(), 1), py / max(py.sum(), 1)


def level_probabilities(x_codes, y_codes) -> tuple[np.ndarray, np.ndarray]:
    """Level frequency vectors of two code samples over the union of codes."""
    x = np.asarray(x_codes, dtype=np.int64)
    y = np.asarray(y_codes, dtype=np.int64)
    width = int(max(x.max(), y.max())) + 1
    return (
        np.bincount(x, minlength=width) / x.size,
        np.bincount(y, minlength=width) / y.size,
    )


def hellinger_distance(p, q) -> float:
    """Hellinger distance between two aligned probability vectors."""
    p = np.asarray(p, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    if p.shape != q.shape:
        raise ValidationError("hellinger_distance needs aligned vectors")
    return float(np.sqrt(np.sum((np.sqrt(p) - np.sqrt(q)) ** 2)) / np.sqrt(2.0))


def pearson_corr(x, y) -> float:
    """Pearson correlation; 0 when either sample has zero variance."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    sx = x.std()
    sy = y.std()
    if sx == 0.0 or sy == 0.0:
        return 0.0
    return float(np.mean((x - x.mean()) * (y - y.mean())) / (sx * sy))


def cramers_v(x_codes, y_codes) -> float:
    """Cramer's V association between two categorical code samples.

    chi-squared without continuity correction, scaled by
    n * min(r - 1, c - 1). Either variable constant gives 0.
    """
    x = np.asarray(x_codes, dtype=np.int64)
    y = np.asarray(y_codes, dtype=np.int64)
    _, xi = np.unique(x, return_inverse=True)
    _, yi = np.unique(y, return_inverse=True)
    r = xi.max() + 1
    c = yi.max() + 1
    if r < 2 or c < 2:
        return 0.0
    obs = np.bincount(xi * c + yi, minlength=r * c).reshape(r, c).astype(np.float64)
    n = obs.sum()
    expected = np.outer(obs.sum(axis=1), obs.sum(axis=0)) / n
    chi2 = float(np.sum((obs - expected) ** 2 / expected))
    return float(np.sqrt(chi2 / (n * min(r - 1, c - 1))))


def correlation_ratio(categories, values) -> float:
    """Correlation ratio eta between a categorical and a numerical sample.

    sqrt of (between-category sum of squares of the means / total sum of
    squares). Zero total variance gives 0.
    """
    cats = np.asarray(categories)
    y = np.asarray(values, dtype=np.float64)
    total = float(np.sum((y - y.mean()) ** 2))
    if total == 0.0:
        return 0.0
    _, codes = np.unique(cats, return_inverse=True)
    n_g = np.bincount(codes)
    sum_g = np.bincount(codes, weights=y)
    mean_g = sum_g / n_g
    between = float(np.sum(n_g * (mean_g - y.mean()) ** 2))
    return float(np.sqrt(between / total))


def mixed_correlation_matrix(table: Table, norm: NormalizationSpec) -> np.ndarray:
    """Symmetric association matrix over mixed column kinds.

    Pearson for numerical pairs, Cramer's V for categorical pairs and the
    correlation ratio for mixed pairs. Unit diagonal by construction.
    """
    cols = table.columns
    k = len(cols)
    series = []
    for col in cols:
        if col.kind is ColumnKind.NUMERICAL:
            series.append(col.values)
        else:
            series.append(norm.codes(col))
    out = np.eye(k)
    for i in range(k):
        for j in range(i):
            a, b = cols[i], cols[j]
            if a.kind is ColumnKind.NUMERICAL and b.kind is ColumnKind.NUMERICAL:
                v = pearson_corr(series[i], series[j])
            elif a.kind is ColumnKind.CATEGORICAL and b.kind is ColumnKind.CATEGORICAL:
                v = cramers_v(series[i], series[j])
            elif a.kind is ColumnKind.CATEGORICAL:
                v = correlation_ratio(series[i], series[j])
            else:
                v = correlation_ratio(series[j], series[i])
            out[i, j] = out[j, i] = v
    return out


def _entropy(counts: np.ndarray) -> float:
    p = counts[counts > 0] / counts.sum()
    return float(-np.sum(p * np.log(p)))


def normalized_mutual_information(x_codes, y_codes) -> float:
    """Mutual information scaled by the mean of the marginal entropies.

    Convention for degenerate inputs: if both variables carry zero entropy
    the value is 1 (two constants agree perfectly); if exactly one does,
    the mutual information, hence the value, is 0.
    """
    x = np.asarray(x_codes, dtype=np.int64)
    y = np.asarray(y_codes, dtype=np.int64)
    if x.size != y.size or x.size == 0:
        raise ValidationError("normalized_mutual_information needs paired samples")
    _, xi = np.unique(x, return_inverse=True)
    _, yi = np.unique(y, return_inverse=True)
    r = xi.max() + 1
    c = yi.max() + 1
    joint = np.bincount(xi * c + yi, minlength=r * c).reshape(r, c).astype(np.float64)
    n = joint.sum()
    hx = _entropy(joint.sum(axis=1))
    hy = _entropy(joint.sum(axis=0))
    if hx == 0.0 and hy == 0.0:
        return 1.0
    pj = joint / n
    outer = np.outer(joint.sum(axis=1) / n, joint.sum(axis=0) / n)
    mask = pj > 0
    mi = float(np.sum(pj[mask] * np.log(pj[mask] / outer[mask])))
    return float(np.clip(mi / ((hx + hy) / 2.0), 0.0, 1.0))


def frobenius_diff(a, b) -> float:
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ValidationError(f"matrix shapes differ: {a.shape} vs {b.shape}")
    return float(np.linalg.norm(a - b, "fro"))


@dataclass(frozen=True)
class PCAProjection:
    real_coords: np.ndarray  # [n_real, 2]
    synthetic_coords: np.ndarray  # [n_syn, 2]
    explained_variance: np.ndarray  # top-2 eigenvalues of the correlation structure
    explained_variance_ratio: np.ndarray
    components: np.ndarray  # [2, n_features], orthonormal rows


def pca_project(real: np.ndarray, synthetic: np.ndarray) -> PCAProjection:
    """Project both tables onto the top-2 principal axes of the real data.

    Features are standardized with the real means and standard deviations
    (constant features pass through unscaled); the synthetic rows reuse the
    real statistics so both clouds live in one coordinate frame. Component
    signs are fixed by making each component's largest-magnitude entry
    positive, keeping the projection deterministic.
    """
    real = np.asarray(real, dtype=np.float64)
    synthetic = np.asarray(synthetic, dtype=np.float64)
    if real.ndim != 2 or real.shape[1] < 2:
        raise ValidationError("pca_project needs at least two numerical features")
    if real.shape[0] < 2:
        raise ValidationError("pca_project needs at least two real rows")
    if synthetic.shape[1] != real.shape[1]:
        raise ValidationError("feature counts differ between real and synthetic")
    mu = real.mean(axis=0)
    sigma = real.std(axis=0)
    sigma = np.where(sigma == 0.0, 1.0, sigma)
    z_real = (real - mu) / sigma
    z_syn = (synthetic - mu) / sigma
    cov = np.cov(z_real, rowvar=False, ddof=1)
    eigvals, eigvecs = np.linalg.eigh(cov)
    order = np.argsort(eigvals, kind="stable")[::-1][:2]
    components = eigvecs[:, order].T.copy()
    for row in components:
        pivot = np.argmax(np.abs(row))
        if row[pivot] < 0:
            row *= -1.0
    top = eigvals[order]
    return PCAProjection(
        real_coords=z_real @ components.T,
        synthetic_coords=z_syn @ components.T,
        explained_variance=top,
        explained_variance_ratio=top / eigvals.sum(),
        components=components,
    )


def mean_ci(values, confidence: float = 95.0) -> tuple[float, float]:
    """Normal-approximation confidence interval for a sample mean.

    mean +/- z * s / sqrt(n) with the two-sided normal quantile; a constant
    sample collapses to a zero-width interval.
    """
    v = np.asarray(values, dtype=np.float64)
    if v.size < 2:
        raise ValidationError("mean_ci needs at least two observations")
    if not 0.0 < confidence < 100.0:
        raise ValidationError(f"confidence must be in (0, 100), got {confidence}")
    z = float(sps.norm.ppf(0.5 + confidence / 200.0))
    half = z * float(np.std(v, ddof=1)) / float(np.sqrt(v.size))
    m = float(v.mean())
    return (m - half, m + half)
