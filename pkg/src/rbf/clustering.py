"""
Clustering primitives for RBF-2 center placement
Seeded K-means (Lloyd) and EM for circular-covariance gaussian mixtures
"""

import logging
from dataclasses import dataclass, field
from typing import List, Tuple

import numpy as np
from scipy.spatial.distance import cdist
from scipy.special import logsumexp

from ..errors import ConfigurationError, DimensionMismatchError

logger = logging.getLogger(__name__)

VARIANCE_FLOOR = 1e-8
# Responsibility mass below which a component counts as collapsed
COLLAPSE_MASS = 1e-10


@dataclass(frozen=True)
class GmmModel:
    means: np.ndarray
    variances: np.ndarray
    mixing_weights: np.ndarray
    log_likelihoods: Tuple[float, ...] = field(default=(), compare=False)

    @property
    def num_components(self) -> int:
        return self.means.shape[0]

    def component_log_densities(self, points: np.ndarray) -> np.ndarray:
        """N x K log of mixing_weight_k * N(x; mean_k, variance_k I)."""
        dim = points.shape[1]
        sq = cdist(points, self.means, "sqeuclidean")
        return (
            np.log(self.mixing_weights)
            - 0.5 * dim * np.log(2.0 * np.pi * self.variances)
            - sq / (2.0 * self.variances)
        )

    def log_likelihood(self, points: np.ndarray) -> float:
        return float(np.sum(logsumexp(self.component_log_densities(points), axis=1)))


def _check_points(points: np.ndarray, k: int) -> np.ndarray:
    points = np.atleast_2d(np.asarray(points, dtype=np.float64))
    if k < 1:
        raise ConfigurationError(f"Number of clusters must be positive, got {k}")
    if k > points.shape[0]:
        raise DimensionMismatchError(f"Cannot place {k} clusters on {points.shape[0]} points")
    return points


def _assign(points: np.ndarray, centers: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    sq = cdist(points, centers, "sqeuclidean")
    labels = np.argmin(sq, axis=1)
    return labels, sq[np.arange(points.shape[0]), labels]


def lloyd_iterations(
    points: np.ndarray,
    centers: np.ndarray,
    iters: int,
) -> Tuple[np.ndarray, List[float]]:
    """
    Run Lloyd iterations from the given centers.

    Returns:
        (centers, distortion before each update and after the last one)
    """
    centers = np.array(centers, dtype=np.float64)
    k = centers.shape[0]
    history = []

    for it in range(iters):
        labels, sq = _assign(points, centers)
        history.append(float(np.sum(sq)))

        counts = np.bincount(labels, minlength=k)
        sums = np.zeros_like(centers)
        np.add.at(sums, labels, points)
        nonempty = counts > 0
        centers[nonempty] = sums[nonempty] / counts[nonempty, None]

        # Empty clusters move to the point farthest from its assigned center
        for c in np.flatnonzero(~nonempty):
            farthest = int(np.argmax(sq))
            logger.debug(f"K-means iteration {it}: re-seeding empty cluster {c} at point {farthest}")
            centers[c] = points[farthest]
            sq[farthest] = -1.0

        logger.debug(f"K-means iteration {it}: distortion {history[-1]:.6e}")

    if iters > 0:
        history.append(float(np.sum(_assign(points, centers)[1])))
    return centers, history


def kmeans(points: np.ndarray, k: int, iters: int = 5, seed: int = 0) -> np.ndarray:
    """
    K-means from k distinct points drawn with a seeded generator.

    Returns:
        k x D centers (the initial draw untouched when iters == 0)
    """
    points = _check_points(points, k)
    if iters < 0:
        raise ConfigurationError(f"iters must be non-negative, got {iters}")

    rng = np.random.default_rng(seed)
    initial = points[rng.choice(points.shape[0], size=k, replace=False)]
    centers, _ = lloyd_iterations(points, initial, iters)
    return centers


def em_gmm_circular(
    points: np.ndarray,
    k: int,
    epochs: int = 10,
    seed: int = 0,
    kmeans_iters: int = 5,
) -> GmmModel:
    """
    Fit a mixture of k isotropic gaussians by EM, starting from K-means.

    The log-likelihood after every epoch is kept in GmmModel.log_likelihoods.
    """
    points = _check_points(points, k)
    if epochs < 1:
        raise ConfigurationError(f"epochs must be at least 1, got {epochs}")

    n, dim = points.shape
    rng = np.random.default_rng(seed)

    means = kmeans(points, k, kmeans_iters, seed)
    labels, sq = _assign(points, means)
    counts = np.bincount(labels, minlength=k).astype(np.float64)
    variances = np.array([
        np.sum(sq[labels == c]) / (dim * counts[c]) if counts[c] > 0 else 1.0
        for c in range(k)
    ])
    overall_variance = max(float(np.mean(np.var(points, axis=0))), VARIANCE_FLOOR)
    variances = np.where(variances > VARIANCE_FLOOR, variances, overall_variance)
    weights = np.maximum(counts, 1.0) / np.sum(np.maximum(counts, 1.0))

    model = GmmModel(means=means, variances=variances, mixing_weights=weights)
    history = []

    for epoch in range(epochs):
        # E-step
        log_dens = model.component_log_densities(points)
        resp = np.exp(log_dens - logsumexp(log_dens, axis=1, keepdims=True))

        # M-step
        mass = resp.sum(axis=0)
        means = np.array(model.means)
        variances = np.array(model.variances)
        weights = mass / n

        for c in range(k):
            if mass[c] < COLLAPSE_MASS:
                reseed = int(rng.integers(n))
                logger.warning(f"EM epoch {epoch}: component {c} collapsed, re-seeding at point {reseed}")
                means[c] = points[reseed]
                variances[c] = overall_variance
                weights[c] = 1.0 / n
                continue
            means[c] = resp[:, c] @ points / mass[c]
            sq_dist = np.sum((points - means[c]) ** 2, axis=1)
            variances[c] = max(float(resp[:, c] @ sq_dist) / (dim * mass[c]), VARIANCE_FLOOR)

        weights = weights / np.sum(weights)
        model = GmmModel(means=means, variances=variances, mixing_weights=weights)
        history.append(model.log_likelihood(points))
        logger.debug(f"EM epoch {epoch}: log-likelihood {history[-1]:.6f}")

    return GmmModel(
        means=model.means,
        variances=model.variances,
        mixing_weights=model.mixing_weights,
        log_likelihoods=tuple(history),
    )
