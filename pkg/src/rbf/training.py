"""
RBF training algorithms

RBF-1: greedy forward selection of centers among the training inputs, one
neuron at a time, shared user-set spread.
RBF-2: centers from a circular gaussian mixture fitted by EM, one shared
width from the largest squared distance between centers, output layer by
pseudo-inverse.
"""

import logging
from typing import List

import numpy as np
from scipy.spatial.distance import cdist, pdist

from ..dsp.delta import TrainingSet
from ..errors import ConfigurationError, DimensionMismatchError
from .clustering import em_gmm_circular
from .network import RbfNetwork, radbas, spread_to_bias

logger = logging.getLogger(__name__)

# Deflated candidate columns shorter than this fraction of their original
# norm are linearly dependent on the committed ones.
DEPENDENCE_TOLERANCE = 1e-12


def design_matrix(activations: np.ndarray, output_bias: bool = True) -> np.ndarray:
    """Activations with the constant column for the output bias appended."""
    if not output_bias:
        return activations
    return np.hstack((activations, np.ones((activations.shape[0], 1))))


def solve_output_layer(design: np.ndarray, targets: np.ndarray) -> np.ndarray:
    """
    Minimum-norm least-squares weights for `design @ w = targets`.

    Rank-deficient designs are solved through the pseudo-inverse, not rejected.
    """
    design = np.atleast_2d(np.asarray(design, dtype=np.float64))
    targets = np.asarray(targets, dtype=np.float64).ravel()
    if design.shape[0] == 0:
        raise DimensionMismatchError("Cannot solve the output layer without training rows")
    if design.shape[0] != targets.size:
        raise DimensionMismatchError(f"{design.shape[0]} design rows but {targets.size} targets")
    weights, *_ = np.linalg.lstsq(design, targets, rcond=None)
    return weights


def _split_weights(weights: np.ndarray, output_bias: bool):
    if output_bias:
        return weights[:-1], float(weights[-1])
    return weights, 0.0


def _strided_subset(data: TrainingSet, max_vectors: int) -> TrainingSet:
    if max_vectors is None or len(data) <= max_vectors:
        return data
    rows = np.linspace(0, len(data) - 1, max_vectors).round().astype(int)
    logger.info(f"RBF-1 training on {max_vectors} of {len(data)} vectors")
    return TrainingSet(inputs=data.inputs[rows], targets=data.targets[rows], order=data.order, augmented=data.augmented)


def train_rbf1(
    data: TrainingSet,
    max_neurons: int,
    spread: float,
    goal_mse: float = 0.0,
    output_bias: bool = True,
    max_vectors: int = None,
) -> RbfNetwork:
    """
    Add neurons one at a time until max_neurons or goal_mse is reached.

    Every training input not yet used is a candidate center; the candidate
    whose addition gives the lowest least-squares training MSE is committed.
    The tentative MSE of each candidate is read from its activation column
    after projecting out the committed columns, which equals a full re-solve.

    With max_vectors, candidates and scoring come from an evenly strided pool
    of that many pairs; the output layer of the committed centers is then
    solved on the whole set.
    """
    if len(data) == 0:
        raise DimensionMismatchError("Empty training set")
    if max_neurons < 1:
        raise ConfigurationError(f"max_neurons must be at least 1, got {max_neurons}")

    full = data
    data = _strided_subset(data, max_vectors)
    inputs, targets = data.inputs, data.targets
    n = len(data)
    bias = spread_to_bias(spread)

    # One candidate per distinct input vector, first occurrence
    _, first = np.unique(inputs, axis=0, return_index=True)
    candidates = np.sort(first)
    if max_neurons > candidates.size:
        logger.warning(
            f"Requested {max_neurons} neurons but only {candidates.size} distinct training vectors; "
            f"training with at most {candidates.size}"
        )

    columns = radbas(cdist(inputs, inputs[candidates]) * bias)
    deflated = columns.copy()
    residual = targets.copy()
    if output_bias:
        q = np.full(n, 1.0 / np.sqrt(n))
        deflated -= np.outer(q, q @ deflated)
        residual -= q * (q @ residual)

    original_norms = np.sum(columns * columns, axis=0)
    available = np.ones(candidates.size, dtype=bool)
    chosen: List[int] = []
    mse_history: List[float] = []
    weights = None

    while len(chosen) < max_neurons:
        norms = np.sum(deflated * deflated, axis=0)
        feasible = available & (norms > DEPENDENCE_TOLERANCE * original_norms)
        if not np.any(feasible):
            logger.warning(f"No linearly independent candidate left after {len(chosen)} neurons")
            break

        gains = np.zeros(candidates.size)
        gains[feasible] = (deflated[:, feasible].T @ residual) ** 2 / norms[feasible]
        gains[~feasible] = -np.inf
        best = int(np.argmax(gains))

        chosen.append(best)
        available[best] = False
        q = deflated[:, best] / np.sqrt(norms[best])
        deflated -= np.outer(q, q @ deflated)
        residual -= q * (q @ residual)

        design = design_matrix(columns[:, chosen], output_bias)
        weights = solve_output_layer(design, targets)
        mse = float(np.mean((targets - design @ weights) ** 2))
        mse_history.append(mse)
        logger.debug(f"RBF-1 neuron {len(chosen)}: center row {candidates[best]}, MSE {mse:.6e}")

        if mse <= goal_mse:
            logger.info(f"RBF-1 reached goal MSE {goal_mse} with {len(chosen)} neurons")
            break

    if not chosen:
        raise ConfigurationError("RBF-1 could not place any neuron")

    centers = inputs[candidates[chosen]]
    if data is not full:
        # Centers come from the pool; the output layer sees every training pair
        design = design_matrix(radbas(cdist(full.inputs, centers) * bias), output_bias)
        weights = solve_output_layer(design, full.targets)
        full_mse = float(np.mean((full.targets - design @ weights) ** 2))
        logger.info(f"RBF-1 output layer re-solved on {len(full)} vectors, MSE {full_mse:.6e}")

    out_weights, out_bias = _split_weights(weights, output_bias)
    logger.info(f"RBF-1 trained: {len(chosen)} neurons, spread {spread}, MSE {mse_history[-1]:.6e}")
    return RbfNetwork(
        centers=centers,
        biases=np.full(len(chosen), bias),
        out_weights=out_weights,
        out_bias=out_bias,
        training_mse=tuple(mse_history),
    )


def shared_width(centers: np.ndarray, points: np.ndarray) -> float:
    """
    sigma^2 = largest squared distance between centers; with a single center,
    the mean squared distance from the points to it.
    """
    if centers.shape[0] > 1:
        sigma2 = float(np.max(pdist(centers, "sqeuclidean")))
    else:
        sigma2 = float(np.mean(np.sum((points - centers[0]) ** 2, axis=1)))
    if not sigma2 > 0:
        raise ConfigurationError("Degenerate RBF-2 centers: zero width")
    return sigma2


def train_rbf2(
    data: TrainingSet,
    neurons: int,
    em_epochs: int = 10,
    seed: int = 0,
    kmeans_iters: int = 5,
    output_bias: bool = True,
) -> RbfNetwork:
    """Centers by circular-GMM EM, shared width, output layer by pseudo-inverse."""
    if len(data) == 0:
        raise DimensionMismatchError("Empty training set")
    if neurons < 1:
        raise ConfigurationError(f"neurons must be at least 1, got {neurons}")
    if neurons > len(data):
        raise DimensionMismatchError(f"Cannot fit {neurons} neurons on {len(data)} training vectors")

    inputs, targets = data.inputs, data.targets

    # Initial draw: centers and weights standard normal, variances one.
    # Steps below replace all of it.
    rng = np.random.default_rng(seed)
    initial_centers = rng.standard_normal((neurons, data.input_dim))
    initial_weights = rng.standard_normal(neurons + 1)
    initial_variances = np.ones(neurons)
    logger.debug(
        f"RBF-2 initial draw: |centers| {np.linalg.norm(initial_centers):.3f}, "
        f"|weights| {np.linalg.norm(initial_weights):.3f}, variances {initial_variances[0]}"
    )

    gmm = em_gmm_circular(inputs, neurons, em_epochs, seed, kmeans_iters)
    centers = gmm.means

    sigma2 = shared_width(centers, inputs)
    bias = 1.0 / np.sqrt(2.0 * sigma2)

    activations = radbas(cdist(inputs, centers) * bias)
    design = design_matrix(activations, output_bias)
    weights = solve_output_layer(design, targets)
    mse = float(np.mean((targets - design @ weights) ** 2))
    out_weights, out_bias = _split_weights(weights, output_bias)

    logger.info(f"RBF-2 trained: {neurons} neurons, sigma^2 {sigma2:.4g}, MSE {mse:.6e}")
    return RbfNetwork(
        centers=centers,
        biases=np.full(neurons, bias),
        out_weights=out_weights,
        out_bias=out_bias,
        training_mse=(mse,),
    )
