"""RBF network, clustering, both training algorithms and the model byte format."""

import math

import numpy as np
import pytest
from scipy.spatial.distance import cdist

from src.dsp.delta import TrainingSet
from src.dsp.lpc import LpcModel
from src.errors import (
    ConfigurationError,
    DimensionMismatchError,
    ModelFormatError,
    TruncatedModelError,
    UnknownModelTypeError,
)
from src.rbf.clustering import em_gmm_circular, kmeans
from src.rbf.network import RbfNetwork, radbas, rbf_forward, spread_to_bias
from src.rbf.serialization import model_deserialize, model_serialize
from src.rbf.training import design_matrix, solve_output_layer, train_rbf1, train_rbf2


def two_blobs(rng, n_a=120, n_b=80, radius=0.1):
    a = rng.normal([0.0, 0.0], radius, (n_a, 2))
    b = rng.normal([5.0, 5.0], radius, (n_b, 2))
    return np.vstack((a, b)), a, b


class TestNetwork:
    def test_radbas(self):
        assert radbas(0.0) == 1.0
        assert radbas(0.8326) == pytest.approx(0.5, abs=1e-4)
        assert radbas(2.0) == pytest.approx(math.exp(-4.0), rel=1e-12)

    @pytest.mark.parametrize("spread,bias", [(8.326, 0.1), (0.8326, 1.0), (0.22, 3.7845)])
    def test_spread_to_bias(self, spread, bias):
        assert spread_to_bias(spread) == pytest.approx(bias, abs=1e-4)

    def test_non_positive_spread(self):
        with pytest.raises(ConfigurationError):
            spread_to_bias(0.0)

    def test_center_on_input_outputs_weight(self):
        net = RbfNetwork(centers=[[0.3, -0.2]], biases=[5.0], out_weights=[0.7])
        assert rbf_forward(net, np.array([0.3, -0.2])) == pytest.approx(0.7)

    def test_half_amplitude_distance(self):
        net = RbfNetwork(centers=[[0.0, 0.0]], biases=[0.1], out_weights=[2.0])
        assert rbf_forward(net, np.array([8.326, 0.0])) == pytest.approx(1.0, abs=1e-3)

    def test_matches_termwise_sum(self, rng):
        centers = rng.standard_normal((5, 3))
        biases = rng.uniform(0.5, 2.0, 5)
        weights = rng.standard_normal(5)
        net = RbfNetwork(centers=centers, biases=biases, out_weights=weights, out_bias=0.25)
        x = rng.standard_normal(3)
        expected = 0.25
        for c, b, w in zip(centers, biases, weights):
            expected += w * math.exp(-(math.dist(c, x) * b) ** 2)
        assert rbf_forward(net, x) == pytest.approx(expected, abs=1e-12)
        assert net.predict_batch(x[None, :])[0] == pytest.approx(expected, abs=1e-12)

    def test_neuron_order_irrelevant(self, rng):
        centers = rng.standard_normal((6, 4))
        biases = rng.uniform(0.3, 2.0, 6)
        weights = rng.standard_normal(6)
        net = RbfNetwork(centers=centers, biases=biases, out_weights=weights, out_bias=-0.1)
        perm = rng.permutation(6)
        shuffled = RbfNetwork(centers=centers[perm], biases=biases[perm], out_weights=weights[perm], out_bias=-0.1)
        for x in rng.standard_normal((20, 4)):
            assert rbf_forward(shuffled, x) == pytest.approx(rbf_forward(net, x), abs=1e-12)

    def test_directional_derivative_matches_gradient(self, rng):
        net = RbfNetwork(rng.standard_normal((5, 3)), rng.uniform(0.5, 1.5, 5), rng.standard_normal(5), out_bias=0.2)
        eps = 1e-6
        for _ in range(20):
            x = rng.standard_normal(3)
            direction = rng.standard_normal(3)
            direction /= np.linalg.norm(direction)
            diff = net.centers - x
            activations = radbas(np.linalg.norm(diff, axis=1) * net.biases)
            gradient = (2.0 * net.out_weights * net.biases ** 2 * activations) @ diff
            numeric = (rbf_forward(net, x + eps * direction) - rbf_forward(net, x - eps * direction)) / (2 * eps)
            assert numeric == pytest.approx(gradient @ direction, rel=1e-5, abs=1e-8)

    def test_wrong_input_size(self):
        net = RbfNetwork(centers=[[0.0, 0.0]], biases=[1.0], out_weights=[1.0])
        with pytest.raises(DimensionMismatchError):
            rbf_forward(net, np.zeros(3))

    def test_biases_must_be_positive(self):
        with pytest.raises(ConfigurationError):
            RbfNetwork(centers=[[0.0]], biases=[0.0], out_weights=[1.0])


class TestOutputLayer:
    def test_square_system_interpolates(self, rng):
        design = rng.standard_normal((6, 6)) + 3 * np.eye(6)
        targets = rng.standard_normal(6)
        weights = solve_output_layer(design, targets)
        assert np.max(np.abs(design @ weights - targets)) <= 1e-9

    def test_zero_targets(self, rng):
        weights = solve_output_layer(rng.standard_normal((10, 4)), np.zeros(10))
        np.testing.assert_array_equal(weights, np.zeros(4))

    def test_matches_normal_equations(self, rng):
        design = rng.standard_normal((20, 6))
        targets = rng.standard_normal(20)
        expected = np.linalg.solve(design.T @ design, design.T @ targets)
        np.testing.assert_allclose(solve_output_layer(design, targets), expected, atol=1e-8)

    def test_rank_deficient_is_solved(self):
        design = np.array([[1.0, 1.0], [2.0, 2.0], [3.0, 3.0]])
        weights = solve_output_layer(design, np.array([2.0, 4.0, 6.0]))
        np.testing.assert_allclose(weights, [1.0, 1.0], atol=1e-12)

    def test_empty_design(self):
        with pytest.raises(DimensionMismatchError):
            solve_output_layer(np.zeros((0, 3)), np.zeros(0))


class TestKMeans:
    def test_k_equals_n(self, rng):
        points = rng.standard_normal((6, 2))
        centers = kmeans(points, 6, iters=5, seed=1)
        assert sorted(map(tuple, centers)) == sorted(map(tuple, points))

    def test_two_blobs(self, rng):
        points, a, b = two_blobs(rng)
        centers = kmeans(points, 2, iters=10, seed=0)
        found = sorted(map(tuple, centers))
        assert math.dist(found[0], a.mean(axis=0)) < 0.1
        assert math.dist(found[1], b.mean(axis=0)) < 0.1

    def test_zero_iterations_returns_seeded_draw(self, rng):
        points = rng.standard_normal((30, 3))
        expected = points[np.random.default_rng(9).choice(30, size=4, replace=False)]
        np.testing.assert_array_equal(kmeans(points, 4, iters=0, seed=9), expected)

    def test_too_many_clusters(self, rng):
        with pytest.raises(DimensionMismatchError):
            kmeans(rng.standard_normal((3, 2)), 4)


class TestEm:
    def test_single_component_is_closed_form(self, rng):
        points = rng.standard_normal((200, 3)) * 0.5 + 1.0
        gmm = em_gmm_circular(points, 1, epochs=3, seed=0)
        mean = points.mean(axis=0)
        np.testing.assert_allclose(gmm.means[0], mean, atol=1e-12)
        assert gmm.variances[0] == pytest.approx(np.sum((points - mean) ** 2) / points.size, rel=1e-10)
        assert gmm.mixing_weights[0] == pytest.approx(1.0)

    def test_two_blobs(self, rng):
        points, a, b = two_blobs(rng)
        gmm = em_gmm_circular(points, 2, epochs=10, seed=0)
        order = np.argsort(gmm.means[:, 0])
        assert math.dist(gmm.means[order[0]], a.mean(axis=0)) < 0.1
        assert math.dist(gmm.means[order[1]], b.mean(axis=0)) < 0.1
        assert gmm.mixing_weights[order[0]] == pytest.approx(0.6, abs=0.05)
        assert gmm.mixing_weights[order[1]] == pytest.approx(0.4, abs=0.05)

    def test_log_likelihood_never_decreases(self, rng):
        points = rng.standard_normal((300, 4))
        history = em_gmm_circular(points, 5, epochs=15, seed=2).log_likelihoods
        assert len(history) == 15
        for before, after in zip(history, history[1:]):
            assert after >= before - 1e-9 * abs(before)


class TestRbf1:
    def test_interpolation_regime(self, rng):
        data = TrainingSet(inputs=rng.uniform(-1, 1, (12, 2)), targets=rng.uniform(-1, 1, 12), order=2)
        net = train_rbf1(data, max_neurons=12, spread=0.5)
        assert net.num_neurons <= 12
        assert net.training_mse[-1] <= 1e-6

    def test_first_neuron_is_best_single_candidate(self, rng):
        inputs = rng.standard_normal((40, 2))
        inputs[:10] = inputs[0]
        targets = rng.standard_normal(40)
        data = TrainingSet(inputs=inputs, targets=targets, order=2)
        spread = 1.5

        net = train_rbf1(data, max_neurons=1, spread=spread)

        bias = spread_to_bias(spread)
        best, best_mse = None, np.inf
        for candidate in np.unique(inputs, axis=0):
            design = design_matrix(radbas(cdist(inputs, candidate[None, :]) * bias))
            weights = np.linalg.lstsq(design, targets, rcond=None)[0]
            mse = np.mean((targets - design @ weights) ** 2)
            if mse < best_mse:
                best, best_mse = candidate, mse
        np.testing.assert_array_equal(net.centers[0], best)
        assert net.training_mse[0] == pytest.approx(best_mse, rel=1e-9)

    def test_goal_never_met_commits_all_neurons(self, rng):
        data = TrainingSet(inputs=rng.standard_normal((60, 3)), targets=rng.standard_normal(60), order=3)
        net = train_rbf1(data, max_neurons=7, spread=1.0, goal_mse=0.0)
        assert net.num_neurons == 7
        assert len(net.training_mse) == 7
        assert all(b <= a + 1e-12 for a, b in zip(net.training_mse, net.training_mse[1:]))

    def test_goal_met_stops_early(self, rng):
        data = TrainingSet(inputs=rng.standard_normal((60, 3)), targets=rng.standard_normal(60), order=3)
        net = train_rbf1(data, max_neurons=7, spread=1.0, goal_mse=1e9)
        assert net.num_neurons == 1

    def test_duplicates_limit_neurons(self):
        inputs = np.repeat(np.array([[0.0], [1.0], [2.0]]), 5, axis=0)
        data = TrainingSet(inputs=inputs, targets=inputs[:, 0] ** 2, order=1)
        net = train_rbf1(data, max_neurons=10, spread=1.0)
        assert net.num_neurons <= 3

    def test_biases_follow_spread(self, rng):
        data = TrainingSet(inputs=rng.standard_normal((30, 2)), targets=rng.standard_normal(30), order=2)
        net = train_rbf1(data, max_neurons=4, spread=0.22)
        np.testing.assert_allclose(net.biases, 0.8326 / 0.22)


class TestRbf2:
    def test_deterministic(self, rng):
        data = TrainingSet(inputs=rng.standard_normal((150, 4)), targets=rng.standard_normal(150), order=4)
        first = train_rbf2(data, neurons=6, em_epochs=5, seed=3)
        second = train_rbf2(data, neurons=6, em_epochs=5, seed=3)
        assert model_serialize(first) == model_serialize(second)

    def test_two_neuron_width(self, rng):
        points, _, _ = two_blobs(rng)
        data = TrainingSet(inputs=points, targets=rng.standard_normal(points.shape[0]), order=2)
        net = train_rbf2(data, neurons=2, em_epochs=5, seed=0)
        d = math.dist(net.centers[0], net.centers[1])
        np.testing.assert_allclose(net.biases, 1.0 / (d * math.sqrt(2.0)), rtol=1e-12)

    def test_recovers_known_output_layer(self, rng):
        inputs = rng.uniform(-1, 1, (200, 3))
        first = train_rbf2(TrainingSet(inputs, rng.standard_normal(200), 3), neurons=5, em_epochs=5, seed=4)
        known = RbfNetwork(first.centers, first.biases, out_weights=[0.5, -1.0, 0.25, 2.0, -0.75], out_bias=0.1)

        refit = train_rbf2(TrainingSet(inputs, known.predict_batch(inputs), 3), neurons=5, em_epochs=5, seed=4)
        assert refit.training_mse[0] <= 1e-8
        np.testing.assert_array_equal(refit.centers, first.centers)

    def test_more_neurons_than_vectors(self, rng):
        data = TrainingSet(inputs=rng.standard_normal((4, 2)), targets=np.zeros(4), order=2)
        with pytest.raises(DimensionMismatchError):
            train_rbf2(data, neurons=5)


class TestModelBytes:
    def test_rbf_round_trip(self, rng):
        net = RbfNetwork(rng.standard_normal((4, 3)), rng.uniform(0.1, 2, 4), rng.standard_normal(4), out_bias=-0.3)
        data = model_serialize(net)
        assert len(data) == 5 + 8 * (4 * 3 + 4 + 4 + 1)
        assert model_deserialize(data) == net

    def test_lpc_round_trip(self):
        model = LpcModel(coefficients=[1.2, -0.5, 0.1])
        assert model_deserialize(model_serialize(model)) == model

    def test_truncated(self, rng):
        data = model_serialize(RbfNetwork([[0.0, 1.0]], [1.0], [0.5]))
        with pytest.raises(TruncatedModelError):
            model_deserialize(data[:-3])

    def test_unknown_tag(self):
        with pytest.raises(UnknownModelTypeError):
            model_deserialize(b"\x07\x00\x00")

    def test_trailing_bytes(self):
        with pytest.raises(ModelFormatError):
            model_deserialize(model_serialize(LpcModel([0.5])) + b"\x00")

    def test_zero_neuron_payload(self):
        with pytest.raises(ModelFormatError):
            model_deserialize(b"\x02\x00\x00\x02\x00" + b"\x00" * 8)


def brute_force_centers(inputs, targets, spread, neurons):
    """Commit, at every step, the candidate whose full least-squares re-solve gives the lowest MSE."""
    bias = spread_to_bias(spread)
    columns = radbas(cdist(inputs, inputs) * bias)
    chosen = []
    for _ in range(neurons):
        best, best_mse = None, np.inf
        for candidate in range(inputs.shape[0]):
            if candidate in chosen:
                continue
            design = design_matrix(columns[:, chosen + [candidate]])
            weights = np.linalg.lstsq(design, targets, rcond=None)[0]
            mse = np.mean((targets - design @ weights) ** 2)
            if mse < best_mse:
                best, best_mse = candidate, mse
        chosen.append(best)
    return inputs[chosen]


class TestRbf1Pool:
    def test_output_layer_uses_every_pair(self, rng):
        inputs = rng.uniform(-1, 1, (400, 2))
        targets = np.sin(3 * inputs[:, 0]) * inputs[:, 1]
        data = TrainingSet(inputs=inputs, targets=targets, order=2)
        net = train_rbf1(data, max_neurons=6, spread=0.5, max_vectors=50)

        design = design_matrix(radbas(cdist(inputs, net.centers) * net.biases))
        expected = np.linalg.lstsq(design, targets, rcond=None)[0]
        np.testing.assert_allclose(net.out_weights, expected[:-1], atol=1e-9)
        assert net.out_bias == pytest.approx(expected[-1], abs=1e-9)

    def test_centers_come_from_the_pool(self, rng):
        inputs = rng.uniform(-1, 1, (400, 2))
        data = TrainingSet(inputs=inputs, targets=rng.standard_normal(400), order=2)
        net = train_rbf1(data, max_neurons=4, spread=0.5, max_vectors=50)
        pool = inputs[np.linspace(0, 399, 50).round().astype(int)]
        for center in net.centers:
            assert np.any(np.all(pool == center, axis=1))


@pytest.mark.slow
class TestManyInstances:
    def test_least_squares_against_normal_equations(self, rng):
        for _ in range(100):
            cols = int(rng.integers(1, 12))
            rows = int(rng.integers(cols + 5, 80))
            design = rng.standard_normal((rows, cols))
            targets = rng.standard_normal(rows)

            residual = targets - design @ solve_output_layer(design, targets)
            oracle = targets - design @ np.linalg.solve(design.T @ design, design.T @ targets)
            np.testing.assert_allclose(residual, oracle, atol=1e-8)

            scale = np.linalg.norm(design, axis=0) * np.linalg.norm(targets)
            assert np.max(np.abs(design.T @ residual) / scale) <= 1e-8

    def test_em_log_likelihood_never_decreases(self, rng):
        for _ in range(50):
            k = int(rng.integers(1, 6))
            dim = int(rng.integers(1, 5))
            blobs = rng.uniform(-5, 5, (k, dim))
            labels = rng.integers(0, k, int(rng.integers(60, 300)))
            points = blobs[labels] + rng.uniform(0.2, 1.0) * rng.standard_normal((labels.size, dim))

            history = em_gmm_circular(points, k, epochs=10, seed=int(rng.integers(1000))).log_likelihoods
            assert len(history) == 10
            for before, after in zip(history, history[1:]):
                assert after >= before - 1e-9 * abs(before)

    def test_greedy_matches_exhaustive_search(self, rng):
        for _ in range(50):
            n = int(rng.integers(5, 31))
            dim = int(rng.integers(1, 4))
            inputs = rng.standard_normal((n, dim))
            targets = rng.standard_normal(n)
            neurons = int(rng.integers(1, 4))
            spread = float(rng.uniform(0.3, 2.0))

            net = train_rbf1(TrainingSet(inputs, targets, dim), max_neurons=neurons, spread=spread)
            np.testing.assert_array_equal(net.centers, brute_force_centers(inputs, targets, spread, neurons))

    def test_one_neuron_per_input_interpolates(self, rng):
        for _ in range(20):
            n = int(rng.integers(5, 41))
            inputs = rng.uniform(-1, 1, (n, 3))
            data = TrainingSet(inputs=inputs, targets=rng.uniform(-1, 1, n), order=3)
            net = train_rbf1(data, max_neurons=n, spread=0.3)
            assert net.training_mse[-1] <= 1e-6
