import numpy as np
import pytest

from behavior_cones import (
    StateSpaceModel,
    StateTrajectory,
    Trajectory,
    build_hankel,
    convolution_matrix,
    factorization_check,
    is_internally_positive,
    lag,
    leslie_model,
    model_from_json_dict,
    model_matrix,
    model_to_json_dict,
    numeric_rank,
    observability_matrix,
    simulate,
    state_trajectory_from_csv,
    state_trajectory_to_csv,
)
from conftest import LESLIE_HANKEL4, LESLIE_OUTPUT


def random_model(rng, affine: bool = False) -> StateSpaceModel:
    n = int(rng.integers(1, 5))
    m = int(rng.integers(0, 3))
    p = int(rng.integers(1, 3))
    A = rng.uniform(-1, 1, (n, n)) * 0.9 / np.sqrt(n)
    B = rng.uniform(-1, 1, (n, m))
    C = rng.uniform(-1, 1, (p, n))
    D = rng.uniform(-1, 1, (p, m))
    if affine:
        return StateSpaceModel(A, B, C, D, rng.uniform(-1, 1, n), rng.uniform(-1, 1, p), True)
    return StateSpaceModel(A, B, C, D)


class TestSimulate:
    def test_nilpotent_scalar(self):
        ss = StateSpaceModel([[0.0]], np.zeros((1, 0)), [[1.0]], np.zeros((1, 0)))
        w, x = simulate(ss, [5.0], 3)
        np.testing.assert_array_equal(w.samples.ravel(), [5, 0, 0])
        np.testing.assert_array_equal(x.samples.ravel(), [5, 0, 0])

    def test_leslie_output(self, leslie):
        w, x = simulate(leslie, [1.0, 0.0, 0.0, 0.0], 7)
        np.testing.assert_array_equal(w.samples.ravel(), LESLIE_OUTPUT)
        np.testing.assert_array_equal(x.samples[:4], np.eye(4))

    def test_affine_scalar(self):
        ss = StateSpaceModel([[0.0]], np.zeros((1, 0)), [[1.0]], np.zeros((1, 0)),
                             E=[1.0], F=[0.0], affine=True)
        w, _ = simulate(ss, [0.0], 3)
        np.testing.assert_array_equal(w.samples.ravel(), [0, 1, 1])

    def test_input_driven(self):
        ss = StateSpaceModel([[0.5]], [[1.0]], [[1.0]], [[0.0]])
        u = np.array([[1.0], [0.0], [0.0]])
        w, x = simulate(ss, [0.0], 3, u)
        np.testing.assert_allclose(w.outputs.ravel(), [0.0, 1.0, 0.5])
        np.testing.assert_allclose(w.inputs, u)

    def test_input_validation(self):
        ss = StateSpaceModel([[0.5]], [[1.0]], [[1.0]], [[0.0]])
        with pytest.raises(ValueError):
            simulate(ss, [0.0], 3)  # inputs required
        with pytest.raises(ValueError):
            simulate(ss, [0.0], 3, np.zeros((2, 1)))  # too short
        with pytest.raises(ValueError):
            simulate(ss, [0.0, 1.0], 3, np.zeros((3, 1)))  # bad x0


class TestPositivity:
    def test_leslie_is_positive(self, leslie):
        assert is_internally_positive(leslie)

    def test_negative_entry(self):
        ss = StateSpaceModel([[0.0, -1.0], [0.0, 0.0]], np.zeros((2, 0)),
                             [[0.0, 0.0]], np.zeros((1, 0)))
        assert not is_internally_positive(ss)

    def test_zero_model(self):
        ss = StateSpaceModel(np.zeros((2, 2)), np.zeros((2, 1)), np.zeros((1, 2)), np.zeros((1, 1)))
        assert is_internally_positive(ss)

    def test_propagation_from_nonneg_data(self):
        rng = np.random.default_rng(3)
        for _ in range(30):
            n, m, p = (int(rng.integers(1, 4)) for _ in range(3))
            ss = StateSpaceModel(
                rng.random((n, n)) * 0.5, rng.random((n, m)),
                rng.random((p, n)), rng.random((p, m)),
            )
            assert is_internally_positive(ss)
            T = 8
            w, x = simulate(ss, rng.random(n), T, rng.random((T, m)))
            assert x.samples.min() >= 0.0
            assert w.samples.min() >= 0.0


class TestStructureMatrices:
    def test_observability_stacked_identities(self):
        ss = StateSpaceModel(np.eye(2), np.zeros((2, 0)), np.eye(2), np.zeros((2, 0)))
        np.testing.assert_array_equal(observability_matrix(ss, 2), np.vstack([np.eye(2)] * 2))

    def test_leslie_observability_equals_hankel(self, leslie):
        np.testing.assert_array_equal(observability_matrix(leslie, 4), LESLIE_HANKEL4)

    def test_scalar_powers(self):
        ss = StateSpaceModel([[2.0]], np.zeros((1, 0)), [[3.0]], np.zeros((1, 0)))
        np.testing.assert_array_equal(observability_matrix(ss, 3).ravel(), [3, 6, 12])

    def test_nesting(self):
        rng = np.random.default_rng(5)
        ss = random_model(rng)
        L = 3
        np.testing.assert_array_equal(
            observability_matrix(ss, L + 1)[: ss.p * L], observability_matrix(ss, L)
        )

    def test_lag_identity_output(self):
        ss = StateSpaceModel(np.zeros((2, 2)), np.zeros((2, 0)), np.eye(2), np.zeros((2, 0)))
        assert lag(ss) == 1

    def test_lag_scalar(self):
        ss = StateSpaceModel([[0.5]], np.zeros((1, 0)), [[1.0]], np.zeros((1, 0)))
        assert lag(ss) == 1

    def test_lag_undefined_for_leslie(self, leslie):
        # the depth-4 observability matrix only reaches rank 3
        assert numeric_rank(observability_matrix(leslie, 4)) == 3
        assert lag(leslie) is None

    def test_convolution_no_inputs(self, leslie):
        assert convolution_matrix(leslie, 3).shape == (3, 0)

    def test_convolution_depth_one(self):
        rng = np.random.default_rng(7)
        ss = random_model(rng)
        np.testing.assert_array_equal(convolution_matrix(ss, 1), ss.D)

    def test_convolution_scalar(self):
        ss = StateSpaceModel([[0.5]], [[1.0]], [[1.0]], [[0.0]])
        np.testing.assert_allclose(
            convolution_matrix(ss, 3), [[0, 0, 0], [1, 0, 0], [0.5, 1, 0]]
        )

    def test_model_matrix_autonomous_is_observability(self, leslie):
        np.testing.assert_array_equal(model_matrix(leslie, 4), observability_matrix(leslie, 4))

    def test_model_matrix_static(self):
        D = np.array([[2.0]])
        ss = StateSpaceModel(np.zeros((0, 0)), np.zeros((0, 1)), np.zeros((1, 0)), D)
        M = model_matrix(ss, 2)
        np.testing.assert_array_equal(M, [[1, 0], [2, 0], [0, 1], [0, 2]])

    def test_model_matrix_scalar_interleaving(self):
        ss = StateSpaceModel([[0.5]], [[1.0]], [[1.0]], [[0.0]])
        np.testing.assert_allclose(
            model_matrix(ss, 2), [[1, 0, 0], [0, 0, 1], [0, 1, 0], [1, 0, 0.5]]
        )

    def test_model_matrix_columns_are_basis_simulations(self):
        # column k is the stacked window generated by the k-th basis input/state
        rng = np.random.default_rng(11)
        for _ in range(20):
            ss = random_model(rng)
            L = int(rng.integers(1, 5))
            M = model_matrix(ss, L)
            for k in range(ss.m * L + ss.n):
                vec = np.zeros(ss.m * L + ss.n)
                vec[k] = 1.0
                u = vec[: ss.m * L].reshape(L, ss.m)
                x0 = vec[ss.m * L :]
                w, _ = simulate(ss, x0, L, u if ss.m else None)
                np.testing.assert_allclose(M[:, k], w.samples.reshape(-1), atol=1e-12)

    def test_model_matrix_full_rank_above_lag(self):
        rng = np.random.default_rng(13)
        checked = 0
        for _ in range(40):
            ss = random_model(rng)
            ell = lag(ss)
            if ell is None:
                continue
            L = ell + int(rng.integers(1, 3))
            assert numeric_rank(model_matrix(ss, L)) == ss.m * L + ss.n
            checked += 1
        assert checked >= 20


class TestFactorizationIdentity:
    def test_leslie(self, leslie, leslie_data):
        w, x = leslie_data
        assert factorization_check(leslie, w, x, 4)

    def test_random_models(self):
        rng = np.random.default_rng(17)
        for trial in range(40):
            ss = random_model(rng, affine=trial % 2 == 1)
            T = int(rng.integers(4, 12))
            L = int(rng.integers(1, T + 1))
            u = rng.uniform(-1, 1, (T, ss.m)) if ss.m else None
            w, x = simulate(ss, rng.uniform(-1, 1, ss.n), T, u)
            assert factorization_check(ss, w, x, L)

    def test_detects_corruption(self, leslie, leslie_data):
        w, x = leslie_data
        samples = w.samples.copy()
        samples[2, 0] += 1.0
        corrupted = Trajectory(w.m, w.p, samples)
        assert not factorization_check(leslie, corrupted, x, 4)


class TestLeslieModel:
    def test_reference_instance(self, leslie):
        np.testing.assert_array_equal(
            leslie.A, [[0, 0, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0]]
        )
        np.testing.assert_array_equal(leslie.C, [[0, 0, 1, 1]])
        assert leslie.m == 0 and leslie.p == 1

    def test_single_class(self):
        ss = leslie_model([2.0], [], 1)
        np.testing.assert_array_equal(ss.A, [[2.0]])
        np.testing.assert_array_equal(ss.C, [[1.0]])

    def test_all_rates_zero(self):
        ss = leslie_model([0.0, 0.0], [0.0], 2)
        w, _ = simulate(ss, [1.0, 1.0], 3)
        np.testing.assert_array_equal(w.samples.ravel(), [2, 0, 0])

    def test_rate_validation(self):
        with pytest.raises(ValueError):
            leslie_model([-1.0], [], 1)
        with pytest.raises(ValueError):
            leslie_model([1.0, 1.0], [1.5], 1)
        with pytest.raises(ValueError):
            leslie_model([1.0, 1.0], [0.5], 3)


class TestWireFormats:
    def test_model_json_round_trip(self):
        rng = np.random.default_rng(19)
        for affine in (False, True):
            ss = random_model(rng, affine)
            back = model_from_json_dict(model_to_json_dict(ss))
            np.testing.assert_array_equal(back.A, ss.A)
            np.testing.assert_array_equal(back.D, ss.D)
            assert back.affine == ss.affine
            if affine:
                np.testing.assert_array_equal(back.E, ss.E)
                np.testing.assert_array_equal(back.F, ss.F)

    def test_state_csv_round_trip(self):
        x = StateTrajectory(np.array([[1.0, 2.0], [3.0, 0.25]]))
        back = state_trajectory_from_csv(state_trajectory_to_csv(x))
        np.testing.assert_array_equal(back.samples, x.samples)

    def test_model_json_rejects_garbage(self):
        with pytest.raises(ValueError):
            model_from_json_dict({"n": 1, "m": 0})
