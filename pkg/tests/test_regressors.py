import numpy as np
import pytest
from scipy.spatial.distance import cdist

from wattcast.errors import (
    DivergedLoss,
    HistoryTooShort,
    KTooLarge,
    LengthMismatch,
    Underdetermined,
)
from wattcast.regressors import (
    GpModel,
    KnnModel,
    MeanModel,
    MlpModel,
    OlsModel,
    SvrModel,
    default_hidden,
    dual_objective,
)
from wattcast.transform import SupervisedFrame


def make_frame(X, y, lag_order=None):
    X = np.atleast_2d(np.asarray(X, dtype=float))
    y = np.asarray(y, dtype=float)
    p = X.shape[1] if lag_order is None else lag_order
    names = tuple(f"lag_{p - j}" for j in range(p))
    names += tuple(f"x{j}" for j in range(X.shape[1] - p))
    positions = np.arange(p, p + y.size)
    return SupervisedFrame(X, y, p, names, positions)


def random_frame(rng, n=40, p=3):
    X = rng.normal(size=(n, p))
    y = X @ rng.normal(size=p) + 0.5 + 0.1 * rng.normal(size=n)
    return make_frame(X, y)


class TestOls:
    def test_hand_solved_line(self):
        model = OlsModel().fit(make_frame([[0], [1], [2]], [1, 3, 4]))
        assert abs(model.coef_[0] - 1.5) <= 1e-10
        assert abs(model.intercept_ - 7 / 6) <= 1e-10

    def test_constant_targets(self):
        model = OlsModel().fit(make_frame([[0], [1], [2], [5]], [3, 3, 3, 3]))
        assert abs(model.intercept_ - 3.0) <= 1e-10
        assert abs(model.coef_[0]) <= 1e-10

    def test_exact_linear_interpolation(self):
        x = np.arange(6.0)
        model = OlsModel().fit(make_frame(x[:, None], 2 * x))
        assert abs(model.coef_[0] - 2.0) <= 1e-10
        assert abs(model.intercept_) <= 1e-10
        assert np.allclose(model.predict_batch(x[:, None]), 2 * x, atol=1e-10)

    def test_residuals_orthogonal_to_design(self):
        rng = np.random.default_rng(10)
        frame = random_frame(rng)
        model = OlsModel().fit(frame)
        resid = frame.y - model.predict_batch(frame.X)
        A = np.column_stack([np.ones(frame.n_samples), frame.X])
        assert np.max(np.abs(A.T @ resid)) <= 1e-8 * max(np.abs(frame.y).sum(), 1.0)
        assert abs(resid.mean()) <= 1e-10

    def test_row_permutation_invariance(self):
        rng = np.random.default_rng(11)
        frame = random_frame(rng)
        perm = rng.permutation(frame.n_samples)
        shuffled = make_frame(frame.X[perm], frame.y[perm])
        a = OlsModel().fit(frame)
        b = OlsModel().fit(shuffled)
        probe = rng.normal(size=(5, frame.n_features))
        assert np.allclose(a.predict_batch(probe), b.predict_batch(probe), atol=1e-8)

    def test_underdetermined(self):
        with pytest.raises(Underdetermined):
            OlsModel().fit(make_frame(np.eye(3), [1, 2, 3]))

    def test_constant_column_handled_by_jitter(self):
        x = np.arange(8.0)
        X = np.column_stack([x, np.full(8, 5.0)])
        model = OlsModel().fit(make_frame(X, 2 * x + 1))
        assert abs(model.coef_[1]) <= 1e-3
        assert np.allclose(model.predict_batch(X), 2 * x + 1, atol=1e-6)


class TestKnn:
    def test_hand_ranked_neighbours(self):
        model = KnnModel(k=2).fit(make_frame([[0], [1], [2]], [0, 10, 20]))
        assert model.predict([0.6]) == 5.0

    def test_k1_at_training_point(self):
        model = KnnModel(k=1).fit(make_frame([[0], [1], [2]], [4, 8, 15]))
        assert model.predict([1.0]) == 8.0

    def test_k_equals_n_is_global_mean(self):
        y = np.array([1.0, 2.0, 6.0])
        model = KnnModel(k=3).fit(make_frame([[0], [1], [2]], y))
        assert model.predict([99.0]) == pytest.approx(y.mean())

    def test_tie_keeps_earlier_index(self):
        model = KnnModel(k=1).fit(make_frame([[0], [2], [4]], [100, 200, 300]))
        # query at 1 is equidistant from 0 and 2
        assert model.predict([1.0]) == 100.0

    def test_k_too_large(self):
        with pytest.raises(KTooLarge):
            KnnModel(k=4).fit(make_frame([[0], [1], [2]], [1, 2, 3]))

    def test_prediction_within_target_range(self):
        rng = np.random.default_rng(12)
        frame = random_frame(rng)
        model = KnnModel(k=3).fit(frame)
        preds = model.predict_batch(rng.normal(size=(30, frame.n_features)))
        assert preds.min() >= frame.y.min()
        assert preds.max() <= frame.y.max()


class TestGp:
    def test_near_noiseless_interpolation(self):
        frame = make_frame([[0], [1], [2]], [1.0, 2.0, 0.0])
        model = GpModel(noise_var=1e-12, standardize=False).fit(frame)
        assert np.allclose(model.predict_batch(frame.X), frame.y, atol=1e-6)

    def test_far_query_reverts_to_prior(self):
        frame = make_frame([[0], [1]], [3.0, 4.0])
        model = GpModel(signal_var=2.0, noise_var=0.5, standardize=False).fit(frame)
        mean, var = model.predict_with_variance([100.0])
        assert abs(mean) <= 1e-12
        assert var == pytest.approx(2.5, abs=1e-12)

    def test_two_point_linear_solve_oracle(self):
        frame = make_frame([[0.0], [1.0]], [0.0, 1.0])
        model = GpModel(signal_var=1.0, length_scale=1.0, noise_var=0.1,
                        standardize=False).fit(frame)
        K = np.exp(-0.5 * np.array([[0.0, 1.0], [1.0, 0.0]])) + 0.1 * np.eye(2)
        k_star = np.exp(-np.array([0.5 ** 2, 0.5 ** 2]) / 2.0)
        expected = k_star @ np.linalg.solve(K, np.array([0.0, 1.0]))
        assert abs(model.predict([0.5]) - expected) <= 1e-10

    def test_posterior_variance_bounded_by_prior(self):
        rng = np.random.default_rng(13)
        frame = random_frame(rng, n=25)
        model = GpModel(standardize=False).fit(frame)
        prior = model.signal_var + model.noise_var
        for row in frame.X[:10]:
            _, var = model.predict_with_variance(row)
            assert 0.0 <= var <= prior + 1e-12

    def test_row_permutation_invariance(self):
        rng = np.random.default_rng(14)
        frame = random_frame(rng, n=30)
        perm = rng.permutation(frame.n_samples)
        a = GpModel().fit(frame)
        b = GpModel().fit(make_frame(frame.X[perm], frame.y[perm]))
        probe = rng.normal(size=(8, frame.n_features))
        assert np.allclose(a.predict_batch(probe), b.predict_batch(probe), atol=1e-8)

    def test_standardized_far_query_reverts_to_train_mean(self):
        rng = np.random.default_rng(15)
        frame = random_frame(rng, n=20)
        model = GpModel().fit(frame)
        far = np.full((1, frame.n_features), 1e6)
        assert model.predict_batch(far)[0] == pytest.approx(frame.y.mean(), rel=1e-9)

    def test_rejects_zero_noise(self):
        with pytest.raises(ValueError):
            GpModel(noise_var=0.0)


def project_box_hyperplane(v, z, box):
    """Euclidean projection onto {0 <= t <= box, z't = 0} by bisection."""
    lo = -(np.max(np.abs(v)) + box + 1.0)
    hi = -lo
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if z @ np.clip(v - mid * z, 0.0, box) > 0.0:
            lo = mid
        else:
            hi = mid
    return np.clip(v - 0.5 * (lo + hi) * z, 0.0, box)


def svr_qp_oracle(K, y, C, epsilon, iters=400_000):
    """Dense projected-gradient solve of the epsilon-SVR dual."""
    n = y.size
    Q = np.block([[K, -K], [-K, K]])
    p = np.concatenate([epsilon - y, epsilon + y])
    z = np.concatenate([np.ones(n), -np.ones(n)])
    step = 1.0 / (np.linalg.eigvalsh(Q).max() + 1.0)
    theta = np.zeros(2 * n)
    for _ in range(iters):
        new = project_box_hyperplane(theta - step * (Q @ theta + p), z, C)
        if np.max(np.abs(new - theta)) < 1e-14:
            theta = new
            break
        theta = new
    return theta[:n], theta[n:]


class TestSvr:
    def setup_method(self):
        self.X = np.array([[0.0], [1.0], [2.0], [3.0]])
        self.y = np.array([0.0, 0.9, 0.1, 0.8])
        self.gamma = 0.5
        self.K = np.exp(-self.gamma * cdist(self.X, self.X, "sqeuclidean"))

    def test_flat_targets_give_no_support_vectors(self):
        frame = make_frame([[0], [1], [2]], [5.0, 5.0, 5.0])
        model = SvrModel(epsilon=0.1, standardize=False).fit(frame)
        assert model.support_.size == 0
        assert model.predict([1.5]) == 5.0
        assert model.converged_

    def test_duals_match_projected_gradient_oracle(self):
        frame = make_frame(self.X, self.y)
        model = SvrModel(C=1.0, epsilon=0.1, gamma=self.gamma, tol=1e-8,
                         standardize=False).fit(frame)
        alpha, alpha_star = svr_qp_oracle(self.K, self.y, 1.0, 0.1)
        assert np.max(np.abs(model.alpha_ - alpha)) <= 1e-4
        assert np.max(np.abs(model.alpha_star_ - alpha_star)) <= 1e-4

    def test_dual_objective_not_worse_than_oracle(self):
        frame = make_frame(self.X, self.y)
        model = SvrModel(C=1.0, epsilon=0.1, gamma=self.gamma,
                         standardize=False).fit(frame)
        ours = dual_objective(self.K, self.y, 0.1, model.alpha_, model.alpha_star_)
        alpha, alpha_star = svr_qp_oracle(self.K, self.y, 1.0, 0.1)
        reference = dual_objective(self.K, self.y, 0.1, alpha, alpha_star)
        scale = max(abs(reference), 1.0)
        assert ours <= reference + 1e-6 * scale

    def test_box_and_complementarity(self):
        rng = np.random.default_rng(16)
        frame = random_frame(rng, n=30)
        model = SvrModel().fit(frame)
        assert np.all(model.alpha_ >= 0) and np.all(model.alpha_ <= model.C + 1e-12)
        assert np.all(model.alpha_star_ >= 0) and np.all(model.alpha_star_ <= model.C + 1e-12)
        assert np.all(model.alpha_ * model.alpha_star_ == 0.0)

    def test_point_inside_tube_has_zero_duals(self):
        frame = make_frame(self.X, self.y)
        model = SvrModel(C=1.0, epsilon=0.1, gamma=self.gamma, tol=1e-8,
                         standardize=False).fit(frame)
        preds = model.predict_batch(self.X)
        inside = np.abs(preds - self.y) < 0.1 - 1e-9
        assert np.all(model.alpha_[inside] == 0.0)
        assert np.all(model.alpha_star_[inside] == 0.0)

    def test_row_permutation_invariance(self):
        rng = np.random.default_rng(17)
        frame = random_frame(rng, n=25)
        perm = rng.permutation(frame.n_samples)
        a = SvrModel(tol=1e-6).fit(frame)
        b = SvrModel(tol=1e-6).fit(make_frame(frame.X[perm], frame.y[perm]))
        probe = rng.normal(size=(6, frame.n_features))
        assert np.allclose(a.predict_batch(probe), b.predict_batch(probe), atol=1e-4)

    def test_not_converged_keeps_best_iterate(self):
        rng = np.random.default_rng(18)
        frame = random_frame(rng, n=20)
        with pytest.warns(RuntimeWarning):
            model = SvrModel(max_iter=3).fit(frame)
        assert not model.converged_
        assert np.isfinite(model.predict([frame.X[0]]))


class TestMlp:
    def test_gradient_matches_finite_differences(self):
        rng = np.random.default_rng(19)
        X = rng.normal(size=(3, 4))
        y = rng.normal(size=3)
        model = MlpModel(hidden=3, epochs=0, seed=5, standardize=False)
        model.fit(make_frame(X, y))
        _, grads = model.loss_and_gradients(X, y)
        step = 1e-5
        worst = 0.0
        for name in ("w_in", "b_in", "w_out"):
            arr = getattr(model, name + "_")
            it = np.nditer(arr, flags=["multi_index"])
            for _ in it:
                idx = it.multi_index
                orig = arr[idx]
                arr[idx] = orig + step
                up = model.total_loss(X, y)
                arr[idx] = orig - step
                down = model.total_loss(X, y)
                arr[idx] = orig
                fd = (up - down) / (2 * step)
                g = grads[name][idx]
                worst = max(worst, abs(g - fd) / max(abs(g), abs(fd), 1e-8))
        b = model.b_out_
        model.b_out_ = b + step
        up = model.total_loss(X, y)
        model.b_out_ = b - step
        down = model.total_loss(X, y)
        model.b_out_ = b
        fd = (up - down) / (2 * step)
        g = grads["b_out"][0]
        worst = max(worst, abs(g - fd) / max(abs(g), abs(fd), 1e-8))
        assert worst <= 1e-4

    def test_zero_epochs_reproducible_from_seed(self):
        rng = np.random.default_rng(20)
        frame = random_frame(rng, n=10)
        a = MlpModel(epochs=0, seed=42).fit(frame)
        b = MlpModel(epochs=0, seed=42).fit(frame)
        probe = rng.normal(size=(4, frame.n_features))
        assert np.array_equal(a.predict_batch(probe), b.predict_batch(probe))
        c = MlpModel(epochs=0, seed=43).fit(frame)
        assert not np.array_equal(a.predict_batch(probe), c.predict_batch(probe))

    def test_learns_linear_relation(self):
        rng = np.random.default_rng(21)
        X = rng.normal(size=(60, 2))
        y = 2.0 * X[:, 0] - X[:, 1] + 0.3
        model = MlpModel(hidden=4, epochs=500, seed=1).fit(make_frame(X, y))
        assert model.loss_curve_[-1] <= 0.05

    def test_loss_curve_monotone_non_increasing(self):
        rng = np.random.default_rng(22)
        frame = random_frame(rng, n=30)
        model = MlpModel(epochs=80, seed=3, lr=0.6).fit(frame)
        assert np.all(np.diff(model.loss_curve_) <= 0.0)

    def test_diverged_loss_raises(self):
        rng = np.random.default_rng(23)
        X = rng.normal(size=(20, 2)) * 1e3
        y = rng.normal(size=20) * 1e3
        with np.errstate(all="ignore"):
            with pytest.raises(DivergedLoss):
                MlpModel(lr=1e12, epochs=5, standardize=False).fit(make_frame(X, y))

    def test_default_hidden_width(self):
        assert default_hidden(24) == 13
        assert default_hidden(1) == 1
        rng = np.random.default_rng(24)
        frame = random_frame(rng, n=12, p=5)
        model = MlpModel(epochs=0).fit(frame)
        assert model.w_in_.shape == (3, 5)

    def test_reproducible_from_seed_and_row_order(self):
        rng = np.random.default_rng(25)
        frame = random_frame(rng, n=15)
        a = MlpModel(epochs=20, seed=9).fit(frame)
        b = MlpModel(epochs=20, seed=9).fit(frame)
        assert np.array_equal(a.w_in_, b.w_in_)
        assert np.array_equal(a.w_out_, b.w_out_)


class TestPredictSeries:
    def identity_model(self):
        # slope-1 zero-intercept AR(1): the model repeats its input
        return OlsModel().fit(make_frame([[1.0], [2.0], [3.0]], [1.0, 2.0, 3.0]))

    def test_recursive_fixed_point(self):
        model = self.identity_model()
        preds = model.predict_series(np.array([5.0]), 3, mode="recursive")
        assert np.allclose(preds, [5.0, 5.0, 5.0], atol=1e-8)

    def test_one_step_follows_actuals(self):
        model = self.identity_model()
        preds = model.predict_series(np.array([5.0]), 3,
                                     mode="one_step_true_history",
                                     actuals=np.array([6.0, 7.0, 8.0]))
        assert np.allclose(preds, [5.0, 6.0, 7.0], atol=1e-8)

    def test_history_too_short(self):
        rng = np.random.default_rng(26)
        model = OlsModel().fit(random_frame(rng, n=20, p=4))
        with pytest.raises(HistoryTooShort):
            model.predict_series(np.array([1.0, 2.0]), 2)

    def test_one_step_requires_actuals(self):
        model = self.identity_model()
        with pytest.raises(LengthMismatch):
            model.predict_series(np.array([5.0]), 3, mode="one_step_true_history")

    def test_exog_shape_enforced(self):
        rng = np.random.default_rng(27)
        X = rng.normal(size=(20, 3))
        y = rng.normal(size=20)
        frame = make_frame(X, y, lag_order=2)  # 2 lags + 1 exogenous column
        model = OlsModel().fit(frame)
        with pytest.raises(LengthMismatch):
            model.predict_series(np.array([1.0, 2.0]), 2)
        preds = model.predict_series(np.array([1.0, 2.0]), 2,
                                     exog=np.zeros((2, 1)))
        assert preds.shape == (2,)


class TestMeanModel:
    def test_predicts_training_mean(self):
        frame = make_frame([[0], [1], [2]], [1.0, 2.0, 6.0])
        model = MeanModel().fit(frame)
        assert model.predict([123.0]) == pytest.approx(3.0)
        assert np.allclose(model.predict_batch(np.zeros((5, 1))), 3.0)
