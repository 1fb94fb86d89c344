import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polycell.errors import ContractError, DegenerateFeatureError, DivergenceError, DomainError, RankError
from polycell.pipeline.config import load_config
from polycell.pipeline.runner import train_network
from polycell.surrogate import mlp as mlp_mod
from polycell.surrogate.data import (
    CSV_HEADER,
    Dataset,
    Objective,
    dataset_to_csv,
    denormalize,
    design_grid,
    normalize,
    read_dataset,
    sample,
)
from polycell.surrogate.mlp import MLP, MLPConfig, TrainConfig, mlp_forward, mlp_gradients, mlp_init, mlp_train, mse_loss
from polycell.surrogate.rsm import (
    PAPER_SURFACES,
    QuadraticSurface,
    fit_quadratic,
    grid_argmax,
    load_surface,
    paper_surface,
    residual_rms,
    surface_to_document,
)

PENT_PRO = paper_surface("pentagonal", Objective.PRODUCTION)


def paper_dataset(surface=PENT_PRO, steps=9):
    return sample(surface, design_grid(p_steps=steps, t_steps=steps))


# --- data -------------------------------------------------------------------


def test_design_grid_order_and_endpoints():
    grid = design_grid(p_steps=3, t_steps=2)
    assert grid == [(1.0, 50.0), (1.0, 90.0), (3.0, 50.0), (3.0, 90.0), (5.0, 50.0), (5.0, 90.0)]
    with pytest.raises(DomainError):
        design_grid(p_steps=1)


def test_csv_round_trip_is_exact(tmp_path):
    rng = np.random.default_rng(3)
    ds = Dataset(rng.uniform(1, 5, 20), rng.uniform(50, 90, 20), rng.normal(size=20) * 1e-5)
    text = dataset_to_csv(ds)
    assert text.splitlines()[0] == ",".join(CSV_HEADER)
    assert text.endswith("\n")
    path = tmp_path / "d.csv"
    path.write_text(text)
    back = read_dataset(path)
    for name in ("pressure", "temperature", "value"):
        assert np.array_equal(getattr(back, name), getattr(ds, name))


def test_read_dataset_rejects_wrong_header(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("p,t,v\n1,50,0\n")
    with pytest.raises(ContractError):
        read_dataset(path)


def test_normalize_round_trip():
    ds = paper_dataset()
    normed, scaler = normalize(ds)
    assert normed.inputs.min() == 0.0 and normed.inputs.max() == 1.0
    assert normed.value.min() == 0.0 and normed.value.max() == 1.0
    back = denormalize(normed, scaler)
    np.testing.assert_allclose(back.value, ds.value, rtol=1e-12, atol=1e-18)
    np.testing.assert_allclose(back.inputs, ds.inputs, rtol=1e-14)


def test_normalize_constant_feature():
    ds = Dataset(np.ones(4), np.array([50.0, 60, 70, 80]), np.arange(4.0))
    with pytest.raises(DegenerateFeatureError, match="pressure_atm"):
        normalize(ds)


def test_check_design_space():
    Dataset(np.array([1.0, 5.0]), np.array([50.0, 90.0]), np.zeros(2)).check_design_space()
    with pytest.raises(DomainError):
        Dataset(np.array([0.5]), np.array([50.0]), np.zeros(1)).check_design_space()


# --- mlp --------------------------------------------------------------------


def ones_network():
    cfg = MLPConfig(2, (2,), 1)
    return MLP(cfg, [np.ones((2, 2)), np.ones((2, 1))], [np.zeros(2), np.zeros(1)])


def test_forward_all_ones():
    assert mlp_forward(ones_network(), [1.0, 1.0])[0] == pytest.approx(4.0)
    # ReLU clips the hidden layer
    assert mlp_forward(ones_network(), [-1.0, -1.0])[0] == 0.0


def test_init_is_seeded_he_uniform():
    a, b = mlp_init(MLPConfig(), 5), mlp_init(MLPConfig(), 5)
    for wa, wb in zip(a.weights, b.weights):
        assert np.array_equal(wa, wb)
    assert np.abs(a.weights[0]).max() <= np.sqrt(6 / 2)
    assert np.abs(a.weights[1]).max() <= np.sqrt(6 / 10)
    assert all(not b.any() for b in a.biases)
    assert not np.array_equal(a.weights[0], mlp_init(MLPConfig(), 6).weights[0])


def test_forward_rejects_wrong_width():
    with pytest.raises(ContractError):
        mlp_forward(mlp_init(MLPConfig(), 1), np.zeros((3, 3)))


def numeric_gradient(net, x, y, h=1e-6):
    grads = []
    for p in net.parameters:
        g = np.zeros_like(p)
        for idx in np.ndindex(p.shape):
            old = p[idx]
            p[idx] = old + h
            up = mse_loss(net, x, y)
            p[idx] = old - h
            down = mse_loss(net, x, y)
            p[idx] = old
            g[idx] = (up - down) / (2 * h)
        grads.append(g)
    return grads


def test_gradients_match_finite_differences():
    rng = np.random.default_rng(11)
    net = mlp_init(MLPConfig(), 11)
    for b in net.biases:
        b[:] = rng.normal(scale=0.3, size=b.shape)
    x, y = rng.random((16, 2)), rng.random(16)
    gw, gb = mlp_gradients(net, x, y)
    analytic = [g for pair in zip(gw, gb) for g in pair]
    for a, n in zip(analytic, numeric_gradient(net, x, y)):
        np.testing.assert_allclose(a, n, rtol=1e-4, atol=1e-8)


def test_training_reduces_loss_and_is_deterministic():
    normed, _ = normalize(paper_dataset())
    net = mlp_init(MLPConfig(), 1)
    cfg = TrainConfig(epochs=300)
    trained, hist = mlp_train(net, normed.inputs, normed.value, cfg)
    again, hist2 = mlp_train(net, normed.inputs, normed.value, cfg)
    assert hist[-1] < hist[0]
    assert hist == hist2
    assert all(np.array_equal(a, b) for a, b in zip(trained.parameters, again.parameters))
    # the input network is left untouched
    assert all(np.array_equal(a, b) for a, b in zip(net.parameters, mlp_init(MLPConfig(), 1).parameters))


def test_minibatch_sgd_runs():
    normed, _ = normalize(paper_dataset())
    cfg = TrainConfig(epochs=20, batch_size=16, optimizer="sgd", learning_rate=0.05)
    _, hist = mlp_train(mlp_init(MLPConfig(), 2), normed.inputs, normed.value, cfg)
    assert len(hist) == 20 and np.all(np.isfinite(hist))


def test_divergence_reports_epoch():
    normed, _ = normalize(paper_dataset())
    y = normed.value * 1e4
    with pytest.raises(DivergenceError) as info:
        mlp_train(mlp_init(MLPConfig(), 1), normed.inputs, y, TrainConfig(epochs=50, optimizer="sgd", learning_rate=1.0))
    assert info.value.epoch >= 1


def test_train_config_validation():
    with pytest.raises(DomainError):
        TrainConfig(learning_rate=0)
    with pytest.raises(ValueError):
        TrainConfig(optimizer="rmsprop")


def test_model_file_round_trip(tmp_path):
    ds = paper_dataset()
    normed, scaler = normalize(ds)
    net, _ = mlp_train(mlp_init(MLPConfig(), 1), normed.inputs, normed.value, TrainConfig(epochs=50))
    net.scaler = scaler
    path = tmp_path / "m.mlp.json"
    path.write_text(mlp_mod.dumps(net))
    loaded = mlp_mod.load(path)
    np.testing.assert_allclose(loaded.predict(ds.pressure, ds.temperature), net.predict(ds.pressure, ds.temperature), rtol=1e-15, atol=0)
    assert json.loads(path.read_text())["format"] == mlp_mod.FORMAT_TAG
    doc = mlp_mod.mlp_to_document(net)
    doc["format"] = "other"
    with pytest.raises(ContractError):
        mlp_mod.mlp_from_document(doc)


# --- rsm --------------------------------------------------------------------


@pytest.mark.parametrize("key", sorted(PAPER_SURFACES, key=str))
def test_fit_recovers_paper_coefficients(key):
    surface = PAPER_SURFACES[key]
    fitted = fit_quadratic(paper_dataset(surface))
    np.testing.assert_allclose(fitted.coefficients, surface.coefficients, rtol=1e-6)


def test_fit_constant_dataset_gives_intercept_only():
    grid = design_grid(p_steps=5, t_steps=5)
    fitted = fit_quadratic(sample(lambda p, t: 3.5e-5, grid))
    assert fitted.c_0 == pytest.approx(3.5e-5, rel=1e-9)
    np.testing.assert_allclose(fitted.coefficients[:5], 0.0, atol=1e-15)


@given(st.integers(-30, 30))
@settings(max_examples=25, deadline=None)
def test_fit_is_scale_equivariant(k):
    ds = paper_dataset(steps=5)
    scale = 2.0**k  # power of two: scaling is exact in floating point
    scaled = Dataset(ds.pressure, ds.temperature, ds.value * scale)
    assert np.array_equal(fit_quadratic(scaled).coefficients, fit_quadratic(ds).coefficients * scale)


def test_fit_rank_errors():
    with pytest.raises(RankError):
        fit_quadratic(sample(PENT_PRO, design_grid(p_steps=2, t_steps=2)))
    # all samples on one pressure line: P terms are collinear with the intercept
    line = [(2.0, t) for t in np.linspace(50, 90, 12)]
    with pytest.raises(RankError):
        fit_quadratic(sample(PENT_PRO, line))


def test_residual_rms_zero_for_exact_fit():
    ds = paper_dataset()
    assert residual_rms(fit_quadratic(ds), ds) < 1e-15


def test_surface_document_round_trip(tmp_path):
    path = tmp_path / "s.surface.json"
    path.write_text(surface_to_document(PENT_PRO, residual_rms_w="0"))
    assert load_surface(path) == PENT_PRO


def test_grid_argmax_pentagonal():
    p, t, v = grid_argmax(PENT_PRO, (1, 5), (50, 90))
    assert p == 1.0
    assert abs(t - 77.65) <= 0.1
    assert v == pytest.approx(PENT_PRO(p, t))


def test_quadratic_surface_rejects_nan():
    with pytest.raises(DomainError):
        QuadraticSurface(np.nan, 0, 0, 0, 0, 0)


# --- further properties -----------------------------------------------------


def test_design_grid_examples():
    grid = design_grid((1, 5), (50, 90), 5, 2)
    assert len(grid) == 10
    assert sorted({p for p, _ in grid}) == [1, 2, 3, 4, 5]
    assert sorted({t for _, t in grid}) == [50, 90]
    assert design_grid((1, 5), (50, 90), 2, 2) == [(1, 50), (1, 90), (5, 50), (5, 90)]
    assert grid == sorted(grid)


def test_normalize_endpoints():
    ds = Dataset(np.array([1.0, 5.0]), np.array([50.0, 90.0]), np.array([0.0, 1.0]))
    normed, _ = normalize(ds)
    assert normed.pressure.tolist() == [0.0, 1.0]
    assert normed.temperature.tolist() == [0.0, 1.0]


@given(
    st.lists(
        st.tuples(st.floats(1, 5), st.floats(50, 90), st.floats(-1e-3, 1e-3)),
        min_size=2,
        max_size=30,
    ).filter(lambda rows: all(len({r[k] for r in rows}) > 1 for k in range(3)))
)
def test_normalize_round_trip_random(rows):
    arr = np.array(rows)
    ds = Dataset(arr[:, 0], arr[:, 1], arr[:, 2])
    back = denormalize(*normalize(ds))
    scale = np.abs(arr).max(axis=0)
    np.testing.assert_allclose(back.inputs, ds.inputs, rtol=0, atol=1e-12 * scale[:2].max())
    np.testing.assert_allclose(back.value, ds.value, rtol=0, atol=1e-12 * scale[2])


def test_zero_weights_give_output_bias():
    net = mlp_init(MLPConfig(), 0)
    for w in net.weights:
        w[:] = 0.0
    net.biases[-1][:] = 0.37
    assert np.all(mlp_forward(net, np.random.default_rng(0).random((5, 2))) == 0.37)


def test_single_layer_passthrough():
    net = MLP(MLPConfig(1, (), 1), [np.ones((1, 1))], [np.zeros(1)])
    x = np.linspace(-2, 2, 7)[:, None]
    assert np.array_equal(mlp_forward(net, x), x[:, 0])


def test_gradient_zero_residual_and_duplicated_batch():
    net = mlp_init(MLPConfig(), 4)
    x = np.random.default_rng(4).random((6, 2))
    gw, gb = mlp_gradients(net, x, mlp_forward(net, x))
    assert all(not g.any() for g in gw + gb)
    y = np.random.default_rng(5).random(6)
    single = mlp_gradients(net, x, y)
    double = mlp_gradients(net, np.vstack([x, x]), np.concatenate([y, y]))
    for a, b in zip(single[0] + single[1], double[0] + double[1]):
        np.testing.assert_allclose(a, b, rtol=1e-12, atol=1e-15)


def test_training_constant_target():
    x = np.array(design_grid((0, 1), (0, 1), 5, 5))
    net, hist = mlp_train(mlp_init(MLPConfig(), 1), x, np.full(len(x), 0.5), TrainConfig())
    assert hist[-1] < 1e-6
    assert np.abs(mlp_forward(net, x) - 0.5).max() < 1e-3


def test_training_recovers_linear_function():
    ds = sample(lambda p, t: 2e-6 * p - 3e-7 * t + 1e-4, design_grid())
    normed, scaler = normalize(ds)
    net, _ = mlp_train(mlp_init(MLPConfig(), 1), normed.inputs, normed.value, TrainConfig(epochs=5000))
    net.scaler = scaler
    rmse = np.sqrt(np.mean((net.predict(ds.pressure, ds.temperature) - ds.value) ** 2))
    assert rmse < 0.01 * np.ptp(ds.value)


@pytest.mark.parametrize("key", sorted(PAPER_SURFACES, key=str))
def test_surrogate_fidelity_all_paper_surfaces(key):
    surface = PAPER_SURFACES[key]
    grid = design_grid()
    ds = sample(surface, grid)
    net, _, stats = train_network(load_config(), ds)
    assert stats["rmse_fraction_of_range"] <= 0.02
    refit = fit_quadratic(sample(lambda p, t: float(net.predict(p, t)[0]), grid))
    direct_p, direct_t, _ = grid_argmax(surface, (1, 5), (50, 90))
    p, t, _ = grid_argmax(refit, (1, 5), (50, 90))
    assert abs(p - direct_p) <= 0.05 and abs(t - direct_t) <= 1.0


def test_fit_constant_two_and_underdetermined():
    fitted = fit_quadratic(sample(lambda p, t: 2.0, design_grid()))
    assert fitted.c_0 == pytest.approx(2.0, abs=1e-9)
    np.testing.assert_allclose(fitted.coefficients[:5], 0.0, atol=1e-9)
    with pytest.raises(RankError):
        fit_quadratic(sample(PENT_PRO, design_grid(p_steps=5, t_steps=2)[:5]))


def test_surface_evaluation_examples():
    assert QuadraticSurface(0, 0, 0, 0, 0, 0)(3.0, 70.0) == 0.0
    assert PENT_PRO(1.0, 77.645) == pytest.approx(5.797e-5, abs=1e-8)
    assert paper_surface("hexagonal", "consumption")(1.0, 90.0) == pytest.approx(4.927e-6, abs=1e-9)


def test_paper_coefficients_transcribed():
    expected = {
        ("pentagonal", "production"): (3.266e-6, 5.816e-8, -3.127e-5, -1.928e-8, 2.936e-6, -3.027e-5),
        ("hexagonal", "production"): (3.82e-6, -6.802e-8, -2.82e-5, -9.945e-10, 5.052e-7, 5.251e-5),
        ("hexagonal", "consumption"): (-1.111e-7, -1.365e-8, 1.68e-6, 2.4647e-9, -2.729e-7, 9.1835e-6),
        ("pentagonal", "consumption"): (-5.112e-9, -4.847e-10, 6.669e-8, 5.415e-11, -4.154e-9, 1.172e-7),
    }
    for (model, objective), coeffs in expected.items():
        assert paper_surface(model, objective).coefficients.tolist() == list(coeffs)
    with pytest.raises(DomainError):
        paper_surface("cubic", "production")
