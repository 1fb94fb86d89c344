import json
from dataclasses import replace

import numpy as np
import pytest

from polycell.errors import ConfigError
from polycell.evolve import GAConfig
from polycell.pipeline import reference, runner
from polycell.pipeline.artifacts import MANIFEST_NAME, RunRecorder, atomic_write, digest_file
from polycell.pipeline.config import DEFAULT_POLARIZE_VOLTAGES, ObjectiveSource, RunConfig, known_keys, load_config, parse_config
from polycell.surrogate.data import Objective, dataset_to_csv, design_grid, read_dataset, sample
from polycell.surrogate.mlp import TrainConfig
from polycell.surrogate.rsm import load_surface, paper_surface


def quick(cfg: RunConfig | None = None, **kw) -> RunConfig:
    cfg = cfg or load_config()
    return replace(cfg, train=TrainConfig(epochs=200), ga=GAConfig(population_size=20, generations=10), **kw)


def manifest(out):
    return json.loads((out / MANIFEST_NAME).read_text())


def assert_manifest_complete(out):
    doc = manifest(out)
    written = {p.name for p in out.iterdir() if p.name != MANIFEST_NAME}
    assert set(doc["artifacts"]) == written
    for name, digest in doc["artifacts"].items():
        assert digest == digest_file(out / name)


# --- config -----------------------------------------------------------------


def test_empty_config_gives_defaults():
    cfg = parse_config("")
    assert cfg.grid.p_steps == cfg.grid.t_steps == 9
    assert (cfg.ga.population_size, cfg.ga.generations, cfg.ga.seed) == (200, 200, 1)
    assert (cfg.bounds.p_min, cfg.bounds.p_max, cfg.bounds.t_min, cfg.bounds.t_max) == (1, 5, 50, 90)
    assert cfg.objective.source is ObjectiveSource.PAPER
    assert cfg.physics.voltage == 0.6
    assert cfg.polarize_voltages == DEFAULT_POLARIZE_VOLTAGES


def test_seed_overrides_every_component():
    cfg = parse_config("seed = 7\n[ga]\nseed = 3\n")
    assert cfg.seed == cfg.ga.seed == cfg.train.seed == 7


def test_dotted_and_table_forms_agree():
    assert parse_config("ga.generations = 5\n") == parse_config("[ga]\ngenerations = 5\n")


def test_misspelled_key_rejected():
    with pytest.raises(ConfigError, match="ga.generatons"):
        parse_config("[ga]\ngeneratons = 5\n")


def test_parse_error_names_line():
    with pytest.raises(ConfigError, match="line 2"):
        parse_config("preset = 'cubic'\nseed = = 3\n")


@pytest.mark.parametrize(
    "text",
    [
        "preset = 'octagonal'",
        "ga.population_size = 7",
        "objective.source = 'oracle'",
        "bounds.p_min = 9",
        "grid.p_steps = 1",
        "seed = -1",
        "polarize.voltages = [0.5, 'x']",
    ],
)
def test_invalid_values_rejected(text):
    with pytest.raises(ConfigError):
        parse_config(text)


def test_documented_keys_cover_sections():
    keys = known_keys()
    for key in ("objective.source", "train.epochs", "ga.sbx_index", "physics.voltage", "manifest.timing"):
        assert key in keys


def test_load_config_file(tmp_path):
    path = tmp_path / "run.toml"
    path.write_text('preset = "hexagonal"\n[objective]\nsource = "physics"\n')
    cfg = load_config(path)
    assert cfg.model == "hexagonal" and cfg.objective.source is ObjectiveSource.PHYSICS


# --- artifacts --------------------------------------------------------------


def test_atomic_write_leaves_no_temporaries(tmp_path):
    digest = atomic_write(tmp_path / "a.txt", "hello\n")
    assert digest.startswith("sha256:")
    assert [p.name for p in tmp_path.iterdir()] == ["a.txt"]
    assert digest == digest_file(tmp_path / "a.txt")


def test_recorder_merges_steps(tmp_path):
    rec = RunRecorder(tmp_path, {"k": 1}, 1)
    rec.write("one.csv", "x\n")
    rec.finish("first", {})
    rec = RunRecorder(tmp_path, {"k": 1}, 1)
    rec.write("two.csv", "y\n")
    rec.finish("second", {})
    doc = manifest(tmp_path)
    assert set(doc["steps"]) == {"first", "second"}
    assert set(doc["artifacts"]) == {"one.csv", "two.csv"}
    assert doc["generator"] == {"algorithm": "numpy.random.PCG64", "seed": 1}


# --- operations -------------------------------------------------------------


def test_paper_mode_optimize(tmp_path):
    summary = runner.paper_opt(quick(), "pentagonal", tmp_path)
    doc = manifest(tmp_path)
    assert "cell" not in doc["steps"]["optimize"]["components"]
    assert doc["steps"]["optimize"]["components"] == ["surrogate.paper_surfaces", "evolve"]
    assert summary["comparison"]["temperature_c"]["reported"] == 77.645
    assert json.loads((tmp_path / "summary.json").read_text()) == json.loads(json.dumps(summary))
    assert_manifest_complete(tmp_path)


def test_paper_mode_rejects_cubic(tmp_path):
    cfg = replace(quick(), preset="cubic")
    with pytest.raises(ConfigError):
        runner.optimize(cfg, tmp_path)


def test_optimize_same_seed_identical_front(tmp_path):
    runner.paper_opt(quick(), "hexagonal", tmp_path / "a")
    runner.paper_opt(quick(), "hexagonal", tmp_path / "b")
    assert (tmp_path / "a" / "front.csv").read_bytes() == (tmp_path / "b" / "front.csv").read_bytes()


def test_surfaces_source_requires_files(tmp_path):
    cfg = quick()
    cfg = replace(cfg, objective=replace(cfg.objective, source=ObjectiveSource.SURFACES))
    with pytest.raises(ConfigError):
        runner.optimize(cfg, tmp_path)


def test_sweep_writes_two_datasets(tmp_path):
    summary = runner.sweep(quick(), tmp_path)
    assert summary["rows"] == 81 and summary["skipped"] == []
    for objective in Objective:
        ds = read_dataset(tmp_path / f"{objective.value}.csv")
        assert len(ds) == 81
        assert np.all(ds.value >= 0)
    assert manifest(tmp_path)["steps"]["sweep"]["components"] == ["cell"]
    assert_manifest_complete(tmp_path)


def test_sweep_fails_when_too_many_points_fail(tmp_path):
    cfg = quick()
    # below-zero voltage is rejected at every grid point
    cfg = replace(cfg, physics=replace(cfg.physics, voltage=-0.1))
    with pytest.raises(runner.SweepError):
        runner.sweep(cfg, tmp_path)


def test_train_and_fit_from_paper_samples(tmp_path):
    cfg = quick()
    src = tmp_path / "production.csv"
    surface = paper_surface("pentagonal", Objective.PRODUCTION)
    src.write_text(dataset_to_csv(sample(surface, design_grid())))
    stats = runner.train(cfg, src, tmp_path)
    doc = manifest(tmp_path)
    assert doc["steps"]["train:production"]["inputs"] == [{"name": "production.csv", "digest": digest_file(src)}]
    assert stats["model"] == "production.mlp.json"

    fitted = runner.fit(cfg, src, tmp_path)
    np.testing.assert_allclose(load_surface(tmp_path / "production.surface.json").coefficients, surface.coefficients, rtol=1e-6)
    assert fitted["residual_rms_w"] < 1e-15

    fitted_model = runner.fit(cfg, tmp_path / "production.mlp.json", tmp_path)
    assert fitted_model["surface"] == "production.surface.json"
    assert manifest(tmp_path)["steps"]["fit:production"]["components"] == ["surrogate.mlp", "surrogate.rsm"]


def test_polarize_properties(tmp_path):
    summary = runner.polarize(quick(), tmp_path)
    lines = (tmp_path / "polarization.csv").read_text().splitlines()
    assert lines[0] == "voltage_v,current_density_a_m2,power_density_w_m2"
    rows = [tuple(map(float, line.split(","))) for line in lines[1:]]
    assert rows[0][0] == pytest.approx(summary["open_circuit_voltage_v"])
    assert rows[0][1] == 0.0
    currents = [r[1] for r in rows]
    assert all(a <= b for a, b in zip(currents, currents[1:]))
    for v, i, p in rows:
        assert p == v * i


def test_polarize_reports_bad_voltages_and_continues(tmp_path):
    summary = runner.polarize(quick(), tmp_path, ["ocv", 5.0, 0.5])
    assert summary["rows"] == 2
    assert summary["errors"][0]["voltage_v"] == 5.0


def test_physics_source_optimize(tmp_path):
    cfg = quick()
    cfg = replace(cfg, ga=GAConfig(population_size=8, generations=2), objective=replace(cfg.objective, source=ObjectiveSource.PHYSICS))
    summary = runner.optimize(cfg, tmp_path)
    assert summary["front"]["size"] >= 1
    assert manifest(tmp_path)["steps"]["optimize"]["components"] == ["cell", "evolve"]


def test_full_pipeline_deterministic(tmp_path):
    cfg = quick(load_config(), preset="hexagonal")
    runner.pipeline(cfg, tmp_path / "a")
    runner.pipeline(cfg, tmp_path / "b")
    names = sorted(p.name for p in (tmp_path / "a").iterdir())
    assert names == sorted(p.name for p in (tmp_path / "b").iterdir())
    for name in names:
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes(), name
    assert_manifest_complete(tmp_path / "a")


def test_timing_recorded_only_on_request(tmp_path):
    runner.paper_opt(replace(quick(), record_timing=True), "pentagonal", tmp_path)
    assert "timing_s" in manifest(tmp_path)["steps"]["optimize"]


# --- reference data ---------------------------------------------------------


def test_reference_constants_transcribed():
    assert reference.OPTIMIZED_VS_CUBIC_AVG_GAIN == {"pentagonal": 21.819, "hexagonal": 39.931}
    assert len(reference.CURRENT_DENSITY_DIFFERENCES) == 6
    assert reference.REPORTED_OPTIMA["hexagonal"]["temperature_c"] == 90.0
    with pytest.raises(TypeError):
        reference.OPTIMIZED_VS_CUBIC_AVG_GAIN["pentagonal"] = 0.0
    table = reference.reference_table("hexagonal")
    assert len(table["current_density_differences"]) == 3
    assert reference.comparison("cubic", {}) is None
