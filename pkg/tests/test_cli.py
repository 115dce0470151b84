import json

import numpy as np
import pytest

from weakssac import SynthConfig, generate_synthetic, load_embedding
from weakssac.cli import (
    EmbeddingSource,
    ExperimentConfig,
    build_tasks,
    check_dataset,
    config_from_dict,
    emit_fixture,
    load_config,
    main,
    parse_config_text,
    run_grid,
)

TINY = {
    "data": {"kind": "synthetic", "n": 24, "k": 3, "sigma": 2.0,
             "gamma_min": 1.0, "gamma_max": 3.0, "max_attempts": 4000},
    "oracles": ["local"],
    "c_dist": [0.8],
    "eta": [2],
    "variants": ["improved", "vanilla"],
    "repetitions": 3,
    "base_seed": 11,
}


def test_parse_config_json():
    d = parse_config_text(json.dumps(TINY))
    assert d["oracles"] == ["local"]


def test_parse_config_key_value():
    text = """
    # comment line
    data = {"kind": "synthetic", "n": 24, "k": 3}
    eta = 2, 5
    repetitions = 4
    oracles = local
    """
    d = parse_config_text(text)
    assert d["data"]["n"] == 24
    assert d["eta"] == [2, 5]
    assert d["repetitions"] == 4
    assert d["oracles"] == "local"


def test_config_from_dict_roundtrip():
    cfg = config_from_dict(TINY)
    assert isinstance(cfg.data, SynthConfig)
    assert cfg.eta == (2.0,)
    assert cfg.variants == ("improved", "vanilla")


def test_config_rejects_unknown_keys():
    with pytest.raises(ValueError, match="unknown config keys"):
        config_from_dict({**TINY, "bogus": 1})


def test_config_rejects_bad_oracle():
    with pytest.raises(ValueError, match="unknown oracle"):
        config_from_dict({**TINY, "oracles": ["psychic"]})


def test_config_embedding_source(tmp_path):
    path = tmp_path / "e.csv"
    path.write_text("0,0.0\n0,1.0\n1,5.0\n1,6.0\n")
    cfg = config_from_dict({
        "data": {"kind": "embedding", "path": str(path), "keep_labels": [0, 1]},
        "oracles": ["perfect"], "c_dist": [1.0], "eta": [2], "repetitions": 2,
    })
    assert isinstance(cfg.data, EmbeddingSource)
    results, cells = run_grid(
        ExperimentConfig(**{**_kw(cfg), "out": str(tmp_path / "out")}), echo=lambda *_: None
    )
    assert len(results) == 2 * 2  # two variants by default x 2 reps


def _kw(cfg):
    from weakssac.cli import _config_kwargs

    return _config_kwargs(cfg)


def test_build_tasks_count_and_order():
    cfg = config_from_dict({**TINY, "eta": [2, 5], "c_dist": [0.6, 0.8]})
    tasks = build_tasks(cfg)
    assert len(tasks) == 2 * 1 * 2 * 2 * 3
    keys = [(t.variant, t.oracle, t.c_dist, t.eta) for t in tasks]
    assert keys == sorted(keys)


def test_run_grid_outputs(tmp_path):
    cfg = config_from_dict({**TINY, "out": str(tmp_path / "res")})
    lines = []
    results, cells = run_grid(cfg, echo=lines.append)
    assert len(results) == 6
    assert len(cells) == 2
    assert len(lines) == 2
    runs = (tmp_path / "res" / "runs.csv").read_text().splitlines()
    assert runs[0] == ("variant,oracle,c_dist,eta,beta,seed,accuracy,failed,"
                       "phase1_failures,queries_p1,queries_p2,ambiguity_events,realized_gamma")
    assert len(runs) == 7
    summary = (tmp_path / "res" / "summary.csv").read_text().splitlines()
    assert summary[0] == ("variant,oracle,c_dist,eta,mean_accuracy,std_accuracy,"
                          "failure_count,mean_queries,n_reps")
    assert len(summary) == 3
    meta = json.loads((tmp_path / "res" / "config.json").read_text())
    assert meta["delta"] == 0.05


def test_run_grid_deterministic_bytes(tmp_path):
    for sub in ("a", "b"):
        cfg = config_from_dict({**TINY, "out": str(tmp_path / sub)})
        run_grid(cfg, echo=lambda *_: None)
    for name in ("runs.csv", "summary.csv"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_run_grid_parallel_matches_serial(tmp_path):
    serial = config_from_dict({**TINY, "out": str(tmp_path / "s")})
    parallel = config_from_dict({**TINY, "out": str(tmp_path / "p"), "parallel": 2})
    run_grid(serial, echo=lambda *_: None)
    run_grid(parallel, echo=lambda *_: None)
    assert (tmp_path / "s" / "runs.csv").read_bytes() == (tmp_path / "p" / "runs.csv").read_bytes()


def test_main_run_and_override(tmp_path):
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps(TINY))
    out = tmp_path / "results"
    assert main(["run", "--config", str(cfg_path), "--out", str(out), "--reps", "2"]) == 0
    runs = (out / "runs.csv").read_text().splitlines()
    assert len(runs) == 1 + 2 * 2


def test_main_check(tmp_path, capsys):
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps(TINY))
    assert main(["check", "--config", str(cfg_path), "--model", "local",
                 "--c-dist", "1.0"]) == 0
    text = capsys.readouterr().out
    assert "realized_gamma=" in text
    assert "coverage constant" in text
    assert "cluster 0:" in text


def test_main_check_rejects_big_epsilon(tmp_path):
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps(TINY))
    with pytest.raises(SystemExit):
        main(["check", "--config", str(cfg_path), "--epsilon", "99.0"])


def test_check_dataset_verdict(tmp_path, capsys):
    cfg = config_from_dict(TINY)
    ok = check_dataset(cfg, "local", 1.0)
    out = capsys.readouterr().out
    assert ("holds" in out) or ("does not hold" in out)
    assert isinstance(ok, bool)


def test_fixture_roundtrip(tmp_path):
    path = tmp_path / "fix.csv"
    emit_fixture(7, path, n=24, k=3, dim=2)
    ld = load_embedding(path)
    want = generate_synthetic(SynthConfig(n=24, k=3, dim=2, sigma=1.0, gamma_min=1.0,
                                          gamma_max=100.0, seed=7, center_box_scale=8.0,
                                          max_attempts=5000))
    assert np.array_equal(ld.dataset.points, want.dataset.points)
    assert np.array_equal(ld.truth.labels, want.truth.labels)


def test_fixture_two_seeds_differ(tmp_path):
    emit_fixture(1, tmp_path / "a.csv")
    emit_fixture(2, tmp_path / "b.csv")
    assert (tmp_path / "a.csv").read_bytes() != (tmp_path / "b.csv").read_bytes()


def test_main_fixture_unwritable(tmp_path):
    blocker = tmp_path / "blocker"
    blocker.write_text("")
    rc = main(["fixture", "--seed", "1", "--out", str(blocker / "x.csv")])
    assert rc == 1


def test_main_run_missing_config(tmp_path):
    rc = main(["run", "--config", str(tmp_path / "nope.json")])
    assert rc == 1


def test_task_seeds_stable():
    cfg = config_from_dict(TINY)
    a = [t.seed for t in build_tasks(cfg)]
    b = [t.seed for t in build_tasks(cfg)]
    assert a == b
    assert len(set(a)) == len(a)
