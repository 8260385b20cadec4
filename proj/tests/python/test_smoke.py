import math

import numpy as np
import pytest

import fractal_tiling_lab as ftl


def test_presets_listed():
    names = ftl.presets()
    assert "carpet" in names and "cantor" in names
    assert ftl.preset("cantor")["name"] == "cantor"
    with pytest.raises(ftl.ConfigError):
        ftl.preset("no_such_preset")


def test_dimension():
    d = ftl.dimension("carpet")
    assert abs(d["D"] - math.log(8) / math.log(3)) < 1e-10
    assert abs(d["eta"] - math.log(3)) < 1e-10


def test_cantor_content_closed_form():
    doc = ftl.content("cantor", ["generator_integral", "tiling_via_h"])
    D = math.log(2) / math.log(3)
    exact = (1 / math.log(3)) * ((2 / D) * 6 ** -D + 6 ** (1 - D) / (3 * (1 - D)))
    rows = {r["method"]: r for r in doc["rows"]}
    assert rows["generator_integral"]["status"] == "ok"
    assert abs(rows["generator_integral"]["result"]["value"] / exact - 1) < 5e-3
    assert abs(rows["tiling_via_h"]["result"]["value"] / exact - 1) < 5e-3


def test_scene_dict_and_checks():
    scene = ftl.preset("cantor")
    p = ftl.Pipeline(scene, delta=2 ** -13)
    verdicts = {c["name"]: c["verdict"] for c in p.check()}
    assert verdicts["osc"] == "pass"
    assert verdicts["compatible"] == "pass"
    assert p.tiling()["g"] == pytest.approx(1 / 6, rel=1e-2)


def test_config_error_for_bad_scene():
    with pytest.raises(ftl.ConfigError):
        ftl.Pipeline({"name": "bad", "dim": 2, "maps": [{"ratio": 1.5}], "region": {"type": "box"}})
    with pytest.raises(ftl.ConfigError):
        ftl.Pipeline("carpet", delta=0.5)


def test_distance_transform_matches_brute_force():
    rng = np.random.default_rng(1)
    occ = rng.random((23, 31)) < 0.05
    occ[0, 0] = True
    dist = ftl.distance_transform(occ, 0.5)
    ys, xs = np.nonzero(occ)
    jj, ii = np.mgrid[0:23, 0:31]
    brute = np.sqrt(((jj[..., None] - ys) ** 2 + (ii[..., None] - xs) ** 2).min(axis=-1)) * 0.5
    assert np.allclose(dist, brute)


def test_render_writes_layers(tmp_path):
    report = ftl.render("cantor", str(tmp_path), delta=2 ** -12)
    assert (tmp_path / "render.json").exists() or any(tmp_path.iterdir())
    assert report["g"] > 0


def test_threads():
    ftl.set_threads(1)
    assert ftl.thread_count() == 1
