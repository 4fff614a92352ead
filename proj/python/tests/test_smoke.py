# Copyright 2026 The Edgesim Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import json
import math

import pytest

import edgesim


def test_version():
    assert edgesim.__version__ == "0.1.0"


def test_link_model_shapes():
    assert edgesim.path_loss_db(100.0) > edgesim.path_loss_db(10.0)
    assert edgesim.snr_db(10.0) > edgesim.snr_db(500.0)
    assert edgesim.shannon_capacity_bps(1e6, 3.0) == pytest.approx(2e6)
    assert edgesim.ue_bs_capacity_bps(50.0) > edgesim.ue_bs_capacity_bps(400.0)
    # 2 ms switching floor plus 50 ms per km of BS<->MH distance.
    assert edgesim.bs_mh_latency_ms(0.0) == pytest.approx(2.0)
    assert edgesim.bs_mh_latency_ms(1000.0) == pytest.approx(52.0)


def test_proportional_fair_conservation():
    alloc = edgesim.proportional_fair([5e7, 5e7, 5e7], [1e8, 1e8, 1e8], 9e7)
    assert sum(alloc) <= 9e7
    assert sum(alloc) == pytest.approx(9e7)
    assert alloc == pytest.approx([3e7, 3e7, 3e7])
    # Uncapped overload: everyone fits, demands granted exactly.
    assert edgesim.proportional_fair([1e6, 2e6], 1e9) == [1e6, 2e6]


def test_planar_laplace_round_trip():
    for eps in (0.1, 0.01):
        for u in (0.05, 0.5, 0.95):
            r = edgesim.planar_laplace_radius(eps, u)
            assert edgesim.planar_laplace_cdf(eps, r) == pytest.approx(u, abs=1e-12)
    # Median displacement scales as ~1.67835/epsilon.
    assert edgesim.planar_laplace_radius(0.1, 0.5) == pytest.approx(16.7835, rel=1e-4)


def test_obfuscate_identity_and_determinism():
    assert edgesim.obfuscate(12.5, -3.25, math.inf, seed=7) == (12.5, -3.25)
    a = edgesim.obfuscate(100.0, 200.0, 0.1, seed=7, user=3, t=11)
    b = edgesim.obfuscate(100.0, 200.0, 0.1, seed=7, user=3, t=11)
    c = edgesim.obfuscate(100.0, 200.0, 0.1, seed=7, user=3, t=12)
    assert a == b
    assert a != c
    assert a != (100.0, 200.0)


def test_displacement_stats():
    stats = edgesim.displacement_stats(0.1, n=20000, seed=3)
    assert stats["mean_m"] == pytest.approx(20.0, rel=0.05)
    assert stats["p50_m"] < stats["p95_m"]


def test_epsilon_labels():
    assert edgesim.epsilon_label(math.inf) == "inf"
    assert edgesim.epsilon_label(0.01) == "0.01"
    assert edgesim.parse_epsilon("inf") == math.inf
    assert edgesim.parse_epsilon("0.1") == 0.1
    with pytest.raises(ValueError):
        edgesim.parse_epsilon("-1")


def test_default_config_round_trip():
    cfg = json.loads(edgesim.default_config())
    assert cfg["population.car_passengers"] == 400
    assert cfg["privacy.epsilons"] == ["inf", 0.1, 0.01]
    assert cfg["latency.ms_per_km"] == 50.0
    # Hashing is invariant under key order but sensitive to values.
    h0 = edgesim.config_hash("{}")
    h1 = edgesim.config_hash(json.dumps(cfg))
    assert h0 == h1
    assert len(h0) == 16
    cfg["run.duration_s"] = 600.0
    assert edgesim.config_hash(json.dumps(cfg)) != h0
    edgesim.validate_config("{}")
    with pytest.raises(ValueError):
        edgesim.validate_config('{"bogus_key": 1}')
    with pytest.raises(ValueError):
        edgesim.validate_config('{"population.pedestrian_vr_pct": 10}')


def test_topology_queries():
    topo = edgesim.Topology.build(1000.0, 1000.0, bs_count=50, mh_count=10, seed=4)
    assert topo.bs_count() == 50
    assert topo.mh_count() == 10
    bs = topo.nearest_bs(500.0, 500.0)
    assert 0 <= bs < 50
    assert 0 <= topo.ideal_mh(bs) < 10
    x, y = topo.bs_position(bs)
    assert topo.nearest_bs(x, y) == bs


def test_pipeline_end_to_end(tmp_path):
    cfg = {
        "population.car_passengers": 4,
        "population.bus_passengers": 4,
        "population.pedestrians": 4,
        "run.duration_s": 60.0,
        "run.seeds": [1, 2],
    }
    out = tmp_path / "out"
    edgesim.run_all(json.dumps(cfg), str(out))

    report = json.loads((out / "report.json").read_text())
    assert report["n_seeds"] == 2
    assert report["epsilons"] == ["inf", "0.1", "0.01"]
    cls = report["classification"]
    total = sum(cls[k]["mean"] for k in ("always_offloaded", "privacy_dependent", "never_offloaded"))
    assert total == pytest.approx(100.0)
    for name in ("table3.csv", "fig5.csv", "fig6.csv", "fig7.csv", "fig8.csv"):
        assert (out / name).exists()
    for seed in (1, 2):
        for label in ("inf", "0.1", "0.01"):
            assert (out / f"outcomes_seed{seed}_eps{label}.csv").exists()

    # A repeat into a fresh directory reproduces the report byte for byte.
    out2 = tmp_path / "out2"
    edgesim.run_all(json.dumps(cfg), str(out2))
    assert (out / "report.json").read_bytes() == (out2 / "report.json").read_bytes()

    # Refusing to clobber existing artifacts without overwrite.
    with pytest.raises(ValueError):
        edgesim.generate(json.dumps(cfg), str(out))
    edgesim.generate(json.dumps(cfg), str(out), overwrite=True)
