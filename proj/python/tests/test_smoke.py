# Copyright 2026 The Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import math

import pytest

import buyback


def triangle(values):
    return buyback.Instance(values, buyback.MatroidOracle.graphic([(0, 1), (1, 2), (0, 2)]))


def test_ratio_constants():
    assert buyback.competitive_ratio(0.0) == 1.0
    assert buyback.competitive_ratio(1.0) == pytest.approx(2.678346990016661, rel=1e-13)
    k = buyback.ratio_constants(1.0)
    assert k.r_star == pytest.approx(5.356693980033321, rel=1e-13)
    assert buyback.ratio_constants(0.0).degenerate
    with pytest.raises(ValueError):
        buyback.competitive_ratio(-1.0)


def test_lambert():
    w = buyback.lambert_w_lower(-0.2)
    assert w * math.exp(w) == pytest.approx(-0.2, rel=1e-12)


def test_greedy_triangle():
    inst = triangle([1.0, 2.0, 3.0])
    trace = buyback.run_gma(inst, 0.5)
    assert trace.final_set == [1, 2]
    assert trace.buyback_set == [0]
    assert buyback.payoff(trace, inst, 0.5).net == 4.5
    assert buyback.max_weight_basis(inst).value == 5.0
    assert buyback.validate_trace(trace, inst) is None
    assert trace.events[2].decision == buyback.Decision.swap


def test_randalg_is_seeded():
    inst = buyback.generate("random:kind=graphic,n=20", seed=3)
    a = buyback.run_randalg(inst, 1.0, seed=9)
    b = buyback.run_randalg(inst, 1.0, seed=9)
    assert a == b
    assert a.to_jsonl() == b.to_jsonl()


def test_round_value():
    assert buyback.round_value(8.0, 2.0, 0.5) == pytest.approx(2**2.5)
    assert buyback.round_value(8.0, 2.0, 0.0) == 8.0


def test_report():
    inst = buyback.generate("geometric:base=2,length=5")
    assert inst.values == [1, 2, 4, 8, 16]
    rep = buyback.estimate_expected_payoff("randalg", inst, 1.0, 2000, seed=1)
    assert rep.theoretical_bound == pytest.approx(2.678346990016661)
    assert 0 < rep.mean_net <= 16
    points, worst = buyback.worst_prefix_ratio("gma", inst, 0.0, 1)
    assert len(points) == 5 and points[worst].ratio == 1.0


def test_lower_bound():
    b = buyback.best_geometric(1.0, math.exp(2.0))
    assert b.payoff == pytest.approx(2 - 2 * math.exp(-2))
    assert b.prophet == pytest.approx(3.0)
    assert buyback.expected_payoff([1.0, 3.0], 1.0, 10.0) == pytest.approx(2 - 2 / 3)
    assert buyback.realized_payoff([1.0, 3.0, 9.0], 1.0, 4.0) == 2.0
    assert buyback.discretize_to_bids(1.0, 10.0) == [1, 2, 4, 8, 16]
    marks = buyback.brute_force_optimal_marks(1.0, math.exp(4.0), 3)
    assert marks[0] == pytest.approx(1.0, abs=1e-3)


def test_instance_io():
    inst = buyback.parse_instance('{"matroid":{"kind":"uniform","rank":1},"values":[1,4,16]}')
    again = buyback.parse_instance(inst.to_json())
    assert again.values == inst.values
    with pytest.raises(buyback.InputFormatError, match="line 2"):
        buyback.parse_instance('{"values": [1],\n "matroid": {"kind": "ring"}}')
    with pytest.raises(buyback.ConfigError):
        buyback.generate("fractal:n=2")


def test_suites():
    assert all(s.passed for s in buyback.run_all_suites())
