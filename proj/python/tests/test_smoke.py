# Copyright 2026 The toricnbm Authors
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


import pytest

import toricnbm as tn


def test_code_structure():
    code = tn.build_toric(4)
    assert code.num_qubits == 32
    assert code.num_checks("standard") == 32
    assert code.num_checks("overcomplete") == 96
    assert tn.validate(code) == (True, "")
    assert all(tn.PauliVector(l).weight == 4 for l in code.logicals)


def test_pauli_algebra():
    a = tn.PauliVector("XYZI")
    assert str(a * tn.PauliVector("XXXX")) == "IZYX"
    assert a.weight == 3


def test_decoder_corrects_single_error():
    code = tn.build_toric(5)
    error = tn.PauliVector("I" * 7 + "Y" + "I" * 42)
    s = code.syndrome(error)
    out = tn.Decoder(5, "bp+match", 0.05).decode(s)
    correction = tn.PauliVector(out["correction"])
    assert code.syndrome(correction) == s
    assert not code.is_logical_failure(error, correction)


def test_decoder_rejects_bad_syndrome():
    dec = tn.Decoder(4, "mwpm", 0.05)
    with pytest.raises(tn.ConfigError):
        dec.decode([1] + [0] * 31)


def test_simulate_is_worker_independent():
    cfg = dict(d=4, epsilon=0.08, variant="mwpm", target_failures=10, seed=3)
    a = tn.simulate(workers=1, **cfg)
    b = tn.simulate(workers=3, **cfg)
    assert a == b
    assert a["failures"] == 10
    lo, hi = a["ci"]
    assert lo < a["ler"] < hi


def test_unknown_config_key():
    with pytest.raises(tn.ConfigError):
        tn.simulate(d=4, epsilon=0.05, colour="red")


def test_train_transfer_decode(tmp_path):
    ws, losses = tn.train(4, steps=2, batch_size=4, iterations=3, workers=1)
    assert len(losses) == 2
    path = str(tmp_path / "w.json")
    tn.save_weights(ws, path)
    assert tn.load_weights(path) == ws
    w6 = tn.transfer(ws, 6)
    assert w6.transferred_from == 4 and w6.kind == "dense"
    stats = tn.simulate(w6, d=6, epsilon=0.05, variant="conv-rnbp+match", target_failures=2, max_shots=500,
                        workers=1)
    assert stats["shots"] > 0


def test_stats_and_matching():
    lo, hi = tn.negbin_ci(0, 1000)
    assert lo == 0 and hi == pytest.approx(1 - 0.025 ** (1 / 1000), rel=1e-12)
    pairs, total = tn.mwpm([[0, 1, 5, 5], [1, 0, 5, 5], [5, 5, 0, 2], [5, 5, 2, 0]])
    assert sorted(pairs) == [(0, 1), (2, 3)] and total == 3


def test_sweep_csv():
    text = tn.sweep(distances=[3], epsilons=[0.05, 0.1], variants=["mwpm"], target_failures=5, workers=1)
    lines = text.strip().splitlines()
    assert lines[0].startswith("d,epsilon,variant")
    assert len(lines) == 3
