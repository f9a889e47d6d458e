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


"""Toric-code belief-matching decoders."""

import json

from ._core import (
    ConfigError,
    Decoder,
    InvariantViolation,
    IoError,
    PauliVector,
    ToricCode,
    WeightFileError,
    WeightSet,
    binomial_ci,
    build_toric,
    load_weights,
    mwpm,
    negbin_ci,
    sample_error,
    save_weights,
    transfer,
    unit_weights,
    validate,
)
from . import _core

__all__ = [
    "ConfigError",
    "Decoder",
    "InvariantViolation",
    "IoError",
    "PauliVector",
    "ToricCode",
    "WeightFileError",
    "WeightSet",
    "binomial_ci",
    "build_toric",
    "load_weights",
    "mwpm",
    "negbin_ci",
    "sample_error",
    "save_weights",
    "simulate",
    "sweep",
    "train",
    "transfer",
    "unit_weights",
    "validate",
]


def train(d=4, **config):
    """Trains a weight set at distance d. Keywords follow the config file keys.

    Returns (WeightSet, per-step losses).
    """
    return _core.train(d, json.dumps(config))


def simulate(weights=None, **config):
    """Monte Carlo for one point; returns a dict of run statistics."""
    return _core.simulate(json.dumps(config), weights)


def sweep(**config):
    """Runs a grid and returns the CSV text, header included."""
    return _core.sweep(json.dumps(config))
