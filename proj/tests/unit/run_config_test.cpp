// Copyright 2026 The toricnbm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "toricnbm/run_config.hpp"

#include <gtest/gtest.h>

#include "toricnbm/errors.hpp"

namespace toricnbm {
namespace {

TEST(RunConfig, ParsesKnownKeys) {
  const RunConfig c = run_config_from_json(
      R"({"d": 6, "epsilons": [0.02, 0.04], "variant": "bp+match", "seed": 9, "share_iterations": true,
          "epsilon_train": 0.08})");
  EXPECT_EQ(c.d, 6);
  EXPECT_EQ(*c.epsilons, (std::vector<double>{0.02, 0.04}));
  EXPECT_EQ(c.variant, "bp+match");
  EXPECT_EQ(c.seed, 9u);
  EXPECT_EQ(c.share_iterations, true);
  EXPECT_EQ(*c.epsilon_train, std::vector<double>{0.08});  // scalar promoted to a list
  EXPECT_FALSE(c.out);
}

TEST(RunConfig, RejectsUnknownKeysAndBadTypes) {
  EXPECT_THROW(run_config_from_json(R"({"d": 4, "distnce": 5})"), ConfigError);
  EXPECT_THROW(run_config_from_json(R"({"d": "four"})"), ConfigError);
  EXPECT_THROW(run_config_from_json(R"({"seed": -1})"), ConfigError);
  EXPECT_THROW(run_config_from_json(R"({"d": 4.5})"), ConfigError);
  EXPECT_THROW(run_config_from_json("[1, 2]"), ConfigError);
  EXPECT_THROW(run_config_from_json("{"), ConfigError);
  EXPECT_THROW(load_run_config("/nonexistent/run.json"), IoError);
}

TEST(RunConfig, FlagsOverrideFile) {
  RunConfig file = run_config_from_json(R"({"d": 4, "epsilon": 0.1, "variant": "mwpm"})");
  RunConfig flags;
  flags.epsilon = 0.03;
  flags.seed = 5;
  const RunConfig m = merge(file, flags);
  EXPECT_EQ(m.d, 4);
  EXPECT_EQ(m.epsilon, 0.03);
  EXPECT_EQ(m.variant, "mwpm");
  EXPECT_EQ(m.seed, 5u);
}

TEST(RunConfig, EchoOmitsWorkersAndRoundTrips) {
  RunConfig c = run_config_from_json(R"({"d": 4, "workers": 7, "variants": ["mwpm", "bp"]})");
  const std::string echo = to_json(c);
  EXPECT_EQ(echo.find("workers"), std::string::npos);
  EXPECT_NE(to_json(c, true).find("\"workers\":7"), std::string::npos);
  const RunConfig back = run_config_from_json(echo);
  EXPECT_EQ(back.d, 4);
  EXPECT_EQ(*back.variants, (std::vector<std::string>{"mwpm", "bp"}));
  EXPECT_FALSE(back.workers);
}

TEST(RunConfig, ConvertsAndValidates) {
  RunConfig c = run_config_from_json(R"({"d": 5, "epsilon": 0.07, "variant": "nbp+match", "workers": 2})");
  const SimConfig s = to_sim_config(c);
  EXPECT_EQ(s.distance, 5);
  EXPECT_EQ(s.variant, Variant::NbpMatch);
  EXPECT_EQ(s.workers, 2);

  c.d = 2;
  EXPECT_THROW(to_sim_config(c), ConfigError);
  c.d = 4;
  c.variant = "lookup";
  EXPECT_THROW(to_sim_config(c), ConfigError);

  const SweepConfig w = to_sweep_config(run_config_from_json(R"({"distances": [4, 6], "epsilon": 0.05})"));
  EXPECT_EQ(w.distances, (std::vector<int>{4, 6}));
  EXPECT_EQ(w.epsilons, std::vector<double>{0.05});
  EXPECT_THROW(to_sweep_config(run_config_from_json(R"({"distances": [4, 2]})")), ConfigError);

  const TrainConfig t = to_train_config(run_config_from_json(R"({"steps": 10, "loss": "soft-syndrome"})"));
  EXPECT_EQ(t.steps, 10);
  EXPECT_EQ(t.loss, "soft-syndrome");
  EXPECT_THROW(to_train_config(run_config_from_json(R"({"loss": "mse"})")), ConfigError);

  EXPECT_FALSE(to_decode_options(run_config_from_json(R"({"second_stage": "none"})")).second_stage);
  EXPECT_FALSE(to_decode_options(run_config_from_json(R"({"weights_source": "prior"})")).posterior_weights);
  EXPECT_THROW(to_decode_options(run_config_from_json(R"({"second_stage": "maybe"})")), ConfigError);
}

}  // namespace
}  // namespace toricnbm
