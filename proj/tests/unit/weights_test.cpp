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

#include "toricnbm/weights.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>

namespace toricnbm {
namespace {

using Reason = WeightFileError::Reason;

WeightSet random_conv(int T, std::uint64_t seed) {
  const ToricCode code = build_toric(4);
  WeightSet ws = init_unit(WeightKind::Conv, T, code, MatrixKind::Overcomplete);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.5, 1.5);
  for (auto& v : ws.values) v = u(rng);
  ws.trained_epsilon = 0.1;
  return ws;
}

Reason reason_of(const std::string& text) {
  try {
    weights_from_json(text);
  } catch (const WeightFileError& e) {
    return e.reason();
  }
  ADD_FAILURE() << "expected a WeightFileError";
  return Reason::Schema;
}

TEST(Weights, UnitInitShapes) {
  const ToricCode code = build_toric(5);
  EXPECT_EQ(init_unit(WeightKind::Conv, 3, code, MatrixKind::Overcomplete).values.size(), 3u * kNumEdgeClasses);
  EXPECT_EQ(init_unit(WeightKind::Dense, 2, code, MatrixKind::Standard).values.size(), 2 * code.standard.num_edges());
}

TEST(Weights, ConvBindLooksUpClasses) {
  const ToricCode code = build_toric(6);
  const WeightSet ws = random_conv(2, 3);
  const auto bound = bind(ws, code);
  const auto classes = build_edge_classes(code);
  const std::size_t m = code.overcomplete.num_edges();
  for (int t = 0; t < 2; ++t)
    for (std::size_t e = 0; e < m; ++e)
      EXPECT_EQ(bound.layer(t)[e], ws.values[t * kNumEdgeClasses + classes.class_of_edge[e]]);
}

TEST(Weights, DenseRefusesOtherDistance) {
  const WeightSet dense = init_unit(WeightKind::Dense, 2, build_toric(4), MatrixKind::Overcomplete);
  EXPECT_NO_THROW(bind(dense, build_toric(4)));
  EXPECT_THROW(bind(dense, build_toric(5)), std::invalid_argument);
  EXPECT_THROW(transfer(dense, build_toric(5)), std::invalid_argument);
}

TEST(Weights, TransferMaterializesDenseSet) {
  const WeightSet ws = random_conv(3, 11);
  const ToricCode d8 = build_toric(8);
  const WeightSet t = transfer(ws, d8);
  EXPECT_EQ(t.kind, WeightKind::Dense);
  EXPECT_EQ(t.distance, 8);
  ASSERT_TRUE(t.transferred_from.has_value());
  EXPECT_EQ(*t.transferred_from, 4);
  EXPECT_EQ(bind(t, d8), bind(ws, d8));
}

TEST(Weights, ReduceSumsByClass) {
  const ToricCode code = build_toric(3);
  const WeightSet ws = random_conv(1, 5);
  const std::size_t m = code.overcomplete.num_edges();
  const auto red = reduce_to_set(ws, code, std::vector<double>(m, 1.0), 1);
  ASSERT_EQ(red.size(), static_cast<std::size_t>(kNumEdgeClasses));
  for (double v : red) EXPECT_EQ(v, 9.0);
}

TEST(Weights, LossOfPerfectMarginalsIsZero) {
  const auto e = PauliVector::from_string("IXZ");
  const std::vector<std::vector<Quaternary>> q{{{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 0, 1}}};
  EXPECT_NEAR(loss(q, e), 0.0, 1e-15);
  const std::vector<std::vector<Quaternary>> uniform(2, std::vector<Quaternary>(3, {0.25, 0.25, 0.25, 0.25}));
  EXPECT_NEAR(loss(uniform, e), std::log(4.0), 1e-15);
}

TEST(Weights, FileRoundTripIsExact) {
  WeightSet ws = random_conv(4, 9);
  ws.values[0] = 0.1 + 0.2;  // not representable in short decimal
  const auto path = std::filesystem::temp_directory_path() / "toricnbm_weights_roundtrip.json";
  save_weights(ws, path);
  EXPECT_EQ(load_weights(path), ws);
  std::filesystem::remove(path);
  EXPECT_THROW(load_weights(path), std::runtime_error);
}

TEST(Weights, LoadErrorsCarryReasons) {
  const WeightSet ws = random_conv(2, 1);
  const std::string good = to_json(ws);
  EXPECT_EQ(reason_of(good.substr(0, good.size() / 2)), Reason::Integrity);

  std::string tampered = good;
  const auto pos = tampered.find("\"values\"");
  const auto digit = tampered.find_first_of("123456789", pos);
  tampered[digit] = tampered[digit] == '9' ? '8' : static_cast<char>(tampered[digit] + 1);
  EXPECT_EQ(reason_of(tampered), Reason::Integrity);

  WeightSet v2 = ws;
  v2.format_version = 2;
  EXPECT_EQ(reason_of(to_json(v2)), Reason::Version);

  WeightSet other = ws;
  other.class_convention = "0123456789abcdef";
  EXPECT_EQ(reason_of(to_json(other)), Reason::Convention);

  auto j = good;
  j.replace(j.find("\"kind\""), 6, "\"kynd\"");
  EXPECT_EQ(reason_of(j), Reason::Schema);
}

}  // namespace
}  // namespace toricnbm
