// Copyright 2026 The ldpcount Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "ldpcount/random.h"

#include <cmath>
#include <vector>

#include "gtest/gtest.h"

namespace ldpcount {
namespace {

TEST(RngTest, SameSeedSameStream) {
  Rng a(42);
  Rng b(42);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(a(), b());
}

TEST(RngTest, StreamsDiffer) {
  Rng a = Rng::ForStream(7, 1);
  Rng b = Rng::ForStream(7, 2);
  int equal = 0;
  for (int i = 0; i < 1000; ++i) equal += a() == b();
  EXPECT_EQ(equal, 0);
}

TEST(RngTest, UniformIntIsUniform) {
  Rng rng(3);
  constexpr int kCells = 7;
  constexpr int kDraws = 700000;
  std::vector<int> counts(kCells, 0);
  for (int i = 0; i < kDraws; ++i) ++counts[rng.UniformInt(kCells)];
  double chi2 = 0;
  const double expected = static_cast<double>(kDraws) / kCells;
  for (int c : counts) chi2 += (c - expected) * (c - expected) / expected;
  // 6 degrees of freedom, significance 1e-3.
  EXPECT_LT(chi2, 22.458);
}

TEST(RngTest, UniformDoubleInUnitInterval) {
  Rng rng(5);
  double sum = 0;
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.UniformDouble();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  EXPECT_NEAR(sum / 100000, 0.5, 0.005);
}

TEST(RngTest, NormalMoments) {
  Rng rng(11);
  constexpr int kDraws = 400000;
  double sum = 0;
  double squares = 0;
  for (int i = 0; i < kDraws; ++i) {
    const double z = rng.StandardNormal();
    sum += z;
    squares += z * z;
  }
  EXPECT_NEAR(sum / kDraws, 0.0, 0.01);
  EXPECT_NEAR(squares / kDraws, 1.0, 0.01);
}

TEST(RngTest, LaplaceMedianOfMagnitudeIsScaleLn2) {
  Rng rng(13);
  constexpr int kDraws = 400000;
  constexpr double kScale = 3.0;
  int below = 0;
  for (int i = 0; i < kDraws; ++i) {
    below += std::fabs(rng.Laplace(kScale)) < kScale * std::log(2.0);
  }
  EXPECT_NEAR(static_cast<double>(below) / kDraws, 0.5, 0.005);
}

}  // namespace
}  // namespace ldpcount
