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


#include "ldpcount/mechanisms.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <vector>

#include "absl/status/status.h"
#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "ldpcount/random.h"

namespace ldpcount {
namespace {

using ::testing::ElementsAre;
using ::testing::HasSubstr;

constexpr int64_t kM = 86400;

MeanConfig Mean(int64_t m = kM, int64_t s = kM) {
  return MeanConfig{.m = m, .s = s};
}

PrivacyParams Eps(double epsilon) { return PrivacyParams{.epsilon = epsilon}; }

TEST(PrivacyParamsTest, RejectsOutOfRangeValues) {
  EXPECT_TRUE(PrivacyParams::Create(1.0, 0.0).ok());
  EXPECT_TRUE(PrivacyParams::Create(1.0, 0.49).ok());
  EXPECT_EQ(PrivacyParams::Create(0.0).status().code(),
            absl::StatusCode::kInvalidArgument);
  EXPECT_EQ(PrivacyParams::Create(-1.0).status().code(),
            absl::StatusCode::kInvalidArgument);
  EXPECT_EQ(PrivacyParams::Create(INFINITY).status().code(),
            absl::StatusCode::kInvalidArgument);
  const absl::Status status = PrivacyParams::Create(1.0, 0.5).status();
  EXPECT_EQ(status.code(), absl::StatusCode::kInvalidArgument);
  EXPECT_THAT(status.message(), HasSubstr("gamma < 0.5"));
  EXPECT_FALSE(PrivacyParams::Create(1.0, -0.1).ok());
}

TEST(MeanConfigTest, RequiresDivisibleGrid) {
  EXPECT_TRUE(MeanConfig::Create(kM, kM).ok());
  EXPECT_TRUE(MeanConfig::Create(kM, kM / 20).ok());
  EXPECT_THAT(MeanConfig::Create(100, 7).status().message(),
              HasSubstr("s must divide m"));
  EXPECT_FALSE(MeanConfig::Create(100, 0).ok());
  EXPECT_FALSE(MeanConfig::Create(100, 200).ok());
  EXPECT_FALSE(MeanConfig::Create(0, 1).ok());
  EXPECT_EQ(Mean(kM, kM).GridSize(), 2);
  EXPECT_EQ(Mean(kM, kM / 20).GridSize(), 21);
}

TEST(HistConfigTest, RequiresDWithinK) {
  EXPECT_TRUE(HistConfig::Create(32, 1).ok());
  EXPECT_TRUE(HistConfig::Create(32, 32).ok());
  EXPECT_THAT(HistConfig::Create(32, 64).status().message(),
              HasSubstr("d <= k"));
  EXPECT_FALSE(HistConfig::Create(32, 0).ok());
  EXPECT_FALSE(HistConfig::Create(0, 1).ok());
}

TEST(OneBitMeanTest, ProbabilityEndpointsAndMidpoint) {
  const double e = std::exp(1.0);
  EXPECT_NEAR(*OneBitMeanProb(0, Mean(), Eps(1.0)), 1.0 / (e + 1.0), 1e-15);
  EXPECT_NEAR(*OneBitMeanProb(kM, Mean(), Eps(1.0)), e / (e + 1.0), 1e-15);
  EXPECT_NEAR(*OneBitMeanProb(kM / 2, Mean(), Eps(1.0)), 0.5, 1e-15);
  EXPECT_NEAR(*OneBitMeanProb(0, Mean(), Eps(1.0)), 0.268941, 1e-6);
}

TEST(OneBitMeanTest, ProbabilityIsAffineInX) {
  for (double epsilon : {0.1, 0.5, 1.0, 3.0, 10.0}) {
    const double p0 = *OneBitMeanProb(0, Mean(), Eps(epsilon));
    const double p1 = *OneBitMeanProb(kM, Mean(), Eps(epsilon));
    for (int64_t x = 0; x <= kM; x += 4321) {
      const double expected =
          p0 + (p1 - p0) * static_cast<double>(x) / static_cast<double>(kM);
      EXPECT_NEAR(*OneBitMeanProb(x, Mean(), Eps(epsilon)), expected, 1e-12);
    }
  }
}

TEST(OneBitMeanTest, RejectsValuesOutsideRange) {
  Rng rng(1);
  EXPECT_EQ(OneBitMeanProb(-1, Mean(), Eps(1.0)).status().code(),
            absl::StatusCode::kInvalidArgument);
  EXPECT_FALSE(OneBitMeanRespond(kM + 1, Mean(), Eps(1.0), rng).ok());
}

TEST(OneBitMeanTest, EmpiricalFrequencyAtZero) {
  Rng rng(2024);
  constexpr int kDraws = 1000000;
  int ones = 0;
  for (int i = 0; i < kDraws; ++i) {
    ones += OneBitMeanRespond(0, Mean(), Eps(1.0), rng)->bit;
  }
  EXPECT_NEAR(static_cast<double>(ones) / kDraws, 0.26894, 0.002);
}

TEST(OneBitMeanTest, LargeEpsilonIsNearlyDeterministic) {
  Rng rng(7);
  constexpr int kDraws = 1000000;
  int ones = 0;
  for (int i = 0; i < kDraws; ++i) {
    ones += OneBitMeanRespond(kM, Mean(), Eps(20.0), rng)->bit;
  }
  EXPECT_GE(static_cast<double>(ones) / kDraws, 0.999999);
}

TEST(OneBitMeanTest, SameSeedSameResponses) {
  Rng a(99);
  Rng b(99);
  for (int64_t x = 0; x <= kM; x += 1000) {
    EXPECT_EQ(*OneBitMeanRespond(x, Mean(), Eps(1.0), a),
              *OneBitMeanRespond(x, Mean(), Eps(1.0), b));
  }
}

TEST(OneBitMeanTest, LikelihoodRatioBoundedByEpsilon) {
  for (double epsilon : {0.1, 1.0, 3.0, 10.0}) {
    const double limit = std::exp(epsilon) * (1 + 1e-12);
    double worst = 0;
    for (int64_t x = 0; x <= kM; x += 2160) {
      for (int64_t y = 0; y <= kM; y += 2160) {
        const double px = *OneBitMeanProb(x, Mean(), Eps(epsilon));
        const double py = *OneBitMeanProb(y, Mean(), Eps(epsilon));
        worst = std::max({worst, px / py, (1 - px) / (1 - py)});
        ASSERT_LE(px / py, limit);
        ASSERT_LE((1 - px) / (1 - py), limit);
      }
    }
    // The extreme pair attains the bound exactly.
    EXPECT_NEAR(worst, std::exp(epsilon), std::exp(epsilon) * 1e-12);
  }
}

TEST(DBitFlipTest, BucketsAreDistinctAndInRange) {
  const HistConfig config{.k = 32, .d = 4};
  for (UserId user = 0; user < 1000; ++user) {
    const std::vector<int64_t> buckets = DBitFlipBuckets(user, 5, config);
    ASSERT_EQ(buckets.size(), 4u);
    std::set<int64_t> unique(buckets.begin(), buckets.end());
    EXPECT_EQ(unique.size(), 4u);
    for (int64_t b : buckets) {
      EXPECT_GE(b, 1);
      EXPECT_LE(b, 32);
    }
  }
}

TEST(DBitFlipTest, BucketsAreReproducibleFromPublicCoins) {
  const HistConfig config{.k = 32, .d = 4};
  EXPECT_EQ(DBitFlipBuckets(17, 123, config), DBitFlipBuckets(17, 123, config));
  EXPECT_NE(DBitFlipBuckets(17, 123, config), DBitFlipBuckets(17, 124, config));
}

TEST(DBitFlipTest, FullSampleIsPermutation) {
  const HistConfig config{.k = 16, .d = 16};
  std::vector<int64_t> buckets = DBitFlipBuckets(3, 3, config);
  std::sort(buckets.begin(), buckets.end());
  for (int64_t i = 0; i < 16; ++i) EXPECT_EQ(buckets[i], i + 1);
}

TEST(DBitFlipTest, BucketMarginalsAreUniform) {
  const HistConfig config{.k = 32, .d = 4};
  constexpr int kUsers = 100000;
  std::vector<int> counts(33, 0);
  for (UserId user = 0; user < kUsers; ++user) {
    for (int64_t b : DBitFlipBuckets(user, 77, config)) ++counts[b];
  }
  const double expected = kUsers * 4.0 / 32.0;
  for (int64_t b = 1; b <= 32; ++b) {
    EXPECT_NEAR(counts[b], expected, 3 * std::sqrt(expected)) << "bucket " << b;
  }
}

TEST(DBitFlipTest, SubsetsAreUniform) {
  // k=5, d=2 has ten unordered subsets.
  const HistConfig config{.k = 5, .d = 2};
  constexpr int kUsers = 200000;
  std::map<std::pair<int64_t, int64_t>, int> counts;
  for (UserId user = 0; user < kUsers; ++user) {
    std::vector<int64_t> b = DBitFlipBuckets(user, 9, config);
    std::sort(b.begin(), b.end());
    ++counts[{b[0], b[1]}];
  }
  ASSERT_EQ(counts.size(), 10u);
  const double expected = kUsers / 10.0;
  double chi2 = 0;
  for (const auto& [subset, c] : counts) {
    chi2 += (c - expected) * (c - expected) / expected;
  }
  // 9 degrees of freedom, significance 1e-3.
  EXPECT_LT(chi2, 27.877);
}

TEST(DBitFlipTest, BitProbabilities) {
  const double e = std::exp(1.0);
  EXPECT_NEAR(DBitFlipBitProb(true, 2.0), e / (e + 1), 1e-15);
  EXPECT_NEAR(DBitFlipBitProb(true, 2.0), 0.73106, 1e-5);
  EXPECT_NEAR(DBitFlipBitProb(false, 2.0), 1 / (e + 1), 1e-15);
}

TEST(DBitFlipTest, EmpiricalBitFrequencies) {
  const HistConfig config{.k = 8, .d = 2};
  const std::vector<int64_t> buckets = {3, 6};
  Rng rng(31);
  constexpr int kDraws = 400000;
  int match_ones = 0;
  int other_ones = 0;
  for (int i = 0; i < kDraws; ++i) {
    HistResponse r = *DBitFlipRespond(3, buckets, config, Eps(2.0), rng);
    ASSERT_EQ(r.entries.size(), 2u);
    EXPECT_EQ(r.entries[0].bucket, 3);
    EXPECT_EQ(r.entries[1].bucket, 6);
    match_ones += r.entries[0].bit;
    other_ones += r.entries[1].bit;
  }
  const double tol = 4 * std::sqrt(0.25 / kDraws);
  EXPECT_NEAR(static_cast<double>(match_ones) / kDraws, 0.731059, tol);
  EXPECT_NEAR(static_cast<double>(other_ones) / kDraws, 0.268941, tol);
}

TEST(DBitFlipTest, RejectsBadInputs) {
  const HistConfig config{.k = 4, .d = 2};
  Rng rng(1);
  const std::vector<int64_t> buckets = {1, 2};
  EXPECT_FALSE(DBitFlipRespond(0, buckets, config, Eps(1), rng).ok());
  EXPECT_FALSE(DBitFlipRespond(5, buckets, config, Eps(1), rng).ok());
  const std::vector<int64_t> too_few = {1};
  EXPECT_FALSE(DBitFlipRespond(1, too_few, config, Eps(1), rng).ok());
}

// Exact probability of a response bit vector given the true bucket.
double ResponseProb(int64_t v, const std::vector<int64_t>& buckets,
                    const std::vector<bool>& bits, double epsilon) {
  double p = 1;
  for (size_t j = 0; j < buckets.size(); ++j) {
    const double one = DBitFlipBitProb(buckets[j] == v, epsilon);
    p *= bits[j] ? one : 1 - one;
  }
  return p;
}

TEST(DBitFlipTest, ExhaustiveLikelihoodRatioForTwoBuckets) {
  const std::vector<int64_t> buckets = {1, 2};
  for (double epsilon : {0.5, 1.0, 4.0}) {
    double worst = 0;
    for (int mask = 0; mask < 4; ++mask) {
      const std::vector<bool> bits = {(mask & 1) != 0, (mask & 2) != 0};
      for (int64_t v = 1; v <= 2; ++v) {
        for (int64_t w = 1; w <= 2; ++w) {
          const double ratio = ResponseProb(v, buckets, bits, epsilon) /
                               ResponseProb(w, buckets, bits, epsilon);
          worst = std::max(worst, ratio);
          EXPECT_LE(ratio, std::exp(epsilon) * (1 + 1e-12));
        }
      }
    }
    EXPECT_NEAR(worst, std::exp(epsilon), std::exp(epsilon) * 1e-12);
  }
}

TEST(DBitFlipTest, LikelihoodRatioForLargerSamples) {
  const HistConfig config{.k = 6, .d = 3};
  for (UserId user = 0; user < 20; ++user) {
    const std::vector<int64_t> buckets = DBitFlipBuckets(user, 1, config);
    for (int mask = 0; mask < 8; ++mask) {
      std::vector<bool> bits = {(mask & 1) != 0, (mask & 2) != 0,
                                (mask & 4) != 0};
      for (int64_t v = 1; v <= 6; ++v) {
        for (int64_t w = 1; w <= 6; ++w) {
          EXPECT_LE(ResponseProb(v, buckets, bits, 1.5) /
                        ResponseProb(w, buckets, bits, 1.5),
                    std::exp(1.5) * (1 + 1e-12));
        }
      }
    }
  }
}

TEST(LaplaceTest, IsUnbiased) {
  Rng rng(5);
  constexpr int kDraws = 1000000;
  constexpr int64_t kX = 30000;
  double sum = 0;
  for (int i = 0; i < kDraws; ++i) {
    sum += *LaplaceMeanRespond(kX, Mean(), Eps(1.0), rng);
  }
  const double tolerance = 3 * (kM / 1.0) * std::sqrt(2.0 / kDraws);
  EXPECT_NEAR(sum / kDraws, kX, tolerance);
}

TEST(LaplaceTest, NoiseScaleIsMOverEpsilon) {
  Rng rng(6);
  constexpr int kDraws = 200000;
  const double scale = kM / 2.0;
  int below = 0;
  for (int i = 0; i < kDraws; ++i) {
    const double noise = *LaplaceMeanRespond(0, Mean(), Eps(2.0), rng);
    below += std::fabs(noise) < scale * std::log(2.0);
  }
  EXPECT_NEAR(static_cast<double>(below) / kDraws, 0.5, 0.005);
}

TEST(LaplaceTest, OutputIsNotClamped) {
  Rng rng(8);
  bool below_zero = false;
  bool above_m = false;
  for (int i = 0; i < 1000; ++i) {
    const double y = *LaplaceMeanRespond(kM / 2, Mean(), Eps(0.5), rng);
    below_zero |= y < 0;
    above_m |= y > kM;
  }
  EXPECT_TRUE(below_zero);
  EXPECT_TRUE(above_m);
}

TEST(BucketOfTest, MapsRangeOntoBuckets) {
  EXPECT_EQ(BucketOf(0, 100, 4), 1);
  EXPECT_EQ(BucketOf(24, 100, 4), 1);
  EXPECT_EQ(BucketOf(25, 100, 4), 2);
  EXPECT_EQ(BucketOf(99, 100, 4), 4);
  EXPECT_EQ(BucketOf(100, 100, 4), 4);
  std::vector<int64_t> seen;
  for (int64_t x = 0; x <= 100; ++x) {
    const int64_t b = BucketOf(x, 100, 4);
    if (seen.empty() || seen.back() != b) seen.push_back(b);
  }
  EXPECT_THAT(seen, ElementsAre(1, 2, 3, 4));
}

}  // namespace
}  // namespace ldpcount
