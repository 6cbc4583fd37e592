// Copyright 2026 The cvbounds Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software distributed under the License is
// distributed on an "AS IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and limitations under the License.

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "cvbounds/learners.hpp"
#include "oracles.hpp"

namespace {

using cvb::ClassKind;
using cvb::Dataset;
using cvb::HypothesisClass;
using cvb::InvalidArgument;
using cvb::Loss;
using cvb::Orientation;
using cvb::Predictor;
using cvb::Sample;

Dataset noisy(std::size_t n, double eta, std::uint64_t seed) {
  cvb::CounterRng rng(seed);
  return cvb::SyntheticDistribution(0.5, eta).sample(n, rng);
}

std::vector<std::size_t> all_indices(std::size_t n) {
  std::vector<std::size_t> v(n);
  std::iota(v.begin(), v.end(), std::size_t{0});
  return v;
}

// Minimum number of training errors over every interval whose ends are taken
// from a candidate cut list containing the edges and all midpoints.
std::size_t brute_interval_min_errors(const Dataset& d, Orientation o) {
  std::vector<double> xs;
  for (const auto& s : d.samples()) xs.push_back(s.x);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::vector<double> cuts{0.0};
  for (std::size_t i = 1; i < xs.size(); ++i) cuts.push_back(0.5 * (xs[i - 1] + xs[i]));
  cuts.push_back(1.0);
  std::size_t best = std::numeric_limits<std::size_t>::max();
  for (std::size_t a = 0; a < cuts.size(); ++a) {
    for (std::size_t b = a; b < cuts.size(); ++b) {
      const Predictor phi = Predictor::interval(cuts[a], cuts[b], o);
      std::size_t err = 0;
      for (const auto& s : d.samples()) err += phi(s.x) != s.y ? 1 : 0;
      best = std::min(best, err);
    }
  }
  return best;
}

// Fraction of a fine midpoint grid where phi disagrees with 1{x >= theta}.
double grid_disagreement(const Predictor& phi, double theta) {
  constexpr int kCells = 200000;
  int diff = 0;
  for (int i = 0; i < kCells; ++i) {
    const double x = (i + 0.5) / kCells;
    diff += phi(x) != (x >= theta ? 1.0 : 0.0) ? 1 : 0;
  }
  return static_cast<double>(diff) / kCells;
}

TEST(Dataset, Validation) {
  EXPECT_THROW(Dataset({}), InvalidArgument);
  EXPECT_THROW(Dataset({{0.1, 0.5}}), InvalidArgument);
  EXPECT_NO_THROW(Dataset({{0.1, 0.5}}, cvb::LabelDomain::unit_interval));
  EXPECT_THROW(Dataset({{std::nan(""), 1.0}}), InvalidArgument);
  EXPECT_THROW(Dataset({{0.1, 1.5}}, cvb::LabelDomain::unit_interval), InvalidArgument);
}

TEST(Dataset, CsvRoundTripIsExact) {
  const Dataset d = noisy(50, 0.2, 3);
  std::stringstream ss;
  d.write_csv(ss);
  const Dataset back = Dataset::read_csv(ss);
  ASSERT_EQ(back.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    EXPECT_EQ(back[i].x, d[i].x);
    EXPECT_EQ(back[i].y, d[i].y);
  }
}

TEST(Dataset, CsvRejectsMalformed) {
  std::stringstream bad_header("a,b\n0.1,1\n");
  EXPECT_THROW(Dataset::read_csv(bad_header), InvalidArgument);
  std::stringstream bad_number("x,y\n0.1x,1\n");
  EXPECT_THROW(Dataset::read_csv(bad_number), InvalidArgument);
  std::stringstream extra_field("x,y\n0.1,1,2\n");
  EXPECT_THROW(Dataset::read_csv(extra_field), InvalidArgument);
  std::stringstream crlf("x,y\r\n0.25,1\r\n");
  EXPECT_EQ(Dataset::read_csv(crlf)[0].x, 0.25);
}

TEST(Dataset, OrderByXIsStable) {
  const Dataset d({{0.5, 1}, {0.2, 0}, {0.5, 0}, {0.1, 1}});
  EXPECT_EQ(d.order_by_x(), (std::vector<std::size_t>{3, 1, 0, 2}));
}

TEST(Loss, Values) {
  EXPECT_EQ(Loss::zero_one()(1.0, 1.0), 0.0);
  EXPECT_EQ(Loss::zero_one()(1.0, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(Loss::clipped_absolute()(0.2, 0.7), 0.5);
  EXPECT_EQ(Loss::clipped_absolute()(0.0, 3.0), 1.0);
}

TEST(Predictor, Evaluation) {
  const auto t = Predictor::threshold(0.3);
  EXPECT_EQ(t(0.3), 1.0);
  EXPECT_EQ(t(0.29), 0.0);
  EXPECT_EQ(Predictor::threshold(0.3, Orientation::negative)(0.29), 1.0);
  const auto iv = Predictor::interval(0.2, 0.4);
  EXPECT_EQ(iv(0.2), 1.0);
  EXPECT_EQ(iv(0.4), 0.0);
  EXPECT_EQ(Predictor::interval(0.2, 0.4, Orientation::negative)(0.4), 1.0);
}

TEST(ClassKind, Names) {
  EXPECT_EQ(cvb::class_kind_from_string("interval"), ClassKind::interval);
  EXPECT_EQ(cvb::to_string(ClassKind::threshold), "threshold");
  EXPECT_THROW(cvb::class_kind_from_string("ball"), InvalidArgument);
  EXPECT_EQ(HypothesisClass::threshold().vc_dim, 1U);
  EXPECT_EQ(HypothesisClass::interval().vc_dim, 2U);
}

TEST(Erm, ThresholdMatchesBruteForce) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const std::size_t n = 5 + seed % 40;
    const Dataset d = noisy(n, 0.25, seed);
    const Predictor fast = cvb::erm_fit(HypothesisClass::threshold(), cvb::ones(n), d, Loss::zero_one());
    const Predictor slow = oracle::brute_threshold_erm(d, all_indices(n));
    ASSERT_EQ(fast, slow) << "seed " << seed;
  }
}

TEST(Erm, ThresholdOnSubsampleMatchesBruteForce) {
  const Dataset d = noisy(12, 0.3, 77);
  const auto v = cvb::BinaryVector::from_string("101101110011");
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < 12; ++i) {
    if (v[i]) idx.push_back(i);
  }
  EXPECT_EQ(cvb::erm_fit(HypothesisClass::threshold(), v, d, Loss::zero_one()), oracle::brute_threshold_erm(d, idx));
}

TEST(Erm, DuplicateXValues) {
  const Dataset d({{0.2, 0}, {0.2, 1}, {0.2, 1}, {0.6, 1}, {0.6, 0}, {0.1, 0}});
  const Predictor fast = cvb::erm_fit(HypothesisClass::threshold(), cvb::ones(6), d, Loss::zero_one());
  EXPECT_EQ(fast, oracle::brute_threshold_erm(d, all_indices(6)));
  EXPECT_DOUBLE_EQ(fast.lower, 0.15);
}

TEST(Erm, IntervalAchievesBruteForceMinimum) {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const std::size_t n = 4 + seed % 20;
    const Dataset d = noisy(n, 0.3, 1000 + seed);
    for (auto o : {Orientation::positive, Orientation::negative}) {
      const Predictor phi = cvb::erm_fit(HypothesisClass::interval(o), cvb::ones(n), d, Loss::zero_one());
      const double err = cvb::empirical_loss_sum(phi, cvb::ones(n), d, Loss::zero_one());
      ASSERT_EQ(static_cast<std::size_t>(err), brute_interval_min_errors(d, o)) << "seed " << seed;
    }
  }
}

TEST(Erm, NegativeThresholdAchievesMinimum) {
  const Dataset d = noisy(30, 0.1, 5);
  // Flip labels: the negative-orientation ERM on d must match the positive one on the flip.
  std::vector<Sample> flipped;
  for (const auto& s : d.samples()) flipped.push_back({s.x, 1.0 - s.y});
  const Dataset f(flipped);
  const Predictor neg = cvb::erm_fit(HypothesisClass::threshold(Orientation::negative), cvb::ones(30), d, Loss::zero_one());
  const Predictor pos = cvb::erm_fit(HypothesisClass::threshold(), cvb::ones(30), f, Loss::zero_one());
  EXPECT_EQ(neg.lower, pos.lower);
  EXPECT_EQ(neg.orientation, Orientation::negative);
}

TEST(Erm, InvariantToSampleOrder) {
  const Dataset d = noisy(25, 0.2, 8);
  std::vector<Sample> rev(d.samples().rbegin(), d.samples().rend());
  const Dataset r(rev);
  for (auto cls : {HypothesisClass::threshold(), HypothesisClass::interval()}) {
    EXPECT_EQ(cvb::erm_fit(cls, cvb::ones(25), d, Loss::zero_one()),
              cvb::erm_fit(cls, cvb::ones(25), r, Loss::zero_one()));
  }
}

TEST(Erm, RealizableHasZeroTrainingError) {
  const Dataset d = noisy(40, 0.0, 12);
  const Predictor phi = cvb::erm_fit(HypothesisClass::threshold(), cvb::ones(40), d, Loss::zero_one());
  EXPECT_EQ(cvb::empirical_risk(phi, cvb::ones(40), d, Loss::zero_one()), 0.0);
}

TEST(Erm, RejectsUnsupportedLossAndSizes) {
  const Dataset d = noisy(5, 0.1, 1);
  EXPECT_THROW(cvb::erm_fit(HypothesisClass::threshold(), cvb::ones(5), d, Loss::clipped_absolute()), InvalidArgument);
  EXPECT_THROW(cvb::erm_fit(HypothesisClass::threshold(), cvb::ones(4), d, Loss::zero_one()), InvalidArgument);
}

TEST(TrueRisk, ThresholdMatchesGridIntegration) {
  const cvb::SyntheticDistribution dist(0.4, 0.15);
  for (double t : {0.0, 0.1, 0.4, 0.55, 0.99, 1.0}) {
    for (auto o : {Orientation::positive, Orientation::negative}) {
      const Predictor phi = Predictor::threshold(t, o);
      const double expected = 0.15 + 0.7 * grid_disagreement(phi, 0.4);
      EXPECT_NEAR(cvb::true_risk(phi, dist, Loss::zero_one()), expected, 1e-5) << t;
    }
  }
}

TEST(TrueRisk, IntervalMatchesGridIntegration) {
  const cvb::SyntheticDistribution dist(0.5, 0.1);
  const std::array<std::pair<double, double>, 5> cases{{{0.1, 0.3}, {0.2, 0.7}, {0.6, 0.9}, {0.5, 1.0}, {0.4, 0.4}}};
  for (const auto& [a, b] : cases) {
    for (auto o : {Orientation::positive, Orientation::negative}) {
      const Predictor phi = Predictor::interval(a, b, o);
      const double expected = 0.1 + 0.8 * grid_disagreement(phi, 0.5);
      EXPECT_NEAR(cvb::true_risk(phi, dist, Loss::zero_one()), expected, 1e-5) << a << "," << b;
    }
  }
}

TEST(TrueRisk, BayesPredictorAttainsEta) {
  const cvb::SyntheticDistribution dist(0.3, 0.2);
  EXPECT_DOUBLE_EQ(cvb::true_risk(Predictor::threshold(0.3), dist, Loss::zero_one()), dist.optimal_risk());
}

TEST(Synthetic, ValidationAndNoiseRate) {
  EXPECT_THROW(cvb::SyntheticDistribution(0.5, 0.5), InvalidArgument);
  EXPECT_THROW(cvb::SyntheticDistribution(1.5, 0.1), InvalidArgument);
  const cvb::SyntheticDistribution dist(0.5, 0.2);
  cvb::CounterRng rng(3);
  const Dataset d = dist.sample(100000, rng);
  std::size_t flips = 0;
  for (const auto& s : d.samples()) flips += (s.x >= 0.5 ? 1.0 : 0.0) != s.y ? 1 : 0;
  const double rate = static_cast<double>(flips) / 100000.0;
  EXPECT_NEAR(rate, 0.2, 5.0 * std::sqrt(0.2 * 0.8 / 100000.0));
}

TEST(Synthetic, SameSeedSameSample) {
  const Dataset a = noisy(20, 0.1, 42);
  const Dataset b = noisy(20, 0.1, 42);
  for (std::size_t i = 0; i < 20; ++i) {
    EXPECT_EQ(a[i].x, b[i].x);
    EXPECT_EQ(a[i].y, b[i].y);
  }
}

TEST(ShatterBound, Values) {
  const auto s = cvb::shatter_bound(9, 2);
  EXPECT_DOUBLE_EQ(*s.value, 100.0);
  EXPECT_NEAR(s.log_value, 2.0 * std::log(10.0), 1e-15);
  const auto big = cvb::shatter_bound(1000000, 100);
  EXPECT_FALSE(big.value.has_value());
  EXPECT_NEAR(big.log_value, 100.0 * std::log(1000001.0), 1e-9);
  EXPECT_THROW(cvb::shatter_bound(0, 1), InvalidArgument);
}

}  // namespace
