// Copyright 2026 The cvbounds Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software distributed under the License is
// distributed on an "AS IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and limitations under the License.

#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cvbounds/common.hpp"
#include "cvbounds/resampling.hpp"
#include "cvbounds/rng.hpp"

namespace cvb {

struct Sample {
  double x;
  double y;
};

enum class LabelDomain { binary, unit_interval };

/// Immutable learning sample D_n.
class Dataset {
 public:
  explicit Dataset(std::vector<Sample> samples, LabelDomain domain = LabelDomain::binary);

  [[nodiscard]] std::size_t size() const noexcept { return samples_.size(); }
  [[nodiscard]] LabelDomain label_domain() const noexcept { return domain_; }
  [[nodiscard]] std::span<const Sample> samples() const noexcept { return samples_; }
  [[nodiscard]] const Sample& operator[](std::size_t i) const noexcept { return samples_[i]; }

  /// Sample indices ordered by x (stable, so equal x keep index order).
  [[nodiscard]] std::vector<std::size_t> order_by_x() const;

  /// CSV with header "x,y", one pair per row, 17 significant digits.
  void write_csv(std::ostream& out) const;
  static Dataset read_csv(std::istream& in, LabelDomain domain = LabelDomain::binary);

 private:
  std::vector<Sample> samples_;
  LabelDomain domain_;
};

enum class LossKind { zero_one, clipped_absolute };

/// Bounded loss with values in [0, 1].
struct Loss {
  LossKind kind = LossKind::zero_one;

  [[nodiscard]] double operator()(double y, double prediction) const noexcept;

  static Loss zero_one() noexcept { return {LossKind::zero_one}; }
  static Loss clipped_absolute() noexcept { return {LossKind::clipped_absolute}; }
};

enum class ClassKind { threshold, interval };

/// positive: threshold predicts 1 on x >= t, interval predicts 1 inside [a, b).
/// negative: the complementary labelling.
enum class Orientation { positive, negative };

std::string_view to_string(ClassKind kind) noexcept;
ClassKind class_kind_from_string(std::string_view name);

/// A {0,1}-valued predictor from one of the supported classes.
struct Predictor {
  ClassKind kind = ClassKind::threshold;
  Orientation orientation = Orientation::positive;
  double lower = 0.0;  ///< threshold t, or interval start a
  double upper = 0.0;  ///< interval end b (unused for thresholds)

  [[nodiscard]] double operator()(double x) const noexcept;

  static Predictor threshold(double t, Orientation o = Orientation::positive) noexcept {
    return {ClassKind::threshold, o, t, 0.0};
  }
  static Predictor interval(double a, double b, Orientation o = Orientation::positive) noexcept {
    return {ClassKind::interval, o, a, b};
  }

  friend bool operator==(const Predictor&, const Predictor&) = default;
};

/// Parametric predictor family on the domain [domain_lo, domain_hi].
///
/// vc_dim is configuration, not inferred. Defaults are the set-shattering
/// dimensions of the predictor classes: 1 for one-sided thresholds and 2
/// for intervals.
struct HypothesisClass {
  ClassKind kind = ClassKind::threshold;
  std::size_t vc_dim = 1;
  Orientation orientation = Orientation::positive;
  double domain_lo = 0.0;
  double domain_hi = 1.0;

  static HypothesisClass threshold(Orientation o = Orientation::positive) { return {ClassKind::threshold, 1, o}; }
  static HypothesisClass interval(Orientation o = Orientation::positive) { return {ClassKind::interval, 2, o}; }
};

/// Weighted empirical error (1 / sum v_i) * sum v_i L(y_i, phi(x_i)).
double empirical_risk(const Predictor& phi, const BinaryVector& v, const Dataset& d, const Loss& loss);

/// Sum of losses on the selected indices (the numerator of empirical_risk).
double empirical_loss_sum(const Predictor& phi, const BinaryVector& v, const Dataset& d, const Loss& loss);

/// Exact empirical risk minimizer over the class on the selected subsample.
///
/// Candidate cuts are the domain edges and the midpoints between consecutive
/// distinct selected x-values. Among minimizers the smallest cut wins
/// (lexicographically smallest (a, b) for intervals; the empty interval only
/// when it is the unique minimizer), so the result depends only on the
/// multiset of selected points. Only zero-one loss is supported.
Predictor erm_fit(const HypothesisClass& cls, const BinaryVector& v, const Dataset& d, const Loss& loss);

/// Same as erm_fit, reusing an x-ordering of the whole dataset (from
/// Dataset::order_by_x) so repeated fits on subsamples cost O(n).
Predictor erm_fit_presorted(const HypothesisClass& cls, std::span<const std::size_t> order_by_x,
                            const BinaryVector& v, const Dataset& d, const Loss& loss);

/// X ~ U[0,1], Y = 1{X >= theta_star} flipped independently with prob. eta.
struct SyntheticDistribution {
  double theta_star = 0.5;
  double eta = 0.0;

  SyntheticDistribution() = default;
  SyntheticDistribution(double theta, double noise);

  /// Bayes risk R_opt = eta.
  [[nodiscard]] double optimal_risk() const noexcept { return eta; }

  /// Draws n pairs: for each i, x = uniform01(), then flip = uniform01() < eta.
  [[nodiscard]] Dataset sample(std::size_t n, CounterRng& rng) const;
};

/// Closed-form risk R(phi) under zero-one loss:
/// eta + (1 - 2 eta) * Pr(phi(X) != 1{X >= theta_star}).
double true_risk(const Predictor& phi, const SyntheticDistribution& dist, const Loss& loss);

struct ShatterBound {
  double log_value;             ///< V ln(n + 1)
  std::optional<double> value;  ///< (n + 1)^V when finite in double
};

/// Sauer-type bound S(n, C) <= (n + 1)^V.
ShatterBound shatter_bound(std::size_t n, std::size_t vc);

}  // namespace cvb
