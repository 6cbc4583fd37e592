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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "cvbounds/common.hpp"

namespace cvb {

class ResamplingPlan;

namespace detail {
struct PlanFactory;
}  // namespace detail

/// A 0/1 mask over sample indices with at least one selected entry.
class BinaryVector {
 public:
  explicit BinaryVector(std::vector<std::uint8_t> bits);

  /// Parses a string of '0'/'1' characters; bit order = sample index order.
  static BinaryVector from_string(std::string_view bits);

  [[nodiscard]] std::size_t size() const noexcept { return bits_.size(); }
  [[nodiscard]] std::size_t count() const noexcept { return count_; }
  [[nodiscard]] bool operator[](std::size_t i) const noexcept { return bits_[i] != 0; }
  [[nodiscard]] std::span<const std::uint8_t> bits() const noexcept { return bits_; }
  [[nodiscard]] std::string to_string() const;

  friend bool operator==(const BinaryVector&, const BinaryVector&) = default;

 private:
  std::vector<std::uint8_t> bits_;
  std::size_t count_ = 0;
};

/// All-ones vector 1_n.
BinaryVector ones(std::size_t n);

/// Complement of a training vector. Throws if the input selects every index.
BinaryVector test_vector(const BinaryVector& train);

enum class PlanKind {
  k_fold,
  leave_one_out,
  leave_v_out_exhaustive,
  leave_v_out_montecarlo,
  hold_out,
  custom,
};

std::string_view to_string(PlanKind kind) noexcept;
PlanKind plan_kind_from_string(std::string_view name);

struct PlanAtom {
  BinaryVector train;
  double probability;
};

/// Finite distribution over training vectors. Immutable after construction.
///
/// Every atom has the same training size n(1-p) and test size np unless the
/// plan was built with `allow_unequal_test_sizes`, in which case it is marked
/// as not satisfying the equal-size hypothesis and `p()` is the mean test
/// fraction.
class ResamplingPlan {
 public:
  struct CustomOptions {
    bool allow_unequal_test_sizes = false;
  };

  /// Validates and wraps arbitrary atoms.
  static ResamplingPlan custom(std::size_t n, std::vector<PlanAtom> atoms, CustomOptions options);
  static ResamplingPlan custom(std::size_t n, std::vector<PlanAtom> atoms) {
    return custom(n, std::move(atoms), CustomOptions{});
  }

  [[nodiscard]] std::size_t n() const noexcept { return n_; }
  [[nodiscard]] PlanKind kind() const noexcept { return kind_; }
  [[nodiscard]] std::span<const PlanAtom> atoms() const noexcept { return atoms_; }
  [[nodiscard]] std::size_t test_size() const noexcept { return test_size_; }
  [[nodiscard]] std::size_t train_size() const noexcept { return n_ - test_size_; }
  /// Test fraction np/n (probability-weighted mean when test sizes differ).
  [[nodiscard]] double p() const noexcept { return p_; }
  [[nodiscard]] bool equal_test_sizes() const noexcept { return equal_test_sizes_; }
  /// True when all atoms carry the same probability.
  [[nodiscard]] bool uniform_weights() const noexcept { return uniform_weights_; }

  /// Pr(V_i^tr = 1) for every index, computed with compensated sums.
  [[nodiscard]] std::vector<double> inclusion_probabilities() const;

  /// Pr(V_i^tr = 1) is the same for every i, within `tolerance`.
  [[nodiscard]] bool is_symmetric(double tolerance = 1e-12) const;

  /// Symmetric and equal test sizes: the plan may be fed to symmetric bounds.
  [[nodiscard]] bool satisfies_symmetric_hypotheses() const { return equal_test_sizes_ && is_symmetric(); }

  /// Same n, kind-independent atom multiset and probabilities (within 1e-15).
  [[nodiscard]] bool same_distribution(const ResamplingPlan& other) const;

  [[nodiscard]] nlohmann::json to_json() const;
  static ResamplingPlan from_json(const nlohmann::json& j);

 private:
  ResamplingPlan(std::size_t n, PlanKind kind, std::vector<PlanAtom> atoms, bool allow_unequal);

  friend struct detail::PlanFactory;

  std::size_t n_ = 0;
  PlanKind kind_ = PlanKind::custom;
  std::vector<PlanAtom> atoms_;
  std::size_t test_size_ = 0;
  double p_ = 0.0;
  bool equal_test_sizes_ = true;
  bool uniform_weights_ = true;
};

/// k-fold plan: atom j has zeros on the j-th contiguous block of n/k indices.
/// With `shuffle_seed`, indices are permuted (CounterRng Fisher-Yates) before
/// blocks are assigned.
ResamplingPlan make_kfold(std::size_t n, std::size_t k, std::optional<std::uint64_t> shuffle_seed = std::nullopt);

ResamplingPlan make_loo(std::size_t n);

struct LeaveVOutExhaustive {
  std::size_t cap = 1'000'000;
};
struct LeaveVOutMonteCarlo {
  std::size_t draws = 0;
  std::uint64_t seed = 0;
};

struct LeaveVOutMode {
  std::variant<LeaveVOutExhaustive, LeaveVOutMonteCarlo> mode;
};

/// Exhaustive mode enumerates all C(n, v) test subsets in lexicographic
/// order; Monte Carlo mode draws `draws` subsets uniformly with replacement.
ResamplingPlan make_leave_v_out(std::size_t n, std::size_t v, const LeaveVOutMode& mode);

/// Single split with the given test indices; requires |test_indices| = np.
ResamplingPlan make_holdout(std::size_t n, double p, std::span<const std::size_t> test_indices);

/// Binomial coefficient, or nullopt when it exceeds `limit`.
std::optional<std::uint64_t> binomial_capped(std::size_t n, std::size_t k, std::uint64_t limit);

}  // namespace cvb
