// Copyright 2026 The cvbounds Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software distributed under the License is
// distributed on an "AS IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and limitations under the License.

// Monte Carlo experiments: draw synthetic samples, run ERM under each
// resampling plan, and compare empirical deviation tails with the bounds.
//
// Trial t of an experiment uses CounterRng(trial_seed(master_seed, t)), so a
// report depends only on the configuration, never on the worker count.

#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cvbounds/bounds.hpp"
#include "cvbounds/cv.hpp"
#include "cvbounds/learners.hpp"
#include "cvbounds/resampling.hpp"

namespace cvb {

struct PlanSpec {
  PlanKind kind = PlanKind::k_fold;
  std::size_t k = 0;        ///< k-fold: number of folds; 0 means k = n
  std::size_t v = 0;        ///< leave-v-out: test size
  std::size_t draws = 0;    ///< leave-v-out Monte Carlo: number of subsets
  std::uint64_t seed = 0;   ///< leave-v-out Monte Carlo draw seed
  std::optional<std::uint64_t> shuffle_seed;  ///< k-fold index shuffle
  double p = 0.0;           ///< hold-out: test fraction (test set = last np indices)

  [[nodiscard]] ResamplingPlan build(std::size_t n) const;
  [[nodiscard]] std::string label() const;
  [[nodiscard]] nlohmann::json to_json() const;
  static PlanSpec from_json(const nlohmann::json& j);
};

struct ExperimentConfig {
  SyntheticDistribution dist{0.5, 0.1};
  std::size_t n = 50;
  std::vector<PlanSpec> plans;
  HypothesisClass cls = HypothesisClass::threshold();
  std::vector<double> eps_grid{0.05, 0.1, 0.2, 0.4};
  std::size_t trials = 1000;
  std::uint64_t master_seed = 0;
  std::size_t workers = 1;
  /// Optional sweep: when nonempty, expand() replaces n / eta by each value.
  std::vector<std::size_t> sweep_n;
  std::vector<double> sweep_eta;

  /// Throws InvalidArgument on trials = 0, an empty or non-increasing eps grid,
  /// no plans, or a plan incompatible with n.
  void validate() const;
  /// One configuration per (n, eta) in the sweep, n-major; the config itself if no sweep.
  [[nodiscard]] std::vector<ExperimentConfig> expand() const;

  [[nodiscard]] nlohmann::json to_json() const;
  static ExperimentConfig from_json(const nlohmann::json& j);
};

struct PlanTrial {
  CvEstimates est;
  double abs_deviation;  ///< |r_cv - r_tilde_n|
  double v_deviation;    ///< r_cv - r_bar
  double b_deviation;    ///< r_bar - r_tilde_n
  bool lemma_holds;      ///< r_cv >= r_hat_n, exact comparison
};

struct TrialRecord {
  std::uint64_t trial_id = 0;
  std::vector<PlanTrial> plans;  ///< in config order
};

/// Draws trial `trial_id` and evaluates every plan on it.
TrialRecord run_trial(const ExperimentConfig& cfg, std::uint64_t trial_id);

struct TailRow {
  double eps;
  double empirical_tail;  ///< fraction of trials with |r_cv - r_tilde_n| >= eps
  double slack;           ///< 3 sqrt(p (1 - p) / trials)
  std::optional<BoundValue> bound;  ///< clamped; none when no bound applies
  bool covered;           ///< empirical_tail <= bound.total + slack (true without a bound)
};

struct PlanReport {
  std::string label;
  PlanKind kind;
  double p;
  bool symmetric;
  std::string bound_name;  ///< "kfold", "symmetric", "holdout" or "n/a"
  std::size_t lemma_violations = 0;
  double l1_mean = 0.0;    ///< mean of |r_cv - r_tilde_n|
  std::optional<double> l1_bound_large;
  std::optional<double> l1_bound_small;
  std::vector<TailRow> tails;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<PlanReport> plans;

  [[nodiscard]] std::size_t lemma_violations() const;
  [[nodiscard]] std::size_t coverage_violations() const;

  /// plan,p,eps,empirical_tail,slack,bound_total,bound_branch,lemma_violations,n,eta
  void write_csv(std::ostream& out, bool header = true) const;
  [[nodiscard]] nlohmann::json to_json() const;
};

ExperimentReport run_experiment(const ExperimentConfig& cfg);

struct RatioRow {
  std::size_t n;
  double p;
  double eps;
  double log_bias_ratio;        ///< closed form ln(B_sym/B_hold)
  double log_bias_term_ratio;   ///< from the theorem B terms
  std::optional<double> log_variance_ratio;  ///< ln(V_k/V_sym), when 1/p is an integer k >= 2 dividing n
};

struct ComparisonTable {
  ExperimentReport report;
  std::vector<RatioRow> ratios;

  /// Side-by-side rows: eps, then per plan empirical_tail and bound_total.
  void write_csv(std::ostream& out) const;
  void write_ratios_csv(std::ostream& out) const;
  [[nodiscard]] nlohmann::json to_json() const;
};

/// Runs the experiment and evaluates the bound ratios for every plan's p at
/// every n in the sweep (or cfg.n) and every eps in the grid.
ComparisonTable compare_procedures(const ExperimentConfig& cfg);

}  // namespace cvb
