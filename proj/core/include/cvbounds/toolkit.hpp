// Copyright 2026 The cvbounds Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software distributed under the License is
// distributed on an "AS IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and limitations under the License.

// Classical tail inequalities, tail-to-expectation conversions and the
// subgaussian moment -> Laplace transform -> Chernoff chain, each with a
// seeded numerical verifier.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "cvbounds/common.hpp"

namespace cvb {

/// 3 sqrt(p_hat (1 - p_hat) / m), the Monte Carlo slack used by every verifier.
double mc_slack(double p_hat, std::size_t m);

/// P(mean - E mean >= eps) <= exp(-2 n^2 eps^2 / sum (b_i - a_i)^2), n = ranges.size().
double hoeffding_tail(std::span<const std::pair<double, double>> ranges, double eps);

/// Unit ranges: exp(-2 n eps^2).
double hoeffding_tail_unit(std::size_t n, double eps);

enum class VcTailBranch { polynomial, tightened };

struct VcTail {
  double value;                     ///< min of the available branches
  double polynomial;                ///< 2 (2n+1)^V e^{-n eps^2/8}
  std::optional<double> tightened;  ///< 2 (2ne/V)^V e^{-n eps^2/8}, only when n >= V
  VcTailBranch branch;
};

/// Uniform deviation bound over a class of VC dimension V, sigma^2 = 4/n.
VcTail vc_tail(std::size_t n, std::size_t vc, double eps);

/// Bounded differences: exp(-2 eps^2 / sum c_i^2).
double mcdiarmid_tail(std::span<const double> c, double eps);

/// E X <= sqrt((ln C + 2) / K) when P(X >= eps) <= C e^{-K eps^2}.
double expectation_from_subgaussian_tail(double C, double K);

/// E X <= A (1 - ln A) when P(X >= eps) <= A / eps and X <= 1; A >= 1 gives 1.
double expectation_from_pareto_tail(double A);

struct ReverseMarkovResult {
  double lhs;    ///< empirical P(X >= eps)
  double rhs;    ///< trapezoid integral of P(X <= -x) over [0, 1], divided by eps
  double slack;  ///< mc_slack(lhs, m)
  bool holds;    ///< lhs <= rhs + slack
};

/// Checks P(X >= eps) <= (int_0^1 P(X <= -x) dx) / eps on a sample in [-1, 1]
/// whose mean must be within 3 standard errors of 0. The integral uses the
/// trapezoid rule on 1024 equally spaced points of [0, 1].
ReverseMarkovResult reverse_markov_check(std::span<const double> sample, double eps);

enum class GammaForm { statement, proof };

/// gamma = (sigma sqrt(4 ln c) + K sigma)^2 with
///   statement: K = pi^{1/4} 3^{1/3} 2 e^{-1/2}
///   proof:     K = (2 pi)^{1/4} 3^{1/3} 2^{3/4} e^{-1/2}
/// Requires c >= 2 and sigma > 0.
double subgaussian_moment_gamma(double sigma, double c, GammaForm form = GammaForm::statement);

/// Same, taking ln c so that astronomically large c stays representable.
double subgaussian_moment_gamma_log_c(double sigma, double log_c, GammaForm form = GammaForm::statement);

/// E e^{sY} <= sqrt2 e^{1/6} e^{s^2 e gamma / 2}.
double laplace_bound_from_moments(double gamma, double s);
double log_laplace_bound_from_moments(double gamma, double s);

/// P((1/V) sum Y_i > eps) <= alpha^V e^{-V eps^2 / (2 beta^2)}.
double chernoff_sum(double alpha, double beta2, std::size_t V, double eps);
double log_chernoff_sum(double alpha, double beta2, std::size_t V, double eps);

/// The k-fold variance bound assembled from the chain: sigma^2 = 4/(np),
/// c = 2(2np+1)^V from the VC tail, gamma from the moment lemma, alpha and
/// beta^2 = e gamma from the Laplace bound, then Chernoff over k = 1/p folds.
/// Returns the log of the bound.
double kfold_pipeline_log(std::size_t n, double p, double eps, std::size_t vc,
                          GammaForm form = GammaForm::statement);

// --- verifiers ----------------------------------------------------------------------

struct VerifierPoint {
  double x;  ///< eps for tail verifiers, q for the moment verifier, A for the Pareto one
  double empirical;
  double bound;
  double slack;
  bool holds;
};

struct VerifierReport {
  std::string inequality;
  std::string grid_variable = "eps";
  nlohmann::json params = nlohmann::json::object();
  std::vector<VerifierPoint> grid;

  [[nodiscard]] bool all_hold() const;
  /// {inequality, params, grid: [{<grid_variable>, empirical, bound, slack, holds}]}
  [[nodiscard]] nlohmann::json to_json() const;
};

/// Mean of n uniform[0,1] draws; empirical P(mean - 1/2 >= eps) vs Hoeffding.
VerifierReport verify_hoeffding(std::size_t n, std::span<const double> eps_grid, std::size_t reps,
                                std::uint64_t seed);

/// sup over positive thresholds of |empirical risk - risk| on noisy-threshold
/// data (theta = 1/2, noise eta), computed exactly; vs vc_tail with V = 1.
VerifierReport verify_vc(std::size_t n, double eta, std::span<const double> eps_grid, std::size_t reps,
                         std::uint64_t seed);

/// The same supremum as a function of n samples has bounded differences
/// c_i = 1/n; empirical P(f - mean f >= eps) vs exp(-2 n eps^2).
VerifierReport verify_mcdiarmid(std::size_t n, double eta, std::span<const double> eps_grid, std::size_t reps,
                                std::uint64_t seed);

/// X = clip(N(0, sigma^2), -1, 1), m draws, reverse_markov_check per eps.
VerifierReport verify_reverse_markov(double sigma, std::span<const double> eps_grid, std::size_t m,
                                     std::uint64_t seed);

/// Y = min(|N(0, sigma^2)|, 1) has P(Y >= t) <= 2 e^{-t^2/(2 sigma^2)}, so c = 2.
/// Moments E Y^q = int_0^1 q t^{q-1} P(Y >= t) dt by Gauss-Kronrod; checks
/// (E Y^q)^{1/q} <= sqrt(gamma q) for q = 1..q_max under both gamma forms.
VerifierReport verify_subgaussian_moments(double sigma, std::size_t q_max = 20);

/// E X = int_0^1 min(1, A/t) dt by quadrature vs A (1 - ln A), per A.
VerifierReport verify_pareto(std::span<const double> a_grid);

}  // namespace cvb
