// Copyright 2026 The cvbounds Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software distributed under the License is
// distributed on an "AS IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and limitations under the License.

// Closed-form deviation bounds for cross-validation of empirical risk
// minimizers over a class of VC dimension V.
//
// Every bound splits as B + V: a VC-type term B driven by the training size
// n(1-p) and a variance term V driven by the test size np (or, for the
// small-test branch, by the training size again). Power terms are evaluated
// as exp(exponent * log(base)) and both terms are also returned in log form,
// so astronomically large or tiny values stay inspectable.

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "cvbounds/common.hpp"

namespace cvb {

enum class Procedure {
  symmetric_large,     ///< absolute error, large test sample
  symmetric_small,     ///< absolute error, small test sample
  symmetric_combined,  ///< min of the two variance branches
  kfold,               ///< k-fold theorem, k = 1/p
  holdout,             ///< single split, no crossing
};

/// Which variance branch produced V.
enum class VBranch {
  hoeffding,       ///< exp(-2 n p eps^2 / 25) style, test-size driven
  small_test,      ///< (16/eps) sqrt(V (ln(2n(1-p)+1)+4) / (n(1-p)))
  kfold_improved,  ///< 2 * 2^{1/p} exp(-n eps^2 / (25*64 (sqrt(V ln(2(2np+1))) + 2)))
};

std::string_view to_string(Procedure p) noexcept;
Procedure procedure_from_string(std::string_view name);
std::string_view to_string(VBranch b) noexcept;

struct BoundQuery {
  std::size_t n = 0;
  double p = 0.0;     ///< test fraction; n*p must be an integer
  double eps = 0.0;   ///< precision, > 0
  std::size_t vc = 1;
  Procedure procedure = Procedure::symmetric_combined;
  bool clamp = false;               ///< report min(total, 1)
  bool strict_proposition = false;  ///< small-test branch uses 1/(16 eps) instead of 16/eps

  /// Throws InvalidArgument unless 0 < p < 1, np and n(1-p) are integers >= 1,
  /// eps > 0 and vc >= 1 (plus 1/p integer for the k-fold procedure).
  void validate() const;
  [[nodiscard]] std::size_t test_size() const;
  [[nodiscard]] std::size_t train_size() const { return n - test_size(); }
};

struct BoundValue {
  double b_term = 0.0;
  double v_term = 0.0;
  double total = 0.0;  ///< b + v, or min(b + v, 1) when clamped
  double log_b = 0.0;
  double log_v = 0.0;
  VBranch branch = VBranch::hoeffding;
  bool clamped = false;
};

/// One-sided large-test bound: B = 4(2n(1-p)+1)^{4V/(1-p)} e^{-n eps^2/25},
/// V = e^{-2 n p eps^2/25}.
BoundValue bound_large_upper(const BoundQuery& q);

/// Lower-deviation bound (2n+1)^{4V} e^{-n eps^2}; eps = 0 is allowed.
double bound_large_lower(std::size_t n, double eps, std::size_t vc);
double log_bound_large_lower(std::size_t n, double eps, std::size_t vc);

/// Absolute error, large test sample: leading constant 5 in B.
BoundValue bound_abs_large(const BoundQuery& q);

/// 10 sqrt(V(ln(2n(1-p)+1)+4)/(n(1-p))) + 5 sqrt(2/(np)).
double l1_bound_large(std::size_t n, double p, std::size_t vc);

/// Absolute error, small test sample: B = 5(...)e^{-n eps^2/64},
/// V = (16/eps) sqrt(V(ln(2n(1-p)+1)+4)/(n(1-p))).
BoundValue bound_abs_small(const BoundQuery& q);

/// 16 s (ln(1/s) + 2) with s = sqrt(V(ln(2n(1-p)+1)+4)/(n(1-p))).
/// Note this is increasing in s only for s < e; it turns negative past e^2.
double l1_bound_small(std::size_t n, double p, std::size_t vc);

/// Symmetric procedures: B_sym + min(Hoeffding branch, small-test branch).
BoundValue bound_sym_combined(const BoundQuery& q);

/// Improved k-fold variance bound 2^{1/p} exp(-n eps^2 / (64 (sqrt(V ln(2(2np+1))) + 2))).
/// Requires p < 1/2 and 1/p integer.
double bound_kfold_improved(std::size_t n, double p, double eps, std::size_t vc);
double log_bound_kfold_improved(std::size_t n, double p, double eps, std::size_t vc);

/// Log of the k-fold variance bound before simplification:
/// (1/p) ln(sqrt2 e^{1/6}) - (1/p) eps^2 / (2 sigma^2 (e^{1/2} sqrt(4 ln c) + pi^{1/4} 3^{1/3} 2)^2)
/// with sigma^2 = 4/(np) and c = 2(2np+1)^V.
double log_kfold_proof_form(std::size_t n, double p, double eps, std::size_t vc);

/// k-fold theorem with k = 1/p. V_k is the min of the Hoeffding branch
/// exp(-2 n eps^2 / (25 k)), the small-test branch and, when k >= 3, the
/// improved branch 2 * 2^{k} exp(-n eps^2 / (25*64 (sqrt(V ln(2(2np+1))) + 2))).
BoundValue bound_kfold_combined(const BoundQuery& q);

/// Hold-out: B = 8(2n(1-p)+1)^{4V} e^{-2n(1-p)eps^2/25}, V = 2 e^{-2np eps^2/25}.
BoundValue bound_holdout(const BoundQuery& q);

/// Dispatches on q.procedure.
BoundValue evaluate(const BoundQuery& q);

/// c sqrt(V/(n(1-p))) + 2 sqrt(6/(np)); c is the unspecified universal constant.
double l1_bound_chained(std::size_t n, double p, std::size_t vc, double c);

// --- curves, splitting rules, confidence intervals -----------------------------

struct CurveOptions {
  bool clamp = false;
  bool strict_proposition = false;
};

struct CurvePoint {
  double p;
  BoundValue value;
};

struct PhaseTransition {
  double p_before;
  double p_after;
  VBranch from;
  VBranch to;
};

struct SnappedGrid {
  std::vector<double> points;                          ///< admissible, ascending, deduplicated
  std::vector<std::pair<double, double>> adjustments;  ///< (requested, used) where they differ
  std::vector<double> dropped;                         ///< requested points with no admissible neighbour
};

/// Snaps each p down to the nearest admissible value: j/n with 1 <= j <= n-1,
/// or for the k-fold procedure 1/k with k >= 2 dividing n.
SnappedGrid snap_p_grid(std::size_t n, Procedure procedure, std::span<const double> requested);

/// Every admissible p in (0, 1/2] (at most ~5000 points, evenly thinned).
std::vector<double> default_p_grid(std::size_t n, Procedure procedure);

struct EstimationCurve {
  std::vector<CurvePoint> points;
  SnappedGrid grid;
  std::vector<PhaseTransition> transitions;  ///< consecutive points whose V branch differs
};

/// p -> B(n,p,eps) + V(n,p,eps) for the chosen procedure.
EstimationCurve estimation_curve(std::size_t n, double eps, std::size_t vc, Procedure procedure,
                                 std::span<const double> p_grid, CurveOptions options = {});

struct L1CurvePoint {
  double p;
  double b_term;
  double v_term;
  double total;
};

/// p -> 10 sqrt(V(ln(2n(1-p)+1)+4)/(n(1-p))) + 5 sqrt(2/(np)).
std::vector<L1CurvePoint> l1_estimation_curve(std::size_t n, std::size_t vc, std::span<const double> p_grid);

enum class SplitMode { chained, computable };
enum class SnapDirection { none, up, down };

std::string_view to_string(SnapDirection d) noexcept;

struct SplitRule {
  double p_raw;
  double p_snapped;  ///< nearest j/n, 1 <= j <= n-1
  SnapDirection direction;
};

/// chained:    p* = ((c^2 V / (2 sqrt 6))^{1/3} + 1)^{-1}
/// computable: p* = ((V (ln(2n) + 4) / (2 sqrt 6))^{1/3} + 1)^{-1}   (c ignored)
SplitRule optimal_split_l1(std::size_t n, std::size_t vc, double c, SplitMode mode);

struct ConfidenceInterval {
  double eps_star;
  double p_star;
  double achieved_bound;  ///< unclamped total at (eps_star, p_star)
  BoundValue value;
};

/// Smallest grid eps for which min over grid p of min(total, 1) <= alpha,
/// with the minimizing p (smallest p on ties). Throws Infeasible otherwise.
ConfidenceInterval confidence_interval_search(std::size_t n, std::size_t vc, double alpha, Procedure procedure,
                                              std::span<const double> p_grid, std::span<const double> eps_grid,
                                              CurveOptions options = {});

// --- procedure comparisons -------------------------------------------------------

/// ln(B_sym/B_hold) in the closed form (2n(1-p)+1)^{4Vp/(1-p)} e^{-n p eps^2},
/// i.e. the ratio of the bias terms before the numeric constants of the
/// absolute-error theorems are applied.
double log_sym_hold_bias_ratio(std::size_t n, double p, double eps, std::size_t vc);

/// ln(B_sym/B_hold) using the B terms of bound_sym_combined and bound_holdout.
double log_sym_hold_bias_term_ratio(std::size_t n, double p, double eps, std::size_t vc);

/// ln(V_k/V_sym) at p = 1/k using bound_kfold_combined and bound_sym_combined.
double log_kfold_sym_variance_ratio(std::size_t n, std::size_t k, double eps, std::size_t vc,
                                    bool strict_proposition = false);

}  // namespace cvb
