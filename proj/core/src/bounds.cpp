// Copyright 2026 The cvbounds Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software distributed under the License is
// distributed on an "AS IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and limitations under the License.

#include "cvbounds/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace cvb {

std::string_view to_string(Procedure p) noexcept {
  switch (p) {
    case Procedure::symmetric_large: return "symmetric-large";
    case Procedure::symmetric_small: return "symmetric-small";
    case Procedure::symmetric_combined: return "symmetric-combined";
    case Procedure::kfold: return "kfold";
    case Procedure::holdout: return "holdout";
  }
  return "?";
}

Procedure procedure_from_string(std::string_view name) {
  for (Procedure p : {Procedure::symmetric_large, Procedure::symmetric_small, Procedure::symmetric_combined,
                      Procedure::kfold, Procedure::holdout}) {
    if (to_string(p) == name) return p;
  }
  throw InvalidArgument("unknown procedure: " + std::string(name));
}

std::string_view to_string(VBranch b) noexcept {
  switch (b) {
    case VBranch::hoeffding: return "hoeffding";
    case VBranch::small_test: return "small-test";
    case VBranch::kfold_improved: return "kfold-improved";
  }
  return "?";
}

std::string_view to_string(SnapDirection d) noexcept {
  switch (d) {
    case SnapDirection::none: return "none";
    case SnapDirection::up: return "up";
    case SnapDirection::down: return "down";
  }
  return "?";
}

namespace {

constexpr double kIntegerTol = 1e-9;

bool near_integer(double x) { return std::abs(x - std::round(x)) <= kIntegerTol * std::max(1.0, std::abs(x)); }

void check_basic(std::size_t n, double p) {
  if (n < 2) throw InvalidArgument("bounds require n >= 2");
  if (!(p > 0.0 && p < 1.0)) throw InvalidArgument("test fraction p must lie in (0, 1)");
  const double np = static_cast<double>(n) * p;
  if (!near_integer(np)) throw InvalidArgument("n*p must be an integer");
  const double m = std::round(np);
  if (m < 1.0 || m > static_cast<double>(n) - 1.0) throw InvalidArgument("need n*p >= 1 and n*(1-p) >= 1");
}

void check_eps(double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw InvalidArgument("eps must be finite and > 0");
}

void check_vc(std::size_t vc) {
  if (vc < 1) throw InvalidArgument("VC dimension must be >= 1");
}

std::size_t kfold_k(double p) {
  const double k = 1.0 / p;
  if (!near_integer(k)) throw InvalidArgument("k-fold requires 1/p to be an integer");
  return static_cast<std::size_t>(std::llround(k));
}

// ln(2 n (1-p) + 1) with n(1-p) an exact integer.
double log_train_base(double n_train) { return std::log1p(2.0 * n_train); }

BoundValue make_value(double log_b, double log_v, VBranch branch, bool clamp) {
  BoundValue out;
  out.log_b = log_b;
  out.log_v = log_v;
  out.b_term = std::exp(log_b);
  out.v_term = std::exp(log_v);
  out.total = out.b_term + out.v_term;
  out.branch = branch;
  if (clamp && out.total > 1.0) {
    out.total = 1.0;
    out.clamped = true;
  }
  return out;
}

struct Sizes {
  double n;
  double test;   // n p
  double train;  // n (1 - p)
  double p;
};

Sizes sizes_of(const BoundQuery& q) {
  const double n = static_cast<double>(q.n);
  const double test = static_cast<double>(q.test_size());
  return {n, test, n - test, q.p};
}

// ln[c (2n(1-p)+1)^{4V/(1-p)} e^{-n eps^2 / d}]
double log_b_sym(const Sizes& s, double eps, std::size_t vc, double c, double d) {
  const double expo = 4.0 * static_cast<double>(vc) / (1.0 - s.p);
  return std::log(c) + expo * log_train_base(s.train) - s.n * eps * eps / d;
}

double log_v_hoeffding(const Sizes& s, double eps) { return -2.0 * s.test * eps * eps / 25.0; }

// sqrt(V (ln(2n(1-p)+1) + 4) / (n(1-p)))
double small_test_root(double train, std::size_t vc) {
  return std::sqrt(static_cast<double>(vc) * (log_train_base(train) + 4.0) / train);
}

double log_v_small(const Sizes& s, double eps, std::size_t vc, bool strict) {
  const double lead = strict ? -std::log(16.0 * eps) : std::log(16.0 / eps);
  return lead + std::log(small_test_root(s.train, vc));
}

// Improved k-fold variance exponent core: ln(2(2np+1)).
double log_two_fold_base(double test) { return std::log(2.0 * (2.0 * test + 1.0)); }

}  // namespace

std::size_t BoundQuery::test_size() const {
  return static_cast<std::size_t>(std::llround(static_cast<double>(n) * p));
}

void BoundQuery::validate() const {
  check_basic(n, p);
  check_eps(eps);
  check_vc(vc);
  if (procedure == Procedure::kfold) (void)kfold_k(p);
}

BoundValue bound_large_upper(const BoundQuery& q) {
  q.validate();
  const Sizes s = sizes_of(q);
  return make_value(log_b_sym(s, q.eps, q.vc, 4.0, 25.0), log_v_hoeffding(s, q.eps), VBranch::hoeffding, q.clamp);
}

double log_bound_large_lower(std::size_t n, double eps, std::size_t vc) {
  if (n < 1) throw InvalidArgument("n must be >= 1");
  if (!(eps >= 0.0) || !std::isfinite(eps)) throw InvalidArgument("eps must be finite and >= 0");
  check_vc(vc);
  const double nn = static_cast<double>(n);
  return 4.0 * static_cast<double>(vc) * std::log1p(2.0 * nn) - nn * eps * eps;
}

double bound_large_lower(std::size_t n, double eps, std::size_t vc) {
  return std::exp(log_bound_large_lower(n, eps, vc));
}

BoundValue bound_abs_large(const BoundQuery& q) {
  q.validate();
  const Sizes s = sizes_of(q);
  return make_value(log_b_sym(s, q.eps, q.vc, 5.0, 25.0), log_v_hoeffding(s, q.eps), VBranch::hoeffding, q.clamp);
}

double l1_bound_large(std::size_t n, double p, std::size_t vc) {
  check_basic(n, p);
  check_vc(vc);
  const double nn = static_cast<double>(n);
  const double test = std::round(nn * p);
  const double train = nn - test;
  return 10.0 * small_test_root(train, vc) + 5.0 * std::sqrt(2.0 / test);
}

BoundValue bound_abs_small(const BoundQuery& q) {
  q.validate();
  const Sizes s = sizes_of(q);
  return make_value(log_b_sym(s, q.eps, q.vc, 5.0, 64.0), log_v_small(s, q.eps, q.vc, q.strict_proposition),
                    VBranch::small_test, q.clamp);
}

double l1_bound_small(std::size_t n, double p, std::size_t vc) {
  check_basic(n, p);
  check_vc(vc);
  const double nn = static_cast<double>(n);
  const double train = nn - std::round(nn * p);
  const double s = small_test_root(train, vc);
  return 16.0 * s * (-std::log(s) + 2.0);
}

BoundValue bound_sym_combined(const BoundQuery& q) {
  q.validate();
  const Sizes s = sizes_of(q);
  const double log_b = log_b_sym(s, q.eps, q.vc, 5.0, 64.0);
  const double hoeff = log_v_hoeffding(s, q.eps);
  const double small = log_v_small(s, q.eps, q.vc, q.strict_proposition);
  // Ties go to the Hoeffding branch.
  if (small < hoeff) return make_value(log_b, small, VBranch::small_test, q.clamp);
  return make_value(log_b, hoeff, VBranch::hoeffding, q.clamp);
}

double log_bound_kfold_improved(std::size_t n, double p, double eps, std::size_t vc) {
  check_basic(n, p);
  check_eps(eps);
  check_vc(vc);
  if (!(p < 0.5)) throw InvalidArgument("improved k-fold bound requires p < 1/2");
  const double k = static_cast<double>(kfold_k(p));
  const double nn = static_cast<double>(n);
  const double test = std::round(nn * p);
  const double denom = 64.0 * (std::sqrt(static_cast<double>(vc) * log_two_fold_base(test)) + 2.0);
  return k * std::numbers::ln2 - nn * eps * eps / denom;
}

double bound_kfold_improved(std::size_t n, double p, double eps, std::size_t vc) {
  return std::exp(log_bound_kfold_improved(n, p, eps, vc));
}

double log_kfold_proof_form(std::size_t n, double p, double eps, std::size_t vc) {
  check_basic(n, p);
  check_eps(eps);
  check_vc(vc);
  const double k = static_cast<double>(kfold_k(p));
  const double test = std::round(static_cast<double>(n) * p);
  const double sigma2 = 4.0 / test;
  const double log_c = std::numbers::ln2 + static_cast<double>(vc) * std::log1p(2.0 * test);
  const double gamma_root =
      std::sqrt(std::numbers::e) * std::sqrt(4.0 * log_c) + std::pow(std::numbers::pi, 0.25) * std::cbrt(3.0) * 2.0;
  const double log_alpha = 0.5 * std::numbers::ln2 + 1.0 / 6.0;
  return k * log_alpha - k * eps * eps / (2.0 * sigma2 * gamma_root * gamma_root);
}

BoundValue bound_kfold_combined(const BoundQuery& q) {
  q.validate();
  const std::size_t k = kfold_k(q.p);
  const Sizes s = sizes_of(q);
  const double kk = static_cast<double>(k);
  const double log_b = log_b_sym(s, q.eps, q.vc, 5.0, 64.0);

  VBranch branch = VBranch::hoeffding;
  double log_v = -2.0 * s.n * q.eps * q.eps / (25.0 * kk);
  const double small = log_v_small(s, q.eps, q.vc, q.strict_proposition);
  if (small < log_v) {
    log_v = small;
    branch = VBranch::small_test;
  }
  if (k >= 3) {
    const double denom = 25.0 * 64.0 * (std::sqrt(static_cast<double>(q.vc) * log_two_fold_base(s.test)) + 2.0);
    const double improved = std::numbers::ln2 + kk * std::numbers::ln2 - s.n * q.eps * q.eps / denom;
    if (improved < log_v) {
      log_v = improved;
      branch = VBranch::kfold_improved;
    }
  }
  return make_value(log_b, log_v, branch, q.clamp);
}

BoundValue bound_holdout(const BoundQuery& q) {
  q.validate();
  const Sizes s = sizes_of(q);
  const double log_b = std::log(8.0) + 4.0 * static_cast<double>(q.vc) * log_train_base(s.train) -
                       2.0 * s.train * q.eps * q.eps / 25.0;
  const double log_v = std::numbers::ln2 + log_v_hoeffding(s, q.eps);
  return make_value(log_b, log_v, VBranch::hoeffding, q.clamp);
}

BoundValue evaluate(const BoundQuery& q) {
  switch (q.procedure) {
    case Procedure::symmetric_large: return bound_abs_large(q);
    case Procedure::symmetric_small: return bound_abs_small(q);
    case Procedure::symmetric_combined: return bound_sym_combined(q);
    case Procedure::kfold: return bound_kfold_combined(q);
    case Procedure::holdout: return bound_holdout(q);
  }
  throw InvalidArgument("unknown procedure");
}

double l1_bound_chained(std::size_t n, double p, std::size_t vc, double c) {
  check_basic(n, p);
  check_vc(vc);
  if (!(c >= 0.0)) throw InvalidArgument("universal constant c must be >= 0");
  const double nn = static_cast<double>(n);
  const double test = std::round(nn * p);
  const double train = nn - test;
  return c * std::sqrt(static_cast<double>(vc) / train) + 2.0 * std::sqrt(6.0 / test);
}

// --- grids and curves -------------------------------------------------------------

SnappedGrid snap_p_grid(std::size_t n, Procedure procedure, std::span<const double> requested) {
  if (n < 2) throw InvalidArgument("bounds require n >= 2");
  SnappedGrid out;
  const double nn = static_cast<double>(n);
  for (double p : requested) {
    if (!(p > 0.0 && p < 1.0)) {
      out.dropped.push_back(p);
      continue;
    }
    double used = 0.0;
    if (procedure == Procedure::kfold) {
      // Smallest k >= 1/p dividing n gives the largest admissible 1/k <= p.
      std::size_t k = static_cast<std::size_t>(std::ceil(1.0 / p - kIntegerTol));
      k = std::max<std::size_t>(k, 2);
      while (k <= n && n % k != 0) ++k;
      if (k > n) {
        out.dropped.push_back(p);
        continue;
      }
      used = 1.0 / static_cast<double>(k);
    } else {
      const double j = std::floor(nn * p + kIntegerTol);
      if (j < 1.0) {
        out.dropped.push_back(p);
        continue;
      }
      used = std::min(j, nn - 1.0) / nn;
    }
    if (used != p) out.adjustments.emplace_back(p, used);
    out.points.push_back(used);
  }
  std::sort(out.points.begin(), out.points.end());
  out.points.erase(std::unique(out.points.begin(), out.points.end()), out.points.end());
  return out;
}

std::vector<double> default_p_grid(std::size_t n, Procedure procedure) {
  if (n < 2) throw InvalidArgument("bounds require n >= 2");
  std::vector<double> grid;
  if (procedure == Procedure::kfold) {
    for (std::size_t k = n; k >= 2; --k) {
      if (n % k == 0) grid.push_back(1.0 / static_cast<double>(k));
    }
    return grid;
  }
  constexpr std::size_t kMaxPoints = 5000;
  const std::size_t half = n / 2;
  const std::size_t stride = half > kMaxPoints ? (half + kMaxPoints - 1) / kMaxPoints : 1;
  for (std::size_t j = 1; j <= half; j += stride) grid.push_back(static_cast<double>(j) / static_cast<double>(n));
  if (grid.back() != static_cast<double>(half) / static_cast<double>(n)) {
    grid.push_back(static_cast<double>(half) / static_cast<double>(n));
  }
  return grid;
}

EstimationCurve estimation_curve(std::size_t n, double eps, std::size_t vc, Procedure procedure,
                                 std::span<const double> p_grid, CurveOptions options) {
  check_eps(eps);
  check_vc(vc);
  EstimationCurve curve;
  curve.grid = snap_p_grid(n, procedure, p_grid);
  for (double p : curve.grid.points) {
    BoundQuery q{n, p, eps, vc, procedure, options.clamp, options.strict_proposition};
    curve.points.push_back({p, evaluate(q)});
  }
  for (std::size_t i = 1; i < curve.points.size(); ++i) {
    const CurvePoint& a = curve.points[i - 1];
    const CurvePoint& b = curve.points[i];
    if (a.value.branch != b.value.branch) curve.transitions.push_back({a.p, b.p, a.value.branch, b.value.branch});
  }
  return curve;
}

std::vector<L1CurvePoint> l1_estimation_curve(std::size_t n, std::size_t vc, std::span<const double> p_grid) {
  check_vc(vc);
  const SnappedGrid grid = snap_p_grid(n, Procedure::symmetric_large, p_grid);
  std::vector<L1CurvePoint> out;
  const double nn = static_cast<double>(n);
  for (double p : grid.points) {
    const double test = std::round(nn * p);
    const double b = 10.0 * small_test_root(nn - test, vc);
    const double v = 5.0 * std::sqrt(2.0 / test);
    out.push_back({p, b, v, b + v});
  }
  return out;
}

SplitRule optimal_split_l1(std::size_t n, std::size_t vc, double c, SplitMode mode) {
  if (n < 2) throw InvalidArgument("split rule requires n >= 2");
  check_vc(vc);
  const double v = static_cast<double>(vc);
  const double two_root6 = 2.0 * std::sqrt(6.0);
  double inner = 0.0;
  if (mode == SplitMode::chained) {
    if (!(c > 0.0)) throw InvalidArgument("chained split rule requires c > 0");
    inner = c * c * v / two_root6;
  } else {
    inner = v * (std::log(2.0 * static_cast<double>(n)) + 4.0) / two_root6;
  }
  SplitRule rule{};
  rule.p_raw = 1.0 / (std::cbrt(inner) + 1.0);
  const double nn = static_cast<double>(n);
  const double j = std::clamp(std::round(rule.p_raw * nn), 1.0, nn - 1.0);
  rule.p_snapped = j / nn;
  rule.direction = rule.p_snapped > rule.p_raw   ? SnapDirection::up
                   : rule.p_snapped < rule.p_raw ? SnapDirection::down
                                                 : SnapDirection::none;
  return rule;
}

ConfidenceInterval confidence_interval_search(std::size_t n, std::size_t vc, double alpha, Procedure procedure,
                                              std::span<const double> p_grid, std::span<const double> eps_grid,
                                              CurveOptions options) {
  if (!(alpha > 0.0)) throw InvalidArgument("alpha must be > 0");
  if (p_grid.empty() || eps_grid.empty()) throw InvalidArgument("grids must be nonempty");
  check_vc(vc);
  const SnappedGrid grid = snap_p_grid(n, procedure, p_grid);
  if (grid.points.empty()) throw InvalidArgument("no admissible p in grid");

  std::vector<double> eps_sorted(eps_grid.begin(), eps_grid.end());
  for (double e : eps_sorted) check_eps(e);
  std::sort(eps_sorted.begin(), eps_sorted.end());

  for (double eps : eps_sorted) {
    std::optional<ConfidenceInterval> best;
    for (double p : grid.points) {
      BoundQuery q{n, p, eps, vc, procedure, false, options.strict_proposition};
      const BoundValue value = evaluate(q);
      if (!best || value.total < best->achieved_bound) best = ConfidenceInterval{eps, p, value.total, value};
    }
    if (std::min(best->achieved_bound, 1.0) <= alpha) {
      if (options.clamp && best->value.total > 1.0) {
        best->value.total = 1.0;
        best->value.clamped = true;
      }
      return *best;
    }
  }
  throw Infeasible("no (eps, p) on grid meets alpha");
}

// --- comparisons -----------------------------------------------------------------

double log_sym_hold_bias_ratio(std::size_t n, double p, double eps, std::size_t vc) {
  check_basic(n, p);
  check_eps(eps);
  check_vc(vc);
  const double nn = static_cast<double>(n);
  const double test = std::round(nn * p);
  const double pp = test / nn;
  return 4.0 * static_cast<double>(vc) * pp / (1.0 - pp) * log_train_base(nn - test) - test * eps * eps;
}

double log_sym_hold_bias_term_ratio(std::size_t n, double p, double eps, std::size_t vc) {
  BoundQuery q{n, p, eps, vc, Procedure::symmetric_combined, false, false};
  const double sym = bound_sym_combined(q).log_b;
  q.procedure = Procedure::holdout;
  return sym - bound_holdout(q).log_b;
}

double log_kfold_sym_variance_ratio(std::size_t n, std::size_t k, double eps, std::size_t vc,
                                    bool strict_proposition) {
  if (k < 2 || n % k != 0) throw InvalidArgument("k must be >= 2 and divide n");
  const double p = 1.0 / static_cast<double>(k);
  BoundQuery q{n, p, eps, vc, Procedure::kfold, false, strict_proposition};
  const double vk = bound_kfold_combined(q).log_v;
  q.procedure = Procedure::symmetric_combined;
  return vk - bound_sym_combined(q).log_v;
}

}  // namespace cvb
