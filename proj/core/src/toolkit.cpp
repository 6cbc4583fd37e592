// Copyright 2026 The cvbounds Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software distributed under the License is
// distributed on an "AS IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and limitations under the License.

#include "cvbounds/toolkit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "cvbounds/rng.hpp"

namespace cvb {

namespace {

void check_eps_nonneg(double eps) {
  if (!(eps >= 0.0) || !std::isfinite(eps)) throw InvalidArgument("eps must be finite and >= 0");
}

// pi^{1/4} 3^{1/3} 2 e^{-1/2}
double gamma_coefficient_statement() {
  return std::pow(std::numbers::pi, 0.25) * std::cbrt(3.0) * 2.0 / std::sqrt(std::numbers::e);
}

// (2 pi)^{1/4} 3^{1/3} 2^{3/4} e^{-1/2}
double gamma_coefficient_proof() {
  return std::pow(2.0 * std::numbers::pi, 0.25) * std::cbrt(3.0) * std::pow(2.0, 0.75) / std::sqrt(std::numbers::e);
}

const double kLogLaplaceLead = 0.5 * std::numbers::ln2 + 1.0 / 6.0;  // ln(sqrt2 e^{1/6})

}  // namespace

double mc_slack(double p_hat, std::size_t m) {
  if (m == 0) throw InvalidArgument("slack requires m >= 1");
  return 3.0 * std::sqrt(p_hat * (1.0 - p_hat) / static_cast<double>(m));
}

double hoeffding_tail(std::span<const std::pair<double, double>> ranges, double eps) {
  if (ranges.empty()) throw InvalidArgument("hoeffding requires at least one variable");
  check_eps_nonneg(eps);
  CompensatedSum width2;
  for (const auto& [a, b] : ranges) {
    if (!(b > a)) throw InvalidArgument("hoeffding ranges require b_i > a_i");
    width2.add((b - a) * (b - a));
  }
  const double n = static_cast<double>(ranges.size());
  return std::exp(-2.0 * n * n * eps * eps / width2.value());
}

double hoeffding_tail_unit(std::size_t n, double eps) {
  if (n == 0) throw InvalidArgument("hoeffding requires n >= 1");
  check_eps_nonneg(eps);
  return std::exp(-2.0 * static_cast<double>(n) * eps * eps);
}

VcTail vc_tail(std::size_t n, std::size_t vc, double eps) {
  if (n == 0 || vc == 0) throw InvalidArgument("vc tail requires n >= 1 and vc >= 1");
  check_eps_nonneg(eps);
  const double nn = static_cast<double>(n);
  const double v = static_cast<double>(vc);
  const double log_tail = std::numbers::ln2 - nn * eps * eps / 8.0;
  VcTail out{};
  out.polynomial = std::exp(log_tail + v * std::log1p(2.0 * nn));
  out.value = out.polynomial;
  out.branch = VcTailBranch::polynomial;
  if (n >= vc) {
    out.tightened = std::exp(log_tail + v * std::log(2.0 * nn * std::numbers::e / v));
    if (*out.tightened < out.value) {
      out.value = *out.tightened;
      out.branch = VcTailBranch::tightened;
    }
  }
  return out;
}

double mcdiarmid_tail(std::span<const double> c, double eps) {
  if (c.empty()) throw InvalidArgument("mcdiarmid requires at least one coordinate");
  check_eps_nonneg(eps);
  CompensatedSum sq;
  for (double ci : c) {
    if (!(ci > 0.0)) throw InvalidArgument("bounded differences must be > 0");
    sq.add(ci * ci);
  }
  return std::exp(-2.0 * eps * eps / sq.value());
}

double expectation_from_subgaussian_tail(double C, double K) {
  if (!(C >= 1.0) || !(K > 0.0)) throw InvalidArgument("need C >= 1 and K > 0");
  return std::sqrt((std::log(C) + 2.0) / K);
}

double expectation_from_pareto_tail(double A) {
  if (!(A > 0.0)) throw InvalidArgument("pareto constant A must be > 0");
  if (A >= 1.0) return 1.0;
  return A * (1.0 - std::log(A));
}

ReverseMarkovResult reverse_markov_check(std::span<const double> sample, double eps) {
  if (sample.empty()) throw InvalidArgument("reverse Markov check needs a sample");
  if (!(eps > 0.0)) throw InvalidArgument("eps must be > 0");
  const double m = static_cast<double>(sample.size());
  CompensatedSum sum;
  for (double x : sample) {
    if (!(x >= -1.0 && x <= 1.0)) throw InvalidArgument("sample values must lie in [-1, 1]");
    sum.add(x);
  }
  const double mean = sum.value() / m;
  CompensatedSum dev2;
  for (double x : sample) dev2.add((x - mean) * (x - mean));
  const double se = sample.size() > 1 ? std::sqrt(dev2.value() / (m - 1.0) / m) : 0.0;
  if (std::abs(mean) > 3.0 * se + 1e-15) throw InvalidArgument("sample mean is not within 3 standard errors of 0");

  std::vector<double> sorted(sample.begin(), sample.end());
  std::sort(sorted.begin(), sorted.end());
  const auto frac_at_most = [&](double t) {
    return static_cast<double>(std::upper_bound(sorted.begin(), sorted.end(), t) - sorted.begin()) / m;
  };

  constexpr int kPoints = 1024;
  const double h = 1.0 / (kPoints - 1);
  double integral = 0.0;
  for (int i = 0; i < kPoints; ++i) {
    const double w = (i == 0 || i == kPoints - 1) ? 0.5 : 1.0;
    integral += w * frac_at_most(-static_cast<double>(i) * h);
  }
  integral *= h;

  ReverseMarkovResult out{};
  out.lhs = static_cast<double>(sorted.end() - std::lower_bound(sorted.begin(), sorted.end(), eps)) / m;
  out.rhs = integral / eps;
  out.slack = mc_slack(out.lhs, sample.size());
  out.holds = out.lhs <= out.rhs + out.slack;
  return out;
}

double subgaussian_moment_gamma_log_c(double sigma, double log_c, GammaForm form) {
  if (!(sigma > 0.0)) throw InvalidArgument("sigma must be > 0");
  if (!(log_c >= std::numbers::ln2)) throw InvalidArgument("subgaussian constant c must be >= 2");
  const double k = form == GammaForm::statement ? gamma_coefficient_statement() : gamma_coefficient_proof();
  const double root = sigma * std::sqrt(4.0 * log_c) + k * sigma;
  return root * root;
}

double subgaussian_moment_gamma(double sigma, double c, GammaForm form) {
  if (!(c >= 2.0)) throw InvalidArgument("subgaussian constant c must be >= 2");
  return subgaussian_moment_gamma_log_c(sigma, std::log(c), form);
}

double log_laplace_bound_from_moments(double gamma, double s) {
  if (!(gamma > 0.0)) throw InvalidArgument("gamma must be > 0");
  return kLogLaplaceLead + s * s * std::numbers::e * gamma / 2.0;
}

double laplace_bound_from_moments(double gamma, double s) { return std::exp(log_laplace_bound_from_moments(gamma, s)); }

double log_chernoff_sum(double alpha, double beta2, std::size_t V, double eps) {
  if (!(alpha > 0.0) || !(beta2 > 0.0) || V == 0) throw InvalidArgument("need alpha > 0, beta^2 > 0, V >= 1");
  check_eps_nonneg(eps);
  const double v = static_cast<double>(V);
  return v * std::log(alpha) - v * eps * eps / (2.0 * beta2);
}

double chernoff_sum(double alpha, double beta2, std::size_t V, double eps) {
  return std::exp(log_chernoff_sum(alpha, beta2, V, eps));
}

double kfold_pipeline_log(std::size_t n, double p, double eps, std::size_t vc, GammaForm form) {
  if (!(p > 0.0 && p < 1.0)) throw InvalidArgument("p must lie in (0, 1)");
  const double k_real = 1.0 / p;
  if (std::abs(k_real - std::round(k_real)) > 1e-9 * k_real) throw InvalidArgument("1/p must be an integer");
  const auto k = static_cast<std::size_t>(std::llround(k_real));
  if (n % k != 0) throw InvalidArgument("k = 1/p must divide n");
  if (vc == 0) throw InvalidArgument("vc must be >= 1");
  const double test = static_cast<double>(n / k);

  const double sigma = std::sqrt(4.0 / test);
  const double log_c = std::numbers::ln2 + static_cast<double>(vc) * std::log1p(2.0 * test);
  const double gamma = subgaussian_moment_gamma_log_c(sigma, log_c, form);
  const double alpha = std::exp(log_laplace_bound_from_moments(gamma, 0.0));
  const double beta2 = std::numbers::e * gamma;
  return log_chernoff_sum(alpha, beta2, k, eps);
}

// --- verifiers ----------------------------------------------------------------------

bool VerifierReport::all_hold() const {
  return std::all_of(grid.begin(), grid.end(), [](const VerifierPoint& p) { return p.holds; });
}

nlohmann::json VerifierReport::to_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (const VerifierPoint& p : grid) {
    rows.push_back({{grid_variable, p.x},
                    {"empirical", p.empirical},
                    {"bound", p.bound},
                    {"slack", p.slack},
                    {"holds", p.holds}});
  }
  return {{"inequality", inequality}, {"params", params}, {"grid", rows}};
}

namespace {

void check_grid(std::span<const double> grid) {
  if (grid.empty()) throw InvalidArgument("verifier grid is empty");
  for (double e : grid) {
    if (!(e > 0.0) || !std::isfinite(e)) throw InvalidArgument("verifier grid values must be finite and > 0");
  }
}

// sup_t |R_hat(t) - R(t)| over positive thresholds t in [0, 1] with
// R(t) = eta + (1 - 2 eta)|t - theta|. On each stretch of t with a fixed
// empirical risk, R is convex, so the supremum sits at a stretch endpoint or
// at theta.
double threshold_uniform_deviation(std::vector<std::pair<double, double>>& xy, double eta, double theta) {
  std::sort(xy.begin(), xy.end());
  const std::size_t n = xy.size();
  const double nn = static_cast<double>(n);
  std::size_t zeros_total = 0;
  for (const auto& s : xy) zeros_total += s.second == 0.0 ? 1 : 0;

  const auto risk = [&](double t) { return eta + (1.0 - 2.0 * eta) * std::abs(t - theta); };
  double sup = 0.0;
  std::size_t ones_below = 0;
  std::size_t zeros_below = 0;
  for (std::size_t c = 0; c <= n; ++c) {
    if (c > 0) {
      if (xy[c - 1].second == 1.0) {
        ++ones_below;
      } else {
        ++zeros_below;
      }
    }
    // c points strictly below t: those are predicted 0, the rest 1.
    const double emp = static_cast<double>(ones_below + (zeros_total - zeros_below)) / nn;
    const double lo = c == 0 ? 0.0 : xy[c - 1].first;
    const double hi = c == n ? 1.0 : xy[c].first;
    sup = std::max({sup, std::abs(emp - risk(lo)), std::abs(emp - risk(hi))});
    if (theta > lo && theta < hi) sup = std::max(sup, std::abs(emp - risk(theta)));
  }
  return sup;
}

std::vector<double> threshold_deviation_draws(std::size_t n, double eta, std::size_t reps, std::uint64_t seed) {
  if (n == 0 || reps == 0) throw InvalidArgument("need n >= 1 and reps >= 1");
  if (!(eta >= 0.0 && eta < 0.5)) throw InvalidArgument("eta must lie in [0, 1/2)");
  constexpr double kTheta = 0.5;
  std::vector<double> out(reps);
  std::vector<std::pair<double, double>> xy(n);
  for (std::size_t r = 0; r < reps; ++r) {
    CounterRng rng(trial_seed(seed, r));
    for (auto& s : xy) {
      const double x = rng.uniform01();
      const bool flip = rng.uniform01() < eta;
      s = {x, ((x >= kTheta) != flip) ? 1.0 : 0.0};
    }
    out[r] = threshold_uniform_deviation(xy, eta, kTheta);
  }
  return out;
}

VerifierPoint tail_point(double eps, std::size_t hits, std::size_t reps, double bound) {
  const double p_hat = static_cast<double>(hits) / static_cast<double>(reps);
  const double slack = mc_slack(p_hat, reps);
  return {eps, p_hat, bound, slack, p_hat <= bound + slack};
}

}  // namespace

VerifierReport verify_hoeffding(std::size_t n, std::span<const double> eps_grid, std::size_t reps,
                                std::uint64_t seed) {
  check_grid(eps_grid);
  if (n == 0 || reps == 0) throw InvalidArgument("need n >= 1 and reps >= 1");
  std::vector<double> dev(reps);
  for (std::size_t r = 0; r < reps; ++r) {
    CounterRng rng(trial_seed(seed, r));
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += rng.uniform01();
    dev[r] = s / static_cast<double>(n) - 0.5;
  }
  VerifierReport rep;
  rep.inequality = "hoeffding";
  rep.params = {{"n", n}, {"reps", reps}, {"seed", seed}, {"variable", "uniform[0,1]"}};
  for (double eps : eps_grid) {
    const auto hits = static_cast<std::size_t>(std::count_if(dev.begin(), dev.end(), [&](double d) { return d >= eps; }));
    rep.grid.push_back(tail_point(eps, hits, reps, hoeffding_tail_unit(n, eps)));
  }
  return rep;
}

VerifierReport verify_vc(std::size_t n, double eta, std::span<const double> eps_grid, std::size_t reps,
                         std::uint64_t seed) {
  check_grid(eps_grid);
  const std::vector<double> sup = threshold_deviation_draws(n, eta, reps, seed);
  VerifierReport rep;
  rep.inequality = "vc";
  rep.params = {{"n", n}, {"vc", 1}, {"eta", eta}, {"theta", 0.5}, {"reps", reps}, {"seed", seed}};
  for (double eps : eps_grid) {
    const auto hits = static_cast<std::size_t>(std::count_if(sup.begin(), sup.end(), [&](double d) { return d > eps; }));
    rep.grid.push_back(tail_point(eps, hits, reps, vc_tail(n, 1, eps).value));
  }
  return rep;
}

VerifierReport verify_mcdiarmid(std::size_t n, double eta, std::span<const double> eps_grid, std::size_t reps,
                                std::uint64_t seed) {
  check_grid(eps_grid);
  const std::vector<double> sup = threshold_deviation_draws(n, eta, reps, seed);
  const double mean = compensated_sum(sup) / static_cast<double>(reps);
  const std::vector<double> c(n, 1.0 / static_cast<double>(n));
  VerifierReport rep;
  rep.inequality = "mcdiarmid";
  rep.params = {{"n", n}, {"eta", eta}, {"reps", reps}, {"seed", seed}, {"functional", "threshold-sup-deviation"},
                {"mean_estimate", mean}};
  for (double eps : eps_grid) {
    const auto hits =
        static_cast<std::size_t>(std::count_if(sup.begin(), sup.end(), [&](double d) { return d - mean >= eps; }));
    rep.grid.push_back(tail_point(eps, hits, reps, mcdiarmid_tail(c, eps)));
  }
  return rep;
}

VerifierReport verify_reverse_markov(double sigma, std::span<const double> eps_grid, std::size_t m,
                                     std::uint64_t seed) {
  check_grid(eps_grid);
  if (!(sigma > 0.0) || m == 0) throw InvalidArgument("need sigma > 0 and m >= 1");
  std::vector<double> sample(m);
  CounterRng rng(seed);
  for (double& x : sample) x = std::clamp(sigma * rng.normal01(), -1.0, 1.0);
  VerifierReport rep;
  rep.inequality = "reverse-markov";
  rep.params = {{"sigma", sigma}, {"m", m}, {"seed", seed}, {"variable", "clip(N(0,sigma^2),-1,1)"}};
  for (double eps : eps_grid) {
    const ReverseMarkovResult r = reverse_markov_check(sample, eps);
    rep.grid.push_back({eps, r.lhs, r.rhs, r.slack, r.holds});
  }
  return rep;
}

VerifierReport verify_subgaussian_moments(double sigma, std::size_t q_max) {
  if (!(sigma > 0.0) || q_max == 0) throw InvalidArgument("need sigma > 0 and q_max >= 1");
  constexpr double kC = 2.0;
  const double g_statement = subgaussian_moment_gamma(sigma, kC, GammaForm::statement);
  const double g_proof = subgaussian_moment_gamma(sigma, kC, GammaForm::proof);
  const auto tail = [sigma](double t) { return std::erfc(t / (sigma * std::numbers::sqrt2)); };

  VerifierReport rep;
  rep.inequality = "subgaussian-moments";
  rep.grid_variable = "q";
  // The two coefficients agree algebraically; only rounding separates them.
  const char* tighter = std::abs(g_statement - g_proof) <= 1e-12 * g_statement ? "equal"
                        : g_statement < g_proof                                ? "statement"
                                                                               : "proof";
  rep.params = {{"sigma", sigma}, {"c", kC}, {"gamma_statement", g_statement}, {"gamma_proof", g_proof},
                {"tighter_form", tighter}, {"variable", "min(|N(0,sigma^2)|,1)"}};
  bool statement_ok = true;
  bool proof_ok = true;
  for (std::size_t q = 1; q <= q_max; ++q) {
    const double qq = static_cast<double>(q);
    const auto integrand = [&](double t) { return qq * std::pow(t, qq - 1.0) * tail(t); };
    const double moment = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, 0.0, 1.0, 15, 1e-14);
    const double lhs = std::pow(moment, 1.0 / qq);
    const double b_statement = std::sqrt(g_statement * qq);
    const double b_proof = std::sqrt(g_proof * qq);
    statement_ok = statement_ok && lhs <= b_statement;
    proof_ok = proof_ok && lhs <= b_proof;
    rep.grid.push_back({qq, lhs, b_statement, 0.0, lhs <= b_statement && lhs <= b_proof});
  }
  rep.params["statement_form_holds"] = statement_ok;
  rep.params["proof_form_holds"] = proof_ok;
  return rep;
}

VerifierReport verify_pareto(std::span<const double> a_grid) {
  check_grid(a_grid);
  VerifierReport rep;
  rep.inequality = "pareto-expectation";
  rep.grid_variable = "A";
  rep.params = {{"variable", "P(X>=t)=min(1,A/t) on [0,1]"}};
  using Quad = boost::math::quadrature::gauss_kronrod<double, 61>;
  for (double a : a_grid) {
    const auto survival = [a](double t) { return std::min(1.0, a / t); };
    double mean = 0.0;
    if (a >= 1.0) {
      mean = 1.0;
    } else {
      mean = Quad::integrate(survival, 0.0, a, 15, 1e-14) + Quad::integrate(survival, a, 1.0, 15, 1e-14);
    }
    const double bound = expectation_from_pareto_tail(a);
    const double tol = 1e-9 * std::max(1.0, bound);
    rep.grid.push_back({a, mean, bound, tol, mean <= bound + tol});
  }
  return rep;
}

}  // namespace cvb
