// Copyright 2026 The cvbounds Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software distributed under the License is
// distributed on an "AS IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and limitations under the License.

// Acceptance report: one PASS/FAIL line per criterion, indented details below.
//
//   acceptance [--config configs/acceptance.json] [--expect-fail AC5,AC6]
//
// Exit status is 0 when the failing criteria are exactly the expected ones.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cvbounds/bounds.hpp"
#include "cvbounds/harness.hpp"
#include "cvbounds/toolkit.hpp"
#include "fidelity.hpp"
#include "oracles.hpp"

namespace {

using cvb::Procedure;

struct Outcome {
  bool pass = true;
  std::string summary;
  std::vector<std::string> details;

  void note(std::string line) { details.push_back(std::move(line)); }
};

std::string fmt(double x) { return cvb::format_number(x); }

std::string join(const std::vector<double>& xs) {
  std::string s;
  for (double x : xs) s += (s.empty() ? "" : ", ") + fmt(x);
  return s;
}

bool strictly_decreasing(const std::vector<double>& xs) {
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (!(xs[i] < xs[i - 1])) return false;
  }
  return true;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// --- AC1 and AC4 share the grid run ----------------------------------------------------------

struct GridRun {
  std::size_t configs = 0;
  std::size_t plan_runs = 0;
  std::size_t lemma_violations = 0;
  std::size_t coverage_violations = 0;
  std::size_t tail_points = 0;
  double min_margin = 1.0;  ///< min over points of bound + slack - empirical
  double seconds = 0.0;
  std::vector<std::string> uncovered;
};

GridRun run_grid(const std::string& config_path) {
  std::ifstream in(config_path);
  if (!in) throw std::runtime_error("cannot open " + config_path);
  const auto cfg = cvb::ExperimentConfig::from_json(nlohmann::json::parse(in));
  GridRun out;
  const auto t0 = std::chrono::steady_clock::now();
  for (const auto& c : cfg.expand()) {
    const auto rep = cvb::run_experiment(c);
    ++out.configs;
    out.plan_runs += rep.plans.size();
    out.lemma_violations += rep.lemma_violations();
    out.coverage_violations += rep.coverage_violations();
    for (const auto& p : rep.plans) {
      for (const auto& row : p.tails) {
        ++out.tail_points;
        if (!row.bound) continue;
        out.min_margin = std::min(out.min_margin, row.bound->total + row.slack - row.empirical_tail);
        if (!row.covered) {
          out.uncovered.push_back(p.label + " n=" + std::to_string(c.n) + " eta=" + fmt(c.dist.eta) +
                                  " eps=" + fmt(row.eps));
        }
      }
    }
  }
  out.seconds = seconds_since(t0);
  return out;
}

Outcome ac1(const GridRun& g) {
  Outcome o;
  o.pass = g.lemma_violations == 0 && g.seconds < 600.0;
  o.summary = std::to_string(g.lemma_violations) + " lemma violations over " + std::to_string(g.plan_runs) +
              " (config, plan) runs; " + fmt(std::round(g.seconds * 10.0) / 10.0) + " s single-threaded";
  o.note("configs " + std::to_string(g.configs) + ", symmetric plans kfold-2/5/10/n, 1e4 trials each");
  return o;
}

Outcome ac4(const GridRun& g) {
  Outcome o;
  o.pass = g.coverage_violations == 0;
  o.summary = std::to_string(g.coverage_violations) + " of " + std::to_string(g.tail_points) +
              " grid points above clamped bound + 3 sigma slack";
  o.note("smallest margin bound + slack - empirical: " + fmt(g.min_margin));
  for (const auto& u : g.uncovered) o.note("uncovered: " + u);
  return o;
}

// --- AC2 -------------------------------------------------------------------------------------

Outcome ac2() {
  Outcome o;
  const auto scores = fidelity::run(20260101, 100);
  double worst_log = 0.0;
  double worst_rel = 0.0;
  for (const auto& s : scores) {
    o.pass = o.pass && s.pass();
    worst_log = std::max(worst_log, s.max_log_err);
    worst_rel = std::max(worst_rel, s.max_rel_err);
    char line[200];
    std::snprintf(line, sizeof line, "%-17s queries %3zu  max log err %.2e  max rel err %.2e (%zu representable)%s",
                  s.op.c_str(), s.queries, s.max_log_err, s.max_rel_err, s.representable,
                  s.pass() ? "" : "  <-- exceeds tolerance");
    o.note(line);
  }
  char sum[160];
  std::snprintf(sum, sizeof sum, "%zu ops x 100 random queries; worst log err %.2e (tol 1e-10), worst rel err %.2e (tol 1e-12)",
                scores.size(), worst_log, worst_rel);
  o.summary = sum;
  return o;
}

// --- AC3 -------------------------------------------------------------------------------------

Outcome ac3() {
  Outcome o;
  double worst = 0.0;
  std::size_t loo_mismatch = 0;
  const auto th = cvb::HypothesisClass::threshold();
  const auto loss = cvb::Loss::zero_one();
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    cvb::CounterRng rng(seed);
    const cvb::Dataset d = cvb::SyntheticDistribution(0.5, 0.3).sample(6, rng);
    const auto plan = cvb::make_leave_v_out(6, 2, {cvb::LeaveVOutExhaustive{}});
    if (plan.atoms().size() != 15) o.pass = false;
    worst = std::max(worst, std::abs(cvb::cross_validate(plan, d, th, loss) - oracle::brute_leave_v_out(d, 2)));
  }
  for (std::size_t n = 2; n <= 40; ++n) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      cvb::CounterRng rng(1000 * n + seed);
      const cvb::Dataset d = cvb::SyntheticDistribution(0.5, 0.2).sample(n, rng);
      for (auto cls : {th, cvb::HypothesisClass::interval()}) {
        if (cvb::cross_validate(cvb::make_kfold(n, n), d, cls, loss) != cvb::cross_validate(cvb::make_loo(n), d, cls, loss)) {
          ++loo_mismatch;
        }
      }
    }
  }
  o.pass = o.pass && worst <= 1e-12 && loo_mismatch == 0;
  char sum[200];
  std::snprintf(sum, sizeof sum,
                "leave-2-out at n=6 vs brute force over 15 splits: max diff %.1e on 200 draws; k=n vs LOO: %zu mismatches",
                worst, loo_mismatch);
  o.summary = sum;
  return o;
}

// --- AC5 -------------------------------------------------------------------------------------

Outcome ac5() {
  Outcome o;
  std::size_t checked = 0;
  std::size_t broken = 0;
  const auto check = [&](bool ok, const std::string& what) {
    ++checked;
    if (!ok) {
      ++broken;
      if (broken <= 5) o.note("not monotone: " + what);
    }
  };
  for (std::size_t n : {100u, 1000u, 10000u}) {
    std::vector<double> grid;
    if (n <= 1000) {
      for (std::size_t j = 1; j < n; ++j) grid.push_back(static_cast<double>(j) / static_cast<double>(n));
    } else {
      grid = cvb::default_p_grid(n, Procedure::symmetric_combined);
    }
    const auto kgrid = cvb::default_p_grid(n, Procedure::kfold);
    for (double eps : {0.05, 0.1, 0.3, 1.0}) {
      for (std::size_t vc : {1u, 3u, 10u}) {
        const std::string tag = " n=" + std::to_string(n) + " eps=" + fmt(eps) + " vc=" + std::to_string(vc);
        for (Procedure proc : {Procedure::symmetric_large, Procedure::symmetric_small, Procedure::symmetric_combined}) {
          bool b_up = true;
          for (std::size_t i = 1; i < grid.size(); ++i) {
            b_up = b_up && cvb::evaluate({n, grid[i - 1], eps, vc, proc, false, false}).log_b <
                               cvb::evaluate({n, grid[i], eps, vc, proc, false, false}).log_b;
          }
          check(b_up, "B " + std::string(cvb::to_string(proc)) + tag);
        }
        bool kb_up = true;
        for (std::size_t i = 1; i < kgrid.size(); ++i) {
          kb_up = kb_up && cvb::bound_kfold_combined({n, kgrid[i - 1], eps, vc, Procedure::kfold, false, false}).log_b <
                               cvb::bound_kfold_combined({n, kgrid[i], eps, vc, Procedure::kfold, false, false}).log_b;
        }
        check(kb_up, "B kfold" + tag);
        bool v_sym = true;
        bool v_hold = true;
        for (std::size_t i = 1; i < grid.size(); ++i) {
          const cvb::BoundQuery a{n, grid[i - 1], eps, vc, Procedure::symmetric_large, false, false};
          const cvb::BoundQuery b{n, grid[i], eps, vc, Procedure::symmetric_large, false, false};
          v_sym = v_sym && cvb::bound_abs_large(a).log_v > cvb::bound_abs_large(b).log_v;
          v_hold = v_hold && cvb::bound_holdout(a).log_v > cvb::bound_holdout(b).log_v;
        }
        check(v_sym, "Hoeffding V symmetric" + tag);
        check(v_hold, "Hoeffding V holdout" + tag);
      }
    }
  }
  const bool mono = broken == 0;
  o.note("(a) monotonicity: " + std::to_string(checked - broken) + "/" + std::to_string(checked) +
         " sequences ok; hold-out B excluded, it is not monotone in p");

  const auto grid = cvb::default_p_grid(10000, Procedure::symmetric_combined);
  const auto curve = cvb::estimation_curve(10000, 0.1, 1, Procedure::symmetric_combined, grid);
  const auto strict = cvb::estimation_curve(10000, 0.1, 1, Procedure::symmetric_combined, grid, {false, true});
  const bool transition = !curve.transitions.empty();
  o.note("(b) symmetric-combined n=10000 eps=0.1 vc=1, " + std::to_string(grid.size()) + " grid points: " +
         std::to_string(curve.transitions.size()) + " branch transitions; active branch everywhere: " +
         std::string(cvb::to_string(curve.points.front().value.branch)));
  for (const auto& t : strict.transitions) {
    o.note("    info: 1/(16 eps) small-test lead gives a transition " + std::string(cvb::to_string(t.from)) + " -> " +
           std::string(cvb::to_string(t.to)) + " between p=" + fmt(t.p_before) + " and p=" + fmt(t.p_after));
  }
  const double s = std::sqrt((std::log1p(2.0 * 5000.0) + 4.0) / 5000.0);
  o.note("    the 16/eps small-test branch is >= 16 s / eps = " + fmt(16.0 * s / 0.1) +
         " at p=1/2, above every Hoeffding value (<= 1)");
  o.pass = mono && transition;
  o.summary = std::string("(a) B up / Hoeffding V down ") + (mono ? "holds" : "violated") +
              "; (b) transitions on the n=10000 curve: " + std::to_string(curve.transitions.size()) + " (need >= 1)";
  return o;
}

// --- AC6 -------------------------------------------------------------------------------------

Outcome ac6() {
  Outcome o;
  const std::vector<std::size_t> ns{1000, 10000, 100000};
  std::vector<double> closed;
  std::vector<double> terms;
  for (std::size_t n : ns) {
    closed.push_back(cvb::log_sym_hold_bias_ratio(n, 0.1, 0.1, 1));
    terms.push_back(cvb::log_sym_hold_bias_term_ratio(n, 0.1, 0.1, 1));
  }
  const bool a = strictly_decreasing(closed);
  o.note("(a) ln(B_sym/B_hold) closed form, p=0.1 eps=0.1 vc=1, n=1e3,1e4,1e5: " + join(closed));
  o.note("    info: ratio of the theorem B terms (exponents n eps^2/64 vs 2 n(1-p) eps^2/25): " + join(terms));

  bool b = true;
  for (double eps : {0.05, 0.1, 0.2, 0.4}) {
    std::vector<double> vr;
    for (std::size_t n : ns) vr.push_back(cvb::log_kfold_sym_variance_ratio(n, n / 100, eps, 1));
    b = b && strictly_decreasing(vr);
    o.note("(b) ln(V_k/V_sym) at np=100, eps=" + fmt(eps) + ", n=1e3,1e4,1e5: " + join(vr));
  }
  o.note("    with np fixed the k-fold Hoeffding branch exp(-2n eps^2/(25k)) equals the symmetric one and the"
         " improved branch is larger, so both minima coincide");
  o.pass = a && b;
  o.summary = std::string("(a) B_sym/B_hold decreasing: ") + (a ? "yes" : "no") +
              "; (b) V_k/V_sym strictly decreasing at np=100: " + (b ? "yes" : "no");
  return o;
}

// --- AC7 -------------------------------------------------------------------------------------

Outcome ac7() {
  Outcome o;
  std::vector<double> raw;
  std::vector<double> snapped;
  for (std::size_t vc = 1; vc <= 10; ++vc) {
    const auto r = cvb::optimal_split_l1(5000, vc, 0.0, cvb::SplitMode::computable);
    raw.push_back(r.p_raw);
    snapped.push_back(r.p_snapped);
  }
  const bool a = strictly_decreasing(raw);
  o.note("(a) computable p*, n=5000, vc=1..10: " + join(raw));
  o.note("    snapped to j/5000: " + join(snapped) + (strictly_decreasing(snapped) ? " (strict)" : " (not strict)"));

  std::vector<double> eps;
  for (int i = 1; i <= 4000; ++i) eps.push_back(i / 1000.0);
  bool b = true;
  for (std::size_t n : {1000u, 2000u, 5000u, 10000u}) {
    std::string line = "(b) n=" + std::to_string(n) + ":";
    for (Procedure proc : {Procedure::kfold, Procedure::symmetric_combined, Procedure::symmetric_large,
                           Procedure::symmetric_small, Procedure::holdout}) {
      try {
        const auto ci = cvb::confidence_interval_search(n, 1, 0.05, proc, cvb::default_p_grid(n, proc), eps);
        if (proc == Procedure::kfold) b = b && ci.p_star >= 0.05 && ci.p_star <= 0.2;
        line += " " + std::string(cvb::to_string(proc)) + " p*=" + fmt(ci.p_star) + " eps*=" + fmt(ci.eps_star) + ";";
      } catch (const cvb::Infeasible&) {
        if (proc == Procedure::kfold) b = false;
        line += " " + std::string(cvb::to_string(proc)) + " infeasible;";
      }
    }
    o.note(line);
  }
  o.note("    the criterion is read on the k-fold procedure (p = 1/k); the other procedures are shown for reference");
  o.pass = a && b;
  o.summary = std::string("(a) computable p* strictly decreasing in vc: ") + (a ? "yes" : "no") +
              "; (b) k-fold CI p* in [0.05, 0.2] for n in 1e3..1e4: " + (b ? "yes" : "no");
  return o;
}

// --- AC8 -------------------------------------------------------------------------------------

Outcome ac8() {
  Outcome o;
  const std::vector<double> eps{0.05, 0.1, 0.2, 0.3};
  const auto report = [&](const cvb::VerifierReport& r) {
    std::string line = r.inequality + ":";
    double worst = 0.0;
    for (const auto& pt : r.grid) worst = std::max(worst, pt.empirical / (pt.bound + pt.slack));
    line += r.all_hold() ? " holds" : " VIOLATED";
    line += " (max empirical / (bound + slack) " + fmt(worst) + ")";
    o.note(line);
    o.pass = o.pass && r.all_hold();
  };
  report(cvb::verify_hoeffding(100, eps, 100000, 20260101));
  report(cvb::verify_vc(100, 0.1, eps, 100000, 20260101));
  report(cvb::verify_mcdiarmid(100, 0.1, eps, 100000, 20260101));
  for (double sigma : {0.05, 0.1, 0.2, 0.5, 1.0}) {
    const auto r = cvb::verify_subgaussian_moments(sigma, 20);
    o.pass = o.pass && r.all_hold();
    o.note("subgaussian moments sigma=" + fmt(sigma) + " q=1..20: " + (r.all_hold() ? "holds" : "VIOLATED") +
           ", tighter gamma form: " + r.params.at("tighter_form").get<std::string>());
  }
  double worst = 0.0;
  for (std::size_t n : {100u, 1000u, 10000u, 100000u}) {
    for (std::size_t k : {2u, 4u, 5u, 10u, 20u}) {
      for (double e : {0.05, 0.2, 0.5}) {
        for (std::size_t vc : {1u, 2u, 5u}) {
          const double p = 1.0 / static_cast<double>(k);
          const double chain = cvb::kfold_pipeline_log(n, p, e, vc);
          const oracle::hp truth = log(oracle::kfold_proof_form(n, p, e, vc));
          const double ref = static_cast<double>(truth);
          worst = std::max(worst, std::abs(chain - ref) / std::max(1.0, std::abs(ref)));
        }
      }
    }
  }
  const bool pipe = worst <= 1e-10;
  o.pass = o.pass && pipe;
  char line[160];
  std::snprintf(line, sizeof line, "pipeline vs closed proof form on 180 (n, k, eps, vc): max log err %.2e", worst);
  o.note(line);
  const auto rm = cvb::verify_reverse_markov(0.3, eps, 100000, 20260101);
  o.note(std::string("info: reverse Markov on clipped N(0, 0.09): ") + (rm.all_hold() ? "holds" : "VIOLATED"));
  o.summary = std::string("Hoeffding/VC/McDiarmid tails, moment inequality q=1..20, pipeline to 1e-10: ") +
              (o.pass ? "all hold" : "violation");
  return o;
}

// --- AC9 -------------------------------------------------------------------------------------

Outcome ac9() {
  Outcome o;
  std::vector<double> means;
  for (std::size_t n : {20u, 80u, 320u}) {
    cvb::ExperimentConfig cfg;
    cfg.n = n;
    cfg.dist = cvb::SyntheticDistribution(0.5, 0.1);
    cvb::PlanSpec five;
    five.kind = cvb::PlanKind::k_fold;
    five.k = 5;
    cfg.plans = {five};
    cfg.trials = 10000;
    cfg.master_seed = 20260101;
    const auto rep = cvb::run_experiment(cfg);
    means.push_back(rep.plans[0].l1_mean);
    o.note("n=" + std::to_string(n) + ": mean |R_cv - R_tilde| = " + fmt(rep.plans[0].l1_mean) +
           ", L1 bound (large) " + fmt(*rep.plans[0].l1_bound_large));
  }
  o.pass = strictly_decreasing(means);
  o.summary = "mean |R_cv - R_tilde| at k=5, eta=0.1, n=20,80,320: " + join(means);
  return o;
}

std::set<std::string> parse_list(const std::string& s) {
  std::set<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.insert(item);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  std::string config = CVBOUNDS_ACCEPTANCE_CONFIG;
  std::set<std::string> expected;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--config" && i + 1 < argc) {
      config = argv[++i];
    } else if (arg == "--expect-fail" && i + 1 < argc) {
      expected = parse_list(argv[++i]);
    } else {
      std::cerr << "usage: acceptance [--config FILE] [--expect-fail AC5,AC6]\n";
      return 1;
    }
  }

  std::set<std::string> failed;
  const auto emit = [&](const std::string& id, const Outcome& o) {
    std::cout << id << (o.pass ? " PASS: " : " FAIL: ") << o.summary << '\n';
    for (const auto& d : o.details) std::cout << "    " << d << '\n';
    std::cout.flush();
    if (!o.pass) failed.insert(id);
  };

  try {
    const GridRun grid = run_grid(config);
    emit("AC1", ac1(grid));
    emit("AC2", ac2());
    emit("AC3", ac3());
    emit("AC4", ac4(grid));
    emit("AC5", ac5());
    emit("AC6", ac6());
    emit("AC7", ac7());
    emit("AC8", ac8());
    emit("AC9", ac9());
  } catch (const std::exception& e) {
    std::cerr << "ERROR acceptance aborted: " << e.what() << '\n';
    return 1;
  }

  std::string f;
  for (const auto& id : failed) f += (f.empty() ? "" : ",") + id;
  std::cout << "summary: " << 9 - failed.size() << " PASS, " << failed.size() << " FAIL" << (f.empty() ? "" : " (" + f + ")")
            << '\n';
  if (failed == expected) return 0;
  std::string e;
  for (const auto& id : expected) e += (e.empty() ? "" : ",") + id;
  std::cout << "expected failures: " << (e.empty() ? "none" : e) << '\n';
  return 2;
}
