// Copyright 2026 The cvbounds Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software distributed under the License is
// distributed on an "AS IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and limitations under the License.

// cvbounds: evaluate cross-validation deviation bounds, estimation curves,
// splitting rules and confidence intervals; run Monte Carlo checks.
//
// Exit codes: 0 success, 1 usage error, 2 infeasible CI search,
// 3 invariant violation found by simulate/verify.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "cvbounds/bounds.hpp"
#include "cvbounds/harness.hpp"
#include "cvbounds/toolkit.hpp"

namespace {

using cvb::format_number;

constexpr int kExitUsage = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitViolation = 3;

struct Options {
  std::size_t n = 0;
  double p = 0.0;
  std::size_t k = 0;
  std::size_t vc = 1;
  double eps = 0.0;
  double alpha = 0.05;
  double c = 1.0;
  std::string procedure = "symmetric-combined";
  std::string op = "tail";
  std::string mode = "computable";
  std::string inequality = "all";
  std::vector<double> p_grid;
  std::vector<double> eps_grid;
  std::size_t trials = 0;
  std::optional<std::uint64_t> seed;
  std::optional<double> eta;
  std::optional<std::size_t> workers;
  std::string config;
  std::string out;
  bool json = false;
  bool no_clamp = false;
  bool strict = false;
  bool gamma_proof = false;
  bool l1 = false;
};

struct Violation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Writes to --out when given, stdout otherwise.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw cvb::InvalidArgument("cannot open output file: " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

double test_fraction(const Options& o) {
  if (o.k != 0 && o.p != 0.0) throw cvb::InvalidArgument("give either --p or --k, not both");
  if (o.k != 0) return 1.0 / static_cast<double>(o.k);
  if (o.p == 0.0) throw cvb::InvalidArgument("--p or --k is required");
  return o.p;
}

void require_n(const Options& o) {
  if (o.n < 2) throw cvb::InvalidArgument("--n >= 2 is required");
}

nlohmann::json bound_json(const cvb::BoundValue& v) {
  return {{"B", v.b_term},       {"V", v.v_term},         {"total", v.total},
          {"log_B", v.log_b},    {"log_V", v.log_v},      {"branch", std::string(cvb::to_string(v.branch))},
          {"clamped", v.clamped}};
}

// --- verbs --------------------------------------------------------------------------

void cmd_bound(const Options& o) {
  require_n(o);
  Sink sink(o.out);
  std::ostream& out = sink.stream();

  if (o.op == "l1-large" || o.op == "l1-small" || o.op == "l1-chained") {
    const double p = test_fraction(o);
    const double value = o.op == "l1-large"   ? cvb::l1_bound_large(o.n, p, o.vc)
                         : o.op == "l1-small" ? cvb::l1_bound_small(o.n, p, o.vc)
                                              : cvb::l1_bound_chained(o.n, p, o.vc, o.c);
    if (o.json) {
      out << nlohmann::json{{"op", o.op}, {"n", o.n}, {"p", p}, {"vc", o.vc}, {"value", value}}.dump(2) << '\n';
    } else {
      out << "op,n,p,vc,value\n" << o.op << ',' << o.n << ',' << format_number(p) << ',' << o.vc << ','
          << format_number(value) << '\n';
    }
    return;
  }
  if (o.op == "large-lower") {
    const double log_value = cvb::log_bound_large_lower(o.n, o.eps, o.vc);
    double value = std::exp(log_value);
    if (!o.no_clamp) value = std::min(value, 1.0);
    if (o.json) {
      out << nlohmann::json{{"op", o.op}, {"n", o.n}, {"eps", o.eps}, {"vc", o.vc}, {"value", value},
                            {"log_value", log_value}}
                 .dump(2)
          << '\n';
    } else {
      out << "op,n,eps,vc,value,log_value\n" << o.op << ',' << o.n << ',' << format_number(o.eps) << ',' << o.vc
          << ',' << format_number(value) << ',' << format_number(log_value) << '\n';
    }
    return;
  }
  if (o.op == "kfold-improved") {
    const double p = test_fraction(o);
    const double log_value = cvb::log_bound_kfold_improved(o.n, p, o.eps, o.vc);
    double value = std::exp(log_value);
    if (!o.no_clamp) value = std::min(value, 1.0);
    if (o.json) {
      out << nlohmann::json{{"op", o.op}, {"n", o.n}, {"p", p}, {"eps", o.eps}, {"vc", o.vc}, {"value", value},
                            {"log_value", log_value}}
                 .dump(2)
          << '\n';
    } else {
      out << "op,n,p,eps,vc,value,log_value\n" << o.op << ',' << o.n << ',' << format_number(p) << ','
          << format_number(o.eps) << ',' << o.vc << ',' << format_number(value) << ',' << format_number(log_value)
          << '\n';
    }
    return;
  }

  cvb::BoundQuery q{o.n, test_fraction(o), o.eps, o.vc, cvb::Procedure::symmetric_combined, !o.no_clamp, o.strict};
  cvb::BoundValue v;
  std::string name;
  if (o.op == "large-upper") {
    v = cvb::bound_large_upper(q);
    name = "large-upper";
  } else if (o.op == "tail") {
    q.procedure = cvb::procedure_from_string(o.procedure);
    v = cvb::evaluate(q);
    name = o.procedure;
  } else {
    throw cvb::InvalidArgument("unknown --op: " + o.op);
  }
  if (o.json) {
    nlohmann::json j = bound_json(v);
    j["procedure"] = name;
    j["n"] = q.n;
    j["p"] = q.p;
    j["eps"] = q.eps;
    j["vc"] = q.vc;
    out << j.dump(2) << '\n';
  } else {
    out << "procedure,n,p,eps,vc,B,V,total,branch,log_B,log_V\n"
        << name << ',' << q.n << ',' << format_number(q.p) << ',' << format_number(q.eps) << ',' << q.vc << ','
        << format_number(v.b_term) << ',' << format_number(v.v_term) << ',' << format_number(v.total) << ','
        << cvb::to_string(v.branch) << ',' << format_number(v.log_b) << ',' << format_number(v.log_v) << '\n';
  }
}

void report_snaps(const cvb::SnappedGrid& g) {
  for (const auto& [from, to] : g.adjustments) {
    std::cerr << "NOTE snapped p=" << format_number(from) << " to " << format_number(to) << '\n';
  }
  for (double p : g.dropped) std::cerr << "NOTE dropped p=" << format_number(p) << " (no admissible value)\n";
}

void cmd_curve(const Options& o) {
  require_n(o);
  const cvb::Procedure proc = cvb::procedure_from_string(o.procedure);
  const std::vector<double> grid = o.p_grid.empty() ? cvb::default_p_grid(o.n, proc) : o.p_grid;
  Sink sink(o.out);
  std::ostream& out = sink.stream();

  if (o.l1) {
    const auto curve = cvb::l1_estimation_curve(o.n, o.vc, grid);
    if (o.json) {
      nlohmann::json rows = nlohmann::json::array();
      for (const auto& pt : curve) rows.push_back({{"p", pt.p}, {"B", pt.b_term}, {"V", pt.v_term}, {"total", pt.total}});
      out << nlohmann::json{{"n", o.n}, {"vc", o.vc}, {"curve", "l1"}, {"points", rows}}.dump(2) << '\n';
    } else {
      out << "p,B,V,total\n";
      for (const auto& pt : curve) {
        out << format_number(pt.p) << ',' << format_number(pt.b_term) << ',' << format_number(pt.v_term) << ','
            << format_number(pt.total) << '\n';
      }
    }
    return;
  }

  if (!(o.eps > 0.0)) throw cvb::InvalidArgument("--eps > 0 is required");
  const auto curve = cvb::estimation_curve(o.n, o.eps, o.vc, proc, grid, {!o.no_clamp, o.strict});
  report_snaps(curve.grid);
  if (o.json) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& pt : curve.points) {
      nlohmann::json r = bound_json(pt.value);
      r["p"] = pt.p;
      rows.push_back(r);
    }
    nlohmann::json transitions = nlohmann::json::array();
    for (const auto& t : curve.transitions) {
      transitions.push_back({{"p_before", t.p_before},
                             {"p_after", t.p_after},
                             {"from", std::string(cvb::to_string(t.from))},
                             {"to", std::string(cvb::to_string(t.to))}});
    }
    nlohmann::json snapped = nlohmann::json::array();
    for (const auto& [from, to] : curve.grid.adjustments) snapped.push_back({{"requested", from}, {"used", to}});
    out << nlohmann::json{{"n", o.n},           {"eps", o.eps},     {"vc", o.vc},
                          {"procedure", o.procedure}, {"points", rows}, {"transitions", transitions},
                          {"snapped", snapped}, {"dropped", curve.grid.dropped}}
               .dump(2)
        << '\n';
  } else {
    out << "p,B,V,total,branch\n";
    for (const auto& pt : curve.points) {
      out << format_number(pt.p) << ',' << format_number(pt.value.b_term) << ',' << format_number(pt.value.v_term)
          << ',' << format_number(pt.value.total) << ',' << cvb::to_string(pt.value.branch) << '\n';
    }
  }
}

void cmd_split(const Options& o) {
  require_n(o);
  cvb::SplitMode mode{};
  if (o.mode == "chained") {
    mode = cvb::SplitMode::chained;
  } else if (o.mode == "computable") {
    mode = cvb::SplitMode::computable;
  } else {
    throw cvb::InvalidArgument("--mode must be chained or computable");
  }
  const cvb::SplitRule r = cvb::optimal_split_l1(o.n, o.vc, o.c, mode);
  Sink sink(o.out);
  std::ostream& out = sink.stream();
  if (o.json) {
    out << nlohmann::json{{"n", o.n},         {"vc", o.vc},           {"mode", o.mode},
                          {"p_raw", r.p_raw}, {"p_snapped", r.p_snapped}, {"direction", std::string(cvb::to_string(r.direction))}}
               .dump(2)
        << '\n';
  } else {
    out << "n,vc,mode,p_raw,p_snapped,direction\n"
        << o.n << ',' << o.vc << ',' << o.mode << ',' << format_number(r.p_raw) << ',' << format_number(r.p_snapped)
        << ',' << cvb::to_string(r.direction) << '\n';
  }
}

std::vector<double> default_eps_grid() {
  std::vector<double> g;
  for (int i = 1; i <= 4000; ++i) g.push_back(static_cast<double>(i) / 1000.0);
  return g;
}

void cmd_ci(const Options& o) {
  require_n(o);
  if (!(o.alpha > 0.0)) throw cvb::InvalidArgument("--alpha must be > 0");
  const cvb::Procedure proc = cvb::procedure_from_string(o.procedure);
  const std::vector<double> p_grid = o.p_grid.empty() ? cvb::default_p_grid(o.n, proc) : o.p_grid;
  const std::vector<double> eps_grid = o.eps_grid.empty() ? default_eps_grid() : o.eps_grid;
  const cvb::ConfidenceInterval ci =
      cvb::confidence_interval_search(o.n, o.vc, o.alpha, proc, p_grid, eps_grid, {!o.no_clamp, o.strict});
  Sink sink(o.out);
  std::ostream& out = sink.stream();
  if (o.json) {
    out << nlohmann::json{{"n", o.n},
                          {"vc", o.vc},
                          {"alpha", o.alpha},
                          {"procedure", o.procedure},
                          {"eps_star", ci.eps_star},
                          {"p_star", ci.p_star},
                          {"achieved_bound", ci.achieved_bound},
                          {"branch", std::string(cvb::to_string(ci.value.branch))}}
               .dump(2)
        << '\n';
  } else {
    out << "n,vc,alpha,procedure,eps_star,p_star,achieved_bound,branch\n"
        << o.n << ',' << o.vc << ',' << format_number(o.alpha) << ',' << o.procedure << ','
        << format_number(ci.eps_star) << ',' << format_number(ci.p_star) << ',' << format_number(ci.achieved_bound)
        << ',' << cvb::to_string(ci.value.branch) << '\n';
  }
}

cvb::ExperimentConfig load_config(const Options& o) {
  cvb::ExperimentConfig cfg;
  if (!o.config.empty()) {
    std::ifstream in(o.config);
    if (!in) throw cvb::InvalidArgument("cannot read config: " + o.config);
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw cvb::InvalidArgument(std::string("config is not valid JSON: ") + e.what());
    }
    cfg = cvb::ExperimentConfig::from_json(j);
  }
  if (o.n != 0) {
    cfg.n = o.n;
    cfg.sweep_n.clear();
  }
  if (o.eta) {
    cfg.dist = cvb::SyntheticDistribution(cfg.dist.theta_star, *o.eta);
    cfg.sweep_eta.clear();
  }
  if (o.trials != 0) cfg.trials = o.trials;
  if (o.seed) cfg.master_seed = *o.seed;
  if (o.workers) cfg.workers = *o.workers;
  if (!o.eps_grid.empty()) cfg.eps_grid = o.eps_grid;
  if (cfg.plans.empty()) {
    if (o.k != 0) {
      cvb::PlanSpec s;
      s.k = o.k;
      cfg.plans.push_back(s);
    } else {
      throw cvb::InvalidArgument("no plans: give --config with plans or --k");
    }
  }
  cfg.validate();
  return cfg;
}

void cmd_simulate(const Options& o) {
  const cvb::ExperimentConfig cfg = load_config(o);
  Sink sink(o.out);
  std::ostream& out = sink.stream();
  std::size_t lemma = 0;
  std::size_t coverage = 0;
  nlohmann::json runs = nlohmann::json::array();
  bool header = true;
  for (const cvb::ExperimentConfig& c : cfg.expand()) {
    const cvb::ExperimentReport rep = cvb::run_experiment(c);
    lemma += rep.lemma_violations();
    coverage += rep.coverage_violations();
    if (o.json) {
      runs.push_back(rep.to_json());
    } else {
      rep.write_csv(out, header);
      header = false;
    }
  }
  if (o.json) out << nlohmann::json{{"config", cfg.to_json()}, {"runs", runs}}.dump(2) << '\n';
  out.flush();
  if (lemma + coverage > 0) {
    throw Violation(std::to_string(lemma) + " lemma violations, " + std::to_string(coverage) +
                    " coverage violations");
  }
}

void cmd_compare(const Options& o) {
  const cvb::ExperimentConfig cfg = load_config(o);
  const cvb::ComparisonTable table = cvb::compare_procedures(cfg);
  Sink sink(o.out);
  std::ostream& out = sink.stream();
  if (o.json) {
    out << table.to_json().dump(2) << '\n';
  } else {
    table.write_csv(out);
    out << '\n';
    table.write_ratios_csv(out);
  }
}

void cmd_verify(const Options& o) {
  const std::uint64_t seed = o.seed.value_or(20260101);
  const std::size_t reps = o.trials != 0 ? o.trials : 100000;
  const std::size_t n = o.n != 0 ? o.n : 100;
  const std::vector<double> eps = o.eps_grid.empty() ? std::vector<double>{0.05, 0.1, 0.2, 0.3} : o.eps_grid;
  const double eta = o.eta.value_or(0.1);

  std::vector<cvb::VerifierReport> reports;
  const auto want = [&](const char* name) { return o.inequality == "all" || o.inequality == name; };
  bool known = o.inequality == "all";
  if (want("hoeffding")) {
    known = true;
    reports.push_back(cvb::verify_hoeffding(n, eps, reps, seed));
  }
  if (want("vc")) {
    known = true;
    reports.push_back(cvb::verify_vc(n, eta, eps, reps, seed));
  }
  if (want("mcdiarmid")) {
    known = true;
    reports.push_back(cvb::verify_mcdiarmid(n, eta, eps, reps, seed));
  }
  if (want("reverse-markov")) {
    known = true;
    reports.push_back(cvb::verify_reverse_markov(0.3, eps, reps, seed));
  }
  if (want("subgaussian-moments")) {
    known = true;
    reports.push_back(cvb::verify_subgaussian_moments(0.2, 20));
  }
  if (want("pareto")) {
    known = true;
    const std::vector<double> a{0.01, 0.05, 0.1, 0.25, 0.5, 1.0 / std::exp(1.0), 0.9, 1.0};
    reports.push_back(cvb::verify_pareto(a));
  }
  std::optional<nlohmann::json> pipeline;
  if (want("pipeline")) {
    known = true;
    const std::size_t pn = o.n != 0 ? o.n : 10000;
    const double p = o.k != 0 ? 1.0 / static_cast<double>(o.k) : 0.1;
    const double e = o.eps > 0.0 ? o.eps : 0.2;
    const auto form = o.gamma_proof ? cvb::GammaForm::proof : cvb::GammaForm::statement;
    const double chain = cvb::kfold_pipeline_log(pn, p, e, o.vc, form);
    const double direct = cvb::log_kfold_proof_form(pn, p, e, o.vc);
    pipeline = nlohmann::json{{"inequality", "kfold-pipeline"},
                              {"params", {{"n", pn}, {"p", p}, {"eps", e}, {"vc", o.vc},
                                          {"gamma_form", o.gamma_proof ? "proof" : "statement"}}},
                              {"log_pipeline", chain},
                              {"log_direct", direct},
                              {"abs_diff", std::abs(chain - direct)},
                              {"holds", std::abs(chain - direct) <= 1e-10 * std::max(1.0, std::abs(direct))}};
  }
  if (!known) throw cvb::InvalidArgument("unknown --inequality: " + o.inequality);

  bool ok = !pipeline || (*pipeline)["holds"].get<bool>();
  for (const auto& r : reports) ok = ok && r.all_hold();

  Sink sink(o.out);
  std::ostream& out = sink.stream();
  if (o.json) {
    nlohmann::json all = nlohmann::json::array();
    for (const auto& r : reports) all.push_back(r.to_json());
    if (pipeline) all.push_back(*pipeline);
    out << all.dump(2) << '\n';
  } else {
    out << "inequality,x_name,x,empirical,bound,slack,holds\n";
    for (const auto& r : reports) {
      for (const auto& pt : r.grid) {
        out << r.inequality << ',' << r.grid_variable << ',' << format_number(pt.x) << ','
            << format_number(pt.empirical) << ',' << format_number(pt.bound) << ',' << format_number(pt.slack) << ','
            << (pt.holds ? "true" : "false") << '\n';
      }
    }
    if (pipeline) {
      out << "kfold-pipeline,eps," << format_number((*pipeline)["params"]["eps"].get<double>()) << ','
          << format_number((*pipeline)["log_pipeline"].get<double>()) << ','
          << format_number((*pipeline)["log_direct"].get<double>()) << ",0,"
          << ((*pipeline)["holds"].get<bool>() ? "true" : "false") << '\n';
    }
  }
  out.flush();
  if (!ok) throw Violation("a verified inequality failed on its testbed");
}

int fail(int code, const std::string& msg) {
  std::cerr << "ERROR " << code << ": " << msg << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{"Cross-validation deviation bounds and Monte Carlo checks"};
  app.require_subcommand(1);

  const auto positive = CLI::PositiveNumber;
  const auto unit_open = CLI::Range(0.0, 1.0);

  auto add_out = [&](CLI::App* s) {
    s->add_option("--out", o.out, "Output file (default stdout)");
    s->add_flag("--json", o.json, "Emit JSON instead of CSV");
  };
  auto add_bound_flags = [&](CLI::App* s) {
    s->add_option("--n", o.n, "Sample size")->check(CLI::Range(std::size_t{2}, std::size_t{1} << 40));
    s->add_option("--vc", o.vc, "VC dimension")->check(CLI::Range(std::size_t{1}, std::size_t{1000000}));
    s->add_option("--procedure", o.procedure, "symmetric-large|symmetric-small|symmetric-combined|kfold|holdout");
    s->add_flag("--no-clamp", o.no_clamp, "Report raw totals instead of min(total, 1)");
    s->add_flag("--strict-proposition", o.strict, "Small-test branch with 1/(16 eps)");
  };

  CLI::App* bound = app.add_subcommand("bound", "Evaluate one bound");
  add_bound_flags(bound);
  bound->add_option("--p", o.p, "Test fraction")->check(unit_open);
  bound->add_option("--k", o.k, "Folds (sets p = 1/k)")->check(CLI::Range(std::size_t{2}, std::size_t{1} << 40));
  bound->add_option("--eps", o.eps, "Precision")->check(CLI::NonNegativeNumber);
  bound->add_option("--c", o.c, "Universal constant for l1-chained")->check(CLI::NonNegativeNumber);
  bound->add_option("--op", o.op, "tail|large-upper|large-lower|kfold-improved|l1-large|l1-small|l1-chained");
  add_out(bound);

  CLI::App* curve = app.add_subcommand("curve", "Estimation curve over p");
  add_bound_flags(curve);
  curve->add_option("--eps", o.eps, "Precision")->check(positive);
  curve->add_option("--p-grid", o.p_grid, "Comma-separated p values (default: all admissible up to 1/2)")
      ->delimiter(',');
  curve->add_flag("--l1", o.l1, "L1 estimation curve instead of the probability curve");
  add_out(curve);

  CLI::App* split = app.add_subcommand("split", "Optimal L1 split");
  split->add_option("--n", o.n, "Sample size")->check(CLI::Range(std::size_t{2}, std::size_t{1} << 40));
  split->add_option("--vc", o.vc, "VC dimension")->check(CLI::Range(std::size_t{1}, std::size_t{1000000}));
  split->add_option("--c", o.c, "Universal constant (chained mode)")->check(positive);
  split->add_option("--mode", o.mode, "chained|computable");
  add_out(split);

  CLI::App* ci = app.add_subcommand("ci", "Minimal (1 - alpha) confidence interval search");
  add_bound_flags(ci);
  ci->add_option("--alpha", o.alpha, "Confidence level alpha")->check(positive);
  ci->add_option("--p-grid", o.p_grid, "Comma-separated p values")->delimiter(',');
  ci->add_option("--eps-grid", o.eps_grid, "Comma-separated eps values (default 0.001..4)")->delimiter(',');
  add_out(ci);

  auto add_experiment_flags = [&](CLI::App* s) {
    s->add_option("--config", o.config, "Experiment JSON")->check(CLI::ExistingFile);
    s->add_option("--n", o.n, "Override sample size")->check(CLI::Range(std::size_t{2}, std::size_t{1} << 30));
    s->add_option("--k", o.k, "k-fold plan when the config has none")->check(CLI::Range(std::size_t{2}, std::size_t{1} << 30));
    s->add_option("--eta", o.eta, "Override label noise")->check(CLI::Range(0.0, 0.4999999));
    s->add_option("--trials", o.trials, "Override trial count")->check(CLI::Range(std::size_t{1}, std::size_t{1} << 40));
    s->add_option("--seed", o.seed, "Override master seed");
    s->add_option("--workers", o.workers, "Worker threads (0 = all cores)");
    s->add_option("--eps-grid", o.eps_grid, "Override eps grid")->delimiter(',');
    add_out(s);
  };
  CLI::App* simulate = app.add_subcommand("simulate", "Run a Monte Carlo experiment");
  add_experiment_flags(simulate);
  CLI::App* compare = app.add_subcommand("compare", "Compare procedures and bound ratios");
  add_experiment_flags(compare);

  CLI::App* verify = app.add_subcommand("verify", "Check the inequality toolkit numerically");
  verify->add_option("--inequality", o.inequality,
                     "all|hoeffding|vc|mcdiarmid|reverse-markov|subgaussian-moments|pareto|pipeline");
  verify->add_option("--n", o.n, "Sample size")->check(CLI::Range(std::size_t{1}, std::size_t{1} << 30));
  verify->add_option("--k", o.k, "Folds for the pipeline check")->check(CLI::Range(std::size_t{2}, std::size_t{1} << 30));
  verify->add_option("--vc", o.vc, "VC dimension for the pipeline check")->check(CLI::Range(std::size_t{1}, std::size_t{1000}));
  verify->add_option("--eps", o.eps, "Precision for the pipeline check")->check(positive);
  verify->add_option("--eps-grid", o.eps_grid, "Comma-separated eps values")->delimiter(',');
  verify->add_option("--eta", o.eta, "Label noise for the VC/McDiarmid testbeds")->check(CLI::Range(0.0, 0.4999999));
  verify->add_option("--trials", o.trials, "Monte Carlo repetitions")->check(CLI::Range(std::size_t{1}, std::size_t{1} << 40));
  verify->add_option("--seed", o.seed, "Seed");
  verify->add_flag("--gamma-proof-form", o.gamma_proof, "Use the proof-form gamma coefficient");
  add_out(verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail(kExitUsage, e.what());
  }

  try {
    if (*bound) cmd_bound(o);
    if (*curve) cmd_curve(o);
    if (*split) cmd_split(o);
    if (*ci) cmd_ci(o);
    if (*simulate) cmd_simulate(o);
    if (*compare) cmd_compare(o);
    if (*verify) cmd_verify(o);
  } catch (const cvb::Infeasible& e) {
    return fail(kExitInfeasible, e.what());
  } catch (const Violation& e) {
    return fail(kExitViolation, e.what());
  } catch (const std::exception& e) {
    return fail(kExitUsage, e.what());
  }
  return 0;
}
