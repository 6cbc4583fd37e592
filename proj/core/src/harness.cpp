// Copyright 2026 The cvbounds Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software distributed under the License is
// distributed on an "AS IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and limitations under the License.

#include "cvbounds/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <ostream>
#include <set>
#include <thread>

#include "cvbounds/rng.hpp"
#include "cvbounds/toolkit.hpp"

namespace cvb {

// --- PlanSpec ----------------------------------------------------------------------

ResamplingPlan PlanSpec::build(std::size_t n) const {
  switch (kind) {
    case PlanKind::k_fold:
      return make_kfold(n, k == 0 ? n : k, shuffle_seed);
    case PlanKind::leave_one_out:
      return make_loo(n);
    case PlanKind::leave_v_out_exhaustive:
      return make_leave_v_out(n, v, LeaveVOutMode{LeaveVOutExhaustive{}});
    case PlanKind::leave_v_out_montecarlo:
      return make_leave_v_out(n, v, LeaveVOutMode{LeaveVOutMonteCarlo{draws, seed}});
    case PlanKind::hold_out: {
      const double np = std::round(static_cast<double>(n) * p);
      std::vector<std::size_t> test(static_cast<std::size_t>(np));
      std::iota(test.begin(), test.end(), n - test.size());
      return make_holdout(n, p, test);
    }
    case PlanKind::custom:
      break;
  }
  throw InvalidArgument("custom plans cannot be built from a spec");
}

std::string PlanSpec::label() const {
  switch (kind) {
    case PlanKind::k_fold:
      return k == 0 ? "kfold-n" : "kfold-" + std::to_string(k);
    case PlanKind::leave_one_out:
      return "loo";
    case PlanKind::leave_v_out_exhaustive:
      return "lvo-" + std::to_string(v);
    case PlanKind::leave_v_out_montecarlo:
      return "lvo-mc-" + std::to_string(v);
    case PlanKind::hold_out:
      return "holdout-" + format_number(p);
    case PlanKind::custom:
      break;
  }
  return "custom";
}

nlohmann::json PlanSpec::to_json() const {
  nlohmann::json j{{"kind", std::string(to_string(kind))}};
  switch (kind) {
    case PlanKind::k_fold:
      if (k == 0) {
        j["k"] = "n";
      } else {
        j["k"] = k;
      }
      if (shuffle_seed) j["shuffle_seed"] = *shuffle_seed;
      break;
    case PlanKind::leave_v_out_exhaustive:
      j["v"] = v;
      break;
    case PlanKind::leave_v_out_montecarlo:
      j["v"] = v;
      j["draws"] = draws;
      j["seed"] = seed;
      break;
    case PlanKind::hold_out:
      j["p"] = p;
      break;
    default:
      break;
  }
  return j;
}

namespace {

void reject_unknown_keys(const nlohmann::json& j, std::initializer_list<const char*> allowed, const char* where) {
  if (!j.is_object()) throw InvalidArgument(std::string(where) + " must be a JSON object");
  for (const auto& item : j.items()) {
    const bool known = std::any_of(allowed.begin(), allowed.end(), [&](const char* a) { return item.key() == a; });
    if (!known) throw InvalidArgument(std::string("unknown key in ") + where + ": " + item.key());
  }
}

}  // namespace

PlanSpec PlanSpec::from_json(const nlohmann::json& j) {
  reject_unknown_keys(j, {"kind", "k", "v", "draws", "seed", "shuffle_seed", "p"}, "plan");
  PlanSpec s;
  s.kind = plan_kind_from_string(j.at("kind").get<std::string>());
  if (j.contains("k")) {
    const auto& k = j.at("k");
    if (k.is_string()) {
      if (k.get<std::string>() != "n") throw InvalidArgument("k must be an integer or \"n\"");
      s.k = 0;
    } else {
      s.k = k.get<std::size_t>();
      if (s.k == 0) throw InvalidArgument("k must be >= 2");
    }
  } else if (s.kind == PlanKind::k_fold) {
    throw InvalidArgument("k-fold plan requires k");
  }
  if (j.contains("v")) s.v = j.at("v").get<std::size_t>();
  if (j.contains("draws")) s.draws = j.at("draws").get<std::size_t>();
  if (j.contains("seed")) s.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("shuffle_seed")) s.shuffle_seed = j.at("shuffle_seed").get<std::uint64_t>();
  if (j.contains("p")) s.p = j.at("p").get<double>();
  return s;
}

// --- ExperimentConfig ----------------------------------------------------------------

void ExperimentConfig::validate() const {
  if (trials < 1) throw InvalidArgument("trials must be >= 1");
  if (plans.empty()) throw InvalidArgument("at least one plan is required");
  if (eps_grid.empty()) throw InvalidArgument("eps grid must be nonempty");
  for (std::size_t i = 0; i < eps_grid.size(); ++i) {
    if (!(eps_grid[i] > 0.0)) throw InvalidArgument("eps grid values must be > 0");
    if (i > 0 && !(eps_grid[i] > eps_grid[i - 1])) throw InvalidArgument("eps grid must be strictly increasing");
  }
  for (const ExperimentConfig& c : expand()) {
    for (const PlanSpec& s : plans) (void)s.build(c.n);
  }
}

std::vector<ExperimentConfig> ExperimentConfig::expand() const {
  const std::vector<std::size_t> ns = sweep_n.empty() ? std::vector<std::size_t>{n} : sweep_n;
  const std::vector<double> etas = sweep_eta.empty() ? std::vector<double>{dist.eta} : sweep_eta;
  std::vector<ExperimentConfig> out;
  for (std::size_t nn : ns) {
    for (double eta : etas) {
      ExperimentConfig c = *this;
      c.n = nn;
      c.dist = SyntheticDistribution(dist.theta_star, eta);
      c.sweep_n.clear();
      c.sweep_eta.clear();
      out.push_back(std::move(c));
    }
  }
  return out;
}

nlohmann::json ExperimentConfig::to_json() const {
  nlohmann::json plan_list = nlohmann::json::array();
  for (const PlanSpec& s : plans) plan_list.push_back(s.to_json());
  nlohmann::json j{
      {"n", n},
      {"dist", {{"theta", dist.theta_star}, {"eta", dist.eta}}},
      {"class",
       {{"kind", std::string(to_string(cls.kind))},
        {"vc", cls.vc_dim},
        {"orientation", cls.orientation == Orientation::positive ? "positive" : "negative"}}},
      {"plans", plan_list},
      {"eps_grid", eps_grid},
      {"trials", trials},
      {"master_seed", master_seed},
      {"workers", workers},
  };
  if (!sweep_n.empty() || !sweep_eta.empty()) {
    j["sweep"] = nlohmann::json::object();
    if (!sweep_n.empty()) j["sweep"]["n"] = sweep_n;
    if (!sweep_eta.empty()) j["sweep"]["eta"] = sweep_eta;
  }
  return j;
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
  reject_unknown_keys(j, {"n", "dist", "class", "plans", "eps_grid", "trials", "master_seed", "workers", "sweep"},
                      "config");
  ExperimentConfig c;
  try {
    if (j.contains("n")) c.n = j.at("n").get<std::size_t>();
    if (j.contains("dist")) {
      const auto& d = j.at("dist");
      reject_unknown_keys(d, {"theta", "eta"}, "dist");
      c.dist = SyntheticDistribution(d.value("theta", 0.5), d.value("eta", 0.0));
    }
    if (j.contains("class")) {
      const auto& k = j.at("class");
      reject_unknown_keys(k, {"kind", "vc", "orientation"}, "class");
      const ClassKind kind = class_kind_from_string(k.value("kind", std::string("threshold")));
      const std::string orient = k.value("orientation", std::string("positive"));
      if (orient != "positive" && orient != "negative") throw InvalidArgument("orientation must be positive|negative");
      const Orientation o = orient == "positive" ? Orientation::positive : Orientation::negative;
      c.cls = kind == ClassKind::threshold ? HypothesisClass::threshold(o) : HypothesisClass::interval(o);
      if (k.contains("vc")) c.cls.vc_dim = k.at("vc").get<std::size_t>();
    }
    if (j.contains("plans")) {
      for (const auto& p : j.at("plans")) c.plans.push_back(PlanSpec::from_json(p));
    }
    if (j.contains("eps_grid")) c.eps_grid = j.at("eps_grid").get<std::vector<double>>();
    if (j.contains("trials")) c.trials = j.at("trials").get<std::size_t>();
    if (j.contains("master_seed")) c.master_seed = j.at("master_seed").get<std::uint64_t>();
    if (j.contains("workers")) c.workers = j.at("workers").get<std::size_t>();
    if (j.contains("sweep")) {
      const auto& s = j.at("sweep");
      reject_unknown_keys(s, {"n", "eta"}, "sweep");
      if (s.contains("n")) c.sweep_n = s.at("n").get<std::vector<std::size_t>>();
      if (s.contains("eta")) c.sweep_eta = s.at("eta").get<std::vector<double>>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed config: ") + e.what());
  }
  return c;
}

// --- trials ----------------------------------------------------------------------------

namespace {

struct BuiltPlan {
  ResamplingPlan plan;
  bool symmetric;
};

std::vector<BuiltPlan> build_plans(const ExperimentConfig& cfg) {
  std::vector<BuiltPlan> out;
  out.reserve(cfg.plans.size());
  for (const PlanSpec& s : cfg.plans) {
    ResamplingPlan plan = s.build(cfg.n);
    const bool sym = plan.kind() != PlanKind::hold_out && plan.satisfies_symmetric_hypotheses();
    out.push_back({std::move(plan), sym});
  }
  return out;
}

TrialRecord trial_with_plans(const ExperimentConfig& cfg, const std::vector<BuiltPlan>& plans,
                             std::uint64_t trial_id) {
  CounterRng rng(trial_seed(cfg.master_seed, trial_id));
  const Dataset d = cfg.dist.sample(cfg.n, rng);
  const Loss loss = Loss::zero_one();
  TrialRecord rec;
  rec.trial_id = trial_id;
  rec.plans.reserve(plans.size());
  for (const BuiltPlan& bp : plans) {
    PlanTrial t{};
    t.est = estimates(bp.plan, d, cfg.cls, loss, &cfg.dist);
    const double r_tilde = *t.est.r_tilde_n;
    const double r_bar = *t.est.r_bar;
    t.abs_deviation = std::abs(t.est.r_cv - r_tilde);
    t.v_deviation = t.est.r_cv - r_bar;
    t.b_deviation = r_bar - r_tilde;
    t.lemma_holds = t.est.r_cv >= t.est.r_hat_n;
    rec.plans.push_back(t);
  }
  return rec;
}

std::vector<TrialRecord> run_all(const ExperimentConfig& cfg, const std::vector<BuiltPlan>& plans) {
  std::vector<TrialRecord> records(cfg.trials);
  std::size_t workers = cfg.workers == 0 ? std::max(1U, std::thread::hardware_concurrency()) : cfg.workers;
  workers = std::min(workers, cfg.trials);

  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (;;) {
      const std::size_t t = next.fetch_add(1, std::memory_order_relaxed);
      if (t >= cfg.trials) return;
      try {
        records[t] = trial_with_plans(cfg, plans, t);
      } catch (...) {
        const std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(cfg.trials);
        return;
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (error) std::rethrow_exception(error);
  return records;
}

std::string bound_name_for(const BuiltPlan& bp) {
  const PlanKind k = bp.plan.kind();
  if (k == PlanKind::hold_out) return "holdout";
  if (!bp.symmetric) return "n/a";
  if (k == PlanKind::k_fold || k == PlanKind::leave_one_out) return "kfold";
  return "symmetric";
}

std::optional<BoundValue> bound_for(const std::string& name, std::size_t n, double p, double eps, std::size_t vc) {
  BoundQuery q{n, p, eps, vc, Procedure::symmetric_combined, true, false};
  if (name == "kfold") {
    q.procedure = Procedure::kfold;
  } else if (name == "holdout") {
    q.procedure = Procedure::holdout;
  } else if (name != "symmetric") {
    return std::nullopt;
  }
  return evaluate(q);
}

}  // namespace

TrialRecord run_trial(const ExperimentConfig& cfg, std::uint64_t trial_id) {
  cfg.validate();
  return trial_with_plans(cfg, build_plans(cfg), trial_id);
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  if (!cfg.sweep_n.empty() || !cfg.sweep_eta.empty()) {
    throw InvalidArgument("run_experiment takes a single configuration; expand() the sweep first");
  }
  const std::vector<BuiltPlan> plans = build_plans(cfg);
  const std::vector<TrialRecord> records = run_all(cfg, plans);
  const double m = static_cast<double>(cfg.trials);

  ExperimentReport report;
  report.config = cfg;
  for (std::size_t i = 0; i < plans.size(); ++i) {
    const BuiltPlan& bp = plans[i];
    PlanReport pr;
    pr.label = cfg.plans[i].label();
    pr.kind = bp.plan.kind();
    pr.p = static_cast<double>(bp.plan.test_size()) / static_cast<double>(cfg.n);
    pr.symmetric = bp.symmetric;
    pr.bound_name = bound_name_for(bp);

    CompensatedSum l1;
    for (const TrialRecord& r : records) {
      const PlanTrial& t = r.plans[i];
      l1.add(t.abs_deviation);
      if (bp.symmetric && !t.lemma_holds) ++pr.lemma_violations;
    }
    pr.l1_mean = l1.value() / m;
    if (bp.symmetric) {
      pr.l1_bound_large = l1_bound_large(cfg.n, pr.p, cfg.cls.vc_dim);
      pr.l1_bound_small = l1_bound_small(cfg.n, pr.p, cfg.cls.vc_dim);
    }

    for (double eps : cfg.eps_grid) {
      std::size_t hits = 0;
      for (const TrialRecord& r : records) hits += r.plans[i].abs_deviation >= eps ? 1 : 0;
      TailRow row{};
      row.eps = eps;
      row.empirical_tail = static_cast<double>(hits) / m;
      row.slack = mc_slack(row.empirical_tail, cfg.trials);
      row.bound = bound_for(pr.bound_name, cfg.n, pr.p, eps, cfg.cls.vc_dim);
      row.covered = !row.bound || row.empirical_tail <= row.bound->total + row.slack;
      pr.tails.push_back(row);
    }
    report.plans.push_back(std::move(pr));
  }
  return report;
}

std::size_t ExperimentReport::lemma_violations() const {
  std::size_t total = 0;
  for (const PlanReport& p : plans) total += p.lemma_violations;
  return total;
}

std::size_t ExperimentReport::coverage_violations() const {
  std::size_t total = 0;
  for (const PlanReport& p : plans) {
    for (const TailRow& r : p.tails) total += r.covered ? 0 : 1;
  }
  return total;
}

void ExperimentReport::write_csv(std::ostream& out, bool header) const {
  if (header) out << "plan,p,eps,empirical_tail,slack,bound_total,bound_branch,lemma_violations,n,eta\n";
  for (const PlanReport& p : plans) {
    for (const TailRow& r : p.tails) {
      out << p.label << ',' << format_number(p.p) << ',' << format_number(r.eps) << ','
          << format_number(r.empirical_tail) << ',' << format_number(r.slack) << ','
          << (r.bound ? format_number(r.bound->total) : "n/a") << ','
          << (r.bound ? std::string(to_string(r.bound->branch)) : "n/a") << ',' << p.lemma_violations << ','
          << config.n << ',' << format_number(config.dist.eta) << '\n';
    }
  }
}

nlohmann::json ExperimentReport::to_json() const {
  nlohmann::json plan_list = nlohmann::json::array();
  for (const PlanReport& p : plans) {
    nlohmann::json tails = nlohmann::json::array();
    for (const TailRow& r : p.tails) {
      nlohmann::json row{{"eps", r.eps},
                         {"empirical_tail", r.empirical_tail},
                         {"slack", r.slack},
                         {"covered", r.covered}};
      if (r.bound) {
        row["bound_total"] = r.bound->total;
        row["bound_b"] = r.bound->b_term;
        row["bound_v"] = r.bound->v_term;
        row["bound_branch"] = std::string(to_string(r.bound->branch));
      }
      tails.push_back(row);
    }
    nlohmann::json pj{{"plan", p.label},
                      {"kind", std::string(to_string(p.kind))},
                      {"p", p.p},
                      {"symmetric", p.symmetric},
                      {"bound", p.bound_name},
                      {"lemma_violations", p.lemma_violations},
                      {"l1_mean", p.l1_mean},
                      {"tails", tails}};
    if (p.l1_bound_large) pj["l1_bound_large"] = *p.l1_bound_large;
    if (p.l1_bound_small) pj["l1_bound_small"] = *p.l1_bound_small;
    plan_list.push_back(pj);
  }
  return {{"config", config.to_json()},
          {"grid_note", "experiment grids are chosen by this tool, not taken from a published protocol"},
          {"plans", plan_list}};
}

// --- comparisons -------------------------------------------------------------------------

ComparisonTable compare_procedures(const ExperimentConfig& cfg) {
  ComparisonTable table;
  ExperimentConfig single = cfg;
  single.sweep_n.clear();
  single.sweep_eta.clear();
  table.report = run_experiment(single);

  const std::vector<std::size_t> ns = cfg.sweep_n.empty() ? std::vector<std::size_t>{cfg.n} : cfg.sweep_n;
  std::set<double> ps;
  for (const PlanReport& p : table.report.plans) ps.insert(p.p);
  for (std::size_t n : ns) {
    for (double p : ps) {
      const double np = static_cast<double>(n) * p;
      if (std::abs(np - std::round(np)) > 1e-9 || np < 1.0 || np > static_cast<double>(n) - 1.0) continue;
      for (double eps : cfg.eps_grid) {
        RatioRow row{};
        row.n = n;
        row.p = p;
        row.eps = eps;
        row.log_bias_ratio = log_sym_hold_bias_ratio(n, p, eps, cfg.cls.vc_dim);
        row.log_bias_term_ratio = log_sym_hold_bias_term_ratio(n, p, eps, cfg.cls.vc_dim);
        const double k = std::round(1.0 / p);
        if (k >= 2.0 && std::abs(1.0 / p - k) <= 1e-9 * k && n % static_cast<std::size_t>(k) == 0) {
          row.log_variance_ratio = log_kfold_sym_variance_ratio(n, static_cast<std::size_t>(k), eps, cfg.cls.vc_dim);
        }
        table.ratios.push_back(row);
      }
    }
  }
  return table;
}

void ComparisonTable::write_csv(std::ostream& out) const {
  out << "eps";
  for (const PlanReport& p : report.plans) out << ',' << p.label << "_tail," << p.label << "_bound";
  out << '\n';
  const auto& eps_grid = report.config.eps_grid;
  for (std::size_t e = 0; e < eps_grid.size(); ++e) {
    out << format_number(eps_grid[e]);
    for (const PlanReport& p : report.plans) {
      const TailRow& r = p.tails[e];
      out << ',' << format_number(r.empirical_tail) << ',' << (r.bound ? format_number(r.bound->total) : "n/a");
    }
    out << '\n';
  }
}

void ComparisonTable::write_ratios_csv(std::ostream& out) const {
  out << "n,p,eps,log_bsym_over_bhold,log_bsym_over_bhold_terms,log_vk_over_vsym\n";
  for (const RatioRow& r : ratios) {
    out << r.n << ',' << format_number(r.p) << ',' << format_number(r.eps) << ',' << format_number(r.log_bias_ratio)
        << ',' << format_number(r.log_bias_term_ratio) << ','
        << (r.log_variance_ratio ? format_number(*r.log_variance_ratio) : "n/a") << '\n';
  }
}

nlohmann::json ComparisonTable::to_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (const RatioRow& r : ratios) {
    nlohmann::json row{{"n", r.n},
                       {"p", r.p},
                       {"eps", r.eps},
                       {"log_bsym_over_bhold", r.log_bias_ratio},
                       {"log_bsym_over_bhold_terms", r.log_bias_term_ratio}};
    if (r.log_variance_ratio) row["log_vk_over_vsym"] = *r.log_variance_ratio;
    rows.push_back(row);
  }
  return {{"report", report.to_json()}, {"ratios", rows}};
}

}  // namespace cvb
