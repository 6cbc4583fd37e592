// Copyright 2026 The cvbounds Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software distributed under the License is
// distributed on an "AS IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and limitations under the License.

#include "cvbounds/cv.hpp"

#include <vector>

namespace cvb {

double CvEstimates::generalization_error() const {
  if (!r_tilde_n) throw InvalidArgument("generalization error requires a known distribution");
  return *r_tilde_n;
}

double CvEstimates::cross_validation_risk() const {
  if (!r_bar) throw InvalidArgument("cross-validation risk requires a known distribution");
  return *r_bar;
}

namespace {

struct AtomPass {
  double r_cv;
  std::optional<double> r_bar;
};

AtomPass run_atoms(const ResamplingPlan& plan, const Dataset& d, const HypothesisClass& cls, const Loss& loss,
                   const SyntheticDistribution* dist) {
  if (plan.n() != d.size()) throw InvalidArgument("plan size differs from dataset size");
  const auto order = d.order_by_x();

  CompensatedSum loss_total;  // uniform plans: sum of test-loss sums
  CompensatedSum weighted;    // general plans: sum of prob * test risk
  CompensatedSum risk;
  for (const PlanAtom& atom : plan.atoms()) {
    const Predictor phi = erm_fit_presorted(cls, order, atom.train, d, loss);
    const BinaryVector test = test_vector(atom.train);
    const double test_loss = empirical_loss_sum(phi, test, d, loss);
    loss_total.add(test_loss);
    weighted.add(atom.probability * (test_loss / static_cast<double>(test.count())));
    if (dist != nullptr) risk.add(atom.probability * true_risk(phi, *dist, loss));
  }

  AtomPass out{};
  if (plan.uniform_weights() && plan.equal_test_sizes()) {
    const double denom = static_cast<double>(plan.atoms().size()) * static_cast<double>(plan.test_size());
    out.r_cv = loss_total.value() / denom;
  } else {
    out.r_cv = weighted.value();
  }
  if (dist != nullptr) out.r_bar = risk.value();
  return out;
}

}  // namespace

double cross_validate(const ResamplingPlan& plan, const Dataset& d, const HypothesisClass& cls, const Loss& loss) {
  return run_atoms(plan, d, cls, loss, nullptr).r_cv;
}

CvEstimates estimates(const ResamplingPlan& plan, const Dataset& d, const HypothesisClass& cls, const Loss& loss,
                      const SyntheticDistribution* dist) {
  const AtomPass pass = run_atoms(plan, d, cls, loss, dist);
  const BinaryVector all = ones(d.size());
  const Predictor full = erm_fit(cls, all, d, loss);

  CvEstimates est;
  est.r_cv = pass.r_cv;
  est.r_hat_n = empirical_loss_sum(full, all, d, loss) / static_cast<double>(d.size());
  if (dist != nullptr) {
    est.r_tilde_n = true_risk(full, *dist, loss);
    est.r_bar = pass.r_bar;
  }
  return est;
}

}  // namespace cvb
