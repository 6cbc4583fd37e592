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

#include <optional>

#include "cvbounds/learners.hpp"
#include "cvbounds/resampling.hpp"

namespace cvb {

/// Resubstitution, cross-validation, generalization and cross-validation-risk
/// values for one learning sample.
struct CvEstimates {
  double r_hat_n = 0.0;               ///< training error of the full-sample ERM
  double r_cv = 0.0;                  ///< E_{V^tr} test error of the fold ERMs
  std::optional<double> r_tilde_n;    ///< true risk of the full-sample ERM
  std::optional<double> r_bar;        ///< E_{V^tr} true risk of the fold ERMs

  /// r_tilde_n, throwing if no distribution was supplied.
  [[nodiscard]] double generalization_error() const;
  /// r_bar, throwing if no distribution was supplied.
  [[nodiscard]] double cross_validation_risk() const;
};

/// Exact expectation over the plan's atoms of the test-set error of the ERM
/// fitted on each training set.
///
/// Uniform-weight plans are reduced as (sum of test-loss counts) / (atoms * np),
/// a single correctly rounded division; other plans use a compensated sum in
/// atom order.
double cross_validate(const ResamplingPlan& plan, const Dataset& d, const HypothesisClass& cls, const Loss& loss);

/// All four quantities; r_tilde_n and r_bar are filled only when `dist` is given.
CvEstimates estimates(const ResamplingPlan& plan, const Dataset& d, const HypothesisClass& cls, const Loss& loss,
                      const SyntheticDistribution* dist = nullptr);

}  // namespace cvb
