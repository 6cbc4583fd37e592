// Copyright 2026 The cvbounds Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software distributed under the License is
// distributed on an "AS IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and limitations under the License.

#include "cvbounds/learners.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>

namespace cvb {

// --- Dataset ----------------------------------------------------------------

Dataset::Dataset(std::vector<Sample> samples, LabelDomain domain) : samples_(std::move(samples)), domain_(domain) {
  if (samples_.empty()) throw InvalidArgument("dataset requires n >= 1");
  for (const Sample& s : samples_) {
    if (!std::isfinite(s.x)) throw InvalidArgument("dataset feature is not finite");
    const bool ok = domain_ == LabelDomain::binary ? (s.y == 0.0 || s.y == 1.0) : (s.y >= 0.0 && s.y <= 1.0);
    if (!ok) throw InvalidArgument("dataset label outside its declared codomain");
  }
}

std::vector<std::size_t> Dataset::order_by_x() const {
  std::vector<std::size_t> order(samples_.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [this](std::size_t a, std::size_t b) { return samples_[a].x < samples_[b].x; });
  return order;
}

void Dataset::write_csv(std::ostream& out) const {
  out << "x,y\n";
  char buf[64];
  for (const Sample& s : samples_) {
    auto r = std::to_chars(buf, buf + sizeof buf, s.x, std::chars_format::general, 17);
    out.write(buf, r.ptr - buf);
    out << ',';
    r = std::to_chars(buf, buf + sizeof buf, s.y, std::chars_format::general, 17);
    out.write(buf, r.ptr - buf);
    out << '\n';
  }
}

Dataset Dataset::read_csv(std::istream& in, LabelDomain domain) {
  std::string line;
  if (!std::getline(in, line)) throw InvalidArgument("dataset CSV is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "x,y") throw InvalidArgument("dataset CSV header must be \"x,y\"");

  auto parse = [](std::string_view field, std::size_t row) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc{} || ptr != field.data() + field.size()) {
      throw InvalidArgument("dataset CSV row " + std::to_string(row) + ": bad number");
    }
    return v;
  };

  std::vector<Sample> samples;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos) {
      throw InvalidArgument("dataset CSV row " + std::to_string(row) + ": expected two fields");
    }
    const std::string_view sv(line);
    samples.push_back({parse(sv.substr(0, comma), row), parse(sv.substr(comma + 1), row)});
  }
  return Dataset(std::move(samples), domain);
}

// --- Loss / predictors --------------------------------------------------------

double Loss::operator()(double y, double prediction) const noexcept {
  switch (kind) {
    case LossKind::zero_one:
      return y == prediction ? 0.0 : 1.0;
    case LossKind::clipped_absolute:
      return std::min(1.0, std::abs(y - prediction));
  }
  return 1.0;
}

std::string_view to_string(ClassKind kind) noexcept {
  return kind == ClassKind::threshold ? "threshold" : "interval";
}

ClassKind class_kind_from_string(std::string_view name) {
  if (name == "threshold") return ClassKind::threshold;
  if (name == "interval") return ClassKind::interval;
  throw InvalidArgument("unknown hypothesis class: " + std::string(name));
}

double Predictor::operator()(double x) const noexcept {
  const bool inside = kind == ClassKind::threshold ? x >= lower : (x >= lower && x < upper);
  const bool label = orientation == Orientation::positive ? inside : !inside;
  return label ? 1.0 : 0.0;
}

double empirical_loss_sum(const Predictor& phi, const BinaryVector& v, const Dataset& d, const Loss& loss) {
  if (v.size() != d.size()) throw InvalidArgument("binary vector length differs from dataset size");
  CompensatedSum acc;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (v[i]) acc.add(loss(d[i].y, phi(d[i].x)));
  }
  return acc.value();
}

double empirical_risk(const Predictor& phi, const BinaryVector& v, const Dataset& d, const Loss& loss) {
  return empirical_loss_sum(phi, v, d, loss) / static_cast<double>(v.count());
}

// --- exact ERM ----------------------------------------------------------------

namespace {

struct Group {
  double x;
  double cost_zero;  // loss if the group is labelled 0
  double cost_one;   // loss if the group is labelled 1
};

// Midpoint m with a < m <= b, so x = a falls below and x = b on or above.
double separating_cut(double a, double b) {
  const double m = 0.5 * a + 0.5 * b;
  return m > a ? m : b;
}

}  // namespace

Predictor erm_fit_presorted(const HypothesisClass& cls, std::span<const std::size_t> order_by_x,
                            const BinaryVector& v, const Dataset& d, const Loss& loss) {
  if (v.size() != d.size() || order_by_x.size() != d.size()) {
    throw InvalidArgument("binary vector length differs from dataset size");
  }
  if (loss.kind != LossKind::zero_one) throw InvalidArgument("exact ERM is only supported for zero-one loss");

  std::vector<Group> groups;
  groups.reserve(v.count());
  for (std::size_t idx : order_by_x) {
    if (!v[idx]) continue;
    const Sample& s = d[idx];
    if (groups.empty() || groups.back().x != s.x) groups.push_back({s.x, 0.0, 0.0});
    groups.back().cost_zero += loss(s.y, 0.0);
    groups.back().cost_one += loss(s.y, 1.0);
  }
  if (cls.orientation == Orientation::negative) {
    for (Group& g : groups) std::swap(g.cost_zero, g.cost_one);
  }

  // cuts[c] separates groups [0, c) from [c, G).
  const std::size_t G = groups.size();
  std::vector<double> cuts(G + 1);
  const double x_min = groups.front().x;
  const double x_max = groups.back().x;
  cuts[0] = cls.domain_lo <= x_min ? cls.domain_lo : x_min;
  cuts[G] = cls.domain_hi > x_max ? cls.domain_hi : std::nextafter(x_max, std::numeric_limits<double>::infinity());
  for (std::size_t c = 1; c < G; ++c) cuts[c] = separating_cut(groups[c - 1].x, groups[c].x);

  if (cls.kind == ClassKind::threshold) {
    double err = 0.0;
    for (const Group& g : groups) err += g.cost_one;
    double best = err;
    std::size_t best_cut = 0;
    for (std::size_t c = 1; c <= G; ++c) {
      err += groups[c - 1].cost_zero - groups[c - 1].cost_one;
      if (err < best) {
        best = err;
        best_cut = c;
      }
    }
    return Predictor::threshold(cuts[best_cut], cls.orientation);
  }

  // Interval [cuts[i], cuts[j + 1]) labels groups i..j as 1.
  double outside = 0.0;
  for (const Group& g : groups) outside += g.cost_zero;
  double best = std::numeric_limits<double>::infinity();
  std::size_t best_i = 0;
  std::size_t best_j = 0;
  for (std::size_t i = 0; i < G; ++i) {
    double err = outside;
    for (std::size_t j = i; j < G; ++j) {
      err += groups[j].cost_one - groups[j].cost_zero;
      if (err < best) {
        best = err;
        best_i = i;
        best_j = j;
      }
    }
  }
  if (outside < best) return Predictor::interval(cuts[G], cuts[G], cls.orientation);
  return Predictor::interval(cuts[best_i], cuts[best_j + 1], cls.orientation);
}

Predictor erm_fit(const HypothesisClass& cls, const BinaryVector& v, const Dataset& d, const Loss& loss) {
  const auto order = d.order_by_x();
  return erm_fit_presorted(cls, order, v, d, loss);
}

// --- synthetic distribution -----------------------------------------------------

SyntheticDistribution::SyntheticDistribution(double theta, double noise) : theta_star(theta), eta(noise) {
  if (!(theta_star >= 0.0 && theta_star <= 1.0)) throw InvalidArgument("theta_star must lie in [0, 1]");
  if (!(eta >= 0.0 && eta < 0.5)) throw InvalidArgument("noise rate eta must lie in [0, 1/2)");
}

Dataset SyntheticDistribution::sample(std::size_t n, CounterRng& rng) const {
  std::vector<Sample> samples;
  samples.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = rng.uniform01();
    const bool flip = rng.uniform01() < eta;
    const bool clean = x >= theta_star;
    samples.push_back({x, (clean != flip) ? 1.0 : 0.0});
  }
  return Dataset(std::move(samples));
}

double true_risk(const Predictor& phi, const SyntheticDistribution& dist, const Loss& loss) {
  if (loss.kind != LossKind::zero_one) throw InvalidArgument("closed-form risk requires zero-one loss");
  const double theta = dist.theta_star;
  // Measure of {phi_positive(X) != 1{X >= theta}} for X ~ U[0,1].
  double disagreement = 0.0;
  if (phi.kind == ClassKind::threshold) {
    disagreement = std::abs(std::clamp(phi.lower, 0.0, 1.0) - theta);
  } else {
    const double a = std::clamp(phi.lower, 0.0, 1.0);
    const double b = std::clamp(phi.upper, 0.0, 1.0);
    const double inside = std::max(0.0, b - a);
    const double overlap = std::max(0.0, b - std::max(a, theta));
    disagreement = inside + (1.0 - theta) - 2.0 * overlap;
  }
  if (phi.orientation == Orientation::negative) disagreement = 1.0 - disagreement;
  return dist.eta + (1.0 - 2.0 * dist.eta) * disagreement;
}

ShatterBound shatter_bound(std::size_t n, std::size_t vc) {
  if (n < 1 || vc < 1) throw InvalidArgument("shatter bound requires n >= 1 and vc >= 1");
  const double log_value = static_cast<double>(vc) * std::log1p(static_cast<double>(n));
  const double value = std::pow(static_cast<double>(n) + 1.0, static_cast<double>(vc));
  if (!std::isfinite(value)) return {log_value, std::nullopt};
  return {log_value, value};
}

}  // namespace cvb
