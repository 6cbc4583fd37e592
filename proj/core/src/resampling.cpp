// Copyright 2026 The cvbounds Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software distributed under the License is
// distributed on an "AS IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and limitations under the License.

#include "cvbounds/resampling.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <utility>

#include "cvbounds/rng.hpp"

namespace cvb {

namespace detail {
struct PlanFactory {
  static ResamplingPlan build(std::size_t n, PlanKind kind, std::vector<PlanAtom> atoms, bool allow_unequal = false) {
    return ResamplingPlan(n, kind, std::move(atoms), allow_unequal);
  }
};
}  // namespace detail

namespace {

constexpr double kProbabilityTolerance = 1e-12;

constexpr std::array<std::pair<PlanKind, std::string_view>, 6> kKindNames{{
    {PlanKind::k_fold, "k-fold"},
    {PlanKind::leave_one_out, "leave-one-out"},
    {PlanKind::leave_v_out_exhaustive, "leave-v-out-exhaustive"},
    {PlanKind::leave_v_out_montecarlo, "leave-v-out-montecarlo"},
    {PlanKind::hold_out, "hold-out"},
    {PlanKind::custom, "custom"},
}};

// Training vector with zeros exactly on `test` (indices must be < n).
BinaryVector train_from_test(std::size_t n, std::span<const std::size_t> test) {
  std::vector<std::uint8_t> bits(n, 1);
  for (std::size_t i : test) bits[i] = 0;
  return BinaryVector(std::move(bits));
}

}  // namespace

// --- BinaryVector -----------------------------------------------------------

BinaryVector::BinaryVector(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
  for (std::uint8_t b : bits_) {
    if (b > 1) throw InvalidArgument("binary vector entries must be 0 or 1");
    count_ += b;
  }
  if (count_ == 0) throw InvalidArgument("binary vector must select at least one index");
}

BinaryVector BinaryVector::from_string(std::string_view bits) {
  std::vector<std::uint8_t> out;
  out.reserve(bits.size());
  for (char c : bits) {
    if (c != '0' && c != '1') throw InvalidArgument("binary vector string may only contain '0' and '1'");
    out.push_back(c == '1' ? 1 : 0);
  }
  return BinaryVector(std::move(out));
}

std::string BinaryVector::to_string() const {
  std::string s(bits_.size(), '0');
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    if (bits_[i] != 0) s[i] = '1';
  }
  return s;
}

BinaryVector ones(std::size_t n) {
  if (n == 0) throw InvalidArgument("1_n requires n >= 1");
  return BinaryVector(std::vector<std::uint8_t>(n, 1));
}

BinaryVector test_vector(const BinaryVector& train) {
  if (train.count() == train.size()) throw InvalidArgument("training vector selects every index: empty test set");
  std::vector<std::uint8_t> bits(train.size());
  for (std::size_t i = 0; i < bits.size(); ++i) bits[i] = train[i] ? 0 : 1;
  return BinaryVector(std::move(bits));
}

std::string_view to_string(PlanKind kind) noexcept {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "custom";
}

PlanKind plan_kind_from_string(std::string_view name) {
  for (const auto& [k, label] : kKindNames) {
    if (label == name) return k;
  }
  throw InvalidArgument("unknown plan kind: " + std::string(name));
}

// --- ResamplingPlan ---------------------------------------------------------

ResamplingPlan::ResamplingPlan(std::size_t n, PlanKind kind, std::vector<PlanAtom> atoms, bool allow_unequal)
    : n_(n), kind_(kind), atoms_(std::move(atoms)) {
  if (n_ < 2) throw InvalidArgument("resampling plan requires n >= 2");
  if (atoms_.empty()) throw InvalidArgument("resampling plan requires at least one atom");

  CompensatedSum total;
  CompensatedSum weighted_test;
  const std::size_t first_test = n_ - atoms_.front().train.count();
  for (const PlanAtom& atom : atoms_) {
    if (atom.train.size() != n_) throw InvalidArgument("atom length differs from plan size n");
    if (!(atom.probability > 0.0) || !std::isfinite(atom.probability)) {
      throw InvalidArgument("atom probabilities must be positive and finite");
    }
    const std::size_t test = n_ - atom.train.count();
    if (test == 0) throw InvalidArgument("atom has an empty test set");
    if (test != first_test) equal_test_sizes_ = false;
    if (atom.probability != atoms_.front().probability) uniform_weights_ = false;
    total.add(atom.probability);
    weighted_test.add(atom.probability * static_cast<double>(test));
  }
  if (std::abs(total.value() - 1.0) > kProbabilityTolerance) {
    throw InvalidArgument("atom probabilities must sum to 1");
  }
  if (!equal_test_sizes_ && !allow_unequal) {
    throw InvalidArgument("atoms have unequal test sizes (set allow_unequal_test_sizes to accept)");
  }
  test_size_ = first_test;
  p_ = equal_test_sizes_ ? static_cast<double>(first_test) / static_cast<double>(n_)
                         : weighted_test.value() / static_cast<double>(n_);
}

ResamplingPlan ResamplingPlan::custom(std::size_t n, std::vector<PlanAtom> atoms, CustomOptions options) {
  return ResamplingPlan(n, PlanKind::custom, std::move(atoms), options.allow_unequal_test_sizes);
}

std::vector<double> ResamplingPlan::inclusion_probabilities() const {
  std::vector<CompensatedSum> acc(n_);
  for (const PlanAtom& atom : atoms_) {
    for (std::size_t i = 0; i < n_; ++i) {
      if (atom.train[i]) acc[i].add(atom.probability);
    }
  }
  std::vector<double> out(n_);
  std::transform(acc.begin(), acc.end(), out.begin(), [](const CompensatedSum& s) { return s.value(); });
  return out;
}

bool ResamplingPlan::is_symmetric(double tolerance) const {
  const auto incl = inclusion_probabilities();
  const auto [lo, hi] = std::minmax_element(incl.begin(), incl.end());
  return *hi - *lo <= tolerance;
}

bool ResamplingPlan::same_distribution(const ResamplingPlan& other) const {
  if (n_ != other.n_ || atoms_.size() != other.atoms_.size()) return false;
  auto sorted = [](std::span<const PlanAtom> atoms) {
    std::vector<std::pair<std::string, double>> v;
    v.reserve(atoms.size());
    for (const auto& a : atoms) v.emplace_back(a.train.to_string(), a.probability);
    std::sort(v.begin(), v.end());
    return v;
  };
  const auto a = sorted(atoms_);
  const auto b = sorted(other.atoms_);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].first != b[i].first || std::abs(a[i].second - b[i].second) > 1e-15) return false;
  }
  return true;
}

nlohmann::json ResamplingPlan::to_json() const {
  nlohmann::json atoms = nlohmann::json::array();
  for (const PlanAtom& atom : atoms_) {
    atoms.push_back({{"bits", atom.train.to_string()}, {"prob", atom.probability}});
  }
  return {{"n", n_}, {"p", p_}, {"kind", std::string(to_string(kind_))}, {"atoms", std::move(atoms)}};
}

ResamplingPlan ResamplingPlan::from_json(const nlohmann::json& j) {
  try {
    const auto n = j.at("n").get<std::size_t>();
    const PlanKind kind = plan_kind_from_string(j.at("kind").get<std::string>());
    std::vector<PlanAtom> atoms;
    for (const auto& a : j.at("atoms")) {
      atoms.push_back({BinaryVector::from_string(a.at("bits").get<std::string>()), a.at("prob").get<double>()});
    }
    ResamplingPlan plan(n, kind, std::move(atoms), kind == PlanKind::custom);
    if (j.contains("p") && std::abs(j.at("p").get<double>() - plan.p()) > 1e-12) {
      throw InvalidArgument("plan JSON field p disagrees with its atoms");
    }
    return plan;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed plan JSON: ") + e.what());
  }
}

// --- factories --------------------------------------------------------------

ResamplingPlan make_kfold(std::size_t n, std::size_t k, std::optional<std::uint64_t> shuffle_seed) {
  if (k < 2) throw InvalidArgument("k-fold requires k >= 2");
  if (n % k != 0) throw InvalidArgument("k-fold requires n divisible by k");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  if (shuffle_seed) {
    CounterRng rng(*shuffle_seed);
    for (std::size_t i = n; i > 1; --i) {
      std::swap(order[i - 1], order[rng.uniform_index(i)]);
    }
  }

  const std::size_t fold = n / k;
  const double prob = 1.0 / static_cast<double>(k);
  std::vector<PlanAtom> atoms;
  atoms.reserve(k);
  for (std::size_t j = 0; j < k; ++j) {
    std::span<const std::size_t> block(order.data() + j * fold, fold);
    atoms.push_back({train_from_test(n, block), prob});
  }
  return detail::PlanFactory::build(n, PlanKind::k_fold, std::move(atoms));
}

ResamplingPlan make_loo(std::size_t n) {
  if (n < 2) throw InvalidArgument("leave-one-out requires n >= 2");
  const double prob = 1.0 / static_cast<double>(n);
  std::vector<PlanAtom> atoms;
  atoms.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::array<std::size_t, 1> test{i};
    atoms.push_back({train_from_test(n, test), prob});
  }
  return detail::PlanFactory::build(n, PlanKind::leave_one_out, std::move(atoms));
}

std::optional<std::uint64_t> binomial_capped(std::size_t n, std::size_t k, std::uint64_t limit) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  // C(n, i) = C(n, i-1) * m / i with m = n-k+i. Dividing out g = gcd(C, i)
  // first leaves i/g | m, so every step stays exact in 64 bits.
  std::uint64_t c = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    const std::uint64_t m = n - k + i;
    const std::uint64_t g = std::gcd(c, std::uint64_t{i});
    const std::uint64_t factor = m / (i / g);
    c /= g;
    if (c > limit / factor) return std::nullopt;
    c *= factor;
  }
  return c;
}

ResamplingPlan make_leave_v_out(std::size_t n, std::size_t v, const LeaveVOutMode& mode) {
  if (v < 1 || v >= n) throw InvalidArgument("leave-v-out requires 1 <= v < n");

  if (const auto* ex = std::get_if<LeaveVOutExhaustive>(&mode.mode)) {
    const auto count = binomial_capped(n, v, ex->cap);
    if (!count) throw InvalidArgument("C(n, v) exceeds the exhaustive enumeration cap");
    const double prob = 1.0 / static_cast<double>(*count);
    std::vector<PlanAtom> atoms;
    atoms.reserve(*count);
    std::vector<std::size_t> subset(v);
    std::iota(subset.begin(), subset.end(), std::size_t{0});
    for (;;) {
      atoms.push_back({train_from_test(n, subset), prob});
      // Next combination in lexicographic order.
      std::size_t i = v;
      while (i > 0 && subset[i - 1] == n - v + (i - 1)) --i;
      if (i == 0) break;
      ++subset[i - 1];
      for (std::size_t j = i; j < v; ++j) subset[j] = subset[j - 1] + 1;
    }
    return detail::PlanFactory::build(n, PlanKind::leave_v_out_exhaustive, std::move(atoms));
  }

  const auto& mc = std::get<LeaveVOutMonteCarlo>(mode.mode);
  if (mc.draws == 0) throw InvalidArgument("Monte Carlo leave-v-out requires at least one draw");
  CounterRng rng(mc.seed);
  const double prob = 1.0 / static_cast<double>(mc.draws);
  std::vector<PlanAtom> atoms;
  atoms.reserve(mc.draws);
  std::vector<std::size_t> pool(n);
  for (std::size_t d = 0; d < mc.draws; ++d) {
    // Partial Fisher-Yates: the first v slots form a uniform v-subset.
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    for (std::size_t i = 0; i < v; ++i) {
      std::swap(pool[i], pool[i + rng.uniform_index(n - i)]);
    }
    atoms.push_back({train_from_test(n, std::span<const std::size_t>(pool.data(), v)), prob});
  }
  return detail::PlanFactory::build(n, PlanKind::leave_v_out_montecarlo, std::move(atoms));
}

ResamplingPlan make_holdout(std::size_t n, double p, std::span<const std::size_t> test_indices) {
  if (!(p > 0.0 && p < 1.0)) throw InvalidArgument("hold-out requires 0 < p < 1");
  const double np = static_cast<double>(n) * p;
  if (std::abs(np - std::round(np)) > 1e-9) throw InvalidArgument("hold-out requires n*p to be an integer");
  const auto test_size = static_cast<std::size_t>(std::llround(np));
  std::vector<std::size_t> sorted(test_indices.begin(), test_indices.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw InvalidArgument("hold-out test indices must be distinct");
  }
  if (sorted.size() != test_size) throw InvalidArgument("hold-out test set size differs from n*p");
  if (!sorted.empty() && sorted.back() >= n) throw InvalidArgument("hold-out test index out of range");
  std::vector<PlanAtom> atoms;
  atoms.push_back({train_from_test(n, sorted), 1.0});
  return detail::PlanFactory::build(n, PlanKind::hold_out, std::move(atoms));
}

}  // namespace cvb
