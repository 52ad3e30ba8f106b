#include "evolab/core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace evolab {

namespace {

constexpr double kShareFloor = -1e-12;
constexpr double kSumDriftTol = 1e-9;
constexpr double kTangentSumTol = 1e-10;

std::string vec_to_string(const Vec& v) {
  std::ostringstream os;
  os << "(";
  for (int i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
  os << ")";
  return os.str();
}

}  // namespace

PopulationState::PopulationState(Vec shares) : shares_(std::move(shares)) {
  if (shares_.size() < 2) throw ValidationError("population state needs n >= 2");
  if (!shares_.allFinite())
    throw ValidationError("population state has non-finite shares " + vec_to_string(shares_));
  const double lo = shares_.minCoeff();
  if (lo < kShareFloor) {
    throw ValidationError("share below clamp tolerance: " + vec_to_string(shares_));
  }
  if (lo < 0.0) shares_ = shares_.cwiseMax(0.0);
  const double sum = shares_.sum();
  if (std::abs(sum - 1.0) > kSumDriftTol) {
    throw ValidationError("shares sum to " + std::to_string(sum) + ", expected 1");
  }
  shares_ /= sum;
}

PopulationState make_state(const Vec& weights, bool strict) {
  if (weights.size() < 2) throw ValidationError("make_state needs n >= 2");
  if (!weights.allFinite()) throw ValidationError("make_state: non-finite weights");
  if (weights.minCoeff() < kShareFloor)
    throw ValidationError("make_state: negative weight " + vec_to_string(weights));
  Vec w = weights.cwiseMax(0.0);
  const double sum = w.sum();
  if (sum <= 0.0) throw ValidationError("make_state: all weights zero");
  if (strict && std::abs(1.0 / sum - 1.0) > 1e-6) {
    throw ValidationError("make_state(strict): normalization would rescale by " +
                          std::to_string(1.0 / sum));
  }
  return PopulationState(Vec(w / sum));
}

PayoffVector::PayoffVector(Vec v) : values_(std::move(v)) {
  if (!values_.allFinite())
    throw ValidationError("payoff vector has non-finite entries " + vec_to_string(values_));
}

TangentVector::TangentVector(Vec v) : values_(std::move(v)) {
  if (!values_.allFinite())
    throw ValidationError("tangent vector has non-finite entries");
  const double scale = std::max(1.0, values_.lpNorm<Eigen::Infinity>());
  if (std::abs(values_.sum()) > kTangentSumTol * scale) {
    throw ValidationError("tangent vector entries sum to " + std::to_string(values_.sum()));
  }
}

ExcessPayoffVector::ExcessPayoffVector(Vec v, const Vec& x) : values_(std::move(v)) {
  if (values_.size() != x.size())
    throw ValidationError("excess payoff dimension mismatch");
  const double scale = std::max(1.0, values_.lpNorm<Eigen::Infinity>());
  if (std::abs(values_.dot(x)) > kTangentSumTol * scale) {
    throw ValidationError("excess payoff not mean-free for its state");
  }
}

Vec excess_payoff(const Vec& p, const Vec& x) {
  if (p.size() != x.size()) throw ValidationError("excess_payoff: dimension mismatch");
  return p.array() - p.dot(x);
}

ExcessPayoffVector excess_payoff(const PayoffVector& p, const PopulationState& x) {
  return ExcessPayoffVector(excess_payoff(p.values(), x.shares()), x.shares());
}

std::vector<int> best_response_set(const Vec& p, double tol) {
  if (tol <= 0.0) throw ValidationError("best_response_set: tol must be positive");
  const double top = p.maxCoeff();
  std::vector<int> out;
  for (int i = 0; i < p.size(); ++i) {
    if (p[i] >= top - tol) out.push_back(i);
  }
  return out;
}

NashReport nash_report(const Vec& payoff_at_x, const Vec& x, double tol) {
  if (payoff_at_x.size() != x.size()) throw ValidationError("nash_report: dimension mismatch");
  const double top = payoff_at_x.maxCoeff();
  NashReport rep;
  for (int i = 0; i < x.size(); ++i) {
    if (x[i] <= tol) continue;
    const double gap = top - payoff_at_x[i];
    rep.worst_gap = std::max(rep.worst_gap, gap);
    if (gap > tol) rep.violating_strategies.push_back(i);
  }
  rep.is_nash = rep.violating_strategies.empty();
  return rep;
}

std::pair<double, double> ternary_coords(const Vec& x) {
  if (x.size() != 3) throw DomainError("ternary_coords requires n = 3");
  return {x[1] + 0.5 * x[2], 0.5 * std::sqrt(3.0) * x[2]};
}

Mat tangent_basis(int n) {
  // Helmert rows: q_k = (1,...,1,-k,0,...,0)/sqrt(k(k+1)).
  Mat q = Mat::Zero(n, n - 1);
  for (int k = 1; k < n; ++k) {
    const double norm = std::sqrt(static_cast<double>(k) * (k + 1));
    for (int i = 0; i < k; ++i) q(i, k - 1) = 1.0 / norm;
    q(k, k - 1) = -static_cast<double>(k) / norm;
  }
  return q;
}

Vec random_interior_state(int n, SplitRng& rng, double margin) {
  Vec e(n);
  for (int i = 0; i < n; ++i) {
    double u = rng.uniform();
    u = std::min(std::max(u, 1e-16), 1.0 - 1e-16);
    e[i] = -std::log1p(-u);
  }
  Vec x = e / e.sum();
  if (margin > 0.0) {
    x = (1.0 - margin) * x + (margin / n) * Vec::Ones(n);
  }
  return x;
}

Vec random_payoff(int n, SplitRng& rng, double scale) {
  Vec p(n);
  for (int i = 0; i < n; ++i) p[i] = rng.uniform(-scale, scale);
  return p;
}

}  // namespace evolab
