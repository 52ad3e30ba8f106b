#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "evolab/rng.hpp"

namespace evolab {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Bad input to a constructor or operation (dimension mismatch, broken
// invariant, unresolvable name).
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Evaluation requested outside a function's domain (boundary state for a
// log-based map, n != 3 for ternary embedding).
class DomainError : public std::runtime_error {
 public:
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// Iterative solver failure or mid-run numeric breakdown.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

// Strategy-share distribution: nonnegative entries summing to one, n >= 2.
// Shares in [-1e-12, 0) are treated as integrator dust: zeroed, then the
// vector is renormalized. Anything more negative is rejected.
class PopulationState {
 public:
  explicit PopulationState(Vec shares);

  const Vec& shares() const { return shares_; }
  int n() const { return static_cast<int>(shares_.size()); }
  double operator[](Eigen::Index i) const { return shares_[i]; }
  bool is_interior(double margin = 0.0) const { return shares_.minCoeff() > margin; }

 private:
  Vec shares_;
};

// Normalizes arbitrary nonnegative weights into a PopulationState. With
// strict=true, inputs whose entries the normalization would move by more
// than 1e-6 relative are rejected instead of silently rescaled.
PopulationState make_state(const Vec& weights, bool strict = false);

struct PayoffVector {
  explicit PayoffVector(Vec v);
  const Vec& values() const { return values_; }
  int n() const { return static_cast<int>(values_.size()); }

 private:
  Vec values_;
};

// Vector in the simplex tangent space: entries sum to zero (within 1e-10,
// scaled by the max-norm of the vector).
struct TangentVector {
  explicit TangentVector(Vec v);
  const Vec& values() const { return values_; }

 private:
  Vec values_;
};

// Payoff relative to the population average; x-weighted mean is zero by
// construction for the state it was built from.
struct ExcessPayoffVector {
  ExcessPayoffVector(Vec v, const Vec& x);
  const Vec& values() const { return values_; }

 private:
  Vec values_;
};

// p - (p'x) 1.
Vec excess_payoff(const Vec& p, const Vec& x);
ExcessPayoffVector excess_payoff(const PayoffVector& p, const PopulationState& x);

// Indices i with p_i >= max_j p_j - tol, ascending.
std::vector<int> best_response_set(const Vec& p, double tol = 1e-9);

struct NashReport {
  bool is_nash = false;
  std::vector<int> violating_strategies;  // supported but not best responses
  double worst_gap = 0.0;                 // max over support of (max_j p_j - p_i)
};

// Tests the support condition at a single state, given the payoff there:
// every strategy with share > tol must be within tol of the best payoff.
NashReport nash_report(const Vec& payoff_at_x, const Vec& x, double tol = 1e-9);

// Equilateral-triangle embedding for n=3: u = x2 + x3/2, v = (sqrt(3)/2) x3.
std::pair<double, double> ternary_coords(const Vec& x);

// Orthonormal basis of the tangent space {z : sum z = 0}, as columns of an
// n x (n-1) matrix.
Mat tangent_basis(int n);

// Random interior state via exponential spacings, pulled toward the centroid
// by `margin` so every share is at least margin/n.
Vec random_interior_state(int n, SplitRng& rng, double margin = 0.0);

// Component-wise uniform payoff in [-scale, scale].
Vec random_payoff(int n, SplitRng& rng, double scale = 1.0);

}  // namespace evolab
