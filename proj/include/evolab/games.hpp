#pragma once

#include <atomic>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "evolab/core.hpp"

namespace evolab::games {

// A static payoff map F: simplex -> R^n plus optional derivative access and
// metadata. Descriptors are immutable and payoff evaluation is pure; the
// floor_events counter only instruments log-floor hits near the boundary.
struct GameDescriptor {
  std::string name;
  int n = 3;  // number of strategies
  std::function<Vec(const Vec&)> payoff;
  std::function<Mat(const Vec&)> jacobian;  // empty when unavailable
  std::vector<Vec> known_equilibria;
  bool interior_only = false;
  std::shared_ptr<std::atomic<long>> floor_events;
};

// C^1 cutoff profile: 1 below r_inner, 0 above r_outer, strictly decreasing
// smoothstep in between. Thresholds are squared radii.
class BumpFunction {
 public:
  BumpFunction(double r_inner, double r_outer);
  static BumpFunction from_radii(double radius_inner, double radius_outer);

  double operator()(double r) const;
  double r_inner() const { return r_inner_; }
  double r_outer() const { return r_outer_; }

 private:
  double r_inner_;
  double r_outer_;
};

inline constexpr double kHypnodiskRadiusInner = 0.1;
inline constexpr double kHypnodiskRadiusOuter = 0.4;

// Three-strategy payoff that interpolates between a coordination game inside
// the inner disk around the centroid and an anti-coordination game outside
// the outer circle, rotating through the annulus in between.
Vec hypnodisk_payoff(const Vec& x, const BumpFunction& b);
Vec hypnodisk_payoff(const Vec& x);

// Hypnodisk plus the entropy gradient term (-ln x_i - 1); interior only.
Vec perturbed_hypnodisk_payoff(const Vec& x,
                               const std::shared_ptr<std::atomic<long>>& floor_events = nullptr);

GameDescriptor make_hypnodisk(double radius_inner = kHypnodiskRadiusInner,
                              double radius_outer = kHypnodiskRadiusOuter);
GameDescriptor make_perturbed_hypnodisk(double radius_inner = kHypnodiskRadiusInner,
                                        double radius_outer = kHypnodiskRadiusOuter);

// F(x) = -(x - x_o); unique Nash equilibrium at x_o.
GameDescriptor make_anti_coordination(const Vec& x_o);

// Payoffs F(x) = A x + b.
GameDescriptor make_linear(const Mat& a, const Vec& b);

// Gradient of the perturbed concave potential
//   ftilde(x) = -(quad/2) ||x||^2 + sum_i x_i ln(a_i / x_i),
// i.e. payoff_i = -quad x_i + ln a_i - ln x_i - 1. Interior only.
struct PotentialGame {
  GameDescriptor game;
  std::function<double(const Vec&)> ftilde;
  std::function<Vec(const Vec&)> ftilde_grad;
  std::function<Mat(const Vec&)> ftilde_hessian;
  double concavity = 0.0;  // modulus of -ftilde on the tangent space
};
PotentialGame make_perturbed_potential(double quad, const Vec& a);

// Hypnodisk lifted to n >= 3 strategies by aggregating strategies 3..n into
// the third coordinate; components 3..n share one payoff. `scale` multiplies
// the whole payoff (used to normalize the Jacobian bound).
GameDescriptor make_extended_hypnodisk(int n, double scale = 1.0,
                                       double radius_inner = kHypnodiskRadiusInner,
                                       double radius_outer = kHypnodiskRadiusOuter);

struct JacobianBound {
  double epsilon = 0.0;  // max sampled eigenvalue of the tangent-restricted symmetric part
  long skipped = 0;      // samples dropped because evaluation failed
  long samples = 0;
};

// Sampled lower bound on sup_x lambda_max(Q' sym(DF(x)) Q). Uses the game's
// Jacobian when present, otherwise central differences along tangent
// directions (step h), at seeded interior states.
JacobianBound jacobian_bound_estimate(const GameDescriptor& f, int samples,
                                      std::uint64_t seed = 0x9a0b5ce1, double h = 1e-6);

NashReport is_nash(const GameDescriptor& f, const PopulationState& x, double tol = 1e-9);

}  // namespace evolab::games
