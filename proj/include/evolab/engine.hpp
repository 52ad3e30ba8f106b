#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "evolab/core.hpp"
#include "evolab/edm.hpp"
#include "evolab/games.hpp"
#include "evolab/report.hpp"

namespace evolab::sim {

// External payoff signal with an analytic time derivative.
struct PayoffSignal {
  std::function<Vec(double)> value;
  std::function<Vec(double)> rate;
};

PayoffSignal constant_payoff(Vec p);

struct TrigTerm {
  Vec amplitude;
  double omega = 1.0;
  double phase = 0.0;
};

// p(t) = base + sum_k amplitude_k sin(omega_k t + phase_k).
PayoffSignal trig_payoff(Vec base, std::vector<TrigTerm> terms);
PayoffSignal random_trig_payoff(int n, int terms, double amplitude, double omega_lo,
                                double omega_hi, SplitRng& rng);

struct ScalarColumn {
  std::string name;
  std::function<double(double t, const Vec& p, const Vec& x, const Vec& v)> eval;
};

// Closed-loop wiring for an integration run. `kind` selects how the payoff
// evolves: an external signal, p = F(x), the low-pass filter
// dp = lambda (F(x) - p), or the mean-removed filter dp = F(x) - mean(p) 1.
struct LoopConfig {
  enum class Kind { open, static_game, smoothed, mean_removed };

  Kind kind = Kind::static_game;
  PayoffSignal signal;         // open
  games::GameDescriptor game;  // static_game / smoothed / mean_removed
  double lambda = 1.0;         // smoothed
  Vec x0;
  Vec p0;  // smoothed kinds; defaults to F(x0)
  double dt = 1e-3;
  double T = 10.0;
  int record_stride = 1;
  std::vector<ScalarColumn> columns;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<Vec> states;
  std::vector<Vec> payoffs;
  std::vector<Vec> velocities;    // field evaluations at the samples
  std::vector<Vec> payoff_rates;  // empty when the loop cannot provide dp/dt
  std::vector<std::string> scalar_names;
  std::vector<std::vector<double>> scalars;  // [column][sample]

  bool truncated = false;
  std::string error;

  // integration diagnostics
  double worst_min_share = 0.0;  // most negative share seen before clamping
  double worst_sum_drift = 0.0;  // max |sum - 1| before renormalizing
  long column_errors = 0;        // scalar column evaluations that failed (recorded as NaN)

  std::size_t size() const { return times.size(); }
  int n() const { return states.empty() ? 0 : static_cast<int>(states.front().size()); }

  // "t,x1..xn,p1..pn,v1..vn[,scalar columns]", 17 significant digits, LF.
  void write_csv(std::ostream& os) const;
};

// Classical fixed-step RK4 on the loop's combined state. After every step the
// state is clamped and renormalized per the simplex policy; interior-only
// runs retry a violating step at dt/2 down to dt/32 before giving up. Field
// domain errors and NaNs truncate the trajectory and set the error marker.
Trajectory integrate(const edm::EdmDescriptor& dyn, const LoopConfig& loop);

struct Convergence {
  bool converged = false;
  double first_hit = -1.0;
};

// True when every sample in the trailing `window` seconds is within tol of
// the target; first_hit is the earliest time from which the trajectory stays
// within tol to the end.
Convergence converged(const Trajectory& traj, const Vec& target, double tol, double window);

// Verifies a recorded scalar column is monotone (direction -1 nonincreasing,
// +1 nondecreasing) up to a per-step tolerance.
CheckReport scalar_monotone(const Trajectory& traj, const std::string& column, int direction,
                            double tol);

}  // namespace evolab::sim
