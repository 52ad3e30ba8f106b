#include "evolab/games.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

namespace evolab::games {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kLogFloor = 1e-12;

double guarded_log(double xi, const std::shared_ptr<std::atomic<long>>& floor_events) {
  if (xi <= 0.0) throw DomainError("log-based payoff evaluated at boundary state");
  if (xi < kLogFloor) {
    if (floor_events) floor_events->fetch_add(1, std::memory_order_relaxed);
    xi = kLogFloor;
  }
  return std::log(xi);
}

}  // namespace

BumpFunction::BumpFunction(double r_inner, double r_outer)
    : r_inner_(r_inner), r_outer_(r_outer) {
  if (!(r_inner > 0.0) || !(r_outer > r_inner))
    throw ValidationError("bump function needs 0 < r_inner < r_outer");
}

BumpFunction BumpFunction::from_radii(double radius_inner, double radius_outer) {
  return BumpFunction(radius_inner * radius_inner, radius_outer * radius_outer);
}

double BumpFunction::operator()(double r) const {
  if (r <= r_inner_) return 1.0;
  if (r >= r_outer_) return 0.0;
  const double u = (r - r_inner_) / (r_outer_ - r_inner_);
  return 1.0 - u * u * (3.0 - 2.0 * u);
}

Vec hypnodisk_payoff(const Vec& x, const BumpFunction& b) {
  if (x.size() != 3) throw DomainError("hypnodisk payoff requires n = 3");
  Vec dev = x.array() - 1.0 / 3.0;
  const double r = dev.squaredNorm();
  const double theta = kPi * (1.0 - b(r));
  Vec rot(3);
  rot << x[1] - x[2], x[2] - x[0], x[0] - x[1];
  return std::cos(theta) * dev + (std::sqrt(3.0) / 3.0) * std::sin(theta) * rot +
         Vec::Constant(3, 1.0 / 3.0);
}

Vec hypnodisk_payoff(const Vec& x) {
  static const BumpFunction b =
      BumpFunction::from_radii(kHypnodiskRadiusInner, kHypnodiskRadiusOuter);
  return hypnodisk_payoff(x, b);
}

Vec perturbed_hypnodisk_payoff(const Vec& x,
                               const std::shared_ptr<std::atomic<long>>& floor_events) {
  Vec p = hypnodisk_payoff(x);
  for (int i = 0; i < 3; ++i) p[i] += -guarded_log(x[i], floor_events) - 1.0;
  return p;
}

GameDescriptor make_hypnodisk(double radius_inner, double radius_outer) {
  BumpFunction b = BumpFunction::from_radii(radius_inner, radius_outer);
  GameDescriptor g;
  g.name = "hypnodisk";
  g.payoff = [b](const Vec& x) { return hypnodisk_payoff(x, b); };
  g.known_equilibria = {Vec::Constant(3, 1.0 / 3.0)};
  return g;
}

GameDescriptor make_perturbed_hypnodisk(double radius_inner, double radius_outer) {
  BumpFunction b = BumpFunction::from_radii(radius_inner, radius_outer);
  GameDescriptor g;
  g.name = "hypnodisk-perturbed";
  g.interior_only = true;
  g.floor_events = std::make_shared<std::atomic<long>>(0);
  auto counter = g.floor_events;
  g.payoff = [b, counter](const Vec& x) {
    Vec p = hypnodisk_payoff(x, b);
    for (int i = 0; i < 3; ++i) p[i] += -guarded_log(x[i], counter) - 1.0;
    return p;
  };
  g.known_equilibria = {Vec::Constant(3, 1.0 / 3.0)};
  return g;
}

GameDescriptor make_anti_coordination(const Vec& x_o) {
  GameDescriptor g;
  g.name = "anti-coordination";
  g.n = static_cast<int>(x_o.size());
  const Vec target = x_o;
  g.payoff = [target](const Vec& x) { return Vec(-(x - target)); };
  const int n = static_cast<int>(x_o.size());
  g.jacobian = [n](const Vec&) { return Mat(-Mat::Identity(n, n)); };
  g.known_equilibria = {target};
  return g;
}

GameDescriptor make_linear(const Mat& a, const Vec& b) {
  if (a.rows() != a.cols() || a.rows() != b.size())
    throw ValidationError("linear game: A must be square and match b");
  GameDescriptor g;
  g.name = "linear";
  g.n = static_cast<int>(b.size());
  g.payoff = [a, b](const Vec& x) { return Vec(a * x + b); };
  g.jacobian = [a](const Vec&) { return a; };
  return g;
}

PotentialGame make_perturbed_potential(double quad, const Vec& a) {
  if (quad < 0.0) throw ValidationError("perturbed potential: quad must be >= 0");
  if (a.minCoeff() <= 0.0) throw ValidationError("perturbed potential: a must be positive");
  const int n = static_cast<int>(a.size());
  Vec log_a = a.array().log();

  PotentialGame pg;
  pg.game.name = "perturbed-potential";
  pg.game.n = n;
  pg.game.interior_only = true;
  pg.game.floor_events = std::make_shared<std::atomic<long>>(0);
  auto counter = pg.game.floor_events;
  pg.game.payoff = [quad, log_a, counter](const Vec& x) {
    Vec p(x.size());
    for (int i = 0; i < x.size(); ++i)
      p[i] = -quad * x[i] + log_a[i] - guarded_log(x[i], counter) - 1.0;
    return p;
  };
  pg.game.jacobian = [quad, n](const Vec& x) {
    Mat j = -quad * Mat::Identity(n, n);
    for (int i = 0; i < n; ++i) j(i, i) -= 1.0 / x[i];
    return j;
  };
  // Closed-form equilibrium in the cases used by the scenarios.
  const bool uniform_a = (a.maxCoeff() - a.minCoeff()) < 1e-15;
  if (uniform_a) {
    pg.game.known_equilibria = {Vec::Constant(n, 1.0 / n)};
  } else if (quad == 0.0) {
    pg.game.known_equilibria = {Vec(a / a.sum())};
  }

  pg.ftilde = [quad, log_a, counter](const Vec& x) {
    double v = -0.5 * quad * x.squaredNorm();
    for (int i = 0; i < x.size(); ++i) v += x[i] * (log_a[i] - guarded_log(x[i], counter));
    return v;
  };
  pg.ftilde_grad = pg.game.payoff;
  pg.ftilde_hessian = pg.game.jacobian;
  pg.concavity = quad + 1.0;  // 1/x_i >= 1 on the simplex
  return pg;
}

GameDescriptor make_extended_hypnodisk(int n, double scale, double radius_inner,
                                       double radius_outer) {
  if (n < 3) throw ValidationError("extended hypnodisk needs n >= 3");
  BumpFunction b = BumpFunction::from_radii(radius_inner, radius_outer);
  GameDescriptor g;
  g.name = "extended-hypnodisk";
  g.n = n;
  g.payoff = [b, n, scale](const Vec& x) {
    if (x.size() != n) throw ValidationError("extended hypnodisk: dimension mismatch");
    Vec agg(3);
    agg << x[0], x[1], x.tail(n - 2).sum();
    Vec h = hypnodisk_payoff(agg, b);
    Vec out(n);
    out[0] = h[0];
    out[1] = h[1];
    for (int i = 2; i < n; ++i) out[i] = h[2];
    return Vec(scale * out);
  };
  Vec eq(n);
  eq[0] = eq[1] = 1.0 / 3.0;
  for (int i = 2; i < n; ++i) eq[i] = (1.0 / 3.0) / (n - 2);
  g.known_equilibria = {eq};
  return g;
}

JacobianBound jacobian_bound_estimate(const GameDescriptor& f, int samples,
                                      std::uint64_t seed, double h) {
  if (samples <= 0) throw ValidationError("jacobian_bound_estimate: samples must be positive");
  SplitRng rng(seed, 0x1acb);
  JacobianBound out;
  out.samples = samples;
  double best = -std::numeric_limits<double>::infinity();
  const int n = f.n;
  const Mat q = tangent_basis(n);
  for (int s = 0; s < samples; ++s) {
    try {
      Vec x = random_interior_state(n, rng, 0.0);
      const double margin = 4.0 * h;
      if (x.minCoeff() < margin) x = (1.0 - margin * n) * x + margin * Vec::Ones(n);
      Mat m(n, n - 1);  // columns DF(x) q_k
      if (f.jacobian) {
        m = f.jacobian(x) * q;
      } else {
        for (int k = 0; k < n - 1; ++k) {
          Vec fp = f.payoff(x + h * q.col(k));
          Vec fm = f.payoff(x - h * q.col(k));
          m.col(k) = (fp - fm) / (2.0 * h);
        }
      }
      Mat restricted = q.transpose() * m;
      Mat sym = 0.5 * (restricted + restricted.transpose());
      if (!sym.allFinite()) {
        ++out.skipped;
        continue;
      }
      Eigen::SelfAdjointEigenSolver<Mat> eig(sym);
      best = std::max(best, eig.eigenvalues().maxCoeff());
    } catch (const std::exception&) {
      ++out.skipped;
    }
  }
  if (out.skipped == samples) throw NumericError("jacobian_bound_estimate: all samples failed");
  out.epsilon = best;
  return out;
}

NashReport is_nash(const GameDescriptor& f, const PopulationState& x, double tol) {
  return nash_report(f.payoff(x.shares()), x.shares(), tol);
}

}  // namespace evolab::games
