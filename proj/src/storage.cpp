#include "evolab/storage.hpp"

#include <cmath>

namespace evolab::storage {

namespace {

double simpson(const std::function<double(double)>& f, double a, double fa, double b, double fb,
               double m, double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_step(const std::function<double(double)>& f, double a, double fa, double b,
                     double fb, double m, double fm, double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = simpson(f, a, fa, m, fm, lm, flm);
  const double right = simpson(f, m, fm, b, fb, rm, frm);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return adaptive_step(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         adaptive_step(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_quadrature(const std::function<double(double)>& f, double a, double b,
                           double abs_tol) {
  if (a == b) return 0.0;
  const double fa = f(a), fb = f(b), m = 0.5 * (a + b), fm = f(m);
  const double whole = simpson(f, a, fa, b, fb, m, fm);
  return adaptive_step(f, a, fa, b, fb, m, fm, whole, abs_tol, 40);
}

StorageFunction ept_storage(const edm::RevisionProtocol& rho) {
  if (rho.kind != edm::RevisionProtocol::Kind::ept)
    throw ValidationError("ept_storage needs an ept protocol");
  StorageFunction s;
  s.name = "ept-storage(" + rho.name + ")";
  s.is_strict = true;
  if (rho.potential) {
    auto gamma = rho.potential;
    s.eval = [gamma](const Vec& p, const Vec& x) { return gamma(excess_payoff(p, x)); };
  } else {
    auto rate = rho.rate;
    s.eval = [rate](const Vec& p, const Vec& x) {
      const Vec phat = excess_payoff(p, x);
      // gamma(phat) = int_0^1 phat . rho(t phat) dt, anchored at gamma(0) = 0
      return adaptive_quadrature([&](double t) { return phat.dot(rate(t * phat)); }, 0.0, 1.0);
    };
  }
  return s;
}

StorageFunction pairwise_storage(const edm::RevisionProtocol& rho) {
  if (rho.kind != edm::RevisionProtocol::Kind::pairwise)
    throw ValidationError("pairwise_storage needs a pairwise protocol");
  StorageFunction s;
  s.name = "pairwise-storage(" + rho.name + ")";
  s.is_strict = true;
  auto integral = rho.pair_rate_integral;
  auto rate = rho.pair_rate;
  s.eval = [integral, rate](const Vec& p, const Vec& x) {
    const int n = static_cast<int>(p.size());
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      if (x[i] == 0.0) continue;
      for (int j = 0; j < n; ++j) {
        const double upper = p[j] - p[i];
        if (upper <= 0.0) continue;  // rate vanishes on nonpositive gains
        double term;
        if (integral) {
          term = integral(j, upper);
        } else {
          term = adaptive_quadrature([&](double u) { return rate(j, u); }, 0.0, upper);
        }
        total += x[i] * term;
      }
    }
    return total;
  };
  return s;
}

StorageFunction pbr_storage(const edm::Perturbation& v) {
  StorageFunction s;
  s.name = "pbr-storage(" + v.name + ")";
  s.is_strict = true;
  s.interior_only = true;
  if (v.entropy_eta > 0.0) {
    const double eta = v.entropy_eta;
    s.eval = [eta](const Vec& p, const Vec& x) {
      if (x.minCoeff() <= 0.0) throw DomainError("pbr storage needs an interior state");
      const double top = p.maxCoeff();
      const double lse = top + eta * std::log(((p.array() - top) / eta).exp().sum());
      double ent = 0.0;
      for (int i = 0; i < x.size(); ++i) ent += x[i] * std::log(x[i]);
      return lse - p.dot(x) + eta * ent;
    };
  } else {
    edm::Perturbation vc = v;
    s.eval = [vc](const Vec& p, const Vec& x) {
      if (x.minCoeff() <= 0.0) throw DomainError("pbr storage needs an interior state");
      const Vec y = edm::choice(p, vc);
      return (p.dot(y) - vc.value(y)) - (p.dot(x) - vc.value(x));
    };
  }
  return s;
}

StorageFunction perturbed_storage(StorageFunction base, edm::Perturbation v) {
  StorageFunction s;
  s.name = "perturbed-" + base.name;
  s.is_strict = base.is_strict;
  s.interior_only = true;
  auto base_eval = base.eval;
  auto grad = v.grad;
  s.eval = [base_eval, grad](const Vec& p, const Vec& x) {
    if (x.minCoeff() <= 0.0) throw DomainError("perturbed storage needs an interior state");
    return base_eval(p - grad(x), x);
  };
  return s;
}

StorageFunction replicator_candidate_storage() {
  StorageFunction s;
  s.name = "replicator-candidate";
  s.is_strict = false;
  s.eval = [](const Vec& p, const Vec& x) {
    const int n = static_cast<int>(p.size());
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const double d = p[i] - p[j];
        total += x[i] * x[j] * d * d;
      }
    }
    return 0.25 * total;
  };
  return s;
}

double kl_energy(const Vec& x, const Vec& x_ne) {
  if (x.size() != x_ne.size()) throw ValidationError("kl_energy: dimension mismatch");
  if (x.minCoeff() <= 0.0 || x_ne.minCoeff() <= 0.0)
    throw DomainError("kl_energy needs interior states");
  double s = 0.0;
  for (int i = 0; i < x.size(); ++i) s += x[i] * std::log(x_ne[i] / x[i]);
  return s;
}

double EnergyFunction::eval(const Vec& p, const Vec& x) const {
  return storage.eval(p, x) + ftilde_max - ftilde(x);
}

EnergyFunction make_energy(StorageFunction s, std::function<double(const Vec&)> ftilde,
                           std::function<Vec(const Vec&)> ftilde_grad,
                           std::function<Mat(const Vec&)> ftilde_hessian, int n) {
  EnergyFunction e;
  e.storage = std::move(s);
  e.ftilde = std::move(ftilde);
  // max ftilde = max 0'y - (-ftilde)(y); -ftilde is strictly convex with
  // boundary blow-up for the perturbed potentials this is used with.
  auto w = [&](const Vec& y) { return -e.ftilde(y); };
  auto wg = [&](const Vec& y) { return Vec(-ftilde_grad(y)); };
  auto wh = [&](const Vec& y) { return Mat(-ftilde_hessian(y)); };
  const auto opt = edm::maximize_interior(Vec::Zero(n), w, wg, wh, Vec::Constant(n, 1.0 / n));
  e.maximizer = opt.maximizer;
  e.ftilde_max = e.ftilde(opt.maximizer);
  return e;
}

edm::EdmDescriptor attach_storage(edm::EdmDescriptor d, StorageFunction s) {
  d.storage = std::make_shared<const StorageFunction>(std::move(s));
  return d;
}

}  // namespace evolab::storage
