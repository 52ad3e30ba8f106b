#include "evolab/edm.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace evolab::edm {

namespace {

double positive_part(double a) { return a > 0.0 ? a : 0.0; }

Vec entropy_grad(const Vec& x, double eta) {
  Vec g(x.size());
  for (int i = 0; i < x.size(); ++i) {
    if (x[i] <= 0.0) throw DomainError("entropy gradient at boundary state");
    g[i] = eta * (std::log(x[i]) + 1.0);
  }
  return g;
}

}  // namespace

Perturbation entropy_perturbation(double eta) {
  if (eta <= 0.0) throw ValidationError("entropy perturbation needs eta > 0");
  Perturbation v;
  v.name = "entropy";
  v.modulus = eta;  // 1/x_i >= 1 on the simplex
  v.entropy_eta = eta;
  v.value = [eta](const Vec& x) {
    double s = 0.0;
    for (int i = 0; i < x.size(); ++i) {
      if (x[i] < 0.0) throw DomainError("entropy value at negative share");
      if (x[i] > 0.0) s += x[i] * std::log(x[i]);
    }
    return eta * s;
  };
  v.grad = [eta](const Vec& x) { return entropy_grad(x, eta); };
  v.hessian_quadform = [eta](const Vec& x, const Vec& z) {
    double s = 0.0;
    for (int i = 0; i < x.size(); ++i) {
      if (x[i] <= 0.0) throw DomainError("entropy hessian at boundary state");
      s += z[i] * z[i] / x[i];
    }
    return eta * s;
  };
  v.hessian = [eta](const Vec& x) {
    Mat h = Mat::Zero(x.size(), x.size());
    for (int i = 0; i < x.size(); ++i) {
      if (x[i] <= 0.0) throw DomainError("entropy hessian at boundary state");
      h(i, i) = eta / x[i];
    }
    return h;
  };
  return v;
}

Perturbation entropy_quadratic_perturbation(double eta, double quad) {
  if (eta <= 0.0 || quad < 0.0)
    throw ValidationError("entropy-quadratic perturbation needs eta > 0, quad >= 0");
  Perturbation base = entropy_perturbation(eta);
  Perturbation v;
  v.name = "entropy-quadratic";
  v.modulus = eta + quad;
  v.entropy_eta = 0.0;  // no closed-form choice
  v.value = [base, quad](const Vec& x) { return base.value(x) + 0.5 * quad * x.squaredNorm(); };
  v.grad = [base, quad](const Vec& x) { return Vec(base.grad(x) + quad * x); };
  v.hessian_quadform = [base, quad](const Vec& x, const Vec& z) {
    return base.hessian_quadform(x, z) + quad * z.squaredNorm();
  };
  v.hessian = [base, quad](const Vec& x) {
    return Mat(base.hessian(x) + quad * Mat::Identity(x.size(), x.size()));
  };
  return v;
}

void validate_perturbation(const Perturbation& v, int n, int samples, std::uint64_t seed) {
  if (!v.value || !v.grad || !v.hessian_quadform)
    throw ValidationError("perturbation missing value/grad/hessian_quadform");
  SplitRng rng(seed, 0xbead);
  const Mat q = tangent_basis(n);
  for (int s = 0; s < samples; ++s) {
    Vec x = random_interior_state(n, rng, 0.01);
    // tangent strong convexity with the declared modulus
    Vec z = Vec::Zero(n);
    for (int k = 0; k < n - 1; ++k) z += rng.uniform(-1.0, 1.0) * q.col(k);
    if (z.norm() > 1e-12) {
      const double quad = v.hessian_quadform(x, z);
      if (quad < v.modulus * z.squaredNorm() - 1e-8 * std::max(1.0, z.squaredNorm()))
        throw ValidationError("perturbation: hessian quadform below declared modulus");
    }
    // gradient consistency against central differences of the value
    const double h = 1e-6;
    Vec g = v.grad(x);
    for (int k = 0; k < n - 1; ++k) {
      const Vec d = q.col(k);
      const double fd = (v.value(x + h * d) - v.value(x - h * d)) / (2.0 * h);
      const double an = g.dot(d);
      if (std::abs(fd - an) > 1e-6 * std::max(1.0, std::abs(an)))
        throw ValidationError("perturbation: gradient does not match value differences");
    }
  }
  // boundary blow-up along a shrinking sequence toward a face
  double first = 0.0, prev = 0.0;
  for (int k = 2; k <= 8; ++k) {
    const double d = std::pow(10.0, -k);
    Vec x = Vec::Constant(n, (1.0 - d) / (n - 1));
    x[0] = d;
    const double g = v.grad(x).norm();
    if (k == 2) first = g;
    if (g < prev * (1.0 - 1e-9))
      throw ValidationError("perturbation: gradient norm not growing at boundary");
    prev = g;
  }
  if (prev < 3.0 * std::max(first, 1e-12))
    throw ValidationError("perturbation: gradient does not blow up at boundary");
}

RevisionProtocol make_ept_protocol(std::string name, std::function<Vec(const Vec&)> rate,
                                   std::function<double(const Vec&)> potential, int n,
                                   std::uint64_t seed) {
  if (!rate) throw ValidationError("ept protocol needs a rate function");
  RevisionProtocol rho;
  rho.kind = RevisionProtocol::Kind::ept;
  rho.name = std::move(name);
  rho.rate = std::move(rate);
  rho.potential = std::move(potential);

  SplitRng rng(seed, 0xac31);
  const double h = 1e-5;
  for (int s = 0; s < 128; ++s) {
    Vec phat = random_payoff(n, rng, 2.0);
    phat = phat.array() - phat.mean();  // keep samples representative of excess payoffs
    Vec r = rho.rate(phat);
    if (r.minCoeff() < -1e-12)
      throw ValidationError("ept protocol '" + rho.name + "': rate is negative");
    if (phat.maxCoeff() > 1e-6 && phat.dot(r) <= 0.0)
      throw ValidationError("ept protocol '" + rho.name + "': acuteness fails");
    if (rho.potential) {
      // integrability: finite differences of gamma must match the rate
      for (int i = 0; i < n; ++i) {
        Vec e = Vec::Zero(n);
        e[i] = h;
        const double fd = (rho.potential(phat + e) - rho.potential(phat - e)) / (2.0 * h);
        if (std::abs(fd - r[i]) > 1e-4 * std::max(1.0, std::abs(r[i])))
          throw ValidationError("ept protocol '" + rho.name + "': potential gradient mismatch");
      }
    } else {
      // integrability via symmetry of the rate Jacobian
      for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
          Vec ei = Vec::Zero(n), ej = Vec::Zero(n);
          ei[i] = h;
          ej[j] = h;
          const double dij = (rho.rate(phat + ej)[i] - rho.rate(phat - ej)[i]) / (2.0 * h);
          const double dji = (rho.rate(phat + ei)[j] - rho.rate(phat - ei)[j]) / (2.0 * h);
          if (std::abs(dij - dji) > 1e-4 * std::max(1.0, std::abs(dij)))
            throw ValidationError("ept protocol '" + rho.name + "': rate Jacobian asymmetric");
        }
      }
    }
  }
  return rho;
}

RevisionProtocol make_pairwise_protocol(std::string name,
                                        std::function<double(int, double)> pair_rate,
                                        std::function<double(int, double)> integral,
                                        std::uint64_t seed) {
  if (!pair_rate) throw ValidationError("pairwise protocol needs a rate function");
  RevisionProtocol rho;
  rho.kind = RevisionProtocol::Kind::pairwise;
  rho.name = std::move(name);
  rho.pair_rate = std::move(pair_rate);
  rho.pair_rate_integral = std::move(integral);

  SplitRng rng(seed, 0x51c4);
  for (int i = 0; i < 4; ++i) {
    for (int s = 0; s < 64; ++s) {
      const double d = rng.uniform(-3.0, 3.0);
      const double r = rho.pair_rate(i, d);
      if (r < 0.0) throw ValidationError("pairwise protocol '" + rho.name + "': negative rate");
      if (d > 0.0 && r <= 0.0)
        throw ValidationError("pairwise protocol '" + rho.name + "': sign preservation fails");
      if (d <= 0.0 && r != 0.0)
        throw ValidationError("pairwise protocol '" + rho.name + "': rate nonzero for d <= 0");
    }
    if (rho.pair_rate(i, 0.0) != 0.0)
      throw ValidationError("pairwise protocol '" + rho.name + "': rate nonzero at 0");
  }
  return rho;
}

RevisionProtocol bnn_protocol() {
  return make_ept_protocol(
      "bnn", [](const Vec& phat) { return Vec(phat.cwiseMax(0.0)); },
      [](const Vec& phat) {
        double s = 0.0;
        for (int i = 0; i < phat.size(); ++i) s += positive_part(phat[i]) * positive_part(phat[i]);
        return 0.5 * s;
      });
}

RevisionProtocol smith_protocol() {
  return make_pairwise_protocol(
      "smith", [](int, double d) { return positive_part(d); },
      [](int, double u) { return 0.5 * positive_part(u) * positive_part(u); });
}

RevisionProtocol power_ept_protocol(double exponent) {
  if (exponent < 1.0) throw ValidationError("power ept protocol needs exponent >= 1");
  return make_ept_protocol(
      "ept-pow", [exponent](const Vec& phat) {
        Vec r(phat.size());
        for (int i = 0; i < phat.size(); ++i) r[i] = std::pow(positive_part(phat[i]), exponent);
        return r;
      },
      [exponent](const Vec& phat) {
        double s = 0.0;
        for (int i = 0; i < phat.size(); ++i)
          s += std::pow(positive_part(phat[i]), exponent + 1.0);
        return s / (exponent + 1.0);
      });
}

RevisionProtocol power_pairwise_protocol(double exponent) {
  if (exponent < 1.0) throw ValidationError("power pairwise protocol needs exponent >= 1");
  return make_pairwise_protocol(
      "pairwise-pow",
      [exponent](int, double d) { return std::pow(positive_part(d), exponent); },
      [exponent](int, double u) {
        return std::pow(positive_part(u), exponent + 1.0) / (exponent + 1.0);
      });
}

Vec replicator_field(const Vec& p, const Vec& x) {
  if (p.size() != x.size()) throw ValidationError("replicator field: dimension mismatch");
  return x.array() * (p.array() - p.dot(x));
}

Vec bnn_field(const Vec& p, const Vec& x) {
  if (p.size() != x.size()) throw ValidationError("bnn field: dimension mismatch");
  Vec pos = (p.array() - p.dot(x)).max(0.0);
  return pos - pos.sum() * x;
}

Vec smith_field(const Vec& p, const Vec& x) {
  if (p.size() != x.size()) throw ValidationError("smith field: dimension mismatch");
  const int n = static_cast<int>(p.size());
  Vec out(n);
  for (int i = 0; i < n; ++i) {
    double inflow = 0.0, outflow = 0.0;
    for (int j = 0; j < n; ++j) {
      inflow += x[j] * positive_part(p[i] - p[j]);
      outflow += positive_part(p[j] - p[i]);
    }
    out[i] = inflow - x[i] * outflow;
  }
  return out;
}

Vec logit_choice(const Vec& p, double eta) {
  if (eta <= 0.0) throw ValidationError("logit choice needs eta > 0");
  const double top = p.maxCoeff();
  Vec e = ((p.array() - top) / eta).exp();
  return e / e.sum();
}

Vec logit_field(const Vec& p, const Vec& x, double eta) {
  if (p.size() != x.size()) throw ValidationError("logit field: dimension mismatch");
  return logit_choice(p, eta) - x;
}

Vec ept_field(const RevisionProtocol& rho, const Vec& p, const Vec& x) {
  if (rho.kind != RevisionProtocol::Kind::ept)
    throw ValidationError("ept_field needs an ept protocol");
  Vec r = rho.rate(excess_payoff(p, x));
  return r - r.sum() * x;
}

Vec pairwise_field(const RevisionProtocol& rho, const Vec& p, const Vec& x) {
  if (rho.kind != RevisionProtocol::Kind::pairwise)
    throw ValidationError("pairwise_field needs a pairwise protocol");
  const int n = static_cast<int>(p.size());
  Vec out(n);
  for (int i = 0; i < n; ++i) {
    double inflow = 0.0, outflow = 0.0;
    for (int j = 0; j < n; ++j) {
      inflow += x[j] * rho.pair_rate(i, p[i] - p[j]);
      outflow += rho.pair_rate(j, p[j] - p[i]);
    }
    out[i] = inflow - x[i] * outflow;
  }
  return out;
}

InteriorMaximum maximize_interior(const Vec& c, const std::function<double(const Vec&)>& w,
                                  const std::function<Vec(const Vec&)>& w_grad,
                                  const std::function<Mat(const Vec&)>& w_hessian,
                                  const Vec& warm_start, double tol, int max_iter) {
  const int n = static_cast<int>(c.size());
  Vec y = warm_start;
  if (y.size() != n || y.minCoeff() <= 0.0) y = Vec::Constant(n, 1.0 / n);
  y /= y.sum();
  const Vec ones = Vec::Ones(n);

  auto residual_norm = [&](const Vec& yy) {
    Vec r = w_grad(yy) - c;
    r.array() -= r.mean();  // stationarity holds up to the multiplier direction
    return std::max(r.lpNorm<Eigen::Infinity>(), std::abs(yy.sum() - 1.0));
  };

  double res = residual_norm(y);
  int it = 0;
  for (; it < max_iter && res > tol; ++it) {
    Vec r = w_grad(y) - c;
    const double mu = -r.mean();
    r += mu * ones;  // r = grad w - c + mu 1, mean-free
    const double e = y.sum() - 1.0;
    Mat h = w_hessian(y);
    Eigen::LDLT<Mat> hs(h);
    if (hs.info() != Eigen::Success)
      throw NumericError("choice solver: hessian factorization failed");
    Vec hinv_r = hs.solve(r);
    Vec hinv_1 = hs.solve(ones);
    const double denom = ones.dot(hinv_1);
    if (std::abs(denom) < 1e-300) throw NumericError("choice solver: degenerate KKT system");
    const double dmu = (e - ones.dot(hinv_r)) / denom;
    Vec dy = -(hinv_r + dmu * hinv_1);

    // fraction-to-boundary damping keeps iterates interior
    double alpha = 1.0;
    for (int i = 0; i < n; ++i) {
      if (dy[i] < 0.0) alpha = std::min(alpha, -0.995 * y[i] / dy[i]);
    }
    double trial_res = res;
    Vec y_trial;
    for (int back = 0; back < 40; ++back) {
      y_trial = y + alpha * dy;
      if (y_trial.minCoeff() > 0.0) {
        trial_res = residual_norm(y_trial);
        if (trial_res < res || alpha < 1e-12) break;
      }
      alpha *= 0.5;
    }
    y = y_trial;
    res = trial_res;
  }
  if (res > tol) {
    std::ostringstream os;
    os << "choice solver did not converge: residual " << res << " after " << it << " iterations";
    throw NumericError(os.str());
  }
  InteriorMaximum out;
  out.maximizer = y;
  out.value = c.dot(y) - w(y);
  out.iterations = it;
  out.kkt_residual = res;
  return out;
}

Vec choice(const Vec& p, const Perturbation& v) {
  if (v.entropy_eta > 0.0) return logit_choice(p, v.entropy_eta);
  if (!v.hessian) throw ValidationError("generic choice needs the perturbation hessian");
  const double scale = v.modulus > 0.0 ? v.modulus : 1.0;
  Vec warm = logit_choice(p, scale);
  return maximize_interior(p, v.value, v.grad, v.hessian, warm).maximizer;
}

Vec pbr_field(const Perturbation& v, const Vec& p, const Vec& x) {
  if (p.size() != x.size()) throw ValidationError("pbr field: dimension mismatch");
  return choice(p, v) - x;
}

Vec perturbed_field(const EdmDescriptor& base, const Perturbation& v, const Vec& p,
                    const Vec& x) {
  if (x.minCoeff() <= 0.0) throw DomainError("perturbed field needs an interior state");
  return base.field(p - v.grad(x), x);
}

EdmDescriptor make_replicator() {
  EdmDescriptor d;
  d.name = "replicator";
  d.field = replicator_field;
  d.declared_class = PassivityClass::non_passive;
  return d;
}

EdmDescriptor make_bnn() {
  EdmDescriptor d;
  d.name = "bnn";
  d.field = bnn_field;
  d.declared_class = PassivityClass::delta_passive;
  return d;
}

EdmDescriptor make_smith() {
  EdmDescriptor d;
  d.name = "smith";
  d.field = smith_field;
  d.declared_class = PassivityClass::delta_passive;
  return d;
}

EdmDescriptor make_logit(double eta) {
  EdmDescriptor d;
  d.name = "logit";
  d.field = [eta](const Vec& p, const Vec& x) { return logit_field(p, x, eta); };
  d.declared_class = PassivityClass::strict_output;
  d.output_index = eta;
  d.rest_point = [eta](const Vec& p) { return logit_choice(p, eta); };
  return d;
}

EdmDescriptor make_ept(RevisionProtocol rho) {
  if (rho.kind != RevisionProtocol::Kind::ept)
    throw ValidationError("make_ept needs an ept protocol");
  EdmDescriptor d;
  d.name = "ept(" + rho.name + ")";
  d.field = [rho](const Vec& p, const Vec& x) { return ept_field(rho, p, x); };
  d.declared_class = PassivityClass::delta_passive;
  return d;
}

EdmDescriptor make_pairwise(RevisionProtocol rho) {
  if (rho.kind != RevisionProtocol::Kind::pairwise)
    throw ValidationError("make_pairwise needs a pairwise protocol");
  EdmDescriptor d;
  d.name = "pairwise(" + rho.name + ")";
  d.field = [rho](const Vec& p, const Vec& x) { return pairwise_field(rho, p, x); };
  d.declared_class = PassivityClass::delta_passive;
  return d;
}

EdmDescriptor make_pbr(Perturbation v) {
  EdmDescriptor d;
  d.name = "pbr(" + v.name + ")";
  d.field = [v](const Vec& p, const Vec& x) { return pbr_field(v, p, x); };
  d.declared_class =
      v.modulus > 0.0 ? PassivityClass::strict_output : PassivityClass::delta_passive;
  d.output_index = v.modulus;
  d.rest_point = [v](const Vec& p) { return choice(p, v); };
  return d;
}

EdmDescriptor make_perturbed(const EdmDescriptor& base, Perturbation v) {
  EdmDescriptor d;
  d.name = "perturbed-" + base.name;
  EdmDescriptor base_copy = base;
  base_copy.storage.reset();  // the pair is reattached by the caller
  d.field = [base_copy, v](const Vec& p, const Vec& x) {
    return perturbed_field(base_copy, v, p, x);
  };
  d.declared_class = PassivityClass::strict_output;
  d.output_index = v.modulus;
  d.interior_only = true;
  return d;
}

}  // namespace evolab::edm
