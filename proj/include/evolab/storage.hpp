#pragma once

#include <functional>
#include <memory>
#include <string>

#include "evolab/core.hpp"
#include "evolab/edm.hpp"

namespace evolab::storage {

// Nonnegative C^1 energy paired with an EDM: its p-gradient reproduces the
// field and it decreases along the field in x. `is_strict` marks storages
// whose x-derivative vanishes only at rest points.
struct StorageFunction {
  std::string name;
  std::function<double(const Vec& p, const Vec& x)> eval;
  bool is_strict = false;
  bool interior_only = false;
};

// gamma(excess payoff). Uses the protocol's closed-form potential when
// present, otherwise integrates the rate along the ray t -> t*phat by
// adaptive quadrature (1e-10 absolute).
StorageFunction ept_storage(const edm::RevisionProtocol& rho);

// sum_i sum_j x_i int_0^{p_j - p_i} rho_j(s) ds, with closed-form
// antiderivatives when the protocol provides them.
StorageFunction pairwise_storage(const edm::RevisionProtocol& rho);

// max_y (p'y - v(y)) - (p'x - v(x)); log-sum-exp closed form for scaled
// negative entropy, generic choice solver otherwise. Interior only.
StorageFunction pbr_storage(const edm::Perturbation& v);

// base storage at the shifted payoff p - grad v(x). Interior only.
StorageFunction perturbed_storage(StorageFunction base, edm::Perturbation v);

// (1/4) sum_ij x_i x_j (p_i - p_j)^2: the unique p-gradient-consistent
// candidate for the replicator field (up to a function of x). It is not a
// storage function; the decrease condition fails and the violation is what
// the replicator experiments exhibit.
StorageFunction replicator_candidate_storage();

// sum_i x_i ln(x_ne_i / x_i): nonpositive, 0 iff x == x_ne. Interior only.
double kl_energy(const Vec& x, const Vec& x_ne);

// S(p,x) + max_y ftilde(y) - ftilde(x), the Lyapunov function for the
// mean-removed smoothed-payoff loop. The constant is computed once at
// construction by interior maximization.
struct EnergyFunction {
  StorageFunction storage;
  std::function<double(const Vec&)> ftilde;
  double ftilde_max = 0.0;
  Vec maximizer;

  double eval(const Vec& p, const Vec& x) const;
};

EnergyFunction make_energy(StorageFunction s, std::function<double(const Vec&)> ftilde,
                           std::function<Vec(const Vec&)> ftilde_grad,
                           std::function<Mat(const Vec&)> ftilde_hessian, int n);

// Returns the descriptor with the storage function bundled in.
edm::EdmDescriptor attach_storage(edm::EdmDescriptor d, StorageFunction s);

// Adaptive Simpson quadrature to the given absolute tolerance.
double adaptive_quadrature(const std::function<double(double)>& f, double a, double b,
                           double abs_tol = 1e-10);

}  // namespace evolab::storage
