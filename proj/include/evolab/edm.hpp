#pragma once

#include <functional>
#include <memory>
#include <string>

#include "evolab/core.hpp"

namespace evolab::storage {
struct StorageFunction;
}

namespace evolab::edm {

// Deterministic perturbation / control cost v on the interior of the simplex:
// strongly convex on the tangent space with modulus `modulus`, gradient
// blowing up at the boundary.
struct Perturbation {
  std::string name;
  double modulus = 0.0;
  std::function<double(const Vec&)> value;
  std::function<Vec(const Vec&)> grad;
  std::function<double(const Vec&, const Vec&)> hessian_quadform;  // z' H(x) z
  std::function<Mat(const Vec&)> hessian;                          // full matrix, for the solver
  double entropy_eta = 0.0;  // > 0 when v = eta * sum x ln x (closed-form choice)
};

// v(x) = eta * sum_i x_i ln x_i.
Perturbation entropy_perturbation(double eta);
// v(x) = eta * sum_i x_i ln x_i + (quad/2) ||x||^2; exercises the generic
// choice solver since no closed form exists.
Perturbation entropy_quadratic_perturbation(double eta, double quad);

// Samples the perturbation conditions (tangent strong convexity with the
// declared modulus, gradient blow-up toward the boundary, gradient/value
// consistency); throws ValidationError on failure.
void validate_perturbation(const Perturbation& v, int n = 3, int samples = 64,
                           std::uint64_t seed = 0x7e57);

// Switch-rate functions generating EPT or pairwise-comparison dynamics.
// Constructors sample-validate nonnegativity plus acuteness/integrability
// (ept) or sign preservation (pairwise) and throw on violation.
struct RevisionProtocol {
  enum class Kind { ept, pairwise };
  Kind kind = Kind::ept;
  std::string name;
  std::function<Vec(const Vec&)> rate;                    // ept: rho(phat)
  std::function<double(int, double)> pair_rate;           // pairwise: rho_i(d)
  std::function<double(const Vec&)> potential;            // ept: gamma with grad gamma = rho
  std::function<double(int, double)> pair_rate_integral;  // int_0^u rho_j(s) ds
};

RevisionProtocol make_ept_protocol(std::string name, std::function<Vec(const Vec&)> rate,
                                   std::function<double(const Vec&)> potential = nullptr,
                                   int n = 3, std::uint64_t seed = 0x7e57);
RevisionProtocol make_pairwise_protocol(std::string name,
                                        std::function<double(int, double)> pair_rate,
                                        std::function<double(int, double)> integral = nullptr,
                                        std::uint64_t seed = 0x7e57);

RevisionProtocol bnn_protocol();
RevisionProtocol smith_protocol();
// rho_i(phat) = [phat_i]_+^k resp. rho_i(d) = [d]_+^k, k >= 1.
RevisionProtocol power_ept_protocol(double exponent);
RevisionProtocol power_pairwise_protocol(double exponent);

enum class PassivityClass { non_passive, delta_passive, strict_output };

// Vector field V(p, x) on the simplex tangent space, optionally bundled with
// its storage function and declared passivity class. Immutable; field
// evaluation is pure and reentrant.
struct EdmDescriptor {
  std::string name;
  std::function<Vec(const Vec& p, const Vec& x)> field;
  std::shared_ptr<const storage::StorageFunction> storage;
  PassivityClass declared_class = PassivityClass::delta_passive;
  double output_index = 0.0;  // eta for strict_output
  bool interior_only = false;
  std::function<Vec(const Vec& p)> rest_point;  // closed-form x with V(p,x)=0, when known
};

Vec replicator_field(const Vec& p, const Vec& x);
Vec bnn_field(const Vec& p, const Vec& x);
Vec smith_field(const Vec& p, const Vec& x);
Vec logit_choice(const Vec& p, double eta);
Vec logit_field(const Vec& p, const Vec& x, double eta);
Vec ept_field(const RevisionProtocol& rho, const Vec& p, const Vec& x);
Vec pairwise_field(const RevisionProtocol& rho, const Vec& p, const Vec& x);

// Unique maximizer of p'y - v(y) over the interior of the simplex. Softmax
// when v is scaled negative entropy; damped Newton on the KKT system
// otherwise (tolerance 1e-10, at most 100 iterations).
Vec choice(const Vec& p, const Perturbation& v);
Vec pbr_field(const Perturbation& v, const Vec& p, const Vec& x);

// Base field evaluated at the shifted payoff p - grad v(x); domain error on
// boundary states.
Vec perturbed_field(const EdmDescriptor& base, const Perturbation& v, const Vec& p, const Vec& x);

EdmDescriptor make_replicator();
EdmDescriptor make_bnn();
EdmDescriptor make_smith();
EdmDescriptor make_logit(double eta);
EdmDescriptor make_ept(RevisionProtocol rho);
EdmDescriptor make_pairwise(RevisionProtocol rho);
EdmDescriptor make_pbr(Perturbation v);
EdmDescriptor make_perturbed(const EdmDescriptor& base, Perturbation v);

struct InteriorMaximum {
  Vec maximizer;
  double value = 0.0;
  int iterations = 0;
  double kkt_residual = 0.0;
};

// Damped interior-point Newton for max_y c'y - w(y) over the simplex, with w
// strictly convex and boundary-repelling. Shared by choice() and the energy
// constant computation.
InteriorMaximum maximize_interior(const Vec& c, const std::function<double(const Vec&)>& w,
                                  const std::function<Vec(const Vec&)>& w_grad,
                                  const std::function<Mat(const Vec&)>& w_hessian,
                                  const Vec& warm_start, double tol = 1e-10, int max_iter = 100);

}  // namespace evolab::edm
