#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace lrtnet {

using ScalarFn = std::function<double(double)>;

// CatA: -1 = phi(-1) <= phi(z) <= phi(1) = 1 everywhere, unconstrained output.
// CatB: strictly increasing on [-1, 1] with phi(+-1) = +-1, output squashed by tanh.
// LegacySum: classical penalty trained by minimizing phi(D) + phi(-D) sums.
enum class PhiCategory { CatA, CatB, LegacySum };

std::string_view to_string(PhiCategory c);

struct PhiSpec {
  std::string name;
  PhiCategory category = PhiCategory::CatA;
  double rho = 0.0;  // 0 when the family has no shape parameter
  ScalarFn phi;
  ScalarFn phi_prime;
  // Points where phi is not differentiable (or where phi_prime is a chosen
  // one-sided value). Finite-difference checks stay away from these.
  std::vector<double> kinks;
};

// phi(z) = rho z / (rho - 1 + |z|^rho), rho > 1.
PhiSpec make_phi_rational(double rho);
// phi(z) = z exp((1 - |z|^rho) / rho), rho > 0.
PhiSpec make_phi_exp(double rho);
// 2z / (1 + z^2); the rational family at rho = 2.
PhiSpec make_phi_cat_a_default();
// phi(z) = z, paired with a tanh output squashing.
PhiSpec make_phi_cat_b_identity();
// (1 - z)^+, derivative 0 at the knee.
PhiSpec make_phi_hinge();

enum class LegacyKind { Abs, AbsPow, Hinge, HingePow };
PhiSpec make_legacy_phi(LegacyKind kind, double rho = 2.0);

// Lookup by config name: "cat_a_rational", "cat_a_default", "cat_a_exp",
// "cat_b_identity", "hinge", "hinge_pow", "abs", "abs_pow".
// Throws std::invalid_argument for unknown names or bad rho.
PhiSpec make_phi(std::string_view name, double rho);
std::vector<std::string> phi_names();

// Output nonlinearity omega applied to the pre-output z, and the classifier
// value D whose sign is the decision. The per-sample criterion term of the
// difference criterion is omega(z) = phi(D).
//   CatA:      omega = phi,          D = z
//   CatB:      omega = phi o tanh,   D = tanh(z)
//   LegacySum: omega = identity,     D = z  (phi enters at the criterion)
struct OutputNonlinearity {
  PhiCategory category = PhiCategory::CatA;
  ScalarFn omega;
  ScalarFn omega_prime;
  ScalarFn decision;
};

OutputNonlinearity make_output(const PhiSpec& phi);

}  // namespace lrtnet
