#include "lrtnet/loss.hpp"

#include <cmath>
#include <stdexcept>

namespace lrtnet {

std::string_view to_string(PhiCategory c) {
  switch (c) {
    case PhiCategory::CatA: return "CatA";
    case PhiCategory::CatB: return "CatB";
    case PhiCategory::LegacySum: return "LegacySum";
  }
  return "?";
}

PhiSpec make_phi_rational(double rho) {
  if (!(rho > 1.0) || !std::isfinite(rho))
    throw std::invalid_argument("cat_a_rational requires rho > 1, got " + std::to_string(rho));
  PhiSpec s;
  s.name = "cat_a_rational";
  s.category = PhiCategory::CatA;
  s.rho = rho;
  s.phi = [rho](double z) {
    if (z == 1.0) return 1.0;
    if (z == -1.0) return -1.0;
    return rho * z / (rho - 1.0 + std::pow(std::abs(z), rho));
  };
  // rho (rho-1) (1 - |z|^rho) / (rho - 1 + |z|^rho)^2; equals rho/(rho-1) at 0.
  s.phi_prime = [rho](double z) {
    const double p = std::pow(std::abs(z), rho);
    const double den = rho - 1.0 + p;
    return rho * (rho - 1.0) * (1.0 - p) / (den * den);
  };
  return s;
}

PhiSpec make_phi_exp(double rho) {
  if (!(rho > 0.0) || !std::isfinite(rho))
    throw std::invalid_argument("cat_a_exp requires rho > 0, got " + std::to_string(rho));
  PhiSpec s;
  s.name = "cat_a_exp";
  s.category = PhiCategory::CatA;
  s.rho = rho;
  s.phi = [rho](double z) {
    if (z == 1.0) return 1.0;
    if (z == -1.0) return -1.0;
    return z * std::exp((1.0 - std::pow(std::abs(z), rho)) / rho);
  };
  // (1 - |z|^rho) exp((1 - |z|^rho)/rho); the z = 0 value e^{1/rho} is the limit.
  s.phi_prime = [rho](double z) {
    const double p = std::pow(std::abs(z), rho);
    return (1.0 - p) * std::exp((1.0 - p) / rho);
  };
  if (rho < 1.0) s.kinks = {0.0};
  return s;
}

PhiSpec make_phi_cat_a_default() {
  PhiSpec s;
  s.name = "cat_a_default";
  s.category = PhiCategory::CatA;
  s.rho = 2.0;
  s.phi = [](double z) { return 2.0 * z / (1.0 + z * z); };
  s.phi_prime = [](double z) {
    const double den = 1.0 + z * z;
    return 2.0 * (1.0 - z * z) / (den * den);
  };
  return s;
}

PhiSpec make_phi_cat_b_identity() {
  PhiSpec s;
  s.name = "cat_b_identity";
  s.category = PhiCategory::CatB;
  s.phi = [](double z) { return z; };
  s.phi_prime = [](double) { return 1.0; };
  return s;
}

PhiSpec make_phi_hinge() { return make_legacy_phi(LegacyKind::Hinge); }

PhiSpec make_legacy_phi(LegacyKind kind, double rho) {
  const bool powered = kind == LegacyKind::AbsPow || kind == LegacyKind::HingePow;
  if (powered && (!(rho > 1.0) || !std::isfinite(rho)))
    throw std::invalid_argument("power penalties require rho > 1, got " + std::to_string(rho));

  PhiSpec s;
  s.category = PhiCategory::LegacySum;
  s.kinks = {1.0};
  switch (kind) {
    case LegacyKind::Abs:
      s.name = "abs";
      s.phi = [](double z) { return std::abs(1.0 - z); };
      s.phi_prime = [](double z) { return z < 1.0 ? -1.0 : (z > 1.0 ? 1.0 : 0.0); };
      break;
    case LegacyKind::AbsPow:
      s.name = "abs_pow";
      s.rho = rho;
      s.phi = [rho](double z) { return std::pow(std::abs(1.0 - z), rho); };
      s.phi_prime = [rho](double z) {
        const double d = 1.0 - z;
        const double mag = rho * std::pow(std::abs(d), rho - 1.0);
        return d > 0.0 ? -mag : (d < 0.0 ? mag : 0.0);
      };
      break;
    case LegacyKind::Hinge:
      s.name = "hinge";
      s.phi = [](double z) { return z < 1.0 ? 1.0 - z : 0.0; };
      s.phi_prime = [](double z) { return z < 1.0 ? -1.0 : 0.0; };
      break;
    case LegacyKind::HingePow:
      s.name = "hinge_pow";
      s.rho = rho;
      s.phi = [rho](double z) { return z < 1.0 ? std::pow(1.0 - z, rho) : 0.0; };
      s.phi_prime = [rho](double z) { return z < 1.0 ? -rho * std::pow(1.0 - z, rho - 1.0) : 0.0; };
      break;
  }
  return s;
}

PhiSpec make_phi(std::string_view name, double rho) {
  if (name == "cat_a_rational") return make_phi_rational(rho);
  if (name == "cat_a_default") return make_phi_cat_a_default();
  if (name == "cat_a_exp") return make_phi_exp(rho);
  if (name == "cat_b_identity") return make_phi_cat_b_identity();
  if (name == "hinge") return make_phi_hinge();
  if (name == "hinge_pow") return make_legacy_phi(LegacyKind::HingePow, rho);
  if (name == "abs") return make_legacy_phi(LegacyKind::Abs);
  if (name == "abs_pow") return make_legacy_phi(LegacyKind::AbsPow, rho);
  throw std::invalid_argument("unknown phi_name '" + std::string(name) + "'");
}

std::vector<std::string> phi_names() {
  return {"cat_a_rational", "cat_a_default", "cat_a_exp", "cat_b_identity",
          "hinge",          "hinge_pow",     "abs",       "abs_pow"};
}

OutputNonlinearity make_output(const PhiSpec& phi) {
  OutputNonlinearity out;
  out.category = phi.category;
  switch (phi.category) {
    case PhiCategory::CatA:
      out.omega = phi.phi;
      out.omega_prime = phi.phi_prime;
      out.decision = [](double z) { return z; };
      break;
    case PhiCategory::CatB:
      out.omega = [f = phi.phi](double z) { return f(std::tanh(z)); };
      out.omega_prime = [fp = phi.phi_prime](double z) {
        const double g = std::tanh(z);
        return fp(g) * (1.0 - g * g);
      };
      out.decision = [](double z) { return std::tanh(z); };
      break;
    case PhiCategory::LegacySum:
      out.omega = [](double z) { return z; };
      out.omega_prime = [](double) { return 1.0; };
      out.decision = [](double z) { return z; };
      break;
  }
  return out;
}

}  // namespace lrtnet
