#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lrtnet/loss.hpp"

using namespace lrtnet;

namespace {

bool near_kink(const PhiSpec& phi, double z, double margin) {
  return std::any_of(phi.kinks.begin(), phi.kinks.end(), [&](double k) { return std::abs(z - k) < margin; });
}

double central_difference(const ScalarFn& f, double z, double h = 1e-6) { return (f(z + h) - f(z - h)) / (2 * h); }

void check_derivative(const ScalarFn& f, const ScalarFn& df, double z, double rel) {
  const double fd = central_difference(f, z);
  const double an = df(z);
  CHECK(std::abs(fd - an) <= rel * std::max(1.0, std::abs(an)));
}

}  // namespace

TEST_CASE("rational family hand values") {
  const auto phi = make_phi_rational(2.0);
  CHECK(phi.category == PhiCategory::CatA);
  CHECK(phi.phi(1.0) == 1.0);
  CHECK(phi.phi(0.0) == 0.0);
  CHECK(phi.phi(3.0) == doctest::Approx(0.6).epsilon(1e-15));
  CHECK_THROWS_AS(make_phi_rational(1.0), std::invalid_argument);
  CHECK_THROWS_AS(make_phi_rational(0.5), std::invalid_argument);
}

TEST_CASE("exp family hand values") {
  const auto phi = make_phi_exp(1.0);
  CHECK(phi.phi(1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(phi.phi(2.0) == doctest::Approx(2.0 / std::exp(1.0)).epsilon(1e-14));
  CHECK(phi.phi(2.0) == doctest::Approx(0.735759).epsilon(1e-6));
  CHECK(phi.phi(-1.0) == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK_THROWS_AS(make_phi_exp(0.0), std::invalid_argument);
}

TEST_CASE("default category A phi") {
  const auto phi = make_phi_cat_a_default();
  CHECK(phi.phi(1.0) == 1.0);
  CHECK(phi.phi(-1.0) == -1.0);
  CHECK(phi.phi(0.5) == doctest::Approx(0.8).epsilon(1e-15));
}

TEST_CASE("category B composes with tanh") {
  const auto phi = make_phi_cat_b_identity();
  const auto out = make_output(phi);
  CHECK(phi.category == PhiCategory::CatB);
  CHECK(out.omega(0.0) == 0.0);
  CHECK(out.omega_prime(0.0) == doctest::Approx(1.0));
  CHECK(out.omega(1.0) == doctest::Approx(0.761594).epsilon(1e-6));
  for (double z : {-50.0, -3.0, 0.2, 7.0, 50.0}) CHECK(std::abs(out.decision(z)) <= 1.0);
}

TEST_CASE("hinge and the legacy penalties") {
  const auto hinge = make_phi_hinge();
  CHECK(hinge.category == PhiCategory::LegacySum);
  CHECK(hinge.phi(1.0) == 0.0);
  CHECK(hinge.phi(0.0) == 1.0);
  CHECK(hinge.phi(2.0) == 0.0);
  CHECK(hinge.phi_prime(1.0) == 0.0);

  CHECK(make_legacy_phi(LegacyKind::Abs).phi(1.0) == 0.0);
  CHECK(make_legacy_phi(LegacyKind::AbsPow, 2.0).phi(-1.0) == doctest::Approx(4.0));
  CHECK(make_legacy_phi(LegacyKind::HingePow, 2.0).phi(0.5) == doctest::Approx(0.25));
  CHECK_THROWS_AS(make_legacy_phi(LegacyKind::HingePow, 1.0), std::invalid_argument);

  for (auto kind : {LegacyKind::Abs, LegacyKind::AbsPow, LegacyKind::Hinge, LegacyKind::HingePow}) {
    const auto p = make_legacy_phi(kind, 2.0);
    for (double z = -5.0; z <= 5.0; z += 0.01) CHECK(p.phi(z) >= 0.0);
  }
}

TEST_CASE("category A entries are bounded by their values at -1 and 1") {
  for (const auto& phi : {make_phi_cat_a_default(), make_phi_rational(1.5), make_phi_rational(4.0),
                          make_phi_exp(0.5), make_phi_exp(1.0), make_phi_exp(2.0)}) {
    CAPTURE(phi.name);
    CAPTURE(phi.rho);
    CHECK(phi.phi(1.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(phi.phi(-1.0) == doctest::Approx(-1.0).epsilon(1e-14));
    for (int i = 0; i <= 10000; ++i) {
      const double z = -10.0 + 20.0 * i / 10000.0;
      const double v = phi.phi(z);
      CHECK(v <= 1.0 + 1e-12);
      CHECK(v >= -1.0 - 1e-12);
      CHECK(phi.phi(-z) == doctest::Approx(-v).epsilon(1e-14));
    }
  }
}

TEST_CASE("category B identity is strictly increasing on [-1, 1]") {
  const auto phi = make_phi_cat_b_identity();
  double prev = phi.phi(-1.0);
  CHECK(prev == -1.0);
  for (int i = 1; i <= 2000; ++i) {
    const double v = phi.phi(-1.0 + 2.0 * i / 2000.0);
    CHECK(v > prev);
    prev = v;
  }
  CHECK(prev == 1.0);
}

TEST_CASE("phi_prime and omega_prime agree with finite differences") {
  for (const auto& name : phi_names()) {
    const auto phi = make_phi(name, name == "cat_a_exp" ? 1.5 : 2.0);
    const auto out = make_output(phi);
    CAPTURE(name);
    for (int i = 0; i <= 400; ++i) {
      const double z = -4.0 + 8.0 * i / 400.0 + 1e-3;
      if (near_kink(phi, z, 1e-3)) continue;
      check_derivative(phi.phi, phi.phi_prime, z, 1e-6);
      check_derivative(out.omega, out.omega_prime, z, 1e-6);
    }
  }
}

TEST_CASE("lookup by name") {
  CHECK(make_phi("cat_a_rational", 3.0).rho == 3.0);
  CHECK(make_phi("abs_pow", 2.0).category == PhiCategory::LegacySum);
  CHECK_THROWS_AS(make_phi("softmax", 2.0), std::invalid_argument);
  CHECK(phi_names().size() == 8);
}
