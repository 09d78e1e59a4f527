#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "lrtnet/oracle.hpp"

using namespace lrtnet;

namespace {

HypothesisPair symmetric_pair() {
  return {MixtureDensity::gaussian(-1.0, 1.0), MixtureDensity::gaussian(1.0, 1.0), 0.5};
}

HypothesisPair mixture_pair() {
  return {MixtureDensity::gaussian(0.0, 1.0),
          MixtureDensity{{GaussianComponent{0.6, {1.0}, {1.0}}, GaussianComponent{0.4, {-3.0}, {1.0}}}}, 0.5};
}

}  // namespace

// Reference values below come from scipy.stats (norm.cdf, brentq, quad).

TEST_CASE("mixture densities") {
  CHECK(density(MixtureDensity::gaussian(0.0, 1.0), 0.0) == doctest::Approx(0.3989422804014327).epsilon(1e-15));
  CHECK(density(mixture_pair().f2, 1.0) == doctest::Approx(0.239419).epsilon(1e-6));
  for (double x = -20; x <= 20; x += 0.5) CHECK(density(mixture_pair().f2, x) >= 0.0);

  MixtureDensity bad{{GaussianComponent{0.5, {0.0}, {1.0}}}};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  MixtureDensity neg_var{{GaussianComponent{1.0, {0.0}, {-1.0}}}};
  CHECK_THROWS_AS(neg_var.validate(), std::invalid_argument);
  CHECK_THROWS_AS(density(MixtureDensity::gaussian(0.0, 1.0), Vector{1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("likelihood ratio decisions") {
  const auto h = symmetric_pair();
  CHECK(lrt_decide(h, Vector{0.0}) == 1);
  CHECK(lrt_decide(h, Vector{2.0}) == 2);
  CHECK(lrt_decide(h, Vector{-0.1}) == 1);
  CHECK(lrt_decide(mixture_pair(), Vector{0.0}) == 1);
  CHECK(lrt_decide(mixture_pair(), Vector{-3.0}) == 2);
}

TEST_CASE("quadrature errors") {
  const auto sym = lrt_errors_quadrature(symmetric_pair());
  CHECK(sym.err1 == doctest::Approx(0.15865525393145707).epsilon(1e-9));
  CHECK(sym.err2 == doctest::Approx(0.15865525393145707).epsilon(1e-9));
  CHECK_FALSE(sym.coverage_warning);

  const auto roots = lrt_boundaries(mixture_pair());
  REQUIRE(roots.size() == 2);
  CHECK(roots[0] == doctest::Approx(-1.784414743998911).epsilon(1e-9));
  CHECK(roots[1] == doctest::Approx(1.0106112988655498).epsilon(1e-9));

  const auto mix = lrt_errors_quadrature(mixture_pair());
  CHECK(mix.err1 == doctest::Approx(0.19327940142444694).epsilon(1e-9));
  CHECK(mix.err2 == doctest::Approx(0.34574767564853837).epsilon(1e-9));
  CHECK(mix.avg == doctest::Approx(0.2695135385364926).epsilon(1e-9));

  const HypothesisPair same{MixtureDensity::gaussian(0.0, 1.0), MixtureDensity::gaussian(0.0, 1.0), 0.5};
  CHECK(lrt_errors_quadrature(same).avg == doctest::Approx(0.5));
}

TEST_CASE("Monte Carlo errors") {
  const auto mc = lrt_errors_montecarlo(mixture_pair(), 100000, 1);
  CHECK(std::abs(mc.err1 - 0.19327940142444694) < 0.005);
  CHECK(std::abs(mc.err2 - 0.34574767564853837) < 0.005);

  const HypothesisPair same{MixtureDensity::gaussian(0.0, 1.0), MixtureDensity::gaussian(0.0, 1.0), 0.5};
  CHECK(std::abs(lrt_errors_montecarlo(same, 40000, 3).avg - 0.5) < 3 * std::sqrt(0.25 / 40000));

  const auto one = lrt_errors_montecarlo(mixture_pair(), 1, 5);
  CHECK((one.err1 == 0.0 || one.err1 == 1.0));
  CHECK((one.err2 == 0.0 || one.err2 == 1.0));
  CHECK(lrt_errors_montecarlo(mixture_pair(), 1000, 9).err1 == lrt_errors_montecarlo(mixture_pair(), 1000, 9).err1);
}

TEST_CASE("posteriors") {
  const HypothesisPair same{MixtureDensity::gaussian(0.0, 1.0), MixtureDensity::gaussian(0.0, 1.0), 0.3};
  const auto p = posterior(same, Vector{1.7});
  CHECK(p.p1x == doctest::Approx(0.3));
  CHECK(p.p2x == doctest::Approx(0.7));

  // Equal variances, means 0 and 2: f1(x) / f2(x) = exp(2 - 2x) = 3 at x = 1 - ln(3)/2.
  const HypothesisPair shifted{MixtureDensity::gaussian(0.0, 1.0), MixtureDensity::gaussian(2.0, 1.0), 0.5};
  const auto q = posterior(shifted, Vector{1.0 - std::log(3.0) / 2.0});
  CHECK(q.p1x == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(q.p2x == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(q.p1x + q.p2x == doctest::Approx(1.0));

  CHECK_THROWS_AS(posterior(symmetric_pair(), Vector{1e6}), std::domain_error);
}

TEST_CASE("criterion upper bound") {
  CHECK(criterion_upper_bound(symmetric_pair()) == doctest::Approx(0.6826894921370859).epsilon(1e-9));
  CHECK(criterion_upper_bound(mixture_pair()) == doctest::Approx(0.4609729229270148).epsilon(1e-9));
  const HypothesisPair same{MixtureDensity::gaussian(0.0, 1.0), MixtureDensity::gaussian(0.0, 1.0), 0.5};
  CHECK(criterion_upper_bound(same) == doctest::Approx(0.0));
}

TEST_CASE("discrete optimality") {
  const DiscretePair d{{0.8, 0.2}, {0.3, 0.7}, 0.5};
  const auto phi = make_phi_cat_b_identity();
  CHECK(discrete_criterion(d, std::vector<int>{1, 1}, phi) == doctest::Approx(0.0));
  CHECK(discrete_criterion(d, std::vector<int>{1, -1}, phi) == doctest::Approx(0.5));
  CHECK(discrete_criterion(d, std::vector<int>{-1, 1}, phi) == doctest::Approx(-0.5));
  CHECK(discrete_criterion(d, std::vector<int>{-1, -1}, phi) == doctest::Approx(0.0));
  const auto r = brute_force_optimality(d, phi);
  CHECK(r.best_assignment == std::vector<int>{1, -1});
  CHECK(r.lrt_assignment == std::vector<int>{1, -1});
  CHECK(r.best_j == doctest::Approx(0.5));

  const DiscretePair flat{{0.25, 0.25, 0.5}, {0.25, 0.25, 0.5}, 0.5};
  const auto f = brute_force_optimality(flat, phi);
  CHECK(f.best_j == 0.0);
  CHECK(f.lrt_j == 0.0);

  CHECK_THROWS_AS(brute_force_optimality(DiscretePair{{0.5, 0.6}, {0.5, 0.5}, 0.5}, phi), std::invalid_argument);
}

TEST_CASE("random discrete pairs never beat the LRT assignment") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(0.01, 1.0);
  std::uniform_int_distribution<int> size(1, 8);
  for (int trial = 0; trial < 30; ++trial) {
    const int m = size(rng);
    DiscretePair d;
    double s1 = 0, s2 = 0;
    for (int i = 0; i < m; ++i) {
      d.f1.push_back(u(rng));
      d.f2.push_back(u(rng));
      s1 += d.f1.back();
      s2 += d.f2.back();
    }
    for (auto& v : d.f1) v /= s1;
    for (auto& v : d.f2) v /= s2;
    d.p1 = std::uniform_real_distribution<double>(0.1, 0.9)(rng);
    for (const auto& phi : {make_phi_cat_a_default(), make_phi_exp(0.5)}) {
      const auto r = brute_force_optimality(d, phi);
      CHECK(r.best_j == doctest::Approx(r.lrt_j).epsilon(1e-12));
    }
  }
}
