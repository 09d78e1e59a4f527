#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "lrtnet/loss.hpp"
#include "lrtnet/matrix.hpp"

namespace lrtnet {

// Weighted mixture of diagonal Gaussians.
struct GaussianComponent {
  double weight = 1.0;
  Vector mean;
  Vector variance;
};

struct MixtureDensity {
  std::vector<GaussianComponent> components;

  std::size_t dim() const { return components.empty() ? 0 : components.front().mean.size(); }
  // Throws std::invalid_argument unless weights are positive and sum to 1
  // (within 1e-12), variances are positive and dimensions agree.
  void validate() const;

  static MixtureDensity gaussian(double mean, double variance);
};

struct HypothesisPair {
  MixtureDensity f1;
  MixtureDensity f2;
  double p1 = 0.5;

  double p2() const { return 1.0 - p1; }
  void validate() const;
};

double density(const MixtureDensity& d, std::span<const double> x);
double density(const MixtureDensity& d, double x);

// 1 iff p1 f1(x) - p2 f2(x) >= 0.
int lrt_decide(const HypothesisPair& h, std::span<const double> x);

struct ErrorRates {
  double err1 = 0.0;      // P1(decide 2)
  double err2 = 0.0;      // P2(decide 1)
  double avg = 0.0;       // (err1 + err2) / 2
  double weighted = 0.0;  // p1 err1 + p2 err2, the Bayes error for the true priors
  bool coverage_warning = false;
};

struct QuadratureOptions {
  std::size_t panels = 20000;
  double root_tolerance = 1e-10;
  double sigma_span = 10.0;
};

// Exact LRT error rates for scalar densities: the decision boundary is found
// by a fine sign scan plus bisection, the misclassified mass by Gaussian CDFs.
ErrorRates lrt_errors_quadrature(const HypothesisPair& h, const QuadratureOptions& opt = {});

// Boundary points of p1 f1 - p2 f2 on the scan interval (scalar densities).
std::vector<double> lrt_boundaries(const HypothesisPair& h, const QuadratureOptions& opt = {});

// Samples n_per_class points from each density and classifies with the LRT.
ErrorRates lrt_errors_montecarlo(const HypothesisPair& h, std::size_t n_per_class, std::uint64_t seed);

struct Posterior {
  double p1x = 0.0;
  double p2x = 0.0;
};

// Throws std::domain_error when p1 f1(x) + p2 f2(x) underflows to zero.
Posterior posterior(const HypothesisPair& h, std::span<const double> x);

// Integral of |p1 f1(x) - p2 f2(x)| by composite Simpson on panels split at
// the decision boundaries; the maximum attainable difference criterion.
double criterion_upper_bound(const HypothesisPair& h, const QuadratureOptions& opt = {});

struct DiscretePair {
  Vector f1;
  Vector f2;
  double p1 = 0.5;

  double p2() const { return 1.0 - p1; }
  std::size_t size() const { return f1.size(); }
  void validate() const;
};

struct OptimalityResult {
  std::vector<int> best_assignment;  // entries in {-1, +1}
  double best_j = 0.0;
  std::vector<int> lrt_assignment;
  double lrt_j = 0.0;
};

// Difference criterion for a +-1 assignment:  sum_x (p1 f1(x) - p2 f2(x)) phi(D(x)).
double discrete_criterion(const DiscretePair& d, std::span<const int> assignment, const PhiSpec& phi);

// Enumerates all 2^m assignments (m <= 20) and reports the best next to the
// LRT sign assignment.
OptimalityResult brute_force_optimality(const DiscretePair& d, const PhiSpec& phi);

}  // namespace lrtnet
