#include "lrtnet/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "lrtnet/data.hpp"

namespace lrtnet {

namespace {

constexpr double kInvSqrt2Pi = 0.3989422804014327;  // 1/sqrt(2 pi)

double normal_cdf(double t) { return 0.5 * std::erfc(-t / std::numbers::sqrt2); }

double mixture_cdf(const MixtureDensity& d, double x) {
  double acc = 0.0;
  for (const auto& c : d.components) acc += c.weight * normal_cdf((x - c.mean[0]) / std::sqrt(c.variance[0]));
  return acc;
}

void require_scalar(const HypothesisPair& h) {
  h.validate();
  if (h.f1.dim() != 1) throw std::invalid_argument("quadrature routines need scalar (k = 1) densities");
}

double signed_measure(const HypothesisPair& h, double x) {
  return h.p1 * density(h.f1, x) - h.p2() * density(h.f2, x);
}

// Class-1 decision (tie included).
bool decides_one(const HypothesisPair& h, double x) { return signed_measure(h, x) >= 0.0; }

struct ScanInterval {
  double lo;
  double hi;
};

ScanInterval scan_interval(const HypothesisPair& h, double sigma_span) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  double max_sigma = 0.0;
  for (const auto* d : {&h.f1, &h.f2}) {
    for (const auto& c : d->components) {
      lo = std::min(lo, c.mean[0]);
      hi = std::max(hi, c.mean[0]);
      max_sigma = std::max(max_sigma, std::sqrt(c.variance[0]));
    }
  }
  return {lo - sigma_span * max_sigma, hi + sigma_span * max_sigma};
}

double bisect_boundary(const HypothesisPair& h, double left, double right, double tol) {
  const bool left_side = decides_one(h, left);
  while (right - left > tol) {
    const double mid = 0.5 * (left + right);
    if (decides_one(h, mid) == left_side)
      left = mid;
    else
      right = mid;
  }
  return 0.5 * (left + right);
}

void validate_mixture(const MixtureDensity& d, const char* what) {
  try {
    d.validate();
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(std::string(what) + ": " + e.what());
  }
}

}  // namespace

void MixtureDensity::validate() const {
  if (components.empty()) throw std::invalid_argument("mixture has no components");
  const std::size_t k = dim();
  if (k == 0) throw std::invalid_argument("mixture components have zero dimension");
  double total = 0.0;
  for (const auto& c : components) {
    if (!(c.weight > 0.0)) throw std::invalid_argument("mixture weights must be positive");
    if (c.mean.size() != k || c.variance.size() != k)
      throw std::invalid_argument("mixture component dimensions disagree");
    for (double v : c.variance)
      if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument("mixture variances must be positive");
    for (double m : c.mean)
      if (!std::isfinite(m)) throw std::invalid_argument("mixture means must be finite");
    total += c.weight;
  }
  if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("mixture weights must sum to 1");
}

MixtureDensity MixtureDensity::gaussian(double mean, double variance) {
  return MixtureDensity{{GaussianComponent{1.0, {mean}, {variance}}}};
}

void HypothesisPair::validate() const {
  validate_mixture(f1, "f1");
  validate_mixture(f2, "f2");
  if (f1.dim() != f2.dim()) throw std::invalid_argument("f1 and f2 have different dimensions");
  if (!(p1 > 0.0 && p1 < 1.0)) throw std::invalid_argument("p1 must lie in (0, 1)");
}

double density(const MixtureDensity& d, std::span<const double> x) {
  if (x.size() != d.dim())
    throw std::invalid_argument("density: point has dimension " + std::to_string(x.size()) + ", mixture has " +
                                std::to_string(d.dim()));
  double acc = 0.0;
  for (const auto& c : d.components) {
    double quad = 0.0;
    double norm = 1.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
      const double diff = x[j] - c.mean[j];
      quad += diff * diff / c.variance[j];
      norm *= kInvSqrt2Pi / std::sqrt(c.variance[j]);
    }
    acc += c.weight * norm * std::exp(-0.5 * quad);
  }
  return acc;
}

double density(const MixtureDensity& d, double x) { return density(d, std::span<const double>(&x, 1)); }

int lrt_decide(const HypothesisPair& h, std::span<const double> x) {
  return h.p1 * density(h.f1, x) - h.p2() * density(h.f2, x) >= 0.0 ? 1 : 2;
}

std::vector<double> lrt_boundaries(const HypothesisPair& h, const QuadratureOptions& opt) {
  require_scalar(h);
  if (opt.panels < 2) throw std::invalid_argument("quadrature needs at least 2 panels");
  const auto [lo, hi] = scan_interval(h, opt.sigma_span);
  const double step = (hi - lo) / static_cast<double>(opt.panels);
  std::vector<double> roots;
  double prev_x = lo;
  bool prev = decides_one(h, lo);
  for (std::size_t i = 1; i <= opt.panels; ++i) {
    const double x = i == opt.panels ? hi : lo + step * static_cast<double>(i);
    const bool cur = decides_one(h, x);
    if (cur != prev) roots.push_back(bisect_boundary(h, prev_x, x, opt.root_tolerance));
    prev = cur;
    prev_x = x;
  }
  return roots;
}

ErrorRates lrt_errors_quadrature(const HypothesisPair& h, const QuadratureOptions& opt) {
  const auto roots = lrt_boundaries(h, opt);
  const auto [lo, hi] = scan_interval(h, opt.sigma_span);

  // Region i spans (edges[i], edges[i+1]); outside the scan interval the
  // decision at the nearest endpoint is extended.
  std::vector<double> edges;
  edges.push_back(-std::numeric_limits<double>::infinity());
  edges.insert(edges.end(), roots.begin(), roots.end());
  edges.push_back(std::numeric_limits<double>::infinity());

  ErrorRates r;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    const double left = edges[i], right = edges[i + 1];
    // Roots lie strictly inside (lo, hi), so the unbounded regions contain
    // the scan endpoints.
    const double probe = std::isinf(left) ? lo : (std::isinf(right) ? hi : 0.5 * (left + right));
    const bool one = decides_one(h, probe);
    const double m1 = mixture_cdf(h.f1, right) - mixture_cdf(h.f1, left);
    const double m2 = mixture_cdf(h.f2, right) - mixture_cdf(h.f2, left);
    if (one)
      r.err2 += m2;
    else
      r.err1 += m1;
  }
  r.avg = 0.5 * (r.err1 + r.err2);
  r.weighted = h.p1 * r.err1 + h.p2() * r.err2;

  double outside = 0.0;
  for (const auto* d : {&h.f1, &h.f2})
    outside = std::max(outside, mixture_cdf(*d, lo) + (1.0 - mixture_cdf(*d, hi)));
  r.coverage_warning = outside > 1e-8;
  return r;
}

double criterion_upper_bound(const HypothesisPair& h, const QuadratureOptions& opt) {
  const auto roots = lrt_boundaries(h, opt);
  const auto [lo, hi] = scan_interval(h, opt.sigma_span);
  std::vector<double> cuts{lo};
  for (double r : roots)
    if (r > lo && r < hi) cuts.push_back(r);
  cuts.push_back(hi);

  auto abs_h = [&h](double x) { return std::abs(signed_measure(h, x)); };
  double total = 0.0;
  for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
    const double a = cuts[s], b = cuts[s + 1];
    auto m = static_cast<std::size_t>(std::ceil(static_cast<double>(opt.panels) * (b - a) / (hi - lo)));
    m = std::max<std::size_t>(m, 2);
    if (m % 2) ++m;
    const double step = (b - a) / static_cast<double>(m);
    double acc = abs_h(a) + abs_h(b);
    for (std::size_t i = 1; i < m; ++i) acc += (i % 2 ? 4.0 : 2.0) * abs_h(a + step * static_cast<double>(i));
    total += acc * step / 3.0;
  }
  return total;
}

ErrorRates lrt_errors_montecarlo(const HypothesisPair& h, std::size_t n_per_class, std::uint64_t seed) {
  h.validate();
  if (n_per_class < 1) throw std::invalid_argument("n_per_class must be >= 1");
  const Matrix x1 = sample_mixture(h.f1, n_per_class, seed, "lrt_mc_class1");
  const Matrix x2 = sample_mixture(h.f2, n_per_class, seed, "lrt_mc_class2");
  std::size_t wrong1 = 0, wrong2 = 0;
  for (std::size_t i = 0; i < n_per_class; ++i) {
    if (lrt_decide(h, x1.row(i)) != 1) ++wrong1;
    if (lrt_decide(h, x2.row(i)) != 2) ++wrong2;
  }
  ErrorRates r;
  r.err1 = static_cast<double>(wrong1) / static_cast<double>(n_per_class);
  r.err2 = static_cast<double>(wrong2) / static_cast<double>(n_per_class);
  r.avg = 0.5 * (r.err1 + r.err2);
  r.weighted = h.p1 * r.err1 + h.p2() * r.err2;
  return r;
}

Posterior posterior(const HypothesisPair& h, std::span<const double> x) {
  const double a = h.p1 * density(h.f1, x);
  const double b = h.p2() * density(h.f2, x);
  const double total = a + b;
  if (!(total > 0.0)) {
    std::ostringstream os;
    os << "posterior undefined: mixture density underflows at x = [";
    for (std::size_t i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x[i];
    os << "]";
    throw std::domain_error(os.str());
  }
  const double p1x = a / total;
  return {p1x, 1.0 - p1x};
}

void DiscretePair::validate() const {
  if (f1.empty() || f1.size() != f2.size()) throw std::invalid_argument("discrete pair vectors must be equal and nonempty");
  if (!(p1 > 0.0 && p1 < 1.0)) throw std::invalid_argument("p1 must lie in (0, 1)");
  for (const auto* v : {&f1, &f2}) {
    double s = 0.0;
    for (double p : *v) {
      if (!(p >= 0.0)) throw std::invalid_argument("probabilities must be nonnegative");
      s += p;
    }
    if (std::abs(s - 1.0) > 1e-9) throw std::invalid_argument("probability vector must sum to 1");
  }
}

double discrete_criterion(const DiscretePair& d, std::span<const int> assignment, const PhiSpec& phi) {
  if (assignment.size() != d.size()) throw std::invalid_argument("assignment length does not match alphabet");
  double j = 0.0;
  for (std::size_t x = 0; x < d.size(); ++x)
    j += (d.p1 * d.f1[x] - d.p2() * d.f2[x]) * phi.phi(static_cast<double>(assignment[x]));
  return j;
}

OptimalityResult brute_force_optimality(const DiscretePair& d, const PhiSpec& phi) {
  d.validate();
  const std::size_t m = d.size();
  if (m > 20) throw std::invalid_argument("brute_force_optimality supports alphabets of at most 20 symbols");

  OptimalityResult r;
  r.lrt_assignment.resize(m);
  for (std::size_t x = 0; x < m; ++x) r.lrt_assignment[x] = d.p1 * d.f1[x] - d.p2() * d.f2[x] >= 0.0 ? 1 : -1;
  r.lrt_j = discrete_criterion(d, r.lrt_assignment, phi);

  std::vector<int> assignment(m);
  bool first = true;
  for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
    for (std::size_t x = 0; x < m; ++x) assignment[x] = (mask >> x) & 1u ? 1 : -1;
    const double j = discrete_criterion(d, assignment, phi);
    if (first || j > r.best_j) {
      r.best_j = j;
      r.best_assignment = assignment;
      first = false;
    }
  }
  return r;
}

}  // namespace lrtnet
