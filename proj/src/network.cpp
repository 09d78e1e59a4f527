#include "lrtnet/network.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "lrtnet/rng.hpp"

namespace lrtnet {

namespace {

void require_shape(const NetParams& p, std::size_t x_len) {
  if (!p.consistent()) throw std::invalid_argument("inconsistent network parameter shapes");
  if (x_len != p.inputs())
    throw std::invalid_argument("input length " + std::to_string(x_len) + " does not match k = " +
                                std::to_string(p.inputs()));
}

bool finite_all(std::span<const double> v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

static_assert(std::endian::native == std::endian::little, "checkpoint I/O assumes a little-endian host");

}  // namespace

bool NetParams::all_finite() const {
  return finite_all(A.data()) && finite_all(a) && finite_all(B) && std::isfinite(b);
}

NetParams zero_params(std::size_t n, std::size_t k) {
  NetParams p;
  p.A = Matrix(n, k);
  p.a.assign(n, 0.0);
  p.B.assign(n, 0.0);
  return p;
}

NetParams glorot_init(std::size_t n, std::size_t k, std::uint64_t seed) {
  if (n < 1 || k < 1) throw std::invalid_argument("glorot_init requires n, k >= 1");
  NetParams p = zero_params(n, k);
  Rng rng = substream(seed, "init");
  const double limit_a = std::sqrt(6.0 / static_cast<double>(k + n));
  const double limit_b = std::sqrt(6.0 / static_cast<double>(n + 1));
  std::uniform_real_distribution<double> ua(-limit_a, limit_a);
  std::uniform_real_distribution<double> ub(-limit_b, limit_b);
  for (double& v : p.A.data()) v = ua(rng);
  for (double& v : p.B) v = ub(rng);
  return p;
}

ForwardTrace forward(const NetParams& params, std::span<const double> x, const OutputNonlinearity& omega) {
  require_shape(params, x.size());
  const std::size_t n = params.hidden();
  ForwardTrace t;
  t.U.resize(n);
  t.Z.resize(n);
  double z = params.b;
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = params.A.row(i);
    double u = params.a[i];
    for (std::size_t j = 0; j < x.size(); ++j) u += row[j] * x[j];
    t.U[i] = u;
    t.Z[i] = u > 0.0 ? u : 0.0;
    z += params.B[i] * t.Z[i];
  }
  t.z = z;
  t.y = omega.omega(z);
  return t;
}

double pre_output(const NetParams& params, std::span<const double> x) {
  require_shape(params, x.size());
  double z = params.b;
  for (std::size_t i = 0; i < params.hidden(); ++i) {
    const auto row = params.A.row(i);
    double u = params.a[i];
    for (std::size_t j = 0; j < x.size(); ++j) u += row[j] * x[j];
    if (u > 0.0) z += params.B[i] * u;
  }
  return z;
}

void scaled_pre_output_gradient(const NetParams& params, std::span<const double> x, const ForwardTrace& trace,
                                double scale, ParamGradient& out) {
  require_shape(params, x.size());
  const std::size_t n = params.hidden();
  const std::size_t k = params.inputs();
  if (trace.U.size() != n || trace.Z.size() != n) throw std::invalid_argument("trace does not match network");
  if (out.gA.rows() != n || out.gA.cols() != k) out.gA = Matrix(n, k);
  out.ga.resize(n);
  out.gB.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    // relu'(u) = 1 for u > 0, 0 otherwise (including u == 0)
    const double back = trace.U[i] > 0.0 ? scale * params.B[i] : 0.0;
    out.ga[i] = back;
    out.gB[i] = scale * trace.Z[i];
    auto row = out.gA.row(i);
    if (back == 0.0) {
      std::fill(row.begin(), row.end(), 0.0);
    } else {
      for (std::size_t j = 0; j < k; ++j) row[j] = back * x[j];
    }
  }
  out.gb = scale;
}

ParamGradient gradient(const NetParams& params, std::span<const double> x, const ForwardTrace& trace,
                       const OutputNonlinearity& omega) {
  ParamGradient g;
  scaled_pre_output_gradient(params, x, trace, omega.omega_prime(trace.z), g);
  return g;
}

void save_checkpoint(const NetParams& params, const std::filesystem::path& path) {
  if (!params.consistent()) throw std::invalid_argument("refusing to save inconsistent parameters");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open checkpoint for writing: " + path.string());
  const std::uint64_t header[2] = {params.hidden(), params.inputs()};
  out.write(reinterpret_cast<const char*>(header), sizeof(header));
  auto put = [&out](std::span<const double> v) {
    out.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size_bytes()));
  };
  put(params.A.data());
  put(params.a);
  put(params.B);
  put(std::span<const double>(&params.b, 1));
  if (!out) throw std::runtime_error("failed writing checkpoint: " + path.string());
}

NetParams load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open checkpoint: " + path.string());
  std::uint64_t header[2] = {0, 0};
  if (!in.read(reinterpret_cast<char*>(header), sizeof(header)))
    throw std::runtime_error("truncated checkpoint header: " + path.string());
  const std::uint64_t n = header[0], k = header[1];
  if (n == 0 || k == 0 || n > (1u << 24) || k > (1u << 24))
    throw std::runtime_error("implausible checkpoint dimensions in " + path.string());
  NetParams p = zero_params(n, k);
  auto get = [&](std::span<double> v) {
    if (!in.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(v.size_bytes())))
      throw std::runtime_error("truncated checkpoint payload: " + path.string());
  };
  get(p.A.data());
  get(p.a);
  get(p.B);
  get(std::span<double>(&p.b, 1));
  if (in.peek() != std::char_traits<char>::eof())
    throw std::runtime_error("trailing bytes in checkpoint: " + path.string());
  return p;
}

void to_json(nlohmann::json& j, const NetParams& p) {
  j = nlohmann::json{{"n", p.hidden()}, {"k", p.inputs()}, {"A", p.A.data()}, {"a", p.a}, {"B", p.B}, {"b", p.b}};
}

void from_json(const nlohmann::json& j, NetParams& p) {
  const auto n = j.at("n").get<std::size_t>();
  const auto k = j.at("k").get<std::size_t>();
  p = zero_params(n, k);
  p.A.data() = j.at("A").get<std::vector<double>>();
  p.a = j.at("a").get<Vector>();
  p.B = j.at("B").get<Vector>();
  p.b = j.at("b").get<double>();
  if (p.A.data().size() != n * k || !p.consistent()) throw std::invalid_argument("checkpoint JSON has inconsistent shapes");
}

}  // namespace lrtnet
