#pragma once

#include <cstdint>
#include <filesystem>
#include <span>

#include <nlohmann/json_fwd.hpp>

#include "lrtnet/loss.hpp"
#include "lrtnet/matrix.hpp"

namespace lrtnet {

// Two-layer network  U = A x + a,  Z = relu(U),  z = B'Z + b,  y = omega(z).
// A is n x k, stored row-major by hidden unit.
struct NetParams {
  Matrix A;
  Vector a;
  Vector B;
  double b = 0.0;

  std::size_t hidden() const { return a.size(); }
  std::size_t inputs() const { return A.cols(); }
  bool consistent() const { return A.rows() == a.size() && a.size() == B.size(); }
  bool all_finite() const;

  friend bool operator==(const NetParams&, const NetParams&) = default;
};

struct ForwardTrace {
  Vector U;
  Vector Z;
  double z = 0.0;
  double y = 0.0;
};

// Gradients of omega(z) with respect to A, a, B, b.
struct ParamGradient {
  Matrix gA;
  Vector ga;
  Vector gB;
  double gb = 0.0;
};

NetParams zero_params(std::size_t n, std::size_t k);

// Glorot-uniform A and B, a = 0, b = 0.
NetParams glorot_init(std::size_t n, std::size_t k, std::uint64_t seed);

ForwardTrace forward(const NetParams& params, std::span<const double> x, const OutputNonlinearity& omega);

// Pre-output z without materializing the trace.
double pre_output(const NetParams& params, std::span<const double> x);

ParamGradient gradient(const NetParams& params, std::span<const double> x, const ForwardTrace& trace,
                       const OutputNonlinearity& omega);

// scale * grad(z): the gradient of any scalar function of z given its derivative.
void scaled_pre_output_gradient(const NetParams& params, std::span<const double> x, const ForwardTrace& trace,
                                double scale, ParamGradient& out);

// Checkpoints. Binary layout, little-endian: u64 n, u64 k, then A row-major,
// a, B, b as IEEE-754 doubles.
void save_checkpoint(const NetParams& params, const std::filesystem::path& path);
NetParams load_checkpoint(const std::filesystem::path& path);

void to_json(nlohmann::json& j, const NetParams& p);
void from_json(const nlohmann::json& j, NetParams& p);

}  // namespace lrtnet
