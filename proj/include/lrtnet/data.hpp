#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "lrtnet/matrix.hpp"
#include "lrtnet/oracle.hpp"
#include "lrtnet/rng.hpp"

namespace lrtnet {

enum class DataErrc {
  io,
  wrong_magic,
  truncated,
  count_mismatch,
  bad_length,
  bad_label,
  missing_class,
};

std::string_view to_string(DataErrc code);

class DataError : public std::runtime_error {
 public:
  DataError(DataErrc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  DataErrc code() const { return code_; }

 private:
  DataErrc code_;
};

enum class Provenance { synthetic, mnist, cifar, custom };

struct LabeledDataset {
  Matrix class1;  // N1 x k
  Matrix class2;  // N2 x k
  Provenance provenance = Provenance::custom;

  std::size_t k() const { return class1.cols(); }
  std::size_t n1() const { return class1.rows(); }
  std::size_t n2() const { return class2.rows(); }
  const Matrix& of(int label) const { return label == 1 ? class1 : class2; }
  // Throws std::invalid_argument on empty classes, mismatched widths or
  // non-finite entries.
  void validate() const;
};

// i.i.d. draws; the component is chosen by weight, then a diagonal Gaussian draw.
Matrix sample_mixture(const MixtureDensity& d, std::size_t n, Rng& rng);
Matrix sample_mixture(const MixtureDensity& d, std::size_t n, std::uint64_t seed, std::string_view stream = "sample");

// --- MNIST IDX -------------------------------------------------------------

struct LabeledImages {
  Matrix images;  // N x (rows*cols); IDX pixels are scaled to [0, 1], CIFAR pixels kept on [0, 255]
  std::vector<std::uint8_t> labels;
};

// Pixel bytes are divided by 255. Image magic 0x00000803, label magic 0x00000801.
LabeledImages parse_idx(std::span<const std::uint8_t> images, std::span<const std::uint8_t> labels);
LabeledImages load_idx(const std::filesystem::path& images_path, const std::filesystem::path& labels_path);

// --- CIFAR-10 binary ---------------------------------------------------------

inline constexpr std::size_t kCifarPixels = 1024;
inline constexpr std::size_t kCifarRecord = 1 + 3 * kCifarPixels;

// Records are 1 label byte followed by 1024 R, 1024 G, 1024 B bytes. Values
// are returned unscaled (0..255) in R, G, B plane order.
LabeledImages parse_cifar(std::span<const std::uint8_t> bytes, std::string_view origin = "<memory>");
LabeledImages load_cifar_binary(std::span<const std::filesystem::path> paths);

// 0.299 R + 0.587 G + 0.114 B, then / 255.
Matrix to_grayscale(const Matrix& rgb);

// --- preprocessing -----------------------------------------------------------

class Standardizer {
 public:
  static constexpr double kSigmaFloor = 1e-8;

  // Population mean / standard deviation per coordinate.
  static Standardizer fit(const Matrix& training);

  Matrix apply(const Matrix& data) const;

  const Vector& mean() const { return mean_; }
  const Vector& sigma() const { return sigma_; }

 private:
  Vector mean_;
  Vector sigma_;
};

struct FilterOptions {
  std::size_t max_per_class = 0;  // 0 keeps every occurrence
};

// class1 = rows labelled class_a, class2 = rows labelled class_b, in corpus
// order, keeping the first max_per_class of each.
LabeledDataset filter_binary(std::span<const std::uint8_t> labels, int class_a, int class_b, const Matrix& data,
                             FilterOptions opt = {}, Provenance provenance = Provenance::custom);

// --- sampling ----------------------------------------------------------------

enum class SamplingPolicy { permuted, alternating_pairs };

struct SampleRef {
  std::span<const double> x;
  int label = 1;
  std::size_t index = 0;  // row within its class
};

// One training tick: a single sample (permuted) or a class-1/class-2 pair.
struct Tick {
  std::array<SampleRef, 2> samples;
  std::size_t count = 0;

  auto begin() const { return samples.begin(); }
  auto end() const { return samples.begin() + static_cast<std::ptrdiff_t>(count); }
};

// Label-preserving stream over the merged dataset. Permuted draws a fresh
// permutation for each epoch from substream(seed, "permutation", epoch).
// AlternatingPairs walks both classes in order, each cycling on its own.
class MergedIterator {
 public:
  MergedIterator(const LabeledDataset& data, SamplingPolicy policy, std::uint64_t seed);

  Tick next();
  std::uint64_t epoch() const { return epoch_; }

 private:
  void reshuffle();

  const LabeledDataset* data_;
  SamplingPolicy policy_;
  std::uint64_t seed_;
  std::uint64_t epoch_ = 0;
  std::vector<std::uint32_t> order_;  // merged index: < N1 is class 1
  std::size_t cursor_ = 0;
  std::size_t cursor2_ = 0;
};

}  // namespace lrtnet
