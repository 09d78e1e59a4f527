#include "lrtnet/data.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <numeric>
#include <random>

namespace lrtnet {

namespace {

constexpr std::uint32_t kIdxImageMagic = 0x00000803;
constexpr std::uint32_t kIdxLabelMagic = 0x00000801;

std::uint32_t read_be32(std::span<const std::uint8_t> b, std::size_t offset) {
  return (std::uint32_t{b[offset]} << 24) | (std::uint32_t{b[offset + 1]} << 16) |
         (std::uint32_t{b[offset + 2]} << 8) | std::uint32_t{b[offset + 3]};
}

std::string hex(std::uint32_t v) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "0x%08x", v);
  return buf;
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(DataErrc::io, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw DataError(DataErrc::io, "read failure on " + path.string());
  return bytes;
}

}  // namespace

std::string_view to_string(DataErrc code) {
  switch (code) {
    case DataErrc::io: return "io";
    case DataErrc::wrong_magic: return "wrong_magic";
    case DataErrc::truncated: return "truncated";
    case DataErrc::count_mismatch: return "count_mismatch";
    case DataErrc::bad_length: return "bad_length";
    case DataErrc::bad_label: return "bad_label";
    case DataErrc::missing_class: return "missing_class";
  }
  return "?";
}

void LabeledDataset::validate() const {
  if (class1.rows() == 0 || class2.rows() == 0) throw std::invalid_argument("dataset has an empty class");
  if (class1.cols() != class2.cols()) throw std::invalid_argument("dataset classes differ in input dimension");
  for (const auto* m : {&class1, &class2})
    for (double v : m->data())
      if (!std::isfinite(v)) throw std::invalid_argument("dataset contains non-finite entries");
}

Matrix sample_mixture(const MixtureDensity& d, std::size_t n, Rng& rng) {
  d.validate();
  const std::size_t k = d.dim();
  std::vector<double> weights;
  for (const auto& c : d.components) weights.push_back(c.weight);
  std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix out(n, k);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& c = d.components[pick(rng)];
    auto row = out.row(i);
    for (std::size_t j = 0; j < k; ++j) row[j] = c.mean[j] + std::sqrt(c.variance[j]) * gauss(rng);
  }
  return out;
}

Matrix sample_mixture(const MixtureDensity& d, std::size_t n, std::uint64_t seed, std::string_view stream) {
  Rng rng = substream(seed, stream);
  return sample_mixture(d, n, rng);
}

LabeledImages parse_idx(std::span<const std::uint8_t> images, std::span<const std::uint8_t> labels) {
  if (images.size() < 4) throw DataError(DataErrc::truncated, "IDX image file shorter than its magic number");
  if (const auto magic = read_be32(images, 0); magic != kIdxImageMagic)
    throw DataError(DataErrc::wrong_magic, "IDX image magic " + hex(magic) + ", expected " + hex(kIdxImageMagic));
  if (images.size() < 16) throw DataError(DataErrc::truncated, "IDX image header truncated");
  if (labels.size() < 4) throw DataError(DataErrc::truncated, "IDX label file shorter than its magic number");
  if (const auto magic = read_be32(labels, 0); magic != kIdxLabelMagic)
    throw DataError(DataErrc::wrong_magic, "IDX label magic " + hex(magic) + ", expected " + hex(kIdxLabelMagic));
  if (labels.size() < 8) throw DataError(DataErrc::truncated, "IDX label header truncated");

  const std::size_t count = read_be32(images, 4);
  const std::size_t rows = read_be32(images, 8);
  const std::size_t cols = read_be32(images, 12);
  const std::size_t label_count = read_be32(labels, 4);
  const std::size_t pixels = rows * cols;

  if (pixels != 0 && count > (images.size() - 16) / pixels)
    throw DataError(DataErrc::truncated, "IDX image payload truncated: header declares " + std::to_string(count) +
                                             " images of " + std::to_string(pixels) + " bytes");
  if (labels.size() - 8 < label_count)
    throw DataError(DataErrc::truncated, "IDX label payload truncated: header declares " +
                                             std::to_string(label_count) + " labels");
  if (count != label_count)
    throw DataError(DataErrc::count_mismatch, std::to_string(count) + " images but " + std::to_string(label_count) +
                                                  " labels");

  LabeledImages out;
  out.images = Matrix(count, pixels);
  auto& px = out.images.data();
  for (std::size_t i = 0; i < count * pixels; ++i) px[i] = static_cast<double>(images[16 + i]) / 255.0;
  out.labels.assign(labels.begin() + 8, labels.begin() + 8 + static_cast<std::ptrdiff_t>(count));
  return out;
}

LabeledImages load_idx(const std::filesystem::path& images_path, const std::filesystem::path& labels_path) {
  const auto images = read_file(images_path);
  const auto labels = read_file(labels_path);
  try {
    return parse_idx(images, labels);
  } catch (const DataError& e) {
    throw DataError(e.code(), images_path.string() + " / " + labels_path.string() + ": " + e.what());
  }
}

LabeledImages parse_cifar(std::span<const std::uint8_t> bytes, std::string_view origin) {
  if (bytes.empty() || bytes.size() % kCifarRecord != 0)
    throw DataError(DataErrc::bad_length, std::string(origin) + ": length " + std::to_string(bytes.size()) +
                                              " is not a positive multiple of " + std::to_string(kCifarRecord));
  const std::size_t n = bytes.size() / kCifarRecord;
  LabeledImages out;
  out.images = Matrix(n, 3 * kCifarPixels);
  out.labels.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto record = bytes.subspan(i * kCifarRecord, kCifarRecord);
    if (record[0] > 9)
      throw DataError(DataErrc::bad_label, std::string(origin) + ": record " + std::to_string(i) + " has label " +
                                               std::to_string(record[0]));
    out.labels[i] = record[0];
    auto row = out.images.row(i);
    for (std::size_t j = 0; j < 3 * kCifarPixels; ++j) row[j] = static_cast<double>(record[1 + j]);
  }
  return out;
}

LabeledImages load_cifar_binary(std::span<const std::filesystem::path> paths) {
  LabeledImages all;
  all.images = Matrix(0, 3 * kCifarPixels);
  for (const auto& path : paths) {
    const auto part = parse_cifar(read_file(path), path.string());
    for (std::size_t i = 0; i < part.images.rows(); ++i) all.images.append_row(part.images.row(i));
    all.labels.insert(all.labels.end(), part.labels.begin(), part.labels.end());
  }
  return all;
}

Matrix to_grayscale(const Matrix& rgb) {
  if (rgb.cols() != 3 * kCifarPixels) throw std::invalid_argument("to_grayscale expects 3072-wide RGB rows");
  Matrix gray(rgb.rows(), kCifarPixels);
  for (std::size_t i = 0; i < rgb.rows(); ++i) {
    const auto src = rgb.row(i);
    auto dst = gray.row(i);
    for (std::size_t p = 0; p < kCifarPixels; ++p)
      dst[p] = (0.299 * src[p] + 0.587 * src[kCifarPixels + p] + 0.114 * src[2 * kCifarPixels + p]) / 255.0;
  }
  return gray;
}

Standardizer Standardizer::fit(const Matrix& training) {
  if (training.rows() == 0) throw std::invalid_argument("cannot fit a standardizer on no data");
  const std::size_t n = training.rows(), k = training.cols();
  Standardizer s;
  s.mean_.assign(k, 0.0);
  s.sigma_.assign(k, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = training.row(i);
    for (std::size_t j = 0; j < k; ++j) s.mean_[j] += row[j];
  }
  for (double& m : s.mean_) m /= static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = training.row(i);
    for (std::size_t j = 0; j < k; ++j) {
      const double d = row[j] - s.mean_[j];
      s.sigma_[j] += d * d;
    }
  }
  for (double& v : s.sigma_) v = std::max(std::sqrt(v / static_cast<double>(n)), kSigmaFloor);
  return s;
}

Matrix Standardizer::apply(const Matrix& data) const {
  if (data.cols() != mean_.size()) throw std::invalid_argument("standardizer width does not match data");
  Matrix out = data;
  for (std::size_t i = 0; i < out.rows(); ++i) {
    auto row = out.row(i);
    for (std::size_t j = 0; j < row.size(); ++j) row[j] = (row[j] - mean_[j]) / sigma_[j];
  }
  return out;
}

LabeledDataset filter_binary(std::span<const std::uint8_t> labels, int class_a, int class_b, const Matrix& data,
                             FilterOptions opt, Provenance provenance) {
  if (class_a == class_b) throw std::invalid_argument("filter_binary: the two classes must differ");
  if (labels.size() != data.rows()) throw std::invalid_argument("filter_binary: label count does not match data rows");
  LabeledDataset out;
  out.provenance = provenance;
  out.class1 = Matrix(0, data.cols());
  out.class2 = Matrix(0, data.cols());
  const std::size_t cap = opt.max_per_class == 0 ? data.rows() : opt.max_per_class;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == class_a && out.class1.rows() < cap) out.class1.append_row(data.row(i));
    if (labels[i] == class_b && out.class2.rows() < cap) out.class2.append_row(data.row(i));
  }
  if (out.class1.rows() == 0) throw DataError(DataErrc::missing_class, "class " + std::to_string(class_a) + " absent");
  if (out.class2.rows() == 0) throw DataError(DataErrc::missing_class, "class " + std::to_string(class_b) + " absent");
  return out;
}

MergedIterator::MergedIterator(const LabeledDataset& data, SamplingPolicy policy, std::uint64_t seed)
    : data_(&data), policy_(policy), seed_(seed) {
  if (data.n1() == 0 || data.n2() == 0) throw std::invalid_argument("sampling needs both classes nonempty");
  if (policy_ == SamplingPolicy::permuted) {
    order_.resize(data.n1() + data.n2());
    reshuffle();
  }
}

void MergedIterator::reshuffle() {
  std::iota(order_.begin(), order_.end(), 0u);
  Rng rng = substream(seed_, "permutation", epoch_);
  std::shuffle(order_.begin(), order_.end(), rng);
  cursor_ = 0;
}

Tick MergedIterator::next() {
  Tick t;
  if (policy_ == SamplingPolicy::alternating_pairs) {
    if (cursor_ == data_->n1()) {
      cursor_ = 0;
      ++epoch_;
    }
    if (cursor2_ == data_->n2()) cursor2_ = 0;
    t.samples[0] = {data_->class1.row(cursor_), 1, cursor_};
    t.samples[1] = {data_->class2.row(cursor2_), 2, cursor2_};
    ++cursor_;
    ++cursor2_;
    t.count = 2;
    return t;
  }
  if (cursor_ == order_.size()) {
    ++epoch_;
    reshuffle();
  }
  const std::size_t merged = order_[cursor_++];
  const std::size_t n1 = data_->n1();
  if (merged < n1)
    t.samples[0] = {data_->class1.row(merged), 1, merged};
  else
    t.samples[0] = {data_->class2.row(merged - n1), 2, merged - n1};
  t.count = 1;
  return t;
}

}  // namespace lrtnet
