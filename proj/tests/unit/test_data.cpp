#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <stdexcept>

#include "../fixtures.hpp"
#include "lrtnet/data.hpp"
#include "lrtnet/oracle.hpp"

using namespace lrtnet;
namespace fx = fixtures;

namespace {

DataErrc idx_error(const fx::Bytes& images, const fx::Bytes& labels) {
  try {
    parse_idx(images, labels);
  } catch (const DataError& e) {
    return e.code();
  }
  FAIL("parse_idx accepted a malformed fixture");
  return DataErrc::io;
}

DataErrc cifar_error(const fx::Bytes& bytes) {
  try {
    parse_cifar(bytes);
  } catch (const DataError& e) {
    return e.code();
  }
  FAIL("parse_cifar accepted a malformed fixture");
  return DataErrc::io;
}

void write_bytes(const std::filesystem::path& p, const fx::Bytes& b) {
  std::ofstream out(p, std::ios::binary);
  out.write(reinterpret_cast<const char*>(b.data()), static_cast<std::streamsize>(b.size()));
}

}  // namespace

TEST_CASE("mixture sampling moments") {
  const auto x = sample_mixture(MixtureDensity::gaussian(0.0, 1.0), 1000000, 7);
  double mean = 0, sq = 0;
  for (double v : x.data()) mean += v;
  mean /= 1e6;
  for (double v : x.data()) sq += (v - mean) * (v - mean);
  CHECK(std::abs(mean) < 0.005);
  CHECK(std::abs(sq / 1e6 - 1.0) < 0.01);

  const MixtureDensity mix{{GaussianComponent{0.6, {1.0}, {1.0}}, GaussianComponent{0.4, {-3.0}, {1.0}}}};
  const auto y = sample_mixture(mix, 1000000, 7);
  double my = 0;
  for (double v : y.data()) my += v;
  CHECK(std::abs(my / 1e6 + 0.6) < 0.01);

  CHECK(sample_mixture(mix, 100, 3) == sample_mixture(mix, 100, 3));
  CHECK_FALSE(sample_mixture(mix, 100, 3) == sample_mixture(mix, 100, 4));
  CHECK_FALSE(sample_mixture(mix, 100, 3, "a") == sample_mixture(mix, 100, 3, "b"));
}

TEST_CASE("IDX parsing") {
  const auto ones = parse_idx(fx::idx_images(1, 255), fx::idx_labels({7}));
  REQUIRE(ones.images.rows() == 1);
  REQUIRE(ones.images.cols() == 784);
  for (double v : ones.images.data()) CHECK(v == 1.0);
  CHECK(ones.labels == std::vector<std::uint8_t>{7});

  // Row-major pixels keep their order; 51/255 = 0.2.
  const auto ramp = parse_idx(
      fx::idx_images(2, 2, 3, [](std::uint32_t i, std::uint32_t p) { return static_cast<std::uint8_t>(51 * (i + p)); }),
      fx::idx_labels({0, 9}));
  REQUIRE(ramp.images.cols() == 6);
  CHECK(ramp.images(0, 0) == 0.0);
  CHECK(ramp.images(0, 1) == doctest::Approx(0.2));
  CHECK(ramp.images(1, 4) == 1.0);
  CHECK(ramp.labels == std::vector<std::uint8_t>{0, 9});
}

TEST_CASE("malformed IDX fixtures yield distinct errors") {
  CHECK(idx_error(fx::idx_images(1, 0, 0x00000802), fx::idx_labels({1})) == DataErrc::wrong_magic);
  CHECK(idx_error(fx::idx_images(1, 0), fx::idx_labels({1}, 0x00000803)) == DataErrc::wrong_magic);
  CHECK(idx_error(fx::idx_images(2, 0), fx::idx_labels({1, 2, 3})) == DataErrc::count_mismatch);

  auto short_images = fx::idx_images(2, 0);
  short_images.pop_back();
  CHECK(idx_error(short_images, fx::idx_labels({1, 2})) == DataErrc::truncated);
  auto short_labels = fx::idx_labels({1, 2});
  short_labels.pop_back();
  CHECK(idx_error(fx::idx_images(2, 0), short_labels) == DataErrc::truncated);
  CHECK(idx_error(fx::Bytes{0, 0, 8, 3, 0}, fx::idx_labels({1})) == DataErrc::truncated);
}

TEST_CASE("IDX files on disk") {
  const auto dir = std::filesystem::temp_directory_path() / "lrtnet_test_idx";
  std::filesystem::create_directories(dir);
  write_bytes(dir / "img", fx::idx_images(3, 128));
  write_bytes(dir / "lbl", fx::idx_labels({4, 9, 4}));
  const auto d = load_idx(dir / "img", dir / "lbl");
  CHECK(d.images.rows() == 3);
  CHECK(d.images(2, 783) == doctest::Approx(128.0 / 255.0));
  try {
    load_idx(dir / "missing", dir / "lbl");
    FAIL("expected an io error");
  } catch (const DataError& e) {
    CHECK(e.code() == DataErrc::io);
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("CIFAR parsing") {
  const auto one = parse_cifar(fx::cifar_record(3, 0, 0, 0));
  REQUIRE(one.images.rows() == 1);
  CHECK(one.images.cols() == 3072);
  CHECK(one.labels == std::vector<std::uint8_t>{3});
  for (double v : one.images.data()) CHECK(v == 0.0);

  const auto two = parse_cifar(fx::concat(fx::cifar_record(1, 10, 20, 30), fx::cifar_record(0, 40, 50, 60)));
  REQUIRE(two.images.rows() == 2);
  CHECK(two.labels == std::vector<std::uint8_t>{1, 0});
  CHECK(two.images(0, 0) == 10.0);
  CHECK(two.images(0, 1024) == 20.0);
  CHECK(two.images(0, 3071) == 30.0);
  CHECK(two.images(1, 2048) == 60.0);

  auto long_by_one = fx::cifar_record(3, 0, 0, 0);
  long_by_one.push_back(0);
  CHECK(cifar_error(long_by_one) == DataErrc::bad_length);
  CHECK(cifar_error(fx::Bytes{}) == DataErrc::bad_length);
  CHECK(cifar_error(fx::cifar_record(10, 0, 0, 0)) == DataErrc::bad_label);
}

TEST_CASE("grayscale conversion") {
  const auto rgb = parse_cifar(fx::concat(fx::concat(fx::cifar_record(0, 0, 0, 0), fx::cifar_record(0, 77, 77, 77)),
                                          fx::cifar_record(0, 255, 0, 0)))
                       .images;
  const auto gray = to_grayscale(rgb);
  REQUIRE(gray.cols() == 1024);
  for (std::size_t p = 0; p < 1024; ++p) {
    CHECK(gray(0, p) == 0.0);
    CHECK(gray(1, p) == doctest::Approx(77.0 / 255.0).epsilon(1e-14));
    CHECK(gray(2, p) == doctest::Approx(0.299).epsilon(1e-14));
  }
  CHECK_THROWS_AS(to_grayscale(Matrix(1, 10)), std::invalid_argument);
}

TEST_CASE("standardization") {
  Matrix m;
  m.append_row(Vector{0.0, 5.0, 1.0});
  m.append_row(Vector{2.0, 5.0, 4.0});
  m.append_row(Vector{1.0, 5.0, 10.0});
  m.append_row(Vector{1.0, 5.0, -3.0});
  const auto s = Standardizer::fit(m);
  CHECK(s.sigma()[1] == Standardizer::kSigmaFloor);
  const auto t = s.apply(m);
  for (std::size_t i = 0; i < 4; ++i) CHECK(t(i, 1) == 0.0);

  Matrix two;
  two.append_row(Vector{0.0});
  two.append_row(Vector{2.0});
  const auto s2 = Standardizer::fit(two);
  CHECK(s2.mean()[0] == 1.0);
  CHECK(s2.sigma()[0] == 1.0);
  const auto t2 = s2.apply(two);
  CHECK(t2(0, 0) == -1.0);
  CHECK(t2(1, 0) == 1.0);

  for (std::size_t j : {0, 2}) {
    double mean = 0, var = 0;
    for (std::size_t i = 0; i < 4; ++i) mean += t(i, j) / 4;
    for (std::size_t i = 0; i < 4; ++i) var += (t(i, j) - mean) * (t(i, j) - mean) / 4;
    CHECK(std::abs(mean) < 1e-8);
    CHECK(std::abs(var - 1.0) < 1e-6);
  }
}

TEST_CASE("binary class filtering") {
  Matrix m;
  for (double v : {10.0, 20.0, 30.0, 40.0, 50.0}) m.append_row(Vector{v});
  const std::vector<std::uint8_t> labels{4, 9, 4, 1, 4};
  const auto d = filter_binary(labels, 4, 9, m);
  CHECK(d.n1() == 3);
  CHECK(d.n2() == 1);
  CHECK(d.class1(1, 0) == 30.0);
  CHECK(d.class2(0, 0) == 20.0);

  const auto capped = filter_binary(labels, 4, 9, m, {2});
  CHECK(capped.n1() == 2);
  CHECK(capped.class1(1, 0) == 30.0);

  const std::vector<std::uint8_t> small{4, 9, 4};
  Matrix m3;
  for (double v : {1.0, 2.0, 3.0}) m3.append_row(Vector{v});
  CHECK(filter_binary(small, 4, 9, m3).n1() == 2);
  CHECK(filter_binary(small, 4, 9, m3).n2() == 1);
  CHECK_THROWS_AS(filter_binary(small, 4, 4, m3), std::invalid_argument);
  try {
    filter_binary(small, 4, 7, m3);
    FAIL("expected a missing-class error");
  } catch (const DataError& e) {
    CHECK(e.code() == DataErrc::missing_class);
  }
}

TEST_CASE("permuted sampling visits each sample once per epoch") {
  LabeledDataset d;
  d.class1.append_row(Vector{1.0});
  d.class1.append_row(Vector{2.0});
  d.class2.append_row(Vector{-1.0});
  MergedIterator it(d, SamplingPolicy::permuted, 5);

  auto epoch = [&it] {
    std::vector<double> seen;
    for (int i = 0; i < 3; ++i) {
      const Tick t = it.next();
      REQUIRE(t.count == 1);
      const auto& s = t.samples[0];
      CHECK((s.label == 1) == (s.x[0] > 0));
      seen.push_back(s.x[0]);
    }
    return seen;
  };
  const auto e0 = epoch();
  CHECK(std::multiset<double>(e0.begin(), e0.end()) == std::multiset<double>{-1.0, 1.0, 2.0});
  CHECK(it.epoch() == 0);

  // Consecutive epochs use different permutation streams; over a handful of
  // epochs at least one order must change.
  bool changed = false;
  for (int e = 0; e < 6; ++e) {
    const auto next = epoch();
    CHECK(std::multiset<double>(next.begin(), next.end()) == std::multiset<double>{-1.0, 1.0, 2.0});
    changed |= next != e0;
  }
  CHECK(changed);
  CHECK(it.epoch() == 6);
}

TEST_CASE("alternating pairs") {
  LabeledDataset d;
  for (double v : {1.0, 2.0, 3.0}) d.class1.append_row(Vector{v});
  for (double v : {-1.0, -2.0}) d.class2.append_row(Vector{v});
  MergedIterator it(d, SamplingPolicy::alternating_pairs, 0);
  const double expect1[] = {1, 2, 3, 1, 2, 3, 1};
  const double expect2[] = {-1, -2, -1, -2, -1, -2, -1};
  for (int i = 0; i < 7; ++i) {
    const Tick t = it.next();
    REQUIRE(t.count == 2);
    CHECK(t.samples[0].label == 1);
    CHECK(t.samples[1].label == 2);
    CHECK(t.samples[0].x[0] == expect1[i]);
    CHECK(t.samples[1].x[0] == expect2[i]);
  }
  CHECK(it.epoch() == 2);
}
