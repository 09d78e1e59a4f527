#pragma once

// Hand-built IDX and CIFAR-10 byte sequences shared by the unit and
// acceptance tests.

#include <cstdint>
#include <vector>

#include "lrtnet/data.hpp"

namespace fixtures {

using Bytes = std::vector<std::uint8_t>;

inline void put_be32(Bytes& out, std::uint32_t v) {
  for (int shift = 24; shift >= 0; shift -= 8) out.push_back(static_cast<std::uint8_t>(v >> shift));
}

// IDX image file: magic, count, rows, cols, then count*rows*cols pixel bytes
// produced by pixel(image, offset).
template <class PixelFn>
Bytes idx_images(std::uint32_t count, std::uint32_t rows, std::uint32_t cols, PixelFn pixel,
                 std::uint32_t magic = 0x00000803) {
  Bytes out;
  put_be32(out, magic);
  put_be32(out, count);
  put_be32(out, rows);
  put_be32(out, cols);
  for (std::uint32_t i = 0; i < count; ++i)
    for (std::uint32_t p = 0; p < rows * cols; ++p) out.push_back(pixel(i, p));
  return out;
}

inline Bytes idx_images(std::uint32_t count, std::uint8_t value, std::uint32_t magic = 0x00000803) {
  return idx_images(count, 28, 28, [value](std::uint32_t, std::uint32_t) { return value; }, magic);
}

inline Bytes idx_labels(const std::vector<std::uint8_t>& labels, std::uint32_t magic = 0x00000801) {
  Bytes out;
  put_be32(out, magic);
  put_be32(out, static_cast<std::uint32_t>(labels.size()));
  out.insert(out.end(), labels.begin(), labels.end());
  return out;
}

// One CIFAR-10 record: label byte, then 1024 R, 1024 G, 1024 B bytes.
inline Bytes cifar_record(std::uint8_t label, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  Bytes out{label};
  out.insert(out.end(), lrtnet::kCifarPixels, r);
  out.insert(out.end(), lrtnet::kCifarPixels, g);
  out.insert(out.end(), lrtnet::kCifarPixels, b);
  return out;
}

inline Bytes concat(Bytes a, const Bytes& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

}  // namespace fixtures
