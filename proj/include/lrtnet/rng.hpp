#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace lrtnet {

using Rng = std::mt19937_64;

// Independent generator for a named purpose ("init", "train", "test", ...)
// derived from the run seed. `index` separates repeated uses of one purpose,
// e.g. the epoch number for permutations.
Rng substream(std::uint64_t seed, std::string_view name, std::uint64_t index = 0);

}  // namespace lrtnet
