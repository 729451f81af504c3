#pragma once

#include <cstdint>

#include "glab/random.hpp"

namespace glab {

// Independent random streams drawn for one realization.
enum class SeedStream : std::uint32_t {
  Disorder = 0,  // model couplings and fields
  Probe = 1,     // random probe operators (O_B)
};

/// Seed of stream `stream` of realization `realization` under `master`.
///
///   seed = mix64(mix64(master) ^ (realization << 32 | stream))
///
/// mix64 is a bijection, so for a fixed master distinct (realization, stream)
/// pairs (realization < 2^32) always give distinct seeds. Sweep points share
/// a realization's streams: a sweep over n_loc or gamma compares the same
/// disorder at every point.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t realization,
                                    std::uint32_t stream) noexcept {
  return mix64(mix64(master) ^ ((realization << 32) | stream));
}

constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t realization,
                                    SeedStream stream) noexcept {
  return derive_seed(master, realization, static_cast<std::uint32_t>(stream));
}

}  // namespace glab
