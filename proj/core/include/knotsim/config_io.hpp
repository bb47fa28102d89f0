#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "knotsim/geometry.hpp"

namespace knotsim {

// On-disk layout, little-endian:
//   "KNOT" | u32 version = 1 | u32 bead count | count x 3 float64 (x, y, z)
inline constexpr std::uint32_t kKnotFileVersion = 1;

std::vector<std::uint8_t> encode_configuration(const KnotConfiguration& config);
KnotConfiguration decode_configuration(std::span<const std::uint8_t> bytes);

void save_configuration(const KnotConfiguration& config, const std::filesystem::path& path);
KnotConfiguration load_configuration(const std::filesystem::path& path);

}  // namespace knotsim
