#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "pdfw/ct_testbed.hpp"

namespace pdfw {

/// Binary image layout, all little-endian:
///   "PDFW" | u32 version (=1) | u32 nx | u32 ny | f64 spacing | nx*ny f64 values (row-major)
inline constexpr std::uint32_t kImageFormatVersion = 1;
inline constexpr std::size_t kImageHeaderBytes = 4 + 4 + 4 + 4 + 8;

std::vector<std::uint8_t> encode_image(const ImageGrid& image);
/// `source` names the origin of the bytes in error messages.
ImageGrid decode_image(std::span<const std::uint8_t> bytes, const std::string& source);

void write_image(const std::filesystem::path& path, const ImageGrid& image);
ImageGrid read_image(const std::filesystem::path& path);

}  // namespace pdfw
