#include "pdfw/image_io.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

namespace pdfw {

namespace {

constexpr char kMagic[4] = {'P', 'D', 'F', 'W'};

template <typename T>
void put_le(std::vector<std::uint8_t>& out, T value) {
  using U = std::conditional_t<sizeof(T) == 8, std::uint64_t, std::uint32_t>;
  const U bits = std::bit_cast<U>(value);
  for (std::size_t i = 0; i < sizeof(U); ++i) out.push_back(static_cast<std::uint8_t>(bits >> (8 * i)));
}

template <typename T>
T get_le(std::span<const std::uint8_t> in, std::size_t at) {
  using U = std::conditional_t<sizeof(T) == 8, std::uint64_t, std::uint32_t>;
  U bits = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) bits |= static_cast<U>(in[at + i]) << (8 * i);
  return std::bit_cast<T>(bits);
}

}  // namespace

std::vector<std::uint8_t> encode_image(const ImageGrid& image) {
  image.validate();
  if (image.nx > UINT32_MAX || image.ny > UINT32_MAX) {
    throw ContractViolation("image dimensions exceed the u32 range of the file format");
  }
  std::vector<std::uint8_t> out;
  out.reserve(kImageHeaderBytes + 8 * image.size());
  out.insert(out.end(), std::begin(kMagic), std::end(kMagic));
  put_le(out, kImageFormatVersion);
  put_le(out, static_cast<std::uint32_t>(image.nx));
  put_le(out, static_cast<std::uint32_t>(image.ny));
  put_le(out, image.spacing);
  for (double v : image.values) put_le(out, v);
  return out;
}

ImageGrid decode_image(std::span<const std::uint8_t> bytes, const std::string& source) {
  if (bytes.size() < kImageHeaderBytes) {
    throw IoError(source + ": truncated header (expected at least " +
                  std::to_string(kImageHeaderBytes) + " bytes, got " + std::to_string(bytes.size()) + ")");
  }
  if (std::memcmp(bytes.data(), kMagic, 4) != 0) throw IoError(source + ": bad magic, not a PDFW image");
  const auto version = get_le<std::uint32_t>(bytes, 4);
  if (version != kImageFormatVersion) {
    throw IoError(source + ": unsupported format version " + std::to_string(version));
  }
  const auto nx = get_le<std::uint32_t>(bytes, 8);
  const auto ny = get_le<std::uint32_t>(bytes, 12);
  const auto spacing = get_le<double>(bytes, 16);
  const std::size_t count = static_cast<std::size_t>(nx) * ny;
  const std::size_t expected = kImageHeaderBytes + 8 * count;
  if (bytes.size() != expected) {
    throw IoError(source + ": payload size mismatch (expected " + std::to_string(expected) +
                  " bytes, got " + std::to_string(bytes.size()) + ")");
  }
  Vector values(count);
  for (std::size_t i = 0; i < count; ++i) values[i] = get_le<double>(bytes, kImageHeaderBytes + 8 * i);
  try {
    return ImageGrid(nx, ny, spacing, std::move(values));
  } catch (const ContractViolation& e) {
    throw IoError(source + ": invalid image contents: " + e.what());
  }
}

void write_image(const std::filesystem::path& path, const ImageGrid& image) {
  const auto bytes = encode_image(image);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path.string() + ": cannot open for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError(path.string() + ": write failed");
}

ImageGrid read_image(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path.string() + ": cannot open for reading");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_image(bytes, path.string());
}

}  // namespace pdfw
