#include "fedstlf/checkpoint.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "fedstlf/error.hpp"

namespace fedstlf::nn {
namespace {

template <typename UInt>
void put_le(std::ostream& out, UInt v) {
  std::array<char, sizeof(UInt)> bytes{};
  for (std::size_t i = 0; i < sizeof(UInt); ++i) {
    bytes[i] = static_cast<char>((v >> (8 * i)) & 0xFFu);
  }
  out.write(bytes.data(), bytes.size());
}

template <typename UInt>
UInt get_le(std::istream& in) {
  std::array<unsigned char, sizeof(UInt)> bytes{};
  in.read(reinterpret_cast<char*>(bytes.data()), bytes.size());
  if (!in) throw IoError("checkpoint: truncated file");
  UInt v = 0;
  for (std::size_t i = 0; i < sizeof(UInt); ++i) v |= static_cast<UInt>(bytes[i]) << (8 * i);
  return v;
}

}  // namespace

void write_checkpoint(std::ostream& out, const ModelParams& m) {
  m.validate();
  const auto widths = m.widths();
  out.write(kCheckpointMagic, sizeof(kCheckpointMagic));
  put_le<std::uint32_t>(out, kCheckpointVersion);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(widths.size()));
  for (std::size_t w : widths) put_le<std::uint32_t>(out, static_cast<std::uint32_t>(w));
  const auto flat = flatten(m);
  put_le<std::uint64_t>(out, flat.size());
  for (double v : flat) put_le<std::uint64_t>(out, std::bit_cast<std::uint64_t>(v));
  if (!out) throw IoError("checkpoint: write failed");
}

ModelParams read_checkpoint(std::istream& in) {
  char magic[4] = {};
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kCheckpointMagic, sizeof(magic)) != 0) {
    throw IoError("checkpoint: bad magic, not an FLSM file");
  }
  const auto version = get_le<std::uint32_t>(in);
  if (version != kCheckpointVersion) {
    throw IoError("checkpoint: unsupported version " + std::to_string(version));
  }
  const auto count = get_le<std::uint32_t>(in);
  if (count < 2 || count > 1024) throw IoError("checkpoint: implausible width count");
  std::vector<std::size_t> widths(count);
  for (auto& w : widths) w = get_le<std::uint32_t>(in);
  std::size_t expected = 0;
  try {
    expected = parameter_count(widths);
  } catch (const ConfigError& e) {
    throw IoError(std::string("checkpoint: invalid widths: ") + e.what());
  }
  const auto length = get_le<std::uint64_t>(in);
  if (length != expected) {
    throw IoError("checkpoint: vector length " + std::to_string(length) +
                  " does not match widths (" + std::to_string(expected) + ")");
  }
  std::vector<double> flat(length);
  for (auto& v : flat) v = std::bit_cast<double>(get_le<std::uint64_t>(in));
  return unflatten(flat, widths);
}

void save_checkpoint(const std::filesystem::path& path, const ModelParams& m) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  write_checkpoint(out, m);
}

ModelParams load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint " + path.string());
  return read_checkpoint(in);
}

}  // namespace fedstlf::nn
