#pragma once

#include <filesystem>
#include <iosfwd>

#include "fedstlf/lstm.hpp"

namespace fedstlf::nn {

// Binary model container, all integers and floats little-endian:
//   "FLSM" | u32 version | u32 width count | u32 widths[] | u64 length | f64 values[]
inline constexpr char kCheckpointMagic[4] = {'F', 'L', 'S', 'M'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

void write_checkpoint(std::ostream& out, const ModelParams& m);
ModelParams read_checkpoint(std::istream& in);

void save_checkpoint(const std::filesystem::path& path, const ModelParams& m);
ModelParams load_checkpoint(const std::filesystem::path& path);

}  // namespace fedstlf::nn
