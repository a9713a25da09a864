#pragma once

#include <cstdint>
#include <span>
#include <string_view>

namespace fedstlf {

std::uint64_t splitmix64(std::uint64_t x);

// FNV-1a, stable across platforms and runs (unlike std::hash).
std::uint64_t fnv1a64(std::string_view text);
std::uint64_t fnv1a64(std::span<const double> values);

// Mixes a master seed with a stream tag, an index and a client id. Used for
// per-round and per-client RNG streams so results do not depend on the order
// in which workers run.
std::uint64_t derive_seed(std::uint64_t master, std::string_view tag, std::uint64_t index,
                          std::string_view client_id = {});

}  // namespace fedstlf
