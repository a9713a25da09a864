#pragma once

#include <chrono>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace fedstlf::data {

using Timestamp = std::chrono::sys_seconds;

// Hourly kW readings for one client, gap-free.
struct TimeSeries {
  std::string client_id;
  Timestamp start{};
  std::chrono::seconds step{std::chrono::hours(1)};
  std::vector<double> values;

  Timestamp time_at(std::size_t index) const {
    return start + step * static_cast<std::int64_t>(index);
  }
  std::size_t size() const noexcept { return values.size(); }
};

// Accepts "YYYY-MM-DDTHH:MM:SSZ" (the trailing Z may also be "+00:00").
// Throws std::invalid_argument on malformed input.
Timestamp parse_timestamp(std::string_view text);
std::string format_timestamp(Timestamp t);

// Reads a `timestamp,kw` CSV; the client id is the file stem.
TimeSeries load_client_csv(const std::filesystem::path& path);

// All `*.csv` files of a directory, ordered by client id.
std::vector<TimeSeries> load_client_dir(const std::filesystem::path& dir);

void write_client_csv(const std::filesystem::path& path, const TimeSeries& series);

}  // namespace fedstlf::data
