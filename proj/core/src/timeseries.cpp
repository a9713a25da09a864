#include "fedstlf/timeseries.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include <fmt/chrono.h>
#include <fmt/format.h>

#include "fedstlf/error.hpp"

namespace fedstlf::data {
namespace {

int parse_field(std::string_view text, std::size_t pos, std::size_t len) {
  int v = 0;
  const char* first = text.data() + pos;
  const char* last = first + len;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last) throw std::invalid_argument("bad timestamp field");
  return v;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace

Timestamp parse_timestamp(std::string_view text) {
  text = trim(text);
  // 2019-01-01T00:00:00Z
  if (text.size() < 20 || text[4] != '-' || text[7] != '-' || (text[10] != 'T' && text[10] != ' ') ||
      text[13] != ':' || text[16] != ':') {
    throw std::invalid_argument("malformed timestamp '" + std::string(text) + "'");
  }
  const auto zone = text.substr(19);
  if (zone != "Z" && zone != "+00:00") {
    throw std::invalid_argument("timestamp '" + std::string(text) + "' is not UTC");
  }
  using namespace std::chrono;
  const year_month_day ymd{year{parse_field(text, 0, 4)},
                           month{static_cast<unsigned>(parse_field(text, 5, 2))},
                           day{static_cast<unsigned>(parse_field(text, 8, 2))}};
  if (!ymd.ok()) throw std::invalid_argument("invalid date in '" + std::string(text) + "'");
  const int hh = parse_field(text, 11, 2);
  const int mm = parse_field(text, 14, 2);
  const int ss = parse_field(text, 17, 2);
  if (hh > 23 || mm > 59 || ss > 59) {
    throw std::invalid_argument("invalid time in '" + std::string(text) + "'");
  }
  return sys_days{ymd} + hours{hh} + minutes{mm} + seconds{ss};
}

std::string format_timestamp(Timestamp t) { return fmt::format("{:%Y-%m-%dT%H:%M:%SZ}", t); }

TimeSeries load_client_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  const std::string file = path.string();

  TimeSeries series;
  series.client_id = path.stem().string();
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  Timestamp prev{};
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view row = trim(line);
    if (row.empty()) continue;
    if (!header_seen) {
      header_seen = true;
      if (row != "timestamp,kw") {
        throw ParseError(file + ":" + std::to_string(line_no) +
                             ": expected header 'timestamp,kw'", line_no);
      }
      continue;
    }
    const auto comma = row.find(',');
    if (comma == std::string_view::npos || row.find(',', comma + 1) != std::string_view::npos) {
      throw ParseError(file + ":" + std::to_string(line_no) + ": expected two columns", line_no);
    }
    Timestamp ts;
    try {
      ts = parse_timestamp(row.substr(0, comma));
    } catch (const std::invalid_argument& e) {
      throw ParseError(file + ":" + std::to_string(line_no) + ": " + e.what(), line_no);
    }
    const std::string_view kw_text = trim(row.substr(comma + 1));
    if (kw_text.empty()) {
      throw ParseError(file + ":" + std::to_string(line_no) + ": missing kW reading", line_no);
    }
    double kw = 0.0;
    auto [ptr, ec] = std::from_chars(kw_text.data(), kw_text.data() + kw_text.size(), kw);
    if (ec != std::errc{} || ptr != kw_text.data() + kw_text.size() || !std::isfinite(kw)) {
      throw ParseError(file + ":" + std::to_string(line_no) + ": non-numeric kW '" +
                           std::string(kw_text) + "'", line_no);
    }
    if (ts.time_since_epoch() % std::chrono::hours(1) != std::chrono::seconds(0)) {
      throw ParseError(file + ":" + std::to_string(line_no) + ": timestamp " +
                           format_timestamp(ts) + " is not hour-aligned", line_no);
    }
    if (series.values.empty()) {
      series.start = ts;
    } else if (ts != prev + series.step) {
      if (ts <= prev) {
        throw ParseError(file + ":" + std::to_string(line_no) + ": timestamp " +
                             format_timestamp(ts) + " is not ascending", line_no);
      }
      throw GapError(file + ":" + std::to_string(line_no) + ": gap before " +
                         format_timestamp(ts) + " (previous reading " +
                         format_timestamp(prev) + ")", line_no);
    }
    prev = ts;
    series.values.push_back(kw);
  }
  if (series.values.empty()) throw EmptyFileError(file + ": no readings");
  return series;
}

std::vector<TimeSeries> load_client_dir(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw IoError("data directory " + dir.string() + " does not exist");
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".csv") files.push_back(entry.path());
  }
  if (files.empty()) throw EmptyFileError("data directory " + dir.string() + " has no client CSVs");
  std::sort(files.begin(), files.end(),
            [](const auto& a, const auto& b) { return a.stem().string() < b.stem().string(); });
  std::vector<TimeSeries> out;
  out.reserve(files.size());
  for (const auto& f : files) out.push_back(load_client_csv(f));
  return out;
}

void write_client_csv(const std::filesystem::path& path, const TimeSeries& series) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << "timestamp,kw\n";
  for (std::size_t i = 0; i < series.values.size(); ++i) {
    out << format_timestamp(series.time_at(i)) << ',' << fmt::format("{:.6f}", series.values[i])
        << '\n';
  }
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace fedstlf::data
