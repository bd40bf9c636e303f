#include "dmdkit/csv.hpp"

#include "dmdkit/error.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>
#include <unordered_map>

namespace dmdkit {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::string_view unquote(std::string_view s) {
  s = trim(s);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

bool parse_number(std::string_view cell, double& value) {
  cell = unquote(cell);
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  if (cell.empty()) return false;
  const auto* end = cell.data() + cell.size();
  auto [ptr, ec] = std::from_chars(cell.data(), end, value);
  return ec == std::errc() && ptr == end && std::isfinite(value);
}

}  // namespace

TimeSeriesFrame parse_csv(std::istream& in, const CsvSelection& selection) {
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("CSV input is empty (header row required)");
  std::vector<std::string> header;
  for (auto field : split_fields(line)) header.emplace_back(unquote(field));

  std::unordered_map<std::string, std::size_t> position;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (!position.emplace(header[i], i).second) throw ValidationError("duplicate CSV column '" + header[i] + "'");
  }
  auto column_of = [&](const std::string& name) {
    auto it = position.find(name);
    if (it == position.end()) throw ValidationError("CSV has no column '" + name + "'");
    return it->second;
  };

  std::optional<std::size_t> time_pos;
  if (selection.time_column) time_pos = column_of(*selection.time_column);

  std::vector<std::string> names = selection.columns;
  if (names.empty()) {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (!time_pos || i != *time_pos) names.push_back(header[i]);
    }
  }
  std::vector<std::size_t> picks;
  for (const auto& name : names) picks.push_back(column_of(name));

  std::vector<double> flat;
  std::vector<double> times;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    ++row;
    const auto fields = split_fields(line);
    if (fields.size() != header.size()) {
      throw ParseError("CSV row " + std::to_string(row) + " has " + std::to_string(fields.size()) +
                           " fields, header has " + std::to_string(header.size()),
                       row, "");
    }
    auto cell = [&](std::size_t pos) {
      double v = 0.0;
      if (!parse_number(fields[pos], v)) {
        throw ParseError("CSV row " + std::to_string(row) + ", column '" + header[pos] +
                             "': cannot parse '" + std::string(trim(fields[pos])) + "' as a finite number",
                         row, header[pos]);
      }
      return v;
    };
    if (time_pos) times.push_back(cell(*time_pos));
    for (auto pos : picks) flat.push_back(cell(pos));
  }
  if (row < 2) throw ValidationError("CSV needs at least 2 data rows, found " + std::to_string(row));

  double dt = 0.0;
  double t0 = selection.t0;
  if (time_pos) {
    const double grid_dt = validate_uniform_sampling(times, selection.rel_tol);
    t0 = times.front();
    dt = grid_dt;
    if (selection.dt) {
      if (std::abs(*selection.dt - grid_dt) > selection.rel_tol * grid_dt) {
        throw ValidationError("explicit dt " + format_double(*selection.dt) + " disagrees with time column step " +
                              format_double(grid_dt));
      }
      dt = *selection.dt;
    }
  } else {
    if (!selection.dt) throw ValidationError("no time column selected and no explicit dt given");
    dt = *selection.dt;
  }

  const auto n = static_cast<Index>(picks.size());
  Eigen::MatrixXd values(static_cast<Index>(row), n);
  for (Index r = 0; r < values.rows(); ++r) {
    for (Index c = 0; c < n; ++c) values(r, c) = flat[static_cast<std::size_t>(r * n + c)];
  }
  return TimeSeriesFrame(std::move(names), t0, dt, std::move(values));
}

TimeSeriesFrame load_csv(const std::filesystem::path& path, const CsvSelection& selection) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open CSV file '" + path.string() + "'");
  return parse_csv(in, selection);
}

std::string format_double(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void write_csv(std::ostream& out, const TimeSeriesFrame& frame, const std::string& time_column) {
  out << time_column;
  for (const auto& name : frame.channel_names()) out << ',' << name;
  out << '\n';
  for (Index r = 0; r < frame.samples(); ++r) {
    out << format_double(frame.time_at(r));
    for (Index c = 0; c < frame.channels(); ++c) out << ',' << format_double(frame.values()(r, c));
    out << '\n';
  }
}

void write_csv(const std::filesystem::path& path, const TimeSeriesFrame& frame, const std::string& time_column) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write CSV file '" + path.string() + "'");
  write_csv(out, frame, time_column);
  if (!out) throw ValidationError("write failed for '" + path.string() + "'");
}

}  // namespace dmdkit
