#include "csv.hpp"

#include <charconv>
#include <optional>
#include <span>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace dvrsim::cli {

std::string format_double(double x) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

void write_csv(std::ostream& os, const trace::TraceRecord& tr, std::string_view scenario_name) {
  os << "# dvrsim trace schema_version=" << trace::kCsvSchemaVersion << " scenario=" << scenario_name
     << '\n';
  const auto& names = tr.names();
  for (std::size_t c = 0; c < names.size(); ++c) os << (c ? "," : "") << names[c];
  os << '\n';
  std::vector<std::span<const double>> cols;
  for (std::size_t c = 0; c < names.size(); ++c) cols.push_back(tr.column(c));
  std::string line;
  char buf[32];
  for (std::size_t r = 0; r < tr.rows(); ++r) {
    line.clear();
    for (std::size_t c = 0; c < cols.size(); ++c) {
      if (c) line.push_back(',');
      const auto res = std::to_chars(buf, buf + sizeof buf, cols[c][r]);
      line.append(buf, res.ptr);
    }
    line.push_back('\n');
    os << line;
  }
}

namespace {

std::vector<std::string_view> split(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = s.find(',', start);
    out.push_back(s.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace

trace::TraceRecord read_csv(std::istream& is) {
  std::string line;
  std::size_t lineno = 0;
  std::optional<trace::TraceRecord> tr;
  std::vector<double> row;
  auto fail = [&](const std::string& what) {
    throw std::runtime_error("CSV line " + std::to_string(lineno) + ": " + what);
  };
  while (std::getline(is, line)) {
    ++lineno;
    const std::string_view sv = trim(line);
    if (sv.empty() || sv.front() == '#') continue;
    const auto fields = split(sv);
    if (!tr) {
      std::vector<std::string> names;
      for (auto f : fields) names.emplace_back(trim(f));
      tr.emplace(std::move(names));
      row.resize(tr->cols());
      continue;
    }
    if (fields.size() != row.size()) fail("expected " + std::to_string(row.size()) + " fields");
    for (std::size_t c = 0; c < fields.size(); ++c) {
      const auto f = trim(fields[c]);
      const auto res = std::from_chars(f.data(), f.data() + f.size(), row[c]);
      if (res.ec != std::errc{} || res.ptr != f.data() + f.size()) {
        fail("bad number '" + std::string(f) + "'");
      }
    }
    tr->append(row);
  }
  if (!tr) throw std::runtime_error("CSV has no header row");
  return std::move(*tr);
}

}  // namespace dvrsim::cli
