#include "metapulse/scenario/tables.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "metapulse/errors.hpp"

namespace metapulse::scenario {

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (value == 0.0) return "0";  // folds -0
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

void Table::add_row(std::vector<std::optional<double>> row) {
  if (row.size() != columns.size()) {
    throw InvalidParameter("Table " + name + ": row has " + std::to_string(row.size()) + " cells, expected " +
                           std::to_string(columns.size()));
  }
  rows.push_back(std::move(row));
}

namespace {

void join(std::string& out, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out += ',';
    out += cells[i];
  }
  out += '\n';
}

}  // namespace

std::string Table::to_csv() const {
  std::string out;
  join(out, columns);
  join(out, units);
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      if (row[i]) out += format_number(*row[i]);
    }
    out += '\n';
  }
  return out;
}

std::filesystem::path write_table(const std::filesystem::path& directory, const Table& table) {
  const auto path = directory / (table.name + ".csv");
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << table.to_csv();
  return path;
}

namespace {

bool parse_double(std::string_view s, double& out) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc() && res.ptr == s.data() + s.size() && !s.empty();
}

}  // namespace

SampleFile read_samples(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw InvalidParameter("cannot open sample file " + path.string());
  SampleFile out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    for (char& ch : line) {
      if (ch == ',' || ch == ';' || ch == '\t') ch = ' ';
    }
    std::istringstream ss(line);
    std::string a, b, extra;
    if (!(ss >> a)) continue;
    ss >> b >> extra;
    double t = 0.0;
    double v = 0.0;
    if (!parse_double(a, t) || !parse_double(b, v) || !extra.empty()) {
      if (out.t.empty()) continue;  // header line
      throw InvalidParameter(path.string() + ":" + std::to_string(lineno) + ": expected two numbers");
    }
    if (!out.t.empty() && !(t > out.t.back())) {
      throw InvalidParameter(path.string() + ":" + std::to_string(lineno) + ": times must increase");
    }
    out.t.push_back(t);
    out.value.push_back(v);
  }
  if (out.t.size() < 2) throw InvalidParameter(path.string() + ": fewer than two samples");
  return out;
}

void write_samples(const std::filesystem::path& path, const SampleFile& samples) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << "# t,value\n";
  for (std::size_t i = 0; i < samples.t.size(); ++i) {
    f << format_number(samples.t[i]) << ',' << format_number(samples.value[i]) << '\n';
  }
}

}  // namespace metapulse::scenario
