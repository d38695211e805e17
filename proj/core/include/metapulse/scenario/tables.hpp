#pragma once

// Column tables written as CSV: a header row of column names, a second row of
// units, then data rows. Numbers use the shortest round-trip representation so
// equal inputs give equal bytes.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace metapulse::scenario {

/// Shortest decimal that parses back to the same double; "nan"/"inf" otherwise.
std::string format_number(double value);

struct Table {
  std::string name;  ///< file stem
  std::vector<std::string> columns;
  std::vector<std::string> units;
  std::vector<std::vector<std::optional<double>>> rows;  ///< empty cell when nullopt

  void add_row(std::vector<std::optional<double>> row);
  std::string to_csv() const;
};

/// Writes `table` as <directory>/<name>.csv and returns the path.
std::filesystem::path write_table(const std::filesystem::path& directory, const Table& table);

struct SampleFile {
  std::vector<double> t;
  std::vector<double> value;
};

/// Two numeric columns separated by commas or whitespace; lines starting with
/// '#' and non-numeric header lines are skipped.
SampleFile read_samples(const std::filesystem::path& path);
void write_samples(const std::filesystem::path& path, const SampleFile& samples);

}  // namespace metapulse::scenario
