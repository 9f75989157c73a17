#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace frontlab {

/// Formats a double with 17 significant digits (lossless round-trip).
/// Infinities are written as "inf"/"-inf", NaN as "nan".
std::string fmt17(double v);

/// Parses fmt17 output back, including the inf/nan sentinels.
double parse17(const std::string& s);

/// FNV-1a 64-bit hash of a byte string.
std::uint64_t fnv1a64(const std::string& bytes);

/// FNV-1a 64-bit hash of a file's contents.
std::uint64_t fnv1a64_file(const std::filesystem::path& path);

std::string hex64(std::uint64_t v);

/// Column-oriented CSV with '#'-prefixed header comment lines.
class CsvWriter {
 public:
  CsvWriter(std::filesystem::path path, std::vector<std::string> columns,
            std::vector<std::string> comments = {});
  void row(const std::vector<double>& values);
  void raw_row(const std::vector<std::string>& cells);
  void close();
  ~CsvWriter();

 private:
  std::filesystem::path path_;
  std::string buffer_;
  std::size_t n_columns_;
  bool open_ = true;
};

struct CsvTable {
  std::vector<std::string> comments;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> data;  // data[c][r], column-major

  std::size_t rows() const { return data.empty() ? 0 : data[0].size(); }
  const std::vector<double>& column(const std::string& name) const;
};

CsvTable read_csv(const std::filesystem::path& path);

/// Run manifest: declares every produced file so outputs are auditable.
class Manifest {
 public:
  explicit Manifest(std::string subcommand) : subcommand_(std::move(subcommand)) {}
  void add_input(const std::string& description);
  void add_config(const std::string& key, const std::string& value);
  void add_output(const std::filesystem::path& file);
  std::uint64_t config_hash() const;
  void write(const std::filesystem::path& dir) const;

 private:
  std::string subcommand_;
  std::vector<std::string> inputs_;
  std::map<std::string, std::string> config_;
  std::vector<std::filesystem::path> outputs_;
};

}  // namespace frontlab
