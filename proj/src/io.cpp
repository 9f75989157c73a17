#include "frontlab/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace frontlab {

std::string fmt17(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double parse17(const std::string& s) {
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  std::size_t pos = 0;
  const double v = std::stod(s, &pos);
  if (pos != s.size()) throw std::invalid_argument("parse17: trailing junk in '" + s + "'");
  return v;
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t fnv1a64_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("fnv1a64_file: cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return fnv1a64(ss.str());
}

std::string hex64(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

CsvWriter::CsvWriter(std::filesystem::path path, std::vector<std::string> columns,
                     std::vector<std::string> comments)
    : path_(std::move(path)), n_columns_(columns.size()) {
  for (const auto& c : comments) buffer_ += "# " + c + "\n";
  for (std::size_t i = 0; i < columns.size(); ++i) {
    buffer_ += columns[i];
    buffer_ += (i + 1 < columns.size()) ? ',' : '\n';
  }
}

void CsvWriter::row(const std::vector<double>& values) {
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (double v : values) cells.push_back(fmt17(v));
  raw_row(cells);
}

void CsvWriter::raw_row(const std::vector<std::string>& cells) {
  if (cells.size() != n_columns_) {
    throw std::invalid_argument("CsvWriter: row width mismatch");
  }
  for (std::size_t i = 0; i < cells.size(); ++i) {
    buffer_ += cells[i];
    buffer_ += (i + 1 < cells.size()) ? ',' : '\n';
  }
}

void CsvWriter::close() {
  if (!open_) return;
  open_ = false;
  std::ofstream out(path_, std::ios::binary);
  if (!out) throw std::runtime_error("CsvWriter: cannot open " + path_.string());
  out << buffer_;
}

CsvWriter::~CsvWriter() {
  try {
    close();
  } catch (...) {
  }
}

const std::vector<double>& CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) return data[i];
  }
  throw std::out_of_range("CsvTable: no column '" + name + "'");
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_csv: cannot open " + path.string());
  CsvTable table;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::string c = line.substr(1);
      if (!c.empty() && c[0] == ' ') c = c.substr(1);
      table.comments.push_back(c);
      continue;
    }
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!header_seen) {
      table.columns = cells;
      table.data.resize(cells.size());
      header_seen = true;
      continue;
    }
    if (cells.size() != table.columns.size()) {
      throw std::runtime_error("read_csv: ragged row in " + path.string());
    }
    for (std::size_t i = 0; i < cells.size(); ++i) {
      table.data[i].push_back(parse17(cells[i]));
    }
  }
  return table;
}

void Manifest::add_input(const std::string& description) { inputs_.push_back(description); }

void Manifest::add_config(const std::string& key, const std::string& value) {
  config_[key] = value;
}

void Manifest::add_output(const std::filesystem::path& file) { outputs_.push_back(file); }

std::uint64_t Manifest::config_hash() const {
  std::string canon;
  for (const auto& [k, v] : config_) canon += k + "=" + v + "\n";
  return fnv1a64(canon);
}

void Manifest::write(const std::filesystem::path& dir) const {
  nlohmann::json j;
  j["subcommand"] = subcommand_;
  j["inputs"] = inputs_;
  j["config"] = config_;
  j["config_hash"] = hex64(config_hash());
  nlohmann::json files = nlohmann::json::array();
  for (const auto& f : outputs_) {
    nlohmann::json entry;
    entry["file"] = std::filesystem::relative(f, dir).generic_string();
    entry["fnv1a64"] = hex64(fnv1a64_file(f));
    files.push_back(entry);
  }
  j["outputs"] = files;
  std::ofstream out(dir / "manifest.json");
  if (!out) throw std::runtime_error("Manifest: cannot write manifest.json");
  out << j.dump(2) << "\n";
}

}  // namespace frontlab
