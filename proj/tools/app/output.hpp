#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace exospin::app {

/// Header row plus rows of numbers written with 17 significant digits.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);

  void row(const std::vector<double>& values);
  void close();

 private:
  std::filesystem::path path_;
  std::ofstream out_;
  std::size_t columns_;
};

std::string format_double(double v);

/// Lowercase hex SHA-256 of the file contents.
std::string sha256_file(const std::filesystem::path& path);

/// Writes `j` followed by a newline.
void write_json(const std::filesystem::path& path, const nlohmann::json& j);

/// UTC timestamp, ISO 8601.
std::string utc_now();

/// manifest.json in `dir`: config snapshot, version, timestamps and the
/// checksum of every file (paths relative to `dir`).
std::filesystem::path write_manifest(const std::filesystem::path& dir, const nlohmann::json& config,
                                     const std::vector<std::filesystem::path>& files,
                                     const std::string& started, const std::string& finished);

/// Files whose current checksum differs from the manifest (empty when all match).
std::vector<std::string> verify_manifest(const std::filesystem::path& manifest);

}  // namespace exospin::app
