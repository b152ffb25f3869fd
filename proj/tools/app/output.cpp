#include "output.hpp"

#include <array>
#include <chrono>
#include <ctime>
#include <stdexcept>

#include <fmt/format.h>
#include <openssl/evp.h>

#include "exospin/version.hpp"

namespace exospin::app {

namespace fs = std::filesystem;

CsvWriter::CsvWriter(const fs::path& path, const std::vector<std::string>& header)
    : path_(path), out_(path), columns_(header.size()) {
  if (!out_) throw std::runtime_error("cannot write '" + path.string() + "'");
  for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
  out_ << '\n';
}

void CsvWriter::row(const std::vector<double>& values) {
  if (values.size() != columns_) throw std::logic_error("csv row has the wrong number of columns");
  std::string line;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) line += ',';
    line += format_double(values[i]);
  }
  out_ << line << '\n';
}

void CsvWriter::close() {
  out_.close();
  if (!out_) throw std::runtime_error("failed writing '" + path_.string() + "'");
}

std::string format_double(double v) { return fmt::format("{:.17g}", v); }

std::string sha256_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path.string() + "' for hashing");
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (!ctx || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1) {
    EVP_MD_CTX_free(ctx);
    throw std::runtime_error("sha256 init failed");
  }
  std::array<char, 1 << 16> buf{};
  while (in) {
    in.read(buf.data(), buf.size());
    if (in.gcount() > 0) EVP_DigestUpdate(ctx, buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, md.data(), &len);
  EVP_MD_CTX_free(ctx);
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", md[i]);
  return hex;
}

void write_json(const fs::path& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << j.dump(2) << '\n';
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::array<char, 32> buf{};
  std::strftime(buf.data(), buf.size(), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf.data();
}

fs::path write_manifest(const fs::path& dir, const nlohmann::json& config,
                        const std::vector<fs::path>& files, const std::string& started,
                        const std::string& finished) {
  nlohmann::json outputs = nlohmann::json::array();
  for (const auto& f : files) {
    outputs.push_back({{"path", fs::relative(f, dir).generic_string()},
                       {"sha256", sha256_file(f)},
                       {"bytes", fs::file_size(f)}});
  }
  const nlohmann::json m{{"artifact", "exospin"},
                         {"version", kVersion},
                         {"started_at", started},
                         {"finished_at", finished},
                         {"config", config},
                         {"outputs", outputs}};
  const fs::path path = dir / "manifest.json";
  write_json(path, m);
  return path;
}

std::vector<std::string> verify_manifest(const fs::path& manifest) {
  std::ifstream in(manifest);
  if (!in) throw std::runtime_error("cannot read '" + manifest.string() + "'");
  const auto m = nlohmann::json::parse(in);
  std::vector<std::string> bad;
  for (const auto& o : m.at("outputs")) {
    const fs::path p = manifest.parent_path() / o.at("path").get<std::string>();
    if (!fs::exists(p) || sha256_file(p) != o.at("sha256").get<std::string>()) {
      bad.push_back(o.at("path").get<std::string>());
    }
  }
  return bad;
}

}  // namespace exospin::app
