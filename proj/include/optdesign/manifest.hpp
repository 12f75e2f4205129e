#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace optdesign {

inline constexpr const char* kVersion = "0.1.0";

/// Provenance header written as the first line of every output.
struct RunManifest {
  struct Input {
    std::string path;
    std::string sha256;
  };

  std::string command;
  nlohmann::json flags = nlohmann::json::object();
  std::optional<std::uint64_t> seed;
  std::string version = kVersion;
  std::vector<Input> inputs;
  std::string started;
  std::string finished;

  /// Records the digest of a file read by the run. Throws std::runtime_error
  /// when the file cannot be read.
  void add_input(const std::string& path);
  void start();
  void finish();
};

/// Lowercase hex SHA-256 of a byte string / of a file's contents.
std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::string& path);

/// UTC time as YYYY-MM-DDTHH:MM:SSZ.
std::string utc_timestamp();

nlohmann::json to_json(const RunManifest& m);

}  // namespace optdesign
