#pragma once

// Output helpers shared by the command-line tools: CSV with a metadata
// preamble, JSON summaries, and file writing.

#include <hypvor/rng.hpp>

#include <json.hpp>

#include <stdexcept>
#include <string>
#include <vector>

namespace hypvor {

inline constexpr const char* kArtifactVersion = "1.0.0";

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shortest round-trip decimal form of v ("%.17g" fallback), for CSV/JSON.
std::string format_real(double v);

/// RFC 4180 quoting: fields with a comma, quote or newline are quoted.
std::string csv_field(const std::string& s);

class CsvTable {
 public:
  CsvTable(std::string schema, std::vector<std::string> columns);

  /// Adds a "# key: value" line to the preamble.
  void meta(const std::string& key, const std::string& value);
  void row(const std::vector<std::string>& fields);
  std::string str() const;
  const std::string& schema() const { return schema_; }

 private:
  std::string schema_;
  std::vector<std::string> columns_;
  std::vector<std::pair<std::string, std::string>> meta_;
  std::vector<std::string> rows_;
};

nlohmann::json seed_json(const Seed& seed);

/// {artifact_version, config, seed} plus the given results.
nlohmann::json summary_json(const nlohmann::json& config, const Seed& seed, const nlohmann::json& results);

/// Writes text to path, creating parent directories; throws IoError.
void write_text(const std::string& path, const std::string& text);

}  // namespace hypvor
