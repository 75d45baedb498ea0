#pragma once

// Batch experiments: a key-value config with one [section] per task, a run
// that writes certificates and tables, a manifest and a text report.
//
//   [construct]            [game]                 [point]
//   name = strict2         beta = 1/2             x = cf: 1; (2)
//   x = cf: 1; (2)         D = const:2            mode = strict
//   lambda = 2             adversaries = random   depth = 5
//   mode = strict          rounds = 30            seeds = 0..9
//   depth = 2              seeds = 1..200
//
// Other sections: [mixed], [dimension], [lemma1], and [run] for defaults.

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dioph/construction.hpp"
#include "dioph/schmidt_game.hpp"
#include "json.hpp"

namespace dioph {

struct ConfigEntry {
  std::string key;
  std::string value;
  int line = 0;
};

struct ConfigSection {
  std::string kind;  // section header
  int line = 0;
  std::vector<ConfigEntry> entries;

  /// Value of key, or `fallback`; throws ConfigError if required and absent.
  const ConfigEntry* find(std::string_view key) const;
  std::string get(std::string_view key, const std::string& fallback) const;
  std::string require(std::string_view key) const;
  std::string name(std::size_t index) const;  // `name` key or kind + index
};

struct ExperimentConfig {
  std::vector<ConfigSection> sections;

  std::string to_text() const;
  std::string hash() const;  // SHA-256 of to_text()
};

/// Parses and validates; errors carry the line and field.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// "a..b" or "a,b,c" or "a".
std::vector<std::uint64_t> parse_seed_range(std::string_view text);

struct TaskRecord {
  std::string name;
  std::string kind;
  std::string status;  // "ok" or "failed"
  int exit_code = 0;
  std::string error;
  std::vector<std::string> artifacts;  // relative to the output directory
  nlohmann::ordered_json summary;
};

struct RunManifest {
  std::string tool = "dioph";
  std::string version;
  std::string config_hash;
  std::string started;
  std::string finished;
  std::size_t threads = 0;
  std::vector<TaskRecord> tasks;

  int exit_code() const;  // first nonzero task code, else 0
};

nlohmann::ordered_json to_json(const RunManifest& m);
RunManifest manifest_from_json(const nlohmann::ordered_json& j);

/// Runs every section in order, writes artifacts under out_dir and
/// out_dir/manifest.json. Task failures are recorded, not thrown.
RunManifest run_experiment(const ExperimentConfig& config, const std::filesystem::path& out_dir);

struct Report {
  std::string text;
  std::vector<std::string> warnings;
  std::vector<std::string> plot_files;  // relative to out_dir
};

/// Summary lines plus plot-data CSVs (falconer curve, box counts, game pass
/// rates) written next to the manifest.
Report emit_report(const RunManifest& manifest, const std::filesystem::path& out_dir);

/// Per-level CSV: k, count, m_k, eps_k (exact), window size, claim3,
/// all_pass and a float Falconer column computed from the observed m_k.
std::string levels_csv(const Construction& con);

/// Transcript JSON with "verification" and "post_check" blocks attached.
nlohmann::ordered_json transcript_file(const Transcript& t, const BigInt& q_bound);

/// Writes via a temporary file and rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);

inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace dioph
