#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cavity {

const char* version();

/// Flat `key = value` configuration with `[section]` headers. Keys inside a
/// section are stored as `section.key`; `#` starts a comment.
class ExperimentConfig {
 public:
  static ExperimentConfig parse(std::string_view text);
  static ExperimentConfig load(const std::filesystem::path& path);

  bool has(const std::string& key) const { return values_.count(key) > 0; }
  void set(const std::string& key, const std::string& value) { values_[key] = value; }

  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  std::int64_t get_int(const std::string& key) const;
  std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
  std::uint64_t get_seed() const;
  std::vector<int> get_int_list(const std::string& key) const;

  /// Sorted `key = value` lines; identical configs give identical text.
  std::string canonical() const;

  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

inline const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{"gen",           "run",     "exact",
                                              "annealed",      "phase-diagram",
                                              "second-moment", "selfavg", "fermi",
                                              "cliquenum"};
  return names;
}

/// Git-style object hash: SHA-1 of "blob <size>\0" + content, hex.
std::string git_blob_hash(std::string_view content);

struct ExperimentResult {
  std::filesystem::path out_dir;
  std::vector<std::filesystem::path> files;  ///< CSV outputs, scripts and the manifest
};

/// Runs one experiment and writes its CSV files, any plot script and a
/// `manifest` file into the output directory. The experiment name comes
/// from `name`, falling back to the `experiment` key. Throws ConfigError,
/// BudgetExceeded or NumericalFailure.
ExperimentResult run_experiment(const std::string& name, const ExperimentConfig& config);

enum class PlotKind { PhaseDiagram, Trajectory, SelfAveraging };

PlotKind parse_plot_kind(std::string_view text);

/// Writes a standalone matplotlib script that reads the given CSV files
/// (paths are recorded relative to the script's directory). Nothing is
/// plotted in-process. Throws ConfigError when a CSV file does not exist.
void emit_plot_script(const std::vector<std::filesystem::path>& csv_paths, PlotKind kind,
                      const std::filesystem::path& script_path);

}  // namespace cavity
