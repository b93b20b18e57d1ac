#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tomolab/bases.hpp"
#include "tomolab/equivalence.hpp"
#include "tomolab/measurement.hpp"
#include "tomolab/states.hpp"

namespace tomolab {

inline constexpr const char* kVersion = "1.0.0";

// Envelope for config-driven runs.
inline constexpr int kMaxConfigDim = 16;
inline constexpr std::int64_t kMaxConfigM = 4096;
inline constexpr std::size_t kMaxConfigN = 100000;

enum class Task { simulate, translate, distances, zeta, corollaries, estimator_transfer, scaling };
std::string_view to_string(Task t);
Task parse_task(std::string_view text);

struct ExperimentConfig {
  Task task = Task::simulate;
  std::uint64_t seed = 0;
  std::string output_dir = "tomolab_out";

  BasisKind basis_kind = BasisKind::pauli;
  int d = 4;
  std::optional<RealMatrix> gvectors;

  std::vector<std::string> witnesses;
  std::optional<StateClassSpec> state_class;
  std::size_t class_samples = 1;
  std::optional<ComplexMatrix> state_matrix;
  std::optional<double> beta;
  std::optional<std::size_t> j_star;

  DesignMode design_mode = DesignMode::fixed;
  std::vector<double> pi, xi;  // empty means uniform

  std::optional<std::size_t> n;  // defaults to p
  std::int64_t m = 64;
  Detail detail = Detail::counts;

  double active_tol = 1e-9;
  double c0 = 0.0;
  double c1 = 1.0;

  std::vector<std::vector<double>> thetas{{0.5, 0.5}};
  std::vector<std::int64_t> m_grid{16, 64, 256, 1024, 4096};
  QuadratureSpec quadrature;
  std::size_t mc_samples = 20000;

  std::string zeta_weights = "uniform";
  double bound_C = 1.0;

  std::size_t corollary_samples = 50;

  std::size_t replications = 200;
  std::vector<std::int64_t> transfer_m_grid{16, 256, 4096};

  /// Every key as read, in file order, for the manifest.
  std::vector<std::pair<std::string, std::string>> echo;
};

/// INI-style config; relative file paths resolve against base_dir.
/// Throws ConfigError on unknown keys, bad values or envelope violations.
ExperimentConfig parse_config(std::istream& in, const std::filesystem::path& base_dir = ".");
ExperimentConfig load_config(const std::filesystem::path& path);

/// Replaces the seed when env_value is a non-empty unsigned integer.
void apply_seed_override(ExperimentConfig& config, const char* env_value);

struct RunResult {
  bool pass = true;
  std::vector<std::string> artifacts;
  std::vector<std::string> failures;  // anchors of failed checks
};

/// Runs the configured task and writes its artifacts plus manifest.json into out_dir.
RunResult run_experiment(const ExperimentConfig& config, const std::filesystem::path& out_dir);

}  // namespace tomolab
