#pragma once

// Scenario configuration, figure presets, method comparison and the
// Lie-closure report behind the command-line front end.

#include <exception>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lbe/observables.hpp"
#include "lbe/wei_norman.hpp"

namespace lbe {

enum class ModelKind { single_z, symmetric_three, three_of_four, custom };
enum class Method { wei_norman, direct_lvnl, direct_bloch };
enum class DriveKind { constant, cosine };
/// pure-1: |1><1|, pure-2: |2><2|, mixed: I/n.
enum class InitialState { pure_1, pure_2, mixed };

std::string to_string(ModelKind);
std::string to_string(Method);
std::string to_string(DriveKind);
std::string to_string(InitialState);
ModelKind parse_model(const std::string&);
Method parse_method(const std::string&);
DriveKind parse_drive_kind(const std::string&);
InitialState parse_initial(const std::string&);

struct ScenarioConfig {
  ModelKind model = ModelKind::symmetric_three;
  double J = 0.0;
  double gamma = 0.0;
  DriveKind drive_kind = DriveKind::cosine;
  double A = 0.0;      // constant value, or cosine amplitude
  double omega = 1.0;  // cosine angular frequency
  InitialState initial = InitialState::pure_1;
  double t_end = 20.0;
  std::size_t samples = 2001;
  Method method = Method::wei_norman;

  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  /// Only for ModelKind::custom (library use; not expressible in config files).
  std::optional<LindbladModel> custom_model;

  /// Throws ConfigError on inconsistent settings.
  void validate() const;
  DriveSignal drive() const;
  ModelParams params() const;
  LindbladModel lindblad_model() const;
  ComplexMatrix initial_rho() const;
};

/// Parses the JSON config text. Recognized keys: model, J, Gamma,
/// drive {kind, A, omega}, t_end, samples, method, initial. Unknown keys
/// are rejected.
ScenarioConfig parse_config(const std::string& text);
ScenarioConfig load_config(const std::string& path);
/// Canonical JSON text of a config; parse_config(config_to_json(c)) == c.
std::string config_to_json(const ScenarioConfig& config);

/// fig1a, fig1b, fig1c, fig2a, fig2b, fig2c and three-of-four.
ScenarioConfig preset_config(const std::string& name);
std::vector<std::string> preset_names();

struct Provenance {
  std::string config_json;
  std::string method;
  SolverStats stats;
  bool used_linearized = false;
  double switch_time = 0.0;
  double seconds = 0.0;  // wall-clock, kept out of the CSV
};

struct SimulationResult {
  std::vector<TimeSeriesRecord> records;
  Provenance provenance;
};

/// Runs the selected propagation path on a uniform grid over [0, t_end].
SimulationResult simulate(const ScenarioConfig& config);

struct RunReport {
  std::vector<ObservableRow> rows;
  Provenance provenance;
};

RunReport run_scenario(const ScenarioConfig& config);

struct ComparisonTable {
  std::vector<std::string> pair_labels;          // "a_vs_b"
  std::vector<double> times;
  std::vector<std::vector<double>> discrepancy;  // [time][pair]: max |rho_a - rho_b|
  std::vector<double> pair_max;
  double overall_max = 0.0;
};

ComparisonTable compare_methods(const ScenarioConfig& config, const std::vector<Method>& methods);

struct ClosureReport {
  std::string basis;
  std::vector<std::size_t> indices;  // 1-based
  bool closed = false;
  std::size_t seed_size = 0;
  std::size_t closure_size = 0;
  /// 1-based members of the named basis lying in the span of the closure.
  std::vector<std::size_t> spanned_members;
};

/// basis_name: su3-octet, angular-momentum or pauli. Invalid names or
/// indices raise ConfigError.
ClosureReport closure_report(const std::string& basis_name, const std::vector<std::size_t>& indices);
std::string format_closure_report(const ClosureReport& report);

/// Fixed CSV layout: t, rho11, rho22, re_rho12, im_rho12, re_rho21, im_rho21,
/// trace, purity, entropy; 17 significant digits, '\n' line endings.
void write_csv(std::ostream& out, const std::vector<ObservableRow>& rows);
void write_comparison_csv(std::ostream& out, const ComparisonTable& table);
std::string format_double(double v);
std::string provenance_json(const Provenance& p);

/// 2 for configuration or usage errors, 3 for integration and state failures.
int exit_code_for(std::exception_ptr e);

struct SweepEntry {
  std::optional<RunReport> report;
  std::string error;
  int exit_code = 0;  // as the CLI would report it
};

/// Runs independent scenarios concurrently (OpenMP); entries keep input order.
std::vector<SweepEntry> run_sweep(const std::vector<ScenarioConfig>& configs);
/// Serial reference for run_sweep.
std::vector<SweepEntry> run_sweep_serial(const std::vector<ScenarioConfig>& configs);

}  // namespace lbe
