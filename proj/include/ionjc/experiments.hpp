#pragma once

// Experiment configuration, result tables and the four CLI experiments.
//
// Config files are JSON objects. With "units": "nu1" every frequency is in
// units of the axial trap frequency and times in 1/nu1; with "units": "physical"
// frequencies are angular frequencies in rad/s, times in s, wavevectors in 1/m,
// and the ion mass in amu. Output tables are always dimensionless.
//
// Ion, mode and drive indices are 1-based in config files and tables.

#include "ionjc/hamiltonians.hpp"
#include "ionjc/propagators.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace ionjc {

inline constexpr int kMaxIons = 10;

enum class Units { nu1, physical };
enum class OutputFormat { csv, json };

struct DriveConfig {
  int ion = 1;
  double rabi = 0.0;
  std::optional<double> detuning;  // exactly one of detuning / omega_l
  std::optional<double> omega_l;
  double beam_angle = 0.0;
  double k_l = 1.0;
  double phase = 0.0;

  bool operator==(const DriveConfig&) const = default;
};

struct ModeState {
  int fock = 0;
  std::optional<Complex> alpha;  // coherent amplitude replaces the Fock number when set

  bool operator==(const ModeState&) const = default;
};

struct ExperimentConfig {
  std::string experiment;  // "modes", "resonance", "sweep-rabi" or "evolve"
  Units units = Units::nu1;

  // chain
  int ions = 1;
  double lamb_dicke = 0.1;  // nu1 units: k_L / sqrt(2 mu nu1) for k_L = 1
  double nu1 = 1.0;         // physical units: rad/s
  double mass_amu = 40.0;   // physical units
  double omega_ge = 0.0;

  std::vector<DriveConfig> drives;

  std::optional<int> n_max;
  std::optional<int> guard;

  // sweep-rabi
  std::vector<double> sweep_grid;  // Rabi frequencies, strictly increasing
  int sweep_drive = 1;
  int sweep_mode = 1;

  // evolve
  std::vector<double> times;
  Method method = Method::exact;
  std::vector<ResonantPair> resonant_pairs;  // stored 1-based
  std::vector<ModeState> initial_modes;
  std::vector<char> initial_spins;  // 'e' or 'g' per drive

  std::optional<std::string> output_path;
  OutputFormat format = OutputFormat::csv;

  bool operator==(const ExperimentConfig&) const = default;

  int effective_n_max() const;
  int effective_guard() const;
  /// Frequency scale that converts config frequencies to units of nu1.
  double frequency_scale() const;
};

/// Default sweep grid: 25 logarithmic points over [1e-2, 10].
std::vector<double> default_sweep_grid();

/// Parses and validates; throws ConfigError with the offending line. A non-empty
/// `experiment` is used when the file has no "experiment" key and must match it otherwise.
ExperimentConfig parse_config(const std::string& text, const std::string& experiment = "");
ExperimentConfig load_config(const std::string& path, const std::string& experiment = "");
std::string serialize_config(const ExperimentConfig& config);

/// Chain and model in nu1 units; throws ConfigError on invalid settings.
ChainModel build_chain(const ExperimentConfig& config);
ModelSpec build_model(const ExperimentConfig& config);

using Cell = std::variant<double, std::int64_t, std::string>;

struct Table {
  std::string title;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::vector<std::string> notes;  // emitted as comment lines / metadata
};

/// Shortest representation that parses back to the same double.
std::string format_double(double value);

/// `timestamp` goes on its own comment line; pass an empty string to omit it.
void write_csv(std::ostream& out, const Table& table, const std::string& timestamp);
void write_json(std::ostream& out, const Table& table, const std::string& timestamp);
void write_table(std::ostream& out, const Table& table, OutputFormat format, const std::string& timestamp);
std::string utc_timestamp();

Table cmd_modes(const ExperimentConfig& config);
Table cmd_resonance(const ExperimentConfig& config);
/// `threads` <= 0 means one thread.
Table cmd_sweep_rabi(const ExperimentConfig& config, int threads = 1);
Table cmd_evolve(const ExperimentConfig& config);

Table run_experiment(const ExperimentConfig& config, int threads = 1);

/// Initial state from the config, normalised; throws ConfigError when a coherent
/// amplitude leaves more than 1e-6 population in the guard levels.
CVector initial_state(const ExperimentConfig& config, const HilbertConfig& hilbert);

}  // namespace ionjc
