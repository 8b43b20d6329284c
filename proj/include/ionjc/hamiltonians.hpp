#pragma once

// Hamiltonians of the N-ion Jaynes-Cummings model on a truncated space.
// All frequencies are in units of the axial trap frequency nu1 (hbar = 1).

#include "ionjc/fock.hpp"
#include "ionjc/ion_chain.hpp"
#include "ionjc/transforms.hpp"

#include <optional>
#include <vector>

namespace ionjc {

struct ModelSpec {
  HilbertConfig config;
  std::vector<double> nu;           // mode frequencies nu_p, one per mode
  std::vector<LaserDrive> drives;   // drive d acts on spin factor d
  Eigen::MatrixXd eta;              // Lamb-Dicke rows, drives x modes
  double omega_ge = 0.0;            // atomic transition frequency
  bool include_anharmonic = false;  // reserved for the anharmonic Coulomb term; must stay false

  void validate() const;
  int drive_count() const { return static_cast<int>(drives.size()); }
  double detuning(int drive) const;
  std::vector<double> eta_row(int drive) const;
  /// Balanced parameters for every drive; throws NoDriveError on a zero Rabi frequency.
  std::vector<BalancedParams> balanced() const;
};

/// Model for a chain whose drives each get their own spin factor.
ModelSpec make_model(const ChainModel& chain, std::vector<LaserDrive> drives, int n_max, int guard,
                     double omega_ge);
/// One ion, one mode (nu = 1), one drive with Lamb-Dicke factor `eta`.
ModelSpec single_ion_model(double eta, double rabi, double detuning, int n_max, int guard, double omega_ge = 0.0);

/// Hermitian operator plus a tracked scalar. `offset` is the constant that the
/// displayed formula drops: the represented Hamiltonian is matrix + offset * I.
struct OffsetHamiltonian {
  OperatorMatrix matrix;
  double offset = 0.0;

  OperatorMatrix total() const { return matrix.shifted(offset); }
};

/// sum_p nu_p n_p
OperatorMatrix number_sum(const HilbertConfig& config, std::span<const double> nu);

/// Placeholder for the anharmonic Coulomb term W. Always the zero operator.
OperatorMatrix anharmonic_term(const ModelSpec& model);

/// Rotating-frame Hamiltonian
///   sum_p nu_p n_p + sum_j [ delta_j/2 sigma_z^j + Omega_j (sigma_-^j D_j^dagger^2 + sigma_+^j D_j^2) ] + W.
OffsetHamiltonian h_tilde(const ModelSpec& model);

/// Lab-frame free Hamiltonian sum_p nu_p n_p + omega_ge/2 sum_j sigma_z^j.
OperatorMatrix free_hamiltonian(const ModelSpec& model);

enum class Resonance { carrier, blue, red };

/// Standard-RWA effective generator for drive `drive`; `mode` is ignored for the carrier.
OffsetHamiltonian standard_rwa_generator(const ModelSpec& model, int drive, Resonance kind, int mode = 0);

struct BreveHamiltonian {
  OffsetHamiltonian diagonal;    // sum nu_p n_p + sum_j delta_breve_j / 2 sigma_z^j, offset = dropped constants
  OperatorMatrix flip;           // spin-flip part of the balanced Hamiltonian
  OperatorMatrix cross;          // drive-drive coupling from the multi-drive transform (zero for one drive)
  std::vector<BalancedParams> params;

  /// diagonal.matrix + flip + cross (no offset)
  OperatorMatrix matrix() const;
};

/// Balanced Hamiltonian T H_tilde T^dagger = diagonal + flip + cross + offset.
BreveHamiltonian breve_h(const ModelSpec& model);

/// Spin-flip part of the balanced Hamiltonian in the interaction picture of its
/// diagonal part, built from the closed expression with phases exp(-+i omega^{-+} t).
OperatorMatrix jc_interaction(const ModelSpec& model, double t);

/// exp(i H0_breve t), diagonal.
OperatorMatrix breve_frame(const ModelSpec& model, std::span<const BalancedParams> params, double t);

struct ResonantPair {
  int drive = 0;
  int mode = 0;
  bool operator==(const ResonantPair&) const = default;
};

/// RWA generator sum over pairs of i g_jk (a_k sigma_+^j - a_k^dagger sigma_-^j),
/// g_jk = eta_breve_jk nu_k / Delta_j.
OperatorMatrix jc_rwa_generator(const ModelSpec& model, std::span<const ResonantPair> pairs);

/// |delta| that puts a mode of frequency nu exactly on the corrected resonance
/// nu = sqrt(4 Omega^2 + delta^2); empty when nu < 2 Omega.
std::optional<double> corrected_resonance_detuning(double nu, double rabi);

struct ResonanceEntry {
  int drive = 0;
  int mode = 0;
  double nu = 0.0;
  double delta_breve = 0.0;
  double omega_minus = 0.0;  // nu_p - delta_breve_j
  double omega_plus = 0.0;   // nu_p + delta_breve_j
  std::optional<double> required_detuning;  // |delta| for exact resonance, empty if unreachable
};

struct ResonanceReport {
  std::vector<ResonanceEntry> entries;  // drive-major
  ResonantPair nearest;                 // argmin |omega_minus|
};

ResonanceReport resonance_offsets(const ModelSpec& model);

}  // namespace ionjc
