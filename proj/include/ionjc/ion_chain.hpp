#pragma once

// Linear chain of N equal ions in a harmonic axial trap: equilibrium
// configuration, normal modes and Lamb-Dicke factors.
//
// Lengths are in units of the characteristic length (e^2 / 4 pi eps0 m nu1^2)^(1/3),
// frequencies in units of the axial trap frequency nu1.

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace ionjc {

/// u_m - sum_{n<m} (u_m - u_n)^-2 + sum_{n>m} (u_m - u_n)^-2
std::vector<double> equilibrium_residual(std::span<const double> positions);

/// Sorted equilibrium positions. Damped Newton from a uniform seed;
/// throws NumericalError if the residual does not reach 1e-12.
std::vector<double> equilibrium_positions(int ions);

/// Dimensionless Hessian A_mn of trap plus Coulomb energy at the given positions.
Eigen::MatrixXd chain_hessian(std::span<const double> positions);

struct NormalModes {
  std::vector<double> positions;
  std::vector<double> frequencies;  // nu_p / nu1, ascending
  Eigen::MatrixXd eigenvectors;     // s_jp, orthonormal columns
  Eigen::MatrixXd mode_matrix;      // M_jp = s_jp sqrt(1 / nu_p)
};

/// Columns are sign-fixed so that sum_j s_jp > 0; when the sum vanishes
/// (|sum| < 1e-10) the first nonzero component is made positive.
NormalModes normal_modes(int ions);

struct ChainModel {
  int ions = 1;
  double mu = 1.0;   // mass / hbar  (s / m^2 in SI; any consistent unit)
  double nu1 = 1.0;  // axial angular frequency in the same unit system
  NormalModes modes;

  /// k_L cos(phi) / sqrt(2 mu nu1)
  double lamb_dicke_prefactor(double k_l, double beam_angle) const;
};

ChainModel make_chain(int ions, double mu = 1.0, double nu1 = 1.0);

/// Ion mass in amu -> mass / hbar in s/m^2.
double mass_over_hbar(double mass_amu);

struct LaserDrive {
  int ion = 0;              // addressed ion j (0-based)
  double rabi = 0.0;        // Omega_R, units of nu1
  double omega_l = 0.0;     // laser frequency, units of nu1
  double beam_angle = 0.0;  // angle phi between trap axis and wavevector
  double k_l = 1.0;         // wavevector magnitude (same length unit as mu)
  double phase = 0.0;       // initial phase varphi^j

  double detuning(double omega_ge) const { return omega_ge - omega_l; }
  void validate(int ions) const;
};

/// eta_jp = (k_L^j cos phi_j / sqrt(2 mu nu1)) M_jp, one row per drive.
Eigen::MatrixXd lamb_dicke_matrix(const ChainModel& chain, std::span<const LaserDrive> drives);

}  // namespace ionjc
