#pragma once

// Unitary frame changes that turn the rotating-frame ion-trap Hamiltonian
// into the intensity-balanced form:
//
//   T1  spin-conditioned displacement that linearises the D^2 dressing,
//   T2  spin rotation by theta about y, tan(theta) = Delta / 2,
//   T3  spin-conditioned displacement by alpha_p = i Delta / (2 sqrt(4 + Delta^2)) eta_jp,
//   T_Delta = T3 T2 T1,
//
// plus the rotating frame R_t. Every builder returns an exactly unitary matrix
// because every displacement is the exponential of a truncated generator.

#include "ionjc/fock.hpp"
#include "ionjc/ion_chain.hpp"

#include <span>
#include <vector>

namespace ionjc {

struct BalancedParams {
  double rabi = 0.0;         // Omega_R
  double detuning = 0.0;     // delta = omega_ge - omega_L
  double delta_ratio = 0.0;  // Delta = delta / Omega_R
  double root = 2.0;         // sqrt(4 + Delta^2)
  double delta_breve = 0.0;  // sqrt(4 Omega_R^2 + delta^2)
  double theta = 0.0;        // atan(Delta / 2)
  double kappa_plus = 0.0;
  double kappa_minus = 0.0;
  double eps_plus = 0.5;
  double eps_minus = -0.5;
  std::vector<double> eta;        // eta_jp
  std::vector<double> eta_breve;  // Delta / sqrt(4 + Delta^2) eta_jp
  std::vector<double> alpha;      // alpha_p = i * alpha[p]
  std::vector<double> coupling;   // eta_breve / Delta = eta / sqrt(4 + Delta^2), finite at Delta = 0
  std::vector<double> remnant;    // eta_breve^2 / Delta = eta_breve eta / sqrt(4 + Delta^2)
};

/// Throws NoDriveError when rabi == 0 (Delta undefined).
BalancedParams balanced_params(double rabi, double detuning, std::span<const double> eta_row);
BalancedParams balanced_params(const LaserDrive& drive, double omega_ge, std::span<const double> eta_row);

/// (x) over drives of exp(i/2 (omega_L^j t + phase^j) sigma_z^j); drive d acts on spin d.
OperatorMatrix rotation_frame(const HilbertConfig& config, std::span<const LaserDrive> drives, double t);

/// (1/sqrt2) [[D^dagger, D], [-D^dagger, D]],  D = prod_p D_p(i eta_p / 2)
OperatorMatrix build_t1(const HilbertConfig& config, std::span<const double> eta_row, int spin);
/// [[cos theta/2, -sin theta/2], [sin theta/2, cos theta/2]] on the spin factor.
OperatorMatrix build_t2(const HilbertConfig& config, double theta, int spin);
/// [[D(alpha), 0], [0, D(alpha)^dagger]],  D(alpha) = prod_p D_p(alpha_p)
OperatorMatrix build_t3(const HilbertConfig& config, std::span<const Complex> alpha, int spin);

/// T3 T2 T1 as a matrix product.
OperatorMatrix build_tdelta_product(const HilbertConfig& config, const BalancedParams& params, int spin);
/// Closed block form with entries kappa^{+-} prod_p D_p(i eps^{-+} eta_p).
OperatorMatrix build_tdelta_closed(const HilbertConfig& config, const BalancedParams& params, int spin);
/// Product over drives of the closed-form T_Delta_j; drive d acts on spin d.
/// The factors commute exactly (all displacements are functions of a_p + a_p^dagger).
OperatorMatrix build_tdelta(const HilbertConfig& config, std::span<const BalancedParams> params);

}  // namespace ionjc
