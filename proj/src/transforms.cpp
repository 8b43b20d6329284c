#include "ionjc/transforms.hpp"

#include "ionjc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ionjc {

namespace {

std::vector<Complex> imaginary_amplitudes(std::span<const double> values, double scale) {
  std::vector<Complex> out;
  out.reserve(values.size());
  for (double v : values) out.emplace_back(0.0, scale * v);
  return out;
}

void require_row(const HilbertConfig& config, std::span<const double> row) {
  if (static_cast<int>(row.size()) != config.n_modes)
    throw std::invalid_argument("Lamb-Dicke row length does not match the number of modes");
}

}  // namespace

BalancedParams balanced_params(double rabi, double detuning, std::span<const double> eta_row) {
  if (rabi == 0.0) throw NoDriveError("balanced_params: zero Rabi frequency, use the free Hamiltonian");
  if (!(rabi > 0.0) || !std::isfinite(detuning)) throw std::invalid_argument("balanced_params: invalid drive");

  BalancedParams p;
  p.rabi = rabi;
  p.detuning = detuning;
  p.delta_ratio = detuning / rabi;
  p.root = std::sqrt(4.0 + p.delta_ratio * p.delta_ratio);
  p.delta_breve = std::sqrt(4.0 * rabi * rabi + detuning * detuning);
  p.theta = std::atan(0.5 * p.delta_ratio);

  const double sign = p.delta_ratio < 0.0 ? -1.0 : 1.0;
  const double half_inv_root = 0.5 / p.root;
  const double upper = std::sqrt(0.25 + half_inv_root);
  const double lower = std::sqrt(std::max(0.0, 0.25 - half_inv_root));
  p.kappa_plus = upper + sign * lower;
  p.kappa_minus = upper - sign * lower;

  const double ratio = p.delta_ratio / p.root;  // Delta / sqrt(4 + Delta^2)
  p.eps_plus = 0.5 * ratio + 0.5;
  p.eps_minus = 0.5 * ratio - 0.5;

  p.eta.assign(eta_row.begin(), eta_row.end());
  for (double eta : eta_row) {
    const double breve = ratio * eta;
    p.eta_breve.push_back(breve);
    p.alpha.push_back(0.5 * ratio * eta);
    p.coupling.push_back(eta / p.root);
    p.remnant.push_back(breve * eta / p.root);
  }
  return p;
}

BalancedParams balanced_params(const LaserDrive& drive, double omega_ge, std::span<const double> eta_row) {
  return balanced_params(drive.rabi, drive.detuning(omega_ge), eta_row);
}

OperatorMatrix rotation_frame(const HilbertConfig& config, std::span<const LaserDrive> drives, double t) {
  if (static_cast<int>(drives.size()) != config.n_spins)
    throw std::invalid_argument("rotation_frame: need exactly one drive per spin factor");
  CVector spin_diag = CVector::Ones(1);
  for (const LaserDrive& drive : drives) {
    const double angle = 0.5 * (drive.omega_l * t + drive.phase);
    CVector local(2);
    local << std::exp(kI * angle), std::exp(-kI * angle);
    CVector next(spin_diag.size() * 2);
    for (Index i = 0; i < spin_diag.size(); ++i) next.segment(2 * i, 2) = spin_diag(i) * local;
    spin_diag = next;
  }
  CVector full(config.dimension());
  for (Index m = 0; m < config.mode_dimension(); ++m) full.segment(m * config.spin_dimension(), config.spin_dimension()) = spin_diag;
  return {config, full.asDiagonal().toDenseMatrix(), OperatorKind::unitary};
}

OperatorMatrix build_t1(const HilbertConfig& config, std::span<const double> eta_row, int spin) {
  require_row(config, eta_row);
  const auto amps = imaginary_amplitudes(eta_row, 0.5);
  const CMatrix d = mode_displacement_product(config, amps);
  const CMatrix dd = d.adjoint();
  const double s = 1.0 / std::sqrt(2.0);
  return spin_blocks(config, spin, s * dd, s * d, -s * dd, s * d, OperatorKind::unitary);
}

OperatorMatrix build_t2(const HilbertConfig& config, double theta, int spin) {
  CMatrix rot(2, 2);
  const double c = std::cos(0.5 * theta);
  const double s = std::sin(0.5 * theta);
  rot << c, -s, s, c;
  const std::pair<int, CMatrix> factor{spin, rot};
  return embed(config, mode_identity(config), std::span(&factor, 1), OperatorKind::unitary);
}

OperatorMatrix build_t3(const HilbertConfig& config, std::span<const Complex> alpha, int spin) {
  const CMatrix d = mode_displacement_product(config, alpha);
  const CMatrix zero = CMatrix::Zero(d.rows(), d.cols());
  return spin_blocks(config, spin, d, zero, zero, d.adjoint(), OperatorKind::unitary);
}

OperatorMatrix build_tdelta_product(const HilbertConfig& config, const BalancedParams& params, int spin) {
  const auto alpha = imaginary_amplitudes(params.alpha, 1.0);
  return build_t3(config, alpha, spin) * build_t2(config, params.theta, spin) * build_t1(config, params.eta, spin);
}

OperatorMatrix build_tdelta_closed(const HilbertConfig& config, const BalancedParams& params, int spin) {
  require_row(config, params.eta);
  const CMatrix d_minus = mode_displacement_product(config, imaginary_amplitudes(params.eta, params.eps_minus));
  const CMatrix d_plus = mode_displacement_product(config, imaginary_amplitudes(params.eta, params.eps_plus));
  return spin_blocks(config, spin, params.kappa_plus * d_minus, params.kappa_minus * d_plus,
                     -params.kappa_minus * d_plus.adjoint(), params.kappa_plus * d_minus.adjoint(),
                     OperatorKind::unitary);
}

OperatorMatrix build_tdelta(const HilbertConfig& config, std::span<const BalancedParams> params) {
  if (static_cast<int>(params.size()) != config.n_spins)
    throw std::invalid_argument("build_tdelta: need balanced parameters for every spin factor");
  OperatorMatrix out = OperatorMatrix::identity(config);
  for (int j = 0; j < config.n_spins; ++j) out = build_tdelta_closed(config, params[static_cast<std::size_t>(j)], j) * out;
  return out;
}

}  // namespace ionjc
