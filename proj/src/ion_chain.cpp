#include "ionjc/ion_chain.hpp"

#include "ionjc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace ionjc {

namespace {

constexpr double kAmu = 1.66053906660e-27;   // kg
constexpr double kHbar = 1.054571817e-34;    // J s
constexpr int kMaxNewtonIterations = 200;

double residual_norm(std::span<const double> u) {
  const auto r = equilibrium_residual(u);
  double worst = 0.0;
  for (double v : r) worst = std::max(worst, std::abs(v));
  return worst;
}

bool strictly_increasing(const std::vector<double>& u) {
  for (std::size_t i = 1; i < u.size(); ++i)
    if (!(u[i] > u[i - 1])) return false;
  return true;
}

}  // namespace

std::vector<double> equilibrium_residual(std::span<const double> u) {
  const std::size_t n = u.size();
  std::vector<double> r(n);
  for (std::size_t m = 0; m < n; ++m) {
    double f = u[m];
    for (std::size_t k = 0; k < n; ++k) {
      if (k == m) continue;
      const double d = u[m] - u[k];
      f += (k < m ? -1.0 : 1.0) / (d * d);
    }
    r[m] = f;
  }
  return r;
}

Eigen::MatrixXd chain_hessian(std::span<const double> u) {
  const auto n = static_cast<Eigen::Index>(u.size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index m = 0; m < n; ++m) {
    a(m, m) = 1.0;
    for (Eigen::Index k = 0; k < n; ++k) {
      if (k == m) continue;
      const double c = 2.0 / std::pow(std::abs(u[m] - u[k]), 3);
      a(m, m) += c;
      a(m, k) = -c;
    }
  }
  return a;
}

std::vector<double> equilibrium_positions(int ions) {
  if (ions < 1) throw std::invalid_argument("equilibrium_positions: need at least one ion");
  const auto n = static_cast<std::size_t>(ions);
  std::vector<double> u(n);
  const double spacing = 2.0 / std::pow(static_cast<double>(ions), 0.56);
  for (std::size_t m = 0; m < n; ++m) u[m] = (static_cast<double>(m) - 0.5 * (ions - 1)) * spacing;
  if (ions == 1) return u;

  double res = residual_norm(u);
  for (int iter = 0; iter < kMaxNewtonIterations && res > 1e-13; ++iter) {
    const auto r = equilibrium_residual(u);
    const Eigen::MatrixXd jac = chain_hessian(u);
    const Eigen::VectorXd rhs = Eigen::Map<const Eigen::VectorXd>(r.data(), static_cast<Eigen::Index>(n));
    const Eigen::VectorXd step = jac.ldlt().solve(rhs);

    double damping = 1.0;
    std::vector<double> trial(n);
    for (int halving = 0; halving < 40; ++halving, damping *= 0.5) {
      for (std::size_t m = 0; m < n; ++m) trial[m] = u[m] - damping * step(static_cast<Eigen::Index>(m));
      if (strictly_increasing(trial) && residual_norm(trial) < res) break;
    }
    if (!strictly_increasing(trial)) break;
    const double trial_res = residual_norm(trial);
    if (trial_res >= res) break;  // stalled at round-off
    u = trial;
    res = trial_res;
  }
  if (res > 1e-12)
    throw NumericalError("equilibrium_positions: Newton did not converge for N = " + std::to_string(ions) +
                         " (residual " + std::to_string(res) + ")");

  // Enforce exact reflection symmetry u_m = -u_{N+1-m}.
  for (std::size_t m = 0; m < n / 2; ++m) {
    const double s = 0.5 * (u[n - 1 - m] - u[m]);
    u[m] = -s;
    u[n - 1 - m] = s;
  }
  if (n % 2 == 1) u[n / 2] = 0.0;
  return u;
}

NormalModes normal_modes(int ions) {
  NormalModes out;
  out.positions = equilibrium_positions(ions);
  const Eigen::MatrixXd hessian = chain_hessian(out.positions);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(hessian);
  if (solver.info() != Eigen::Success) throw NumericalError("normal_modes: eigendecomposition failed");

  const auto n = static_cast<Eigen::Index>(ions);
  out.eigenvectors = solver.eigenvectors();  // eigenvalues come back ascending
  out.mode_matrix.resize(n, n);
  out.frequencies.resize(static_cast<std::size_t>(ions));
  for (Eigen::Index p = 0; p < n; ++p) {
    const double lambda = solver.eigenvalues()(p);
    if (!(lambda > 0.0)) throw NumericalError("normal_modes: Hessian is not positive definite");
    out.frequencies[static_cast<std::size_t>(p)] = std::sqrt(lambda);

    auto col = out.eigenvectors.col(p);
    double sign = 1.0;
    const double sum = col.sum();
    if (std::abs(sum) > 1e-10) {
      sign = sum > 0.0 ? 1.0 : -1.0;
    } else {
      for (Eigen::Index j = 0; j < n; ++j) {
        if (std::abs(col(j)) > 1e-10) {
          sign = col(j) > 0.0 ? 1.0 : -1.0;
          break;
        }
      }
    }
    col *= sign;
    out.mode_matrix.col(p) = col / std::sqrt(out.frequencies[static_cast<std::size_t>(p)]);
  }
  return out;
}

double ChainModel::lamb_dicke_prefactor(double k_l, double beam_angle) const {
  return k_l * std::cos(beam_angle) / std::sqrt(2.0 * mu * nu1);
}

ChainModel make_chain(int ions, double mu, double nu1) {
  if (!(mu > 0.0) || !(nu1 > 0.0)) throw std::invalid_argument("make_chain: mass and trap frequency must be positive");
  ChainModel chain;
  chain.ions = ions;
  chain.mu = mu;
  chain.nu1 = nu1;
  chain.modes = normal_modes(ions);
  return chain;
}

double mass_over_hbar(double mass_amu) { return mass_amu * kAmu / kHbar; }

void LaserDrive::validate(int ions) const {
  if (ion < 0 || ion >= ions) throw std::out_of_range("LaserDrive: ion index " + std::to_string(ion) + " out of range");
  if (!(rabi >= 0.0)) throw std::invalid_argument("LaserDrive: Rabi frequency must be non-negative");
  if (!(k_l > 0.0)) throw std::invalid_argument("LaserDrive: wavevector magnitude must be positive");
  if (!std::isfinite(omega_l)) throw std::invalid_argument("LaserDrive: laser frequency must be finite");
}

Eigen::MatrixXd lamb_dicke_matrix(const ChainModel& chain, std::span<const LaserDrive> drives) {
  const auto rows = static_cast<Eigen::Index>(drives.size());
  Eigen::MatrixXd eta(rows, chain.ions);
  for (Eigen::Index d = 0; d < rows; ++d) {
    const LaserDrive& drive = drives[static_cast<std::size_t>(d)];
    drive.validate(chain.ions);
    eta.row(d) = chain.lamb_dicke_prefactor(drive.k_l, drive.beam_angle) * chain.modes.mode_matrix.row(drive.ion);
  }
  return eta;
}

}  // namespace ionjc
