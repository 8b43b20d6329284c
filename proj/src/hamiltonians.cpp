#include "ionjc/hamiltonians.hpp"

#include "ionjc/errors.hpp"

#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>
#include <string>

namespace ionjc {

namespace {

std::vector<Complex> imaginary(std::span<const double> values, double scale = 1.0) {
  std::vector<Complex> out;
  out.reserve(values.size());
  for (double v : values) out.emplace_back(0.0, scale * v);
  return out;
}

// Hermitian part. Several closed expressions are Hermitian only up to the top
// Fock level of the truncation; this leaves the guarded block untouched.
OperatorMatrix hermitian_part(const OperatorMatrix& op) {
  CMatrix m = 0.5 * (op.matrix() + op.matrix().adjoint());
  return {op.config(), std::move(m), OperatorKind::hermitian};
}

// sum_p c_p nu_p (a_p e^{-i nu_p t} - a_p^dagger e^{i nu_p t}) on the mode space
CMatrix weighted_quadrature(const ModelSpec& model, std::span<const double> weights, double t) {
  const HilbertConfig& c = model.config;
  CMatrix out = CMatrix::Zero(c.mode_dimension(), c.mode_dimension());
  for (int p = 0; p < c.n_modes; ++p) {
    const double w = weights[static_cast<std::size_t>(p)] * model.nu[static_cast<std::size_t>(p)];
    if (w == 0.0) continue;
    const Complex phase = std::exp(-kI * model.nu[static_cast<std::size_t>(p)] * t);
    const CMatrix a = mode_ladder(c, p, Ladder::annihilate);
    out += w * (phase * a - std::conj(phase) * CMatrix(a.adjoint()));
  }
  return out;
}

double weighted_sum(const ModelSpec& model, std::span<const double> weights) {
  double s = 0.0;
  for (std::size_t p = 0; p < model.nu.size(); ++p) s += weights[p] * model.nu[p];
  return s;
}

// Spin-flip term of one drive in the interaction picture of the diagonal part at time t.
// t = 0 gives the Schroedinger-picture flip term.
OperatorMatrix flip_term(const ModelSpec& model, const BalancedParams& p, int spin, double t) {
  const HilbertConfig& c = model.config;
  std::vector<Complex> beta;
  beta.reserve(p.eta_breve.size());
  for (std::size_t k = 0; k < p.eta_breve.size(); ++k)
    beta.push_back(kI * p.eta_breve[k] * std::exp(kI * model.nu[k] * t));
  const CMatrix d2 = mode_displacement_product(c, beta);
  const CMatrix y = weighted_quadrature(model, p.coupling, t);
  const double r = weighted_sum(model, p.remnant);
  const CMatrix id = mode_identity(c);
  const Complex up = std::exp(kI * p.delta_breve * t);

  const CMatrix eg = up * (kI * y + r * id) * d2;
  const CMatrix ge = std::conj(up) * (kI * y - r * id) * CMatrix(d2.adjoint());
  const CMatrix zero = CMatrix::Zero(id.rows(), id.cols());
  return hermitian_part(spin_blocks(c, spin, zero, eg, ge, zero));
}

// sigma_+ D^2 + sigma_- D^dagger^2 with D^2 = prod_p D_p(i eta_breve_p)
OperatorMatrix breve_flip_operator(const ModelSpec& model, const BalancedParams& p, int spin) {
  const HilbertConfig& c = model.config;
  const CMatrix d2 = mode_displacement_product(c, imaginary(p.eta_breve));
  const CMatrix zero = CMatrix::Zero(d2.rows(), d2.cols());
  return spin_blocks(c, spin, zero, d2, d2.adjoint(), zero, OperatorKind::hermitian);
}

}  // namespace

void ModelSpec::validate() const {
  config.validate();
  if (include_anharmonic)
    throw std::invalid_argument("ModelSpec: the anharmonic Coulomb term is not available in this version");
  if (static_cast<int>(nu.size()) != config.n_modes)
    throw std::invalid_argument("ModelSpec: need one mode frequency per mode");
  for (double v : nu)
    if (!(v > 0.0)) throw std::invalid_argument("ModelSpec: mode frequencies must be positive");
  if (static_cast<int>(drives.size()) != config.n_spins)
    throw std::invalid_argument("ModelSpec: need exactly one drive per spin factor");
  if (eta.rows() != static_cast<Index>(drives.size()) || eta.cols() != config.n_modes)
    throw std::invalid_argument("ModelSpec: Lamb-Dicke matrix must be drives x modes");
  std::set<int> ions;
  for (const LaserDrive& d : drives) {
    if (!(d.rabi >= 0.0) || !std::isfinite(d.rabi)) throw std::invalid_argument("ModelSpec: invalid Rabi frequency");
    if (!ions.insert(d.ion).second)
      throw std::invalid_argument("ModelSpec: ion " + std::to_string(d.ion + 1) + " is driven twice");
  }
}

double ModelSpec::detuning(int drive) const { return drives.at(static_cast<std::size_t>(drive)).detuning(omega_ge); }

std::vector<double> ModelSpec::eta_row(int drive) const {
  std::vector<double> row(static_cast<std::size_t>(eta.cols()));
  for (Index p = 0; p < eta.cols(); ++p) row[static_cast<std::size_t>(p)] = eta(drive, p);
  return row;
}

std::vector<BalancedParams> ModelSpec::balanced() const {
  std::vector<BalancedParams> out;
  out.reserve(drives.size());
  for (int d = 0; d < drive_count(); ++d) {
    const auto row = eta_row(d);
    out.push_back(balanced_params(drives[static_cast<std::size_t>(d)].rabi, detuning(d), row));
  }
  return out;
}

ModelSpec make_model(const ChainModel& chain, std::vector<LaserDrive> drives, int n_max, int guard,
                     double omega_ge) {
  ModelSpec m;
  m.config = HilbertConfig{chain.ions, n_max, static_cast<int>(drives.size()), guard};
  m.nu = chain.modes.frequencies;
  m.eta = lamb_dicke_matrix(chain, drives);
  m.drives = std::move(drives);
  m.omega_ge = omega_ge;
  m.validate();
  return m;
}

ModelSpec single_ion_model(double eta, double rabi, double detuning, int n_max, int guard, double omega_ge) {
  ModelSpec m;
  m.config = HilbertConfig{1, n_max, 1, guard};
  m.nu = {1.0};
  LaserDrive drive;
  drive.rabi = rabi;
  drive.omega_l = omega_ge - detuning;
  m.drives = {drive};
  m.eta = Eigen::MatrixXd::Constant(1, 1, eta);
  m.omega_ge = omega_ge;
  m.validate();
  return m;
}

OperatorMatrix number_sum(const HilbertConfig& config, std::span<const double> nu) {
  CMatrix n = CMatrix::Zero(config.mode_dimension(), config.mode_dimension());
  for (int p = 0; p < config.n_modes; ++p) n += nu[static_cast<std::size_t>(p)] * mode_ladder(config, p, Ladder::number);
  return embed(config, n, {}, OperatorKind::hermitian);
}

OperatorMatrix anharmonic_term(const ModelSpec& model) {
  return OperatorMatrix::zero(model.config).with_kind(OperatorKind::hermitian);
}

OffsetHamiltonian h_tilde(const ModelSpec& model) {
  model.validate();
  const HilbertConfig& c = model.config;
  OperatorMatrix h = number_sum(c, model.nu);
  for (int j = 0; j < model.drive_count(); ++j) {
    const LaserDrive& drive = model.drives[static_cast<std::size_t>(j)];
    h += 0.5 * model.detuning(j) * spin_op(c, j, SpinKind::z);
    if (drive.rabi == 0.0) continue;
    const CMatrix d2 = mode_displacement_product(c, imaginary(model.eta_row(j)));
    const CMatrix zero = CMatrix::Zero(d2.rows(), d2.cols());
    h += drive.rabi * spin_blocks(c, j, zero, d2, d2.adjoint(), zero);
  }
  h += anharmonic_term(model);
  return {h.with_kind(OperatorKind::hermitian), 0.0};
}

OperatorMatrix free_hamiltonian(const ModelSpec& model) {
  OperatorMatrix h = number_sum(model.config, model.nu);
  for (int j = 0; j < model.config.n_spins; ++j) h += 0.5 * model.omega_ge * spin_op(model.config, j, SpinKind::z);
  return h.with_kind(OperatorKind::hermitian);
}

OffsetHamiltonian standard_rwa_generator(const ModelSpec& model, int drive, Resonance kind, int mode) {
  model.validate();
  const HilbertConfig& c = model.config;
  if (drive < 0 || drive >= model.drive_count()) throw std::out_of_range("standard_rwa_generator: drive out of range");
  const double rabi = model.drives[static_cast<std::size_t>(drive)].rabi;
  if (kind == Resonance::carrier) return {(rabi * spin_op(c, drive, SpinKind::x)).with_kind(OperatorKind::hermitian), 0.0};

  if (mode < 0 || mode >= c.n_modes) throw std::out_of_range("standard_rwa_generator: mode out of range");
  const double g = model.eta(drive, mode) * rabi;
  const CMatrix a = mode_ladder(c, mode, Ladder::annihilate);
  const CMatrix ad = a.adjoint();
  const CMatrix zero = CMatrix::Zero(a.rows(), a.cols());
  // blue: i g (a^dagger sigma_+ - a sigma_-), red: i g (a sigma_+ - a^dagger sigma_-)
  const CMatrix& up = kind == Resonance::blue ? ad : a;
  const CMatrix& down = kind == Resonance::blue ? a : ad;
  const CMatrix eg = kI * g * up;
  const CMatrix ge = -kI * g * down;
  return {spin_blocks(c, drive, zero, eg, ge, zero, OperatorKind::hermitian), 0.0};
}

OperatorMatrix BreveHamiltonian::matrix() const {
  return (diagonal.matrix + flip + cross).with_kind(OperatorKind::hermitian);
}

BreveHamiltonian breve_h(const ModelSpec& model) {
  model.validate();
  const HilbertConfig& c = model.config;
  BreveHamiltonian out{{OperatorMatrix::zero(c), 0.0}, OperatorMatrix::zero(c), OperatorMatrix::zero(c), model.balanced()};

  OperatorMatrix diag = number_sum(c, model.nu);
  double offset = 0.0;
  for (int j = 0; j < model.drive_count(); ++j) {
    const BalancedParams& p = out.params[static_cast<std::size_t>(j)];
    diag += 0.5 * p.delta_breve * spin_op(c, j, SpinKind::z);
    for (int k = 0; k < c.n_modes; ++k)
      offset += model.nu[static_cast<std::size_t>(k)] * p.eta[static_cast<std::size_t>(k)] * p.eta[static_cast<std::size_t>(k)] /
                (p.root * p.root);
    out.flip += flip_term(model, p, j, 0.0);
  }
  out.diagonal = {diag.with_kind(OperatorKind::hermitian), offset};
  out.flip = out.flip.with_kind(OperatorKind::hermitian);

  // Drive-drive term: sum_{j<l} [sum_p 2 nu_p eta_jp eta_lp / (root_j root_l)] X_j X_l
  std::vector<OperatorMatrix> flips;
  if (model.drive_count() > 1)
    for (int j = 0; j < model.drive_count(); ++j) flips.push_back(breve_flip_operator(model, out.params[static_cast<std::size_t>(j)], j));
  for (int j = 0; j < model.drive_count(); ++j) {
    for (int l = j + 1; l < model.drive_count(); ++l) {
      const BalancedParams& pj = out.params[static_cast<std::size_t>(j)];
      const BalancedParams& pl = out.params[static_cast<std::size_t>(l)];
      double w = 0.0;
      for (int k = 0; k < c.n_modes; ++k) {
        const auto kk = static_cast<std::size_t>(k);
        w += 2.0 * model.nu[kk] * pj.eta[kk] * pl.eta[kk] / (pj.root * pl.root);
      }
      if (w != 0.0) out.cross += w * (flips[static_cast<std::size_t>(j)] * flips[static_cast<std::size_t>(l)]);
    }
  }
  out.cross = hermitian_part(out.cross);
  return out;
}

OperatorMatrix jc_interaction(const ModelSpec& model, double t) {
  model.validate();
  const auto params = model.balanced();
  OperatorMatrix out = OperatorMatrix::zero(model.config);
  for (int j = 0; j < model.drive_count(); ++j) out += flip_term(model, params[static_cast<std::size_t>(j)], j, t);
  return out.with_kind(OperatorKind::hermitian);
}

OperatorMatrix breve_frame(const ModelSpec& model, std::span<const BalancedParams> params, double t) {
  const HilbertConfig& c = model.config;
  CVector diag(c.dimension());
  for (Index i = 0; i < c.dimension(); ++i) {
    const auto occ = c.occupations(i);
    double e = 0.0;
    for (int p = 0; p < c.n_modes; ++p) e += model.nu[static_cast<std::size_t>(p)] * occ[static_cast<std::size_t>(p)];
    for (int j = 0; j < c.n_spins; ++j)
      e += 0.5 * params[static_cast<std::size_t>(j)].delta_breve * (c.spin_state(i, j) == 0 ? 1.0 : -1.0);
    diag(i) = std::exp(kI * e * t);
  }
  return {c, diag.asDiagonal().toDenseMatrix(), OperatorKind::unitary};
}

OperatorMatrix jc_rwa_generator(const ModelSpec& model, std::span<const ResonantPair> pairs) {
  const HilbertConfig& c = model.config;
  const auto params = model.balanced();
  OperatorMatrix out = OperatorMatrix::zero(c);
  for (const ResonantPair& pair : pairs) {
    if (pair.drive < 0 || pair.drive >= model.drive_count() || pair.mode < 0 || pair.mode >= c.n_modes)
      throw std::out_of_range("jc_rwa_generator: resonant pair out of range");
    const BalancedParams& p = params[static_cast<std::size_t>(pair.drive)];
    const double g = p.coupling[static_cast<std::size_t>(pair.mode)] * model.nu[static_cast<std::size_t>(pair.mode)];
    const CMatrix a = mode_ladder(c, pair.mode, Ladder::annihilate);
    const CMatrix zero = CMatrix::Zero(a.rows(), a.cols());
    out += spin_blocks(c, pair.drive, zero, kI * g * a, -kI * g * CMatrix(a.adjoint()), zero);
  }
  return out.with_kind(OperatorKind::hermitian);
}

std::optional<double> corrected_resonance_detuning(double nu, double rabi) {
  const double s = nu * nu - 4.0 * rabi * rabi;
  if (s < 0.0) return std::nullopt;
  return std::sqrt(s);
}

ResonanceReport resonance_offsets(const ModelSpec& model) {
  model.validate();
  ResonanceReport report;
  double best = std::numeric_limits<double>::infinity();
  for (int j = 0; j < model.drive_count(); ++j) {
    const double rabi = model.drives[static_cast<std::size_t>(j)].rabi;
    const double delta = model.detuning(j);
    const double breve = std::sqrt(4.0 * rabi * rabi + delta * delta);
    for (int p = 0; p < model.config.n_modes; ++p) {
      ResonanceEntry e;
      e.drive = j;
      e.mode = p;
      e.nu = model.nu[static_cast<std::size_t>(p)];
      e.delta_breve = breve;
      e.omega_minus = e.nu - breve;
      e.omega_plus = e.nu + breve;
      e.required_detuning = corrected_resonance_detuning(e.nu, rabi);
      if (std::abs(e.omega_minus) < best) {
        best = std::abs(e.omega_minus);
        report.nearest = {j, p};
      }
      report.entries.push_back(e);
    }
  }
  return report;
}

}  // namespace ionjc
