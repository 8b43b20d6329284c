#include "ionjc/fock.hpp"

#include "ionjc/errors.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace ionjc {

namespace {

Index int_pow(Index base, int exponent) {
  Index result = 1;
  for (int i = 0; i < exponent; ++i) result *= base;
  return result;
}

void require_same_config(const HilbertConfig& a, const HilbertConfig& b, const char* what) {
  if (!(a == b)) throw std::invalid_argument(std::string(what) + ": Hilbert configurations differ");
}

OperatorKind sum_kind(OperatorKind a, OperatorKind b) {
  return a == OperatorKind::hermitian && b == OperatorKind::hermitian ? OperatorKind::hermitian
                                                                     : OperatorKind::general;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out = Eigen::kroneckerProduct(a, b).eval();
  return out;
}

CMatrix spin_register_op(const HilbertConfig& config, std::span<const std::pair<int, CMatrix>> factors) {
  CMatrix out = CMatrix::Identity(1, 1);
  for (int s = 0; s < config.n_spins; ++s) {
    CMatrix local = CMatrix::Identity(2, 2);
    for (const auto& [spin, op] : factors) {
      if (spin < 0 || spin >= config.n_spins) throw std::out_of_range("spin index out of range");
      if (op.rows() != 2 || op.cols() != 2) throw std::invalid_argument("spin factor must be 2x2");
      if (spin == s) local = op * local;
    }
    out = kron(out, local);
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------- config

Index HilbertConfig::mode_dimension() const { return int_pow(n_max, n_modes); }
Index HilbertConfig::spin_dimension() const { return int_pow(2, n_spins); }
Index HilbertConfig::dimension() const { return mode_dimension() * spin_dimension(); }

void HilbertConfig::validate() const {
  if (n_modes < 1) throw std::invalid_argument("HilbertConfig: n_modes must be positive");
  if (n_max < 2) throw std::invalid_argument("HilbertConfig: n_max must be at least 2");
  if (n_spins < 0) throw std::invalid_argument("HilbertConfig: n_spins must be non-negative");
  if (guard < 0 || guard >= n_max) throw std::invalid_argument("HilbertConfig: need 0 <= guard < n_max");
}

std::vector<int> HilbertConfig::occupations(Index basis_index) const {
  Index mode_index = basis_index / spin_dimension();
  std::vector<int> occ(static_cast<std::size_t>(n_modes));
  for (int p = n_modes - 1; p >= 0; --p) {
    occ[static_cast<std::size_t>(p)] = static_cast<int>(mode_index % n_max);
    mode_index /= n_max;
  }
  return occ;
}

int HilbertConfig::spin_state(Index basis_index, int spin) const {
  const Index spin_index = basis_index % spin_dimension();
  return static_cast<int>((spin_index >> (n_spins - 1 - spin)) & 1);
}

bool HilbertConfig::in_guarded_subspace(Index basis_index) const {
  const int limit = n_max - guard;
  Index mode_index = basis_index / spin_dimension();
  for (int p = 0; p < n_modes; ++p) {
    if (mode_index % n_max >= limit) return false;
    mode_index /= n_max;
  }
  return true;
}

std::vector<Index> HilbertConfig::guarded_indices() const {
  std::vector<Index> out;
  const Index dim = dimension();
  for (Index i = 0; i < dim; ++i)
    if (in_guarded_subspace(i)) out.push_back(i);
  return out;
}

// ---------------------------------------------------------------- OperatorMatrix

OperatorMatrix::OperatorMatrix(HilbertConfig config, CMatrix entries, OperatorKind kind)
    : config_(config), entries_(std::move(entries)), kind_(kind) {
  if (entries_.rows() != entries_.cols() || entries_.rows() != config_.dimension())
    throw std::invalid_argument("OperatorMatrix: entries do not match the configured dimension " +
                                std::to_string(config_.dimension()));
}

OperatorMatrix OperatorMatrix::identity(const HilbertConfig& config) {
  return {config, CMatrix::Identity(config.dimension(), config.dimension()), OperatorKind::unitary};
}

OperatorMatrix OperatorMatrix::zero(const HilbertConfig& config) {
  return {config, CMatrix::Zero(config.dimension(), config.dimension()), OperatorKind::hermitian};
}

OperatorMatrix OperatorMatrix::adjoint() const { return {config_, entries_.adjoint(), kind_}; }

OperatorMatrix OperatorMatrix::with_kind(OperatorKind kind) const { return {config_, entries_, kind}; }

OperatorMatrix& OperatorMatrix::operator+=(const OperatorMatrix& other) {
  require_same_config(config_, other.config_, "operator+");
  entries_ += other.entries_;
  kind_ = sum_kind(kind_, other.kind_);
  return *this;
}

OperatorMatrix& OperatorMatrix::operator-=(const OperatorMatrix& other) {
  require_same_config(config_, other.config_, "operator-");
  entries_ -= other.entries_;
  kind_ = sum_kind(kind_, other.kind_);
  return *this;
}

OperatorMatrix operator*(const OperatorMatrix& lhs, const OperatorMatrix& rhs) {
  require_same_config(lhs.config_, rhs.config_, "operator*");
  const bool unitary = lhs.kind_ == OperatorKind::unitary && rhs.kind_ == OperatorKind::unitary;
  return {lhs.config_, lhs.entries_ * rhs.entries_, unitary ? OperatorKind::unitary : OperatorKind::general};
}

OperatorMatrix operator*(double scale, const OperatorMatrix& op) {
  const OperatorKind kind = op.kind_ == OperatorKind::hermitian ? OperatorKind::hermitian : OperatorKind::general;
  return {op.config_, scale * op.entries_, kind};
}

OperatorMatrix operator*(Complex scale, const OperatorMatrix& op) {
  OperatorKind kind = OperatorKind::general;
  if (op.kind_ == OperatorKind::unitary && std::abs(std::abs(scale) - 1.0) < 1e-15) kind = OperatorKind::unitary;
  if (op.kind_ == OperatorKind::hermitian && scale.imag() == 0.0) kind = OperatorKind::hermitian;
  return {op.config_, scale * op.entries_, kind};
}

CVector operator*(const OperatorMatrix& op, const CVector& state) {
  if (state.size() != op.dimension()) throw std::invalid_argument("state dimension mismatch");
  return op.entries_ * state;
}

OperatorMatrix OperatorMatrix::shifted(double shift) const {
  CMatrix out = entries_;
  out.diagonal().array() += shift;
  return {config_, std::move(out), kind_ == OperatorKind::hermitian ? kind_ : OperatorKind::general};
}

// ---------------------------------------------------------------- mode space

CMatrix single_mode_ladder(int n_max, Ladder kind) {
  CMatrix m = CMatrix::Zero(n_max, n_max);
  for (int n = 1; n < n_max; ++n) {
    const double amp = std::sqrt(static_cast<double>(n));
    switch (kind) {
      case Ladder::annihilate: m(n - 1, n) = amp; break;
      case Ladder::create: m(n, n - 1) = amp; break;
      case Ladder::number: m(n, n) = n; break;
    }
  }
  return m;
}

CMatrix mode_identity(const HilbertConfig& config) {
  return CMatrix::Identity(config.mode_dimension(), config.mode_dimension());
}

namespace {

CMatrix embed_single_mode(const HilbertConfig& config, int mode, const CMatrix& local) {
  if (mode < 0 || mode >= config.n_modes)
    throw std::out_of_range("mode index " + std::to_string(mode) + " out of range");
  CMatrix out = CMatrix::Identity(1, 1);
  for (int p = 0; p < config.n_modes; ++p)
    out = kron(out, p == mode ? local : CMatrix::Identity(config.n_max, config.n_max));
  return out;
}

CMatrix single_mode_displacement(int n_max, Complex alpha) {
  const CMatrix a = single_mode_ladder(n_max, Ladder::annihilate);
  // D = exp(G), G = alpha a^dagger - conj(alpha) a anti-Hermitian, so D = exp(-i H) with H = i G.
  const CMatrix h = kI * (alpha * a.adjoint() - std::conj(alpha) * a);
  return HermitianEvolver(h).evolve(1.0);
}

}  // namespace

CMatrix mode_ladder(const HilbertConfig& config, int mode, Ladder kind) {
  return embed_single_mode(config, mode, single_mode_ladder(config.n_max, kind));
}

CMatrix mode_displacement(const HilbertConfig& config, int mode, Complex alpha) {
  return embed_single_mode(config, mode, single_mode_displacement(config.n_max, alpha));
}

CMatrix mode_displacement_product(const HilbertConfig& config, std::span<const Complex> alphas) {
  if (static_cast<int>(alphas.size()) != config.n_modes)
    throw std::invalid_argument("displacement product needs one amplitude per mode");
  CMatrix out = CMatrix::Identity(1, 1);
  for (int p = 0; p < config.n_modes; ++p) {
    const Complex alpha = alphas[static_cast<std::size_t>(p)];
    out = kron(out, alpha == Complex{} ? CMatrix::Identity(config.n_max, config.n_max).eval()
                                       : single_mode_displacement(config.n_max, alpha));
  }
  return out;
}

CMatrix spin_matrix(SpinKind kind) {
  CMatrix m = CMatrix::Zero(2, 2);
  switch (kind) {
    case SpinKind::plus: m(0, 1) = 1.0; break;   // |e><g|
    case SpinKind::minus: m(1, 0) = 1.0; break;  // |g><e|
    case SpinKind::z:
      m(0, 0) = 1.0;
      m(1, 1) = -1.0;
      break;
    case SpinKind::x:
      m(0, 1) = 1.0;
      m(1, 0) = 1.0;
      break;
  }
  return m;
}

OperatorMatrix embed(const HilbertConfig& config, const CMatrix& mode_op,
                     std::span<const std::pair<int, CMatrix>> spin_factors, OperatorKind kind) {
  if (mode_op.rows() != config.mode_dimension() || mode_op.cols() != config.mode_dimension())
    throw std::invalid_argument("embed: mode operator has the wrong dimension");
  return {config, kron(mode_op, spin_register_op(config, spin_factors)), kind};
}

OperatorMatrix spin_blocks(const HilbertConfig& config, int spin, const CMatrix& ee, const CMatrix& eg,
                           const CMatrix& ge, const CMatrix& gg, OperatorKind kind) {
  if (spin < 0 || spin >= config.n_spins) throw std::out_of_range("spin index out of range");
  const CMatrix* blocks[2][2] = {{&ee, &eg}, {&ge, &gg}};
  CMatrix total = CMatrix::Zero(config.dimension(), config.dimension());
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) {
      CMatrix unit = CMatrix::Zero(2, 2);
      unit(r, c) = 1.0;
      const std::pair<int, CMatrix> factor{spin, unit};
      total += embed(config, *blocks[r][c], std::span(&factor, 1)).matrix();
    }
  }
  return {config, std::move(total), kind};
}

// ---------------------------------------------------------------- full space

OperatorMatrix ladder(const HilbertConfig& config, int mode, Ladder kind) {
  return embed(config, mode_ladder(config, mode, kind), {},
               kind == Ladder::number ? OperatorKind::hermitian : OperatorKind::general);
}

OperatorMatrix displacement(const HilbertConfig& config, int mode, Complex alpha) {
  return embed(config, mode_displacement(config, mode, alpha), {}, OperatorKind::unitary);
}

OperatorMatrix spin_op(const HilbertConfig& config, int ion, SpinKind kind) {
  if (ion < 0 || ion >= config.n_spins)
    throw std::out_of_range("ion index " + std::to_string(ion) + " out of range");
  const std::pair<int, CMatrix> factor{ion, spin_matrix(kind)};
  const bool herm = kind == SpinKind::z || kind == SpinKind::x;
  return embed(config, mode_identity(config), std::span(&factor, 1),
               herm ? OperatorKind::hermitian : OperatorKind::general);
}

// ---------------------------------------------------------------- exponentials

HermitianEvolver::HermitianEvolver(const CMatrix& hermitian) {
  const CMatrix sym = 0.5 * (hermitian + hermitian.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(sym);
  if (solver.info() != Eigen::Success) throw NumericalError("Hermitian eigendecomposition failed");
  eigenvalues_ = solver.eigenvalues();
  eigenvectors_ = solver.eigenvectors();
}

CMatrix HermitianEvolver::evolve(double t) const {
  CVector phases(eigenvalues_.size());
  for (Index i = 0; i < eigenvalues_.size(); ++i) phases(i) = std::exp(-kI * (eigenvalues_(i) * t));
  return eigenvectors_ * phases.asDiagonal() * eigenvectors_.adjoint();
}

CVector HermitianEvolver::apply(double t, const CVector& state) const {
  CVector coeffs = eigenvectors_.adjoint() * state;
  for (Index i = 0; i < coeffs.size(); ++i) coeffs(i) *= std::exp(-kI * (eigenvalues_(i) * t));
  return eigenvectors_ * coeffs;
}

OperatorMatrix expm_unitary(const OperatorMatrix& hamiltonian, double t) {
  const double defect = hermiticity_defect(hamiltonian.matrix());
  if (defect > 1e-10)
    throw NumericalError("expm_unitary: input is not Hermitian (defect " + std::to_string(defect) + ")");
  if (t == 0.0) return OperatorMatrix::identity(hamiltonian.config());
  return {hamiltonian.config(), HermitianEvolver(hamiltonian.matrix()).evolve(t), OperatorKind::unitary};
}

// ---------------------------------------------------------------- norms

double max_abs(const CMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

double hermiticity_defect(const CMatrix& m) { return max_abs(m - m.adjoint()); }

double unitarity_defect(const CMatrix& m) {
  return max_abs(m.adjoint() * m - CMatrix::Identity(m.rows(), m.cols()));
}

namespace {

CMatrix guarded_block(const CMatrix& m, const std::vector<Index>& idx) {
  const Index n = static_cast<Index>(idx.size());
  CMatrix out(n, n);
  for (Index c = 0; c < n; ++c)
    for (Index r = 0; r < n; ++r) out(r, c) = m(idx[static_cast<std::size_t>(r)], idx[static_cast<std::size_t>(c)]);
  return out;
}

double spectral_norm(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::BDCSVD<CMatrix> svd(m);
  return svd.singularValues()(0);
}

}  // namespace

double guarded_norm(const OperatorMatrix& a) {
  return spectral_norm(guarded_block(a.matrix(), a.config().guarded_indices()));
}

double guarded_distance(const OperatorMatrix& a, const OperatorMatrix& b) {
  require_same_config(a.config(), b.config(), "guarded_distance");
  return spectral_norm(guarded_block(a.matrix() - b.matrix(), a.config().guarded_indices()));
}

double guarded_infidelity(const OperatorMatrix& a, const OperatorMatrix& b) {
  require_same_config(a.config(), b.config(), "guarded_infidelity");
  const auto idx = a.config().guarded_indices();
  if (idx.empty()) return 0.0;
  Complex trace{};
  for (Index i : idx) trace += a.matrix().col(i).dot(b.matrix().col(i));  // (A^dagger B)_ii
  const double fidelity = std::abs(trace) / static_cast<double>(idx.size());
  return std::clamp(1.0 - fidelity, 0.0, 1.0);
}

CVector basis_state(const HilbertConfig& config, std::span<const int> occupations, std::span<const int> spins) {
  if (static_cast<int>(occupations.size()) != config.n_modes || static_cast<int>(spins.size()) != config.n_spins)
    throw std::invalid_argument("basis_state: wrong number of labels");
  Index mode_index = 0;
  for (int n : occupations) {
    if (n < 0 || n >= config.n_max) throw std::out_of_range("basis_state: occupation outside truncation");
    mode_index = mode_index * config.n_max + n;
  }
  Index spin_index = 0;
  for (int s : spins) {
    if (s != 0 && s != 1) throw std::invalid_argument("basis_state: spin label must be 0 (e) or 1 (g)");
    spin_index = spin_index * 2 + s;
  }
  CVector v = CVector::Zero(config.dimension());
  v(mode_index * config.spin_dimension() + spin_index) = 1.0;
  return v;
}

}  // namespace ionjc
