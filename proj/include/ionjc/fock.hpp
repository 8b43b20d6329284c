#pragma once

// Truncated multi-mode Fock space tensored with a register of two-level ions.
//
// Basis ordering: mode 0 index slowest, then mode 1, ..., then the spin
// factors in ion order. Within a spin factor the excited state |e> comes
// first, so sigma_z = diag(+1, -1) and 2x2 block matrices read as
// [[ee, eg], [ge, gg]].
//
// Mode and spin indices are 0-based throughout the C++ API.

#include <Eigen/Dense>

#include <complex>
#include <span>
#include <utility>
#include <vector>

namespace ionjc {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using Index = Eigen::Index;

inline constexpr Complex kI{0.0, 1.0};

struct HilbertConfig {
  int n_modes = 1;
  int n_max = 2;  // Fock states |0> .. |n_max-1> per mode
  int n_spins = 1;
  int guard = 0;  // levels >= n_max - guard are excluded from comparisons

  Index mode_dimension() const;
  Index spin_dimension() const;
  Index dimension() const;

  /// Throws std::invalid_argument if any field is out of range.
  void validate() const;

  /// Occupation of every mode for a full-space basis index.
  std::vector<int> occupations(Index basis_index) const;
  /// Spin index (0 = e, 1 = g) of `spin` for a full-space basis index.
  int spin_state(Index basis_index, int spin) const;
  /// True when every mode occupation lies below n_max - guard.
  bool in_guarded_subspace(Index basis_index) const;
  std::vector<Index> guarded_indices() const;

  bool operator==(const HilbertConfig&) const = default;
};

enum class Ladder { annihilate, create, number };
enum class SpinKind { plus, minus, z, x };
enum class OperatorKind { general, hermitian, unitary };

/// Dense operator on the full space of a HilbertConfig.
class OperatorMatrix {
 public:
  OperatorMatrix(HilbertConfig config, CMatrix entries, OperatorKind kind = OperatorKind::general);

  static OperatorMatrix identity(const HilbertConfig& config);
  static OperatorMatrix zero(const HilbertConfig& config);

  const HilbertConfig& config() const { return config_; }
  const CMatrix& matrix() const { return entries_; }
  OperatorKind kind() const { return kind_; }
  Index dimension() const { return entries_.rows(); }

  OperatorMatrix adjoint() const;
  OperatorMatrix with_kind(OperatorKind kind) const;

  Complex operator()(Index row, Index col) const { return entries_(row, col); }

  OperatorMatrix& operator+=(const OperatorMatrix& other);
  OperatorMatrix& operator-=(const OperatorMatrix& other);

  friend OperatorMatrix operator+(OperatorMatrix lhs, const OperatorMatrix& rhs) { return lhs += rhs; }
  friend OperatorMatrix operator-(OperatorMatrix lhs, const OperatorMatrix& rhs) { return lhs -= rhs; }
  friend OperatorMatrix operator*(const OperatorMatrix& lhs, const OperatorMatrix& rhs);
  friend OperatorMatrix operator*(double scale, const OperatorMatrix& op);
  friend OperatorMatrix operator*(Complex scale, const OperatorMatrix& op);
  friend CVector operator*(const OperatorMatrix& op, const CVector& state);

  /// A + shift * I
  OperatorMatrix shifted(double shift) const;

 private:
  HilbertConfig config_;
  CMatrix entries_;
  OperatorKind kind_;
};

// ---- mode-space building blocks (dimension n_max^n_modes, no spins) ----

CMatrix single_mode_ladder(int n_max, Ladder kind);
CMatrix mode_identity(const HilbertConfig& config);
CMatrix mode_ladder(const HilbertConfig& config, int mode, Ladder kind);
/// exp(alpha a^dagger - conj(alpha) a) on one mode, exact exponential of the truncated generator.
CMatrix mode_displacement(const HilbertConfig& config, int mode, Complex alpha);
/// prod_p D_p(alphas[p]); alphas.size() must equal n_modes.
CMatrix mode_displacement_product(const HilbertConfig& config, std::span<const Complex> alphas);

/// 2x2 matrix in the (e, g) ordering.
CMatrix spin_matrix(SpinKind kind);

/// mode_op (x) [spin operators on the listed spins, identity elsewhere].
OperatorMatrix embed(const HilbertConfig& config, const CMatrix& mode_op,
                     std::span<const std::pair<int, CMatrix>> spin_factors = {},
                     OperatorKind kind = OperatorKind::general);

/// Operator that is the 2x2 block matrix [[ee, eg], [ge, gg]] of mode-space
/// operators on the given spin factor, identity on the other spins.
OperatorMatrix spin_blocks(const HilbertConfig& config, int spin, const CMatrix& ee, const CMatrix& eg,
                           const CMatrix& ge, const CMatrix& gg, OperatorKind kind = OperatorKind::general);

// ---- full-space operators ----

OperatorMatrix ladder(const HilbertConfig& config, int mode, Ladder kind);
OperatorMatrix displacement(const HilbertConfig& config, int mode, Complex alpha);
OperatorMatrix spin_op(const HilbertConfig& config, int ion, SpinKind kind);

/// Cached eigendecomposition of a Hermitian matrix for repeated exp(-iHt).
class HermitianEvolver {
 public:
  explicit HermitianEvolver(const CMatrix& hermitian);

  CMatrix evolve(double t) const;
  CVector apply(double t, const CVector& state) const;
  const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }

 private:
  Eigen::VectorXd eigenvalues_;
  CMatrix eigenvectors_;
};

/// exp(-i H t) via Hermitian eigendecomposition. Rejects ||H - H^dagger||_max > 1e-10.
OperatorMatrix expm_unitary(const OperatorMatrix& hamiltonian, double t);

// ---- norms and comparisons ----

double max_abs(const CMatrix& m);
double hermiticity_defect(const CMatrix& m);
/// ||U^dagger U - I||_max
double unitarity_defect(const CMatrix& m);

/// Spectral norm of P A P, P the guarded-subspace projector.
double guarded_norm(const OperatorMatrix& a);
/// Spectral norm of P (A - B) P.
double guarded_distance(const OperatorMatrix& a, const OperatorMatrix& b);
/// 1 - |tr(P A^dagger B P)| / tr(P), clamped to [0, 1]; global-phase insensitive.
double guarded_infidelity(const OperatorMatrix& a, const OperatorMatrix& b);

/// Orthonormal basis vector for the given occupations and spin states (0 = e, 1 = g).
CVector basis_state(const HilbertConfig& config, std::span<const int> occupations, std::span<const int> spins);

}  // namespace ionjc
