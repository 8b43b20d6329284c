#pragma once

// Independent reference constructions used only by the tests. None of these
// call into the library's operator builders.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

namespace oracle {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
inline const Complex I{0.0, 1.0};

inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline CMatrix annihilation(int n_max) {
  CMatrix a = CMatrix::Zero(n_max, n_max);
  for (int n = 1; n < n_max; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

/// Factors listed mode 0 .. mode M-1, then spin 0 .. spin S-1.
inline CMatrix tensor(const std::vector<CMatrix>& factors) {
  CMatrix out = CMatrix::Identity(1, 1);
  for (const CMatrix& f : factors) out = kron(out, f);
  return out;
}

struct Space {
  int modes = 1;
  int n_max = 2;
  int spins = 1;

  std::vector<CMatrix> identities() const {
    std::vector<CMatrix> f;
    for (int p = 0; p < modes; ++p) f.push_back(CMatrix::Identity(n_max, n_max));
    for (int j = 0; j < spins; ++j) f.push_back(CMatrix::Identity(2, 2));
    return f;
  }
  CMatrix mode_op(int p, const CMatrix& single) const {
    auto f = identities();
    f[static_cast<std::size_t>(p)] = single;
    return tensor(f);
  }
  CMatrix spin_op(int j, const CMatrix& s) const {
    auto f = identities();
    f[static_cast<std::size_t>(modes + j)] = s;
    return tensor(f);
  }
  Eigen::Index dim() const {
    Eigen::Index d = 1;
    for (int p = 0; p < modes; ++p) d *= n_max;
    return d << spins;
  }
};

// (e, g) ordering
inline CMatrix sigma_z() { CMatrix s(2, 2); s << 1, 0, 0, -1; return s; }
inline CMatrix sigma_x() { CMatrix s(2, 2); s << 0, 1, 1, 0; return s; }
inline CMatrix sigma_plus() { CMatrix s(2, 2); s << 0, 1, 0, 0; return s; }
inline CMatrix sigma_minus() { CMatrix s(2, 2); s << 0, 0, 1, 0; return s; }

/// exp(-i H t) by scaling and squaring of a Taylor series.
inline CMatrix taylor_expm(const CMatrix& h, double t) {
  const CMatrix a = -I * t * h;
  const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  double scaled = norm;
  while (scaled > 0.25) {
    scaled *= 0.5;
    ++squarings;
  }
  const CMatrix b = a / std::pow(2.0, squarings);
  CMatrix term = CMatrix::Identity(a.rows(), a.cols());
  CMatrix sum = term;
  for (int k = 1; k < 30; ++k) {
    term = term * b / static_cast<double>(k);
    sum += term;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum;
}

/// <m| D(alpha) |n> in the untruncated Fock space (associated Laguerre form).
inline Complex displacement_element(int m, int n, Complex alpha) {
  const double x = std::norm(alpha);
  const int lo = std::min(m, n);
  const int k = std::abs(m - n);
  // L_lo^{(k)}(x) by the three-term recurrence
  double l_prev = 1.0;
  double l = 1.0 + k - x;
  if (lo == 0) l = 1.0;
  for (int i = 1; i < lo; ++i) {
    const double next = ((2.0 * i + 1.0 + k - x) * l - (i + k) * l_prev) / (i + 1.0);
    l_prev = l;
    l = next;
  }
  double log_ratio = 0.0;  // log sqrt(lo! / (lo + k)!)
  for (int i = lo + 1; i <= lo + k; ++i) log_ratio -= 0.5 * std::log(static_cast<double>(i));
  const Complex power = m >= n ? std::pow(alpha, k) : std::pow(-std::conj(alpha), k);
  return std::exp(log_ratio - 0.5 * x) * power * l;
}

/// Trap plus Coulomb energy in the dimensionless units of the chain.
inline double chain_energy(const std::vector<double>& u) {
  double e = 0.0;
  for (std::size_t m = 0; m < u.size(); ++m) {
    e += 0.5 * u[m] * u[m];
    for (std::size_t n = m + 1; n < u.size(); ++n) e += 1.0 / std::abs(u[m] - u[n]);
  }
  return e;
}

inline Eigen::MatrixXd fd_hessian(const std::vector<double>& u, double h = 1e-4) {
  const auto n = u.size();
  Eigen::MatrixXd out(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      auto at = [&](double di, double dj) {
        auto v = u;
        v[i] += di;
        v[j] += dj;
        return chain_energy(v);
      };
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          (at(h, h) - at(h, -h) - at(-h, h) + at(-h, -h)) / (4.0 * h * h);
    }
  }
  return out;
}

/// Spectral norm of the block of `m` restricted to the given indices.
inline double block_norm(const CMatrix& m, const std::vector<Eigen::Index>& idx) {
  CMatrix b(static_cast<Eigen::Index>(idx.size()), static_cast<Eigen::Index>(idx.size()));
  for (std::size_t r = 0; r < idx.size(); ++r)
    for (std::size_t c = 0; c < idx.size(); ++c)
      b(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = m(idx[r], idx[c]);
  return Eigen::JacobiSVD<CMatrix>(b).singularValues()(0);
}

inline std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64(seed); }

}  // namespace oracle
