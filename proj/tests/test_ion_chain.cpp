#include "ionjc/ion_chain.hpp"
#include "support/oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace ionjc;

TEST_CASE("two and three ion equilibria match closed forms") {
  const auto u2 = equilibrium_positions(2);
  CHECK(std::abs(u2[0] + std::cbrt(0.25)) < 1e-12);
  CHECK(std::abs(u2[1] - std::cbrt(0.25)) < 1e-12);

  const auto u3 = equilibrium_positions(3);
  CHECK(std::abs(u3[0] + std::cbrt(1.25)) < 1e-12);
  CHECK(u3[1] == 0.0);
  CHECK(std::abs(u3[2] - std::cbrt(1.25)) < 1e-12);
}

TEST_CASE("equilibrium residual vanishes up to ten ions") {
  for (int n = 1; n <= 10; ++n) {
    const auto u = equilibrium_positions(n);
    for (double r : equilibrium_residual(u)) CHECK(std::abs(r) < 1e-12);
    for (std::size_t m = 0; m < u.size(); ++m) CHECK(u[m] == -u[u.size() - 1 - m]);
  }
}

TEST_CASE("Hessian agrees with finite differences of the energy") {
  for (int n : {2, 3, 5}) {
    const auto u = equilibrium_positions(n);
    const Eigen::MatrixXd fd = oracle::fd_hessian(u);
    CHECK((chain_hessian(u) - fd).cwiseAbs().maxCoeff() < 1e-5);
  }
}

TEST_CASE("normal mode frequencies") {
  const NormalModes m2 = normal_modes(2);
  CHECK(std::abs(m2.frequencies[0] - 1.0) < 1e-12);
  CHECK(std::abs(m2.frequencies[1] - std::sqrt(3.0)) < 1e-12);

  const NormalModes m3 = normal_modes(3);
  CHECK(std::abs(m3.frequencies[0] - 1.0) < 1e-12);
  CHECK(std::abs(m3.frequencies[1] - std::sqrt(3.0)) < 1e-12);
  CHECK(std::abs(m3.frequencies[2] - std::sqrt(29.0 / 5.0)) < 1e-12);

  // centre-of-mass frequency is the trap frequency for any N
  for (int n = 4; n <= 10; ++n) CHECK(std::abs(normal_modes(n).frequencies[0] - 1.0) < 1e-10);
}

TEST_CASE("mode vectors are orthonormal and sign-fixed") {
  const NormalModes m2 = normal_modes(2);
  const double r = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(m2.eigenvectors(0, 0) - r) < 1e-12);
  CHECK(std::abs(m2.eigenvectors(1, 0) - r) < 1e-12);
  // breathing mode sums to zero: first nonzero component is made positive
  CHECK(std::abs(m2.eigenvectors(0, 1) - r) < 1e-12);
  CHECK(std::abs(m2.eigenvectors(1, 1) + r) < 1e-12);

  const NormalModes m3 = normal_modes(3);
  CHECK(std::abs(m3.eigenvectors(0, 2) - 1.0 / std::sqrt(6.0)) < 1e-12);
  CHECK(std::abs(m3.eigenvectors(1, 2) + 2.0 / std::sqrt(6.0)) < 1e-12);

  for (int n = 2; n <= 8; ++n) {
    const NormalModes m = normal_modes(n);
    const Eigen::MatrixXd gram = m.eigenvectors.transpose() * m.eigenvectors;
    CHECK((gram - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-12);
    for (int p = 0; p < n; ++p)
      CHECK((m.mode_matrix.col(p) - m.eigenvectors.col(p) / std::sqrt(m.frequencies[static_cast<std::size_t>(p)]))
                .cwiseAbs()
                .maxCoeff() < 1e-15);
  }
}

TEST_CASE("Lamb-Dicke factors") {
  const ChainModel chain = make_chain(2, 50.0, 1.0);
  LaserDrive d;
  d.ion = 1;
  d.k_l = 2.0;
  d.beam_angle = 0.3;
  const std::vector<LaserDrive> drives{d};
  const Eigen::MatrixXd eta = lamb_dicke_matrix(chain, drives);
  const double pre = 2.0 * std::cos(0.3) / std::sqrt(100.0);
  CHECK(std::abs(eta(0, 0) - pre / std::sqrt(2.0)) < 1e-14);
  CHECK(std::abs(eta(0, 1) + pre / std::sqrt(2.0) / std::pow(3.0, 0.25)) < 1e-14);

  LaserDrive bad = d;
  bad.ion = 2;
  const std::vector<LaserDrive> out_of_range{bad};
  CHECK_THROWS_AS(lamb_dicke_matrix(chain, out_of_range), std::out_of_range);
}

TEST_CASE("physical Lamb-Dicke parameter for a calcium ion") {
  // 40Ca+ at nu1 = 2 pi 1 MHz, 729 nm along the axis
  const double nu1 = 2.0 * M_PI * 1e6;
  const ChainModel chain = make_chain(1, mass_over_hbar(40.0), nu1);
  const double k = 2.0 * M_PI / 729e-9;
  const double eta = chain.lamb_dicke_prefactor(k, 0.0);
  const double expected = k * std::sqrt(1.054571817e-34 / (2.0 * 40.0 * 1.66053906660e-27 * nu1));
  CHECK(std::abs(eta - expected) < 1e-12);
  CHECK(eta > 0.09);
  CHECK(eta < 0.11);
}
