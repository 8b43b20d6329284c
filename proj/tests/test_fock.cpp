#include "ionjc/errors.hpp"
#include "ionjc/fock.hpp"
#include "support/oracles.hpp"

#include <doctest.h>

using namespace ionjc;

TEST_CASE("dimensions and basis ordering") {
  const HilbertConfig c{2, 3, 2, 1};
  CHECK(c.mode_dimension() == 9);
  CHECK(c.spin_dimension() == 4);
  CHECK(c.dimension() == 36);
  // index = ((n0 * 3 + n1) * 2 + s0) * 2 + s1
  const Index idx = ((2 * 3 + 1) * 2 + 1) * 2 + 0;
  CHECK(c.occupations(idx) == std::vector<int>{2, 1});
  CHECK(c.spin_state(idx, 0) == 1);
  CHECK(c.spin_state(idx, 1) == 0);
  CHECK_FALSE(c.in_guarded_subspace(idx));
  CHECK(c.guarded_indices().size() == 4u * 4u);

  const std::vector<int> occ{2, 1};
  const std::vector<int> spins{1, 0};
  CHECK(basis_state(c, occ, spins)(idx) == Complex(1.0, 0.0));
}

TEST_CASE("config validation") {
  CHECK_THROWS_AS(HilbertConfig({1, 1, 1, 0}).validate(), std::invalid_argument);
  CHECK_THROWS_AS(HilbertConfig({1, 4, 1, 4}).validate(), std::invalid_argument);
  CHECK_THROWS_AS(HilbertConfig({0, 4, 1, 0}).validate(), std::invalid_argument);
  CHECK_NOTHROW(HilbertConfig({1, 4, 0, 1}).validate());
}

TEST_CASE("ladder operators match a naive tensor construction") {
  const HilbertConfig c{2, 4, 2, 1};
  const oracle::Space s{2, 4, 2};
  const CMatrix a = oracle::annihilation(4);
  CHECK(max_abs(ladder(c, 1, Ladder::annihilate).matrix() - s.mode_op(1, a)) == 0.0);
  CHECK(max_abs(ladder(c, 0, Ladder::create).matrix() - s.mode_op(0, a.adjoint())) == 0.0);
  CHECK(max_abs(ladder(c, 0, Ladder::number).matrix() - s.mode_op(0, a.adjoint() * a)) < 1e-15);
  CHECK(max_abs(spin_op(c, 1, SpinKind::plus).matrix() - s.spin_op(1, oracle::sigma_plus())) == 0.0);
  CHECK(max_abs(spin_op(c, 0, SpinKind::z).matrix() - s.spin_op(0, oracle::sigma_z())) == 0.0);
  CHECK(max_abs(spin_op(c, 0, SpinKind::minus).matrix() - s.spin_op(0, oracle::sigma_minus())) == 0.0);
}

TEST_CASE("canonical commutator holds below the top level") {
  const HilbertConfig c{1, 10, 1, 1};
  const OperatorMatrix a = ladder(c, 0, Ladder::annihilate);
  const OperatorMatrix comm = a * a.adjoint() - a.adjoint() * a;
  CHECK(guarded_distance(comm, OperatorMatrix::identity(c)) < 1e-14);
  // the truncated commutator fails only on the top level
  CHECK(std::abs(comm(c.dimension() - 1, c.dimension() - 1) - Complex(1.0 - 10.0, 0.0)) < 1e-12);
}

TEST_CASE("spin_blocks places blocks in (e, g) order") {
  const HilbertConfig c{1, 3, 2, 0};
  const oracle::Space s{1, 3, 2};
  const CMatrix a = oracle::annihilation(3);
  const CMatrix z = CMatrix::Zero(3, 3);
  const OperatorMatrix op = spin_blocks(c, 1, z, a, z, z);
  // [[0, a], [0, 0]] on spin 1 is a sigma_+^1
  CHECK(max_abs(op.matrix() - s.mode_op(0, a) * s.spin_op(1, oracle::sigma_plus())) == 0.0);
}

TEST_CASE("displacement agrees with the Laguerre matrix elements on the guarded block") {
  const int n_max = 40;
  const HilbertConfig c{1, n_max, 1, 10};
  for (Complex alpha : {Complex(0.3, 0.0), Complex(0.0, 0.7), Complex(-0.4, 0.9)}) {
    const CMatrix d = mode_displacement(c, 0, alpha);
    double worst = 0.0;
    for (int m = 0; m < 20; ++m)
      for (int n = 0; n < 20; ++n) worst = std::max(worst, std::abs(d(m, n) - oracle::displacement_element(m, n, alpha)));
    CHECK(worst < 1e-10);
    CHECK(unitarity_defect(d) < 1e-12);
  }
}

TEST_CASE("displacement products of imaginary amplitudes add exactly") {
  const HilbertConfig c{2, 8, 1, 2};
  const std::vector<Complex> a{Complex(0, 0.2), Complex(0, -0.1)};
  const std::vector<Complex> b{Complex(0, 0.05), Complex(0, 0.3)};
  const std::vector<Complex> ab{Complex(0, 0.25), Complex(0, 0.2)};
  const CMatrix lhs = mode_displacement_product(c, a) * mode_displacement_product(c, b);
  CHECK(max_abs(lhs - mode_displacement_product(c, ab)) < 1e-13);
  const std::vector<Complex> zero{Complex(0, 0), Complex(0, 0)};
  CHECK(max_abs(mode_displacement_product(c, zero) - mode_identity(c)) == 0.0);
}

TEST_CASE("expm_unitary agrees with a Taylor-series exponential") {
  const HilbertConfig c{1, 6, 1, 0};
  std::mt19937_64 gen(7);
  std::normal_distribution<double> nd;
  CMatrix h = CMatrix::Zero(c.dimension(), c.dimension());
  for (Index i = 0; i < h.rows(); ++i)
    for (Index j = 0; j < h.cols(); ++j) h(i, j) = Complex(nd(gen), nd(gen));
  h = 0.5 * (h + h.adjoint()).eval();
  const OperatorMatrix hm(c, h, OperatorKind::hermitian);
  for (double t : {0.0, 0.37, 2.5}) {
    const OperatorMatrix u = expm_unitary(hm, t);
    CHECK(max_abs(u.matrix() - oracle::taylor_expm(h, t)) < 1e-11);
    CHECK(unitarity_defect(u.matrix()) < 1e-12);
    CHECK(u.kind() == OperatorKind::unitary);
  }
}

TEST_CASE("expm_unitary rejects non-Hermitian input") {
  const HilbertConfig c{1, 4, 1, 0};
  CHECK_THROWS_AS(expm_unitary(ladder(c, 0, Ladder::annihilate), 1.0), NumericalError);
}

TEST_CASE("operator kinds propagate") {
  const HilbertConfig c{1, 4, 1, 0};
  const OperatorMatrix h = ladder(c, 0, Ladder::number).with_kind(OperatorKind::hermitian);
  CHECK((h + h).kind() == OperatorKind::hermitian);
  const OperatorMatrix u = expm_unitary(h, 0.3);
  CHECK((u * u).kind() == OperatorKind::unitary);
  CHECK((Complex(0.0, 1.0) * u).kind() == OperatorKind::unitary);
  CHECK((2.0 * u).kind() == OperatorKind::general);
  CHECK_THROWS_AS(OperatorMatrix::identity(c) + OperatorMatrix::identity(HilbertConfig{1, 5, 1, 0}), std::invalid_argument);
}

TEST_CASE("guarded infidelity examples") {
  const HilbertConfig c{1, 5, 1, 1};
  const OperatorMatrix id = OperatorMatrix::identity(c);
  const OperatorMatrix flip = spin_op(c, 0, SpinKind::x).with_kind(OperatorKind::unitary);
  CHECK(guarded_infidelity(id, id) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(guarded_infidelity(id, std::exp(Complex(0, 1.3)) * id) < 1e-15);
  CHECK(guarded_infidelity(id, flip) == doctest::Approx(1.0));
  CHECK(guarded_distance(id, flip) == doctest::Approx(2.0));
}
