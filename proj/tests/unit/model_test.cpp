#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "dense_oracle.hpp"
#include "strobo/floquet.hpp"

namespace strobo {
namespace {

constexpr double kPi = std::numbers::pi;

double maxAbs(const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

TEST(ModelTest, DefaultBoundaryAndBonds) {
  EXPECT_EQ(defaultBoundary(3), Boundary::Ring);
  EXPECT_EQ(defaultBoundary(4), Boundary::Chain);
  EXPECT_EQ(bondsFor(3, Boundary::Ring), (std::vector<Bond>{{1, 2}, {2, 3}, {3, 1}}));
  EXPECT_EQ(bondsFor(4, Boundary::Chain), (std::vector<Bond>{{1, 2}, {2, 3}, {3, 4}}));
  EXPECT_TRUE(bondsFor(1, Boundary::Chain).empty());
}

TEST(ModelTest, PerBondCountIsValidated) {
  ModelSpec spec;
  spec.n_qubits = 3;
  spec.boundary = Boundary::Ring;
  spec.couplings = PerBondCoupling{{1.0, 2.0}};
  EXPECT_THROW(spec.validate(), ConfigError);
  spec.couplings = PerBondCoupling{{1.0, 2.0, 3.0}};
  EXPECT_NO_THROW(spec.validate());
  spec.boundary = Boundary::Chain;
  EXPECT_THROW(spec.validate(), ConfigError);
  spec.couplings = PerBondCoupling{{1.0, 2.0}};
  EXPECT_NO_THROW(spec.validate());
}

TEST(ModelTest, ProtocolInvariants) {
  const auto p = DriveProtocol::fromFraction(2.0);
  EXPECT_DOUBLE_EQ(p.field_duration, 1.0);
  EXPECT_DOUBLE_EQ(p.ising_duration, 1.0);
  EXPECT_THROW(DriveProtocol::fromFraction(1.0, 0.0), ConfigError);
  EXPECT_THROW(DriveProtocol::fromFraction(1.0, 1.0), ConfigError);
  DriveProtocol bad{1.0, 0.3, 0.3, StepOrder::FieldThenIsing};
  EXPECT_THROW(bad.validate(), ConfigError);
}

TEST(ModelTest, IsingPhasesFollowBondSum) {
  // Paper ring, distinct couplings J1 (1,2), J2 (2,3), J3 (1,3).
  ModelSpec spec;
  spec.n_qubits = 3;
  spec.couplings = PerBondCoupling{{0.3, 0.7, 1.1}};
  const FloquetOperatord u(spec);
  for (std::uint64_t s = 0; s < 8; ++s) {
    const double expected = 0.5 * (0.3 * spinZ(s, 3, 1) * spinZ(s, 3, 2) +
                                   0.7 * spinZ(s, 3, 2) * spinZ(s, 3, 3) +
                                   1.1 * spinZ(s, 3, 1) * spinZ(s, 3, 3));
    EXPECT_DOUBLE_EQ(u.isingPhases()(static_cast<Eigen::Index>(s)), expected);
  }
}

TEST(FloquetTest, DiagonalActionOnAlignedState) {
  const double J = 0.83;
  const auto spec = ModelSpec::dimensionless(3, 0.0, J);
  const FloquetOperatord u(spec);
  const auto out = u.apply(allZeroState(3));
  EXPECT_NEAR(std::abs(out(0) - std::polar(1.0, -1.5 * J)), 0.0, 1e-15);
  EXPECT_NEAR(out.tail(7).norm(), 0.0, 1e-15);
}

TEST(FloquetTest, PerfectSingleQubitFlip) {
  // h_x T1 = pi/2 with T1 = 0.5 means h_x T = pi.
  const auto spec = ModelSpec::dimensionless(1, kPi, 0.0);
  const auto out = FloquetOperatord(spec).apply(allZeroState(1));
  EXPECT_NEAR(std::abs(out(0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(out(1) - std::complex<double>(0, -1)), 0.0, 1e-15);
}

TEST(FloquetTest, MatchesDenseExponentialOracleAtPdPoint) {
  const auto spec = ModelSpec::dimensionless(3, 2.6, 1.57);
  const auto fast = FloquetOperatord(spec).apply(allZeroState(3));
  const oracle::Vector dense = oracle::floquetUnitary(spec) * allZeroState(3);
  EXPECT_LT((fast - dense).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(FloquetTest, DenseUnitaryClosedForms) {
  const auto identity = denseUnitary(FloquetOperatord(ModelSpec::dimensionless(3, 0.0, 0.0)));
  EXPECT_LT(maxAbs(identity - Eigen::MatrixXcd::Identity(8, 8)), 1e-15);

  // N = 1, J = 0, h_x T1 = pi/4.
  const auto rot = denseUnitary(FloquetOperatord(ModelSpec::dimensionless(1, kPi / 2.0, 0.0)));
  const double c = std::cos(kPi / 4.0);
  const double s = std::sin(kPi / 4.0);
  Eigen::Matrix2cd expected;
  expected << c, std::complex<double>(0, -s), std::complex<double>(0, -s), c;
  EXPECT_LT(maxAbs(rot - expected), 1e-15);
}

TEST(FloquetTest, DenseUnitaryIsUnitaryAtPdPoint) {
  const auto u = denseUnitary(FloquetOperatord(ModelSpec::dimensionless(3, 2.6, 1.57)));
  EXPECT_LT(maxAbs(u.adjoint() * u - Eigen::MatrixXcd::Identity(8, 8)), 1e-12);
}

TEST(FloquetTest, NormPreservedAtRandomParameters) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> angle(0.0, kPi);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + trial % 5;
    const FloquetOperatord u(ModelSpec::dimensionless(n, angle(rng), angle(rng)));
    const auto psi = oracle::randomState(u.dimension(), rng);
    EXPECT_NEAR(u.apply(psi).norm(), 1.0, 1e-12);
  }
}

TEST(FloquetTest, FreeSpinsPrecessAsCosine) {
  // At J = 0 each qubit rotates independently; <sigma_z^1> = cos(2 n h_x T1).
  const double hxT = 1.3;
  const FloquetOperatord u(ModelSpec::dimensionless(3, hxT, 0.0));
  StateVectorXcd psi = allZeroState(3);
  Eigen::VectorXd z1(8);
  for (std::uint64_t s = 0; s < 8; ++s) z1(static_cast<Eigen::Index>(s)) = spinZ(s, 3, 1);
  for (int n = 1; n <= 40; ++n) {
    u.applyInPlace(psi);
    EXPECT_NEAR(expectation(psi, z1), std::cos(2.0 * n * hxT * 0.5), 1e-10);
    // Still a product state: the 2x2 reduced amplitude matrix across the
    // qubit-1 cut has rank one.
    using Cut = Eigen::Matrix<std::complex<double>, 4, 2>;
    const Cut m = Eigen::Map<const Cut>(psi.data());
    const Eigen::JacobiSVD<Cut> svd(m);
    EXPECT_LT(svd.singularValues()(1), 1e-10);
  }
}

TEST(FloquetTest, StepOrderSwapsExponentialFactors) {
  DriveProtocol p = DriveProtocol::fromFraction(1.0, 0.5, StepOrder::IsingThenField);
  const auto spec = ModelSpec::dimensionless(2, 2.2, 0.9, p);
  const auto dense = denseUnitary(FloquetOperatord(spec));
  EXPECT_LT(maxAbs(dense - oracle::floquetUnitary(spec)), 1e-12);

  auto field_first = spec;
  field_first.protocol.order = StepOrder::FieldThenIsing;
  const oracle::Matrix fx = oracle::expHermitian(spec.h_x * oracle::totalX(2), 0.5);
  const oracle::Matrix zz = oracle::expHermitian(oracle::isingHamiltonian(spec), 0.5);
  EXPECT_LT(maxAbs(denseUnitary(FloquetOperatord(field_first)) - zz * fx), 1e-12);
  EXPECT_LT(maxAbs(dense - fx * zz), 1e-12);
}

TEST(FloquetTest, LongDoubleAgreesWithDouble) {
  const auto spec = ModelSpec::dimensionless(4, 2.6, 1.57);
  const FloquetOperator<long double> ul(spec);
  const FloquetOperatord ud(spec);
  auto psi_l = allZeroState<long double>(4);
  auto psi_d = allZeroState(4);
  for (int n = 0; n < 100; ++n) {
    ul.applyInPlace(psi_l);
    ud.applyInPlace(psi_d);
  }
  EXPECT_LT((psi_l.cast<std::complex<double>>() - psi_d).norm(), 1e-12);
}

TEST(DerivativeTest, JDerivativeOnAlignedStateClosedForm) {
  const double J = 0.61;
  const auto spec = ModelSpec::dimensionless(3, 0.0, J);
  const FloquetOperatord u(spec);
  const auto g = DerivativeGenerator::forParameter(spec, Parameter::J);
  const auto d = derivativeOfFloquet(u, g, allZeroState(3));
  const std::complex<double> expected = std::complex<double>(0, -3.0 * 0.5) * std::polar(1.0, -3.0 * J * 0.5);
  EXPECT_NEAR(std::abs(d(0) - expected), 0.0, 1e-15);
  EXPECT_NEAR(d.tail(7).norm(), 0.0, 1e-15);
}

TEST(DerivativeTest, FieldDerivativeSingleQubitClosedForm) {
  const double h = 0.9;
  const auto spec = ModelSpec::dimensionless(1, h, 0.0);
  const FloquetOperatord u(spec);
  const auto d = u.derivative(DerivativeGenerator::forParameter(spec, Parameter::Hx), allZeroState(1));
  // -i T1 sigma_x exp(-i h T1 sigma_x)|0> = -i T1 (-i sin|0> + cos|1>).
  const double a = h * 0.5;
  EXPECT_NEAR(std::abs(d(0) - std::complex<double>(-0.5 * std::sin(a), 0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(d(1) - std::complex<double>(0, -0.5 * std::cos(a))), 0.0, 1e-15);
}

StateVectorXcd centralDifference(const ModelSpec& spec, Parameter p, const StateVectorXcd& psi,
                                 double delta) {
  const double theta = spec.parameter(p);
  const auto plus = FloquetOperatord(spec.withParameter(p, theta + delta)).apply(psi);
  const auto minus = FloquetOperatord(spec.withParameter(p, theta - delta)).apply(psi);
  return (plus - minus) / (2.0 * delta);
}

TEST(DerivativeTest, MatchesFiniteDifferenceAtPdPoint) {
  const auto spec = ModelSpec::dimensionless(3, 2.6, 1.57);
  const FloquetOperatord u(spec);
  const auto psi = allZeroState(3);
  const auto exact = u.derivative(DerivativeGenerator::forParameter(spec, Parameter::J), psi);
  const auto fd = centralDifference(spec, Parameter::J, psi, 1e-6);
  EXPECT_LT((exact - fd).norm() / exact.norm(), 1e-6);
}

TEST(DerivativeTest, MatchesFiniteDifferenceAtRandomPointsBothOrders) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> angle(0.0, kPi);
  const double delta = 1e-5;
  for (int trial = 0; trial < 20; ++trial) {
    const auto order = trial % 2 ? StepOrder::IsingThenField : StepOrder::FieldThenIsing;
    const auto spec = ModelSpec::dimensionless(3 + trial % 3, angle(rng), angle(rng),
                                               DriveProtocol::fromFraction(1.0, 0.5, order));
    const FloquetOperatord u(spec);
    const auto psi = oracle::randomState(u.dimension(), rng);
    for (Parameter p : {Parameter::Hx, Parameter::J}) {
      const auto exact = u.derivative(DerivativeGenerator::forParameter(spec, p), psi);
      const auto fd = centralDifference(spec, p, psi, delta);
      EXPECT_LE((exact - fd).norm() / exact.norm(), 10.0 * delta) << "trial " << trial;
    }
  }
}

TEST(DerivativeTest, JTargetNeedsUniformCouplings) {
  ModelSpec spec;
  spec.n_qubits = 3;
  spec.couplings = PerBondCoupling{{1.0, 1.0, 1.0}};
  EXPECT_THROW(DerivativeGenerator::forParameter(spec, Parameter::J), ConfigError);
  const FloquetOperatord u(spec);
  EXPECT_THROW(u.derivative({Parameter::J, 0.5}, allZeroState(3)), ConfigError);
  EXPECT_NO_THROW(DerivativeGenerator::forParameter(spec, Parameter::Hx));
}

TEST(FloquetTest, DimensionMismatchThrows) {
  const FloquetOperatord u(ModelSpec::dimensionless(3, 1.0, 1.0));
  EXPECT_THROW(u.apply(allZeroState(2)), SizeError);
}

}  // namespace
}  // namespace strobo
