#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "dense_oracle.hpp"
#include "strobo/errors.hpp"
#include "strobo/metrology.hpp"

namespace strobo {
namespace {

constexpr double kPi = std::numbers::pi;

TEST(DerivativeTest, IsingOnlyDerivativeIsPhaseTimesState) {
  // h = 0: psi_n = exp(-i 3 J T2 n)|000> on the ring, dpsi_n = -i 3 T2 n psi_n.
  const auto spec = ModelSpec::dimensionless(3, 0.0, 1.1);
  const auto states = evolveWithDerivative(spec, Parameter::J, allZeroState(3), 40);
  ASSERT_EQ(states.size(), 41u);
  for (const auto& s : states) {
    const double n = s.period_index;
    const StateVectorXcd expected = std::complex<double>(0.0, -3.0 * 0.5 * n) * s.psi;
    EXPECT_LT((s.dpsi - expected).norm(), 1e-12 * (1.0 + n));
  }
}

TEST(DerivativeTest, FreeFieldDerivativeNorm) {
  const auto spec = ModelSpec::dimensionless(3, 0.9, 0.0);
  const auto states = evolveWithDerivative(spec, Parameter::Hx, allZeroState(3), 60);
  for (const auto& s : states) {
    const double n = s.period_index;
    EXPECT_NEAR(s.dpsi.squaredNorm(), 3.0 * n * n * 0.25, 1e-10 * (1.0 + n * n));
  }
}

TEST(DerivativeTest, DerivativeMatchesCentralDifferenceOfStates) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> angle(0.0, kPi);
  const double d = 1e-6;
  for (int trial = 0; trial < 5; ++trial) {
    const auto spec = ModelSpec::dimensionless(3, angle(rng), angle(rng));
    for (Parameter p : {Parameter::Hx, Parameter::J}) {
      const auto states = evolveWithDerivative(spec, p, allZeroState(3), 30);
      const auto plus = spec.withParameter(p, spec.parameter(p) + d);
      const auto minus = spec.withParameter(p, spec.parameter(p) - d);
      const oracle::Vector fd = (oracle::matrixPower(oracle::floquetUnitary(plus), 30) -
                                 oracle::matrixPower(oracle::floquetUnitary(minus), 30)) *
                                allZeroState(3) / (2.0 * d);
      EXPECT_LT((states.back().dpsi - fd).norm(), 1e-5 * (1.0 + fd.norm()));
    }
  }
}

TEST(DerivativeTest, NormDerivativeOrthogonality) {
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> angle(0.0, kPi);
  for (int trial = 0; trial < 10; ++trial) {
    const auto spec = ModelSpec::dimensionless(3, angle(rng), angle(rng));
    for (Parameter p : {Parameter::Hx, Parameter::J}) {
      propagateWithDerivative(FloquetOperatord(spec), p, allZeroState(3), 100,
                              [](int, const StateVectorXcd& psi, const StateVectorXcd& dpsi) {
                                EXPECT_NEAR(psi.dot(dpsi).real(), 0.0, 1e-9);
                              });
    }
  }
}

TEST(DerivativeTest, RejectsBadInputs) {
  const auto spec = ModelSpec::dimensionless(3, 1.0, 1.0);
  EXPECT_THROW(evolveWithDerivative(spec, Parameter::Hx, allZeroState(3), -1), SizeError);
  EXPECT_THROW(evolveWithDerivative(spec, Parameter::Hx, allZeroState(2), 5), SizeError);
  const StateVectorXcd unnormalized = 2.0 * allZeroState(3);
  EXPECT_THROW(qfiSeries(spec, Parameter::Hx, unnormalized, 5), ConfigError);
}

TEST(QfiTest, FreeFieldQuadraticLaw) {
  const auto f = qfiSeries(ModelSpec::dimensionless(3, 1.3, 0.0), Parameter::Hx, allZeroState(3), 100);
  ASSERT_EQ(f.size(), 101);
  EXPECT_EQ(f.values(0), 0.0);
  for (Eigen::Index n = 1; n <= 100; ++n) {
    const double expected = 3.0 * static_cast<double>(n * n);
    EXPECT_NEAR(f.values(n) / expected, 1.0, 1e-9) << n;
    EXPECT_TRUE(f.defined(n));
  }
}

TEST(QfiTest, NullSensitivityWithoutField) {
  const auto f = qfiSeries(ModelSpec::dimensionless(3, 0.0, 2.2), Parameter::J, allZeroState(3), 100);
  EXPECT_LE(f.values.cwiseAbs().maxCoeff(), 1e-9);
}

TEST(QfiTest, StoredAndStreamingSeriesAgree) {
  const auto spec = ModelSpec::dimensionless(3, 2.6, 1.57);
  const auto states = evolveWithDerivative(spec, Parameter::J, allZeroState(3), 80);
  const auto stored = qfiSeries(states);
  const auto streamed = qfiSeries(spec, Parameter::J, allZeroState(3), 80);
  EXPECT_EQ(stored.values, streamed.values);
  EXPECT_EQ(stored.periods, streamed.periods);
}

TEST(QfiTest, AgreesWithFiniteDifferenceOracle) {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> angle(0.2, kPi - 0.2);
  for (int trial = 0; trial < 10; ++trial) {
    const auto spec = ModelSpec::dimensionless(3, angle(rng), angle(rng));
    for (Parameter p : {Parameter::Hx, Parameter::J}) {
      const double exact = qfiSeries(spec, p, allZeroState(3), 50).values(50);
      const double coarse = qfiFiniteDifferenceOracle(spec, p, allZeroState(3), 50, 1e-4);
      const double fine = qfiFiniteDifferenceOracle(spec, p, allZeroState(3), 50, 5e-5);
      EXPECT_LE(std::abs(coarse - exact), 1e-3 * exact);
      // Halving delta must not move the estimate away from the exact value.
      EXPECT_LE(std::abs(fine - exact), std::abs(coarse - exact) + 1e-6 * exact);
    }
  }
  EXPECT_THROW(qfiFiniteDifferenceOracle(ModelSpec::dimensionless(3, 1, 1), Parameter::Hx,
                                         allZeroState(3), 5, 1e-2),
               ConfigError);
}

TEST(CfiTest, MagnetizationSaturatesFreeFieldQfi) {
  const double hxT = 0.7;
  const auto cfi = cfiSeries(ModelSpec::dimensionless(3, hxT, 0.0), Parameter::Hx, magnetizationZ(3),
                             allZeroState(3), 100);
  EXPECT_EQ(cfi.kind, FisherKind::Classical);
  for (Eigen::Index n = 1; n <= 100; ++n) {
    if (std::abs(std::sin(hxT * static_cast<double>(n))) < 1e-3) continue;
    ASSERT_TRUE(cfi.defined(n)) << n;
    EXPECT_NEAR(cfi.values(n) / (3.0 * static_cast<double>(n * n)), 1.0, 1e-8) << n;
  }
}

TEST(CfiTest, InitialPointIsUndefinedAndStaticObservableNeverDefined) {
  const auto cfi = cfiSeries(ModelSpec::dimensionless(3, 0.0, 1.0), Parameter::J, magnetizationZ(3),
                             allZeroState(3), 20);
  for (Eigen::Index n = 0; n <= 20; ++n) {
    EXPECT_EQ(cfi.flags[static_cast<std::size_t>(n)], PointFlag::Undefined);
    EXPECT_TRUE(std::isnan(cfi.values(n)));
  }
  EXPECT_EQ(toString(PointFlag::Divergent), "divergent");
}

TEST(CfiTest, CramerRaoBoundHolds) {
  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> angle(0.0, kPi);
  for (int trial = 0; trial < 10; ++trial) {
    const auto spec = ModelSpec::dimensionless(3, angle(rng), angle(rng));
    for (Parameter p : {Parameter::Hx, Parameter::J}) {
      const auto q = qfiSeries(spec, p, allZeroState(3), 100);
      for (const auto& obs : {magnetizationZ(3), pairCorrelationZZ(3)}) {
        const auto c = cfiSeries(spec, p, obs, allZeroState(3), 100);
        for (Eigen::Index n = 0; n <= 100; ++n) {
          if (!c.defined(n)) continue;
          EXPECT_LE(c.values(n), q.values(n) * (1.0 + 1e-6) + 1e-12);
        }
      }
    }
  }
}

TEST(CfiTest, CentralDifferenceModeTracksExactSlope) {
  const auto spec = ModelSpec::dimensionless(3, 2.6, 1.57);
  const auto exact = cfiSeries(spec, Parameter::J, pairCorrelationZZ(3), allZeroState(3), 60);
  const auto fd = cfiSeries(spec, Parameter::J, pairCorrelationZZ(3), allZeroState(3), 60,
                            DerivativeMode::CentralDifference, 1e-5);
  for (Eigen::Index n = 1; n <= 60; ++n) {
    if (!exact.defined(n) || exact.values(n) < 1e-3) continue;
    EXPECT_NEAR(fd.values(n) / exact.values(n), 1.0, 1e-5) << n;
  }
}

TEST(CurvatureFitTest, ExactOnQuadraticAndLinearInputs) {
  std::vector<double> t, sq, lin;
  for (int n = 0; n <= 40; ++n) {
    t.push_back(n);
    sq.push_back(static_cast<double>(n) * n);
    lin.push_back(5.0 * n - 2.0);
  }
  const auto fq = fitQuadratic(t, sq);
  EXPECT_NEAR(fq.a, 2.0, 1e-10);
  EXPECT_NEAR(fq.b, 0.0, 1e-8);
  EXPECT_NEAR(fq.c, 0.0, 1e-7);
  EXPECT_EQ(fq.kappa, fq.a);
  EXPECT_LT(fq.rms_residual, 1e-8);

  const auto fl = fitQuadratic(t, lin);
  EXPECT_NEAR(fl.a, 0.0, 1e-10);
  EXPECT_NEAR(fl.b, 5.0, 1e-9);
  EXPECT_NEAR(fl.c, -2.0, 1e-8);
}

TEST(CurvatureFitTest, TailWindowSelection) {
  const auto f = qfiSeries(ModelSpec::dimensionless(3, 1.3, 0.0), Parameter::Hx, allZeroState(3), 200);
  const auto fit = curvatureFit(f);
  EXPECT_EQ(fit.points, 100);
  EXPECT_EQ(fit.window_first, 101);
  EXPECT_EQ(fit.window_last, 200);
  EXPECT_NEAR(fit.a, 6.0, 1e-8);
}

TEST(CurvatureFitTest, InsufficientPointsAndBadFraction) {
  const auto f = qfiSeries(ModelSpec::dimensionless(3, 1.3, 0.0), Parameter::Hx, allZeroState(3), 10);
  EXPECT_THROW(curvatureFit(f, 0.5), SizeError);
  EXPECT_NO_THROW(curvatureFit(f, 1.0));
  EXPECT_THROW(curvatureFit(f, 0.0), ConfigError);
  EXPECT_THROW(curvatureFit(f, 1.5), ConfigError);
}

TEST(CurvatureFitTest, PdAndNonPdRegressionValues) {
  // Frozen from an independent dense-exponential computation with numpy polyfit.
  const auto pd = curvatureFit(qfiSeries(ModelSpec::dimensionless(3, 2.6, 1.57), Parameter::Hx,
                                         allZeroState(3), 200));
  const auto non_pd = curvatureFit(qfiSeries(ModelSpec::dimensionless(3, 2.6, 0.1), Parameter::Hx,
                                             allZeroState(3), 200));
  EXPECT_NEAR(pd.a, 0.42087826388583743, 1e-7);
  EXPECT_NEAR(pd.b, 0.9022267626567776, 1e-5);
  EXPECT_NEAR(non_pd.a, 5.839124956145672, 1e-7);
  EXPECT_NEAR(non_pd.b, 0.14755461998758548, 1e-5);

  const auto fj = qfiSeries(ModelSpec::dimensionless(3, 2.6, 1.57), Parameter::J, allZeroState(3), 200);
  EXPECT_NEAR(fj.values(200) / 27087.43086525338, 1.0, 1e-10);
  EXPECT_NEAR(curvatureFit(fj).a, 1.3435270756508164, 1e-7);
}

}  // namespace
}  // namespace strobo
