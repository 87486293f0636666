#include "strobo/quasienergy.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <tuple>

#include "strobo/errors.hpp"

namespace strobo {

namespace {

constexpr double kPi = std::numbers::pi;

std::string describe(const ModelSpec& spec) {
  std::ostringstream os;
  os.precision(17);
  os << "N=" << spec.n_qubits << " hxT=" << spec.h_x * spec.protocol.period;
  if (spec.hasUniformCouplings()) os << " JT=" << spec.parameter(Parameter::J) * spec.protocol.period;
  return os.str();
}

}  // namespace

double foldQuasienergy(double epsilon, double period) {
  const double zone = 2.0 * kPi / period;
  const double half = kPi / period;
  double e = std::fmod(epsilon, zone);
  if (e > half) e -= zone;
  if (e <= -half) e += zone;
  return e;
}

double circleDistance(double a, double b, double period) {
  const double zone = 2.0 * kPi / period;
  double d = std::fmod(std::abs(a - b), zone);
  return std::min(d, zone - d);
}

QuasienergyAnalysis floquetEigensystem(const FloquetOperatord& u) {
  const Eigen::MatrixXcd dense = u.dense();
  // U_F is normal, so its complex Schur form is diagonal and the Schur
  // vectors form an orthonormal eigenbasis, degenerate clusters included.
  Eigen::ComplexSchur<Eigen::MatrixXcd> schur(dense, true);
  if (schur.info() != Eigen::Success) {
    throw NumericError("quasienergy: Schur decomposition did not converge at " +
                       describe(u.spec()));
  }

  const double period = u.spec().protocol.period;
  QuasienergyAnalysis out;
  out.period = period;
  out.eigenvectors = schur.matrixU();
  out.epsilons.resize(dense.rows());
  for (Eigen::Index a = 0; a < dense.rows(); ++a) {
    const std::complex<double> lambda = schur.matrixT()(a, a);
    if (std::abs(std::abs(lambda) - 1.0) > 1e-8) {
      throw NumericError("quasienergy: eigenvalue modulus " + std::to_string(std::abs(lambda)) +
                         " off the unit circle at " + describe(u.spec()));
    }
    out.epsilons(a) = foldQuasienergy(-std::arg(lambda) / period, period);
  }
  return out;
}

QuasienergyAnalysis detectPiPairs(QuasienergyAnalysis analysis, double tolerance) {
  if (!(tolerance > 0.0)) throw ConfigError("pi-pair tolerance must be > 0");
  const double period = analysis.period;
  const double half = kPi / period;
  const double zone = 2.0 * kPi / period;
  const Eigen::Index dim = analysis.dimension();

  std::vector<Eigen::Index> order(static_cast<std::size_t>(dim));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return analysis.epsilons(a) < analysis.epsilons(b);
  });
  std::vector<double> sorted(order.size());
  for (std::size_t k = 0; k < order.size(); ++k) sorted[k] = analysis.epsilons(order[k]);

  // A pair partner of i lies within `tolerance` of the antipode eps_i + pi/T.
  using Candidate = std::tuple<double, Eigen::Index, Eigen::Index>;
  std::vector<Candidate> candidates;
  const double slack = tolerance + 1e-12;
  for (Eigen::Index i = 0; i < dim; ++i) {
    const double antipode = analysis.epsilons(i) + half;
    for (double shift : {-zone, 0.0, zone}) {
      const double lo = antipode + shift - slack;
      const double hi = antipode + shift + slack;
      auto first = std::lower_bound(sorted.begin(), sorted.end(), lo);
      for (auto it = first; it != sorted.end() && *it <= hi; ++it) {
        const Eigen::Index j = order[static_cast<std::size_t>(it - sorted.begin())];
        if (j <= i) continue;
        const double error =
            std::abs(circleDistance(analysis.epsilons(i), analysis.epsilons(j), period) - half);
        if (error <= tolerance) candidates.emplace_back(error, i, j);
      }
    }
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  std::vector<bool> used(static_cast<std::size_t>(dim), false);
  analysis.pairs.clear();
  for (const auto& [error, i, j] : candidates) {
    if (used[static_cast<std::size_t>(i)] || used[static_cast<std::size_t>(j)]) continue;
    used[static_cast<std::size_t>(i)] = used[static_cast<std::size_t>(j)] = true;
    analysis.pairs.push_back(
        {i, j, circleDistance(analysis.epsilons(i), analysis.epsilons(j), period)});
  }
  analysis.tolerance = tolerance;
  analysis.pair_fraction =
      2.0 * static_cast<double>(analysis.pairs.size()) / static_cast<double>(dim);
  return analysis;
}

double overlapWeight(const QuasienergyAnalysis& analysis, const StateVectorXcd& psi0) {
  if (psi0.size() != analysis.dimension()) {
    throw SizeError("overlapWeight: state does not match eigenbasis dimension");
  }
  const Eigen::VectorXd weights = (analysis.eigenvectors.adjoint() * psi0).cwiseAbs2();
  const double total = weights.sum();
  if (std::abs(total - 1.0) > 1e-6) {
    throw NumericError("overlapWeight: eigenbasis weight sums to " + std::to_string(total) +
                       ", basis is not complete/orthonormal");
  }
  double paired = 0.0;
  for (const auto& p : analysis.pairs) paired += weights(p.first) + weights(p.second);
  return paired / total;
}

double eigenResidual(const FloquetOperatord& u, const QuasienergyAnalysis& analysis) {
  double worst = 0.0;
  for (Eigen::Index a = 0; a < analysis.dimension(); ++a) {
    const StateVectorXcd phi = analysis.eigenvectors.col(a);
    const std::complex<double> lambda = std::polar(1.0, -analysis.epsilons(a) * analysis.period);
    worst = std::max(worst, (u.apply(phi) - lambda * phi).norm());
  }
  return worst;
}

}  // namespace strobo
