#pragma once

#include <Eigen/Dense>
#include <numbers>
#include <optional>
#include <vector>

#include "strobo/floquet.hpp"

namespace strobo {

struct PiPair {
  Eigen::Index first = 0;
  Eigen::Index second = 0;
  /// Circle distance between the two quasienergies.
  double gap = 0.0;
};

/// Floquet spectrum U_F phi_a = exp(-i eps_a T) phi_a with eps_a in
/// (-pi/T, pi/T], plus pi-pair bookkeeping.
struct QuasienergyAnalysis {
  double period = 1.0;
  Eigen::VectorXd epsilons;
  /// Column a is phi_a; the columns are orthonormal.
  Eigen::MatrixXcd eigenvectors;
  std::vector<PiPair> pairs;
  double pair_fraction = 0.0;
  double tolerance = 0.0;

  Eigen::Index dimension() const { return epsilons.size(); }
};

/// Folds a quasienergy into (-pi/T, pi/T].
double foldQuasienergy(double epsilon, double period);

/// min_k |a - b + 2 pi k / T|, in [0, pi/T].
double circleDistance(double a, double b, double period);

inline double defaultPairTolerance(double period) { return 0.05 * std::numbers::pi / period; }

/// Diagonalizes the dense U_F. Throws NumericError (with the model
/// parameters in the message) if the eigensolver fails or an eigenvalue
/// leaves the unit circle by more than 1e-8.
QuasienergyAnalysis floquetEigensystem(const FloquetOperatord& u);

/// Greedy matching of states whose quasienergy separation is within
/// `tolerance` of pi/T, best gap error first, ties to the lower index pair.
QuasienergyAnalysis detectPiPairs(QuasienergyAnalysis analysis, double tolerance);

/// Weight of psi0 on the pi-paired subspace, normalized by its total
/// weight on the eigenbasis. Throws NumericError if that total deviates
/// from 1 by more than 1e-6.
double overlapWeight(const QuasienergyAnalysis& analysis, const StateVectorXcd& psi0);

/// Largest ||U phi_a - exp(-i eps_a T) phi_a|| over the eigenbasis.
double eigenResidual(const FloquetOperatord& u, const QuasienergyAnalysis& analysis);

}  // namespace strobo
