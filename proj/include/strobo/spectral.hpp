#pragma once

#include <Eigen/Core>

#include "strobo/dynamics.hpp"

namespace strobo {

/// Mean-subtracted window values[discard, discard + samples). samples < 0
/// takes everything after the transient.
Eigen::VectorXd dynamicSignal(const Eigen::VectorXd& values, int discard, int samples = -1);
Eigen::VectorXd dynamicSignal(const TimeSeries& series, int discard, int samples = -1);

/// P_k = |sum_n x_n exp(-2 pi i k n / M)|^2 for k = 0..M-1.
struct PowerSpectrum {
  Eigen::VectorXd powers;
  double period = 1.0;

  Eigen::Index size() const { return powers.size(); }
  /// f_k = k / (M T).
  double frequency(Eigen::Index k) const {
    return static_cast<double>(k) / (static_cast<double>(size()) * period);
  }
  /// argmax of P_k over k = 1..M-1, lowest index on ties.
  Eigen::Index dominantBin() const;
};

/// Requires an even signal length >= 4.
PowerSpectrum powerSpectrum(const Eigen::VectorXd& signal, double period = 1.0);

struct SubharmonicDiagnostic {
  double weight = 0.0;
  int transient_discard = kDefaultTransient;
  int sample_count = kDefaultSpectrumSamples;
  Eigen::Index dominant_bin = 0;
};

/// Fraction of the oscillatory power (bins 1..M-1) sitting in bin M/2,
/// i.e. at f = 1/2T. A static window (total power < 1e-12 M) has weight 0.
SubharmonicDiagnostic subharmonicWeight(const Eigen::VectorXd& values,
                                        int discard = kDefaultTransient,
                                        int samples = kDefaultSpectrumSamples);
SubharmonicDiagnostic subharmonicWeight(const TimeSeries& series,
                                        int discard = kDefaultTransient,
                                        int samples = kDefaultSpectrumSamples);

}  // namespace strobo
