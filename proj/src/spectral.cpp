#include "strobo/spectral.hpp"

#include <complex>
#include <unsupported/Eigen/FFT>
#include <vector>

#include "strobo/errors.hpp"

namespace strobo {

Eigen::VectorXd dynamicSignal(const Eigen::VectorXd& values, int discard, int samples) {
  if (discard < 0) throw SizeError("dynamicSignal: negative transient");
  if (values.size() <= discard) {
    throw SizeError("dynamicSignal: series of length " + std::to_string(values.size()) +
                    " is not longer than the transient " + std::to_string(discard));
  }
  const Eigen::Index available = values.size() - discard;
  const Eigen::Index count = samples < 0 ? available : samples;
  if (count > available || count < 1) {
    throw SizeError("dynamicSignal: need " + std::to_string(discard + count) +
                    " samples, series has " + std::to_string(values.size()));
  }
  Eigen::VectorXd window = values.segment(discard, count);
  window.array() -= window.mean();
  return window;
}

Eigen::VectorXd dynamicSignal(const TimeSeries& series, int discard, int samples) {
  return dynamicSignal(series.values, discard, samples);
}

Eigen::Index PowerSpectrum::dominantBin() const {
  Eigen::Index best = 1;
  for (Eigen::Index k = 2; k < size(); ++k) {
    if (powers(k) > powers(best)) best = k;
  }
  return best;
}

PowerSpectrum powerSpectrum(const Eigen::VectorXd& signal, double period) {
  const Eigen::Index m = signal.size();
  if (m < 4 || m % 2 != 0) {
    throw SizeError("powerSpectrum: length must be even and >= 4, got " + std::to_string(m));
  }
  std::vector<std::complex<double>> in(static_cast<std::size_t>(m));
  for (Eigen::Index n = 0; n < m; ++n) in[static_cast<std::size_t>(n)] = signal(n);
  std::vector<std::complex<double>> out;
  Eigen::FFT<double> fft;
  fft.fwd(out, in);

  PowerSpectrum spectrum;
  spectrum.period = period;
  spectrum.powers.resize(m);
  for (Eigen::Index k = 0; k < m; ++k) spectrum.powers(k) = std::norm(out[static_cast<std::size_t>(k)]);
  return spectrum;
}

SubharmonicDiagnostic subharmonicWeight(const Eigen::VectorXd& values, int discard, int samples) {
  if (samples < 4 || samples % 2 != 0) {
    throw SizeError("subharmonicWeight: sample count must be even and >= 4");
  }
  if (values.size() < static_cast<Eigen::Index>(discard) + samples) {
    throw SizeError("subharmonicWeight: need " + std::to_string(discard + samples) +
                    " samples, series has " + std::to_string(values.size()));
  }
  const auto spectrum = powerSpectrum(dynamicSignal(values, discard, samples));

  SubharmonicDiagnostic diag;
  diag.transient_discard = discard;
  diag.sample_count = samples;
  diag.dominant_bin = spectrum.dominantBin();
  const double oscillatory = spectrum.powers.tail(samples - 1).sum();
  if (oscillatory < 1e-12 * samples) {
    diag.weight = 0.0;
    return diag;
  }
  diag.weight = spectrum.powers(samples / 2) / oscillatory;
  return diag;
}

SubharmonicDiagnostic subharmonicWeight(const TimeSeries& series, int discard, int samples) {
  return subharmonicWeight(series.values, discard, samples);
}

}  // namespace strobo
