#pragma once

// Receive side. The DCT-FM receiver takes the orthonormal DCT-III of the
// received samples along n; tone k of measurement m lands on bin
// fold_index(k*m + (k-1)/2). Peak search reads the fundamental from the
// global maximum and walks the odd harmonics until one falls below the
// detection threshold.

#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include "dctfm/modulators.hpp"
#include "dctfm/transform.hpp"

namespace dctfm {

inline constexpr double kDefaultThresholdMultiplier = 8.0;

/// sigma_th^2 = multiplier * sigma^2.
inline double detection_threshold(double sigma2, double multiplier = kDefaultThresholdMultiplier) {
  if (!(multiplier > 0.0)) throw std::invalid_argument("detection_threshold: multiplier must be positive");
  return multiplier * sigma2;
}

struct SpectrumReport {
  /// r[l] = DCT-III{y}[l] / A_c.
  std::vector<double> r;
  /// Threshold on |r[l]|^2, i.e. sigma_th^2 / A_c^2, so that the test
  /// |r|^2 > threshold is the test |A_c r|^2 > sigma_th^2 on the raw bin.
  double threshold = 0.0;

  std::size_t n() const { return r.size(); }
};

inline SpectrumReport demodulate_spectrum(std::span<const double> y, double a_c, double sigma2_th) {
  if (!(a_c > 0.0)) throw std::invalid_argument("demodulate_spectrum: carrier amplitude must be positive");
  auto r = dct3(y);
  for (double& v : r) v /= a_c;
  return {std::move(r), sigma2_th / (a_c * a_c)};
}

/// Unfolded bin of tone k for measurement m: k*m + (k-1)/2 (k odd).
inline std::size_t ifreq(std::size_t k, std::size_t m) { return k * m + (k - 1) / 2; }

/// Reflects an unfolded bin into [0, N-1]. A real tone at unfolded bin i is
/// the same sampled sequence as one at 2N-1-i, so odd fold counts mirror
/// about N - 1/2.
inline std::size_t fold_index(std::size_t unfolded, std::size_t n) {
  const std::size_t folds = unfolded / n;
  const std::size_t rem = unfolded % n;
  return folds % 2 == 0 ? rem : n - 1 - rem;
}

inline std::size_t tone_bin(std::size_t k, std::size_t m, std::size_t n) { return fold_index(ifreq(k, m), n); }

/// Index of max |r[l]|; ties resolve to the smaller index.
inline std::size_t argmax_abs(std::span<const double> r) {
  std::size_t best = 0;
  for (std::size_t l = 1; l < r.size(); ++l)
    if (std::abs(r[l]) > std::abs(r[best])) best = l;
  return best;
}

struct PeakSearchResult {
  std::size_t m_hat = 0;
  /// Accepted tones in increasing k with their raw amplitudes r[l].
  std::vector<Coefficient> detected;
};

/// Peak search. `max_tones` bounds K' (the receiver knows the odd index set
/// of its function space); by default every odd index below 2N may be tried.
inline PeakSearchResult peak_search(const SpectrumReport& report,
                                    std::size_t max_tones = std::numeric_limits<std::size_t>::max()) {
  const std::size_t n = report.n();
  if (n == 0) throw std::invalid_argument("peak_search: empty spectrum");
  PeakSearchResult out;
  out.m_hat = argmax_abs(report.r);
  out.detected.push_back({1, report.r[out.m_hat]});
  for (std::size_t k = 3; k < 2 * n && out.detected.size() < max_tones; k += 2) {
    const double v = report.r[tone_bin(k, out.m_hat, n)];
    if (!(v * v > report.threshold)) break;
    out.detected.push_back({k, v});
  }
  return out;
}

struct ReceiverReport {
  std::size_t m_hat = 0;
  std::vector<Coefficient> detected;
  double f_hat = 0.0;

  std::size_t k_prime() const { return detected.size(); }

  bool contains(std::size_t k) const {
    for (const auto& c : detected)
      if (c.k == k) return true;
    return false;
  }
};

/// f^(m) = sqrt(2/N) sum_{k in K'} F~_k cos(pi k (2 m^ + 1) / 2N).
inline double reconstruct_function(std::size_t m_hat, std::span<const Coefficient> detected, std::size_t n) {
  if (detected.empty()) throw std::invalid_argument("reconstruct_function: no detected coefficients");
  double acc = 0.0;
  for (const auto& c : detected) acc += dct_weight(c.k, n) * c.value * dct_basis(c.k, m_hat, n);
  return acc;
}

inline ReceiverReport demodulate_agnostic(const SpectrumReport& report,
                                          std::size_t max_tones = std::numeric_limits<std::size_t>::max()) {
  auto found = peak_search(report, max_tones);
  const double f_hat = reconstruct_function(found.m_hat, found.detected, report.n());
  return {found.m_hat, std::move(found.detected), f_hat};
}

/// Receiver with side information: m^ from the fundamental, then every index
/// of `k_set` is read regardless of the threshold.
inline ReceiverReport demodulate_known_set(const SpectrumReport& report, std::span<const std::size_t> k_set) {
  const std::size_t n = report.n();
  ReceiverReport out;
  out.m_hat = argmax_abs(report.r);
  for (auto k : k_set) out.detected.push_back({k, report.r[tone_bin(k, out.m_hat, n)]});
  out.f_hat = reconstruct_function(out.m_hat, out.detected, n);
  return out;
}

/// Replaces the detected amplitudes by the known DCT coefficients.
inline ReceiverReport substitute_coefficients(ReceiverReport report, const DctApproximation& known) {
  for (auto& c : report.detected) c.value = known.value_of(c.k);
  report.f_hat = reconstruct_function(report.m_hat, report.detected, known.n);
  return report;
}

/// Non-agnostic receiver: same peak search, reconstruction from the known
/// coefficients of the K' detected tones.
inline ReceiverReport demodulate_nonagnostic(const SpectrumReport& report, const DctApproximation& known) {
  return substitute_coefficients(demodulate_agnostic(report, known.k_count()), known);
}

/// Coherent DSB demodulation: per-sample amplitude estimates
/// 2 y[n] cos(2 pi k_c n / N) / (A sqrt(2/N)) averaged over the block.
inline double demodulate_dsb(std::span<const double> y, double a_c_dsb, std::size_t carrier_index) {
  const std::size_t n = y.size();
  if (n == 0) throw std::invalid_argument("demodulate_dsb: empty input");
  const double gain = a_c_dsb * std::sqrt(2.0 / static_cast<double>(n));
  double acc = 0.0;
  for (std::size_t s = 0; s < n; ++s) {
    const std::size_t idx = carrier_index * s % n;
    acc += 2.0 * y[s] * std::cos(2.0 * std::numbers::pi * static_cast<double>(idx) / static_cast<double>(n)) / gain;
  }
  return acc / static_cast<double>(n);
}

inline std::vector<std::complex<double>> dechirp(std::span<const std::complex<double>> y, double f_mod) {
  std::vector<std::complex<double>> out(y.size());
  for (std::size_t s = 0; s < y.size(); ++s) out[s] = y[s] * std::conj(chirp_factor(s, y.size(), f_mod));
  return out;
}

/// In-phase branch after (perfectly synchronised) dechirping.
inline std::vector<double> in_phase(std::span<const std::complex<double>> y) {
  std::vector<double> out(y.size());
  for (std::size_t s = 0; s < y.size(); ++s) out[s] = y[s].real();
  return out;
}

/// y[1] / A_c, which equals f~_K(m) without noise. Only usable at high SNR.
inline double single_sample_estimate(std::span<const double> y, double a_c) {
  if (y.size() < 2) throw std::invalid_argument("single_sample_estimate: need at least 2 samples");
  return y[1] / a_c;
}

}  // namespace dctfm
