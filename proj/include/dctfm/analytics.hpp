#pragma once

// Closed-form MSE predictors for the three schemes and the empirical
// aggregates they are checked against.

#include <cmath>
#include <cstddef>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "dctfm/receiver.hpp"
#include "dctfm/transform.hpp"

namespace dctfm {

struct MseBreakdown {
  double approx_term = 0.0;
  double noise_term = 0.0;
  std::string scheme;
  std::size_t k_used = 0;

  double total() const { return approx_term + noise_term; }
};

/// rho(m) = 2/(N A_c^2) sum_{k in K'} cos^2(pi k (2m+1) / 2N).
inline double noise_gain(const DctApproximation& kept, std::size_t m, double a_c) {
  double s = 0.0;
  for (const auto& c : kept.retained) {
    const double b = dct_basis(c.k, m, kept.n);
    s += b * b;
  }
  return 2.0 * s / (static_cast<double>(kept.n) * a_c * a_c);
}

inline MseBreakdown predict_agnostic(const DctSpectrum& spectrum, const DctApproximation& approx,
                                     std::size_t k_prime, std::size_t m, double a_c, double sigma2) {
  const auto kept = approx.truncated(k_prime);
  return {mse_dct_pointwise(spectrum, kept, m), noise_gain(kept, m, a_c) * sigma2, "dct_ag", k_prime};
}

/// Average over m: mean truncation error over K' plus K' sigma^2 / (N A_c^2).
inline MseBreakdown predict_agnostic_mean(const DctSpectrum& spectrum, const DctApproximation& approx,
                                          std::size_t k_prime, double a_c, double sigma2) {
  const auto kept = approx.truncated(k_prime);
  const double n = static_cast<double>(spectrum.n());
  return {mse_dct_mean(spectrum, kept), static_cast<double>(k_prime) * sigma2 / (n * a_c * a_c), "dct_ag", k_prime};
}

inline MseBreakdown predict_nonagnostic(const DctSpectrum& spectrum, const DctApproximation& approx,
                                        std::size_t k_prime, std::size_t m) {
  return {mse_dct_pointwise(spectrum, approx.truncated(k_prime), m), 0.0, "dct_nag", k_prime};
}

inline MseBreakdown predict_nonagnostic_mean(const DctSpectrum& spectrum, const DctApproximation& approx,
                                             std::size_t k_prime) {
  return {mse_dct_mean(spectrum, approx.truncated(k_prime)), 0.0, "dct_nag", k_prime};
}

/// Pointwise DSB error: truncation over the full K plus f~_K(m)^2 sigma^2 / (A_c^2 sum F_k^2).
inline MseBreakdown predict_dsb(const DctSpectrum& spectrum, const DctApproximation& approx, std::size_t m,
                                double a_c, double sigma2) {
  const double value = approximate_at(approx, m);
  return {mse_dct_pointwise(spectrum, approx, m), value * value * sigma2 / (a_c * a_c * approx.retained_energy()),
          "dsb", approx.k_count()};
}

/// Average DSB error with the closed-form noise term sigma^2 / (2 N A_c^2).
///
/// Averaging predict_dsb over m gives sigma^2 / (N A_c^2) instead (the
/// f~_K(m)^2 sum is the retained energy); see predict_dsb_pointwise_average.
inline MseBreakdown predict_dsb_mean(const DctSpectrum& spectrum, const DctApproximation& approx, double a_c,
                                     double sigma2) {
  const double n = static_cast<double>(spectrum.n());
  return {mse_dct_mean(spectrum, approx), sigma2 / (2.0 * n * a_c * a_c), "dsb", approx.k_count()};
}

inline MseBreakdown predict_dsb_pointwise_average(const DctSpectrum& spectrum, const DctApproximation& approx,
                                                  double a_c, double sigma2) {
  MseBreakdown acc{0.0, 0.0, "dsb", approx.k_count()};
  for (std::size_t m = 0; m < spectrum.n(); ++m) {
    const auto p = predict_dsb(spectrum, approx, m, a_c, sigma2);
    acc.approx_term += p.approx_term;
    acc.noise_term += p.noise_term;
  }
  acc.approx_term /= static_cast<double>(spectrum.n());
  acc.noise_term /= static_cast<double>(spectrum.n());
  return acc;
}

struct TrialError {
  double f_true = 0.0;
  double f_hat = 0.0;
};

struct MeanStderr {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t count = 0;
};

/// Sample mean and standard error of a list of values.
inline MeanStderr mean_and_stderr(std::span<const double> xs) {
  MeanStderr out;
  out.count = xs.size();
  if (xs.empty()) return out;
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  out.mean = mean;
  if (xs.size() > 1) out.std_error = std::sqrt(ss / static_cast<double>(xs.size() - 1) / static_cast<double>(xs.size()));
  return out;
}

/// Mean squared error |f - f^|^2 over the trials, divided by `normalization`
/// (e.g. the mean energy of f) when it is positive.
inline MeanStderr empirical_mse(std::span<const TrialError> trials, double normalization = 0.0) {
  std::vector<double> errs;
  errs.reserve(trials.size());
  const double scale = normalization > 0.0 ? 1.0 / normalization : 1.0;
  for (const auto& t : trials) {
    const double d = t.f_true - t.f_hat;
    errs.push_back(d * d * scale);
  }
  return mean_and_stderr(errs);
}

struct ReceivedTrial {
  std::size_t m_true = 0;
  ReceiverReport report;
};

/// Fraction of trials in which tone k was accepted and m^ was correct.
inline std::map<std::size_t, double> detection_rates(std::span<const ReceivedTrial> trials,
                                                     std::span<const std::size_t> k_transmitted) {
  std::map<std::size_t, double> rates;
  for (auto k : k_transmitted) rates[k] = 0.0;
  if (trials.empty()) return rates;
  for (const auto& t : trials) {
    if (t.report.m_hat != t.m_true) continue;
    for (auto k : k_transmitted)
      if (t.report.contains(k)) rates[k] += 1.0;
  }
  for (auto& [k, v] : rates) v /= static_cast<double>(trials.size());
  return rates;
}

}  // namespace dctfm
