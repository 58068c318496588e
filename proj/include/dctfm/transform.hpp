#pragma once

// Orthonormal DCT-II / DCT-III pair, energy-based selection of the odd DCT
// coefficients of an odd-symmetric function, and truncation-error formulas.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "dctfm/detail/fftw_r2r.hpp"

namespace dctfm {

inline constexpr double kDefaultAlpha = 0.995;

/// DCT normalisation g_k: 1/sqrt(N) for k = 0, sqrt(2/N) otherwise.
inline double dct_weight(std::size_t k, std::size_t n) {
  return k == 0 ? 1.0 / std::sqrt(static_cast<double>(n)) : std::sqrt(2.0 / static_cast<double>(n));
}

/// cos(pi * k * (2m + 1) / (2N)), the DCT basis evaluated at measurement m.
inline double dct_basis(std::size_t k, std::size_t m, std::size_t n) {
  // Reduce k(2m+1) modulo the 4N period before scaling to keep the argument small.
  const std::size_t period = 4 * n;
  const std::size_t phase = (k % period) * ((2 * m + 1) % period) % period;
  return std::cos(std::numbers::pi * static_cast<double>(phase) / (2.0 * static_cast<double>(n)));
}

/// Orthonormal DCT-II: X[k] = g_k sum_m x[m] cos(pi k (2m+1) / 2N).
inline std::vector<double> dct2(std::span<const double> x) {
  const std::size_t n = x.size();
  if (n < 2) throw std::invalid_argument("dct2: need at least 2 samples");
  std::vector<double> in(x.begin(), x.end()), out(n);
  detail::execute_r2r(detail::R2rKind::redft10, in, out);
  for (std::size_t k = 0; k < n; ++k) out[k] *= 0.5 * dct_weight(k, n);
  return out;
}

/// Orthonormal DCT-III, the inverse of dct2: x[m] = sum_k g_k X[k] cos(pi k (2m+1) / 2N).
inline std::vector<double> dct3(std::span<const double> coeffs) {
  const std::size_t n = coeffs.size();
  if (n < 2) throw std::invalid_argument("dct3: need at least 2 coefficients");
  std::vector<double> in(n), out(n);
  in[0] = dct_weight(0, n) * coeffs[0];
  for (std::size_t k = 1; k < n; ++k) in[k] = 0.5 * dct_weight(k, n) * coeffs[k];
  detail::execute_r2r(detail::R2rKind::redft01, in, out);
  return out;
}

/// DCT-II coefficients F_0..F_{N-1} of a table sampled on the measurement grid.
struct DctSpectrum {
  std::vector<double> coefficients;

  std::size_t n() const { return coefficients.size(); }

  double energy() const {
    return std::transform_reduce(coefficients.begin(), coefficients.end(), 0.0, std::plus<>{},
                                 [](double v) { return v * v; });
  }
};

struct Coefficient {
  std::size_t k = 0;
  double value = 0.0;

  friend bool operator==(const Coefficient&, const Coefficient&) = default;
};

/// Retained coefficient set for a K-term approximation.
///
/// `retained` is ordered by decreasing |F_k| (ties: smaller k first). The set
/// itself is the prefix {1, 3, ..., 2K-1} of odd indices, which is the order
/// in which the receiver's peak search scans the tones.
struct DctApproximation {
  std::vector<Coefficient> retained;
  double alpha = kDefaultAlpha;
  std::size_t n = 0;

  std::size_t k_count() const { return retained.size(); }

  double retained_energy() const {
    double e = 0.0;
    for (const auto& c : retained) e += c.value * c.value;
    return e;
  }

  bool contains(std::size_t k) const {
    return std::any_of(retained.begin(), retained.end(), [k](const Coefficient& c) { return c.k == k; });
  }

  double value_of(std::size_t k) const {
    for (const auto& c : retained)
      if (c.k == k) return c.value;
    return 0.0;
  }

  /// Retained indices in increasing order.
  std::vector<std::size_t> indices() const {
    std::vector<std::size_t> ks;
    ks.reserve(retained.size());
    for (const auto& c : retained) ks.push_back(c.k);
    std::sort(ks.begin(), ks.end());
    return ks;
  }

  /// The approximation restricted to the `k_prime` lowest retained indices,
  /// i.e. what a receiver that detected K' tones reconstructs with.
  DctApproximation truncated(std::size_t k_prime) const {
    if (k_prime > retained.size()) throw std::invalid_argument("truncated: K' exceeds K");
    auto ks = indices();
    ks.resize(k_prime);
    DctApproximation out{{}, alpha, n};
    for (const auto& c : retained)
      if (std::find(ks.begin(), ks.end(), c.k) != ks.end()) out.retained.push_back(c);
    return out;
  }
};

inline void sort_by_magnitude(std::vector<Coefficient>& cs) {
  std::sort(cs.begin(), cs.end(), [](const Coefficient& a, const Coefficient& b) {
    const double ma = std::abs(a.value), mb = std::abs(b.value);
    if (ma != mb) return ma > mb;
    return a.k < b.k;
  });
}

inline DctSpectrum dct2_forward(std::span<const double> samples) {
  if (samples.empty()) throw std::invalid_argument("dct2_forward: empty input");
  return DctSpectrum{dct2(samples)};
}

inline std::vector<double> dct3_inverse(const DctSpectrum& spectrum) {
  return dct3(spectrum.coefficients);
}

/// Minimal K such that the odd prefix {1, 3, ..., 2K-1} holds at least
/// alpha of the total energy. Even-indexed coefficients are never retained.
inline DctApproximation select_coefficients(const DctSpectrum& spectrum, double alpha = kDefaultAlpha) {
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw std::invalid_argument("select_coefficients: alpha must lie in (0, 1]");
  const double total = spectrum.energy();
  if (!(total > 0.0)) throw std::domain_error("select_coefficients: spectrum has no energy");

  // Relative slack for round-off when alpha = 1 on an exactly odd table.
  const double target = alpha * total * (1.0 - 1e-12);
  DctApproximation approx{{}, alpha, spectrum.n()};
  double cumulative = 0.0;
  for (std::size_t k = 1; k < spectrum.n(); k += 2) {
    const double v = spectrum.coefficients[k];
    approx.retained.push_back({k, v});
    cumulative += v * v;
    if (cumulative >= target) break;
  }
  sort_by_magnitude(approx.retained);
  return approx;
}

/// f~_K(m) = sum_{k in K} g_k F_k cos(pi k (2m+1) / 2N).
inline double approximate_at(const DctApproximation& approx, std::size_t m) {
  double acc = 0.0;
  for (const auto& c : approx.retained) acc += dct_weight(c.k, approx.n) * c.value * dct_basis(c.k, m, approx.n);
  return acc;
}

inline std::vector<double> approximate(std::span<const double> table, const DctApproximation& approx) {
  if (table.size() != approx.n) throw std::invalid_argument("approximate: table size does not match approximation");
  std::vector<double> out(approx.n);
  for (std::size_t m = 0; m < approx.n; ++m) out[m] = approximate_at(approx, m);
  return out;
}

/// Pointwise truncation error |f(m) - f~_K(m)|^2 from the discarded coefficients.
inline double mse_dct_pointwise(const DctSpectrum& spectrum, const DctApproximation& kept, std::size_t m) {
  const std::size_t n = spectrum.n();
  if (m >= n) throw std::invalid_argument("mse_dct_pointwise: m out of range");
  double acc = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    if (kept.contains(k)) continue;
    acc += dct_weight(k, n) * spectrum.coefficients[k] * dct_basis(k, m, n);
  }
  return acc * acc;
}

/// Average truncation error over all m: (1/N) sum_{k not kept} F_k^2.
inline double mse_dct_mean(const DctSpectrum& spectrum, const DctApproximation& kept) {
  double discarded = 0.0;
  for (std::size_t k = 0; k < spectrum.n(); ++k)
    if (!kept.contains(k)) discarded += spectrum.coefficients[k] * spectrum.coefficients[k];
  return discarded / static_cast<double>(spectrum.n());
}

}  // namespace dctfm
