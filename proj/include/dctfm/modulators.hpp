#pragma once

// Transmit side: DCT-FM waveforms (agnostic and power-halving non-agnostic),
// the DSB benchmark, and the chirp (LoRa-style) wrapper.
//
// Sample n of a DCT-FM tone with coefficient index k and measurement m is
//   g_n * cos(pi * k(2m+1) * n / 2N),
// i.e. the waveform is the orthonormal DCT-II of a sparse vector holding the
// tone amplitudes at their (folded) bins. Weighting n = 0 by g_0 = 1/sqrt(N)
// keeps the tones exactly orthonormal over n = 0..N-1, so sample power equals
// the closed forms below to round-off and the receiver's DCT-III returns the
// amplitudes without leakage.

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include "dctfm/transform.hpp"

namespace dctfm {

enum class Scheme { dct_fm_agnostic, dct_fm_nonagnostic, dsb, lora_chirped };

struct Tone {
  std::size_t k = 0;
  double amplitude = 0.0;
};

template <class Sample>
struct Waveform {
  std::vector<Sample> samples;
  double carrier_amplitude = 1.0;
  Scheme scheme = Scheme::dct_fm_agnostic;
  std::size_t m = 0;
  /// Tone set for DCT-FM schemes (empty for DSB); amplitudes exclude A_c.
  std::vector<Tone> tones;

  std::size_t n() const { return samples.size(); }

  double measured_power() const {
    double p = 0.0;
    for (const auto& s : samples) p += std::norm(s);
    return p / static_cast<double>(samples.size());
  }
};

using RealWaveform = Waveform<double>;
using ComplexWaveform = Waveform<std::complex<double>>;

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

struct PowerBudget {
  double p_tx = 1.0;
  double sigma2 = 1.0;

  static PowerBudget from_db(double p_tx_db, double sigma2_db) {
    return {db_to_linear(p_tx_db), db_to_linear(sigma2_db)};
  }
  double snr_db() const { return linear_to_db(p_tx / sigma2); }
};

/// Phase pi * k(2m+1) * n / 2N reduced modulo 2 pi.
inline double tone_phase(std::size_t k, std::size_t m, std::size_t sample, std::size_t n) {
  const std::size_t period = 4 * n;
  const std::size_t omega = (k % period) * ((2 * m + 1) % period) % period;
  const std::size_t idx = omega * (sample % period) % period;
  return std::numbers::pi * static_cast<double>(idx) / (2.0 * static_cast<double>(n));
}

namespace detail {

inline std::vector<double> synthesise_tones(std::span<const Tone> tones, std::size_t m, std::size_t n, double a_c) {
  std::vector<double> z(n, 0.0);
  for (std::size_t s = 0; s < n; ++s) {
    double acc = 0.0;
    for (const auto& t : tones) acc += t.amplitude * std::cos(tone_phase(t.k, m, s, n));
    z[s] = a_c * dct_weight(s, n) * acc;
  }
  return z;
}

inline void check_measurement(std::size_t m, std::size_t n) {
  if (m >= n) throw std::invalid_argument("measurement outside [0, N-1]");
}

}  // namespace detail

/// Agnostic DCT-FM: one tone per retained coefficient, amplitude A_c F_k.
inline RealWaveform modulate_agnostic(std::size_t m, const DctApproximation& approx, double a_c) {
  if (approx.retained.empty()) throw std::invalid_argument("modulate_agnostic: empty coefficient set");
  detail::check_measurement(m, approx.n);
  std::vector<Tone> tones;
  for (const auto& c : approx.retained) tones.push_back({c.k, c.value});
  auto z = detail::synthesise_tones(tones, m, approx.n, a_c);
  return {std::move(z), a_c, Scheme::dct_fm_agnostic, m, std::move(tones)};
}

/// Amplitude 2^{-(k-1)/2} of tone k in the non-agnostic waveform.
inline double nonagnostic_weight(std::size_t k) { return std::pow(2.0, -(static_cast<double>(k) - 1.0) / 2.0); }

inline RealWaveform modulate_nonagnostic(std::size_t m, std::span<const std::size_t> k_set, std::size_t n,
                                         double a_c_nag) {
  if (k_set.empty()) throw std::invalid_argument("modulate_nonagnostic: empty coefficient set");
  detail::check_measurement(m, n);
  std::vector<Tone> tones;
  for (auto k : k_set) tones.push_back({k, nonagnostic_weight(k)});
  auto z = detail::synthesise_tones(tones, m, n, a_c_nag);
  return {std::move(z), a_c_nag, Scheme::dct_fm_nonagnostic, m, std::move(tones)};
}

inline RealWaveform modulate_nonagnostic(std::size_t m, const DctApproximation& approx, double a_c_nag) {
  const auto ks = approx.indices();
  return modulate_nonagnostic(m, ks, approx.n, a_c_nag);
}

/// P_ag = (A_c^2 / N) sum F_k^2.
inline double power_agnostic(double a_c, const DctApproximation& approx) {
  return a_c * a_c * approx.retained_energy() / static_cast<double>(approx.n);
}

inline double nonagnostic_weight_energy(std::span<const std::size_t> k_set) {
  double s = 0.0;
  for (auto k : k_set) s += std::pow(2.0, 1.0 - static_cast<double>(k));
  return s;
}

/// P_nag = ((A_c^nag)^2 / N) sum 2^{1-k}.
inline double power_nonagnostic(double a_c_nag, std::span<const std::size_t> k_set, std::size_t n) {
  return a_c_nag * a_c_nag * nonagnostic_weight_energy(k_set) / static_cast<double>(n);
}

/// A_c^nag giving the non-agnostic waveform the same power as the agnostic one.
inline double match_power_nonagnostic(double a_c, const DctApproximation& approx) {
  if (approx.retained.empty()) throw std::invalid_argument("match_power_nonagnostic: empty coefficient set");
  const double energy = approx.retained_energy();
  if (!(energy > 0.0)) throw std::domain_error("match_power_nonagnostic: zero retained energy");
  const auto ks = approx.indices();
  return a_c * std::sqrt(energy / nonagnostic_weight_energy(ks));
}

/// Carrier amplitude that puts the agnostic waveform at transmit power p_tx.
inline double amplitude_for_power(double p_tx, const DctApproximation& approx) {
  const double energy = approx.retained_energy();
  if (!(energy > 0.0)) throw std::domain_error("amplitude_for_power: zero retained energy");
  return std::sqrt(p_tx * static_cast<double>(approx.n) / energy);
}

inline constexpr double kDefaultDsbEpsilon = 1e-9;

inline std::size_t default_dsb_carrier(std::size_t n) { return n / 4; }

/// DSB carrying f~_K(m): A_c^DSB sqrt(2/N) f~_K(m) cos(2 pi k_c n / N).
inline RealWaveform modulate_dsb(std::size_t m, std::size_t n, double approx_value, std::size_t carrier_index,
                                 double a_c_dsb) {
  if (carrier_index < 1 || 2 * (carrier_index + 1) > n)
    throw std::invalid_argument("modulate_dsb: carrier index must lie in [1, N/2 - 1]");
  detail::check_measurement(m, n);
  std::vector<double> z(n);
  const double scale = a_c_dsb * std::sqrt(2.0 / static_cast<double>(n)) * approx_value;
  for (std::size_t s = 0; s < n; ++s) {
    const std::size_t idx = carrier_index * s % n;
    z[s] = scale * std::cos(2.0 * std::numbers::pi * static_cast<double>(idx) / static_cast<double>(n));
  }
  return {std::move(z), a_c_dsb, Scheme::dsb, m, {}};
}

/// P_DSB = ((A_c^DSB)^2 / N) |f~_K(m)|^2.
inline double power_dsb(double a_c_dsb, double approx_value, std::size_t n) {
  return a_c_dsb * a_c_dsb * approx_value * approx_value / static_cast<double>(n);
}

/// A_c^DSB(m) matching the agnostic power; epsilon keeps it finite at f~_K(m) = 0.
inline double match_power_dsb(double a_c, const DctApproximation& approx, double approx_value,
                              double epsilon = kDefaultDsbEpsilon) {
  return std::sqrt(a_c * a_c * approx.retained_energy() / (approx_value * approx_value + epsilon));
}

/// B_z = (2K - 1)(2m + 1) W / 4.
inline double bandwidth(std::size_t m, std::size_t k_count, double w) {
  if (k_count < 1) throw std::invalid_argument("bandwidth: K must be at least 1");
  return static_cast<double>(2 * k_count - 1) * static_cast<double>(2 * m + 1) * w / 4.0;
}

/// exp(j pi f_mod n^2 / N).
inline std::complex<double> chirp_factor(std::size_t sample, std::size_t n, double f_mod) {
  const double s = static_cast<double>(sample);
  return std::polar(1.0, std::numbers::pi * f_mod * s * s / static_cast<double>(n));
}

/// Analytic version of a DCT-FM tone set multiplied by a chirp of rate f_mod.
/// The real part of the analytic signal (before chirping) is the input waveform.
inline ComplexWaveform chirp_wrap(const RealWaveform& waveform, double f_mod) {
  if (waveform.tones.empty()) throw std::invalid_argument("chirp_wrap: waveform carries no DCT-FM tone set");
  const std::size_t n = waveform.n();
  std::vector<std::complex<double>> out(n);
  for (std::size_t s = 0; s < n; ++s) {
    std::complex<double> acc{0.0, 0.0};
    for (const auto& t : waveform.tones) acc += t.amplitude * std::polar(1.0, tone_phase(t.k, waveform.m, s, n));
    out[s] = waveform.carrier_amplitude * dct_weight(s, n) * acc * chirp_factor(s, n, f_mod);
  }
  return {std::move(out), waveform.carrier_amplitude, Scheme::lora_chirped, waveform.m, waveform.tones};
}

}  // namespace dctfm
