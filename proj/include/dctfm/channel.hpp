#pragma once

// Sample-level AWGN channel. Real waveforms get real N(0, sigma^2) noise;
// complex (chirped) waveforms get circular noise with sigma^2 per component.

#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <type_traits>
#include <vector>

#include "dctfm/modulators.hpp"

namespace dctfm {

using Rng = std::mt19937_64;

/// Independent engine for a (seed, stream...) tuple.
template <class... Ids>
Rng make_rng(std::uint64_t seed, Ids... ids) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(ids)...};
  return Rng(seq);
}

struct ChannelConfig {
  double sigma2 = 1.0;
  std::uint64_t seed = 0;
};

template <class Sample>
std::vector<Sample> add_awgn(std::span<const Sample> z, double sigma2, Rng& rng) {
  if (!(sigma2 > 0.0)) throw std::invalid_argument("add_awgn: noise power must be positive");
  std::normal_distribution<double> gauss(0.0, std::sqrt(sigma2));
  std::vector<Sample> y(z.begin(), z.end());
  for (auto& s : y) {
    if constexpr (std::is_same_v<Sample, std::complex<double>>) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      s += Sample{re, im};
    } else {
      s += gauss(rng);
    }
  }
  return y;
}

/// y[n] = z[n] + w[n], deterministic in config.seed.
template <class Sample>
std::vector<Sample> transmit(const Waveform<Sample>& waveform, const ChannelConfig& config) {
  Rng rng = make_rng(config.seed);
  return add_awgn<Sample>(waveform.samples, config.sigma2, rng);
}

}  // namespace dctfm
