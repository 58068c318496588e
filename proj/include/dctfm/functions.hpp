#pragma once

// Catalog of odd-symmetric test functions on the measurement grid and the
// uniform quantizer that maps a normalised reading onto it.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace dctfm {

inline constexpr double kDefaultPeak = 32.0;
inline constexpr double kDefaultSigmoidSteepness = 9.5;

struct MeasurementGrid {
  std::size_t n = 256;
  double delta = 1.0;
};

/// Q(x) = delta * floor(x / delta + 1/2), clamped to [0, N-1].
inline std::size_t quantize(double x, const MeasurementGrid& grid) {
  if (!std::isfinite(x)) throw std::invalid_argument("quantize: non-finite input");
  if (!(grid.delta > 0.0)) throw std::invalid_argument("quantize: step must be positive");
  const double level = grid.delta * std::floor(x / grid.delta + 0.5);
  const double top = static_cast<double>(grid.n - 1);
  return static_cast<std::size_t>(std::llround(std::clamp(level, 0.0, top)));
}

enum class FunctionKind { sigmoid, sine, odd_square, odd_sqrt, linear };

inline constexpr std::array kAllFunctions{FunctionKind::sigmoid, FunctionKind::sine, FunctionKind::odd_square,
                                          FunctionKind::odd_sqrt, FunctionKind::linear};

inline std::string_view to_string(FunctionKind kind) {
  switch (kind) {
    case FunctionKind::sigmoid: return "sigmoid";
    case FunctionKind::sine: return "sine";
    case FunctionKind::odd_square: return "odd_square";
    case FunctionKind::odd_sqrt: return "odd_sqrt";
    case FunctionKind::linear: return "linear";
  }
  return "?";
}

inline std::optional<FunctionKind> parse_function_kind(std::string_view name) {
  for (auto kind : kAllFunctions)
    if (to_string(kind) == name) return kind;
  return std::nullopt;
}

/// Where the odd symmetry is anchored. `grid_midpoint` ((N-1)/2) gives
/// f(N-1-m) = -f(m) exactly on the integer grid; `half_n` evaluates the
/// textbook formula sign(m - N/2)(m - N/2)^2 literally and is not odd on the grid.
enum class Centering { grid_midpoint, half_n };

struct FunctionParams {
  /// Logistic slope in units of the half-grid: sigma(steepness * (m - c) / (N/2)).
  double steepness = kDefaultSigmoidSteepness;
  /// Target max |f(m)| when f_max is not given.
  double peak = kDefaultPeak;
  /// Explicit multiplier of the shape; overrides `peak` scaling when set.
  std::optional<double> f_max;
  Centering centering = Centering::grid_midpoint;
};

struct FunctionTable {
  std::string name;
  std::vector<double> values;
  double f_max = 1.0;

  std::size_t n() const { return values.size(); }

  double max_abs() const {
    double mx = 0.0;
    for (double v : values) mx = std::max(mx, std::abs(v));
    return mx;
  }

  /// (1/N) sum f(m)^2, the normalisation used for relative MSE.
  double mean_energy() const {
    double e = 0.0;
    for (double v : values) e += v * v;
    return e / static_cast<double>(values.size());
  }

  bool is_odd_symmetric(double tol = 1e-9) const {
    const std::size_t n = values.size();
    for (std::size_t m = 0; m < n; ++m)
      if (std::abs(values[n - 1 - m] + values[m]) > tol) return false;
    return true;
  }
};

namespace detail {

inline double sign(double x) { return static_cast<double>((x > 0.0) - (x < 0.0)); }

inline double shape(FunctionKind kind, std::size_t m, std::size_t n, double centre, double steepness) {
  const double x = static_cast<double>(m) - centre;
  switch (kind) {
    case FunctionKind::sigmoid:
      return 1.0 / (1.0 + std::exp(-steepness * x / (static_cast<double>(n) / 2.0))) - 0.5;
    case FunctionKind::sine:
      // k = 1 DCT basis vector, negated so the curve rises like the others.
      return -std::cos(std::numbers::pi * static_cast<double>(2 * m + 1) / (2.0 * static_cast<double>(n)));
    case FunctionKind::odd_square: return sign(x) * x * x;
    case FunctionKind::odd_sqrt: return sign(x) * std::sqrt(std::abs(x));
    case FunctionKind::linear: return x;
  }
  return 0.0;
}

}  // namespace detail

inline FunctionTable make_function(FunctionKind kind, const MeasurementGrid& grid, const FunctionParams& params = {}) {
  const std::size_t n = grid.n;
  if (n < 2) throw std::invalid_argument("make_function: grid needs at least 2 points");
  const double centre = params.centering == Centering::grid_midpoint ? (static_cast<double>(n) - 1.0) / 2.0
                                                                     : static_cast<double>(n) / 2.0;
  std::vector<double> shape(n);
  for (std::size_t m = 0; m < n; ++m) shape[m] = detail::shape(kind, m, n, centre, params.steepness);

  double f_max = 1.0;
  if (params.f_max) {
    f_max = *params.f_max;
  } else {
    double mx = 0.0;
    for (double v : shape) mx = std::max(mx, std::abs(v));
    if (mx == 0.0) throw std::domain_error("make_function: shape is identically zero");
    f_max = params.peak / mx;
  }
  for (double& v : shape) v *= f_max;
  return FunctionTable{std::string(to_string(kind)), std::move(shape), f_max};
}

inline FunctionTable make_function(std::string_view name, const MeasurementGrid& grid,
                                   const FunctionParams& params = {}) {
  const auto kind = parse_function_kind(name);
  if (!kind) throw std::invalid_argument("unknown function '" + std::string(name) + "'");
  return make_function(*kind, grid, params);
}

}  // namespace dctfm
