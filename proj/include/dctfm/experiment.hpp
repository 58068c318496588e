#pragma once

// Monte Carlo harness: one trial runs the whole chain (table -> DCT select ->
// modulate -> AWGN -> demodulate) for one scheme; a sweep averages trials per
// (scheme, transmit power) cell.
//
// Seeding: the measurement of trial t depends only on (seed, t), and the noise
// of trial t at power index p only on (seed, p, t), so every scheme sees the
// same m and the same noise realisation in a given cell and results do not
// depend on execution order.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dctfm/analytics.hpp"
#include "dctfm/channel.hpp"
#include "dctfm/functions.hpp"
#include "dctfm/modulators.hpp"
#include "dctfm/receiver.hpp"
#include "dctfm/transform.hpp"

namespace dctfm {

enum class SweepScheme { dct_ag, dct_nag, dsb, mean_mse_ag };

inline constexpr std::array kAllSweepSchemes{SweepScheme::dct_ag, SweepScheme::dct_nag, SweepScheme::dsb,
                                             SweepScheme::mean_mse_ag};

inline std::string_view to_string(SweepScheme s) {
  switch (s) {
    case SweepScheme::dct_ag: return "dct_ag";
    case SweepScheme::dct_nag: return "dct_nag";
    case SweepScheme::dsb: return "dsb";
    case SweepScheme::mean_mse_ag: return "mean_mse_ag";
  }
  return "?";
}

inline std::optional<SweepScheme> parse_sweep_scheme(std::string_view name) {
  for (auto s : kAllSweepSchemes)
    if (to_string(s) == name) return s;
  return std::nullopt;
}

struct MeasurementPolicy {
  enum class Kind { uniform_random, sweep_all, fixed };
  Kind kind = Kind::uniform_random;
  std::size_t fixed_m = 0;
};

inline std::vector<double> power_grid(double start_db, double step_db, double stop_db) {
  if (!(step_db > 0.0)) throw std::invalid_argument("power grid step must be positive");
  std::vector<double> grid;
  const auto count = static_cast<std::size_t>(std::floor((stop_db - start_db) / step_db + 1e-9)) + 1;
  for (std::size_t i = 0; i < count; ++i) grid.push_back(start_db + step_db * static_cast<double>(i));
  return grid;
}

inline std::vector<double> default_power_grid() { return power_grid(-5.0, 2.5, 30.0); }

struct SweepConfig {
  FunctionKind function = FunctionKind::sigmoid;
  FunctionParams params;
  std::size_t n = 256;
  double alpha = kDefaultAlpha;
  std::vector<double> power_db_grid = default_power_grid();
  double sigma2_db = 0.0;
  std::size_t trials = 100;
  /// Index of the first trial; lets a long run be split into seed-compatible parts.
  std::size_t first_trial = 0;
  double threshold_multiplier = kDefaultThresholdMultiplier;
  std::vector<SweepScheme> schemes{kAllSweepSchemes.begin(), kAllSweepSchemes.end()};
  std::uint64_t seed = 1;
  MeasurementPolicy policy;
  double dsb_epsilon = kDefaultDsbEpsilon;
  /// 0 selects N/4.
  std::size_t dsb_carrier = 0;
  /// When set, DCT-FM schemes are chirped with this rate and dechirped at the receiver.
  std::optional<double> chirp_f_mod;

  void validate() const {
    if (n < 4) throw std::invalid_argument("config: n must be at least 4");
    if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("config: alpha must lie in (0, 1]");
    if (trials < 1) throw std::invalid_argument("config: trials must be at least 1");
    if (power_db_grid.empty()) throw std::invalid_argument("config: power grid is empty");
    for (double p : power_db_grid)
      if (!std::isfinite(p)) throw std::invalid_argument("config: non-finite power");
    if (!std::isfinite(sigma2_db)) throw std::invalid_argument("config: non-finite noise power");
    if (!(threshold_multiplier > 0.0)) throw std::invalid_argument("config: threshold multiplier must be positive");
    if (schemes.empty()) throw std::invalid_argument("config: no schemes selected");
    if (policy.kind == MeasurementPolicy::Kind::fixed && policy.fixed_m >= n)
      throw std::invalid_argument("config: fixed measurement outside the grid");
    if (!(dsb_epsilon > 0.0)) throw std::invalid_argument("config: dsb epsilon must be positive");
    if (dsb_carrier != 0 && 2 * (dsb_carrier + 1) > n)
      throw std::invalid_argument("config: dsb carrier must lie in [1, N/2 - 1]");
  }
};

/// Everything a trial needs that does not depend on the trial.
struct Scenario {
  SweepConfig config;
  FunctionTable table;
  DctSpectrum spectrum;
  DctApproximation approx;
  std::vector<std::size_t> k_set;
  double sigma2 = 1.0;
  double normalization = 1.0;

  static Scenario prepare(const SweepConfig& config) {
    config.validate();
    Scenario s;
    s.config = config;
    s.table = make_function(config.function, MeasurementGrid{config.n, 1.0}, config.params);
    s.spectrum = dct2_forward(s.table.values);
    s.approx = select_coefficients(s.spectrum, config.alpha);
    s.k_set = s.approx.indices();
    s.sigma2 = db_to_linear(config.sigma2_db);
    s.normalization = s.table.mean_energy();
    return s;
  }

  std::size_t n() const { return config.n; }
  std::size_t dsb_carrier() const { return config.dsb_carrier != 0 ? config.dsb_carrier : default_dsb_carrier(n()); }
  double threshold() const { return detection_threshold(sigma2, config.threshold_multiplier); }
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  return splitmix64(splitmix64(splitmix64(seed) ^ a) ^ b);
}

inline constexpr std::uint64_t kMeasurementStream = 0x6d6561737572ULL;

struct TrialResult {
  SweepScheme scheme = SweepScheme::dct_ag;
  std::size_t m = 0;
  double f_true = 0.0;
  double f_hat = 0.0;
  /// Present for the DCT-FM schemes.
  std::optional<ReceiverReport> report;
  std::size_t k_used = 0;
  /// Closed-form mean MSE for the K' this trial ended up using (unnormalised).
  double predicted = 0.0;

  double squared_error() const { return (f_true - f_hat) * (f_true - f_hat); }
};

namespace detail {

// DCT-FM front end shared by the three tone schemes; handles the chirped path.
inline std::vector<double> pass_through_channel(const Scenario& sc, const RealWaveform& z, Rng& rng) {
  if (!sc.config.chirp_f_mod) return add_awgn<double>(z.samples, sc.sigma2, rng);
  const double f_mod = *sc.config.chirp_f_mod;
  const auto chirped = chirp_wrap(z, f_mod);
  const auto y = add_awgn<std::complex<double>>(chirped.samples, sc.sigma2, rng);
  return in_phase(dechirp(y, f_mod));
}

}  // namespace detail

/// One end-to-end trial at transmit power `power_db` for measurement m.
inline TrialResult run_trial(const Scenario& sc, SweepScheme scheme, double power_db, std::size_t m,
                             std::uint64_t trial_seed) {
  const std::size_t n = sc.n();
  if (m >= n) throw std::invalid_argument("run_trial: measurement outside the grid");
  Rng rng = make_rng(trial_seed);
  const double a_c = amplitude_for_power(db_to_linear(power_db), sc.approx);

  TrialResult out;
  out.scheme = scheme;
  out.m = m;
  out.f_true = sc.table.values[m];

  switch (scheme) {
    case SweepScheme::dct_ag:
    case SweepScheme::mean_mse_ag: {
      const auto z = modulate_agnostic(m, sc.approx, a_c);
      const auto y = detail::pass_through_channel(sc, z, rng);
      const auto spec = demodulate_spectrum(y, a_c, sc.threshold());
      auto report = scheme == SweepScheme::dct_ag ? demodulate_agnostic(spec, sc.approx.k_count())
                                                  : demodulate_known_set(spec, sc.k_set);
      out.k_used = report.k_prime();
      out.f_hat = report.f_hat;
      out.predicted = predict_agnostic_mean(sc.spectrum, sc.approx, out.k_used, a_c, sc.sigma2).total();
      out.report = std::move(report);
      break;
    }
    case SweepScheme::dct_nag: {
      const double a_nag = match_power_nonagnostic(a_c, sc.approx);
      const auto z = modulate_nonagnostic(m, sc.approx, a_nag);
      const auto y = detail::pass_through_channel(sc, z, rng);
      const auto spec = demodulate_spectrum(y, a_nag, sc.threshold());
      auto report = demodulate_nonagnostic(spec, sc.approx);
      out.k_used = report.k_prime();
      out.f_hat = report.f_hat;
      out.predicted = predict_nonagnostic_mean(sc.spectrum, sc.approx, out.k_used).total();
      out.report = std::move(report);
      break;
    }
    case SweepScheme::dsb: {
      const double value = approximate_at(sc.approx, m);
      const double a_dsb = match_power_dsb(a_c, sc.approx, value, sc.config.dsb_epsilon);
      const auto z = modulate_dsb(m, n, value, sc.dsb_carrier(), a_dsb);
      const auto y = add_awgn<double>(z.samples, sc.sigma2, rng);
      out.f_hat = demodulate_dsb(y, a_dsb, sc.dsb_carrier());
      out.k_used = sc.approx.k_count();
      out.predicted = predict_dsb_mean(sc.spectrum, sc.approx, a_c, sc.sigma2).total();
      break;
    }
  }
  return out;
}

inline constexpr std::array<std::size_t, 3> kReportedTones{1, 3, 5};

struct SweepRow {
  SweepScheme scheme = SweepScheme::dct_ag;
  double power_db = 0.0;
  std::size_t trials = 0;
  double mse_emp = 0.0;
  double mse_emp_stderr = 0.0;
  double mse_pred = 0.0;
  /// Detection probability of tones k = 1, 3, 5 (NaN when not applicable).
  std::array<double, 3> pdet{};
  double mean_kprime = 0.0;
  /// kprime_counts[j] = number of trials that used j tones (in memory only).
  std::vector<std::size_t> kprime_counts;
};

struct SweepResult {
  std::vector<SweepRow> rows;

  const SweepRow* find(SweepScheme scheme, double power_db) const {
    for (const auto& r : rows)
      if (r.scheme == scheme && std::abs(r.power_db - power_db) < 1e-9) return &r;
    return nullptr;
  }

  std::vector<const SweepRow*> curve(SweepScheme scheme) const {
    std::vector<const SweepRow*> out;
    for (const auto& r : rows)
      if (r.scheme == scheme) out.push_back(&r);
    return out;
  }
};

/// Aggregates one (scheme, power) cell. Squared errors and predictions are
/// divided by the mean energy of f.
inline SweepRow aggregate_cell(const Scenario& sc, SweepScheme scheme, double power_db,
                               std::span<const TrialResult> trials) {
  SweepRow row;
  row.scheme = scheme;
  row.power_db = power_db;
  row.trials = trials.size();
  row.kprime_counts.assign(sc.approx.k_count() + 1, 0);

  std::vector<double> errs;
  errs.reserve(trials.size());
  double pred = 0.0, kp = 0.0;
  std::array<double, 3> hits{};
  for (const auto& t : trials) {
    errs.push_back(t.squared_error() / sc.normalization);
    pred += t.predicted / sc.normalization;
    kp += static_cast<double>(t.k_used);
    if (t.k_used < row.kprime_counts.size()) ++row.kprime_counts[t.k_used];
    if (t.report && t.report->m_hat == t.m)
      for (std::size_t j = 0; j < kReportedTones.size(); ++j)
        if (t.report->contains(kReportedTones[j])) hits[j] += 1.0;
  }
  const auto stats = mean_and_stderr(errs);
  const double count = static_cast<double>(std::max<std::size_t>(trials.size(), 1));
  row.mse_emp = stats.mean;
  row.mse_emp_stderr = stats.std_error;
  row.mse_pred = pred / count;
  row.mean_kprime = kp / count;
  const bool detects = scheme == SweepScheme::dct_ag || scheme == SweepScheme::dct_nag;
  for (std::size_t j = 0; j < kReportedTones.size(); ++j)
    row.pdet[j] = detects && sc.approx.contains(kReportedTones[j]) ? hits[j] / count
                                                                  : std::numeric_limits<double>::quiet_NaN();
  return row;
}

inline std::size_t draw_measurement(const Scenario& sc, std::size_t trial) {
  if (sc.config.policy.kind == MeasurementPolicy::Kind::fixed) return sc.config.policy.fixed_m;
  Rng rng = make_rng(derive_seed(sc.config.seed, kMeasurementStream, trial));
  std::uniform_int_distribution<std::size_t> pick(0, sc.n() - 1);
  return pick(rng);
}

/// Runs every (scheme, power) cell of the configuration.
inline SweepResult run_sweep(const SweepConfig& config) {
  const Scenario sc = Scenario::prepare(config);
  const std::size_t n = sc.n();
  const bool all_m = config.policy.kind == MeasurementPolicy::Kind::sweep_all;

  SweepResult result;
  std::vector<std::vector<TrialResult>> cells(config.schemes.size() * config.power_db_grid.size());
  for (std::size_t p = 0; p < config.power_db_grid.size(); ++p) {
    const double power_db = config.power_db_grid[p];
    for (std::size_t t = config.first_trial; t < config.first_trial + config.trials; ++t) {
      const std::size_t m_count = all_m ? n : 1;
      for (std::size_t j = 0; j < m_count; ++j) {
        const std::size_t m = all_m ? j : draw_measurement(sc, t);
        const std::uint64_t event = all_m ? t * n + j : t;
        const std::uint64_t trial_seed = derive_seed(config.seed, p, event);
        for (std::size_t s = 0; s < config.schemes.size(); ++s)
          cells[s * config.power_db_grid.size() + p].push_back(
              run_trial(sc, config.schemes[s], power_db, m, trial_seed));
      }
    }
  }
  for (std::size_t s = 0; s < config.schemes.size(); ++s)
    for (std::size_t p = 0; p < config.power_db_grid.size(); ++p)
      result.rows.push_back(aggregate_cell(sc, config.schemes[s], config.power_db_grid[p],
                                           cells[s * config.power_db_grid.size() + p]));
  return result;
}

/// Lowest grid power from which the detection probability of tone index
/// `tone_slot` (0: k=1, 1: k=3, 2: k=5) stays at or above `level`.
inline std::optional<double> detection_power(const SweepResult& result, SweepScheme scheme, std::size_t tone_slot,
                                             double level = 0.9) {
  auto curve = result.curve(scheme);
  std::sort(curve.begin(), curve.end(), [](auto* a, auto* b) { return a->power_db < b->power_db; });
  std::optional<double> from;
  for (const auto* row : curve) {
    if (row->pdet[tone_slot] >= level) {
      if (!from) from = row->power_db;
    } else {
      from.reset();
    }
  }
  return from;
}

}  // namespace dctfm
