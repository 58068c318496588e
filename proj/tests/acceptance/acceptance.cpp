// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any fails.
// Every tolerance, trial count and runtime budget is fixed below.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "dctfm/analytics.hpp"
#include "dctfm/experiment.hpp"
#include "dctfm/io.hpp"
#include "oracles.hpp"

using namespace dctfm;

namespace {

constexpr std::uint64_t kSeed = 20240601;

struct Check {
  bool ok = true;
  std::ostringstream detail;

  void expect(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail << "  [miss] " << what << '\n';
    } else {
      detail << "  [ok]   " << what << '\n';
    }
  }

  void note(const std::string& what) { detail << "  [info] " << what << '\n'; }
};

std::string fmt(double x, int digits = 4) {
  std::ostringstream os;
  os.precision(digits);
  os << x;
  return os.str();
}

int failures = 0;

void run(int id, const std::string& name, double budget_s, const std::function<void(Check&)>& body) {
  Check c;
  const auto t0 = std::chrono::steady_clock::now();
  body(c);
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  c.expect(elapsed < budget_s, "runtime " + fmt(elapsed, 3) + " s < " + fmt(budget_s) + " s");
  if (!c.ok) ++failures;
  std::printf("%s [%d] %s\n%s", c.ok ? "PASS" : "FAIL", id, name.c_str(), c.detail.str().c_str());
  std::fflush(stdout);
}

DctApproximation approx_of(FunctionKind kind, FunctionParams params = {}) {
  return select_coefficients(dct2_forward(make_function(kind, {}, params).values));
}

void transform_correctness(Check& c) {
  std::mt19937_64 rng(kSeed);
  std::normal_distribution<double> gauss;
  for (std::size_t n : {4u, 64u, 256u, 1024u}) {
    double roundtrip = 0.0, parseval = 0.0, oracle_gap = 0.0;
    for (int rep = 0; rep < 3; ++rep) {
      std::vector<double> x(n);
      for (double& v : x) v = gauss(rng);
      const auto X = dct2(x);
      const auto y = dct3(X);
      double ex = 0.0, eX = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        roundtrip = std::max(roundtrip, std::abs(y[i] - x[i]));
        ex += x[i] * x[i];
        eX += X[i] * X[i];
      }
      parseval = std::max(parseval, std::abs(ex - eX) / ex);
      const auto slow = oracle::dct2(x);
      const auto slow_inv = oracle::dct3(x);
      const auto fast_inv = dct3(x);
      for (std::size_t i = 0; i < n; ++i)
        oracle_gap = std::max({oracle_gap, std::abs(slow[i] - X[i]), std::abs(slow_inv[i] - fast_inv[i])});
    }
    const std::string tag = "N=" + std::to_string(n);
    c.expect(roundtrip < 1e-10, tag + " round-trip max error " + fmt(roundtrip) + " < 1e-10");
    c.expect(parseval < 1e-10, tag + " Parseval relative error " + fmt(parseval) + " < 1e-10");
    c.expect(oracle_gap < 1e-10, tag + " fast vs O(N^2) max gap " + fmt(oracle_gap) + " < 1e-10");
  }
}

void coefficient_counts(Check& c) {
  const auto k = [](FunctionKind kind) { return approx_of(kind).k_count(); };
  c.expect(k(FunctionKind::sine) == 1, "sine K=" + std::to_string(k(FunctionKind::sine)) + " (expected 1)");
  c.expect(k(FunctionKind::odd_square) == 3,
           "odd square K=" + std::to_string(k(FunctionKind::odd_square)) + " (expected 3)");
  c.expect(k(FunctionKind::odd_sqrt) == 3,
           "odd square root K=" + std::to_string(k(FunctionKind::odd_sqrt)) + " (expected 3)");
  const std::size_t ks = k(FunctionKind::sigmoid);
  c.expect(ks == 3, "sigmoid K=" + std::to_string(ks) + " at steepness " + fmt(kDefaultSigmoidSteepness));
  for (double beta : {9.0, 10.0}) {
    FunctionParams p;
    p.steepness = beta;
    const auto kb = approx_of(FunctionKind::sigmoid, p).k_count();
    c.expect(kb == ks, "sigmoid K stable at steepness " + fmt(beta) + " (K=" + std::to_string(kb) + ")");
  }
}

void folding(Check& c) {
  const auto l = fold_index(300, 256);
  c.expect(l == 212, "fold_index(300, 256) = " + std::to_string(l) + " (expected 212)");
  const oracle::TonePeakOracle peak(256);
  std::size_t mismatches = 0;
  for (std::size_t k : {1u, 3u, 5u, 7u})
    for (std::size_t m = 0; m < 256; ++m)
      if (tone_bin(k, m, 256) != peak(k, m)) ++mismatches;
  c.expect(mismatches == 0, "fold_index vs noiseless spectral argmax, k in {1,3,5,7}, m in [0,255]: " +
                                std::to_string(mismatches) + " mismatches");
}

void noiseless_identity(Check& c) {
  for (auto kind : kAllFunctions) {
    const auto a = approx_of(kind);
    const double a_c = amplitude_for_power(db_to_linear(40.0), a);
    std::size_t bad_m = 0, bad_set = 0;
    double max_err = 0.0;
    for (std::size_t m = 0; m < a.n; ++m) {
      const auto z = modulate_agnostic(m, a, a_c);
      const auto rep = demodulate_agnostic(demodulate_spectrum(z.samples, a_c, detection_threshold(1.0)));
      if (rep.m_hat != m) ++bad_m;
      std::vector<std::size_t> got;
      for (const auto& d : rep.detected) got.push_back(d.k);
      if (got != a.indices()) ++bad_set;
      max_err = std::max(max_err, std::abs(rep.f_hat - approximate_at(a, m)));
    }
    c.expect(bad_m == 0 && bad_set == 0 && max_err < 1e-9,
             std::string(to_string(kind)) + ": m^ errors " + std::to_string(bad_m) + ", set errors " +
                 std::to_string(bad_set) + ", max |f^ - f~| " + fmt(max_err) + " < 1e-9");
  }
}

void closed_form_agreement(Check& c) {
  constexpr std::size_t kTrials = 10000;
  constexpr double kSigmas = 3.0;
  SweepConfig cfg;
  cfg.power_db_grid = {0.0, 10.0, 20.0};
  cfg.trials = kTrials;
  cfg.seed = kSeed;
  cfg.schemes = {SweepScheme::mean_mse_ag, SweepScheme::dsb};
  const auto result = run_sweep(cfg);
  const Scenario sc = Scenario::prepare(cfg);

  auto report = [&](const std::string& label, double p, double emp, double se, double pred) {
    const double z = std::abs(emp - pred) / se;
    c.expect(z <= kSigmas, label + " at " + fmt(p) + " dB: empirical " + fmt(emp, 6) + " +- " + fmt(se, 3) +
                               ", closed form " + fmt(pred, 6) + ", |z|=" + fmt(z, 3) + " <= 3");
  };

  for (double p : cfg.power_db_grid) {
    const auto* ag = result.find(SweepScheme::mean_mse_ag, p);
    report("agnostic (K'=K)", p, ag->mse_emp, ag->mse_emp_stderr, ag->mse_pred);

    // Non-agnostic with K' = K: every known index is substituted after m^ is found.
    const double a_c = amplitude_for_power(db_to_linear(p), sc.approx);
    const double a_nag = match_power_nonagnostic(a_c, sc.approx);
    std::vector<double> errs;
    for (std::size_t t = 0; t < kTrials; ++t) {
      const std::size_t m = draw_measurement(sc, t);
      Rng rng = make_rng(derive_seed(kSeed, 1000 + static_cast<std::uint64_t>(p), t));
      const auto y = add_awgn<double>(modulate_nonagnostic(m, sc.approx, a_nag).samples, sc.sigma2, rng);
      const auto spec = demodulate_spectrum(y, a_nag, sc.threshold());
      const auto rep = substitute_coefficients(demodulate_known_set(spec, sc.k_set), sc.approx);
      const double d = sc.table.values[m] - rep.f_hat;
      errs.push_back(d * d / sc.normalization);
    }
    const auto nag = mean_and_stderr(errs);
    const double nag_pred = predict_nonagnostic_mean(sc.spectrum, sc.approx, sc.approx.k_count()).total() /
                            sc.normalization;
    report("non-agnostic (K'=K)", p, nag.mean, nag.std_error, nag_pred);

    const auto* dsb = result.find(SweepScheme::dsb, p);
    report("DSB", p, dsb->mse_emp, dsb->mse_emp_stderr, dsb->mse_pred);
    const double averaged =
        predict_dsb_pointwise_average(sc.spectrum, sc.approx, a_c, sc.sigma2).total() / sc.normalization;
    c.note("DSB at " + fmt(p) + " dB against the m-average of the pointwise form: " + fmt(averaged, 6) +
           ", |z|=" + fmt(std::abs(dsb->mse_emp - averaged) / dsb->mse_emp_stderr, 3));
  }
}

void ordering(Check& c) {
  std::size_t violations = 0;
  for (auto kind : kAllFunctions) {
    const auto spec = dct2_forward(make_function(kind, {}).values);
    const auto a = select_coefficients(spec);
    for (double p_db : {-5.0, 10.0, 30.0}) {
      const double a_c = amplitude_for_power(db_to_linear(p_db), a);
      for (std::size_t m = 0; m < spec.n(); ++m)
        if (predict_agnostic(spec, a, a.k_count(), m, a_c, 1.0).total() <
            predict_dsb(spec, a, m, a_c, 1.0).total() * (1.0 - 1e-12))
          ++violations;
    }
  }
  c.expect(violations == 0, "pointwise MSE_ag >= MSE_DSB for all functions, m and powers: " +
                                std::to_string(violations) + " violations");

  const auto spec = dct2_forward(make_function(FunctionKind::sigmoid, {}).values);
  const auto a = select_coefficients(spec);
  double worst = 0.0;
  for (std::size_t kp = 1; kp <= a.k_count(); ++kp)
    for (double p_db : {-5.0, 10.0, 30.0}) {
      const double a_c = amplitude_for_power(db_to_linear(p_db), a);
      const double ratio = predict_agnostic_mean(spec, a, kp, a_c, 1.0).noise_term /
                           predict_dsb_mean(spec, a, a_c, 1.0).noise_term;
      worst = std::max(worst, std::abs(ratio - 2.0 * static_cast<double>(kp)));
    }
  c.expect(worst < 1e-9, "mean noise-term ratio agnostic/DSB = 2K', max deviation " + fmt(worst) + " < 1e-9");
}

void figure_reproduction(Check& c) {
  constexpr double kStep = 2.5;
  SweepConfig cfg;
  cfg.trials = 1000;
  cfg.seed = kSeed;
  const auto r = run_sweep(cfg);

  // (a) non-agnostic lowest at every grid power up to -3 dB plus one grid step.
  std::string lows;
  bool a_ok = true;
  for (double p : cfg.power_db_grid) {
    if (p > -3.0 + kStep) break;
    const double nag = r.find(SweepScheme::dct_nag, p)->mse_emp;
    for (auto s : {SweepScheme::dct_ag, SweepScheme::dsb, SweepScheme::mean_mse_ag}) {
      const double other = r.find(s, p)->mse_emp;
      if (!(nag < other)) a_ok = false;
      lows += " " + std::string(to_string(s)) + "@" + fmt(p) + "=" + fmt(other, 3);
    }
    lows += " nag@" + fmt(p) + "=" + fmt(nag, 3) + ";";
  }
  c.expect(a_ok, "(a) DCT-nag lowest mean MSE at powers <= " + fmt(-3.0 + kStep) + " dB:" + lows);

  const auto ag3 = detection_power(r, SweepScheme::dct_ag, 2);
  const auto nag3 = detection_power(r, SweepScheme::dct_nag, 2);
  const auto ag2 = detection_power(r, SweepScheme::dct_ag, 1);
  const auto nag2 = detection_power(r, SweepScheme::dct_nag, 1);
  const auto show = [](const std::optional<double>& v) { return v ? fmt(*v) + " dB" : std::string("never"); };
  c.expect(ag3 && std::abs(*ag3 - 22.5) <= kStep,
           "(b) DCT-ag 90% detection of the third coefficient at " + show(ag3) + " (expected 22.5 +- 2.5 dB)");
  c.expect(nag3 && std::abs(*nag3 - 5.0) <= kStep,
           "(b) DCT-nag 90% detection of the third coefficient at " + show(nag3) + " (expected 5 +- 2.5 dB)");
  const double gap3 = ag3 && nag3 ? *ag3 - *nag3 : std::nan("");
  c.expect(std::abs(gap3 - 15.0) <= 3.0,
           "(c) ag/nag detection gap, third coefficient: " + fmt(gap3) + " dB (expected 15 +- 3 dB); second "
           "coefficient: " + show(ag2) + " vs " + show(nag2));
}

void tone_decay(Check& c) {
  const auto a = approx_of(FunctionKind::sigmoid);
  const auto ks = a.indices();
  for (std::size_t i = 1; i < ks.size(); ++i) {
    const double drop = 20.0 * std::log10(std::abs(a.value_of(ks[i - 1]) / a.value_of(ks[i])));
    c.expect(std::abs(drop - 12.0) <= 3.0, "tone power drop k=" + std::to_string(ks[i - 1]) + " -> k=" +
                                               std::to_string(ks[i]) + ": " + fmt(drop) + " dB (12 +- 3 dB)");
  }
}

void chirp_layer(Check& c) {
  const auto a = approx_of(FunctionKind::sigmoid);
  const auto z = modulate_agnostic(60, a, 3.0);
  double identity = 0.0, power = 0.0;
  const auto ref = chirp_wrap(z, 0.0);
  for (double f_mod : {0.5, 1.0, 4.0}) {
    const auto w = chirp_wrap(z, f_mod);
    const auto back = in_phase(dechirp(w.samples, f_mod));
    for (std::size_t s = 0; s < z.n(); ++s) identity = std::max(identity, std::abs(back[s] - z.samples[s]));
    power = std::max(power, std::abs(w.measured_power() - ref.measured_power()) / ref.measured_power());
  }
  c.expect(identity < 1e-12, "dechirp(chirp(z)) = z, max error " + fmt(identity) + " < 1e-12");
  c.expect(power < 1e-12, "chirp preserves power, relative error " + fmt(power) + " < 1e-12");

  SweepConfig cfg;
  cfg.trials = 1000;
  cfg.seed = kSeed;
  cfg.power_db_grid = {0.0, 5.0, 10.0};
  cfg.schemes = {SweepScheme::dct_ag};
  const auto plain = run_sweep(cfg);
  cfg.chirp_f_mod = 1.0;
  const auto chirped = run_sweep(cfg);
  for (std::size_t i = 0; i < plain.rows.size(); ++i) {
    const auto var = [](const SweepRow& row) {
      double s = 0.0;
      for (std::size_t k = 0; k < row.kprime_counts.size(); ++k)
        s += static_cast<double>(row.kprime_counts[k]) * std::pow(static_cast<double>(k) - row.mean_kprime, 2);
      return s / static_cast<double>(row.trials - 1);
    };
    const auto &p = plain.rows[i], &q = chirped.rows[i];
    const double se = std::sqrt(var(p) / static_cast<double>(p.trials) + var(q) / static_cast<double>(q.trials));
    const double z_kp = std::abs(p.mean_kprime - q.mean_kprime) / se;
    c.expect(z_kp <= 2.0, "mean K' at " + fmt(p.power_db) + " dB: plain " + fmt(p.mean_kprime) + ", chirped " +
                              fmt(q.mean_kprime) + ", |z|=" + fmt(z_kp, 3) + " <= 2");
  }
}

}  // namespace

int main() {
  run(1, "transform correctness", 5.0, transform_correctness);
  run(2, "coefficient counts", 5.0, coefficient_counts);
  run(3, "folding", 30.0, folding);
  run(4, "noiseless end-to-end identity", 30.0, noiseless_identity);
  run(5, "closed-form agreement", 120.0, closed_form_agreement);
  run(6, "ordering properties", 5.0, ordering);
  run(7, "figure reproduction", 300.0, figure_reproduction);
  run(8, "sigmoid tone decay", 5.0, tone_decay);
  run(9, "chirp layer", 60.0, chirp_layer);
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
