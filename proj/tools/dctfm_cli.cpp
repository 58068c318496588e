// dctfm: approximate | demo | sweep | predict

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dctfm/analytics.hpp"
#include "dctfm/experiment.hpp"
#include "dctfm/io.hpp"

namespace {

using namespace dctfm;

struct Common {
  std::string config_path;
  std::vector<std::string> settings;
  std::optional<std::string> function;
  std::optional<std::size_t> n;
  std::optional<double> alpha;
  std::uint64_t seed = 1;

  void attach(CLI::App* app) {
    app->add_option("--config", config_path, "key = value configuration file");
    app->add_option("--set", settings, "extra key=value override (repeatable)");
    app->add_option("--function", function, "sigmoid | sine | odd_square | odd_sqrt | linear");
    app->add_option("--n", n, "grid size N");
    app->add_option("--alpha", alpha, "energy fraction for coefficient selection");
    app->add_option("--seed", seed, "master seed")->capture_default_str();
  }

  SweepConfig resolve() const {
    SweepConfig c;
    if (!config_path.empty()) c = load_config_file(config_path, c);
    for (const auto& kv : settings) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw std::invalid_argument("--set expects key=value, got '" + kv + "'");
      apply_setting(c, trim(std::string_view(kv).substr(0, eq)), std::string_view(kv).substr(eq + 1));
    }
    if (function) apply_setting(c, "function", *function);
    if (n) c.n = *n;
    if (alpha) c.alpha = *alpha;
    c.seed = seed;
    c.validate();
    return c;
  }
};

int run_approximate(const Common& common) {
  const auto sc = Scenario::prepare(common.resolve());
  std::cout << "function " << sc.table.name << "  N=" << sc.n() << "  alpha=" << format_double(sc.config.alpha)
            << "\nK " << sc.approx.k_count() << "\nk,F_k\n";
  for (const auto& c : sc.approx.retained) std::cout << c.k << ',' << format_double(c.value) << '\n';
  const double mse = mse_dct_mean(sc.spectrum, sc.approx);
  std::cout << "mean_truncation_mse " << format_double(mse) << "\nnormalized_truncation_mse "
            << format_double(mse / sc.normalization) << '\n';
  return 0;
}

int run_demo(const Common& common, const std::string& scheme_name, std::size_t m, double power_db,
             const std::string& spectrum_path) {
  const auto sc = Scenario::prepare(common.resolve());
  const auto scheme = parse_sweep_scheme(scheme_name);
  if (!scheme || *scheme == SweepScheme::dsb)
    throw std::invalid_argument("demo supports dct_ag, dct_nag and mean_mse_ag");
  if (m >= sc.n()) throw std::invalid_argument("--m outside the grid");

  // Same chain as run_trial, kept open so the spectrum can be dumped.
  Rng rng = make_rng(derive_seed(sc.config.seed, 0, 0));
  double a = amplitude_for_power(db_to_linear(power_db), sc.approx);
  RealWaveform z = *scheme == SweepScheme::dct_nag
                       ? modulate_nonagnostic(m, sc.approx, a = match_power_nonagnostic(a, sc.approx))
                       : modulate_agnostic(m, sc.approx, a);
  const auto y = detail::pass_through_channel(sc, z, rng);
  const auto spec = demodulate_spectrum(y, a, sc.threshold());
  const auto report = *scheme == SweepScheme::dct_ag    ? demodulate_agnostic(spec, sc.approx.k_count())
                      : *scheme == SweepScheme::dct_nag ? demodulate_nonagnostic(spec, sc.approx)
                                                        : demodulate_known_set(spec, sc.k_set);

  std::ofstream os(spectrum_path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open '" + spectrum_path + "'");
  os << "l,r\n";
  for (std::size_t l = 0; l < spec.n(); ++l) os << l << ',' << format_double(spec.r[l]) << '\n';

  std::cout << "m " << m << "\nm_hat " << report.m_hat << "\nthreshold " << format_double(spec.threshold)
            << "\ndetected";
  for (const auto& c : report.detected)
    std::cout << ' ' << c.k << '@' << tone_bin(c.k, report.m_hat, sc.n()) << '=' << format_double(c.value);
  std::cout << "\nf " << format_double(sc.table.values[m]) << "\nf_hat " << format_double(report.f_hat)
            << "\nspectrum " << spectrum_path << '\n';
  return 0;
}

int run_sweep_cmd(const Common& common, std::optional<std::size_t> trials, const std::string& out) {
  auto config = common.resolve();
  if (trials) config.trials = *trials;
  config.validate();
  const auto result = run_sweep(config);
  if (out.empty() || out == "-") {
    write_sweep_csv(std::cout, result);
  } else {
    write_sweep_csv_file(out, result);
    std::cerr << "wrote " << result.rows.size() << " rows to " << out << '\n';
  }
  return 0;
}

int run_predict(const Common& common) {
  const auto sc = Scenario::prepare(common.resolve());
  const std::size_t k = sc.approx.k_count();
  std::cout << "scheme,power_db,k_used,mse_pred\n";
  for (auto scheme : sc.config.schemes)
    for (double p : sc.config.power_db_grid) {
      const double a_c = amplitude_for_power(db_to_linear(p), sc.approx);
      MseBreakdown b;
      switch (scheme) {
        case SweepScheme::dct_ag:
        case SweepScheme::mean_mse_ag: b = predict_agnostic_mean(sc.spectrum, sc.approx, k, a_c, sc.sigma2); break;
        case SweepScheme::dct_nag: b = predict_nonagnostic_mean(sc.spectrum, sc.approx, k); break;
        case SweepScheme::dsb: b = predict_dsb_mean(sc.spectrum, sc.approx, a_c, sc.sigma2); break;
      }
      std::cout << to_string(scheme) << ',' << format_double(p) << ',' << k << ','
                << format_double(b.total() / sc.normalization) << '\n';
    }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"DCT-FM joint communication and computing simulator"};
  app.require_subcommand(1);

  Common approx_opts, demo_opts, sweep_opts, predict_opts;
  auto* approx_cmd = app.add_subcommand("approximate", "DCT coefficient selection for a function");
  approx_opts.attach(approx_cmd);

  auto* demo_cmd = app.add_subcommand("demo", "one trial with a spectrum dump");
  demo_opts.attach(demo_cmd);
  std::string demo_scheme = "dct_ag", spectrum_path = "spectrum.csv";
  std::size_t demo_m = 60;
  double demo_power = 15.0;
  demo_cmd->add_option("--scheme", demo_scheme, "dct_ag | dct_nag | mean_mse_ag")->capture_default_str();
  demo_cmd->add_option("--m", demo_m, "measurement index")->capture_default_str();
  demo_cmd->add_option("--power-db", demo_power, "transmit power in dB")->capture_default_str();
  demo_cmd->add_option("--spectrum", spectrum_path, "output CSV with columns l,r")->capture_default_str();

  auto* sweep_cmd = app.add_subcommand("sweep", "Monte Carlo MSE / detection sweep");
  sweep_opts.attach(sweep_cmd);
  std::optional<std::size_t> sweep_trials;
  std::string sweep_out = "-";
  sweep_cmd->add_option("--trials", sweep_trials, "trials per power point");
  sweep_cmd->add_option("--out", sweep_out, "CSV output path ('-' for stdout)")->capture_default_str();

  auto* predict_cmd = app.add_subcommand("predict", "closed-form mean MSE over the power grid");
  predict_opts.attach(predict_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*approx_cmd) return run_approximate(approx_opts);
    if (*demo_cmd) return run_demo(demo_opts, demo_scheme, demo_m, demo_power, spectrum_path);
    if (*sweep_cmd) return run_sweep_cmd(sweep_opts, sweep_trials, sweep_out);
    if (*predict_cmd) return run_predict(predict_opts);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
