#pragma once

/** @file
 * Command-line front end.  `run` parses arguments, dispatches to the
 * prior / fit / compare / simulate workflows and maps failures to exit codes:
 * 0 success, 2 invalid input or configuration, 3 numerical failure.  Error
 * lines start with "error:".
 *
 * Shared settings may come from a flat key=value file given with --config;
 * keys are the long flag names (u, alpha, prec-u, prec-alpha, trend, grid,
 * half-width, seed, threads, out, value-column).  Flags on the command line
 * win over the file.
 */

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <memory>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ar1.hpp"
#include "detail/format.hpp"
#include "errors.hpp"
#include "fgn.hpp"
#include "marginal_likelihood.hpp"
#include "pc_prior.hpp"
#include "simulation.hpp"
#include "timeseries_io.hpp"

namespace pcfgn::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumerical = 3;

/// Shortest series accepted by fit and compare.
inline constexpr std::size_t kMinSeriesLength = 10;

struct RunConfig {
  double u = 0.9;
  double alpha = 0.10;
  double prec_u = 1.0;
  double prec_alpha = 0.01;
  std::string trend = "none";
  std::size_t grid = 61;
  double half_width = 6.0;
  std::uint64_t seed = 1;
  unsigned threads = detail::default_thread_count();
  std::string out = ".";
  std::string value_column;

  void validate() const {
    auto bad = [](const std::string& field, const std::string& why) {
      throw DomainError("config field '" + field + "': " + why);
    };
    if (!(u > 0.5 && u < 1.0)) bad("u", "must lie in (0.5, 1)");
    if (!(alpha > 0.0 && alpha < 0.5)) bad("alpha", "must lie in (0, 0.5)");
    if (!(prec_u > 0.0) || !std::isfinite(prec_u)) bad("prec-u", "must be positive");
    if (!(prec_alpha > 0.0 && prec_alpha < 0.5)) bad("prec-alpha", "must lie in (0, 0.5)");
    if (trend != "none" && trend != "linear") bad("trend", "must be 'none' or 'linear'");
    if (grid < 5) bad("grid", "needs at least 5 nodes per axis");
    if (!(half_width > 0.0)) bad("half-width", "must be positive");
    if (threads < 1) bad("threads", "must be at least 1");
  }

  Trend trend_kind() const { return trend == "linear" ? Trend::Linear : Trend::None; }
  PrecisionPrior precision_prior() const { return PrecisionPrior::from_tail(prec_u, prec_alpha); }
  QuadratureSettings quadrature() const {
    QuadratureSettings q;
    q.grid_points = grid;
    q.half_width_sd = half_width;
    q.threads = threads;
    return q;
  }
};

namespace detail {

using pcfgn::detail::format_double;
using pcfgn::detail::format_fixed;

inline std::filesystem::path output_dir(const RunConfig& cfg) {
  std::filesystem::path dir(cfg.out);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw DomainError("cannot create output directory '" + cfg.out + "'");
  }
  return dir;
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DomainError("cannot write '" + path.string() + "'");
  f << content;
  if (!f) throw DomainError("cannot write '" + path.string() + "'");
}

struct Priors {
  std::shared_ptr<const PcPrior> fgn;
  std::shared_ptr<const PcPrior> ar1;
};

/// Both flexibility priors share the rate calibrated on the fGn scale.
inline Priors shared_rate_priors(const RunConfig& cfg) {
  auto ft = std::make_shared<const DistanceTable>(fgn_distance_table());
  auto at = std::make_shared<const DistanceTable>(ar1_distance_table());
  Priors p;
  p.fgn = std::make_shared<const PcPrior>(fgn_pc_prior(ft, cfg.u, cfg.alpha));
  p.ar1 = std::make_shared<const PcPrior>(ar1_pc_prior(at, p.fgn->rate()));
  return p;
}

struct PreparedSeries {
  TimeSeries series;
  std::vector<double> y;
  bool centered = false;
  double mean_removed = 0.0;
};

inline PreparedSeries prepare_series(const std::string& path, const RunConfig& cfg) {
  PreparedSeries p;
  p.series = read_time_series(path, cfg.value_column, kMinSeriesLength);
  p.y = p.series.values;
  double mean = 0.0;
  for (double v : p.y) mean += v;
  mean /= static_cast<double>(p.y.size());
  double ss = 0.0;
  for (double v : p.y) ss += (v - mean) * (v - mean);
  if (!(ss > 0.0)) throw DomainError("series is constant; there is no noise to model");
  if (cfg.trend_kind() == Trend::None) {
    for (double& v : p.y) v -= mean;
    p.centered = true;
    p.mean_removed = mean;
  }
  return p;
}

inline ModelSpec model_spec(NoiseKind kind, const Priors& priors, const RunConfig& cfg, std::size_t n) {
  auto spec = make_model_spec(kind, kind == NoiseKind::Fgn ? priors.fgn : priors.ar1,
                              cfg.precision_prior(), cfg.trend_kind(), n);
  spec.quadrature = cfg.quadrature();
  return spec;
}

inline nlohmann::ordered_json summary_json(const ParameterSummary& s) {
  nlohmann::ordered_json j;
  j["mean"] = s.mean;
  j["lower_2.5"] = s.lower;
  j["upper_97.5"] = s.upper;
  return j;
}

inline nlohmann::ordered_json config_json(const RunConfig& cfg) {
  nlohmann::ordered_json j;
  j["u"] = cfg.u;
  j["alpha"] = cfg.alpha;
  j["prec_u"] = cfg.prec_u;
  j["prec_alpha"] = cfg.prec_alpha;
  j["trend"] = cfg.trend;
  j["grid"] = cfg.grid;
  j["half_width"] = cfg.half_width;
  j["seed"] = cfg.seed;
  return j;
}

inline nlohmann::ordered_json fit_json(NoiseKind kind, const FitResult& r) {
  nlohmann::ordered_json j;
  j["model"] = std::string(to_string(kind));
  j["log_marginal_likelihood"] = r.log_marginal_likelihood;
  j["mode"] = {{kind == NoiseKind::Fgn ? "H" : "phi", r.mode_theta}, {"log_precision", r.mode_kappa}};
  j[kind == NoiseKind::Fgn ? "H" : "phi"] = summary_json(r.flex);
  j["sigma"] = summary_json(r.sigma);
  if (!r.beta.empty()) {
    nlohmann::ordered_json b = nlohmann::ordered_json::array();
    for (const auto& s : r.beta) b.push_back(summary_json(s));
    j["beta"] = b;
  }
  j["grid_nodes"] = {{"theta", r.theta_nodes}, {"log_precision", r.kappa_nodes}};
  return j;
}

inline std::string interval_text(const ParameterSummary& s) {
  return format_fixed(s.mean, 4) + "  [" + format_fixed(s.lower, 4) + ", " + format_fixed(s.upper, 4) + "]";
}

inline std::string fit_text(NoiseKind kind, const FitResult& r) {
  std::ostringstream os;
  const std::string name = kind == NoiseKind::Fgn ? "fGn" : "AR(1)";
  const std::string par = kind == NoiseKind::Fgn ? "H" : "phi";
  os << name << " model\n";
  os << "  log marginal likelihood  " << format_fixed(r.log_marginal_likelihood, 4) << '\n';
  os << "  " << par << std::string(24 - par.size(), ' ') << interval_text(r.flex) << '\n';
  os << "  sigma                   " << interval_text(r.sigma) << '\n';
  for (std::size_t i = 0; i < r.beta.size(); ++i) {
    os << "  beta" << i << "                   " << interval_text(r.beta[i]) << '\n';
  }
  return os.str();
}

inline std::string series_note(const PreparedSeries& p) {
  std::ostringstream os;
  os << "series: " << p.series.size() << " observations of '" << p.series.value_name << "'";
  if (p.centered) os << ", mean " << format_fixed(p.mean_removed, 6) << " removed";
  os << '\n';
  return os.str();
}

// ---------------------------------------------------------------------------
// commands

inline void cmd_prior(const std::string& kind, double explicit_rate, std::size_t points,
                      const RunConfig& cfg, std::ostream& out) {
  if (points < 10) throw DomainError("config field 'points': needs at least 10 rows");
  const auto dir = output_dir(cfg);
  std::ostringstream param_csv;
  std::ostringstream dist_csv;
  std::ostringstream meta;
  meta << "kind=" << kind << '\n';

  if (kind == "precision") {
    const auto prior = cfg.precision_prior();
    meta << "lambda=" << format_double(prior.rate) << '\n'
         << "prec_u=" << format_double(cfg.prec_u) << '\n'
         << "prec_alpha=" << format_double(cfg.prec_alpha) << '\n';
    // sigma covers all but 1e-6 of the mass on either side
    const double s_hi = std::log(1e6) / prior.rate;
    const double s_lo = 1e-6 / prior.rate;
    const double k_lo = -2.0 * std::log(s_hi);
    const double k_hi = -2.0 * std::log(s_lo);
    param_csv << "log_precision,precision,density_log_precision,density_precision\n";
    dist_csv << "sigma,density\n";
    for (std::size_t i = 0; i < points; ++i) {
      const double k = k_lo + (k_hi - k_lo) * static_cast<double>(i) / static_cast<double>(points - 1);
      const double lp = precision_logprior(k, prior);
      param_csv << format_double(k) << ',' << format_double(std::exp(k)) << ',' << format_double(std::exp(lp))
                << ',' << format_double(std::exp(lp - k)) << '\n';
      const double s = s_hi * static_cast<double>(i) / static_cast<double>(points - 1);
      dist_csv << format_double(s) << ',' << format_double(prior.rate * std::exp(-prior.rate * s)) << '\n';
    }
    meta << "mass_on_grid=" << format_double(std::exp(-prior.rate * s_lo) - std::exp(-prior.rate * s_hi)) << '\n';
    out << "precision prior: lambda = " << format_fixed(prior.rate, 4) << '\n';
  } else if (kind == "fgn" || kind == "ar1") {
    const bool fgn = kind == "fgn";
    auto table = std::make_shared<const DistanceTable>(fgn ? fgn_distance_table() : ar1_distance_table());
    double rate = explicit_rate;
    if (!(rate > 0.0)) {
      // unless given, the rate is calibrated on the fGn scale and shared
      rate = fgn ? calibrate_rate(*table, cfg.u, cfg.alpha)
                 : calibrate_rate(fgn_distance_table(), cfg.u, cfg.alpha);
    }
    const PcPrior prior(table, rate, fgn ? "H" : "phi");
    meta << "lambda=" << format_double(rate) << '\n'
         << "u=" << format_double(cfg.u) << '\n'
         << "alpha=" << format_double(cfg.alpha) << '\n';
    if (fgn) meta << "reference_length=" << kDefaultReferenceLength << '\n';
    meta << "lower_branch_scale=" << format_double(prior.branch_scale(Side::Lower)) << '\n'
         << "upper_branch_scale=" << format_double(prior.branch_scale(Side::Upper)) << '\n';

    const std::string par = fgn ? "H" : "phi";
    param_csv << par << ",density\n";
    // rows uniform in the logit coordinate; AR(1) uses the closed form and
    // reaches to the last representable values before +-1
    const double u_lo = fgn ? table->internal_min() : -36.0;
    const double u_hi = fgn ? table->internal_max() : 36.0;
    // the fGn density jumps at the base point, which gets one row per side
    const double ub = table->base_internal();
    auto base_rows = [&] {
      const double jac = table->jacobian(ub);
      for (Side side : {Side::Lower, Side::Upper}) {
        param_csv << format_double(prior.base_point()) << ','
                  << format_double(prior.density_internal(ub, side) / jac) << '\n';
      }
    };
    double first = 0.0, last = 0.0, prev_u = u_lo;
    for (std::size_t i = 0; i < points; ++i) {
      double u = u_lo + (u_hi - u_lo) * static_cast<double>(i) / static_cast<double>(points - 1);
      if (fgn && std::abs(u - ub) < 1e-9 * (u_hi - u_lo)) u = ub;
      const double theta = table->from_internal(u);
      if (i == 0) first = theta;
      last = theta;
      if (fgn && prev_u < ub && u >= ub) base_rows();
      prev_u = u;
      if (fgn && u == ub) continue;
      const double dens = fgn ? prior.density(theta) : ar1_pc_prior_density(theta, rate);
      param_csv << format_double(theta) << ',' << format_double(dens) << '\n';
    }
    const double mass = fgn ? prior.probability(first, last)
                            : 1.0 - std::exp(-rate * ar1_distance(last));
    meta << "mass_on_grid=" << format_double(mass) << '\n';

    dist_csv << "signed_distance,density," << par << '\n';
    for (const auto& p : induced_distance_density([&](double t) { return prior.density(t); }, *table, true)) {
      dist_csv << format_double(p.distance) << ',' << format_double(p.density) << ',' << format_double(p.theta)
               << '\n';
    }
    out << kind << " PC prior: lambda = " << format_fixed(rate, 4) << '\n';
  } else {
    throw DomainError("prior kind must be fgn, ar1 or precision, not '" + kind + "'");
  }

  write_file(dir / ("prior_" + kind + ".csv"), param_csv.str());
  write_file(dir / ("prior_" + kind + "_distance.csv"), dist_csv.str());
  write_file(dir / ("prior_" + kind + "_meta.txt"), meta.str());
  out << "wrote " << (dir / ("prior_" + kind + ".csv")).string() << ", "
      << (dir / ("prior_" + kind + "_distance.csv")).string() << ", "
      << (dir / ("prior_" + kind + "_meta.txt")).string() << '\n';
}

inline void cmd_fit(const std::string& path, const std::string& model, const RunConfig& cfg, std::ostream& out) {
  if (model != "fgn" && model != "ar1") throw DomainError("model must be fgn or ar1, not '" + model + "'");
  const auto series = prepare_series(path, cfg);
  const auto dir = output_dir(cfg);
  const auto priors = shared_rate_priors(cfg);
  const NoiseKind kind = model == "fgn" ? NoiseKind::Fgn : NoiseKind::Ar1;
  const auto result = fit(series.y, model_spec(kind, priors, cfg, series.y.size()));

  nlohmann::ordered_json j;
  j["config"] = config_json(cfg);
  j["n"] = series.y.size();
  j["centered"] = series.centered;
  j["lambda"] = priors.fgn->rate();
  j["fit"] = fit_json(kind, result);
  const std::string text = series_note(series) + fit_text(kind, result);
  write_file(dir / ("fit_" + model + ".json"), j.dump(2) + "\n");
  write_file(dir / ("fit_" + model + ".txt"), text);
  out << text;
}

inline void cmd_compare(const std::string& path, const RunConfig& cfg, std::ostream& out) {
  const auto series = prepare_series(path, cfg);
  const auto dir = output_dir(cfg);
  const auto priors = shared_rate_priors(cfg);
  const auto fs = model_spec(NoiseKind::Fgn, priors, cfg, series.y.size());
  const auto as = model_spec(NoiseKind::Ar1, priors, cfg, series.y.size());
  check_comparable(fs, as);
  const auto rf = fit(series.y, fs);
  const auto ra = fit(series.y, as);
  const auto bf = make_bayes_factor(rf.log_marginal_likelihood, ra.log_marginal_likelihood);

  nlohmann::ordered_json j;
  j["config"] = config_json(cfg);
  j["n"] = series.y.size();
  j["centered"] = series.centered;
  j["lambda"] = priors.fgn->rate();
  j["bayes_factor"] = {{"log_ml_fgn", bf.log_ml_fgn},
                       {"log_ml_ar1", bf.log_ml_ar1},
                       {"log_bf", bf.log_bf},
                       {"bf", bf.bf},
                       {"evidence", std::string(category_name(bf.category))}};
  j["fgn"] = fit_json(NoiseKind::Fgn, rf);
  j["ar1"] = fit_json(NoiseKind::Ar1, ra);

  std::ostringstream os;
  os << series_note(series);
  os << "Bayes factor, fGn against AR(1)\n"
     << "  log BF    " << format_fixed(bf.log_bf, 4) << '\n'
     << "  BF        " << format_double(bf.bf) << '\n'
     << "  evidence  " << category_name(bf.category) << '\n'
     << fit_text(NoiseKind::Fgn, rf) << fit_text(NoiseKind::Ar1, ra);
  write_file(dir / "compare.json", j.dump(2) + "\n");
  write_file(dir / "compare.txt", os.str());
  out << os.str();
}

inline void cmd_simulate(const std::vector<double>& hurst, const std::vector<std::size_t>& lengths,
                         std::size_t replicates, const RunConfig& cfg, std::ostream& out) {
  SimulationPlan plan;
  if (!hurst.empty()) plan.hurst_values = hurst;
  if (!lengths.empty()) plan.lengths = lengths;
  plan.replicates = replicates;
  plan.base_seed = cfg.seed;
  plan.u = cfg.u;
  plan.alpha = cfg.alpha;
  plan.prec_u = cfg.prec_u;
  plan.prec_alpha = cfg.prec_alpha;
  plan.threads = cfg.threads;
  plan.validate();
  const auto dir = output_dir(cfg);
  const auto report = run_simulation(plan);
  std::ostringstream table;
  table << "fGn replicates with unit variance, lambda = " << format_fixed(report.rate, 4) << ", "
        << replicates << " replicates per cell, seed " << cfg.seed << '\n'
        << report.table();
  write_file(dir / "simulate_summary.csv", report.summary_csv());
  write_file(dir / "simulate_replicates.csv", report.replicates_csv());
  write_file(dir / "simulate_table.txt", table.str());
  out << table.str();
}

}  // namespace detail

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"PC priors for fractional Gaussian noise and AR(1) model comparison", "pcfgn"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "flat key=value settings file");
  app.allow_config_extras(CLI::config_extras_mode::error);

  RunConfig cfg;
  app.add_option("--u", cfg.u, "P(H > u) = alpha calibration point")->capture_default_str();
  app.add_option("--alpha", cfg.alpha, "tail probability of the H prior")->capture_default_str();
  app.add_option("--prec-u", cfg.prec_u, "P(sigma > prec-u) = prec-alpha")->capture_default_str();
  app.add_option("--prec-alpha", cfg.prec_alpha, "tail probability of the precision prior")->capture_default_str();
  app.add_option("--trend", cfg.trend, "none or linear")->capture_default_str();
  app.add_option("--grid", cfg.grid, "quadrature nodes per hyperparameter axis")->capture_default_str();
  app.add_option("--half-width", cfg.half_width, "quadrature half-width in posterior sd")->capture_default_str();
  app.add_option("--seed", cfg.seed, "base seed for simulation")->capture_default_str();
  app.add_option("--threads", cfg.threads, "worker threads");
  app.add_option("--out", cfg.out, "output directory")->capture_default_str();
  app.add_option("--value-column", cfg.value_column, "name of the value column (default: second)");

  std::string prior_kind;
  double prior_rate = 0.0;
  std::size_t prior_points = 2001;
  auto* prior = app.add_subcommand("prior", "tabulate a prior on its own and on the distance scale");
  prior->add_option("kind", prior_kind, "fgn, ar1 or precision")->required();
  prior->add_option("--rate", prior_rate, "explicit distance rate (default: calibrated from u, alpha)");
  prior->add_option("--points", prior_points, "rows in the parameter-scale table")->capture_default_str();

  std::string input;
  std::string model = "fgn";
  auto* fitcmd = app.add_subcommand("fit", "posterior summaries for one noise model");
  fitcmd->add_option("input", input, "CSV with a header, time column first")->required();
  fitcmd->add_option("--model", model, "fgn or ar1")->capture_default_str();

  auto* comparecmd = app.add_subcommand("compare", "Bayes factor of fGn against AR(1)");
  comparecmd->add_option("input", input, "CSV with a header, time column first")->required();

  std::vector<double> sim_hurst;
  std::vector<std::size_t> sim_lengths;
  std::size_t sim_replicates = 1000;
  auto* simcmd = app.add_subcommand("simulate", "Bayes factor study on simulated fGn");
  simcmd->add_option("--hurst", sim_hurst, "Hurst values (default 0.7,0.8,0.9)")->delimiter(',');
  simcmd->add_option("--lengths", sim_lengths, "series lengths (default 100,200,500)")->delimiter(',');
  simcmd->add_option("--replicates", sim_replicates, "replicates per cell")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }

  try {
    cfg.validate();
    if (*prior) {
      detail::cmd_prior(prior_kind, prior_rate, prior_points, cfg, out);
    } else if (*fitcmd) {
      detail::cmd_fit(input, model, cfg, out);
    } else if (*comparecmd) {
      detail::cmd_compare(input, cfg, out);
    } else if (*simcmd) {
      detail::cmd_simulate(sim_hurst, sim_lengths, sim_replicates, cfg, out);
    }
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << '\n'
        << "hint: rescale the series to values of order one, check for near-constant stretches, "
           "or widen the quadrature with --half-width\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitOk;
}

}  // namespace pcfgn::cli
