#pragma once

/** @file
 * Monte Carlo study of how often the Bayes factor identifies fGn against
 * AR(1) when the data really are unit-variance fGn.  Every (H, n, replicate)
 * draw has its own seed, so cells and replicates can run in any order or
 * concurrently and still give identical reports.
 */

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <limits>
#include <memory>
#include <mutex>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "detail/format.hpp"
#include "detail/parallel.hpp"
#include "errors.hpp"
#include "fgn.hpp"
#include "marginal_likelihood.hpp"
#include "pc_prior.hpp"

namespace pcfgn {

struct SimulationPlan {
  std::vector<double> hurst_values{0.7, 0.8, 0.9};
  std::vector<std::size_t> lengths{100, 200, 500};
  std::size_t replicates = 1000;
  std::uint64_t base_seed = 1;
  double u = 0.9;            ///< tail calibration P(H > u) = alpha
  double alpha = 0.10;
  double prec_u = 1.0;       ///< P(sigma > prec_u) = prec_alpha
  double prec_alpha = 0.01;
  bool center = true;        ///< subtract the sample mean before fitting zero-mean models
  unsigned threads = detail::default_thread_count();

  void validate() const {
    if (hurst_values.empty() || lengths.empty()) throw DomainError("simulation plan has no cells");
    for (double h : hurst_values) {
      if (!(h > 0.0 && h < 1.0)) throw DomainError("simulation Hurst value must lie in (0, 1)");
    }
    for (std::size_t n : lengths) {
      if (n < 2) throw DomainError("simulation series length must be at least 2");
    }
    if (replicates < 1) throw DomainError("simulation needs at least one replicate");
    if (!(u > 0.5 && u < 1.0)) throw DomainError("H tail point must lie in (0.5, 1)");
    if (!(alpha > 0.0 && alpha < 0.5)) throw DomainError("H tail probability must lie in (0, 0.5)");
    if (!(prec_u > 0.0)) throw DomainError("precision tail point must be positive");
    if (!(prec_alpha > 0.0 && prec_alpha < 1.0)) throw DomainError("precision tail probability must lie in (0, 1)");
  }
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace detail

/// seed = base XOR mix(H, n, r) with splitmix64 chained over the three keys.
inline std::uint64_t replicate_seed(std::uint64_t base_seed, double hurst, std::size_t n,
                                    std::size_t replicate) {
  std::uint64_t h = detail::splitmix64(std::bit_cast<std::uint64_t>(hurst));
  h = detail::splitmix64(h ^ static_cast<std::uint64_t>(n));
  h = detail::splitmix64(h ^ static_cast<std::uint64_t>(replicate));
  return base_seed ^ h;
}

struct ReplicateOutcome {
  std::uint64_t seed = 0;
  bool failed = false;
  double log_bf = std::numeric_limits<double>::quiet_NaN();
  EvidenceCategory category = EvidenceCategory::NoConclusion;
  std::string error;  ///< message of the failure, empty on success
};

struct CellResult {
  double hurst = 0.0;
  std::size_t n = 0;
  std::array<std::size_t, 5> counts{};
  std::size_t failures = 0;
  std::vector<ReplicateOutcome> replicates;

  std::size_t successes() const {
    std::size_t s = 0;
    for (std::size_t c : counts) s += c;
    return s;
  }
  /// Proportion in each bin among replicates that did not fail.
  std::array<double, 5> proportions() const {
    std::array<double, 5> p{};
    const std::size_t s = successes();
    for (std::size_t i = 0; i < 5; ++i) {
      p[i] = s == 0 ? std::numeric_limits<double>::quiet_NaN()
                    : static_cast<double>(counts[i]) / static_cast<double>(s);
    }
    return p;
  }
  double proportion(EvidenceCategory c) const { return proportions()[static_cast<std::size_t>(c)]; }
  double bf_gt_3() const {
    const std::size_t s = successes();
    if (s == 0) return std::numeric_limits<double>::quiet_NaN();
    return static_cast<double>(counts[2] + counts[3] + counts[4]) / static_cast<double>(s);
  }
};

struct SimulationReport {
  SimulationPlan plan;
  double rate = 0.0;  ///< shared distance rate of both flexibility priors
  std::vector<CellResult> cells;

  const CellResult& cell(double hurst, std::size_t n) const {
    for (const auto& c : cells) {
      if (c.hurst == hurst && c.n == n) return c;
    }
    throw DomainError("report has no cell for H=" + detail::format_double(hurst) +
                      " n=" + std::to_string(n));
  }

  /// One row per cell: H, n, five proportions, BF>3, failures.
  std::string summary_csv() const {
    std::ostringstream os;
    os << "H,n,replicates,false,no_conclusion,positive,strong,very_strong,bf_gt_3,failures\n";
    for (const auto& c : cells) {
      os << detail::format_double(c.hurst) << ',' << c.n << ',' << c.replicates.size();
      for (double p : c.proportions()) os << ',' << detail::format_double(p);
      os << ',' << detail::format_double(c.bf_gt_3()) << ',' << c.failures << '\n';
    }
    return os.str();
  }

  /// One row per replicate with its seed and log Bayes factor.
  std::string replicates_csv() const {
    std::ostringstream os;
    os << "H,n,replicate,seed,log_bf,category,error\n";
    for (const auto& c : cells) {
      for (std::size_t r = 0; r < c.replicates.size(); ++r) {
        const auto& o = c.replicates[r];
        os << detail::format_double(c.hurst) << ',' << c.n << ',' << r << ',' << o.seed << ',';
        if (o.failed) {
          os << "nan,failed,\"";
          for (char ch : o.error) os << (ch == '"' ? '\'' : ch);
          os << "\"\n";
        } else {
          os << detail::format_double(o.log_bf) << ',' << category_name(o.category) << ",\n";
        }
      }
    }
    return os.str();
  }

  /// Fixed-width table, one row per cell.
  std::string table() const {
    std::ostringstream os;
    os << "   n     H   False  No concl.  Positive   Strong  V. strong   BF>3  failed\n";
    for (const auto& c : cells) {
      char line[160];
      const auto p = c.proportions();
      std::snprintf(line, sizeof line, "%4zu  %4s  %6s  %9s  %8s  %7s  %9s  %5s  %6zu\n", c.n,
                    detail::format_fixed(c.hurst, 1).c_str(), detail::format_fixed(p[0], 3).c_str(),
                    detail::format_fixed(p[1], 3).c_str(), detail::format_fixed(p[2], 3).c_str(),
                    detail::format_fixed(p[3], 3).c_str(), detail::format_fixed(p[4], 3).c_str(),
                    detail::format_fixed(c.bf_gt_3(), 3).c_str(), c.failures);
      os << line;
    }
    return os.str();
  }
};

/// Bayes factor of one simulated series.
using ReplicateEvaluator = std::function<BayesFactorResult(std::span<const double>)>;
using ProgressCallback = std::function<void(std::size_t done, std::size_t total)>;

/// Runs every (H, n, replicate) job through `evaluate`.  A replicate whose
/// evaluation throws pcfgn::Error is recorded as failed and left out of the
/// proportions.  Cells are ordered by n, then H.
inline SimulationReport run_simulation(const SimulationPlan& plan, const ReplicateEvaluator& evaluate,
                                       double rate, const ProgressCallback& progress = {}) {
  plan.validate();
  SimulationReport report;
  report.plan = plan;
  report.rate = rate;
  for (std::size_t n : plan.lengths) {
    for (double h : plan.hurst_values) {
      CellResult c;
      c.hurst = h;
      c.n = n;
      c.replicates.resize(plan.replicates);
      report.cells.push_back(std::move(c));
    }
  }

  const std::size_t total = report.cells.size() * plan.replicates;
  std::mutex progress_mutex;
  std::size_t done = 0;
  detail::parallel_for(
      total,
      [&](std::size_t job) {
        CellResult& cell = report.cells[job / plan.replicates];
        const std::size_t r = job % plan.replicates;
        ReplicateOutcome& out = cell.replicates[r];
        out.seed = replicate_seed(plan.base_seed, cell.hurst, cell.n, r);
        try {
          auto y = fgn_sample({cell.hurst, 1.0}, cell.n, out.seed);
          if (plan.center) {
            double mean = 0.0;
            for (double v : y) mean += v;
            mean /= static_cast<double>(y.size());
            for (double& v : y) v -= mean;
          }
          const auto bf = evaluate(y);
          out.log_bf = bf.log_bf;
          out.category = bf.category;
        } catch (const Error& e) {
          out.failed = true;
          out.error = e.what();
        }
        if (progress) {
          std::lock_guard<std::mutex> lock(progress_mutex);
          progress(++done, total);
        }
      },
      plan.threads);

  for (auto& c : report.cells) {
    for (const auto& o : c.replicates) {
      if (o.failed) {
        ++c.failures;
      } else {
        ++c.counts[static_cast<std::size_t>(o.category)];
      }
    }
  }
  return report;
}

/// fGn against AR(1) with the shared-rate PC priors of the plan.
inline SimulationReport run_simulation(const SimulationPlan& plan,
                                       std::shared_ptr<const DistanceTable> fgn_table = nullptr,
                                       std::shared_ptr<const DistanceTable> ar1_table = nullptr,
                                       const ProgressCallback& progress = {}) {
  plan.validate();
  if (!fgn_table) fgn_table = std::make_shared<const DistanceTable>(fgn_distance_table());
  if (!ar1_table) ar1_table = std::make_shared<const DistanceTable>(ar1_distance_table());
  auto fgn_prior = std::make_shared<const PcPrior>(fgn_pc_prior(fgn_table, plan.u, plan.alpha));
  auto ar1_prior = std::make_shared<const PcPrior>(ar1_pc_prior(ar1_table, fgn_prior->rate()));
  const auto prec = PrecisionPrior::from_tail(plan.prec_u, plan.prec_alpha);
  auto evaluate = [&](std::span<const double> y) {
    const auto fs = make_model_spec(NoiseKind::Fgn, fgn_prior, prec, Trend::None, y.size());
    const auto as = make_model_spec(NoiseKind::Ar1, ar1_prior, prec, Trend::None, y.size());
    return compare(y, fs, as);
  };
  return run_simulation(plan, evaluate, fgn_prior->rate(), progress);
}

}  // namespace pcfgn
