#pragma once

/** @file
 * Marginal likelihood of a Gaussian regression y = X beta + eps with fGn or
 * AR(1) noise, eps ~ N(0, exp(-kappa) Sigma(theta)), and a vague Gaussian
 * prior beta ~ N(0, I / beta_precision).
 *
 * beta is integrated analytically.  The two hyperparameters, the internal
 * flexibility coordinate u (logit of the rescaled theta) and the
 * log-precision kappa, are integrated numerically on a tensor grid centred
 * at the joint posterior mode.  Every u node costs one Durbin pass; all kappa
 * nodes at that u reuse it.
 */

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "ar1.hpp"
#include "detail/nelder_mead.hpp"
#include "detail/parallel.hpp"
#include "errors.hpp"
#include "fgn.hpp"
#include "pc_prior.hpp"
#include "toeplitz.hpp"

namespace pcfgn {

enum class NoiseKind { Fgn, Ar1 };
enum class Trend { None, Linear };

inline std::string_view to_string(NoiseKind k) { return k == NoiseKind::Fgn ? "fgn" : "ar1"; }
inline std::string_view to_string(Trend t) { return t == Trend::None ? "none" : "linear"; }

struct QuadratureSettings {
  std::size_t grid_points = 61;   ///< nodes per axis
  double half_width_sd = 6.0;     ///< grid half-width in Laplace standard deviations
  double mode_tolerance = 1e-8;   ///< Nelder-Mead convergence tolerance
  std::size_t max_mode_evaluations = 2000;
  double hessian_step = 1e-2;     ///< finite-difference step for the Laplace curvature
  unsigned threads = 1;           ///< workers for grid-node evaluation
};

/// Complete description of one noise model and its hyperpriors.
struct ModelSpec {
  NoiseKind noise = NoiseKind::Fgn;
  std::shared_ptr<const PcPrior> flex_prior;
  PrecisionPrior prec_prior = PrecisionPrior::from_tail(1.0, 0.01);
  Trend trend = Trend::None;
  Eigen::MatrixXd design;  ///< n x p regression design, empty unless trend is linear
  double beta_precision = 1e-6;
  QuadratureSettings quadrature;

  void validate(std::size_t n) const {
    if (!flex_prior) throw DomainError("model spec has no prior for the flexibility parameter");
    const std::string_view expected = noise == NoiseKind::Fgn ? "H" : "phi";
    if (flex_prior->parameter_name() != expected) {
      throw DomainError("flexibility prior is for '" + flex_prior->parameter_name() +
                        "' but the noise model needs '" + std::string(expected) + "'");
    }
    if (trend == Trend::None && design.size() != 0) {
      throw DomainError("a design matrix is only allowed with a linear trend");
    }
    if (trend == Trend::Linear) {
      if (design.cols() == 0) throw DomainError("linear trend needs a design matrix");
      if (static_cast<std::size_t>(design.rows()) != n) {
        throw DimensionMismatch("design has " + std::to_string(design.rows()) +
                                " rows but the series has " + std::to_string(n));
      }
      Eigen::FullPivHouseholderQR<Eigen::MatrixXd> qr(design);
      if (qr.rank() < design.cols()) throw DomainError("design columns are linearly dependent");
    }
    if (!(beta_precision > 0.0)) throw DomainError("beta_precision must be positive");
    if (quadrature.grid_points < 5) throw DomainError("quadrature needs at least 5 nodes per axis");
  }
};

/// Intercept and time columns t = 1..n.
inline Eigen::MatrixXd linear_design(std::size_t n) {
  Eigen::MatrixXd x(static_cast<Eigen::Index>(n), 2);
  for (Eigen::Index t = 0; t < x.rows(); ++t) {
    x(t, 0) = 1.0;
    x(t, 1) = static_cast<double>(t + 1);
  }
  return x;
}

inline ModelSpec make_model_spec(NoiseKind noise, std::shared_ptr<const PcPrior> flex_prior,
                                 PrecisionPrior prec_prior, Trend trend, std::size_t n) {
  ModelSpec spec;
  spec.noise = noise;
  spec.flex_prior = std::move(flex_prior);
  spec.prec_prior = prec_prior;
  spec.trend = trend;
  if (trend == Trend::Linear) spec.design = linear_design(n);
  return spec;
}

inline CorrelationSequence noise_correlation(NoiseKind kind, double theta, std::size_t n) {
  return kind == NoiseKind::Fgn ? fgn_autocorrelation(theta, n) : ar1_autocorrelation(theta, n);
}

namespace detail {

inline constexpr double kLogTwoPi = 1.8378770664093454836;

/// Toeplitz statistics of the data at one value of the flexibility parameter.
struct Slice {
  double theta = 0.0;
  double logdet = 0.0;
  Eigen::MatrixXd gram;  ///< [y X]' Sigma^{-1} [y X]
};

/// Conditional quantities at one (theta, kappa).
struct Conditional {
  double loglik;
  Eigen::VectorXd beta_mean;
  Eigen::VectorXd beta_var;  ///< marginal variances of the conditional beta posterior
};

class Evaluator {
 public:
  Evaluator(std::span<const double> y, const ModelSpec& spec) : spec_(spec) {
    const auto n = static_cast<Eigen::Index>(y.size());
    const Eigen::Index p = spec.trend == Trend::Linear ? spec.design.cols() : 0;
    columns_.resize(n, 1 + p);
    for (Eigen::Index t = 0; t < n; ++t) columns_(t, 0) = y[static_cast<std::size_t>(t)];
    if (p > 0) columns_.rightCols(p) = spec.design;
  }

  std::size_t n() const { return static_cast<std::size_t>(columns_.rows()); }
  Eigen::Index p() const { return columns_.cols() - 1; }
  const Eigen::MatrixXd& columns() const { return columns_; }

  Slice slice(double theta) const {
    WhitenedGram wg = whitened_gram(noise_correlation(spec_.noise, theta, n()), columns_);
    return {theta, wg.logdet, std::move(wg.gram)};
  }

  Conditional conditional(const Slice& s, double kappa, bool want_beta) const {
    const double nd = static_cast<double>(n());
    const double scale = std::exp(kappa);
    double ll = -0.5 * nd * kLogTwoPi + 0.5 * nd * kappa - 0.5 * s.logdet -
                0.5 * scale * s.gram(0, 0);
    Conditional out{ll, {}, {}};
    const Eigen::Index p = this->p();
    if (p == 0) return out;
    const double b = spec_.beta_precision;
    Eigen::MatrixXd a = scale * s.gram.bottomRightCorner(p, p);
    a.diagonal().array() += b;
    const Eigen::VectorXd rhs = scale * s.gram.bottomLeftCorner(p, 1);
    const Eigen::LLT<Eigen::MatrixXd> llt(a);
    if (llt.info() != Eigen::Success) {
      throw NotPositiveDefinite("regression posterior precision is not positive definite");
    }
    const Eigen::VectorXd m = llt.solve(rhs);
    const Eigen::MatrixXd l = llt.matrixL();
    const double logdet_a = 2.0 * l.diagonal().array().log().sum();
    out.loglik += 0.5 * rhs.dot(m) - 0.5 * logdet_a + 0.5 * static_cast<double>(p) * std::log(b);
    if (want_beta) {
      out.beta_mean = m;
      out.beta_var = llt.solve(Eigen::MatrixXd::Identity(p, p)).diagonal();
    }
    return out;
  }

 private:
  const ModelSpec& spec_;
  Eigen::MatrixXd columns_;
};

inline double log_sum_exp(std::span<const double> v) {
  double m = -std::numeric_limits<double>::infinity();
  for (double x : v) m = std::max(m, x);
  if (!std::isfinite(m)) return m;
  double acc = 0.0;
  for (double x : v) acc += std::exp(x - m);
  return m + std::log(acc);
}

}  // namespace detail

/// Exact log density of y given (theta, kappa) with beta integrated out.
inline double log_likelihood_given_hyper(std::span<const double> y, const ModelSpec& spec,
                                         double theta, double kappa) {
  if (y.size() < 2) throw DomainError("series must have at least two observations");
  spec.validate(y.size());
  if (!std::isfinite(kappa)) throw DomainError("log-precision must be finite");
  const detail::Evaluator ev(y, spec);
  return ev.conditional(ev.slice(theta), kappa, false).loglik;
}

struct ParameterSummary {
  double mean = 0.0;
  double lower = 0.0;  ///< 2.5% posterior quantile
  double upper = 0.0;  ///< 97.5% posterior quantile
};

/// Posterior on the quadrature grid and everything derived from it.
struct FitResult {
  double log_marginal_likelihood = 0.0;
  double mode_theta = 0.0;
  double mode_kappa = 0.0;
  ParameterSummary flex;              ///< H for fGn, phi for AR(1)
  ParameterSummary sigma;             ///< marginal standard deviation exp(-kappa/2)
  std::vector<ParameterSummary> beta; ///< regression coefficients (intercept, slope)
  std::size_t theta_nodes = 0;
  std::size_t kappa_nodes = 0;
};

namespace detail {

struct AxisNode {
  double u;
  double weight;
  Side side;
};

/// Composite Simpson nodes on [a, b] with an even number of intervals.
inline void simpson_nodes(double a, double b, std::size_t intervals, Side side,
                          std::vector<AxisNode>& out) {
  intervals = std::max<std::size_t>(2, intervals + (intervals % 2));
  const double h = (b - a) / static_cast<double>(intervals);
  for (std::size_t i = 0; i <= intervals; ++i) {
    const double w = (i == 0 || i == intervals) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    out.push_back({a + h * static_cast<double>(i), w * h / 3.0, side});
  }
}

/// Weighted quantile of a density tabulated at increasing abscissae, by the
/// trapezoid cumulative distribution and linear inversion.
inline double tabulated_quantile(const std::vector<double>& x, const std::vector<double>& dens,
                                 double q) {
  std::vector<double> cdf(x.size(), 0.0);
  for (std::size_t i = 1; i < x.size(); ++i) {
    cdf[i] = cdf[i - 1] + 0.5 * (dens[i] + dens[i - 1]) * (x[i] - x[i - 1]);
  }
  const double total = cdf.back();
  if (!(total > 0.0)) return x[x.size() / 2];
  const double target = q * total;
  for (std::size_t i = 1; i < x.size(); ++i) {
    if (cdf[i] >= target && cdf[i] > cdf[i - 1]) {
      const double t = (target - cdf[i - 1]) / (cdf[i] - cdf[i - 1]);
      return x[i - 1] + t * (x[i] - x[i - 1]);
    }
  }
  return x.back();
}

inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

}  // namespace detail

/// Integrates the posterior over (u, kappa) and summarises it.
inline FitResult fit(std::span<const double> y, const ModelSpec& spec) {
  if (y.size() < 2) throw DomainError("series must have at least two observations");
  spec.validate(y.size());
  for (double v : y) {
    if (!std::isfinite(v)) throw DomainError("series contains a non-finite value");
  }
  const QuadratureSettings& q = spec.quadrature;
  const PcPrior& prior = *spec.flex_prior;
  const DistanceTable& table = prior.table();
  const detail::Evaluator ev(y, spec);
  const double u_min = table.internal_min();
  const double u_max = table.internal_max();
  const double u_base = table.base_internal();

  // ---- mode search -------------------------------------------------------
  // The slice of the latest u is cached: moves in kappa alone are free.
  detail::Slice cached;
  double cached_u = std::numeric_limits<double>::quiet_NaN();
  auto slice_at = [&](double u) -> const detail::Slice& {
    if (u != cached_u) {
      cached = ev.slice(table.from_internal(u));
      cached_u = u;
    }
    return cached;
  };
  auto smooth_logpost = [&](double u, double kappa) {
    return ev.conditional(slice_at(u), kappa, false).loglik +
           precision_logprior(kappa, spec.prec_prior);
  };
  auto neg_logpost = [&](const std::array<double, 2>& x) {
    if (!(x[0] >= u_min && x[0] <= u_max) || !std::isfinite(x[1])) return HUGE_VAL;
    return -(smooth_logpost(x[0], x[1]) + prior.log_density_internal(x[0], x[0] < u_base ? Side::Lower : Side::Upper));
  };

  double scale2 = 0.0;
  {
    Eigen::VectorXd resid = ev.columns().col(0);
    if (ev.p() > 0) {
      const Eigen::MatrixXd x = ev.columns().rightCols(ev.p());
      resid -= x * x.colPivHouseholderQr().solve(resid);
    }
    scale2 = resid.squaredNorm() / static_cast<double>(resid.size());
  }
  const double kappa0 = -std::log(std::max(scale2, 1e-300));
  auto nm = detail::nelder_mead(neg_logpost, {u_base, kappa0}, {0.5, 0.5}, q.mode_tolerance,
                                q.max_mode_evaluations);
  auto restart = detail::nelder_mead(neg_logpost, nm.x, {0.1, 0.1}, q.mode_tolerance,
                                     q.max_mode_evaluations);
  if (restart.value < nm.value) nm = restart;
  if (!std::isfinite(nm.value)) {
    throw QuadratureNonFinite("posterior mode search failed: log posterior is not finite");
  }
  const double u_mode = nm.x[0];
  const double k_mode = nm.x[1];

  // ---- Laplace scales from the smooth part --------------------------------
  const double h = q.hessian_step;
  double sd_u = u_max - u_min;
  double sd_k = 1.0;
  {
    const double um = std::clamp(u_mode, u_min + h, u_max - h);
    double f[3][3];
    for (int i = 0; i < 3; ++i) {
      const double uu = um + (i - 1) * h;
      for (int j = 0; j < 3; ++j) f[i][j] = smooth_logpost(uu, k_mode + (j - 1) * h);
    }
    const double fuu = (f[2][1] - 2 * f[1][1] + f[0][1]) / (h * h);
    const double fkk = (f[1][2] - 2 * f[1][1] + f[1][0]) / (h * h);
    const double fuk = (f[2][2] - f[2][0] - f[0][2] + f[0][0]) / (4 * h * h);
    const double nuu = -fuu, nkk = -fkk, nuk = -fuk;
    const double det = nuu * nkk - nuk * nuk;
    if (std::isfinite(det) && nuu > 0 && nkk > 0 && det > 0) {
      sd_u = std::sqrt(nkk / det);
      sd_k = std::sqrt(nuu / det);
    } else if (std::isfinite(nkk) && nkk > 0) {
      sd_k = 1.0 / std::sqrt(nkk);
    }
  }

  // ---- grid ---------------------------------------------------------------
  const double w = q.half_width_sd;
  const double ulo = std::max(u_min, u_mode - w * sd_u);
  const double uhi = std::min(u_max, u_mode + w * sd_u);
  const std::size_t intervals = q.grid_points - 1;
  std::vector<detail::AxisNode> unodes;
  if (u_base > ulo && u_base < uhi) {
    const double frac = (u_base - ulo) / (uhi - ulo);
    auto left = static_cast<std::size_t>(std::lround(frac * static_cast<double>(intervals)));
    left = std::clamp<std::size_t>(left, 2, intervals - 2);
    detail::simpson_nodes(ulo, u_base, left, Side::Lower, unodes);
    detail::simpson_nodes(u_base, uhi, intervals - left, Side::Upper, unodes);
  } else {
    detail::simpson_nodes(ulo, uhi, intervals, uhi <= u_base ? Side::Lower : Side::Upper, unodes);
  }
  const std::size_t nk = q.grid_points;
  std::vector<double> kappas(nk), kweights(nk);
  const double klo = k_mode - w * sd_k;
  const double khi = k_mode + w * sd_k;
  const double hk = (khi - klo) / static_cast<double>(nk - 1);
  for (std::size_t j = 0; j < nk; ++j) {
    kappas[j] = klo + hk * static_cast<double>(j);
    kweights[j] = (j == 0 || j + 1 == nk) ? 0.5 * hk : hk;
  }

  const std::size_t nu = unodes.size();
  std::vector<double> logpost(nu * nk);
  const bool want_beta = ev.p() > 0;
  const Eigen::Index p = ev.p();
  std::vector<Eigen::VectorXd> bmean(want_beta ? nu * nk : 0);
  std::vector<Eigen::VectorXd> bvar(want_beta ? nu * nk : 0);
  std::vector<double> thetas(nu);

  detail::parallel_for(
      nu,
      [&](std::size_t i) {
        const detail::AxisNode& node = unodes[i];
        const double theta = table.from_internal(node.u);
        thetas[i] = theta;
        const detail::Slice s = ev.slice(theta);
        const double lp_u = prior.log_density_internal(node.u, node.side);
        for (std::size_t j = 0; j < nk; ++j) {
          detail::Conditional c = ev.conditional(s, kappas[j], want_beta);
          const double v = c.loglik + lp_u + precision_logprior(kappas[j], spec.prec_prior);
          if (std::isnan(v) || v == HUGE_VAL) {
            throw QuadratureNonFinite("log posterior not finite at theta=" +
                                      std::to_string(theta) + ", kappa=" +
                                      std::to_string(kappas[j]));
          }
          logpost[i * nk + j] = v;
          if (want_beta) {
            bmean[i * nk + j] = std::move(c.beta_mean);
            bvar[i * nk + j] = std::move(c.beta_var);
          }
        }
      },
      q.threads);

  std::vector<double> terms(nu * nk);
  for (std::size_t i = 0; i < nu; ++i) {
    for (std::size_t j = 0; j < nk; ++j) {
      terms[i * nk + j] = logpost[i * nk + j] + std::log(unodes[i].weight * kweights[j]);
    }
  }
  const double log_ml = detail::log_sum_exp(terms);
  if (!std::isfinite(log_ml)) throw QuadratureNonFinite("marginal likelihood is not finite");

  FitResult out;
  out.log_marginal_likelihood = log_ml;
  out.mode_theta = table.from_internal(u_mode);
  out.mode_kappa = k_mode;
  out.theta_nodes = nu;
  out.kappa_nodes = nk;

  // posterior weights of every node, normalised
  std::vector<double> weight(nu * nk);
  for (std::size_t k = 0; k < terms.size(); ++k) weight[k] = std::exp(terms[k] - log_ml);

  // flexibility parameter: marginal density in u (per unit u), integrate over kappa
  {
    std::vector<double> ux, dens;
    double mean = 0.0, mass = 0.0;
    for (std::size_t i = 0; i < nu; ++i) {
      double m = 0.0;
      for (std::size_t j = 0; j < nk; ++j) m += weight[i * nk + j];
      mean += m * thetas[i];
      mass += m;
      if (!ux.empty() && unodes[i].u == ux.back()) continue;  // duplicated base node
      ux.push_back(unodes[i].u);
      dens.push_back(m / unodes[i].weight);
    }
    out.flex.mean = mean / mass;
    out.flex.lower = table.from_internal(detail::tabulated_quantile(ux, dens, 0.025));
    out.flex.upper = table.from_internal(detail::tabulated_quantile(ux, dens, 0.975));
  }
  // sigma = exp(-kappa / 2)
  {
    std::vector<double> dens(nk, 0.0);
    double mean = 0.0, mass = 0.0;
    for (std::size_t j = 0; j < nk; ++j) {
      double m = 0.0;
      for (std::size_t i = 0; i < nu; ++i) m += weight[i * nk + j];
      mean += m * std::exp(-0.5 * kappas[j]);
      mass += m;
      dens[j] = m / kweights[j];
    }
    out.sigma.mean = mean / mass;
    out.sigma.lower = std::exp(-0.5 * detail::tabulated_quantile(kappas, dens, 0.975));
    out.sigma.upper = std::exp(-0.5 * detail::tabulated_quantile(kappas, dens, 0.025));
  }
  // regression coefficients: mixture of the conditional Gaussians
  if (want_beta) {
    const double wmax = *std::max_element(weight.begin(), weight.end());
    std::vector<std::size_t> active;
    double wsum = 0.0;
    for (std::size_t k = 0; k < weight.size(); ++k) {
      if (weight[k] > 1e-14 * wmax) {
        active.push_back(k);
        wsum += weight[k];
      }
    }
    for (Eigen::Index c = 0; c < p; ++c) {
      double mean = 0.0, lo = HUGE_VAL, hi = -HUGE_VAL;
      for (std::size_t k : active) {
        const double m = bmean[k](c);
        const double s = std::sqrt(bvar[k](c));
        mean += weight[k] * m;
        lo = std::min(lo, m - 12.0 * s);
        hi = std::max(hi, m + 12.0 * s);
      }
      mean /= wsum;
      auto cdf = [&](double x) {
        double acc = 0.0;
        for (std::size_t k : active) {
          acc += weight[k] * detail::normal_cdf((x - bmean[k](c)) / std::sqrt(bvar[k](c)));
        }
        return acc / wsum;
      };
      auto quantile = [&](double target) {
        double a = lo, b = hi;
        for (int it = 0; it < 100 && b - a > 1e-12 * (1.0 + std::abs(a)); ++it) {
          const double mid = 0.5 * (a + b);
          (cdf(mid) < target ? a : b) = mid;
        }
        return 0.5 * (a + b);
      };
      out.beta.push_back({mean, quantile(0.025), quantile(0.975)});
    }
  }
  return out;
}

/// log of the integral of L(y | theta, kappa) pi(theta) pi(kappa).
inline double log_marginal_likelihood(std::span<const double> y, const ModelSpec& spec) {
  return fit(y, spec).log_marginal_likelihood;
}

inline FitResult posterior_summaries(std::span<const double> y, const ModelSpec& spec) {
  return fit(y, spec);
}

// ---------------------------------------------------------------------------
// Bayes factor

/// Evidence strength bins for a Bayes factor in favour of the first model.
enum class EvidenceCategory { False, NoConclusion, Positive, Strong, VeryStrong };

inline constexpr std::array<EvidenceCategory, 5> kAllCategories = {
    EvidenceCategory::False, EvidenceCategory::NoConclusion, EvidenceCategory::Positive,
    EvidenceCategory::Strong, EvidenceCategory::VeryStrong};

/// Boundary values go to the weaker-evidence bin.
inline EvidenceCategory categorize(double bf) {
  if (std::isnan(bf) || bf < 0.0) throw DomainError("Bayes factor must be a non-negative number");
  if (bf < 1.0 / 3.0) return EvidenceCategory::False;
  if (bf <= 3.0) return EvidenceCategory::NoConclusion;
  if (bf <= 20.0) return EvidenceCategory::Positive;
  if (bf <= 150.0) return EvidenceCategory::Strong;
  return EvidenceCategory::VeryStrong;
}

inline std::string_view category_name(EvidenceCategory c) {
  switch (c) {
    case EvidenceCategory::False: return "False";
    case EvidenceCategory::NoConclusion: return "No conclusion";
    case EvidenceCategory::Positive: return "Positive";
    case EvidenceCategory::Strong: return "Strong";
    case EvidenceCategory::VeryStrong: return "Very strong";
  }
  return "?";
}

struct BayesFactorResult {
  double log_ml_fgn = 0.0;  ///< log marginal likelihood of the first model
  double log_ml_ar1 = 0.0;  ///< log marginal likelihood of the second model
  double log_bf = 0.0;
  double bf = 1.0;
  EvidenceCategory category = EvidenceCategory::NoConclusion;
};

inline BayesFactorResult make_bayes_factor(double log_ml_first, double log_ml_second) {
  BayesFactorResult r;
  r.log_ml_fgn = log_ml_first;
  r.log_ml_ar1 = log_ml_second;
  r.log_bf = log_ml_first - log_ml_second;
  r.bf = std::exp(r.log_bf);
  r.category = categorize(r.bf);
  return r;
}

/// Throws MismatchedPriors unless both models share the precision prior, the
/// distance rate and the regression part.
inline void check_comparable(const ModelSpec& a, const ModelSpec& b) {
  if (!a.flex_prior || !b.flex_prior) throw DomainError("model spec has no flexibility prior");
  const double ra = a.flex_prior->rate();
  const double rb = b.flex_prior->rate();
  if (std::abs(ra - rb) > 1e-12 * std::max(ra, rb)) {
    throw MismatchedPriors("models use different distance rates (" + std::to_string(ra) +
                           " vs " + std::to_string(rb) + ")");
  }
  if (!(a.prec_prior == b.prec_prior)) {
    throw MismatchedPriors("models use different precision priors");
  }
  if (a.trend != b.trend || a.design.rows() != b.design.rows() ||
      a.design.cols() != b.design.cols() || a.design != b.design ||
      a.beta_precision != b.beta_precision) {
    throw MismatchedPriors("models use different regression designs or coefficient priors");
  }
}

/// Bayes factor of `first` over `second` (conventionally fGn over AR(1)).
inline BayesFactorResult compare(std::span<const double> y, const ModelSpec& first,
                                 const ModelSpec& second) {
  check_comparable(first, second);
  return make_bayes_factor(log_marginal_likelihood(y, first), log_marginal_likelihood(y, second));
}

}  // namespace pcfgn
