#pragma once

/** @file
 * First-order autoregressive model x_t = phi x_{t-1} + w_t parameterised
 * by phi and the marginal precision tau = kappa (1 - phi^2), where kappa is
 * the innovation precision.
 */

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "errors.hpp"
#include "toeplitz.hpp"

namespace pcfgn {

struct Ar1Params {
  double phi = 0.0;
  double precision = 1.0;  ///< marginal precision of the stationary process

  double innovation_precision() const { return precision / (1.0 - phi * phi); }

  void validate() const {
    if (!(std::abs(phi) < 1.0)) {
      throw DomainError("AR(1) coefficient must satisfy |phi| < 1, got " + std::to_string(phi));
    }
    if (!(precision > 0.0) || !std::isfinite(precision)) {
      throw DomainError("precision must be positive, got " + std::to_string(precision));
    }
  }
};

namespace detail {
inline void check_phi(double phi) {
  if (!(std::abs(phi) < 1.0)) {
    throw DomainError("AR(1) coefficient must satisfy |phi| < 1, got " + std::to_string(phi));
  }
}
}  // namespace detail

inline CorrelationSequence ar1_autocorrelation(double phi, std::size_t n) {
  detail::check_phi(phi);
  if (n == 0) throw DomainError("series length must be positive");
  std::vector<double> r(n);
  r[0] = 1.0;
  for (std::size_t k = 1; k < n; ++k) r[k] = r[k - 1] * phi;
  return CorrelationSequence(std::move(r));
}

/// d(phi) = sqrt(-ln(1 - phi^2)).
inline double ar1_distance(double phi) {
  detail::check_phi(phi);
  return std::sqrt(-std::log1p(-phi * phi));
}

/// Closed-form PC prior density of phi for exponential rate `rate` on the
/// distance.  The 0/0 at phi = 0 is replaced by its series expansion.
inline double ar1_pc_prior_density(double phi, double rate) {
  detail::check_phi(phi);
  if (!(rate > 0.0)) throw DomainError("rate must be positive");
  const double p2 = phi * phi;
  if (std::abs(phi) < 1e-6) {
    // sqrt(-ln(1-x)) = sqrt(x) (1 + x/4 + ...), so |phi| / ((1-x) d) = 1 + x/4 + O(x^2)
    return 0.5 * rate * std::exp(-rate * std::abs(phi)) * (1.0 + 0.75 * p2);
  }
  const double neg_log = -std::log1p(-p2);
  const double d = std::sqrt(neg_log);
  return 0.5 * rate * std::exp(-rate * d) * std::abs(phi) / ((1.0 - p2) * d);
}

/// Stationary AR(1) draw: x_1 ~ N(0, 1/tau), innovations with variance (1 - phi^2)/tau.
inline std::vector<double> ar1_sample(const Ar1Params& params, std::size_t n, std::uint64_t seed) {
  params.validate();
  if (n == 0) throw DomainError("series length must be positive");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double marginal_sd = 1.0 / std::sqrt(params.precision);
  const double innovation_sd = std::sqrt((1.0 - params.phi * params.phi) / params.precision);
  std::vector<double> x(n);
  x[0] = marginal_sd * normal(rng);
  for (std::size_t t = 1; t < n; ++t) x[t] = params.phi * x[t - 1] + innovation_sd * normal(rng);
  return x;
}

}  // namespace pcfgn
