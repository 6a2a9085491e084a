#pragma once

/** @file
 * Fractional Gaussian noise: autocorrelation, distance to white noise and
 * exact simulation by circulant embedding (Davies-Harte).
 */

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "errors.hpp"
#include "toeplitz.hpp"

namespace pcfgn {

/// Reference series length used when tabulating the fGn distance.
inline constexpr std::size_t kDefaultReferenceLength = 1000;

struct FgnParams {
  double hurst = 0.5;
  double precision = 1.0;

  void validate() const {
    if (!(hurst > 0.0 && hurst < 1.0)) {
      throw DomainError("Hurst exponent must lie in (0, 1), got " + std::to_string(hurst));
    }
    if (!(precision > 0.0) || !std::isfinite(precision)) {
      throw DomainError("precision must be positive, got " + std::to_string(precision));
    }
  }
};

namespace detail {

inline void check_hurst(double hurst) {
  if (!(hurst > 0.0 && hurst < 1.0)) {
    throw DomainError("Hurst exponent must lie in (0, 1), got " + std::to_string(hurst));
  }
}

/// 0.5 (|k+1|^{2H} - 2 k^{2H} + |k-1|^{2H}) for k >= 2, written as
/// 0.5 k^{2H} [ ((1+1/k)^{2H} - 1) + ((1-1/k)^{2H} - 1) ] to limit cancellation.
inline double fgn_lag(double hurst, double k) {
  const double two_h = 2.0 * hurst;
  const double x = 1.0 / k;
  const double up = std::expm1(two_h * std::log1p(x));
  const double down = std::expm1(two_h * std::log1p(-x));
  return 0.5 * std::pow(k, two_h) * (up + down);
}

}  // namespace detail

/// Autocorrelation of fGn at lags 0..n-1.
inline CorrelationSequence fgn_autocorrelation(double hurst, std::size_t n) {
  detail::check_hurst(hurst);
  if (n == 0) throw DomainError("series length must be positive");
  std::vector<double> r(n);
  r[0] = 1.0;
  if (n > 1) r[1] = 0.5 * (std::pow(2.0, 2.0 * hurst) - 2.0);
  for (std::size_t k = 2; k < n; ++k) r[k] = detail::fgn_lag(hurst, static_cast<double>(k));
  if (hurst == 0.5) std::fill(r.begin() + 1, r.end(), 0.0);
  return CorrelationSequence(std::move(r));
}

/// d(H) = sqrt(-ln|Sigma_H| / n).
inline double fgn_distance(double hurst, std::size_t n = kDefaultReferenceLength) {
  detail::check_hurst(hurst);
  if (n < 2) throw DomainError("fGn distance needs n >= 2");
  const double logdet = levinson_logdet(fgn_autocorrelation(hurst, n));
  return std::sqrt(std::max(0.0, -logdet / static_cast<double>(n)));
}

/// Limit of d(H) as H -> 0.  The correlation tends to the tridiagonal
/// matrix with off-diagonal -1/2 whose determinant is (n+1) / 2^n, so the
/// distance stays bounded on the anti-persistent side.
inline double fgn_distance_limit_at_zero(std::size_t n = kDefaultReferenceLength) {
  if (n < 2) throw DomainError("fGn distance needs n >= 2");
  const double nd = static_cast<double>(n);
  return std::sqrt(std::log(2.0) - std::log(nd + 1.0) / nd);
}

/// One exact draw from N(0, Sigma_H / precision) of length n.
inline std::vector<double> fgn_sample(const FgnParams& params, std::size_t n, std::uint64_t seed) {
  params.validate();
  if (n == 0) throw DomainError("series length must be positive");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double scale = 1.0 / std::sqrt(params.precision);
  if (n == 1) return {scale * normal(rng)};

  const CorrelationSequence corr = fgn_autocorrelation(params.hurst, n);
  const std::size_t m = 2 * (n - 1);
  std::vector<std::complex<double>> row(m);
  for (std::size_t k = 0; k < n; ++k) row[k] = corr[k];
  for (std::size_t k = n; k < m; ++k) row[k] = corr[m - k];

  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> eig;
  fft.fwd(eig, row);

  const double md = static_cast<double>(m);
  std::vector<std::complex<double>> w(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double lambda = eig[j].real();
    if (lambda < -1e-9) {
      throw EmbeddingFailure("circulant embedding has negative eigenvalue " +
                             std::to_string(lambda) + " at frequency " + std::to_string(j));
    }
  }
  auto root = [&](std::size_t j) { return std::sqrt(std::max(0.0, eig[j].real())); };
  w[0] = root(0) * std::sqrt(1.0 / md) * normal(rng);
  w[m / 2] = root(m / 2) * std::sqrt(1.0 / md) * normal(rng);
  for (std::size_t j = 1; j < m / 2; ++j) {
    const double re = normal(rng);
    const double im = normal(rng);
    w[j] = root(j) * std::sqrt(0.5 / md) * std::complex<double>(re, im);
    w[m - j] = std::conj(w[j]);
  }

  std::vector<std::complex<double>> z;
  fft.fwd(z, w);
  std::vector<double> x(n);
  for (std::size_t k = 0; k < n; ++k) x[k] = scale * z[k].real();
  return x;
}

}  // namespace pcfgn
