#pragma once

/** @file
 * Exact O(n^2) algebra for symmetric positive-definite Toeplitz correlation
 * matrices, built on the Durbin recursion.
 *
 * For a correlation sequence r(0) = 1, r(1), ..., r(n-1) the recursion
 * produces, for every order k, the coefficients y^(k) of the order-k
 * backward/forward predictor and the innovation variance beta_k.  These
 * give the log-determinant as sum_k ln(beta_k), general solves through the
 * Levinson extension, and whitened cross products through the innovation
 * (inverse Cholesky) representation
 * \f[
 *     e_k(v) = v_k + \sum_{j=1}^{k} y^{(k)}_j v_{k-j}, \qquad
 *     u^T \Sigma^{-1} w = \sum_k e_k(u) e_k(w) / \beta_k .
 * \f]
 */

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "errors.hpp"

namespace pcfgn {

/// Innovation variances at or below this value (relative to r(0) = 1) mean
/// the sequence is not a valid positive-definite correlation.
inline constexpr double kInnovationTolerance = 1e-12;

/// Lag-indexed autocorrelations r(0..n-1) of a stationary process.
class CorrelationSequence {
 public:
  explicit CorrelationSequence(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) throw DomainError("correlation sequence must be non-empty");
    if (values_[0] != 1.0) throw DomainError("correlation sequence must start with exactly 1");
    for (std::size_t k = 1; k < values_.size(); ++k) {
      if (!(std::abs(values_[k]) <= 1.0)) {
        throw DomainError("correlation at lag " + std::to_string(k) + " is outside [-1, 1]");
      }
    }
  }

  static CorrelationSequence identity(std::size_t n) {
    std::vector<double> v(n, 0.0);
    if (n > 0) v[0] = 1.0;
    return CorrelationSequence(std::move(v));
  }

  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t k) const { return values_[k]; }
  std::span<const double> values() const noexcept { return values_; }

 private:
  std::vector<double> values_;
};

namespace detail {

/// Runs the Durbin recursion, calling step(k, y, beta) for k = 0..n-1 where
/// y holds the k order-k predictor coefficients and beta is the innovation
/// variance of order k.
template <class Step>
void durbin(const CorrelationSequence& corr, Step&& step) {
  const std::span<const double> r = corr.values();
  const std::size_t n = r.size();
  std::vector<double> y;
  y.reserve(n);
  double beta = 1.0;
  step(std::size_t{0}, std::span<const double>(y), beta);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    double acc = r[k + 1];
    for (std::size_t j = 1; j <= k; ++j) acc += r[j] * y[k - j];
    const double alpha = -acc / beta;
    const double shrink = 1.0 - alpha * alpha;
    if (!(shrink > 0.0) || !(beta * shrink > kInnovationTolerance)) {
      throw NotPositiveDefinite("Toeplitz matrix is not positive definite (innovation variance "
                                "vanished at lag " + std::to_string(k + 1) + ")");
    }
    for (std::size_t j = 0, m = k; j < m; ++j, --m) {
      const double a = y[j];
      const double b = y[m - 1];
      if (j == m - 1) {
        y[j] = a + alpha * a;
      } else {
        y[j] = a + alpha * b;
        y[m - 1] = b + alpha * a;
      }
    }
    y.push_back(alpha);
    beta *= shrink;
    step(k + 1, std::span<const double>(y), beta);
  }
}

}  // namespace detail

/// ln|Sigma| as the sum of log innovation variances.
inline double levinson_logdet(const CorrelationSequence& corr) {
  double logdet = 0.0;
  detail::durbin(corr, [&](std::size_t, std::span<const double>, double beta) {
    logdet += std::log(beta);
  });
  return logdet;
}

/// The innovation variances beta_0..beta_{n-1}.
inline std::vector<double> innovation_variances(const CorrelationSequence& corr) {
  std::vector<double> out;
  out.reserve(corr.size());
  detail::durbin(corr, [&](std::size_t, std::span<const double>, double beta) {
    out.push_back(beta);
  });
  return out;
}

/// Solves Sigma x = rhs with the Levinson extension of the Durbin recursion.
inline std::vector<double> levinson_solve(const CorrelationSequence& corr,
                                          std::span<const double> rhs) {
  const std::size_t n = corr.size();
  if (rhs.size() != n) {
    throw DimensionMismatch("right-hand side has length " + std::to_string(rhs.size()) +
                            ", expected " + std::to_string(n));
  }
  const std::span<const double> r = corr.values();
  std::vector<double> x;
  x.reserve(n);
  detail::durbin(corr, [&](std::size_t k, std::span<const double> y, double beta) {
    if (k == 0) {
      x.push_back(rhs[0]);
      return;
    }
    double acc = rhs[k];
    for (std::size_t j = 1; j <= k; ++j) acc -= r[j] * x[k - j];
    const double mu = acc / beta;
    for (std::size_t j = 0; j < k; ++j) x[j] += mu * y[k - 1 - j];
    x.push_back(mu);
  });
  return x;
}

/// v' Sigma^{-1} v.
inline double quadratic_form(const CorrelationSequence& corr, std::span<const double> v) {
  if (v.size() != corr.size()) {
    throw DimensionMismatch("vector has length " + std::to_string(v.size()) + ", expected " +
                            std::to_string(corr.size()));
  }
  const std::vector<double> x = levinson_solve(corr, v);
  double q = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) q += v[i] * x[i];
  return q;
}

/// Log-determinant of Sigma together with the Gram matrix C' Sigma^{-1} C
/// of the columns of C.
struct WhitenedGram {
  double logdet = 0.0;
  Eigen::MatrixXd gram;
};

/// One Durbin pass producing ln|Sigma| and C' Sigma^{-1} C through the
/// innovation representation; cost O(n^2 (1 + columns)).
inline WhitenedGram whitened_gram(const CorrelationSequence& corr,
                                  const Eigen::Ref<const Eigen::MatrixXd>& columns) {
  const std::size_t n = corr.size();
  if (static_cast<std::size_t>(columns.rows()) != n) {
    throw DimensionMismatch("column block has " + std::to_string(columns.rows()) +
                            " rows, expected " + std::to_string(n));
  }
  const Eigen::Index m = columns.cols();
  WhitenedGram out;
  out.gram = Eigen::MatrixXd::Zero(m, m);
  Eigen::VectorXd e(m);
  detail::durbin(corr, [&](std::size_t k, std::span<const double> y, double beta) {
    out.logdet += std::log(beta);
    for (Eigen::Index c = 0; c < m; ++c) {
      double acc = columns(static_cast<Eigen::Index>(k), c);
      for (std::size_t j = 1; j <= k; ++j) {
        acc += y[j - 1] * columns(static_cast<Eigen::Index>(k - j), c);
      }
      e(c) = acc;
    }
    out.gram.noalias() += (e * e.transpose()) / beta;
  });
  return out;
}

}  // namespace pcfgn
