#pragma once

/** @file
 * Penalised-complexity prior machinery.
 *
 * A flexibility parameter theta with base model theta_0 is mapped to a
 * distance d(theta) >= 0.  An exponential with rate lambda is placed on the
 * distance, half of the mass going to each side of the base model, and the
 * prior on theta follows by change of variables,
 * \f[
 *     \pi(\theta) = c_i \, \tfrac{1}{2} \lambda e^{-\lambda d(\theta)} |d'(\theta)| ,
 * \f]
 * where c_i = 1 / (1 - exp(-lambda d_i^max)) renormalises a branch whose
 * distance stays bounded at the support end (c_i = 1 when d grows without
 * limit).  The distance is tabulated once on a grid that is uniform in an
 * internal coordinate (logit of the rescaled parameter by default) and is
 * interpolated with monotone cubic Hermite pieces whose node slopes are
 * central finite differences.
 */

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "ar1.hpp"
#include "detail/parallel.hpp"
#include "errors.hpp"
#include "fgn.hpp"

namespace pcfgn {

inline constexpr std::size_t kDefaultTableSize = 2001;

struct Interval {
  double lo;
  double hi;
  double width() const { return hi - lo; }
  bool contains_open(double x) const { return x > lo && x < hi; }
};

enum class InternalTransform { Logit, Identity };

/// Which branch a point at the base model belongs to.
enum class Side { Lower, Upper };

namespace detail {

inline double to_internal(InternalTransform t, Interval s, double theta) {
  if (t == InternalTransform::Identity) return theta;
  return std::log((theta - s.lo) / (s.hi - theta));
}

inline double from_internal(InternalTransform t, Interval s, double u) {
  if (t == InternalTransform::Identity) return u;
  // logistic, written to stay accurate in both tails
  if (u >= 0.0) {
    const double e = std::exp(-u);
    return (s.lo * e + s.hi) / (1.0 + e);
  }
  const double e = std::exp(u);
  return (s.lo + s.hi * e) / (1.0 + e);
}

/// d theta / d u.
inline double jacobian(InternalTransform t, Interval s, double u) {
  if (t == InternalTransform::Identity) return 1.0;
  const double e = std::exp(-std::abs(u));
  return s.width() * e / ((1.0 + e) * (1.0 + e));
}

// Five-point Gauss-Legendre rule on [-1, 1].
inline constexpr std::array<double, 5> kGaussNodes = {
    -0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831, 0.9061798459386640};
inline constexpr std::array<double, 5> kGaussWeights = {
    0.2369268850561891, 0.4786286704993665, 0.5688888888888889, 0.4786286704993665,
    0.2369268850561891};

template <class F>
double gauss_legendre(F&& f, double a, double b) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  double acc = 0.0;
  for (std::size_t i = 0; i < kGaussNodes.size(); ++i) {
    acc += kGaussWeights[i] * f(mid + half * kGaussNodes[i]);
  }
  return acc * half;
}

/// Fritsch-Carlson limiter applied to the node slopes of one monotone branch.
inline void limit_slopes(const std::vector<double>& values, std::vector<double>& slopes,
                         std::size_t first, std::size_t last, double h) {
  for (std::size_t i = first; i < last; ++i) {
    const double delta = (values[i + 1] - values[i]) / h;
    if (slopes[i] * delta < 0.0) slopes[i] = 0.0;
    if (slopes[i + 1] * delta < 0.0) slopes[i + 1] = 0.0;
    const double a = slopes[i] / delta;
    const double b = slopes[i + 1] / delta;
    const double r2 = a * a + b * b;
    if (r2 > 9.0) {
      const double t = 3.0 / std::sqrt(r2);
      slopes[i] = t * a * delta;
      slopes[i + 1] = t * b * delta;
    }
  }
}

/// Second-order finite-difference slopes on one branch [first, last] of a
/// uniform grid, one-sided at both branch ends.
inline void branch_slopes(const std::vector<double>& d, std::vector<double>& out,
                          std::size_t first, std::size_t last, double h) {
  for (std::size_t i = first + 1; i < last; ++i) out[i] = (d[i + 1] - d[i - 1]) / (2.0 * h);
  out[first] = (-3.0 * d[first] + 4.0 * d[first + 1] - d[first + 2]) / (2.0 * h);
  out[last] = (3.0 * d[last] - 4.0 * d[last - 1] + d[last - 2]) / (2.0 * h);
}

}  // namespace detail

/// Distance d(theta) to the base model tabulated on both monotone branches.
class DistanceTable {
 public:
  /// Interpolated distance and its derivative with respect to the internal coordinate.
  struct Point {
    double distance;
    double slope;
  };

  DistanceTable(std::vector<double> internal, std::vector<double> distances, std::size_t base_index,
                Interval support, InternalTransform transform, double lower_limit,
                double upper_limit)
      : internal_(std::move(internal)),
        distances_(std::move(distances)),
        base_index_(base_index),
        support_(support),
        transform_(transform),
        lower_limit_(lower_limit),
        upper_limit_(upper_limit) {
    const std::size_t n = internal_.size();
    if (n < 7 || distances_.size() != n || base_index_ < 2 || base_index_ + 3 > n) {
      throw DomainError("distance table needs at least three nodes on each branch");
    }
    h_lower_ = (internal_[base_index_] - internal_.front()) / static_cast<double>(base_index_);
    h_upper_ = (internal_.back() - internal_[base_index_]) /
               static_cast<double>(n - 1 - base_index_);
    params_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      params_[i] = detail::from_internal(transform_, support_, internal_[i]);
    }
    check_invariants();

    lower_slopes_.assign(base_index_ + 1, 0.0);
    upper_slopes_.assign(n - base_index_, 0.0);
    std::vector<double> lower_d(distances_.begin(), distances_.begin() + base_index_ + 1);
    std::vector<double> upper_d(distances_.begin() + base_index_, distances_.end());
    detail::branch_slopes(lower_d, lower_slopes_, 0, base_index_, h_lower_);
    detail::branch_slopes(upper_d, upper_slopes_, 0, upper_d.size() - 1, h_upper_);
    detail::limit_slopes(lower_d, lower_slopes_, 0, base_index_, h_lower_);
    detail::limit_slopes(upper_d, upper_slopes_, 0, upper_d.size() - 1, h_upper_);
  }

  std::size_t size() const noexcept { return internal_.size(); }
  std::size_t base_index() const noexcept { return base_index_; }
  double base_point() const noexcept { return params_[base_index_]; }
  double base_internal() const noexcept { return internal_[base_index_]; }
  Interval support() const noexcept { return support_; }
  InternalTransform transform() const noexcept { return transform_; }
  const std::vector<double>& grid() const noexcept { return params_; }
  const std::vector<double>& internal_grid() const noexcept { return internal_; }
  const std::vector<double>& distances() const noexcept { return distances_; }
  double internal_min() const noexcept { return internal_.front(); }
  double internal_max() const noexcept { return internal_.back(); }
  /// Distance limit at the lower / upper end of the support (may be +inf).
  double lower_limit() const noexcept { return lower_limit_; }
  double upper_limit() const noexcept { return upper_limit_; }

  double to_internal(double theta) const { return detail::to_internal(transform_, support_, theta); }
  double from_internal(double u) const { return detail::from_internal(transform_, support_, u); }
  double jacobian(double u) const { return detail::jacobian(transform_, support_, u); }

  /// Finite-difference node slope dd/du at node i, taken from the branch on `side` at the base.
  double node_slope(std::size_t i, Side side = Side::Upper) const {
    if (i < base_index_ || (i == base_index_ && side == Side::Lower)) return lower_slopes_[i];
    return upper_slopes_[i - base_index_];
  }

  /// Distance and slope dd/du at internal coordinate u.  At the base node the
  /// slope is taken from `side`.  Outside the tabulated range the end piece
  /// is continued linearly and capped by the support limit.
  Point at_internal(double u, Side side) const {
    const double ub = internal_[base_index_];
    if (u < ub || (u == ub && side == Side::Lower)) {
      if (u <= internal_.front()) return beyond(u, 0, lower_slopes_.front(), lower_limit_);
      std::size_t i = static_cast<std::size_t>((u - internal_.front()) / h_lower_);
      i = std::min(i, base_index_ - 1);
      return hermite(i, u, h_lower_, lower_slopes_[i], lower_slopes_[i + 1]);
    }
    if (u >= internal_.back()) return beyond(u, size() - 1, upper_slopes_.back(), upper_limit_);
    std::size_t i = base_index_ + static_cast<std::size_t>((u - ub) / h_upper_);
    i = std::min(i, size() - 2);
    return hermite(i, u, h_upper_, upper_slopes_[i - base_index_],
                   upper_slopes_[i + 1 - base_index_]);
  }

  /// Interpolated d(theta).
  double distance(double theta) const {
    check_support(theta);
    const double u = to_internal(theta);
    return at_internal(u, u < base_internal() ? Side::Lower : Side::Upper).distance;
  }

  /// d'(theta) on the parameter scale.
  double derivative(double theta, Side side = Side::Upper) const {
    check_support(theta);
    const double u = to_internal(theta);
    return at_internal(u, side).slope / jacobian(u);
  }

  /// Distance at u = +-inf is the support limit, otherwise interpolated.
  double distance_internal(double u) const {
    if (u == -std::numeric_limits<double>::infinity()) return lower_limit_;
    if (u == std::numeric_limits<double>::infinity()) return upper_limit_;
    return at_internal(u, u < base_internal() ? Side::Lower : Side::Upper).distance;
  }

  void check_support(double theta) const {
    if (!support_.contains_open(theta)) {
      throw DomainError("parameter " + std::to_string(theta) + " outside support (" +
                        std::to_string(support_.lo) + ", " + std::to_string(support_.hi) + ")");
    }
  }

 private:
  /// Continuation past end node i with slope s.  With an infinite limit the
  /// end piece is linear.  With a finite limit L the gap g = L - d is taken
  /// quadratic in the distance x to the support end, g = a x + b x^2, matched
  /// to value and slope at the node, so the density stays finite there.
  Point beyond(double u, std::size_t i, double s, double limit) const {
    const double d0 = distances_[i];
    const double du = u - internal_[i];
    if (!std::isfinite(limit)) return {d0 + s * du, s};
    const double gap = limit - d0;
    if (!(gap > 0.0) || s * du < 0.0) return {std::min(d0, limit), 0.0};
    const bool lower = i == 0;
    if (transform_ == InternalTransform::Logit) {
      auto end_offset = [&](double v) {
        const double t = from_internal(v);
        return lower ? t - support_.lo : support_.hi - t;
      };
      const double x0 = end_offset(internal_[i]);
      const double dx0 = (lower ? 1.0 : -1.0) * jacobian(internal_[i]);
      const double g1 = -s / dx0;  // dg/dx at the node
      const double a = 2.0 * gap / x0 - g1;
      const double b = (g1 * x0 - gap) / (x0 * x0);
      if (a > 0.0 && g1 > 0.0) {
        const double x = end_offset(u);
        const double dx = (lower ? 1.0 : -1.0) * jacobian(u);
        return {limit - (a * x + b * x * x), -(a + 2.0 * b * x) * dx};
      }
    }
    const double e = std::exp(-std::abs(s * du) / gap);
    return {limit - gap * e, s * e};
  }

  Point hermite(std::size_t i, double u, double h, double m0, double m1) const {
    const double t = (u - internal_[i]) / h;
    const double y0 = distances_[i];
    const double y1 = distances_[i + 1];
    const double t2 = t * t;
    const double t3 = t2 * t;
    const double value = (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * h * m0 +
                         (-2 * t3 + 3 * t2) * y1 + (t3 - t2) * h * m1;
    const double slope = ((6 * t2 - 6 * t) * y0 + (-6 * t2 + 6 * t) * y1) / h +
                         (3 * t2 - 4 * t + 1) * m0 + (3 * t2 - 2 * t) * m1;
    return {value, slope};
  }

  void check_invariants() const {
    if (!(distances_[base_index_] <= 1e-6)) {
      throw NonMonotoneDistance("distance at the base point is not zero");
    }
    for (std::size_t i = 0; i < size(); ++i) {
      if (!(distances_[i] >= 0.0) || !std::isfinite(distances_[i])) {
        throw NonMonotoneDistance("distance at grid node " + std::to_string(i) +
                                  " is negative or not finite");
      }
    }
    for (std::size_t i = 0; i < base_index_; ++i) {
      if (!(distances_[i] > distances_[i + 1])) {
        throw NonMonotoneDistance("distance not strictly decreasing towards the base point at "
                                  "parameter " + std::to_string(params_[i]));
      }
    }
    for (std::size_t i = base_index_; i + 1 < size(); ++i) {
      if (!(distances_[i + 1] > distances_[i])) {
        throw NonMonotoneDistance("distance not strictly increasing away from the base point at "
                                  "parameter " + std::to_string(params_[i + 1]));
      }
    }
  }

  std::vector<double> internal_;
  std::vector<double> distances_;
  std::vector<double> params_;
  std::size_t base_index_;
  Interval support_;
  InternalTransform transform_;
  double lower_limit_;
  double upper_limit_;
  double h_lower_ = 0.0;
  double h_upper_ = 0.0;
  std::vector<double> lower_slopes_;
  std::vector<double> upper_slopes_;
};

struct DistanceTableOptions {
  std::size_t grid_size = kDefaultTableSize;
  InternalTransform transform = InternalTransform::Logit;
  /// Distances at the open ends of the support; +inf when d diverges there.
  double lower_limit = std::numeric_limits<double>::infinity();
  double upper_limit = std::numeric_limits<double>::infinity();
  unsigned threads = detail::default_thread_count();
};

/// Tabulates distance_fn on a grid that is uniform (per branch) in the
/// internal coordinate, stays 1e-4 of the support width away from the open
/// ends and has a node exactly at base_point.
inline DistanceTable build_distance_table(const std::function<double(double)>& distance_fn,
                                          Interval support, double base_point,
                                          const DistanceTableOptions& options = {}) {
  if (!(support.hi > support.lo) || !std::isfinite(support.lo) || !std::isfinite(support.hi)) {
    throw DomainError("support must be a finite non-empty interval");
  }
  if (!support.contains_open(base_point)) throw DomainError("base point outside the support");
  if (options.grid_size < 101) throw DomainError("distance table needs at least 101 grid points");
  const double base_distance = distance_fn(base_point);
  if (!(std::abs(base_distance) <= 1e-6)) {
    throw DomainError("distance function is not zero at the base point");
  }

  const double margin = 1e-4 * support.width();
  const double u_min = detail::to_internal(options.transform, support, support.lo + margin);
  const double u_max = detail::to_internal(options.transform, support, support.hi - margin);
  const double u_base = detail::to_internal(options.transform, support, base_point);
  const std::size_t intervals = options.grid_size - 1;
  auto base_index = static_cast<std::size_t>(
      std::lround(static_cast<double>(intervals) * (u_base - u_min) / (u_max - u_min)));
  base_index = std::clamp<std::size_t>(base_index, 2, intervals - 2);

  std::vector<double> u(options.grid_size);
  for (std::size_t i = 0; i <= base_index; ++i) {
    u[i] = u_min + (u_base - u_min) * static_cast<double>(i) / static_cast<double>(base_index);
  }
  for (std::size_t i = base_index; i <= intervals; ++i) {
    u[i] = u_base + (u_max - u_base) * static_cast<double>(i - base_index) /
                        static_cast<double>(intervals - base_index);
  }
  u[base_index] = u_base;

  std::vector<double> d(options.grid_size);
  detail::parallel_for(
      options.grid_size,
      [&](std::size_t i) {
        d[i] = i == base_index ? std::max(0.0, base_distance)
                               : distance_fn(detail::from_internal(options.transform, support, u[i]));
      },
      options.threads);
  return DistanceTable(std::move(u), std::move(d), base_index, support, options.transform,
                       options.lower_limit, options.upper_limit);
}

/// fGn distance at series length n_ref tabulated over H in (0, 1).
inline DistanceTable fgn_distance_table(std::size_t n_ref = kDefaultReferenceLength,
                                        std::size_t grid_size = kDefaultTableSize) {
  DistanceTableOptions opts;
  opts.grid_size = grid_size;
  opts.lower_limit = fgn_distance_limit_at_zero(n_ref);
  return build_distance_table([n_ref](double h) { return fgn_distance(h, n_ref); }, {0.0, 1.0},
                              0.5, opts);
}

/// AR(1) distance tabulated over phi in (-1, 1).
inline DistanceTable ar1_distance_table(std::size_t grid_size = kDefaultTableSize) {
  DistanceTableOptions opts;
  opts.grid_size = grid_size;
  return build_distance_table([](double phi) { return ar1_distance(phi); }, {-1.0, 1.0}, 0.0,
                              opts);
}

/// lambda = -ln(2 alpha) / d(u), i.e. P(theta beyond u) = alpha on u's side.
inline double calibrate_rate(const DistanceTable& table, double u, double alpha) {
  if (!(alpha > 0.0 && alpha < 0.5)) {
    throw DomainError("tail probability must lie in (0, 0.5), got " + std::to_string(alpha));
  }
  table.check_support(u);
  if (u == table.base_point()) throw DomainError("calibration point equals the base model");
  const double d = table.distance(u);
  if (!(d > 0.0)) throw DomainError("distance at the calibration point is zero");
  return -std::log(2.0 * alpha) / d;
}

/// Calibrated PC prior for a flexibility parameter.  Immutable; the table is
/// shared so the same tabulation can back several rates.
class PcPrior {
 public:
  PcPrior(std::shared_ptr<const DistanceTable> table, double rate, std::string parameter_name)
      : table_(std::move(table)), rate_(rate), name_(std::move(parameter_name)) {
    if (!table_) throw DomainError("PC prior needs a distance table");
    if (!(rate_ > 0.0) || !std::isfinite(rate_)) throw DomainError("rate must be positive");
    lower_scale_ = 1.0 / -std::expm1(-rate_ * table_->lower_limit());
    upper_scale_ = 1.0 / -std::expm1(-rate_ * table_->upper_limit());
  }

  double rate() const noexcept { return rate_; }
  const DistanceTable& table() const noexcept { return *table_; }
  std::shared_ptr<const DistanceTable> shared_table() const noexcept { return table_; }
  const std::string& parameter_name() const noexcept { return name_; }
  double base_point() const noexcept { return table_->base_point(); }
  Interval support() const noexcept { return table_->support(); }

  /// Renormalisation of a branch with bounded distance (1 otherwise).
  double branch_scale(Side side) const noexcept {
    return side == Side::Lower ? lower_scale_ : upper_scale_;
  }

  /// Density with respect to the internal coordinate u.
  double density_internal(double u, Side side) const {
    const DistanceTable::Point p = table_->at_internal(u, side);
    return branch_scale(side) * 0.5 * rate_ * std::exp(-rate_ * p.distance) * std::abs(p.slope);
  }

  /// The density jumps at the base point; there it takes the larger
  /// one-sided limit so that the base point is the mode.
  double density_internal(double u) const {
    const double ub = table_->base_internal();
    if (u == ub) return std::max(density_internal(u, Side::Lower), density_internal(u, Side::Upper));
    return density_internal(u, u < ub ? Side::Lower : Side::Upper);
  }

  double log_density_internal(double u, Side side) const {
    return std::log(density_internal(u, side));
  }

  /// Density on the parameter scale.
  double density(double theta) const {
    table_->check_support(theta);
    const double u = table_->to_internal(theta);
    return density_internal(u) / table_->jacobian(u);
  }

  double log_density(double theta) const { return std::log(density(theta)); }

  /// Prior mass of [lo, hi] (clipped to the support) by Gauss-Legendre on
  /// every table cell, plus the exact mass of the untabulated end pieces.
  double probability(double lo, double hi) const {
    const Interval s = table_->support();
    lo = std::max(lo, s.lo);
    hi = std::min(hi, s.hi);
    if (!(hi > lo)) return 0.0;
    constexpr double inf = std::numeric_limits<double>::infinity();
    const double ulo = lo <= s.lo ? -inf : table_->to_internal(lo);
    const double uhi = hi >= s.hi ? inf : table_->to_internal(hi);
    const double ub = table_->base_internal();

    double mass = 0.0;
    // beyond the table on the lower end
    const double u0 = table_->internal_min();
    if (ulo < u0) {
      const double b = std::min(uhi, u0);
      mass += lower_scale_ * 0.5 *
              (std::exp(-rate_ * table_->distance_internal(b)) -
               std::exp(-rate_ * table_->distance_internal(ulo)));
    }
    const double u1 = table_->internal_max();
    if (uhi > u1) {
      const double a = std::max(ulo, u1);
      mass += upper_scale_ * 0.5 *
              (std::exp(-rate_ * table_->distance_internal(a)) -
               std::exp(-rate_ * table_->distance_internal(uhi)));
    }
    // tabulated cells
    const double a = std::max(ulo, u0);
    const double b = std::min(uhi, u1);
    if (b > a) {
      const auto& grid = table_->internal_grid();
      for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        const double ca = std::max(a, grid[i]);
        const double cb = std::min(b, grid[i + 1]);
        if (!(cb > ca)) continue;
        const Side side = grid[i + 1] <= ub ? Side::Lower : Side::Upper;
        mass += detail::gauss_legendre([&](double u) { return density_internal(u, side); }, ca, cb);
      }
    }
    return std::clamp(mass, 0.0, 1.0);
  }

 private:
  std::shared_ptr<const DistanceTable> table_;
  double rate_;
  std::string name_;
  double lower_scale_ = 1.0;
  double upper_scale_ = 1.0;
};

/// pc_prior_sample_tail: prior probability of [lo, hi].
inline double pc_prior_tail(const PcPrior& prior, double lo, double hi) {
  return prior.probability(lo, hi);
}

inline double pc_prior_density(const PcPrior& prior, double theta) { return prior.density(theta); }

/// PC prior on the fGn Hurst exponent calibrated by P(u < H < 1) = alpha.
inline PcPrior fgn_pc_prior(std::shared_ptr<const DistanceTable> table, double u, double alpha) {
  const double rate = calibrate_rate(*table, u, alpha);
  return PcPrior(std::move(table), rate, "H");
}

/// PC prior on the AR(1) coefficient with a given (typically shared) rate.
inline PcPrior ar1_pc_prior(std::shared_ptr<const DistanceTable> table, double rate) {
  return PcPrior(std::move(table), rate, "phi");
}

// ---------------------------------------------------------------------------
// Precision

/// Type-2 Gumbel PC prior on a precision tau, i.e. an exponential with rate
/// lambda on the standard deviation 1/sqrt(tau), calibrated by
/// P(1/sqrt(tau) > u) = alpha.
struct PrecisionPrior {
  double rate;
  double u;
  double alpha;

  static PrecisionPrior from_tail(double u, double alpha) {
    if (!(u > 0.0) || !std::isfinite(u)) throw DomainError("precision prior needs U > 0");
    if (!(alpha > 0.0 && alpha < 1.0)) {
      throw DomainError("precision prior tail probability must lie in (0, 1)");
    }
    return {-std::log(alpha) / u, u, alpha};
  }

  friend bool operator==(const PrecisionPrior&, const PrecisionPrior&) = default;
};

/// Log density of kappa = log(tau).
inline double precision_logprior(double kappa, const PrecisionPrior& prior) {
  return std::log(0.5 * prior.rate) - prior.rate * std::exp(-0.5 * kappa) - 0.5 * kappa;
}

/// Log density of tau itself, (lambda/2) tau^{-3/2} exp(-lambda tau^{-1/2}).
inline double precision_logprior_tau(double tau, const PrecisionPrior& prior) {
  if (!(tau > 0.0)) throw DomainError("precision must be positive");
  return std::log(0.5 * prior.rate) - 1.5 * std::log(tau) - prior.rate / std::sqrt(tau);
}

// ---------------------------------------------------------------------------
// Distance-scale diagnostics

struct DistanceDensityPoint {
  double distance;  ///< signed (negative below the base point) or absolute
  double density;
  double theta;     ///< parameter value mapping to this distance (branch-specific)
};

/// Pushes a prior density on theta through d(theta).  With `signed_axis` the
/// lower branch is mapped to negative distances; otherwise both branches are
/// folded onto d >= 0 and their contributions added.  The result is sorted
/// by distance and tabulated at the table nodes.
inline std::vector<DistanceDensityPoint> induced_distance_density(
    const std::function<double(double)>& prior_on_theta, const DistanceTable& table,
    bool signed_axis = true) {
  const std::size_t b = table.base_index();
  const auto& u = table.internal_grid();
  std::vector<DistanceDensityPoint> lower;
  std::vector<DistanceDensityPoint> upper;
  for (std::size_t i = 0; i < table.size(); ++i) {
    const double theta = table.grid()[i];
    if (!table.support().contains_open(theta)) continue;
    const double jac = table.jacobian(u[i]);
    const double d = table.distances()[i];
    // a prior may jump at the base point; use its one-sided values there
    const double nudge = 1e-9 * table.support().width();
    if (i <= b) {
      const double slope = std::abs(table.node_slope(i, Side::Lower)) / jac;
      const double p = prior_on_theta(i == b ? theta - nudge : theta);
      if (slope > 0.0) lower.push_back({-d, p / slope, theta});
    }
    if (i >= b) {
      const double slope = std::abs(table.node_slope(i, Side::Upper)) / jac;
      const double p = prior_on_theta(i == b ? theta + nudge : theta);
      if (slope > 0.0) upper.push_back({d, p / slope, theta});
    }
  }
  std::vector<DistanceDensityPoint> out;
  if (signed_axis) {
    out.insert(out.end(), lower.begin(), lower.end());
    out.insert(out.end(), upper.begin(), upper.end());
    std::stable_sort(out.begin(), out.end(),
                     [](const auto& a, const auto& c) { return a.distance < c.distance; });
    return out;
  }
  // fold: lower branch onto |s|, ascending
  for (auto& p : lower) p.distance = -p.distance;
  std::reverse(lower.begin(), lower.end());
  auto interp = [](const std::vector<DistanceDensityPoint>& branch, double d) {
    if (branch.empty() || d > branch.back().distance) return 0.0;
    auto it = std::lower_bound(branch.begin(), branch.end(), d,
                               [](const auto& p, double x) { return p.distance < x; });
    if (it == branch.begin()) return it->density;
    const auto& hi = *it;
    const auto& lo = *(it - 1);
    const double t = (d - lo.distance) / (hi.distance - lo.distance);
    return lo.density + t * (hi.density - lo.density);
  };
  for (const auto* branch : {&lower, &upper}) {
    const auto* other = branch == &lower ? &upper : &lower;
    for (const auto& p : *branch) {
      out.push_back({p.distance, p.density + interp(*other, p.distance), p.theta});
    }
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& c) { return a.distance < c.distance; });
  return out;
}

}  // namespace pcfgn
