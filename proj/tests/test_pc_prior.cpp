#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/beta.hpp>

#include <algorithm>
#include <array>
#include <utility>
#include <cmath>
#include <memory>

#include <pcfgn/pc_prior.hpp>

using namespace pcfgn;

namespace {

std::shared_ptr<const DistanceTable> fgn_table() {
  static const auto table = std::make_shared<const DistanceTable>(fgn_distance_table());
  return table;
}

std::shared_ptr<const DistanceTable> ar1_table() {
  static const auto table = std::make_shared<const DistanceTable>(ar1_distance_table());
  return table;
}

double logistic(double r) { return 1.0 / (1.0 + std::exp(-r)); }

}  // namespace

TEST(DistanceTable, Ar1BranchesAreMirrorImages) {
  const auto& t = *ar1_table();
  ASSERT_EQ(t.size(), kDefaultTableSize);
  const std::size_t b = t.base_index();
  EXPECT_EQ(t.base_point(), 0.0);
  EXPECT_EQ(t.distances()[b], 0.0);
  for (std::size_t i = 1; i <= b; ++i) {
    EXPECT_NEAR(t.distances()[b - i], t.distances()[b + i], 1e-12);
    EXPECT_NEAR(t.grid()[b - i], -t.grid()[b + i], 1e-15);
  }
  // grid stays 1e-4 of the support width inside the open ends
  EXPECT_NEAR(t.grid().front(), -1.0 + 2e-4, 1e-12);
  EXPECT_NEAR(t.grid().back(), 1.0 - 2e-4, 1e-12);
}

TEST(DistanceTable, FgnBranchesAreAsymmetric) {
  const auto& t = *fgn_table();
  const std::size_t b = t.base_index();
  EXPECT_EQ(t.base_point(), 0.5);
  EXPECT_EQ(t.distances()[b], 0.0);
  EXPECT_GT(std::abs(t.distances()[b - 300] - t.distances()[b + 300]), 1e-3);
  // nodes hold the direct evaluation; interpolation between nodes is accurate
  EXPECT_DOUBLE_EQ(t.distances()[b + 400], fgn_distance(t.grid()[b + 400], 1000));
  for (double h : {0.013, 0.21, 0.4987, 0.5031, 0.77, 0.9, 0.9973}) {
    EXPECT_NEAR(t.distance(h), fgn_distance(h, 1000), 1e-6) << "H=" << h;
  }
}

TEST(DistanceTable, DerivativeMatchesClosedFormForAr1) {
  const auto& t = *ar1_table();
  for (double phi : {-0.97, -0.5, -0.01, 0.02, 0.3, 0.8, 0.99}) {
    const double d = ar1_distance(phi);
    const double exact = phi / ((1 - phi * phi) * d);
    EXPECT_NEAR(t.derivative(phi), exact, 1e-5 * std::max(1.0, std::abs(exact))) << phi;
  }
}

TEST(DistanceTable, RejectsDegenerateInput) {
  EXPECT_THROW(build_distance_table([](double) { return 0.0; }, {-1, 1}, 0.0, {}),
               NonMonotoneDistance);
  EXPECT_THROW(build_distance_table([](double x) { return std::abs(x) + 1.0; }, {-1, 1}, 0.0, {}),
               DomainError);
  DistanceTableOptions small;
  small.grid_size = 50;
  EXPECT_THROW(build_distance_table([](double x) { return std::abs(x); }, {-1, 1}, 0.0, small),
               DomainError);
  // wiggly branch
  EXPECT_THROW(build_distance_table([](double x) { return std::abs(x) * (1.5 + std::sin(40 * x)); },
                                    {-1, 1}, 0.0, {}),
               NonMonotoneDistance);
}

TEST(DistanceTable, OffCentreBasePoint) {
  DistanceTableOptions opts;
  opts.grid_size = 401;
  opts.transform = InternalTransform::Identity;
  const auto t = build_distance_table([](double x) { return std::abs(x - 0.3); }, {0.0, 2.0}, 0.3, opts);
  EXPECT_DOUBLE_EQ(t.base_point(), 0.3);
  EXPECT_NEAR(t.distance(1.234), 0.934, 1e-12);
  EXPECT_NEAR(t.derivative(0.1, Side::Lower), -1.0, 1e-10);
}

TEST(CalibrateRate, FgnReferenceValues) {
  EXPECT_NEAR(calibrate_rate(*fgn_table(), 0.9, 0.10), 1.70, 0.01);
  EXPECT_NEAR(calibrate_rate(*fgn_table(), 0.9, 0.15), 1.27, 0.01);
  EXPECT_NEAR(calibrate_rate(*fgn_table(), 0.9, 0.20), 0.97, 0.01);
}

TEST(CalibrateRate, Ar1ClosedForm) {
  // -ln(0.5) / sqrt(-ln 0.75)
  const double expected = -std::log(0.5) / std::sqrt(-std::log(0.75));
  EXPECT_NEAR(calibrate_rate(*ar1_table(), 0.5, 0.25), expected, 1e-6);
  // hand value with d(0.5) rounded to 0.5364
  EXPECT_NEAR(expected, -std::log(0.5) / 0.5364, 2e-4);
}

TEST(CalibrateRate, RejectsBadInput) {
  EXPECT_THROW(calibrate_rate(*ar1_table(), 0.0, 0.1), DomainError);
  EXPECT_THROW(calibrate_rate(*ar1_table(), 0.5, 0.5), DomainError);
  EXPECT_THROW(calibrate_rate(*ar1_table(), 0.5, 0.0), DomainError);
  EXPECT_THROW(calibrate_rate(*ar1_table(), 1.0, 0.1), DomainError);
}

TEST(PcPriorDensity, FgnModeAtWhiteNoise) {
  for (double alpha : {0.05, 0.10, 0.15, 0.20}) {
    const PcPrior prior = fgn_pc_prior(fgn_table(), 0.9, alpha);
    const double at_base = prior.density(0.5);
    EXPECT_GE(at_base, prior.density(0.49));
    EXPECT_GE(at_base, prior.density(0.51));
    // mode of the internal-coordinate density over the whole table
    const auto& u = prior.table().internal_grid();
    std::size_t best = 0;
    for (std::size_t i = 0; i < u.size(); ++i) {
      if (prior.density_internal(u[i]) > prior.density_internal(u[best])) best = i;
    }
    EXPECT_EQ(best, prior.table().base_index());
  }
}

TEST(PcPriorDensity, Ar1NumericalMatchesClosedForm) {
  const PcPrior prior = ar1_pc_prior(ar1_table(), 1.70);
  double worst = 0.0;
  for (int i = 1; i < 1000; ++i) {
    if (i == 500) continue;
    const double phi = -1.0 + 2.0 * i / 1000.0;
    worst = std::max(worst, std::abs(prior.density(phi) - ar1_pc_prior_density(phi, 1.70)));
  }
  EXPECT_LT(worst, 1e-5);
}

TEST(PcPriorDensity, OutsideSupportThrows) {
  const PcPrior prior = ar1_pc_prior(ar1_table(), 1.0);
  EXPECT_THROW(prior.density(1.0), DomainError);
  EXPECT_THROW(prior.density(-1.2), DomainError);
}

TEST(PcPriorTail, Normalisation) {
  EXPECT_NEAR(fgn_pc_prior(fgn_table(), 0.9, 0.1).probability(0.0, 1.0), 1.0, 1e-6);
  EXPECT_NEAR(ar1_pc_prior(ar1_table(), 1.7).probability(-1.0, 1.0), 1.0, 1e-6);
  // half of the mass lies on each side of the base model
  EXPECT_NEAR(fgn_pc_prior(fgn_table(), 0.9, 0.1).probability(0.0, 0.5), 0.5, 1e-6);
  EXPECT_NEAR(ar1_pc_prior(ar1_table(), 1.7).probability(0.0, 1.0), 0.5, 1e-4);
}

TEST(PcPriorTail, NumericalIntegralOfDensity) {
  // integrate the H-scale density independently with adaptive Gauss-Kronrod
  const PcPrior prior = fgn_pc_prior(fgn_table(), 0.9, 0.1);
  auto f = [&](double h) { return prior.density(h); };
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  const double mid = GK::integrate(f, 0.2, 0.5, 15, 1e-12) + GK::integrate(f, 0.5, 0.9, 15, 1e-12);
  EXPECT_NEAR(mid, prior.probability(0.2, 0.9), 2e-6);
  // the tail piece, checked against exp(-lambda d) identities
  EXPECT_NEAR(prior.probability(0.9, 1.0), 0.10, 2e-3);
  EXPECT_NEAR(prior.probability(0.9, 1.0), 0.5 * std::exp(-prior.rate() * fgn_distance(0.9)), 1e-6);
}

TEST(PcPriorTail, CalibrationIsReproduced) {
  for (double u : {0.7, 0.8, 0.9, 0.95}) {
    for (double alpha : {0.01, 0.05, 0.1, 0.2, 0.3}) {
      const PcPrior prior = fgn_pc_prior(fgn_table(), u, alpha);
      EXPECT_NEAR(prior.probability(u, 1.0), alpha, 2e-3) << "U=" << u << " alpha=" << alpha;
    }
  }
  for (double u : {0.3, 0.5, 0.9}) {
    const PcPrior prior = PcPrior(ar1_table(), calibrate_rate(*ar1_table(), u, 0.1), "phi");
    EXPECT_NEAR(prior.probability(u, 1.0), 0.1, 2e-3);
  }
}

TEST(PcPrior, ReparameterisationInvariance) {
  // Build the whole pipeline directly on rho = logit(H) with an identity
  // internal coordinate and a different grid, then compare with the
  // H-scale density transformed to rho.
  const PcPrior on_h = fgn_pc_prior(fgn_table(), 0.9, 0.1);
  DistanceTableOptions opts;
  opts.grid_size = 1501;
  opts.transform = InternalTransform::Identity;
  opts.lower_limit = fgn_distance_limit_at_zero(1000);
  const double r = 9.4;
  auto rho_table = std::make_shared<const DistanceTable>(build_distance_table(
      [](double rho) { return fgn_distance(logistic(rho), 1000); }, {-r, r}, 0.0, opts));
  const PcPrior on_rho(rho_table, on_h.rate(), "H");
  double worst = 0.0;
  for (int i = -180; i <= 180; ++i) {
    const double rho = i / 20.0 + 0.013;
    const double h = logistic(rho);
    const double transformed = on_h.density(h) * h * (1.0 - h);
    worst = std::max(worst, std::abs(transformed - on_rho.density(rho)));
  }
  EXPECT_LT(worst, 1e-5);
}

TEST(PrecisionPrior, RateFromTail) {
  const auto p = PrecisionPrior::from_tail(1.0, 0.01);
  EXPECT_NEAR(p.rate, 4.6052, 5e-5);
  EXPECT_DOUBLE_EQ(p.rate, -std::log(0.01));
  // exponential on sigma: sqrt(E[sigma^2]) = sqrt(2) / lambda ~ 0.31 U
  EXPECT_NEAR(std::sqrt(2.0) / p.rate, 0.307, 5e-4);
  EXPECT_THROW(PrecisionPrior::from_tail(0.0, 0.01), DomainError);
  EXPECT_THROW(PrecisionPrior::from_tail(1.0, 1.0), DomainError);
}

TEST(PrecisionPrior, LogPrecisionDensityIsNormalised) {
  const auto p = PrecisionPrior::from_tail(1.0, 0.01);
  auto dens = [&](double k) { return std::exp(precision_logprior(k, p)); };
  using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
  EXPECT_NEAR(GK::integrate(dens, -40.0, 40.0, 20, 1e-13), 1.0, 1e-6);
  // P(1 / sqrt(tau) > U) = P(kappa < -2 ln U)
  for (double u : {0.1, 1.0, 3.0}) {
    const auto q = PrecisionPrior::from_tail(u, 0.05);
    auto dq = [&](double k) { return std::exp(precision_logprior(k, q)); };
    EXPECT_NEAR(GK::integrate(dq, -60.0, -2.0 * std::log(u), 20, 1e-13), 0.05, 1e-3);
  }
  // E[sigma^2] = E[exp(-kappa)]
  auto second = [&](double k) { return std::exp(-k) * dens(k); };
  const double es2 = GK::integrate(second, -40.0, 60.0, 20, 1e-13);
  EXPECT_NEAR(std::sqrt(es2), std::sqrt(2.0) / p.rate, 1e-6);
}

TEST(PrecisionPrior, ChangeOfVariablesFromTau) {
  const auto p = PrecisionPrior::from_tail(0.5, 0.02);
  for (double k : {-3.0, 0.0, 1.7, 6.0}) {
    EXPECT_NEAR(precision_logprior(k, p), precision_logprior_tau(std::exp(k), p) + k, 1e-12);
  }
}

TEST(InducedDistance, PcPriorGivesDoubleExponential) {
  const PcPrior prior = ar1_pc_prior(ar1_table(), 1.7);
  const auto dd = induced_distance_density([&](double phi) { return prior.density(phi); },
                                           prior.table(), true);
  double worst = 0.0;
  for (const auto& p : dd) {
    worst = std::max(worst, std::abs(p.density - 0.85 * std::exp(-1.7 * std::abs(p.distance))));
  }
  EXPECT_LT(worst, 1e-4);
}

TEST(InducedDistance, FgnPcPriorKeepsModeAtBase) {
  for (double alpha : {0.1, 0.2}) {
    const PcPrior prior = fgn_pc_prior(fgn_table(), 0.9, alpha);
    const auto dd = induced_distance_density([&](double h) { return prior.density(h); },
                                             prior.table(), true);
    double worst = 0.0;
    for (const auto& p : dd) {
      const double scale = prior.branch_scale(std::signbit(p.distance) ? Side::Lower : Side::Upper);
      worst = std::max(worst, std::abs(p.density - scale * 0.5 * prior.rate() *
                                                       std::exp(-prior.rate() * std::abs(p.distance))));
    }
    EXPECT_LT(worst, 1e-4);
    const auto mode = std::max_element(dd.begin(), dd.end(),
                                       [](const auto& a, const auto& b) { return a.density < b.density; });
    const std::size_t b = prior.table().base_index();
    const double spacing = std::min(prior.table().distances()[b - 1], prior.table().distances()[b + 1]);
    EXPECT_LT(std::abs(mode->distance), spacing);
  }
}

TEST(InducedDistance, UniformPriorModeNearPointTwoEight) {
  const auto dd = induced_distance_density([](double) { return 1.0; }, *fgn_table(), true);
  const auto mode = std::max_element(dd.begin(), dd.end(),
                                     [](const auto& a, const auto& b) { return a.density < b.density; });
  EXPECT_LT(mode->distance, 0.0);
  EXPECT_NEAR(mode->theta, 0.28, 0.02);
}

TEST(InducedDistance, BetaPriorsShiftMode) {
  // first shape 1, 1.8, 2.5 with P(H > 0.9) = 0.10, 0.15, 0.20; the first is uniform
  const std::array<std::pair<double, double>, 3> cases{{{1.0, 0.10}, {1.8, 0.15}, {2.5, 0.20}}};
  for (const auto& [a, tail] : cases) {
    double lo = 0.05, hi = 50.0;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      (boost::math::ibetac(a, mid, 0.9) > tail ? lo : hi) = mid;
    }
    const double b = 0.5 * (lo + hi);
    ASSERT_NEAR(boost::math::ibetac(a, b, 0.9), tail, 1e-9);
    const auto dd = induced_distance_density(
        [&](double h) { return boost::math::ibeta_derivative(a, b, h); }, *fgn_table(), true);
    const auto mode = std::max_element(dd.begin(), dd.end(),
                                       [](const auto& x, const auto& y) { return x.density < y.density; });
    EXPECT_GT(std::abs(mode->distance), 0.05) << "a=" << a;
  }
}

TEST(InducedDistance, FoldedAxisIntegratesToOne) {
  const PcPrior prior = ar1_pc_prior(ar1_table(), 1.2);
  const auto dd = induced_distance_density([&](double phi) { return prior.density(phi); },
                                           prior.table(), false);
  double mass = 0.0;
  for (std::size_t i = 1; i < dd.size(); ++i) {
    mass += 0.5 * (dd[i].density + dd[i - 1].density) * (dd[i].distance - dd[i - 1].distance);
  }
  // folded density is lambda exp(-lambda d), tabulated up to the largest table distance
  const double dmax = dd.back().distance;
  EXPECT_NEAR(mass, 1.0 - std::exp(-1.2 * dmax), 1e-4);
  EXPECT_NEAR(dd.front().density, 1.2, 1e-4);
}

TEST(PcPriorDensity, FgnContinuationBelowTable) {
  const PcPrior prior = fgn_pc_prior(fgn_table(), 0.9, 0.1);
  const double rate = prior.rate();
  const double scale = prior.branch_scale(Side::Lower);
  for (double h : {1e-7, 1e-6, 1e-5}) {
    // density from finite differences of the directly evaluated distance
    const double d0 = fgn_distance(h * 0.99);
    const double d1 = fgn_distance(h * 1.01);
    const double direct = scale * 0.5 * rate * std::exp(-rate * fgn_distance(h)) * std::abs(d1 - d0) / (0.02 * h);
    EXPECT_NEAR(prior.density(h), direct, 0.005 * direct) << "H=" << h;
    EXPECT_LT(prior.density(h), prior.density(0.5));
  }
  boost::math::quadrature::tanh_sinh<double> ts;
  const double lo = prior.table().grid().front();
  EXPECT_NEAR(ts.integrate([&](double h) { return prior.density(h); }, 0.0, lo), prior.probability(0.0, lo), 1e-10);
}
