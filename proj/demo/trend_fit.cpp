// Simulates y_t = 0.006 t + fGn(H=0.8, sd 0.2) and compares fGn against
// AR(1) noise with a linear trend in both models.

#include <cstdio>
#include <memory>

#include <pcfgn/marginal_likelihood.hpp>

int main() {
  using namespace pcfgn;
  const std::size_t n = 656;
  auto y = fgn_sample({0.8, 25.0}, n, 2024);
  for (std::size_t t = 0; t < n; ++t) y[t] += 0.006 * static_cast<double>(t + 1);

  auto fgn_prior = std::make_shared<const PcPrior>(
      fgn_pc_prior(std::make_shared<const DistanceTable>(fgn_distance_table()), 0.9, 0.10));
  auto ar1_prior = std::make_shared<const PcPrior>(
      ar1_pc_prior(std::make_shared<const DistanceTable>(ar1_distance_table()), fgn_prior->rate()));
  const auto prec = PrecisionPrior::from_tail(1.0, 0.01);
  const auto fs = make_model_spec(NoiseKind::Fgn, fgn_prior, prec, Trend::Linear, n);
  const auto as = make_model_spec(NoiseKind::Ar1, ar1_prior, prec, Trend::Linear, n);

  const auto rf = fit(y, fs);
  const auto ra = fit(y, as);
  const auto bf = make_bayes_factor(rf.log_marginal_likelihood, ra.log_marginal_likelihood);
  auto show = [](const char* name, const ParameterSummary& s) {
    std::printf("  %-6s %8.4f  [%8.4f, %8.4f]\n", name, s.mean, s.lower, s.upper);
  };
  std::printf("fGn   log ML %.3f\n", rf.log_marginal_likelihood);
  show("H", rf.flex);
  show("sigma", rf.sigma);
  show("slope", rf.beta[1]);
  std::printf("AR(1) log ML %.3f\n", ra.log_marginal_likelihood);
  show("phi", ra.flex);
  show("sigma", ra.sigma);
  show("slope", ra.beta[1]);
  std::printf("Bayes factor fGn/AR(1) = %.4g (%s)\n", bf.bf, std::string(category_name(bf.category)).c_str());
}
