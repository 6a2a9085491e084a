// Prints the fGn PC prior for three tail calibrations as CSV, then the
// distance-scale mode induced by a uniform prior on H.

#include <algorithm>
#include <cstdio>
#include <memory>

#include <pcfgn/pc_prior.hpp>

int main() {
  using namespace pcfgn;
  auto table = std::make_shared<const DistanceTable>(fgn_distance_table());
  const double alphas[] = {0.10, 0.15, 0.20};
  PcPrior priors[] = {fgn_pc_prior(table, 0.9, alphas[0]), fgn_pc_prior(table, 0.9, alphas[1]),
                      fgn_pc_prior(table, 0.9, alphas[2])};
  for (int i = 0; i < 3; ++i) {
    std::printf("# alpha=%.2f lambda=%.4f P(H>0.9)=%.4f\n", alphas[i], priors[i].rate(),
                priors[i].probability(0.9, 1.0));
  }
  std::printf("H,alpha_0.10,alpha_0.15,alpha_0.20\n");
  for (int k = 1; k < 100; ++k) {
    const double h = k / 100.0;
    std::printf("%.2f,%.6f,%.6f,%.6f\n", h, priors[0].density(h), priors[1].density(h), priors[2].density(h));
  }
  const auto dd = induced_distance_density([](double) { return 1.0; }, *table, true);
  const auto mode = std::max_element(dd.begin(), dd.end(),
                                     [](const auto& a, const auto& b) { return a.density < b.density; });
  std::printf("# uniform prior on H: distance-scale mode at %.4f, i.e. H=%.3f\n", mode->distance, mode->theta);
}
