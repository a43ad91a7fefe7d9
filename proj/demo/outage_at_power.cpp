// Prints the analytic outage, rates and R0 of the default scenario at a
// transmit power given in dBm (default -5).

#include <cstdio>
#include <cstdlib>

#include "risprop/risprop.hpp"

int main(int argc, char** argv) {
  risprop::ExperimentConfig cfg;
  if (argc > 1) cfg.power_dbm = std::atof(argv[1]);
  const risprop::OutageParams op = risprop::outage_params(cfg);
  const double po = risprop::outage_probability(op, risprop::Stage::before);
  const double pp = risprop::outage_probability(op, risprop::Stage::after);
  const auto r0 = risprop::propagation_intensity(po, pp);
  std::printf("P = %g dBm\n", cfg.power_dbm);
  std::printf("S0 gamma fit: shape %.6g, scale %.6g W\n", op.fit.shape, op.fit.scale);
  std::printf("P_o = %.6f, P_o' = %.6f\n", po, pp);
  std::printf("beta = %.6f, mu = %.6f, R0 = %.4f\n", r0.beta, r0.mu, r0.value);
  return 0;
}
