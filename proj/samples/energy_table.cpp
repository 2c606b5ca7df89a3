// Prints U/(N hbar omega) of the zero-point deformed oscillator against
// temperature for a few deformations, next to the undeformed value.

#include <cstdio>

#include "qdeform/qdeform.hpp"

int main() {
  const double gammas[] = {0.0, 0.01, 0.1};
  std::printf("%10s", "kT/hw");
  for (double g : gammas) std::printf("  gamma=%-8g", g);
  std::printf("\n");
  for (double t : {0.02, 0.1, 0.5, 1.0, 2.0, 10.0, 100.0}) {
    const double x = 1.0 / t;
    std::printf("%10g", t);
    for (double g : gammas) {
      const qdeform::ModePoint p(x, qdeform::DeformationParameter::from_gamma(g));
      if (!p.below_pole()) {
        std::printf("  %-14s", "-");
        continue;
      }
      std::printf("  %-14.8f", qdeform::deformed_distribution_zpe(p).value);
    }
    std::printf("\n");
  }
}
