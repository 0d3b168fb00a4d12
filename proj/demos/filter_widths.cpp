#include <cstdio>

#include "atomloc/atomloc.hpp"

using namespace atomloc;

// Localization widths and branch probabilities of the dual measurement on a
// flat-top packet, for three representative quadrature outcomes. The width
// window covers one sin^2 period so the comb of equivalent wells does not
// inflate the spread.
int main() {
  WavepacketSpec spec;
  const Grid g = make_grid(spec, 12);
  const auto f = build_wavepacket(spec, g);

  std::printf("%10s  %9s  %9s  %11s  %11s  %11s\n", "chi0", "P(a)", "P(b)", "width(a)",
              "width(b)", "width(env)");
  for (double m : {2.0, 0.0, -2.0}) {
    InteractionConfig cfg;
    cfg.chi0 = m * cfg.alpha;
    const auto t = position_distribution(g, f, cfg);
    std::printf("%10.4f  %9.6f  %9.6f  %11.6f  %11.6f  %11.6f\n", cfg.chi0, t.prob_a, t.prob_b,
                localization_width(t, Column::p_a, 0.0, pi / 2.0),
                localization_width(t, Column::p_b, 0.0, pi / 2.0),
                localization_width(t, Column::envelope, 0.0, pi / 2.0));
  }
  return 0;
}
