// Tour of the library: localize a circle diffeomorphism over a three-arc
// covering, slice a large rotation, decompose a Mobius element into shear
// generators, and evaluate the sign and Bott cocycles.

#include <cmath>
#include <cstdio>
#include <vector>

#include "locdiff/locdiff.hpp"

using namespace locdiff;

int main() {
  const Config cfg = default_config();

  // Three half-circle-plus-margin arcs covering the circle.
  std::vector<IntervalS1> arcs;
  for (int i = 0; i < 3; ++i) {
    const double lo = kTwoPi * double(i) / 3.0;
    arcs.push_back(IntervalS1::make(lo - 0.5, lo + kPi + 0.5));
  }
  const PartitionOfUnity part =
      build_partition(Covering::of_circle(arcs), 0.1, cfg);
  const double eps = epsilon_max(part, 1.0);
  std::printf("admissible displacement bound: %.6f\n", eps);

  // A small diffeomorphism x + 0.05 sin x + 0.03 cos 2x factors into three
  // maps, each supported in one covering arc.
  const CircleDiffeo phi = make_diffeo({0.0, 0.03}, {0.05}, 0.0, cfg);
  const LocalizedWord word = localize(phi, part, cfg);
  for (std::size_t i = 0; i < word.factors.size(); ++i) {
    const LocalizedFactor& f = word.factors[i];
    std::printf("factor %zu: arc [%.3f, %.3f], sup displacement %.2e\n", i + 1,
                f.interval.a, f.interval.b,
                metrics(f.diffeo).sup_displacement);
  }
  std::printf("product residual: %.2e\n",
              sup_lift_distance(word_product(word, cfg), phi));

  // A rotation by 3 exceeds the bound; slice it along the scaling path first.
  const std::vector<CircleDiffeo> slices =
      slice_factorize(CircleDiffeo::rotation(3.0), part, cfg);
  std::printf("rotation by 3 slices into %zu admissible pieces\n",
              slices.size());

  // Mobius: Iwasawa coordinates and the induced shear-generator word.
  const MoebiusElement g = MoebiusElement::from_matrix({1.2, 0.3, 0.4, 0.93333333333333333});
  const IwasawaCoords ic = iwasawa(g);
  std::printf("iwasawa: p = %.6f, tau = %.6f, t = %.6f\n", ic.p, ic.tau, ic.t);
  const std::vector<TSFactor> ts = ts_word(g);
  std::printf("shear word: %zu factors, residual %.2e\n", ts.size(),
              psl_distance(ts_product(ts), g));

  // The same element as a word of interval-supported diffeomorphisms.
  const LocalizedWord gw = moebius_word(g, part, cfg);
  std::printf("localized word: %zu factors, residual %.2e\n",
              gw.factors.size(),
              sup_lift_distance(word_product(gw, cfg), to_diffeo(g, cfg)));

  // Universal cover: winding accumulates in the pinned lift, and the
  // trivialization lands full turns on minus the identity matrix.
  CoverElement turn = cover_make(MoebiusElement::identity(), 0);
  const CoverElement quarter = cover_make(generator(GenKind::R, kPi / 2.0), 0);
  for (int k = 0; k < 4; ++k) turn = cover_compose(quarter, turn);
  const Mat2 m = cover_trivialize(turn);
  std::printf("full turn: lift %.6f, trivializes to [[%.0f, %.0f], [%.0f, %.0f]]\n",
              turn.lift_at_zero, m.a + 0.0, m.b + 0.0, m.c + 0.0, m.d + 0.0);

  // Scalar cocycles: the sign defect of the section and the Bott pairing.
  const SignSection sect;
  const MoebiusElement r = generator(GenKind::R, 1.5 * kPi);
  std::printf("sign cocycle on two three-quarter turns: %+d\n",
              sign_cocycle(sect, r, r));
  const CircleDiffeo psi_d = make_diffeo({0.0}, {0.0, 0.04}, 0.0, cfg);
  std::printf("bott pairing: %.6e\n", bott_cocycle(phi, psi_d, cfg));
  return 0;
}
