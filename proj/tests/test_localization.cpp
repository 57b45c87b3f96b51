#include <catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "locdiff/locdiff.hpp"
#include "test_util.hpp"

using namespace locdiff;

namespace {
const Config cfg = default_config();

Covering standard_cover() {
  std::vector<IntervalS1> arcs;
  for (int i = 0; i < 3; ++i) {
    const double lo = kTwoPi * double(i) / 3.0;
    arcs.push_back(IntervalS1::make(lo - 0.5, lo + kPi + 0.5));
  }
  return Covering::of_circle(arcs);
}

PartitionOfUnity standard_partition() {
  return build_partition(standard_cover(), 0.1, cfg);
}

Covering snug_cover() {
  std::vector<IntervalS1> arcs;
  for (int i = 0; i < 3; ++i) {
    const double lo = kTwoPi * double(i) / 3.0;
    arcs.push_back(IntervalS1::make(lo, lo + kPi));
  }
  return Covering::of_circle(arcs);
}

CircleDiffeo bump_diffeo(double center, double halfwidth, double amp) {
  const TrigPoly u = detail::fit_adaptive(
      [=](double x) {
        const double s = wrap_signed(x - center) / halfwidth;
        const double q = 1.0 - s * s;
        return q > 1e-9 ? amp * std::exp(-1.0 / q) : 0.0;
      },
      256, cfg, "bump");
  return CircleDiffeo::from_displacement(u, cfg);
}
}  // namespace

TEST_CASE("interpolant endpoints are exact") {
  const PartitionOfUnity p = standard_partition();
  const CircleDiffeo phi = make_diffeo({0.0}, {0.05}, 0.0, cfg);
  REQUIRE(psi(phi, p, 0, cfg).is_identity());
  const CircleDiffeo full = psi(phi, p, p.size(), cfg);
  REQUIRE(full.displacement().mean() == phi.displacement().mean());
  REQUIRE(full.displacement().sin_coeffs() == phi.displacement().sin_coeffs());
  REQUIRE(psi(CircleDiffeo::identity(), p, 1, cfg).is_identity());
  REQUIRE_THROWS_AS(psi(phi, p, 4, cfg), ValidationError);
}

TEST_CASE("interpolant displacement is the weighted displacement") {
  const PartitionOfUnity p = standard_partition();
  const CircleDiffeo phi = make_diffeo({0.0}, {0.05}, 0.0, cfg);
  const CircleDiffeo p1 = psi(phi, p, 1, cfg);
  double worst = 0.0;
  for (int j = 0; j < 512; ++j) {
    const double x = kTwoPi * double(j) / 512.0;
    const double expect = p.weight(0, x) * 0.05 * std::sin(x);
    worst = std::max(worst, std::fabs(p1.displacement()(x) - expect));
  }
  REQUIRE(worst < 1e-9);
}

TEST_CASE("localizing the identity gives identity factors on the arcs") {
  const PartitionOfUnity p = standard_partition();
  const LocalizedWord w = localize(CircleDiffeo::identity(), p, cfg);
  REQUIRE(w.factors.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    REQUIRE(w.factors[i].diffeo.is_identity());
    REQUIRE(w.factors[i].interval.a == p.interval(i).a);
    REQUIRE(w.factors[i].interval.b == p.interval(i).b);
  }
}

TEST_CASE("localization round trip, supports, and telescoping") {
  const PartitionOfUnity p = standard_partition();
  const double eps = epsilon_max(p, 1.0);
  testutil::Rng rng(2026);
  for (int c = 0; c < 5; ++c) {
    const CircleDiffeo phi =
        testutil::random_diffeo(rng, 16, 0.6 * eps, 0.35, cfg);
    REQUIRE(in_neighborhood(phi, eps));
    const LocalizedWord w = localize(phi, p, cfg);
    REQUIRE(w.factors.size() == 3);

    REQUIRE(sup_lift_distance(word_product(w, cfg), phi) < 1e-8);

    CircleDiffeo acc = CircleDiffeo::identity();
    for (const LocalizedFactor& f : w.factors)
      acc = compose(f.diffeo, acc, cfg);
    REQUIRE(sup_lift_distance(acc, phi) < 1e-9);

    for (const LocalizedFactor& f : w.factors) {
      const SupportResult s = support(f.diffeo, 1e-8);
      REQUIRE(s.kind != SupportResult::Kind::Full);
      if (s.kind == SupportResult::Kind::Arc)
        REQUIRE(f.interval.contains_arc(s.arc, 1e-8));
    }
  }
}

TEST_CASE("localization rejects maps outside the admissible neighborhood") {
  const PartitionOfUnity p = standard_partition();
  REQUIRE_THROWS_AS(localize(CircleDiffeo::rotation(1.0), p, cfg),
                    OutsideNeighborhood);
}

TEST_CASE("a bump inside one full-weight region localizes to a single factor") {
  // On the snug pi-length cover with margin 0.05 the first weight is
  // identically 1 on (0.89, 2.25); a displacement supported in (1.0, 2.0)
  // therefore reproduces as factor one with identity companions.
  const PartitionOfUnity p = build_partition(snug_cover(), 0.05, cfg);
  const CircleDiffeo phi = bump_diffeo(1.5, 0.5, 0.05);
  const LocalizedWord w = localize(phi, p, cfg);
  REQUIRE(sup_lift_distance(w.factors[0].diffeo, phi) < 1e-9);
  REQUIRE(metrics(w.factors[1].diffeo).sup_displacement < 1e-9);
  REQUIRE(metrics(w.factors[2].diffeo).sup_displacement < 1e-9);
}

TEST_CASE("localization is continuous in the input") {
  const PartitionOfUnity p = standard_partition();
  const double h = 1e-4;
  const CircleDiffeo a = make_diffeo({0.0}, {0.05}, 0.0, cfg);
  const CircleDiffeo b = make_diffeo({0.0}, {0.05 + h}, 0.0, cfg);
  const LocalizedWord wa = localize(a, p, cfg);
  const LocalizedWord wb = localize(b, p, cfg);
  for (std::size_t i = 0; i < 3; ++i)
    REQUIRE(sup_lift_distance(wa.factors[i].diffeo, wb.factors[i].diffeo) <
            5.0 * h);
}

TEST_CASE("interpolation path endpoints and scaling") {
  const CircleDiffeo phi = make_diffeo({0.0}, {0.3}, 0.0, cfg);
  REQUIRE(interpolation_path(phi, 0.0, cfg).is_identity());
  REQUIRE(interpolation_path(phi, 1.0, cfg).displacement().sin_coeffs() ==
          phi.displacement().sin_coeffs());
  const CircleDiffeo half = interpolation_path(phi, 0.5, cfg);
  REQUIRE(std::fabs(half.displacement().sin_coeffs()[0] - 0.15) < 1e-15);
  for (double lam : {0.25, 0.5, 0.75})
    REQUIRE(std::fabs(metrics(interpolation_path(phi, lam, cfg)).sup_displacement -
                      lam * 0.3) < 1e-8);
  REQUIRE_THROWS_AS(interpolation_path(phi, -0.1, cfg), ValidationError);
  REQUIRE_THROWS_AS(interpolation_path(phi, 1.1, cfg), ValidationError);
}

TEST_CASE("slicing passes small maps through and splits large ones") {
  const PartitionOfUnity p = standard_partition();
  const double eps = epsilon_max(p, 1.0);

  const CircleDiffeo small = make_diffeo({0.0}, {0.05}, 0.0, cfg);
  const std::vector<CircleDiffeo> one = slice_factorize(small, p, cfg);
  REQUIRE(one.size() == 1);
  REQUIRE(one[0].displacement().sin_coeffs() ==
          small.displacement().sin_coeffs());

  REQUIRE(slice_factorize(CircleDiffeo::identity(), p, cfg).size() == 1);

  const CircleDiffeo rot3 = CircleDiffeo::rotation(3.0);
  const std::vector<CircleDiffeo> slices = slice_factorize(rot3, p, cfg);
  // doubling from 2 stops at the first power of two with 3 / n < eps
  std::size_t expect = 2;
  while (3.0 / double(expect) >= eps) expect *= 2;
  REQUIRE(slices.size() == expect);
  CircleDiffeo acc = CircleDiffeo::identity();
  for (const CircleDiffeo& f : slices) {
    REQUIRE(in_neighborhood(f, eps));
    acc = compose(f, acc, cfg);
  }
  REQUIRE(sup_lift_distance(acc, rot3) < 1e-9);
}

TEST_CASE("slices of a generic large map localize piecewise") {
  const PartitionOfUnity p = standard_partition();
  const double eps = epsilon_max(p, 1.0);
  testutil::Rng rng(8);
  const CircleDiffeo big = testutil::random_diffeo(rng, 12, 1.5, 0.9, cfg);
  REQUIRE(!in_neighborhood(big, eps));
  const std::vector<CircleDiffeo> slices = slice_factorize(big, p, cfg);
  REQUIRE(slices.size() >= 2);
  CircleDiffeo acc = CircleDiffeo::identity();
  for (const CircleDiffeo& f : slices) {
    REQUIRE(in_neighborhood(f, eps));
    REQUIRE(word_product(localize(f, p, cfg), cfg).mode_count() > 0);
    acc = compose(f, acc, cfg);
  }
  REQUIRE(sup_lift_distance(acc, big) < 1e-7);
}

TEST_CASE("adapted three-arc covering") {
  const IntervalS1 I = IntervalS1::make(0.1, kTwoPi - 0.1);
  const IntervalS1 J = IntervalS1::make(kTwoPi - 1.0, kTwoPi + 1.0);
  const Covering c = three_interval_cover(I, J);
  REQUIRE(c.size() == 3);
  const double W = kTwoPi - J.length();
  const IntervalS1 Jp = IntervalS1::make(J.b, J.b + W);
  REQUIRE(Jp.contains_arc(c[2], 0.0));
  for (std::size_t i = 0; i < 3; ++i) REQUIRE(I.contains_arc(c[i], 1e-12));

  // closures that miss part of the circle are out of scope
  REQUIRE_THROWS_AS(
      three_interval_cover(I, IntervalS1::make(kPi - 0.5, kPi + 0.5)),
      NotApplicable);
  REQUIRE_THROWS_AS(three_interval_cover(IntervalS1::make(0.1, 1.0),
                                         IntervalS1::make(2.0, 3.0)),
                    NotApplicable);

  // a second arc leaving no usable complement interior
  REQUIRE_THROWS_AS(
      three_interval_cover(I, IntervalS1::make(0.5, 0.5 + kTwoPi - 1e-9)),
      Infeasible);
}
