#include <catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "locdiff/locdiff.hpp"
#include "test_util.hpp"

using namespace locdiff;

namespace {
const Config cfg = default_config();

Mat2 so2_identity() { return {1.0, 0.0, 0.0, 1.0}; }
}  // namespace

TEST_CASE("cover elements pin the lift at zero") {
  const CoverElement id0 = cover_make(MoebiusElement::identity(), 0);
  REQUIRE(id0.lift_at_zero == 0.0);
  const CoverElement id1 = cover_make(MoebiusElement::identity(), 1);
  REQUIRE(std::fabs(id1.lift_at_zero - kTwoPi) < 1e-15);

  const CoverElement rp = cover_make(generator(GenKind::R, kPi), 0);
  REQUIRE(std::fabs(rp.lift_at_zero - kPi) < 1e-14);
  const CoverElement rp1 = cover_make(generator(GenKind::R, kPi), 1);
  REQUIRE(std::fabs(rp1.lift_at_zero - 3.0 * kPi) < 1e-14);

  testutil::Rng rng(3);
  for (int i = 0; i < 50; ++i) {
    const MoebiusElement g = testutil::random_moebius(rng, 2.0, 3.0);
    const long branch = long(rng.next() % 5) - 2;
    const CoverElement a = cover_make(g, branch);
    REQUIRE(std::fabs(wrap_signed(a.lift_at_zero -
                                  act_on_circle(g, 0.0))) < 1e-10);
  }
}

TEST_CASE("cover lift is monotone and equivariant") {
  testutil::Rng rng(7);
  for (int i = 0; i < 20; ++i) {
    const MoebiusElement g = testutil::random_moebius(rng, 2.0, 3.0);
    const CoverElement a = cover_make(g, 0);
    double prev = cover_lift(a, -kTwoPi);
    for (int j = 1; j <= 256; ++j) {
      const double y = -kTwoPi + 4.0 * kTwoPi * double(j) / 256.0;
      const double v = cover_lift(a, y);
      REQUIRE(v > prev);
      REQUIRE(std::fabs(cover_lift(a, y + kTwoPi) - v - kTwoPi) < 1e-10);
      REQUIRE(std::fabs(wrap_signed(v - act_on_circle(g, y))) < 1e-10);
      prev = v;
    }
  }
}

TEST_CASE("cover composition tracks winding") {
  const CoverElement rp = cover_make(generator(GenKind::R, kPi), 0);
  const CoverElement full = cover_compose(rp, rp);
  REQUIRE(psl_distance(full.base, MoebiusElement::identity()) < 1e-13);
  REQUIRE(std::fabs(full.lift_at_zero - kTwoPi) < 1e-13);

  // n quarter turns accumulate n/4 full turns of lift
  for (int n : {2, 3, 8}) {
    const double step = kTwoPi / double(n);
    CoverElement acc = cover_make(MoebiusElement::identity(), 0);
    const CoverElement piece = cover_make(generator(GenKind::R, step), 0);
    for (int k = 0; k < n; ++k) acc = cover_compose(piece, acc);
    REQUIRE(std::fabs(acc.lift_at_zero - kTwoPi) < 1e-9);
    REQUIRE(psl_distance(acc.base, MoebiusElement::identity()) < 1e-11);
  }

  testutil::Rng rng(13);
  for (int i = 0; i < 20; ++i) {
    const CoverElement a = cover_make(testutil::random_moebius(rng, 1.5, 2.0), 0);
    const CoverElement b = cover_make(testutil::random_moebius(rng, 1.5, 2.0), 0);
    const CoverElement c = cover_make(testutil::random_moebius(rng, 1.5, 2.0), 0);
    const CoverElement left = cover_compose(cover_compose(a, b), c);
    const CoverElement right = cover_compose(a, cover_compose(b, c));
    REQUIRE(psl_distance(left.base, right.base) < 1e-11);
    REQUIRE(std::fabs(left.lift_at_zero - right.lift_at_zero) < 1e-9);
    REQUIRE(psl_distance(cover_project(cover_compose(a, b)),
                         cover_project(a) * cover_project(b)) < 1e-11);

    const CoverElement via_id =
        cover_compose(a, cover_make(MoebiusElement::identity(), 0));
    REQUIRE(psl_distance(via_id.base, a.base) < 1e-13);
    REQUIRE(std::fabs(via_id.lift_at_zero - a.lift_at_zero) < 1e-12);
  }
}

TEST_CASE("trivialization sends the cover into the matrix double cover") {
  REQUIRE(mat_max_abs_diff(
              cover_trivialize(cover_make(MoebiusElement::identity(), 0)),
              so2_identity()) == 0.0);

  // one full turn of lift lands on minus the identity
  const CoverElement full = cover_make(MoebiusElement::identity(), 1);
  REQUIRE(mat_max_abs_diff(cover_trivialize(full),
                           mat_neg(so2_identity())) < 1e-10);

  // deck shift by 4pi returns the same matrix, by 2pi negates it
  testutil::Rng rng(17);
  for (int i = 0; i < 25; ++i) {
    const MoebiusElement g = testutil::random_moebius(rng, 1.5, 2.0);
    const Mat2 m0 = cover_trivialize(cover_make(g, 0));
    const Mat2 m1 = cover_trivialize(cover_make(g, 1));
    const Mat2 m2 = cover_trivialize(cover_make(g, 2));
    REQUIRE(mat_max_abs_diff(m1, mat_neg(m0)) < 1e-10);
    REQUIRE(mat_max_abs_diff(m2, m0) < 1e-10);
    REQUIRE(std::fabs(mat_det(m0) - 1.0) < 1e-12);
    REQUIRE(psl_distance(MoebiusElement::from_matrix(m0), g) < 1e-10);
  }

  // homomorphism into SL(2,R)
  for (int i = 0; i < 25; ++i) {
    const CoverElement a =
        cover_make(testutil::random_moebius(rng, 1.5, 2.0),
                   long(rng.next() % 3) - 1);
    const CoverElement b =
        cover_make(testutil::random_moebius(rng, 1.5, 2.0),
                   long(rng.next() % 3) - 1);
    const Mat2 lhs = cover_trivialize(cover_compose(a, b));
    const Mat2 rhs = mat_mul(cover_trivialize(a), cover_trivialize(b));
    REQUIRE(mat_max_abs_diff(lhs, rhs) < 1e-10);
  }
}

TEST_CASE("branch zero trivialization matches the sign section") {
  const SignSection s;
  testutil::Rng rng(19);
  for (int i = 0; i < 40; ++i) {
    const MoebiusElement g = testutil::random_moebius(rng, 1.5, 2.0);
    const Mat2 triv = cover_trivialize(cover_make(g, 0));
    const Mat2 rep = s.representative(g);
    const double agree = mat_max_abs_diff(triv, rep);
    const double flip = mat_max_abs_diff(triv, mat_neg(rep));
    REQUIRE(std::min(agree, flip) < 1e-10);
  }
}

TEST_CASE("sign section representatives") {
  const SignSection s;
  testutil::Rng rng(21);
  for (int i = 0; i < 100; ++i) {
    const MoebiusElement g = testutil::random_moebius(rng, 2.0, 3.0);
    const Mat2 rep = s.representative(g);
    REQUIRE(std::fabs(mat_det(rep) - 1.0) < 1e-12);
    REQUIRE(psl_distance(MoebiusElement::from_matrix(rep), g) < 1e-11);
    // the SO(2) angle of the representative sits in [0, pi) and doubles to
    // the group's rotation coordinate
    const double theta = std::atan2(-rep.c, rep.d);
    REQUIRE(theta >= -1e-14);
    REQUIRE(theta < kPi);
    REQUIRE(std::fabs(wrap_angle(2.0 * theta) - iwasawa(g).t) < 1e-10);
  }
}

TEST_CASE("sign cocycle values and cocycle identity") {
  const SignSection s;
  REQUIRE(sign_cocycle(s, MoebiusElement::identity(),
                       MoebiusElement::identity()) == 1);
  const MoebiusElement r34 = generator(GenKind::R, 1.5 * kPi);
  REQUIRE(sign_cocycle(s, r34, r34) == -1);
  REQUIRE(sign_cocycle(s, generator(GenKind::T, 0.8),
                       generator(GenKind::T, -2.3)) == 1);

  testutil::Rng rng(101);
  auto omega = [&s](const MoebiusElement& x, const MoebiusElement& y) {
    return double(sign_cocycle(s, x, y));
  };
  for (int i = 0; i < 100; ++i) {
    const MoebiusElement g = testutil::random_moebius(rng, 2.0, 3.0);
    const MoebiusElement h = testutil::random_moebius(rng, 2.0, 3.0);
    const MoebiusElement k = testutil::random_moebius(rng, 2.0, 3.0);
    REQUIRE(cocycle_identity_defect(omega, g, h, k) == 0.0);
  }
}

TEST_CASE("identity defect separates cocycles from near-cocycles") {
  // any +-1 coboundary b(g)b(h)/b(gh) passes the identity exactly
  auto b = [](const MoebiusElement& g) {
    return g.a() + g.d() >= 0.0 ? 1.0 : -1.0;
  };
  auto coboundary = [&b](const MoebiusElement& g, const MoebiusElement& h) {
    return b(g) * b(h) / b(g * h);
  };
  testutil::Rng rng(103);
  for (int i = 0; i < 50; ++i) {
    const MoebiusElement g = testutil::random_moebius(rng, 2.0, 3.0);
    const MoebiusElement h = testutil::random_moebius(rng, 2.0, 3.0);
    const MoebiusElement k = testutil::random_moebius(rng, 2.0, 3.0);
    REQUIRE(cocycle_identity_defect(coboundary, g, h, k) < 1e-12);
  }

  // a phase inserted for one particular pair breaks it measurably
  const MoebiusElement special = generator(GenKind::T, 1.0);
  auto crooked = [&special](const MoebiusElement& g, const MoebiusElement& h) {
    const bool hit = psl_distance(g, special) < 1e-9 &&
                     psl_distance(h, special) < 1e-9;
    return hit ? std::polar(1.0, 0.1) : std::complex<double>(1.0, 0.0);
  };
  const MoebiusElement other = generator(GenKind::S, 0.7);
  double defect = cocycle_identity_defect(crooked, special, special, other);
  REQUIRE(defect > 0.09);
}

TEST_CASE("bott pairing values") {
  // vanishes for rotations in either slot, exactly
  const CircleDiffeo rot = CircleDiffeo::rotation(1.1);
  testutil::Rng rng(107);
  const CircleDiffeo phi = testutil::random_diffeo(rng, 8, 0.3, 0.35, cfg);
  REQUIRE(bott_cocycle(rot, phi, cfg) == 0.0);
  REQUIRE(bott_cocycle(phi, rot, cfg) == 0.0);
  REQUIRE(bott_cocycle(CircleDiffeo::identity(), phi, cfg) == 0.0);
  REQUIRE(bott_cocycle(phi, CircleDiffeo::identity(), cfg) == 0.0);

  // doubling the quadrature points leaves the value unchanged
  Config fine = cfg;
  fine.bott_points = 2 * cfg.bott_points;
  const CircleDiffeo psi2 = testutil::random_diffeo(rng, 8, 0.3, 0.35, cfg);
  const double coarse_v = bott_cocycle(phi, psi2, cfg);
  const double fine_v = bott_cocycle(phi, psi2, fine);
  REQUIRE(std::fabs(coarse_v - fine_v) < 1e-12);
  REQUIRE(std::fabs(coarse_v) > 1e-6);  // generic pairs are nonzero
}

TEST_CASE("bott cocycle identity on random triples") {
  testutil::Rng rng(109);
  for (int i = 0; i < 5; ++i) {
    const CircleDiffeo a = testutil::random_diffeo(rng, 6, 0.3, 0.35, cfg);
    const CircleDiffeo b = testutil::random_diffeo(rng, 6, 0.3, 0.35, cfg);
    const CircleDiffeo c = testutil::random_diffeo(rng, 6, 0.3, 0.35, cfg);
    const CircleDiffeo ab = compose(a, b, cfg);
    const CircleDiffeo bc = compose(b, c, cfg);
    const double lhs = bott_cocycle(a, b, cfg) + bott_cocycle(ab, c, cfg);
    const double rhs = bott_cocycle(a, bc, cfg) + bott_cocycle(b, c, cfg);
    REQUIRE(std::fabs(lhs - rhs) < 1e-8);
  }
}
