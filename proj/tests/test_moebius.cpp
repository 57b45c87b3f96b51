#include <catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "locdiff/locdiff.hpp"
#include "test_util.hpp"

using namespace locdiff;

namespace {
const Config cfg = default_config();
using K = TSFactor::Kind;
}  // namespace

TEST_CASE("generators and canonical sign") {
  REQUIRE(generator(GenKind::T, 0.0).is_identity());
  REQUIRE(psl_distance(generator(GenKind::R, kTwoPi),
                       MoebiusElement::identity()) < 1e-12);
  const MoebiusElement d = generator(GenKind::D, 2.0 * std::log(2.0));
  REQUIRE(std::fabs(d.a() - 2.0) < 1e-14);
  REQUIRE(std::fabs(d.d() - 0.5) < 1e-15);
  REQUIRE(d.b() == 0.0);
  REQUIRE(d.c() == 0.0);
  REQUIRE(MoebiusElement::from_matrix({-1.0, 0.0, 0.0, -1.0}).is_identity());
  REQUIRE_THROWS_AS(MoebiusElement::from_matrix({1.0, 0.0, 0.0, 2.0}),
                    ValidationError);
}

TEST_CASE("inverse and group laws") {
  testutil::Rng rng(11);
  for (int i = 0; i < 50; ++i) {
    const MoebiusElement g = testutil::random_moebius(rng, 2.5, 4.0);
    REQUIRE(psl_distance(g * g.inverse(), MoebiusElement::identity()) < 1e-13);
    REQUIRE(psl_distance(g.inverse() * g, MoebiusElement::identity()) < 1e-13);
  }
  for (int i = 0; i < 50; ++i) {
    const MoebiusElement x = testutil::random_moebius(rng, 2.0, 3.0);
    const MoebiusElement y = testutil::random_moebius(rng, 2.0, 3.0);
    const MoebiusElement z = testutil::random_moebius(rng, 2.0, 3.0);
    REQUIRE(psl_distance((x * y) * z, x * (y * z)) < 1e-11);
  }
}

TEST_CASE("circle action worked values and homomorphism") {
  REQUIRE(act_on_circle(MoebiusElement::identity(), 1.0) == 1.0);
  REQUIRE(std::fabs(wrap_angle(act_on_circle(generator(GenKind::R, 0.7), 1.0)) -
                    1.7) < 1e-14);
  REQUIRE(std::fabs(act_on_circle(generator(GenKind::T, 1.0), 0.0) -
                    kPi / 2.0) < 1e-15);

  testutil::Rng rng(23);
  for (int i = 0; i < 40; ++i) {
    const MoebiusElement g = testutil::random_moebius(rng, 2.0, 3.0);
    const MoebiusElement h = testutil::random_moebius(rng, 2.0, 3.0);
    const double theta = rng.uniform(0.0, kTwoPi);
    const double lhs = act_on_circle(g * h, theta);
    const double rhs = act_on_circle(g, act_on_circle(h, theta));
    REQUIRE(std::fabs(wrap_signed(lhs - rhs)) < 1e-12);
  }
}

TEST_CASE("action derivative matches finite differences") {
  testutil::Rng rng(29);
  for (int i = 0; i < 30; ++i) {
    const MoebiusElement g = testutil::random_moebius(rng, 1.5, 2.0);
    const double theta = rng.uniform(0.0, kTwoPi);
    const double h = 1e-6;
    const double fd = wrap_signed(act_on_circle(g, theta + h) -
                                  act_on_circle(g, theta - h)) / (2.0 * h);
    REQUIRE(std::fabs(act_derivative(g, theta) - fd) < 1e-6);
  }
}

TEST_CASE("iwasawa worked values") {
  const IwasawaCoords id = iwasawa(MoebiusElement::identity());
  REQUIRE(id.p == 0.0);
  REQUIRE(id.tau == 0.0);
  REQUIRE(id.t == 0.0);

  const IwasawaCoords tr = iwasawa(generator(GenKind::T, 2.0));
  REQUIRE(std::fabs(tr.p - 2.0) < 1e-15);
  REQUIRE(std::fabs(tr.tau) < 1e-15);
  REQUIRE(std::fabs(tr.t) < 1e-15);

  const IwasawaCoords s1 = iwasawa(generator(GenKind::S, 1.0));
  REQUIRE(std::fabs(s1.p - 0.5) < 1e-12);
  REQUIRE(std::fabs(s1.tau + std::log(2.0)) < 1e-12);
  REQUIRE(std::fabs(s1.t - 1.5 * kPi) < 1e-12);
}

TEST_CASE("iwasawa reconstruction on random elements") {
  testutil::Rng rng(37);
  for (int i = 0; i < 200; ++i) {
    const MoebiusElement g = testutil::random_moebius(rng, 3.0, 5.0);
    const IwasawaCoords ic = iwasawa(g);
    REQUIRE(ic.t >= 0.0);
    REQUIRE(ic.t < kTwoPi);
    REQUIRE(psl_distance(iwasawa_reconstruct(ic), g) < 1e-12);
  }
}

TEST_CASE("iwasawa coordinates vary continuously along a smooth path") {
  IwasawaCoords prev = iwasawa(MoebiusElement::identity());
  const double step = 1e-3;
  for (int k = 1; k <= 1000; ++k) {
    const double s = step * double(k);
    const MoebiusElement g = generator(GenKind::T, s) *
                             generator(GenKind::D, std::sin(s)) *
                             generator(GenKind::R, s);
    const IwasawaCoords ic = iwasawa(g);
    REQUIRE(std::fabs(ic.p - prev.p) < 10.0 * step);
    REQUIRE(std::fabs(ic.tau - prev.tau) < 10.0 * step);
    REQUIRE(std::fabs(ic.t - prev.t) < 10.0 * step);
    prev = ic;
  }
}

TEST_CASE("dilation word exact parameters and residuals") {
  const std::vector<TSFactor> w0 = dilation_word(0.0);
  REQUIRE(w0.size() == 4);
  REQUIRE(w0[0].kind == K::SpecialConformal);
  REQUIRE(w0[0].param == 0.0);
  REQUIRE(w0[1].kind == K::Translation);
  REQUIRE(w0[1].param == 1.0);
  REQUIRE(w0[2].param == 0.0);
  REQUIRE(w0[3].param == -1.0);

  const std::vector<TSFactor> w2 = dilation_word(2.0 * std::log(2.0));
  REQUIRE(std::fabs(w2[0].param + 0.5) < 1e-15);
  REQUIRE(std::fabs(w2[2].param - 1.0) < 1e-15);
  REQUIRE(std::fabs(w2[3].param + 0.5) < 1e-15);

  for (double tau = -3.0; tau <= 3.0 + 1e-12; tau += 0.1)
    REQUIRE(psl_distance(ts_product(dilation_word(tau)),
                         generator(GenKind::D, tau)) < 1e-12);

  // parameters move continuously in tau
  const std::vector<TSFactor> a = dilation_word(0.7);
  const std::vector<TSFactor> b = dilation_word(0.7 + 1e-6);
  for (std::size_t i = 0; i < 4; ++i)
    REQUIRE(std::fabs(a[i].param - b[i].param) < 1e-5);
}

TEST_CASE("rotation word branches") {
  REQUIRE(rotation_word(0.0).empty());

  const std::vector<TSFactor> wpi = rotation_word(kPi);
  REQUIRE(wpi.size() == 3);
  REQUIRE(std::fabs(wpi[0].param + 1.0) < 1e-15);
  REQUIRE(std::fabs(wpi[1].param - 1.0) < 1e-15);
  REQUIRE(std::fabs(wpi[2].param + 1.0) < 1e-15);

  // splits once near 2pi (sine small, cosine negative)
  const double near_full = kTwoPi - 1e-3;
  REQUIRE(rotation_word(near_full).size() == 6);
  REQUIRE(psl_distance(ts_product(rotation_word(near_full)),
                       generator(GenKind::R, near_full)) < 1e-11);

  // stable tangent form near 4pi (sine small, cosine positive)
  const double near_double = 2.0 * kTwoPi - 1e-3;
  REQUIRE(rotation_word(near_double).size() == 3);
  REQUIRE(psl_distance(ts_product(rotation_word(near_double)),
                       generator(GenKind::R, near_double)) < 1e-11);

  for (int j = 0; j < 200; ++j) {
    const double alpha = 2.0 * kTwoPi * double(j) / 200.0;
    REQUIRE(psl_distance(ts_product(rotation_word(alpha)),
                         generator(GenKind::R, alpha)) < 1e-11);
  }
}

TEST_CASE("generator word through the iwasawa route") {
  REQUIRE(ts_word(MoebiusElement::identity()).empty());
  REQUIRE(ts_word(generator(GenKind::D, 1.0)).size() == 4);

  testutil::Rng rng(41);
  for (int i = 0; i < 20; ++i) {
    const MoebiusElement g = testutil::random_moebius(rng, 3.0, 5.0);
    const std::vector<TSFactor> w = ts_word(g);
    REQUIRE(w.size() <= 11);
    REQUIRE(psl_distance(ts_product(w), g) < 1e-10);
  }
}

TEST_CASE("moebius action as a circle diffeomorphism") {
  REQUIRE(to_diffeo(MoebiusElement::identity(), cfg).is_identity());

  const CircleDiffeo r = to_diffeo(generator(GenKind::R, 0.3), cfg);
  REQUIRE(r.displacement().degree() == 0);
  REQUIRE(std::fabs(r.displacement().mean() - 0.3) < 1e-15);

  const CircleDiffeo t1 = to_diffeo(generator(GenKind::T, 1.0), cfg);
  REQUIRE(std::fabs(t1.lift(0.0) - kPi / 2.0) < 1e-12);

  testutil::Rng rng(43);
  for (int i = 0; i < 5; ++i) {
    const MoebiusElement g = testutil::random_moebius(rng, 2.0, 3.0);
    const CircleDiffeo d = to_diffeo(g, cfg);
    for (int j = 0; j < 64; ++j) {
      const double x = kTwoPi * double(j) / 64.0;
      REQUIRE(std::fabs(wrap_signed(d.lift(x) - act_on_circle(g, x))) < 1e-9);
    }
  }

  REQUIRE_THROWS_AS(to_diffeo(generator(GenKind::D, 26.0), cfg), ModeOverflow);
}

TEST_CASE("the action functor is a homomorphism") {
  testutil::Rng rng(47);
  for (int i = 0; i < 10; ++i) {
    const MoebiusElement g = testutil::random_moebius(rng, 1.5, 2.0);
    const MoebiusElement h = testutil::random_moebius(rng, 1.5, 2.0);
    const CircleDiffeo lhs = compose(to_diffeo(g, cfg), to_diffeo(h, cfg), cfg);
    const CircleDiffeo rhs = to_diffeo(g * h, cfg);
    REQUIRE(sup_lift_distance(lhs, rhs) < 1e-8);
  }
}
