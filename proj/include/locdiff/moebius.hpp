#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "locdiff/angle.hpp"
#include "locdiff/circle_diffeo.hpp"
#include "locdiff/config.hpp"
#include "locdiff/errors.hpp"
#include "locdiff/fit.hpp"

namespace locdiff {

// Plain 2x2 real matrix; the SL(2,R) layer where signs are meaningful.
struct Mat2 {
  double a = 1.0, b = 0.0, c = 0.0, d = 1.0;
};

inline Mat2 mat_mul(const Mat2& x, const Mat2& y) {
  return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d,
          x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
}

inline double mat_det(const Mat2& m) { return m.a * m.d - m.b * m.c; }

inline double mat_frobenius2(const Mat2& m) {
  return m.a * m.a + m.b * m.b + m.c * m.c + m.d * m.d;
}

inline double mat_max_abs_diff(const Mat2& x, const Mat2& y) {
  double r = std::fabs(x.a - y.a);
  r = std::max(r, std::fabs(x.b - y.b));
  r = std::max(r, std::fabs(x.c - y.c));
  r = std::max(r, std::fabs(x.d - y.d));
  return r;
}

inline Mat2 mat_neg(const Mat2& m) { return {-m.a, -m.b, -m.c, -m.d}; }

// Unit-determinant matrix modulo sign: the first row-major entry of
// magnitude above 1e-13 is kept positive, so equal group elements have
// equal matrices.
class MoebiusElement {
public:
  MoebiusElement() = default;

  static MoebiusElement from_matrix(const Mat2& m) {
    const double det = mat_det(m);
    if (!(std::fabs(det - 1.0) < 1e-12))
      throw ValidationError("matrix determinant " + std::to_string(det) +
                            " is not 1");
    MoebiusElement g;
    const double s = 1.0 / std::sqrt(det);
    g.m_ = {m.a * s, m.b * s, m.c * s, m.d * s};
    g.canonicalize();
    return g;
  }

  static MoebiusElement identity() { return MoebiusElement(); }

  const Mat2& matrix() const { return m_; }
  double a() const { return m_.a; }
  double b() const { return m_.b; }
  double c() const { return m_.c; }
  double d() const { return m_.d; }

  bool is_identity() const {
    return m_.a == 1.0 && m_.b == 0.0 && m_.c == 0.0 && m_.d == 1.0;
  }

  MoebiusElement inverse() const {
    MoebiusElement g;
    g.m_ = {m_.d, -m_.b, -m_.c, m_.a};  // adjugate; det is already 1
    g.canonicalize();
    return g;
  }

  friend MoebiusElement operator*(const MoebiusElement& x, const MoebiusElement& y) {
    const Mat2 m = mat_mul(x.m_, y.m_);
    MoebiusElement g;
    const double s = 1.0 / std::sqrt(mat_det(m));  // shave rounding drift
    g.m_ = {m.a * s, m.b * s, m.c * s, m.d * s};
    g.canonicalize();
    return g;
  }

private:
  void canonicalize() {
    for (double v : {m_.a, m_.b, m_.c, m_.d}) {
      if (std::fabs(v) <= 1e-13) continue;
      if (v < 0.0) m_ = mat_neg(m_);
      return;
    }
  }

  Mat2 m_;
};

// distance in the quotient: the sign ambiguity is minimized over
inline double psl_distance(const MoebiusElement& x, const MoebiusElement& y) {
  return std::min(mat_max_abs_diff(x.matrix(), y.matrix()),
                  mat_max_abs_diff(x.matrix(), mat_neg(y.matrix())));
}

enum class GenKind { T, S, D, R };

inline Mat2 translation_mat(double p) { return {1.0, p, 0.0, 1.0}; }
inline Mat2 special_conformal_mat(double s) { return {1.0, 0.0, s, 1.0}; }
inline Mat2 dilation_mat(double tau) {
  const double e = std::exp(0.5 * tau);
  return {e, 0.0, 0.0, 1.0 / e};
}
// SO(2) matrix of angle x; the circle rotation it induces is by 2x.
inline Mat2 so2_mat(double x) {
  const double c = std::cos(x), s = std::sin(x);
  return {c, s, -s, c};
}

// T(p): translation; S(s): special conformal (inversion-conjugated
// translation); D(tau): dilation by e^tau; R(t): circle rotation by t.
inline MoebiusElement generator(GenKind kind, double value) {
  switch (kind) {
    case GenKind::T: return MoebiusElement::from_matrix(translation_mat(value));
    case GenKind::S: return MoebiusElement::from_matrix(special_conformal_mat(value));
    case GenKind::D: return MoebiusElement::from_matrix(dilation_mat(value));
    case GenKind::R: return MoebiusElement::from_matrix(so2_mat(0.5 * value));
  }
  throw ValidationError("unknown generator kind");
}

// Fractional-linear action transported to angles by x = tan(theta/2).
inline double act_on_circle(const MoebiusElement& g, double theta) {
  const double sh = std::sin(0.5 * theta), ch = std::cos(0.5 * theta);
  const double n = g.a() * sh + g.b() * ch;
  const double d = g.c() * sh + g.d() * ch;
  return wrap_angle(2.0 * std::atan2(n, d));
}

// d(act)/d(theta) = 1 / (n^2 + d^2) for unit determinant
inline double act_derivative(const MoebiusElement& g, double theta) {
  const double sh = std::sin(0.5 * theta), ch = std::cos(0.5 * theta);
  const double n = g.a() * sh + g.b() * ch;
  const double d = g.c() * sh + g.d() * ch;
  return 1.0 / (n * n + d * d);
}

struct IwasawaCoords {
  double p = 0.0;    // translation
  double tau = 0.0;  // dilation
  double t = 0.0;    // circle rotation, canonicalized to [0, 2pi)
};

// g = T(p) D(tau) R(t): the rotation angle comes from the bottom row, the
// dilation from its norm, the translation from the remaining entry.
inline IwasawaCoords iwasawa(const MoebiusElement& g) {
  IwasawaCoords ic;
  const double r = std::hypot(g.c(), g.d());
  ic.tau = -2.0 * std::log(r);
  ic.t = wrap_angle(2.0 * std::atan2(-g.c(), g.d()));
  ic.p = (g.a() * g.c() + g.b() * g.d()) / (r * r);
  return ic;
}

inline MoebiusElement iwasawa_reconstruct(const IwasawaCoords& ic) {
  return generator(GenKind::T, ic.p) * generator(GenKind::D, ic.tau) *
         generator(GenKind::R, ic.t);
}

struct TSFactor {
  enum class Kind { Translation, SpecialConformal };
  Kind kind = Kind::Translation;
  double param = 0.0;
};

inline MoebiusElement ts_product(const std::vector<TSFactor>& word) {
  MoebiusElement g;
  for (const TSFactor& f : word)
    g = g * generator(f.kind == TSFactor::Kind::Translation ? GenKind::T : GenKind::S,
                      f.param);
  return g;
}

// Exact four-factor S,T word for a dilation:
// S(-(e^{tau/2}-1)e^{-tau/2}) T(1) S(e^{tau/2}-1) T(-e^{-tau/2}) = D(tau).
inline std::vector<TSFactor> dilation_word(double tau) {
  const double e = std::exp(0.5 * tau);
  using K = TSFactor::Kind;
  return {{K::SpecialConformal, -(e - 1.0) / e},
          {K::Translation, 1.0},
          {K::SpecialConformal, e - 1.0},
          {K::Translation, -1.0 / e}};
}

// Exact three-factor word for a rotation: S(c) T(sin(a/2)) S(c) = R(a) with
// c = (cos(a/2)-1)/sin(a/2) = -tan(a/4).  The quotient form is used away
// from the small-sine region, the tangent form when the angle is near a
// multiple of 4pi, and one halving step otherwise (near 2pi mod 4pi, where
// c diverges); the halved angle always lands in the direct regime.
inline std::vector<TSFactor> rotation_word(double alpha) {
  if (alpha == 0.0) return {};
  const double s = std::sin(0.5 * alpha), c = std::cos(0.5 * alpha);
  using K = TSFactor::Kind;
  if (std::fabs(s) >= 0.1) {
    const double cc = (c - 1.0) / s;
    return {{K::SpecialConformal, cc}, {K::Translation, s}, {K::SpecialConformal, cc}};
  }
  if (c > 0.0) {
    const double cc = -std::tan(0.25 * alpha);
    return {{K::SpecialConformal, cc}, {K::Translation, s}, {K::SpecialConformal, cc}};
  }
  std::vector<TSFactor> half = rotation_word(0.5 * alpha);
  std::vector<TSFactor> out = half;
  out.insert(out.end(), half.begin(), half.end());
  return out;
}

// Iwasawa-driven S,T word: [T(p)] ++ dilation_word(tau) ++ rotation_word(t)
// with exactly-zero coordinates collapsed away, so the identity maps to the
// empty word.  At most four T and four S factors when no rotation split
// occurs.
inline std::vector<TSFactor> ts_word(const MoebiusElement& g) {
  const IwasawaCoords ic = iwasawa(g);
  std::vector<TSFactor> w;
  if (ic.p != 0.0) w.push_back({TSFactor::Kind::Translation, ic.p});
  if (ic.tau != 0.0) {
    const std::vector<TSFactor> d = dilation_word(ic.tau);
    w.insert(w.end(), d.begin(), d.end());
  }
  const std::vector<TSFactor> r = rotation_word(ic.t);
  w.insert(w.end(), r.begin(), r.end());
  return w;
}

// The circle action as a CircleDiffeo.  The displacement is sampled through
// the half-angle form and unwrapped along the grid (branch jumps of the
// doubled argument are 4pi), then fit spectrally.
inline CircleDiffeo to_diffeo(const MoebiusElement& g,
                              const Config& cfg = default_config()) {
  if (g.is_identity()) return CircleDiffeo::identity();
  const IwasawaCoords ic = iwasawa(g);
  if (std::fabs(ic.tau) > 12.0)
    throw ModeOverflow("dilation magnitude " + std::to_string(ic.tau) +
                       " is spectrally out of reach");
  if (ic.p == 0.0 && ic.tau == 0.0) return CircleDiffeo::rotation(ic.t);

  auto sampler = [&](std::size_t m) {
    std::vector<double> u(m);
    double prev = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      const double x = kTwoPi * double(j) / double(m);
      const double sh = std::sin(0.5 * x), ch = std::cos(0.5 * x);
      const double n = g.a() * sh + g.b() * ch;
      const double d = g.c() * sh + g.d() * ch;
      // 2*arg((d + i n) e^{-i x/2}) = act(g, x) - x up to multiples of 4pi
      double v = 2.0 * std::atan2(n * ch - d * sh, d * ch + n * sh);
      if (j > 0) v += 2.0 * kTwoPi * std::round((prev - v) / (2.0 * kTwoPi));
      u[j] = prev = v;
    }
    return u;
  };
  // sup of the action derivative is at most the squared Frobenius norm;
  // resolving it keeps the unwrap step unambiguous
  const double stiff = mat_frobenius2(g.matrix());
  const std::size_t m0 = detail::next_pow2(
      std::max<std::size_t>(1024, std::size_t(8.0 * (1.0 + stiff))));
  return CircleDiffeo::from_displacement(
      detail::fit_adaptive_grid(sampler, m0, cfg, "moebius action"), cfg);
}

// Element of the universal cover: a base element plus the pinned value of
// its action's lift at angle 0.  Deck transformations shift the pin by 2pi.
struct CoverElement {
  MoebiusElement base;
  double lift_at_zero = 0.0;
};

inline CoverElement cover_make(const MoebiusElement& g, long branch) {
  return {g, wrap_signed(act_on_circle(g, 0.0)) + kTwoPi * double(branch)};
}

// Lift of a's action evaluated at y, pinned by a.lift_at_zero.  Equivariance
// reduces this to one wrapped increment over [0, 2pi): the lift rises by
// less than a full turn across that window, so no path tracking is needed.
inline double cover_lift(const CoverElement& a, double y) {
  const double k = std::floor(y / kTwoPi);
  const double y0 = y - kTwoPi * k;
  double w = wrap_angle(act_on_circle(a.base, y0) - act_on_circle(a.base, 0.0));
  // a provably tiny increment that wrapped to ~2pi is a branch-cut rounding
  // artifact of the subtraction above
  if (w > kPi && y0 * (mat_frobenius2(a.base.matrix()) + 1.0) < 1e-3) w = 0.0;
  return a.lift_at_zero + w + kTwoPi * k;
}

inline CoverElement cover_compose(const CoverElement& x, const CoverElement& y) {
  return {x.base * y.base, cover_lift(x, y.lift_at_zero)};
}

inline const MoebiusElement& cover_project(const CoverElement& a) { return a.base; }

}  // namespace locdiff
