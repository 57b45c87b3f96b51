#pragma once

#include <cmath>
#include <complex>
#include <cstddef>

#include "locdiff/angle.hpp"
#include "locdiff/circle_diffeo.hpp"
#include "locdiff/config.hpp"
#include "locdiff/moebius.hpp"

namespace locdiff {

// Section of SL(2,R) -> PSL(2,R): the sign of the representative is fixed by
// putting the SO(2) Iwasawa angle in [0, pi).  The induced +-1 cocycle is the
// finite-dimensional model of a section-induced phase cocycle.
class SignSection {
public:
  Mat2 representative(const MoebiusElement& g) const {
    const IwasawaCoords ic = iwasawa(g);
    return mat_mul(mat_mul(translation_mat(ic.p), dilation_mat(ic.tau)),
                   so2_mat(0.5 * ic.t));
  }
};

// The +-1 with s(g) s(h) = sigma * s(gh) at the matrix level.
inline int sign_cocycle(const SignSection& s, const MoebiusElement& g,
                        const MoebiusElement& h) {
  const Mat2 prod = mat_mul(s.representative(g), s.representative(h));
  const Mat2 rep = s.representative(g * h);
  const double dplus = mat_max_abs_diff(prod, rep);
  const double dminus = mat_max_abs_diff(prod, mat_neg(rep));
  return dplus <= dminus ? 1 : -1;
}

// |w(g,h) w(gh,k) - w(g,hk) w(h,k)|: zero exactly when w is a 2-cocycle.
template <class Omega>
double cocycle_identity_defect(Omega&& w, const MoebiusElement& g,
                               const MoebiusElement& h, const MoebiusElement& k) {
  const std::complex<double> lhs =
      std::complex<double>(w(g, h)) * std::complex<double>(w(g * h, k));
  const std::complex<double> rhs =
      std::complex<double>(w(g, h * k)) * std::complex<double>(w(h, k));
  return std::abs(lhs - rhs);
}

// The unique SL(2,R) matrix over a cover element: continuous in the lift, a
// homomorphism from the cover, and sign-flipping under the 2pi deck shift.
// Closed form: the Iwasawa rotation angle is promoted to the real line by
// comparing the element's pinned lift with the lift the branch-0 Iwasawa
// factors produce; each extra deck turn adds pi to the SO(2) angle.
inline Mat2 cover_trivialize(const CoverElement& a) {
  const IwasawaCoords ic = iwasawa(a.base);
  const CoverElement rot = {generator(GenKind::R, ic.t), ic.t};
  const CoverElement ref = cover_compose(
      cover_make(generator(GenKind::T, ic.p), 0),
      cover_compose(cover_make(generator(GenKind::D, ic.tau), 0), rot));
  const double turns = std::round((a.lift_at_zero - ref.lift_at_zero) / kTwoPi);
  return mat_mul(mat_mul(translation_mat(ic.p), dilation_mat(ic.tau)),
                 so2_mat(0.5 * (ic.t + kTwoPi * turns)));
}

// Bott 2-cocycle int_0^{2pi} log(phi~'(psi~(x))) psi~''(x)/psi~'(x) dx by
// the periodic trapezoid rule; spectral accuracy for trig-polynomial data.
inline double bott_cocycle(const CircleDiffeo& phi, const CircleDiffeo& psi,
                           const Config& cfg = default_config()) {
  const std::size_t m = cfg.bott_points;
  const TrigPoly& du = psi.displacement_derivative();
  const TrigPoly ddu = du.derivative();
  double acc = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    const double x = kTwoPi * double(j) / double(m);
    acc += std::log(phi.lift_derivative(psi.lift(x))) * ddu(x) / (1.0 + du(x));
  }
  return acc * kTwoPi / double(m);
}

}  // namespace locdiff
