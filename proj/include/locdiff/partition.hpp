#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "locdiff/angle.hpp"
#include "locdiff/config.hpp"
#include "locdiff/errors.hpp"
#include "locdiff/extremum.hpp"
#include "locdiff/interval.hpp"

namespace locdiff {

// Smooth partition of unity subordinate to a covering: one bump
// exp(-1/(1-s^2)) per interval, rescaled to the interval shrunk by
// margin_fraction of its length at each end, normalized by the pointwise sum.
// Each weight vanishes identically (exact zeros) outside its shrunken arc, so
// supp lambda_i sits inside I_i with margin margin_fraction * |I_i|.
class PartitionOfUnity {
public:
  static PartitionOfUnity build(const Covering& cover, double margin_fraction,
                                const Config& cfg = default_config()) {
    if (!(margin_fraction > 0.0 && margin_fraction < 0.5))
      throw ValidationError("margin_fraction must lie in (0, 0.5)");
    PartitionOfUnity p(cover);
    for (std::size_t i = 0; i < cover.size(); ++i) {
      const IntervalS1& iv = cover[i];
      const double len = iv.length();
      Arc a;
      a.center = iv.center();
      a.half = 0.5 * len * (1.0 - 2.0 * margin_fraction);
      p.arcs_.push_back(a);
      p.margins_.push_back(margin_fraction * len);
    }

    // The shrunken arcs must still cover: the normalizing sum may not vanish.
    const std::size_t scan = std::max<std::size_t>(cfg.scan_points, 8192);
    for (std::size_t j = 0; j < scan; ++j)
      p.bump_sum(kTwoPi * double(j) / double(scan));

    p.deriv_sum_sup_ =
        detail::periodic_sup(
            [&](double theta) { return p.abs_derivative_sum(theta); }, scan)
            .value;
    return p;
  }

  std::size_t size() const { return arcs_.size(); }
  const Covering& covering() const { return cover_; }
  const IntervalS1& interval(std::size_t i) const { return cover_[i]; }

  double margin(std::size_t i) const { return margins_[i]; }
  double min_margin() const {
    double m = margins_[0];
    for (double v : margins_) m = std::min(m, v);
    return m;
  }

  // sup over the circle of sum_i |lambda_i'|
  double derivative_sum_sup() const { return deriv_sum_sup_; }

  double weight(std::size_t i, double theta) const {
    return bump(i, theta).first / bump_sum(theta);
  }

  double weight_derivative(std::size_t i, double theta) const {
    double s = 0.0, ds = 0.0;
    sums(theta, s, ds);
    const auto [b, db] = bump(i, theta);
    return (db * s - b * ds) / (s * s);
  }

  // sum of the first `count` weights; the interpolant displacement multiplier
  double partial_weight(std::size_t count, double theta) const {
    double b = 0.0;
    for (std::size_t i = 0; i < count && i < arcs_.size(); ++i)
      b += bump(i, theta).first;
    return b / bump_sum(theta);
  }

private:
  explicit PartitionOfUnity(Covering cover) : cover_(std::move(cover)) {}

  struct Arc {
    double center, half;
  };

  // Raw bump and derivative.  The 1-s^2 <= 1e-6 cutoff keeps the derivative
  // factor -2s/(1-s^2)^2 from producing 0 * inf at the arc edge; the dropped
  // value exp(-1e6) is far below underflow.
  std::pair<double, double> bump(std::size_t i, double theta) const {
    const Arc& a = arcs_[i];
    const double s = wrap_signed(theta - a.center) / a.half;
    const double q = 1.0 - s * s;
    if (q <= 1e-6) return {0.0, 0.0};
    const double v = std::exp(-1.0 / q);
    return {v, v * (-2.0 * s / (q * q)) / a.half};
  }

  void sums(double theta, double& s, double& ds) const {
    s = 0.0;
    ds = 0.0;
    for (std::size_t i = 0; i < arcs_.size(); ++i) {
      const auto [b, db] = bump(i, theta);
      s += b;
      ds += db;
    }
    check_sum(s, theta);
  }

  double bump_sum(double theta) const {
    double s = 0.0;
    for (std::size_t i = 0; i < arcs_.size(); ++i) s += bump(i, theta).first;
    check_sum(s, theta);
    return s;
  }

  static void check_sum(double s, double theta) {
    // below ~1e-150 the squared sum in the quotient rule underflows
    if (s <= 1e-150)
      throw CoverageGap("shrunken arcs leave the normalizing sum zero near " +
                        std::to_string(theta));
  }

  double abs_derivative_sum(double theta) const {
    double s = 0.0, ds = 0.0;
    sums(theta, s, ds);
    double acc = 0.0;
    for (std::size_t i = 0; i < arcs_.size(); ++i) {
      const auto [b, db] = bump(i, theta);
      acc += std::fabs((db * s - b * ds) / (s * s));
    }
    return acc;
  }

  Covering cover_;
  std::vector<Arc> arcs_;
  std::vector<double> margins_;
  double deriv_sum_sup_ = 0.0;
};

inline PartitionOfUnity build_partition(const Covering& cover,
                                        double margin_fraction,
                                        const Config& cfg = default_config()) {
  return PartitionOfUnity::build(cover, margin_fraction, cfg);
}

// Largest admissible displacement bound for localization: the reciprocal of
// the weight-derivative sup and the smallest support margin, scaled by the
// safety factor.  safety = 1 is the supremum of the admissible range and is
// what the localization entry checks use.
inline double epsilon_max(const PartitionOfUnity& p, double safety) {
  if (!(safety > 0.0 && safety <= 1.0))
    throw ValidationError("safety factor must lie in (0, 1]");
  const double s = p.derivative_sum_sup();
  const double cap = s > 0.0 ? 1.0 / s : p.min_margin();
  return safety * std::min(cap, p.min_margin());
}

}  // namespace locdiff
