#pragma once

#include <cstddef>

namespace locdiff {

// Central knobs for the spectral machinery.  All operations accept a Config
// and default to default_config(); the CLI maps its flags onto one of these.
struct Config {
  int default_modes = 128;       // starting resolution for adaptive fits
  int mode_cap = 4096;           // hard ceiling on retained modes
  double fit_tail_tol = 1e-12;   // upper-half-spectrum amplitude bound
  double chop_tol = 1e-13;       // trailing coefficients below this are dropped
  double min_derivative_tol = 1e-10;  // 1 + u' must exceed this everywhere
  double newton_tol = 1e-12;
  int newton_max_iter = 50;
  double invert_check_tol = 1e-9;
  double margin_fraction = 0.1;  // partition shrink fraction per arc end
  double safety = 0.9;           // step-bound safety factor
  int slice_cap = 1 << 14;       // max slice count before giving up
  std::size_t word_factor_cap = 100000;
  int bott_points = 2048;        // fixed quadrature grid
  int scan_points = 2048;        // base grid for sup/inf scans
};

inline const Config& default_config() {
  static const Config cfg{};
  return cfg;
}

}  // namespace locdiff
